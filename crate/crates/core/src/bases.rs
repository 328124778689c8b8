//! Measurement bases and the named gate library.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::qcore::{c, StateVector, UnitaryGate, C64};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Index of a Bell state `Φ₀..Φ₃`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BellIndex(u8);

impl BellIndex {
    pub const ALL: [BellIndex; 4] = [BellIndex(0), BellIndex(1), BellIndex(2), BellIndex(3)];

    pub fn new(value: u8) -> Result<Self> {
        if value > 3 {
            return Err(Error::InvalidInput(format!("Bell index {value} not in 0..=3")));
        }
        Ok(Self(value))
    }

    pub fn value(self) -> u8 {
        self.0
    }

    /// Relative-phase bit: set for `Φ₁`, `Φ₃`.
    pub fn phase_bit(self) -> u8 {
        self.0 & 1
    }

    /// Parity bit: set for `Φ₂`, `Φ₃` (odd parity).
    pub fn parity_bit(self) -> u8 {
        self.0 >> 1
    }

    pub fn from_bits(phase: u8, parity: u8) -> Self {
        Self((phase & 1) | ((parity & 1) << 1))
    }
}

impl fmt::Display for BellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Φ{}", self.0)
    }
}

/// `Φ₀ = (|00⟩+|11⟩)/√2`, `Φ₁ = (|00⟩−|11⟩)/√2`,
/// `Φ₂ = (|01⟩+|10⟩)/√2`, `Φ₃ = (|01⟩−|10⟩)/√2`.
pub fn bell_state(i: BellIndex) -> StateVector {
    let s = FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let amps = match i.0 {
        0 => vec![c(s, 0.0), z, z, c(s, 0.0)],
        1 => vec![c(s, 0.0), z, z, c(-s, 0.0)],
        2 => vec![z, c(s, 0.0), c(s, 0.0), z],
        _ => vec![z, c(s, 0.0), c(-s, 0.0), z],
    };
    StateVector::new(2, amps).expect("two-qubit Bell state")
}

pub fn bell_basis() -> [StateVector; 4] {
    BellIndex::ALL.map(bell_state)
}

/// Bob's measurement basis `{a|0⟩+b|1⟩, b|0⟩−a|1⟩}` with real `a, b ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiBasis {
    a: f64,
    b: f64,
}

impl XiBasis {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        for (name, v) in [("a", a), ("b", b)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::OutOfRange { name, value: v });
            }
        }
        let n2 = a * a + b * b;
        if (n2 - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm_sqr: n2 });
        }
        Ok(Self { a, b })
    }

    /// Basis for the target `a|0⟩+b|1⟩` given `b²`.
    pub fn from_b2(b2: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&b2) {
            return Err(Error::OutOfRange { name: "b2", value: b2 });
        }
        Self::new((1.0 - b2).sqrt(), b2.sqrt())
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn states(&self) -> (StateVector, StateVector) {
        xi_states(self)
    }
}

pub fn xi_states(basis: &XiBasis) -> (StateVector, StateVector) {
    let (a, b) = (basis.a, basis.b);
    (StateVector::qubit(c(a, 0.0), c(b, 0.0)), StateVector::qubit(c(b, 0.0), c(-a, 0.0)))
}

/// `(|+⟩, |−⟩)`.
pub fn x_states() -> (StateVector, StateVector) {
    let s = FRAC_1_SQRT_2;
    (StateVector::qubit(c(s, 0.0), c(s, 0.0)), StateVector::qubit(c(s, 0.0), c(-s, 0.0)))
}

/// Named gates. All matrices are exact in `{0, ±1, ±1/√2, ±i}`.
pub mod gates {
    use super::*;

    fn g(arity: usize, m: Vec<C64>) -> UnitaryGate {
        UnitaryGate::new(arity, m).expect("library gate is unitary")
    }

    fn real(arity: usize, m: &[f64]) -> UnitaryGate {
        g(arity, m.iter().map(|&v| c(v, 0.0)).collect())
    }

    pub fn identity() -> UnitaryGate {
        real(1, &[1.0, 0.0, 0.0, 1.0])
    }

    pub fn h() -> UnitaryGate {
        let s = FRAC_1_SQRT_2;
        real(1, &[s, s, s, -s])
    }

    pub fn x() -> UnitaryGate {
        real(1, &[0.0, 1.0, 1.0, 0.0])
    }

    pub fn y() -> UnitaryGate {
        g(1, vec![c(0.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(0.0, 0.0)])
    }

    pub fn z() -> UnitaryGate {
        real(1, &[1.0, 0.0, 0.0, -1.0])
    }

    /// Control is the first operand.
    pub fn cnot() -> UnitaryGate {
        real(
            2,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 0.0, 1.0, //
                0.0, 0.0, 1.0, 0.0,
            ],
        )
    }

    pub fn cz() -> UnitaryGate {
        real(
            2,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                0.0, 0.0, 1.0, 0.0, //
                0.0, 0.0, 0.0, -1.0,
            ],
        )
    }

    /// CCNOT with controls on the first two operands.
    pub fn toffoli() -> UnitaryGate {
        let mut m = vec![0.0; 64];
        for i in 0..6 {
            m[i * 8 + i] = 1.0;
        }
        m[6 * 8 + 7] = 1.0;
        m[7 * 8 + 6] = 1.0;
        real(3, &m)
    }

    /// The `(1/√2)[[1,1],[1,−1]]` rotation used for the X-basis readout
    /// and for the symmetric ξ basis.
    pub fn bt() -> UnitaryGate {
        h()
    }

    /// Rotation taking `|ξ₀⟩ ↦ |0⟩` and `|ξ₁⟩ ↦ |1⟩` (rows are `⟨ξ₀|`, `⟨ξ₁|`).
    pub fn xi_readout(basis: &XiBasis) -> UnitaryGate {
        real(1, &[basis.a(), basis.b(), basis.b(), -basis.a()])
    }
}

/// Unitary whose first column is `(x, y)`, completed with `(−y*, x*)`.
pub fn state_prep_gate(x: C64, y: C64) -> Result<UnitaryGate> {
    let n2 = x.norm_sqr() + y.norm_sqr();
    if (n2 - 1.0).abs() > 1e-12 {
        return Err(Error::NotNormalized { norm_sqr: n2 });
    }
    UnitaryGate::new(1, vec![x, -y.conj(), y, x.conj()])
}

/// Single-qubit Pauli factor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Z,
}

impl Pauli {
    fn exponents(self) -> (u8, u8) {
        match self {
            Pauli::I => (0, 0),
            Pauli::X => (1, 0),
            Pauli::Z => (0, 1),
        }
    }
}

/// Signed product of `I`, `σ_x`, `σ_z` factors.
///
/// Factors are stored in the order written: `σ_zσ_x` is `[Z, X]`, whose
/// matrix is `Z·X`, i.e. `σ_x` acts first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString {
    negative: bool,
    factors: Vec<Pauli>,
}

impl PauliString {
    pub fn new(factors: Vec<Pauli>) -> Self {
        Self { negative: false, factors }
    }

    pub fn identity() -> Self {
        Self::new(vec![Pauli::I])
    }

    pub fn negated(&self) -> Self {
        Self { negative: !self.negative, factors: self.factors.clone() }
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn factors(&self) -> &[Pauli] {
        &self.factors
    }

    /// Normal form `sign · X^x · Z^z`, returned as `(negative, x, z)`.
    pub fn normal_form(&self) -> (bool, u8, u8) {
        let (mut neg, mut x, mut z) = (self.negative, 0u8, 0u8);
        for f in &self.factors {
            let (fx, fz) = f.exponents();
            // Z^z X^fx = (−1)^{z·fx} X^fx Z^z
            if z & fx == 1 {
                neg = !neg;
            }
            x ^= fx;
            z ^= fz;
        }
        (neg, x, z)
    }

    /// Exact 2×2 matrix, the ordered product of the factor matrices.
    pub fn matrix(&self) -> [C64; 4] {
        let one = c(1.0, 0.0);
        let zero = c(0.0, 0.0);
        let mut m = if self.negative { [-one, zero, zero, -one] } else { [one, zero, zero, one] };
        for f in &self.factors {
            let p = match f {
                Pauli::I => [one, zero, zero, one],
                Pauli::X => [zero, one, one, zero],
                Pauli::Z => [one, zero, zero, -one],
            };
            m = [
                m[0] * p[0] + m[1] * p[2],
                m[0] * p[1] + m[1] * p[3],
                m[2] * p[0] + m[3] * p[2],
                m[2] * p[1] + m[3] * p[3],
            ];
        }
        m
    }

    pub fn gate(&self) -> UnitaryGate {
        UnitaryGate::new(1, self.matrix().to_vec()).expect("Pauli strings are unitary")
    }

    /// Equal as operators up to a global phase.
    pub fn equivalent(&self, other: &Self) -> bool {
        let (_, x1, z1) = self.normal_form();
        let (_, x2, z2) = other.normal_form();
        x1 == x2 && z1 == z2
    }

    /// The eight strings that appear as corrections:
    /// `I, σ_x, σ_z, σ_xσ_z, σ_zσ_x, σ_zσ_xσ_z, σ_xσ_zσ_x, σ_xσ_zσ_xσ_z`.
    pub fn closure() -> Vec<PauliString> {
        ["I", "X", "Z", "XZ", "ZX", "ZXZ", "XZX", "XZXZ"]
            .iter()
            .map(|s| s.parse().expect("static Pauli string"))
            .collect()
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Compact notation: `I`, `X`, `ZXZ`, optional leading `-`.
    fn from_str(s: &str) -> Result<Self> {
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        if body.is_empty() {
            return Err(Error::InvalidInput("empty Pauli string".into()));
        }
        let factors = body
            .chars()
            .map(|ch| match ch {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Z' => Ok(Pauli::Z),
                _ => Err(Error::InvalidInput(format!("bad Pauli factor `{ch}` in `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { negative, factors })
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        for p in &self.factors {
            let s = match p {
                Pauli::I => "I",
                Pauli::X => "σx",
                Pauli::Z => "σz",
            };
            write!(f, "{s}")?;
        }
        Ok(())
    }
}
