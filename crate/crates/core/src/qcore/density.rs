use super::kernel::{check_targets, conjugate, Subspace};
use super::state::{check_basis, projector};
use super::{KrausChannel, StateVector, UnitaryGate, C64, ZERO_PROBABILITY};
use crate::error::{Error, Result};

const VALIDATION_TOL: f64 = 1e-10;

/// Mixed state of `n` qubits, row-major `2^n × 2^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    elems: Vec<C64>,
}

impl DensityMatrix {
    /// Checks shape, Hermiticity and unit trace (to 1e-10).
    pub fn new(n_qubits: usize, elems: Vec<C64>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if elems.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: elems.len() });
        }
        let rho = Self { n_qubits, elems };
        let herm = rho.hermiticity_deviation();
        let tr = rho.trace();
        if herm > VALIDATION_TOL || (tr - 1.0).abs() > VALIDATION_TOL {
            return Err(Error::InvalidInput(format!(
                "not a density matrix (Hermiticity deviation {herm:e}, trace {tr})"
            )));
        }
        Ok(rho)
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let d = psi.dim();
        let a = psi.amps();
        let mut elems = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for j in 0..d {
                elems[i * d + j] = a[i] * a[j].conj();
            }
        }
        Self { n_qubits: psi.n_qubits(), elems }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1usize << n_qubits;
        let mut elems = vec![C64::new(0.0, 0.0); d * d];
        for i in 0..d {
            elems[i * d + i] = C64::new(1.0 / d as f64, 0.0);
        }
        Self { n_qubits, elems }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn elems(&self) -> &[C64] {
        &self.elems
    }

    pub fn at(&self, row: usize, col: usize) -> C64 {
        self.elems[row * self.dim() + col]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim()).map(|i| self.at(i, i).re).sum()
    }

    pub fn purity(&self) -> f64 {
        // Tr ρ² = Σ |ρ_ij|² for Hermitian ρ
        self.elems.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn hermiticity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.at(i, j) - self.at(j, i).conj()).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.elems.iter().zip(&other.elems).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// `U ρ U†` with `U` acting on `targets`.
    pub fn apply_unitary(&self, gate: &UnitaryGate, targets: &[usize]) -> Result<Self> {
        if targets.len() != gate.arity() {
            return Err(Error::ArityMismatch { expected: gate.arity(), found: targets.len() });
        }
        self.conjugated(gate.matrix(), targets)
    }

    /// `Σ_i K_i ρ K_i†` with the single-qubit channel embedded on `target`.
    pub fn apply_kraus(&self, channel: &KrausChannel, target: usize) -> Result<Self> {
        check_targets(&[target], self.n_qubits)?;
        let d = self.dim();
        let sub = Subspace::new(&[target], self.n_qubits);
        let mut acc = vec![C64::new(0.0, 0.0); d * d];
        for k in channel.ops() {
            let mut term = self.elems.clone();
            conjugate(&mut term, d, k, &sub);
            for (a, t) in acc.iter_mut().zip(term) {
                *a += t;
            }
        }
        Ok(Self { n_qubits: self.n_qubits, elems: acc })
    }

    /// Projects `targets` onto `basis[which]`, returning the probability
    /// `Tr(Pρ)` and the renormalized post-measurement state.
    pub fn project(
        &self,
        targets: &[usize],
        basis: &[StateVector],
        which: usize,
    ) -> Result<(f64, Self)> {
        let chosen = check_basis(targets.len(), basis, which)?;
        let post = self.conjugated(&projector(chosen), targets)?;
        let p = post.trace();
        if p < ZERO_PROBABILITY {
            return Err(Error::ZeroProbability {
                stage: format!("projection of qubits {targets:?} onto basis state {which}"),
                probability: p,
            });
        }
        Ok((p, post.scaled(1.0 / p)))
    }

    /// `⟨b|ρ|b⟩` with `b` living on `targets`, leaving the other qubits
    /// (ascending position order). Returns the weight `Tr⟨b|ρ|b⟩` and the
    /// renormalized remainder.
    ///
    /// For a unit `b` this equals projecting onto `b` and tracing the
    /// targets out, without touching the full matrix more than once.
    pub fn contract(&self, targets: &[usize], bra: &StateVector) -> Result<(f64, Self)> {
        check_targets(targets, self.n_qubits)?;
        if bra.n_qubits() != targets.len() {
            return Err(Error::DimensionMismatch { expected: targets.len(), found: bra.n_qubits() });
        }
        if targets.len() == self.n_qubits {
            return Err(Error::EmptyKeep);
        }
        let d = self.dim();
        let sub = Subspace::new(targets, self.n_qubits);
        let b = bra.amps();
        let live: Vec<(usize, C64)> = sub
            .offsets
            .iter()
            .zip(b)
            .filter(|(_, a)| a.norm_sqr() > 0.0)
            .map(|(&o, &a)| (o, a))
            .collect();
        let r = sub.bases.len();
        let mut out = vec![C64::new(0.0, 0.0); r * r];
        for (i, &bi) in sub.bases.iter().enumerate() {
            for &(oi, ai) in &live {
                let row = &self.elems[(bi + oi) * d..(bi + oi + 1) * d];
                let wi = ai.conj();
                for (j, &bj) in sub.bases.iter().enumerate() {
                    let mut s = C64::new(0.0, 0.0);
                    for &(oj, aj) in &live {
                        s += row[bj + oj] * aj;
                    }
                    out[i * r + j] += wi * s;
                }
            }
        }
        let p: f64 = (0..r).map(|i| out[i * r + i].re).sum();
        if p < ZERO_PROBABILITY {
            return Err(Error::ZeroProbability {
                stage: format!("contraction of qubits {targets:?}"),
                probability: p,
            });
        }
        let rest = Self { n_qubits: self.n_qubits - targets.len(), elems: out };
        Ok((p, rest.scaled(1.0 / p)))
    }

    /// Reduced state on `keep`, in the order given.
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        check_targets(keep, self.n_qubits)?;
        let d = self.dim();
        let sub = Subspace::new(keep, self.n_qubits);
        let k = sub.offsets.len();
        let mut out = vec![C64::new(0.0, 0.0); k * k];
        for &base in &sub.bases {
            for (i, &oi) in sub.offsets.iter().enumerate() {
                for (j, &oj) in sub.offsets.iter().enumerate() {
                    out[i * k + j] += self.elems[(base + oi) * d + base + oj];
                }
            }
        }
        Ok(Self { n_qubits: keep.len(), elems: out })
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn fidelity(&self, pure: &StateVector) -> Result<f64> {
        if pure.dim() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: pure.dim() });
        }
        let d = self.dim();
        let a = pure.amps();
        let mut f = C64::new(0.0, 0.0);
        for i in 0..d {
            if a[i].norm_sqr() == 0.0 {
                continue;
            }
            let row: C64 = (0..d).map(|j| self.elems[i * d + j] * a[j]).sum();
            f += a[i].conj() * row;
        }
        Ok(f.re)
    }

    /// Recovers `|ψ⟩` (up to global phase) from a rank-1 matrix.
    pub fn to_pure(&self) -> Result<StateVector> {
        let purity = self.purity();
        if (purity - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("state is mixed (purity {purity})")));
        }
        let d = self.dim();
        let col = (0..d)
            .max_by(|&a, &b| self.at(a, a).re.total_cmp(&self.at(b, b).re))
            .unwrap_or(0);
        let amps = (0..d).map(|i| self.at(i, col)).collect();
        StateVector::new(self.n_qubits, amps)?.normalized()
    }

    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            n_qubits: self.n_qubits + other.n_qubits,
            elems: super::kron(&self.elems, self.dim(), &other.elems, other.dim()),
        }
    }

    fn conjugated(&self, op: &[C64], targets: &[usize]) -> Result<Self> {
        check_targets(targets, self.n_qubits)?;
        let k = 1usize << targets.len();
        if op.len() != k * k {
            return Err(Error::DimensionMismatch { expected: k * k, found: op.len() });
        }
        let sub = Subspace::new(targets, self.n_qubits);
        let mut elems = self.elems.clone();
        conjugate(&mut elems, self.dim(), op, &sub);
        Ok(Self { n_qubits: self.n_qubits, elems })
    }

    fn scaled(mut self, factor: f64) -> Self {
        for z in &mut self.elems {
            *z *= factor;
        }
        self
    }
}
