//! The five-step protocol: Mentor Bell measurements, Alice's Bell
//! measurement, Bob's ξ-basis measurement, the Controller's X-basis
//! measurement and the final Pauli corrections.

mod branch;
mod ghz;
mod table;

use std::fmt;

use rand::Rng;

use crate::bases::{BellIndex, XiBasis};
use crate::error::{Error, Result};
use crate::qcore::{StateVector, C64};

pub use branch::{
    enumerate_branches, enumerate_branches_with, run_branch, run_branch_with, run_without_controller,
    sample_run, BranchRecord, BranchResult, BranchSampler, FULL_LABELS,
};
pub use ghz::{compress_payload, expand_payload, run_generalized, GeneralizedResult};
pub use table::{
    alice_correction, bob_correction, standard_table, CorrectionEntry, CorrectionTable,
};

/// Teleportation payload `x|0⟩+y|1⟩` and remote-preparation target
/// `a|0⟩+b|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolInputs {
    pub x: C64,
    pub y: C64,
    pub xi: XiBasis,
}

impl ProtocolInputs {
    pub fn new(x: C64, y: C64, a: f64, b: f64) -> Result<Self> {
        let n2 = x.norm_sqr() + y.norm_sqr();
        if (n2 - 1.0).abs() > 1e-12 {
            return Err(Error::NotNormalized { norm_sqr: n2 });
        }
        Ok(Self { x, y, xi: XiBasis::new(a, b)? })
    }

    /// Real payload amplitudes from `|y|²` and `b²`, with an optional
    /// relative phase on `y`.
    pub fn from_weights(b2: f64, y2: f64, y_phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&y2) {
            return Err(Error::OutOfRange { name: "y2", value: y2 });
        }
        let xi = XiBasis::from_b2(b2)?;
        Ok(Self {
            x: C64::new((1.0 - y2).sqrt(), 0.0),
            y: C64::from_polar(y2.sqrt(), y_phase),
            xi,
        })
    }

    /// Uniformly spread magnitudes and phases; `a, b` real non-negative.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let theta = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
        let phase_x = rng.random::<f64>() * std::f64::consts::TAU;
        let phase_y = rng.random::<f64>() * std::f64::consts::TAU;
        let phi = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
        let (a, b) = (phi.cos(), phi.sin());
        Self {
            x: C64::from_polar(theta.cos(), phase_x),
            y: C64::from_polar(theta.sin(), phase_y),
            // cos²+sin² rounds to 1 within a few ulp
            xi: XiBasis::new(a, b).expect("unit circle point"),
        }
    }

    pub fn a(&self) -> f64 {
        self.xi.a()
    }

    pub fn b(&self) -> f64 {
        self.xi.b()
    }

    /// `|ψ₀⟩ = x|0⟩+y|1⟩`, teleported to Bob's `B1`.
    pub fn psi0(&self) -> StateVector {
        StateVector::qubit(self.x, self.y)
    }

    /// `|ψ₁⟩ = a|0⟩+b|1⟩`, prepared at Alice's `A2`.
    pub fn psi1(&self) -> StateVector {
        StateVector::qubit(C64::new(self.a(), 0.0), C64::new(self.b(), 0.0))
    }

    /// Joint target `|ψ₁⟩_{A2} ⊗ |ψ₀⟩_{B1}`.
    pub fn joint_target(&self) -> StateVector {
        self.psi1().tensor(&self.psi0())
    }
}

/// One outcome for each of the five measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BranchSelector {
    pub mentor_i: BellIndex,
    pub mentor_j: BellIndex,
    pub alice_k: BellIndex,
    /// 0 ↦ `ξ₀`, 1 ↦ `ξ₁`.
    pub bob_l: u8,
    /// 0 ↦ `|+⟩`, 1 ↦ `|−⟩`.
    pub controller_m: u8,
}

pub const BRANCH_COUNT: usize = 256;

impl BranchSelector {
    pub fn new(i: u8, j: u8, k: u8, l: u8, m: u8) -> Result<Self> {
        if l > 1 || m > 1 {
            return Err(Error::InvalidInput(format!("binary outcomes must be 0 or 1, got {l}, {m}")));
        }
        Ok(Self {
            mentor_i: BellIndex::new(i)?,
            mentor_j: BellIndex::new(j)?,
            alice_k: BellIndex::new(k)?,
            bob_l: l,
            controller_m: m,
        })
    }

    /// Position in the canonical `(i, j, k, l, m)` lexicographic order.
    pub fn index(&self) -> usize {
        let (i, j, k) = (self.mentor_i.value(), self.mentor_j.value(), self.alice_k.value());
        ((((i as usize * 4 + j as usize) * 4 + k as usize) * 2 + self.bob_l as usize) * 2)
            + self.controller_m as usize
    }

    pub fn from_index(idx: usize) -> Result<Self> {
        if idx >= BRANCH_COUNT {
            return Err(Error::InvalidInput(format!("selector index {idx} ≥ {BRANCH_COUNT}")));
        }
        Self::new(
            (idx >> 6) as u8 & 3,
            (idx >> 4) as u8 & 3,
            (idx >> 2) as u8 & 3,
            (idx >> 1) as u8 & 1,
            idx as u8 & 1,
        )
    }

    pub fn all() -> impl Iterator<Item = BranchSelector> {
        (0..BRANCH_COUNT).map(|i| Self::from_index(i).expect("index in range"))
    }
}

impl fmt::Display for BranchSelector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "mentor=({},{}) alice={} bob=ξ{} controller={}",
            self.mentor_i,
            self.mentor_j,
            self.alice_k,
            self.bob_l,
            if self.controller_m == 0 { '+' } else { '−' }
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selector_index_round_trip() {
        for (n, s) in BranchSelector::all().enumerate() {
            assert_eq!(s.index(), n);
        }
        assert!(BranchSelector::from_index(256).is_err());
        assert!(BranchSelector::new(0, 0, 0, 2, 0).is_err());
    }

    #[test]
    fn inputs_validate() {
        assert!(ProtocolInputs::new(C64::new(1.0, 0.0), C64::new(0.1, 0.0), 1.0, 0.0).is_err());
        assert!(ProtocolInputs::new(C64::new(0.6, 0.0), C64::new(0.0, 0.8), 0.6, 0.8).is_ok());
        let w = ProtocolInputs::from_weights(0.4, 0.3, 0.0).unwrap();
        assert!((w.b() * w.b() - 0.4).abs() < 1e-12);
        assert!((w.y.norm_sqr() - 0.3).abs() < 1e-12);
    }
}
