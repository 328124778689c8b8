use super::kernel::{apply_local, check_targets, Subspace};
use super::{DensityMatrix, QubitOrdering, UnitaryGate, C64, ZERO_PROBABILITY};
use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;
const ORTHO_TOL: f64 = 1e-10;

/// Pure state of `n` qubits as `2^n` amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// Wraps raw amplitudes; they need not be normalized.
    pub fn new(n_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: amps.len() });
        }
        Ok(Self { n_qubits, amps })
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        Self::new(n, amps)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = C64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    /// Computational basis state from a bit string such as `"0101"`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let index = usize::from_str_radix(bits, 2)
            .map_err(|_| Error::InvalidInput(format!("bad bit string `{bits}`")))?;
        Ok(Self::basis(bits.len(), index))
    }

    /// Single-qubit `x|0⟩ + y|1⟩`.
    pub fn qubit(x: C64, y: C64) -> Self {
        Self { n_qubits: 1, amps: vec![x, y] }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> C64 {
        self.amps[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 < ZERO_PROBABILITY {
            return Err(Error::NotNormalized { norm_sqr: n2 });
        }
        Ok(self.scaled(C64::new(1.0 / n2.sqrt(), 0.0)))
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self { n_qubits: self.n_qubits, amps: self.amps.iter().map(|a| a * factor).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a + b).collect(),
        })
    }

    /// `self ⊗ other`; `self` occupies the leading positions.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            amps.extend(other.amps.iter().map(|b| a * b));
        }
        Self { n_qubits: self.n_qubits + other.n_qubits, amps }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_dim(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `|⟨self|other⟩|²`, i.e. equality up to global phase for unit vectors.
    pub fn fidelity(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn apply_unitary(&self, gate: &UnitaryGate, targets: &[usize]) -> Result<Self> {
        if targets.len() != gate.arity() {
            return Err(Error::ArityMismatch { expected: gate.arity(), found: targets.len() });
        }
        self.apply_matrix(gate.matrix(), targets)
    }

    /// Applies an arbitrary (not necessarily unitary) `2^k × 2^k` operator.
    pub fn apply_matrix(&self, op: &[C64], targets: &[usize]) -> Result<Self> {
        check_targets(targets, self.n_qubits)?;
        let d = 1usize << targets.len();
        if op.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: op.len() });
        }
        let sub = Subspace::new(targets, self.n_qubits);
        let mut amps = self.amps.clone();
        apply_local(&mut amps, op, &sub, 1, 0);
        Ok(Self { n_qubits: self.n_qubits, amps })
    }

    /// Projects `targets` onto `basis[which]`.
    ///
    /// `basis` must be an orthonormal family of states on `targets.len()`
    /// qubits. Returns the Born probability and the renormalized post-state
    /// on the full register.
    pub fn project(
        &self,
        targets: &[usize],
        basis: &[StateVector],
        which: usize,
    ) -> Result<(f64, Self)> {
        let chosen = check_basis(targets.len(), basis, which)?;
        let proj = projector(chosen);
        let unnorm = self.apply_matrix(&proj, targets)?;
        let p = unnorm.norm_sqr();
        if p < ZERO_PROBABILITY {
            return Err(Error::ZeroProbability {
                stage: format!("projection of qubits {targets:?} onto basis state {which}"),
                probability: p,
            });
        }
        Ok((p, unnorm.scaled(C64::new(1.0 / p.sqrt(), 0.0))))
    }

    /// Contracts `targets` against `bra` (a state on those qubits) and
    /// returns the unnormalized state of the remaining qubits, in
    /// ascending position order.
    pub fn contract(&self, targets: &[usize], bra: &StateVector) -> Result<Self> {
        check_targets(targets, self.n_qubits)?;
        if bra.n_qubits != targets.len() {
            return Err(Error::DimensionMismatch { expected: targets.len(), found: bra.n_qubits });
        }
        let sub = Subspace::new(targets, self.n_qubits);
        let amps = sub
            .bases
            .iter()
            .map(|&base| {
                sub.offsets.iter().zip(&bra.amps).map(|(&off, b)| b.conj() * self.amps[base + off]).sum()
            })
            .collect();
        Self::new(self.n_qubits - targets.len(), amps)
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    /// Reduced density matrix of `keep` (in the order given).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        if keep.is_empty() {
            return Err(Error::EmptyKeep);
        }
        check_targets(keep, self.n_qubits)?;
        let keep_sub = Subspace::new(keep, self.n_qubits);
        let d = keep_sub.offsets.len();
        let mut out = vec![C64::new(0.0, 0.0); d * d];
        // each base fixes one assignment of the traced-out qubits
        for &base in &keep_sub.bases {
            for (i, &oi) in keep_sub.offsets.iter().enumerate() {
                let ai = self.amps[base + oi];
                if ai == C64::new(0.0, 0.0) {
                    continue;
                }
                for (j, &oj) in keep_sub.offsets.iter().enumerate() {
                    out[i * d + j] += ai * self.amps[base + oj].conj();
                }
            }
        }
        DensityMatrix::new(keep.len(), out)
    }

    /// Reorders tensor factors: position `i` of the result holds qubit
    /// `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n_qubits;
        if perm.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: perm.len() });
        }
        check_targets(perm, n)?;
        let mut amps = vec![C64::new(0.0, 0.0); self.dim()];
        for (new_idx, slot) in amps.iter_mut().enumerate() {
            let mut old_idx = 0usize;
            for (i, &p) in perm.iter().enumerate() {
                let bit = (new_idx >> (n - 1 - i)) & 1;
                old_idx |= bit << (n - 1 - p);
            }
            *slot = self.amps[old_idx];
        }
        Ok(Self { n_qubits: n, amps })
    }

    /// Relabels from ordering `from` into ordering `to`.
    pub fn reorder(&self, from: &QubitOrdering, to: &QubitOrdering) -> Result<Self> {
        if from.len() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: from.len() });
        }
        self.permute(&from.permutation_to(to)?)
    }

    /// Indices with `|amp| > tol`, in ascending order.
    pub fn support(&self, tol: f64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.amps[i].norm() > tol).collect()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }
}

/// Validates an orthonormal family and returns `basis[which]`.
pub(crate) fn check_basis(k: usize, basis: &[StateVector], which: usize) -> Result<&StateVector> {
    let mut worst = 0.0_f64;
    for (i, a) in basis.iter().enumerate() {
        if a.n_qubits != k {
            return Err(Error::DimensionMismatch { expected: k, found: a.n_qubits });
        }
        for (j, b) in basis.iter().enumerate().skip(i) {
            let ip = a.inner(b)?;
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((ip - target).norm());
        }
    }
    if worst > ORTHO_TOL {
        return Err(Error::NonOrthonormalBasis(worst));
    }
    basis.get(which).ok_or_else(|| {
        Error::InvalidInput(format!("outcome {which} outside a basis of {} states", basis.len()))
    })
}

/// `|b⟩⟨b|` as a row-major matrix.
pub(crate) fn projector(b: &StateVector) -> Vec<C64> {
    let d = b.dim();
    let mut p = vec![C64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for j in 0..d {
            p[i * d + j] = b.amps[i] * b.amps[j].conj();
        }
    }
    p
}
