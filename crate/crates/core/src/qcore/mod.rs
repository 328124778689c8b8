//! Dense complex linear algebra for small multi-qubit registers.
//!
//! Index convention: qubit position 0 is the leftmost ket factor and the
//! most significant bit of a basis index (big-endian packing). A
//! `k`-qubit operator applied to `targets` reads its local index with
//! `targets[0]` as the most significant bit.

mod density;
mod gate;
mod kernel;

pub(crate) use kernel::check_targets;
mod ordering;
mod state;

pub use density::DensityMatrix;
pub use gate::{KrausChannel, UnitaryGate};
pub use ordering::QubitOrdering;
pub use state::StateVector;

pub use num_complex::Complex64 as C64;

/// Threshold below which a measurement branch is treated as impossible.
pub const ZERO_PROBABILITY: f64 = 1e-14;

pub(crate) const fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Row-major `dim × dim` product `a · b`.
pub(crate) fn matmul(a: &[C64], b: &[C64], dim: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let aik = a[i * dim + k];
            if aik == C64::new(0.0, 0.0) {
                continue;
            }
            for j in 0..dim {
                out[i * dim + j] += aik * b[k * dim + j];
            }
        }
    }
    out
}

pub(crate) fn adjoint(a: &[C64], dim: usize) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            out[j * dim + i] = a[i * dim + j].conj();
        }
    }
    out
}

/// Largest entry of `|a - I|`.
pub(crate) fn identity_deviation(a: &[C64], dim: usize) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..dim {
        for j in 0..dim {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a[i * dim + j] - target).norm());
        }
    }
    worst
}

/// Kronecker product of two row-major square matrices.
pub fn kron(a: &[C64], a_dim: usize, b: &[C64], b_dim: usize) -> Vec<C64> {
    let dim = a_dim * b_dim;
    let mut out = vec![C64::new(0.0, 0.0); dim * dim];
    for i in 0..a_dim {
        for j in 0..a_dim {
            let aij = a[i * a_dim + j];
            for k in 0..b_dim {
                for l in 0..b_dim {
                    out[(i * b_dim + k) * dim + j * b_dim + l] = aij * b[k * b_dim + l];
                }
            }
        }
    }
    out
}
