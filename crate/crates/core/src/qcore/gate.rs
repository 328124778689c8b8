use super::{adjoint, identity_deviation, matmul, C64};
use crate::error::{Error, Result};

const UNITARY_TOL: f64 = 1e-10;
const CPTP_TOL: f64 = 1e-12;

/// A unitary on 1 to 3 qubits, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryGate {
    arity: usize,
    matrix: Vec<C64>,
}

impl UnitaryGate {
    pub fn new(arity: usize, matrix: Vec<C64>) -> Result<Self> {
        if !(1..=3).contains(&arity) {
            return Err(Error::InvalidInput(format!("gate arity {arity} not in 1..=3")));
        }
        let dim = 1 << arity;
        if matrix.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: matrix.len() });
        }
        let gate = Self { arity, matrix };
        let dev = gate.unitarity_deviation();
        if dev > UNITARY_TOL {
            return Err(Error::NotUnitary(dev));
        }
        Ok(gate)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn dim(&self) -> usize {
        1 << self.arity
    }

    pub fn matrix(&self) -> &[C64] {
        &self.matrix
    }

    /// Entry `(row, col)`.
    pub fn at(&self, row: usize, col: usize) -> C64 {
        self.matrix[row * self.dim() + col]
    }

    /// `max |U†U - I|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim();
        identity_deviation(&matmul(&adjoint(&self.matrix, d), &self.matrix, d), d)
    }

    pub fn adjoint(&self) -> Self {
        Self { arity: self.arity, matrix: adjoint(&self.matrix, self.dim()) }
    }

    /// `self · other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(Self { arity: self.arity, matrix: matmul(&self.matrix, &other.matrix, self.dim()) })
    }
}

/// Single-qubit Kraus set `{K_i}` with `Σ K_i† K_i = I`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    ops: Vec<[C64; 4]>,
}

impl KrausChannel {
    pub fn new(ops: Vec<[C64; 4]>) -> Result<Self> {
        if ops.is_empty() {
            return Err(Error::InvalidInput("empty Kraus set".into()));
        }
        let channel = Self { ops };
        let dev = channel.completeness_deviation();
        if dev > CPTP_TOL {
            return Err(Error::NotCptp(dev));
        }
        Ok(channel)
    }

    pub fn ops(&self) -> &[[C64; 4]] {
        &self.ops
    }

    /// `max |Σ K_i† K_i - I|`.
    pub fn completeness_deviation(&self) -> f64 {
        let mut sum = vec![C64::new(0.0, 0.0); 4];
        for k in &self.ops {
            let kk = matmul(&adjoint(k, 2), k, 2);
            for (s, v) in sum.iter_mut().zip(kk) {
                *s += v;
            }
        }
        identity_deviation(&sum, 2)
    }
}
