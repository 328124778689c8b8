use super::C64;
use crate::error::{Error, Result};

/// Validates `targets` against an `n`-qubit register.
pub(crate) fn check_targets(targets: &[usize], n: usize) -> Result<()> {
    for (i, &t) in targets.iter().enumerate() {
        if t >= n {
            return Err(Error::QubitOutOfRange { qubit: t, n_qubits: n });
        }
        if targets[..i].contains(&t) {
            return Err(Error::DuplicateQubit(t));
        }
    }
    Ok(())
}

/// Strided view of the target subspace.
///
/// `offsets[l]` is the global index offset of local basis state `l`;
/// `bases` enumerates every global index whose target bits are all zero.
pub(crate) struct Subspace {
    pub offsets: Vec<usize>,
    pub bases: Vec<usize>,
}

impl Subspace {
    pub fn new(targets: &[usize], n: usize) -> Self {
        let k = targets.len();
        let shifts: Vec<usize> = targets.iter().map(|&t| n - 1 - t).collect();
        let offsets = (0..1usize << k)
            .map(|local| {
                shifts
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| (local >> (k - 1 - j)) & 1 == 1)
                    .map(|(_, &s)| 1usize << s)
                    .sum()
            })
            .collect();

        let mut sorted = shifts.clone();
        sorted.sort_unstable();
        let bases = (0..1usize << (n - k))
            .map(|mut rest| {
                // spread the free bits around the target bit positions
                let mut idx = 0usize;
                let mut bit = 0usize;
                let mut next = sorted.iter().peekable();
                while rest != 0 || next.peek().is_some() {
                    if next.peek() == Some(&&bit) {
                        next.next();
                    } else {
                        idx |= (rest & 1) << bit;
                        rest >>= 1;
                    }
                    bit += 1;
                }
                idx
            })
            .collect();
        Self { offsets, bases }
    }
}

/// Applies the `2^k × 2^k` row-major `op` to every strided copy of the
/// target subspace inside `data`, where element `i` of the register lives
/// at `data[i * stride + shift]`.
pub(crate) fn apply_local(
    data: &mut [C64],
    op: &[C64],
    sub: &Subspace,
    stride: usize,
    shift: usize,
) {
    let d = sub.offsets.len();
    let mut buf = vec![C64::new(0.0, 0.0); d];
    for &base in &sub.bases {
        for (l, &off) in sub.offsets.iter().enumerate() {
            buf[l] = data[(base + off) * stride + shift];
        }
        for (r, &off) in sub.offsets.iter().enumerate() {
            let row = &op[r * d..(r + 1) * d];
            data[(base + off) * stride + shift] =
                row.iter().zip(&buf).map(|(m, v)| m * v).sum();
        }
    }
}

/// `ρ ← (M ⊗ I) ρ (M ⊗ I)†` on a row-major `dim × dim` matrix.
pub(crate) fn conjugate(rho: &mut [C64], dim: usize, op: &[C64], sub: &Subspace) {
    for col in 0..dim {
        apply_local(rho, op, sub, dim, col);
    }
    let conj: Vec<C64> = op.iter().map(|z| z.conj()).collect();
    for row in 0..dim {
        apply_local(&mut rho[row * dim..(row + 1) * dim], &conj, sub, 1, 0);
    }
}
