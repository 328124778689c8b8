//! Controlled-Pauli correction networks derived from the correction table.
//!
//! Every stored correction is `±X^f Z^g` with `f, g` Boolean functions of
//! the eight rotated measurement bits. Writing `f` and `g` in algebraic
//! normal form (XOR of AND-monomials) turns each monomial into one
//! (multi-)controlled gate; a branch-dependent sign is harmless because
//! the record qubits stay orthogonal.

use crate::bases::BellIndex;
use crate::protocol::{BranchSelector, CorrectionTable};

/// AND of a set of record bits (bit `r` of the mask = record index `r`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub u8);

impl Monomial {
    pub fn bits(self) -> Vec<usize> {
        (0..8).filter(|r| self.0 >> r & 1 == 1).collect()
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }
}

/// Selector encoded by a record-bit assignment (bit `r` of `t`).
pub fn selector_for_record(t: usize) -> BranchSelector {
    let b = |r: usize| (t >> r & 1) as u8;
    BranchSelector {
        mentor_i: BellIndex::from_bits(b(0), b(1)),
        mentor_j: BellIndex::from_bits(b(2), b(3)),
        alice_k: BellIndex::from_bits(b(4), b(5)),
        bob_l: b(6),
        controller_m: b(7),
    }
}

/// Algebraic normal form of a Boolean function given by its truth table.
pub fn anf(truth: &[u8; 256]) -> Vec<Monomial> {
    let mut a = *truth;
    for i in 0..8 {
        for t in 0..256 {
            if t >> i & 1 == 1 {
                a[t] ^= a[t ^ (1 << i)];
            }
        }
    }
    let mut out: Vec<Monomial> = (0..256).filter(|&t| a[t] & 1 == 1).map(|t| Monomial(t as u8)).collect();
    out.sort_by_key(|m| (m.degree(), m.0));
    out
}

/// Ordered gate terms per target: `(is_x, monomial)`, Z terms first so
/// the net operator is `X^f Z^g`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionNetwork {
    pub alice: Vec<(bool, Monomial)>,
    pub bob: Vec<(bool, Monomial)>,
}

impl CorrectionNetwork {
    pub fn max_degree(&self) -> u32 {
        self.alice.iter().chain(&self.bob).map(|(_, m)| m.degree()).max().unwrap_or(0)
    }
}

pub fn correction_network(table: &CorrectionTable) -> CorrectionNetwork {
    // Truth tables of the X and Z exponents: Alice x, Alice z, Bob x, Bob z.
    let mut truths = [[0u8; 256]; 4];
    for t in 0..256 {
        let entry = table.get(&selector_for_record(t));
        let (_, ax, az) = entry.alice_op.normal_form();
        let (_, bx, bz) = entry.bob_op.normal_form();
        for (table, bit) in truths.iter_mut().zip([ax, az, bx, bz]) {
            table[t] = bit;
        }
    }
    let terms = |x: &[u8; 256], z: &[u8; 256]| {
        let mut v: Vec<(bool, Monomial)> = anf(z).into_iter().map(|m| (false, m)).collect();
        v.extend(anf(x).into_iter().map(|m| (true, m)));
        v
    };
    CorrectionNetwork { alice: terms(&truths[0], &truths[1]), bob: terms(&truths[2], &truths[3]) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::standard_table;

    #[test]
    fn anf_of_simple_functions() {
        let mut and = [0u8; 256];
        let mut xor = [0u8; 256];
        for t in 0..256 {
            and[t] = (t & 1 & (t >> 3)) as u8;
            xor[t] = ((t ^ (t >> 2)) & 1) as u8 ^ 1;
        }
        assert_eq!(anf(&and), vec![Monomial(0b1001)]);
        assert_eq!(anf(&xor), vec![Monomial(0), Monomial(0b1), Monomial(0b100)]);
    }

    #[test]
    fn network_reproduces_table() {
        let net = correction_network(standard_table());
        let eval = |terms: &[(bool, Monomial)], t: usize| {
            terms.iter().fold((0u8, 0u8), |(x, z), (is_x, m)| {
                let on = (t as u8 & m.0 == m.0) as u8;
                if *is_x { (x ^ on, z) } else { (x, z ^ on) }
            })
        };
        for t in 0..256 {
            let e = standard_table().get(&selector_for_record(t));
            let (_, ax, az) = e.alice_op.normal_form();
            let (_, bx, bz) = e.bob_op.normal_form();
            assert_eq!(eval(&net.alice, t), (ax, az));
            assert_eq!(eval(&net.bob, t), (bx, bz));
        }
    }
}
