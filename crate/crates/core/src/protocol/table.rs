//! Pauli corrections for every measurement branch.
//!
//! Bob's correction depends on the Mentor's pair, Alice's Bell outcome and
//! the Controller's outcome; Alice's depends on the Mentor's pair, Bob's
//! ξ outcome and the Controller's outcome. The grouped listings below are
//! expanded into a flat 256-entry table once.

use std::sync::LazyLock;

use super::BranchSelector;
use crate::bases::PauliString;

/// Mentor pairs sharing one row of corrections, with those corrections.
type Group<const N: usize> = ([(u8, u8); 4], [&'static str; N]);

/// `(mentor pairs, ops)` with ops indexed by `alice_k * 2 + controller_m`.
const BOB_GROUPS: [Group<8>; 4] = [
    ([(0, 0), (0, 1), (1, 2), (1, 3)], ["I", "Z", "Z", "I", "X", "XZ", "ZX", "ZXZ"]),
    ([(1, 0), (1, 1), (0, 2), (0, 3)], ["Z", "I", "I", "Z", "XZ", "X", "ZXZ", "ZX"]),
    ([(2, 0), (2, 1), (3, 2), (3, 3)], ["X", "XZ", "ZX", "ZXZ", "I", "Z", "Z", "I"]),
    ([(3, 0), (3, 1), (2, 2), (2, 3)], ["XZ", "X", "ZXZ", "ZX", "Z", "I", "I", "Z"]),
];

/// `(mentor pairs, ops)` with ops indexed by `bob_l * 2 + controller_m`.
const ALICE_GROUPS: [Group<4>; 4] = [
    ([(0, 0), (1, 0), (2, 1), (3, 1)], ["I", "Z", "XZ", "X"]),
    ([(0, 1), (1, 1), (2, 0), (3, 0)], ["Z", "I", "X", "XZ"]),
    ([(0, 2), (1, 2), (2, 3), (3, 3)], ["X", "ZX", "XZX", "I"]),
    ([(0, 3), (1, 3), (2, 2), (3, 2)], ["XZ", "ZXZ", "XZXZ", "Z"]),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionEntry {
    pub selector: BranchSelector,
    pub bob_op: PauliString,
    pub alice_op: PauliString,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionTable {
    entries: Vec<CorrectionEntry>,
}

fn group_of<const N: usize>(groups: &[Group<N>; 4], i: u8, j: u8) -> usize {
    groups
        .iter()
        .position(|(pairs, _)| pairs.contains(&(i, j)))
        .expect("every Mentor pair belongs to one group")
}

impl CorrectionTable {
    /// Expands the grouped listings into one entry per selector.
    pub fn standard() -> Self {
        let entries = BranchSelector::all()
            .map(|sel| {
                let (i, j) = (sel.mentor_i.value(), sel.mentor_j.value());
                let bg = &BOB_GROUPS[group_of(&BOB_GROUPS, i, j)].1;
                let ag = &ALICE_GROUPS[group_of(&ALICE_GROUPS, i, j)].1;
                let bob = bg[(sel.alice_k.value() * 2 + sel.controller_m) as usize];
                let alice = ag[(sel.bob_l * 2 + sel.controller_m) as usize];
                CorrectionEntry {
                    selector: sel,
                    bob_op: bob.parse().expect("static Pauli string"),
                    alice_op: alice.parse().expect("static Pauli string"),
                }
            })
            .collect();
        Self { entries }
    }

    pub fn entries(&self) -> &[CorrectionEntry] {
        &self.entries
    }

    pub fn get(&self, sel: &BranchSelector) -> &CorrectionEntry {
        &self.entries[sel.index()]
    }

    /// Replaces one entry; used to exercise failure reporting.
    pub fn with_override(mut self, sel: &BranchSelector, bob: PauliString, alice: PauliString) -> Self {
        let e = &mut self.entries[sel.index()];
        e.bob_op = bob;
        e.alice_op = alice;
        self
    }
}

static STANDARD: LazyLock<CorrectionTable> = LazyLock::new(CorrectionTable::standard);

pub fn standard_table() -> &'static CorrectionTable {
    &STANDARD
}

/// Bob's operation on `B1` for this branch.
pub fn bob_correction(sel: &BranchSelector) -> PauliString {
    STANDARD.get(sel).bob_op.clone()
}

/// Alice's operation on `A2` for this branch.
pub fn alice_correction(sel: &BranchSelector) -> PauliString {
    STANDARD.get(sel).alice_op.clone()
}
