//! The two pre-shared resource channels and the states the Mentor's
//! Bell measurements leave behind.

use crate::bases::{bell_state, gates, BellIndex};
use crate::error::Result;
use crate::qcore::{QubitOrdering, StateVector, UnitaryGate, C64};

pub const XI1_LABELS: [&str; 4] = ["m1", "m2", "A1", "A2"];
pub const XI2_LABELS: [&str; 5] = ["m3", "m4", "B1", "B2", "C"];
/// Label order of the combined nine-qubit channel.
pub const TAU_LABELS: [&str; 9] = ["m1", "m3", "m2", "m4", "A1", "A2", "B1", "B2", "C"];
/// Label order of the post-Mentor states.
pub const M_LABELS: [&str; 5] = ["A1", "A2", "B1", "B2", "C"];

/// Gate kinds used by the preparation sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrepGate {
    H,
    Cx,
    Cz,
}

impl PrepGate {
    pub fn unitary(self) -> UnitaryGate {
        match self {
            PrepGate::H => gates::h(),
            PrepGate::Cx => gates::cnot(),
            PrepGate::Cz => gates::cz(),
        }
    }
}

/// A preparation recipe on a fresh `|0…0⟩` register, grouped by step.
#[derive(Debug, Clone)]
pub struct PrepSequence {
    pub n_qubits: usize,
    pub steps: Vec<Vec<(PrepGate, Vec<usize>)>>,
}

impl PrepSequence {
    /// Runs the first `steps` steps.
    pub fn run_until(&self, steps: usize) -> Result<StateVector> {
        let mut s = StateVector::zero(self.n_qubits);
        for step in self.steps.iter().take(steps) {
            for (g, targets) in step {
                s = s.apply_unitary(&g.unitary(), targets)?;
            }
        }
        Ok(s)
    }

    pub fn run(&self) -> Result<StateVector> {
        self.run_until(self.steps.len())
    }

    pub fn ops(&self) -> impl Iterator<Item = &(PrepGate, Vec<usize>)> {
        self.steps.iter().flatten()
    }
}

/// H on q0, q1; CNOT (q0→q2), (q1→q3); CZ (q0, q1).
pub fn xi1_sequence() -> PrepSequence {
    use PrepGate::*;
    PrepSequence {
        n_qubits: 4,
        steps: vec![
            vec![(H, vec![0]), (H, vec![1])],
            vec![(Cx, vec![0, 2]), (Cx, vec![1, 3])],
            vec![(Cz, vec![0, 1])],
        ],
    }
}

/// H on q0, q1; CNOT (q0→q2), (q0→q4), (q1→q3), (q1→q4); CZ (q0, q1).
pub fn xi2_sequence() -> PrepSequence {
    use PrepGate::*;
    PrepSequence {
        n_qubits: 5,
        steps: vec![
            vec![(H, vec![0]), (H, vec![1])],
            vec![(Cx, vec![0, 2]), (Cx, vec![0, 4]), (Cx, vec![1, 3]), (Cx, vec![1, 4])],
            vec![(Cz, vec![0, 1])],
        ],
    }
}

pub fn prepare_xi1() -> Result<StateVector> {
    xi1_sequence().run()
}

pub fn prepare_xi2() -> Result<StateVector> {
    xi2_sequence().run()
}

/// Builds `Σ sign·|bits⟩` with a common amplitude.
fn from_terms(n: usize, scale: f64, terms: &[(f64, &str)]) -> StateVector {
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    for (sign, bits) in terms {
        let idx = usize::from_str_radix(bits, 2).expect("static bit string");
        amps[idx] += C64::new(sign * scale, 0.0);
    }
    StateVector::new(n, amps).expect("static state")
}

/// `½(|0000⟩+|0101⟩+|1010⟩−|1111⟩)` on `m1 m2 A1 A2`.
pub fn xi1_analytic() -> StateVector {
    from_terms(4, 0.5, &[(1.0, "0000"), (1.0, "0101"), (1.0, "1010"), (-1.0, "1111")])
}

/// `½(|00000⟩+|01011⟩+|10101⟩−|11110⟩)` on `m3 m4 B1 B2 C`.
pub fn xi2_analytic() -> StateVector {
    from_terms(5, 0.5, &[(1.0, "00000"), (1.0, "01011"), (1.0, "10101"), (-1.0, "11110")])
}

/// Both channels as prepared by their gate sequences.
#[derive(Debug, Clone)]
pub struct ChannelPair {
    pub xi1: StateVector,
    pub xi2: StateVector,
}

impl ChannelPair {
    pub fn prepare() -> Result<Self> {
        Ok(Self { xi1: prepare_xi1()?, xi2: prepare_xi2()? })
    }

    /// Largest amplitude deviation of either channel from its closed form.
    pub fn analytic_deviation(&self) -> Result<f64> {
        Ok(self.xi1.max_abs_diff(&xi1_analytic())?.max(self.xi2.max_abs_diff(&xi2_analytic())?))
    }

    /// `Ξ₁ ⊗ Ξ₂` relabelled into [`TAU_LABELS`] order.
    pub fn combined(&self) -> Result<StateVector> {
        let natural = QubitOrdering::new(&XI1_LABELS)?.concat(&QubitOrdering::new(&XI2_LABELS)?)?;
        let target = QubitOrdering::new(&TAU_LABELS)?;
        self.xi1.tensor(&self.xi2).reorder(&natural, &target)
    }
}

/// The nine-qubit channel `|τ⟩` in [`TAU_LABELS`] order.
pub fn combined_tau() -> Result<StateVector> {
    ChannelPair::prepare()?.combined()
}

pub fn tau_ordering() -> QubitOrdering {
    QubitOrdering::new(&TAU_LABELS).expect("static labels")
}

/// Signed terms of the sixteen post-Mentor states on `A1 A2 B1 B2 C`,
/// indexed `[i][j]`.
const M_TERMS: [[[(f64, &str); 4]; 4]; 4] = [
    [
        [(1.0, "00000"), (1.0, "01011"), (1.0, "10101"), (1.0, "11110")],
        [(1.0, "00000"), (-1.0, "01011"), (1.0, "10101"), (-1.0, "11110")],
        [(1.0, "00011"), (1.0, "01000"), (-1.0, "10110"), (-1.0, "11101")],
        [(1.0, "00011"), (-1.0, "01000"), (-1.0, "10110"), (1.0, "11101")],
    ],
    [
        [(1.0, "00000"), (1.0, "01011"), (-1.0, "10101"), (-1.0, "11110")],
        [(1.0, "00000"), (-1.0, "01011"), (-1.0, "10101"), (1.0, "11110")],
        [(1.0, "00011"), (1.0, "01000"), (1.0, "10110"), (1.0, "11101")],
        [(1.0, "00011"), (-1.0, "01000"), (1.0, "10110"), (-1.0, "11101")],
    ],
    [
        [(1.0, "00101"), (-1.0, "01110"), (1.0, "10000"), (-1.0, "11011")],
        [(1.0, "00101"), (1.0, "01110"), (1.0, "10000"), (1.0, "11011")],
        [(-1.0, "00110"), (1.0, "01101"), (1.0, "10011"), (-1.0, "11000")],
        [(-1.0, "00110"), (-1.0, "01101"), (1.0, "10011"), (1.0, "11000")],
    ],
    [
        [(1.0, "00101"), (-1.0, "01110"), (-1.0, "10000"), (1.0, "11011")],
        [(1.0, "00101"), (1.0, "01110"), (-1.0, "10000"), (-1.0, "11011")],
        [(-1.0, "00110"), (1.0, "01101"), (-1.0, "10011"), (1.0, "11000")],
        [(-1.0, "00110"), (-1.0, "01101"), (-1.0, "10011"), (-1.0, "11000")],
    ],
];

/// `|M_ij⟩` on `A1 A2 B1 B2 C`, from the closed-form list.
pub fn m_state(i: BellIndex, j: BellIndex) -> StateVector {
    from_terms(5, 0.5, &M_TERMS[i.value() as usize][j.value() as usize])
}

/// `|M_ij⟩` recomputed by projecting `|τ⟩` onto `Φ_i` on `(m1, m3)` and
/// `Φ_j` on `(m2, m4)`. Returns the outcome probability and the
/// normalized remainder.
pub fn m_state_by_projection(tau: &StateVector, i: BellIndex, j: BellIndex) -> Result<(f64, StateVector)> {
    let bra = bell_state(i).tensor(&bell_state(j));
    let rest = tau.contract(&[0, 1, 2, 3], &bra)?;
    let p = rest.norm_sqr();
    Ok((p, rest.normalized()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn xi1_after_cnots_has_all_plus_signs() {
        let s = xi1_sequence().run_until(2).unwrap();
        let want = from_terms(4, 0.5, &[(1.0, "0000"), (1.0, "0101"), (1.0, "1010"), (1.0, "1111")]);
        assert!(s.max_abs_diff(&want).unwrap() < 1e-12);
    }

    #[test]
    fn xi2_after_cnots_has_all_plus_signs() {
        let s = xi2_sequence().run_until(2).unwrap();
        let want =
            from_terms(5, 0.5, &[(1.0, "00000"), (1.0, "01011"), (1.0, "10101"), (1.0, "11110")]);
        assert!(s.max_abs_diff(&want).unwrap() < 1e-12);
    }

    #[test]
    fn prepared_channels_match_closed_form() {
        let pair = ChannelPair::prepare().unwrap();
        assert!(pair.analytic_deviation().unwrap() < 1e-12);
        assert!((pair.xi1.norm_sqr() - 1.0).abs() < 1e-12);
        assert!((pair.xi2.norm_sqr() - 1.0).abs() < 1e-12);
        let xi1 = &pair.xi1;
        for (idx, want) in [(0b0000, 0.5), (0b0101, 0.5), (0b1010, 0.5), (0b1111, -0.5)] {
            assert!((xi1.amp(idx).re - want).abs() < 1e-12);
        }
        assert_eq!(xi1.support(1e-12).len(), 4);
    }

    #[test]
    fn tau_spot_amplitudes() {
        let tau = combined_tau().unwrap();
        assert!((tau.amp(0).re - 0.25).abs() < 1e-12);
        let idx = usize::from_str_radix("101011000", 2).unwrap();
        assert!((tau.amp(idx).re + 0.25).abs() < 1e-12);
        assert_eq!(tau.support(1e-12).len(), 16);
    }

    #[test]
    fn m_states_are_orthonormal() {
        let all: Vec<StateVector> = BellIndex::ALL
            .iter()
            .flat_map(|&i| BellIndex::ALL.iter().map(move |&j| m_state(i, j)))
            .collect();
        for (a, sa) in all.iter().enumerate() {
            for (b, sb) in all.iter().enumerate() {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((sa.inner(sb).unwrap().re - want).abs() < 1e-12, "{a} {b}");
            }
        }
    }
}
