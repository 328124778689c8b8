//! Local Kraus noise on the distributed channel qubits, branch-resolved
//! output states, average fidelities and the closed-form polynomials.

mod sweep;

pub use sweep::{read_csv, summarize, sweep, write_csv, FidelityRecord, KindSummary, SweepGrid, CSV_HEADER};

use std::fmt;
use std::str::FromStr;

use crate::bases::{bell_basis, x_states, BellIndex};
use crate::channels::combined_tau;
use crate::error::{Error, Result};
use crate::protocol::{standard_table, BranchSelector, CorrectionTable, ProtocolInputs, FULL_LABELS};
use crate::qcore::{c, DensityMatrix, KrausChannel, StateVector, C64};

/// Positions of `A1, A2, B1, B2, C` in the channel register; the Mentor's
/// qubits stay noiseless.
pub const NOISY_POSITIONS: [usize; 5] = [4, 5, 6, 7, 8];

// Everything the branch contraction removes, in channel-register positions.
const MEASURED: [usize; 7] = [0, 1, 2, 3, 4, 7, 8];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NoiseKind {
    BitFlip,
    PhaseFlip,
    PhaseDamping,
    Depolarizing,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 4] =
        [NoiseKind::BitFlip, NoiseKind::PhaseFlip, NoiseKind::PhaseDamping, NoiseKind::Depolarizing];

    /// Conventional symbol of the strength parameter.
    pub fn parameter(self) -> &'static str {
        match self {
            NoiseKind::BitFlip => "lambda",
            NoiseKind::PhaseFlip => "gamma",
            NoiseKind::PhaseDamping => "delta",
            NoiseKind::Depolarizing => "tau",
        }
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoiseKind::BitFlip => "bitflip",
            NoiseKind::PhaseFlip => "phaseflip",
            NoiseKind::PhaseDamping => "phasedamping",
            NoiseKind::Depolarizing => "depolarizing",
        })
    }
}

impl FromStr for NoiseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|ch| !matches!(ch, '-' | '_' | ' ')).collect();
        match key.to_ascii_lowercase().as_str() {
            "bitflip" | "bf" => Ok(NoiseKind::BitFlip),
            "phaseflip" | "pf" => Ok(NoiseKind::PhaseFlip),
            "phasedamping" | "pd" => Ok(NoiseKind::PhaseDamping),
            "depolarizing" | "depolarising" | "dp" => Ok(NoiseKind::Depolarizing),
            _ => Err(Error::InvalidInput(format!("unknown noise kind `{s}`"))),
        }
    }
}

/// Noise strength in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct NoiseStrength(f64);

impl NoiseStrength {
    pub fn new(value: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&value) {
            return Err(Error::OutOfRange { name: "noise strength", value });
        }
        Ok(Self(value))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// The single-qubit operator set of each model.
pub fn kraus_set(kind: NoiseKind, p: NoiseStrength) -> KrausChannel {
    let p = p.value();
    let keep = (1.0 - p).sqrt();
    let z = c(0.0, 0.0);
    let id = [c(keep, 0.0), z, z, c(keep, 0.0)];
    let ops = match kind {
        NoiseKind::BitFlip => {
            let s = p.sqrt();
            vec![id, [z, c(s, 0.0), c(s, 0.0), z]]
        }
        NoiseKind::PhaseFlip => {
            let s = p.sqrt();
            vec![id, [c(s, 0.0), z, z, c(-s, 0.0)]]
        }
        NoiseKind::PhaseDamping => {
            let s = p.sqrt();
            vec![id, [c(s, 0.0), z, z, z], [z, z, z, c(s, 0.0)]]
        }
        NoiseKind::Depolarizing => {
            let s = (p / 3.0).sqrt();
            vec![
                id,
                [z, c(s, 0.0), c(s, 0.0), z],
                [z, c(0.0, -s), c(0.0, s), z],
                [c(s, 0.0), z, z, c(-s, 0.0)],
            ]
        }
    };
    KrausChannel::new(ops).expect("operator sets are complete for strengths in [0, 1]")
}

/// `ε(|τ⟩⟨τ|)`: the channel applied independently to each of
/// `A1, A2, B1, B2, C`.
pub fn noisy_channel(kind: NoiseKind, p: NoiseStrength) -> Result<DensityMatrix> {
    let channel = kraus_set(kind, p);
    let mut rho = DensityMatrix::from_pure(&combined_tau()?);
    for q in NOISY_POSITIONS {
        rho = rho.apply_kraus(&channel, q)?;
    }
    Ok(rho)
}

/// Alice's Bell projection with `A0` in the pure payload state, folded
/// into an effective (unnormalized, norm² ½) vector on `A1`.
fn alice_vector(psi0: &StateVector, k: BellIndex) -> StateVector {
    let phi = bell_basis()[k.value() as usize].clone();
    let amps = (0..2)
        .map(|a1| (0..2).map(|a0| phi.amp(a0 * 2 + a1) * psi0.amp(a0).conj()).sum::<C64>())
        .collect();
    StateVector::new(1, amps).expect("one qubit")
}

fn stage_error(sel: &BranchSelector, e: Error) -> Error {
    match e {
        Error::ZeroProbability { probability, .. } => {
            Error::ZeroProbability { stage: format!("branch {sel}"), probability }
        }
        other => other,
    }
}

/// Probability of `sel` and the corrected, renormalized state of
/// `(A2, B1)` given the noisy channel state.
pub fn branch_output(
    noisy: &DensityMatrix,
    inputs: &ProtocolInputs,
    sel: &BranchSelector,
) -> Result<(f64, DensityMatrix)> {
    branch_output_with(standard_table(), noisy, inputs, sel)
}

pub fn branch_output_with(
    table: &CorrectionTable,
    noisy: &DensityMatrix,
    inputs: &ProtocolInputs,
    sel: &BranchSelector,
) -> Result<(f64, DensityMatrix)> {
    if noisy.n_qubits() != 9 {
        return Err(Error::DimensionMismatch { expected: 9, found: noisy.n_qubits() });
    }
    let bell = bell_basis();
    let (xi0, xi1) = inputs.xi.states();
    let (plus, minus) = x_states();
    let bob = if sel.bob_l == 0 { xi0 } else { xi1 };
    let ctrl = if sel.controller_m == 0 { plus } else { minus };
    let bra = bell[sel.mentor_i.value() as usize]
        .tensor(&bell[sel.mentor_j.value() as usize])
        .tensor(&alice_vector(&inputs.psi0(), sel.alice_k))
        .tensor(&bob)
        .tensor(&ctrl);
    let (p, out) = noisy.contract(&MEASURED, &bra).map_err(|e| stage_error(sel, e))?;
    let entry = table.get(sel);
    let out = out.apply_unitary(&entry.alice_op.gate(), &[0])?.apply_unitary(&entry.bob_op.gate(), &[1])?;
    Ok((p, out))
}

/// The same quantity computed the long way: payload ⊗ channel as a
/// ten-qubit density matrix, five sequential projective measurements,
/// corrections, then a partial trace. Used as an oracle for
/// [`branch_output`].
pub fn branch_output_by_projection(
    noisy: &DensityMatrix,
    inputs: &ProtocolInputs,
    sel: &BranchSelector,
) -> Result<(f64, DensityMatrix)> {
    let pos = |l: &str| FULL_LABELS.iter().position(|x| *x == l).expect("known label");
    let bell = bell_basis();
    let (xi0, xi1) = inputs.xi.states();
    let (plus, minus) = x_states();
    let rho = DensityMatrix::from_pure(&inputs.psi0()).tensor(noisy);
    let (p1, rho) = rho.project(&[pos("m1"), pos("m3")], &bell, sel.mentor_i.value() as usize)?;
    let (p2, rho) = rho.project(&[pos("m2"), pos("m4")], &bell, sel.mentor_j.value() as usize)?;
    let (p3, rho) = rho.project(&[pos("A0"), pos("A1")], &bell, sel.alice_k.value() as usize)?;
    let (p4, rho) = rho.project(&[pos("B2")], &[xi0, xi1], sel.bob_l as usize)?;
    let (p5, rho) = rho.project(&[pos("C")], &[plus, minus], sel.controller_m as usize)?;
    let entry = standard_table().get(sel);
    let rho = rho
        .apply_unitary(&entry.alice_op.gate(), &[pos("A2")])?
        .apply_unitary(&entry.bob_op.gate(), &[pos("B1")])?;
    Ok((p1 * p2 * p3 * p4 * p5, rho.partial_trace(&[pos("A2"), pos("B1")])?))
}

/// `⟨Ψ|L|Ψ⟩` against `|ψ₁⟩_{A2} ⊗ |ψ₀⟩_{B1}`.
pub fn branch_fidelity(out: &DensityMatrix, inputs: &ProtocolInputs) -> Result<f64> {
    out.fidelity(&inputs.joint_target())
}

/// Both averages over the 256 branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityAverages {
    /// Plain mean over all selectors.
    pub unweighted: f64,
    /// Mean weighted by branch probability.
    pub weighted: f64,
    pub min_probability: f64,
    pub max_probability: f64,
}

/// Averages for an already-computed noisy channel state.
pub fn averages_for(noisy: &DensityMatrix, inputs: &ProtocolInputs) -> Result<FidelityAverages> {
    let mut acc = FidelityAverages {
        unweighted: 0.0,
        weighted: 0.0,
        min_probability: f64::INFINITY,
        max_probability: 0.0,
    };
    let mut total_p = 0.0;
    for sel in BranchSelector::all() {
        let (p, out) = branch_output(noisy, inputs, &sel)?;
        let f = branch_fidelity(&out, inputs)?;
        acc.unweighted += f;
        acc.weighted += p * f;
        total_p += p;
        acc.min_probability = acc.min_probability.min(p);
        acc.max_probability = acc.max_probability.max(p);
    }
    acc.unweighted /= crate::protocol::BRANCH_COUNT as f64;
    acc.weighted /= total_p;
    Ok(acc)
}

pub fn fidelity_averages(kind: NoiseKind, p: NoiseStrength, inputs: &ProtocolInputs) -> Result<FidelityAverages> {
    averages_for(&noisy_channel(kind, p)?, inputs)
}

/// Unweighted mean of the branch fidelities over all 256 selectors.
pub fn average_fidelity(kind: NoiseKind, p: NoiseStrength, inputs: &ProtocolInputs) -> Result<f64> {
    Ok(fidelity_averages(kind, p, inputs)?.unweighted)
}

/// Probability-weighted alternative to [`average_fidelity`].
pub fn weighted_average_fidelity(kind: NoiseKind, p: NoiseStrength, inputs: &ProtocolInputs) -> Result<f64> {
    Ok(fidelity_averages(kind, p, inputs)?.weighted)
}

fn unit(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::OutOfRange { name, value })
    }
}

/// Closed-form average fidelity polynomial for each model.
///
/// The bit-flip expression assumes a real payload: for `y` carrying a
/// relative phase φ the numeric average follows
/// [`bit_flip_with_phase`] instead.
pub fn closed_form(kind: NoiseKind, p: f64, b2: f64, y2: f64) -> Result<f64> {
    let p = unit("noise strength", p)?;
    let b2 = unit("b2", b2)?;
    let y2 = unit("y2", y2)?;
    let b4 = b2 * b2;
    let y4 = y2 * y2;
    Ok(match kind {
        NoiseKind::BitFlip => {
            let l = p;
            (1.0 - 2.0 * l * (1.0 - l) * (1.0 - 2.0 * b2).powi(2))
                * (1.0 - 2.0 * l * (1.0 - l) * (1.0 - 2.0 * y2).powi(2))
        }
        NoiseKind::PhaseFlip => {
            let g = p;
            1.0 - 4.0 * g * y2 * (3.0 - 6.0 * g + 4.0 * g * g) * (1.0 - y2)
                + 4.0
                    * (b4 - b2)
                    * (3.0 * g - 6.0 * g * g
                        + 4.0 * g.powi(3)
                        + 4.0 * (g - 4.0 * g.powi(3) + 4.0 * g.powi(4)) * (y4 - y2))
        }
        NoiseKind::PhaseDamping => {
            let d = p;
            1.0 + 2.0
                * d
                * ((3.0 + (-3.0 + d) * d) * y2 * (-1.0 + y2)
                    + (b4 - b2)
                        * (3.0 - 3.0 * d + d * d + 2.0 * (y4 - y2) * (2.0 + (-2.0 + d) * d * d)))
        }
        NoiseKind::Depolarizing => {
            let t = p;
            let s = (3.0 - 4.0 * t).powi(2);
            1.0 - 8.0 / 243.0
                * t
                * (3.0 * (3.0 - 2.0 * t) * (9.0 - 6.0 * t + 4.0 * t * t)
                    + (y2 - y4) * s * (9.0 - 4.0 * t * (3.0 - 2.0 * t))
                    + (b2 - b4) * s * (9.0 - 12.0 * t + 8.0 * t * t - 4.0 * s * (y2 - y4)))
        }
    })
}

/// Bit-flip average fidelity for a payload `x|0⟩ + y|1⟩` whose relative
/// phase is φ: the `(1 − 2|y|²)²` factor becomes `1 − 4|x|²|y|² cos²φ`,
/// which reduces to [`closed_form`] at φ = 0.
pub fn bit_flip_with_phase(lambda: f64, b2: f64, y2: f64, phase: f64) -> Result<f64> {
    let l = unit("noise strength", lambda)?;
    let b2 = unit("b2", b2)?;
    let y2 = unit("y2", y2)?;
    let k = 2.0 * l * (1.0 - l);
    Ok((1.0 - k * (1.0 - 2.0 * b2).powi(2)) * (1.0 - k * (1.0 - 4.0 * (1.0 - y2) * y2 * phase.cos().powi(2))))
}
