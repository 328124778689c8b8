//! Multi-qubit payloads of the form `a|0…0⟩ + b|1…1⟩`, reduced to one
//! qubit by a CNOT fan-in before the protocol and rebuilt by a fan-out
//! afterwards.

use super::{run_branch, BranchResult, BranchSelector, ProtocolInputs};
use crate::bases::gates;
use crate::error::{Error, Result};
use crate::qcore::{StateVector, C64};

const GHZ_TOL: f64 = 1e-12;

fn ghz_leak(s: &StateVector) -> f64 {
    let last = s.dim() - 1;
    s.amps()
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != 0 && i != last)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}

fn fan_out(mut s: StateVector) -> Result<StateVector> {
    let cx = gates::cnot();
    for t in 1..s.n_qubits() {
        s = s.apply_unitary(&cx, &[0, t])?;
    }
    Ok(s)
}

/// CNOTs `(1,2) … (1,n)` taking `a|0…0⟩+b|1…1⟩` to `(a|0⟩+b|1⟩)⊗|0⟩^{n−1}`.
pub fn compress_payload(s: &StateVector) -> Result<StateVector> {
    let leak = ghz_leak(s);
    if leak > GHZ_TOL {
        return Err(Error::NotGhzClass(leak));
    }
    fan_out(s.clone())
}

/// Appends `count − 1` fresh `|0⟩` qubits and fans the first qubit out onto
/// them: `x|0⟩+y|1⟩ ↦ x|0…0⟩+y|1…1⟩`.
pub fn expand_payload(q: &StateVector, count: usize) -> Result<StateVector> {
    if count < 1 {
        return Err(Error::InvalidInput("expand_payload needs count ≥ 1".into()));
    }
    if q.n_qubits() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, found: q.n_qubits() });
    }
    fan_out(q.tensor(&StateVector::zero(count - 1)))
}

/// Leading-qubit amplitudes of a compressed payload.
fn head_amplitudes(s: &StateVector) -> (C64, C64) {
    let compressed_one = 1usize << (s.n_qubits() - 1);
    (s.amp(0), s.amp(compressed_one))
}

#[derive(Debug, Clone)]
pub struct GeneralizedResult {
    /// `n`-qubit state rebuilt at Bob.
    pub bob_state: StateVector,
    /// `m`-qubit state rebuilt at Alice.
    pub alice_state: StateVector,
    pub fidelity_tp: f64,
    pub fidelity_rsp: f64,
    pub branch: BranchResult,
}

/// Teleports an `n`-qubit GHZ-class payload to Bob while preparing an
/// `m`-qubit GHZ-class target at Alice.
///
/// The target's amplitudes must be real and non-negative up to a global
/// phase, since Bob's measurement basis is real.
pub fn run_generalized(
    payload: &StateVector,
    target: &StateVector,
    sel: &BranchSelector,
) -> Result<GeneralizedResult> {
    let (x, y) = head_amplitudes(&compress_payload(payload)?);
    let (ta, tb) = head_amplitudes(&compress_payload(target)?);

    let phase = if ta.norm() > GHZ_TOL { ta / ta.norm() } else { tb / tb.norm() };
    let (a, b) = (ta / phase, tb / phase);
    if a.im.abs() > 1e-12 || b.im.abs() > 1e-12 || a.re < -1e-12 || b.re < -1e-12 {
        return Err(Error::InvalidInput(
            "remote-preparation target needs real non-negative amplitudes".into(),
        ));
    }
    let (a, b) = (a.re.max(0.0), b.re.max(0.0));
    let inputs = ProtocolInputs::new(x, y, a, b)?;

    let branch = run_branch(&inputs, sel)?;
    let bob_state = expand_payload(&branch.b1_state, payload.n_qubits())?;
    let alice_state = expand_payload(&branch.a2_state, target.n_qubits())?;
    Ok(GeneralizedResult {
        fidelity_tp: payload.fidelity(&bob_state)?,
        fidelity_rsp: target.fidelity(&alice_state)?,
        bob_state,
        alice_state,
        branch,
    })
}
