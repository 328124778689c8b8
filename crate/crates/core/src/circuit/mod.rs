//! Deferred-measurement circuit for the whole protocol: construction,
//! exact simulation and OpenQASM 3 export.

mod qasm;
mod synth;

pub use qasm::{export_qasm, parse_qasm, QasmDoc};
pub use synth::{anf, correction_network, CorrectionNetwork, Monomial};

use std::collections::BTreeMap;

use crate::bases::{gates, state_prep_gate};
use crate::channels::{xi1_sequence, xi2_sequence, PrepGate};
use crate::error::{Error, Result};
use crate::protocol::{CorrectionTable, ProtocolInputs};
use crate::qcore::{DensityMatrix, StateVector, C64};

/// Circuit register, `q0 … q9`.
pub const CIRCUIT_LABELS: [&str; 10] = ["A0", "m1", "m2", "A1", "A2", "m3", "m4", "B1", "B2", "C"];
/// Alice's remotely prepared qubit `A2`.
pub const ALICE_OUT: usize = 4;
/// Bob's teleported qubit `B1`.
pub const BOB_OUT: usize = 7;

const XI1_QUBITS: [usize; 4] = [1, 2, 3, 4];
const XI2_QUBITS: [usize; 5] = [5, 6, 7, 8, 9];

/// Measurement-record qubits after the basis changes, in selector bit
/// order: Mentor (m1,m3) phase/parity, Mentor (m2,m4) phase/parity,
/// Alice phase/parity, Bob, Controller.
pub const RECORD_QUBITS: [usize; 8] = [1, 5, 2, 6, 0, 3, 8, 9];

#[derive(Debug, Clone, PartialEq)]
pub enum GateKind {
    H,
    X,
    Z,
    Cx,
    Cz,
    Ccx,
    /// X on the last operand controlled on all the others.
    Mcx,
    /// Arbitrary single-qubit unitary.
    Custom { name: String, matrix: [C64; 4] },
}

impl GateKind {
    fn arity(&self) -> Option<usize> {
        match self {
            GateKind::H | GateKind::X | GateKind::Z | GateKind::Custom { .. } => Some(1),
            GateKind::Cx | GateKind::Cz => Some(2),
            GateKind::Ccx => Some(3),
            GateKind::Mcx => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Op {
    pub gate: GateKind,
    pub qubits: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitIR {
    n_qubits: usize,
    ops: Vec<Op>,
    measured: Vec<usize>,
}

impl CircuitIR {
    pub fn new(n_qubits: usize) -> Self {
        Self { n_qubits, ops: Vec::new(), measured: Vec::new() }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn measured(&self) -> &[usize] {
        &self.measured
    }

    /// Appends a gate. Fails once any measurement has been recorded, since
    /// all measurements are terminal.
    pub fn push(&mut self, gate: GateKind, qubits: &[usize]) -> Result<&mut Self> {
        if !self.measured.is_empty() {
            return Err(Error::InvalidInput("gate after terminal measurement".into()));
        }
        match gate.arity() {
            Some(k) if k != qubits.len() => {
                return Err(Error::ArityMismatch { expected: k, found: qubits.len() });
            }
            None if qubits.len() < 2 => return Err(Error::ArityMismatch { expected: 2, found: qubits.len() }),
            _ => {}
        }
        crate::qcore::check_targets(qubits, self.n_qubits)?;
        self.ops.push(Op { gate, qubits: qubits.to_vec() });
        Ok(self)
    }

    pub fn measure(&mut self, qubit: usize) -> Result<&mut Self> {
        crate::qcore::check_targets(&[qubit], self.n_qubits)?;
        if self.measured.contains(&qubit) {
            return Err(Error::DuplicateQubit(qubit));
        }
        self.measured.push(qubit);
        Ok(self)
    }

    /// Final pure state from `|0…0⟩`, ignoring the terminal measurements.
    pub fn simulate(&self) -> Result<StateVector> {
        let mut s = StateVector::zero(self.n_qubits);
        for op in &self.ops {
            s = apply_op(&s, op)?;
        }
        Ok(s)
    }
}

fn controlled_x(s: &StateVector, controls: &[usize], target: usize) -> Result<StateVector> {
    let n = s.n_qubits();
    let bit = |q: usize| 1usize << (n - 1 - q);
    let mask = controls.iter().fold(0, |m, &q| m | bit(q));
    let t = bit(target);
    let mut amps = s.amps().to_vec();
    for idx in 0..amps.len() {
        if idx & mask == mask && idx & t == 0 {
            amps.swap(idx, idx | t);
        }
    }
    StateVector::new(n, amps)
}

fn apply_op(s: &StateVector, op: &Op) -> Result<StateVector> {
    let q = &op.qubits;
    match &op.gate {
        GateKind::H => s.apply_unitary(&gates::h(), q),
        GateKind::X => s.apply_unitary(&gates::x(), q),
        GateKind::Z => s.apply_unitary(&gates::z(), q),
        GateKind::Cz => s.apply_unitary(&gates::cz(), q),
        GateKind::Cx | GateKind::Ccx | GateKind::Mcx => {
            let (target, controls) = q.split_last().expect("arity checked on push");
            controlled_x(s, controls, *target)
        }
        GateKind::Custom { matrix, .. } => s.apply_matrix(matrix, q),
    }
}

/// Exact Born distribution of each measured qubit.
pub fn simulate_marginals(c: &CircuitIR) -> Result<BTreeMap<usize, [f64; 2]>> {
    let s = c.simulate()?;
    c.measured
        .iter()
        .map(|&q| {
            let r = s.reduced_density(&[q])?;
            Ok((q, [r.at(0, 0).re, r.at(1, 1).re]))
        })
        .collect()
}

/// Reduced state of the measured qubits (in measurement order) just
/// before readout.
pub fn output_state(c: &CircuitIR) -> Result<DensityMatrix> {
    c.simulate()?.reduced_density(&c.measured)
}

fn push_prep(c: &mut CircuitIR, seq: crate::channels::PrepSequence, map: &[usize]) -> Result<()> {
    for (g, local) in seq.ops() {
        let qubits: Vec<usize> = local.iter().map(|&i| map[i]).collect();
        let kind = match g {
            PrepGate::H => GateKind::H,
            PrepGate::Cx => GateKind::Cx,
            PrepGate::Cz => GateKind::Cz,
        };
        c.push(kind, &qubits)?;
    }
    Ok(())
}

fn custom(name: &str, gate: crate::qcore::UnitaryGate) -> GateKind {
    let m = gate.matrix();
    GateKind::Custom { name: name.to_string(), matrix: [m[0], m[1], m[2], m[3]] }
}

/// The full protocol as one coherent circuit with terminal measurements
/// of `A2` (q4) and `B1` (q7).
pub fn build_protocol_circuit(inputs: &ProtocolInputs) -> Result<CircuitIR> {
    build_protocol_circuit_with(crate::protocol::standard_table(), inputs)
}

pub fn build_protocol_circuit_with(table: &CorrectionTable, inputs: &ProtocolInputs) -> Result<CircuitIR> {
    let mut c = CircuitIR::new(CIRCUIT_LABELS.len());
    // Payload and channels.
    c.push(custom("prep", state_prep_gate(inputs.x, inputs.y)?), &[0])?;
    push_prep(&mut c, xi1_sequence(), &XI1_QUBITS)?;
    push_prep(&mut c, xi2_sequence(), &XI2_QUBITS)?;
    // Every measurement rotated to the computational basis.
    for (first, second) in [(1, 5), (2, 6), (0, 3)] {
        c.push(GateKind::Cx, &[first, second])?;
        c.push(GateKind::H, &[first])?;
    }
    c.push(custom("bt", gates::xi_readout(&inputs.xi)), &[8])?;
    c.push(GateKind::H, &[9])?;
    // Corrections controlled by the rotated record qubits.
    let net = correction_network(table);
    for (target, terms) in [(ALICE_OUT, &net.alice), (BOB_OUT, &net.bob)] {
        for (is_x, mono) in terms.iter() {
            push_controlled(&mut c, *is_x, mono, target)?;
        }
    }
    // Terminal readout of the two outputs.
    c.measure(ALICE_OUT)?;
    c.measure(BOB_OUT)?;
    Ok(c)
}

fn push_controlled(c: &mut CircuitIR, is_x: bool, mono: &Monomial, target: usize) -> Result<()> {
    let mut qubits: Vec<usize> = mono.bits().iter().map(|&b| RECORD_QUBITS[b]).collect();
    qubits.push(target);
    let (plain, ctrl) = if is_x { (GateKind::X, GateKind::Cx) } else { (GateKind::Z, GateKind::Cz) };
    match qubits.len() {
        1 => {
            c.push(plain, &qubits)?;
        }
        2 => {
            c.push(ctrl, &qubits)?;
        }
        n => {
            let multi = if n == 3 { GateKind::Ccx } else { GateKind::Mcx };
            if !is_x {
                c.push(GateKind::H, &[target])?;
            }
            c.push(multi, &qubits)?;
            if !is_x {
                c.push(GateKind::H, &[target])?;
            }
        }
    }
    Ok(())
}
