use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::table::{standard_table, CorrectionTable};
use super::{BranchSelector, ProtocolInputs};
use crate::bases::{bell_basis, x_states, BellIndex, PauliString};
use crate::channels::combined_tau;
use crate::error::{Error, Result};
use crate::qcore::{DensityMatrix, StateVector};

/// Register layout of the full protocol: the payload qubit followed by
/// the nine-qubit channel.
pub const FULL_LABELS: [&str; 10] = ["A0", "m1", "m3", "m2", "m4", "A1", "A2", "B1", "B2", "C"];

const MENTOR_13: [usize; 2] = [1, 2];
const MENTOR_24: [usize; 2] = [3, 4];
const ALICE_01: [usize; 2] = [0, 5];
const A2: usize = 6;
const B1: usize = 7;
const B2: usize = 8;
const C: usize = 9;

/// Output of one fully specified measurement branch.
#[derive(Debug, Clone)]
pub struct BranchResult {
    pub selector: BranchSelector,
    pub probability: f64,
    /// `A2` and `B1` before corrections.
    pub pre_a2: StateVector,
    pub pre_b1: StateVector,
    pub alice_op: PauliString,
    pub bob_op: PauliString,
    pub a2_state: StateVector,
    pub b1_state: StateVector,
    pub fidelity_rsp: f64,
    pub fidelity_tp: f64,
}

/// A branch in an enumeration; `result` is `None` when the branch cannot
/// occur.
#[derive(Debug, Clone)]
pub struct BranchRecord {
    pub selector: BranchSelector,
    pub probability: f64,
    pub result: Option<BranchResult>,
}

struct Bases {
    bell: [StateVector; 4],
    xi: [StateVector; 2],
    x: [StateVector; 2],
}

impl Bases {
    fn new(inputs: &ProtocolInputs) -> Self {
        let (x0, x1) = inputs.xi.states();
        let (plus, minus) = x_states();
        Self { bell: bell_basis(), xi: [x0, x1], x: [plus, minus] }
    }
}

fn initial_state(inputs: &ProtocolInputs) -> Result<StateVector> {
    Ok(inputs.psi0().tensor(&combined_tau()?))
}

fn measure(
    state: &StateVector,
    targets: &[usize],
    basis: &[StateVector],
    which: usize,
    stage: &str,
) -> Result<(f64, StateVector)> {
    state.project(targets, basis, which).map_err(|e| match e {
        Error::ZeroProbability { probability, .. } => Error::ZeroProbability {
            stage: format!("{stage} outcome {which}"),
            probability,
        },
        other => other,
    })
}

fn mentor(b: &Bases, s: &StateVector, i: BellIndex, j: BellIndex) -> Result<(f64, StateVector)> {
    let (p1, s) = measure(s, &MENTOR_13, &b.bell, i.value() as usize, "Mentor (m1,m3)")?;
    let (p2, s) = measure(&s, &MENTOR_24, &b.bell, j.value() as usize, "Mentor (m2,m4)")?;
    Ok((p1 * p2, s))
}

fn alice(b: &Bases, s: &StateVector, k: BellIndex) -> Result<(f64, StateVector)> {
    measure(s, &ALICE_01, &b.bell, k.value() as usize, "Alice (A0,A1)")
}

fn bob(b: &Bases, s: &StateVector, l: u8) -> Result<(f64, StateVector)> {
    measure(s, &[B2], &b.xi, l as usize, "Bob B2")
}

fn controller(b: &Bases, s: &StateVector, m: u8) -> Result<(f64, StateVector)> {
    measure(s, &[C], &b.x, m as usize, "Controller C")
}

fn finish(
    table: &CorrectionTable,
    inputs: &ProtocolInputs,
    selector: BranchSelector,
    probability: f64,
    state: &StateVector,
) -> Result<BranchResult> {
    let pre_a2 = state.reduced_density(&[A2])?.to_pure()?;
    let pre_b1 = state.reduced_density(&[B1])?.to_pure()?;
    let entry = table.get(&selector);
    let a2_state = pre_a2.apply_unitary(&entry.alice_op.gate(), &[0])?;
    let b1_state = pre_b1.apply_unitary(&entry.bob_op.gate(), &[0])?;
    Ok(BranchResult {
        selector,
        probability,
        fidelity_rsp: inputs.psi1().fidelity(&a2_state)?,
        fidelity_tp: inputs.psi0().fidelity(&b1_state)?,
        pre_a2,
        pre_b1,
        alice_op: entry.alice_op.clone(),
        bob_op: entry.bob_op.clone(),
        a2_state,
        b1_state,
    })
}

/// Runs one branch with the standard correction table.
pub fn run_branch(inputs: &ProtocolInputs, sel: &BranchSelector) -> Result<BranchResult> {
    run_branch_with(standard_table(), inputs, sel)
}

pub fn run_branch_with(
    table: &CorrectionTable,
    inputs: &ProtocolInputs,
    sel: &BranchSelector,
) -> Result<BranchResult> {
    let b = Bases::new(inputs);
    let s = initial_state(inputs)?;
    let (p1, s) = mentor(&b, &s, sel.mentor_i, sel.mentor_j)?;
    let (p2, s) = alice(&b, &s, sel.alice_k)?;
    let (p3, s) = bob(&b, &s, sel.bob_l)?;
    let (p4, s) = controller(&b, &s, sel.controller_m)?;
    finish(table, inputs, *sel, p1 * p2 * p3 * p4, &s)
}

/// All 256 branches in selector order, sharing measurement prefixes.
pub fn enumerate_branches(inputs: &ProtocolInputs) -> Result<Vec<BranchRecord>> {
    enumerate_branches_with(standard_table(), inputs)
}

pub fn enumerate_branches_with(
    table: &CorrectionTable,
    inputs: &ProtocolInputs,
) -> Result<Vec<BranchRecord>> {
    let b = Bases::new(inputs);
    let start = initial_state(inputs)?;
    let mentor_pairs: Vec<(BellIndex, BellIndex)> = BellIndex::ALL
        .iter()
        .flat_map(|&i| BellIndex::ALL.iter().map(move |&j| (i, j)))
        .collect();

    let chunks = mentor_pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut out = Vec::with_capacity(16);
            let after_mentor = possible(mentor(&b, &start, i, j))?;
            for k in BellIndex::ALL {
                let after_alice = chain(&after_mentor, |s| alice(&b, s, k))?;
                for l in 0..2u8 {
                    let after_bob = chain(&after_alice, |s| bob(&b, s, l))?;
                    for m in 0..2u8 {
                        let selector = BranchSelector {
                            mentor_i: i,
                            mentor_j: j,
                            alice_k: k,
                            bob_l: l,
                            controller_m: m,
                        };
                        let record = match chain(&after_bob, |s| controller(&b, s, m))? {
                            Some((p, s)) => BranchRecord {
                                selector,
                                probability: p,
                                result: Some(finish(table, inputs, selector, p, &s)?),
                            },
                            None => BranchRecord { selector, probability: 0.0, result: None },
                        };
                        out.push(record);
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut all: Vec<BranchRecord> = chunks.into_iter().flatten().collect();
    all.sort_by_key(|r| r.selector.index());
    Ok(all)
}

/// Turns a vanishing projection into `None`, keeping other errors.
fn possible(r: Result<(f64, StateVector)>) -> Result<Option<(f64, StateVector)>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(Error::ZeroProbability { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn chain<F>(prev: &Option<(f64, StateVector)>, step: F) -> Result<Option<(f64, StateVector)>>
where
    F: FnOnce(&StateVector) -> Result<(f64, StateVector)>,
{
    match prev {
        None => Ok(None),
        Some((p, s)) => Ok(possible(step(s))?.map(|(q, t)| (p * q, t))),
    }
}

/// Joint `(A2, B1)` state when the Controller withholds the `C`
/// measurement and `C` is traced out instead. Returns the probability of
/// the first four outcomes and the reduced state.
pub fn run_without_controller(
    inputs: &ProtocolInputs,
    i: BellIndex,
    j: BellIndex,
    k: BellIndex,
    l: u8,
) -> Result<(f64, DensityMatrix)> {
    let b = Bases::new(inputs);
    let s = initial_state(inputs)?;
    let (p1, s) = mentor(&b, &s, i, j)?;
    let (p2, s) = alice(&b, &s, k)?;
    let (p3, s) = bob(&b, &s, l)?;
    Ok((p1 * p2 * p3, s.reduced_density(&[A2, B1])?))
}

/// Draws branches with their Born probabilities.
pub struct BranchSampler {
    records: Vec<BranchRecord>,
    dist: WeightedIndex<f64>,
}

impl BranchSampler {
    pub fn new(inputs: &ProtocolInputs) -> Result<Self> {
        let records = enumerate_branches(inputs)?;
        let dist = WeightedIndex::new(records.iter().map(|r| r.probability))
            .map_err(|e| Error::InvalidInput(format!("branch distribution: {e}")))?;
        Ok(Self { records, dist })
    }

    pub fn records(&self) -> &[BranchRecord] {
        &self.records
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> &BranchRecord {
        &self.records[self.dist.sample(rng)]
    }
}

/// One Born-rule run of the protocol, reproducible from `seed`.
pub fn sample_run(inputs: &ProtocolInputs, seed: u64) -> Result<(BranchSelector, BranchResult)> {
    let sampler = BranchSampler::new(inputs)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rec = sampler.sample(&mut rng);
    let result = rec.result.clone().ok_or_else(|| Error::ZeroProbability {
        stage: format!("sampled branch {}", rec.selector),
        probability: rec.probability,
    })?;
    Ok((rec.selector, result))
}
