//! Noiseless verification suites: branch determinism, correction-table
//! soundness and channel preparation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bases::{bell_state, BellIndex, PauliString};
use crate::channels::{combined_tau, m_state, m_state_by_projection, ChannelPair};
use crate::error::Result;
use crate::protocol::{enumerate_branches_with, BranchSelector, CorrectionTable, ProtocolInputs};
use crate::qcore::{StateVector, C64};

/// Minimum acceptable noiseless fidelity is `1 − FIDELITY_TOL`.
pub const FIDELITY_TOL: f64 = 1e-10;
/// Amplitude tolerance for channel identities.
pub const AMPLITUDE_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Failure {
    pub selector: BranchSelector,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct DeterminismReport {
    pub inputs: usize,
    pub branches: usize,
    pub min_fidelity_tp: f64,
    pub min_fidelity_rsp: f64,
    pub max_probability_error: f64,
    pub failures: Vec<Failure>,
}

impl DeterminismReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Every branch of `count` seeded random inputs must reach both targets.
pub fn determinism_suite(table: &CorrectionTable, count: usize, seed: u64) -> Result<DeterminismReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = DeterminismReport {
        inputs: count,
        branches: 0,
        min_fidelity_tp: 1.0,
        min_fidelity_rsp: 1.0,
        max_probability_error: 0.0,
        failures: Vec::new(),
    };
    for _ in 0..count {
        let inputs = ProtocolInputs::random(&mut rng);
        let records = enumerate_branches_with(table, &inputs)?;
        let total: f64 = records.iter().map(|r| r.probability).sum();
        report.max_probability_error = report.max_probability_error.max((total - 1.0).abs());
        for rec in &records {
            let Some(res) = &rec.result else { continue };
            report.branches += 1;
            report.min_fidelity_tp = report.min_fidelity_tp.min(res.fidelity_tp);
            report.min_fidelity_rsp = report.min_fidelity_rsp.min(res.fidelity_rsp);
            if res.fidelity_tp < 1.0 - FIDELITY_TOL || res.fidelity_rsp < 1.0 - FIDELITY_TOL {
                report.failures.push(Failure {
                    selector: rec.selector,
                    detail: format!(
                        "F_tp={:.12} F_rsp={:.12} (U_Bob={}, U_Alice={})",
                        res.fidelity_tp, res.fidelity_rsp, res.bob_op, res.alice_op
                    ),
                });
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone)]
pub struct TableReport {
    pub entries_checked: usize,
    pub mismatches: Vec<Failure>,
    /// Selectors where more than one phase class of corrections works,
    /// which would make the check inconclusive.
    pub ambiguous: Vec<BranchSelector>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.ambiguous.is_empty()
    }
}

/// Closure strings that take `pre` to `target` up to global phase.
pub fn valid_corrections(pre: &StateVector, target: &StateVector) -> Result<Vec<PauliString>> {
    let mut out = Vec::new();
    for p in PauliString::closure() {
        let moved = pre.apply_unitary(&p.gate(), &[0])?;
        if target.fidelity(&moved)? >= 1.0 - FIDELITY_TOL {
            out.push(p);
        }
    }
    Ok(out)
}

fn single_class(valid: &[PauliString]) -> bool {
    valid.windows(2).all(|w| w[0].equivalent(&w[1]))
}

/// Brute-force search over the eight-element closure for every selector,
/// on each of the given (generic) inputs.
pub fn table_suite(table: &CorrectionTable, inputs: &[ProtocolInputs]) -> Result<TableReport> {
    let mut report = TableReport { entries_checked: 0, mismatches: Vec::new(), ambiguous: Vec::new() };
    for inp in inputs {
        let records = enumerate_branches_with(table, inp)?;
        for rec in &records {
            let Some(res) = &rec.result else { continue };
            report.entries_checked += 1;
            let bob_valid = valid_corrections(&res.pre_b1, &inp.psi0())?;
            let alice_valid = valid_corrections(&res.pre_a2, &inp.psi1())?;
            if !single_class(&bob_valid) || !single_class(&alice_valid) {
                report.ambiguous.push(rec.selector);
            }
            let entry = table.get(&rec.selector);
            let bob_ok = bob_valid.iter().any(|p| p.equivalent(&entry.bob_op));
            let alice_ok = alice_valid.iter().any(|p| p.equivalent(&entry.alice_op));
            if !bob_ok || !alice_ok {
                let names = |v: &[PauliString]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join("/");
                report.mismatches.push(Failure {
                    selector: rec.selector,
                    detail: format!(
                        "stored U_Bob={} U_Alice={}; brute force finds U_Bob∈{{{}}} U_Alice∈{{{}}}",
                        entry.bob_op,
                        entry.alice_op,
                        names(&bob_valid),
                        names(&alice_valid)
                    ),
                });
            }
        }
    }
    Ok(report)
}

/// Fixed generic inputs for the table check: unequal magnitudes and a
/// non-trivial phase so that no two correction classes coincide.
pub fn generic_inputs() -> Vec<ProtocolInputs> {
    vec![
        ProtocolInputs::new(
            C64::new(0.6, 0.0),
            C64::from_polar(0.8, 0.9),
            0.3f64.sqrt(),
            0.7f64.sqrt(),
        )
        .expect("normalized"),
        ProtocolInputs::new(
            C64::from_polar(0.2f64.sqrt(), 0.4),
            C64::from_polar(0.8f64.sqrt(), -1.3),
            0.9f64.sqrt(),
            0.1f64.sqrt(),
        )
        .expect("normalized"),
    ]
}

#[derive(Debug, Clone)]
pub struct ChannelReport {
    /// Gate-sequence output vs closed form, worst of Ξ₁ and Ξ₂.
    pub preparation_deviation: f64,
    /// `¼ Σ Φ_i ⊗ Φ_j ⊗ M_ij` vs `|τ⟩`.
    pub reconstruction_deviation: f64,
    /// Worst `1 − |⟨M_ij(listed)|M_ij(projected)⟩|²`.
    pub projection_infidelity: f64,
    /// Worst `|P(i,j) − 1/16|`.
    pub mentor_probability_error: f64,
}

impl ChannelReport {
    pub fn passed(&self) -> bool {
        self.preparation_deviation < AMPLITUDE_TOL
            && self.reconstruction_deviation < AMPLITUDE_TOL
            && self.projection_infidelity < AMPLITUDE_TOL
            && self.mentor_probability_error < AMPLITUDE_TOL
    }
}

pub fn channel_suite() -> Result<ChannelReport> {
    let pair = ChannelPair::prepare()?;
    let tau = combined_tau()?;
    let mut recon = StateVector::new(9, vec![C64::new(0.0, 0.0); 512])?;
    let mut infidelity = 0.0_f64;
    let mut prob_err = 0.0_f64;
    for i in BellIndex::ALL {
        for j in BellIndex::ALL {
            let listed = m_state(i, j);
            let term = bell_state(i).tensor(&bell_state(j)).tensor(&listed);
            recon = recon.add(&term.scaled(C64::new(0.25, 0.0)))?;
            let (p, projected) = m_state_by_projection(&tau, i, j)?;
            prob_err = prob_err.max((p - 1.0 / 16.0).abs());
            infidelity = infidelity.max(1.0 - listed.fidelity(&projected)?);
        }
    }
    Ok(ChannelReport {
        preparation_deviation: pair.analytic_deviation()?,
        reconstruction_deviation: recon.max_abs_diff(&tau)?,
        projection_infidelity: infidelity,
        mentor_probability_error: prob_err,
    })
}
