//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion
//! and exits non-zero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use mentorq::circuit::{build_protocol_circuit, export_qasm, output_state, parse_qasm, simulate_marginals, ALICE_OUT, BOB_OUT};
use mentorq::noise::{average_fidelity, read_csv, summarize, sweep, write_csv, FidelityRecord, NoiseKind, NoiseStrength, SweepGrid};
use mentorq::protocol::{run_generalized, standard_table, BranchSelector, ProtocolInputs, BRANCH_COUNT};
use mentorq::qcore::{StateVector, C64};
use mentorq::verify;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok { Ok(detail) } else { Err(detail) }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn grid5() -> Vec<f64> {
    SweepGrid::linspace(0.0, 1.0, 5)
}

/// Sweep, then serialize and re-read the CSV so checks run on the artifact.
fn csv_sweep(grid: &SweepGrid) -> Result<Vec<FidelityRecord>, String> {
    let recs = sweep(grid, 0.0).map_err(err)?;
    let mut buf = Vec::new();
    write_csv(&recs, &mut buf, false).map_err(err)?;
    read_csv(&buf[..]).map_err(err)
}

fn noiseless_determinism() -> Outcome {
    let r = verify::determinism_suite(standard_table(), 100, 20_240_601).map_err(err)?;
    check(
        r.passed() && r.branches == 100 * BRANCH_COUNT,
        format!(
            "{} branches, min F_tp={:.12}, min F_rsp={:.12}, {} failures",
            r.branches,
            r.min_fidelity_tp,
            r.min_fidelity_rsp,
            r.failures.len()
        ),
    )
}

fn channel_preparation() -> Outcome {
    let r = verify::channel_suite().map_err(err)?;
    check(
        r.passed(),
        format!(
            "prep deviation {:.1e}, reconstruction deviation {:.1e}",
            r.preparation_deviation, r.reconstruction_deviation
        ),
    )
}

fn table_soundness() -> Outcome {
    let r = verify::table_suite(standard_table(), &verify::generic_inputs()).map_err(err)?;
    check(
        r.passed(),
        format!("{} entries checked, {} mismatches, {} ambiguous", r.entries_checked, r.mismatches.len(), r.ambiguous.len()),
    )
}

fn bit_flip_closed_form() -> Outcome {
    let grid = SweepGrid::new(NoiseKind::BitFlip, grid5(), grid5(), grid5()).map_err(err)?;
    let recs = sweep(&grid, 0.0).map_err(err)?;
    let max_dev = recs.iter().map(|r| r.deviation).fold(0.0, f64::max);
    let edge = recs
        .iter()
        .filter(|r| r.strength == 0.0 || r.strength == 1.0)
        .map(|r| (r.numeric_f - 1.0).abs())
        .fold(0.0, f64::max);
    let diag = SweepGrid::new(NoiseKind::BitFlip, SweepGrid::linspace(0.0, 1.0, 11), vec![0.5], vec![0.5]).map_err(err)?;
    let diag_dev = sweep(&diag, 0.0)
        .map_err(err)?
        .iter()
        .map(|r| (r.numeric_f - 1.0).abs())
        .fold(0.0, f64::max);
    check(
        max_dev < 1e-6 && edge < 1e-9 && diag_dev < 1e-9,
        format!("max |numeric − closed form| {max_dev:.2e}; |F−1| at λ∈{{0,1}} {edge:.1e}, on b²=|y|²=½ {diag_dev:.1e}"),
    )
}

fn zero_noise_unity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let zero = NoiseStrength::new(0.0).map_err(err)?;
    let mut worst: f64 = 0.0;
    for _ in 0..3 {
        let inputs = ProtocolInputs::random(&mut rng);
        for kind in NoiseKind::ALL {
            worst = worst.max((average_fidelity(kind, zero, &inputs).map_err(err)? - 1.0).abs());
        }
    }
    check(worst < 1e-9, format!("max |F−1| {worst:.1e} over 4 kinds × 3 inputs"))
}

fn other_closed_forms() -> Outcome {
    let mut lines = Vec::new();
    for kind in [NoiseKind::PhaseFlip, NoiseKind::PhaseDamping, NoiseKind::Depolarizing] {
        let grid = SweepGrid::new(kind, grid5(), grid5(), grid5()).map_err(err)?;
        let s = summarize(&sweep(&grid, 0.0).map_err(err)?);
        let d = s.first().ok_or("empty sweep")?.max_deviation;
        lines.push(format!("{kind} max dev {d:.2e}{}", if d < 1e-6 { "" } else { " (exceeds 1e-6)" }));
    }
    // Running the comparison and reporting it is the criterion.
    Ok(lines.join("; "))
}

fn figure_shapes() -> Outcome {
    let bf = csv_sweep(&SweepGrid::new(NoiseKind::BitFlip, SweepGrid::linspace(0.0, 1.0, 21), vec![0.4], vec![0.3]).map_err(err)?)?;
    let sym = (0..bf.len())
        .map(|i| (bf[i].numeric_f - bf[bf.len() - 1 - i].numeric_f).abs())
        .fold(0.0, f64::max);
    let mut peak_ok = true;
    for kind in [NoiseKind::PhaseFlip, NoiseKind::PhaseDamping] {
        let grid = SweepGrid::new(kind, SweepGrid::linspace(0.0, 1.0, 11), vec![0.1, 0.4, 0.8], vec![0.3, 0.6]).map_err(err)?;
        let recs = csv_sweep(&grid)?;
        for (b2, y2) in [0.1, 0.4, 0.8].iter().flat_map(|b| [0.3, 0.6].map(|y| (*b, y))) {
            let line: Vec<&FidelityRecord> = recs.iter().filter(|r| r.b2 == b2 && r.y2 == y2).collect();
            let at_zero = line.iter().find(|r| r.strength == 0.0).ok_or("missing zero strength")?.numeric_f;
            peak_ok &= line.iter().all(|r| r.numeric_f <= at_zero + 1e-12);
        }
    }
    let diag = csv_sweep(&SweepGrid::new(NoiseKind::BitFlip, SweepGrid::linspace(0.0, 1.0, 11), vec![0.5], vec![0.5]).map_err(err)?)?;
    let flat = diag.iter().map(|r| (r.numeric_f - 1.0).abs()).fold(0.0, f64::max);
    check(
        sym < 1e-9 && peak_ok && flat < 1e-9,
        format!("λ↔1−λ asymmetry {sym:.1e}; PF/PD peak at zero: {peak_ok}; bit-flip diagonal |F−1| {flat:.1e}"),
    )
}

fn deferred_circuit() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    let mut min_f: f64 = 1.0;
    for _ in 0..20 {
        let inputs = ProtocolInputs::random(&mut rng);
        let c = build_protocol_circuit(&inputs).map_err(err)?;
        min_f = min_f.min(output_state(&c).map_err(err)?.fidelity(&inputs.joint_target()).map_err(err)?);
    }
    let s5 = 5f64.sqrt();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let example = ProtocolInputs::new(C64::new(1.0 / s5, 0.0), C64::new(2.0 / s5, 0.0), h, h).map_err(err)?;
    let m = simulate_marginals(&build_protocol_circuit(&example).map_err(err)?).map_err(err)?;
    let (p4, p7) = (m[&ALICE_OUT][1], m[&BOB_OUT][1]);
    check(
        min_f >= 1.0 - 1e-10 && (p4 - 0.5).abs() < 1e-9 && (p7 - 0.8).abs() < 1e-9,
        format!("min fidelity {min_f:.12}; P(q4=1)={p4:.10}, P(q7=1)={p7:.10}"),
    )
}

fn ghz(rng: &mut ChaCha8Rng, n: usize, real: bool) -> StateVector {
    let t = rng.random::<f64>() * std::f64::consts::FRAC_PI_2;
    let (p0, p1) = if real { (0.0, 0.0) } else { (rng.random::<f64>() * 6.3, rng.random::<f64>() * 6.3) };
    let mut amps = vec![C64::new(0.0, 0.0); 1 << n];
    amps[0] = C64::from_polar(t.cos(), p0);
    amps[(1 << n) - 1] += C64::from_polar(t.sin(), p1);
    StateVector::new(n, amps).expect("normalized")
}

fn generalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut min_f: f64 = 1.0;
    for (n, m) in [(1, 1), (2, 3), (3, 2), (4, 4)] {
        let payload = ghz(&mut rng, n, false);
        let target = ghz(&mut rng, m, true);
        for _ in 0..10 {
            let sel = BranchSelector::from_index(rng.random_range(0..BRANCH_COUNT)).map_err(err)?;
            let r = run_generalized(&payload, &target, &sel).map_err(err)?;
            min_f = min_f.min(r.fidelity_tp).min(r.fidelity_rsp);
        }
    }
    check(min_f >= 1.0 - 1e-10, format!("min fidelity {min_f:.12} over 4 shapes × 10 selectors"))
}

fn qasm_round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut worst: f64 = 0.0;
    let mut deterministic = true;
    for _ in 0..5 {
        let inputs = ProtocolInputs::random(&mut rng);
        let c = build_protocol_circuit(&inputs).map_err(err)?;
        let doc = export_qasm(&c);
        deterministic &= doc == export_qasm(&build_protocol_circuit(&inputs).map_err(err)?);
        let parsed = parse_qasm(&doc.text).map_err(err)?;
        let (a, b) = (simulate_marginals(&c).map_err(err)?, simulate_marginals(&parsed).map_err(err)?);
        for (q, d) in &a {
            let e = b.get(q).ok_or("measured qubit lost in round trip")?;
            worst = worst.max((d[0] - e[0]).abs()).max((d[1] - e[1]).abs());
        }
    }
    check(worst < 1e-12 && deterministic, format!("max marginal drift {worst:.1e}; byte-identical export: {deterministic}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("noiseless determinism", noiseless_determinism),
        ("channel preparation", channel_preparation),
        ("correction-table soundness", table_soundness),
        ("bit-flip closed form", bit_flip_closed_form),
        ("zero-noise unity", zero_noise_unity),
        ("phase-flip/phase-damping/depolarizing closed forms", other_closed_forms),
        ("figure shapes", figure_shapes),
        ("deferred-measurement circuit", deferred_circuit),
        ("GHZ generalization", generalization),
        ("QASM round trip", qasm_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.2}s]", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.2}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
