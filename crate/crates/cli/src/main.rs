//! `mentorq` — verify, sample, sweep and export the Mentor-initiated
//! hybrid bidirectional communication protocol.

mod config;

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use mentorq::bases::{BellIndex, Pauli, PauliString};
use mentorq::channels::{combined_tau, m_state, xi1_analytic, xi2_analytic, M_LABELS, TAU_LABELS, XI1_LABELS, XI2_LABELS};
use mentorq::circuit::{build_protocol_circuit, export_qasm, simulate_marginals};
use mentorq::noise::{summarize, sweep, write_csv, NoiseKind, SweepGrid};
use mentorq::protocol::{sample_run, standard_table, BranchSelector, ProtocolInputs};
use mentorq::qcore::{StateVector, C64};
use mentorq::verify;
use sha2::{Digest, Sha256};

use config::Config;

#[derive(Parser, Debug)]
#[command(name = "mentorq", version, about = "Controller-gated hybrid teleportation / remote state preparation simulator")]
struct Cli {
    /// Optional `key = value` file supplying defaults for any flag.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Noiseless determinism, correction-table and channel checks.
    Verify(VerifyArgs),
    /// Noisy average fidelity over a parameter grid, as CSV.
    Sweep(SweepArgs),
    /// One Born-sampled run of the protocol with a transcript.
    Run(RunArgs),
    /// Write the deferred-measurement circuit as OpenQASM 3.
    ExportQasm(ExportArgs),
    /// Print the entangled channel states.
    Channels(ChannelArgs),
}

#[derive(Args, Debug)]
struct PayloadArgs {
    /// Amplitude of |0⟩ in the teleported state.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<f64>,
    /// Magnitude-carrying amplitude of |1⟩ in the teleported state.
    #[arg(long, allow_hyphen_values = true)]
    y: Option<f64>,
    /// Relative phase of `y`, in radians.
    #[arg(long, allow_hyphen_values = true)]
    y_phase: Option<f64>,
    /// Amplitude of |0⟩ in the remotely prepared state.
    #[arg(long)]
    a: Option<f64>,
    /// Amplitude of |1⟩ in the remotely prepared state.
    #[arg(long)]
    b: Option<f64>,
    /// Rescale both pairs to unit norm instead of rejecting them.
    #[arg(long)]
    normalize: bool,
}

impl PayloadArgs {
    fn resolve(&self, cfg: &Config) -> Result<ProtocolInputs> {
        let get = |flag: Option<f64>, key: &str, default: f64| -> Result<f64> {
            Ok(cfg.pick(flag, key)?.unwrap_or(default))
        };
        let mut x = get(self.x, "x", 0.6)?;
        let mut y = get(self.y, "y", 0.8)?;
        let phase = get(self.y_phase, "y-phase", 0.0)?;
        let mut a = get(self.a, "a", 0.6)?;
        let mut b = get(self.b, "b", 0.8)?;
        if cfg.flag(self.normalize, "normalize")? {
            let n = x.hypot(y);
            let m = a.hypot(b);
            if n == 0.0 || m == 0.0 {
                bail!("cannot normalize a zero vector");
            }
            (x, y, a, b) = (x / n, y / n, a / m, b / m);
        }
        ProtocolInputs::new(C64::new(x, 0.0), C64::from_polar(y, phase), a, b)
            .with_context(|| format!("invalid amplitudes x={x}, y={y}, a={a}, b={b}"))
    }
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Number of random input quadruples.
    #[arg(long)]
    inputs: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Replace one table entry with a wrong correction, written `i,j,k,l,m`.
    #[arg(long, hide = true)]
    corrupt_entry: Option<String>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// bitflip, phaseflip, phasedamping, depolarizing, or all.
    #[arg(long)]
    kind: Option<String>,
    /// Strength grid: a value, a comma list, or `start:stop:count`.
    #[arg(long, visible_aliases = ["lambda", "gamma", "delta", "tau"])]
    strength: Option<String>,
    /// b² grid.
    #[arg(long)]
    b2: Option<String>,
    /// |y|² grid.
    #[arg(long)]
    y2: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    y_phase: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
    /// Add the probability-weighted average as an extra column.
    #[arg(long)]
    with_weighted: bool,
}

#[derive(Args, Debug)]
struct RunArgs {
    #[command(flatten)]
    payload: PayloadArgs,
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    payload: PayloadArgs,
    /// Output file; defaults to `protocol_<hash>.qasm` in `--out-dir`.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Which {
    Xi1,
    Xi2,
    Tau,
    M,
}

#[derive(Args, Debug)]
struct ChannelArgs {
    #[arg(long, value_enum, default_value = "tau")]
    which: Which,
    /// Mentor outcome on (m1, m3), for `--which m`.
    #[arg(long)]
    i: Option<u8>,
    /// Mentor outcome on (m2, m4), for `--which m`.
    #[arg(long)]
    j: Option<u8>,
}

fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let values = match parts[..] {
        [one] => one
            .split(',')
            .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad number `{v}`")))
            .collect::<Result<Vec<_>>>()?,
        [start, stop, count] => {
            let start: f64 = start.trim().parse().with_context(|| format!("bad start in `{spec}`"))?;
            let stop: f64 = stop.trim().parse().with_context(|| format!("bad stop in `{spec}`"))?;
            let count: usize = count.trim().parse().with_context(|| format!("bad count in `{spec}`"))?;
            if count == 0 {
                bail!("grid `{spec}` has no points");
            }
            SweepGrid::linspace(start, stop, count)
        }
        _ => bail!("grid `{spec}` is not `value`, `v1,v2,…` or `start:stop:count`"),
    };
    if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
        bail!("grid `{spec}` leaves [0, 1] at {v}");
    }
    Ok(values)
}

fn parse_selector(s: &str) -> Result<BranchSelector> {
    let v = s
        .split(',')
        .map(|p| p.trim().parse::<u8>().with_context(|| format!("bad selector component `{p}`")))
        .collect::<Result<Vec<_>>>()?;
    let [i, j, k, l, m] = v[..] else { bail!("selector must be `i,j,k,l,m`") };
    Ok(BranchSelector::new(i, j, k, l, m)?)
}

fn cmd_verify(args: &VerifyArgs, cfg: &Config) -> Result<bool> {
    let n = cfg.pick(args.inputs, "inputs")?.unwrap_or(100);
    let seed = cfg.pick(args.seed, "seed")?.unwrap_or(0);
    let mut table = standard_table().clone();
    if let Some(s) = cfg.pick(args.corrupt_entry.clone(), "corrupt-entry")? {
        let sel = parse_selector(&s)?;
        let entry = table.get(&sel).clone();
        let mut wrong = entry.bob_op.factors().to_vec();
        wrong.push(Pauli::X);
        table = table.with_override(&sel, PauliString::new(wrong), entry.alice_op);
        eprintln!("note: table entry {sel} corrupted for testing");
    }

    let det = verify::determinism_suite(&table, n, seed)?;
    let worst = (1.0 - det.min_fidelity_tp).max(1.0 - det.min_fidelity_rsp);
    println!(
        "determinism: {} — {} inputs, {}/{} branches, min fidelity 1−{:.1e}",
        verdict(det.passed()),
        det.inputs,
        det.branches - det.failures.len(),
        det.branches,
        worst.max(0.0)
    );
    for f in det.failures.iter().take(10) {
        eprintln!("  failing selector {}: {}", f.selector, f.detail);
    }

    let tab = verify::table_suite(&table, &verify::generic_inputs())?;
    println!(
        "correction table: {} — {} entries checked, {} mismatches",
        verdict(tab.passed()),
        tab.entries_checked,
        tab.mismatches.len()
    );
    for m in tab.mismatches.iter().take(10) {
        eprintln!("  failing selector {}: {}", m.selector, m.detail);
    }

    let ch = verify::channel_suite()?;
    println!(
        "channels: {} — preparation {:.1e}, reconstruction {:.1e}, M_ij projection {:.1e}",
        verdict(ch.passed()),
        ch.preparation_deviation,
        ch.reconstruction_deviation,
        ch.projection_infidelity
    );
    Ok(det.passed() && tab.passed() && ch.passed())
}

fn verdict(ok: bool) -> &'static str {
    if ok { "PASS" } else { "FAIL" }
}

fn cmd_sweep(args: &SweepArgs, cfg: &Config) -> Result<()> {
    let kind = cfg.pick(args.kind.clone(), "kind")?.unwrap_or_else(|| "bitflip".into());
    let kinds = if kind.eq_ignore_ascii_case("all") { NoiseKind::ALL.to_vec() } else { vec![kind.parse()?] };
    let strengths = parse_grid(&cfg.pick(args.strength.clone(), "strength")?.unwrap_or_else(|| "0:1:11".into()))?;
    let b2 = parse_grid(&cfg.pick(args.b2.clone(), "b2")?.unwrap_or_else(|| "0.4".into()))?;
    let y2 = parse_grid(&cfg.pick(args.y2.clone(), "y2")?.unwrap_or_else(|| "0.3".into()))?;
    let phase = cfg.pick(args.y_phase, "y-phase")?.unwrap_or(0.0);
    let out = cfg.pick(args.out.clone(), "out")?;
    let with_weighted = cfg.flag(args.with_weighted, "with-weighted")?;

    let mut records = Vec::new();
    for kind in kinds {
        let grid = SweepGrid::new(kind, strengths.clone(), b2.clone(), y2.clone())?;
        records.extend(sweep(&grid, phase)?);
    }
    match &out {
        Some(path) => {
            let file = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            write_csv(&records, std::io::BufWriter::new(file), with_weighted)?;
            eprintln!("wrote {} rows to {}", records.len(), path.display());
        }
        None => write_csv(&records, std::io::stdout().lock(), with_weighted)?,
    }
    for s in summarize(&records) {
        eprintln!("{}: {} points, max |numeric − closed form| = {:.3e}", s.kind, s.points, s.max_deviation);
    }
    if phase != 0.0 && records.iter().any(|r| r.kind == NoiseKind::BitFlip) {
        eprintln!("note: the bit-flip closed form assumes a real payload; expect deviations for y-phase ≠ 0");
    }
    Ok(())
}

fn ket(c: C64) -> String {
    if c.im.abs() < 1e-12 {
        format!("{:+.6}", c.re)
    } else {
        format!("({:+.6}{:+.6}i)", c.re, c.im)
    }
}

fn qubit_string(s: &StateVector) -> String {
    format!("{}|0⟩ {}|1⟩", ket(s.amp(0)), ket(s.amp(1)))
}

fn cmd_run(args: &RunArgs, cfg: &Config) -> Result<String> {
    let inputs = args.payload.resolve(cfg)?;
    let seed = cfg.pick(args.seed, "seed")?.unwrap_or(0);
    let (sel, r) = sample_run(&inputs, seed)?;
    let mut t = String::new();
    writeln!(t, "payload  |ψ₀⟩ = {}  (teleported to B1)", qubit_string(&inputs.psi0()))?;
    writeln!(t, "target   |ψ₁⟩ = {}  (prepared at A2)", qubit_string(&inputs.psi1()))?;
    writeln!(t, "seed     {seed}")?;
    writeln!(t, "Mentor   (m1,m3) → {}, (m2,m4) → {}", sel.mentor_i, sel.mentor_j)?;
    writeln!(t, "Alice    (A0,A1) → {}", sel.alice_k)?;
    writeln!(t, "Bob      B2 → ξ{}", sel.bob_l)?;
    writeln!(t, "Control  C → {}", if sel.controller_m == 0 { "+" } else { "−" })?;
    writeln!(t, "branch   #{} with probability {:.6}", sel.index(), r.probability)?;
    writeln!(t, "Bob      B1 before = {}, applies {}", qubit_string(&r.pre_b1), r.bob_op)?;
    writeln!(t, "Alice    A2 before = {}, applies {}", qubit_string(&r.pre_a2), r.alice_op)?;
    writeln!(t, "result   B1 = {}, A2 = {}", qubit_string(&r.b1_state), qubit_string(&r.a2_state))?;
    write!(t, "F_tp={:.6}, F_rsp={:.6}", r.fidelity_tp, r.fidelity_rsp)?;
    Ok(t)
}

fn inputs_hash(inputs: &ProtocolInputs) -> String {
    let key = format!(
        "x={:?},{:?};y={:?},{:?};a={:?};b={:?}",
        inputs.x.re,
        inputs.x.im,
        inputs.y.re,
        inputs.y.im,
        inputs.a(),
        inputs.b()
    );
    Sha256::digest(key.as_bytes()).iter().take(6).map(|b| format!("{b:02x}")).collect()
}

fn cmd_export(args: &ExportArgs, cfg: &Config) -> Result<String> {
    let inputs = args.payload.resolve(cfg)?;
    let circuit = build_protocol_circuit(&inputs)?;
    let doc = export_qasm(&circuit);
    let path = match cfg.pick(args.out.clone(), "out")? {
        Some(p) => p,
        None => {
            let dir = cfg.pick(args.out_dir.clone(), "out-dir")?.unwrap_or_else(|| PathBuf::from("."));
            dir.join(format!("protocol_{}.qasm", inputs_hash(&inputs)))
        }
    };
    write_file(&path, doc.text.as_bytes())?;
    eprintln!("wrote {}", path.display());
    let marginals = simulate_marginals(&circuit)?;
    let parts: Vec<String> = marginals
        .iter()
        .flat_map(|(q, d)| {
            d.iter()
                .enumerate()
                .filter(|(_, p)| **p > 1e-12)
                .map(move |(o, p)| format!("q{q}: P({o})={p:.4}"))
        })
        .collect();
    Ok(parts.join(", "))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    f.write_all(bytes).with_context(|| format!("writing {}", path.display()))
}

fn dump(s: &StateVector, labels: &[&str]) -> String {
    let n = s.n_qubits();
    eprintln!("# qubits: {}", labels.join(" "));
    s.support(1e-12)
        .into_iter()
        .map(|idx| format!("{} |{:0n$b}⟩", ket(s.amp(idx)), idx))
        .collect::<Vec<_>>()
        .join("\n")
}

fn cmd_channels(args: &ChannelArgs) -> Result<String> {
    Ok(match args.which {
        Which::Xi1 => dump(&xi1_analytic(), &XI1_LABELS),
        Which::Xi2 => dump(&xi2_analytic(), &XI2_LABELS),
        Which::Tau => dump(&combined_tau()?, &TAU_LABELS),
        Which::M => {
            let (Some(i), Some(j)) = (args.i, args.j) else { bail!("--which m needs --i and --j") };
            dump(&m_state(BellIndex::new(i)?, BellIndex::new(j)?), &M_LABELS)
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = (|| -> Result<bool> {
        let cfg = match &cli.config {
            Some(p) => Config::load(p)?,
            None => Config::default(),
        };
        match &cli.command {
            Command::Verify(a) => return cmd_verify(a, &cfg),
            Command::Sweep(a) => cmd_sweep(a, &cfg)?,
            Command::Run(a) => println!("{}", cmd_run(a, &cfg)?),
            Command::ExportQasm(a) => println!("{}", cmd_export(a, &cfg)?),
            Command::Channels(a) => println!("{}", cmd_channels(a)?),
        }
        Ok(true)
    })();
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
