use std::fmt::Write as _;

use super::{CircuitIR, GateKind};
use crate::error::{Error, Result};
use crate::qcore::C64;

/// An OpenQASM 3 program.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QasmDoc {
    pub text: String,
}

/// Angles `(θ, φ, λ)` with `m = e^{iα} U(θ, φ, λ)`.
fn zyz(m: &[C64; 4]) -> (f64, f64, f64) {
    const EPS: f64 = 1e-14;
    let theta = 2.0 * m[2].norm().atan2(m[0].norm());
    if m[2].norm() < EPS {
        // diagonal: only φ+λ is defined
        return (0.0, 0.0, m[3].arg() - m[0].arg());
    }
    if m[0].norm() < EPS {
        let alpha = (-m[1]).arg();
        return (theta, m[2].arg() - alpha, 0.0);
    }
    let alpha = m[0].arg();
    (theta, m[2].arg() - alpha, (-m[1]).arg() - alpha)
}

fn u_matrix(theta: f64, phi: f64, lambda: f64) -> [C64; 4] {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        C64::new(c, 0.0),
        -C64::from_polar(s, lambda),
        C64::from_polar(s, phi),
        C64::from_polar(c, phi + lambda),
    ]
}

fn operands(qubits: &[usize]) -> String {
    qubits.iter().map(|q| format!("q[{q}]")).collect::<Vec<_>>().join(", ")
}

pub fn export_qasm(c: &CircuitIR) -> QasmDoc {
    let mut t = String::new();
    t.push_str("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    let _ = writeln!(t, "qubit[{}] q;", c.n_qubits());
    let _ = writeln!(t, "bit[{}] c;", c.measured().len().max(1));
    for op in c.ops() {
        let args = operands(&op.qubits);
        let _ = match &op.gate {
            GateKind::H => writeln!(t, "h {args};"),
            GateKind::X => writeln!(t, "x {args};"),
            GateKind::Z => writeln!(t, "z {args};"),
            GateKind::Cx => writeln!(t, "cx {args};"),
            GateKind::Cz => writeln!(t, "cz {args};"),
            GateKind::Ccx => writeln!(t, "ccx {args};"),
            GateKind::Mcx => writeln!(t, "ctrl({}) @ x {args};", op.qubits.len() - 1),
            GateKind::Custom { name, matrix } => {
                let (th, ph, la) = zyz(matrix);
                writeln!(t, "u({th}, {ph}, {la}) {args}; // {name}")
            }
        };
    }
    for (i, q) in c.measured().iter().enumerate() {
        let _ = writeln!(t, "c[{i}] = measure q[{q}];");
    }
    QasmDoc { text: t }
}

fn qasm_err(line: usize, message: impl Into<String>) -> Error {
    Error::Qasm { line, message: message.into() }
}

fn parse_index(s: &str, reg: &str, line: usize) -> Result<usize> {
    let s = s.trim();
    s.strip_prefix(reg)
        .and_then(|r| r.strip_prefix('['))
        .and_then(|r| r.strip_suffix(']'))
        .and_then(|r| r.trim().parse().ok())
        .ok_or_else(|| qasm_err(line, format!("expected {reg}[index], found `{s}`")))
}

/// Parses the subset of OpenQASM 3 produced by [`export_qasm`].
pub fn parse_qasm(text: &str) -> Result<CircuitIR> {
    let mut circuit: Option<CircuitIR> = None;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let code = raw.split("//").next().unwrap_or("").trim();
        if code.is_empty() {
            continue;
        }
        let stmt = code
            .strip_suffix(';')
            .ok_or_else(|| qasm_err(line, "missing `;`"))?
            .trim();
        if stmt.starts_with("OPENQASM") || stmt.starts_with("include") || stmt.starts_with("bit[") {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("qubit[") {
            let size = rest
                .split(']')
                .next()
                .and_then(|s| s.trim().parse().ok())
                .ok_or_else(|| qasm_err(line, "bad qubit declaration"))?;
            circuit = Some(CircuitIR::new(size));
            continue;
        }
        let c = circuit.as_mut().ok_or_else(|| qasm_err(line, "statement before qubit declaration"))?;
        if let Some((_, rhs)) = stmt.split_once('=') {
            let q = rhs
                .trim()
                .strip_prefix("measure")
                .ok_or_else(|| qasm_err(line, "only measurements may be assigned"))?;
            let q = parse_index(q, "q", line)?;
            c.measure(q).map_err(|e| qasm_err(line, e.to_string()))?;
            continue;
        }
        let (head, args) = match stmt.find([' ', '(']) {
            Some(_) if stmt.starts_with("u(") || stmt.starts_with("ctrl(") => {
                let close = stmt.find(')').ok_or_else(|| qasm_err(line, "unclosed parameter list"))?;
                let after = &stmt[close + 1..];
                let (gate_rest, args) = if stmt.starts_with("ctrl(") {
                    let after = after.trim_start().strip_prefix('@').ok_or_else(|| qasm_err(line, "expected `@`"))?;
                    let after = after.trim_start().strip_prefix('x').ok_or_else(|| qasm_err(line, "only ctrl @ x is supported"))?;
                    ("mcx", after)
                } else {
                    ("u", after)
                };
                (format!("{gate_rest}{}", &stmt[stmt.find('(').unwrap()..=close]), args)
            }
            Some(i) => (stmt[..i].to_string(), &stmt[i..]),
            None => return Err(qasm_err(line, format!("unrecognized statement `{stmt}`"))),
        };
        let qubits = args
            .split(',')
            .map(|a| parse_index(a, "q", line))
            .collect::<Result<Vec<_>>>()?;
        let gate = match head.as_str() {
            "h" => GateKind::H,
            "x" => GateKind::X,
            "z" => GateKind::Z,
            "cx" => GateKind::Cx,
            "cz" => GateKind::Cz,
            "ccx" => GateKind::Ccx,
            h if h.starts_with("mcx(") => {
                let k: usize = h[4..h.len() - 1].trim().parse().map_err(|_| qasm_err(line, "bad control count"))?;
                if k + 1 != qubits.len() {
                    return Err(qasm_err(line, "control count does not match operands"));
                }
                GateKind::Mcx
            }
            h if h.starts_with("u(") => {
                let params = h[2..h.len() - 1]
                    .split(',')
                    .map(|p| p.trim().parse::<f64>().map_err(|_| qasm_err(line, format!("bad angle `{p}`"))))
                    .collect::<Result<Vec<_>>>()?;
                let [th, ph, la] = params[..] else {
                    return Err(qasm_err(line, "u takes three angles"));
                };
                GateKind::Custom { name: "u".into(), matrix: u_matrix(th, ph, la) }
            }
            other => return Err(qasm_err(line, format!("unsupported gate `{other}`"))),
        };
        c.push(gate, &qubits).map_err(|e| qasm_err(line, e.to_string()))?;
    }
    circuit.ok_or_else(|| qasm_err(0, "no qubit register declared"))
}
