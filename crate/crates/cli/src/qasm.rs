//! OpenQASM 3.0 emission and a matching round-trip parser for the emitted
//! subset.
//!
//! Qubit `q[i]` corresponds to bit `i` of the simulator's little-endian
//! basis labels. Multi-controlled NOTs are emitted as `ctrl(k) @ x ...`;
//! with decomposition enabled, MCX(k >= 3) is lowered to its clean-ancilla
//! Toffoli ladder over a dedicated `anc` array declared after `q`.

use qimseg::cost::mcx_ladder;
use qimseg::sim::{Circuit, GateKind, GateOp};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum QasmError {
    #[error("qasm parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Sim(#[from] qimseg::sim::SimError),
}

fn operand_list(names: &[String]) -> String {
    names.join(", ")
}

fn qubit_name(index: usize, num_qubits: usize) -> String {
    if index < num_qubits {
        format!("q[{index}]")
    } else {
        format!("anc[{}]", index - num_qubits)
    }
}

fn statement(gate: &GateOp, num_qubits: usize) -> String {
    let names: Vec<String> = gate
        .operands()
        .iter()
        .map(|&i| qubit_name(i, num_qubits))
        .collect();
    match gate.kind() {
        GateKind::X => format!("x {};", names[0]),
        GateKind::H => format!("h {};", names[0]),
        GateKind::Reset => format!("reset {};", names[0]),
        GateKind::Cnot => format!("cx {};", operand_list(&names)),
        GateKind::Toffoli => format!("ccx {};", operand_list(&names)),
        GateKind::Cswap => format!("cswap {};", operand_list(&names)),
        GateKind::Mcx(0) => format!("x {};", names[0]),
        GateKind::Mcx(k) => format!("ctrl({k}) @ x {};", operand_list(&names)),
    }
}

/// Emit a circuit as OpenQASM 3.0 text. With `decompose_mcx`, every
/// MCX(k >= 3) is replaced by its Toffoli ladder over a shared ancilla
/// array (and MCX(1)/MCX(2) by `cx`/`ccx`); without it, the text re-parses
/// to the identical gate list as long as the circuit contains no MCX(0).
pub fn emit_qasm(circuit: &Circuit, decompose_mcx: bool) -> String {
    let num_qubits = circuit.num_qubits();
    let max_k = circuit
        .gates()
        .iter()
        .filter_map(|g| match g.kind() {
            GateKind::Mcx(k) if k >= 3 => Some(k),
            _ => None,
        })
        .max();
    let mut out = String::from("OPENQASM 3.0;\ninclude \"stdgates.inc\";\n");
    out.push_str(&format!("qubit[{num_qubits}] q;\n"));
    let ancillas: Vec<usize> = match (decompose_mcx, max_k) {
        (true, Some(k)) => {
            out.push_str(&format!("qubit[{}] anc;\n", k - 2));
            (num_qubits..num_qubits + k - 2).collect()
        }
        _ => Vec::new(),
    };
    for gate in circuit.gates() {
        match gate.kind() {
            GateKind::Mcx(k) if decompose_mcx && k >= 1 => {
                let target = *gate.targets().first().expect("mcx target");
                for g in mcx_ladder(gate.controls(), target, &ancillas) {
                    out.push_str(&statement(&g, num_qubits));
                    out.push('\n');
                }
            }
            _ => {
                out.push_str(&statement(gate, num_qubits));
                out.push('\n');
            }
        }
    }
    out
}

/// Parse the subset of OpenQASM 3.0 produced by [`emit_qasm`]. Declared
/// qubit arrays are flattened in declaration order into the circuit's index
/// space.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let mut registers: Vec<(String, usize, usize)> = Vec::new(); // name, offset, size
    let mut total = 0usize;
    let mut gates: Vec<GateOp> = Vec::new();
    let mut saw_version = false;

    let without_comments: String = text
        .lines()
        .map(|l| l.split("//").next().unwrap_or(""))
        .collect::<Vec<_>>()
        .join("\n");

    for raw in without_comments.split(';') {
        let stmt = raw.trim();
        if stmt.is_empty() {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("OPENQASM") {
            if rest.trim() != "3.0" {
                return Err(QasmError::Parse(format!("unsupported version {rest:?}")));
            }
            saw_version = true;
            continue;
        }
        if !saw_version {
            return Err(QasmError::Parse("missing OPENQASM 3.0 header".into()));
        }
        if stmt.starts_with("include") {
            continue;
        }
        if let Some(rest) = stmt.strip_prefix("qubit[") {
            let (size_str, name) = rest
                .split_once(']')
                .ok_or_else(|| QasmError::Parse(format!("bad qubit decl {stmt:?}")))?;
            let size: usize = size_str
                .parse()
                .map_err(|_| QasmError::Parse(format!("bad register size {size_str:?}")))?;
            registers.push((name.trim().to_string(), total, size));
            total += size;
            continue;
        }
        let (head, operands_str) = parse_gate_head(stmt)?;
        let operands = parse_operands(operands_str, &registers)?;
        let gate = match head {
            Head::Named(name) => match (name, operands.len()) {
                ("x", 1) => GateOp::x(operands[0]),
                ("h", 1) => GateOp::h(operands[0]),
                ("reset", 1) => GateOp::reset(operands[0]),
                ("cx", 2) => GateOp::cnot(operands[0], operands[1]),
                ("ccx", 3) => GateOp::toffoli(operands[0], operands[1], operands[2]),
                ("cswap", 3) => GateOp::cswap(operands[0], operands[1], operands[2]),
                (name, arity) => {
                    return Err(QasmError::Parse(format!(
                        "unsupported gate {name:?} with {arity} operands"
                    )))
                }
            },
            Head::CtrlX(k) => {
                if operands.len() != k + 1 {
                    return Err(QasmError::Parse(format!(
                        "ctrl({k}) @ x expects {} operands, got {}",
                        k + 1,
                        operands.len()
                    )));
                }
                GateOp::mcx(&operands[..k], operands[k])
            }
        };
        gates.push(gate);
    }
    Ok(Circuit::from_gates(total, gates)?)
}

enum Head<'a> {
    Named(&'a str),
    CtrlX(usize),
}

fn parse_gate_head(stmt: &str) -> Result<(Head<'_>, &str), QasmError> {
    if let Some(rest) = stmt.strip_prefix("ctrl(") {
        let (k_str, tail) = rest
            .split_once(')')
            .ok_or_else(|| QasmError::Parse(format!("bad ctrl modifier in {stmt:?}")))?;
        let k: usize = k_str
            .trim()
            .parse()
            .map_err(|_| QasmError::Parse(format!("bad control count {k_str:?}")))?;
        let tail = tail.trim_start();
        let tail = tail
            .strip_prefix('@')
            .ok_or_else(|| QasmError::Parse(format!("expected @ after ctrl in {stmt:?}")))?
            .trim_start();
        let tail = tail
            .strip_prefix('x')
            .ok_or_else(|| QasmError::Parse(format!("only ctrl @ x is supported: {stmt:?}")))?;
        Ok((Head::CtrlX(k), tail))
    } else {
        let split = stmt
            .find(|c: char| c.is_whitespace())
            .ok_or_else(|| QasmError::Parse(format!("bare statement {stmt:?}")))?;
        Ok((Head::Named(&stmt[..split]), &stmt[split..]))
    }
}

fn parse_operands(
    text: &str,
    registers: &[(String, usize, usize)],
) -> Result<Vec<usize>, QasmError> {
    text.split(',')
        .map(|piece| {
            let piece = piece.trim();
            let (name, idx_str) = piece
                .split_once('[')
                .ok_or_else(|| QasmError::Parse(format!("bad operand {piece:?}")))?;
            let idx: usize = idx_str
                .strip_suffix(']')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| QasmError::Parse(format!("bad operand index {piece:?}")))?;
            let (_, offset, size) = registers
                .iter()
                .find(|(n, _, _)| n == name)
                .ok_or_else(|| QasmError::Parse(format!("unknown register {name:?}")))?;
            if idx >= *size {
                return Err(QasmError::Parse(format!("operand {piece:?} out of range")));
            }
            Ok(offset + idx)
        })
        .collect()
}
