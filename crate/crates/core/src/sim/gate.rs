use std::fmt;

use super::error::SimError;

/// The gate vocabulary of the simulator.
///
/// `Mcx(k)` is a multi-controlled NOT with `k` positive controls; it is a
/// first-class gate here (simulated exactly), and is only decomposed by the
/// cost model and the QASM lowering. `Mcx(0)` acts as `X` and `Mcx(1)` as
/// `CNOT`, but the three kinds are kept distinct so audits can count them
/// separately.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    X,
    H,
    Cnot,
    Toffoli,
    Cswap,
    Mcx(usize),
    Reset,
}

impl GateKind {
    /// Number of operands the kind requires (controls plus targets).
    pub fn arity(self) -> usize {
        match self {
            GateKind::X | GateKind::H | GateKind::Reset => 1,
            GateKind::Cnot => 2,
            GateKind::Toffoli | GateKind::Cswap => 3,
            GateKind::Mcx(k) => k + 1,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GateKind::X => write!(f, "X"),
            GateKind::H => write!(f, "H"),
            GateKind::Cnot => write!(f, "CNOT"),
            GateKind::Toffoli => write!(f, "TOFFOLI"),
            GateKind::Cswap => write!(f, "CSWAP"),
            GateKind::Mcx(k) => write!(f, "MCX({k})"),
            GateKind::Reset => write!(f, "RESET"),
        }
    }
}

/// One gate over indexed qubits: controls first, targets last.
///
/// For `Cswap` the first operand is the control and the remaining two are the
/// swapped targets. A constructed `GateOp` always has the right arity; use
/// [`GateOp::validate`] (done by [`Circuit::push`](super::Circuit::push) and
/// by the state backends) to check index range and distinctness.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GateOp {
    kind: GateKind,
    operands: Vec<usize>,
}

impl GateOp {
    /// Build a gate from raw parts, checking arity. Range and distinctness
    /// are checked against a concrete circuit by [`GateOp::validate`].
    pub fn new(kind: GateKind, operands: Vec<usize>) -> Result<Self, SimError> {
        if operands.len() != kind.arity() {
            return Err(SimError::ArityMismatch {
                kind: kind.to_string(),
                expected: kind.arity(),
                got: operands.len(),
            });
        }
        Ok(GateOp { kind, operands })
    }

    pub fn x(qubit: usize) -> Self {
        GateOp {
            kind: GateKind::X,
            operands: vec![qubit],
        }
    }

    pub fn h(qubit: usize) -> Self {
        GateOp {
            kind: GateKind::H,
            operands: vec![qubit],
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        GateOp {
            kind: GateKind::Cnot,
            operands: vec![control, target],
        }
    }

    pub fn toffoli(control0: usize, control1: usize, target: usize) -> Self {
        GateOp {
            kind: GateKind::Toffoli,
            operands: vec![control0, control1, target],
        }
    }

    pub fn cswap(control: usize, target0: usize, target1: usize) -> Self {
        GateOp {
            kind: GateKind::Cswap,
            operands: vec![control, target0, target1],
        }
    }

    pub fn mcx(controls: &[usize], target: usize) -> Self {
        let mut operands = controls.to_vec();
        operands.push(target);
        GateOp {
            kind: GateKind::Mcx(controls.len()),
            operands,
        }
    }

    pub fn reset(qubit: usize) -> Self {
        GateOp {
            kind: GateKind::Reset,
            operands: vec![qubit],
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    /// Controls first, targets last.
    pub fn operands(&self) -> &[usize] {
        &self.operands
    }

    /// The control operands (empty for X/H/RESET).
    pub fn controls(&self) -> &[usize] {
        match self.kind {
            GateKind::X | GateKind::H | GateKind::Reset => &[],
            GateKind::Cnot | GateKind::Cswap => &self.operands[..1],
            GateKind::Toffoli => &self.operands[..2],
            GateKind::Mcx(k) => &self.operands[..k],
        }
    }

    /// The target operands.
    pub fn targets(&self) -> &[usize] {
        &self.operands[self.controls().len()..]
    }

    /// Check operand range and pairwise distinctness against a qubit count.
    pub fn validate(&self, num_qubits: usize) -> Result<(), SimError> {
        debug_assert_eq!(self.operands.len(), self.kind.arity());
        for (i, &q) in self.operands.iter().enumerate() {
            if q >= num_qubits {
                return Err(SimError::OperandOutOfRange {
                    qubit: q,
                    num_qubits,
                });
            }
            if self.operands[..i].contains(&q) {
                return Err(SimError::DuplicateOperand { qubit: q });
            }
        }
        Ok(())
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for (i, q) in self.operands.iter().enumerate() {
            write!(f, "{}{}", if i == 0 { " " } else { "," }, q)?;
        }
        Ok(())
    }
}
