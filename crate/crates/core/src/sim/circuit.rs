use super::error::SimError;
use super::gate::GateOp;

/// An ordered reversible-gate program over `num_qubits` indexed qubits.
///
/// Basis labels are little-endian: qubit `i` is bit `i` of the label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<GateOp>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<GateOp>) -> Result<Self, SimError> {
        let mut c = Circuit::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[GateOp] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Append one gate, validating it against this circuit's qubit count.
    pub fn push(&mut self, gate: GateOp) -> Result<(), SimError> {
        gate.validate(self.num_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Append all gates of a fragment built over the same (or a smaller)
    /// qubit count.
    pub fn append(&mut self, fragment: &Circuit) -> Result<(), SimError> {
        for g in fragment.gates() {
            self.push(g.clone())?;
        }
        Ok(())
    }
}
