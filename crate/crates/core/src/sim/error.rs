use thiserror::Error;

/// Errors raised while building circuits or applying gates to states.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("operand qubit {qubit} out of range for {num_qubits}-qubit circuit")]
    OperandOutOfRange { qubit: usize, num_qubits: usize },

    #[error("duplicate operand qubit {qubit}")]
    DuplicateOperand { qubit: usize },

    #[error("{kind} expects {expected} operands, got {got}")]
    ArityMismatch {
        kind: String,
        expected: usize,
        got: usize,
    },

    /// A reset would map two distinct support labels onto the same label.
    /// The simulator models resets only on qubits whose value is determined
    /// by the rest of the support, so this always signals a wiring bug.
    #[error("reset on qubit {qubit} would merge distinct branches")]
    ResetMergesBranches { qubit: usize },

    #[error("dense backend limited to {limit} qubits, circuit needs {num_qubits}")]
    DenseLimitExceeded { num_qubits: usize, limit: usize },
}
