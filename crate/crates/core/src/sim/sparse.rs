use std::collections::BTreeMap;

use num_complex::Complex64;

use super::error::SimError;
use super::gate::{GateKind, GateOp};

/// Amplitudes below this magnitude are dropped after interference.
pub const PRUNE_EPS: f64 = 1e-12;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Branch-map simulation state: basis label -> complex amplitude.
///
/// Labels are little-endian (qubit `i` is bit `i`). Only nonzero branches are
/// stored, so states that stay close to a basis-state superposition — like
/// every circuit this crate emits, which holds one branch per image position —
/// simulate in time proportional to the support size, independent of the
/// qubit count.
#[derive(Debug, Clone)]
pub struct SparseState {
    num_qubits: usize,
    branches: BTreeMap<u64, Complex64>,
}

impl SparseState {
    /// The all-zeros state |0...0>.
    pub fn new(num_qubits: usize) -> Self {
        assert!(num_qubits <= 63, "sparse labels are u64");
        let mut branches = BTreeMap::new();
        branches.insert(0u64, Complex64::new(1.0, 0.0));
        SparseState {
            num_qubits,
            branches,
        }
    }

    /// A single computational-basis state.
    pub fn from_basis(num_qubits: usize, label: u64) -> Self {
        assert!(num_qubits <= 63 && (num_qubits == 63 || label < (1u64 << num_qubits)));
        let mut branches = BTreeMap::new();
        branches.insert(label, Complex64::new(1.0, 0.0));
        SparseState {
            num_qubits,
            branches,
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn branch_count(&self) -> usize {
        self.branches.len()
    }

    pub fn amplitude(&self, label: u64) -> Complex64 {
        self.branches.get(&label).copied().unwrap_or_default()
    }

    /// Support labels with their amplitudes, in label order.
    pub fn branches(&self) -> impl Iterator<Item = (u64, Complex64)> + '_ {
        self.branches.iter().map(|(&l, &a)| (l, a))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.branches.values().map(|a| a.norm_sqr()).sum()
    }

    /// Apply one gate. Permutation gates relabel branches; H splits and
    /// merges them; RESET is the guarded injective bit-clear.
    pub fn apply(&mut self, gate: &GateOp) -> Result<(), SimError> {
        gate.validate(self.num_qubits)?;
        match gate.kind() {
            GateKind::X => self.apply_x(gate.operands()[0]),
            GateKind::H => self.apply_h(gate.operands()[0]),
            GateKind::Cnot | GateKind::Toffoli | GateKind::Mcx(_) => {
                self.apply_mcx(gate.controls(), gate.targets()[0])
            }
            GateKind::Cswap => {
                self.apply_cswap(gate.operands()[0], gate.operands()[1], gate.operands()[2])
            }
            GateKind::Reset => return self.reset_qubit(gate.operands()[0]),
        }
        debug_assert!((self.norm_sqr() - 1.0).abs() < 1e-9);
        Ok(())
    }

    fn apply_x(&mut self, target: usize) {
        let bit = 1u64 << target;
        self.branches = self.branches.iter().map(|(&l, &a)| (l ^ bit, a)).collect();
    }

    fn apply_mcx(&mut self, controls: &[usize], target: usize) {
        let ctrl_mask = controls.iter().fold(0u64, |m, &c| m | (1u64 << c));
        let bit = 1u64 << target;
        self.branches = self
            .branches
            .iter()
            .map(|(&l, &a)| {
                if l & ctrl_mask == ctrl_mask {
                    (l ^ bit, a)
                } else {
                    (l, a)
                }
            })
            .collect();
    }

    fn apply_cswap(&mut self, control: usize, t0: usize, t1: usize) {
        let ctrl = 1u64 << control;
        let b0 = 1u64 << t0;
        let b1 = 1u64 << t1;
        self.branches = self
            .branches
            .iter()
            .map(|(&l, &a)| {
                let differ = ((l >> t0) ^ (l >> t1)) & 1 == 1;
                if l & ctrl != 0 && differ {
                    (l ^ (b0 | b1), a)
                } else {
                    (l, a)
                }
            })
            .collect();
    }

    fn apply_h(&mut self, target: usize) {
        let bit = 1u64 << target;
        let mut next: BTreeMap<u64, Complex64> = BTreeMap::new();
        for (&l, &a) in &self.branches {
            let s = a * FRAC_1_SQRT_2;
            // |0> -> (|0> + |1>)/sqrt(2), |1> -> (|0> - |1>)/sqrt(2)
            let (lo, hi) = (l & !bit, l | bit);
            *next.entry(lo).or_default() += s;
            if l & bit == 0 {
                *next.entry(hi).or_default() += s;
            } else {
                *next.entry(hi).or_default() -= s;
            }
        }
        next.retain(|_, a| a.norm() >= PRUNE_EPS);
        self.branches = next;
    }

    /// Clear one qubit's bit on every support label, erroring if two labels
    /// would collide (i.e. the qubit carries information not determined by
    /// the rest of the support).
    pub fn reset_qubit(&mut self, qubit: usize) -> Result<(), SimError> {
        if qubit >= self.num_qubits {
            return Err(SimError::OperandOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        let bit = 1u64 << qubit;
        for &l in self.branches.keys() {
            if l & bit != 0 && self.branches.contains_key(&(l & !bit)) {
                return Err(SimError::ResetMergesBranches { qubit });
            }
        }
        self.branches = self.branches.iter().map(|(&l, &a)| (l & !bit, a)).collect();
        Ok(())
    }

    /// Probabilities of bit patterns over the given qubits, pattern bit `j`
    /// holding the value of `qubits[j]`.
    pub fn marginal(&self, qubits: &[usize]) -> Result<BTreeMap<u64, f64>, SimError> {
        validate_marginal_qubits(qubits, self.num_qubits)?;
        let mut out: BTreeMap<u64, f64> = BTreeMap::new();
        for (&l, &a) in &self.branches {
            *out.entry(extract_pattern(l, qubits)).or_default() += a.norm_sqr();
        }
        Ok(out)
    }

    /// Full-label probability distribution over the support.
    pub fn distribution(&self) -> BTreeMap<u64, f64> {
        self.branches
            .iter()
            .map(|(&l, &a)| (l, a.norm_sqr()))
            .collect()
    }
}

pub(super) fn validate_marginal_qubits(
    qubits: &[usize],
    num_qubits: usize,
) -> Result<(), SimError> {
    for (i, &q) in qubits.iter().enumerate() {
        if q >= num_qubits {
            return Err(SimError::OperandOutOfRange {
                qubit: q,
                num_qubits,
            });
        }
        if qubits[..i].contains(&q) {
            return Err(SimError::DuplicateOperand { qubit: q });
        }
    }
    Ok(())
}

pub(super) fn extract_pattern(label: u64, qubits: &[usize]) -> u64 {
    qubits
        .iter()
        .enumerate()
        .fold(0u64, |p, (j, &q)| p | (((label >> q) & 1) << j))
}
