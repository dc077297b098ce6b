use std::collections::BTreeMap;

use num_complex::Complex64;

use super::error::SimError;
use super::gate::{GateKind, GateOp};
use super::sparse::{extract_pattern, validate_marginal_qubits, PRUNE_EPS};

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Full state-vector backend, used to cross-validate the branch backend on
/// small circuits.
#[derive(Debug, Clone)]
pub struct DenseState {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl DenseState {
    pub fn new(num_qubits: usize, limit: usize) -> Result<Self, SimError> {
        if num_qubits > limit {
            return Err(SimError::DenseLimitExceeded { num_qubits, limit });
        }
        let mut amps = vec![Complex64::default(); 1usize << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Ok(DenseState { num_qubits, amps })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Number of amplitudes above the support threshold.
    pub fn branch_count(&self) -> usize {
        self.amps.iter().filter(|a| a.norm() >= PRUNE_EPS).count()
    }

    pub fn amplitude(&self, label: u64) -> Complex64 {
        self.amps[label as usize]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn apply(&mut self, gate: &GateOp) -> Result<(), SimError> {
        gate.validate(self.num_qubits)?;
        match gate.kind() {
            GateKind::X => self.permute(&[], gate.operands()[0]),
            GateKind::H => self.apply_h(gate.operands()[0]),
            GateKind::Cnot | GateKind::Toffoli | GateKind::Mcx(_) => {
                self.permute(gate.controls(), gate.targets()[0])
            }
            GateKind::Cswap => {
                self.apply_cswap(gate.operands()[0], gate.operands()[1], gate.operands()[2])
            }
            GateKind::Reset => return self.reset_qubit(gate.operands()[0]),
        }
        Ok(())
    }

    /// Controlled-X as an index permutation: swap the target pair wherever
    /// all controls are set.
    fn permute(&mut self, controls: &[usize], target: usize) {
        let ctrl_mask = controls.iter().fold(0usize, |m, &c| m | (1usize << c));
        let bit = 1usize << target;
        for i in 0..self.amps.len() {
            if i & bit == 0 && i & ctrl_mask == ctrl_mask {
                self.amps.swap(i, i | bit);
            }
        }
    }

    fn apply_cswap(&mut self, control: usize, t0: usize, t1: usize) {
        let ctrl = 1usize << control;
        let b0 = 1usize << t0;
        let b1 = 1usize << t1;
        for i in 0..self.amps.len() {
            // visit each swapped pair once, from the (t0=1, t1=0) side
            if i & ctrl != 0 && i & b0 != 0 && i & b1 == 0 {
                self.amps.swap(i, i ^ (b0 | b1));
            }
        }
    }

    fn apply_h(&mut self, target: usize) {
        let bit = 1usize << target;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let lo = self.amps[i];
                let hi = self.amps[i | bit];
                self.amps[i] = (lo + hi) * FRAC_1_SQRT_2;
                self.amps[i | bit] = (lo - hi) * FRAC_1_SQRT_2;
            }
        }
    }

    /// Guarded injective bit-clear, same contract as the sparse backend.
    pub fn reset_qubit(&mut self, qubit: usize) -> Result<(), SimError> {
        if qubit >= self.num_qubits {
            return Err(SimError::OperandOutOfRange {
                qubit,
                num_qubits: self.num_qubits,
            });
        }
        let bit = 1usize << qubit;
        for i in 0..self.amps.len() {
            if i & bit != 0
                && self.amps[i].norm() >= PRUNE_EPS
                && self.amps[i & !bit].norm() >= PRUNE_EPS
            {
                return Err(SimError::ResetMergesBranches { qubit });
            }
        }
        for i in 0..self.amps.len() {
            if i & bit != 0 {
                if self.amps[i].norm() >= PRUNE_EPS {
                    self.amps[i & !bit] = self.amps[i];
                }
                // sub-threshold residue on cleared labels is dropped too
                self.amps[i] = Complex64::default();
            }
        }
        Ok(())
    }

    pub fn marginal(&self, qubits: &[usize]) -> Result<BTreeMap<u64, f64>, SimError> {
        validate_marginal_qubits(qubits, self.num_qubits)?;
        let mut out: BTreeMap<u64, f64> = BTreeMap::new();
        for (i, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                *out.entry(extract_pattern(i as u64, qubits)).or_default() += p;
            }
        }
        Ok(out)
    }

    /// Probabilities of support labels, in label order.
    pub fn distribution(&self) -> BTreeMap<u64, f64> {
        self.amps
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() >= PRUNE_EPS)
            .map(|(i, a)| (i as u64, a.norm_sqr()))
            .collect()
    }
}
