use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::circuit::Circuit;
use super::dense::DenseState;
use super::error::SimError;
use super::gate::GateOp;
use super::sparse::SparseState;

/// Default qubit ceiling for the dense backend (2^22 amplitudes).
pub const DEFAULT_DENSE_LIMIT: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    /// Branch-map simulation; scales with support size.
    Branch,
    /// Full state vector; limited to [`DEFAULT_DENSE_LIMIT`] qubits unless
    /// overridden.
    Dense,
}

/// A simulation state on either backend.
#[derive(Debug, Clone)]
pub enum State {
    Branch(SparseState),
    Dense(DenseState),
}

impl State {
    pub fn new(num_qubits: usize, backend: Backend) -> Result<Self, SimError> {
        Self::with_dense_limit(num_qubits, backend, DEFAULT_DENSE_LIMIT)
    }

    pub fn with_dense_limit(
        num_qubits: usize,
        backend: Backend,
        dense_limit: usize,
    ) -> Result<Self, SimError> {
        Ok(match backend {
            Backend::Branch => State::Branch(SparseState::new(num_qubits)),
            Backend::Dense => State::Dense(DenseState::new(num_qubits, dense_limit)?),
        })
    }

    pub fn num_qubits(&self) -> usize {
        match self {
            State::Branch(s) => s.num_qubits(),
            State::Dense(s) => s.num_qubits(),
        }
    }

    pub fn apply(&mut self, gate: &GateOp) -> Result<(), SimError> {
        match self {
            State::Branch(s) => s.apply(gate),
            State::Dense(s) => s.apply(gate),
        }
    }

    pub fn branch_count(&self) -> usize {
        match self {
            State::Branch(s) => s.branch_count(),
            State::Dense(s) => s.branch_count(),
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        match self {
            State::Branch(s) => s.norm_sqr(),
            State::Dense(s) => s.norm_sqr(),
        }
    }

    /// Probabilities of bit patterns over the given qubits; pattern bit `j`
    /// holds the value of `qubits[j]`. Probabilities sum to 1 within 1e-9.
    pub fn marginal(&self, qubits: &[usize]) -> Result<BTreeMap<u64, f64>, SimError> {
        match self {
            State::Branch(s) => s.marginal(qubits),
            State::Dense(s) => s.marginal(qubits),
        }
    }

    /// Probabilities of full support labels, in label order.
    pub fn distribution(&self) -> BTreeMap<u64, f64> {
        match self {
            State::Branch(s) => s.distribution(),
            State::Dense(s) => s.distribution(),
        }
    }

    /// Draw `shots` full-label samples, deterministically for a given seed.
    pub fn sample(&self, shots: u64, seed: u64) -> BTreeMap<u64, u64> {
        assert!(shots >= 1, "sample requires at least one shot");
        let dist: Vec<(u64, f64)> = self.distribution().into_iter().collect();
        let mut cumulative = Vec::with_capacity(dist.len());
        let mut acc = 0.0;
        for &(label, p) in &dist {
            acc += p;
            cumulative.push((label, acc));
        }
        let total = acc;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * total;
            let idx = cumulative.partition_point(|&(_, c)| c <= u);
            let label = cumulative[idx.min(cumulative.len() - 1)].0;
            *counts.entry(label).or_default() += 1;
        }
        counts
    }
}

/// Run a circuit from the all-zeros state on the chosen backend.
pub fn run(circuit: &Circuit, backend: Backend) -> Result<State, SimError> {
    run_with_dense_limit(circuit, backend, DEFAULT_DENSE_LIMIT)
}

pub fn run_with_dense_limit(
    circuit: &Circuit,
    backend: Backend,
    dense_limit: usize,
) -> Result<State, SimError> {
    let mut state = State::with_dense_limit(circuit.num_qubits(), backend, dense_limit)?;
    for gate in circuit.gates() {
        state.apply(gate)?;
    }
    Ok(state)
}
