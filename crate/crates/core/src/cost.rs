//! Weighted gate-count accounting.
//!
//! The cost model prices every single- and two-qubit gate at 1 (NOT, H,
//! CNOT, RESET), a Toffoli at 5, a controlled swap at 3, and a
//! multi-controlled NOT by its clean-ancilla Toffoli-ladder expansion.

use std::collections::BTreeMap;

use crate::sim::{Circuit, GateKind, GateOp};

/// Unit cost of one gate.
///
/// `Mcx(k)` is priced by decomposition: `k <= 1` is a NOT/CNOT (1), `k == 2`
/// a Toffoli (5), and `k >= 3` the `2k-3`-Toffoli clean-ancilla ladder
/// (`5 * (2k - 3)`); see [`mcx_ladder`].
pub fn cost_of_gate(gate: &GateOp) -> u64 {
    cost_of_kind(gate.kind())
}

pub fn cost_of_kind(kind: GateKind) -> u64 {
    match kind {
        GateKind::X | GateKind::H | GateKind::Cnot | GateKind::Reset => 1,
        GateKind::Toffoli => 5,
        GateKind::Cswap => 3,
        GateKind::Mcx(k) => match k {
            0 | 1 => 1,
            2 => 5,
            k => 5 * (2 * k as u64 - 3),
        },
    }
}

/// Per-kind gate counts plus the weighted total for a gate list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CostReport {
    pub not: u64,
    pub h: u64,
    pub cnot: u64,
    pub toffoli: u64,
    pub cswap: u64,
    pub reset: u64,
    /// MCX counts keyed by control count.
    pub mcx: BTreeMap<usize, u64>,
    pub total_cost: u64,
}

impl CostReport {
    pub fn gate_count(&self) -> u64 {
        self.not
            + self.h
            + self.cnot
            + self.toffoli
            + self.cswap
            + self.reset
            + self.mcx.values().sum::<u64>()
    }
}

/// Exact per-kind counts and weighted total of a fragment's gate list.
pub fn audit_cost(fragment: &Circuit) -> CostReport {
    audit_gates(fragment.gates())
}

pub fn audit_gates(gates: &[GateOp]) -> CostReport {
    let mut report = CostReport::default();
    for gate in gates {
        match gate.kind() {
            GateKind::X => report.not += 1,
            GateKind::H => report.h += 1,
            GateKind::Cnot => report.cnot += 1,
            GateKind::Toffoli => report.toffoli += 1,
            GateKind::Cswap => report.cswap += 1,
            GateKind::Reset => report.reset += 1,
            GateKind::Mcx(k) => *report.mcx.entry(k).or_default() += 1,
        }
        report.total_cost += cost_of_gate(gate);
    }
    report
}

/// Expand a multi-controlled NOT into the standard clean-ancilla Toffoli
/// ladder: `2k-3` Toffolis for `k >= 3` controls, using `k-2` ancillas that
/// must start (and are returned) in |0>.
///
/// `k <= 2` needs no ancillas and lowers to X/CNOT/Toffoli directly.
pub fn mcx_ladder(controls: &[usize], target: usize, ancillas: &[usize]) -> Vec<GateOp> {
    let k = controls.len();
    match k {
        0 => return vec![GateOp::x(target)],
        1 => return vec![GateOp::cnot(controls[0], target)],
        2 => return vec![GateOp::toffoli(controls[0], controls[1], target)],
        _ => {}
    }
    assert!(
        ancillas.len() >= k - 2,
        "MCX({k}) ladder needs {} clean ancillas, got {}",
        k - 2,
        ancillas.len()
    );
    let mut gates = Vec::with_capacity(2 * k - 3);
    // compute chain: anc[i] accumulates the AND of controls[0..=i+1]
    gates.push(GateOp::toffoli(controls[0], controls[1], ancillas[0]));
    for i in 0..k - 3 {
        gates.push(GateOp::toffoli(
            controls[i + 2],
            ancillas[i],
            ancillas[i + 1],
        ));
    }
    gates.push(GateOp::toffoli(controls[k - 1], ancillas[k - 3], target));
    // uncompute in reverse, restoring the ancillas to |0>
    for i in (0..k - 3).rev() {
        gates.push(GateOp::toffoli(
            controls[i + 2],
            ancillas[i],
            ancillas[i + 1],
        ));
    }
    gates.push(GateOp::toffoli(controls[0], controls[1], ancillas[0]));
    gates
}
