//! Property tests for the simulator invariants: permutation purity,
//! normalization, gate involutions, safe-reset soundness, and agreement
//! between the branch and dense backends.

use proptest::prelude::*;

use qimseg::sim::{Backend, Circuit, GateOp, SparseState, State};

/// Deterministically derive up to three distinct qubit indices from raw
/// generator words.
fn distinct3(n: usize, a: usize, b: usize, c: usize) -> (usize, usize, usize) {
    let q0 = a % n;
    let q1 = (q0 + 1 + b % (n - 1)) % n;
    let mut q2 = (q1 + 1 + c % (n - 1)) % n;
    if q2 == q0 {
        q2 = (q2 + 1) % n;
        if q2 == q1 {
            q2 = (q2 + 1) % n;
        }
    }
    (q0, q1, q2)
}

fn gate_strategy(n: usize, allow_h: bool, allow_reset: bool) -> BoxedStrategy<GateOp> {
    let top = 4 + usize::from(allow_h) + usize::from(allow_reset);
    (0..=top, any::<usize>(), any::<usize>(), any::<usize>())
        .prop_map(move |(kind, a, b, c)| {
            let (q0, q1, q2) = distinct3(n, a, b, c);
            match kind {
                0 => GateOp::x(q0),
                1 => GateOp::cnot(q0, q1),
                2 => GateOp::toffoli(q0, q1, q2),
                3 => GateOp::cswap(q0, q1, q2),
                4 => GateOp::mcx(&[q1, q2], q0),
                5 if allow_h => GateOp::h(q0),
                _ if allow_reset => GateOp::reset(q0),
                _ => GateOp::h(q0),
            }
        })
        .boxed()
}

fn circuit_strategy(
    n: usize,
    len: usize,
    allow_h: bool,
    allow_reset: bool,
) -> BoxedStrategy<Vec<GateOp>> {
    prop::collection::vec(gate_strategy(n, allow_h, allow_reset), 0..len).boxed()
}

fn states_close(a: &SparseState, b: &SparseState, tol: f64) -> bool {
    let labels: std::collections::BTreeSet<u64> = a
        .branches()
        .map(|(l, _)| l)
        .chain(b.branches().map(|(l, _)| l))
        .collect();
    labels
        .into_iter()
        .all(|l| (a.amplitude(l) - b.amplitude(l)).norm() < tol)
}

proptest! {
    /// H-free, reset-free circuits permute branches: the support size and
    /// the multiset of amplitude magnitudes never change.
    #[test]
    fn permutation_purity(
        prefix in circuit_strategy(6, 8, true, false),
        body in circuit_strategy(6, 30, false, false),
    ) {
        let mut s = SparseState::new(6);
        for g in &prefix {
            s.apply(g).unwrap();
        }
        let count = s.branch_count();
        let mut mags: Vec<u64> = s.branches().map(|(_, a)| (a.norm() * 1e12) as u64).collect();
        mags.sort_unstable();
        for g in &body {
            s.apply(g).unwrap();
            prop_assert_eq!(s.branch_count(), count);
            let mut now: Vec<u64> =
                s.branches().map(|(_, a)| (a.norm() * 1e12) as u64).collect();
            now.sort_unstable();
            prop_assert_eq!(&now, &mags);
        }
        let _ = mags;
    }

    /// The state stays normalized after every gate application.
    #[test]
    fn normalization_holds_after_every_gate(gates in circuit_strategy(5, 40, true, true)) {
        let mut s = SparseState::new(5);
        for g in &gates {
            // resets may legitimately refuse; the state must be untouched then
            let before = s.clone();
            match s.apply(g) {
                Ok(()) => prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-9),
                Err(_) => prop_assert!(states_close(&before, &s, 0.0_f64.max(1e-15))),
            }
        }
    }

    /// X, CNOT, TOFFOLI, CSWAP and H are involutions.
    #[test]
    fn gates_are_involutions(
        prefix in circuit_strategy(5, 12, true, false),
        gate in gate_strategy(5, true, false),
    ) {
        let mut s = SparseState::new(5);
        for g in &prefix {
            s.apply(g).unwrap();
        }
        let original = s.clone();
        s.apply(&gate).unwrap();
        s.apply(&gate).unwrap();
        prop_assert!(states_close(&original, &s, 1e-12));
    }

    /// A successful reset never changes any amplitude magnitude; a refused
    /// reset leaves the state untouched.
    #[test]
    fn safe_reset_soundness(
        prefix in circuit_strategy(5, 12, true, false),
        qubit in 0usize..5,
    ) {
        let mut s = SparseState::new(5);
        for g in &prefix {
            s.apply(g).unwrap();
        }
        let mut mags: Vec<u64> = s.branches().map(|(_, a)| (a.norm() * 1e12) as u64).collect();
        mags.sort_unstable();
        let before = s.clone();
        match s.reset_qubit(qubit) {
            Ok(()) => {
                let mut now: Vec<u64> =
                    s.branches().map(|(_, a)| (a.norm() * 1e12) as u64).collect();
                now.sort_unstable();
                prop_assert_eq!(now, mags);
                for (l, _) in s.branches() {
                    prop_assert_eq!(l & (1 << qubit), 0);
                }
            }
            Err(_) => prop_assert!(states_close(&before, &s, 1e-15)),
        }
    }

    /// Both backends produce pointwise-identical distributions and identical
    /// error behavior on arbitrary circuits.
    #[test]
    fn backends_agree(gates in circuit_strategy(7, 40, true, true)) {
        let mut branch = State::new(7, Backend::Branch).unwrap();
        let mut dense = State::new(7, Backend::Dense).unwrap();
        for g in &gates {
            let rb = branch.apply(g);
            let rd = dense.apply(g);
            prop_assert_eq!(&rb, &rd);
            if rb.is_err() {
                break;
            }
        }
        let db = branch.distribution();
        let dd = dense.distribution();
        let labels: std::collections::BTreeSet<u64> =
            db.keys().chain(dd.keys()).copied().collect();
        for l in labels {
            let pb = db.get(&l).copied().unwrap_or(0.0);
            let pd = dd.get(&l).copied().unwrap_or(0.0);
            prop_assert!((pb - pd).abs() < 1e-9, "label {} differs: {} vs {}", l, pb, pd);
        }
    }
}

#[test]
fn run_agrees_across_backends_on_a_fixed_interference_circuit() {
    let mut c = Circuit::new(4);
    for q in 0..4 {
        c.push(GateOp::h(q)).unwrap();
    }
    c.push(GateOp::cnot(0, 1)).unwrap();
    c.push(GateOp::toffoli(1, 2, 3)).unwrap();
    c.push(GateOp::h(2)).unwrap();
    c.push(GateOp::cswap(0, 2, 3)).unwrap();
    c.push(GateOp::h(0)).unwrap();
    let b = qimseg::sim::run(&c, Backend::Branch).unwrap();
    let d = qimseg::sim::run(&c, Backend::Dense).unwrap();
    let db = b.distribution();
    let dd = d.distribution();
    for l in 0..16u64 {
        let pb = db.get(&l).copied().unwrap_or(0.0);
        let pd = dd.get(&l).copied().unwrap_or(0.0);
        assert!((pb - pd).abs() < 1e-12);
    }
}
