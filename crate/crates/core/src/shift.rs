//! Cyclic position-shift fragments and plain register copy.
//!
//! A shift increments or decrements an n-qubit position register modulo 2^n,
//! realizing a toroidal image translation: the MCX cascade flips bit k
//! exactly when all lower bits carry (increment) or borrow (decrement).

use crate::arith::{BuildError, RegisterRef};
use crate::sim::{Circuit, GateOp};

/// Direction of a cyclic shift: `Inc` adds one modulo 2^width, `Dec`
/// subtracts one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shift {
    Inc,
    Dec,
}

/// Build the MCX cascade shifting `reg` by plus or minus one modulo
/// 2^width. The decrement is the exact gate-reversed increment, so both
/// directions audit identically: one MCX(k) for each k in 1..width plus a
/// single X.
pub fn build_cyclic_shift(
    num_qubits: usize,
    reg: &RegisterRef,
    shift: Shift,
) -> Result<Circuit, BuildError> {
    let n = reg.width();
    let mut gates = Vec::with_capacity(n);
    match shift {
        Shift::Inc => {
            for k in (1..n).rev() {
                gates.push(GateOp::mcx(&reg.qubits()[..k], reg.qubit(k)));
            }
            gates.push(GateOp::x(reg.qubit(0)));
        }
        Shift::Dec => {
            gates.push(GateOp::x(reg.qubit(0)));
            for k in 1..n {
                gates.push(GateOp::mcx(&reg.qubits()[..k], reg.qubit(k)));
            }
        }
    }
    Ok(Circuit::from_gates(num_qubits, gates)?)
}

/// Bitwise CNOT copy of `src` into `dst`.
///
/// Only meaningful when `dst` is |0> on every support branch; under that
/// precondition `dst` becomes a bitwise clone of `src` and `src` is
/// untouched. Exactly `width` CNOTs.
pub fn build_copy(
    num_qubits: usize,
    src: &RegisterRef,
    dst: &RegisterRef,
) -> Result<Circuit, BuildError> {
    if src.width() != dst.width() {
        return Err(BuildError::WidthMismatch {
            left: src.width(),
            right: dst.width(),
        });
    }
    for &q in dst.qubits() {
        if src.qubits().contains(&q) {
            return Err(BuildError::OperandOverlap { qubit: q });
        }
    }
    let gates = (0..src.width())
        .map(|k| GateOp::cnot(src.qubit(k), dst.qubit(k)))
        .collect();
    Ok(Circuit::from_gates(num_qubits, gates)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cost::audit_cost;
    use crate::sim::SparseState;

    fn run_on_value(frag: &Circuit, reg: &RegisterRef, value: u64) -> u64 {
        let mut s = SparseState::from_basis(frag.num_qubits(), reg.deposit(0, value));
        for g in frag.gates() {
            s.apply(g).unwrap();
        }
        let (label, _) = s.branches().next().unwrap();
        reg.extract(label)
    }

    #[test]
    fn shift_truth_tables_exhaustive() {
        for n in 1..=3usize {
            let reg = RegisterRef::from_range(0, n);
            let inc = build_cyclic_shift(n, &reg, Shift::Inc).unwrap();
            let dec = build_cyclic_shift(n, &reg, Shift::Dec).unwrap();
            let side = 1u64 << n;
            for p in 0..side {
                assert_eq!(
                    run_on_value(&inc, &reg, p),
                    (p + 1) % side,
                    "inc n={n} p={p}"
                );
                assert_eq!(
                    run_on_value(&dec, &reg, p),
                    (p + side - 1) % side,
                    "dec n={n} p={p}"
                );
            }
        }
    }

    #[test]
    fn inc_then_dec_is_identity() {
        for n in 1..=3usize {
            let reg = RegisterRef::from_range(0, n);
            let mut both = Circuit::new(n);
            both.append(&build_cyclic_shift(n, &reg, Shift::Inc).unwrap())
                .unwrap();
            both.append(&build_cyclic_shift(n, &reg, Shift::Dec).unwrap())
                .unwrap();
            for p in 0..(1u64 << n) {
                assert_eq!(run_on_value(&both, &reg, p), p);
            }
        }
    }

    #[test]
    fn full_cycle_is_identity() {
        for n in 1..=3usize {
            let reg = RegisterRef::from_range(0, n);
            let inc = build_cyclic_shift(n, &reg, Shift::Inc).unwrap();
            let side = 1u64 << n;
            let mut cycle = Circuit::new(n);
            for _ in 0..side {
                cycle.append(&inc).unwrap();
            }
            for p in 0..side {
                assert_eq!(run_on_value(&cycle, &reg, p), p);
            }
        }
    }

    #[test]
    fn shift_cost_matches_cascade_sum() {
        use crate::cost::cost_of_kind;
        use crate::sim::GateKind;
        let mut last = 0;
        for n in 1..=6usize {
            let reg = RegisterRef::from_range(0, n);
            let frag = build_cyclic_shift(n, &reg, Shift::Inc).unwrap();
            let expected: u64 = (1..n).map(|k| cost_of_kind(GateKind::Mcx(k))).sum::<u64>() + 1;
            let total = audit_cost(&frag).total_cost;
            assert_eq!(total, expected, "n={n}");
            assert!(total > last, "cost grows with n");
            last = total;
        }
    }

    #[test]
    fn copy_duplicates_src_into_zero_dst() {
        let src = RegisterRef::from_range(0, 3);
        let dst = RegisterRef::from_range(3, 3);
        let frag = build_copy(6, &src, &dst).unwrap();
        assert_eq!(frag.len(), 3);
        assert_eq!(audit_cost(&frag).total_cost, 3);
        for v in [0b101u64, 0] {
            let mut s = SparseState::from_basis(6, src.deposit(0, v));
            for g in frag.gates() {
                s.apply(g).unwrap();
            }
            let out = s.branches().next().unwrap().0;
            assert_eq!(src.extract(out), v);
            assert_eq!(dst.extract(out), v);
        }
    }

    #[test]
    fn copy_checks_width_and_overlap() {
        let src = RegisterRef::from_range(0, 3);
        assert!(build_copy(6, &src, &RegisterRef::from_range(3, 2)).is_err());
        assert!(build_copy(6, &src, &RegisterRef::from_range(2, 3)).is_err());
    }
}
