//! Assembly of the full segmentation circuit and its end-to-end execution.
//!
//! Stage order: position/center preparation, center copy, the shift/oracle
//! schedule filling the four neighbor registers, median selection network,
//! threshold computation, and binarization. Every ancilla and garbage
//! register in the pipeline carries a value that is a function of the
//! position register, which is what makes the in-circuit resets sound (the
//! simulator's reset guard would fail loudly otherwise).

use thiserror::Error;

use crate::arith::{
    build_comparator, build_compare_swap, build_constant_init, build_subtractor, BuildError,
    RegisterRef,
};
use crate::cost::{audit_gates, CostReport};
use crate::neqr::{
    build_preparation, decode_binary, BinaryImage, GrayImage, ImageError, PrepRole, RegisterLayout,
};
use crate::oracle::{check_z_precondition, WindowShape};
use crate::shift::{build_copy, build_cyclic_shift, Shift};
use crate::sim::{Backend, Circuit, GateOp, SimError, State, DEFAULT_DENSE_LIMIT};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("threshold adjustment {z} exceeds the window median at {} position(s), first {:?}", positions.len(), positions.first())]
    ZPreconditionViolated {
        z: u64,
        positions: Vec<(usize, usize)>,
    },

    #[error("threshold adjustment {z} outside [0, 2^{q})")]
    ZOutOfRange { z: u64, q: usize },

    #[error("the quantum pipeline supports only the cross window, got {window:?}")]
    UnsupportedWindow { window: WindowShape },

    #[error("the pipeline's subtractor requires bit depth >= 2, image has q = {q}")]
    DepthTooSmall { q: usize },

    #[error("layout needs {needed} qubits, above the simulator's {max}-qubit label limit")]
    TooManyQubits { needed: usize, max: usize },

    #[error(transparent)]
    Build(#[from] BuildError),

    #[error(transparent)]
    Sim(#[from] SimError),

    #[error(transparent)]
    Image(#[from] ImageError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    /// Constant subtracted from the window median to form the threshold.
    pub z: u64,
    pub backend: Backend,
    pub window: WindowShape,
    pub dense_limit: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            z: 1,
            backend: Backend::Branch,
            window: WindowShape::Cross,
            dense_limit: DEFAULT_DENSE_LIMIT,
        }
    }
}

/// Per-position diagnostic read from the simulator branches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceRow {
    pub y: usize,
    pub x: usize,
    pub center: u16,
    pub median: u16,
    pub threshold: u16,
    pub bit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdTrace {
    pub z: u64,
    /// Row-major, one row per position.
    pub rows: Vec<TraceRow>,
}

/// Result of a full quantum segmentation run.
#[derive(Debug, Clone, PartialEq)]
pub struct SegmentOutcome {
    pub binary: BinaryImage,
    pub trace: ThresholdTrace,
}

/// A full run's outcome plus the final simulator state, for callers that
/// want to measure or sample it further.
#[derive(Debug, Clone)]
pub struct PipelineRun {
    pub outcome: SegmentOutcome,
    pub state: State,
    pub layout: RegisterLayout,
}

/// One named fragment of the pipeline. Fragments flagged `headline: false`
/// are image-loading oracles whose cost is reported but excluded from the
/// pipeline's headline cost by convention.
#[derive(Debug, Clone)]
pub struct Stage {
    pub name: &'static str,
    pub headline: bool,
    pub circuit: Circuit,
}

/// The register that holds the window median after the selection network
/// (and the threshold after the subtraction).
pub fn median_register(layout: &RegisterLayout) -> &RegisterRef {
    &layout.n_right
}

/// The register whose low bit carries the segmented output.
pub fn output_register(layout: &RegisterLayout) -> &RegisterRef {
    &layout.copy
}

fn neighborhood_stages(img: &GrayImage, layout: &RegisterLayout) -> Result<Vec<Stage>, BuildError> {
    let nq = layout.total_qubits();
    let inc_y = build_cyclic_shift(nq, &layout.y_pos, Shift::Inc)?;
    let dec_y = build_cyclic_shift(nq, &layout.y_pos, Shift::Dec)?;
    let inc_x = build_cyclic_shift(nq, &layout.x_pos, Shift::Inc)?;
    let dec_x = build_cyclic_shift(nq, &layout.x_pos, Shift::Dec)?;
    let oracle = |target: &RegisterRef| build_preparation(img, target, layout, PrepRole::Shifted);
    let ct = |c: &Circuit| Stage {
        name: "cyclic_shifts",
        headline: true,
        circuit: c.clone(),
    };
    let ld = |c: Circuit| Stage {
        name: "neighbor_oracles",
        headline: false,
        circuit: c,
    };

    // +Y alignment loads the Y+1 row register, then -Y the Y-1 row, then the
    // X+1 and X-1 columns, returning the position registers to zero offset.
    Ok(vec![
        Stage {
            name: "preparation",
            headline: false,
            circuit: build_preparation(img, &layout.center, layout, PrepRole::First)?,
        },
        Stage {
            name: "copy",
            headline: true,
            circuit: build_copy(nq, &layout.center, &layout.copy)?,
        },
        ct(&inc_y),
        ld(oracle(&layout.n_up)?),
        ct(&dec_y),
        ct(&dec_y),
        ld(oracle(&layout.n_down)?),
        ct(&inc_y),
        ct(&inc_x),
        ld(oracle(&layout.n_left)?),
        ct(&dec_x),
        ct(&dec_x),
        ld(oracle(&layout.n_right)?),
        ct(&inc_x),
    ])
}

/// Stage populating the five gray registers of the cross window (plus the
/// center copy): preparation, copy, and the shift/oracle schedule.
pub fn build_neighborhood_prep(
    img: &GrayImage,
    layout: &RegisterLayout,
) -> Result<Circuit, BuildError> {
    let mut circuit = Circuit::new(layout.total_qubits());
    for stage in neighborhood_stages(img, layout)? {
        circuit.append(&stage.circuit)?;
    }
    Ok(circuit)
}

/// Median-of-five selection network: three rounds of chained compare-swaps
/// (4 + 3 + 2). Each round pushes the running maximum of the surviving
/// registers one register further along the cycle; after the third round the
/// third-largest value — the median — sits in [`median_register`].
pub fn build_median_network(layout: &RegisterLayout) -> Result<Circuit, BuildError> {
    let nq = layout.total_qubits();
    let ring = [
        &layout.center,
        &layout.n_up,
        &layout.n_right,
        &layout.n_down,
        &layout.n_left,
    ];
    let mut circuit = Circuit::new(nq);
    for round_len in [4usize, 3, 2] {
        for i in 0..round_len {
            circuit.append(&build_compare_swap(nq, ring[i], ring[i + 1], &layout.anc)?)?;
        }
    }
    Ok(circuit)
}

/// Threshold stage: the round-1 maximum's register (garbage by now) is
/// re-initialized to the constant Z, and one subtraction leaves
/// T = median - Z in [`median_register`].
pub fn build_threshold(layout: &RegisterLayout, z: u64) -> Result<Circuit, BuildError> {
    let nq = layout.total_qubits();
    let mut circuit = Circuit::new(nq);
    circuit.append(&build_constant_init(nq, &layout.n_left, z)?)?;
    circuit.append(&build_subtractor(
        nq,
        &layout.n_right,
        &layout.n_left,
        &layout.anc,
    )?)?;
    Ok(circuit)
}

/// Map the comparison flag into the output bit: clear the copy register's
/// upper bits, then set its low bit to NOT y.
pub fn binarize_flag_gates(d: &RegisterRef, y: usize) -> Vec<GateOp> {
    let mut gates = Vec::new();
    for k in (1..d.width()).rev() {
        gates.push(GateOp::reset(d.qubit(k)));
    }
    gates.push(GateOp::reset(d.qubit(0)));
    gates.push(GateOp::x(d.qubit(0)));
    gates.push(GateOp::cnot(y, d.qubit(0)));
    gates
}

/// Binarization stage: compare the preserved original gray (copy register)
/// against the threshold, producing y = `[gray < T]`, then collapse the copy
/// register to the single output bit [gray >= T].
pub fn build_binarization(layout: &RegisterLayout) -> Result<Circuit, BuildError> {
    let nq = layout.total_qubits();
    let mut circuit = Circuit::new(nq);
    circuit.append(&build_comparator(
        nq,
        &layout.copy,
        &layout.n_right,
        &layout.anc,
    )?)?;
    for g in binarize_flag_gates(&layout.copy, layout.anc.y) {
        circuit.push(g)?;
    }
    Ok(circuit)
}

/// Ceiling on pipeline width: sparse basis labels are u64.
const MAX_QUBITS: usize = 63;

fn validate(img: &GrayImage, config: &PipelineConfig) -> Result<(), PipelineError> {
    img.validate()?;
    if img.q() < 2 {
        return Err(PipelineError::DepthTooSmall { q: img.q() });
    }
    let needed = 6 * img.q() + 2 * img.n() + 4;
    if needed > MAX_QUBITS {
        return Err(PipelineError::TooManyQubits {
            needed,
            max: MAX_QUBITS,
        });
    }
    if config.window != WindowShape::Cross {
        return Err(PipelineError::UnsupportedWindow {
            window: config.window,
        });
    }
    if config.z >= (1 << img.q()) {
        return Err(PipelineError::ZOutOfRange {
            z: config.z,
            q: img.q(),
        });
    }
    let positions = check_z_precondition(img, config.z, WindowShape::Cross);
    if !positions.is_empty() {
        return Err(PipelineError::ZPreconditionViolated {
            z: config.z,
            positions,
        });
    }
    Ok(())
}

/// The pipeline's named stages in execution order.
pub fn pipeline_stages(
    img: &GrayImage,
    config: &PipelineConfig,
) -> Result<Vec<Stage>, PipelineError> {
    validate(img, config)?;
    let layout = RegisterLayout::new(img.n(), img.q());
    let mut out = neighborhood_stages(img, &layout)?;
    out.push(Stage {
        name: "median_network",
        headline: true,
        circuit: build_median_network(&layout)?,
    });
    out.push(Stage {
        name: "threshold",
        headline: true,
        circuit: build_threshold(&layout, config.z)?,
    });
    out.push(Stage {
        name: "binarization",
        headline: true,
        circuit: build_binarization(&layout)?,
    });
    Ok(out)
}

/// The complete segmentation circuit over a fresh 6q+2n+4 qubit layout.
/// Deterministic: the same image and config always yield the same gate list.
pub fn build_full_circuit(
    img: &GrayImage,
    config: &PipelineConfig,
) -> Result<Circuit, PipelineError> {
    let layout = RegisterLayout::new(img.n(), img.q());
    let mut circuit = Circuit::new(layout.total_qubits());
    for stage in pipeline_stages(img, config)? {
        circuit.append(&stage.circuit)?;
    }
    Ok(circuit)
}

/// Read one register's per-position values off the state's support. Every
/// position must appear on exactly one branch.
fn capture_register(state: &State, layout: &RegisterLayout, reg: &RegisterRef) -> Vec<u64> {
    let side = 1usize << layout.n();
    let mut values: Vec<Option<u64>> = vec![None; side * side];
    for (label, _) in state.distribution() {
        let y = layout.y_pos.extract(label) as usize;
        let x = layout.x_pos.extract(label) as usize;
        let slot = &mut values[y * side + x];
        assert!(slot.is_none(), "two branches share position ({y},{x})");
        *slot = Some(reg.extract(label));
    }
    values
        .into_iter()
        .map(|v| v.expect("one branch per position"))
        .collect()
}

#[cfg(debug_assertions)]
fn assert_register_clear(state: &State, reg: &RegisterRef) {
    for (label, _) in state.distribution() {
        assert_eq!(reg.extract(label), 0, "register expected clear before copy");
    }
}

/// Run the full pipeline, decode the segmented image, and keep the final
/// state around for measurement or sampling. The per-position diagnostic
/// trace is read from the simulator branches between stages.
pub fn run_pipeline(
    img: &GrayImage,
    config: &PipelineConfig,
) -> Result<PipelineRun, PipelineError> {
    let stages = pipeline_stages(img, config)?;
    let layout = RegisterLayout::new(img.n(), img.q());
    let branches = 1usize << (2 * layout.n());
    let mut state =
        State::with_dense_limit(layout.total_qubits(), config.backend, config.dense_limit)?;

    let mut centers = Vec::new();
    let mut medians = Vec::new();
    let mut thresholds = Vec::new();
    let mut prepared = false;
    for stage in &stages {
        match stage.name {
            "copy" =>
            {
                #[cfg(debug_assertions)]
                assert_register_clear(&state, &layout.copy)
            }
            // all five window registers are loaded once the median network
            // is reached; the copy register still holds the original gray
            "median_network" => centers = capture_register(&state, &layout, &layout.copy),
            _ => {}
        }
        for g in stage.circuit.gates() {
            state.apply(g)?;
        }
        if prepared {
            assert_eq!(
                state.branch_count(),
                branches,
                "branch count must stay one-per-position after {}",
                stage.name
            );
        }
        match stage.name {
            "preparation" => prepared = true,
            "median_network" => {
                medians = capture_register(&state, &layout, median_register(&layout))
            }
            "threshold" => thresholds = capture_register(&state, &layout, median_register(&layout)),
            _ => {}
        }
    }
    let out_bits = capture_register(&state, &layout, output_register(&layout));

    let side = 1usize << layout.n();
    let rows = (0..side * side)
        .map(|i| TraceRow {
            y: i / side,
            x: i % side,
            center: centers[i] as u16,
            median: medians[i] as u16,
            threshold: thresholds[i] as u16,
            bit: out_bits[i] & 1 == 1,
        })
        .collect();

    let marginal = state.marginal(&layout.binary_measurement_qubits())?;
    let binary = decode_binary(&marginal, layout.n())?;
    Ok(PipelineRun {
        outcome: SegmentOutcome {
            binary,
            trace: ThresholdTrace { z: config.z, rows },
        },
        state,
        layout,
    })
}

/// Run the full pipeline and decode the segmented image.
pub fn segment(img: &GrayImage, config: &PipelineConfig) -> Result<SegmentOutcome, PipelineError> {
    Ok(run_pipeline(img, config)?.outcome)
}

/// Audited cost per stage group plus totals, as `(name, report)` pairs in
/// stage order, followed by a `total` row and a `headline_total` row. The
/// headline excludes the image-loading oracle fragments, whose preparation
/// cost is conventionally not charged to the algorithm.
pub fn stage_cost_breakdown(
    img: &GrayImage,
    config: &PipelineConfig,
) -> Result<Vec<(String, CostReport)>, PipelineError> {
    let stages = pipeline_stages(img, config)?;
    let mut order: Vec<&'static str> = Vec::new();
    let mut grouped: std::collections::BTreeMap<&'static str, Vec<GateOp>> =
        std::collections::BTreeMap::new();
    for stage in &stages {
        if !grouped.contains_key(stage.name) {
            order.push(stage.name);
        }
        grouped
            .entry(stage.name)
            .or_default()
            .extend_from_slice(stage.circuit.gates());
    }
    let mut out: Vec<(String, CostReport)> = order
        .iter()
        .map(|&name| (name.to_string(), audit_gates(&grouped[name])))
        .collect();
    let mut all: Vec<GateOp> = Vec::new();
    let mut headline: Vec<GateOp> = Vec::new();
    for stage in &stages {
        all.extend_from_slice(stage.circuit.gates());
        if stage.headline {
            headline.extend_from_slice(stage.circuit.gates());
        }
    }
    out.push(("total".to_string(), audit_gates(&all)));
    out.push(("headline_total".to_string(), audit_gates(&headline)));
    Ok(out)
}
