//! Command-line front end: image I/O, pipeline invocation, QASM export,
//! cost and MSE reports, histogram emission, and synthetic image generation.

pub mod gen;
pub mod pgm;
pub mod qasm;
pub mod report;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use qimseg::arith::cost_comparison;
use qimseg::neqr::{decode_binary_counts, BinaryImage, GrayImage, ImageError};
use qimseg::oracle::{
    adaptive_threshold_segment, fixed_threshold_segment, mse_binary, OracleError, WindowShape,
};
use qimseg::pipeline::{
    build_full_circuit, run_pipeline, stage_cost_breakdown, PipelineConfig, PipelineError,
};
use qimseg::sim::{Backend, SimError, DEFAULT_DENSE_LIMIT};

use pgm::PgmError;
use report::{
    histogram_csv, CostSection, ImageMeta, MseSection, RunReport, SamplingSection, StageCost,
    TimingSection, SCHEMA_VERSION,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Pgm(#[from] PgmError),

    #[error(transparent)]
    Pipeline(#[from] PipelineError),

    #[error(transparent)]
    Oracle(#[from] OracleError),

    #[error(transparent)]
    Decode(ImageError),

    #[error("quantum output does not match the classical oracle")]
    OracleMismatch,

    #[error("mask must be a maxval-1 PGM, got bit depth {q}")]
    MaskNotBinary { q: usize },

    #[error(transparent)]
    Qasm(#[from] qasm::QasmError),

    #[error(transparent)]
    Sim(#[from] SimError),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Stable exit-code table; each precondition failure class maps to its
    /// own nonzero code (documented in the README).
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Pgm(e) => match e {
                PgmError::Malformed(_) | PgmError::NonSquare { .. } => 3,
                PgmError::Image(
                    ImageError::NotPowerOfTwoSide { .. } | ImageError::SideOutOfRange { .. },
                ) => 3,
                PgmError::MaxvalNotSupported { .. } => 4,
                PgmError::Image(_) => 5,
                PgmError::Io(_) => 12,
            },
            CliError::Pipeline(e) => match e {
                PipelineError::ZOutOfRange { .. } => 6,
                PipelineError::ZPreconditionViolated { .. } => 7,
                PipelineError::UnsupportedWindow { .. } => 8,
                PipelineError::DepthTooSmall { .. } => 5,
                PipelineError::TooManyQubits { .. } => 9,
                PipelineError::Sim(SimError::DenseLimitExceeded { .. }) => 9,
                PipelineError::Image(
                    ImageError::MissingPixel { .. } | ImageError::AmbiguousPixel { .. },
                ) => 11,
                PipelineError::Image(_) => 5,
                _ => 13,
            },
            CliError::Oracle(e) => match e {
                OracleError::ZOutOfRange { .. } | OracleError::TOutOfRange { .. } => 6,
                OracleError::ShapeMismatch { .. } => 5,
                OracleError::EvenLength { .. } => 13,
            },
            CliError::Decode(
                ImageError::MissingPixel { .. } | ImageError::AmbiguousPixel { .. },
            ) => 11,
            CliError::Decode(_) => 5,
            CliError::MaskNotBinary { .. } => 5,
            CliError::OracleMismatch => 10,
            CliError::Qasm(_) => 13,
            CliError::Sim(SimError::DenseLimitExceeded { .. }) => 9,
            CliError::Sim(_) => 13,
            CliError::Io(_) => 12,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BackendOpt {
    Branch,
    Dense,
}

impl From<BackendOpt> for Backend {
    fn from(b: BackendOpt) -> Backend {
        match b {
            BackendOpt::Branch => Backend::Branch,
            BackendOpt::Dense => Backend::Dense,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum WindowOpt {
    Cross,
    Square,
    Diagonal,
}

impl From<WindowOpt> for WindowShape {
    fn from(w: WindowOpt) -> WindowShape {
        match w {
            WindowOpt::Cross => WindowShape::Cross,
            WindowOpt::Square => WindowShape::Square,
            WindowOpt::Diagonal => WindowShape::Diagonal,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "qimseg",
    version,
    about = "Local-adaptive-threshold segmentation of NEQR-encoded images on a quantum circuit simulator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and simulate the segmentation circuit, cross-check it against
    /// the classical oracle, and write the binary image.
    Segment(SegmentArgs),
    /// Run the classical adaptive-threshold segmentation only.
    Oracle(OracleArgs),
    /// Audit fragment and pipeline gate costs against the closed-form
    /// targets.
    CostReport(CostReportArgs),
    /// Write the measured (flag, Y, X) distribution as CSV.
    Histogram(HistogramArgs),
    /// Generate a seeded synthetic image with uneven illumination plus its
    /// ground-truth shape mask.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Input PGM (P2 or P5), square power-of-two side, maxval 2^q - 1.
    #[arg(long)]
    pub input: PathBuf,
    /// Output PGM for the segmented binary image.
    #[arg(long)]
    pub out: PathBuf,
    /// Threshold adjustment subtracted from the window median.
    #[arg(long, default_value_t = 1)]
    pub z: u64,
    #[arg(long, value_enum, default_value_t = BackendOpt::Branch)]
    pub backend: BackendOpt,
    /// Neighborhood window; the quantum path accepts only cross.
    #[arg(long, value_enum, default_value_t = WindowOpt::Cross)]
    pub window: WindowOpt,
    /// Sampling mode: decode from this many measurement shots instead of
    /// the exact distribution.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: Option<u64>,
    /// Sampling seed (only meaningful with --shots).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the circuit as OpenQASM 3.0.
    #[arg(long)]
    pub qasm_out: Option<PathBuf>,
    /// Lower MCX gates to Toffoli ladders in the QASM output.
    #[arg(long)]
    pub decompose_mcx: bool,
    /// Also write a JSON run report.
    #[arg(long)]
    pub report_out: Option<PathBuf>,
    /// Also write the measured distribution as CSV.
    #[arg(long)]
    pub histogram_out: Option<PathBuf>,
    /// Also write the per-position diagnostic trace (median, threshold,
    /// center, output bit read from the simulator branches) as CSV.
    #[arg(long)]
    pub trace_out: Option<PathBuf>,
    /// Ground-truth mask (maxval-1 PGM) for MSE reporting.
    #[arg(long)]
    pub mask: Option<PathBuf>,
    /// Fixed-threshold baseline for MSE comparison; default 2^(q-1) - 1.
    #[arg(long)]
    pub fixed_t: Option<u64>,
    /// Accept arbitrary maxval by remapping onto 8-bit range.
    #[arg(long)]
    pub rescale: bool,
    /// Include wall-clock timing in the report (makes report bytes
    /// nondeterministic).
    #[arg(long)]
    pub timing: bool,
    /// Qubit ceiling for the dense backend.
    #[arg(long, default_value_t = DEFAULT_DENSE_LIMIT)]
    pub dense_limit: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub z: u64,
    #[arg(long, value_enum, default_value_t = WindowOpt::Cross)]
    pub window: WindowOpt,
    #[arg(long)]
    pub report_out: Option<PathBuf>,
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[arg(long)]
    pub fixed_t: Option<u64>,
    #[arg(long)]
    pub rescale: bool,
}

#[derive(Debug, Args)]
pub struct CostReportArgs {
    /// Audit fragments for every width in q_min..=q_max.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u16).range(2..=32))]
    pub q_min: u16,
    #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u16).range(2..=32))]
    pub q_max: u16,
    /// Also break down the full pipeline for this image.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    pub z: u64,
    #[arg(long)]
    pub rescale: bool,
    /// Write the audit as JSON instead of the text table only.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HistogramArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 1)]
    pub z: u64,
    #[arg(long, value_enum, default_value_t = BackendOpt::Branch)]
    pub backend: BackendOpt,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub rescale: bool,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub out: PathBuf,
    /// Ground-truth mask output (maxval-1 PGM).
    #[arg(long)]
    pub mask_out: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Side exponent: the image is 2^n x 2^n.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Gray bit depth.
    #[arg(long, default_value_t = 3)]
    pub q: usize,
    #[arg(long, default_value_t = 2)]
    pub shapes: usize,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Segment(args) => cmd_segment(&args),
        Command::Oracle(args) => cmd_oracle(&args),
        Command::CostReport(args) => cmd_cost_report(&args),
        Command::Histogram(args) => cmd_histogram(&args),
        Command::Gen(args) => cmd_gen(&args),
    }
}

fn read_mask(path: &Path, rescale: bool) -> Result<BinaryImage, CliError> {
    let img = pgm::read_pgm(path, rescale)?;
    if img.q() != 1 {
        return Err(CliError::MaskNotBinary { q: img.q() });
    }
    let bits = img.pixels().iter().map(|&v| v == 1).collect();
    Ok(BinaryImage::new(img.n(), bits).expect("same shape"))
}

fn default_fixed_t(q: usize) -> u64 {
    (1u64 << (q - 1)) - 1
}

fn mse_section(
    segmented: &BinaryImage,
    img: &GrayImage,
    mask_path: &Path,
    rescale: bool,
    fixed_t: Option<u64>,
) -> Result<MseSection, CliError> {
    let mask = read_mask(mask_path, rescale)?;
    let fixed_t = fixed_t.unwrap_or_else(|| default_fixed_t(img.q()));
    let fixed = fixed_threshold_segment(img, fixed_t)?;
    Ok(MseSection {
        reference: mask_path.display().to_string(),
        adaptive: mse_binary(segmented, &mask)?.into(),
        fixed: mse_binary(&fixed, &mask)?.into(),
        fixed_threshold: fixed_t,
    })
}

fn cost_section(img: &GrayImage, config: &PipelineConfig) -> Result<CostSection, PipelineError> {
    let rows = stage_cost_breakdown(img, config)?;
    let find = |name: &str| {
        rows.iter()
            .find(|(n, _)| n == name)
            .map(|(_, r)| r.total_cost)
            .unwrap_or(0)
    };
    let total = find("total");
    let headline_total = find("headline_total");
    let stages = rows
        .iter()
        .filter(|(n, _)| n != "total" && n != "headline_total")
        .map(|(n, r)| StageCost::from_report(n, r))
        .collect();
    Ok(CostSection {
        stages,
        total,
        headline_total,
    })
}

/// Print a status line, ignoring broken pipes so `qimseg ... | head`
/// truncates instead of panicking while file artifacts still get written.
fn say(line: String) {
    use std::io::Write;
    let mut out = std::io::stdout();
    let _ = writeln!(out, "{line}");
}

/// Project full-label sample counts onto a measured-qubit pattern, bit `j`
/// of the pattern holding `qubits[j]`.
fn project_counts(counts: &BTreeMap<u64, u64>, qubits: &[usize]) -> BTreeMap<u64, u64> {
    let mut out: BTreeMap<u64, u64> = BTreeMap::new();
    for (&label, &c) in counts {
        let pattern = qubits
            .iter()
            .enumerate()
            .fold(0u64, |p, (j, &q)| p | (((label >> q) & 1) << j));
        *out.entry(pattern).or_default() += c;
    }
    out
}

pub fn cmd_segment(args: &SegmentArgs) -> Result<(), CliError> {
    let img = pgm::read_pgm(&args.input, args.rescale)?;
    let config = PipelineConfig {
        z: args.z,
        backend: args.backend.into(),
        window: args.window.into(),
        dense_limit: args.dense_limit,
    };

    let t0 = Instant::now();
    let circuit = build_full_circuit(&img, &config)?;
    let build_ms = t0.elapsed().as_secs_f64() * 1e3;
    let t1 = Instant::now();
    let run = run_pipeline(&img, &config)?;
    let simulate_ms = t1.elapsed().as_secs_f64() * 1e3;

    let measured = run.layout.binary_measurement_qubits();
    let mut sampling = None;
    let binary = match args.shots {
        Some(shots) => {
            sampling = Some(SamplingSection {
                shots,
                seed: args.seed,
            });
            let counts = project_counts(&run.state.sample(shots, args.seed), &measured);
            decode_binary_counts(&counts, img.n()).map_err(CliError::Decode)?
        }
        None => run.outcome.binary.clone(),
    };

    let oracle = adaptive_threshold_segment(&img, args.z, WindowShape::Cross)?;
    let matched = binary == oracle.binary;

    pgm::write_binary(&binary, &args.out)?;
    if let Some(qasm_path) = &args.qasm_out {
        pgm::write_atomic(
            qasm_path,
            qasm::emit_qasm(&circuit, args.decompose_mcx).as_bytes(),
        )?;
    }
    if let Some(hist_path) = &args.histogram_out {
        let csv = match args.shots {
            Some(shots) => {
                let counts = project_counts(&run.state.sample(shots, args.seed), &measured);
                let freqs: BTreeMap<u64, f64> = counts
                    .iter()
                    .map(|(&p, &c)| (p, c as f64 / shots as f64))
                    .collect();
                histogram_csv(&freqs, img.n())
            }
            None => histogram_csv(&run.state.marginal(&measured)?, img.n()),
        };
        pgm::write_atomic(hist_path, csv.as_bytes())?;
    }
    if let Some(trace_path) = &args.trace_out {
        let mut csv = String::from("y,x,center,median,threshold,bit\n");
        for row in &run.outcome.trace.rows {
            csv.push_str(&format!(
                "{},{},{},{},{},{}\n",
                row.y,
                row.x,
                row.center,
                row.median,
                row.threshold,
                u8::from(row.bit)
            ));
        }
        pgm::write_atomic(trace_path, csv.as_bytes())?;
    }
    if let Some(report_path) = &args.report_out {
        let report = RunReport {
            schema_version: SCHEMA_VERSION,
            command: "segment".into(),
            image: ImageMeta {
                n: img.n(),
                q: img.q(),
                side: img.side(),
            },
            z: args.z,
            window: "cross".into(),
            backend: Some(
                match config.backend {
                    Backend::Branch => "branch",
                    Backend::Dense => "dense",
                }
                .into(),
            ),
            qubit_total: Some(run.layout.total_qubits()),
            cost: Some(cost_section(&img, &config)?),
            oracle_match: Some(matched),
            mse: match &args.mask {
                Some(mask) => Some(mse_section(
                    &binary,
                    &img,
                    mask,
                    args.rescale,
                    args.fixed_t,
                )?),
                None => None,
            },
            sampling,
            timing: args.timing.then_some(TimingSection {
                build_ms,
                simulate_ms,
            }),
        };
        pgm::write_atomic(report_path, report.to_json().as_bytes())?;
    }

    say(format!(
        "segmented {} ({}x{}, q={}) with z={} on {} qubits; oracle match: {}",
        args.input.display(),
        img.side(),
        img.side(),
        img.q(),
        args.z,
        run.layout.total_qubits(),
        matched
    ));
    if matched {
        Ok(())
    } else {
        Err(CliError::OracleMismatch)
    }
}

pub fn cmd_oracle(args: &OracleArgs) -> Result<(), CliError> {
    let img = pgm::read_pgm(&args.input, args.rescale)?;
    let out = adaptive_threshold_segment(&img, args.z, args.window.into())?;
    pgm::write_binary(&out.binary, &args.out)?;
    if let Some(report_path) = &args.report_out {
        let report = RunReport {
            schema_version: SCHEMA_VERSION,
            command: "oracle".into(),
            image: ImageMeta {
                n: img.n(),
                q: img.q(),
                side: img.side(),
            },
            z: args.z,
            window: format!("{:?}", args.window).to_lowercase(),
            backend: None,
            qubit_total: None,
            cost: None,
            oracle_match: None,
            mse: match &args.mask {
                Some(mask) => Some(mse_section(
                    &out.binary,
                    &img,
                    mask,
                    args.rescale,
                    args.fixed_t,
                )?),
                None => None,
            },
            sampling: None,
            timing: None,
        };
        pgm::write_atomic(report_path, report.to_json().as_bytes())?;
    }
    if !out.clamped.is_empty() {
        eprintln!(
            "note: threshold clamped at 0 for {} position(s) where median < z",
            out.clamped.len()
        );
    }
    say(format!(
        "oracle segmented {} -> {}",
        args.input.display(),
        args.out.display()
    ));
    Ok(())
}

#[derive(Debug, Serialize)]
struct FragmentRow {
    fragment: String,
    width: usize,
    not: u64,
    h: u64,
    cnot: u64,
    toffoli: u64,
    cswap: u64,
    reset: u64,
    mcx: BTreeMap<String, u64>,
    total_cost: u64,
    reference_total: u64,
    matches_reference: bool,
}

#[derive(Debug, Serialize)]
struct CostReportDoc {
    schema_version: u32,
    fragments: Vec<FragmentRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pipeline: Option<PipelineCostDoc>,
}

#[derive(Debug, Serialize)]
struct PipelineCostDoc {
    image: ImageMeta,
    z: u64,
    qubit_total: usize,
    cost: CostSection,
}

pub fn cmd_cost_report(args: &CostReportArgs) -> Result<(), CliError> {
    let mut fragments = Vec::new();
    for q in args.q_min..=args.q_max.max(args.q_min) {
        for row in cost_comparison(q as usize).map_err(PipelineError::from)? {
            fragments.push(FragmentRow {
                fragment: row.fragment.clone(),
                width: row.width,
                not: row.audited.not,
                h: row.audited.h,
                cnot: row.audited.cnot,
                toffoli: row.audited.toffoli,
                cswap: row.audited.cswap,
                reset: row.audited.reset,
                mcx: row
                    .audited
                    .mcx
                    .iter()
                    .map(|(&k, &v)| (k.to_string(), v))
                    .collect(),
                total_cost: row.audited.total_cost,
                reference_total: row.reference_total,
                matches_reference: row.total_matches(),
            });
        }
    }
    say("fragment        q  toffoli  cnot  reset  cswap  not  total  reference  match".to_string());
    for f in &fragments {
        say(format!(
            "{:<14} {:>2}  {:>7}  {:>4}  {:>5}  {:>5}  {:>3}  {:>5}  {:>9}  {}",
            f.fragment,
            f.width,
            f.toffoli,
            f.cnot,
            f.reset,
            f.cswap,
            f.not,
            f.total_cost,
            f.reference_total,
            if f.matches_reference { "yes" } else { "NO" }
        ));
    }

    let pipeline = match &args.input {
        Some(input) => {
            let img = pgm::read_pgm(input, args.rescale)?;
            let config = PipelineConfig {
                z: args.z,
                ..Default::default()
            };
            let section = cost_section(&img, &config)?;
            say(format!(
                "\npipeline stages for {} (z={}):",
                input.display(),
                args.z
            ));
            for s in &section.stages {
                say(format!("  {:<22} total {}", s.name, s.total_cost));
            }
            say(format!(
                "  total {} / headline {}",
                section.total, section.headline_total
            ));
            Some(PipelineCostDoc {
                image: ImageMeta {
                    n: img.n(),
                    q: img.q(),
                    side: img.side(),
                },
                z: args.z,
                qubit_total: qimseg::neqr::RegisterLayout::new(img.n(), img.q()).total_qubits(),
                cost: section,
            })
        }
        None => None,
    };

    if let Some(out) = &args.out {
        let doc = CostReportDoc {
            schema_version: SCHEMA_VERSION,
            fragments,
            pipeline,
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializes");
        s.push('\n');
        pgm::write_atomic(out, s.as_bytes())?;
    }
    Ok(())
}

pub fn cmd_histogram(args: &HistogramArgs) -> Result<(), CliError> {
    let img = pgm::read_pgm(&args.input, args.rescale)?;
    let config = PipelineConfig {
        z: args.z,
        backend: args.backend.into(),
        ..Default::default()
    };
    let run = run_pipeline(&img, &config)?;
    let measured = run.layout.binary_measurement_qubits();
    let csv = match args.shots {
        Some(shots) => {
            let counts = project_counts(&run.state.sample(shots, args.seed), &measured);
            let freqs: BTreeMap<u64, f64> = counts
                .iter()
                .map(|(&p, &c)| (p, c as f64 / shots as f64))
                .collect();
            histogram_csv(&freqs, img.n())
        }
        None => histogram_csv(&run.state.marginal(&measured)?, img.n()),
    };
    pgm::write_atomic(&args.out, csv.as_bytes())?;
    say(format!("wrote histogram {}", args.out.display()));
    Ok(())
}

pub fn cmd_gen(args: &GenArgs) -> Result<(), CliError> {
    if !(3..=8).contains(&args.q) || args.n == 0 {
        return Err(CliError::Decode(ImageError::DepthOutOfRange { q: args.q }));
    }
    let params = gen::GenParams {
        n: args.n,
        q: args.q,
        seed: args.seed,
        shapes: args.shapes,
    };
    let (image, mask) = gen::generate(&params);
    pgm::write_gray(&image, &args.out)?;
    if let Some(mask_out) = &args.mask_out {
        pgm::write_binary(&mask, mask_out)?;
    }
    say(format!(
        "generated {} ({}x{}, q={}, seed {})",
        args.out.display(),
        image.side(),
        image.side(),
        image.q(),
        args.seed
    ));
    Ok(())
}
