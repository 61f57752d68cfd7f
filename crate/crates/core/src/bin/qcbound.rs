//! qcbound: minimum-distance upper bounds for QC protograph LDPC codes.
//!
//! Every subcommand writes one JSON document (to stdout, or to `--json FILE`)
//! and a short human summary to stderr. Matrix arguments accept a path or
//! `builtin:NAME` for the bundled matrices.
//!
//! Exit codes: 0 success, 1 input error, 2 vacuous or degenerate result,
//! 3 resource cap exceeded.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use qcbound::bounds::{
    column_subset_bound, row_removal_bound, BoundQuery, BoundReport, SearchMode, SearchOptions,
    DEFAULT_MAX_REMOVED_ROWS,
};
use qcbound::codeword::{check_removal, cofactor_codeword, reduced_codeword, verify_codeword, Condition, QcCodeword};
use qcbound::exact::{exact_min_distance, ExactResult, DEFAULT_MAX_DIMENSION};
use qcbound::expansion::{expand, recover_shifts, to_scalar, two_stage_expand, validate_first_stage, ShiftAssignment};
use qcbound::matrix::{BinaryMatrix, MatrixFile, PolyMatrix, PunctureSet, WeightMatrix};

#[derive(Parser)]
#[command(name = "qcbound", version, about = "Minimum-distance upper bounds for QC protograph LDPC codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Permanent-based upper bound on the minimum distance.
    Bound(BoundArgs),
    /// Build and verify the codeword behind one candidate.
    Codeword(CodewordArgs),
    /// Expand a protomatrix by one or two stages of circulants.
    Expand(ExpandArgs),
    /// Brute-force minimum distance of a small expanded code.
    Exact(ExactArgs),
    /// Check a type-I matrix against its protomatrix block by block.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Mode {
    Exhaustive,
    Sample,
}

#[derive(Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Level {
    Weight,
    Poly,
}

#[derive(Args, Serialize)]
struct BoundArgs {
    /// Weight matrix or polynomial matrix file.
    #[arg(long)]
    matrix: String,
    /// Punctured columns, e.g. "4" or "16-19".
    #[arg(long, default_value = "")]
    puncture: String,
    /// 1: column subsets only. 2: also remove up to --max-remove rows.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    theorem: u8,
    /// Row-removal depth for --theorem 2 (default 2, capped at J-1).
    #[arg(long)]
    max_remove: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
    mode: Mode,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct CodewordArgs {
    /// Polynomial matrix file.
    #[arg(long)]
    matrix: String,
    #[arg(long, default_value = "")]
    puncture: String,
    /// Column set S. When omitted, S and T come from the best bound candidate.
    #[arg(long)]
    columns: Option<String>,
    /// Removed rows T.
    #[arg(long, default_value = "")]
    rows_removed: String,
    /// Condition checked on the removed rows.
    #[arg(long, value_enum, default_value_t = Level::Weight)]
    level: Level,
    /// Row-removal depth when searching for S and T.
    #[arg(long)]
    max_remove: Option<usize>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ExpandArgs {
    #[arg(long)]
    proto: String,
    #[arg(long)]
    shifts: String,
    #[arg(long)]
    n: u32,
    /// Shifts for a second expansion of the type-I stage-1 matrix.
    #[arg(long, requires = "n2")]
    stage2_shifts: Option<String>,
    #[arg(long, requires = "stage2_shifts")]
    n2: Option<u32>,
    /// Matrix output file. Without it the matrix text goes into the JSON.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the binary matrix instead of the polynomial one.
    #[arg(long)]
    scalar: bool,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ExactArgs {
    /// Polynomial matrix file.
    #[arg(long)]
    matrix: String,
    #[arg(long, default_value = "")]
    puncture: String,
    #[arg(long, default_value_t = DEFAULT_MAX_DIMENSION)]
    max_dim: usize,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args, Serialize)]
struct ValidateArgs {
    /// Type-I weight matrix produced by the first expansion stage.
    #[arg(long)]
    stage1: String,
    #[arg(long)]
    proto: String,
    #[arg(long)]
    n1: u32,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Serialize)]
struct InputDigest {
    source: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest {
    command: &'static str,
    tool_version: &'static str,
    inputs: Vec<InputDigest>,
    flags: serde_json::Value,
    seed: Option<u64>,
    wall_time_s: f64,
}

#[derive(Serialize)]
struct Output<T: Serialize> {
    manifest: RunManifest,
    result: T,
}

enum Status {
    Ok,
    Degenerate,
}

struct Run {
    command: &'static str,
    started: Instant,
    inputs: Vec<InputDigest>,
}

impl Run {
    fn new(command: &'static str) -> Self {
        Run { command, started: Instant::now(), inputs: Vec::new() }
    }

    fn read(&mut self, source: &str) -> anyhow::Result<String> {
        let text = match source.strip_prefix("builtin:") {
            Some(name) => qcbound::data::builtin(name)
                .ok_or_else(|| anyhow!("unknown builtin {name:?}"))?
                .text
                .to_string(),
            None => std::fs::read_to_string(source).with_context(|| format!("reading {source}"))?,
        };
        self.inputs.push(InputDigest { source: source.to_string(), sha256: hex::encode(Sha256::digest(&text)) });
        Ok(text)
    }

    fn finish<T: Serialize, F: Serialize>(
        self,
        flags: &F,
        seed: Option<u64>,
        json: Option<&PathBuf>,
        result: T,
    ) -> anyhow::Result<()> {
        let manifest = RunManifest {
            command: self.command,
            tool_version: env!("CARGO_PKG_VERSION"),
            inputs: self.inputs,
            flags: serde_json::to_value(flags)?,
            seed,
            wall_time_s: self.started.elapsed().as_secs_f64(),
        };
        let mut text = serde_json::to_string_pretty(&Output { manifest, result })?;
        text.push('\n');
        match json {
            Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
            None => print!("{text}"),
        }
        Ok(())
    }
}

fn parse_index_list(text: &str) -> anyhow::Result<Vec<usize>> {
    Ok(PunctureSet::parse(text)?.columns().to_vec())
}

fn default_depth(requested: Option<usize>, j: usize) -> usize {
    requested.unwrap_or(DEFAULT_MAX_REMOVED_ROWS.min(j.saturating_sub(1)))
}

#[derive(Serialize)]
struct BoundOutput {
    theorem: u8,
    max_removed_rows: usize,
    #[serde(flatten)]
    report: BoundReport,
}

fn cmd_bound(args: BoundArgs) -> anyhow::Result<Status> {
    let mut run = Run::new("bound");
    let weights = MatrixFile::parse(&run.read(&args.matrix)?)?.weight_matrix();
    let puncture = PunctureSet::parse(&args.puncture)?;
    let depth = match args.theorem {
        1 if args.max_remove.is_some_and(|d| d > 0) => bail!("--max-remove needs --theorem 2"),
        1 => 0,
        _ => default_depth(args.max_remove, weights.rows()),
    };
    let mode = match args.mode {
        Mode::Exhaustive => SearchMode::Exhaustive,
        Mode::Sample => SearchMode::Sampled { samples: args.samples, seed: args.seed },
    };
    let query = BoundQuery::new(weights, puncture, depth, mode)?;
    let opts = SearchOptions { workers: args.workers };
    let report = if args.theorem == 1 { column_subset_bound(&query, opts)? } else { row_removal_bound(&query, opts)? };

    match &report.bound_value {
        Some(v) => eprintln!("bound {v}  S={:?} T={:?}", report.witness_s, report.witness_t),
        None => eprintln!("no candidate gives a nonzero codeword"),
    }
    let c = &report.counts;
    eprintln!(
        "examined {}  zero-row skipped {}  zero-sum {}  punctured-only {}{}",
        c.examined,
        c.zero_row_skipped,
        c.zero_sum_excluded,
        c.punctured_only_excluded,
        if report.exhaustive { "" } else { "  (sampled)" }
    );
    let status = if report.bound_value.is_some() { Status::Ok } else { Status::Degenerate };
    let seed = matches!(args.mode, Mode::Sample).then_some(args.seed);
    let out = BoundOutput { theorem: args.theorem, max_removed_rows: depth, report };
    run.finish(&args, seed, args.json.as_ref(), out)?;
    Ok(status)
}

#[derive(Serialize)]
struct CodewordOutput {
    columns: Vec<usize>,
    rows_removed: Vec<usize>,
    level: Level,
    codeword: QcCodeword,
    verified: bool,
    status: &'static str,
}

fn cmd_codeword(args: CodewordArgs) -> anyhow::Result<Status> {
    let mut run = Run::new("codeword");
    let h = PolyMatrix::parse(&run.read(&args.matrix)?)?;
    let puncture = PunctureSet::parse(&args.puncture)?;
    puncture.validate(h.rows(), h.cols())?;
    let (columns, rows_removed) = match &args.columns {
        Some(s) => (parse_index_list(s)?, parse_index_list(&args.rows_removed)?),
        None => {
            let weights = h.weight_matrix();
            let depth = default_depth(args.max_remove, weights.rows());
            let query = BoundQuery::new(weights, puncture.clone(), depth, SearchMode::Exhaustive)?;
            let report = row_removal_bound(&query, SearchOptions::default())?;
            if report.bound_value.is_none() {
                eprintln!("no candidate gives a nonzero codeword");
                return Ok(Status::Degenerate);
            }
            (report.witness_s, report.witness_t)
        }
    };
    let codeword = if rows_removed.is_empty() {
        cofactor_codeword(&h, &puncture, &columns)?
    } else {
        let level = match args.level {
            Level::Weight => Condition::WeightLevel,
            Level::Poly => Condition::PolyLevel,
        };
        let cert = check_removal(&h, &columns, &rows_removed, level)?;
        reduced_codeword(&h, &puncture, &cert)?
    };
    let verified = verify_codeword(&h, &codeword)?;
    let status = if codeword.is_zero() {
        "zero codeword"
    } else if codeword.is_punctured_only() {
        "punctured-only codeword"
    } else {
        "ok"
    };
    eprintln!(
        "S={columns:?} T={rows_removed:?}  transmitted weight {}  verified {verified}  {status}",
        codeword.transmitted_weight()
    );
    let code = if status == "ok" && verified { Status::Ok } else { Status::Degenerate };
    let out = CodewordOutput { columns, rows_removed, level: args.level, codeword, verified, status };
    run.finish(&args, None, args.json.as_ref(), out)?;
    Ok(code)
}

#[derive(Serialize)]
struct ExpandOutput {
    rows: usize,
    cols: usize,
    circulant_size: u32,
    scalar: bool,
    out: Option<PathBuf>,
    matrix: Option<String>,
}

fn cmd_expand(args: ExpandArgs) -> anyhow::Result<Status> {
    let mut run = Run::new("expand");
    let proto = MatrixFile::parse(&run.read(&args.proto)?)?.weight_matrix();
    let (n, shifts) = read_shifts(&mut run, &args.shifts, args.n)?;
    let (h, size) = match (&args.stage2_shifts, args.n2) {
        (Some(path), Some(n2)) => {
            let (n2, stage2) = read_shifts(&mut run, path, n2)?;
            (two_stage_expand(&proto, &shifts, n, &stage2, n2)?, n2)
        }
        _ => (expand(&proto, &shifts, n)?, n),
    };
    let (rows, cols, text) = if args.scalar {
        let b = to_scalar(&h)?;
        (b.rows(), b.cols(), b.to_weight_matrix().to_text())
    } else {
        (h.rows(), h.cols(), h.to_text())
    };
    eprintln!("{rows}x{cols} {} matrix, circulant size {size}", if args.scalar { "binary" } else { "polynomial" });
    let matrix = match &args.out {
        Some(path) => {
            std::fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
            None
        }
        None => Some(text),
    };
    let out = ExpandOutput { rows, cols, circulant_size: size, scalar: args.scalar, out: args.out.clone(), matrix };
    run.finish(&args, None, args.json.as_ref(), out)?;
    Ok(Status::Ok)
}

fn read_shifts(run: &mut Run, source: &str, n: u32) -> anyhow::Result<(u32, ShiftAssignment)> {
    let (file_n, shifts) = ShiftAssignment::parse(&run.read(source)?)?;
    if file_n != n {
        bail!("{source} declares circulant size {file_n}, flag says {n}");
    }
    Ok((n, shifts))
}

fn cmd_exact(args: ExactArgs) -> anyhow::Result<Status> {
    let mut run = Run::new("exact");
    let h = PolyMatrix::parse(&run.read(&args.matrix)?)?;
    let puncture = PunctureSet::parse(&args.puncture)?;
    let result: ExactResult = exact_min_distance(&h, &puncture, args.max_dim)?;
    match result.min_distance {
        Some(d) => eprintln!("n={} k={} d={d}", result.length_n, result.dimension_k),
        None if !result.dimensionality_preserved => {
            eprintln!("n={} k={}: puncturing loses dimension", result.length_n, result.dimension_k)
        }
        None => eprintln!("n={} k=0: no nonzero codewords", result.length_n),
    }
    let status = if result.min_distance.is_some() { Status::Ok } else { Status::Degenerate };
    run.finish(&args, None, args.json.as_ref(), result)?;
    Ok(status)
}

#[derive(Serialize)]
struct ValidateOutput {
    #[serde(flatten)]
    validation: qcbound::expansion::StageValidation,
    shifts: Option<String>,
}

fn cmd_validate(args: ValidateArgs) -> anyhow::Result<Status> {
    let mut run = Run::new("validate");
    let stage1: WeightMatrix = MatrixFile::parse(&run.read(&args.stage1)?)?.weight_matrix();
    let proto = MatrixFile::parse(&run.read(&args.proto)?)?.weight_matrix();
    let b = BinaryMatrix::from_weight_matrix(&stage1)?;
    let validation = validate_first_stage(&b, &proto, args.n1)?;
    let shifts = if validation.ok { Some(recover_shifts(&b, &proto, args.n1)?.to_text(args.n1)) } else { None };
    for issue in &validation.issues {
        eprintln!(
            "block ({}, {}): expected weight {}, row weights {:?}, circulant {}",
            issue.row_block, issue.col_block, issue.expected_weight, issue.row_weights, issue.circulant
        );
    }
    eprintln!(
        "{}: {} blocks checked, {} issues",
        if validation.ok { "pass" } else { "fail" },
        validation.blocks_checked,
        validation.issues.len()
    );
    let status = if validation.ok { Status::Ok } else { Status::Degenerate };
    run.finish(&args, None, args.json.as_ref(), ValidateOutput { validation, shifts })?;
    Ok(status)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Bound(a) => cmd_bound(a),
        Command::Codeword(a) => cmd_codeword(a),
        Command::Expand(a) => cmd_expand(a),
        Command::Exact(a) => cmd_exact(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Degenerate) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<qcbound::Error>() {
                Some(qcbound::Error::DimensionCap { .. }) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}
