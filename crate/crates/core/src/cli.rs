// Copyright 2026 The ghzsim Developers
// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage, 3 data format or I/O, 4 failed internal
//! check (the toy verdict).

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::analysis::{
    analyze_counts, analyze_tallies, export_histogram, import_histogram, CountsTable, MerminReport,
    TallyFixture,
};
use crate::error::Error;
use crate::experiments::{toy_report, ExperimentId, ToyOptions};
use crate::hv::{
    classical_bound_oracle, classify_pair, closure_with_trace, derive_environment_relation,
    sample_hv_shots, RelationGraph,
};
use crate::noise::NoiseModel;
use crate::simulate::simulate_counts;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DATA: i32 = 3;
pub const EXIT_ASSERTION: i32 = 4;

pub const TOOL: &str = "ghzsim";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "ghzsim", version, about = "GHZ-type Mermin experiment simulator and hidden-variable relation checker")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate experiments and write counts files.
    Run(RunArgs),
    /// Compute the Mermin report from three counts files or a tallies file.
    Analyze(AnalyzeArgs),
    /// Hidden-variable relation tools.
    #[command(subcommand)]
    Hv(HvCommand),
    /// Check the mediator stage of the toy circuit.
    Toy(ToyArgs),
}

#[derive(Debug, Args)]
struct RunArgs {
    /// 1, 2, 3 or all.
    #[arg(long, default_value = "all")]
    experiment: ExperimentChoice,
    #[arg(long, default_value_t = 8000, value_parser = clap::value_parser!(u64).range(1..))]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Readout flip probabilities, e.g. `q1=0.0881,q2=0.0881`.
    #[arg(long = "noise-p")]
    noise_p: Option<NoiseModel>,
    #[arg(long, env = "GHZSIM_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum ExperimentChoice {
    One(ExperimentId),
    All,
}

impl std::str::FromStr for ExperimentChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "all" {
            return Ok(Self::All);
        }
        s.parse::<u8>()
            .ok()
            .and_then(|v| ExperimentId::new(v).ok())
            .map(Self::One)
            .ok_or_else(|| format!("expected 1, 2, 3 or all, got {s:?}"))
    }
}

impl ExperimentChoice {
    fn ids(self) -> Vec<ExperimentId> {
        match self {
            Self::One(id) => vec![id],
            Self::All => ExperimentId::ALL.to_vec(),
        }
    }

    fn label(self) -> String {
        match self {
            Self::One(id) => id.value().to_string(),
            Self::All => "all".into(),
        }
    }
}

#[derive(Debug, Args)]
struct AnalyzeArgs {
    /// Counts files for experiments 1, 2 and 3 (JSON or histogram CSV).
    #[arg(conflicts_with = "tallies")]
    paths: Vec<PathBuf>,
    /// Signed per-setting sums instead of counts.
    #[arg(long)]
    tallies: Option<PathBuf>,
    /// Also write the report as JSON.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum HvCommand {
    /// Close a relation graph and print the inferred edges.
    Closure {
        #[arg(long)]
        graph: PathBuf,
        /// Classify this pair of sets after closure.
        #[arg(long, num_args = 2, value_names = ["A", "B"])]
        classify: Option<Vec<String>>,
        #[arg(long)]
        json: bool,
    },
    /// Derive the register/selector relation from named bundles.
    Derive {
        /// fig12, fig13, fig14, env-common or env-separate.
        #[arg(long, conflicts_with = "relations", required_unless_present = "relations")]
        bundle: Option<String>,
        /// Comma-separated bundle names such as `E1+,E1-,E3,RM1`.
        #[arg(long, value_delimiter = ',')]
        relations: Option<Vec<String>>,
        #[arg(long)]
        json: bool,
    },
    /// Sample the arranged/disarranged mixture and write counts files.
    Sample {
        #[arg(long)]
        fa: f64,
        /// Shots per setting combination per experiment.
        #[arg(long, default_value_t = 4000, value_parser = clap::value_parser!(u64).range(1..))]
        shots: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, env = "GHZSIM_OUT_DIR", default_value = ".")]
        out_dir: PathBuf,
    },
    /// Extremes of the Mermin value over deterministic strategies.
    Bound,
}

#[derive(Debug, Args)]
struct ToyArgs {
    /// Drop the un-flip gates (negative control).
    #[arg(long)]
    no_unflip: bool,
    #[arg(long)]
    json: bool,
}

/// Provenance block written into every JSON artifact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub flags: BTreeMap<String, String>,
    pub seed: Option<u64>,
}

impl Provenance {
    fn new(command: &str, flags: BTreeMap<String, String>, seed: Option<u64>) -> Self {
        Self { tool: TOOL.into(), version: VERSION.into(), command: command.into(), flags, seed }
    }
}

/// Counts file written by `run` and `hv sample`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountsFile {
    pub provenance: Provenance,
    pub experiment: ExperimentId,
    pub noise: NoiseModel,
    pub counts: CountsTable,
}

/// JSON report written by `analyze --out` and `run --experiment all`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub provenance: Provenance,
    #[serde(flatten)]
    pub report: MerminReport,
    pub m3_standard_error: f64,
    pub shots: u64,
    pub seed: Option<u64>,
    pub noise: Option<NoiseModel>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Core(Error),
    Assertion(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

type CliResult<T = ()> = Result<T, Failure>;

fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::Config(_) => EXIT_USAGE,
        Error::UndefinedAverage(_)
        | Error::DataFormat(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::Csv(_) => EXIT_DATA,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let result = match cli.command {
        Command::Run(args) => cmd_run(&args, out),
        Command::Analyze(args) => cmd_analyze(&args, out),
        Command::Hv(cmd) => cmd_hv(&cmd, out),
        Command::Toy(args) => cmd_toy(&args, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Assertion(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_ASSERTION
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> CliResult {
    let text = serde_json::to_string_pretty(value).map_err(Error::from)?;
    fs::write(path, text + "\n")?;
    Ok(())
}

pub fn counts_file_name(id: ExperimentId) -> String {
    format!("experiment{}_counts.json", id.value())
}

pub fn histogram_file_name(id: ExperimentId) -> String {
    format!("experiment{}_histogram.csv", id.value())
}

fn write_counts(dir: &Path, file: &CountsFile) -> CliResult<PathBuf> {
    let path = dir.join(counts_file_name(file.experiment));
    write_json(&path, file)?;
    export_histogram(&file.counts, &dir.join(histogram_file_name(file.experiment)))?;
    Ok(path)
}

fn build_report(
    provenance: Provenance,
    report: MerminReport,
    seed: Option<u64>,
    noise: Option<NoiseModel>,
) -> AnalysisReport {
    AnalysisReport {
        provenance,
        m3_standard_error: report.m3_standard_error(),
        shots: report.total_shots(),
        report,
        seed,
        noise,
    }
}

fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> CliResult {
    let noise = args.noise_p.clone().unwrap_or_default();
    let flags = BTreeMap::from([
        ("experiment".to_string(), args.experiment.label()),
        ("shots".to_string(), args.shots.to_string()),
        ("seed".to_string(), args.seed.to_string()),
        ("noise-p".to_string(), noise.to_string()),
    ]);
    let provenance = Provenance::new("run", flags, Some(args.seed));
    fs::create_dir_all(&args.out_dir)?;
    let mut tables = Vec::new();
    for id in args.experiment.ids() {
        let counts = simulate_counts(id, args.shots, args.seed, &noise)?;
        let file = CountsFile { provenance: provenance.clone(), experiment: id, noise: noise.clone(), counts };
        let path = write_counts(&args.out_dir, &file)?;
        writeln!(out, "wrote {}", path.display())?;
        tables.push(file.counts);
    }
    if let Ok(tables) = <[CountsTable; 3]>::try_from(tables) {
        let report = analyze_counts(&tables)?;
        let full = build_report(provenance, report, Some(args.seed), Some(noise));
        let path = args.out_dir.join("report.json");
        write_json(&path, &full)?;
        writeln!(out, "wrote {}", path.display())?;
        writeln!(out, "<M3> = {:.9} +/- {:.9}", report.m3, full.m3_standard_error)?;
    }
    Ok(())
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CountsInput {
    File(CountsFile),
    Bare(CountsTable),
}

struct LoadedCounts {
    table: CountsTable,
    seed: Option<u64>,
    noise: Option<NoiseModel>,
}

fn load_counts(path: &Path) -> CliResult<LoadedCounts> {
    if path.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")) {
        return Ok(LoadedCounts { table: import_histogram(path)?, seed: None, noise: None });
    }
    let text = fs::read_to_string(path)?;
    let input: CountsInput = serde_json::from_str(&text)
        .map_err(|e| Error::DataFormat(format!("{}: {e}", path.display())))?;
    Ok(match input {
        CountsInput::File(f) => LoadedCounts { table: f.counts, seed: f.provenance.seed, noise: Some(f.noise) },
        CountsInput::Bare(table) => LoadedCounts { table, seed: None, noise: None },
    })
}

/// The shared value when every entry agrees, otherwise `None`.
fn common<T: PartialEq + Clone>(values: impl IntoIterator<Item = Option<T>>) -> Option<T> {
    let mut iter = values.into_iter();
    let first = iter.next()??;
    iter.all(|v| v.as_ref() == Some(&first)).then_some(first)
}

fn cmd_analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> CliResult {
    let mut flags = BTreeMap::new();
    let (report, seed, noise) = if let Some(path) = &args.tallies {
        flags.insert("tallies".to_string(), path.display().to_string());
        let fixture = TallyFixture::from_json(&fs::read_to_string(path)?)?;
        (analyze_tallies(&fixture.experiments)?, None, None)
    } else {
        if args.paths.len() != 3 {
            return Err(Failure::Usage(format!(
                "analyze needs exactly 3 counts files, got {}",
                args.paths.len()
            )));
        }
        let loaded = args.paths.iter().map(|p| load_counts(p)).collect::<CliResult<Vec<_>>>()?;
        for (i, p) in args.paths.iter().enumerate() {
            flags.insert(format!("counts{}", i + 1), p.display().to_string());
        }
        let seed = common(loaded.iter().map(|l| l.seed));
        let noise = common(loaded.iter().map(|l| l.noise.clone()));
        let [a, b, c] = <[LoadedCounts; 3]>::try_from(loaded).ok().expect("three inputs");
        (analyze_counts(&[a.table, b.table, c.table])?, seed, noise)
    };
    write!(out, "{}", report.render_table())?;
    if let Some(path) = &args.out {
        let full = build_report(Provenance::new("analyze", flags, seed), report, seed, noise);
        write_json(path, &full)?;
    }
    Ok(())
}

fn cmd_hv(cmd: &HvCommand, out: &mut dyn Write) -> CliResult {
    match cmd {
        HvCommand::Closure { graph, classify, json } => {
            let graph = RelationGraph::from_json(&fs::read_to_string(graph)?)?;
            let closure = closure_with_trace(&graph);
            let verdict = match classify.as_deref() {
                Some([a, b]) => Some(classify_pair(&closure.graph, a, b)?),
                _ => None,
            };
            if *json {
                let doc = serde_json::json!({
                    "closed": closure.graph.to_document(),
                    "added": closure.trace.iter().map(edge_row).collect::<Vec<_>>(),
                    "classification": verdict,
                });
                writeln!(out, "{}", serde_json::to_string_pretty(&doc).map_err(Error::from)?)?;
            } else {
                for row in closure.trace.iter().map(edge_row) {
                    writeln!(out, "added {}{} ~ {}{}", row[0], row[1], row[2], row[3])?;
                }
                writeln!(out, "edges: {} -> {}", graph.edge_count(), closure.graph.edge_count())?;
                if let (Some(v), Some([a, b])) = (verdict, classify.as_deref()) {
                    writeln!(out, "{a} / {b}: {v}")?;
                }
            }
        }
        HvCommand::Derive { bundle, relations, json } => {
            let names: Vec<String> = match (bundle, relations) {
                (Some(b), _) => crate::hv::bundles::preset(b)?.iter().map(|s| s.to_string()).collect(),
                (None, Some(r)) => r.clone(),
                (None, None) => return Err(Failure::Usage("give --bundle or --relations".into())),
            };
            let summary = derive_environment_relation(&names)?.summary();
            if *json {
                writeln!(out, "{}", serde_json::to_string_pretty(&summary).map_err(Error::from)?)?;
            } else {
                writeln!(out, "bundles: {}", summary.bundles.join(", "))?;
                for row in &summary.trace {
                    writeln!(out, "added {}{} ~ {}{}", row[0], row[1], row[2], row[3])?;
                }
                let related = if summary.register_first_assistant_related { "yes" } else { "no" };
                writeln!(out, "n / a related: {related}")?;
                writeln!(out, "n / e: {}", summary.verdict)?;
            }
        }
        HvCommand::Sample { fa, shots, seed, out_dir } => {
            let tables = sample_hv_shots(*fa, *shots, *seed)?;
            let flags = BTreeMap::from([
                ("fa".to_string(), fa.to_string()),
                ("shots".to_string(), shots.to_string()),
                ("seed".to_string(), seed.to_string()),
            ]);
            let provenance = Provenance::new("hv sample", flags, Some(*seed));
            fs::create_dir_all(out_dir)?;
            for (id, counts) in ExperimentId::ALL.into_iter().zip(tables.iter()) {
                let file = CountsFile {
                    provenance: provenance.clone(),
                    experiment: id,
                    noise: NoiseModel::noiseless(),
                    counts: counts.clone(),
                };
                let path = write_counts(out_dir, &file)?;
                writeln!(out, "wrote {}", path.display())?;
            }
            let report = analyze_counts(&tables)?;
            writeln!(out, "<M3> = {:.9} (4 f_A = {:.9})", report.m3, 4.0 * fa)?;
        }
        HvCommand::Bound => {
            let (min, max) = classical_bound_oracle();
            writeln!(out, "deterministic strategies: 64")?;
            writeln!(out, "min M3 = {min}")?;
            writeln!(out, "max M3 = {max}")?;
        }
    }
    Ok(())
}

fn edge_row(edge: &crate::hv::graph::Edge) -> [String; 4] {
    let (a, b) = edge;
    [a.set.clone(), a.block.symbol().into(), b.set.clone(), b.block.symbol().into()]
}

fn cmd_toy(args: &ToyArgs, out: &mut dyn Write) -> CliResult {
    let report = toy_report(ToyOptions { unflip: !args.no_unflip })?;
    let verdict = if report.pass { "PASS" } else { "FAIL" };
    if args.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report).map_err(Error::from)?)?;
    } else {
        for (i, step) in report.trace.iter().enumerate() {
            writeln!(out, "{:>2}  {:<12} {}", i + 1, step.op, step.state)?;
        }
        writeln!(out, "mediator stage restores |00000⟩ on q1..q5: {verdict}")?;
    }
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Assertion(format!(
            "mediator stage left deviation {:.3e}",
            report.max_deviation
        )))
    }
}
