//! `qcl`: allocation, fault-tree translation, proof checking and experiment
//! replication from the command line.
//!
//! Exit codes: 0 success, 1 proof check failed, 2 bad input, 3 solver error.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use qcl::allocator::{AllocationProblem, SaParams, Solver};
use qcl::confidence_fn::parse_components;
use qcl::experiments::{run_rq1, run_rq2, write_csv, Rq1Config, Rq2Config};
use qcl::fault_tree::{parse_ft, translate};
use qcl::proof::{check_proof, ProofTree};
use qcl::{Confidence, Error, Strategy};

/// Samples used to validate that confidence functions are non-decreasing.
const MONOTONE_SAMPLES: usize = 1001;

#[derive(Parser)]
#[command(name = "qcl", version, about = "Quantitative confidence logic toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a verification budget across the basic events of a fault tree.
    Allocate(AllocateArgs),
    /// Translate a fault tree with leaf confidences into a proof tree.
    Translate(TranslateArgs),
    /// Re-check every rule application of a proof tree.
    Check(CheckArgs),
    /// Run the predicted-reliability experiment and write CSV.
    Rq1(ExperimentArgs),
    /// Run the fault-seeding experiment and write CSV.
    Rq2(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Sa,
    Uniform,
    Proportional,
    Grid,
}

impl From<StrategyArg> for Strategy {
    fn from(s: StrategyArg) -> Self {
        match s {
            StrategyArg::Sa => Strategy::Sa,
            StrategyArg::Uniform => Strategy::Uniform,
            StrategyArg::Proportional => Strategy::Proportional,
            StrategyArg::Grid => Strategy::Grid,
        }
    }
}

#[derive(Args)]
struct AllocateArgs {
    #[arg(long, value_name = "PATH")]
    fault_tree: PathBuf,
    #[arg(long, value_name = "PATH")]
    components: PathBuf,
    #[arg(long)]
    budget: f64,
    #[arg(long, value_enum, default_value = "sa")]
    strategy: StrategyArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Annealing parameters as JSON (`iterations`, `initial_temp`, `cooling`,
    /// `step_start`, `step_end`); flags below override it.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long)]
    iterations: Option<usize>,
    #[arg(long)]
    initial_temp: Option<f64>,
    #[arg(long)]
    cooling: Option<f64>,
    /// Lattice spacing for `--strategy grid`.
    #[arg(long, default_value_t = 0.05)]
    grid_step: f64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TranslateArgs {
    #[arg(long, value_name = "PATH")]
    fault_tree: PathBuf,
    /// JSON object mapping each basic event to `{"t": .., "f": ..}`.
    #[arg(long, value_name = "PATH")]
    confidences: PathBuf,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[arg(long, value_name = "PATH")]
    proof: PathBuf,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
    /// Overrides the seed in the config file.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn check(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }

    /// Input errors map to 2, anything raised while solving to 3.
    fn from_solver(e: Error) -> Self {
        let code = if e.is_input_error() { 2 } else { 3 };
        Failure { code, message: e.to_string() }
    }
}

type CmdResult = Result<(), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn in_file(path: &Path) -> impl Fn(Error) -> Failure + '_ {
    move |e| Failure::input(format!("{}: {e}", path.display()))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> CmdResult {
    let result = match out {
        Some(p) => fs::write(p, bytes),
        None => io::stdout().lock().write_all(bytes),
    };
    result.map_err(|e| {
        let target = out.map_or("stdout".to_string(), |p| p.display().to_string());
        Failure::input(format!("cannot write {target}: {e}"))
    })
}

fn emit_json(out: Option<&Path>, value: &impl serde::Serialize) -> CmdResult {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| Failure::from_solver(e.into()))?;
    text.push('\n');
    emit(out, text.as_bytes())
}

fn cmd_allocate(args: &AllocateArgs) -> CmdResult {
    let ft = parse_ft(&read(&args.fault_tree)?).map_err(in_file(&args.fault_tree))?;
    let components = parse_components(&read(&args.components)?).map_err(in_file(&args.components))?;
    if !(args.budget >= 0.0 && args.budget.is_finite()) {
        return Err(Failure::input(format!("--budget must be finite and non-negative, got {}", args.budget)));
    }
    for c in &components {
        let monotone = c
            .expr
            .check_monotone(c.spent + args.budget, MONOTONE_SAMPLES)
            .map_err(in_file(&args.components))?;
        if !monotone {
            return Err(Failure::input(format!(
                "{}: components.{}.fn decreases somewhere on [0, {}]",
                args.components.display(),
                c.name,
                c.spent + args.budget
            )));
        }
    }
    let problem = AllocationProblem::new(ft, components, args.budget).map_err(Failure::from_solver)?;

    let mut params = match &args.config {
        Some(p) => serde_json::from_str::<SaParams>(&read(p)?).map_err(|e| in_file(p)(e.into()))?,
        None => SaParams::default(),
    };
    if let Some(i) = args.iterations {
        params.iterations = i;
    }
    if let Some(t) = args.initial_temp {
        params.initial_temp = t;
    }
    if let Some(c) = args.cooling {
        params.cooling = c;
    }
    let solver = match Strategy::from(args.strategy) {
        Strategy::Sa => Solver::Sa { params, seed: args.seed },
        Strategy::Grid => Solver::Grid { step: args.grid_step },
        Strategy::Uniform => Solver::Uniform,
        Strategy::Proportional => Solver::Proportional,
    };
    let result = solver.solve(&problem).map_err(Failure::from_solver)?;
    emit_json(args.out.as_deref(), &result.rounded())
}

fn parse_confidences(text: &str) -> Result<BTreeMap<String, Confidence>, Error> {
    let root: Value = serde_json::from_str(text)?;
    let map = root
        .as_object()
        .ok_or_else(|| Error::Schema("confidences: expected an object keyed by basic event".into()))?;
    map.iter()
        .map(|(name, v)| {
            let c = serde_json::from_value::<Confidence>(v.clone())
                .map_err(|e| Error::Schema(format!("confidences.{name}: {e}")))?;
            Ok((name.clone(), c))
        })
        .collect()
}

fn cmd_translate(args: &TranslateArgs) -> CmdResult {
    let ft = parse_ft(&read(&args.fault_tree)?).map_err(in_file(&args.fault_tree))?;
    let confs = parse_confidences(&read(&args.confidences)?).map_err(in_file(&args.confidences))?;
    let tree = translate(&ft, &confs).map_err(Failure::from_solver)?;
    emit_json(args.out.as_deref(), &tree)
}

fn cmd_check(args: &CheckArgs) -> CmdResult {
    let tree: ProofTree =
        serde_json::from_str(&read(&args.proof)?).map_err(|e| in_file(&args.proof)(e.into()))?;
    match check_proof(&tree) {
        Ok(()) => emit(None, format!("ok: {}\n", tree.conclusion()).as_bytes()),
        Err(defect) => Err(Failure::check(format!("invalid proof: {defect}"))),
    }
}

fn emit_csv(out: Option<&Path>, rows: &[qcl::experiments::ExperimentRow]) -> CmdResult {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).map_err(Failure::from_solver)?;
    emit(out, &buf)
}

fn cmd_rq1(args: &ExperimentArgs) -> CmdResult {
    let mut cfg: Rq1Config =
        serde_json::from_str(&read(&args.config)?).map_err(|e| in_file(&args.config)(e.into()))?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate().map_err(in_file(&args.config))?;
    let rows = run_rq1(&cfg).map_err(Failure::from_solver)?;
    emit_csv(args.out.as_deref(), &rows)
}

fn cmd_rq2(args: &ExperimentArgs) -> CmdResult {
    let mut cfg: Rq2Config =
        serde_json::from_str(&read(&args.config)?).map_err(|e| in_file(&args.config)(e.into()))?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate().map_err(in_file(&args.config))?;
    let rows = run_rq2(&cfg).map_err(Failure::from_solver)?;
    emit_csv(args.out.as_deref(), &rows)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Allocate(a) => cmd_allocate(a),
        Command::Translate(a) => cmd_translate(a),
        Command::Check(a) => cmd_check(a),
        Command::Rq1(a) => cmd_rq1(a),
        Command::Rq2(a) => cmd_rq2(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
