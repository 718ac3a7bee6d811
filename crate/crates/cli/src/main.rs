use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use pgt_core::corpus;
use pgt_core::rewrite::set_trace_rewrites;
use pgt_core::strategy::{export_dot, export_json, replay, search, SearchBudget, Strategy};
use pgt_core::tactics::{find_counterexample, QuickcheckMode};
use pgt_core::theory::{check_refs, load_theory, parse_strategy, Loc};

mod report;

use report::{GoalReport, Status};

#[derive(Parser)]
#[command(name = "pgtlab", version, about = "Proof search with goal-oriented conjecturing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prove every theorem of a theory file.
    Prove {
        file: PathBuf,
        #[command(flatten)]
        opts: ProveOpts,
    },
    /// Prove the theorems of a bundled example theory (see `examples`).
    Example {
        name: String,
        #[command(flatten)]
        opts: ProveOpts,
    },
    /// List the bundled example theories.
    Examples,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum QcMode {
    Exhaustive,
    Random,
}

#[derive(Args, Debug)]
struct ProveOpts {
    /// Strategy expression used for every theorem instead of its own.
    #[arg(long, value_name = "NAME")]
    strategy_override: Option<String>,
    /// Only run the theorem with this name.
    #[arg(long)]
    goal: Option<String>,
    /// Maximum number of atomic strategy applications per search.
    #[arg(long, default_value_t = 20_000)]
    max_nodes: usize,
    /// Wall-clock limit per search, in seconds.
    #[arg(long, default_value_t = 60.0)]
    timeout: f64,
    /// Quickcheck bound on list length (nesting depth for other datatypes).
    #[arg(long, default_value_t = 3)]
    qc_list_len: usize,
    /// Number of distinct test elements for type variables.
    #[arg(long, default_value_t = 2)]
    qc_domain: usize,
    #[arg(long, value_enum, default_value_t = QcMode::Exhaustive)]
    qc_mode: QcMode,
    /// Seed for random quickcheck.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cap on conjectures kept per conjecturing step.
    #[arg(long, default_value_t = 500)]
    max_conjectures: usize,
    /// Write the search tree as JSON.
    #[arg(long, value_name = "FILE")]
    trace_json: Option<PathBuf>,
    /// Write the search tree as Graphviz DOT.
    #[arg(long, value_name = "FILE")]
    trace_dot: Option<PathBuf>,
    /// Write every generated conjecture with its provenance.
    #[arg(long, value_name = "FILE")]
    dump_conjectures: Option<PathBuf>,
    /// Log every rewrite step to stderr.
    #[arg(long)]
    trace_rewrites: bool,
}

const RANDOM_TRIALS: usize = 1_000;

impl ProveOpts {
    fn budget(&self) -> Result<SearchBudget> {
        if self.max_nodes == 0 || self.qc_list_len == 0 || self.qc_domain == 0 || self.max_conjectures == 0 {
            bail!("--max-nodes, --qc-list-len, --qc-domain and --max-conjectures must be positive");
        }
        if !(self.timeout.is_finite() && self.timeout > 0.0) {
            bail!("--timeout must be a positive number of seconds");
        }
        let mut b = SearchBudget {
            max_nodes: self.max_nodes,
            timeout: Duration::from_secs_f64(self.timeout),
            max_conjectures: self.max_conjectures,
            ..SearchBudget::default()
        };
        b.quickcheck.max_list_length = self.qc_list_len;
        b.quickcheck.element_domain_size = self.qc_domain;
        b.quickcheck.mode = match self.qc_mode {
            QcMode::Exhaustive => QuickcheckMode::Exhaustive,
            QcMode::Random => QuickcheckMode::Random { seed: self.seed, trials: RANDOM_TRIALS },
        };
        Ok(b)
    }
}

/// `dir/trace.dot` becomes `dir/trace.<goal>.dot` when several theorems are run.
fn per_goal_path(path: &Path, goal: &str, many: bool) -> PathBuf {
    if !many {
        return path.to_path_buf();
    }
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.{goal}.{}", ext.to_string_lossy()),
        None => format!("{stem}.{goal}"),
    };
    path.with_file_name(name)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

enum Failure {
    /// Parse, elaboration, configuration or I/O problem.
    Input(anyhow::Error),
    /// A found proof did not replay.
    Unsound(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Failure {
        Failure::Input(e)
    }
}

fn run(source: &str, opts: &ProveOpts) -> Result<Vec<GoalReport>, Failure> {
    let budget = opts.budget()?;
    set_trace_rewrites(opts.trace_rewrites);
    let ctx = load_theory(source, &budget).map_err(|e| Failure::Input(e.into()))?;
    let override_strategy = match &opts.strategy_override {
        Some(text) => {
            let s = parse_strategy(text).map_err(|e| anyhow::anyhow!("--strategy-override: {e}"))?;
            check_refs(&ctx, &s, Loc { line: 0, column: 0 }).map_err(|e| anyhow::anyhow!("--strategy-override: {e}"))?;
            Some(s)
        }
        None => None,
    };
    let goals: Vec<_> = ctx.goals.iter().filter(|g| opts.goal.as_ref().is_none_or(|n| *n == g.name)).collect();
    if let Some(n) = &opts.goal {
        if goals.is_empty() {
            return Err(anyhow::anyhow!("no theorem named {n}").into());
        }
    }
    let many = goals.len() > 1;
    let mut reports = Vec::new();
    for g in goals {
        let strategy: &Strategy = override_strategy.as_ref().unwrap_or(&g.strategy);
        let result = search(strategy, &g.statement, &ctx, &budget);
        let status = match &result.script {
            Some(script) => {
                if let Err(e) = replay(script, &g.statement, &ctx, &budget) {
                    return Err(Failure::Unsound(format!("proof of {} does not replay: {e}", g.name)));
                }
                Status::Proved
            }
            None if result.budget_hit() => Status::BudgetCut,
            None => match find_counterexample(&ctx, &g.statement, &budget.quickcheck) {
                Some(cex) => Status::Refuted(cex.iter().map(|(n, v)| format!("{n} = {}", ctx.print(v))).collect()),
                None => Status::NoProofFound,
            },
        };
        if let Some(p) = &opts.trace_json {
            write(&per_goal_path(p, &g.name, many), &export_json(&result.trace))?;
        }
        if let Some(p) = &opts.trace_dot {
            write(&per_goal_path(p, &g.name, many), &export_dot(&result.trace))?;
        }
        if let Some(p) = &opts.dump_conjectures {
            write(&per_goal_path(p, &g.name, many), &result.trace.dump_conjectures())?;
        }
        reports.push(GoalReport::new(&ctx, g, status, &result));
    }
    Ok(reports)
}

fn prove(source: &str, opts: &ProveOpts) -> ExitCode {
    match run(source, opts) {
        Ok(reports) => {
            for r in &reports {
                print!("{}", r.stdout_text());
                eprintln!("{}", r.stats_line());
            }
            if reports.iter().all(|r| r.status == Status::Proved) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Unsound(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Prove { file, opts } => match std::fs::read_to_string(&file) {
            Ok(src) => prove(&src, &opts),
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", file.display());
                ExitCode::from(2)
            }
        },
        Command::Example { name, opts } => match corpus::get(&name) {
            Some(src) => prove(src, &opts),
            None => {
                eprintln!("error: no bundled example {name}; try `pgtlab examples`");
                ExitCode::from(2)
            }
        },
        Command::Examples => {
            for (name, _) in corpus::ALL {
                println!("{}", name.trim_end_matches(".thy"));
            }
            ExitCode::SUCCESS
        }
    }
}
