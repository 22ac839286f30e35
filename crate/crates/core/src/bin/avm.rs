use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use adaptive_voter::analysis::components;
use adaptive_voter::engine::{run, EngineConfig, MassActionRates, RuleProbabilities, Semantics};
use adaptive_voter::generator::{generate, EdgeMode, InitSpec};
use adaptive_voter::graph::VoterGraph;
use adaptive_voter::harness::{print_summary, run_sweep, write_csv, ModelKind, SweepSpec};
use adaptive_voter::rng::RandomStream;

#[derive(Parser)]
#[command(name = "avm", about = "Adaptive voter model simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one run and print the final component report as JSON.
    Run(RunArgs),
    /// Run an alpha × u sweep and write one CSV row per run.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct InitArgs {
    #[arg(long, default_value_t = 100)]
    agents: usize,
    /// Exact number of initial links.
    #[arg(long, conflicts_with = "pair_prob")]
    edges: Option<usize>,
    /// Link each pair independently with this probability instead.
    #[arg(long)]
    pair_prob: Option<f64>,
}

impl InitArgs {
    fn edge_mode(&self) -> EdgeMode {
        match (self.edges, self.pair_prob) {
            (_, Some(v)) => EdgeMode::PerPair(v),
            (Some(m), None) => EdgeMode::FixedCount(m),
            (None, None) => EdgeMode::FixedCount(4 * self.agents),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value = "ctmc-weighted")]
    model: ModelKind,
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    #[arg(long, default_value_t = 0.5)]
    u: f64,
    #[command(flatten)]
    init: InitArgs,
    /// Start from this graph (`{"opinions": [...], "edges": [...]}`) instead of a random one.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = EngineConfig::DEFAULT_MAX_STEPS)]
    max_steps: u64,
    #[arg(long, default_value_t = f64::INFINITY)]
    max_time: f64,
    #[arg(long)]
    count_noop_steps: bool,
    #[arg(long, default_value_t = 1.0)]
    kappa_rewire_one: f64,
    #[arg(long, default_value_t = 1.0)]
    kappa_rewire_zero: f64,
    #[arg(long, default_value_t = 1.0)]
    rate_adopt_one: f64,
    #[arg(long, default_value_t = 1.0)]
    rate_adopt_zero: f64,
    /// Uniformized rule probabilities `p1,p2,p3,p4`; defaults to the alpha split.
    #[arg(long, value_delimiter = ',', num_args = 4)]
    probs: Option<Vec<f64>>,
    /// Write samples, events and the summary as JSON lines.
    #[arg(long)]
    trajectory_out: Option<PathBuf>,
    #[arg(long, default_value_t = 100)]
    sample_stride: u64,
    #[arg(long)]
    final_graph_out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, default_value = "ctmc-weighted")]
    model: ModelKind,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7")]
    alphas: Vec<f64>,
    #[arg(long, value_delimiter = ',', default_value = "0.5,0.3,0.1")]
    us: Vec<f64>,
    #[command(flatten)]
    init: InitArgs,
    #[arg(long, default_value_t = 40)]
    runs: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = EngineConfig::DEFAULT_MAX_STEPS)]
    max_steps: u64,
    #[arg(long, default_value_t = f64::INFINITY)]
    max_time: f64,
    #[arg(long)]
    jobs: Option<usize>,
    /// CSV destination; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    count_noop_steps: bool,
    #[arg(long, default_value_t = 1.0)]
    rate_adopt_one: f64,
    #[arg(long, default_value_t = 1.0)]
    rate_adopt_zero: f64,
    /// Fill the wallclock_ms column (makes the CSV non-reproducible).
    #[arg(long)]
    timing: bool,
}

type BoxError = Box<dyn std::error::Error>;

fn create(path: &PathBuf, flag: &str) -> Result<BufWriter<File>, BoxError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| format!("invalid {flag}: cannot create {}: {e}", path.display()).into())
}

fn cmd_run(a: RunArgs) -> Result<(), BoxError> {
    let semantics = match a.model {
        ModelKind::Dtmc => Semantics::Dtmc { alpha: a.alpha, count_noop_steps: a.count_noop_steps },
        ModelKind::CtmcWeighted => Semantics::CtmcWeighted { alpha: a.alpha },
        ModelKind::CtmcMassAction => Semantics::CtmcMassAction(MassActionRates {
            rewire_keep_one: a.kappa_rewire_one,
            rewire_keep_zero: a.kappa_rewire_zero,
            adopt_to_one: a.rate_adopt_one,
            adopt_to_zero: a.rate_adopt_zero,
        }),
        ModelKind::CtmcUniform => Semantics::CtmcUniformized(match &a.probs {
            Some(p) => RuleProbabilities::new([p[0], p[1], p[2], p[3]])?,
            None => RuleProbabilities::from_alpha(a.alpha),
        }),
        ModelKind::CtmcLcm => Semantics::CtmcLcm { alpha: a.alpha },
    };
    let config = EngineConfig {
        semantics,
        max_steps: a.max_steps,
        max_time: a.max_time,
        sample_stride: a.sample_stride,
        record_events: a.trajectory_out.is_some(),
    };
    config.validate()?;

    let mut rng = RandomStream::from_seed(a.seed);
    let mut g = match &a.graph {
        Some(path) => VoterGraph::from_json_str(&std::fs::read_to_string(path)?)?,
        None => generate(
            &InitSpec { n_agents: a.init.agents, u: a.u, edge_mode: a.init.edge_mode() },
            &mut rng,
        )?,
    };
    let mut t = run(&mut g, &config, &mut rng)?;
    t.summary.seed = Some(a.seed);

    if let Some(path) = &a.trajectory_out {
        let mut w = create(path, "--trajectory-out")?;
        t.write_jsonl(&mut w)?;
        w.flush()?;
    }
    if let Some(path) = &a.final_graph_out {
        std::fs::write(path, g.to_json_string())?;
    }
    let out = serde_json::json!({
        "summary": t.summary,
        "components": components(&g),
    });
    println!("{}", serde_json::to_string_pretty(&out)?);
    Ok(())
}

fn cmd_sweep(a: SweepArgs) -> Result<(), BoxError> {
    let spec = SweepSpec {
        model: a.model,
        alphas: a.alphas,
        us: a.us,
        runs_per_config: a.runs,
        n_agents: a.init.agents,
        edge_mode: a.init.edge_mode(),
        base_seed: a.seed,
        max_steps: a.max_steps,
        max_time: a.max_time,
        count_noop_steps: a.count_noop_steps,
        adopt_rates: [a.rate_adopt_one, a.rate_adopt_zero],
        jobs: a.jobs.unwrap_or_else(adaptive_voter::harness::default_jobs),
        record_wallclock: a.timing,
    };
    spec.validate()?;
    let out = a.out.as_ref().map(|p| create(p, "--out")).transpose()?;
    let records = run_sweep(&spec)?;
    match out {
        Some(mut w) => {
            write_csv(&records, &mut w)?;
            w.flush()?;
            print_summary(&spec, &records, io::stdout().lock())?;
        }
        None => {
            write_csv(&records, io::stdout().lock())?;
            print_summary(&spec, &records, io::stderr().lock())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Sweep(a) => cmd_sweep(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
