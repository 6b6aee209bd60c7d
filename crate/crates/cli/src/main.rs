use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use serde::Serialize;

use trendcast::centrality;
use trendcast::experiment::{self, GridSummary};
use trendcast::ingestion::{self, DatasetFormat, DatasetSpec};
use trendcast::predictors::{self, UserInfluence};
use trendcast::{Error, PredictorSpec, TemporalBipartiteGraph, Timestamp};

/// Predict which items will gain the most collections in a future window.
#[derive(Parser)]
#[command(name = "trendcast", version)]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Overrides the seed from the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory, overriding the config file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Print one JSON object per grid point to stdout.
    #[arg(long, global = true)]
    json_summary: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a parameter sweep and write sweep.csv, heatmap.csv and scatter.csv.
    Run { config: PathBuf },
    /// Check a sweep config and its inputs without running anything.
    Validate { config: PathBuf },
    /// Generate a synthetic vote log (and optionally a follower graph).
    Gen { config: PathBuf },
    /// Print the top-n items predicted at one date.
    Rank {
        dataset: PathBuf,
        /// Predictor, e.g. `pbp,lambda=0.9,t_p=86400`.
        #[arg(long)]
        spec: PredictorSpec,
        /// Dataset format: votes or ratings.
        #[arg(long, default_value = "votes")]
        format: DatasetFormat,
        /// Rating threshold for the ratings format.
        #[arg(long)]
        threshold: Option<f64>,
        /// Prediction date (default: the last event).
        #[arg(long)]
        at: Option<Timestamp>,
        #[arg(long, short, default_value_t = 100)]
        n: usize,
        /// Follower edge list, required by ibp.
        #[arg(long)]
        social: Option<PathBuf>,
    },
}

#[derive(Serialize)]
struct JsonSummary<'a> {
    kind: &'a str,
    lambda: Option<f64>,
    gamma: Option<f64>,
    eta: Option<f64>,
    centrality: Option<&'a str>,
    t_p: Timestamp,
    t_f: Timestamp,
    n: usize,
    test_dates: usize,
    mean_precision: f64,
    mean_new_entries: f64,
    mean_correct: f64,
    mean_new_entry_rate: Option<f64>,
}

impl<'a> From<&'a GridSummary> for JsonSummary<'a> {
    fn from(s: &'a GridSummary) -> Self {
        let p = s.spec.predictor;
        JsonSummary {
            kind: p.kind().as_str(),
            lambda: p.lambda(),
            gamma: p.gamma(),
            eta: p.eta(),
            centrality: p.centrality().map(|c| c.as_str()),
            t_p: s.spec.t_p,
            t_f: s.t_f,
            n: s.n,
            test_dates: s.report.per_date.len(),
            mean_precision: s.report.mean_precision,
            mean_new_entries: s.report.mean_new_entries,
            mean_correct: s.report.mean_correct,
            mean_new_entry_rate: s.report.mean_new_entry_rate,
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("TRENDCAST_LOG", "info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            if let Some(Error::Invalid(diags)) = e.downcast_ref::<Error>() {
                for d in diags {
                    eprintln!("error: {d}");
                }
            } else {
                eprintln!("error: {}", render_chain(&e));
            }
            ExitCode::FAILURE
        }
    }
}

/// Joins the error chain, skipping causes already quoted by their parent.
fn render_chain(e: &anyhow::Error) -> String {
    let mut out = String::new();
    let mut prev = String::new();
    for cause in e.chain() {
        let msg = cause.to_string();
        if !prev.contains(&msg) {
            if !out.is_empty() {
                out.push_str(": ");
            }
            out.push_str(&msg);
        }
        prev = msg;
    }
    out
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    if let Some(workers) = cli.workers {
        if workers == 0 {
            bail!("--workers must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .context("starting worker pool")?;
    }
    match cli.command {
        Command::Run { config } => {
            let mut cfg = experiment::load_experiment_config(&config)?;
            if let Some(seed) = cli.seed {
                cfg.seed = seed;
                cfg.dataset_spec.rng_seed = seed;
            }
            let outcome = experiment::run_sweep(&cfg, cli.out.as_deref())?;
            if cli.json_summary {
                let mut stdout = io::stdout().lock();
                for s in &outcome.summaries {
                    serde_json::to_writer(&mut stdout, &JsonSummary::from(s))?;
                    writeln!(stdout)?;
                }
            }
            for f in &outcome.files {
                log::info!("wrote {}", f.display());
            }
        }
        Command::Validate { config } => {
            let cfg = experiment::load_experiment_config(&config)?;
            let diags = experiment::validate(&cfg);
            for d in &diags {
                eprintln!("error: {d}");
            }
            if !diags.is_empty() {
                return Ok(ExitCode::FAILURE);
            }
            eprintln!("{}: ok", config.display());
        }
        Command::Gen { config } => {
            let text = std::fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let mut settings = experiment::parse_gen_config(&text).with_context(|| config.display().to_string())?;
            if let Some(seed) = cli.seed {
                settings.network.rng_seed = seed;
            }
            let out = cli.out.unwrap_or_else(|| PathBuf::from("."));
            for f in experiment::write_generated(&settings, &out)? {
                log::info!("wrote {}", f.display());
            }
        }
        Command::Rank {
            dataset,
            spec,
            format,
            threshold,
            at,
            n,
            social,
        } => {
            let mut dspec = match format {
                DatasetFormat::Ratings => DatasetSpec::ratings(),
                DatasetFormat::Votes => DatasetSpec::votes(),
            };
            if let Some(t) = threshold {
                dspec.threshold = t;
            }
            let graph = TemporalBipartiteGraph::build(ingestion::load_dataset(&dataset, &dspec)?)?;
            let influence = match (spec.predictor.centrality(), social) {
                (Some(c), Some(path)) => Some(UserInfluence::compute(
                    &graph,
                    &centrality::load_social_graph(path)?,
                    c,
                )?),
                (Some(_), None) => bail!("ibp requires --social"),
                (None, _) => None,
            };
            let t_star = at.unwrap_or_else(|| graph.last_timestamp());
            let ranking = predictors::score(&graph, &spec, t_star, influence.as_ref())?;
            let mut stdout = io::stdout().lock();
            writeln!(stdout, "rank,item,score")?;
            for (k, (item, score)) in ranking.entries.iter().take(n).enumerate() {
                writeln!(stdout, "{},{item},{score}", k + 1)?;
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
