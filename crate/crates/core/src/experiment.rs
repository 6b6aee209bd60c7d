//! Config-driven parameter sweeps.
//!
//! Configs are flat `key = value` lines. `#` starts a comment line. Grid keys
//! (`predictor`, `lambda`, `gamma`, `eta`, `centrality`, `t_p`, `t_f`, `n`,
//! `test_date`) may repeat and may hold comma-separated lists; every other key
//! may appear once. Relative paths resolve against the config file's
//! directory.
//!
//! A sweep writes three CSV files:
//! - `sweep.csv`: one row per grid point and test date, plus a `mean` row per
//!   grid point evaluated at more than one date;
//! - `heatmap.csv`: mean precision of the degree-increase predictor for every
//!   `(T_P, T_F, n)`;
//! - `scatter.csv`: per-item past vs. future increase at the middle test date
//!   of every grid point, flagging the predicted top-n.

use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::centrality::{self, Centrality, SocialGraph};
use crate::error::{Error, Result};
use crate::evaluation::{self, EvalConfig, EvaluationReport, DEFAULT_DEPTH};
use crate::event_store::{TemporalBipartiteGraph, Timestamp};
use crate::ingestion::{self, DatasetFormat, DatasetSpec, Eligibility};
use crate::predictors::{self, ActivityWeight, Predictor, PredictorKind, PredictorSpec, UserInfluence};
use crate::synthgen::{self, GenConfig};

pub const DEFAULT_TEST_DATES: usize = 7;

/// One `key = value` entry with its 1-based line number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub line: u64,
    pub key: String,
    pub value: String,
}

pub fn parse_key_values(text: &str) -> Result<Vec<Entry>> {
    let mut entries = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k as u64 + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("expected key = value, got {trimmed:?}")))?;
        let key = key.trim();
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return Err(Error::parse(line, format!("invalid key {key:?}")));
        }
        entries.push(Entry {
            line,
            key: key.to_string(),
            value: value.trim().to_string(),
        });
    }
    Ok(entries)
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: Option<PathBuf>,
    pub dataset_spec: DatasetSpec,
    pub social_graph: Option<PathBuf>,
    pub predictors: Vec<PredictorKind>,
    pub lambdas: Vec<f64>,
    pub gammas: Vec<f64>,
    pub etas: Vec<f64>,
    pub centralities: Vec<Centrality>,
    pub wpp_weight: ActivityWeight,
    pub t_p: Vec<Timestamp>,
    pub t_f: Vec<Timestamp>,
    pub n: Vec<usize>,
    pub test_date_count: usize,
    /// Explicit test dates; when empty, `test_date_count` regular dates are used.
    pub test_dates: Vec<Timestamp>,
    pub output_dir: Option<PathBuf>,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            dataset: None,
            dataset_spec: DatasetSpec::votes(),
            social_graph: None,
            predictors: Vec::new(),
            lambdas: Vec::new(),
            gammas: Vec::new(),
            etas: Vec::new(),
            centralities: Vec::new(),
            wpp_weight: ActivityWeight::Total,
            t_p: Vec::new(),
            t_f: Vec::new(),
            n: Vec::new(),
            test_date_count: DEFAULT_TEST_DATES,
            test_dates: Vec::new(),
            output_dir: None,
            seed: 0,
        }
    }
}

/// `-1.0, -0.9, ..., 1.0`, the default grid for γ, η and (clipped) λ.
pub fn unit_grid(lo: i32, hi: i32) -> Vec<f64> {
    (lo..=hi).map(|k| k as f64 / 10.0).collect()
}

impl ExperimentConfig {
    /// λ grid with its default.
    pub fn lambda_grid(&self) -> Vec<f64> {
        or_default(&self.lambdas, || unit_grid(0, 10))
    }

    pub fn gamma_grid(&self) -> Vec<f64> {
        or_default(&self.gammas, || unit_grid(-10, 10))
    }

    pub fn eta_grid(&self) -> Vec<f64> {
        or_default(&self.etas, || unit_grid(-10, 10))
    }

    pub fn centrality_grid(&self) -> Vec<Centrality> {
        or_default(&self.centralities, || Centrality::ALL.to_vec())
    }

    pub fn depth_grid(&self) -> Vec<usize> {
        or_default(&self.n, || vec![DEFAULT_DEPTH])
    }

    /// Predictors in config order, each expanded over its parameter grid.
    pub fn predictor_grid(&self) -> Vec<Predictor> {
        let mut out = Vec::new();
        for kind in &self.predictors {
            match kind {
                PredictorKind::TotalPop => out.push(Predictor::TotalPop),
                PredictorKind::RecentPop => out.push(Predictor::RecentPop),
                PredictorKind::Pbp => {
                    out.extend(self.lambda_grid().into_iter().map(|lambda| Predictor::Pbp { lambda }))
                }
                PredictorKind::Wpp => out.extend(self.gamma_grid().into_iter().map(|gamma| Predictor::Wpp {
                    gamma,
                    weight: self.wpp_weight,
                })),
                PredictorKind::Ibp => {
                    for centrality in self.centrality_grid() {
                        out.extend(
                            self.eta_grid()
                                .into_iter()
                                .map(|eta| Predictor::Ibp { eta, centrality }),
                        );
                    }
                }
            }
        }
        out
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}

fn or_default<T: Clone>(v: &[T], default: impl FnOnce() -> Vec<T>) -> Vec<T> {
    if v.is_empty() {
        default()
    } else {
        v.to_vec()
    }
}

pub fn parse_experiment_config(text: &str, base_dir: Option<&Path>) -> Result<ExperimentConfig> {
    let mut c = ExperimentConfig::default();
    let mut format = None;
    let mut threshold = None;
    let mut seen = BTreeMap::new();
    let resolve = |value: &str| match base_dir {
        Some(base) if Path::new(value).is_relative() => base.join(value),
        _ => PathBuf::from(value),
    };
    for Entry { line, key, value } in parse_key_values(text)? {
        let grid_key = matches!(
            key.as_str(),
            "predictor" | "lambda" | "gamma" | "eta" | "centrality" | "t_p" | "t_f" | "n" | "test_date"
        );
        if !grid_key {
            if let Some(first) = seen.insert(key.clone(), line) {
                return Err(Error::parse(line, format!("{key} already set on line {first}")));
            }
        }
        let list = || value.split(',').map(str::trim).filter(|s| !s.is_empty());
        match key.as_str() {
            "dataset" => c.dataset = Some(resolve(&value)),
            "format" => format = Some(value.parse::<DatasetFormat>().map_err(|e| at(line, e))?),
            "threshold" => threshold = Some(number::<f64>(line, &key, &value)?),
            "subset_users" => c.dataset_spec.subset_users = Some(number(line, &key, &value)?),
            "min_user_degree" => c.dataset_spec.min_user_degree = number(line, &key, &value)?,
            "eligibility" => c.dataset_spec.eligibility = value.parse::<Eligibility>().map_err(|e| at(line, e))?,
            "social_graph" => c.social_graph = Some(resolve(&value)),
            "predictor" => {
                for v in list() {
                    c.predictors.push(v.parse().map_err(|e| at(line, e))?);
                }
            }
            "lambda" => c
                .lambdas
                .extend(list().map(|v| number(line, &key, v)).collect::<Result<Vec<f64>>>()?),
            "gamma" => c
                .gammas
                .extend(list().map(|v| number(line, &key, v)).collect::<Result<Vec<f64>>>()?),
            "eta" => c
                .etas
                .extend(list().map(|v| number(line, &key, v)).collect::<Result<Vec<f64>>>()?),
            "centrality" => {
                for v in list() {
                    c.centralities.push(v.parse().map_err(|e| at(line, e))?);
                }
            }
            "wpp_weight" => c.wpp_weight = value.parse().map_err(|e| at(line, e))?,
            "t_p" => c.t_p.extend(
                list()
                    .map(|v| number(line, &key, v))
                    .collect::<Result<Vec<Timestamp>>>()?,
            ),
            "t_f" => c.t_f.extend(
                list()
                    .map(|v| number(line, &key, v))
                    .collect::<Result<Vec<Timestamp>>>()?,
            ),
            "n" => {
                c.n.extend(list().map(|v| number(line, &key, v)).collect::<Result<Vec<usize>>>()?)
            }
            "test_date" => c.test_dates.extend(
                list()
                    .map(|v| number(line, &key, v))
                    .collect::<Result<Vec<Timestamp>>>()?,
            ),
            "test_date_count" => c.test_date_count = number(line, &key, &value)?,
            "out" | "output_dir" => c.output_dir = Some(resolve(&value)),
            "seed" => c.seed = number(line, &key, &value)?,
            other => return Err(Error::parse(line, format!("unknown key {other:?}"))),
        }
    }
    if let Some(format) = format {
        c.dataset_spec.format = format;
    }
    if let Some(threshold) = threshold {
        c.dataset_spec.threshold = threshold;
    }
    c.dataset_spec.rng_seed = c.seed;
    Ok(c)
}

pub fn load_experiment_config(path: impl AsRef<Path>) -> Result<ExperimentConfig> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_experiment_config(&text, path.parent())
}

fn number<T: std::str::FromStr>(line: u64, key: &str, value: &str) -> Result<T> {
    value
        .trim()
        .parse()
        .map_err(|_| Error::parse(line, format!("{key}: invalid number {value:?}")))
}

fn at(line: u64, e: Error) -> Error {
    Error::parse(line, e.to_string())
}

/// A configuration problem found before running anything.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic(pub String);

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

struct Inputs {
    graph: TemporalBipartiteGraph,
    social: Option<SocialGraph>,
}

/// Every problem with `config`, including ones that need the data to detect
/// (windows running past the data). Empty means the sweep can run.
pub fn validate(config: &ExperimentConfig) -> Vec<Diagnostic> {
    prepare(config).0
}

fn prepare(config: &ExperimentConfig) -> (Vec<Diagnostic>, Option<Inputs>) {
    let mut diags = Vec::new();
    let mut push = |msg: String| diags.push(Diagnostic(msg));

    if config.predictors.is_empty() {
        push("no predictor configured".into());
    }
    if config.t_p.is_empty() {
        push("empty T_P grid".into());
    }
    if config.t_f.is_empty() {
        push("empty T_F grid".into());
    }
    for &t in config.t_p.iter().chain(&config.t_f) {
        if t <= 0 {
            push(format!("window length {t} is not positive"));
        }
    }
    if config.n.contains(&0) {
        push("ranking depth n must be at least 1".into());
    }
    if config.predictors.contains(&PredictorKind::Pbp) {
        for l in config.lambda_grid() {
            if !(0.0..=1.0).contains(&l) {
                push(format!("lambda {l} outside [0, 1]"));
            }
        }
    }
    if config.predictors.contains(&PredictorKind::Ibp) && config.social_graph.is_none() {
        push("ibp requested without social_graph".into());
    }
    if config.test_dates.is_empty() && config.test_date_count == 0 {
        push("test_date_count must be at least 1".into());
    }
    if config.test_dates.windows(2).any(|w| w[0] >= w[1]) {
        push("test dates must be strictly increasing".into());
    }
    if let Err(e) = config.dataset_spec.validate() {
        push(e.to_string());
    }

    let mut graph = None;
    match &config.dataset {
        None => push("no dataset configured".into()),
        Some(path) if !path.is_file() => push(format!("dataset {} does not exist", path.display())),
        Some(path) => match ingestion::load_dataset(path, &config.dataset_spec).and_then(TemporalBipartiteGraph::build)
        {
            Ok(g) => graph = Some(g),
            Err(e) => push(format!("dataset {}: {e}", path.display())),
        },
    }
    let mut social = None;
    if let Some(path) = &config.social_graph {
        if !path.is_file() {
            push(format!("social graph {} does not exist", path.display()));
        } else {
            match centrality::load_social_graph(path) {
                Ok(g) => social = Some(g),
                Err(e) => push(format!("social graph {}: {e}", path.display())),
            }
        }
    }

    if let Some(g) = &graph {
        let (start, end) = (g.first_timestamp(), g.last_timestamp());
        for &t_p in config.t_p.iter().filter(|&&t| t > 0) {
            for &t_f in config.t_f.iter().filter(|&&t| t > 0) {
                if config.test_dates.is_empty() {
                    if config.test_date_count > 0 {
                        if let Err(e) = evaluation::regular_test_dates(start, end, t_p, t_f, config.test_date_count) {
                            push(format!("T_P={t_p}, T_F={t_f}: {e}"));
                        }
                    }
                } else {
                    for &t_star in &config.test_dates {
                        if t_star.saturating_add(t_f) > end {
                            push(format!(
                                "test date {t_star}: future window T_F={t_f} ends after the last event at {end}"
                            ));
                        }
                    }
                }
            }
        }
    }

    let inputs = match (diags.is_empty(), graph) {
        (true, Some(graph)) => Some(Inputs { graph, social }),
        _ => None,
    };
    (diags, inputs)
}

/// Mean metrics for one grid point.
#[derive(Clone, Debug, PartialEq)]
pub struct GridSummary {
    pub spec: PredictorSpec,
    pub t_f: Timestamp,
    pub n: usize,
    pub report: EvaluationReport,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepOutcome {
    pub summaries: Vec<GridSummary>,
    pub files: Vec<PathBuf>,
}

#[derive(Clone, Copy, Debug)]
struct GridPoint {
    spec: PredictorSpec,
    t_f: Timestamp,
    n: usize,
}

/// Validates, evaluates every grid point and writes the CSV reports into
/// `out_dir` (or the config's output directory).
pub fn run_sweep(config: &ExperimentConfig, out_dir: Option<&Path>) -> Result<SweepOutcome> {
    let (diags, inputs) = prepare(config);
    if !diags.is_empty() {
        return Err(Error::Invalid(diags.into_iter().map(|d| d.0).collect()));
    }
    let Inputs { graph, social } = inputs.expect("valid config has inputs");
    let out_dir = out_dir.map(Path::to_path_buf).unwrap_or_else(|| config.output_dir());
    log::info!(
        "dataset: {} users, {} items, {} links",
        graph.num_users(),
        graph.num_items(),
        graph.num_links()
    );

    let mut influences = BTreeMap::new();
    if let Some(social) = &social {
        if config.predictors.contains(&PredictorKind::Ibp) {
            for c in config.centrality_grid() {
                let infl = centrality::influence(social, c)?;
                log::info!("{c}: {} iterations, residual {:e}", infl.iterations_used, infl.residual);
                influences.insert(c, UserInfluence::align(&graph, social, &infl));
            }
        }
    }

    let mut points = Vec::new();
    for &t_p in &config.t_p {
        for &t_f in &config.t_f {
            for n in config.depth_grid() {
                for predictor in config.predictor_grid() {
                    points.push(GridPoint {
                        spec: PredictorSpec::new(predictor, t_p)?,
                        t_f,
                        n,
                    });
                }
            }
        }
    }
    let eval_config = |t_p, t_f, n| -> Result<EvalConfig> {
        if config.test_dates.is_empty() {
            EvalConfig::regular(&graph, n, t_p, t_f, config.test_date_count)
        } else {
            EvalConfig::new(n, t_p, t_f, config.test_dates.clone())
        }
    };

    let total = points.len();
    let results: Vec<(GridSummary, Vec<evaluation::ScatterPoint>)> = points
        .par_iter()
        .enumerate()
        .map(|(k, point)| {
            let ec = eval_config(point.spec.t_p, point.t_f, point.n)?;
            let influence = point.spec.predictor.centrality().and_then(|c| influences.get(&c));
            let report = evaluation::evaluate_with_influence(&graph, influence, &point.spec, &ec)?;
            let mid = ec.test_dates[ec.test_dates.len() / 2];
            let top = predictors::score(&graph, &point.spec, mid, influence)?.top_n(point.n);
            let scatter = evaluation::scatter_points(&graph, mid, point.spec.t_p, point.t_f, &top)?;
            log::info!(
                "[{}/{total}] {} T_F={} n={}: P={:.4}",
                k + 1,
                point.spec,
                point.t_f,
                point.n,
                report.mean_precision
            );
            Ok((
                GridSummary {
                    spec: point.spec,
                    t_f: point.t_f,
                    n: point.n,
                    report,
                },
                scatter,
            ))
        })
        .collect::<Result<_>>()?;

    let mut heat_points = Vec::new();
    for &t_p in &config.t_p {
        for &t_f in &config.t_f {
            for n in config.depth_grid() {
                heat_points.push((t_p, t_f, n));
            }
        }
    }
    let heat: Vec<(Timestamp, Timestamp, usize, f64)> = heat_points
        .par_iter()
        .map(|&(t_p, t_f, n)| {
            let spec = PredictorSpec::new(Predictor::RecentPop, t_p)?;
            let report = evaluation::evaluate_with_influence(&graph, None, &spec, &eval_config(t_p, t_f, n)?)?;
            Ok((t_p, t_f, n, report.mean_precision))
        })
        .collect::<Result<_>>()?;

    fs::create_dir_all(&out_dir).map_err(|e| Error::io(&out_dir, e))?;
    let sweep_path = out_dir.join("sweep.csv");
    write_csv(&sweep_path, |w| write_sweep(w, results.iter().map(|(s, _)| s)))?;
    let heat_path = out_dir.join("heatmap.csv");
    write_csv(&heat_path, |w| write_heatmap(w, &heat))?;
    let scatter_path = out_dir.join("scatter.csv");
    write_csv(&scatter_path, |w| write_scatter(w, &results))?;

    Ok(SweepOutcome {
        summaries: results.into_iter().map(|(s, _)| s).collect(),
        files: vec![sweep_path, heat_path, scatter_path],
    })
}

const PARAM_COLUMNS: [&str; 8] = ["kind", "lambda", "gamma", "eta", "centrality", "T_P", "T_F", "n"];

fn param_fields(spec: &PredictorSpec, t_f: Timestamp, n: usize) -> Vec<String> {
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let p = spec.predictor;
    vec![
        p.kind().to_string(),
        opt(p.lambda()),
        opt(p.gamma()),
        opt(p.eta()),
        p.centrality().map(|c| c.to_string()).unwrap_or_default(),
        spec.t_p.to_string(),
        t_f.to_string(),
        n.to_string(),
    ]
}

fn write_csv(path: &Path, body: impl FnOnce(&mut csv::Writer<BufWriter<File>>) -> Result<()>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::Writer::from_writer(BufWriter::new(file));
    body(&mut w)?;
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

/// `sweep.csv`: per-date rows then, for multi-date grid points, a `mean` row.
pub fn write_sweep<'a, W: Write>(
    w: &mut csv::Writer<W>,
    summaries: impl Iterator<Item = &'a GridSummary>,
) -> Result<()> {
    let mut header: Vec<&str> = PARAM_COLUMNS.to_vec();
    header.extend(["t_star", "P_n", "E_n", "C_n", "Q_n"]);
    w.write_record(&header)?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for s in summaries {
        let params = param_fields(&s.spec, s.t_f, s.n);
        for d in &s.report.per_date {
            let mut row = params.clone();
            row.extend([
                d.t_star.to_string(),
                d.precision.to_string(),
                d.new_entries.to_string(),
                d.correct.to_string(),
                opt(d.new_entry_rate),
            ]);
            w.write_record(&row)?;
        }
        if s.report.per_date.len() == 1 {
            continue;
        }
        let mut row = params;
        row.extend([
            "mean".to_string(),
            s.report.mean_precision.to_string(),
            s.report.mean_new_entries.to_string(),
            s.report.mean_correct.to_string(),
            opt(s.report.mean_new_entry_rate),
        ]);
        w.write_record(&row)?;
    }
    Ok(())
}

fn write_heatmap<W: Write>(w: &mut csv::Writer<W>, rows: &[(Timestamp, Timestamp, usize, f64)]) -> Result<()> {
    w.write_record(["T_P", "T_F", "n", "P_n"])?;
    for (t_p, t_f, n, p) in rows {
        w.write_record([t_p.to_string(), t_f.to_string(), n.to_string(), p.to_string()])?;
    }
    Ok(())
}

fn write_scatter<W: Write>(
    w: &mut csv::Writer<W>,
    results: &[(GridSummary, Vec<evaluation::ScatterPoint>)],
) -> Result<()> {
    let mut header: Vec<&str> = PARAM_COLUMNS.to_vec();
    header.extend(["t_star", "item", "past_increase", "future_increase", "predicted"]);
    w.write_record(&header)?;
    for (s, points) in results {
        let params = param_fields(&s.spec, s.t_f, s.n);
        let mid = s.report.per_date[s.report.per_date.len() / 2].t_star;
        for p in points {
            let mut row = params.clone();
            row.extend([
                mid.to_string(),
                p.item.to_string(),
                p.past_increase.to_string(),
                p.future_increase.to_string(),
                u8::from(p.predicted).to_string(),
            ]);
            w.write_record(&row)?;
        }
    }
    Ok(())
}

/// Synthetic dataset settings for the `gen` command.
#[derive(Clone, Debug, PartialEq)]
pub struct GenSettings {
    pub network: GenConfig,
    /// `(num_edges, attach_exponent)` for a follower network over the same users.
    pub social: Option<(usize, f64)>,
}

/// Keys: `num_users`, `num_items`, `initial_items`, `num_events`,
/// `item_arrival_rate`, `decay_timescale` (a number or `inf`), `pa_offset`,
/// `user_activity_exponent`, `tick`, `seed`, `social_edges`,
/// `social_attach_exponent`.
pub fn parse_gen_config(text: &str) -> Result<GenSettings> {
    let mut g = GenConfig::default();
    let mut social_edges = None;
    let mut attach = 1.0;
    let mut seen = BTreeMap::new();
    for Entry { line, key, value } in parse_key_values(text)? {
        if let Some(first) = seen.insert(key.clone(), line) {
            return Err(Error::parse(line, format!("{key} already set on line {first}")));
        }
        match key.as_str() {
            "num_users" => g.num_users = number(line, &key, &value)?,
            "num_items" => g.num_items = number(line, &key, &value)?,
            "initial_items" => g.initial_items = number(line, &key, &value)?,
            "num_events" => g.num_events = number(line, &key, &value)?,
            "item_arrival_rate" => g.item_arrival_rate = number(line, &key, &value)?,
            "decay_timescale" => {
                g.decay_timescale = match value.to_ascii_lowercase().as_str() {
                    "inf" | "infinity" | "none" => None,
                    _ => Some(number(line, &key, &value)?),
                }
            }
            "pa_offset" => g.pa_offset = number(line, &key, &value)?,
            "user_activity_exponent" => g.user_activity_exponent = number(line, &key, &value)?,
            "tick" => g.tick = number(line, &key, &value)?,
            "seed" => g.rng_seed = number(line, &key, &value)?,
            "social_edges" => social_edges = Some(number(line, &key, &value)?),
            "social_attach_exponent" => attach = number(line, &key, &value)?,
            other => return Err(Error::parse(line, format!("unknown key {other:?}"))),
        }
    }
    Ok(GenSettings {
        network: g,
        social: social_edges.map(|e| (e, attach)),
    })
}

/// Writes `votes.csv` and, when configured, `social.txt` into `out_dir`.
pub fn write_generated(settings: &GenSettings, out_dir: &Path) -> Result<Vec<PathBuf>> {
    let events = synthgen::generate(&settings.network)?;
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let votes = out_dir.join("votes.csv");
    let file = File::create(&votes).map_err(|e| Error::io(&votes, e))?;
    ingestion::write_votes(&events, BufWriter::new(file))?;
    let mut files = vec![votes];
    if let Some((edges, attach)) = settings.social {
        let graph = synthgen::generate_social(settings.network.num_users, edges, attach, settings.network.rng_seed)?;
        let path = out_dir.join("social.txt");
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        let mut out = BufWriter::new(file);
        centrality::write_edge_list(&graph, &mut out).map_err(|e| Error::io(&path, e))?;
        out.flush().map_err(|e| Error::io(&path, e))?;
        files.push(path);
    }
    Ok(files)
}
