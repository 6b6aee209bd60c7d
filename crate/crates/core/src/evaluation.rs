//! Ranking quality at test dates: precision against the true future ranking
//! and the rate of correctly anticipated new entries.

use std::collections::BTreeSet;

use rayon::prelude::*;

use crate::centrality::SocialGraph;
use crate::error::{Error, Result};
use crate::event_store::{check_window, ItemId, TemporalBipartiteGraph, Timestamp};
use crate::predictors::{self, Predictor, PredictorSpec, UserInfluence};

pub const DEFAULT_DEPTH: usize = 100;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    /// Ranking depth.
    pub n: usize,
    pub t_p: Timestamp,
    pub t_f: Timestamp,
    pub test_dates: Vec<Timestamp>,
}

impl EvalConfig {
    pub fn new(n: usize, t_p: Timestamp, t_f: Timestamp, test_dates: Vec<Timestamp>) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("ranking depth n must be at least 1"));
        }
        check_window(t_p)?;
        check_window(t_f)?;
        if test_dates.is_empty() {
            return Err(Error::param("no test dates"));
        }
        if test_dates.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::param("test dates must be strictly increasing"));
        }
        Ok(EvalConfig {
            n,
            t_p,
            t_f,
            test_dates,
        })
    }

    /// `count` equally spaced dates between `start + T_P` and `end - T_F`.
    pub fn regular(
        graph: &TemporalBipartiteGraph,
        n: usize,
        t_p: Timestamp,
        t_f: Timestamp,
        count: usize,
    ) -> Result<Self> {
        let dates = regular_test_dates(graph.first_timestamp(), graph.last_timestamp(), t_p, t_f, count)?;
        Self::new(n, t_p, t_f, dates)
    }

    /// Test dates whose future window runs past the last event.
    pub fn uncovered_dates(&self, graph: &TemporalBipartiteGraph) -> Vec<Timestamp> {
        let end = graph.last_timestamp();
        self.test_dates
            .iter()
            .copied()
            .filter(|t| t.saturating_add(self.t_f) > end)
            .collect()
    }
}

/// Places `count` dates at equal intervals leaving a margin of `t_p` after
/// `data_start` and `t_f` before `data_end`. A single date sits in the middle.
pub fn regular_test_dates(
    data_start: Timestamp,
    data_end: Timestamp,
    t_p: Timestamp,
    t_f: Timestamp,
    count: usize,
) -> Result<Vec<Timestamp>> {
    check_window(t_p)?;
    check_window(t_f)?;
    if count == 0 {
        return Err(Error::param("test date count must be at least 1"));
    }
    let lo = data_start.saturating_add(t_p);
    let hi = data_end.saturating_sub(t_f);
    if hi < lo {
        return Err(Error::param(format!(
            "data span [{data_start}, {data_end}] is shorter than T_P={t_p} + T_F={t_f}"
        )));
    }
    if count == 1 {
        return Ok(vec![lo + (hi - lo) / 2]);
    }
    let steps = (count - 1) as i128;
    if ((hi - lo) as i128) < steps {
        return Err(Error::param(format!(
            "cannot fit {count} distinct test dates in [{lo}, {hi}]"
        )));
    }
    Ok((0..count as i128)
        .map(|j| (lo as i128 + j * (hi - lo) as i128 / steps) as Timestamp)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrueRanking {
    pub items: Vec<ItemId>,
    /// Set when no item gains anything in the future window; the list is then
    /// just the first `n` items by id.
    pub degenerate: bool,
}

/// Top `n` items by degree increase over `(t*, t* + T_F]`.
pub fn true_ranking(
    graph: &TemporalBipartiteGraph,
    t_star: Timestamp,
    t_f: Timestamp,
    n: usize,
) -> Result<TrueRanking> {
    check_window(t_f)?;
    let end = t_star.saturating_add(t_f);
    if end > graph.last_timestamp() {
        return Err(Error::TruncatedFutureWindow {
            t_star,
            t_f,
            data_end: graph.last_timestamp(),
        });
    }
    let top = graph.top_items_by_increase(end, t_f, n)?;
    Ok(TrueRanking {
        degenerate: top.iter().all(|&(_, inc)| inc == 0),
        items: top.into_iter().map(|(item, _)| item).collect(),
    })
}

/// Fraction of the first `n` predicted items found among the first `n` true
/// items. The divisor is always `n`.
pub fn precision(predicted: &[ItemId], truth: &[ItemId], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let truth: BTreeSet<ItemId> = truth.iter().take(n).copied().collect();
    let hits = predicted
        .iter()
        .take(n)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .filter(|item| truth.contains(item))
        .count();
    hits as f64 / n as f64
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NewEntries {
    /// Future top-`n` items missing from the past top-`n`.
    pub items: BTreeSet<ItemId>,
}

impl NewEntries {
    pub fn count(&self) -> usize {
        self.items.len()
    }
}

/// Items in the future top-`n` (by increase over `(t*, t*+T_F]`) that were
/// not in the past top-`n` (by increase over `(t*-T_P, t*]`).
pub fn new_entries(
    graph: &TemporalBipartiteGraph,
    t_star: Timestamp,
    t_p: Timestamp,
    t_f: Timestamp,
    n: usize,
) -> Result<NewEntries> {
    let future = true_ranking(graph, t_star, t_f, n)?;
    let past: BTreeSet<ItemId> = graph
        .top_items_by_increase(t_star, t_p, n)?
        .into_iter()
        .map(|(item, _)| item)
        .collect();
    Ok(NewEntries {
        items: future.items.into_iter().filter(|item| !past.contains(item)).collect(),
    })
}

/// Number of new entries among the first `n` predicted items.
pub fn correctly_guessed(predicted: &[ItemId], new_set: &NewEntries, n: usize) -> usize {
    predicted
        .iter()
        .take(n)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .filter(|item| new_set.items.contains(item))
        .count()
}

/// `C_n / E_n`, undefined when there are no new entries.
pub fn new_entry_rate(correct: usize, new_entries: usize) -> Option<f64> {
    (new_entries > 0).then(|| correct as f64 / new_entries as f64)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DateMetrics {
    pub t_star: Timestamp,
    /// P_n
    pub precision: f64,
    /// E_n
    pub new_entries: usize,
    /// C_n
    pub correct: usize,
    /// Q_n
    pub new_entry_rate: Option<f64>,
    pub degenerate_truth: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvaluationReport {
    pub per_date: Vec<DateMetrics>,
    pub mean_precision: f64,
    /// Mean over dates with at least one new entry.
    pub mean_new_entry_rate: Option<f64>,
    pub mean_new_entries: f64,
    pub mean_correct: f64,
}

impl EvaluationReport {
    fn from_dates(per_date: Vec<DateMetrics>) -> Self {
        let m = per_date.len() as f64;
        let mean = |f: &dyn Fn(&DateMetrics) -> f64| per_date.iter().map(f).sum::<f64>() / m;
        let rates: Vec<f64> = per_date.iter().filter_map(|d| d.new_entry_rate).collect();
        EvaluationReport {
            mean_precision: mean(&|d| d.precision),
            mean_new_entries: mean(&|d| d.new_entries as f64),
            mean_correct: mean(&|d| d.correct as f64),
            mean_new_entry_rate: (!rates.is_empty()).then(|| rates.iter().sum::<f64>() / rates.len() as f64),
            per_date,
        }
    }
}

/// Evaluates `spec` at every test date. IBP computes its influence measure on
/// `social` once up front.
pub fn evaluate(
    graph: &TemporalBipartiteGraph,
    social: Option<&SocialGraph>,
    spec: &PredictorSpec,
    config: &EvalConfig,
) -> Result<EvaluationReport> {
    let influence = match (spec.predictor, social) {
        (Predictor::Ibp { centrality, .. }, Some(social)) => Some(UserInfluence::compute(graph, social, centrality)?),
        (Predictor::Ibp { .. }, None) => return Err(Error::param("ibp requires a social graph")),
        _ => None,
    };
    evaluate_with_influence(graph, influence.as_ref(), spec, config)
}

pub fn evaluate_with_influence(
    graph: &TemporalBipartiteGraph,
    influence: Option<&UserInfluence>,
    spec: &PredictorSpec,
    config: &EvalConfig,
) -> Result<EvaluationReport> {
    spec.validate()?;
    if !matches!(spec.predictor, Predictor::TotalPop) && spec.t_p != config.t_p {
        return Err(Error::param(format!(
            "predictor T_P={} differs from evaluation T_P={}",
            spec.t_p, config.t_p
        )));
    }
    let n = config.n;
    evaluate_ranker(graph, config, |t_star| {
        Ok(predictors::score(graph, spec, t_star, influence)?.top_n(n))
    })
}

/// Evaluates an arbitrary ranker, called once per test date with `t*`.
pub fn evaluate_ranker<F>(graph: &TemporalBipartiteGraph, config: &EvalConfig, ranker: F) -> Result<EvaluationReport>
where
    F: Fn(Timestamp) -> Result<Vec<ItemId>> + Sync,
{
    let per_date = config
        .test_dates
        .par_iter()
        .map(|&t_star| {
            evaluate_date(graph, config, t_star, &ranker).map_err(|e| Error::AtTestDate {
                t_star,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EvaluationReport::from_dates(per_date))
}

fn evaluate_date<F>(
    graph: &TemporalBipartiteGraph,
    config: &EvalConfig,
    t_star: Timestamp,
    ranker: &F,
) -> Result<DateMetrics>
where
    F: Fn(Timestamp) -> Result<Vec<ItemId>>,
{
    let n = config.n;
    let truth = true_ranking(graph, t_star, config.t_f, n)?;
    let fresh = new_entries(graph, t_star, config.t_p, config.t_f, n)?;
    let predicted = ranker(t_star)?;
    let correct = correctly_guessed(&predicted, &fresh, n);
    Ok(DateMetrics {
        t_star,
        precision: precision(&predicted, &truth.items, n),
        new_entries: fresh.count(),
        correct,
        new_entry_rate: new_entry_rate(correct, fresh.count()),
        degenerate_truth: truth.degenerate,
    })
}

/// Past versus future increase for one item, with its predicted membership.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScatterPoint {
    pub item: ItemId,
    pub past_increase: usize,
    pub future_increase: usize,
    pub predicted: bool,
}

/// Items active in either window or present in `predicted_top`.
pub fn scatter_points(
    graph: &TemporalBipartiteGraph,
    t_star: Timestamp,
    t_p: Timestamp,
    t_f: Timestamp,
    predicted_top: &[ItemId],
) -> Result<Vec<ScatterPoint>> {
    check_window(t_p)?;
    check_window(t_f)?;
    let predicted: BTreeSet<ItemId> = predicted_top.iter().copied().collect();
    let end = t_star.saturating_add(t_f);
    Ok((0..graph.num_items())
        .map(|i| {
            let item = graph.items()[i];
            ScatterPoint {
                item,
                past_increase: graph.item_increase_idx(i, t_star, t_p),
                future_increase: graph.item_increase_idx(i, end, t_f),
                predicted: predicted.contains(&item),
            }
        })
        .filter(|p| p.past_increase > 0 || p.future_increase > 0 || p.predicted)
        .collect())
}
