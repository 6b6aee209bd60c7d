//! Item scoring at a test date.
//!
//! Every predictor ranks the items already collected at least once by `t*`;
//! items nobody has touched yet cannot be scored from the past and are left
//! out. Rankings sort by descending score with ascending item id as the tie
//! break.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::centrality::{self, Centrality, InfluenceVector, SocialGraph};
use crate::error::{Error, Result};
use crate::event_store::{check_window, ItemId, TemporalBipartiteGraph, Timestamp, T_INFINITY};

/// Which user activity measure weights a WPP contribution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ActivityWeight {
    /// Total degree `k_i(t*)`.
    #[default]
    Total,
    /// Degree increase `Δk_i(t*, T_P)`.
    Recent,
}

impl ActivityWeight {
    pub fn as_str(&self) -> &'static str {
        match self {
            ActivityWeight::Total => "total",
            ActivityWeight::Recent => "recent",
        }
    }
}

impl FromStr for ActivityWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "total" => Ok(ActivityWeight::Total),
            "recent" => Ok(ActivityWeight::Recent),
            other => Err(Error::param(format!("unknown activity weight {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PredictorKind {
    TotalPop,
    RecentPop,
    Pbp,
    Wpp,
    Ibp,
}

impl PredictorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            PredictorKind::TotalPop => "total_pop",
            PredictorKind::RecentPop => "recent_pop",
            PredictorKind::Pbp => "pbp",
            PredictorKind::Wpp => "wpp",
            PredictorKind::Ibp => "ibp",
        }
    }
}

impl fmt::Display for PredictorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PredictorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "total_pop" | "total" => Ok(PredictorKind::TotalPop),
            "recent_pop" | "recent" => Ok(PredictorKind::RecentPop),
            "pbp" => Ok(PredictorKind::Pbp),
            "wpp" => Ok(PredictorKind::Wpp),
            "ibp" => Ok(PredictorKind::Ibp),
            other => Err(Error::param(format!("unknown predictor {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Predictor {
    /// `k(t*)`
    TotalPop,
    /// `Δk(t*, T_P)`
    RecentPop,
    /// `k(t*) - λ k(t* - T_P)`
    Pbp { lambda: f64 },
    /// `Σ_i [collected in window] · w_i^γ` with `w_i` the user's activity.
    Wpp { gamma: f64, weight: ActivityWeight },
    /// `Σ_i [collected in window] · I_i^η` with `I_i` the user's influence.
    Ibp { eta: f64, centrality: Centrality },
}

impl Predictor {
    pub fn kind(&self) -> PredictorKind {
        match self {
            Predictor::TotalPop => PredictorKind::TotalPop,
            Predictor::RecentPop => PredictorKind::RecentPop,
            Predictor::Pbp { .. } => PredictorKind::Pbp,
            Predictor::Wpp { .. } => PredictorKind::Wpp,
            Predictor::Ibp { .. } => PredictorKind::Ibp,
        }
    }

    pub fn lambda(&self) -> Option<f64> {
        match *self {
            Predictor::Pbp { lambda } => Some(lambda),
            _ => None,
        }
    }

    pub fn gamma(&self) -> Option<f64> {
        match *self {
            Predictor::Wpp { gamma, .. } => Some(gamma),
            _ => None,
        }
    }

    pub fn eta(&self) -> Option<f64> {
        match *self {
            Predictor::Ibp { eta, .. } => Some(eta),
            _ => None,
        }
    }

    pub fn centrality(&self) -> Option<Centrality> {
        match *self {
            Predictor::Ibp { centrality, .. } => Some(centrality),
            _ => None,
        }
    }
}

/// A predictor together with its past-window length.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PredictorSpec {
    pub predictor: Predictor,
    pub t_p: Timestamp,
}

impl PredictorSpec {
    pub fn new(predictor: Predictor, t_p: Timestamp) -> Result<Self> {
        let spec = PredictorSpec { predictor, t_p };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        check_window(self.t_p)?;
        match self.predictor {
            Predictor::Pbp { lambda } if !(0.0..=1.0).contains(&lambda) => {
                Err(Error::param(format!("lambda must lie in [0, 1], got {lambda}")))
            }
            Predictor::Wpp { gamma, .. } if !gamma.is_finite() => {
                Err(Error::param(format!("gamma must be finite, got {gamma}")))
            }
            Predictor::Ibp { eta, .. } if !eta.is_finite() => {
                Err(Error::param(format!("eta must be finite, got {eta}")))
            }
            _ => Ok(()),
        }
    }

    pub fn kind(&self) -> PredictorKind {
        self.predictor.kind()
    }
}

/// Textual form `kind[,key=value...]`, e.g. `pbp,lambda=0.9,t_p=86400` or
/// `ibp,eta=0.5,centrality=pagerank,t_p=36000`.
impl FromStr for PredictorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.split(',');
        let kind: PredictorKind = parts.next().unwrap_or_default().parse()?;
        let (mut lambda, mut gamma, mut eta) = (None, None, None);
        let mut centrality = None;
        let mut weight = ActivityWeight::default();
        let mut t_p = None;
        for part in parts {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| Error::param(format!("expected key=value, got {part:?}")))?;
            let value = value.trim();
            let real = || {
                value
                    .parse::<f64>()
                    .map_err(|_| Error::param(format!("{key}: invalid number {value:?}")))
            };
            match key.trim() {
                "lambda" => lambda = Some(real()?),
                "gamma" => gamma = Some(real()?),
                "eta" => eta = Some(real()?),
                "centrality" => centrality = Some(value.parse()?),
                "weight" => weight = value.parse()?,
                "t_p" => {
                    t_p = Some(
                        value
                            .parse::<Timestamp>()
                            .map_err(|_| Error::param(format!("t_p: invalid duration {value:?}")))?,
                    )
                }
                other => return Err(Error::param(format!("unknown predictor key {other:?}"))),
            }
        }
        let missing = |what: &str| Error::param(format!("{kind} requires {what}"));
        let predictor = match kind {
            PredictorKind::TotalPop => Predictor::TotalPop,
            PredictorKind::RecentPop => Predictor::RecentPop,
            PredictorKind::Pbp => Predictor::Pbp {
                lambda: lambda.ok_or_else(|| missing("lambda"))?,
            },
            PredictorKind::Wpp => Predictor::Wpp {
                gamma: gamma.ok_or_else(|| missing("gamma"))?,
                weight,
            },
            PredictorKind::Ibp => Predictor::Ibp {
                eta: eta.ok_or_else(|| missing("eta"))?,
                centrality: centrality.ok_or_else(|| missing("centrality"))?,
            },
        };
        let t_p = match (predictor, t_p) {
            (_, Some(t_p)) => t_p,
            // total degree has no past window
            (Predictor::TotalPop, None) => T_INFINITY,
            (_, None) => return Err(missing("t_p")),
        };
        PredictorSpec::new(predictor, t_p)
    }
}

impl fmt::Display for PredictorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind())?;
        match self.predictor {
            Predictor::Pbp { lambda } => write!(f, ",lambda={lambda}")?,
            Predictor::Wpp { gamma, weight } => write!(f, ",gamma={gamma},weight={}", weight.as_str())?,
            Predictor::Ibp { eta, centrality } => write!(f, ",eta={eta},centrality={centrality}")?,
            Predictor::TotalPop | Predictor::RecentPop => {}
        }
        write!(f, ",t_p={}", self.t_p)
    }
}

/// Items with their scores, best first.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoredRanking {
    pub entries: Vec<(ItemId, f64)>,
    pub t_star: Timestamp,
    pub spec: PredictorSpec,
    /// IBP contributions dropped because a zero influence met a negative exponent.
    pub skipped_contributions: usize,
}

impl ScoredRanking {
    pub fn top_n(&self, n: usize) -> Vec<ItemId> {
        self.entries.iter().take(n).map(|&(item, _)| item).collect()
    }

    pub fn items(&self) -> impl Iterator<Item = ItemId> + '_ {
        self.entries.iter().map(|&(item, _)| item)
    }
}

/// Social influence for each user of an event store. Users absent from the
/// social graph get influence 0.
#[derive(Clone, Debug, PartialEq)]
pub struct UserInfluence {
    weights: Vec<f64>,
    missing_users: usize,
}

impl UserInfluence {
    pub fn align(graph: &TemporalBipartiteGraph, social: &SocialGraph, influence: &InfluenceVector) -> Self {
        let mut missing_users = 0;
        let weights = graph
            .users()
            .iter()
            .map(|&u| {
                influence.get(social, u).unwrap_or_else(|| {
                    missing_users += 1;
                    0.0
                })
            })
            .collect();
        UserInfluence { weights, missing_users }
    }

    pub fn compute(graph: &TemporalBipartiteGraph, social: &SocialGraph, measure: Centrality) -> Result<Self> {
        let influence = centrality::influence(social, measure)?;
        Ok(Self::align(graph, social, &influence))
    }

    /// Weights indexed like [`TemporalBipartiteGraph::users`].
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn missing_users(&self) -> usize {
        self.missing_users
    }
}

pub fn score_total_pop(graph: &TemporalBipartiteGraph, t_star: Timestamp) -> ScoredRanking {
    let spec = PredictorSpec {
        predictor: Predictor::TotalPop,
        t_p: T_INFINITY,
    };
    rank_items(graph, t_star, spec, |i| graph.item_degree_at_idx(i, t_star) as f64)
}

pub fn score_recent_pop(graph: &TemporalBipartiteGraph, t_star: Timestamp, t_p: Timestamp) -> Result<ScoredRanking> {
    let spec = PredictorSpec::new(Predictor::RecentPop, t_p)?;
    Ok(rank_items(graph, t_star, spec, |i| {
        graph.item_increase_idx(i, t_star, t_p) as f64
    }))
}

pub fn score_pbp(
    graph: &TemporalBipartiteGraph,
    t_star: Timestamp,
    t_p: Timestamp,
    lambda: f64,
) -> Result<ScoredRanking> {
    let spec = PredictorSpec::new(Predictor::Pbp { lambda }, t_p)?;
    let past = t_star.saturating_sub(t_p);
    Ok(rank_items(graph, t_star, spec, |i| {
        graph.item_degree_at_idx(i, t_star) as f64 - lambda * graph.item_degree_at_idx(i, past) as f64
    }))
}

/// Weighted popularity with activity measured as total degree.
pub fn score_wpp(
    graph: &TemporalBipartiteGraph,
    t_star: Timestamp,
    t_p: Timestamp,
    gamma: f64,
) -> Result<ScoredRanking> {
    score_wpp_weighted(graph, t_star, t_p, gamma, ActivityWeight::Total)
}

pub fn score_wpp_weighted(
    graph: &TemporalBipartiteGraph,
    t_star: Timestamp,
    t_p: Timestamp,
    gamma: f64,
    weight: ActivityWeight,
) -> Result<ScoredRanking> {
    let spec = PredictorSpec::new(Predictor::Wpp { gamma, weight }, t_p)?;
    // a user in the window collected at least this item, so activity >= 1
    let activity = |u: usize| match weight {
        ActivityWeight::Total => graph.user_degree_at_idx(u, t_star),
        ActivityWeight::Recent => graph.user_increase_idx(u, t_star, t_p),
    } as f64;
    Ok(rank_items(graph, t_star, spec, |i| {
        graph
            .window_collections(i, t_star, t_p)
            .iter()
            .map(|c| activity(c.user).powf(gamma))
            .sum()
    }))
}

/// Computes the requested influence measure on `social` and scores with it.
pub fn score_ibp(
    graph: &TemporalBipartiteGraph,
    social: &SocialGraph,
    t_star: Timestamp,
    t_p: Timestamp,
    eta: f64,
    centrality: Centrality,
) -> Result<ScoredRanking> {
    let influence = UserInfluence::compute(graph, social, centrality)?;
    score_ibp_with(graph, &influence, t_star, t_p, eta, centrality)
}

/// IBP with precomputed influences. A user with zero influence contributes
/// nothing when `eta < 0`; `0^0` is taken as 1.
pub fn score_ibp_with(
    graph: &TemporalBipartiteGraph,
    influence: &UserInfluence,
    t_star: Timestamp,
    t_p: Timestamp,
    eta: f64,
    centrality: Centrality,
) -> Result<ScoredRanking> {
    let spec = PredictorSpec::new(Predictor::Ibp { eta, centrality }, t_p)?;
    if influence.weights.len() != graph.num_users() {
        return Err(Error::param("user influence was aligned with a different event store"));
    }
    let weight = |u: usize| {
        let w = influence.weights[u];
        if w == 0.0 && eta < 0.0 {
            None
        } else {
            Some(w.powf(eta))
        }
    };
    let mut ranking = rank_items(graph, t_star, spec, |i| {
        graph
            .window_collections(i, t_star, t_p)
            .iter()
            .filter_map(|c| weight(c.user))
            .sum()
    });
    if eta < 0.0 {
        ranking.skipped_contributions = (0..graph.num_items())
            .map(|i| {
                graph
                    .window_collections(i, t_star, t_p)
                    .iter()
                    .filter(|c| influence.weights[c.user] == 0.0)
                    .count()
            })
            .sum();
        if ranking.skipped_contributions > 0 {
            log::warn!(
                "ibp eta={eta}: {} contributions from zero-influence users set to 0 at t*={t_star}",
                ranking.skipped_contributions
            );
        }
    }
    Ok(ranking)
}

/// Dispatches on `spec`. IBP needs `influence`.
pub fn score(
    graph: &TemporalBipartiteGraph,
    spec: &PredictorSpec,
    t_star: Timestamp,
    influence: Option<&UserInfluence>,
) -> Result<ScoredRanking> {
    spec.validate()?;
    let t_p = spec.t_p;
    let mut ranking = match spec.predictor {
        Predictor::TotalPop => score_total_pop(graph, t_star),
        Predictor::RecentPop => score_recent_pop(graph, t_star, t_p)?,
        Predictor::Pbp { lambda } => score_pbp(graph, t_star, t_p, lambda)?,
        Predictor::Wpp { gamma, weight } => score_wpp_weighted(graph, t_star, t_p, gamma, weight)?,
        Predictor::Ibp { eta, centrality } => {
            let influence = influence.ok_or_else(|| Error::param("ibp requires a social graph"))?;
            score_ibp_with(graph, influence, t_star, t_p, eta, centrality)?
        }
    };
    ranking.spec = *spec;
    Ok(ranking)
}

fn rank_items(
    graph: &TemporalBipartiteGraph,
    t_star: Timestamp,
    spec: PredictorSpec,
    score: impl Fn(usize) -> f64 + Sync,
) -> ScoredRanking {
    let items = graph.items();
    let mut entries: Vec<(ItemId, f64)> = (0..items.len())
        .into_par_iter()
        .with_min_len(256)
        .filter(|&i| graph.item_degree_at_idx(i, t_star) > 0)
        .map(|i| (items[i], score(i)))
        .collect();
    sort_ranked(&mut entries);
    ScoredRanking {
        entries,
        t_star,
        spec,
        skipped_contributions: 0,
    }
}

pub(crate) fn sort_ranked(entries: &mut [(ItemId, f64)]) {
    entries.sort_unstable_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
}
