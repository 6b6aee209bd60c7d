//! Static follower → leader network and the user influence measures built on it.
//!
//! Edge `i -> j` means user `i` follows user `j`. Iterative measures push
//! score along these edges, from each follower to its leaders, so influence
//! accrues to users who are followed. Note the direction: a follower is the
//! *source* of score, not the leader who publishes content.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::event_store::UserId;

/// Damping used by the original PageRank formulation.
pub const DEFAULT_DAMPING: f64 = 0.85;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 1000;

const PARALLEL_MIN_LEN: usize = 4096;

#[derive(Clone, Debug, Default)]
pub struct SocialGraph {
    ids: Vec<UserId>,
    out_offsets: Vec<usize>,
    leaders: Vec<usize>,
    in_offsets: Vec<usize>,
    followers: Vec<usize>,
    self_loops_dropped: usize,
    duplicates_dropped: usize,
}

impl SocialGraph {
    /// Builds from `(follower, leader)` pairs; the vertex set is every id
    /// mentioned in `edges`.
    pub fn from_edges(edges: impl IntoIterator<Item = (UserId, UserId)>) -> Self {
        Self::with_users(std::iter::empty(), edges)
    }

    /// Like [`SocialGraph::from_edges`] but also registers `users` that may
    /// have no edges at all.
    pub fn with_users(
        users: impl IntoIterator<Item = UserId>,
        edges: impl IntoIterator<Item = (UserId, UserId)>,
    ) -> Self {
        let mut ids: Vec<UserId> = users.into_iter().collect();
        let mut pairs = Vec::new();
        let mut self_loops_dropped = 0;
        for (follower, leader) in edges {
            ids.push(follower);
            ids.push(leader);
            if follower == leader {
                self_loops_dropped += 1;
            } else {
                pairs.push((follower, leader));
            }
        }
        ids.sort_unstable();
        ids.dedup();

        let idx = |u: UserId| ids.binary_search(&u).expect("registered above");
        let mut edges: Vec<(usize, usize)> = pairs.into_iter().map(|(f, l)| (idx(f), idx(l))).collect();
        edges.sort_unstable();
        let before = edges.len();
        edges.dedup();
        let duplicates_dropped = before - edges.len();

        let n = ids.len();
        let mut out_offsets = vec![0usize; n + 1];
        let mut in_offsets = vec![0usize; n + 1];
        for &(f, l) in &edges {
            out_offsets[f + 1] += 1;
            in_offsets[l + 1] += 1;
        }
        for k in 0..n {
            out_offsets[k + 1] += out_offsets[k];
            in_offsets[k + 1] += in_offsets[k];
        }
        // edges sorted by follower, so leaders fill in order
        let leaders: Vec<usize> = edges.iter().map(|&(_, l)| l).collect();
        let mut followers = vec![0usize; edges.len()];
        let mut fill = in_offsets.clone();
        for &(f, l) in &edges {
            followers[fill[l]] = f;
            fill[l] += 1;
        }

        SocialGraph {
            ids,
            out_offsets,
            leaders,
            in_offsets,
            followers,
            self_loops_dropped,
            duplicates_dropped,
        }
    }

    pub fn num_users(&self) -> usize {
        self.ids.len()
    }

    pub fn num_edges(&self) -> usize {
        self.leaders.len()
    }

    /// Sorted vertex ids; influence vectors are aligned with this order.
    pub fn users(&self) -> &[UserId] {
        &self.ids
    }

    pub fn index_of(&self, user: UserId) -> Option<usize> {
        self.ids.binary_search(&user).ok()
    }

    pub fn leaders(&self, idx: usize) -> &[usize] {
        &self.leaders[self.out_offsets[idx]..self.out_offsets[idx + 1]]
    }

    pub fn followers(&self, idx: usize) -> &[usize] {
        &self.followers[self.in_offsets[idx]..self.in_offsets[idx + 1]]
    }

    pub fn out_degree(&self, idx: usize) -> usize {
        self.out_offsets[idx + 1] - self.out_offsets[idx]
    }

    pub fn in_degree(&self, idx: usize) -> usize {
        self.in_offsets[idx + 1] - self.in_offsets[idx]
    }

    pub fn self_loops_dropped(&self) -> usize {
        self.self_loops_dropped
    }

    pub fn duplicates_dropped(&self) -> usize {
        self.duplicates_dropped
    }

    /// Edges as `(follower, leader)` ids in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (UserId, UserId)> + '_ {
        (0..self.num_users()).flat_map(move |f| self.leaders(f).iter().map(move |&l| (self.ids[f], self.ids[l])))
    }
}

/// Parses a whitespace-separated `follower leader` edge list. Blank lines and
/// lines starting with `#` are skipped.
pub fn parse_edge_list(reader: impl BufRead) -> Result<SocialGraph> {
    let mut edges = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let lineno = k as u64 + 1;
        let line = line.map_err(|e| Error::parse(lineno, e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut fields = line.split_whitespace();
        let (Some(a), Some(b), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(Error::parse(lineno, format!("expected two ids, got {line:?}")));
        };
        let id = |s: &str| {
            s.parse::<u64>()
                .map(UserId)
                .map_err(|_| Error::parse(lineno, format!("invalid user id {s:?}")))
        };
        edges.push((id(a)?, id(b)?));
    }
    Ok(SocialGraph::from_edges(edges))
}

pub fn load_social_graph(path: impl AsRef<Path>) -> Result<SocialGraph> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let g = parse_edge_list(BufReader::new(file))?;
    if g.self_loops_dropped() > 0 || g.duplicates_dropped() > 0 {
        log::info!(
            "{}: dropped {} self-loops and {} duplicate edges",
            path.display(),
            g.self_loops_dropped(),
            g.duplicates_dropped()
        );
    }
    Ok(g)
}

/// Writes the edge-list format read by [`parse_edge_list`].
pub fn write_edge_list(graph: &SocialGraph, mut out: impl std::io::Write) -> std::io::Result<()> {
    writeln!(out, "# follower leader")?;
    for (f, l) in graph.edges() {
        writeln!(out, "{f} {l}")?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Centrality {
    InDegree,
    PageRank,
    LeaderRank,
}

impl Centrality {
    pub const ALL: [Centrality; 3] = [Centrality::InDegree, Centrality::PageRank, Centrality::LeaderRank];

    pub fn as_str(&self) -> &'static str {
        match self {
            Centrality::InDegree => "in_degree",
            Centrality::PageRank => "pagerank",
            Centrality::LeaderRank => "leaderrank",
        }
    }
}

impl fmt::Display for Centrality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Centrality {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "in_degree" | "indegree" | "in" => Ok(Centrality::InDegree),
            "pagerank" | "pr" => Ok(Centrality::PageRank),
            "leaderrank" | "lr" => Ok(Centrality::LeaderRank),
            other => Err(Error::param(format!("unknown centrality {other:?}"))),
        }
    }
}

/// Per-user influence, aligned with [`SocialGraph::users`].
#[derive(Clone, Debug, PartialEq)]
pub struct InfluenceVector {
    pub values: Vec<f64>,
    pub measure: Centrality,
    pub iterations_used: usize,
    pub residual: f64,
    pub converged: bool,
}

impl InfluenceVector {
    pub fn get(&self, graph: &SocialGraph, user: UserId) -> Option<f64> {
        graph.index_of(user).map(|i| self.values[i])
    }
}

pub fn influence(graph: &SocialGraph, measure: Centrality) -> Result<InfluenceVector> {
    match measure {
        Centrality::InDegree => Ok(influence_in_degree(graph)),
        Centrality::PageRank => influence_pagerank(graph, DEFAULT_DAMPING, DEFAULT_TOLERANCE, DEFAULT_MAX_ITER),
        Centrality::LeaderRank => influence_leaderrank(graph, DEFAULT_TOLERANCE, DEFAULT_MAX_ITER),
    }
}

/// Follower counts.
pub fn influence_in_degree(graph: &SocialGraph) -> InfluenceVector {
    InfluenceVector {
        values: (0..graph.num_users()).map(|i| graph.in_degree(i) as f64).collect(),
        measure: Centrality::InDegree,
        iterations_used: 0,
        residual: 0.0,
        converged: true,
    }
}

/// Power iteration of
/// `s'_j = (1 - δ)/N + δ Σ_{i follows j} s_i / d_out(i) + δ D / N`,
/// where `D` is the score held by users who follow nobody. Starts from the
/// uniform vector and stops once the L1 change drops below `tol`.
pub fn influence_pagerank(graph: &SocialGraph, damping: f64, tol: f64, max_iter: usize) -> Result<InfluenceVector> {
    if !(damping > 0.0 && damping < 1.0) {
        return Err(Error::param(format!("damping must lie in (0, 1), got {damping}")));
    }
    let n = graph.num_users();
    if n == 0 {
        return Err(Error::param("social graph has no users"));
    }
    let nf = n as f64;
    let inv_out: Vec<f64> = (0..n)
        .map(|i| match graph.out_degree(i) {
            0 => 0.0,
            d => 1.0 / d as f64,
        })
        .collect();
    let dangling: Vec<usize> = (0..n).filter(|&i| graph.out_degree(i) == 0).collect();

    let mut scores = vec![1.0 / nf; n];
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        let dangling_mass: f64 = dangling.iter().map(|&i| scores[i]).sum();
        let base = (1.0 - damping) / nf + damping * dangling_mass / nf;
        next.par_iter_mut()
            .with_min_len(PARALLEL_MIN_LEN)
            .enumerate()
            .for_each(|(j, out)| {
                let inflow: f64 = graph.followers(j).iter().map(|&i| scores[i] * inv_out[i]).sum();
                *out = base + damping * inflow;
            });
        residual = l1_distance(&scores, &next);
        std::mem::swap(&mut scores, &mut next);
        iterations += 1;
        if residual < tol {
            break;
        }
    }
    let converged = residual < tol;
    if !converged {
        log::warn!("pagerank stopped after {iterations} iterations with residual {residual:e}");
    }
    Ok(InfluenceVector {
        values: scores,
        measure: Centrality::PageRank,
        iterations_used: iterations,
        residual,
        converged,
    })
}

/// LeaderRank: a ground node linked both ways to every user, then pure score
/// flow (no teleportation) starting from score 1 on each user and 0 on the
/// ground node. At convergence the ground node's score is split evenly back
/// onto the users, so the reported values sum to `N`.
///
/// Each step is lazy, `s' = (s + P s) / 2`. The fixed point is the same, but
/// users that only link to the ground node no longer make the walk nearly
/// periodic, which would otherwise stall convergence.
pub fn influence_leaderrank(graph: &SocialGraph, tol: f64, max_iter: usize) -> Result<InfluenceVector> {
    let n = graph.num_users();
    if n == 0 {
        return Err(Error::param("social graph has no users"));
    }
    if graph.num_edges() == 0 {
        // Users and ground node form a bipartite star: the raw iteration
        // alternates forever, but every redistributed state is uniform.
        return Ok(InfluenceVector {
            values: vec![1.0; n],
            measure: Centrality::LeaderRank,
            iterations_used: 0,
            residual: 0.0,
            converged: true,
        });
    }
    let nf = n as f64;
    // every user also links to the ground node
    let share: Vec<f64> = (0..n).map(|i| 1.0 / (graph.out_degree(i) + 1) as f64).collect();

    let mut scores = vec![1.0; n];
    let mut ground = 0.0;
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        let from_ground = ground / nf;
        next.par_iter_mut()
            .with_min_len(PARALLEL_MIN_LEN)
            .enumerate()
            .for_each(|(j, out)| {
                let inflow: f64 = graph.followers(j).iter().map(|&i| scores[i] * share[i]).sum();
                *out = 0.5 * (scores[j] + inflow + from_ground);
            });
        let next_ground = 0.5 * (ground + scores.iter().zip(&share).map(|(s, w)| s * w).sum::<f64>());
        residual = l1_distance(&scores, &next) + (ground - next_ground).abs();
        std::mem::swap(&mut scores, &mut next);
        ground = next_ground;
        iterations += 1;
        if residual < tol {
            break;
        }
    }
    let converged = residual < tol;
    if !converged {
        log::warn!("leaderrank stopped after {iterations} iterations with residual {residual:e}");
    }
    let bonus = ground / nf;
    scores.iter_mut().for_each(|s| *s += bonus);
    Ok(InfluenceVector {
        values: scores,
        measure: Centrality::LeaderRank,
        iterations_used: iterations,
        residual,
        converged,
    })
}

fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
