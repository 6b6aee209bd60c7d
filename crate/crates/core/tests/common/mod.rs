//! Brute-force reference implementations. Everything here works from the raw
//! event list by linear scans and shares no code with the library.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trendcast::{Event, ItemId, Timestamp};

/// Distinct (user, item) links with their earliest timestamp.
pub struct Links(pub Vec<(u64, u64, Timestamp)>);

impl Links {
    pub fn new(events: &[Event]) -> Self {
        let mut first: HashMap<(u64, u64), Timestamp> = HashMap::new();
        for e in events {
            let ts = first.entry((e.user.0, e.item.0)).or_insert(e.timestamp);
            *ts = (*ts).min(e.timestamp);
        }
        let mut v: Vec<_> = first.into_iter().map(|((u, i), t)| (u, i, t)).collect();
        v.sort_unstable();
        Links(v)
    }

    pub fn items(&self) -> BTreeSet<u64> {
        self.0.iter().map(|l| l.1).collect()
    }

    pub fn item_degree(&self, item: u64, t: Timestamp) -> usize {
        self.0.iter().filter(|l| l.1 == item && l.2 <= t).count()
    }

    pub fn user_degree(&self, user: u64, t: Timestamp) -> usize {
        self.0.iter().filter(|l| l.0 == user && l.2 <= t).count()
    }

    /// Collections of `item` in `(t - w, t]`.
    pub fn increase(&self, item: u64, t: Timestamp, w: Timestamp) -> usize {
        let lo = t.saturating_sub(w);
        self.0.iter().filter(|l| l.1 == item && l.2 > lo && l.2 <= t).count()
    }

    pub fn window_users(&self, item: u64, t: Timestamp, w: Timestamp) -> Vec<u64> {
        let lo = t.saturating_sub(w);
        self.0
            .iter()
            .filter(|l| l.1 == item && l.2 > lo && l.2 <= t)
            .map(|l| l.0)
            .collect()
    }

    /// Items collected by `t`, scored by `f`, best first, ties by id.
    pub fn rank(&self, t: Timestamp, f: impl Fn(u64) -> f64) -> Vec<(u64, f64)> {
        let mut v: Vec<(u64, f64)> = self
            .items()
            .into_iter()
            .filter(|&i| self.item_degree(i, t) > 0)
            .map(|i| (i, f(i)))
            .collect();
        v.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        v
    }

    pub fn top_by_increase(&self, t: Timestamp, w: Timestamp, n: usize) -> Vec<(u64, usize)> {
        let mut v: Vec<(u64, usize)> = self
            .items()
            .into_iter()
            .filter(|&i| self.item_degree(i, t) > 0)
            .map(|i| (i, self.increase(i, t, w)))
            .collect();
        v.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        v.truncate(n);
        v
    }

    pub fn pbp(&self, t: Timestamp, t_p: Timestamp, lambda: f64) -> Vec<(u64, f64)> {
        self.rank(t, |i| {
            self.item_degree(i, t) as f64 - lambda * self.item_degree(i, t.saturating_sub(t_p)) as f64
        })
    }

    pub fn wpp(&self, t: Timestamp, t_p: Timestamp, gamma: f64, recent: bool) -> Vec<(u64, f64)> {
        self.rank(t, |i| {
            let mut s = 0.0;
            for u in self.window_users(i, t, t_p) {
                let activity = if recent {
                    self.0
                        .iter()
                        .filter(|l| l.0 == u && l.2 > t.saturating_sub(t_p) && l.2 <= t)
                        .count()
                } else {
                    self.user_degree(u, t)
                };
                s += (activity as f64).powf(gamma);
            }
            s
        })
    }

    pub fn ibp(&self, t: Timestamp, t_p: Timestamp, eta: f64, influence: &HashMap<u64, f64>) -> Vec<(u64, f64)> {
        self.rank(t, |i| {
            let mut s = 0.0;
            for u in self.window_users(i, t, t_p) {
                let w = influence.get(&u).copied().unwrap_or(0.0);
                if w == 0.0 && eta < 0.0 {
                    continue;
                }
                s += w.powf(eta);
            }
            s
        })
    }
}

pub fn ids(v: &[(u64, f64)]) -> Vec<ItemId> {
    v.iter().map(|&(i, _)| ItemId(i)).collect()
}

/// P_n, E_n, C_n, Q_n for one date, by set arithmetic on brute-force lists.
pub fn metrics(
    links: &Links,
    predicted: &[ItemId],
    t: Timestamp,
    t_p: Timestamp,
    t_f: Timestamp,
    n: usize,
) -> (f64, usize, usize, Option<f64>) {
    let truth: BTreeSet<u64> = links
        .top_by_increase(t + t_f, t_f, n)
        .into_iter()
        .map(|x| x.0)
        .collect();
    let past: BTreeSet<u64> = links.top_by_increase(t, t_p, n).into_iter().map(|x| x.0).collect();
    let pred: BTreeSet<u64> = predicted.iter().take(n).map(|i| i.0).collect();
    let fresh: BTreeSet<u64> = truth.difference(&past).copied().collect();
    let hits = pred.intersection(&truth).count();
    let correct = pred.intersection(&fresh).count();
    let q = (!fresh.is_empty()).then(|| correct as f64 / fresh.len() as f64);
    (hits as f64 / n as f64, fresh.len(), correct, q)
}

/// Random events with clustered timestamps so windows see ties.
pub fn random_events(seed: u64, users: u64, items: u64, events: usize, horizon: Timestamp) -> Vec<Event> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..events)
        .map(|_| {
            let item = if rng.gen_bool(0.5) {
                rng.gen_range(0..items.clamp(1, 10))
            } else {
                rng.gen_range(0..items)
            };
            Event::new(rng.gen_range(0..users), item, rng.gen_range(0..=horizon))
        })
        .collect()
}

/// Dense Gaussian elimination with partial pivoting.
pub fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            if f != 0.0 {
                let pivot_row = a[col].clone();
                for (x, p) in a[row].iter_mut().zip(&pivot_row).skip(col) {
                    *x -= f * p;
                }
                b[row] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// PageRank as the solution of `(I - δ M) s = (1 - δ)/N · 1` where `M`
/// spreads each follower's score over its leaders and dangling users spread
/// uniformly over everyone.
pub fn pagerank_dense(n: usize, edges: &[(usize, usize)], damping: f64) -> Vec<f64> {
    let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(f, l) in edges {
        out.entry(f).or_default().push(l);
    }
    let mut m = vec![vec![0.0; n]; n];
    for j in 0..n {
        match out.get(&j) {
            Some(leaders) => {
                for &l in leaders {
                    m[l][j] += 1.0 / leaders.len() as f64;
                }
            }
            None => {
                for row in m.iter_mut() {
                    row[j] += 1.0 / n as f64;
                }
            }
        }
    }
    let a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| f64::from(u8::from(i == j)) - damping * m[i][j])
                .collect()
        })
        .collect();
    solve(a, vec![(1.0 - damping) / n as f64; n])
}

/// LeaderRank by plain power iteration on the graph with an explicit ground
/// node `n`, then the ground score shared out equally.
pub fn leaderrank_augmented(n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for &(f, l) in edges {
        adj[f].push(l);
    }
    for u in 0..n {
        adj[u].push(n);
        adj[n].push(u);
    }
    let mut s = vec![1.0; n + 1];
    s[n] = 0.0;
    for _ in 0..100_000 {
        let mut next = vec![0.0; n + 1];
        for (j, targets) in adj.iter().enumerate() {
            for &i in targets {
                next[i] += s[j] / targets.len() as f64;
            }
        }
        let diff: f64 = next.iter().zip(&s).map(|(a, b)| (a - b).abs()).sum();
        s = next;
        if diff < 1e-13 {
            break;
        }
    }
    (0..n).map(|u| s[u] + s[n] / n as f64).collect()
}

pub fn random_digraph(seed: u64, n: usize, p: f64) -> Vec<(usize, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for f in 0..n {
        for l in 0..n {
            if f != l && rng.gen_bool(p) {
                edges.push((f, l));
            }
        }
    }
    edges
}

/// Average ranks, ties sharing the mean of their positions.
fn ranks(x: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].partial_cmp(&x[b]).unwrap());
    let mut r = vec![0.0; x.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && x[order[j + 1]] == x[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0;
        for &k in &order[i..=j] {
            r[k] = avg;
        }
        i = j + 1;
    }
    r
}

pub fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let n = a.len() as f64;
    let (ma, mb) = (ra.iter().sum::<f64>() / n, rb.iter().sum::<f64>() / n);
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - ma) * (y - mb)).sum();
    let va: f64 = ra.iter().map(|x| (x - ma).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mb).powi(2)).sum();
    cov / (va * vb).sqrt()
}
