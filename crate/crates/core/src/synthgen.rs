//! Synthetic temporal bipartite networks with preferential attachment and
//! exponential interest decay, plus follower networks with in-degree
//! preferential attachment.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::centrality::SocialGraph;
use crate::error::{Error, Result};
use crate::event_store::{Event, Timestamp, UserId};

/// Attempts at placing one event before the generator gives up.
const MAX_ATTEMPTS: usize = 1 << 20;
/// Item draws per user before switching to another user.
const ITEM_RETRIES: usize = 32;
/// Largest exponent kept in the aging weights before rebasing them.
const MAX_AGE_EXPONENT: f64 = 20.0;

#[derive(Clone, Debug, PartialEq)]
pub struct GenConfig {
    pub num_users: usize,
    /// Total items, including the initial ones.
    pub num_items: usize,
    /// Items present at time 0.
    pub initial_items: usize,
    pub num_events: usize,
    /// New items per tick once the initial ones are placed.
    pub item_arrival_rate: f64,
    /// Interest decay timescale in ticks; `None` disables aging.
    pub decay_timescale: Option<f64>,
    /// Additive attractiveness so zero-degree items can be picked.
    pub pa_offset: f64,
    /// Users are drawn with weight `(k_i + 1)^exponent`; 0 is uniform.
    pub user_activity_exponent: f64,
    /// Seconds between consecutive events.
    pub tick: Timestamp,
    pub rng_seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            num_users: 1000,
            num_items: 100,
            initial_items: 1,
            num_events: 10_000,
            item_arrival_rate: 0.01,
            decay_timescale: None,
            pa_offset: 1.0,
            user_activity_exponent: 0.0,
            tick: 1,
            rng_seed: 0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Infeasible(msg));
        if self.num_users == 0 || self.num_items == 0 || self.num_events == 0 {
            return bad("user, item and event counts must be positive".into());
        }
        if (self.num_events as u128) > (self.num_users as u128) * (self.num_items as u128) {
            return bad(format!(
                "{} events exceed {} users x {} items",
                self.num_events, self.num_users, self.num_items
            ));
        }
        if self.initial_items == 0 || self.initial_items > self.num_items {
            return bad(format!("initial_items must lie in [1, {}]", self.num_items));
        }
        if self.num_items > self.initial_items && !(self.item_arrival_rate > 0.0 && self.item_arrival_rate.is_finite())
        {
            return bad("item_arrival_rate must be positive when items arrive over time".into());
        }
        if let Some(theta) = self.decay_timescale {
            if theta.is_nan() || theta <= 0.0 {
                return bad(format!("decay timescale must be positive, got {theta}"));
            }
        }
        if !(self.pa_offset > 0.0 && self.pa_offset.is_finite()) {
            return bad(format!("pa_offset must be positive, got {}", self.pa_offset));
        }
        if !self.user_activity_exponent.is_finite() {
            return bad("user_activity_exponent must be finite".into());
        }
        if self.tick <= 0 {
            return bad(format!("tick must be positive, got {}", self.tick));
        }
        Ok(())
    }

    /// Tick at which item `idx` becomes available.
    fn birth_tick(&self, idx: usize) -> u64 {
        if idx < self.initial_items {
            0
        } else {
            ((idx - self.initial_items + 1) as f64 / self.item_arrival_rate).ceil() as u64
        }
    }
}

/// Draws `num_events` events, one per tick. At tick `t` a user collects item
/// `α` with probability proportional to
/// `(k_α + pa_offset) · exp(-(t - birth_α) / θ)` among the items born so far.
/// A user never collects the same item twice.
pub fn generate(config: &GenConfig) -> Result<Vec<Event>> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let theta = config.decay_timescale;

    let mut item_degree = vec![0usize; config.num_items];
    let mut items = SumTree::new(config.num_items);
    let mut born = 0usize;
    // exp(-(t - b)/θ) ∝ exp((b - t_ref)/θ); the common factor exp((t_ref - t)/θ) cancels
    let mut t_ref = 0.0f64;
    let item_weight = |degree: usize, birth: u64, t_ref: f64| {
        let attract = degree as f64 + config.pa_offset;
        match theta {
            Some(theta) => attract * ((birth as f64 - t_ref) / theta).exp(),
            None => attract,
        }
    };

    let uniform_users = config.user_activity_exponent == 0.0;
    let mut user_degree = vec![0usize; config.num_users];
    let mut users = SumTree::new(if uniform_users { 0 } else { config.num_users });
    if !uniform_users {
        for u in 0..config.num_users {
            users.set(u, 1.0);
        }
    }

    let mut seen: HashSet<(u32, u32)> = HashSet::with_capacity(config.num_events);
    let mut events = Vec::with_capacity(config.num_events);
    for tick in 0..config.num_events as u64 {
        while born < config.num_items && config.birth_tick(born) <= tick {
            let birth = config.birth_tick(born);
            // keep t_ref at or below the newest birth so its weight stays >= pa_offset
            if theta.is_some_and(|theta| (birth as f64 - t_ref) / theta > MAX_AGE_EXPONENT) {
                t_ref = birth as f64;
                for (i, (w, &k)) in items.weights.iter_mut().zip(&item_degree).take(born).enumerate() {
                    *w = item_weight(k, config.birth_tick(i), t_ref);
                }
                // incremental deltas of this size would leave residue larger than the new total
                items.rebuild();
            }
            items.set(born, item_weight(0, birth, t_ref));
            born += 1;
        }

        let mut placed = None;
        'attempts: for _ in 0..MAX_ATTEMPTS / ITEM_RETRIES {
            let user = if uniform_users {
                rng.gen_range(0..config.num_users)
            } else {
                users.sample(&mut rng)
            };
            for _ in 0..ITEM_RETRIES {
                let item = items.sample(&mut rng);
                if item < born && seen.insert((user as u32, item as u32)) {
                    placed = Some((user, item));
                    break 'attempts;
                }
            }
        }
        let Some((user, item)) = placed else {
            return Err(Error::Infeasible(format!(
                "could not place event {tick}: every available user-item pair is taken"
            )));
        };

        item_degree[item] += 1;
        items.set(item, item_weight(item_degree[item], config.birth_tick(item), t_ref));
        user_degree[user] += 1;
        if !uniform_users {
            users.set(
                user,
                (user_degree[user] as f64 + 1.0).powf(config.user_activity_exponent),
            );
        }
        events.push(Event::new(user as u64, item as u64, tick as Timestamp * config.tick));
    }
    Ok(events)
}

/// Directed follower → leader edges over users `0..num_users`. Each edge takes
/// a uniform follower and a leader drawn with weight
/// `(in_degree + 1)^attach_exponent`; self-loops and repeats are redrawn.
pub fn generate_social(num_users: usize, num_edges: usize, attach_exponent: f64, seed: u64) -> Result<SocialGraph> {
    let capacity = (num_users as u128) * (num_users.saturating_sub(1) as u128);
    if num_edges as u128 > capacity {
        return Err(Error::Infeasible(format!(
            "{num_edges} edges exceed the {capacity} possible among {num_users} users"
        )));
    }
    if !attach_exponent.is_finite() {
        return Err(Error::Infeasible("attach_exponent must be finite".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut in_degree = vec![0usize; num_users];
    let mut out_degree = vec![0usize; num_users];
    let mut leaders = SumTree::new(num_users);
    for u in 0..num_users {
        leaders.set(u, 1.0);
    }
    let mut edges: HashSet<(usize, usize)> = HashSet::with_capacity(num_edges);
    let mut ordered = Vec::with_capacity(num_edges);

    for _ in 0..num_edges {
        let mut edge = None;
        for _ in 0..1000 {
            let f = rng.gen_range(0..num_users);
            let l = leaders.sample(&mut rng);
            if f != l && !edges.contains(&(f, l)) {
                edge = Some((f, l));
                break;
            }
        }
        // dense graphs: fall back to scanning for a free pair
        let (f, l) = match edge {
            Some(e) => e,
            None => {
                let start = rng.gen_range(0..num_users);
                let f = (0..num_users)
                    .map(|k| (start + k) % num_users)
                    .find(|&f| out_degree[f] + 1 < num_users)
                    .expect("capacity checked above");
                let l = (0..num_users)
                    .map(|k| (start + k) % num_users)
                    .find(|&l| l != f && !edges.contains(&(f, l)))
                    .expect("follower has a free leader");
                (f, l)
            }
        };
        edges.insert((f, l));
        ordered.push((UserId(f as u64), UserId(l as u64)));
        out_degree[f] += 1;
        in_degree[l] += 1;
        leaders.set(l, (in_degree[l] as f64 + 1.0).powf(attach_exponent));
    }
    Ok(SocialGraph::with_users((0..num_users as u64).map(UserId), ordered))
}

/// Fenwick tree over non-negative weights supporting point updates and
/// sampling proportional to weight.
struct SumTree {
    tree: Vec<f64>,
    weights: Vec<f64>,
    updates: usize,
}

impl SumTree {
    fn new(len: usize) -> Self {
        SumTree {
            tree: vec![0.0; len + 1],
            weights: vec![0.0; len],
            updates: 0,
        }
    }

    fn set(&mut self, idx: usize, weight: f64) {
        let delta = weight - self.weights[idx];
        self.weights[idx] = weight;
        let mut i = idx + 1;
        while i < self.tree.len() {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
        self.updates += 1;
        // repeated deltas accumulate rounding error
        if self.updates >= 1 << 16 {
            self.rebuild();
        }
    }

    fn rebuild(&mut self) {
        self.tree.iter_mut().for_each(|t| *t = 0.0);
        for (k, &w) in self.weights.iter().enumerate() {
            let i = k + 1;
            self.tree[i] += w;
            let parent = i + (i & i.wrapping_neg());
            if parent < self.tree.len() {
                let v = self.tree[i];
                self.tree[parent] += v;
            }
        }
        self.updates = 0;
    }

    fn total(&self) -> f64 {
        let mut i = self.weights.len();
        let mut sum = 0.0;
        while i > 0 {
            sum += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        sum
    }

    fn sample(&self, rng: &mut impl Rng) -> usize {
        let total = self.total();
        assert!(total > 0.0, "sampling from an empty weight set");
        loop {
            let mut target = rng.gen::<f64>() * total;
            let mut pos = 0usize;
            let mut step = self.tree.len().next_power_of_two();
            while step > 0 {
                let next = pos + step;
                if next < self.tree.len() && self.tree[next] <= target {
                    target -= self.tree[next];
                    pos = next;
                }
                step >>= 1;
            }
            if pos < self.weights.len() && self.weights[pos] > 0.0 {
                return pos;
            }
        }
    }
}
