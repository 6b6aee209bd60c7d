//! Time-indexed storage for user–item collection events.
//!
//! Snapshot semantics: the degree of a node at time `t` counts its events with
//! `timestamp <= t`. A window of length `T` ending at `t` is the half-open
//! interval `(t - T, t]`, so the degree increase over that window is
//! `k(t) - k(t - T)`.

use std::fmt;

use crate::error::{Error, Result};

/// Integer seconds since the epoch. Durations use the same unit.
pub type Timestamp = i64;

/// Sentinel for "after every event"; `degree_at(x, T_INFINITY)` is the total degree.
pub const T_INFINITY: Timestamp = Timestamp::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UserId(pub u64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ItemId(pub u64);

impl fmt::Display for UserId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Display for ItemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// One collection act: `user` collected `item` at `timestamp`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Event {
    pub user: UserId,
    pub item: ItemId,
    pub timestamp: Timestamp,
}

impl Event {
    pub fn new(user: u64, item: u64, timestamp: Timestamp) -> Self {
        Event {
            user: UserId(user),
            item: ItemId(item),
            timestamp,
        }
    }
}

/// A test date with its past and future window lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimeWindow {
    pub t_star: Timestamp,
    pub t_p: Timestamp,
    pub t_f: Timestamp,
}

impl TimeWindow {
    pub fn new(t_star: Timestamp, t_p: Timestamp, t_f: Timestamp) -> Result<Self> {
        if t_p <= 0 || t_f <= 0 {
            return Err(Error::param(format!(
                "window lengths must be positive (T_P={t_p}, T_F={t_f})"
            )));
        }
        Ok(TimeWindow { t_star, t_p, t_f })
    }

    /// Exclusive start of the past window `(t* - T_P, t*]`.
    pub fn past_start(&self) -> Timestamp {
        self.t_star.saturating_sub(self.t_p)
    }

    /// Inclusive end of the future window `(t*, t* + T_F]`.
    pub fn future_end(&self) -> Timestamp {
        self.t_star.saturating_add(self.t_f)
    }
}

/// An item's collection record inside the per-item index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) struct Collection {
    pub timestamp: Timestamp,
    /// Dense user index into [`TemporalBipartiteGraph::users`].
    pub user: usize,
}

/// Immutable bipartite event store with per-user and per-item time indices.
#[derive(Clone, Debug)]
pub struct TemporalBipartiteGraph {
    events: Vec<Event>,
    users: Vec<UserId>,
    user_offsets: Vec<usize>,
    user_times: Vec<Timestamp>,
    items: Vec<ItemId>,
    item_offsets: Vec<usize>,
    item_collections: Vec<Collection>,
    duplicates_collapsed: usize,
}

impl TemporalBipartiteGraph {
    /// Builds the store. Events may be unsorted; repeated `(user, item)` pairs
    /// keep their earliest timestamp.
    pub fn build(events: impl IntoIterator<Item = Event>) -> Result<Self> {
        let mut events: Vec<Event> = events.into_iter().collect();
        if events.is_empty() {
            return Err(Error::EmptyEventStream);
        }
        if let Some((record, e)) = events.iter().enumerate().find(|(_, e)| e.timestamp < 0) {
            return Err(Error::NegativeTimestamp {
                record,
                user: e.user,
                item: e.item,
                timestamp: e.timestamp,
            });
        }

        events.sort_unstable_by_key(|e| (e.user, e.item, e.timestamp));
        let before = events.len();
        events.dedup_by(|later, first| later.user == first.user && later.item == first.item);
        let duplicates_collapsed = before - events.len();

        // events are now grouped by user, each group sorted by item
        let mut users = Vec::new();
        for e in &events {
            if users.last() != Some(&e.user) {
                users.push(e.user);
            }
        }
        let mut items: Vec<ItemId> = events.iter().map(|e| e.item).collect();
        items.sort_unstable();
        items.dedup();

        let mut user_offsets = vec![0usize; users.len() + 1];
        let mut item_offsets = vec![0usize; items.len() + 1];
        let mut user_idx = Vec::with_capacity(events.len());
        let mut item_idx = Vec::with_capacity(events.len());
        let mut u = 0usize;
        for e in &events {
            while users[u] != e.user {
                u += 1;
            }
            let i = items.binary_search(&e.item).expect("item collected above");
            user_offsets[u + 1] += 1;
            item_offsets[i + 1] += 1;
            user_idx.push(u);
            item_idx.push(i);
        }
        for k in 0..users.len() {
            user_offsets[k + 1] += user_offsets[k];
        }
        for k in 0..items.len() {
            item_offsets[k + 1] += item_offsets[k];
        }

        let mut user_times = vec![0; events.len()];
        let mut item_collections = vec![Collection { timestamp: 0, user: 0 }; events.len()];
        let mut user_fill = user_offsets.clone();
        let mut item_fill = item_offsets.clone();
        for (k, e) in events.iter().enumerate() {
            let (u, i) = (user_idx[k], item_idx[k]);
            user_times[user_fill[u]] = e.timestamp;
            user_fill[u] += 1;
            item_collections[item_fill[i]] = Collection {
                timestamp: e.timestamp,
                user: u,
            };
            item_fill[i] += 1;
        }
        for u in 0..users.len() {
            user_times[user_offsets[u]..user_offsets[u + 1]].sort_unstable();
        }
        for i in 0..items.len() {
            item_collections[item_offsets[i]..item_offsets[i + 1]].sort_unstable();
        }

        events.sort_unstable_by_key(|e| (e.timestamp, e.user, e.item));

        Ok(TemporalBipartiteGraph {
            events,
            users,
            user_offsets,
            user_times,
            items,
            item_offsets,
            item_collections,
            duplicates_collapsed,
        })
    }

    /// Events sorted by `(timestamp, user, item)`.
    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn num_users(&self) -> usize {
        self.users.len()
    }

    pub fn num_items(&self) -> usize {
        self.items.len()
    }

    pub fn num_links(&self) -> usize {
        self.events.len()
    }

    /// Sorted user ids.
    pub fn users(&self) -> &[UserId] {
        &self.users
    }

    /// Sorted item ids.
    pub fn items(&self) -> &[ItemId] {
        &self.items
    }

    pub fn duplicates_collapsed(&self) -> usize {
        self.duplicates_collapsed
    }

    pub fn first_timestamp(&self) -> Timestamp {
        self.events[0].timestamp
    }

    pub fn last_timestamp(&self) -> Timestamp {
        self.events[self.events.len() - 1].timestamp
    }

    pub fn item_degree_at(&self, item: ItemId, t: Timestamp) -> Result<usize> {
        let idx = self.item_index(item).ok_or(Error::UnknownItem(item))?;
        Ok(self.item_degree_at_idx(idx, t))
    }

    pub fn user_degree_at(&self, user: UserId, t: Timestamp) -> Result<usize> {
        let idx = self.user_index(user).ok_or(Error::UnknownUser(user))?;
        Ok(self.user_degree_at_idx(idx, t))
    }

    /// Number of collections of `item` inside `(t - t_p, t]`.
    pub fn item_degree_increase(&self, item: ItemId, t: Timestamp, t_p: Timestamp) -> Result<usize> {
        check_window(t_p)?;
        let idx = self.item_index(item).ok_or(Error::UnknownItem(item))?;
        Ok(self.item_increase_idx(idx, t, t_p))
    }

    /// Items ranked by degree increase over `(t - t_p, t]`, ties by ascending
    /// id, truncated to `n`. Only items already collected by `t` take part.
    pub fn top_items_by_increase(&self, t: Timestamp, t_p: Timestamp, n: usize) -> Result<Vec<(ItemId, usize)>> {
        check_window(t_p)?;
        if n == 0 {
            return Err(Error::param("ranking depth n must be at least 1"));
        }
        let mut ranked: Vec<(ItemId, usize)> = (0..self.items.len())
            .filter(|&i| self.item_degree_at_idx(i, t) > 0)
            .map(|i| (self.items[i], self.item_increase_idx(i, t, t_p)))
            .collect();
        ranked.sort_unstable_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        ranked.truncate(n);
        Ok(ranked)
    }

    pub(crate) fn item_index(&self, item: ItemId) -> Option<usize> {
        self.items.binary_search(&item).ok()
    }

    pub(crate) fn user_index(&self, user: UserId) -> Option<usize> {
        self.users.binary_search(&user).ok()
    }

    pub(crate) fn item_collections(&self, idx: usize) -> &[Collection] {
        &self.item_collections[self.item_offsets[idx]..self.item_offsets[idx + 1]]
    }

    fn user_times(&self, idx: usize) -> &[Timestamp] {
        &self.user_times[self.user_offsets[idx]..self.user_offsets[idx + 1]]
    }

    pub(crate) fn item_degree_at_idx(&self, idx: usize, t: Timestamp) -> usize {
        self.item_collections(idx).partition_point(|c| c.timestamp <= t)
    }

    pub(crate) fn user_degree_at_idx(&self, idx: usize, t: Timestamp) -> usize {
        self.user_times(idx).partition_point(|&ts| ts <= t)
    }

    pub(crate) fn user_increase_idx(&self, idx: usize, t: Timestamp, t_p: Timestamp) -> usize {
        let times = self.user_times(idx);
        times.partition_point(|&ts| ts <= t) - times.partition_point(|&ts| ts <= t.saturating_sub(t_p))
    }

    pub(crate) fn item_increase_idx(&self, idx: usize, t: Timestamp, t_p: Timestamp) -> usize {
        self.window_collections(idx, t, t_p).len()
    }

    /// The item's collections with timestamp in `(t - t_p, t]`.
    pub(crate) fn window_collections(&self, idx: usize, t: Timestamp, t_p: Timestamp) -> &[Collection] {
        let all = self.item_collections(idx);
        let lo = all.partition_point(|c| c.timestamp <= t.saturating_sub(t_p));
        let hi = all.partition_point(|c| c.timestamp <= t);
        &all[lo..hi.max(lo)]
    }
}

pub(crate) fn check_window(t_p: Timestamp) -> Result<()> {
    if t_p <= 0 {
        return Err(Error::param(format!("window length must be positive, got {t_p}")));
    }
    Ok(())
}
