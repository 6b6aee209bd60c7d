//! Canonical dataset files.
//!
//! Ratings: header `user,item,rating,timestamp`, ratings on the half-star
//! scale 0.5..=5.0. Votes: header `user,item,timestamp`. Ids are unsigned
//! integers and timestamps are integer seconds.
//!
//! Raw distributions map onto these easily: Movielens `ratings.dat`
//! (`user::movie::rating::ts`) needs only the separator rewritten; the
//! Netflix-prize per-movie files (`movie:` header line followed by
//! `user,rating,YYYY-MM-DD`) need the movie id carried down and the date
//! converted to seconds at midnight UTC.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::event_store::{Event, ItemId, Timestamp, UserId};

pub const DEFAULT_THRESHOLD: f64 = 3.0;
pub const DEFAULT_MIN_USER_DEGREE: usize = 20;

const RATINGS_HEADER: [&str; 4] = ["user", "item", "rating", "timestamp"];
const VOTES_HEADER: [&str; 3] = ["user", "item", "timestamp"];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RatingRecord {
    pub user: UserId,
    pub item: ItemId,
    pub rating: f64,
    pub timestamp: Timestamp,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DatasetFormat {
    Ratings,
    Votes,
}

impl FromStr for DatasetFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ratings" | "ratings_csv" => Ok(DatasetFormat::Ratings),
            "votes" | "votes_csv" => Ok(DatasetFormat::Votes),
            other => Err(Error::param(format!("unknown dataset format {other:?}"))),
        }
    }
}

/// What counts towards the minimum user degree when subsetting.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Eligibility {
    /// Distinct items rated at or above the threshold.
    #[default]
    Collected,
    /// Distinct items rated at all.
    AllRatings,
}

impl FromStr for Eligibility {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "collected" => Ok(Eligibility::Collected),
            "all" | "all_ratings" => Ok(Eligibility::AllRatings),
            other => Err(Error::param(format!("unknown eligibility mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DatasetSpec {
    pub format: DatasetFormat,
    pub threshold: f64,
    pub subset_users: Option<usize>,
    pub min_user_degree: usize,
    pub rng_seed: u64,
    pub eligibility: Eligibility,
}

impl DatasetSpec {
    pub fn ratings() -> Self {
        DatasetSpec {
            format: DatasetFormat::Ratings,
            threshold: DEFAULT_THRESHOLD,
            subset_users: None,
            min_user_degree: DEFAULT_MIN_USER_DEGREE,
            rng_seed: 0,
            eligibility: Eligibility::Collected,
        }
    }

    pub fn votes() -> Self {
        DatasetSpec {
            format: DatasetFormat::Votes,
            ..Self::ratings()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.5..=5.0).contains(&self.threshold) {
            return Err(Error::param(format!(
                "threshold must lie in [0.5, 5], got {}",
                self.threshold
            )));
        }
        if self.format == DatasetFormat::Votes && self.subset_users.is_some() {
            return Err(Error::param("user subsetting applies only to ratings files"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatingsLoad {
    pub events: Vec<Event>,
    pub below_threshold: usize,
}

pub fn parse_ratings(reader: impl Read) -> Result<Vec<RatingRecord>> {
    let mut records = Vec::new();
    for_each_row(reader, &RATINGS_HEADER, |line, row| {
        let rating: f64 = field(line, row, 2, "rating")?;
        if !(0.5..=5.0).contains(&rating) || (rating * 2.0).fract() != 0.0 {
            return Err(Error::parse(
                line,
                format!("rating {rating} is off the 0.5..5 half-star scale"),
            ));
        }
        records.push(RatingRecord {
            user: UserId(field(line, row, 0, "user")?),
            item: ItemId(field(line, row, 1, "item")?),
            rating,
            timestamp: timestamp(line, row, 3)?,
        });
        Ok(())
    })?;
    Ok(records)
}

pub fn parse_votes(reader: impl Read) -> Result<Vec<Event>> {
    let mut events = Vec::new();
    for_each_row(reader, &VOTES_HEADER, |line, row| {
        events.push(Event {
            user: UserId(field(line, row, 0, "user")?),
            item: ItemId(field(line, row, 1, "item")?),
            timestamp: timestamp(line, row, 2)?,
        });
        Ok(())
    })?;
    Ok(events)
}

/// Records rated at or above `threshold` become events.
pub fn apply_threshold(records: &[RatingRecord], threshold: f64) -> RatingsLoad {
    let events: Vec<Event> = records
        .iter()
        .filter(|r| r.rating >= threshold)
        .map(|r| Event {
            user: r.user,
            item: r.item,
            timestamp: r.timestamp,
        })
        .collect();
    RatingsLoad {
        below_threshold: records.len() - events.len(),
        events,
    }
}

pub fn load_ratings(path: impl AsRef<Path>, spec: &DatasetSpec) -> Result<RatingsLoad> {
    spec.validate()?;
    let records = parse_ratings(open(path.as_ref())?)?;
    let mut load = apply_threshold(&records, spec.threshold);
    if let Some(u) = spec.subset_users {
        load.events = match spec.eligibility {
            Eligibility::Collected => subset_users(&load.events, u, spec.min_user_degree, spec.rng_seed)?,
            Eligibility::AllRatings => {
                let degrees = distinct_degrees(records.iter().map(|r| (r.user, r.item)));
                let chosen = choose_users(degrees, u, spec.min_user_degree, spec.rng_seed)?;
                retain_users(&load.events, &chosen)
            }
        };
    }
    log::info!(
        "{}: {} events kept, {} below threshold {}",
        path.as_ref().display(),
        load.events.len(),
        load.below_threshold,
        spec.threshold
    );
    Ok(load)
}

pub fn load_votes(path: impl AsRef<Path>) -> Result<Vec<Event>> {
    parse_votes(open(path.as_ref())?)
}

pub fn load_dataset(path: impl AsRef<Path>, spec: &DatasetSpec) -> Result<Vec<Event>> {
    match spec.format {
        DatasetFormat::Ratings => Ok(load_ratings(path, spec)?.events),
        DatasetFormat::Votes => {
            spec.validate()?;
            load_votes(path)
        }
    }
}

/// Uniformly samples `u` users among those with at least `min_degree`
/// distinct items and keeps exactly their events, sorted by
/// `(timestamp, user, item)`.
///
/// Sampling uses ChaCha8 seeded with `seed` over the eligible users in
/// ascending id order, so the choice is reproducible across platforms.
pub fn subset_users(events: &[Event], u: usize, min_degree: usize, seed: u64) -> Result<Vec<Event>> {
    let degrees = distinct_degrees(events.iter().map(|e| (e.user, e.item)));
    let chosen = choose_users(degrees, u, min_degree, seed)?;
    Ok(retain_users(events, &chosen))
}

fn distinct_degrees(pairs: impl Iterator<Item = (UserId, ItemId)>) -> BTreeMap<UserId, usize> {
    let pairs: BTreeSet<(UserId, ItemId)> = pairs.collect();
    let mut degrees = BTreeMap::new();
    for (user, _) in pairs {
        *degrees.entry(user).or_insert(0) += 1;
    }
    degrees
}

fn choose_users(degrees: BTreeMap<UserId, usize>, u: usize, min_degree: usize, seed: u64) -> Result<BTreeSet<UserId>> {
    if u == 0 {
        return Err(Error::param("subset size must be at least 1"));
    }
    let eligible: Vec<UserId> = degrees
        .into_iter()
        .filter(|&(_, d)| d >= min_degree)
        .map(|(user, _)| user)
        .collect();
    if eligible.len() < u {
        return Err(Error::NotEnoughUsers {
            eligible: eligible.len(),
            requested: u,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(rand::seq::index::sample(&mut rng, eligible.len(), u)
        .into_iter()
        .map(|k| eligible[k])
        .collect())
}

fn retain_users(events: &[Event], users: &BTreeSet<UserId>) -> Vec<Event> {
    let mut kept: Vec<Event> = events.iter().filter(|e| users.contains(&e.user)).copied().collect();
    kept.sort_unstable_by_key(|e| (e.timestamp, e.user, e.item));
    kept
}

pub fn write_votes(events: &[Event], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(VOTES_HEADER)?;
    for e in events {
        w.write_record([e.user.to_string(), e.item.to_string(), e.timestamp.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("<votes>", e))?;
    Ok(())
}

pub fn write_ratings(records: &[RatingRecord], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(RATINGS_HEADER)?;
    for r in records {
        w.write_record([
            r.user.to_string(),
            r.item.to_string(),
            r.rating.to_string(),
            r.timestamp.to_string(),
        ])?;
    }
    w.flush().map_err(|e| Error::io("<ratings>", e))?;
    Ok(())
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

fn for_each_row<R: Read>(
    reader: R,
    header: &[&str],
    mut f: impl FnMut(u64, &csv::StringRecord) -> Result<()>,
) -> Result<()> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let found = rdr.headers().map_err(|e| csv_error(e, 1))?.clone();
    if found.len() != header.len() || found.iter().zip(header).any(|(a, b)| a.trim() != *b) {
        return Err(Error::parse(
            1,
            format!(
                "expected header {:?}, got {:?}",
                header.join(","),
                found.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }
    let mut row = csv::StringRecord::new();
    loop {
        let line = rdr.position().line();
        match rdr.read_record(&mut row) {
            Ok(true) => {}
            Ok(false) => return Ok(()),
            Err(e) => return Err(csv_error(e, line)),
        }
        let line = row.position().map_or(line, |p| p.line());
        f(line, &row)?;
    }
}

fn csv_error(e: csv::Error, fallback_line: u64) -> Error {
    let line = e.position().map_or(fallback_line, |p| p.line());
    Error::parse(line, e.to_string())
}

fn field<T: FromStr>(line: u64, row: &csv::StringRecord, idx: usize, name: &str) -> Result<T> {
    let raw = row.get(idx).unwrap_or_default().trim();
    raw.parse()
        .map_err(|_| Error::parse(line, format!("invalid {name} {raw:?}")))
}

fn timestamp(line: u64, row: &csv::StringRecord, idx: usize) -> Result<Timestamp> {
    let ts: Timestamp = field(line, row, idx, "timestamp")?;
    if ts < 0 {
        return Err(Error::parse(line, format!("negative timestamp {ts}")));
    }
    Ok(ts)
}
