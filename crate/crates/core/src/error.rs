use std::path::PathBuf;

use crate::event_store::{ItemId, Timestamp, UserId};

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("empty event stream")]
    EmptyEventStream,

    #[error("negative timestamp {timestamp} in record #{record} (user {user}, item {item})")]
    NegativeTimestamp {
        record: usize,
        user: UserId,
        item: ItemId,
        timestamp: Timestamp,
    },

    #[error("unknown item {0}")]
    UnknownItem(ItemId),

    #[error("unknown user {0}")]
    UnknownUser(UserId),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("truncated future window: t*={t_star} + T_F={t_f} exceeds last event at {data_end}")]
    TruncatedFutureWindow {
        t_star: Timestamp,
        t_f: Timestamp,
        data_end: Timestamp,
    },

    #[error("test date {t_star}: {source}")]
    AtTestDate {
        t_star: Timestamp,
        #[source]
        source: Box<Error>,
    },

    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("only {eligible} users are eligible for subsetting, {requested} requested")]
    NotEnoughUsers { eligible: usize, requested: usize },

    #[error("infeasible generator config: {0}")]
    Infeasible(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid configuration: {}", .0.join("; "))]
    Invalid(Vec<String>),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn parse(line: u64, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
