//! Popularity trend prediction on temporal bipartite user–item networks.
//!
//! Build a [`TemporalBipartiteGraph`] from collection events, score items at a
//! test date with one of the [`predictors`], and measure ranking quality over
//! future windows with [`evaluation`]. [`synthgen`] produces synthetic
//! networks with controllable preferential attachment and interest decay, and
//! [`experiment`] runs config-driven parameter sweeps that write CSV reports.

pub mod centrality;
pub mod error;
pub mod evaluation;
pub mod event_store;
pub mod experiment;
pub mod ingestion;
pub mod predictors;
pub mod synthgen;

pub use centrality::{Centrality, InfluenceVector, SocialGraph};
pub use error::{Error, Result};
pub use evaluation::{EvalConfig, EvaluationReport};
pub use event_store::{Event, ItemId, TemporalBipartiteGraph, TimeWindow, Timestamp, UserId, T_INFINITY};
pub use predictors::{Predictor, PredictorKind, PredictorSpec, ScoredRanking, UserInfluence};
