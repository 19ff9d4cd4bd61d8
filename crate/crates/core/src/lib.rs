//! Detection of suspect collusive trading cliques from limit-order records.
//!
//! The pipeline runs in two stages. Each trading day is reduced to a
//! correlation matrix over the investors' windowed signed-order-volume
//! series ([`order_model`] → [`series`] → [`correlation`]). The daily
//! matrices are then thresholded into graphs whose recurring edges are
//! merged into an integrated graph; its connected components are the
//! reported cliques ([`graph_detect`]).
//!
//! [`synth_eval`] generates synthetic markets with planted cliques and scores
//! detection output against them. [`pipeline`] wires everything together for
//! the command-line tool.

pub mod correlation;
pub mod error;
pub mod graph_detect;
pub mod order_model;
pub mod pipeline;
pub mod series;
pub mod synth_eval;

pub use correlation::{correlate, correlation_matrix, unify, CorrelationMatrix, UnifiedPair};
pub use error::{Error, Result};
pub use graph_detect::{
    build_daily_graph, connected_components, detect_cliques, integrate, Clique, CliqueReport, DailyGraph,
    IntegratedGraph,
};
pub use order_model::{
    parse_orders, to_signed_series, InvestorId, OrderFileFormat, OrderRecord, Side, SignedVolumeEvent,
    SignedVolumeSeries,
};
pub use series::{aggregate, filter_eligible, length_cdf, AggregatedSeries, AggregationConfig};
