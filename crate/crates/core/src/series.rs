//! Fixed-width window aggregation of signed-volume series and the length
//! filter that decides which investors are eligible for correlation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order_model::{InvestorId, SignedVolumeSeries};

pub const DEFAULT_WINDOW_SECONDS: u32 = 60;
pub const DEFAULT_MIN_LENGTH: usize = 15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregationConfig {
    /// Window width in seconds.
    pub window_seconds: u32,
    /// Minimum number of non-zero windows for a series to be eligible.
    pub min_length: usize,
}

impl Default for AggregationConfig {
    fn default() -> Self {
        AggregationConfig {
            window_seconds: DEFAULT_WINDOW_SECONDS,
            min_length: DEFAULT_MIN_LENGTH,
        }
    }
}

impl AggregationConfig {
    pub fn new(window_seconds: u32, min_length: usize) -> Result<Self> {
        let config = AggregationConfig {
            window_seconds,
            min_length,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.window_seconds == 0 {
            return Err(Error::InvalidParameter("window_seconds must be at least 1".into()));
        }
        if self.min_length == 0 {
            return Err(Error::InvalidParameter("min_length must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowPoint {
    /// Window index counted from the session anchor (`t = 0` is window 0).
    pub window: i64,
    /// Summed signed volume inside the window; never zero.
    pub value: i64,
}

/// Per-investor window sums with zero windows removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AggregatedSeries {
    pub investor_id: InvestorId,
    pub points: Vec<WindowPoint>,
}

impl AggregatedSeries {
    /// Build from `(window, value)` pairs. Pairs are sorted and merged,
    /// zero sums dropped.
    pub fn from_pairs(investor_id: impl Into<InvestorId>, pairs: impl IntoIterator<Item = (i64, i64)>) -> Self {
        let mut sums: BTreeMap<i64, i64> = BTreeMap::new();
        for (w, v) in pairs {
            *sums.entry(w).or_default() += v;
        }
        AggregatedSeries {
            investor_id: investor_id.into(),
            points: sums
                .into_iter()
                .filter(|&(_, v)| v != 0)
                .map(|(window, value)| WindowPoint { window, value })
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn pairs(&self) -> Vec<(i64, i64)> {
        self.points.iter().map(|p| (p.window, p.value)).collect()
    }

    pub fn total(&self) -> i64 {
        self.points.iter().map(|p| p.value).sum()
    }
}

/// Sum signed volumes per window `floor(t / window_seconds)`, dropping
/// windows whose sum cancels to zero.
pub fn aggregate(series: &SignedVolumeSeries, config: &AggregationConfig) -> AggregatedSeries {
    let width = i64::from(config.window_seconds.max(1));
    let mut points: Vec<WindowPoint> = Vec::new();
    let mut current: Option<WindowPoint> = None;

    // Events are time-ordered, so windows arrive in non-decreasing order.
    for event in &series.events {
        let window = event.timestamp.div_euclid(width);
        match current.as_mut() {
            Some(p) if p.window == window => p.value += event.signed_volume,
            _ => {
                if let Some(done) = current.take() {
                    if done.value != 0 {
                        points.push(done);
                    }
                }
                current = Some(WindowPoint {
                    window,
                    value: event.signed_volume,
                });
            }
        }
    }
    if let Some(done) = current {
        if done.value != 0 {
            points.push(done);
        }
    }
    debug_assert!(points.windows(2).all(|w| w[0].window < w[1].window));

    AggregatedSeries {
        investor_id: series.investor_id.clone(),
        points,
    }
}

pub fn aggregate_all<'a>(
    series: impl IntoIterator<Item = &'a SignedVolumeSeries>,
    config: &AggregationConfig,
) -> BTreeMap<InvestorId, AggregatedSeries> {
    series
        .into_iter()
        .map(|s| (s.investor_id.clone(), aggregate(s, config)))
        .collect()
}

/// Keep the series with at least `min_length` points.
pub fn filter_eligible(
    all: &BTreeMap<InvestorId, AggregatedSeries>,
    config: &AggregationConfig,
) -> BTreeMap<InvestorId, AggregatedSeries> {
    all.iter()
        .filter(|(_, s)| s.len() >= config.min_length)
        .map(|(id, s)| (id.clone(), s.clone()))
        .collect()
}

/// Empirical CDF `F(L) = P(length < L)` over series lengths.
///
/// One point per integer `L` from the shortest length up to one past the
/// longest, so the step function is fully described (it is 0 below and 1
/// above that range).
pub fn length_cdf<'a>(all: impl IntoIterator<Item = &'a AggregatedSeries>) -> Vec<(usize, f64)> {
    let mut lengths: Vec<usize> = all.into_iter().map(AggregatedSeries::len).collect();
    if lengths.is_empty() {
        return Vec::new();
    }
    lengths.sort_unstable();
    let n = lengths.len() as f64;
    let (lo, hi) = (lengths[0], lengths[lengths.len() - 1]);
    (lo..=hi + 1)
        .map(|l| {
            let below = lengths.partition_point(|&x| x < l);
            (l, below as f64 / n)
        })
        .collect()
}
