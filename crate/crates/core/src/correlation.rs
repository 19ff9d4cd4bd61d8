//! Pairwise correlation of aggregated series over their unified window set.
//!
//! Two series are compared on the union of their window indices, each
//! zero-filled where it has no point, and the Pearson coefficient is taken
//! with population moments over that union.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::order_model::InvestorId;
use crate::series::AggregatedSeries;

/// Two series re-expressed on the sorted union of their window indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UnifiedPair {
    pub indices: Vec<i64>,
    pub u_a: Vec<i64>,
    pub u_b: Vec<i64>,
}

impl UnifiedPair {
    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }
}

pub fn unify(a: &AggregatedSeries, b: &AggregatedSeries) -> Result<UnifiedPair> {
    for s in [a, b] {
        if s.is_empty() {
            return Err(Error::EmptySeries(s.investor_id.to_string()));
        }
    }
    let (pa, pb) = (&a.points, &b.points);
    let cap = pa.len() + pb.len();
    let mut out = UnifiedPair {
        indices: Vec::with_capacity(cap),
        u_a: Vec::with_capacity(cap),
        u_b: Vec::with_capacity(cap),
    };
    let (mut i, mut j) = (0, 0);
    while i < pa.len() || j < pb.len() {
        let wa = pa.get(i).map(|p| p.window);
        let wb = pb.get(j).map(|p| p.window);
        let (w, va, vb) = match (wa, wb) {
            (Some(x), Some(y)) if x == y => {
                i += 1;
                j += 1;
                (x, pa[i - 1].value, pb[j - 1].value)
            }
            (Some(x), Some(y)) if x < y => {
                i += 1;
                (x, pa[i - 1].value, 0)
            }
            (Some(x), None) => {
                i += 1;
                (x, pa[i - 1].value, 0)
            }
            (_, Some(y)) => {
                j += 1;
                (y, 0, pb[j - 1].value)
            }
            (None, None) => unreachable!(),
        };
        out.indices.push(w);
        out.u_a.push(va);
        out.u_b.push(vb);
    }
    Ok(out)
}

/// Pearson correlation of a unified pair with population moments.
///
/// `None` when either side is constant (zero variance), which includes every
/// pair with fewer than two points.
pub fn correlate(pair: &UnifiedPair) -> Option<f64> {
    let n = pair.len();
    if n < 2 || is_constant(&pair.u_a) || is_constant(&pair.u_b) {
        return None;
    }
    let nf = n as f64;
    let mean_a = pair.u_a.iter().map(|&x| x as f64).sum::<f64>() / nf;
    let mean_b = pair.u_b.iter().map(|&x| x as f64).sum::<f64>() / nf;
    let (mut cov, mut var_a, mut var_b) = (0.0, 0.0, 0.0);
    for (&x, &y) in pair.u_a.iter().zip(&pair.u_b) {
        let dx = x as f64 - mean_a;
        let dy = y as f64 - mean_b;
        cov += dx * dy;
        var_a += dx * dx;
        var_b += dy * dy;
    }
    // The 1/n factors cancel.
    Some((cov / (var_a * var_b).sqrt()).clamp(-1.0, 1.0))
}

fn is_constant(v: &[i64]) -> bool {
    v.windows(2).all(|w| w[0] == w[1])
}

/// Symmetric matrix of pairwise correlations, ids in ascending order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    ids: Vec<InvestorId>,
    entries: Vec<f64>,
}

impl CorrelationMatrix {
    /// Build from full rows. Rows must form a square matrix matching `ids`.
    pub fn from_rows(ids: Vec<InvestorId>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = ids.len();
        if rows.len() != n || rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidParameter(format!(
                "matrix rows do not form a {n}x{n} square"
            )));
        }
        Ok(CorrelationMatrix {
            ids,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn ids(&self) -> &[InvestorId] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.ids.len() + j]
    }

    pub fn index_of(&self, id: &InvestorId) -> Option<usize> {
        self.ids
            .binary_search(id)
            .ok()
            .or_else(|| self.ids.iter().position(|x| x == id))
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.ids.len();
        &self.entries[i * n..(i + 1) * n]
    }

    /// CSV dump: header row and first column hold investor ids, entries
    /// use 6 decimal places.
    pub fn write_csv<W: Write>(&self, sink: W) -> Result<()> {
        let mut writer = csv::Writer::from_writer(sink);
        let mut header = vec![String::new()];
        header.extend(self.ids.iter().map(ToString::to_string));
        writer.write_record(&header)?;
        for (i, id) in self.ids.iter().enumerate() {
            let mut record = vec![id.to_string()];
            record.extend(self.row(i).iter().map(|r| format!("{r:.6}")));
            writer.write_record(&record)?;
        }
        writer.flush().map_err(|e| Error::io("<matrix sink>", e))?;
        Ok(())
    }
}

/// Moments that do not depend on the partner series. Zero fill adds nothing
/// to sums or sums of squares, so only the overlap term is pair-specific.
struct SeriesMoments<'a> {
    series: &'a AggregatedSeries,
    sum: i128,
    sum_sq: i128,
}

impl<'a> SeriesMoments<'a> {
    fn new(series: &'a AggregatedSeries) -> Self {
        let (sum, sum_sq) = series.points.iter().fold((0i128, 0i128), |(s, q), p| {
            let v = i128::from(p.value);
            (s + v, q + v * v)
        });
        SeriesMoments { series, sum, sum_sq }
    }
}

fn correlate_moments(a: &SeriesMoments<'_>, b: &SeriesMoments<'_>) -> Option<f64> {
    let (pa, pb) = (&a.series.points, &b.series.points);
    let (mut i, mut j) = (0, 0);
    let mut common = 0usize;
    let mut cross = 0i128;
    while i < pa.len() && j < pb.len() {
        match pa[i].window.cmp(&pb[j].window) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                cross += i128::from(pa[i].value) * i128::from(pb[j].value);
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    let n = (pa.len() + pb.len() - common) as i128;
    // n^2 times the population covariance / variances, exact in integers.
    let cov = n * cross - a.sum * b.sum;
    let var_a = n * a.sum_sq - a.sum * a.sum;
    let var_b = n * b.sum_sq - b.sum * b.sum;
    if n < 2 || var_a <= 0 || var_b <= 0 {
        return None;
    }
    let r = cov as f64 / ((var_a as f64).sqrt() * (var_b as f64).sqrt());
    Some(r.clamp(-1.0, 1.0))
}

/// Correlation matrix over eligible series, in ascending investor order.
///
/// Degenerate pairs (a constant unified series) are stored as 0 and the
/// diagonal is 1. Pairs are spread over the rayon pool; every entry depends
/// only on its own pair, so the result is identical to a serial run.
pub fn correlation_matrix(eligible: &BTreeMap<InvestorId, AggregatedSeries>) -> Result<CorrelationMatrix> {
    let n = eligible.len();
    if n < 2 {
        return Err(Error::TooFewInvestors(n));
    }
    if let Some(empty) = eligible.values().find(|s| s.is_empty()) {
        return Err(Error::EmptySeries(empty.investor_id.to_string()));
    }
    let ids: Vec<InvestorId> = eligible.keys().cloned().collect();
    let moments: Vec<SeriesMoments<'_>> = eligible.values().map(SeriesMoments::new).collect();

    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| correlate_moments(&moments[i], &moments[j]).unwrap_or(0.0))
                .collect()
        })
        .collect();

    let mut entries = vec![0.0; n * n];
    for (i, row) in upper.iter().enumerate() {
        entries[i * n + i] = 1.0;
        for (k, &r) in row.iter().enumerate() {
            let j = i + 1 + k;
            entries[i * n + j] = r;
            entries[j * n + i] = r;
        }
    }
    Ok(CorrelationMatrix { ids, entries })
}
