//! End-to-end runs over day files, parameter sweeps, and the on-disk output
//! formats used by the command-line tool.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, Write};
use std::path::{Path, PathBuf};

use log::{info, warn};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::correlation::{correlate, correlation_matrix, unify, CorrelationMatrix};
use crate::error::{Error, Result};
use crate::graph_detect::{
    build_daily_graph, cliques_of, connected_components, integrate, validate_corr_threshold,
    validate_occurrence_threshold, CliqueReport, DailyGraph, IntegratedGraph, DEFAULT_CORR_THRESHOLD,
    DEFAULT_OCCURRENCE_THRESHOLD,
};
use crate::order_model::{format_clock, parse_orders, to_signed_series, InvestorId, OrderFileFormat, OrderRecord};
use crate::series::{aggregate, aggregate_all, filter_eligible, length_cdf, AggregatedSeries, AggregationConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionParams {
    pub aggregation: AggregationConfig,
    pub corr_threshold: f64,
    pub occurrence_threshold: u32,
}

impl Default for DetectionParams {
    fn default() -> Self {
        DetectionParams {
            aggregation: AggregationConfig::default(),
            corr_threshold: DEFAULT_CORR_THRESHOLD,
            occurrence_threshold: DEFAULT_OCCURRENCE_THRESHOLD,
        }
    }
}

impl DetectionParams {
    pub fn validate(&self) -> Result<()> {
        self.aggregation.validate()?;
        validate_corr_threshold(self.corr_threshold)?;
        validate_occurrence_threshold(self.occurrence_threshold)
    }
}

/// Which artifacts a run writes to its output directory.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Emit {
    /// `<day>.matrix.csv`
    pub matrix: bool,
    /// `<day>.dot`
    pub daily_dot: bool,
    /// `integrated.dot`
    pub integrated_dot: bool,
    /// `report.json`
    pub report: bool,
    /// `length_cdf.csv`, pooled over all days
    pub stats: bool,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// One order file per trading day, in day order.
    pub inputs: Vec<PathBuf>,
    pub params: DetectionParams,
    pub format: OrderFileFormat,
    pub out_dir: Option<PathBuf>,
    pub emit: Emit,
}

/// Everything computed for one trading day.
#[derive(Debug, Clone)]
pub struct DayAnalysis {
    pub label: String,
    pub order_count: usize,
    pub investor_count: usize,
    /// Length of every investor's aggregated series, eligible or not.
    pub series_lengths: Vec<usize>,
    /// `None` when fewer than two investors were eligible.
    pub matrix: Option<CorrelationMatrix>,
    pub graph: DailyGraph,
}

impl DayAnalysis {
    pub fn eligible_count(&self) -> usize {
        self.matrix.as_ref().map_or(0, CorrelationMatrix::len)
    }
}

/// Orders → signed series → windows → eligibility filter → matrix → graph.
pub fn analyze_orders(label: &str, orders: &[OrderRecord], params: &DetectionParams) -> Result<DayAnalysis> {
    params.validate()?;
    let signed = to_signed_series(orders);
    let aggregated = aggregate_all(signed.values(), &params.aggregation);
    let eligible = filter_eligible(&aggregated, &params.aggregation);
    let series_lengths = aggregated.values().map(AggregatedSeries::len).collect();

    let (matrix, graph) = if eligible.len() >= 2 {
        let matrix = correlation_matrix(&eligible)?;
        let graph = build_daily_graph(&matrix, params.corr_threshold, label)?;
        (Some(matrix), graph)
    } else {
        warn!(
            "{label}: only {} eligible investors, no correlation graph",
            eligible.len()
        );
        let graph = DailyGraph {
            day: label.to_owned(),
            nodes: eligible.keys().cloned().collect(),
            edges: Vec::new(),
        };
        (None, graph)
    };
    info!(
        "{label}: {} orders, {} investors, {} eligible, {} edges",
        orders.len(),
        signed.len(),
        eligible.len(),
        graph.edges.len()
    );
    Ok(DayAnalysis {
        label: label.to_owned(),
        order_count: orders.len(),
        investor_count: signed.len(),
        series_lengths,
        matrix,
        graph,
    })
}

pub fn read_orders(path: &Path, format: &OrderFileFormat) -> Result<Vec<OrderRecord>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_orders(BufReader::new(file), format).map_err(|e| match e {
        Error::MalformedRow { row, reason } => Error::MalformedRow {
            row,
            reason: format!("{}: {reason}", path.display()),
        },
        other => other,
    })
}

/// Day labels from file stems, made unique by suffixing repeats.
pub fn day_labels(inputs: &[PathBuf]) -> Vec<String> {
    let mut seen: BTreeMap<String, usize> = BTreeMap::new();
    inputs
        .iter()
        .map(|p| {
            let stem = p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "day".to_owned());
            let n = seen.entry(stem.clone()).or_insert(0);
            *n += 1;
            if *n == 1 {
                stem
            } else {
                format!("{stem}-{n}")
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub days: Vec<DayAnalysis>,
    pub integrated: IntegratedGraph,
    pub report: CliqueReport,
    pub written: Vec<PathBuf>,
}

/// Run detection over all input days and write the requested artifacts.
pub fn run_pipeline(config: &RunConfig) -> Result<PipelineOutput> {
    config.params.validate()?;
    if config.inputs.is_empty() {
        return Err(Error::InvalidParameter("at least one input file is required".into()));
    }
    let labels = day_labels(&config.inputs);
    let days: Vec<DayAnalysis> = config
        .inputs
        .par_iter()
        .zip(labels.par_iter())
        .map(|(path, label)| {
            let orders = read_orders(path, &config.format)?;
            analyze_orders(label, &orders, &config.params)
        })
        .collect::<Result<_>>()?;

    let graphs: Vec<DailyGraph> = days.iter().map(|d| d.graph.clone()).collect();
    let integrated = integrate(&graphs, config.params.occurrence_threshold)?;
    let report = cliques_of(&integrated);

    let written = match &config.out_dir {
        Some(dir) => write_artifacts(dir, config, &days, &integrated, &report)?,
        None => Vec::new(),
    };
    Ok(PipelineOutput {
        days,
        integrated,
        report,
        written,
    })
}

fn write_file(dir: &Path, name: &str, bytes: &[u8], written: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok(())
}

fn write_artifacts(
    dir: &Path,
    config: &RunConfig,
    days: &[DayAnalysis],
    integrated: &IntegratedGraph,
    report: &CliqueReport,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    for day in days {
        if config.emit.matrix {
            if let Some(m) = &day.matrix {
                let mut buf = Vec::new();
                m.write_csv(&mut buf)?;
                write_file(dir, &format!("{}.matrix.csv", day.label), &buf, &mut written)?;
            }
        }
        if config.emit.daily_dot {
            write_file(
                dir,
                &format!("{}.dot", day.label),
                day.graph.to_dot().as_bytes(),
                &mut written,
            )?;
        }
    }
    if config.emit.integrated_dot {
        write_file(dir, "integrated.dot", integrated.to_dot().as_bytes(), &mut written)?;
    }
    if config.emit.stats {
        let cdf = length_cdf_from_lengths(days.iter().flat_map(|d| d.series_lengths.iter().copied()));
        let mut buf = Vec::new();
        write_cdf_csv(&mut buf, &cdf)?;
        write_file(dir, "length_cdf.csv", &buf, &mut written)?;
    }
    if config.emit.report {
        let labels: Vec<String> = days.iter().map(|d| d.label.clone()).collect();
        let json = report_json(&config.params, &config.format, &labels, report)?;
        write_file(dir, "report.json", json.as_bytes(), &mut written)?;
    }
    Ok(written)
}

/// Clique report as pretty JSON with sorted keys and a trailing newline.
pub fn report_json(
    params: &DetectionParams,
    format: &OrderFileFormat,
    days: &[String],
    report: &CliqueReport,
) -> Result<String> {
    let value: Value = json!({
        "parameters": {
            "window_seconds": params.aggregation.window_seconds,
            "min_length": params.aggregation.min_length,
            "corr_threshold": params.corr_threshold,
            "occurrence_threshold": params.occurrence_threshold,
            "anchor": format_clock(format.anchor),
        },
        "days": days,
        "cliques": serde_json::to_value(&report.cliques)?,
    });
    // serde_json's default map is ordered, so keys come out sorted.
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

/// Read a clique report written by [`report_json`].
pub fn parse_report_json(text: &str) -> Result<CliqueReport> {
    Ok(serde_json::from_str(text)?)
}

fn length_cdf_from_lengths(lengths: impl Iterator<Item = usize>) -> Vec<(usize, f64)> {
    let stand_ins: Vec<AggregatedSeries> = lengths
        .map(|n| AggregatedSeries::from_pairs("", (0..n as i64).map(|w| (w, 1))))
        .collect();
    length_cdf(&stand_ins)
}

/// Length CDF pooled over every investor of every given day.
pub fn length_stats(days: &[Vec<OrderRecord>], aggregation: &AggregationConfig) -> Vec<(usize, f64)> {
    let mut all = Vec::new();
    for orders in days {
        all.extend(aggregate_all(to_signed_series(orders).values(), aggregation).into_values());
    }
    length_cdf(&all)
}

pub fn write_cdf_csv<W: Write>(sink: W, cdf: &[(usize, f64)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["length", "cdf"])?;
    for (l, f) in cdf {
        w.write_record([l.to_string(), format!("{f:.6}")])?;
    }
    w.flush().map_err(|e| Error::io("<csv sink>", e))?;
    Ok(())
}

/// Correlation of two investors' unified series for each window width.
/// `None` where the pair is degenerate at that width.
pub fn sweep_window(
    orders: &[OrderRecord],
    a: &InvestorId,
    b: &InvestorId,
    sizes: &[u32],
) -> Result<Vec<(u32, Option<f64>)>> {
    if sizes.is_empty() {
        return Err(Error::InvalidParameter("no window sizes given".into()));
    }
    let signed = to_signed_series(orders);
    let sa = signed.get(a).ok_or_else(|| Error::UnknownInvestor(a.to_string()))?;
    let sb = signed.get(b).ok_or_else(|| Error::UnknownInvestor(b.to_string()))?;
    sizes
        .iter()
        .map(|&size| {
            let config = AggregationConfig::new(size, 1)?;
            let (va, vb) = (aggregate(sa, &config), aggregate(sb, &config));
            if va.is_empty() || vb.is_empty() {
                return Ok((size, None));
            }
            Ok((size, correlate(&unify(&va, &vb)?)))
        })
        .collect()
}

pub fn write_window_sweep_csv<W: Write>(sink: W, rows: &[(u32, Option<f64>)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["window_seconds", "correlation"])?;
    for (size, r) in rows {
        w.write_record([size.to_string(), r.map(|r| format!("{r:.6}")).unwrap_or_default()])?;
    }
    w.flush().map_err(|e| Error::io("<csv sink>", e))?;
    Ok(())
}

/// Number of connected components (size ≥ 2) of the daily graph at each
/// correlation threshold.
pub fn sweep_threshold(matrix: &CorrelationMatrix, thresholds: &[f64]) -> Result<Vec<(f64, usize)>> {
    if thresholds.is_empty() {
        return Err(Error::InvalidParameter("no thresholds given".into()));
    }
    thresholds
        .iter()
        .map(|&t| {
            let graph = build_daily_graph(matrix, t, "sweep")?;
            Ok((t, connected_components(&graph).len()))
        })
        .collect()
}

pub fn write_threshold_sweep_csv<W: Write>(sink: W, rows: &[(f64, usize)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(["threshold", "components"])?;
    for (t, n) in rows {
        w.write_record([t.to_string(), n.to_string()])?;
    }
    w.flush().map_err(|e| Error::io("<csv sink>", e))?;
    Ok(())
}
