//! Daily thresholded correlation graphs, their multi-day integration, and
//! clique reporting.
//!
//! A daily graph keeps the pairs whose correlation is strictly above the
//! correlation threshold. Integration counts, per investor pair, the number
//! of days on which that edge occurs and drops pairs seen on fewer than the
//! occurrence threshold. Connected components of what remains are reported.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::correlation::CorrelationMatrix;
use crate::error::{Error, Result};
use crate::order_model::InvestorId;

pub const DEFAULT_CORR_THRESHOLD: f64 = 0.90;
pub const DEFAULT_OCCURRENCE_THRESHOLD: u32 = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedEdge {
    pub source: InvestorId,
    pub target: InvestorId,
    pub weight: f64,
}

/// One day's graph. Edges are stored with `source < target`, sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DailyGraph {
    pub day: String,
    pub nodes: Vec<InvestorId>,
    pub edges: Vec<WeightedEdge>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegratedEdge {
    pub source: InvestorId,
    pub target: InvestorId,
    /// Number of daily graphs containing this edge.
    pub occurrences: u32,
    /// Positions (0-based) of those days in the input sequence.
    pub days: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegratedGraph {
    pub day_count: usize,
    pub occurrence_threshold: u32,
    /// Endpoints of the retained edges.
    pub nodes: Vec<InvestorId>,
    pub edges: Vec<IntegratedEdge>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueEdge {
    pub source: InvestorId,
    pub target: InvestorId,
    pub occurrence: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Clique {
    pub members: Vec<InvestorId>,
    pub edges: Vec<CliqueEdge>,
    pub min_occurrence: u32,
    pub mean_occurrence: f64,
    /// Distinct days on which at least one of the clique's edges occurred.
    pub days_observed: usize,
    /// Whether every member pair is joined by a retained edge.
    pub complete: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CliqueReport {
    pub cliques: Vec<Clique>,
}

pub fn validate_corr_threshold(delta_w: f64) -> Result<()> {
    if delta_w > 0.0 && delta_w < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "correlation threshold must lie in (0, 1), got {delta_w}"
        )))
    }
}

pub fn validate_occurrence_threshold(delta_f: u32) -> Result<()> {
    if delta_f >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(
            "occurrence threshold must be at least 1".into(),
        ))
    }
}

/// Keep matrix pairs with correlation strictly above `delta_w`.
pub fn build_daily_graph(matrix: &CorrelationMatrix, delta_w: f64, day: impl Into<String>) -> Result<DailyGraph> {
    validate_corr_threshold(delta_w)?;
    let ids = matrix.ids();
    let mut edges = Vec::new();
    for i in 0..ids.len() {
        let row = matrix.row(i);
        for j in i + 1..ids.len() {
            if row[j] > delta_w {
                let (source, target) = ordered(&ids[i], &ids[j]);
                edges.push(WeightedEdge {
                    source: source.clone(),
                    target: target.clone(),
                    weight: row[j],
                });
            }
        }
    }
    edges.sort_by(|a, b| (&a.source, &a.target).cmp(&(&b.source, &b.target)));
    let mut nodes = ids.to_vec();
    nodes.sort();
    Ok(DailyGraph {
        day: day.into(),
        nodes,
        edges,
    })
}

fn ordered<'a>(a: &'a InvestorId, b: &'a InvestorId) -> (&'a InvestorId, &'a InvestorId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// Components with at least two members, each sorted ascending and the list
/// ordered by smallest member.
fn components_of<'a>(
    nodes: impl IntoIterator<Item = &'a InvestorId>,
    edges: impl IntoIterator<Item = (&'a InvestorId, &'a InvestorId)>,
) -> Vec<Vec<InvestorId>> {
    let mut index: BTreeMap<&InvestorId, usize> = BTreeMap::new();
    for id in nodes {
        let next = index.len();
        index.entry(id).or_insert(next);
    }
    // Endpoints missing from the node list still belong to the graph.
    let edges: Vec<(&InvestorId, &InvestorId)> = edges.into_iter().collect();
    for &(a, b) in &edges {
        for id in [a, b] {
            let next = index.len();
            index.entry(id).or_insert(next);
        }
    }
    let mut sets = DisjointSets::new(index.len());
    for &(a, b) in &edges {
        if a != b {
            sets.union(index[a], index[b]);
        }
    }
    let mut groups: BTreeMap<usize, Vec<InvestorId>> = BTreeMap::new();
    for (&id, &i) in &index {
        groups.entry(sets.find(i)).or_default().push(id.clone());
    }
    let mut out: Vec<Vec<InvestorId>> = groups
        .into_values()
        .filter(|g| g.len() >= 2)
        .map(|mut g| {
            g.sort();
            g
        })
        .collect();
    out.sort();
    out
}

/// Connected components of size ≥ 2; isolated nodes are left out.
pub fn connected_components(graph: &DailyGraph) -> Vec<Vec<InvestorId>> {
    components_of(&graph.nodes, graph.edges.iter().map(|e| (&e.source, &e.target)))
}

/// Count the days on which each pair is an edge and keep pairs seen on at
/// least `delta_f` days.
pub fn integrate(daily: &[DailyGraph], delta_f: u32) -> Result<IntegratedGraph> {
    validate_occurrence_threshold(delta_f)?;
    if daily.is_empty() {
        return Err(Error::InvalidParameter("need at least one daily graph".into()));
    }
    let mut seen: BTreeMap<(InvestorId, InvestorId), BTreeSet<usize>> = BTreeMap::new();
    for (day, graph) in daily.iter().enumerate() {
        for e in &graph.edges {
            let (a, b) = ordered(&e.source, &e.target);
            if a != b {
                seen.entry((a.clone(), b.clone())).or_default().insert(day);
            }
        }
    }
    let edges: Vec<IntegratedEdge> = seen
        .into_iter()
        .filter(|(_, days)| days.len() as u32 >= delta_f)
        .map(|((source, target), days)| IntegratedEdge {
            source,
            target,
            occurrences: days.len() as u32,
            days: days.into_iter().collect(),
        })
        .collect();
    let nodes: BTreeSet<InvestorId> = edges
        .iter()
        .flat_map(|e| [e.source.clone(), e.target.clone()])
        .collect();
    Ok(IntegratedGraph {
        day_count: daily.len(),
        occurrence_threshold: delta_f,
        nodes: nodes.into_iter().collect(),
        edges,
    })
}

/// Connected subgraphs of the pruned integrated graph, with edge statistics.
pub fn cliques_of(graph: &IntegratedGraph) -> CliqueReport {
    let components = components_of(&graph.nodes, graph.edges.iter().map(|e| (&e.source, &e.target)));
    let cliques = components
        .into_iter()
        .map(|members| {
            let set: BTreeSet<&InvestorId> = members.iter().collect();
            let own: Vec<&IntegratedEdge> = graph.edges.iter().filter(|e| set.contains(&e.source)).collect();
            let edges: Vec<CliqueEdge> = own
                .iter()
                .map(|e| CliqueEdge {
                    source: e.source.clone(),
                    target: e.target.clone(),
                    occurrence: e.occurrences,
                })
                .collect();
            let days: BTreeSet<usize> = own.iter().flat_map(|e| e.days.iter().copied()).collect();
            let k = members.len();
            Clique {
                min_occurrence: edges.iter().map(|e| e.occurrence).min().unwrap_or(0),
                mean_occurrence: edges.iter().map(|e| f64::from(e.occurrence)).sum::<f64>() / edges.len() as f64,
                days_observed: days.len(),
                complete: edges.len() == k * (k - 1) / 2,
                members,
                edges,
            }
        })
        .collect();
    CliqueReport { cliques }
}

pub fn detect_cliques(daily: &[DailyGraph], delta_f: u32) -> Result<CliqueReport> {
    Ok(cliques_of(&integrate(daily, delta_f)?))
}

fn dot_id(id: &InvestorId) -> String {
    format!("\"{}\"", id.as_str().replace('\\', "\\\\").replace('"', "\\\""))
}

impl DailyGraph {
    /// Graphviz rendering; edge labels carry the correlation to 3 decimals.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "graph {} {{",
            dot_id(&InvestorId::new(format!("day {}", self.day)))
        );
        for node in &self.nodes {
            let _ = writeln!(out, "  {} [label={}];", dot_id(node), dot_id(node));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  {} -- {} [label=\"{:.3}\", weight={:.3}];",
                dot_id(&e.source),
                dot_id(&e.target),
                e.weight,
                e.weight
            );
        }
        out.push_str("}\n");
        out
    }
}

impl IntegratedGraph {
    /// Graphviz rendering; edge labels carry the occurrence count.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("graph \"integrated\" {\n");
        for node in &self.nodes {
            let _ = writeln!(out, "  {} [label={}];", dot_id(node), dot_id(node));
        }
        for e in &self.edges {
            let _ = writeln!(
                out,
                "  {} -- {} [label=\"{}\", weight={}];",
                dot_id(&e.source),
                dot_id(&e.target),
                e.occurrences,
                e.occurrences
            );
        }
        out.push_str("}\n");
        out
    }
}
