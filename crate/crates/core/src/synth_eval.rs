//! Synthetic multi-day order markets with planted collusive cliques, and
//! pair-level scoring of detection output against the planted truth.
//!
//! The market has three kinds of participants:
//!
//! * noise traders place a handful of independent orders per day,
//! * day traders place many independent orders per day, enough for their
//!   series to pass the length filter,
//! * clique members mirror shared events: for each event one member leads
//!   with a random side and volume, and the others follow with the same side
//!   within `lag_seconds`, their volumes scaled by `1 + N(0, volume_jitter)`.
//!
//! Independent orders draw buy and sell with equal probability so their
//! signed volumes have zero mean. Generation is deterministic per seed: each
//! day uses its own ChaCha stream derived from `rng_seed`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use chrono::NaiveTime;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_detect::CliqueReport;
use crate::order_model::{seconds_since, write_orders, InvestorId, OrderRecord, Side};

const BASE_PRICE: i64 = 3200;
const MAX_VOLUME: u32 = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CliqueSpec {
    pub size: usize,
    /// Largest delay of a follower behind the leader.
    pub lag_seconds: u32,
    /// Relative standard deviation of follower volumes.
    pub volume_jitter: f64,
    /// Probability that a member takes part in a given clique event.
    pub participation: f64,
    pub events_per_day: usize,
}

impl CliqueSpec {
    pub fn new(size: usize) -> Self {
        CliqueSpec {
            size,
            lag_seconds: 10,
            volume_jitter: 0.1,
            participation: 1.0,
            events_per_day: 30,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Session {
    pub start: NaiveTime,
    pub end: NaiveTime,
}

impl Session {
    pub fn new(start: (u32, u32), end: (u32, u32)) -> Self {
        Session {
            start: NaiveTime::from_hms_opt(start.0, start.1, 0).expect("valid session start"),
            end: NaiveTime::from_hms_opt(end.0, end.1, 0).expect("valid session end"),
        }
    }
}

/// The four continuous trading sessions of a day on the exchange.
pub fn default_sessions() -> Vec<Session> {
    vec![
        Session::new((9, 0), (10, 15)),
        Session::new((10, 30), (11, 30)),
        Session::new((13, 30), (14, 10)),
        Session::new((14, 20), (15, 0)),
    ]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n_noise_traders: usize,
    /// Mean orders per day of a noise trader.
    pub noise_orders_mean: f64,
    pub n_day_traders: usize,
    /// Mean orders per day of a day trader.
    pub orders_per_day_mean: f64,
    pub cliques: Vec<CliqueSpec>,
    pub days: usize,
    pub sessions: Vec<Session>,
    /// Clock time written as second 0; must match the detector's anchor.
    pub anchor: NaiveTime,
    /// When set, cliques coordinate on a grid of this many seconds counted
    /// from the anchor: the leader fires early enough in a grid cell that
    /// every follower lands in the same cell. `None` places events anywhere.
    pub sync_seconds: Option<u32>,
    pub rng_seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n_noise_traders: 300,
            noise_orders_mean: 8.0,
            n_day_traders: 30,
            orders_per_day_mean: 200.0,
            cliques: vec![CliqueSpec::new(2), CliqueSpec::new(3), CliqueSpec::new(6)],
            days: 9,
            sessions: default_sessions(),
            anchor: NaiveTime::from_hms_opt(9, 0, 0).expect("valid time"),
            sync_seconds: Some(60),
            rng_seed: 20080916,
        }
    }
}

impl SynthConfig {
    /// A single busy day: roughly 800 000 orders and about 1 200 day traders
    /// whose series all pass the default length filter.
    pub fn desk_scale(rng_seed: u64) -> Self {
        SynthConfig {
            n_noise_traders: 3_000,
            noise_orders_mean: 8.0,
            n_day_traders: 1_200,
            orders_per_day_mean: 650.0,
            days: 1,
            rng_seed,
            ..SynthConfig::default()
        }
    }

    /// Session bounds in seconds from the anchor, validated.
    fn session_bounds(&self) -> Result<Vec<(i64, i64)>> {
        let mut out: Vec<(i64, i64)> = Vec::with_capacity(self.sessions.len());
        for s in &self.sessions {
            let (a, b) = (seconds_since(self.anchor, s.start), seconds_since(self.anchor, s.end));
            if a < 0 {
                return Err(Error::InvalidParameter("session starts before the anchor".into()));
            }
            if b <= a {
                return Err(Error::InvalidParameter("session ends before it starts".into()));
            }
            if let Some(&(_, prev_end)) = out.last() {
                if a < prev_end {
                    return Err(Error::InvalidParameter("sessions overlap or are out of order".into()));
                }
            }
            out.push((a, b));
        }
        Ok(out)
    }

    pub fn validate(&self) -> Result<()> {
        let bounds = self.session_bounds()?;
        let capacity: i64 = bounds.iter().map(|(a, b)| b - a).sum();
        let need_sessions = self.n_noise_traders + self.n_day_traders + self.cliques.len() > 0;
        if need_sessions && capacity == 0 {
            return Err(Error::Capacity("no session time to place orders in".into()));
        }
        for (name, mean) in [
            ("noise", self.noise_orders_mean),
            ("day trader", self.orders_per_day_mean),
        ] {
            if !(mean.is_finite() && mean >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} order mean must be non-negative"
                )));
            }
            if mean > capacity as f64 {
                return Err(Error::Capacity(format!(
                    "{name} mean of {mean} orders exceeds {capacity} session seconds"
                )));
            }
        }
        if self.sync_seconds == Some(0) {
            return Err(Error::InvalidParameter("sync_seconds must be at least 1".into()));
        }
        for c in &self.cliques {
            if c.size < 2 {
                return Err(Error::InvalidParameter("a clique needs at least 2 members".into()));
            }
            if !(c.participation > 0.0 && c.participation <= 1.0) {
                return Err(Error::InvalidParameter("participation must lie in (0, 1]".into()));
            }
            if !(c.volume_jitter.is_finite() && c.volume_jitter >= 0.0) {
                return Err(Error::InvalidParameter("volume_jitter must be non-negative".into()));
            }
            let slots = event_slots(&bounds, c.lag_seconds, self.sync_seconds).len();
            if c.events_per_day > slots {
                return Err(Error::Capacity(format!(
                    "{} clique events per day but only {slots} places to put them",
                    c.events_per_day
                )));
            }
        }
        Ok(())
    }
}

/// Start points available to a clique leader, as `(first, last)` second
/// ranges. Events of one day use distinct ranges: with a sync grid there is
/// one range per grid cell, without one each admissible second is its own.
fn event_slots(bounds: &[(i64, i64)], lag: u32, sync: Option<u32>) -> Vec<(i64, i64)> {
    let lag = i64::from(lag);
    let mut out = Vec::new();
    for &(start, end) in bounds {
        match sync {
            Some(g) => {
                let g = i64::from(g);
                if lag >= g {
                    continue;
                }
                let mut cell = start.div_euclid(g) * g;
                while cell < end {
                    let (lo, hi) = (cell.max(start), (cell + g - 1 - lag).min(end - 1 - lag));
                    if lo <= hi {
                        out.push((lo, hi));
                    }
                    cell += g;
                }
            }
            None => out.extend((start..end - lag).map(|t| (t, t))),
        }
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub planted: Vec<Vec<InvestorId>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthDay {
    pub label: String,
    /// Orders sorted by timestamp.
    pub orders: Vec<OrderRecord>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthMarket {
    pub days: Vec<SynthDay>,
    pub truth: GroundTruth,
    pub anchor: NaiveTime,
}

enum Role {
    Noise,
    DayTrader,
}

struct Cast {
    independents: Vec<(InvestorId, Role)>,
    cliques: Vec<(usize, Vec<InvestorId>)>,
}

fn cast(config: &SynthConfig) -> Cast {
    let planted: usize = config.cliques.iter().map(|c| c.size).sum();
    let total = planted + config.n_day_traders + config.n_noise_traders;
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut ids: Vec<u64> = (1..=total as u64).collect();
    ids.shuffle(&mut rng);
    let mut ids = ids.into_iter().map(|i| InvestorId::new(i.to_string()));

    let cliques = config
        .cliques
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let mut members: Vec<InvestorId> = ids.by_ref().take(c.size).collect();
            members.sort();
            (k, members)
        })
        .collect();
    let mut independents: Vec<(InvestorId, Role)> = ids
        .by_ref()
        .take(config.n_day_traders)
        .map(|id| (id, Role::DayTrader))
        .collect();
    independents.extend(ids.map(|id| (id, Role::Noise)));
    Cast { independents, cliques }
}

fn uniform_time(rng: &mut ChaCha8Rng, bounds: &[(i64, i64)], capacity: i64) -> i64 {
    let mut u = rng.random_range(0..capacity);
    for &(a, b) in bounds {
        if u < b - a {
            return a + u;
        }
        u -= b - a;
    }
    unreachable!("offset within total session capacity")
}

fn random_order(rng: &mut ChaCha8Rng, id: &InvestorId, timestamp: i64, side: Side, volume: u32) -> OrderRecord {
    OrderRecord {
        investor_id: id.clone(),
        timestamp,
        side,
        price: (BASE_PRICE + rng.random_range(-20..=20)) as f64,
        volume,
    }
}

fn random_side(rng: &mut ChaCha8Rng) -> Side {
    if rng.random_bool(0.5) {
        Side::Buy
    } else {
        Side::Sell
    }
}

fn order_count(rng: &mut ChaCha8Rng, mean: f64) -> usize {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).map(|p| p.sample(rng) as usize).unwrap_or(0)
}

fn generate_day(config: &SynthConfig, cast: &Cast, bounds: &[(i64, i64)], day: usize) -> SynthDay {
    let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    rng.set_stream(day as u64 + 1);
    let capacity: i64 = bounds.iter().map(|(a, b)| b - a).sum();
    let mut orders = Vec::new();

    for (id, role) in &cast.independents {
        let mean = match role {
            Role::Noise => config.noise_orders_mean,
            Role::DayTrader => config.orders_per_day_mean,
        };
        for _ in 0..order_count(&mut rng, mean) {
            let t = uniform_time(&mut rng, bounds, capacity);
            let side = random_side(&mut rng);
            let volume = rng.random_range(1..=MAX_VOLUME);
            orders.push(random_order(&mut rng, id, t, side, volume));
        }
    }

    for (k, members) in &cast.cliques {
        let spec = &config.cliques[*k];
        let slots = event_slots(bounds, spec.lag_seconds, config.sync_seconds);
        let mut chosen: Vec<usize> = (0..slots.len()).collect();
        chosen.shuffle(&mut rng);
        chosen.truncate(spec.events_per_day);
        chosen.sort_unstable();
        let jitter = Normal::new(0.0, spec.volume_jitter).expect("validated jitter");
        for slot in chosen {
            let (lo, hi) = slots[slot];
            let t0 = rng.random_range(lo..=hi);
            let side = random_side(&mut rng);
            let volume = rng.random_range(1..=MAX_VOLUME);
            let leader = rng.random_range(0..members.len());
            for (m, id) in members.iter().enumerate() {
                if m == leader {
                    orders.push(random_order(&mut rng, id, t0, side, volume));
                    continue;
                }
                if !rng.random_bool(spec.participation) {
                    continue;
                }
                let delay = rng.random_range(0..=i64::from(spec.lag_seconds));
                let scale = 1.0 + jitter.sample(&mut rng);
                let v = (f64::from(volume) * scale).round().max(1.0) as u32;
                orders.push(random_order(&mut rng, id, t0 + delay, side, v));
            }
        }
    }

    orders.sort_by_key(|o| o.timestamp);
    SynthDay {
        label: format!("day{:02}", day + 1),
        orders,
    }
}

/// Generate a synthetic market. Identical configs give identical markets.
pub fn generate(config: &SynthConfig) -> Result<SynthMarket> {
    config.validate()?;
    let bounds = config.session_bounds()?;
    let cast = cast(config);
    let days: Vec<SynthDay> = (0..config.days)
        .into_par_iter()
        .map(|d| generate_day(config, &cast, &bounds, d))
        .collect();
    Ok(SynthMarket {
        days,
        truth: GroundTruth {
            planted: cast.cliques.into_iter().map(|(_, m)| m).collect(),
        },
        anchor: config.anchor,
    })
}

impl SynthMarket {
    pub fn day_csv(&self, day: usize) -> Result<Vec<u8>> {
        let mut buf = Vec::new();
        write_orders(&mut buf, &self.days[day].orders, self.anchor)?;
        Ok(buf)
    }

    /// Write `<label>.csv` per day plus `truth.json` into `dir`; returns the
    /// day file paths in day order.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<std::path::PathBuf>> {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let mut paths = Vec::with_capacity(self.days.len());
        for (d, day) in self.days.iter().enumerate() {
            let path = dir.join(format!("{}.csv", day.label));
            fs::write(&path, self.day_csv(d)?).map_err(|e| Error::io(&path, e))?;
            paths.push(path);
        }
        let truth = dir.join("truth.json");
        let json = serde_json::to_string_pretty(&self.truth)? + "\n";
        fs::write(&truth, json).map_err(|e| Error::io(&truth, e))?;
        Ok(paths)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Score {
    /// `None` when no pairs were detected but some were planted.
    pub pair_precision: Option<f64>,
    /// `None` when nothing was planted.
    pub pair_recall: Option<f64>,
    pub clique_exact_matches: usize,
    pub true_positive_pairs: usize,
    pub detected_pairs: usize,
    pub planted_pairs: usize,
}

fn pairs_within<'a>(
    groups: impl IntoIterator<Item = &'a Vec<InvestorId>>,
) -> BTreeSet<(&'a InvestorId, &'a InvestorId)> {
    let mut out = BTreeSet::new();
    for g in groups {
        for (i, a) in g.iter().enumerate() {
            for b in &g[i + 1..] {
                out.insert(if a <= b { (a, b) } else { (b, a) });
            }
        }
    }
    out
}

/// Pair-level precision and recall of detected cliques against planted sets.
pub fn score(report: &CliqueReport, truth: &GroundTruth) -> Score {
    let detected = pairs_within(report.cliques.iter().map(|c| &c.members));
    let planted = pairs_within(&truth.planted);
    let tp = detected.intersection(&planted).count();

    let pair_precision = if !detected.is_empty() {
        Some(tp as f64 / detected.len() as f64)
    } else if planted.is_empty() {
        Some(1.0)
    } else {
        None
    };
    let pair_recall = (!planted.is_empty()).then(|| tp as f64 / planted.len() as f64);

    let planted_sets: BTreeSet<BTreeSet<&InvestorId>> = truth.planted.iter().map(|g| g.iter().collect()).collect();
    let clique_exact_matches = report
        .cliques
        .iter()
        .filter(|c| planted_sets.contains(&c.members.iter().collect::<BTreeSet<_>>()))
        .count();

    Score {
        pair_precision,
        pair_recall,
        clique_exact_matches,
        true_positive_pairs: tp,
        detected_pairs: detected.len(),
        planted_pairs: planted.len(),
    }
}

/// Number of distinct aggregation windows shared by every pair of members of
/// each planted clique on one day, as `clique index → min over pairs`.
pub fn shared_windows(day: &SynthDay, truth: &GroundTruth, window_seconds: u32) -> BTreeMap<usize, usize> {
    let w = i64::from(window_seconds.max(1));
    let mut windows: BTreeMap<&InvestorId, BTreeSet<i64>> = BTreeMap::new();
    for o in &day.orders {
        windows
            .entry(&o.investor_id)
            .or_default()
            .insert(o.timestamp.div_euclid(w));
    }
    let empty = BTreeSet::new();
    truth
        .planted
        .iter()
        .enumerate()
        .map(|(k, members)| {
            let min = pairs_within(std::iter::once(members))
                .into_iter()
                .map(|(a, b)| {
                    let wa = windows.get(a).unwrap_or(&empty);
                    let wb = windows.get(b).unwrap_or(&empty);
                    wa.intersection(wb).count()
                })
                .min()
                .unwrap_or(0);
            (k, min)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph_detect::Clique;

    fn ids(v: &[&str]) -> Vec<InvestorId> {
        v.iter().map(|&s| InvestorId::from(s)).collect()
    }

    fn report(groups: &[&[&str]]) -> CliqueReport {
        CliqueReport {
            cliques: groups
                .iter()
                .map(|g| Clique {
                    members: ids(g),
                    edges: Vec::new(),
                    min_occurrence: 2,
                    mean_occurrence: 2.0,
                    days_observed: 2,
                    complete: true,
                })
                .collect(),
        }
    }

    fn truth(groups: &[&[&str]]) -> GroundTruth {
        GroundTruth {
            planted: groups.iter().map(|g| ids(g)).collect(),
        }
    }

    fn small() -> SynthConfig {
        SynthConfig {
            n_noise_traders: 20,
            n_day_traders: 5,
            cliques: vec![CliqueSpec::new(3)],
            days: 3,
            ..SynthConfig::default()
        }
    }

    #[test]
    fn score_exact_match() {
        let s = score(&report(&[&["a", "b", "c"]]), &truth(&[&["a", "b", "c"]]));
        assert_eq!(s.pair_precision, Some(1.0));
        assert_eq!(s.pair_recall, Some(1.0));
        assert_eq!(s.clique_exact_matches, 1);
    }

    #[test]
    fn score_partial_detection() {
        // one detected pair, three planted pairs
        let s = score(&report(&[&["a", "b"]]), &truth(&[&["a", "b", "c"]]));
        assert_eq!(s.pair_precision, Some(1.0));
        assert!((s.pair_recall.unwrap() - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(s.clique_exact_matches, 0);
    }

    #[test]
    fn score_empty_cases() {
        let s = score(&report(&[]), &truth(&[&["a", "b"]]));
        assert_eq!(s.pair_recall, Some(0.0));
        assert_eq!(s.pair_precision, None);

        let s = score(&report(&[]), &truth(&[]));
        assert_eq!(s.pair_precision, Some(1.0));
        assert_eq!(s.pair_recall, None);

        let s = score(&report(&[&["x", "y"]]), &truth(&[]));
        assert_eq!(s.pair_precision, Some(0.0));
    }

    #[test]
    fn score_ignores_labels_and_renaming() {
        let a = score(
            &report(&[&["a", "b", "c"], &["d", "e"]]),
            &truth(&[&["d", "e"], &["a", "b"]]),
        );
        let b = score(
            &report(&[&["e", "d"], &["c", "a", "b"]]),
            &truth(&[&["b", "a"], &["e", "d"]]),
        );
        let c = score(
            &report(&[&["p", "q", "r"], &["s", "t"]]),
            &truth(&[&["s", "t"], &["p", "q"]]),
        );
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert!((a.pair_precision.unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn no_cliques_no_truth() {
        let config = SynthConfig {
            cliques: vec![],
            ..small()
        };
        assert!(generate(&config).unwrap().truth.planted.is_empty());
    }

    #[test]
    fn same_seed_same_bytes() {
        let a = generate(&small()).unwrap();
        let b = generate(&small()).unwrap();
        for d in 0..3 {
            assert_eq!(a.day_csv(d).unwrap(), b.day_csv(d).unwrap());
        }
        let c = generate(&SynthConfig { rng_seed: 7, ..small() }).unwrap();
        assert_ne!(a.day_csv(0).unwrap(), c.day_csv(0).unwrap());
    }

    #[test]
    fn planted_members_share_windows() {
        let config = SynthConfig {
            cliques: vec![CliqueSpec {
                lag_seconds: 5,
                ..CliqueSpec::new(3)
            }],
            days: 9,
            ..small()
        };
        let market = generate(&config).unwrap();
        assert_eq!(market.days.len(), 9);
        assert_eq!(market.truth.planted.len(), 1);
        assert_eq!(market.truth.planted[0].len(), 3);
        for day in &market.days {
            let shared = shared_windows(day, &market.truth, 60);
            assert!(shared[&0] >= 15, "{shared:?}");
        }
    }

    #[test]
    fn planted_sets_are_disjoint() {
        let market = generate(&SynthConfig::default()).unwrap();
        let mut seen = BTreeSet::new();
        for g in &market.truth.planted {
            assert!(g.len() >= 2);
            for id in g {
                assert!(seen.insert(id.clone()));
            }
        }
    }

    #[test]
    fn orders_stay_inside_sessions() {
        let config = small();
        let bounds = config.session_bounds().unwrap();
        let market = generate(&config).unwrap();
        for day in &market.days {
            for o in &day.orders {
                assert!(
                    bounds.iter().any(|&(a, b)| o.timestamp >= a && o.timestamp < b),
                    "{o:?}"
                );
            }
        }
    }

    #[test]
    fn synced_followers_stay_in_leader_window() {
        let market = generate(&SynthConfig {
            cliques: vec![CliqueSpec {
                lag_seconds: 25,
                ..CliqueSpec::new(4)
            }],
            ..small()
        })
        .unwrap();
        let members: BTreeSet<&InvestorId> = market.truth.planted[0].iter().collect();
        for day in &market.days {
            let windows: BTreeSet<i64> = day
                .orders
                .iter()
                .filter(|o| members.contains(&o.investor_id))
                .map(|o| o.timestamp / 60)
                .collect();
            let per_member = day.orders.iter().filter(|o| members.contains(&o.investor_id)).count();
            assert_eq!(per_member, 4 * 30);
            assert_eq!(windows.len(), 30);
        }
    }

    #[test]
    fn unsynced_events_use_distinct_seconds() {
        let config = SynthConfig {
            sync_seconds: None,
            cliques: vec![CliqueSpec {
                lag_seconds: 0,
                events_per_day: 500,
                ..CliqueSpec::new(2)
            }],
            ..small()
        };
        let market = generate(&config).unwrap();
        let leader: &InvestorId = &market.truth.planted[0][0];
        let times: BTreeSet<i64> = market.days[0]
            .orders
            .iter()
            .filter(|o| &o.investor_id == leader)
            .map(|o| o.timestamp)
            .collect();
        assert_eq!(times.len(), 500);
    }

    #[test]
    fn capacity_errors() {
        let too_busy = SynthConfig {
            orders_per_day_mean: 1e6,
            ..small()
        };
        assert!(matches!(generate(&too_busy), Err(Error::Capacity(_))));
        let too_many_events = SynthConfig {
            cliques: vec![CliqueSpec {
                events_per_day: 10_000,
                ..CliqueSpec::new(2)
            }],
            ..small()
        };
        assert!(matches!(generate(&too_many_events), Err(Error::Capacity(_))));
    }

    #[test]
    fn invalid_configs() {
        let bad_part = SynthConfig {
            cliques: vec![CliqueSpec {
                participation: 0.0,
                ..CliqueSpec::new(2)
            }],
            ..small()
        };
        assert!(generate(&bad_part).is_err());
        let lonely = SynthConfig {
            cliques: vec![CliqueSpec::new(1)],
            ..small()
        };
        assert!(generate(&lonely).is_err());
        let overlapping = SynthConfig {
            sessions: vec![Session::new((9, 0), (10, 0)), Session::new((9, 30), (11, 0))],
            ..small()
        };
        assert!(generate(&overlapping).is_err());
    }

    #[test]
    fn config_json_defaults_fill_in() {
        let config: SynthConfig = serde_json::from_str(r#"{"rng_seed": 5, "days": 2}"#).unwrap();
        assert_eq!(config.rng_seed, 5);
        assert_eq!(config.days, 2);
        assert_eq!(config.n_noise_traders, 300);
        assert_eq!(config.sessions.len(), 4);
    }
}
