//! Limit-order records, order-file CSV I/O, and signed-volume event series.
//!
//! Timestamps are stored as whole seconds relative to a session anchor clock
//! time that is shared by every investor in a file, so that window indices
//! line up across investors later on.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use chrono::{NaiveTime, Timelike};
use log::warn;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ORDER_HEADER: [&str; 5] = ["investor_id", "timestamp", "side", "price", "volume"];

const CLOCK_FORMAT: &str = "%H:%M:%S";

/// Opaque investor token.
///
/// Ordering is numeric-aware: ids that are plain unsigned integers sort by
/// value (so `"2" < "10"`) and come before any non-numeric id; everything
/// else falls back to byte order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct InvestorId(String);

impl InvestorId {
    pub fn new(id: impl Into<String>) -> Self {
        InvestorId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn numeric(&self) -> Option<u128> {
        if self.0.is_empty() || !self.0.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        self.0.parse().ok()
    }
}

impl Ord for InvestorId {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.numeric(), other.numeric()) {
            (Some(a), Some(b)) => a.cmp(&b).then_with(|| self.0.cmp(&other.0)),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => self.0.cmp(&other.0),
        }
    }
}

impl PartialOrd for InvestorId {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for InvestorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for InvestorId {
    fn from(s: &str) -> Self {
        InvestorId(s.to_owned())
    }
}

impl From<String> for InvestorId {
    fn from(s: String) -> Self {
        InvestorId(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Buy,
    Sell,
}

impl Side {
    /// `+1` for buys, `-1` for sells.
    pub fn sign(self) -> i64 {
        match self {
            Side::Buy => 1,
            Side::Sell => -1,
        }
    }
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("buy") {
            Ok(Side::Buy)
        } else if s.eq_ignore_ascii_case("sell") {
            Ok(Side::Sell)
        } else {
            Err(format!("unknown side {s:?}"))
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Buy => "Buy",
            Side::Sell => "Sell",
        })
    }
}

/// Parse an `HH:MM:SS` clock time.
pub fn parse_clock(s: &str) -> Result<NaiveTime> {
    NaiveTime::parse_from_str(s.trim(), CLOCK_FORMAT).map_err(|_| Error::BadClockTime(s.to_owned()))
}

pub fn format_clock(t: NaiveTime) -> String {
    t.format(CLOCK_FORMAT).to_string()
}

/// Seconds from `anchor` to `t`; negative before the anchor.
pub fn seconds_since(anchor: NaiveTime, t: NaiveTime) -> i64 {
    i64::from(t.num_seconds_from_midnight()) - i64::from(anchor.num_seconds_from_midnight())
}

/// Clock time `seconds` after `anchor`, or `None` when it leaves the day.
pub fn clock_at(anchor: NaiveTime, seconds: i64) -> Option<NaiveTime> {
    let abs = i64::from(anchor.num_seconds_from_midnight()) + seconds;
    u32::try_from(abs)
        .ok()
        .and_then(|s| NaiveTime::from_num_seconds_from_midnight_opt(s, 0))
}

/// One limit order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderRecord {
    pub investor_id: InvestorId,
    /// Seconds since the session anchor.
    pub timestamp: i64,
    pub side: Side,
    pub price: f64,
    pub volume: u32,
}

impl OrderRecord {
    pub fn signed_volume(&self) -> i64 {
        self.side.sign() * i64::from(self.volume)
    }

    pub fn clock_time(&self, anchor: NaiveTime) -> Option<NaiveTime> {
        clock_at(anchor, self.timestamp)
    }
}

/// How an order file is interpreted.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderFileFormat {
    /// Clock time mapped to second 0. Shared by all investors.
    pub anchor: NaiveTime,
    /// Keep orders placed before the anchor (negative timestamps) instead of
    /// dropping them.
    pub keep_pre_anchor: bool,
    /// Number of malformed rows skipped with a warning before parsing fails.
    pub max_bad_rows: usize,
}

impl Default for OrderFileFormat {
    fn default() -> Self {
        OrderFileFormat {
            anchor: NaiveTime::from_hms_opt(9, 0, 0).expect("valid time"),
            keep_pre_anchor: false,
            max_bad_rows: 0,
        }
    }
}

fn parse_row(record: &csv::StringRecord, format: &OrderFileFormat) -> std::result::Result<OrderRecord, String> {
    if record.len() != ORDER_HEADER.len() {
        return Err(format!(
            "expected {} fields, found {}",
            ORDER_HEADER.len(),
            record.len()
        ));
    }
    let investor = record[0].trim();
    if investor.is_empty() {
        return Err("empty investor_id".into());
    }
    let clock = NaiveTime::parse_from_str(record[1].trim(), CLOCK_FORMAT)
        .map_err(|_| format!("bad timestamp {:?}", &record[1]))?;
    let side: Side = record[2].trim().parse()?;
    let price: f64 = record[3]
        .trim()
        .parse()
        .map_err(|_| format!("bad price {:?}", &record[3]))?;
    if !(price.is_finite() && price > 0.0) {
        return Err(format!("price must be positive, got {price}"));
    }
    let volume: u32 = record[4]
        .trim()
        .parse()
        .map_err(|_| format!("bad volume {:?}", &record[4]))?;
    if volume == 0 {
        return Err("volume must be at least 1".into());
    }
    Ok(OrderRecord {
        investor_id: InvestorId::new(investor),
        timestamp: seconds_since(format.anchor, clock),
        side,
        price,
        volume,
    })
}

/// Parse an order CSV stream. Records come back in file order.
///
/// Rows with problems are reported with their 1-based line number. Up to
/// `format.max_bad_rows` of them are skipped with a warning; one more fails
/// the whole parse.
pub fn parse_orders<R: Read>(source: R, format: &OrderFileFormat) -> Result<Vec<OrderRecord>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(source);

    let header = reader.headers()?.clone();
    if header.is_empty() {
        return Ok(Vec::new());
    }
    let found: Vec<String> = header.iter().map(|h| h.trim().to_ascii_lowercase()).collect();
    if found != ORDER_HEADER {
        return Err(Error::BadHeader {
            found: header.iter().collect::<Vec<_>>().join(","),
            expected: ORDER_HEADER.join(","),
        });
    }

    let mut records = Vec::new();
    let mut bad: Vec<(u64, String)> = Vec::new();
    let mut pre_anchor = 0usize;
    let mut row = csv::StringRecord::new();
    loop {
        match reader.read_record(&mut row) {
            Ok(false) => break,
            Ok(true) => {}
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                bad.push((line, e.to_string()));
                if bad.len() > format.max_bad_rows {
                    break;
                }
                continue;
            }
        }
        let line = row.position().map_or(0, |p| p.line());
        match parse_row(&row, format) {
            Ok(order) if order.timestamp < 0 && !format.keep_pre_anchor => pre_anchor += 1,
            Ok(order) => records.push(order),
            Err(reason) => {
                bad.push((line, reason));
                if bad.len() > format.max_bad_rows {
                    break;
                }
            }
        }
    }

    if bad.len() > format.max_bad_rows {
        let (first_row, first_reason) = bad.swap_remove(0);
        if format.max_bad_rows == 0 {
            return Err(Error::MalformedRow {
                row: first_row,
                reason: first_reason,
            });
        }
        return Err(Error::TooManyBadRows {
            bad: bad.len() + 1,
            tolerance: format.max_bad_rows,
            first_row,
            first_reason,
        });
    }
    for (line, reason) in &bad {
        warn!("skipping row {line}: {reason}");
    }
    if pre_anchor > 0 {
        warn!(
            "dropped {pre_anchor} orders placed before the session anchor {}",
            format_clock(format.anchor)
        );
    }
    Ok(records)
}

/// Write orders in the order-file CSV format.
pub fn write_orders<W: Write>(sink: W, orders: &[OrderRecord], anchor: NaiveTime) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(ORDER_HEADER)?;
    for order in orders {
        let clock = order.clock_time(anchor).ok_or_else(|| {
            Error::InvalidParameter(format!(
                "timestamp {} outside the trading day for anchor {}",
                order.timestamp,
                format_clock(anchor)
            ))
        })?;
        writer.write_record([
            order.investor_id.as_str(),
            &format_clock(clock),
            &order.side.to_string(),
            &order.price.to_string(),
            &order.volume.to_string(),
        ])?;
    }
    writer.flush().map_err(|e| Error::io("<order sink>", e))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignedVolumeEvent {
    pub timestamp: i64,
    /// Positive for buys, negative for sells.
    pub signed_volume: i64,
}

/// One investor's orders as a time-ordered signed-volume event sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignedVolumeSeries {
    pub investor_id: InvestorId,
    pub events: Vec<SignedVolumeEvent>,
}

/// Split orders by investor into signed-volume series sorted by timestamp.
/// Orders sharing a timestamp keep their input order.
pub fn to_signed_series(orders: &[OrderRecord]) -> BTreeMap<InvestorId, SignedVolumeSeries> {
    let mut out: BTreeMap<InvestorId, SignedVolumeSeries> = BTreeMap::new();
    for order in orders {
        out.entry(order.investor_id.clone())
            .or_insert_with(|| SignedVolumeSeries {
                investor_id: order.investor_id.clone(),
                events: Vec::new(),
            })
            .events
            .push(SignedVolumeEvent {
                timestamp: order.timestamp,
                signed_volume: order.signed_volume(),
            });
    }
    for series in out.values_mut() {
        series.events.sort_by_key(|e| e.timestamp);
    }
    out
}
