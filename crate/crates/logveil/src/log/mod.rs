//! Event-log model, parsing, and serialization.
//!
//! A log is a sequence of traces; a trace is the chronologically ordered
//! events of one case. Two interchange formats are supported: a subset of
//! XES (`<trace>`/`<event>` elements with `concept:name` and
//! `time:timestamp` attributes) and RFC 4180 CSV with a configurable
//! case/activity/timestamp column mapping.

mod csv_io;
mod time;
mod xes;

pub use csv_io::{parse_csv, to_csv_bytes};
pub use time::{relative_times, RelTime, RelativeTimeView, TimeUnit};
pub use xes::{parse_xes, to_xes_bytes};

use std::collections::HashMap;
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use chrono::{DateTime, NaiveDateTime, TimeZone, Utc};

use crate::error::{Error, Result};

/// An absolute instant with millisecond resolution (UTC).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(i64);

impl Timestamp {
    pub fn from_millis(ms: i64) -> Self {
        Timestamp(ms)
    }

    pub fn millis(self) -> i64 {
        self.0
    }

    /// Parse an instant. Accepted forms: RFC 3339 / ISO-8601 with offset,
    /// or a naive `YYYY-MM-DD HH:MM:SS[.fff]` (space or `T` separator),
    /// which is taken as UTC. Sub-millisecond digits are truncated.
    pub fn parse(value: &str) -> Option<Self> {
        let s = value.trim();
        if let Ok(dt) = DateTime::parse_from_rfc3339(s) {
            return Some(Timestamp(dt.timestamp_millis()));
        }
        for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
            if let Ok(naive) = NaiveDateTime::parse_from_str(s, fmt) {
                return Some(Timestamp(naive.and_utc().timestamp_millis()));
            }
        }
        None
    }

    fn as_utc(self) -> DateTime<Utc> {
        Utc.timestamp_millis_opt(self.0).unwrap()
    }

    /// `2020-08-08 10:20:00.000` — the CSV form.
    pub fn to_csv_string(self) -> String {
        self.as_utc().format("%Y-%m-%d %H:%M:%S%.3f").to_string()
    }

    /// `2020-08-08T10:20:00.000+00:00` — the XES form.
    pub fn to_xes_string(self) -> String {
        self.as_utc().format("%Y-%m-%dT%H:%M:%S%.3f+00:00").to_string()
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv_string())
    }
}

/// One execution of an activity. The owning [`Trace`] carries the case id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Event {
    pub activity: String,
    pub timestamp: Timestamp,
}

/// The ordered events of one case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub case_id: String,
    pub events: Vec<Event>,
}

impl Trace {
    /// The case variant: the activity-label sequence, ignoring times.
    pub fn variant(&self) -> Vec<String> {
        self.events.iter().map(|e| e.activity.clone()).collect()
    }

    pub fn start(&self) -> Timestamp {
        self.events[0].timestamp
    }
}

/// Log interchange format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogFormat {
    Xes,
    Csv,
}

impl fmt::Display for LogFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogFormat::Xes => "xes",
            LogFormat::Csv => "csv",
        })
    }
}

/// CSV column names for case id, activity, and timestamp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMapping {
    pub case: String,
    pub activity: String,
    pub timestamp: String,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping {
            case: "case".into(),
            activity: "activity".into(),
            timestamp: "timestamp".into(),
        }
    }
}

impl FromStr for ColumnMapping {
    type Err = String;

    /// Parse `case,activity,timestamp`.
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 || parts.iter().any(|p| p.is_empty()) {
            return Err(format!(
                "expected three comma-separated column names, got {s:?}"
            ));
        }
        Ok(ColumnMapping {
            case: parts[0].into(),
            activity: parts[1].into(),
            timestamp: parts[2].into(),
        })
    }
}

/// Where a log came from; used to write it back in the same shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceMeta {
    pub format: LogFormat,
    pub columns: ColumnMapping,
}

impl Default for SourceMeta {
    fn default() -> Self {
        SourceMeta {
            format: LogFormat::Csv,
            columns: ColumnMapping::default(),
        }
    }
}

/// An event log: traces with unique case ids, events ordered within each
/// trace by (timestamp, original input position).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventLog {
    pub traces: Vec<Trace>,
    pub meta: SourceMeta,
}

impl EventLog {
    /// Group flat `(case, activity, timestamp)` records into a log.
    /// Traces appear in order of first occurrence; events are stable-sorted
    /// by timestamp, so equal timestamps keep input order.
    pub fn from_records(
        records: Vec<(String, String, Timestamp)>,
        meta: SourceMeta,
    ) -> EventLog {
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut traces: Vec<Trace> = Vec::new();
        for (case_id, activity, timestamp) in records {
            let idx = *index.entry(case_id.clone()).or_insert_with(|| {
                traces.push(Trace {
                    case_id,
                    events: Vec::new(),
                });
                traces.len() - 1
            });
            traces[idx].events.push(Event {
                activity,
                timestamp,
            });
        }
        for trace in &mut traces {
            trace.events.sort_by_key(|e| e.timestamp);
        }
        EventLog { traces, meta }
    }

    pub fn case_count(&self) -> usize {
        self.traces.len()
    }

    pub fn event_count(&self) -> usize {
        self.traces.iter().map(|t| t.events.len()).sum()
    }

    /// Distinct case variants, in order of first occurrence.
    pub fn distinct_variants(&self) -> Vec<Vec<String>> {
        let mut seen: HashMap<Vec<String>, ()> = HashMap::new();
        let mut out = Vec::new();
        for trace in &self.traces {
            let v = trace.variant();
            if seen.insert(v.clone(), ()).is_none() {
                out.push(v);
            }
        }
        out
    }
}

/// Serialize `log` in `format` and write it to `sink`. Returns the number
/// of bytes written. Parsing the produced bytes yields the same log up to
/// millisecond timestamp resolution.
pub fn write_log<W: Write>(log: &EventLog, format: LogFormat, mut sink: W) -> Result<u64> {
    let bytes = match format {
        LogFormat::Xes => to_xes_bytes(log)?,
        LogFormat::Csv => to_csv_bytes(log, &log.meta.columns)?,
    };
    sink.write_all(&bytes).map_err(Error::Io)?;
    Ok(bytes.len() as u64)
}
