//! Relative execution times and their [0,1] normalization.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::log::EventLog;

/// Unit in which relative times are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeUnit {
    Seconds,
    Minutes,
    #[default]
    Hours,
    Days,
}

impl TimeUnit {
    pub fn millis(self) -> f64 {
        match self {
            TimeUnit::Seconds => 1_000.0,
            TimeUnit::Minutes => 60_000.0,
            TimeUnit::Hours => 3_600_000.0,
            TimeUnit::Days => 86_400_000.0,
        }
    }
}

impl fmt::Display for TimeUnit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TimeUnit::Seconds => "seconds",
            TimeUnit::Minutes => "minutes",
            TimeUnit::Hours => "hours",
            TimeUnit::Days => "days",
        })
    }
}

impl FromStr for TimeUnit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "seconds" | "second" | "s" => Ok(TimeUnit::Seconds),
            "minutes" | "minute" | "m" => Ok(TimeUnit::Minutes),
            "hours" | "hour" | "h" => Ok(TimeUnit::Hours),
            "days" | "day" | "d" => Ok(TimeUnit::Days),
            other => Err(format!("unknown time unit {other:?}")),
        }
    }
}

/// One event's time relative to its case start, raw and normalized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelTime {
    /// Time since the first event of the trace, in the view's unit.
    pub value: f64,
    /// `value / r_max`, in [0,1].
    pub normalized: f64,
}

/// Relative times for every event of a log, aligned with
/// `log.traces[i].events[j]`.
#[derive(Debug, Clone)]
pub struct RelativeTimeView {
    pub unit: TimeUnit,
    /// Normalization scale: the largest relative time in the log, or 1
    /// when every relative time is zero (nothing to scale).
    pub r_max: f64,
    pub per_trace: Vec<Vec<RelTime>>,
}

impl RelativeTimeView {
    pub fn get(&self, trace: usize, event: usize) -> RelTime {
        self.per_trace[trace][event]
    }
}

/// Compute each event's time since its case start, in `unit`, plus the
/// log-wide normalization to [0,1]. The first event of every trace sits at
/// relative time 0.
pub fn relative_times(log: &EventLog, unit: TimeUnit) -> Result<RelativeTimeView> {
    if log.traces.is_empty() {
        return Err(Error::EmptyLog);
    }
    let mut per_trace: Vec<Vec<f64>> = Vec::with_capacity(log.traces.len());
    let mut max = 0.0f64;
    for trace in &log.traces {
        let start = trace.start().millis();
        let rels: Vec<f64> = trace
            .events
            .iter()
            .map(|e| (e.timestamp.millis() - start) as f64 / unit.millis())
            .collect();
        for &r in &rels {
            max = max.max(r);
        }
        per_trace.push(rels);
    }
    let r_max = if max > 0.0 { max } else { 1.0 };
    let per_trace = per_trace
        .into_iter()
        .map(|rels| {
            rels.into_iter()
                .map(|value| RelTime {
                    value,
                    normalized: value / r_max,
                })
                .collect()
        })
        .collect();
    Ok(RelativeTimeView {
        unit,
        r_max,
        per_trace,
    })
}
