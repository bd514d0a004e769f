//! Utility metrics comparing an anonymized log against its original, and
//! the JSON run report.

use std::collections::HashSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::log::{EventLog, RelativeTimeView, TimeUnit};
use crate::oversample::ReplicationRecord;
use crate::risk::{Epsilon, EpsilonPlan, ResidualRisk};

/// Symmetric mean absolute percentage error over (true, anonymized)
/// relative-time pairs, in percent. A pair of two zeros contributes 0.
pub fn smape_percent<I>(pairs: I) -> Result<f64>
where
    I: IntoIterator<Item = (f64, f64)>,
{
    let mut n = 0u64;
    let mut sum = 0.0;
    for (truth, anon) in pairs {
        let denom = truth.abs() + anon.abs();
        if denom > 0.0 {
            sum += (truth - anon).abs() / denom;
        }
        n += 1;
    }
    if n == 0 {
        return Err(Error::EmptyPairing);
    }
    Ok(100.0 * sum / n as f64)
}

/// Cases in the anonymized log per case in the original.
pub fn oversampling_ratio(original: &EventLog, anonymized: &EventLog) -> Result<f64> {
    if original.traces.is_empty() {
        return Err(Error::EmptyLog);
    }
    Ok(anonymized.case_count() as f64 / original.case_count() as f64)
}

/// Do two logs exhibit exactly the same set of case variants?
pub fn variant_set_equal(a: &EventLog, b: &EventLog) -> bool {
    let va: HashSet<Vec<String>> = a.traces.iter().map(|t| t.variant()).collect();
    let vb: HashSet<Vec<String>> = b.traces.iter().map(|t| t.variant()).collect();
    va == vb
}

/// Pair every anonymized event with the true relative time of its source
/// event: originals against themselves, replicas against the case they
/// were copied from. Times are measured in the view's unit.
pub fn pair_relative_times(
    original: &EventLog,
    original_times: &RelativeTimeView,
    anonymized: &EventLog,
    record: &ReplicationRecord,
) -> Result<Vec<(f64, f64)>> {
    let index_of: std::collections::HashMap<&str, usize> = original
        .traces
        .iter()
        .enumerate()
        .map(|(i, t)| (t.case_id.as_str(), i))
        .collect();
    let unit_millis = original_times.unit.millis();

    let mut pairs = Vec::with_capacity(anonymized.event_count());
    for trace in &anonymized.traces {
        let origin = record
            .cases
            .get(&trace.case_id)
            .ok_or_else(|| Error::PlanMismatch {
                case: trace.case_id.clone(),
            })?;
        let source_idx =
            *index_of
                .get(origin.source_case_id.as_str())
                .ok_or_else(|| Error::PlanMismatch {
                    case: origin.source_case_id.clone(),
                })?;
        let start = trace.start().millis();
        for (j, event) in trace.events.iter().enumerate() {
            let truth = original_times.get(source_idx, j).value;
            let anon = (event.timestamp.millis() - start) as f64 / unit_millis;
            pairs.push((truth, anon));
        }
    }
    Ok(pairs)
}

/// Distribution summary of the per-event time budgets actually applied.
#[derive(Debug, Clone, Serialize)]
pub struct EpsilonSummary {
    pub count_epsilon: f64,
    pub time_epsilon_min: Option<f64>,
    pub time_epsilon_median: Option<f64>,
    pub time_epsilon_max: Option<f64>,
    pub no_noise_events: u64,
    pub total_events: u64,
}

impl EpsilonSummary {
    pub fn from_plan(plan: &EpsilonPlan) -> EpsilonSummary {
        let mut finite: Vec<f64> = Vec::new();
        let mut no_noise = 0u64;
        let mut total = 0u64;
        for event in plan.events() {
            total += 1;
            match event.epsilon {
                Epsilon::Value(e) => finite.push(e),
                Epsilon::NoNoise => no_noise += 1,
            }
        }
        finite.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let median = if finite.is_empty() {
            None
        } else {
            Some(finite[finite.len() / 2])
        };
        EpsilonSummary {
            count_epsilon: plan.count_epsilon,
            time_epsilon_min: finite.first().copied(),
            time_epsilon_median: median,
            time_epsilon_max: finite.last().copied(),
            no_noise_events: no_noise,
            total_events: total,
        }
    }
}

/// The run report written next to the anonymized log.
#[derive(Debug, Clone, Serialize)]
pub struct UtilityReport {
    pub smape_percent: f64,
    pub oversampling_ratio: f64,
    pub variant_set_preserved: bool,
    pub residual_risk: ResidualRisk,
    pub epsilon_summary: EpsilonSummary,
    pub runtime_seconds: f64,
    pub delta: f64,
    pub precision: f64,
    pub time_unit: TimeUnit,
    pub seed: u64,
    pub original_cases: u64,
    pub anonymized_cases: u64,
    pub original_events: u64,
    pub anonymized_events: u64,
}
