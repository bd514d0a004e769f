//! Laplace perturbation of event times.
//!
//! Noise is injected on the normalized relative-time scale (Δf = 1 there),
//! mapped back through the log's range, clamped at zero, and rebuilt into
//! absolute timestamps anchored at each case's start. Case start times
//! pass through unchanged, and events keep their original order even if
//! noised timestamps cross — reordering could change the variant set.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::log::{EventLog, RelativeTimeView, Timestamp};
use crate::oversample::ReplicationRecord;
use crate::risk::{laplace_sample, EpsilonPlan, Epsilon, EventEpsilon};
use crate::rng::substream;

/// What happened to one event's time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventNoise {
    pub applied_epsilon: Epsilon,
    /// Shift actually applied, in the view's time unit (after clamping).
    pub noise: f64,
}

/// A log with perturbed timestamps plus per-event bookkeeping aligned
/// with `log.traces`.
#[derive(Debug, Clone)]
pub struct NoisedLog {
    pub log: EventLog,
    pub per_trace: Vec<Vec<EventNoise>>,
}

/// Re-key a plan computed on the source log onto the oversampled log:
/// every output case inherits the per-event budgets of its source case.
pub fn expand_plan(plan: &EpsilonPlan, record: &ReplicationRecord) -> Result<EpsilonPlan> {
    let mut per_case = BTreeMap::new();
    for (output_id, origin) in &record.cases {
        let events = plan
            .per_case
            .get(&origin.source_case_id)
            .ok_or_else(|| Error::PlanMismatch {
                case: origin.source_case_id.clone(),
            })?;
        per_case.insert(output_id.clone(), events.clone());
    }
    Ok(EpsilonPlan {
        count_epsilon: plan.count_epsilon,
        r_max: plan.r_max,
        per_case,
    })
}

/// Divide each case's time budgets by its replication-group size: a case
/// copied k−1 times answers the same time query k times, so each copy may
/// only spend ε/k.
pub fn adjust_epsilons(plan: &EpsilonPlan, groups: &BTreeMap<String, u64>) -> Result<EpsilonPlan> {
    let mut per_case = BTreeMap::new();
    for (case_id, events) in &plan.per_case {
        let k = *groups
            .get(case_id)
            .ok_or_else(|| Error::PlanMismatch {
                case: case_id.clone(),
            })?
            .max(&1);
        let adjusted: Vec<EventEpsilon> = events
            .iter()
            .map(|e| EventEpsilon {
                prior: e.prior,
                epsilon: e.epsilon.divided_by(k),
            })
            .collect();
        per_case.insert(case_id.clone(), adjusted);
    }
    Ok(EpsilonPlan {
        count_epsilon: plan.count_epsilon,
        r_max: plan.r_max,
        per_case,
    })
}

/// Noise one normalized value and rebuild the event's absolute timestamp.
/// Returns the new timestamp and the applied shift in time units.
fn perturb(
    normalized: f64,
    original_rel: f64,
    sample: f64,
    r_max: f64,
    unit_millis: f64,
    case_start: Timestamp,
) -> (Timestamp, f64) {
    let noised_rel = ((normalized + sample) * r_max).max(0.0);
    let millis = case_start.millis() + (noised_rel * unit_millis).round() as i64;
    (Timestamp::from_millis(millis), noised_rel - original_rel)
}

/// Apply Laplace noise to every event of `log` according to `plan`.
///
/// The first event of each trace is pinned at relative time zero (its
/// relative time is identically zero for every case and the case start
/// itself is not anonymized). Events marked `NoNoise` keep exact times.
pub fn inject_time_noise(
    log: &EventLog,
    times: &RelativeTimeView,
    plan: &EpsilonPlan,
    seed: u64,
) -> Result<NoisedLog> {
    let unit_millis = times.unit.millis();
    let mut traces = Vec::with_capacity(log.traces.len());
    let mut per_trace = Vec::with_capacity(log.traces.len());

    for (i, trace) in log.traces.iter().enumerate() {
        let budgets = plan
            .per_case
            .get(&trace.case_id)
            .ok_or_else(|| Error::PlanMismatch {
                case: trace.case_id.clone(),
            })?;
        if budgets.len() != trace.events.len() {
            return Err(Error::PlanMismatch {
                case: trace.case_id.clone(),
            });
        }
        let start = trace.start();
        let mut events = Vec::with_capacity(trace.events.len());
        let mut noises = Vec::with_capacity(trace.events.len());
        for (j, event) in trace.events.iter().enumerate() {
            let budget = budgets[j];
            let mut out = event.clone();
            let mut applied = 0.0;
            if j > 0 {
                if let Epsilon::Value(eps) = budget.epsilon {
                    let mut rng = substream(seed, "time-noise", &[i as u64, j as u64]);
                    let sample = laplace_sample(1.0 / eps, &mut rng);
                    let rel = times.get(i, j);
                    let (ts, shift) =
                        perturb(rel.normalized, rel.value, sample, times.r_max, unit_millis, start);
                    out.timestamp = ts;
                    applied = shift;
                }
            }
            noises.push(EventNoise {
                applied_epsilon: budget.epsilon,
                noise: applied,
            });
            events.push(out);
        }
        traces.push(crate::log::Trace {
            case_id: trace.case_id.clone(),
            events,
        });
        per_trace.push(noises);
    }

    Ok(NoisedLog {
        log: EventLog {
            traces,
            meta: log.meta.clone(),
        },
        per_trace,
    })
}

/// Raise each event's timestamp to at least its predecessor's, so that
/// serialized traces read chronologically. Event order never changes.
pub fn enforce_monotonic(log: &mut EventLog) {
    for trace in &mut log.traces {
        let mut floor = i64::MIN;
        for event in &mut trace.events {
            if event.timestamp.millis() < floor {
                event.timestamp = Timestamp::from_millis(floor);
            }
            floor = event.timestamp.millis();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::log::{relative_times, SourceMeta, TimeUnit};
    use crate::risk::{laplace_sample, PrivacyConfig};

    fn hours(h: f64) -> Timestamp {
        Timestamp::from_millis((h * 3_600_000.0).round() as i64)
    }

    fn log_two_cases() -> EventLog {
        EventLog::from_records(
            vec![
                ("a".into(), "A".into(), hours(0.0)),
                ("a".into(), "B".into(), hours(5.0)),
                ("b".into(), "A".into(), hours(1.0)),
                ("b".into(), "B".into(), hours(11.0)),
            ],
            SourceMeta::default(),
        )
    }

    fn flat_plan(log: &EventLog, epsilon: Epsilon, r_max: f64) -> EpsilonPlan {
        let per_case = log
            .traces
            .iter()
            .map(|t| {
                (
                    t.case_id.clone(),
                    vec![
                        EventEpsilon {
                            prior: 0.5,
                            epsilon
                        };
                        t.events.len()
                    ],
                )
            })
            .collect();
        EpsilonPlan {
            count_epsilon: 1.0,
            r_max,
            per_case,
        }
    }

    #[test]
    fn no_noise_budgets_keep_exact_times() {
        let log = log_two_cases();
        let times = relative_times(&log, TimeUnit::Hours).unwrap();
        let plan = flat_plan(&log, Epsilon::NoNoise, times.r_max);
        let noised = inject_time_noise(&log, &times, &plan, 9).unwrap();
        assert_eq!(noised.log.traces, log.traces);
        assert!(noised
            .per_trace
            .iter()
            .flatten()
            .all(|n| n.noise == 0.0 && n.applied_epsilon.is_no_noise()));
    }

    #[test]
    fn perturb_matches_hand_computation() {
        // normalized 0.5, sample ln 2 (u = 0.75 at scale 1), range 10h
        let sample = 2.0f64.ln();
        let (ts, shift) = perturb(0.5, 5.0, sample, 10.0, 3_600_000.0, hours(0.0));
        let expected_hours = (0.5 + 2.0f64.ln()) * 10.0;
        assert!((shift - (expected_hours - 5.0)).abs() < 1e-9);
        assert_eq!(ts.millis(), (expected_hours * 3_600_000.0).round() as i64);
        assert!((expected_hours - 11.931471805599453).abs() < 1e-9);
    }

    #[test]
    fn negative_overshoot_clamps_to_case_start() {
        let (ts, shift) = perturb(0.1, 1.0, -0.3, 10.0, 3_600_000.0, hours(2.0));
        assert_eq!(ts, hours(2.0));
        assert_eq!(shift, -1.0);
    }

    #[test]
    fn first_event_is_pinned() {
        let log = log_two_cases();
        let times = relative_times(&log, TimeUnit::Hours).unwrap();
        let plan = flat_plan(&log, Epsilon::Value(0.4), times.r_max);
        let noised = inject_time_noise(&log, &times, &plan, 123).unwrap();
        for (orig, out) in log.traces.iter().zip(&noised.log.traces) {
            assert_eq!(orig.events[0].timestamp, out.events[0].timestamp);
        }
    }

    #[test]
    fn event_order_is_preserved_even_when_times_cross() {
        let log = log_two_cases();
        let times = relative_times(&log, TimeUnit::Hours).unwrap();
        let plan = flat_plan(&log, Epsilon::Value(0.05), times.r_max); // heavy noise
        let noised = inject_time_noise(&log, &times, &plan, 7).unwrap();
        for (orig, out) in log.traces.iter().zip(&noised.log.traces) {
            let orig_acts: Vec<&str> = orig.events.iter().map(|e| e.activity.as_str()).collect();
            let out_acts: Vec<&str> = out.events.iter().map(|e| e.activity.as_str()).collect();
            assert_eq!(orig_acts, out_acts);
        }
    }

    #[test]
    fn no_negative_relative_times() {
        let log = log_two_cases();
        let times = relative_times(&log, TimeUnit::Hours).unwrap();
        let plan = flat_plan(&log, Epsilon::Value(0.05), times.r_max);
        for seed in 0..20 {
            let noised = inject_time_noise(&log, &times, &plan, seed).unwrap();
            for trace in &noised.log.traces {
                let start = trace.start().millis();
                // start() is the first event; clamping keeps everyone at or after it
                for e in &trace.events {
                    assert!(e.timestamp.millis() >= start);
                }
            }
        }
    }

    #[test]
    fn adjustment_divides_by_group_size() {
        let log = log_two_cases();
        let times = relative_times(&log, TimeUnit::Hours).unwrap();
        let plan = flat_plan(&log, Epsilon::Value(0.8), times.r_max);
        let groups: BTreeMap<String, u64> =
            [("a".to_string(), 2u64), ("b".to_string(), 1u64)].into();
        let adjusted = adjust_epsilons(&plan, &groups).unwrap();
        let eps_a = adjusted.per_case["a"][1].epsilon.value().unwrap();
        let eps_b = adjusted.per_case["b"][1].epsilon.value().unwrap();
        assert!((eps_a - 0.4).abs() < 1e-12);
        assert!((eps_b - 0.8).abs() < 1e-12);
    }

    #[test]
    fn unbiased_before_clamping_and_scale_faithful() {
        // mean of noised − true normalized times ≈ 0, mean |noise| ≈ 1/ε
        let epsilon = 2.0;
        let scale = 1.0 / epsilon;
        let mut rng = substream(31, "test.noise", &[]);
        let n = 10_000;
        let (mut sum, mut sum_abs) = (0.0, 0.0);
        for _ in 0..n {
            let s = laplace_sample(scale, &mut rng);
            sum += s;
            sum_abs += s.abs();
        }
        let mean = sum / n as f64;
        let sigma = (2.0f64).sqrt() * scale;
        assert!(mean.abs() < 3.0 * sigma / (n as f64).sqrt());
        assert!((sum_abs / n as f64 - scale).abs() < 0.05 * scale);
    }

    #[test]
    fn monotonic_flag_raises_laggards() {
        let mut log = EventLog::from_records(
            vec![
                ("a".into(), "A".into(), hours(0.0)),
                ("a".into(), "B".into(), hours(5.0)),
                ("a".into(), "C".into(), hours(3.0)),
            ],
            SourceMeta::default(),
        );
        // from_records sorts chronologically; fake a crossing afterwards
        log.traces[0].events[1].timestamp = hours(6.0);
        enforce_monotonic(&mut log);
        let ts: Vec<i64> = log.traces[0]
            .events
            .iter()
            .map(|e| e.timestamp.millis())
            .collect();
        assert_eq!(ts, vec![0, hours(6.0).millis(), hours(6.0).millis()]);
    }

    #[test]
    fn plan_mismatch_is_detected() {
        let log = log_two_cases();
        let times = relative_times(&log, TimeUnit::Hours).unwrap();
        let mut plan = flat_plan(&log, Epsilon::Value(1.0), times.r_max);
        plan.per_case.remove("b");
        assert!(matches!(
            inject_time_noise(&log, &times, &plan, 0),
            Err(Error::PlanMismatch { .. })
        ));
    }

    #[test]
    fn expansion_copies_source_budgets() {
        let log = log_two_cases();
        let times = relative_times(&log, TimeUnit::Hours).unwrap();
        let config = PrivacyConfig::new(0.2, 0.1);
        let dafsa = crate::dafsa::Dafsa::build(log.distinct_variants()).unwrap();
        let ann = crate::dafsa::StateAnnotatedLog::annotate(&log, &dafsa).unwrap();
        let plan = crate::risk::time_epsilons(&log, &ann, &times, &dafsa, &config).unwrap();

        let mut record = ReplicationRecord::default();
        for (fresh, source) in [("x1", "a"), ("x2", "a"), ("x3", "b")] {
            record.cases.insert(
                fresh.to_string(),
                crate::oversample::CaseOrigin {
                    source_case_id: source.to_string(),
                    group_size: if source == "a" { 2 } else { 1 },
                },
            );
        }
        let expanded = expand_plan(&plan, &record).unwrap();
        assert_eq!(expanded.per_case.len(), 3);
        assert_eq!(expanded.per_case["x1"], plan.per_case["a"]);
        assert_eq!(expanded.per_case["x3"], plan.per_case["b"]);
    }
}
