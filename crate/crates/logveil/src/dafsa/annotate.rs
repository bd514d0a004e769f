//! State annotation of a log and the per-transition contingency table.

use crate::dafsa::{Dafsa, TransitionId};
use crate::error::{Error, Result};
use crate::log::EventLog;

/// Every event of a log tagged with the automaton transition it takes.
/// `per_trace[i][j]` is the transition of `log.traces[i].events[j]`;
/// each trace's transitions form the accepting path of its variant.
#[derive(Debug, Clone)]
pub struct StateAnnotatedLog {
    pub per_trace: Vec<Vec<TransitionId>>,
}

impl StateAnnotatedLog {
    /// Annotate `log` against `dafsa`. Fails if some trace's variant is
    /// not accepted, which means the automaton was built from another log.
    pub fn annotate(log: &EventLog, dafsa: &Dafsa) -> Result<StateAnnotatedLog> {
        let mut per_trace = Vec::with_capacity(log.traces.len());
        for trace in &log.traces {
            let path = dafsa
                .path(&trace.variant())
                .ok_or_else(|| Error::VariantNotAccepted {
                    case: trace.case_id.clone(),
                })?;
            per_trace.push(path);
        }
        Ok(StateAnnotatedLog { per_trace })
    }

    pub fn transition_of(&self, trace: usize, event: usize) -> TransitionId {
        self.per_trace[trace][event]
    }

    pub fn event_count(&self) -> usize {
        self.per_trace.iter().map(Vec::len).sum()
    }
}

/// Histogram of event counts per automaton transition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContingencyTable {
    counts: Vec<u64>,
}

impl ContingencyTable {
    pub fn from_annotated(annotated: &StateAnnotatedLog, dafsa: &Dafsa) -> ContingencyTable {
        let mut counts = vec![0u64; dafsa.transition_count()];
        for path in &annotated.per_trace {
            for t in path {
                counts[t.index()] += 1;
            }
        }
        ContingencyTable { counts }
    }

    pub fn count(&self, transition: TransitionId) -> u64 {
        self.counts[transition.index()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::log::{EventLog, SourceMeta, Timestamp};

    fn toy_log(rows: &[(&str, &str, i64)]) -> EventLog {
        EventLog::from_records(
            rows.iter()
                .map(|(c, a, minutes)| {
                    (
                        c.to_string(),
                        a.to_string(),
                        Timestamp::from_millis(minutes * 60_000),
                    )
                })
                .collect(),
            SourceMeta::default(),
        )
    }

    #[test]
    fn annotation_spells_each_variant() {
        let log = toy_log(&[
            ("1", "A", 0),
            ("1", "B", 10),
            ("2", "C", 0),
            ("2", "B", 5),
        ]);
        let dafsa = Dafsa::build(log.distinct_variants()).unwrap();
        let ann = StateAnnotatedLog::annotate(&log, &dafsa).unwrap();
        for (trace, path) in log.traces.iter().zip(&ann.per_trace) {
            let spelled: Vec<&str> = path
                .iter()
                .map(|&t| dafsa.label(dafsa.transition(t).label))
                .collect();
            let variant: Vec<String> = trace.variant();
            assert_eq!(spelled, variant.iter().map(String::as_str).collect::<Vec<_>>());
        }
    }

    #[test]
    fn foreign_variant_is_an_inconsistency() {
        let log = toy_log(&[("1", "A", 0)]);
        let other = toy_log(&[("1", "Z", 0)]);
        let dafsa = Dafsa::build(log.distinct_variants()).unwrap();
        match StateAnnotatedLog::annotate(&other, &dafsa) {
            Err(Error::VariantNotAccepted { case }) => assert_eq!(case, "1"),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn counts_sum_to_event_count() {
        let log = toy_log(&[
            ("1", "A", 0),
            ("1", "B", 10),
            ("2", "A", 0),
            ("2", "B", 7),
            ("3", "A", 0),
        ]);
        let dafsa = Dafsa::build(log.distinct_variants()).unwrap();
        let ann = StateAnnotatedLog::annotate(&log, &dafsa).unwrap();
        let table = ContingencyTable::from_annotated(&ann, &dafsa);
        assert_eq!(table.total(), log.event_count() as u64);
    }

    #[test]
    fn single_activity_trace_counts_once() {
        let log = toy_log(&[("1", "A", 0)]);
        let dafsa = Dafsa::build(log.distinct_variants()).unwrap();
        let ann = StateAnnotatedLog::annotate(&log, &dafsa).unwrap();
        let table = ContingencyTable::from_annotated(&ann, &dafsa);
        assert_eq!(table.counts(), &[1]);
    }

    #[test]
    fn duplicating_cases_doubles_counts() {
        let rows = [("1", "A", 0), ("1", "B", 10), ("2", "A", 0)];
        let doubled = [
            ("1", "A", 0),
            ("1", "B", 10),
            ("2", "A", 0),
            ("1b", "A", 0),
            ("1b", "B", 10),
            ("2b", "A", 0),
        ];
        let log = toy_log(&rows);
        let log2 = toy_log(&doubled);
        let dafsa = Dafsa::build(log.distinct_variants()).unwrap();
        let t1 = ContingencyTable::from_annotated(
            &StateAnnotatedLog::annotate(&log, &dafsa).unwrap(),
            &dafsa,
        );
        let t2 = ContingencyTable::from_annotated(
            &StateAnnotatedLog::annotate(&log2, &dafsa).unwrap(),
            &dafsa,
        );
        let doubled: Vec<u64> = t1.counts().iter().map(|c| c * 2).collect();
        assert_eq!(t2.counts(), doubled.as_slice());
    }
}
