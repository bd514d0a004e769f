//! Weighted oversampling of whole cases.
//!
//! Each transition draws an additive noise target `ceil|Lap(1/ε)|`. Cases
//! are then replicated — never invented — until every transition's added
//! count meets its target: pick a deficient transition weighted by its
//! frequency, a variant through it weighted by its instance count, and a
//! uniform case of that variant; append a copy and credit every transition
//! on the variant's path. The output keeps the exact variant set, gets
//! fresh case ids, and is shuffled.

use std::collections::{BTreeMap, HashSet};

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::dafsa::{ContingencyTable, Dafsa, TransitionId, TransitionVariantLookup};
use crate::log::EventLog;
use crate::risk::laplace_sample;
use crate::rng::substream;

/// Per-transition additive-noise targets and progress counters.
#[derive(Debug, Clone)]
pub struct OversamplePlan {
    pub needed: Vec<u64>,
    pub added: Vec<u64>,
}

impl OversamplePlan {
    /// A plan that demands nothing; useful for tests.
    pub fn zero(transition_count: usize) -> OversamplePlan {
        OversamplePlan {
            needed: vec![0; transition_count],
            added: vec![0; transition_count],
        }
    }

    pub fn is_satisfied(&self) -> bool {
        self.needed
            .iter()
            .zip(&self.added)
            .all(|(need, got)| got >= need)
    }

    fn deficient(&self) -> Vec<usize> {
        (0..self.needed.len())
            .filter(|&t| self.added[t] < self.needed[t])
            .collect()
    }
}

/// Integer noise target for one absolute Laplace draw: looping single
/// increments until the added count reaches |z| is the same as demanding
/// ceil|z| up front.
fn needed_from_draw(z: f64) -> u64 {
    z.abs().ceil() as u64
}

/// Draw each transition's additive-noise target from Lap(Δf/ε), Δf = 1.
/// Each transition uses its own seed-derived stream, so targets do not
/// depend on evaluation order.
pub fn draw_needed_noise(dafsa: &Dafsa, count_epsilon: f64, seed: u64) -> OversamplePlan {
    let scale = 1.0 / count_epsilon;
    let needed = (0..dafsa.transition_count())
        .map(|t| {
            let mut rng = substream(seed, "count-noise", &[t as u64]);
            needed_from_draw(laplace_sample(scale, &mut rng))
        })
        .collect::<Vec<_>>();
    OversamplePlan {
        added: vec![0; needed.len()],
        needed,
    }
}

/// Who each output case came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseOrigin {
    pub source_case_id: String,
    /// Size of the replication group: the original plus its copies.
    pub group_size: u64,
}

/// Map from fresh output case id to its origin.
#[derive(Debug, Clone, Default)]
pub struct ReplicationRecord {
    pub cases: BTreeMap<String, CaseOrigin>,
}

impl ReplicationRecord {
    pub fn group_size(&self, output_case_id: &str) -> u64 {
        self.cases[output_case_id].group_size
    }

    /// Number of output cases that are copies rather than originals.
    pub fn replica_count(&self) -> u64 {
        let originals: HashSet<&str> = self
            .cases
            .values()
            .map(|o| o.source_case_id.as_str())
            .collect();
        (self.cases.len() - originals.len()) as u64
    }
}

/// Group sizes per source case: 1 plus the number of copies made of it.
pub fn replication_groups(record: &ReplicationRecord) -> BTreeMap<String, u64> {
    record
        .cases
        .values()
        .map(|o| (o.source_case_id.clone(), o.group_size))
        .collect()
}

/// Run the oversampling loop. The lookup and plan must come from the same
/// automaton and `log`. On return the plan's added counts cover its
/// targets, and the output log contains every original case plus replicas,
/// under fresh case ids and in shuffled order.
pub fn oversample(
    log: &EventLog,
    lookup: &TransitionVariantLookup,
    table: &ContingencyTable,
    plan: &mut OversamplePlan,
    seed: u64,
) -> (EventLog, ReplicationRecord) {
    let mut rng = substream(seed, "oversample-loop", &[]);

    // (source trace index, is_replica) for every output case, originals first
    let mut picks: Vec<usize> = Vec::new();
    loop {
        let deficient = plan.deficient();
        if deficient.is_empty() {
            break;
        }
        let weights: Vec<u64> = deficient
            .iter()
            .map(|&t| table.count(TransitionId(t as u32)))
            .collect();
        let which = WeightedIndex::new(&weights)
            .expect("contingency counts are positive")
            .sample(&mut rng);
        let transition = TransitionId(deficient[which] as u32);

        let candidates = lookup.variants_through(transition);
        let instance_weights: Vec<u64> = candidates
            .iter()
            .map(|&v| lookup.variant(v).instance_count())
            .collect();
        let variant = &lookup.variant(
            candidates[WeightedIndex::new(&instance_weights)
                .expect("instance counts are positive")
                .sample(&mut rng)],
        );

        let case_idx = variant.case_indices[rng.gen_range(0..variant.case_indices.len())];
        picks.push(case_idx);
        for t in &variant.path {
            plan.added[t.index()] += 1;
        }
    }

    // assemble: originals in order, then replicas in pick order
    let mut sources: Vec<usize> = (0..log.traces.len()).collect();
    sources.extend_from_slice(&picks);

    let mut copies_per_source = vec![0u64; log.traces.len()];
    for &idx in &picks {
        copies_per_source[idx] += 1;
    }

    let mut traces: Vec<(usize, crate::log::Trace)> = sources
        .iter()
        .map(|&idx| (idx, log.traces[idx].clone()))
        .collect();

    let mut id_rng = substream(seed, "case-ids", &[]);
    let existing: HashSet<&str> = log.traces.iter().map(|t| t.case_id.as_str()).collect();
    let mut used: HashSet<String> = HashSet::new();
    for (_, trace) in &mut traces {
        let fresh = loop {
            let id = format!("{:032x}", id_rng.gen::<u128>());
            if !existing.contains(id.as_str()) && !used.contains(&id) {
                break id;
            }
        };
        used.insert(fresh.clone());
        trace.case_id = fresh;
    }

    let mut shuffle_rng = substream(seed, "shuffle", &[]);
    traces.shuffle(&mut shuffle_rng);

    let mut record = ReplicationRecord::default();
    for (source_idx, trace) in &traces {
        record.cases.insert(
            trace.case_id.clone(),
            CaseOrigin {
                source_case_id: log.traces[*source_idx].case_id.clone(),
                group_size: 1 + copies_per_source[*source_idx],
            },
        );
    }

    let out = EventLog {
        traces: traces.into_iter().map(|(_, t)| t).collect(),
        meta: log.meta.clone(),
    };
    (out, record)
}
