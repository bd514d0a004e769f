//! Shared helpers for the integration suites: an independent brute-force
//! minimal-DFA oracle and small log builders.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use logveil::log::{EventLog, SourceMeta, Timestamp};

/// Brute-force minimal acyclic DFA: build the trie of the variant set,
/// then merge equivalent states until nothing changes. Completely
/// independent of the incremental construction it checks.
pub struct BruteDfa {
    pub state_count: usize,
    pub language: BTreeSet<Vec<String>>,
}

#[derive(Default)]
struct TrieNode {
    children: BTreeMap<String, usize>,
    terminal: bool,
}

pub fn brute_minimal(variants: &[Vec<String>]) -> BruteDfa {
    let mut nodes: Vec<TrieNode> = vec![TrieNode::default()];
    let mut language = BTreeSet::new();
    for variant in variants {
        language.insert(variant.clone());
        let mut state = 0usize;
        for label in variant {
            state = match nodes[state].children.get(label) {
                Some(&next) => next,
                None => {
                    nodes.push(TrieNode::default());
                    let next = nodes.len() - 1;
                    nodes[state].children.insert(label.clone(), next);
                    next
                }
            };
        }
        nodes[state].terminal = true;
    }

    // Moore-style refinement on the partial transition maps: start from
    // the terminal/non-terminal split and re-split by child classes until
    // the partition is stable.
    let mut class: Vec<usize> = nodes.iter().map(|n| n.terminal as usize).collect();
    loop {
        let mut next_id: BTreeMap<(usize, Vec<(String, usize)>), usize> = BTreeMap::new();
        let mut next: Vec<usize> = Vec::with_capacity(nodes.len());
        for (i, node) in nodes.iter().enumerate() {
            let signature = (
                class[i],
                node.children
                    .iter()
                    .map(|(l, &c)| (l.clone(), class[c]))
                    .collect::<Vec<_>>(),
            );
            let fresh = next_id.len();
            let id = *next_id.entry(signature).or_insert(fresh);
            next.push(id);
        }
        let stable = next == class;
        class = next;
        if stable {
            break;
        }
    }

    let distinct: BTreeSet<usize> = class.iter().copied().collect();
    BruteDfa {
        state_count: distinct.len(),
        language,
    }
}

/// Build a log where each case follows a word; event k of a case happens
/// k hours after an arbitrary per-case start.
pub fn log_from_words(cases: &[(String, Vec<String>)]) -> EventLog {
    let mut records = Vec::new();
    for (idx, (case, word)) in cases.iter().enumerate() {
        let start = (idx as i64) * 86_400_000;
        for (k, label) in word.iter().enumerate() {
            records.push((
                case.clone(),
                label.clone(),
                Timestamp::from_millis(start + (k as i64) * 3_600_000),
            ));
        }
    }
    EventLog::from_records(records, SourceMeta::default())
}

/// Convenience for string literals: cases as (id, "ABC") with one letter
/// per activity.
pub fn log_of(cases: &[(&str, &str)]) -> EventLog {
    let cases: Vec<(String, Vec<String>)> = cases
        .iter()
        .map(|(id, word)| {
            (
                id.to_string(),
                word.chars().map(|c| c.to_string()).collect(),
            )
        })
        .collect();
    log_from_words(&cases)
}

pub fn variant_multiset(log: &EventLog) -> Vec<Vec<String>> {
    let mut v: Vec<Vec<String>> = log.traces.iter().map(|t| t.variant()).collect();
    v.sort();
    v
}

pub fn clinic_csv_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/clinic.csv")
}

pub fn clinic_xes_path() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/clinic.xes")
}
