//! Minimal deterministic acyclic automaton over case variants.
//!
//! Variants are inserted in lexicographic order; states whose outgoing
//! structure and acceptance flag coincide are shared through a register,
//! which yields the minimal acyclic automaton for the variant set. Because
//! states group variants that share a prefix and a suffix set, the
//! automaton's transitions partition the events of a log into the groups
//! that the privacy calibration works on.

mod annotate;
mod lookup;

pub use annotate::{ContingencyTable, StateAnnotatedLog};
pub use lookup::{TransitionVariantLookup, VariantId, VariantInfo};

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use crate::error::{Error, Result};

/// Dense automaton state id; the initial state is always 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub u32);

/// Dense transition id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionId(pub u32);

impl TransitionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Interned activity label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LabelId(pub u32);

/// A labeled arc `source --label--> target`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transition {
    pub source: StateId,
    pub label: LabelId,
    pub target: StateId,
}

/// Minimal deterministic acyclic finite-state automaton.
#[derive(Debug, Clone)]
pub struct Dafsa {
    labels: Vec<String>,
    label_index: HashMap<String, LabelId>,
    finals: Vec<bool>,
    transitions: Vec<Transition>,
    /// Outgoing edges per state, sorted by label id.
    out_edges: Vec<Vec<(LabelId, StateId, TransitionId)>>,
}

impl Dafsa {
    /// Build the minimal automaton accepting exactly the given variants.
    /// Duplicates are collapsed; multiplicity lives in the log, not here.
    pub fn build<I>(variants: I) -> Result<Dafsa>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let mut words: Vec<Vec<String>> = variants.into_iter().collect();
        if words.is_empty() {
            return Err(Error::EmptyVariantSet);
        }
        if words.iter().any(|w| w.is_empty()) {
            return Err(Error::EmptyVariant);
        }
        words.sort();
        words.dedup();

        // Label ids are ranks in sorted label order, so comparing id
        // sequences is the same as comparing label sequences.
        let mut labels: Vec<String> = words.iter().flatten().cloned().collect();
        labels.sort();
        labels.dedup();
        let label_index: HashMap<String, LabelId> = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), LabelId(i as u32)))
            .collect();
        let id_words: Vec<Vec<LabelId>> = words
            .iter()
            .map(|w| w.iter().map(|l| label_index[l]).collect())
            .collect();

        let nodes = build_nodes(&id_words);
        Ok(canonicalize(nodes, labels, label_index))
    }

    pub fn initial(&self) -> StateId {
        StateId(0)
    }

    pub fn state_count(&self) -> usize {
        self.finals.len()
    }

    pub fn transition_count(&self) -> usize {
        self.transitions.len()
    }

    pub fn is_final(&self, state: StateId) -> bool {
        self.finals[state.0 as usize]
    }

    pub fn transition(&self, id: TransitionId) -> Transition {
        self.transitions[id.index()]
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn label(&self, id: LabelId) -> &str {
        &self.labels[id.0 as usize]
    }

    pub fn label_id(&self, label: &str) -> Option<LabelId> {
        self.label_index.get(label).copied()
    }

    pub fn out_edges(&self, state: StateId) -> &[(LabelId, StateId, TransitionId)] {
        &self.out_edges[state.0 as usize]
    }

    fn step(&self, state: StateId, label: LabelId) -> Option<(StateId, TransitionId)> {
        self.out_edges[state.0 as usize]
            .iter()
            .find(|(l, _, _)| *l == label)
            .map(|&(_, target, id)| (target, id))
    }

    /// The accepting path for a variant, as transition ids, if accepted.
    pub fn path(&self, variant: &[String]) -> Option<Vec<TransitionId>> {
        let mut state = self.initial();
        let mut path = Vec::with_capacity(variant.len());
        for activity in variant {
            let label = self.label_id(activity)?;
            let (next, id) = self.step(state, label)?;
            path.push(id);
            state = next;
        }
        self.is_final(state).then_some(path)
    }

    pub fn accepts(&self, variant: &[String]) -> bool {
        self.path(variant).is_some()
    }

    /// Enumerate the accepted language. Terminates because the automaton
    /// is acyclic; intended for inspection and testing on small automata.
    pub fn language(&self) -> Vec<Vec<String>> {
        let mut words = Vec::new();
        // (state, edge cursor) stack with the labels taken so far
        let mut stack: Vec<(StateId, usize)> = vec![(self.initial(), 0)];
        let mut word: Vec<String> = Vec::new();
        if self.is_final(self.initial()) {
            words.push(word.clone());
        }
        while let Some((state, cursor)) = stack.pop() {
            let edges = self.out_edges(state);
            if cursor >= edges.len() {
                word.pop();
                continue;
            }
            stack.push((state, cursor + 1));
            let (label, target, _) = edges[cursor];
            word.push(self.label(label).to_string());
            if self.is_final(target) {
                words.push(word.clone());
            }
            stack.push((target, 0));
        }
        words.sort();
        words
    }

    /// GraphViz DOT rendering; final states are drawn with a double circle.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dafsa {\n  rankdir=LR;\n  node [shape=circle];\n");
        for s in 0..self.state_count() {
            if self.finals[s] {
                out.push_str(&format!("  s{s} [shape=doublecircle];\n"));
            }
        }
        for t in &self.transitions {
            out.push_str(&format!(
                "  s{} -> s{} [label=\"{}\"];\n",
                t.source.0,
                t.target.0,
                self.label(t.label).replace('\\', "\\\\").replace('"', "\\\"")
            ));
        }
        out.push_str("}\n");
        out
    }
}

/// Mutable construction node.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Node {
    terminal: bool,
    children: Vec<(LabelId, usize)>,
}

impl Node {
    fn new(terminal: bool) -> Self {
        Node {
            terminal,
            children: Vec::new(),
        }
    }
}

/// Incremental insertion of sorted words with a register of shared
/// states. The common-prefix walk only ever touches the path of the
/// previously inserted word, which sorted input guarantees.
fn build_nodes(sorted_words: &[Vec<LabelId>]) -> Vec<Node> {
    let mut nodes = vec![Node::new(false)];
    let mut register: HashMap<Node, usize> = HashMap::new();

    for word in sorted_words {
        // walk the common prefix
        let mut state = 0usize;
        let mut depth = 0usize;
        while depth < word.len() {
            match nodes[state]
                .children
                .iter()
                .find(|(l, _)| *l == word[depth])
            {
                Some(&(_, child)) => {
                    state = child;
                    depth += 1;
                }
                None => break,
            }
        }
        if !nodes[state].children.is_empty() {
            replace_or_register(&mut nodes, &mut register, state);
        }
        // append the remaining suffix
        for (i, &label) in word[depth..].iter().enumerate() {
            let terminal = depth + i + 1 == word.len();
            let next = nodes.len();
            nodes.push(Node::new(terminal));
            nodes[state].children.push((label, next));
            state = next;
        }
    }
    replace_or_register(&mut nodes, &mut register, 0);
    nodes
}

/// Fold the last child of `state` into the register, bottom-up.
fn replace_or_register(nodes: &mut Vec<Node>, register: &mut HashMap<Node, usize>, state: usize) {
    let &(_, child) = nodes[state].children.last().expect("state has children");
    if !nodes[child].children.is_empty() {
        replace_or_register(nodes, register, child);
    }
    match register.get(&nodes[child]) {
        Some(&existing) => {
            nodes[state].children.last_mut().expect("non-empty").1 = existing;
        }
        None => {
            register.insert(nodes[child].clone(), child);
        }
    }
}

/// Renumber reachable states breadth-first into dense ids and materialize
/// the transition list in a deterministic order.
fn canonicalize(
    nodes: Vec<Node>,
    labels: Vec<String>,
    label_index: HashMap<String, LabelId>,
) -> Dafsa {
    let mut id_of: HashMap<usize, StateId> = HashMap::new();
    let mut order: Vec<usize> = Vec::new();
    id_of.insert(0, StateId(0));
    order.push(0);
    let mut cursor = 0;
    while cursor < order.len() {
        let node = order[cursor];
        cursor += 1;
        for &(_, child) in &nodes[node].children {
            if let Entry::Vacant(slot) = id_of.entry(child) {
                slot.insert(StateId(order.len() as u32));
                order.push(child);
            }
        }
    }

    let mut finals = vec![false; order.len()];
    let mut transitions = Vec::new();
    let mut out_edges: Vec<Vec<(LabelId, StateId, TransitionId)>> = vec![Vec::new(); order.len()];
    for (dense, &node) in order.iter().enumerate() {
        finals[dense] = nodes[node].terminal;
        for &(label, child) in &nodes[node].children {
            let id = TransitionId(transitions.len() as u32);
            let target = id_of[&child];
            transitions.push(Transition {
                source: StateId(dense as u32),
                label,
                target,
            });
            out_edges[dense].push((label, target, id));
        }
    }

    Dafsa {
        labels,
        label_index,
        finals,
        transitions,
        out_edges,
    }
}
