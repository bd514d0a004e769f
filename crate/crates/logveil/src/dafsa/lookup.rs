//! Transition-to-variant lookup used by the oversampling loop.

use std::collections::HashMap;

use crate::dafsa::{Dafsa, TransitionId};
use crate::error::Result;
use crate::log::EventLog;

/// Index of a distinct variant within the lookup.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VariantId(pub u32);

impl VariantId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// One distinct case variant: its labels, its accepting path, and the
/// positions of the traces that follow it.
#[derive(Debug, Clone)]
pub struct VariantInfo {
    pub labels: Vec<String>,
    pub path: Vec<TransitionId>,
    /// Indices into `log.traces` of the cases with this variant.
    pub case_indices: Vec<usize>,
}

impl VariantInfo {
    /// Number of cases following this variant.
    pub fn instance_count(&self) -> u64 {
        self.case_indices.len() as u64
    }
}

/// For every transition, the variants whose accepting path crosses it.
#[derive(Debug, Clone)]
pub struct TransitionVariantLookup {
    pub variants: Vec<VariantInfo>,
    by_transition: Vec<Vec<VariantId>>,
}

impl TransitionVariantLookup {
    pub fn build(log: &EventLog, dafsa: &Dafsa) -> Result<TransitionVariantLookup> {
        let mut index: HashMap<Vec<String>, VariantId> = HashMap::new();
        let mut variants: Vec<VariantInfo> = Vec::new();
        for (trace_idx, trace) in log.traces.iter().enumerate() {
            let labels = trace.variant();
            let id = match index.get(&labels) {
                Some(&id) => id,
                None => {
                    let path = dafsa.path(&labels).ok_or_else(|| {
                        crate::error::Error::VariantNotAccepted {
                            case: trace.case_id.clone(),
                        }
                    })?;
                    let id = VariantId(variants.len() as u32);
                    variants.push(VariantInfo {
                        labels: labels.clone(),
                        path,
                        case_indices: Vec::new(),
                    });
                    index.insert(labels, id);
                    id
                }
            };
            variants[id.index()].case_indices.push(trace_idx);
        }

        let mut by_transition = vec![Vec::new(); dafsa.transition_count()];
        for (i, variant) in variants.iter().enumerate() {
            for t in &variant.path {
                by_transition[t.index()].push(VariantId(i as u32));
            }
        }
        Ok(TransitionVariantLookup {
            variants,
            by_transition,
        })
    }

    /// Variants whose path crosses `transition`.
    pub fn variants_through(&self, transition: TransitionId) -> &[VariantId] {
        &self.by_transition[transition.index()]
    }

    pub fn variant(&self, id: VariantId) -> &VariantInfo {
        &self.variants[id.index()]
    }
}
