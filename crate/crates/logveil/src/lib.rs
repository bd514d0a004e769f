//! logveil anonymizes business-process event logs so that publishing them
//! raises an attacker's chance of singling out any individual by at most a
//! chosen bound δ.
//!
//! The pipeline keeps the exact set of case variants: it never invents or
//! suppresses behavior. Privacy comes from two mechanisms driven by one
//! calibration:
//!
//! * **Case oversampling** — a minimal acyclic automaton over the case
//!   variants groups shared trace prefixes/suffixes; each automaton
//!   transition's event count receives additive Laplace noise realized by
//!   replicating whole existing cases.
//! * **Timestamp noise** — every event's time relative to its case start
//!   is perturbed with Laplace noise whose ε is calibrated per event from
//!   the empirical distribution of its transition group.
//!
//! Everything is driven by a master seed: the same inputs and seed yield
//! byte-identical outputs.
//!
//! # Quick start
//!
//! ```
//! use logveil::prelude::*;
//!
//! let csv = "case,activity,timestamp\n\
//!     1,register,2024-03-01 09:00:00\n\
//!     1,decide,2024-03-01 12:30:00\n\
//!     2,register,2024-03-02 10:00:00\n\
//!     2,decide,2024-03-02 11:45:00\n";
//! let log = parse_csv(csv.as_bytes(), &ColumnMapping::default()).unwrap();
//!
//! let config = PrivacyConfig::new(0.2, 0.1);
//! let result = anonymize(&log, &config, false).unwrap();
//!
//! assert!(result.report.variant_set_preserved);
//! assert!(result.report.oversampling_ratio >= 1.0);
//! ```
//!
//! The `examples/` directory walks through each stage separately; the
//! `logveil` binary wires them into a one-shot command.

pub mod dafsa;
pub mod error;
pub mod log;
pub mod metrics;
pub mod oversample;
pub mod pipeline;
pub mod risk;
pub mod rng;
pub mod timenoise;

pub use error::{Error, Result};

/// The names most programs need.
pub mod prelude {
    pub use crate::dafsa::{ContingencyTable, Dafsa, StateAnnotatedLog, TransitionVariantLookup};
    pub use crate::error::{Error, Result};
    pub use crate::log::{
        parse_csv, parse_xes, relative_times, write_log, ColumnMapping, Event, EventLog,
        LogFormat, TimeUnit, Trace,
    };
    pub use crate::metrics::{
        oversampling_ratio, smape_percent, variant_set_equal, UtilityReport,
    };
    pub use crate::oversample::{draw_needed_noise, oversample, OversamplePlan};
    pub use crate::pipeline::{anonymize, run, Anonymized, RunConfig};
    pub use crate::risk::{
        count_epsilon, empirical_prior, epsilon_from_advantage, laplace_sample, time_epsilons,
        worst_case_prior, Epsilon, EpsilonPlan, PrivacyConfig,
    };
    pub use crate::timenoise::{adjust_epsilons, inject_time_noise, NoisedLog};
}

pub use pipeline::{anonymize, run};
