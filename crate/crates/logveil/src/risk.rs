//! Guessing-advantage risk model: translating the advantage bound δ and
//! guess precision p into per-query ε values, plus the Laplace sampler.
//!
//! The calibration inverts the relation between an attacker's prior
//! success probability P and the posterior allowed after publication:
//!
//! ```text
//! ε = −ln( P/(1−P) · (1/(δ+P) − 1) ) / r
//! ```
//!
//! One ε is shared by all transition counts, computed from the worst-case
//! prior (1−δ)/2. Event times get an individual ε each, computed from an
//! empirical prior: the fraction of the event's transition group that
//! falls inside the guess window of half-width p around its own value.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::dafsa::{Dafsa, StateAnnotatedLog};
use crate::error::{Error, Result};
use crate::log::{EventLog, RelativeTimeView, TimeUnit};

/// Priors are kept strictly inside (0,1); the calibration formula
/// diverges at the endpoints.
pub const PRIOR_CLAMP: f64 = 1e-6;

/// Strictly inside (0,1); false for NaN.
fn in_open_unit(x: f64) -> bool {
    x > 0.0 && x < 1.0
}

/// Default ceiling for calibrated ε values.
pub const DEFAULT_EPSILON_CAP: f64 = 50.0;

/// User-facing privacy parameters.
#[derive(Debug, Clone, Serialize)]
pub struct PrivacyConfig {
    /// Maximum allowed guessing-advantage increase, in (0,1).
    pub delta: f64,
    /// Guess-window half-width as a fraction of the normalized range, in (0,1].
    pub precision: f64,
    pub time_unit: TimeUnit,
    pub seed: u64,
    pub epsilon_cap: f64,
}

impl PrivacyConfig {
    pub fn new(delta: f64, precision: f64) -> PrivacyConfig {
        PrivacyConfig {
            delta,
            precision,
            time_unit: TimeUnit::default(),
            seed: 42,
            epsilon_cap: DEFAULT_EPSILON_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !in_open_unit(self.delta) {
            return Err(Error::InvalidParameter {
                name: "delta",
                value: self.delta,
                expected: "0 < delta < 1",
            });
        }
        let precision_ok = self.precision > 0.0 && self.precision <= 1.0;
        if !precision_ok {
            return Err(Error::InvalidParameter {
                name: "precision",
                value: self.precision,
                expected: "0 < precision <= 1",
            });
        }
        let cap_ok = self.epsilon_cap > 0.0;
        if !cap_ok {
            return Err(Error::InvalidParameter {
                name: "epsilon_cap",
                value: self.epsilon_cap,
                expected: "> 0",
            });
        }
        Ok(())
    }
}

/// A calibrated privacy parameter for one query.
///
/// `NoNoise` marks the vacuous case `prior + δ ≥ 1`: the advantage bound
/// cannot be exceeded no matter what is published, so the value is
/// released exactly and flagged in the report.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "Option<f64>")]
pub enum Epsilon {
    Value(f64),
    NoNoise,
}

impl Epsilon {
    pub fn value(self) -> Option<f64> {
        match self {
            Epsilon::Value(e) => Some(e),
            Epsilon::NoNoise => None,
        }
    }

    pub fn is_no_noise(self) -> bool {
        matches!(self, Epsilon::NoNoise)
    }

    /// Split this budget over `k` correlated copies of the same query.
    pub fn divided_by(self, k: u64) -> Epsilon {
        match self {
            Epsilon::Value(e) => Epsilon::Value(e / k as f64),
            Epsilon::NoNoise => Epsilon::NoNoise,
        }
    }
}

impl From<Epsilon> for Option<f64> {
    fn from(e: Epsilon) -> Option<f64> {
        e.value()
    }
}

/// Prior and calibrated ε of one event's time query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EventEpsilon {
    pub prior: f64,
    pub epsilon: Epsilon,
}

/// The full noise budget of a run: one shared ε for transition counts and
/// one ε per event time, keyed by case id.
#[derive(Debug, Clone)]
pub struct EpsilonPlan {
    pub count_epsilon: f64,
    /// Normalization scale the priors were computed under.
    pub r_max: f64,
    pub per_case: BTreeMap<String, Vec<EventEpsilon>>,
}

impl EpsilonPlan {
    pub fn events(&self) -> impl Iterator<Item = &EventEpsilon> {
        self.per_case.values().flatten()
    }
}

/// Worst-case prior (1−δ)/2, used when the value distribution cannot be
/// estimated — here, for the presence of a prefix/suffix in a trace.
pub fn worst_case_prior(delta: f64) -> Result<f64> {
    if !in_open_unit(delta) {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
            expected: "0 < delta < 1",
        });
    }
    Ok((1.0 - delta) / 2.0)
}

/// Empirical prior of guessing `t_k` within ±`precision`, estimated from
/// the distribution of its group: the fraction of group values inside the
/// closed window `[t_k − p, t_k + p]`, clamped into (0,1).
pub fn empirical_prior(group: &[f64], t_k: f64, precision: f64) -> Result<f64> {
    if group.is_empty() {
        return Err(Error::EmptyGroup);
    }
    let mut sorted = group.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    Ok(prior_from_sorted(&sorted, t_k, precision))
}

/// Same as [`empirical_prior`] over an already-sorted non-empty group.
fn prior_from_sorted(sorted: &[f64], t_k: f64, precision: f64) -> f64 {
    let hi = t_k + precision;
    let lo = t_k - precision;
    let below_hi = sorted.partition_point(|&v| v <= hi);
    let below_lo = sorted.partition_point(|&v| v < lo);
    let raw = (below_hi - below_lo) as f64 / sorted.len() as f64;
    raw.clamp(PRIOR_CLAMP, 1.0 - PRIOR_CLAMP)
}

/// Maximum ε (minimum noise) that keeps the guessing advantage under δ
/// given the prior, for values spanning range `r`. Returns `NoNoise` when
/// the bound is vacuous (`prior + δ ≥ 1`); otherwise the result is
/// strictly positive and capped at `cap`.
pub fn epsilon_from_advantage(prior: f64, delta: f64, r: f64, cap: f64) -> Result<Epsilon> {
    if !in_open_unit(prior) {
        return Err(Error::InvalidParameter {
            name: "prior",
            value: prior,
            expected: "0 < prior < 1",
        });
    }
    if !in_open_unit(delta) {
        return Err(Error::InvalidParameter {
            name: "delta",
            value: delta,
            expected: "0 < delta < 1",
        });
    }
    let range_ok = r > 0.0;
    if !range_ok {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            expected: "> 0",
        });
    }
    if prior + delta >= 1.0 {
        return Ok(Epsilon::NoNoise);
    }
    let odds = prior / (1.0 - prior);
    let posterior_term = 1.0 / (delta + prior) - 1.0;
    let epsilon = -(odds * posterior_term).ln() / r;
    Ok(Epsilon::Value(epsilon.min(cap)))
}

/// The shared ε for all transition counts: the calibration applied to the
/// worst-case prior, with unit range.
pub fn count_epsilon(config: &PrivacyConfig) -> Result<f64> {
    config.validate()?;
    let prior = worst_case_prior(config.delta)?;
    match epsilon_from_advantage(prior, config.delta, 1.0, config.epsilon_cap)? {
        Epsilon::Value(e) => Ok(e),
        // (1−δ)/2 + δ = (1+δ)/2 < 1 for δ < 1, so the bound is never vacuous
        Epsilon::NoNoise => unreachable!("worst-case prior is always calibratable"),
    }
}

/// Calibrate an ε for every event time. Events taking the same automaton
/// transition form one group; each event's prior is the empirical prior of
/// its own normalized time within its group (range r = 1 after
/// normalization).
pub fn time_epsilons(
    log: &EventLog,
    annotated: &StateAnnotatedLog,
    times: &RelativeTimeView,
    dafsa: &Dafsa,
    config: &PrivacyConfig,
) -> Result<EpsilonPlan> {
    config.validate()?;

    let mut groups: Vec<Vec<f64>> = vec![Vec::new(); dafsa.transition_count()];
    for (i, path) in annotated.per_trace.iter().enumerate() {
        for (j, t) in path.iter().enumerate() {
            groups[t.index()].push(times.get(i, j).normalized);
        }
    }
    for group in &mut groups {
        group.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    }

    let shared_count_epsilon = count_epsilon(config)?;
    let mut per_case = BTreeMap::new();
    for (i, trace) in log.traces.iter().enumerate() {
        let mut events = Vec::with_capacity(trace.events.len());
        for j in 0..trace.events.len() {
            let transition = annotated.transition_of(i, j);
            let prior = prior_from_sorted(
                &groups[transition.index()],
                times.get(i, j).normalized,
                config.precision,
            );
            let epsilon =
                epsilon_from_advantage(prior, config.delta, 1.0, config.epsilon_cap)?;
            events.push(EventEpsilon { prior, epsilon });
        }
        per_case.insert(trace.case_id.clone(), events);
    }

    Ok(EpsilonPlan {
        count_epsilon: shared_count_epsilon,
        r_max: times.r_max,
        per_case,
    })
}

/// Inverse-CDF Laplace transform of a uniform draw `u ∈ (0,1)`.
fn laplace_inverse_cdf(scale: f64, u: f64) -> f64 {
    let centered = u - 0.5;
    if centered == 0.0 {
        return 0.0;
    }
    -scale * centered.signum() * (1.0 - 2.0 * centered.abs()).ln()
}

/// Draw one Laplace(0, scale) sample by inverse transform.
pub fn laplace_sample<R: Rng + ?Sized>(scale: f64, rng: &mut R) -> f64 {
    let u = loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            break u;
        }
    };
    laplace_inverse_cdf(scale, u)
}

/// Residual disclosure risk of using additive-only count noise.
///
/// Taking |noise| breaks the two-sided indistinguishability argument when
/// the draw lands in [0, Δf], which happens with probability
/// 1 − exp(−ε/Δf); Δf = 1 for transition counts. The term is reported per
/// run rather than folded back into a tightened ε.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualRisk {
    pub count_epsilon: f64,
    /// 1 − exp(−ε/Δf); identical for every transition since ε is shared.
    pub extra_prob: f64,
    pub transition_count: usize,
}

pub fn residual_risk(count_epsilon: f64, transition_count: usize) -> ResidualRisk {
    ResidualRisk {
        count_epsilon,
        extra_prob: 1.0 - (-count_epsilon).exp(),
        transition_count,
    }
}
