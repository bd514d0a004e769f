//! How the guessing-advantage bound δ turns into ε values: the shared
//! count budget from the worst-case prior, and per-event time budgets
//! from each transition group's empirical distribution.
//!
//! ```bash
//! cargo run --example calibrate_epsilon
//! ```

use logveil::dafsa::{Dafsa, StateAnnotatedLog};
use logveil::log::{parse_csv, relative_times, ColumnMapping, TimeUnit};
use logveil::risk::{
    count_epsilon, empirical_prior, epsilon_from_advantage, residual_risk, time_epsilons,
    worst_case_prior, PrivacyConfig,
};

const CSV: &str = include_str!("data/clinic.csv");

fn main() -> logveil::Result<()> {
    println!("count-query budget per δ (worst-case prior (1-δ)/2):");
    for delta in [0.1, 0.2, 0.3, 0.5, 0.9] {
        let prior = worst_case_prior(delta)?;
        let eps = count_epsilon(&PrivacyConfig::new(delta, 0.1))?;
        let risk = residual_risk(eps, 1);
        println!(
            "  δ={delta:<4} prior={prior:.3}  ε={eps:.6}  additive-noise residual={:.4}",
            risk.extra_prob
        );
    }

    println!("\nempirical priors on a five-value group, window ±0.1:");
    let group = [0.2, 0.4, 0.6, 0.8, 1.0];
    for t_k in group {
        let prior = empirical_prior(&group, t_k, 0.1)?;
        let eps = epsilon_from_advantage(prior, 0.2, 1.0, 50.0)?;
        println!("  value {t_k:.1}: prior {prior:.3} -> ε {eps:?}");
    }

    // the full per-event plan on the sample log
    let log = parse_csv(CSV.as_bytes(), &ColumnMapping::default())?;
    let times = relative_times(&log, TimeUnit::Hours)?;
    let dafsa = Dafsa::build(log.distinct_variants())?;
    let annotated = StateAnnotatedLog::annotate(&log, &dafsa)?;
    let config = PrivacyConfig::new(0.2, 0.1);
    let plan = time_epsilons(&log, &annotated, &times, &dafsa, &config)?;

    println!(
        "\nper-event time budgets at δ=0.2, p=0.1 (r_max = {:.3} hours):",
        plan.r_max
    );
    for (case, events) in &plan.per_case {
        let cells: Vec<String> = events
            .iter()
            .map(|e| match e.epsilon.value() {
                Some(v) => format!("ε={v:.3}"),
                None => "exact".to_string(),
            })
            .collect();
        println!("  case {case}: {}", cells.join(", "));
    }
    println!("\nshared count ε: {:.6}", plan.count_epsilon);
    Ok(())
}
