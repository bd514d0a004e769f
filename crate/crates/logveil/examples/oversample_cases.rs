//! The case-oversampling stage on its own: draw per-transition noise
//! targets, replicate whole cases until every target is met, and show
//! that only multiplicities change — never the variant set.
//!
//! ```bash
//! cargo run --example oversample_cases
//! ```

use logveil::dafsa::{ContingencyTable, Dafsa, StateAnnotatedLog, TransitionVariantLookup};
use logveil::log::{parse_csv, ColumnMapping};
use logveil::metrics::{oversampling_ratio, variant_set_equal};
use logveil::oversample::{draw_needed_noise, oversample, replication_groups};
use logveil::risk::{count_epsilon, PrivacyConfig};

const CSV: &str = include_str!("data/clinic.csv");

fn main() -> logveil::Result<()> {
    let log = parse_csv(CSV.as_bytes(), &ColumnMapping::default())?;
    let dafsa = Dafsa::build(log.distinct_variants())?;
    let annotated = StateAnnotatedLog::annotate(&log, &dafsa)?;
    let table = ContingencyTable::from_annotated(&annotated, &dafsa);
    let lookup = TransitionVariantLookup::build(&log, &dafsa)?;

    let epsilon = count_epsilon(&PrivacyConfig::new(0.2, 0.1))?;
    let seed = 42;
    let mut plan = draw_needed_noise(&dafsa, epsilon, seed);

    println!("noise targets per transition (ε = {epsilon:.4}):");
    for (idx, t) in dafsa.transitions().iter().enumerate() {
        println!(
            "  s{}--{}-->s{}: count {}, needs +{}",
            t.source.0,
            dafsa.label(t.label),
            t.target.0,
            table.count(logveil::dafsa::TransitionId(idx as u32)),
            plan.needed[idx]
        );
    }

    let (out, record) = oversample(&log, &lookup, &table, &mut plan, seed);
    println!(
        "\noversampled {} cases -> {} cases (ratio {:.2}), {} replicas",
        log.case_count(),
        out.case_count(),
        oversampling_ratio(&log, &out)?,
        record.replica_count()
    );
    assert!(variant_set_equal(&log, &out));
    println!("variant set preserved: true");

    println!("\nreplication groups (source case -> group size):");
    for (source, k) in replication_groups(&record) {
        println!("  {source}: {k}");
    }

    println!("\nachieved vs needed per transition:");
    for (idx, t) in dafsa.transitions().iter().enumerate() {
        println!(
            "  s{}--{}-->s{}: added {} (needed {})",
            t.source.0,
            dafsa.label(t.label),
            t.target.0,
            plan.added[idx],
            plan.needed[idx]
        );
    }
    Ok(())
}
