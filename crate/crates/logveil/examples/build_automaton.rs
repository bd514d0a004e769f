//! Build the minimal acyclic automaton over a log's case variants,
//! annotate the log with its transitions, and print the contingency
//! table plus a GraphViz rendering.
//!
//! ```bash
//! cargo run --example build_automaton
//! cargo run --example build_automaton | dot -Tpng -o automaton.png   # last block
//! ```

use logveil::dafsa::{ContingencyTable, Dafsa, StateAnnotatedLog, TransitionVariantLookup};
use logveil::log::{parse_csv, ColumnMapping};

const CSV: &str = include_str!("data/clinic.csv");

fn main() -> logveil::Result<()> {
    let log = parse_csv(CSV.as_bytes(), &ColumnMapping::default())?;
    let dafsa = Dafsa::build(log.distinct_variants())?;

    println!(
        "automaton: {} states, {} transitions over {} variants",
        dafsa.state_count(),
        dafsa.transition_count(),
        log.distinct_variants().len()
    );

    let annotated = StateAnnotatedLog::annotate(&log, &dafsa)?;
    let table = ContingencyTable::from_annotated(&annotated, &dafsa);

    println!("\ncontingency table (source --activity--> target: events):");
    for (idx, t) in dafsa.transitions().iter().enumerate() {
        println!(
            "  s{} --{}--> s{}: {}",
            t.source.0,
            dafsa.label(t.label),
            t.target.0,
            table.count(logveil::dafsa::TransitionId(idx as u32))
        );
    }
    println!("  total events: {}", table.total());

    let lookup = TransitionVariantLookup::build(&log, &dafsa)?;
    println!("\nvariants through each transition:");
    for (idx, t) in dafsa.transitions().iter().enumerate() {
        let names: Vec<String> = lookup
            .variants_through(logveil::dafsa::TransitionId(idx as u32))
            .iter()
            .map(|&v| lookup.variant(v).labels.join(">"))
            .collect();
        println!(
            "  s{}--{}-->s{}: {}",
            t.source.0,
            dafsa.label(t.label),
            t.target.0,
            names.join(", ")
        );
    }

    println!("\nDOT rendering:\n{}", dafsa.to_dot());
    Ok(())
}
