// Run a circuit in blind mode next to a different circuit and show that
// Bob receives the same request sequence for both.

use blindgate::protocols::{run_circuit, BobStrategy, Circuit, RunOptions};
use blindgate::security::transcript_blindness;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a: Circuit = "H 0\nCNOT 0 1\nT 1\nH 1\n".parse()?;
    let b: Circuit = "T 0\nT 0\nT 1\nCNOT 1 0\n".parse()?;
    let cycles = 4;
    for (name, c) in [("a", &a), ("b", &b)] {
        let run = run_circuit(
            c,
            BobStrategy::Honest,
            &RunOptions::blind(17).with_cycles(cycles),
        )?;
        let direct = c.simulate(&blindgate::simulator::StateVector::prepare_zero(2)?)?;
        println!(
            "circuit {name}: {} gates -> {} requests: {}",
            c.len(),
            run.slots.len(),
            run.transcript.request_labels().join(" ")
        );
        println!(
            "  fidelity with direct simulation {:.12}",
            run.final_state.fidelity(&direct)?
        );
    }
    let report = transcript_blindness(&a, &b, cycles)?;
    println!(
        "labels identical: {}, worst view distance from maximally mixed: {:.1e}",
        report.labels_match(),
        report.max_distance
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
