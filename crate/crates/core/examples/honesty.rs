// Spot-check several Bobs on probes with known outcomes.

use blindgate::honesty::{spot_check, verify_np_answer, NpInstance, NpWitness, DEFAULT_THRESHOLD};
use blindgate::protocols::{BobStrategy, GateKind};
use blindgate::simulator::UnitaryMatrix;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let bobs = [
        BobStrategy::Honest,
        BobStrategy::Scramble,
        BobStrategy::LieOnMeasurement,
        BobStrategy::WrongGate(UnitaryMatrix::pauli_x()),
        BobStrategy::Drop,
    ];
    for bob in &bobs {
        for kind in [GateKind::H, GateKind::T, GateKind::Measure] {
            let r = spot_check(bob, kind, 300, DEFAULT_THRESHOLD, 21)?;
            println!(
                "{:<10} {:<2} deviation {:.3} {}",
                bob.name(),
                kind.label(),
                r.deviation,
                if r.passes() { "pass" } else { "flagged" }
            );
        }
    }
    let answer = NpWitness::Factors(vec![3, 5]);
    println!(
        "15 = 3 x 5 verified: {}",
        verify_np_answer(&NpInstance::Factoring(15), &answer)?
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
