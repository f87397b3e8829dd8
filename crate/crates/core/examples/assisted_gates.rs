// Run the assisted H, CNOT and T protocols for every key and compare the
// resulting map with the ideal gate.

use blindgate::protocols::{
    key_bit_count, max_key_deviation, run_protocol, AssistedCnot, AssistedHadamard, AssistedT,
    BobStrategy, GateProtocol,
};
use blindgate::simulator::StateVector;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let protocols: [&dyn GateProtocol; 3] = [
        &AssistedHadamard::new(),
        &AssistedCnot::new(),
        &AssistedT::new(),
    ];
    for p in protocols {
        let bits = key_bit_count(p)?;
        let worst = max_key_deviation(p, bits, 0)?;
        println!(
            "{:<5} {bits} key bits, worst deviation over all keys {worst:.1e}",
            p.name()
        );
    }

    // One T run in detail: what Alice sent and what she did locally.
    let t = AssistedT::new();
    let input = StateVector::random(1, &mut blindgate::simulator::SeededRng::new(1))?;
    let run = run_protocol(
        &t,
        &input,
        &[true, false, true, true],
        0,
        BobStrategy::Honest,
    )?;
    print!("{}", run.transcript.to_log());
    println!(
        "{} local operations, all Pauli or classical",
        run.alice.op_log().len()
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
