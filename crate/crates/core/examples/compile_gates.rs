// Compile arbitrary gates into one- or two-round protocols and report
// what Bob is asked to do.

use blindgate::hierarchy::{classify, GateSpec};
use blindgate::protocols::{compile_two_round, max_key_deviation, protocol_for, ProtocolError};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    for name in ["S", "CZ", "SWAP", "T", "TOFFOLI", "FREDKIN"] {
        let spec = GateSpec::named(name).expect("built-in gate");
        let level = classify(&spec.unitary, 4)?.level;
        let protocol = protocol_for(&spec)?;
        let worst = max_key_deviation(protocol.as_ref(), 2 * spec.arity, 3)?;
        print!(
            "{name:<8} level {level:?}, protocol {:<12} deviation {worst:.1e}",
            protocol.name()
        );
        if level == Some(3) {
            let two = compile_two_round(&spec)?;
            print!("  round-two schedule {:?}", two.schedule());
        }
        println!();
    }

    // Controlled-T sits one level higher and has no two-round protocol.
    let controlled_t = blindgate::simulator::UnitaryMatrix::diagonal(&[
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
    ]);
    let spec = GateSpec::new("CT", controlled_t)?;
    println!("CT level {:?}", classify(&spec.unitary, 5)?.level);
    match compile_two_round(&spec) {
        Err(e @ ProtocolError::Core(_)) => println!("CT: {e}"),
        Err(e) => println!("CT: {e}"),
        Ok(_) => println!("CT: compiled"),
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
