// Classify gates in the hierarchy and turn a protocol where Bob applies a
// different gate into one where he applies the target gate.

use blindgate::hierarchy::{classify, normalize_bob_gate, pauli_keyed_protocol, GateSpec};
use blindgate::pauli::PauliOperator;
use blindgate::simulator::UnitaryMatrix;

pub fn run_example() -> blindgate::Result<()> {
    for name in ["X", "H", "CNOT", "T", "TOFFOLI"] {
        let spec = GateSpec::named(name).expect("built-in gate");
        println!("{name}:\n{}", classify(&spec.unitary, 4)?);
    }

    // Bob applies v = Z · H · X; Alice wants H.
    let u = UnitaryMatrix::hadamard();
    let e0 = PauliOperator::x(1, 0)?;
    let d0 = PauliOperator::z(1, 0)?;
    let v = UnitaryMatrix::product([&d0.to_matrix()?, &u, &e0.to_matrix()?])?;
    let original = pauli_keyed_protocol(&u, &v, &e0)?;
    let reduced = normalize_bob_gate(&u, &v, &e0, &d0)?;
    println!(
        "with Bob applying v: deviation {:.1e}; after reduction to u: deviation {:.1e}",
        original.max_deviation()?,
        reduced.max_deviation()?
    );
    Ok(())
}

fn main() -> blindgate::Result<()> {
    run_example()
}
