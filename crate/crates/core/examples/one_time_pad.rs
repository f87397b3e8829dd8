// Encrypt a qubit with all four Pauli keys and show that the average is
// the maximally mixed state, whatever the input.

use blindgate::pauli::PauliOperator;
use blindgate::simulator::{distance_trace, DensityMatrix, SeededRng, StateVector};

pub fn run_example() -> blindgate::Result<()> {
    let mut rng = SeededRng::new(2024);
    for n in 1..=2 {
        for _ in 0..3 {
            let psi = StateVector::random(n, &mut rng)?;
            let encrypted: Vec<DensityMatrix> = PauliOperator::enumerate(n)
                .map(|key| {
                    let mut s = psi.clone();
                    s.apply_pauli(&key)?;
                    Ok(DensityMatrix::from_pure(&s))
                })
                .collect::<blindgate::Result<_>>()?;
            let average = DensityMatrix::average(&encrypted)?;
            let d = distance_trace(&average, &DensityMatrix::maximally_mixed(n))?;
            println!(
                "{n} qubit(s), {} keys: distance to I/{} = {d:.2e}",
                encrypted.len(),
                1 << n
            );
        }
    }
    Ok(())
}

fn main() -> blindgate::Result<()> {
    run_example()
}
