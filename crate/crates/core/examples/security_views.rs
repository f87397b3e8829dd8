// Compute Bob's view at every round for the T protocol, then for the same
// protocol with reused keys, which leaks.

use blindgate::protocols::fixtures::KeyReuseT;
use blindgate::protocols::AssistedT;
use blindgate::security::{security_report, test_inputs, GateScenario, MeasureScenario};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let inputs = test_inputs(1, 6, 11)?;
    let t = AssistedT::new();
    println!("{}", security_report("T", &GateScenario(&t), &inputs)?);
    println!("{}", security_report("measure", &MeasureScenario, &inputs)?);
    let leaky = KeyReuseT::new();
    println!(
        "{}",
        security_report("T with reused keys", &GateScenario(&leaky), &inputs)?
    );
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
