// The classical side: levels of reversible gates, the evidence that XOR
// masking alone cannot reach Toffoli, and blinded SAT solving.

use blindgate::classical::{
    blind_sat, brute_force_solve, demonstrate_no_go, tilde_level, unblind_assignment, CnfFormula,
    ReversibleGate,
};
use blindgate::simulator::SeededRng;

pub fn run_example() -> blindgate::Result<()> {
    for name in ReversibleGate::NAMES {
        let g = ReversibleGate::named(name).expect("built-in gate");
        println!("{name:<8} level {:?}", tilde_level(&g, 4)?);
    }
    println!("{}\n", demonstrate_no_go(300, 5)?);

    let mut rng = SeededRng::new(8);
    let (formula, _) = CnfFormula::random_planted_3cnf(8, 34, &mut rng)?;
    let (blinded, mask) = blind_sat(&formula, &mut rng);
    let answer = brute_force_solve(&blinded)?.expect("planted instances are satisfiable");
    let recovered = unblind_assignment(&answer, &mask)?;
    println!("blinded 3-CNF with {} clauses", blinded.clauses().len());
    println!(
        "recovered assignment satisfies the original: {}",
        formula.evaluate(&recovered)?
    );
    Ok(())
}

fn main() -> blindgate::Result<()> {
    run_example()
}
