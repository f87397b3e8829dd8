use blindgate::classical::{brute_force_solve, CnfFormula};
use blindgate::honesty::{
    interleaved_spot_check, spot_check, verify_np_answer, NpInstance, NpWitness, DEFAULT_THRESHOLD,
};
use blindgate::protocols::{BobStrategy, GateKind};
use blindgate::simulator::{SeededRng, UnitaryMatrix};

const KINDS: [GateKind; 4] = [GateKind::H, GateKind::Cnot, GateKind::T, GateKind::Measure];

#[test]
fn sat_witnesses_verify_and_flipped_ones_mostly_fail() {
    let mut rng = SeededRng::new(10);
    let mut rejected = 0;
    for _ in 0..50 {
        let (f, _) = CnfFormula::random_planted_3cnf(8, 34, &mut rng).unwrap();
        let w = brute_force_solve(&f).unwrap().unwrap();
        let instance = NpInstance::Sat(f.clone());
        assert!(verify_np_answer(&instance, &NpWitness::Assignment(w.clone())).unwrap());
        let mut bad = w.clone();
        let i = rng.below(bad.len());
        bad[i] = !bad[i];
        let accepted = verify_np_answer(&instance, &NpWitness::Assignment(bad.clone())).unwrap();
        // Soundness is exact: acceptance only when the flipped assignment really satisfies.
        assert_eq!(accepted, f.evaluate(&bad).unwrap());
        rejected += usize::from(!accepted);
    }
    assert!(
        rejected >= 35,
        "only {rejected} of 50 flipped witnesses rejected"
    );
}

#[test]
fn honest_bob_passes_every_gate_kind() {
    for kind in KINDS {
        let report = spot_check(&BobStrategy::Honest, kind, 1000, DEFAULT_THRESHOLD, 4).unwrap();
        assert!(report.passes(), "{report}");
        assert!(report.deviation <= 0.05);
    }
}

#[test]
fn cheating_strategies_are_flagged() {
    let cheats = [
        BobStrategy::Scramble,
        BobStrategy::Drop,
        BobStrategy::LieOnMeasurement,
    ];
    for kind in KINDS {
        for bob in &cheats {
            let report = spot_check(bob, kind, 400, DEFAULT_THRESHOLD, 5).unwrap();
            assert!(!report.passes(), "{kind:?} {report}");
        }
    }
}

#[test]
fn x_substituted_for_h_is_caught_by_the_double_h_probe() {
    let bob = BobStrategy::WrongGate(UnitaryMatrix::pauli_x());
    let report = spot_check(&bob, GateKind::H, 1000, DEFAULT_THRESHOLD, 6).unwrap();
    assert!(!report.passes());
    assert!(report.deviation > 0.3, "{}", report.deviation);
}

#[test]
fn interleaving_data_runs_changes_nothing_bob_can_see() {
    for bob in [BobStrategy::Honest, BobStrategy::Scramble] {
        let test_only = spot_check(&bob, GateKind::T, 200, DEFAULT_THRESHOLD, 7).unwrap();
        let mixed =
            interleaved_spot_check(&bob, GateKind::T, 200, 3, DEFAULT_THRESHOLD, 7).unwrap();
        assert_eq!(mixed.test, test_only);
        assert_eq!(mixed.data_runs, 400);
        assert!(mixed.indistinguishable(), "{mixed:?}");
    }
}

#[test]
fn records_have_the_line_format() {
    let report = spot_check(
        &BobStrategy::Drop,
        GateKind::Measure,
        3,
        DEFAULT_THRESHOLD,
        1,
    )
    .unwrap();
    let text = report.to_records();
    let first = text.lines().next().unwrap();
    assert!(first.starts_with("trial=0 probe=M|"), "{first}");
    assert!(first.contains("outcome=abort"));
    assert!(text.lines().last().unwrap().ends_with("result=fail"));
}

#[test]
fn same_seed_same_report() {
    let a = spot_check(
        &BobStrategy::Scramble,
        GateKind::Cnot,
        50,
        DEFAULT_THRESHOLD,
        9,
    )
    .unwrap();
    let b = spot_check(
        &BobStrategy::Scramble,
        GateKind::Cnot,
        50,
        DEFAULT_THRESHOLD,
        9,
    )
    .unwrap();
    assert_eq!(a, b);
}
