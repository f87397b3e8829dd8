use blindgate::hierarchy::GateSpec;
use blindgate::protocols::fixtures::{CnotWithoutControlFix, KeyReuseT};
use blindgate::protocols::{
    assisted_measure, compile_one_round, compile_two_round, composite_unitary, key_bit_count,
    max_key_deviation, op_log_is_permitted, run_circuit, run_circuit_on, run_protocol,
    AliceMachine, AssistedCnot, AssistedHadamard, AssistedT, Bob, BobStrategy, Circuit,
    GateProtocol, KeyPlan, ProtocolError, RunOptions,
};
use blindgate::simulator::{SeededRng, StateVector, UnitaryMatrix};
use blindgate::Error;

const TOL: f64 = 1e-10;

fn keys(bits: usize, assignment: usize) -> Vec<bool> {
    (0..bits).map(|i| (assignment >> i) & 1 == 1).collect()
}

#[test]
fn hadamard_is_correct_for_every_key() {
    let p = AssistedHadamard::new();
    assert_eq!(key_bit_count(&p).unwrap(), 2);
    assert!(max_key_deviation(&p, 2, 0).unwrap() < TOL);
}

#[test]
fn hadamard_zero_key_decodes_with_identity() {
    let run = run_protocol(
        &AssistedHadamard::new(),
        &StateVector::prepare_zero(1).unwrap(),
        &[false, false],
        0,
        BobStrategy::Honest,
    )
    .unwrap();
    let expected = {
        let mut s = StateVector::prepare_zero(1).unwrap();
        s.apply(&UnitaryMatrix::hadamard(), &[0]).unwrap();
        s
    };
    assert!((run.output.fidelity(&expected).unwrap() - 1.0).abs() < TOL);
    assert!(run.alice.op_log().iter().all(|op| !matches!(
        op,
        blindgate::protocols::AliceOp::ControlledPauli { applied: true, .. }
    )));
}

#[test]
fn cnot_is_correct_for_every_key() {
    let p = AssistedCnot::new();
    assert_eq!(key_bit_count(&p).unwrap(), 4);
    assert!(max_key_deviation(&p, 4, 0).unwrap() < TOL);
    // |10⟩ in textbook order is control set: basis index 1 with control on qubit 0.
    for a in 0..16 {
        let run = run_protocol(
            &p,
            &StateVector::basis(2, 0b01).unwrap(),
            &keys(4, a),
            0,
            BobStrategy::Honest,
        )
        .unwrap();
        let out = run.output.exact_distribution();
        assert!((out[0b11] - 1.0).abs() < TOL, "keys {a:04b}");
    }
}

#[test]
fn cnot_without_control_fix_fails_when_m_is_set() {
    let broken = CnotWithoutControlFix::new();
    for a in 0..16 {
        let k = keys(4, a);
        let u = composite_unitary(&broken, &k, 0, BobStrategy::Honest).unwrap();
        let ok = u.equal_up_to_global_phase(&UnitaryMatrix::cnot(), TOL);
        // key order is j, k, l, m
        assert_eq!(ok, !k[3], "keys {a:04b}");
        if k[3] {
            // The residue is a controlled phase on the control qubit.
            let residue = u.mul(&UnitaryMatrix::cnot().adjoint()).unwrap();
            let c = residue.entry(0, 0);
            assert!((residue.entry(1, 1) + c).norm() < TOL);
        }
    }
}

#[test]
fn t_is_correct_for_every_key_and_branch() {
    let p = AssistedT::new();
    assert_eq!(key_bit_count(&p).unwrap(), 4);
    assert!(max_key_deviation(&p, 4, 0).unwrap() < TOL);
    let plus = {
        let mut s = StateVector::prepare_zero(1).unwrap();
        s.apply(&UnitaryMatrix::hadamard(), &[0]).unwrap();
        s
    };
    let mut expected = plus.clone();
    expected.apply(&UnitaryMatrix::t(), &[0]).unwrap();
    for a in 0..16 {
        let run = run_protocol(&p, &plus, &keys(4, a), 0, BobStrategy::Honest).unwrap();
        assert!((run.output.fidelity(&expected).unwrap() - 1.0).abs() < TOL);
        assert_eq!(run.transcript.request_labels(), vec!["T", "S"]);
        assert!(op_log_is_permitted(run.alice.op_log()));
    }
}

#[test]
fn t_sends_the_dummy_when_j_is_zero() {
    use blindgate::protocols::AliceOp;
    for j in [false, true] {
        let run = run_protocol(
            &AssistedT::new(),
            &StateVector::prepare_zero(1).unwrap(),
            &[j, false, false, false],
            0,
            BobStrategy::Honest,
        )
        .unwrap();
        let swaps: Vec<bool> = run
            .alice
            .op_log()
            .iter()
            .filter_map(|op| match op {
                AliceOp::ControlledSwap { applied, .. } => Some(*applied),
                _ => None,
            })
            .collect();
        assert_eq!(swaps, vec![j, j]);
        // Round 2 always ships the dummy wire (index 1).
        let sends: Vec<Vec<usize>> = run
            .alice
            .op_log()
            .iter()
            .filter_map(|op| match op {
                AliceOp::Send { qubits, .. } => Some(qubits.clone()),
                _ => None,
            })
            .collect();
        assert_eq!(sends, vec![vec![0], vec![1]]);
    }
}

#[test]
fn key_reuse_fixture_still_computes_t() {
    assert!(max_key_deviation(&KeyReuseT::new(), 2, 0).unwrap() < TOL);
}

#[test]
fn one_round_compiler_matches_dedicated_protocols() {
    for (name, dedicated) in [
        (
            "H",
            Box::new(AssistedHadamard::new()) as Box<dyn GateProtocol>,
        ),
        ("CNOT", Box::new(AssistedCnot::new())),
    ] {
        let compiled = compile_one_round(&GateSpec::named(name).unwrap()).unwrap();
        let bits = 2 * compiled.arity();
        assert!(max_key_deviation(&compiled, bits, 0).unwrap() < TOL);
        for a in 0..1usize << bits {
            let u1 = composite_unitary(&compiled, &keys(bits, a), 0, BobStrategy::Honest).unwrap();
            let u2 = composite_unitary(dedicated.as_ref(), &keys(bits, a), 0, BobStrategy::Honest)
                .unwrap();
            assert!(u1.equal_up_to_global_phase(&u2, TOL));
        }
    }
    for name in ["S", "CZ", "SWAP", "X"] {
        let compiled = compile_one_round(&GateSpec::named(name).unwrap()).unwrap();
        let bits = 2 * compiled.arity();
        assert!(
            max_key_deviation(&compiled, bits, 0).unwrap() < TOL,
            "{name}"
        );
    }
}

#[test]
fn one_round_compiler_rejects_t() {
    let err = compile_one_round(&GateSpec::named("T").unwrap()).unwrap_err();
    assert_eq!(
        err,
        ProtocolError::Core(Error::NotRealizable {
            gate: "T".into(),
            level: Some(3),
            rounds: 1
        })
    );
}

#[test]
fn two_round_compiler_reproduces_t_schedule() {
    let p = compile_two_round(&GateSpec::named("T").unwrap()).unwrap();
    assert_eq!(p.schedule(), vec!["S"]);
    assert!(max_key_deviation(&p, 2, 0).unwrap() < TOL);
    for a in 0..4 {
        let run = run_protocol(
            &p,
            &StateVector::prepare_zero(1).unwrap(),
            &keys(2, a),
            7,
            BobStrategy::Honest,
        )
        .unwrap();
        assert_eq!(run.transcript.request_labels(), vec!["T", "S"]);
    }
}

#[test]
fn two_round_compiler_degenerates_for_cliffords() {
    let p = compile_two_round(&GateSpec::named("S").unwrap()).unwrap();
    assert!(p.schedule().is_empty());
    assert_eq!(p.rounds(), 1);
    assert!(max_key_deviation(&p, 2, 0).unwrap() < TOL);
}

#[test]
fn two_round_toffoli_over_all_round_one_keys() {
    let p = compile_two_round(&GateSpec::named("TOFFOLI").unwrap()).unwrap();
    let mut labels = None;
    for seed in [0, 1] {
        for a in 0..64 {
            let k = keys(6, a);
            let u = composite_unitary(&p, &k, seed, BobStrategy::Honest).unwrap();
            assert!(
                u.equal_up_to_global_phase(&UnitaryMatrix::toffoli(), TOL),
                "keys {a:06b}"
            );
            let run = run_protocol(
                &p,
                &StateVector::prepare_zero(3).unwrap(),
                &k,
                seed,
                BobStrategy::Honest,
            )
            .unwrap();
            let l = run.transcript.request_labels();
            assert_eq!(l.len(), p.rounds());
            match &labels {
                None => labels = Some(l),
                Some(prev) => assert_eq!(prev, &l),
            }
            assert!(op_log_is_permitted(run.alice.op_log()));
        }
    }
}

#[test]
fn two_round_compiler_rejects_level_four() {
    let sqrt_t = UnitaryMatrix::diagonal(&[
        num_complex::Complex64::new(1.0, 0.0),
        num_complex::Complex64::from_polar(1.0, std::f64::consts::PI / 8.0),
    ]);
    let spec = GateSpec::new("SQRT_T", sqrt_t).unwrap();
    assert!(matches!(
        compile_two_round(&spec),
        Err(ProtocolError::Core(Error::NotRealizable {
            rounds: 2,
            level: Some(4),
            ..
        }))
    ));
}

#[test]
fn fredkin_compiles_in_two_rounds() {
    let p = compile_two_round(&GateSpec::named("FREDKIN").unwrap()).unwrap();
    assert!(max_key_deviation(&p, 6, 3).unwrap() < TOL);
}

#[test]
fn measurement_protocol_outputs() {
    // |1⟩ gives 1 for every key.
    for a in 0..4 {
        let mut alice = AliceMachine::new(
            &StateVector::basis(1, 1).unwrap(),
            0,
            KeyPlan::scripted(&keys(2, a)),
        )
        .unwrap();
        let mut bob = Bob::honest(a as u64);
        assert!(assisted_measure(&mut alice, 0, &mut bob).unwrap());
        assert!((alice.register().probability_one(0).unwrap() - 1.0).abs() < TOL);
    }
    // |0⟩ with j = 1: Bob sees 1, Alice reports 0.
    let mut alice = AliceMachine::new(
        &StateVector::prepare_zero(1).unwrap(),
        0,
        KeyPlan::scripted(&[true, false]),
    )
    .unwrap();
    let mut bob = Bob::honest(0);
    assert!(!assisted_measure(&mut alice, 0, &mut bob).unwrap());
    assert_eq!(alice.transcript().messages[1].classical_bits, vec![true]);
}

#[test]
fn measurement_frequency_on_plus_state() {
    let c = Circuit::parse("H 0\nM 0\n").unwrap();
    let mut ones = 0;
    let shots = 10_000;
    for s in 0..shots {
        let out = run_circuit(&c, BobStrategy::Honest, &RunOptions::plain(s)).unwrap();
        ones += usize::from(out.measurements[0]);
    }
    let f = ones as f64 / shots as f64;
    assert!((0.48..=0.52).contains(&f), "frequency {f}");
}

#[test]
fn drop_aborts_every_protocol() {
    for p in [
        Box::new(AssistedHadamard::new()) as Box<dyn GateProtocol>,
        Box::new(AssistedCnot::new()),
        Box::new(AssistedT::new()),
    ] {
        let input = StateVector::prepare_zero(p.arity()).unwrap();
        let err = run_protocol(p.as_ref(), &input, &[], 0, BobStrategy::Drop).unwrap_err();
        assert_eq!(err, ProtocolError::Aborted { round: 0 });
    }
}

#[test]
fn wrong_gate_changes_output() {
    let input = StateVector::prepare_zero(1).unwrap();
    let mut expected = input.clone();
    expected.apply(&UnitaryMatrix::hadamard(), &[0]).unwrap();
    let run = run_protocol(
        &AssistedHadamard::new(),
        &input,
        &[false, false],
        0,
        BobStrategy::WrongGate(UnitaryMatrix::pauli_z()),
    )
    .unwrap();
    assert!(run.output.fidelity(&expected).unwrap() < 0.9);
}

#[test]
fn bell_circuit_matches_direct_simulation() {
    let c = Circuit::parse("H 0\nCNOT 0 1\n").unwrap();
    let zero = StateVector::prepare_zero(2).unwrap();
    let direct = c.simulate(&zero).unwrap();
    for options in [RunOptions::plain(5), RunOptions::blind(5)] {
        let out = run_circuit(&c, BobStrategy::Honest, &options).unwrap();
        assert!(out.final_state.fidelity(&direct).unwrap() >= 1.0 - 1e-9);
        assert!(op_log_is_permitted(&out.op_log));
    }
}

#[test]
fn random_circuits_match_direct_simulation() {
    let mut rng = SeededRng::new(77);
    for trial in 0..10 {
        let mut text = String::new();
        for _ in 0..12 {
            match rng.below(3) {
                0 => text.push_str(&format!("H {}\n", rng.below(3))),
                1 => text.push_str(&format!("T {}\n", rng.below(3))),
                _ => {
                    let c = rng.below(3);
                    let t = (c + 1 + rng.below(2)) % 3;
                    text.push_str(&format!("CNOT {c} {t}\n"));
                }
            }
        }
        let c = Circuit::parse(&text).unwrap();
        let c = Circuit::from_gates(3, c.gates().iter().copied()).unwrap();
        let input = StateVector::random(3, &mut rng).unwrap();
        let direct = c.simulate(&input).unwrap();
        for options in [RunOptions::plain(trial), RunOptions::blind(trial)] {
            let out = run_circuit_on(&c, &input, BobStrategy::Honest, &options).unwrap();
            assert!(out.final_state.fidelity(&direct).unwrap() >= 1.0 - 1e-9);
        }
    }
}

#[test]
fn exact_distribution_mode_matches_direct_simulation() {
    let c = Circuit::parse("H 0\nT 0\nH 0\nCNOT 0 1\nM 0\nM 1\n").unwrap();
    let direct = c
        .measurement_distribution(&StateVector::prepare_zero(2).unwrap())
        .unwrap();
    for options in [RunOptions::plain(2), RunOptions::blind(2)] {
        let out = run_circuit(&c, BobStrategy::Honest, &options.exact(true)).unwrap();
        let dist = out.exact_distribution.unwrap();
        let tv: f64 = 0.5
            * dist
                .iter()
                .zip(&direct)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>();
        assert!(tv < 1e-9, "tv {tv}");
    }
}

mod properties {
    use super::*;
    use blindgate::protocols::CircuitGate;
    use proptest::prelude::*;

    fn ideal_output(u: &UnitaryMatrix, input: &StateVector) -> StateVector {
        let mut s = input.clone();
        let targets: Vec<usize> = (0..input.num_qubits()).collect();
        s.apply(u, &targets).unwrap();
        s
    }

    fn circuit_from(ops: &[(u8, usize, usize)], n: usize) -> Circuit {
        let mut c = Circuit::new(n);
        for &(kind, a, b) in ops {
            let (a, b) = (a % n, b % n);
            let gate = match kind % 3 {
                0 => CircuitGate::H(a),
                1 => CircuitGate::T(a),
                _ if a == b => CircuitGate::Cnot {
                    control: a,
                    target: (a + 1) % n,
                },
                _ => CircuitGate::Cnot {
                    control: a,
                    target: b,
                },
            };
            c.push(gate).unwrap();
        }
        c
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn protocols_apply_their_gate(which in 0usize..3, state_seed: u64, key_seed: u64) {
            let protocols: [Box<dyn GateProtocol>; 3] = [
                Box::new(AssistedHadamard::new()),
                Box::new(AssistedCnot::new()),
                Box::new(AssistedT::new()),
            ];
            let p = protocols[which].as_ref();
            let input = StateVector::random(p.arity(), &mut SeededRng::new(state_seed)).unwrap();
            let run = run_protocol(p, &input, &[], key_seed, BobStrategy::Honest).unwrap();
            let expected = ideal_output(p.ideal(), &input);
            prop_assert!((run.output.fidelity(&expected).unwrap() - 1.0).abs() < TOL);
            prop_assert!(op_log_is_permitted(run.alice.op_log()));
        }

        #[test]
        fn honest_runs_match_direct_simulation(
            ops in prop::collection::vec((any::<u8>(), 0usize..3, 0usize..3), 1..16),
            seed: u64,
            blind: bool,
        ) {
            let circuit = circuit_from(&ops, 3);
            let options = if blind { RunOptions::blind(seed) } else { RunOptions::plain(seed) };
            let run = run_circuit(&circuit, BobStrategy::Honest, &options).unwrap();
            let direct = circuit.simulate(&StateVector::prepare_zero(3).unwrap()).unwrap();
            prop_assert!(run.final_state.fidelity(&direct).unwrap() > 1.0 - 1e-9);
        }

        #[test]
        fn transcript_depends_only_on_the_circuit(
            ops in prop::collection::vec((any::<u8>(), 0usize..2, 0usize..2), 1..10),
            seed_a: u64,
            seed_b: u64,
        ) {
            let circuit = circuit_from(&ops, 2);
            let a = run_circuit(&circuit, BobStrategy::Honest, &RunOptions::plain(seed_a)).unwrap();
            let b = run_circuit(&circuit, BobStrategy::Honest, &RunOptions::plain(seed_b)).unwrap();
            prop_assert_eq!(a.transcript.structure(), b.transcript.structure());
        }
    }
}
