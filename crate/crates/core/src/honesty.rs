//! Catching a cheating Bob: exact verification of NP answers, and
//! statistical spot checks of a memoryless Bob on probes whose honest
//! outcome Alice can predict.

use std::fmt;

use thiserror::Error;

use crate::classical::CnfFormula;
use crate::error::Error;
use crate::protocols::{run_circuit_on, BobStrategy, Circuit, GateKind, ProtocolError, RunOptions};
use crate::security::{view_independence, CircuitScenario, SECURITY_TOL};
use crate::simulator::{derive_seed, SeededRng, StateVector};

pub const DEFAULT_THRESHOLD: f64 = 0.05;
pub const DEFAULT_TRIALS: usize = 400;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HonestyError {
    #[error("malformed answer: {0}")]
    Malformed(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

#[derive(Debug, Clone, PartialEq)]
pub enum NpInstance {
    /// Find a nontrivial factorisation of the number.
    Factoring(u64),
    Sat(CnfFormula),
}

#[derive(Debug, Clone, PartialEq)]
pub enum NpWitness {
    Factors(Vec<u64>),
    Assignment(Vec<bool>),
}

/// Checks Bob's claimed answer exactly. `Ok(false)` means a well-formed
/// answer that is wrong; `Err` means the answer does not even have the
/// right shape for the instance.
pub fn verify_np_answer(instance: &NpInstance, answer: &NpWitness) -> Result<bool, HonestyError> {
    match (instance, answer) {
        (NpInstance::Factoring(n), NpWitness::Factors(factors)) => {
            if *n < 2 {
                return Err(HonestyError::Malformed(format!("{n} has no factorisation")));
            }
            if factors.len() < 2 {
                return Err(HonestyError::Malformed(format!(
                    "expected at least two factors, got {}",
                    factors.len()
                )));
            }
            if factors.iter().any(|&f| f <= 1) {
                return Ok(false);
            }
            let product = factors.iter().try_fold(1u64, |acc, &f| acc.checked_mul(f));
            Ok(product == Some(*n))
        }
        (NpInstance::Sat(formula), NpWitness::Assignment(a)) => {
            if a.len() != formula.num_vars() {
                return Err(HonestyError::Malformed(format!(
                    "assignment has {} values for {} variables",
                    a.len(),
                    formula.num_vars()
                )));
            }
            Ok(formula.evaluate(a)?)
        }
        _ => Err(HonestyError::Malformed(
            "witness kind does not match the instance".into(),
        )),
    }
}

/// A test computation with a predictable outcome: prepare a basis state
/// with X gates, run the circuit, read the measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub label: String,
    pub prepare: usize,
    pub circuit: Circuit,
}

impl Probe {
    fn new(label: &str, prepare: usize, text: &str) -> Self {
        Self {
            label: label.to_string(),
            prepare,
            circuit: Circuit::parse(text).expect("built-in probe"),
        }
    }

    pub fn input(&self) -> Result<StateVector, Error> {
        StateVector::basis(self.circuit.num_qubits(), self.prepare)
    }

    /// Honest outcome distribution, by direct simulation.
    pub fn expected(&self) -> Result<Vec<f64>, Error> {
        self.circuit.measurement_distribution(&self.input()?)
    }
}

/// Probes for one gate kind. Only states Alice can make (basis states) are
/// used, and every probe has a deterministic honest outcome, so a wrong
/// answer always counts against Bob.
pub fn probes_for(kind: GateKind) -> Vec<Probe> {
    match kind {
        GateKind::H => vec![
            Probe::new("HH|0>", 0, "H 0\nH 0\nM 0\n"),
            Probe::new("HH|1>", 1, "H 0\nH 0\nM 0\n"),
        ],
        GateKind::Cnot => (0..4)
            .map(|b| {
                Probe::new(
                    &format!("CNOT|{}{}>", b & 1, b >> 1),
                    b,
                    "CNOT 0 1\nM 0\nM 1\n",
                )
            })
            .collect(),
        GateKind::T => vec![
            Probe::new("T|0>", 0, "T 0\nM 0\n"),
            Probe::new("T|1>", 1, "T 0\nM 0\n"),
            Probe::new("HTTTTH|0>", 0, "H 0\nT 0\nT 0\nT 0\nT 0\nH 0\nM 0\n"),
        ],
        GateKind::Measure => vec![
            Probe::new("M|0>", 0, "M 0\n"),
            Probe::new("M|1>", 1, "M 0\n"),
        ],
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    pub probe: String,
    /// Measurement record, or `None` if Bob never answered.
    pub outcome: Option<Vec<bool>>,
    pub expected: Vec<f64>,
}

impl TrialRecord {
    /// `trial=<i> probe=<label> outcome=<bits> expected=<dist>`
    pub fn to_record(&self) -> String {
        let outcome = match &self.outcome {
            Some(bits) => bits.iter().map(|&b| if b { '1' } else { '0' }).collect(),
            None => "abort".to_string(),
        };
        let expected: Vec<String> = self.expected.iter().map(|p| format!("{p:.4}")).collect();
        format!(
            "trial={} probe={} outcome={} expected={}",
            self.trial,
            self.probe,
            outcome,
            expected.join(",")
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpotCheckReport {
    pub kind: GateKind,
    pub strategy: String,
    pub threshold: f64,
    /// Trial-weighted total-variation distance between the observed and
    /// honest outcome distributions of each probe; a missing answer is an
    /// outcome honest Bob never produces.
    pub deviation: f64,
    pub records: Vec<TrialRecord>,
}

impl SpotCheckReport {
    pub fn trials(&self) -> usize {
        self.records.len()
    }

    pub fn passes(&self) -> bool {
        self.deviation <= self.threshold
    }

    pub fn to_records(&self) -> String {
        let mut out: String = self.records.iter().map(|r| r.to_record() + "\n").collect();
        out.push_str(&format!(
            "gate={} bob={} trials={} deviation={:.4} threshold={:.4} result={}\n",
            self.kind.label(),
            self.strategy,
            self.trials(),
            self.deviation,
            self.threshold,
            if self.passes() { "pass" } else { "fail" }
        ));
        out
    }
}

impl fmt::Display for SpotCheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let aborted = self.records.iter().filter(|r| r.outcome.is_none()).count();
        writeln!(
            f,
            "spot check of {} against a {} Bob: {} trials",
            self.kind.label(),
            self.strategy,
            self.trials()
        )?;
        writeln!(f, "  aborted trials: {aborted}")?;
        writeln!(
            f,
            "  deviation from honest outcomes: {:.4} (threshold {:.4})",
            self.deviation, self.threshold
        )?;
        write!(
            f,
            "  {}",
            if self.passes() {
                "PASS: consistent with an honest Bob"
            } else {
                "FAIL: Bob is cheating"
            }
        )
    }
}

fn outcome_index(bits: &[bool]) -> usize {
    bits.iter()
        .enumerate()
        .fold(0, |acc, (i, &b)| acc | (usize::from(b) << i))
}

/// Trial-weighted total variation over probes.
fn deviation(records: &[TrialRecord], probes: &[Probe]) -> f64 {
    if records.is_empty() {
        return 0.0;
    }
    let mut total = 0.0;
    for probe in probes {
        let trials: Vec<&TrialRecord> = records.iter().filter(|r| r.probe == probe.label).collect();
        if trials.is_empty() {
            continue;
        }
        let expected = &trials[0].expected;
        let mut counts = vec![0usize; expected.len()];
        let mut aborted = 0usize;
        for r in &trials {
            match &r.outcome {
                Some(bits) => counts[outcome_index(bits)] += 1,
                None => aborted += 1,
            }
        }
        let n = trials.len() as f64;
        let tv = 0.5
            * (counts
                .iter()
                .zip(expected)
                .map(|(&c, &p)| (c as f64 / n - p).abs())
                .sum::<f64>()
                + aborted as f64 / n);
        total += tv * n;
    }
    total / records.len() as f64
}

fn run_trial(
    strategy: &BobStrategy,
    probes: &[Probe],
    expected: &[Vec<f64>],
    trial: usize,
    seed: u64,
) -> Result<TrialRecord, HonestyError> {
    let trial_seed = derive_seed(seed, trial as u64);
    let mut rng = SeededRng::new(trial_seed);
    let which = rng.below(probes.len());
    let probe = &probes[which];
    let outcome = match run_circuit_on(
        &probe.circuit,
        &probe.input()?,
        strategy.clone(),
        &RunOptions::plain(derive_seed(trial_seed, 1)),
    ) {
        Ok(out) => Some(out.measurements),
        Err(failure) => match failure.error {
            ProtocolError::Aborted { .. } => None,
            other => return Err(other.into()),
        },
    };
    Ok(TrialRecord {
        trial,
        probe: probe.label.clone(),
        outcome,
        expected: expected[which].clone(),
    })
}

/// Runs `trials` probes of `kind` against a fresh Bob each time (trial `i`
/// uses `derive_seed(seed, i)`) and compares with the honest prediction.
pub fn spot_check(
    strategy: &BobStrategy,
    kind: GateKind,
    trials: usize,
    threshold: f64,
    seed: u64,
) -> Result<SpotCheckReport, HonestyError> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is needed".into()).into());
    }
    let probes = probes_for(kind);
    let expected = probes
        .iter()
        .map(Probe::expected)
        .collect::<Result<Vec<_>, _>>()?;
    let records = (0..trials)
        .map(|t| run_trial(strategy, &probes, &expected, t, seed))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpotCheckReport {
        kind,
        strategy: strategy.name().to_string(),
        threshold,
        deviation: deviation(&records, &probes),
        records,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterleavedReport {
    pub test: SpotCheckReport,
    pub data_runs: usize,
    /// Every probe's message structure is the same on test and data inputs.
    pub structures_match: bool,
    /// Worst trace distance between Bob's views on a probe input and a data input.
    pub max_view_distance: f64,
}

impl InterleavedReport {
    pub fn indistinguishable(&self) -> bool {
        self.structures_match && self.max_view_distance <= SECURITY_TOL
    }
}

/// Mixes `data_every − 1` data runs (the probe circuits on arbitrary input
/// states) between consecutive test trials. Bob, being memoryless, gives the
/// test trials exactly the statistics of a test-only run, and the report
/// also checks he could not tell the two kinds of run apart.
pub fn interleaved_spot_check(
    strategy: &BobStrategy,
    kind: GateKind,
    trials: usize,
    data_every: usize,
    threshold: f64,
    seed: u64,
) -> Result<InterleavedReport, HonestyError> {
    if trials == 0 || data_every == 0 {
        return Err(Error::InvalidArgument("trials and data_every must be positive".into()).into());
    }
    let probes = probes_for(kind);
    let expected = probes
        .iter()
        .map(Probe::expected)
        .collect::<Result<Vec<_>, _>>()?;
    let mut data_rng = SeededRng::new(derive_seed(seed, u64::MAX));
    let mut records = Vec::with_capacity(trials);
    let mut data_runs = 0;
    for t in 0..trials {
        records.push(run_trial(strategy, &probes, &expected, t, seed)?);
        for _ in 1..data_every {
            let probe = &probes[data_rng.below(probes.len())];
            let data = StateVector::random(probe.circuit.num_qubits(), &mut data_rng)?;
            // The outcome belongs to Alice's real computation and is not scored.
            let _ = run_circuit_on(
                &probe.circuit,
                &data,
                strategy.clone(),
                &RunOptions::plain(data_rng.below(usize::MAX) as u64),
            );
            data_runs += 1;
        }
    }
    let mut structures_match = true;
    let mut max_view_distance: f64 = 0.0;
    for probe in &probes {
        let data = StateVector::random(probe.circuit.num_qubits(), &mut data_rng)?;
        let a = run_circuit_on(
            &probe.circuit,
            &probe.input()?,
            BobStrategy::Honest,
            &RunOptions::plain(0),
        );
        let b = run_circuit_on(
            &probe.circuit,
            &data,
            BobStrategy::Honest,
            &RunOptions::plain(1),
        );
        match (a, b) {
            (Ok(a), Ok(b)) => {
                structures_match &= a.transcript.structure() == b.transcript.structure()
            }
            _ => structures_match = false,
        }
        let scenario = CircuitScenario {
            circuit: &probe.circuit,
            options: RunOptions::plain(0),
        };
        let d = view_independence(&scenario, &probe.input()?, &data)
            .map_err(|e| Error::Precondition(e.to_string()))?;
        max_view_distance = max_view_distance.max(d);
    }
    Ok(InterleavedReport {
        test: SpotCheckReport {
            kind,
            strategy: strategy.name().to_string(),
            threshold,
            deviation: deviation(&records, &probes),
            records,
        },
        data_runs,
        structures_match,
        max_view_distance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factoring_examples() {
        let n = NpInstance::Factoring(15);
        assert!(verify_np_answer(&n, &NpWitness::Factors(vec![3, 5])).unwrap());
        assert!(!verify_np_answer(&n, &NpWitness::Factors(vec![1, 15])).unwrap());
        assert!(!verify_np_answer(&n, &NpWitness::Factors(vec![3, 7])).unwrap());
        assert!(!verify_np_answer(&n, &NpWitness::Factors(vec![u64::MAX, 3])).unwrap());
        assert!(verify_np_answer(&n, &NpWitness::Factors(vec![15])).is_err());
        assert!(verify_np_answer(&n, &NpWitness::Assignment(vec![true])).is_err());
    }

    #[test]
    fn probe_expectations_are_deterministic() {
        for kind in [GateKind::H, GateKind::Cnot, GateKind::T, GateKind::Measure] {
            for p in probes_for(kind) {
                let e = p.expected().unwrap();
                assert!(e.iter().any(|&x| (x - 1.0).abs() < 1e-12), "{}", p.label);
            }
        }
    }

    #[test]
    fn record_format() {
        let r = TrialRecord {
            trial: 3,
            probe: "HH|0>".into(),
            outcome: Some(vec![true]),
            expected: vec![1.0, 0.0],
        };
        assert_eq!(
            r.to_record(),
            "trial=3 probe=HH|0> outcome=1 expected=1.0000,0.0000"
        );
    }
}
