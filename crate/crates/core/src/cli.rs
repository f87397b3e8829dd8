//! Command-line front end. [`run`] parses arguments, writes the report to
//! `out` and returns the process exit code.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use crate::classical::{
    blind_sat, brute_force_solve, tilde_level, unblind_assignment, CnfFormula, ReversibleGate,
};
use crate::hierarchy::{classify, GateSpec, MAX_LEVEL};
use crate::honesty::{spot_check, verify_np_answer, HonestyError, NpInstance, NpWitness};
use crate::protocols::fixtures::{CnotWithoutControlFix, KeyReuseT};
use crate::protocols::{
    protocol_for, run_circuit, AssistedCnot, AssistedHadamard, AssistedT, BobStrategy, Circuit,
    GateKind, GateProtocol, ProtocolError, RunFailure, RunOptions,
};
use crate::security::{
    security_report, test_inputs, CircuitScenario, GateScenario, MeasureScenario, Scenario,
};
use crate::simulator::{derive_seed, SeededRng, StateVector, UnitaryMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ABORT: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "blindgate",
    version,
    about = "Secure assisted quantum computation with a Pauli-only client"
)]
struct Cli {
    /// Report style.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BobArg {
    Honest,
    WrongGate,
    Scramble,
    Lie,
    Drop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Plain,
    Blind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GateArg {
    H,
    Cnot,
    T,
    Measure,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a circuit file with Bob's help.
    Run {
        circuit: PathBuf,
        #[arg(long, value_enum, default_value_t = BobArg::Honest)]
        bob: BobArg,
        /// Gate a wrong-gate Bob applies instead of the requested one.
        #[arg(long, default_value = "X")]
        substitute: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
        mode: ModeArg,
        /// Blind mode: pad to this many request cycles.
        #[arg(long)]
        cycles: Option<usize>,
        #[arg(long, env = "BLINDGATE_SEED", default_value_t = 0)]
        seed: u64,
        /// Number of sampled runs; 0 prints the exact outcome distribution.
        #[arg(long, default_value_t = 1)]
        shots: usize,
    },
    /// Check that Bob's view is maximally mixed at every round.
    VerifySecurity {
        /// Protocol name (hadamard, cnot, t-gate, measure, key-reuse-t,
        /// cnot-missing-fix, or a built-in gate) or a circuit file.
        target: String,
        #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
        mode: ModeArg,
        /// Number of input states checked.
        #[arg(long, default_value_t = 20)]
        inputs: usize,
        #[arg(long, env = "BLINDGATE_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Place a gate in the hierarchy.
    Classify {
        /// Built-in gate name or a matrix file (one row per line, entries like `0.5+0.5i`).
        gate: String,
        #[arg(long, default_value_t = 4)]
        max_k: usize,
        /// Use the classical hierarchy over bit permutations.
        #[arg(long)]
        classical: bool,
    },
    /// Spot-check a Bob on probes with known answers.
    Honesty {
        #[arg(long, value_enum, default_value_t = BobArg::Honest)]
        adversary: BobArg,
        #[arg(long, default_value = "X")]
        substitute: String,
        #[arg(long, value_enum, default_value_t = GateArg::All)]
        gate: GateArg,
        #[arg(long, default_value_t = crate::honesty::DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = crate::honesty::DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long, env = "BLINDGATE_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Verify an answer to an NP problem: `np-check N F1 F2 …` for
    /// factoring, or `np-check --cnf FILE BITS` for satisfiability.
    NpCheck {
        #[arg(long)]
        cnf: Option<PathBuf>,
        #[arg(required = true, num_args = 1..)]
        values: Vec<String>,
    },
    /// Blind a SAT instance, let Bob solve it, and unblind his answer.
    BlindSatDemo {
        /// DIMACS file; a random planted 3-CNF is used when absent.
        cnf: Option<PathBuf>,
        #[arg(long, default_value_t = 10)]
        vars: usize,
        #[arg(long, default_value_t = 42)]
        clauses: usize,
        #[arg(long, env = "BLINDGATE_SEED", default_value_t = 0)]
        seed: u64,
    },
}

/// Failure carrying the exit code it maps to.
struct Exit {
    code: i32,
    message: String,
}

impl Exit {
    fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Exit {
    fn from(e: std::io::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<crate::Error> for Exit {
    fn from(e: crate::Error) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<ProtocolError> for Exit {
    fn from(e: ProtocolError) -> Self {
        let code = match e {
            ProtocolError::Aborted { .. } => EXIT_ABORT,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<crate::security::SecurityError> for Exit {
    fn from(e: crate::security::SecurityError) -> Self {
        Self::usage(e.to_string())
    }
}

impl From<HonestyError> for Exit {
    fn from(e: HonestyError) -> Self {
        Self::usage(e.to_string())
    }
}

type CmdResult = Result<i32, Exit>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    let records = cli.format == Format::Records;
    let result = match cli.command {
        Command::Run {
            circuit,
            bob,
            substitute,
            mode,
            cycles,
            seed,
            shots,
        } => cmd_run(
            out,
            records,
            &circuit,
            bob,
            &substitute,
            mode,
            cycles,
            seed,
            shots,
        ),
        Command::VerifySecurity {
            target,
            mode,
            inputs,
            seed,
        } => cmd_verify_security(out, records, &target, mode, inputs, seed),
        Command::Classify {
            gate,
            max_k,
            classical,
        } => cmd_classify(out, records, &gate, max_k, classical),
        Command::Honesty {
            adversary,
            substitute,
            gate,
            trials,
            threshold,
            seed,
        } => cmd_honesty(
            out,
            records,
            adversary,
            &substitute,
            gate,
            trials,
            threshold,
            seed,
        ),
        Command::NpCheck { cnf, values } => cmd_np_check(out, records, cnf.as_deref(), &values),
        Command::BlindSatDemo {
            cnf,
            vars,
            clauses,
            seed,
        } => cmd_blind_sat(out, records, cnf.as_deref(), vars, clauses, seed),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

fn read(path: &Path) -> Result<String, Exit> {
    std::fs::read_to_string(path).map_err(|e| Exit::usage(format!("{}: {e}", path.display())))
}

fn strategy(arg: BobArg, substitute: &str) -> Result<BobStrategy, Exit> {
    Ok(match arg {
        BobArg::Honest => BobStrategy::Honest,
        BobArg::WrongGate => {
            let spec = GateSpec::named(substitute)
                .ok_or_else(|| Exit::usage(format!("unknown gate `{substitute}`")))?;
            BobStrategy::WrongGate(spec.unitary)
        }
        BobArg::Scramble => BobStrategy::Scramble,
        BobArg::Lie => BobStrategy::LieOnMeasurement,
        BobArg::Drop => BobStrategy::Drop,
    })
}

fn bits_text(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

fn index_bits(index: usize, width: usize) -> String {
    (0..width)
        .map(|i| if (index >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

fn write_failure(out: &mut dyn Write, records: bool, failure: &RunFailure) -> Result<(), Exit> {
    if records {
        write!(out, "{}", failure.transcript.to_log())?;
        writeln!(out, "abort rounds={}", failure.transcript.round_count())?;
    } else {
        writeln!(out, "protocol aborted: {failure}")?;
        writeln!(out, "partial transcript:")?;
        for line in failure.transcript.to_log().lines() {
            writeln!(out, "  {line}")?;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_run(
    out: &mut dyn Write,
    records: bool,
    path: &Path,
    bob: BobArg,
    substitute: &str,
    mode: ModeArg,
    cycles: Option<usize>,
    seed: u64,
    shots: usize,
) -> CmdResult {
    let circuit = Circuit::parse(&read(path)?)
        .map_err(|e| Exit::usage(format!("{}: {e}", path.display())))?;
    let strategy = strategy(bob, substitute)?;
    let mut options = match mode {
        ModeArg::Plain => RunOptions::plain(seed),
        ModeArg::Blind => RunOptions::blind(seed),
    };
    options.cycles = cycles;
    let width = circuit.measurement_count();
    let mut code = EXIT_OK;

    let first = match run_circuit(
        &circuit,
        strategy.clone(),
        &options.clone().exact(shots == 0),
    ) {
        Ok(o) => o,
        Err(failure) => {
            write_failure(out, records, &failure)?;
            return Ok(match failure.error {
                ProtocolError::Aborted { .. } => EXIT_ABORT,
                _ => EXIT_USAGE,
            });
        }
    };
    let input = StateVector::prepare_zero(circuit.num_qubits().max(1))?;
    let direct_circuit = if circuit.num_qubits() == 0 {
        Circuit::new(1)
    } else {
        circuit.clone()
    };

    if records {
        write!(out, "{}", first.transcript.to_log())?;
    } else {
        let labels = first.transcript.request_labels();
        writeln!(
            out,
            "circuit: {} gate(s) on {} qubit(s), {} mode, bob={}",
            circuit.len(),
            circuit.num_qubits(),
            if mode == ModeArg::Blind {
                "blind"
            } else {
                "plain"
            },
            strategy.name()
        )?;
        writeln!(
            out,
            "transcript: {} round(s): {}",
            labels.len(),
            labels.join(" ")
        )?;
    }

    if shots == 0 {
        let dist = first.exact_distribution.clone().unwrap_or_default();
        let ideal = direct_circuit.measurement_distribution(&input)?;
        let tv = 0.5
            * dist
                .iter()
                .zip(&ideal)
                .map(|(a, b)| (a - b).abs())
                .sum::<f64>();
        if !records {
            writeln!(out, "exact outcome distribution:")?;
        }
        for (i, p) in dist.iter().enumerate() {
            if *p > 1e-12 {
                if records {
                    writeln!(out, "outcome={} p={p:.6}", index_bits(i, width))?;
                } else {
                    writeln!(out, "  {}  {p:.6}", index_bits(i, width))?;
                }
            }
        }
        if records {
            writeln!(out, "tv_distance={tv:.3e}")?;
        } else {
            writeln!(out, "total variation from direct simulation: {tv:.3e}")?;
        }
        if strategy == BobStrategy::Honest && tv > 1e-9 {
            code = EXIT_VERIFICATION;
        }
    } else {
        let mut outcomes = vec![first.measurements.clone()];
        for shot in 1..shots {
            let mut o = options.clone();
            o.seed = derive_seed(seed, shot as u64);
            match run_circuit(&circuit, strategy.clone(), &o) {
                Ok(r) => outcomes.push(r.measurements),
                Err(failure) => {
                    write_failure(out, records, &failure)?;
                    return Ok(EXIT_ABORT);
                }
            }
        }
        if width > 0 {
            if records {
                for (i, o) in outcomes.iter().enumerate() {
                    writeln!(out, "shot={i} outcome={}", bits_text(o))?;
                }
            } else {
                let mut counts = std::collections::BTreeMap::new();
                for o in &outcomes {
                    *counts.entry(bits_text(o)).or_insert(0usize) += 1;
                }
                writeln!(out, "measurement counts over {shots} shot(s):")?;
                for (k, v) in counts {
                    writeln!(out, "  {k}  {v}")?;
                }
            }
        }
        let direct = direct_circuit.simulate_with_outcomes(&input, &first.measurements)?;
        let fidelity = match direct {
            Some((state, _)) => first.final_state.fidelity(&state)?,
            None => 0.0,
        };
        if records {
            writeln!(out, "fidelity={fidelity:.12}")?;
        } else {
            writeln!(
                out,
                "fidelity with direct simulation (first shot): {fidelity:.12}"
            )?;
        }
        if strategy == BobStrategy::Honest && fidelity < 1.0 - 1e-9 {
            code = EXIT_VERIFICATION;
        }
    }
    Ok(code)
}

fn named_protocol(target: &str) -> Result<Option<Box<dyn GateProtocol>>, Exit> {
    let p: Box<dyn GateProtocol> = match target.to_ascii_lowercase().as_str() {
        "hadamard" | "h" => Box::new(AssistedHadamard::new()),
        "cnot" => Box::new(AssistedCnot::new()),
        "t-gate" | "t" => Box::new(AssistedT::new()),
        "key-reuse-t" => Box::new(KeyReuseT::new()),
        "cnot-missing-fix" => Box::new(CnotWithoutControlFix::new()),
        other => match GateSpec::named(other) {
            Some(spec) => protocol_for(&spec).map_err(Exit::from)?,
            None => return Ok(None),
        },
    };
    Ok(Some(p))
}

fn cmd_verify_security(
    out: &mut dyn Write,
    records: bool,
    target: &str,
    mode: ModeArg,
    inputs: usize,
    seed: u64,
) -> CmdResult {
    let options = match mode {
        ModeArg::Plain => RunOptions::plain(seed),
        ModeArg::Blind => RunOptions::blind(seed),
    };
    let path = Path::new(target);
    let circuit;
    let protocol;
    let (scenario, name): (Box<dyn Scenario + '_>, String) =
        if target.eq_ignore_ascii_case("measure") {
            (Box::new(MeasureScenario), "measure".to_string())
        } else if let Some(p) = named_protocol(target)? {
            protocol = p;
            let name = protocol.name().to_string();
            (Box::new(GateScenario(protocol.as_ref())), name)
        } else if path.exists() {
            let parsed = Circuit::parse(&read(path)?)
                .map_err(|e| Exit::usage(format!("{}: {e}", path.display())))?;
            circuit = if parsed.num_qubits() == 0 {
                Circuit::new(1)
            } else {
                parsed
            };
            (
                Box::new(CircuitScenario {
                    circuit: &circuit,
                    options,
                }),
                target.to_string(),
            )
        } else {
            return Err(Exit::usage(format!(
                "`{target}` is neither a known protocol nor a circuit file"
            )));
        };
    let states = test_inputs(scenario.data_qubits(), inputs.max(1), seed)?;
    let report = security_report(&name, scenario.as_ref(), &states)?;
    if records {
        write!(out, "{}", report.to_records())?;
    } else {
        writeln!(out, "{report}")?;
    }
    Ok(if report.passes() {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    })
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`.
fn parse_complex(token: &str) -> Option<Complex64> {
    let t = token.trim();
    if let Some(body) = t.strip_suffix('i') {
        // Split at the last sign that is not an exponent sign or the leading sign.
        let bytes = body.as_bytes();
        let split = (1..bytes.len()).rev().find(|&k| {
            (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E')
        });
        let (re, im) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let im = match im {
            "" | "+" => 1.0,
            "-" => -1.0,
            s => s.parse().ok()?,
        };
        Some(Complex64::new(re.parse().ok()?, im))
    } else {
        Some(Complex64::new(t.parse().ok()?, 0.0))
    }
}

fn parse_matrix(text: &str) -> Result<UnitaryMatrix, crate::Error> {
    let mut rows = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|tok| {
                parse_complex(tok).ok_or_else(|| crate::Error::Parse {
                    line: idx + 1,
                    message: format!("`{tok}` is not a complex number"),
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
    }
    UnitaryMatrix::from_rows(&rows, 1e-6)
}

fn cmd_classify(
    out: &mut dyn Write,
    records: bool,
    gate: &str,
    max_k: usize,
    classical: bool,
) -> CmdResult {
    if classical {
        let g = ReversibleGate::named(gate)
            .ok_or_else(|| Exit::usage(format!("unknown classical gate `{gate}`")))?;
        let level = tilde_level(&g, max_k)?;
        let text = level.map_or_else(|| format!("beyond {max_k}"), |k| k.to_string());
        if records {
            writeln!(
                out,
                "gate={} hierarchy=classical level={text}",
                gate.to_ascii_uppercase()
            )?;
        } else {
            writeln!(out, "{}: classical level {text}", gate.to_ascii_uppercase())?;
        }
        return Ok(EXIT_OK);
    }
    if max_k == 0 || max_k > MAX_LEVEL {
        return Err(Exit::usage(format!("--max-k must be in 1..={MAX_LEVEL}")));
    }
    let (name, u) = match GateSpec::named(gate) {
        Some(spec) => (spec.name, spec.unitary),
        None => {
            let path = Path::new(gate);
            if !path.exists() {
                return Err(Exit::usage(format!(
                    "unknown gate `{gate}` and no such matrix file"
                )));
            }
            (gate.to_string(), parse_matrix(&read(path)?)?)
        }
    };
    let verdict = classify(&u, max_k)?;
    if records {
        let level = verdict
            .level
            .map_or_else(|| format!("beyond {max_k}"), |k| k.to_string());
        writeln!(out, "gate={name} level={level}")?;
        for w in &verdict.witnesses {
            let image = w
                .image_pauli
                .as_ref()
                .map_or_else(|| "non-pauli".to_string(), |p| p.to_string());
            let image_level = w
                .image_level
                .map_or_else(|| "beyond".to_string(), |k| k.to_string());
            writeln!(
                out,
                "generator={} image={image} image_level={image_level}",
                w.generator
            )?;
        }
    } else {
        writeln!(out, "{name}")?;
        writeln!(out, "{verdict}")?;
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn cmd_honesty(
    out: &mut dyn Write,
    records: bool,
    adversary: BobArg,
    substitute: &str,
    gate: GateArg,
    trials: usize,
    threshold: f64,
    seed: u64,
) -> CmdResult {
    let bob = strategy(adversary, substitute)?;
    let kinds = match gate {
        GateArg::H => vec![GateKind::H],
        GateArg::Cnot => vec![GateKind::Cnot],
        GateArg::T => vec![GateKind::T],
        GateArg::Measure => vec![GateKind::Measure],
        GateArg::All => vec![GateKind::H, GateKind::Cnot, GateKind::T, GateKind::Measure],
    };
    let mut all_pass = true;
    for (i, kind) in kinds.into_iter().enumerate() {
        let report = spot_check(&bob, kind, trials, threshold, derive_seed(seed, i as u64))?;
        all_pass &= report.passes();
        if records {
            write!(out, "{}", report.to_records())?;
        } else {
            writeln!(out, "{report}")?;
        }
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_VERIFICATION })
}

fn cmd_np_check(
    out: &mut dyn Write,
    records: bool,
    cnf: Option<&Path>,
    values: &[String],
) -> CmdResult {
    let (instance, witness, what) = match cnf {
        Some(path) => {
            let formula = CnfFormula::parse_dimacs(&read(path)?)
                .map_err(|e| Exit::usage(format!("{}: {e}", path.display())))?;
            let digits: String = values.concat();
            let bits = digits
                .chars()
                .filter(|c| !matches!(c, ',' | ' '))
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Exit::usage(format!("`{other}` is not a bit"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            (
                NpInstance::Sat(formula),
                NpWitness::Assignment(bits),
                "satisfying assignment",
            )
        }
        None => {
            let nums = values
                .iter()
                .map(|v| {
                    v.parse::<u64>()
                        .map_err(|_| Exit::usage(format!("`{v}` is not a nonnegative integer")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            (
                NpInstance::Factoring(nums[0]),
                NpWitness::Factors(nums[1..].to_vec()),
                "factorisation",
            )
        }
    };
    match verify_np_answer(&instance, &witness) {
        Ok(ok) => {
            if records {
                writeln!(out, "result={}", if ok { "verified" } else { "rejected" })?;
            } else {
                writeln!(out, "{what}: {}", if ok { "verified" } else { "rejected" })?;
            }
            Ok(if ok { EXIT_OK } else { EXIT_VERIFICATION })
        }
        Err(HonestyError::Malformed(m)) => Err(Exit::usage(format!("malformed answer: {m}"))),
        Err(e) => Err(e.into()),
    }
}

fn cmd_blind_sat(
    out: &mut dyn Write,
    records: bool,
    cnf: Option<&Path>,
    vars: usize,
    clauses: usize,
    seed: u64,
) -> CmdResult {
    let mut rng = SeededRng::new(seed);
    let formula = match cnf {
        Some(path) => CnfFormula::parse_dimacs(&read(path)?)
            .map_err(|e| Exit::usage(format!("{}: {e}", path.display())))?,
        None => CnfFormula::random_planted_3cnf(vars, clauses, &mut rng)?.0,
    };
    let (blinded, mask) = blind_sat(&formula, &mut rng);
    let answer = brute_force_solve(&blinded)?;
    let (unblinded, verified) = match &answer {
        Some(a) => {
            let u = unblind_assignment(a, &mask)?;
            let ok = formula.evaluate(&u)?;
            (Some(u), ok)
        }
        None => (None, false),
    };
    if records {
        writeln!(
            out,
            "vars={} clauses={}",
            formula.num_vars(),
            formula.clauses().len()
        )?;
        writeln!(out, "mask={}", bits_text(&mask))?;
        match (&answer, &unblinded) {
            (Some(a), Some(u)) => {
                writeln!(out, "bob_answer={}", bits_text(a))?;
                writeln!(out, "unblinded={}", bits_text(u))?;
            }
            _ => writeln!(out, "bob_answer=unsatisfiable")?,
        }
        writeln!(out, "verified={verified}")?;
    } else {
        writeln!(
            out,
            "formula: {} variables, {} clauses",
            formula.num_vars(),
            formula.clauses().len()
        )?;
        writeln!(out, "secret flip mask:   {}", bits_text(&mask))?;
        writeln!(out, "blinded formula sent to Bob:")?;
        for line in blinded.to_dimacs().lines() {
            writeln!(out, "  {line}")?;
        }
        match (&answer, &unblinded) {
            (Some(a), Some(u)) => {
                writeln!(out, "Bob's assignment:   {}", bits_text(a))?;
                writeln!(out, "unblinded:          {}", bits_text(u))?;
                writeln!(
                    out,
                    "satisfies original: {}",
                    if verified { "yes" } else { "no" }
                )?;
            }
            _ => writeln!(out, "Bob reports the blinded formula unsatisfiable")?,
        }
    }
    Ok(if verified { EXIT_OK } else { EXIT_VERIFICATION })
}
