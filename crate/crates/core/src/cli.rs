//! `qnd` command-line front end.
//!
//! Exit codes: 0 success, 1 failed verification, 2 usage or validation
//! error, 3 a real-amplitude-only estimator was requested for a state that is
//! not real up to a global phase.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::circuits::{
    concurrence_circuit, eigenstate_check, qnd_repeatability, run_exact, universal_circuit, Circuit, CircuitMode,
    Experiment, RunResult, CONCURRENCE_OBSERVABLE,
};
use crate::error::Error;
use crate::harness::{derive_seed, reconstruct_complementarity, reconstruct_from_exact, sample_sharded, Frequencies, DEFAULT_SHARD_SIZE};
use crate::observables::{
    bell_from_computational, computational_from_bell, concurrence_pure, observables_from_bell, observables_of_state,
    predictability, variance_sum, visibility, BellCoefficients, ComplementarityReport, Particle,
};
use crate::random::random_real_state;
use crate::report::{amplitude_pairs, estimates_for, ExperimentReport, InputSummary, Report, SimulateResults};
use crate::state::{bit_label, StateVector};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REBIT: i32 = 3;

/// Hand-typed inputs within this distance of unit norm are renormalized.
pub const INPUT_NORM_TOL: f64 = 1e-6;

const IDENTITY_TOL: f64 = 1e-12;
const EIGENSTATE_TOL: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(name = "qnd", version, about = "Non-demolition readout of two-qubit concurrence, visibility and predictability")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run readout circuits exactly or with finite shots and print a JSON report.
    Simulate(SimulateArgs),
    /// Check the complementarity identities and non-demolition properties.
    Verify(VerifyArgs),
    /// Tabulate the complementarity quantities over a set of Bell coefficients.
    Sweep(SweepArgs),
    /// Re-estimate the counts stored in a simulate report.
    Estimate(EstimateArgs),
}

#[derive(Debug, Args)]
pub struct StateArgs {
    /// Real Bell coefficients `alpha,beta,gamma,eta` on ψ⁻, ψ⁺, φ⁻, φ⁺.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "computational")]
    pub bell: Option<String>,
    /// Amplitudes of |00>,|01>,|10>,|11> as `re,im` pairs (eight numbers).
    #[arg(long, allow_hyphen_values = true)]
    pub computational: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Concurrence,
    Predictability,
    Visibility,
    All,
    Fig1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, value_enum, default_value = "all")]
    pub mode: ModeArg,
    /// Number of shots per experiment; 0 reports exact probabilities only.
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
    #[arg(long, env = "QND_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Worker shards for sampling. Counts do not depend on this.
    #[arg(long)]
    pub shards: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub state: StateArgs,
    /// Check this many random real states instead of a given one.
    #[arg(long, conflicts_with_all = ["bell", "computational"])]
    pub random_real: Option<usize>,
    #[arg(long, env = "QND_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Explicit Bell coefficients `alpha,beta,gamma,eta`; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    pub point: Vec<String>,
    /// Two coefficient indices `i,j` (0 = alpha … 3 = eta) spanning
    /// `cos t · e_i + sin t · e_j`.
    #[arg(long)]
    pub plane: Option<String>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t_start: f64,
    #[arg(long, default_value_t = PI, allow_hyphen_values = true)]
    pub t_end: f64,
    /// Points along the plane, endpoints included.
    #[arg(long, default_value_t = 17)]
    pub steps: usize,
    /// Midpoint grid with this many steps per hyperspherical angle.
    #[arg(long)]
    pub hypersphere: Option<usize>,
    /// Shots per experiment for the estimated columns; 0 omits them.
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
    #[arg(long, env = "QND_SEED", default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// JSON report written by `qnd simulate`.
    #[arg(long)]
    pub report: PathBuf,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Rebit(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Rebit(_) => EXIT_REBIT,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::RebitViolation(_) => CliError::Rebit(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// A state given on the command line.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StateSpec {
    Bell([f64; 4]),
    Computational([[f64; 2]; 4]),
}

fn parse_numbers(text: &str, expected: usize, what: &str) -> CliResult<Vec<f64>> {
    let values = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::Usage(format!("{what}: cannot parse {s:?} as a number"))))
        .collect::<CliResult<Vec<f64>>>()?;
    if values.len() != expected {
        return Err(CliError::Usage(format!("{what}: expected {expected} numbers, got {}", values.len())));
    }
    if values.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Usage(format!("{what}: non-finite value")));
    }
    Ok(values)
}

fn check_input_norm(norm_sqr: f64, what: &str) -> CliResult<()> {
    if (norm_sqr.sqrt() - 1.0).abs() > INPUT_NORM_TOL {
        return Err(CliError::Usage(format!("{what}: norm {} differs from 1 by more than {INPUT_NORM_TOL}", norm_sqr.sqrt())));
    }
    Ok(())
}

fn parse_bell(text: &str) -> CliResult<BellCoefficients> {
    let v = parse_numbers(text, 4, "--bell")?;
    let norm_sqr: f64 = v.iter().map(|x| x * x).sum();
    check_input_norm(norm_sqr, "--bell")?;
    let n = norm_sqr.sqrt();
    Ok(BellCoefficients::new(v[0] / n, v[1] / n, v[2] / n, v[3] / n)?)
}

impl StateSpec {
    pub fn from_args(args: &StateArgs) -> CliResult<Option<StateSpec>> {
        match (&args.bell, &args.computational) {
            (Some(_), Some(_)) => Err(CliError::Usage("give either --bell or --computational, not both".into())),
            (Some(b), None) => Ok(Some(StateSpec::Bell(parse_numbers(b, 4, "--bell")?.try_into().unwrap()))),
            (None, Some(c)) => {
                let v = parse_numbers(c, 8, "--computational")?;
                Ok(Some(StateSpec::Computational(std::array::from_fn(|i| [v[2 * i], v[2 * i + 1]]))))
            }
            (None, None) => Ok(None),
        }
    }

    /// Validated, renormalized state.
    pub fn to_state(&self) -> CliResult<StateVector> {
        match self {
            StateSpec::Bell(c) => {
                let text = c.map(|x| x.to_string()).join(",");
                Ok(computational_from_bell(&parse_bell(&text)?)?)
            }
            StateSpec::Computational(pairs) => {
                let amps: Vec<Complex64> = pairs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
                check_input_norm(amps.iter().map(Complex64::norm_sqr).sum(), "--computational")?;
                Ok(StateVector::normalized(amps)?)
            }
        }
    }
}

/// Parses `argv` and runs the selected subcommand, returning the exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let outcome = match &cli.command {
        Command::Simulate(args) => cmd_simulate(args, stdout),
        Command::Verify(args) => cmd_verify(args, stdout),
        Command::Sweep(args) => cmd_sweep(args, stdout),
        Command::Estimate(args) => cmd_estimate(args, stdout),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let (CliError::Usage(msg) | CliError::Rebit(msg)) = &e;
            let _ = writeln!(stderr, "error: {msg}");
            e.code()
        }
    }
}

/// Fixed-width rendering with 17 significant digits.
pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, body: &[u8]) -> CliResult<()> {
    match out {
        Some(path) => fs::write(path, body)?,
        None => stdout.write_all(body)?,
    }
    Ok(())
}

fn experiments_for(mode: ModeArg) -> Vec<Circuit> {
    match mode {
        ModeArg::Fig1 => vec![concurrence_circuit()],
        ModeArg::Concurrence => vec![universal_circuit(CircuitMode::Concurrence)],
        ModeArg::Predictability => vec![universal_circuit(CircuitMode::Predictability)],
        ModeArg::Visibility => vec![universal_circuit(CircuitMode::Visibility)],
        ModeArg::All => CircuitMode::PRESETS.iter().map(|&m| universal_circuit(m)).collect(),
    }
}

fn shard_count(shots: u64, requested: Option<u64>) -> u64 {
    requested.unwrap_or_else(|| shots.div_ceil(DEFAULT_SHARD_SIZE)).max(1)
}

pub fn simulate(args: &SimulateArgs) -> CliResult<Report<serde_json::Value, SimulateResults>> {
    let spec = StateSpec::from_args(&args.state)?
        .ok_or_else(|| CliError::Usage("simulate needs --bell or --computational".into()))?;
    let state = spec.to_state()?;
    let bell = match bell_from_computational(&state) {
        Ok(c) => Some(c),
        Err(Error::RebitViolation(residue)) => {
            if args.shots > 0 {
                return Err(CliError::Rebit(format!(
                    "sampled estimators need a state that is real up to a global phase (imaginary residue {residue:e})"
                )));
            }
            None
        }
        Err(e) => return Err(e.into()),
    };

    let circuits = experiments_for(args.mode);
    let shards = shard_count(args.shots, args.shards);
    let mut experiments = Vec::with_capacity(circuits.len());
    let mut runs = Vec::with_capacity(circuits.len());
    for (stream, circuit) in circuits.iter().enumerate() {
        let run = run_exact(circuit, &state)?;
        let mut report = ExperimentReport::from_run(&run, circuit.measured());
        if args.shots > 0 {
            let counts = sample_sharded(circuit, &state, args.shots, derive_seed(args.seed, stream as u64), shards)?;
            report.estimates = Some(estimates_for(run.experiment, &counts.frequencies()?)?);
            report.counts = Some(counts);
        } else if bell.is_some() {
            report.estimates = Some(estimates_for(run.experiment, &Frequencies::exact(&run))?);
        }
        experiments.push(report);
        runs.push(run);
    }

    let reconstruction = match (args.mode, bell) {
        (ModeArg::All, Some(_)) => Some(if args.shots > 0 {
            let counts: Vec<_> = experiments.iter().map(|e| e.counts.clone().expect("sampled")).collect();
            reconstruct_complementarity(&counts[0], &counts[1], &counts[2])?
        } else {
            reconstruct_from_exact(&runs[0], &runs[1], &runs[2])?
        }),
        _ => None,
    };

    let echo = json!({
        "command": "simulate",
        "state": spec,
        "mode": args.mode,
        "shots": args.shots,
        "seed": args.seed,
        "shards": shards,
    });
    let input = InputSummary {
        amplitudes: amplitude_pairs(state.amplitudes()),
        rebit: bell.is_some(),
        bell,
        observables: observables_of_state(&state)?,
    };
    Ok(Report::new(echo, SimulateResults { input, experiments, reconstruction }))
}

fn cmd_simulate(args: &SimulateArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let report = simulate(args)?;
    let body = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&report)?;
            s.push('\n');
            s.into_bytes()
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["experiment", "bits", "probability", "count"])?;
            for e in &report.results.experiments {
                let width = e.experiment.ancilla_count();
                for bits in 0..1usize << width {
                    let label = bit_label(bits, width);
                    let p = e.exact.iter().find(|o| o.bits == label).map_or(0.0, |o| o.probability);
                    let count = e.counts.as_ref().map_or(String::new(), |c| c.count(bits).to_string());
                    w.write_record([e.name.clone(), label, fmt17(p), count])?;
                }
            }
            w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?
        }
    };
    emit(&args.out, stdout, &body)?;
    Ok(EXIT_OK)
}

/// One failed check of `qnd verify`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub state_index: usize,
    pub check: String,
    pub deviation: f64,
    pub tolerance: f64,
}

struct Checker {
    failures: Vec<Failure>,
    checks: usize,
    state_index: usize,
}

impl Checker {
    fn check(&mut self, name: &str, deviation: f64, tolerance: f64) {
        self.checks += 1;
        if deviation.is_nan() || deviation.abs() > tolerance {
            self.failures.push(Failure { state_index: self.state_index, check: name.into(), deviation, tolerance });
        }
    }
}

/// Runs every identity and non-demolition check on a real-up-to-phase state.
fn verify_state(state: &StateVector, checker: &mut Checker) -> CliResult<()> {
    let bell = bell_from_computational(state)?;
    let direct = observables_of_state(state)?;
    let closed = observables_from_bell(&bell)?;
    checker.check("triality_residual_1", direct.triality_residual_1, IDENTITY_TOL);
    checker.check("triality_residual_2", direct.triality_residual_2, IDENTITY_TOL);
    checker.check("closed_form_agreement", direct.max_difference(&closed), IDENTITY_TOL);
    checker.check("variance_sum", variance_sum(state)? - 2.0, IDENTITY_TOL);

    for mode in CircuitMode::PRESETS {
        checker.check(&format!("repeatability_{}", mode.name()), qnd_repeatability(mode, state)? - 1.0, IDENTITY_TOL);
    }

    let run = run_exact(&concurrence_circuit(), state)?;
    let estimate = (run.probability(1) - run.probability(0)).abs();
    checker.check("fig1_estimator", estimate - direct.concurrence, IDENTITY_TOL);
    for branch in &run.branches {
        let post = &branch.system_state;
        let tag = bit_label(branch.bits, 1);
        checker.check(&format!("fig1_branch_{tag}_concurrence"), concurrence_pure(post)? - 1.0, IDENTITY_TOL);
        checker.check(&format!("fig1_branch_{tag}_eigenstate"), eigenstate_check(&CONCURRENCE_OBSERVABLE, post)?, EIGENSTATE_TOL);
        for k in Particle::BOTH {
            let q = k.qubit() + 1;
            checker.check(&format!("fig1_branch_{tag}_visibility_{q}"), visibility(post, k)?, IDENTITY_TOL);
            checker.check(&format!("fig1_branch_{tag}_predictability_{q}"), predictability(post, k)?, IDENTITY_TOL);
        }
    }

    let exact: Vec<RunResult> = CircuitMode::PRESETS
        .iter()
        .map(|&m| run_exact(&universal_circuit(m), state))
        .collect::<crate::Result<_>>()?;
    let rebuilt = reconstruct_from_exact(&exact[0], &exact[1], &exact[2])?;
    checker.check("universal_estimators", rebuilt.max_difference(&closed), IDENTITY_TOL);
    Ok(())
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let states: Vec<StateVector> = match (StateSpec::from_args(&args.state)?, args.random_real) {
        (Some(spec), None) => vec![spec.to_state()?],
        (None, Some(n)) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            (0..n).map(|_| random_real_state(&mut rng, 2)).collect()
        }
        _ => return Err(CliError::Usage("verify needs one of --bell, --computational or --random-real".into())),
    };
    let mut checker = Checker { failures: Vec::new(), checks: 0, state_index: 0 };
    for (i, state) in states.iter().enumerate() {
        checker.state_index = i;
        verify_state(state, &mut checker)?;
    }
    let passed = checker.failures.is_empty();
    let report = Report::new(
        json!({
            "command": "verify",
            "state": StateSpec::from_args(&args.state)?,
            "random_real": args.random_real,
            "seed": args.seed,
        }),
        json!({
            "states_checked": states.len(),
            "checks_run": checker.checks,
            "passed": passed,
            "failures": checker.failures,
        }),
    );
    writeln!(stdout, "{}", serde_json::to_string_pretty(&report)?)?;
    Ok(if passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn parse_plane(text: &str) -> CliResult<(usize, usize)> {
    let idx = |s: &str| -> CliResult<usize> {
        match s.trim() {
            "0" | "alpha" => Ok(0),
            "1" | "beta" => Ok(1),
            "2" | "gamma" => Ok(2),
            "3" | "eta" => Ok(3),
            other => Err(CliError::Usage(format!("--plane: unknown coefficient {other:?}"))),
        }
    };
    match text.split(',').collect::<Vec<_>>().as_slice() {
        [a, b] => {
            let (i, j) = (idx(a)?, idx(b)?);
            if i == j {
                return Err(CliError::Usage("--plane needs two different coefficients".into()));
            }
            Ok((i, j))
        }
        _ => Err(CliError::Usage("--plane expects `i,j`".into())),
    }
}

/// Bell coefficient points requested by a sweep, in output order.
pub fn sweep_points(args: &SweepArgs) -> CliResult<Vec<BellCoefficients>> {
    let mut points = args.point.iter().map(|p| parse_bell(p)).collect::<CliResult<Vec<_>>>()?;
    if let Some(plane) = &args.plane {
        let (i, j) = parse_plane(plane)?;
        if args.steps == 0 {
            return Err(CliError::Usage("--steps must be positive".into()));
        }
        for s in 0..args.steps {
            let t = if args.steps == 1 {
                args.t_start
            } else {
                args.t_start + (args.t_end - args.t_start) * s as f64 / (args.steps - 1) as f64
            };
            let mut c = [0.0; 4];
            c[i] = t.cos();
            c[j] = t.sin();
            points.push(BellCoefficients::from_array(c)?);
        }
    }
    if let Some(n) = args.hypersphere {
        let mid = |k: usize, span: f64| span * (k as f64 + 0.5) / n as f64;
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (a, b, c) = (mid(a, PI), mid(b, PI), mid(c, 2.0 * PI));
                    points.push(BellCoefficients::from_array([
                        a.cos(),
                        a.sin() * b.cos(),
                        a.sin() * b.sin() * c.cos(),
                        a.sin() * b.sin() * c.sin(),
                    ])?);
                }
            }
        }
    }
    if points.is_empty() {
        return Err(CliError::Usage("sweep needs --point, --plane or --hypersphere".into()));
    }
    Ok(points)
}

pub const SWEEP_EXACT_COLUMNS: [&str; 11] =
    ["alpha", "beta", "gamma", "eta", "C", "V1", "P1", "V2", "P2", "residual1", "residual2"];
pub const SWEEP_ESTIMATE_COLUMNS: [&str; 12] = [
    "C_est", "C_err", "V1_est", "V1_err", "P1_est", "P1_err", "V2_est", "V2_err", "P2_est", "P2_err",
    "residual1_est", "residual2_est",
];

fn report_columns(r: &ComplementarityReport) -> [f64; 7] {
    [
        r.concurrence,
        r.visibility_1,
        r.predictability_1,
        r.visibility_2,
        r.predictability_2,
        r.triality_residual_1,
        r.triality_residual_2,
    ]
}

fn cmd_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let points = sweep_points(args)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<&str> = SWEEP_EXACT_COLUMNS.to_vec();
    if args.shots > 0 {
        header.extend(SWEEP_ESTIMATE_COLUMNS);
    }
    w.write_record(&header)?;
    for (row, c) in points.iter().enumerate() {
        let mut fields: Vec<String> = c.to_array().iter().chain(&report_columns(&observables_from_bell(c)?)).map(|&x| fmt17(x)).collect();
        if args.shots > 0 {
            let state = computational_from_bell(c)?;
            let counts = CircuitMode::PRESETS
                .iter()
                .enumerate()
                .map(|(k, &m)| {
                    let seed = derive_seed(args.seed, (row * 3 + k) as u64);
                    sample_sharded(&universal_circuit(m), &state, args.shots, seed, shard_count(args.shots, None))
                })
                .collect::<crate::Result<Vec<_>>>()?;
            let r = reconstruct_complementarity(&counts[0], &counts[1], &counts[2])?;
            let e = r.standard_errors.clone().expect("estimated report carries errors");
            fields.extend(
                [
                    r.concurrence,
                    e.concurrence,
                    r.visibility_1,
                    e.visibility_1,
                    r.predictability_1,
                    e.predictability_1,
                    r.visibility_2,
                    e.visibility_2,
                    r.predictability_2,
                    e.predictability_2,
                    r.triality_residual_1,
                    r.triality_residual_2,
                ]
                .map(fmt17),
            );
        }
        w.write_record(&fields)?;
    }
    let body = w.into_inner().map_err(|e| CliError::Usage(e.to_string()))?;
    emit(&args.out, stdout, &body)?;
    Ok(EXIT_OK)
}

/// Re-derives every estimate from the counts stored in a simulate report.
pub fn reestimate(report: &Report<serde_json::Value, SimulateResults>) -> CliResult<serde_json::Value> {
    let mut experiments = Vec::new();
    let mut by_mode = Vec::new();
    for e in &report.results.experiments {
        let Some(counts) = &e.counts else { continue };
        if counts.experiment != e.experiment {
            return Err(CliError::Usage(format!("experiment {} carries counts for {}", e.name, counts.experiment.name())));
        }
        experiments.push(json!({ "name": e.name, "estimates": estimates_for(e.experiment, &counts.frequencies()?)? }));
        by_mode.push(counts.clone());
    }
    let find = |mode: CircuitMode| by_mode.iter().find(|c| c.experiment == Experiment::Universal(mode));
    let reconstruction = match (find(CircuitMode::Concurrence), find(CircuitMode::Predictability), find(CircuitMode::Visibility)) {
        (Some(c), Some(p), Some(v)) => Some(reconstruct_complementarity(c, p, v)?),
        _ => None,
    };
    Ok(json!({ "experiments": experiments, "reconstruction": reconstruction }))
}

fn cmd_estimate(args: &EstimateArgs, stdout: &mut dyn Write) -> CliResult<i32> {
    let text = fs::read_to_string(&args.report)?;
    let report: Report<serde_json::Value, SimulateResults> = serde_json::from_str(&text)?;
    let results = reestimate(&report)?;
    let out = Report::new(json!({ "command": "estimate", "report": args.report }), results);
    writeln!(stdout, "{}", serde_json::to_string_pretty(&out)?)?;
    Ok(EXIT_OK)
}
