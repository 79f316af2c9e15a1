//! Subcommand implementations. Each returns its report plus the exit code the
//! binary should use.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use polycoreset::sample::{narrow_points, separable_labeled, separable_points};
use polycoreset::{
    excentricity, frank_wolfe, margin_certificate, solve_margin, stream_process, theorem2_instance,
    theorem3_instance, verify_instance, AdversarialInstance, AffineSeparator, ClauseReport,
    LabeledPointSet, Partition, PointSet, SolverConfig, Strategy, StreamOptions, StreamReport,
    Theorem,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::args::{
    AdversarialArgs, Cli, Command, DistanceArgs, Format, GenerateArgs, InstanceKind, MarginArgs,
    StrategyArg, StreamArgs,
};
use crate::error::{CliError, EXIT_ITERATION_LIMIT, EXIT_OK, EXIT_UNVERIFIED};
use crate::io;

fn solver_config(epsilon: f64, max_iterations: Option<usize>) -> Result<SolverConfig, CliError> {
    let config = SolverConfig::new(epsilon).map_err(|e| CliError::Invalid(e.to_string()))?;
    match max_iterations {
        Some(n) => config
            .with_max_iterations(n)
            .map_err(|e| CliError::Invalid(e.to_string())),
        None => Ok(config),
    }
}

fn json_only(format: Option<Format>, command: &str) -> Result<(), CliError> {
    match format {
        Some(Format::Csv) => Err(CliError::Usage(format!(
            "{command} reports are JSON only; csv is available for stream"
        ))),
        _ => Ok(()),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
}

/// Writes `text` to `path` if given, otherwise to `stdout`.
fn emit(text: &str, path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut f = create(p)?;
            f.write_all(text.as_bytes())?;
            f.flush()?;
        }
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub witness: Vec<f64>,
    pub norm: f64,
    pub epsilon_target: f64,
    pub epsilon_hat: f64,
    pub worst_index: usize,
    pub coreset_indices: Vec<usize>,
    pub weights: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// diam² / |witness|², a lower estimate of the excentricity.
    pub excentricity_estimate: f64,
    pub size_bound: usize,
    pub within_size_bound: bool,
}

pub fn distance(points: &PointSet, config: &SolverConfig) -> Result<DistanceReport, CliError> {
    let result = frank_wolfe(points, config)?;
    let norm = result.witness_norm();
    let size_bound = result.size_bound(points);
    Ok(DistanceReport {
        witness: result.witness.witness_point(points),
        norm,
        epsilon_target: config.epsilon_target(),
        epsilon_hat: result.certificate.epsilon_hat,
        worst_index: result.certificate.worst_index,
        weights: result
            .coreset_indices
            .iter()
            .map(|&i| result.witness.weight(i))
            .collect(),
        coreset_indices: result.coreset_indices.clone(),
        iterations: result.iterations,
        converged: result.converged,
        excentricity_estimate: excentricity(points, norm)?,
        size_bound,
        within_size_bound: result.coreset_indices.len() <= size_bound,
    })
}

fn run_distance(args: &DistanceArgs, stdout: &mut dyn Write) -> Result<u8, CliError> {
    json_only(args.out.format, "distance")?;
    let config = solver_config(args.epsilon, args.max_iterations)?;
    let points = io::read_points(&args.input)?;
    let report = distance(&points, &config)?;
    emit(&to_json(&report), args.out.output.as_deref(), stdout)?;
    Ok(if report.converged {
        EXIT_OK
    } else {
        EXIT_ITERATION_LIMIT
    })
}

/// JSON sidecar describing an adversarial instance; indices refer to rows of
/// the points CSV (0-based: p1, p2, p3).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSidecar {
    pub theorem: Theorem,
    pub theta: f64,
    pub partition: Partition,
    pub s1: Vec<usize>,
    pub s2: Vec<usize>,
    pub s: Vec<usize>,
    pub expected_small_eps: f64,
    pub expected_final_eps_lower_bound: f64,
}

impl From<&AdversarialInstance> for InstanceSidecar {
    fn from(inst: &AdversarialInstance) -> Self {
        Self {
            theorem: inst.theorem,
            theta: inst.theta,
            partition: inst.partition.clone(),
            s1: inst.s1.clone(),
            s2: inst.s2.clone(),
            s: inst.s.clone(),
            expected_small_eps: inst.expected_small_eps,
            expected_final_eps_lower_bound: inst.expected_final_eps_lower_bound,
        }
    }
}

impl InstanceSidecar {
    pub fn read(path: &Path) -> Result<Self, CliError> {
        let file = File::open(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        serde_json::from_reader(file).map_err(|e| CliError::Parse {
            input: path.display().to_string(),
            line: e.line() as u64,
            message: e.to_string(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdversarialReport {
    pub points: Vec<Vec<f64>>,
    pub instance: InstanceSidecar,
    pub clauses: ClauseReport,
    pub verified: bool,
}

pub fn adversarial(
    theorem: Theorem,
    theta: f64,
) -> Result<(AdversarialInstance, AdversarialReport), CliError> {
    let inst = match theorem {
        Theorem::Equal => theorem2_instance(theta),
        Theorem::Nested => theorem3_instance(theta),
    }
    .map_err(|e| CliError::Invalid(e.to_string()))?;
    let clauses = verify_instance(&inst)?;
    let report = AdversarialReport {
        points: inst.points.to_rows(),
        instance: InstanceSidecar::from(&inst),
        verified: clauses.all_passed(),
        clauses,
    };
    Ok((inst, report))
}

/// Sidecar path for an instance CSV: same stem, `.json` extension.
pub fn sidecar_path(points_path: &Path) -> PathBuf {
    points_path.with_extension("json")
}

fn run_adversarial(args: &AdversarialArgs, stdout: &mut dyn Write) -> Result<u8, CliError> {
    json_only(args.format, "adversarial")?;
    let theorem = Theorem::from_number(args.theorem)
        .ok_or_else(|| CliError::Invalid(format!("unknown theorem {}", args.theorem)))?;
    let (inst, report) = adversarial(theorem, args.theta)?;
    if let Some(path) = &args.output {
        let sidecar = sidecar_path(path);
        if sidecar == *path {
            return Err(CliError::Usage(
                "instance output must not have a .json extension".into(),
            ));
        }
        let mut f = create(path)?;
        io::write_points(&mut f, &inst.points)?;
        f.flush()?;
        emit(&to_json(&report.instance), Some(&sidecar), stdout)?;
    }
    emit(&to_json(&report), None, stdout)?;
    Ok(if report.verified {
        EXIT_OK
    } else {
        EXIT_UNVERIFIED
    })
}

/// Consecutive chunks of `batch_size` points.
pub fn chunk(points: &PointSet, batch_size: usize) -> Result<Vec<PointSet>, CliError> {
    if batch_size == 0 {
        return Err(CliError::Invalid("batch size must be at least 1".into()));
    }
    let indices: Vec<usize> = (0..points.len()).collect();
    indices
        .chunks(batch_size)
        .map(|c| points.subset(c).map_err(CliError::from))
        .collect()
}

fn partition_batches(points: &PointSet, partition: &Partition) -> Result<Vec<PointSet>, CliError> {
    [&partition.p1, &partition.p2]
        .into_iter()
        .map(|idx| {
            points
                .subset(idx)
                .map_err(|e| CliError::Invalid(format!("sidecar partition: {e}")))
        })
        .collect()
}

pub fn stream(batches: &[PointSet], options: &StreamOptions) -> Result<StreamReport, CliError> {
    Ok(stream_process(batches, options)?)
}

pub fn stream_csv(report: &StreamReport) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for record in &report.records {
        w.serialize(record).map_err(|e| CliError::Io {
            path: "<report>".into(),
            message: e.to_string(),
        })?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io {
        path: "<report>".into(),
        message: e.to_string(),
    })?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn run_stream(args: &StreamArgs, stdout: &mut dyn Write) -> Result<u8, CliError> {
    let config = solver_config(args.epsilon, None)?;
    let strategy = match args.strategy {
        StrategyArg::MinNorm => Strategy::MinNorm,
        StrategyArg::Rerun => Strategy::Rerun,
        StrategyArg::Full => Strategy::FullRecompute,
    };
    if let Some(theta) = args.theta {
        if !(theta > 0.0 && theta <= std::f64::consts::FRAC_PI_2) {
            return Err(CliError::Invalid(format!(
                "theta must lie in (0, pi/2], got {theta}"
            )));
        }
    }
    let points = io::read_points(&args.input)?;
    let batches = match &args.batches_from {
        Some(path) => partition_batches(&points, &InstanceSidecar::read(path)?.partition)?,
        None => chunk(&points, args.batch_size)?,
    };
    let options = StreamOptions {
        strategy,
        config,
        theta_bound: args.theta,
    };
    let report = stream(&batches, &options)?;
    let text = match args.out.format.unwrap_or(Format::Csv) {
        Format::Csv => stream_csv(&report)?,
        Format::Json => to_json(&report),
    };
    emit(&text, args.out.output.as_deref(), stdout)?;
    Ok(if report.all_converged() {
        EXIT_OK
    } else {
        EXIT_ITERATION_LIMIT
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarginReport {
    pub normal: Vec<f64>,
    pub margin: f64,
    pub support_indices: Vec<usize>,
    pub epsilon_target: f64,
    pub epsilon_hat: f64,
    pub iterations: usize,
    pub converged: bool,
    pub two_class: bool,
    /// Present when the data was lifted with a constant coordinate.
    pub lift: Option<f64>,
    pub affine: Option<AffineSeparatorReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffineSeparatorReport {
    pub weights: Vec<f64>,
    pub bias: f64,
}

impl From<AffineSeparator> for AffineSeparatorReport {
    fn from(a: AffineSeparator) -> Self {
        Self {
            weights: a.weights,
            bias: a.bias,
        }
    }
}

pub fn margin(
    labeled: &LabeledPointSet,
    config: &SolverConfig,
    lift: Option<f64>,
) -> Result<MarginReport, CliError> {
    let data = match lift {
        Some(rho) if !rho.is_finite() || rho == 0.0 => {
            return Err(CliError::Invalid(format!(
                "lift must be finite and nonzero, got {rho}"
            )))
        }
        Some(rho) => labeled.lifted(rho)?,
        None => labeled.clone(),
    };
    let result = solve_margin(&data, config)?;
    let certificate = margin_certificate(&result, &data)?;
    Ok(MarginReport {
        affine: lift.map(|rho| result.affine_separator(rho).into()),
        normal: result.normal,
        margin: result.margin,
        support_indices: result.support_indices,
        epsilon_target: config.epsilon_target(),
        epsilon_hat: certificate.epsilon_hat,
        iterations: result.iterations,
        converged: result.converged,
        two_class: labeled.is_two_class(),
        lift,
    })
}

fn run_margin(args: &MarginArgs, stdout: &mut dyn Write) -> Result<u8, CliError> {
    json_only(args.out.format, "margin")?;
    let config = solver_config(args.epsilon, args.max_iterations)?;
    let labeled = io::read_labeled(&args.input)?;
    let report = margin(&labeled, &config, args.lift)?;
    emit(&to_json(&report), args.out.output.as_deref(), stdout)?;
    Ok(if report.converged {
        EXIT_OK
    } else {
        EXIT_ITERATION_LIMIT
    })
}

fn run_generate(args: &GenerateArgs, stdout: &mut dyn Write) -> Result<u8, CliError> {
    if args.n == 0 || args.dim == 0 {
        return Err(CliError::Invalid("n and dim must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut buf = Vec::new();
    match args.kind {
        InstanceKind::Separable => {
            io::write_points(&mut buf, &separable_points(&mut rng, args.n, args.dim))?
        }
        InstanceKind::Narrow => {
            io::write_points(&mut buf, &narrow_points(&mut rng, args.n, args.dim))?
        }
        InstanceKind::Labeled => {
            io::write_labeled(&mut buf, &separable_labeled(&mut rng, args.n, args.dim))?
        }
    }
    emit(
        &String::from_utf8(buf).expect("ascii"),
        args.output.as_deref(),
        stdout,
    )?;
    Ok(EXIT_OK)
}

/// Runs one parsed command, writing stdout-bound output to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> Result<u8, CliError> {
    match &cli.command {
        Command::Distance(a) => run_distance(a, stdout),
        Command::Adversarial(a) => run_adversarial(a, stdout),
        Command::Stream(a) => run_stream(a, stdout),
        Command::Margin(a) => run_margin(a, stdout),
        Command::Generate(a) => run_generate(a, stdout),
    }
}
