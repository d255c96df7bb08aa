use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use neugas::harness::{
    self, AnalysisConfig, DatasetSource, ExperimentConfig, ReferenceConfig, ShapeConfig, Stage,
    SweepConfig, TransitionMode,
};
use neugas::io::{self, CloudFormat};
use neugas::{Codebook, LambdaMode, NoiseSpec, TrainingSchedule};
use parse::{Reals, Sizes};

mod parse;

#[derive(Parser)]
#[command(name = "neugas", version, about = "Neural gas training and analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a dataset and write it as a point cloud.
    Generate(GenerateArgs),
    /// Train one codebook and analyze it.
    Train(TrainArgs),
    /// Train over a grid of k, lambda and repetitions.
    Sweep(SweepArgs),
    /// Compute metrics for an existing cloud and codebook.
    Analyze(AnalyzeArgs),
    /// Summarize a sweep summary or a run report.
    Report(ReportArgs),
}

#[derive(Args, Clone)]
struct DataArgs {
    /// circle, disk, sphere, point:D, ball:R:D or mesh:PATH
    #[arg(long, value_parser = parse::shape)]
    shape: Option<ShapeConfig>,
    /// Center a mesh cloud and read the noise scale as a fraction of its bounding-box side.
    #[arg(long)]
    normalize: bool,
    /// none, gaussian:SIGMA, sinusoidal:R or uniform:R
    #[arg(long, value_parser = parse::noise, default_value = "none")]
    noise: NoiseSpec,
    #[arg(short = 'n', long, default_value_t = neugas::distributions::DEFAULT_POINTS)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    data_seed: u64,
    /// Train on an existing .xyz or .ply cloud instead of a generated one.
    #[arg(long, conflicts_with = "shape")]
    data: Option<PathBuf>,
}

impl DataArgs {
    fn source(&self) -> Result<DatasetSource, String> {
        if let Some(path) = &self.data {
            return Ok(DatasetSource::File {
                path: path.clone(),
                dim: None,
            });
        }
        let mut shape = self
            .shape
            .clone()
            .ok_or("either --shape or --data is required")?;
        if let ShapeConfig::Mesh { normalize, .. } = &mut shape {
            *normalize = self.normalize;
        }
        Ok(DatasetSource::Generated {
            shape,
            noise: self.noise,
            n_points: self.points,
            seed: self.data_seed,
        })
    }
}

#[derive(Args)]
struct GenerateArgs {
    /// JSON or TOML dataset description; replaces the shape flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    data: DataArgs,
    #[arg(short, long)]
    out: PathBuf,
    /// xyz or ply; defaults to the output extension.
    #[arg(long)]
    format: Option<CloudFormat>,
}

#[derive(Args, Clone)]
struct RunArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(short, long, default_value_t = 64)]
    k: usize,
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// Exponentially decaying lambda, INITIAL:FINAL.
    #[arg(long, value_parser = parse::pair, conflicts_with = "lambda")]
    lambda_decay: Option<(f64, f64)>,
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long, default_value_t = harness::DEFAULT_STEPS_PER_UNIT)]
    steps_per_unit: u64,
    #[arg(long, default_value_t = TrainingSchedule::EPS_INITIAL)]
    eps_initial: f64,
    #[arg(long, default_value_t = TrainingSchedule::EPS_FINAL)]
    eps_final: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Record a trace point every N steps (0 disables tracing).
    #[arg(long, default_value_t = 0)]
    trace_every: u64,
    #[command(flatten)]
    metrics: MetricArgs,
    /// Write codebook snapshots at every trace point.
    #[arg(long)]
    snapshots: bool,
}

#[derive(Args, Clone)]
struct MetricArgs {
    #[arg(long)]
    energy: bool,
    #[arg(long)]
    entropy: bool,
    #[arg(long, default_value_t = 100_000)]
    eval_signals: usize,
    /// shape, data, cloud:PATH, sphere:R:D or ball:R:D
    #[arg(long, value_parser = parse::reference)]
    proximity: Option<ReferenceConfig>,
    #[arg(long, value_parser = parse::reference)]
    hausdorff: Option<ReferenceConfig>,
    #[arg(long, default_value_t = 20_000)]
    reference_points: usize,
    #[arg(long)]
    density_table: bool,
    #[arg(long)]
    power_law: bool,
    #[arg(long, default_value_t = neugas::estimation::DEFAULT_TRIM)]
    trim: f64,
    /// Classify the radial profile about this center, e.g. 0,0,0.
    #[arg(long, value_parser = parse::vector)]
    phase_center: Option<Reals>,
}

impl MetricArgs {
    fn config(&self) -> AnalysisConfig {
        AnalysisConfig {
            energy: self.energy,
            entropy: self.entropy,
            eval_signals: self.eval_signals,
            proximity: self.proximity.clone(),
            hausdorff: self.hausdorff.clone(),
            reference_points: self.reference_points,
            density_table: self.density_table,
            power_law: self.power_law,
            trim: self.trim,
            phase_center: self.phase_center.clone(),
            ..AnalysisConfig::default()
        }
    }
}

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig, String> {
        let mut config = ExperimentConfig::new(self.data.source()?, self.k, self.lambda);
        if let Some((initial, final_value)) = self.lambda_decay {
            config.schedule.lambda = LambdaMode::Decaying {
                initial,
                final_value,
            };
        }
        config.schedule.total_steps = self.steps;
        config.schedule.steps_per_unit = self.steps_per_unit;
        config.schedule.eps_initial = self.eps_initial;
        config.schedule.eps_final = self.eps_final;
        config.seed = self.seed;
        config.trace_every = self.trace_every;
        config.analysis = AnalysisConfig {
            write_snapshots: self.snapshots,
            ..self.metrics.config()
        };
        Ok(config)
    }
}

#[derive(Args)]
struct TrainArgs {
    /// JSON or TOML experiment config; replaces the run flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
    /// Output directory for report.json, codebook.xyz and tables.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// JSON or TOML sweep config; replaces the run and grid flags.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    run: RunArgs,
    /// Comma-separated lambda values.
    #[arg(long, value_parser = parse::vector, conflicts_with = "lambda_max")]
    lambdas: Option<Reals>,
    /// Integer lambdas 0..=MAX.
    #[arg(long)]
    lambda_max: Option<u32>,
    /// Comma-separated codebook sizes; defaults to --k.
    #[arg(long, value_parser = parse::sizes)]
    ks: Option<Sizes>,
    #[arg(long, default_value_t = 1)]
    repetitions: usize,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Print the detected transition: shell, min-proximity or entropy:THRESHOLD.
    #[arg(long, value_parser = parse::transition)]
    transition: Option<TransitionMode>,
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// The cloud the codebook was trained on.
    #[arg(long)]
    data: PathBuf,
    #[arg(long)]
    codebook: PathBuf,
    /// Noiseless shape of the data, needed for the `shape` reference.
    #[arg(long, value_parser = parse::shape)]
    shape: Option<ShapeConfig>,
    /// Lambda used for the energy.
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    metrics: MetricArgs,
    /// Directory for density_table.csv.
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    /// summary.csv written by `sweep`.
    #[arg(long, required_unless_present = "run")]
    summary: Option<PathBuf>,
    #[arg(long, value_parser = parse::transition, requires = "summary")]
    transition: Option<TransitionMode>,
    /// report.json written by `train`.
    #[arg(long)]
    run: Option<PathBuf>,
}

/// A failure tagged with the stage it happened in.
struct Failure {
    stage: &'static str,
    message: String,
}

impl Failure {
    fn new(stage: &'static str, message: impl ToString) -> Self {
        Failure {
            stage,
            message: message.to_string(),
        }
    }
}

fn at<E: ToString>(stage: &'static str) -> impl Fn(E) -> Failure {
    move |e| Failure::new(stage, e)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Generate(a) => generate(a),
        Command::Train(a) => train(a),
        Command::Sweep(a) => sweep(a),
        Command::Analyze(a) => analyze(a),
        Command::Report(a) => report(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failures) => {
            for f in failures {
                eprintln!("error[{}]: {}", f.stage, f.message);
            }
            ExitCode::FAILURE
        }
    }
}

type CliResult = Result<(), Vec<Failure>>;

fn one(f: Failure) -> Vec<Failure> {
    vec![f]
}

fn generate(a: GenerateArgs) -> CliResult {
    let source = match &a.config {
        Some(path) => harness::load_config(path)
            .map_err(at("config"))
            .map_err(one)?,
        None => a.data.source().map_err(at("config")).map_err(one)?,
    };
    if matches!(source, DatasetSource::File { .. }) {
        return Err(one(Failure::new(
            "config",
            "generate needs a shape, not --data",
        )));
    }
    let dataset = harness::load_dataset(&source)
        .map_err(at("dataset"))
        .map_err(one)?;
    let format = a.format.unwrap_or_else(|| CloudFormat::from_path(&a.out));
    io::write_cloud(&dataset.cloud, &a.out, format)
        .map_err(at("output"))
        .map_err(one)?;
    println!(
        "wrote {} points (dim {}) to {}",
        dataset.cloud.len(),
        dataset.cloud.dim(),
        a.out.display()
    );
    Ok(())
}

fn train(a: TrainArgs) -> CliResult {
    let config = match &a.config {
        Some(path) => harness::load_config(path)
            .map_err(at("config"))
            .map_err(one)?,
        None => a.run.config().map_err(at("config")).map_err(one)?,
    };
    let run = harness::run_experiment(&config, a.out.as_deref());
    if let harness::RunStatus::Failed { stage, message } = &run.report.status {
        return Err(one(Failure::new(stage.as_str(), message)));
    }
    match &a.out {
        Some(dir) => println!("wrote {}", dir.join("report.json").display()),
        None => print_json(&run.report).map_err(one)?,
    }
    Ok(())
}

fn sweep(a: SweepArgs) -> CliResult {
    let config: SweepConfig = match &a.config {
        Some(path) => harness::load_config(path)
            .map_err(at("config"))
            .map_err(one)?,
        None => {
            let base = a.run.config().map_err(at("config")).map_err(one)?;
            let lambdas = match (&a.lambdas, a.lambda_max) {
                (Some(l), _) => l.clone(),
                (None, Some(max)) => SweepConfig::integer_lambdas(max),
                (None, None) => vec![base_lambda(&base)],
            };
            SweepConfig {
                ks: a.ks.clone().unwrap_or_else(|| vec![base.k]),
                base,
                lambdas,
                repetitions: a.repetitions,
                workers: a.workers,
            }
        }
    };
    config.validate().map_err(at("config")).map_err(one)?;
    let outcome = harness::sweep(&config, a.out.as_deref())
        .map_err(at("output"))
        .map_err(one)?;
    match &a.out {
        Some(dir) => println!("wrote {}", dir.join("summary.csv").display()),
        None => {
            let mut out = std::io::stdout().lock();
            io::write_summary_to(&mut out, &outcome.rows)
                .map_err(at("output"))
                .map_err(one)?;
        }
    }
    if let Some(mode) = a.transition {
        print_transitions(&outcome.rows, mode);
    }
    let failures: Vec<Failure> = outcome
        .reports
        .iter()
        .filter_map(|r| match &r.status {
            harness::RunStatus::Failed { stage, message } => Some(Failure::new(
                stage.as_str(),
                format!(
                    "k={} lambda={} seed={}: {message}",
                    r.config.k,
                    base_lambda(&r.config),
                    r.config.seed
                ),
            )),
            harness::RunStatus::Completed => None,
        })
        .collect();
    if failures.is_empty() {
        Ok(())
    } else {
        Err(failures)
    }
}

fn base_lambda(config: &ExperimentConfig) -> f64 {
    match config.schedule.lambda {
        LambdaMode::Constant { lambda } => lambda,
        LambdaMode::Decaying { initial, .. } => initial,
    }
}

fn analyze(a: AnalyzeArgs) -> CliResult {
    let dataset_stage = Stage::Dataset.as_str();
    let cloud = io::read_cloud(&a.data, None)
        .map_err(at(dataset_stage))
        .map_err(one)?;
    let units = io::read_cloud(&a.codebook, Some(cloud.dim()))
        .map_err(at(dataset_stage))
        .map_err(one)?;
    let codebook = Codebook::from_cloud(&units)
        .map_err(at(dataset_stage))
        .map_err(one)?;
    let shape = match &a.shape {
        Some(s) => Some(shape_spec(s).map_err(at(dataset_stage)).map_err(one)?),
        None => None,
    };
    let dataset = harness::Dataset {
        cloud,
        shape,
        seed: None,
    };
    let eval_seed = neugas::seed::derive(a.seed, &[neugas::seed::stream::EVAL]);
    let (metrics, _) = harness::analyze_codebook(
        &codebook,
        &dataset,
        &a.metrics.config(),
        a.lambda,
        eval_seed,
        a.out.as_deref(),
    )
    .map_err(at(Stage::Analysis.as_str()))
    .map_err(one)?;
    print_json(&metrics).map_err(one)
}

/// Resolves a shape flag the same way a generated dataset would.
fn shape_spec(shape: &ShapeConfig) -> neugas::Result<neugas::ShapeSpec> {
    let source = DatasetSource::Generated {
        shape: shape.clone(),
        noise: NoiseSpec::None,
        n_points: 1,
        seed: 0,
    };
    Ok(harness::load_dataset(&source)?
        .shape
        .expect("generated datasets carry their shape"))
}

fn report(a: ReportArgs) -> CliResult {
    if let Some(path) = &a.run {
        let r = io::read_report(path).map_err(at("report")).map_err(one)?;
        print_run(&r);
    }
    if let Some(path) = &a.summary {
        let rows = io::read_summary(path).map_err(at("report")).map_err(one)?;
        let ok = rows.iter().filter(|r| r.status == "ok").count();
        let ks: std::collections::BTreeSet<usize> = rows.iter().map(|r| r.k).collect();
        println!(
            "{} cells ({} ok, {} failed), k in {:?}",
            rows.len(),
            ok,
            rows.len() - ok,
            ks
        );
        if let Some(mode) = a.transition {
            print_transitions(&rows, mode);
        }
    }
    Ok(())
}

fn print_run(r: &harness::RunReport) {
    let name = r.config.name.as_deref().unwrap_or("run");
    match &r.status {
        harness::RunStatus::Completed => println!("{name}: completed"),
        harness::RunStatus::Failed { stage, message } => {
            println!("{name}: failed at {}: {message}", stage.as_str())
        }
    }
    println!(
        "k = {}, steps = {}, points = {}",
        r.config.k, r.total_steps, r.dataset_points
    );
    let m = &r.metrics;
    let line = |label: &str, v: Option<f64>| {
        if let Some(v) = v {
            println!("{label:<10} {v:.6}");
        }
    };
    line("energy", m.energy);
    line("distortion", m.distortion);
    line("entropy", m.entropy);
    line("ln k", m.max_entropy);
    line("proximity", m.proximity);
    line("hausdorff", m.hausdorff);
    if let Some(fit) = &m.power_law {
        println!(
            "alpha      {:.6} (r2 {:.4}, {} units)",
            fit.alpha, fit.r_squared, fit.rows_used
        );
    }
    if let Some(phase) = m.phase {
        println!("phase      {phase}");
    }
    if let Some(best) = r
        .trace
        .iter()
        .filter_map(|t| t.proximity.map(|p| (t.step, p)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
    {
        println!("trace min  {:.6} at step {}", best.1, best.0);
    }
}

fn print_transitions(rows: &[harness::SweepRow], mode: TransitionMode) {
    println!("k,repetition,transition_lambda");
    for t in harness::detect_transition(rows, mode) {
        match t.lambda {
            Some(l) => println!("{},{},{}", t.k, t.repetition, l),
            None => println!("{},{},none", t.k, t.repetition),
        }
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<(), Failure> {
    use std::io::Write;
    let text = serde_json::to_string_pretty(value).map_err(at("output"))?;
    writeln!(std::io::stdout().lock(), "{text}").map_err(at("output"))
}
