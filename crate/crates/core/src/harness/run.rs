use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::{
    AnalysisConfig, DatasetSource, ExperimentConfig, ReferenceConfig, ShapeConfig,
};
use crate::cloud::PointCloud;
use crate::distributions::{
    generate_dataset, normalize_mesh_cloud, sample_shape, DatasetSpec, MeshShape, ShapeSpec,
};
use crate::error::{Error, Result};
use crate::estimation::{self, Reference};
use crate::io::{self, CloudFormat};
use crate::ng::{self, Codebook, ResampledSignals};
use crate::seed::{self, stream};
use crate::PhaseLabel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Config,
    Dataset,
    Init,
    Train,
    Analysis,
    Output,
}

impl Stage {
    pub fn as_str(&self) -> &'static str {
        match self {
            Stage::Config => "config",
            Stage::Dataset => "dataset",
            Stage::Init => "init",
            Stage::Train => "train",
            Stage::Analysis => "analysis",
            Stage::Output => "output",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "snake_case")]
pub enum RunStatus {
    Completed,
    Failed { stage: Stage, message: String },
}

impl RunStatus {
    pub fn is_completed(&self) -> bool {
        matches!(self, RunStatus::Completed)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub run: u64,
    pub dataset: Option<u64>,
    pub init: u64,
    pub signals: u64,
    pub eval: u64,
}

/// Wall-clock durations in milliseconds; the only non-deterministic fields.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub dataset_ms: f64,
    pub train_ms: f64,
    pub analysis_ms: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub energy: Option<f64>,
    pub distortion: Option<f64>,
    pub entropy: Option<f64>,
    /// `ln k`, the entropy of equiprobable units.
    pub max_entropy: Option<f64>,
    pub proximity: Option<f64>,
    pub hausdorff: Option<f64>,
    pub power_law: Option<estimation::PowerLawFit>,
    pub phase: Option<PhaseLabel>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub step: u64,
    pub lambda: f64,
    pub epsilon: f64,
    pub proximity: Option<f64>,
}

/// Emitted files, relative to the run's output directory.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct OutputFiles {
    pub codebook: Option<String>,
    pub density_table: Option<String>,
    pub snapshots: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub seeds: Seeds,
    pub status: RunStatus,
    pub timings: Timings,
    pub dataset_points: usize,
    pub total_steps: u64,
    pub metrics: Metrics,
    pub trace: Vec<TracePoint>,
    pub files: OutputFiles,
}

impl RunReport {
    fn new(config: &ExperimentConfig) -> Self {
        let run = config.seed;
        RunReport {
            config: config.clone(),
            seeds: Seeds {
                run,
                dataset: None,
                init: seed::derive(run, &[stream::INIT]),
                signals: seed::derive(run, &[stream::SIGNALS]),
                eval: seed::derive(run, &[stream::EVAL]),
            },
            status: RunStatus::Completed,
            timings: Timings::default(),
            dataset_points: 0,
            total_steps: 0,
            metrics: Metrics::default(),
            trace: Vec::new(),
            files: OutputFiles::default(),
        }
    }

    /// The report with timing fields zeroed, for determinism comparisons.
    pub fn without_timings(&self) -> Self {
        RunReport {
            timings: Timings::default(),
            ..self.clone()
        }
    }
}

/// A loaded training cloud plus the noiseless shape it was generated from.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub cloud: PointCloud,
    pub shape: Option<ShapeSpec>,
    pub seed: Option<u64>,
}

fn resolve_shape(shape: &ShapeConfig) -> Result<ShapeSpec> {
    Ok(match shape {
        ShapeConfig::Point { center } => ShapeSpec::Point {
            center: center.clone(),
        },
        ShapeConfig::Circle => ShapeSpec::Circle,
        ShapeConfig::Disk => ShapeSpec::Disk,
        ShapeConfig::Sphere => ShapeSpec::Sphere,
        ShapeConfig::Ball { radius, center } => ShapeSpec::Ball {
            radius: *radius,
            center: center.clone(),
        },
        ShapeConfig::Mesh { path, normalize } => ShapeSpec::MeshCloud(MeshShape {
            cloud: io::read_cloud(path, None)?,
            normalize: *normalize,
        }),
    })
}

pub fn load_dataset(source: &DatasetSource) -> Result<Dataset> {
    match source {
        DatasetSource::Generated {
            shape,
            noise,
            n_points,
            seed,
        } => {
            let spec = DatasetSpec {
                shape: resolve_shape(shape)?,
                noise: *noise,
                n_points: *n_points,
                seed: *seed,
            };
            let cloud = generate_dataset(&spec)?;
            let shape = match spec.shape {
                ShapeSpec::MeshCloud(m) if m.normalize => ShapeSpec::MeshCloud(MeshShape {
                    cloud: normalize_mesh_cloud(&m.cloud)?.0,
                    normalize: false,
                }),
                s => s,
            };
            Ok(Dataset {
                cloud,
                shape: Some(shape),
                seed: Some(*seed),
            })
        }
        DatasetSource::File { path, dim } => Ok(Dataset {
            cloud: io::read_cloud(path, *dim)?,
            shape: None,
            seed: None,
        }),
    }
}

enum ResolvedReference {
    Analytic(Reference<'static>),
    Cloud(PointCloud),
    Data,
}

impl ResolvedReference {
    fn as_reference<'a>(&'a self, data: &'a PointCloud) -> Reference<'a> {
        match self {
            ResolvedReference::Analytic(r) => r.clone(),
            ResolvedReference::Cloud(c) => Reference::Cloud(c),
            ResolvedReference::Data => Reference::Cloud(data),
        }
    }
}

fn analytic_shape(shape: &ShapeSpec) -> Option<Reference<'static>> {
    let origin = |d: usize| vec![0.0; d];
    Some(match shape {
        ShapeSpec::Circle => Reference::Sphere {
            center: origin(2),
            radius: 1.0,
        },
        ShapeSpec::Sphere => Reference::Sphere {
            center: origin(3),
            radius: 1.0,
        },
        ShapeSpec::Disk => Reference::Ball {
            center: origin(2),
            radius: 1.0,
        },
        ShapeSpec::Ball { radius, center } => Reference::Ball {
            center: center.clone(),
            radius: *radius,
        },
        ShapeSpec::Point { center } => Reference::Ball {
            center: center.clone(),
            radius: 0.0,
        },
        ShapeSpec::MeshCloud(_) => return None,
    })
}

/// Resolves a reference; `need_cloud` forces analytic shapes to be sampled.
fn resolve_reference(
    reference: &ReferenceConfig,
    dataset: &Dataset,
    need_cloud: bool,
    points: usize,
    seed: u64,
) -> Result<ResolvedReference> {
    let sampled = |shape: ShapeSpec| -> Result<ResolvedReference> {
        Ok(ResolvedReference::Cloud(sample_shape(
            &shape,
            points.max(1),
            &mut seed::rng(seed),
        )?))
    };
    match reference {
        ReferenceConfig::Data => Ok(ResolvedReference::Data),
        ReferenceConfig::Cloud { path } => {
            Ok(ResolvedReference::Cloud(io::read_cloud(path, None)?))
        }
        ReferenceConfig::Sphere { center, radius } => {
            if need_cloud {
                let shape = match center.len() {
                    2 => ShapeSpec::Circle,
                    3 => ShapeSpec::Sphere,
                    d => {
                        return Err(Error::invalid(format!(
                            "cannot sample a sphere reference in dimension {d}"
                        )))
                    }
                };
                let unit = sample_shape(&shape, points.max(1), &mut seed::rng(seed))?;
                let mut c = PointCloud::with_capacity(unit.dim(), unit.len());
                for p in unit.points() {
                    let q: Vec<f64> = p.iter().zip(center).map(|(a, o)| a * radius + o).collect();
                    c.push(&q);
                }
                Ok(ResolvedReference::Cloud(c))
            } else {
                Ok(ResolvedReference::Analytic(Reference::Sphere {
                    center: center.clone(),
                    radius: *radius,
                }))
            }
        }
        ReferenceConfig::Ball { center, radius } => {
            if need_cloud {
                sampled(ShapeSpec::Ball {
                    radius: *radius,
                    center: center.clone(),
                })
            } else {
                Ok(ResolvedReference::Analytic(Reference::Ball {
                    center: center.clone(),
                    radius: *radius,
                }))
            }
        }
        ReferenceConfig::Shape => {
            let shape = dataset
                .shape
                .as_ref()
                .ok_or_else(|| Error::invalid("shape reference requires a generated dataset"))?;
            match shape {
                ShapeSpec::MeshCloud(m) => Ok(ResolvedReference::Cloud(m.cloud.clone())),
                s if need_cloud => sampled(s.clone()),
                s => Ok(ResolvedReference::Analytic(
                    analytic_shape(s).expect("non-mesh shapes are analytic"),
                )),
            }
        }
    }
}

/// The outcome of a run: its report and, when training finished, the codebook.
#[derive(Clone, Debug)]
pub struct Run {
    pub report: RunReport,
    pub codebook: Option<Codebook>,
}

/// Runs one experiment end to end. Errors never escape: they are recorded
/// in the report's status together with the failing stage.
pub fn run_experiment(config: &ExperimentConfig, out_dir: Option<&Path>) -> Run {
    let started = Instant::now();
    let dataset = config
        .validate()
        .map_err(|e| (Stage::Config, e))
        .and_then(|_| load_dataset(&config.dataset).map_err(|e| (Stage::Dataset, e)));
    let dataset_ms = started.elapsed().as_secs_f64() * 1e3;
    match dataset {
        Ok(d) => run_timed(config, &d, out_dir, dataset_ms),
        Err((stage, e)) => {
            let mut report = RunReport::new(config);
            report.timings.dataset_ms = dataset_ms;
            report.status = RunStatus::Failed {
                stage,
                message: e.to_string(),
            };
            if let Some(dir) = out_dir {
                let _ = io::write_report(&report, dir.join("report.json"));
            }
            Run {
                report,
                codebook: None,
            }
        }
    }
}

/// Runs an experiment on an already loaded dataset.
pub fn run_with_dataset(
    config: &ExperimentConfig,
    dataset: &Dataset,
    out_dir: Option<&Path>,
) -> Run {
    run_timed(config, dataset, out_dir, 0.0)
}

fn run_timed(
    config: &ExperimentConfig,
    dataset: &Dataset,
    out_dir: Option<&Path>,
    dataset_ms: f64,
) -> Run {
    let mut report = RunReport::new(config);
    report.timings.dataset_ms = dataset_ms;
    report.seeds.dataset = dataset.seed;
    report.dataset_points = dataset.cloud.len();
    let mut codebook = None;
    if let Err((stage, e)) = execute(config, dataset, out_dir, &mut report, &mut codebook) {
        report.status = RunStatus::Failed {
            stage,
            message: e.to_string(),
        };
    }
    if let Some(dir) = out_dir {
        if let Err(e) = io::write_report(&report, dir.join("report.json")) {
            if report.status.is_completed() {
                report.status = RunStatus::Failed {
                    stage: Stage::Output,
                    message: e.to_string(),
                };
            }
        }
    }
    Run { report, codebook }
}

fn execute(
    config: &ExperimentConfig,
    dataset: &Dataset,
    out_dir: Option<&Path>,
    report: &mut RunReport,
    codebook_out: &mut Option<Codebook>,
) -> std::result::Result<(), (Stage, Error)> {
    let at = |stage: Stage| move |e: Error| (stage, e);
    config.validate().map_err(at(Stage::Config))?;
    let schedule = config
        .schedule
        .resolve(config.k)
        .map_err(at(Stage::Config))?;
    report.total_steps = schedule.total_steps;
    let analysis = &config.analysis;
    let cloud = &dataset.cloud;
    let seeds = report.seeds;

    let initial = Codebook::sample_from(cloud, config.k, &mut seed::rng(seeds.init))
        .map_err(at(Stage::Init))?;

    let trace_target = match (&analysis.proximity, config.trace_every) {
        (Some(r), t) if t > 0 => Some(
            resolve_reference(r, dataset, false, analysis.reference_points, seeds.eval)
                .map_err(at(Stage::Analysis))?,
        ),
        _ => None,
    };
    let snapshot_dir = out_dir.filter(|_| analysis.write_snapshots && config.trace_every > 0);

    let started = Instant::now();
    let mut signals =
        ResampledSignals::new(cloud, seed::rng(seeds.signals)).map_err(at(Stage::Train))?;
    let mut trace = Vec::new();
    let mut snapshots = Vec::new();
    let mut observe = |step: u64, lambda: f64, epsilon: f64, cb: &Codebook| -> Result<()> {
        let proximity = match &trace_target {
            Some(t) => Some(estimation::proximity(cb, &t.as_reference(cloud))?),
            None => None,
        };
        trace.push(TracePoint {
            step,
            lambda,
            epsilon,
            proximity,
        });
        if let Some(dir) = snapshot_dir {
            let name = format!("snapshots/step_{step:010}.xyz");
            io::write_cloud(&cb.to_cloud(), dir.join(&name), CloudFormat::Xyz)?;
            snapshots.push(name);
        }
        Ok(())
    };
    let trained = ng::train_with(
        initial,
        &mut signals,
        &schedule,
        config.trace_every,
        &mut observe,
    )
    .map_err(at(Stage::Train))?;
    report.trace = trace;
    report.files.snapshots = snapshots;
    report.timings.train_ms = started.elapsed().as_secs_f64() * 1e3;
    *codebook_out = Some(trained.clone());

    let started = Instant::now();
    analyze(&trained, dataset, config, report, out_dir).map_err(at(Stage::Analysis))?;
    report.timings.analysis_ms = started.elapsed().as_secs_f64() * 1e3;

    if let Some(dir) = out_dir {
        io::write_cloud(
            &trained.to_cloud(),
            dir.join("codebook.xyz"),
            CloudFormat::Xyz,
        )
        .map_err(at(Stage::Output))?;
        report.files.codebook = Some("codebook.xyz".into());
    }
    Ok(())
}

fn eval_sample(cloud: &PointCloud, n: usize, seed: u64) -> Result<PointCloud> {
    use ng::SignalSource;
    let mut src = ResampledSignals::new(cloud, seed::rng(seed))?;
    let mut out = PointCloud::with_capacity(cloud.dim(), n);
    let mut buf = vec![0.0; cloud.dim()];
    for _ in 0..n {
        src.next_into(&mut buf);
        out.push(&buf);
    }
    Ok(out)
}

/// Metrics for a trained codebook against its dataset. `energy_lambda` is the
/// neighborhood range used for the energy; `eval_seed` drives every sampled
/// evaluation set. Returns the density table file name when one was written.
pub fn analyze_codebook(
    codebook: &Codebook,
    dataset: &Dataset,
    analysis: &AnalysisConfig,
    energy_lambda: f64,
    eval_seed: u64,
    out_dir: Option<&Path>,
) -> Result<(Metrics, Option<String>)> {
    let cloud = &dataset.cloud;
    let mut metrics = Metrics::default();
    let mut table_file = None;

    if analysis.energy {
        let sample = eval_sample(
            cloud,
            analysis.energy_signals.max(1),
            seed::derive(eval_seed, &[1]),
        )?;
        metrics.energy = Some(ng::energy(codebook, &sample, energy_lambda)?);
        metrics.distortion = Some(ng::distortion(codebook, &sample)?);
    }
    if analysis.entropy {
        let sample = eval_sample(cloud, analysis.eval_signals, seed::derive(eval_seed, &[2]))?;
        let p = estimation::winner_histogram(codebook, &sample)?;
        metrics.entropy = Some(estimation::entropy(&p)?);
        metrics.max_entropy = Some((codebook.len() as f64).ln());
    }
    if let Some(r) = &analysis.proximity {
        let resolved = resolve_reference(
            r,
            dataset,
            false,
            analysis.reference_points,
            seed::derive(eval_seed, &[3]),
        )?;
        metrics.proximity = Some(estimation::proximity(
            codebook,
            &resolved.as_reference(cloud),
        )?);
    }
    if let Some(r) = &analysis.hausdorff {
        let resolved = resolve_reference(
            r,
            dataset,
            true,
            analysis.reference_points,
            seed::derive(eval_seed, &[4]),
        )?;
        let target = match resolved.as_reference(cloud) {
            Reference::Cloud(c) => c,
            _ => unreachable!("cloud references are forced"),
        };
        metrics.hausdorff = Some(estimation::hausdorff(&codebook.to_cloud(), target)?);
    }
    if let Some(center) = &analysis.phase_center {
        metrics.phase = Some(estimation::radial_profile_classify(codebook, center)?);
    }
    if analysis.density_table || analysis.power_law {
        let table = estimation::density_table(codebook, cloud)?;
        if analysis.power_law {
            metrics.power_law = Some(estimation::fit_power_law(&table, analysis.trim)?);
        }
        if let (true, Some(dir)) = (analysis.density_table, out_dir) {
            io::write_density_table(&table, dir.join("density_table.csv"))?;
            table_file = Some("density_table.csv".to_string());
        }
    }
    Ok((metrics, table_file))
}

fn analyze(
    codebook: &Codebook,
    dataset: &Dataset,
    config: &ExperimentConfig,
    report: &mut RunReport,
    out_dir: Option<&Path>,
) -> Result<()> {
    let (metrics, table) = analyze_codebook(
        codebook,
        dataset,
        &config.analysis,
        final_lambda(config)?,
        report.seeds.eval,
        out_dir,
    )?;
    report.metrics = metrics;
    report.files.density_table = table;
    Ok(())
}

fn final_lambda(config: &ExperimentConfig) -> Result<f64> {
    let s = config.schedule.resolve(config.k)?;
    s.lambda_at(s.total_steps)
}
