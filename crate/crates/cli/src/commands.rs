//! Subcommand bodies. Each is a pure function of (config, input files) and
//! returns the paths it wrote plus the numbers a caller may want to print,
//! so integration tests can drive the pipeline in-process.

use std::fs;
use std::path::{Path, PathBuf};

use beamcluster::channel::{dataset_centers, generate_dataset, load_dataset, write_dataset, ChannelDataset};
use beamcluster::clustering::{kmeans_fit, sum_distance, ClusterModel, InitPolicy, KMeansSettings};
use beamcluster::codebook::{load_codebook, write_codebook, Codebook};
use beamcluster::evaluation::{monte_carlo_rate, write_rate_csv, RateCurve};
use beamcluster::numerics::RandomStream;
use beamcluster::{fmt_f64_exact, fmt_f64_short, Error, Result};

use crate::config::ExperimentConfig;
use crate::error::{CliResult, StageExt};

/// Substream id for k-means initialization draws; far above the per-sample
/// substreams a dataset consumes, so training never replays channel noise.
pub const TRAINING_STREAM: u64 = 1 << 32;
/// Substream id for Monte Carlo evaluation. A comparison evaluates both
/// codebooks against the same stream, so they see identical channel draws.
pub const EVAL_STREAM: u64 = (1 << 32) + 1;

pub const DATASET_FILE: &str = "dataset.txt";
pub const CLUSTERED_FILE: &str = "codebook_clustered.txt";
pub const UNIFORM_FILE: &str = "codebook_uniform.txt";
pub const TRAIN_LOG_FILE: &str = "train.log";
pub const COMPARE_CSV_FILE: &str = "compare.csv";
pub const COMPARE_SUMMARY_FILE: &str = "compare_summary.txt";

/// Rounds to the 10 significant digits the CSV carries, so summary numbers
/// can be reproduced exactly from CSV columns.
pub fn round10(x: f64) -> f64 {
    fmt_f64_short(x).parse().expect("format output reparses")
}

/// Writes `body` prefixed with the effective-config comment block; readers
/// of every file format skip `#` lines.
fn write_with_header(path: &Path, config: &ExperimentConfig, body: &[u8]) -> Result<()> {
    let mut buf = config.comment_block().into_bytes();
    buf.extend_from_slice(body);
    fs::write(path, buf)?;
    Ok(())
}

#[derive(Debug)]
pub struct GenerateOutput {
    pub dataset_path: PathBuf,
    /// One-line dataset description for printing.
    pub summary: String,
}

pub fn cmd_generate(config: &ExperimentConfig) -> CliResult<GenerateOutput> {
    config.validate()?;
    let scenario = config.scenario()?;
    let dataset = generate_dataset(&scenario, config.samples)?;

    fs::create_dir_all(&config.out).map_err(Error::from)?;
    let dataset_path = config.out.join(DATASET_FILE);
    let mut body = Vec::new();
    write_dataset(&mut body, &dataset)?;
    write_with_header(&dataset_path, config, &body)?;

    let summary = format!(
        "samples={} nt={} nr={} paths={} angle-spread-deg={} seed={}",
        dataset.len(),
        config.nt,
        config.nr,
        config.paths,
        config.angle_spread_deg,
        config.seed
    );
    Ok(GenerateOutput {
        dataset_path,
        summary,
    })
}

/// A fitted clustering with both codebooks and their training distortions.
struct Trained {
    model: ClusterModel,
    clustered: Codebook,
    uniform: Codebook,
    /// Total distortion of the raw centroids on the training set.
    raw_sum: f64,
    /// Same after snapping centroids onto steered codewords.
    clustered_sum: f64,
    uniform_sum: f64,
}

fn train_on_dataset(dataset: &ChannelDataset, config: &ExperimentConfig) -> Result<Trained> {
    let n = config.num_codewords();
    let mut settings = KMeansSettings::new(
        n,
        RandomStream::with_stream(config.seed, TRAINING_STREAM),
    );
    settings.init = InitPolicy::FarthestFirst;
    let model = kmeans_fit(&dataset.dominant_vectors, &settings)?;

    let geometry = &dataset.scenario.tx;
    let clustered = Codebook::clustered(geometry, &model.centroids)?;
    let uniform = Codebook::uniform(geometry, n, config.baseline_domain)?;

    let raw_sum = sum_distance(&dataset.dominant_vectors, &model.centroids)?;
    let clustered_sum = sum_distance(&dataset.dominant_vectors, clustered.codewords())?;
    let uniform_sum = sum_distance(&dataset.dominant_vectors, uniform.codewords())?;
    Ok(Trained {
        model,
        clustered,
        uniform,
        raw_sum,
        clustered_sum,
        uniform_sum,
    })
}

fn training_log(dataset_label: &str, dataset: &ChannelDataset, trained: &Trained) -> String {
    let model = &trained.model;
    let history = model
        .objective_history
        .iter()
        .map(|&v| fmt_f64_exact(v))
        .collect::<Vec<_>>()
        .join(" ");
    let duplicates = {
        let pairs = trained.clustered.duplicate_angles();
        if pairs.is_empty() {
            "none".to_string()
        } else {
            pairs
                .iter()
                .map(|(i, j)| format!("{i},{j}"))
                .collect::<Vec<_>>()
                .join(" ")
        }
    };
    let mut s = String::new();
    s.push_str(&format!("dataset = {dataset_label}\n"));
    s.push_str(&format!("samples = {}\n", dataset.len()));
    s.push_str(&format!("clusters = {}\n", model.centroids.len()));
    s.push_str(&format!("iterations = {}\n", model.iterations));
    s.push_str(&format!("converged = {}\n", model.converged));
    s.push_str(&format!(
        "objective-initial = {}\n",
        fmt_f64_exact(model.objective_history[0])
    ));
    s.push_str(&format!(
        "objective-final = {}\n",
        fmt_f64_exact(model.objective())
    ));
    s.push_str(&format!("objective-history = {history}\n"));
    s.push_str(&format!(
        "sum-distance-centroids = {}\n",
        fmt_f64_exact(trained.raw_sum)
    ));
    s.push_str(&format!(
        "sum-distance-clustered = {}\n",
        fmt_f64_exact(trained.clustered_sum)
    ));
    s.push_str(&format!(
        "sum-distance-uniform = {}\n",
        fmt_f64_exact(trained.uniform_sum)
    ));
    s.push_str(&format!("duplicate-angles = {duplicates}\n"));
    s
}

fn write_training_outputs(
    config: &ExperimentConfig,
    dataset_label: &str,
    dataset: &ChannelDataset,
    trained: &Trained,
) -> Result<(PathBuf, PathBuf, PathBuf)> {
    fs::create_dir_all(&config.out)?;
    let clustered_path = config.out.join(CLUSTERED_FILE);
    let uniform_path = config.out.join(UNIFORM_FILE);
    let log_path = config.out.join(TRAIN_LOG_FILE);

    let mut body = Vec::new();
    write_codebook(&mut body, &trained.clustered)?;
    write_with_header(&clustered_path, config, &body)?;

    body.clear();
    write_codebook(&mut body, &trained.uniform)?;
    write_with_header(&uniform_path, config, &body)?;

    let log = training_log(dataset_label, dataset, trained);
    write_with_header(&log_path, config, log.as_bytes())?;
    Ok((clustered_path, uniform_path, log_path))
}

#[derive(Debug)]
pub struct TrainOutput {
    pub clustered_path: PathBuf,
    pub uniform_path: PathBuf,
    pub log_path: PathBuf,
    pub iterations: usize,
    pub converged: bool,
    pub clustered_sum: f64,
    pub uniform_sum: f64,
}

pub fn cmd_train(dataset_path: &Path, config: &ExperimentConfig) -> CliResult<TrainOutput> {
    config.validate()?;
    let dataset = load_dataset(dataset_path)?;
    check_geometry(config, dataset.scenario.tx.num_elements, dataset.scenario.rx.num_elements)?;

    let trained = train_on_dataset(&dataset, config)?;
    let (clustered_path, uniform_path, log_path) = write_training_outputs(
        config,
        &dataset_path.display().to_string(),
        &dataset,
        &trained,
    )?;
    Ok(TrainOutput {
        clustered_path,
        uniform_path,
        log_path,
        iterations: trained.model.iterations,
        converged: trained.model.converged,
        clustered_sum: trained.clustered_sum,
        uniform_sum: trained.uniform_sum,
    })
}

fn check_geometry(config: &ExperimentConfig, nt: usize, nr: usize) -> Result<()> {
    if nt != config.nt {
        return Err(Error::DimensionMismatch {
            expected: config.nt,
            got: nt,
        });
    }
    if nr != config.nr {
        return Err(Error::DimensionMismatch {
            expected: config.nr,
            got: nr,
        });
    }
    Ok(())
}

#[derive(Debug)]
pub struct EvalOutput {
    pub csv_path: PathBuf,
    pub curve: RateCurve,
}

pub fn cmd_eval(codebook_path: &Path, config: &ExperimentConfig) -> CliResult<EvalOutput> {
    config.validate()?;
    let cb = load_codebook(codebook_path)?;
    let scenario = config.scenario()?;
    if cb.geometry().num_elements != config.nt {
        return Err(Error::DimensionMismatch {
            expected: config.nt,
            got: cb.geometry().num_elements,
        }
        .into());
    }
    if (cb.geometry().spacing_wavelengths - scenario.tx.spacing_wavelengths).abs() > 1e-15 {
        return Err(Error::invalid(format!(
            "codebook element spacing {} does not match the scenario spacing {}",
            cb.geometry().spacing_wavelengths,
            scenario.tx.spacing_wavelengths
        ))
        .into());
    }

    let grid = config.snr_grid()?;
    let (center_aod, center_aoa) = dataset_centers(config.seed);
    let stream = RandomStream::with_stream(config.seed, EVAL_STREAM);
    let curve = monte_carlo_rate(
        &scenario,
        center_aod,
        center_aoa,
        &cb,
        &grid,
        config.trials,
        stream,
    )?;

    fs::create_dir_all(&config.out).map_err(Error::from)?;
    let csv_path = config
        .out
        .join(format!("rates_{}.csv", cb.kind().token()));
    let mut body = Vec::new();
    write_rate_csv(&mut body, &config.scenario_id(), std::slice::from_ref(&curve))?;
    write_with_header(&csv_path, config, &body)?;
    Ok(EvalOutput { csv_path, curve })
}

/// One SNR point of a comparison, after CSV rounding: `gap` is exactly
/// `clustered - uniform` of the values the CSV carries.
#[derive(Clone, Copy, Debug)]
pub struct GapRow {
    pub snr_db: f64,
    pub clustered: f64,
    pub uniform: f64,
    pub gap: f64,
}

#[derive(Debug)]
pub struct CompareOutput {
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
    pub clustered_path: PathBuf,
    pub uniform_path: PathBuf,
    pub log_path: PathBuf,
    pub rows: Vec<GapRow>,
}

/// Full pipeline on one scenario: draw a training set, fit the clustered
/// codebook, build the uniform baseline, and sweep both over the SNR grid
/// against a shared set of evaluation channels.
pub fn cmd_compare(config: &ExperimentConfig) -> CliResult<CompareOutput> {
    config.validate()?;
    let scenario = config.scenario()?;
    fs::create_dir_all(&config.out)
        .map_err(Error::from)
        .stage("generate")?;

    let dataset = generate_dataset(&scenario, config.samples).stage("generate")?;

    let trained = train_on_dataset(&dataset, config).stage("train")?;
    let (clustered_path, uniform_path, log_path) =
        write_training_outputs(config, "(in-memory)", &dataset, &trained).stage("train")?;

    let grid = config.snr_grid().stage("eval")?;
    let stream = RandomStream::with_stream(config.seed, EVAL_STREAM);
    let curve_c = monte_carlo_rate(
        &scenario,
        dataset.center_aod,
        dataset.center_aoa,
        &trained.clustered,
        &grid,
        config.trials,
        stream,
    )
    .stage("eval")?;
    let curve_u = monte_carlo_rate(
        &scenario,
        dataset.center_aod,
        dataset.center_aoa,
        &trained.uniform,
        &grid,
        config.trials,
        stream,
    )
    .stage("eval")?;

    let csv_path = config.out.join(COMPARE_CSV_FILE);
    let mut body = Vec::new();
    write_rate_csv(
        &mut body,
        &config.scenario_id(),
        &[curve_c.clone(), curve_u.clone()],
    )
    .stage("eval")?;
    write_with_header(&csv_path, config, &body).stage("eval")?;

    let rows: Vec<GapRow> = grid
        .db()
        .iter()
        .enumerate()
        .map(|(i, &snr_db)| {
            let clustered = round10(curve_c.mean_rate[i]);
            let uniform = round10(curve_u.mean_rate[i]);
            GapRow {
                snr_db,
                clustered,
                uniform,
                gap: clustered - uniform,
            }
        })
        .collect();

    let summary_path = config.out.join(COMPARE_SUMMARY_FILE);
    let mut summary = String::from("snr_db clustered uniform gap\n");
    for row in &rows {
        summary.push_str(&format!(
            "{} {} {} {}\n",
            fmt_f64_short(row.snr_db),
            fmt_f64_short(row.clustered),
            fmt_f64_short(row.uniform),
            fmt_f64_exact(row.gap)
        ));
    }
    write_with_header(&summary_path, config, summary.as_bytes()).stage("eval")?;

    Ok(CompareOutput {
        csv_path,
        summary_path,
        clustered_path,
        uniform_path,
        log_path,
        rows,
    })
}
