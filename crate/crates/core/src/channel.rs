//! Ray-based narrowband channel simulation for uniform linear arrays.
//!
//! A channel realization is a sum of `p` plane-wave rays:
//!
//! ```text
//! H = sqrt(Nr·Nt) · Σᵢ gᵢ · a(Nr, ϕᵢ) · a(Nt, φᵢ)^H
//! ```
//!
//! where `a(N, θ)` is the unit-norm array response with entries
//! `(1/√N)·exp(+j·2π·(d/λ)·n·cos θ)`, the `gᵢ` are i.i.d. circularly
//! symmetric complex Gaussian gains, departure angles `φᵢ` are uniform on
//! `[center, center + spread]`, and arrival angles mirror that construction
//! around an independent center. A dataset fixes both centers once (drawn
//! from the seed) and then draws every sample from per-sample substreams, so
//! generation order and parallel generation agree bit for bit.

use num_complex::Complex64;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::numerics::{
    complex_gaussian, dominant_right_singular_vector, ComplexMatrix, ComplexUnitVector,
    RandomStream,
};
use crate::textio::{
    fmt_complex_exact, fmt_f64_exact, parse_complex, parse_f64, parse_u64, parse_usize, LineCursor,
};

/// Substream ids reserved by dataset generation, all split off
/// `RandomStream::new(seed)`: ids `0` and `1` are the departure/arrival
/// centers and sample `k` uses id `SAMPLE_STREAM_BASE + k`. Callers deriving
/// additional streams from the same seed must pick ids above any sample index.
pub const CENTER_AOD_STREAM: u64 = 0;
pub const CENTER_AOA_STREAM: u64 = 1;
pub const SAMPLE_STREAM_BASE: u64 = 2;

/// Default element spacing in wavelengths (half-wavelength array).
pub const DEFAULT_SPACING: f64 = 0.5;

// ---------------------------------------------------------------------------
// Configuration types
// ---------------------------------------------------------------------------

/// A uniform linear array: element count and spacing in wavelengths.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArrayGeometry {
    pub num_elements: usize,
    pub spacing_wavelengths: f64,
}

impl ArrayGeometry {
    pub fn new(num_elements: usize, spacing_wavelengths: f64) -> Result<Self> {
        let g = Self {
            num_elements,
            spacing_wavelengths,
        };
        g.validate()?;
        Ok(g)
    }

    /// Half-wavelength array with `n` elements.
    pub fn half_wavelength(n: usize) -> Result<Self> {
        Self::new(n, DEFAULT_SPACING)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_elements == 0 {
            return Err(Error::invalid("array needs at least one element"));
        }
        if !(self.spacing_wavelengths > 0.0 && self.spacing_wavelengths.is_finite()) {
            return Err(Error::invalid("element spacing must be positive and finite"));
        }
        Ok(())
    }
}

/// How per-path gain variance scales with the path count.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GainNormalization {
    /// Every path gain is CN(0, 1); expected squared Frobenius norm of the
    /// channel is `Nr·Nt·p`.
    PerPathUnit,
    /// Gains are scaled by `1/√p`; expected squared Frobenius norm is `Nr·Nt`
    /// regardless of the path count.
    TotalUnit,
}

impl GainNormalization {
    pub fn token(&self) -> &'static str {
        match self {
            GainNormalization::PerPathUnit => "per-path",
            GainNormalization::TotalUnit => "normalized",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "per-path" => Some(GainNormalization::PerPathUnit),
            "normalized" => Some(GainNormalization::TotalUnit),
            _ => None,
        }
    }
}

/// Full description of a propagation scenario.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub tx: ArrayGeometry,
    pub rx: ArrayGeometry,
    pub num_paths: usize,
    /// Angle spread in radians, `0 ≤ spread ≤ π`.
    pub angle_spread: f64,
    pub gain_normalization: GainNormalization,
    pub seed: u64,
}

impl ScenarioConfig {
    pub fn validate(&self) -> Result<()> {
        self.tx.validate()?;
        self.rx.validate()?;
        if self.num_paths == 0 {
            return Err(Error::invalid("path count must be at least 1"));
        }
        if !(self.angle_spread.is_finite()
            && (0.0..=std::f64::consts::PI).contains(&self.angle_spread))
        {
            return Err(Error::invalid("angle spread must lie in [0, π] radians"));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// Array response of `geometry` toward physical angle `theta` (radians):
/// entry `n` is `(1/√N)·exp(+j·2π·spacing·n·cos θ)`.
pub fn steering_vector(geometry: &ArrayGeometry, theta: f64) -> ComplexUnitVector {
    debug_assert!(theta.is_finite());
    let n = geometry.num_elements;
    let scale = 1.0 / (n as f64).sqrt();
    let step = std::f64::consts::TAU * geometry.spacing_wavelengths * theta.cos();
    let entries = (0..n)
        .map(|k| Complex64::from_polar(scale, step * k as f64))
        .collect();
    ComplexUnitVector::new_unchecked(entries)
}

/// One uniform draw from `[0, 2π)`, e.g. for a dataset's angle center.
pub fn draw_center(stream: RandomStream) -> f64 {
    let mut rng = stream.rng();
    draw_center_with(&mut rng)
}

fn draw_center_with(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
    use rand::Rng;
    rng.random_range(0.0..std::f64::consts::TAU)
}

/// Draws `p` path angles `center + u`, `u ~ U[0, spread]`, reduced mod 2π.
pub fn sample_path_angles(
    stream: RandomStream,
    center: f64,
    spread: f64,
    p: usize,
) -> Result<Vec<f64>> {
    validate_angle_args(center, spread, p)?;
    let mut rng = stream.rng();
    Ok(path_angles_with(&mut rng, center, spread, p))
}

fn validate_angle_args(center: f64, spread: f64, p: usize) -> Result<()> {
    if p == 0 {
        return Err(Error::invalid("path count must be at least 1"));
    }
    if !center.is_finite() {
        return Err(Error::invalid("angle center must be finite"));
    }
    if !(spread.is_finite() && (0.0..=std::f64::consts::TAU).contains(&spread)) {
        return Err(Error::invalid("angle spread must lie in [0, 2π] radians"));
    }
    Ok(())
}

fn path_angles_with(
    rng: &mut rand_chacha::ChaCha8Rng,
    center: f64,
    spread: f64,
    p: usize,
) -> Vec<f64> {
    use rand::Rng;
    (0..p)
        .map(|_| {
            // random_range rejects an empty range, so spread 0 short-circuits.
            let u = if spread == 0.0 {
                0.0
            } else {
                rng.random_range(0.0..spread)
            };
            (center + u).rem_euclid(std::f64::consts::TAU)
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Channel realizations
// ---------------------------------------------------------------------------

/// One simulated channel. `aod`, `aoa` and `gains` describe the rays that
/// built `h`; they are empty on samples restored from disk, which store only
/// the matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ChannelRealization {
    /// `Nr × Nt` channel matrix.
    pub h: ComplexMatrix,
    /// Departure angle per path, radians in `[0, 2π)`.
    pub aod: Vec<f64>,
    /// Arrival angle per path, radians in `[0, 2π)`.
    pub aoa: Vec<f64>,
    /// Complex gain per path.
    pub gains: Vec<Complex64>,
}

/// Assembles the ray sum `sqrt(Nr·Nt)·Σᵢ gᵢ·a(rx, aoa[i])·a(tx, aod[i])^H`.
pub fn build_channel_matrix(
    rx: &ArrayGeometry,
    tx: &ArrayGeometry,
    aod: &[f64],
    aoa: &[f64],
    gains: &[Complex64],
) -> Result<ComplexMatrix> {
    rx.validate()?;
    tx.validate()?;
    if aod.is_empty() || aod.len() != aoa.len() || aod.len() != gains.len() {
        return Err(Error::invalid(
            "aod, aoa and gains must be non-empty lists of equal length",
        ));
    }
    let nr = rx.num_elements;
    let nt = tx.num_elements;
    let scale = ((nr * nt) as f64).sqrt();
    let mut h = ComplexMatrix::zeros(nr, nt);
    for ((&phi_t, &phi_r), &g) in aod.iter().zip(aoa).zip(gains) {
        let at = steering_vector(tx, phi_t);
        let ar = steering_vector(rx, phi_r);
        let w = g * scale;
        for m in 0..nr {
            let row_factor = w * ar.entries()[m];
            for n in 0..nt {
                h.add_assign_at(m, n, row_factor * at.entries()[n].conj());
            }
        }
    }
    Ok(h)
}

/// Draws one channel realization: departure angles around `center_aod`,
/// arrival angles around `center_aoa`, then per-path gains — all from the
/// given stream, in that order.
pub fn sample_channel(
    stream: RandomStream,
    scenario: &ScenarioConfig,
    center_aod: f64,
    center_aoa: f64,
) -> Result<ChannelRealization> {
    scenario.validate()?;
    validate_angle_args(center_aod, scenario.angle_spread, scenario.num_paths)?;
    validate_angle_args(center_aoa, scenario.angle_spread, scenario.num_paths)?;

    let p = scenario.num_paths;
    let mut rng = stream.rng();
    let aod = path_angles_with(&mut rng, center_aod, scenario.angle_spread, p);
    let aoa = path_angles_with(&mut rng, center_aoa, scenario.angle_spread, p);
    let mut gains = complex_gaussian(&mut rng, p);
    if scenario.gain_normalization == GainNormalization::TotalUnit {
        let s = 1.0 / (p as f64).sqrt();
        for g in &mut gains {
            *g *= s;
        }
    }
    let h = build_channel_matrix(&scenario.rx, &scenario.tx, &aod, &aoa, &gains)?;
    Ok(ChannelRealization { h, aod, aoa, gains })
}

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

/// A batch of channel samples drawn from one scenario, with the dominant
/// right singular vector of every sample cached for clustering.
#[derive(Clone, Debug)]
pub struct ChannelDataset {
    pub scenario: ScenarioConfig,
    /// Departure-angle window start, drawn once per dataset.
    pub center_aod: f64,
    /// Arrival-angle window start, drawn once per dataset (not persisted;
    /// reconstructed from the seed on load).
    pub center_aoa: f64,
    pub samples: Vec<ChannelRealization>,
    pub dominant_vectors: Vec<ComplexUnitVector>,
}

impl ChannelDataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// The angle centers a dataset with this seed uses, in `(aod, aoa)` order.
/// Pure function of the seed, so evaluation can re-derive them.
pub fn dataset_centers(seed: u64) -> (f64, f64) {
    let base = RandomStream::new(seed);
    (
        draw_center(base.substream(CENTER_AOD_STREAM)),
        draw_center(base.substream(CENTER_AOA_STREAM)),
    )
}

/// Generates `l` samples. Fully determined by `scenario.seed`: the two angle
/// centers come from dedicated substreams and sample `k` from substream
/// `SAMPLE_STREAM_BASE + k`, so any generation order produces identical bits.
pub fn generate_dataset(scenario: &ScenarioConfig, l: usize) -> Result<ChannelDataset> {
    scenario.validate()?;
    if l == 0 {
        return Err(Error::invalid("dataset needs at least one sample"));
    }
    let base = RandomStream::new(scenario.seed);
    let (center_aod, center_aoa) = dataset_centers(scenario.seed);

    let mut samples = Vec::with_capacity(l);
    let mut dominant_vectors = Vec::with_capacity(l);
    for k in 0..l {
        let stream = base.substream(SAMPLE_STREAM_BASE + k as u64);
        let sample = sample_channel(stream, scenario, center_aod, center_aoa)?;
        dominant_vectors.push(dominant_right_singular_vector(&sample.h)?);
        samples.push(sample);
    }
    Ok(ChannelDataset {
        scenario: *scenario,
        center_aod,
        center_aoa,
        samples,
        dominant_vectors,
    })
}

// ---------------------------------------------------------------------------
// Text format
// ---------------------------------------------------------------------------

const DATASET_MAGIC: &str = "mimo-dataset";
const DATASET_VERSION: &str = "v1";

/// Writes the dataset in its text format:
///
/// ```text
/// mimo-dataset v1 <Nt> <Nr> <L> <p> <phi_bw_rad> <seed> <center_aod_rad>
/// <re:im ... one line per sample, H entries row-major>
/// ```
///
/// Floats carry 17 significant digits, so a save/load cycle is bit-exact.
pub fn write_dataset(w: &mut impl Write, ds: &ChannelDataset) -> Result<()> {
    let nt = ds.scenario.tx.num_elements;
    let nr = ds.scenario.rx.num_elements;
    writeln!(
        w,
        "{DATASET_MAGIC} {DATASET_VERSION} {nt} {nr} {} {} {} {} {}",
        ds.samples.len(),
        ds.scenario.num_paths,
        fmt_f64_exact(ds.scenario.angle_spread),
        ds.scenario.seed,
        fmt_f64_exact(ds.center_aod),
    )?;
    let mut line = String::new();
    for sample in &ds.samples {
        line.clear();
        for (i, &z) in sample.h.entries().iter().enumerate() {
            if i > 0 {
                line.push(' ');
            }
            line.push_str(&fmt_complex_exact(z));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Parses a dataset written by [`write_dataset`]. Leading `#` comment lines
/// are skipped. Loaded samples carry only their matrices (no per-path
/// metadata), and dominant vectors are recomputed, which is deterministic.
/// The array spacing and gain normalization are not part of the format; the
/// scenario is restored with half-wavelength spacing and per-path unit gains.
pub fn read_dataset(text: &str) -> Result<ChannelDataset> {
    let mut cursor = LineCursor::new(text);
    let (header_no, header) = cursor.expect_line("dataset header")?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.first() != Some(&DATASET_MAGIC) {
        return Err(Error::Version(format!(
            "expected a `{DATASET_MAGIC}` file, found `{}`",
            tokens.first().unwrap_or(&"")
        )));
    }
    if tokens.get(1) != Some(&DATASET_VERSION) {
        return Err(Error::Version(format!(
            "unsupported dataset version `{}`",
            tokens.get(1).unwrap_or(&"")
        )));
    }
    if tokens.len() != 9 {
        return Err(Error::parse(
            header_no,
            format!("dataset header needs 9 fields, found {}", tokens.len()),
        ));
    }
    let nt = parse_usize(tokens[2], header_no, "Nt")?;
    let nr = parse_usize(tokens[3], header_no, "Nr")?;
    let l = parse_usize(tokens[4], header_no, "sample count")?;
    let p = parse_usize(tokens[5], header_no, "path count")?;
    let spread = parse_f64(tokens[6], header_no, "angle spread")?;
    let seed = parse_u64(tokens[7], header_no, "seed")?;
    let center_aod = parse_f64(tokens[8], header_no, "departure center")?;
    if nt == 0 || nr == 0 || l == 0 || p == 0 {
        return Err(Error::parse(
            header_no,
            "Nt, Nr, sample count and path count must be positive".to_string(),
        ));
    }

    let scenario = ScenarioConfig {
        tx: ArrayGeometry::new(nt, DEFAULT_SPACING)?,
        rx: ArrayGeometry::new(nr, DEFAULT_SPACING)?,
        num_paths: p,
        angle_spread: spread,
        gain_normalization: GainNormalization::PerPathUnit,
        seed,
    };
    scenario.validate().map_err(|e| match e {
        Error::InvalidArgument(msg) => Error::parse(header_no, msg),
        other => other,
    })?;

    let mut samples = Vec::with_capacity(l);
    let mut dominant_vectors = Vec::with_capacity(l);
    for k in 0..l {
        let (line_no, line) = cursor.expect_line(&format!("sample {} of {}", k + 1, l))?;
        let mut entries = Vec::with_capacity(nr * nt);
        for token in line.split_whitespace() {
            entries.push(parse_complex(token, line_no, "matrix entry")?);
        }
        if entries.len() != nr * nt {
            return Err(Error::parse(
                line_no,
                format!("expected {} entries, found {}", nr * nt, entries.len()),
            ));
        }
        let h = ComplexMatrix::new(nr, nt, entries).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::parse(line_no, msg),
            other => other,
        })?;
        dominant_vectors.push(dominant_right_singular_vector(&h)?);
        samples.push(ChannelRealization {
            h,
            aod: Vec::new(),
            aoa: Vec::new(),
            gains: Vec::new(),
        });
    }
    cursor.expect_end()?;

    let (_, center_aoa) = dataset_centers(seed);
    Ok(ChannelDataset {
        scenario,
        center_aod,
        center_aoa,
        samples,
        dominant_vectors,
    })
}

pub fn save_dataset(ds: &ChannelDataset, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_dataset(&mut buf, ds)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn load_dataset(path: &Path) -> Result<ChannelDataset> {
    let text = fs::read_to_string(path)?;
    read_dataset(&text)
}
