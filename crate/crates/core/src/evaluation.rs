//! Codeword selection, achievable rate, and Monte Carlo rate curves.
//!
//! A receiver with full channel knowledge picks the codeword maximizing the
//! received power `‖Hc‖²` and feeds its index back; the link then attains
//! `log2(1 + SNR·‖Hc‖²)` bits per channel use. [`monte_carlo_rate`] averages
//! that rate over fresh channel draws, reusing the same draws across SNR
//! points and across codebooks evaluated with the same stream, so curve
//! differences are not washed out by sampling noise.

use std::io::Write;

use crate::channel::{sample_channel, ChannelDataset, ScenarioConfig};
use crate::clustering::sum_distance;
use crate::codebook::{Codebook, CodebookKind};
use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, RandomStream};
use crate::textio::fmt_f64_short;

/// SNR sweep points in dB, strictly increasing.
#[derive(Clone, Debug, PartialEq)]
pub struct SnrGrid {
    db: Vec<f64>,
}

impl SnrGrid {
    pub fn new(db: Vec<f64>) -> Result<Self> {
        if db.is_empty() {
            return Err(Error::invalid("SNR grid must not be empty"));
        }
        if db.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid("SNR points must be finite"));
        }
        if db.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid("SNR points must be strictly increasing"));
        }
        Ok(Self { db })
    }

    /// Inclusive arithmetic sweep `start, start+step, …` up to `stop` (the
    /// endpoint is kept when it lands within rounding of a step).
    pub fn from_range(start_db: f64, stop_db: f64, step_db: f64) -> Result<Self> {
        if !(start_db.is_finite() && stop_db.is_finite() && step_db.is_finite()) {
            return Err(Error::invalid("SNR range must be finite"));
        }
        if step_db <= 0.0 {
            return Err(Error::invalid("SNR step must be positive"));
        }
        if stop_db < start_db {
            return Err(Error::invalid("SNR stop must not precede start"));
        }
        let count = ((stop_db - start_db) / step_db + 1e-9).floor() as usize + 1;
        Self::new((0..count).map(|k| start_db + step_db * k as f64).collect())
    }

    pub fn db(&self) -> &[f64] {
        &self.db
    }

    /// The grid as linear power ratios `10^(dB/10)`.
    pub fn linear(&self) -> Vec<f64> {
        self.db.iter().map(|x| 10f64.powf(x / 10.0)).collect()
    }

    pub fn len(&self) -> usize {
        self.db.len()
    }

    pub fn is_empty(&self) -> bool {
        self.db.is_empty()
    }
}

fn best_codeword_gain(h: &ComplexMatrix, cb: &Codebook) -> Result<(usize, f64)> {
    if cb.is_empty() {
        return Err(Error::invalid("codebook must not be empty"));
    }
    if h.cols() != cb.geometry().num_elements {
        return Err(Error::DimensionMismatch {
            expected: h.cols(),
            got: cb.geometry().num_elements,
        });
    }
    let mut best = 0usize;
    let mut best_gain = -1.0;
    for (i, c) in cb.codewords().iter().enumerate() {
        let y = h.mul_vector(c.entries())?;
        let gain: f64 = y.iter().map(|z| z.norm_sqr()).sum();
        if gain > best_gain {
            best = i;
            best_gain = gain;
        }
    }
    Ok((best, best_gain))
}

/// Index of the codeword maximizing the received power `‖Hc‖²`; ties break
/// to the lowest index.
pub fn select_codeword(h: &ComplexMatrix, cb: &Codebook) -> Result<usize> {
    best_codeword_gain(h, cb).map(|(i, _)| i)
}

/// Rate of the best codeword in the book: `log2(1 + snr·max_c ‖Hc‖²)`.
pub fn achievable_rate(h: &ComplexMatrix, cb: &Codebook, snr_linear: f64) -> Result<f64> {
    if !(snr_linear >= 0.0 && snr_linear.is_finite()) {
        return Err(Error::invalid("SNR must be finite and non-negative"));
    }
    let (_, gain) = best_codeword_gain(h, cb)?;
    Ok((1.0 + snr_linear * gain).log2())
}

/// Mean achievable rate of one codebook across an SNR sweep.
#[derive(Clone, Debug)]
pub struct RateCurve {
    pub codebook_kind: CodebookKind,
    pub snr_db: Vec<f64>,
    pub mean_rate: Vec<f64>,
    /// Standard error of each mean (zero when `trials` is 1).
    pub std_error: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
}

/// Estimates the mean achievable rate by Monte Carlo.
///
/// Trial `t` draws its channel from `stream.substream(t)`, so the same
/// stream replays the same channels regardless of the SNR grid or the
/// codebook under test: rate curves produced with one stream share their
/// randomness point for point. Each trial selects its codeword once and
/// reuses the resulting gain across all SNR points.
pub fn monte_carlo_rate(
    scenario: &ScenarioConfig,
    center_aod: f64,
    center_aoa: f64,
    cb: &Codebook,
    grid: &SnrGrid,
    trials: usize,
    stream: RandomStream,
) -> Result<RateCurve> {
    if trials == 0 {
        return Err(Error::invalid("trial count must be at least 1"));
    }
    let snr_linear = grid.linear();
    let mut rates = vec![Vec::with_capacity(trials); grid.len()];
    for t in 0..trials {
        let draw = sample_channel(stream.substream(t as u64), scenario, center_aod, center_aoa)?;
        let (_, gain) = best_codeword_gain(&draw.h, cb)?;
        for (per_snr, &snr) in rates.iter_mut().zip(&snr_linear) {
            per_snr.push((1.0 + snr * gain).log2());
        }
    }

    let mut mean_rate = Vec::with_capacity(grid.len());
    let mut std_error = Vec::with_capacity(grid.len());
    for per_snr in &rates {
        let n = per_snr.len() as f64;
        let mean = per_snr.iter().sum::<f64>() / n;
        let se = if trials > 1 {
            let var = per_snr.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var.max(0.0) / n).sqrt()
        } else {
            0.0
        };
        mean_rate.push(mean);
        std_error.push(se);
    }

    Ok(RateCurve {
        codebook_kind: cb.kind(),
        snr_db: grid.db().to_vec(),
        mean_rate,
        std_error,
        trials,
        seed: stream.seed(),
    })
}

/// Quantization quality of one codebook on one dataset: total and mean
/// squared chordal distance from each sample's dominant transmit direction
/// to the nearest codeword.
#[derive(Clone, Debug)]
pub struct DistortionSummary {
    pub codebook_kind: CodebookKind,
    pub sum: f64,
    pub mean: f64,
}

pub fn distortion_report(
    dataset: &ChannelDataset,
    codebooks: &[&Codebook],
) -> Result<Vec<DistortionSummary>> {
    codebooks
        .iter()
        .map(|cb| {
            let sum = sum_distance(&dataset.dominant_vectors, cb.codewords())?;
            Ok(DistortionSummary {
                codebook_kind: cb.kind(),
                sum,
                mean: sum / dataset.len() as f64,
            })
        })
        .collect()
}

/// Writes rate curves as CSV with one row per `(codebook, SNR)` pair:
///
/// ```text
/// scenario_id,codebook_kind,snr_db,mean_rate,std_error,trials,seed
/// ```
///
/// Floats carry 10 significant digits.
pub fn write_rate_csv(w: &mut impl Write, scenario_id: &str, curves: &[RateCurve]) -> Result<()> {
    writeln!(
        w,
        "scenario_id,codebook_kind,snr_db,mean_rate,std_error,trials,seed"
    )?;
    for curve in curves {
        for ((&snr, &mean), &se) in curve
            .snr_db
            .iter()
            .zip(&curve.mean_rate)
            .zip(&curve.std_error)
        {
            writeln!(
                w,
                "{scenario_id},{},{},{},{},{},{}",
                curve.codebook_kind.token(),
                fmt_f64_short(snr),
                fmt_f64_short(mean),
                fmt_f64_short(se),
                curve.trials,
                curve.seed,
            )?;
        }
    }
    Ok(())
}
