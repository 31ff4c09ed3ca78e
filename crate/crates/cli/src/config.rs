//! Experiment configuration with three layers of precedence: built-in
//! defaults, then a flat `key = value` config file, then command-line flags.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use beamcluster::channel::{ArrayGeometry, GainNormalization, ScenarioConfig};
use beamcluster::codebook::UniformDomain;
use beamcluster::evaluation::SnrGrid;
use beamcluster::{Error, Result};
use clap::Args;

/// Largest supported feedback word; keeps `1 << bits` inside `usize`.
pub const MAX_BITS: u32 = 32;

pub fn domain_token(domain: UniformDomain) -> &'static str {
    match domain {
        UniformDomain::Cosine => "cosine",
        UniformDomain::Angle => "angle",
    }
}

pub fn domain_from_token(token: &str) -> Result<UniformDomain> {
    match token {
        "cosine" => Ok(UniformDomain::Cosine),
        "angle" => Ok(UniformDomain::Angle),
        other => Err(Error::invalid(format!(
            "baseline domain must be `cosine` or `angle`, got `{other}`"
        ))),
    }
}

fn gain_from_token(token: &str) -> Result<GainNormalization> {
    GainNormalization::from_token(token).ok_or_else(|| {
        Error::invalid(format!(
            "gain normalization must be `per-path` or `normalized`, got `{token}`"
        ))
    })
}

/// Fully resolved experiment parameters shared by every subcommand.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    /// Transmit array elements.
    pub nt: usize,
    /// Receive array elements.
    pub nr: usize,
    /// Feedback bits; the codebook holds `2^bits` codewords.
    pub bits: u32,
    /// Propagation paths per channel draw.
    pub paths: usize,
    /// Departure-angle window width in degrees, `0..=180`.
    pub angle_spread_deg: f64,
    /// Training samples per dataset.
    pub samples: usize,
    /// Monte Carlo trials per rate estimate.
    pub trials: usize,
    pub snr_start_db: f64,
    pub snr_stop_db: f64,
    pub snr_step_db: f64,
    pub seed: u64,
    /// Spacing rule for the uniform baseline codebook.
    pub baseline_domain: UniformDomain,
    pub gain_norm: GainNormalization,
    /// Directory all output files are written into.
    pub out: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            nt: 8,
            nr: 2,
            bits: 4,
            paths: 8,
            angle_spread_deg: 30.0,
            samples: 10_000,
            trials: 2_000,
            snr_start_db: -10.0,
            snr_stop_db: 20.0,
            snr_step_db: 5.0,
            seed: 1,
            baseline_domain: UniformDomain::Cosine,
            gain_norm: GainNormalization::PerPathUnit,
            out: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn num_codewords(&self) -> usize {
        1usize << self.bits
    }

    /// Angle spread in radians. Computed as `deg / 180 * π` so that 180°
    /// maps to π exactly (`to_radians` can overshoot by one ulp, which the
    /// scenario validator would reject).
    pub fn angle_spread(&self) -> f64 {
        self.angle_spread_deg / 180.0 * std::f64::consts::PI
    }

    pub fn scenario(&self) -> Result<ScenarioConfig> {
        Ok(ScenarioConfig {
            tx: ArrayGeometry::half_wavelength(self.nt)?,
            rx: ArrayGeometry::half_wavelength(self.nr)?,
            num_paths: self.paths,
            angle_spread: self.angle_spread(),
            gain_normalization: self.gain_norm,
            seed: self.seed,
        })
    }

    pub fn snr_grid(&self) -> Result<SnrGrid> {
        SnrGrid::from_range(self.snr_start_db, self.snr_stop_db, self.snr_step_db)
    }

    /// Scenario label used in the CSV `scenario_id` column.
    pub fn scenario_id(&self) -> String {
        format!(
            "nt{}-nr{}-p{}-spread{}-seed{}",
            self.nt, self.nr, self.paths, self.angle_spread_deg, self.seed
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.nt == 0 || self.nr == 0 {
            return Err(Error::invalid("antenna counts must be at least 1"));
        }
        if !(1..=MAX_BITS).contains(&self.bits) {
            return Err(Error::invalid(format!(
                "feedback bits must lie in 1..={MAX_BITS}"
            )));
        }
        if self.paths == 0 {
            return Err(Error::invalid("path count must be at least 1"));
        }
        if !(self.angle_spread_deg.is_finite() && (0.0..=180.0).contains(&self.angle_spread_deg)) {
            return Err(Error::invalid(
                "angle spread must lie in [0, 180] degrees",
            ));
        }
        if self.samples < self.num_codewords() {
            return Err(Error::invalid(format!(
                "samples must be at least 2^bits = {}, got {}",
                self.num_codewords(),
                self.samples
            )));
        }
        if self.trials == 0 {
            return Err(Error::invalid("trial count must be at least 1"));
        }
        if !(self.snr_step_db.is_finite() && self.snr_step_db > 0.0) {
            return Err(Error::invalid("SNR step must be positive"));
        }
        if !(self.snr_start_db.is_finite()
            && self.snr_stop_db.is_finite()
            && self.snr_stop_db >= self.snr_start_db)
        {
            return Err(Error::invalid(
                "SNR range must be finite with stop >= start",
            ));
        }
        Ok(())
    }

    /// The `#`-prefixed block echoed at the top of every output file.
    pub fn comment_block(&self) -> String {
        let mut s = String::from("# effective-config\n");
        let _ = writeln!(s, "# nt = {}", self.nt);
        let _ = writeln!(s, "# nr = {}", self.nr);
        let _ = writeln!(s, "# bits = {}", self.bits);
        let _ = writeln!(s, "# paths = {}", self.paths);
        let _ = writeln!(s, "# angle-spread-deg = {}", self.angle_spread_deg);
        let _ = writeln!(s, "# samples = {}", self.samples);
        let _ = writeln!(s, "# trials = {}", self.trials);
        let _ = writeln!(s, "# snr-start = {}", self.snr_start_db);
        let _ = writeln!(s, "# snr-stop = {}", self.snr_stop_db);
        let _ = writeln!(s, "# snr-step = {}", self.snr_step_db);
        let _ = writeln!(s, "# seed = {}", self.seed);
        let _ = writeln!(s, "# baseline-domain = {}", domain_token(self.baseline_domain));
        let _ = writeln!(s, "# gain-norm = {}", self.gain_norm.token());
        let _ = writeln!(s, "# out = {}", self.out.display());
        s
    }
}

/// One layer of overrides; unset fields leave the layer below untouched.
#[derive(Clone, Debug, Default)]
pub struct ConfigOverrides {
    pub nt: Option<usize>,
    pub nr: Option<usize>,
    pub bits: Option<u32>,
    pub paths: Option<usize>,
    pub angle_spread_deg: Option<f64>,
    pub samples: Option<usize>,
    pub trials: Option<usize>,
    pub snr_start_db: Option<f64>,
    pub snr_stop_db: Option<f64>,
    pub snr_step_db: Option<f64>,
    pub seed: Option<u64>,
    pub baseline_domain: Option<UniformDomain>,
    pub gain_norm: Option<GainNormalization>,
    pub out: Option<PathBuf>,
}

impl ConfigOverrides {
    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        macro_rules! take {
            ($field:ident) => {
                if let Some(v) = self.$field.clone() {
                    cfg.$field = v;
                }
            };
        }
        take!(nt);
        take!(nr);
        take!(bits);
        take!(paths);
        take!(angle_spread_deg);
        take!(samples);
        take!(trials);
        take!(snr_start_db);
        take!(snr_stop_db);
        take!(snr_step_db);
        take!(seed);
        take!(baseline_domain);
        take!(gain_norm);
        take!(out);
    }

    fn set(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        fn num<T: std::str::FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
            value.parse().map_err(|_| {
                Error::invalid(format!(
                    "config line {line}: `{key}` got unparseable value `{value}`"
                ))
            })
        }
        match key {
            "nt" => self.nt = Some(num(key, value, line)?),
            "nr" => self.nr = Some(num(key, value, line)?),
            "bits" => self.bits = Some(num(key, value, line)?),
            "paths" => self.paths = Some(num(key, value, line)?),
            "angle-spread-deg" => self.angle_spread_deg = Some(num(key, value, line)?),
            "samples" => self.samples = Some(num(key, value, line)?),
            "trials" => self.trials = Some(num(key, value, line)?),
            "snr-start" => self.snr_start_db = Some(num(key, value, line)?),
            "snr-stop" => self.snr_stop_db = Some(num(key, value, line)?),
            "snr-step" => self.snr_step_db = Some(num(key, value, line)?),
            "seed" => self.seed = Some(num(key, value, line)?),
            "baseline-domain" => self.baseline_domain = Some(domain_from_token(value)?),
            "gain-norm" => self.gain_norm = Some(gain_from_token(value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            other => {
                return Err(Error::invalid(format!(
                    "config line {line}: unknown key `{other}`"
                )))
            }
        }
        Ok(())
    }
}

/// Parses flat `key = value` config text. Keys are the flag names without
/// the leading dashes; `#` comments and blank lines are skipped; on repeated
/// keys the last entry wins.
pub fn parse_config_text(text: &str) -> Result<ConfigOverrides> {
    let mut overrides = ConfigOverrides::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed.split_once('=').ok_or_else(|| {
            Error::invalid(format!("config line {line}: expected `key = value`"))
        })?;
        overrides.set(key.trim(), value.trim(), line)?;
    }
    Ok(overrides)
}

pub fn load_config_file(path: &Path) -> Result<ConfigOverrides> {
    parse_config_text(&fs::read_to_string(path)?)
}

/// The shared flag set every subcommand accepts. Flags override config-file
/// entries, which override defaults.
#[derive(Args, Clone, Debug, Default)]
pub struct ConfigFlags {
    /// Flat `key = value` config file; keys match the flag names.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Transmit array elements.
    #[arg(long)]
    pub nt: Option<usize>,
    /// Receive array elements.
    #[arg(long)]
    pub nr: Option<usize>,
    /// Feedback bits; the codebook holds 2^bits beams.
    #[arg(long)]
    pub bits: Option<u32>,
    /// Propagation paths per channel draw.
    #[arg(long)]
    pub paths: Option<usize>,
    /// Departure-angle window width in degrees (0 to 180).
    #[arg(long = "angle-spread-deg")]
    pub angle_spread_deg: Option<f64>,
    /// Training samples per dataset.
    #[arg(long)]
    pub samples: Option<usize>,
    /// Monte Carlo trials per rate estimate.
    #[arg(long)]
    pub trials: Option<usize>,
    /// First SNR point in dB.
    #[arg(long = "snr-start")]
    pub snr_start: Option<f64>,
    /// Last SNR point in dB.
    #[arg(long = "snr-stop")]
    pub snr_stop: Option<f64>,
    /// SNR grid step in dB.
    #[arg(long = "snr-step")]
    pub snr_step: Option<f64>,
    /// Root seed for all randomness.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Uniform-baseline spacing rule: `cosine` or `angle`.
    #[arg(long = "baseline-domain")]
    pub baseline_domain: Option<String>,
    /// Path gain scaling: `per-path` or `normalized`.
    #[arg(long = "gain-norm")]
    pub gain_norm: Option<String>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ConfigFlags {
    fn overrides(&self) -> Result<ConfigOverrides> {
        Ok(ConfigOverrides {
            nt: self.nt,
            nr: self.nr,
            bits: self.bits,
            paths: self.paths,
            angle_spread_deg: self.angle_spread_deg,
            samples: self.samples,
            trials: self.trials,
            snr_start_db: self.snr_start,
            snr_stop_db: self.snr_stop,
            snr_step_db: self.snr_step,
            seed: self.seed,
            baseline_domain: self
                .baseline_domain
                .as_deref()
                .map(domain_from_token)
                .transpose()?,
            gain_norm: self.gain_norm.as_deref().map(gain_from_token).transpose()?,
            out: self.out.clone(),
        })
    }

    /// Defaults, overlaid with the config file (if given), overlaid with
    /// these flags, then validated.
    pub fn resolve(&self) -> Result<ExperimentConfig> {
        let mut cfg = ExperimentConfig::default();
        if let Some(path) = &self.config {
            load_config_file(path)?.apply(&mut cfg);
        }
        self.overrides()?.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_pass_validation() {
        let cfg = ExperimentConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.num_codewords(), 16);
        cfg.scenario().unwrap();
        assert_eq!(cfg.snr_grid().unwrap().len(), 7);
    }

    #[test]
    fn full_spread_maps_to_pi_exactly() {
        let cfg = ExperimentConfig {
            angle_spread_deg: 180.0,
            ..ExperimentConfig::default()
        };
        assert_eq!(cfg.angle_spread(), std::f64::consts::PI);
        cfg.scenario().unwrap();
    }

    #[test]
    fn flags_beat_file_beats_defaults() {
        let file = parse_config_text("samples = 64\nbits = 3\nseed = 9\n").unwrap();
        let mut cfg = ExperimentConfig::default();
        file.apply(&mut cfg);
        assert_eq!((cfg.samples, cfg.bits, cfg.seed), (64, 3, 9));
        // trials untouched by the file
        assert_eq!(cfg.trials, 2_000);

        let flags = ConfigFlags {
            samples: Some(128),
            ..ConfigFlags::default()
        };
        flags.overrides().unwrap().apply(&mut cfg);
        assert_eq!(cfg.samples, 128);
        assert_eq!(cfg.bits, 3);
    }

    #[test]
    fn config_text_rejects_unknown_keys_and_bad_values() {
        assert!(parse_config_text("volume = 11\n").is_err());
        assert!(parse_config_text("nt eight\n").is_err());
        assert!(parse_config_text("nt = eight\n").is_err());
        assert!(parse_config_text("baseline-domain = linear\n").is_err());
        // comments, blanks, and repeats are fine; last repeat wins
        let o = parse_config_text("# c\n\nnt = 4\nnt = 6\n").unwrap();
        assert_eq!(o.nt, Some(6));
    }

    #[test]
    fn validation_rejects_out_of_range_fields() {
        let base = ExperimentConfig::default();
        let cases: Vec<ExperimentConfig> = vec![
            ExperimentConfig {
                bits: 0,
                ..base.clone()
            },
            ExperimentConfig {
                samples: 15,
                ..base.clone()
            },
            ExperimentConfig {
                snr_step_db: 0.0,
                ..base.clone()
            },
            ExperimentConfig {
                snr_stop_db: -20.0,
                ..base.clone()
            },
            ExperimentConfig {
                angle_spread_deg: 181.0,
                ..base.clone()
            },
            ExperimentConfig {
                trials: 0,
                ..base.clone()
            },
            ExperimentConfig {
                nt: 0,
                ..base.clone()
            },
        ];
        for bad in cases {
            assert!(bad.validate().is_err(), "{bad:?} should fail validation");
        }
        // samples == 2^bits is the boundary and is allowed
        ExperimentConfig {
            samples: 16,
            ..base
        }
        .validate()
        .unwrap();
    }

    #[test]
    fn comment_block_lines_all_start_with_hash() {
        let block = ExperimentConfig::default().comment_block();
        assert!(block.lines().count() >= 15);
        for line in block.lines() {
            assert!(line.starts_with('#'), "{line}");
        }
        assert!(block.contains("# angle-spread-deg = 30\n"));
        assert!(block.contains("# gain-norm = per-path\n"));
    }
}
