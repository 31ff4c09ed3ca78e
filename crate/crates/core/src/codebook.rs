//! Beamforming codebooks over a uniform linear transmit array.
//!
//! A codebook is a finite set of unit-norm codewords, each parameterized by a
//! beam angle. Two families are supported:
//!
//! * **Clustered** — one codeword per learned centroid. The beam angle is the
//!   phase-progression fit of the centroid ([`extract_angle`]), and the
//!   codeword reproduces the centroid's steering structure. For a rank-one
//!   ray `H = a_r a_t^H` the received power `‖Hc‖² = ‖a_r‖²·|a_t^H c|²` peaks
//!   at `c = a_t`, so a codeword aimed at a transmit direction must equal the
//!   steering vector of that direction, not its conjugate.
//! * **Uniform** — a fixed grid of beams in the classical conjugate-steering
//!   (DFT) convention, spaced evenly either in the cosine domain or in the
//!   angle domain. The grids are symmetric, so the convention has no effect
//!   on coverage.

use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64;

use crate::channel::ArrayGeometry;
use crate::error::{Error, Result};
use crate::numerics::ComplexUnitVector;
use crate::textio::{
    fmt_complex_exact, fmt_f64_exact, parse_complex, parse_f64, parse_usize, LineCursor,
};

const CODEBOOK_MAGIC: &str = "mimo-codebook";
const CODEBOOK_VERSION: &str = "v1";

/// Beam angles closer than this are reported as duplicates.
pub const DUPLICATE_ANGLE_TOL: f64 = 1e-12;

/// How a codebook's beams were chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodebookKind {
    /// Beams learned from clustered channel directions.
    Clustered,
    /// Evenly spaced beam cosines.
    UniformCosine,
    /// Evenly spaced beam angles.
    UniformAngle,
}

impl CodebookKind {
    pub fn token(&self) -> &'static str {
        match self {
            CodebookKind::Clustered => "clustered",
            CodebookKind::UniformCosine => "uniform-cosine",
            CodebookKind::UniformAngle => "uniform-angle",
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        match token {
            "clustered" => Some(CodebookKind::Clustered),
            "uniform-cosine" => Some(CodebookKind::UniformCosine),
            "uniform-angle" => Some(CodebookKind::UniformAngle),
            _ => None,
        }
    }
}

/// Spacing domain for uniform codebooks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UniformDomain {
    /// Beam cosines at the midpoints of equal bins of `[-1, 1]`.
    Cosine,
    /// Beam angles at the midpoints of equal bins of `[0, π]`.
    Angle,
}

impl UniformDomain {
    fn kind(&self) -> CodebookKind {
        match self {
            UniformDomain::Cosine => CodebookKind::UniformCosine,
            UniformDomain::Angle => CodebookKind::UniformAngle,
        }
    }
}

/// Recovers the beam angle of a vector that follows — exactly or
/// approximately — the phase progression of a steering vector.
///
/// The per-element phase step `ψ` is estimated as the argument of
/// `Σ_n t[n+1]·conj(t[n])`, a least-squares fit that weights each lag by its
/// magnitude, and the angle is `acos(ψ / (2π·spacing))` with the cosine
/// clamped to `[-1, 1]`. For spacing above half a wavelength the step phase
/// wraps and only the principal alias is recovered; at exactly half a
/// wavelength the two endfire directions share one steering vector, so
/// rounding decides which endpoint angle is reported — either rebuilds the
/// same codeword.
pub fn extract_angle(t: &ComplexUnitVector, geometry: &ArrayGeometry) -> Result<f64> {
    geometry.validate()?;
    if geometry.num_elements < 2 {
        return Err(Error::invalid(
            "angle extraction needs at least 2 array elements",
        ));
    }
    if t.dim() != geometry.num_elements {
        return Err(Error::DimensionMismatch {
            expected: geometry.num_elements,
            got: t.dim(),
        });
    }
    let mut acc = Complex64::ZERO;
    for pair in t.entries().windows(2) {
        acc += pair[1] * pair[0].conj();
    }
    let psi = acc.arg(); // arg(0) = 0 maps a degenerate fit to broadside
    let cos = (psi / (std::f64::consts::TAU * geometry.spacing_wavelengths)).clamp(-1.0, 1.0);
    Ok(cos.acos())
}

/// Codeword with per-element phase step `+2π·spacing·signed_cos`; the sign
/// convention of each codebook kind is chosen at the call sites.
fn steered_codeword(geometry: &ArrayGeometry, signed_cos: f64) -> ComplexUnitVector {
    let n = geometry.num_elements;
    let amp = 1.0 / (n as f64).sqrt();
    let step = std::f64::consts::TAU * geometry.spacing_wavelengths * signed_cos;
    let entries = (0..n)
        .map(|k| Complex64::from_polar(amp, step * k as f64))
        .collect();
    ComplexUnitVector::new_unchecked(entries)
}

/// A set of unit-norm beamforming codewords with their beam angles.
#[derive(Clone, Debug)]
pub struct Codebook {
    geometry: ArrayGeometry,
    kind: CodebookKind,
    angles: Vec<f64>,
    codewords: Vec<ComplexUnitVector>,
}

impl Codebook {
    /// Builds one codeword per centroid: the beam angle is the centroid's
    /// extracted angle and the codeword carries the matching `+cos` phase
    /// progression, so a centroid that is itself a steering vector is
    /// reproduced exactly.
    pub fn clustered(geometry: &ArrayGeometry, centroids: &[ComplexUnitVector]) -> Result<Self> {
        if centroids.is_empty() {
            return Err(Error::invalid("codebook needs at least one centroid"));
        }
        let mut angles = Vec::with_capacity(centroids.len());
        let mut codewords = Vec::with_capacity(centroids.len());
        for t in centroids {
            let theta = extract_angle(t, geometry)?;
            angles.push(theta);
            codewords.push(steered_codeword(geometry, theta.cos()));
        }
        Ok(Self {
            geometry: *geometry,
            kind: CodebookKind::Clustered,
            angles,
            codewords,
        })
    }

    /// Builds `n` conjugate-steering beams on an even grid: bin midpoints of
    /// `[-1, 1]` in the cosine domain or of `[0, π]` in the angle domain. At
    /// `n` equal to the element count, the cosine grid is an orthogonal
    /// (DFT) basis.
    pub fn uniform(geometry: &ArrayGeometry, n: usize, domain: UniformDomain) -> Result<Self> {
        geometry.validate()?;
        if n == 0 {
            return Err(Error::invalid("codebook size must be at least 1"));
        }
        let angles: Vec<f64> = match domain {
            UniformDomain::Cosine => (0..n)
                .map(|k| (-1.0 + (2 * k + 1) as f64 / n as f64).acos())
                .collect(),
            UniformDomain::Angle => (0..n)
                .map(|k| std::f64::consts::PI * (k as f64 + 0.5) / n as f64)
                .collect(),
        };
        let codewords = angles
            .iter()
            .map(|theta| steered_codeword(geometry, -theta.cos()))
            .collect();
        Ok(Self {
            geometry: *geometry,
            kind: domain.kind(),
            angles,
            codewords,
        })
    }

    pub fn geometry(&self) -> &ArrayGeometry {
        &self.geometry
    }

    pub fn kind(&self) -> CodebookKind {
        self.kind
    }

    /// Beam angles in radians, aligned with [`Self::codewords`].
    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn codewords(&self) -> &[ComplexUnitVector] {
        &self.codewords
    }

    pub fn len(&self) -> usize {
        self.codewords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.codewords.is_empty()
    }

    /// Index pairs `(i, j)` with `i < j` whose beam angles coincide within
    /// [`DUPLICATE_ANGLE_TOL`]. Clustered codebooks can waste beams this way
    /// when two centroids point the same direction; uniform grids never do.
    pub fn duplicate_angles(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for i in 0..self.angles.len() {
            for j in (i + 1)..self.angles.len() {
                if (self.angles[i] - self.angles[j]).abs() <= DUPLICATE_ANGLE_TOL {
                    pairs.push((i, j));
                }
            }
        }
        pairs
    }
}

/// Writes the codebook in its text format:
///
/// ```text
/// mimo-codebook v1 <Nt> <N> <kind> <spacing>
/// <theta> <re:im ... Nt entries>      (one line per codeword)
/// ```
///
/// Floats carry 17 significant digits, so a save/load cycle is bit-exact.
pub fn write_codebook(w: &mut impl Write, cb: &Codebook) -> Result<()> {
    writeln!(
        w,
        "{CODEBOOK_MAGIC} {CODEBOOK_VERSION} {} {} {} {}",
        cb.geometry.num_elements,
        cb.codewords.len(),
        cb.kind.token(),
        fmt_f64_exact(cb.geometry.spacing_wavelengths),
    )?;
    let mut line = String::new();
    for (theta, codeword) in cb.angles.iter().zip(&cb.codewords) {
        line.clear();
        line.push_str(&fmt_f64_exact(*theta));
        for &z in codeword.entries() {
            line.push(' ');
            line.push_str(&fmt_complex_exact(z));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Parses a codebook written by [`write_codebook`], skipping leading `#`
/// comment lines, and revalidates that every codeword matches its stored
/// beam angle under the codebook kind's sign convention.
pub fn read_codebook(text: &str) -> Result<Codebook> {
    let mut cursor = LineCursor::new(text);
    let (header_no, header) = cursor.expect_line("codebook header")?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    if tokens.first() != Some(&CODEBOOK_MAGIC) {
        return Err(Error::Version(format!(
            "expected a `{CODEBOOK_MAGIC}` file, found `{}`",
            tokens.first().unwrap_or(&"")
        )));
    }
    if tokens.get(1) != Some(&CODEBOOK_VERSION) {
        return Err(Error::Version(format!(
            "unsupported codebook version `{}`",
            tokens.get(1).unwrap_or(&"")
        )));
    }
    if tokens.len() != 6 {
        return Err(Error::parse(
            header_no,
            format!("codebook header needs 6 fields, found {}", tokens.len()),
        ));
    }
    let nt = parse_usize(tokens[2], header_no, "Nt")?;
    let n = parse_usize(tokens[3], header_no, "codebook size")?;
    let kind = CodebookKind::from_token(tokens[4]).ok_or_else(|| {
        Error::Version(format!("unknown codebook kind `{}`", tokens[4]))
    })?;
    let spacing = parse_f64(tokens[5], header_no, "element spacing")?;
    if nt == 0 || n == 0 {
        return Err(Error::parse(
            header_no,
            "Nt and codebook size must be positive".to_string(),
        ));
    }
    let geometry = ArrayGeometry::new(nt, spacing).map_err(|e| match e {
        Error::InvalidArgument(msg) => Error::parse(header_no, msg),
        other => other,
    })?;

    let mut angles = Vec::with_capacity(n);
    let mut codewords = Vec::with_capacity(n);
    for i in 0..n {
        let (line_no, line) = cursor.expect_line(&format!("codeword {} of {}", i + 1, n))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != nt + 1 {
            return Err(Error::parse(
                line_no,
                format!("expected 1 angle and {nt} entries, found {} tokens", tokens.len()),
            ));
        }
        let theta = parse_f64(tokens[0], line_no, "beam angle")?;
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::parse(
                line_no,
                format!("beam angle {theta} outside [0, pi]"),
            ));
        }
        let mut entries = Vec::with_capacity(nt);
        for token in &tokens[1..] {
            entries.push(parse_complex(token, line_no, "codeword entry")?);
        }
        let codeword = ComplexUnitVector::new(entries).map_err(|e| match e {
            Error::InvalidArgument(msg) => Error::parse(line_no, msg),
            other => other,
        })?;

        let signed_cos = match kind {
            CodebookKind::Clustered => theta.cos(),
            CodebookKind::UniformCosine | CodebookKind::UniformAngle => -theta.cos(),
        };
        let rebuilt = steered_codeword(&geometry, signed_cos);
        let worst = codeword
            .entries()
            .iter()
            .zip(rebuilt.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        if worst > 1e-10 {
            return Err(Error::parse(
                line_no,
                format!("codeword does not match its beam angle (entry error {worst:.2e})"),
            ));
        }
        angles.push(theta);
        codewords.push(codeword);
    }
    cursor.expect_end()?;

    Ok(Codebook {
        geometry,
        kind,
        angles,
        codewords,
    })
}

pub fn save_codebook(cb: &Codebook, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_codebook(&mut buf, cb)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn load_codebook(path: &Path) -> Result<Codebook> {
    let text = fs::read_to_string(path)?;
    read_codebook(&text)
}
