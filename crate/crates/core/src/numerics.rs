//! Dense complex linear algebra and deterministic random streams.
//!
//! Everything downstream leans on four pieces kept here:
//!
//! - [`ComplexMatrix`]: a small row-major dense matrix of `Complex64`.
//! - [`ComplexUnitVector`]: a complex vector carrying a unit-norm invariant.
//! - [`RandomStream`]: a `(seed, stream)` pair that materializes a counter-based
//!   generator, so independent substreams can be split off without coordination.
//! - Power iteration for the principal eigenvector of a Hermitian PSD matrix,
//!   which is all the eigen-machinery the rest of the crate needs.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Tolerance on `|norm − 1|` for [`ComplexUnitVector`].
pub const UNIT_NORM_TOL: f64 = 1e-10;

/// Below this magnitude the first entry is not trusted as a phase anchor.
const PHASE_ANCHOR_MIN: f64 = 1e-12;

/// Default residual tolerance for the eigensolver, relative to the eigenvalue.
pub const EIGEN_TOL: f64 = 1e-10;

/// Default iteration cap for the eigensolver.
pub const EIGEN_MAX_ITER: usize = 1000;

// ---------------------------------------------------------------------------
// ComplexMatrix
// ---------------------------------------------------------------------------

/// Dense row-major complex matrix. All entries are finite.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    ///
    /// Errors if the entry count is not `rows × cols` or any entry is not
    /// finite.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("matrix dimensions must be positive"));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Complex64::ONE;
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Row-major entries.
    #[inline]
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub(crate) fn set(&mut self, r: usize, c: usize, z: Complex64) {
        self.entries[r * self.cols + c] = z;
    }

    #[inline]
    pub(crate) fn add_assign_at(&mut self, r: usize, c: usize, z: Complex64) {
        self.entries[r * self.cols + c] += z;
    }

    /// `A v` for a column vector `v` of length `cols`.
    pub fn mul_vector(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(self.mul_vector_unchecked(v))
    }

    #[inline]
    pub(crate) fn mul_vector_unchecked(&self, v: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(v.len(), self.cols);
        let mut out = vec![Complex64::ZERO; self.rows];
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.entries[r * self.cols..(r + 1) * self.cols];
            let mut acc = Complex64::ZERO;
            for (a, x) in row.iter().zip(v) {
                acc += a * x;
            }
            *o = acc;
        }
        out
    }

    /// `A^H A`, built exactly Hermitian (upper triangle computed, mirrored).
    pub fn gram(&self) -> ComplexMatrix {
        let n = self.cols;
        let mut g = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let mut acc = Complex64::ZERO;
                for r in 0..self.rows {
                    acc += self.get(r, i).conj() * self.get(r, j);
                }
                if i == j {
                    acc.im = 0.0;
                }
                g.set(i, j, acc);
                if i != j {
                    g.set(j, i, acc.conj());
                }
            }
        }
        g
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest deviation `|a_ij − conj(a_ji)|` from Hermitian symmetry.
    pub fn hermitian_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols.min(self.rows) {
                let d = (self.get(i, j) - self.get(j, i).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

// ---------------------------------------------------------------------------
// ComplexUnitVector
// ---------------------------------------------------------------------------

/// A complex vector whose Euclidean norm is 1 within [`UNIT_NORM_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexUnitVector {
    entries: Vec<Complex64>,
}

impl ComplexUnitVector {
    /// Wraps entries that are already unit norm.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("unit vector must have at least one entry"));
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::invalid("unit vector entries must be finite"));
        }
        let norm = norm(&entries);
        if (norm - 1.0).abs() > UNIT_NORM_TOL {
            return Err(Error::invalid(format!(
                "vector norm {norm:.12e} is not 1 within {UNIT_NORM_TOL:e}"
            )));
        }
        Ok(Self { entries })
    }

    /// For entries that are unit norm by construction (e.g. equal-modulus
    /// phase ramps). Checked in debug builds only.
    pub(crate) fn new_unchecked(entries: Vec<Complex64>) -> Self {
        debug_assert!((norm(&entries) - 1.0).abs() <= UNIT_NORM_TOL);
        Self { entries }
    }

    /// Scales arbitrary entries to unit norm. Errors on a zero vector.
    pub fn normalized(mut entries: Vec<Complex64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::invalid("unit vector must have at least one entry"));
        }
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::invalid("unit vector entries must be finite"));
        }
        let norm = norm(&entries);
        if norm == 0.0 {
            return Err(Error::invalid("cannot normalize a zero vector"));
        }
        let inv = 1.0 / norm;
        for z in &mut entries {
            *z *= inv;
        }
        Ok(Self { entries })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    #[inline]
    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.entries
    }

    /// `self^H other`. Both vectors must share a dimension.
    #[inline]
    pub fn inner(&self, other: &Self) -> Complex64 {
        debug_assert_eq!(self.dim(), other.dim());
        inner(&self.entries, &other.entries)
    }

    /// Rotates by a global phase so the anchor entry is real and non-negative.
    /// The anchor is the first entry, or the largest-magnitude entry when the
    /// first is below the trust threshold.
    pub fn canonicalized(mut self) -> Self {
        canonicalize_phase(&mut self.entries);
        self
    }
}

#[inline]
pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::ZERO;
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

#[inline]
pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn canonicalize_phase(entries: &mut [Complex64]) {
    let anchor = if entries[0].norm() >= PHASE_ANCHOR_MIN {
        entries[0]
    } else {
        let mut best = entries[0];
        for &z in entries.iter() {
            if z.norm_sqr() > best.norm_sqr() {
                best = z;
            }
        }
        best
    };
    let mag = anchor.norm();
    if mag == 0.0 {
        return;
    }
    let rot = anchor.conj() / mag;
    for z in entries.iter_mut() {
        *z *= rot;
    }
}

// ---------------------------------------------------------------------------
// RandomStream
// ---------------------------------------------------------------------------

/// A reproducible random source identified by `(seed, stream)`.
///
/// The same pair yields the same sequence on every platform. Substreams are
/// split off by hashing an id into the stream word, so workers can draw
/// independently without sharing generator state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RandomStream {
    seed: u64,
    stream: u64,
}

impl RandomStream {
    pub fn new(seed: u64) -> Self {
        Self { seed, stream: 0 }
    }

    pub fn with_stream(seed: u64, stream: u64) -> Self {
        Self { seed, stream }
    }

    #[inline]
    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn stream(&self) -> u64 {
        self.stream
    }

    /// Derives an independent child stream for `id`. Distinct ids map to
    /// distinct streams except for hash collisions (~2^-64).
    pub fn substream(&self, id: u64) -> Self {
        let mixed = mix64(self.stream ^ mix64(id ^ 0x9E37_79B9_7F4A_7C15));
        Self {
            seed: self.seed,
            stream: mixed,
        }
    }

    /// Materializes the generator positioned at the start of this stream.
    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream);
        rng
    }
}

/// SplitMix64 finalizer; bijective on u64.
#[inline]
fn mix64(mut x: u64) -> u64 {
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

// ---------------------------------------------------------------------------
// Complex Gaussian sampling
// ---------------------------------------------------------------------------

/// Draws `n` i.i.d. circularly symmetric complex Gaussians with unit total
/// variance: real and imaginary parts are independent `N(0, 1/2)`.
pub fn sample_complex_gaussian(stream: RandomStream, n: usize) -> Result<Vec<Complex64>> {
    if n == 0 {
        return Err(Error::invalid("sample count must be at least 1"));
    }
    let mut rng = stream.rng();
    Ok(complex_gaussian(&mut rng, n))
}

pub(crate) fn complex_gaussian(rng: &mut ChaCha8Rng, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Power iteration
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub(crate) struct PowerOutcome {
    pub vector: Vec<Complex64>,
    pub eigenvalue: f64,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Last observed residual contraction ratio; estimates |λ₂/λ₁|.
    pub contraction: f64,
}

impl PowerOutcome {
    /// A-posteriori bound on `λ₁ − q(v)` using the measured contraction as a
    /// spectral-gap estimate. Tight when convergence stalled on a small gap.
    pub fn quotient_error_bound(&self) -> f64 {
        let lambda = self.eigenvalue.abs();
        if lambda == 0.0 {
            return self.residual;
        }
        let gap = lambda * (1.0 - self.contraction).clamp(1e-6, 1.0);
        (self.residual * self.residual / gap).min(self.residual)
    }
}

/// Uniform-entry start vector; deterministic and seed-independent.
fn uniform_start(n: usize) -> Vec<Complex64> {
    let x = 1.0 / (n as f64).sqrt();
    vec![Complex64::new(x, 0.0); n]
}

/// Deterministic fallback start with no symmetry to be annihilated by.
fn varied_start(n: usize) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n)
        .map(|k| {
            let t = k as f64;
            Complex64::new(0.9 + (1.7 * t + 0.3).cos(), (2.3 * t + 1.1).sin() * 0.8)
        })
        .collect();
    let inv = 1.0 / norm(&v);
    for z in &mut v {
        *z *= inv;
    }
    v
}

/// Runs power iteration on Hermitian PSD `r` from `start`.
///
/// For PSD matrices the Rayleigh quotient is non-decreasing along the
/// iteration, so the returned quotient is never worse than the start's.
pub(crate) fn power_iteration(
    r: &ComplexMatrix,
    start: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> PowerOutcome {
    let n = r.rows();
    debug_assert_eq!(r.cols(), n);
    debug_assert_eq!(start.len(), n);

    let mut v = start.to_vec();
    let start_norm = norm(&v);
    if start_norm == 0.0 {
        v = uniform_start(n);
    } else {
        let inv = 1.0 / start_norm;
        for z in &mut v {
            *z *= inv;
        }
    }

    let mut prev_residual = f64::INFINITY;
    let mut contraction = 1.0_f64;
    let mut restarted = false;
    let mut eigenvalue = 0.0;
    let mut residual = f64::INFINITY;

    for it in 1..=max_iter {
        let w = r.mul_vector_unchecked(&v);
        // Hermitian quotient is real; the imaginary part is rounding noise.
        eigenvalue = inner(&v, &w).re;
        residual = 0.0;
        for (wi, vi) in w.iter().zip(&v) {
            residual += (wi - eigenvalue * vi).norm_sqr();
        }
        residual = residual.sqrt();

        let scale = eigenvalue.abs().max(f64::MIN_POSITIVE);
        if residual <= tol * scale {
            canonicalize_phase(&mut v);
            return PowerOutcome {
                vector: v,
                eigenvalue,
                residual,
                iterations: it,
                converged: true,
                contraction,
            };
        }

        if prev_residual.is_finite() && prev_residual > 0.0 {
            contraction = (residual / prev_residual).clamp(0.0, 1.0);
        }
        prev_residual = residual;

        let w_norm = norm(&w);
        if w_norm < 1e-300 {
            // The iterate fell into the (numerical) null space.
            if restarted {
                break;
            }
            v = varied_start(n);
            restarted = true;
            prev_residual = f64::INFINITY;
            continue;
        }
        let inv = 1.0 / w_norm;
        v = w;
        for z in &mut v {
            *z *= inv;
        }
    }

    canonicalize_phase(&mut v);
    PowerOutcome {
        vector: v,
        eigenvalue,
        residual,
        iterations: max_iter,
        converged: false,
        contraction,
    }
}

fn validate_hermitian(r: &ComplexMatrix) -> Result<()> {
    if r.rows() != r.cols() {
        return Err(Error::invalid(format!(
            "matrix must be square, got {}x{}",
            r.rows(),
            r.cols()
        )));
    }
    let scale = r
        .entries()
        .iter()
        .map(|z| z.norm())
        .fold(1.0_f64, f64::max);
    if r.hermitian_residual() > 1e-10 * scale {
        return Err(Error::invalid("matrix is not Hermitian within 1e-10"));
    }
    Ok(())
}

/// Principal eigenpair of a Hermitian PSD matrix by power iteration.
///
/// The start vector is deterministic (uniform entries), so the result does
/// not depend on any seed. After convergence a fixed probe vector guards
/// against the start being orthogonal to the dominant eigenspace; if the
/// probe sees a larger quotient the iteration is rerun from it.
///
/// Returns the eigenvector in canonical phase together with its eigenvalue.
/// Postcondition on success: `‖Rv − λv‖ ≤ tol·λ`.
pub fn hermitian_principal_eigenvector(
    r: &ComplexMatrix,
    tol: f64,
    max_iter: usize,
) -> Result<(ComplexUnitVector, f64)> {
    validate_hermitian(r)?;
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(Error::invalid("tolerance must be positive and finite"));
    }
    if max_iter == 0 {
        return Err(Error::invalid("max_iter must be at least 1"));
    }

    let n = r.rows();
    let mut out = power_iteration(r, &uniform_start(n), tol, max_iter);
    if out.converged && n > 1 {
        let probe = varied_start(n);
        let pw = r.mul_vector_unchecked(&probe);
        let probe_quotient = inner(&probe, &pw).re;
        if probe_quotient > out.eigenvalue * (1.0 + 10.0 * tol) + f64::MIN_POSITIVE {
            out = power_iteration(r, &probe, tol, max_iter);
        }
    }

    if out.converged {
        let vector = ComplexUnitVector::new(out.vector)?;
        Ok((vector, out.eigenvalue))
    } else {
        Err(Error::Convergence {
            iterations: out.iterations,
            residual: out.residual,
            tolerance: tol,
            eigenvalue: out.eigenvalue,
            last_iterate: out.vector,
        })
    }
}

/// Unit vector `v` maximizing `‖Hv‖` (the dominant right singular vector),
/// computed as the principal eigenvector of `H^H H`. Scaling `H` by any
/// nonzero complex scalar leaves the result unchanged.
///
/// When the top of the spectrum is nearly degenerate the residual test can
/// stall even though the quotient is already accurate; such iterates are
/// accepted if an a-posteriori bound puts the quotient within `1e-9·λ` of
/// optimal, which keeps `‖Hv‖` within `1e-8` relative of the maximum.
pub fn dominant_right_singular_vector(h: &ComplexMatrix) -> Result<ComplexUnitVector> {
    if h.frobenius_norm_sq() == 0.0 {
        return Err(Error::invalid(
            "all-zero matrix has no dominant singular vector",
        ));
    }
    let g = h.gram();
    let out = power_iteration(&g, &uniform_start(g.rows()), EIGEN_TOL, EIGEN_MAX_ITER);
    if out.converged || out.quotient_error_bound() <= 1e-9 * out.eigenvalue.abs() {
        ComplexUnitVector::new(out.vector)
    } else {
        Err(Error::Convergence {
            iterations: out.iterations,
            residual: out.residual,
            tolerance: EIGEN_TOL,
            eigenvalue: out.eigenvalue,
            last_iterate: out.vector,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matrix_entry_count_must_match_dims() {
        let err = ComplexMatrix::new(2, 2, vec![Complex64::ONE; 3]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { expected: 4, got: 3 }));
    }

    #[test]
    fn matrix_rejects_non_finite_entries() {
        let err = ComplexMatrix::new(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn unit_vector_rejects_wrong_norm() {
        let err = ComplexUnitVector::new(vec![c(0.9, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn normalized_rejects_zero_vector() {
        let err = ComplexUnitVector::normalized(vec![Complex64::ZERO; 3]).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn normalized_produces_unit_norm() {
        let v = ComplexUnitVector::normalized(vec![c(3.0, 0.0), c(0.0, 4.0)]).unwrap();
        let n = norm(v.entries());
        assert!((n - 1.0).abs() <= UNIT_NORM_TOL, "norm {n} should be 1");
    }

    #[test]
    fn canonical_phase_makes_anchor_real_nonnegative() {
        let v = ComplexUnitVector::normalized(vec![c(0.0, -1.0), c(1.0, 1.0)])
            .unwrap()
            .canonicalized();
        let first = v.entries()[0];
        assert!(first.im.abs() <= 1e-12, "anchor imag {:.3e}", first.im);
        assert!(first.re >= 0.0, "anchor real {:.3e}", first.re);
    }

    #[test]
    fn canonical_phase_falls_back_to_largest_entry() {
        // First entry is far below the anchor threshold.
        let raw = vec![c(1e-18, 1e-18), c(0.0, 1.0)];
        let v = ComplexUnitVector::normalized(raw).unwrap().canonicalized();
        let second = v.entries()[1];
        assert!(second.im.abs() <= 1e-12);
        assert!(second.re > 0.99);
    }

    #[test]
    fn random_stream_is_reproducible() {
        let a: Vec<u64> = {
            let mut rng = RandomStream::with_stream(7, 3).rng();
            (0..8).map(|_| rng.random::<u64>()).collect()
        };
        let b: Vec<u64> = {
            let mut rng = RandomStream::with_stream(7, 3).rng();
            (0..8).map(|_| rng.random::<u64>()).collect()
        };
        assert_eq!(a, b, "same (seed, stream) must replay the same sequence");
    }

    #[test]
    fn substreams_differ_from_parent_and_each_other() {
        let base = RandomStream::new(42);
        let s0 = base.substream(0);
        let s1 = base.substream(1);
        assert_ne!(s0.stream(), s1.stream());
        assert_ne!(s0.stream(), base.stream());
        let x0 = s0.rng().random::<u64>();
        let x1 = s1.rng().random::<u64>();
        assert_ne!(x0, x1);
    }

    #[test]
    fn gaussian_requires_positive_count() {
        let err = sample_complex_gaussian(RandomStream::new(1), 0).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn gaussian_same_stream_replays() {
        let a = sample_complex_gaussian(RandomStream::with_stream(5, 9), 16).unwrap();
        let b = sample_complex_gaussian(RandomStream::with_stream(5, 9), 16).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn eigen_identity_matrix() {
        let r = ComplexMatrix::identity(2);
        let (v, lambda) = hermitian_principal_eigenvector(&r, 1e-10, 100).unwrap();
        assert!((lambda - 1.0).abs() <= 1e-10, "eigenvalue {lambda}");
        assert!(v.entries()[0].im.abs() <= 1e-12);
        assert!(v.entries()[0].re >= 0.0);
    }

    #[test]
    fn eigen_diagonal_picks_dominant_axis() {
        let r = ComplexMatrix::new(
            2,
            2,
            vec![c(3.0, 0.0), Complex64::ZERO, Complex64::ZERO, c(1.0, 0.0)],
        )
        .unwrap();
        let (v, lambda) = hermitian_principal_eigenvector(&r, 1e-10, 1000).unwrap();
        assert!((lambda - 3.0).abs() <= 1e-8, "eigenvalue {lambda}");
        assert!((v.entries()[0].norm() - 1.0).abs() <= 1e-6);
        assert!(v.entries()[1].norm() <= 1e-6);
    }

    #[test]
    fn eigen_rank_one_recovers_generator() {
        // R = h h^H has principal eigenpair (h, 1).
        let h = ComplexUnitVector::normalized(vec![c(1.0, 0.5), c(-0.3, 0.8), c(0.2, -0.1)])
            .unwrap();
        let n = h.dim();
        let mut r = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                r.set(i, j, h.entries()[i] * h.entries()[j].conj());
            }
        }
        let (v, lambda) = hermitian_principal_eigenvector(&r, 1e-10, 1000).unwrap();
        assert!((lambda - 1.0).abs() <= 1e-9, "eigenvalue {lambda}");
        let align = v.inner(&h).norm();
        assert!(
            (1.0 - align * align) <= 1e-9,
            "chordal distance {} to generator",
            1.0 - align * align
        );
    }

    #[test]
    fn eigen_rejects_non_square() {
        let r = ComplexMatrix::zeros(2, 3);
        let err = hermitian_principal_eigenvector(&r, 1e-10, 10).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn eigen_rejects_non_hermitian() {
        let r = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 0.0), c(1.0, 0.0), Complex64::ZERO, c(1.0, 0.0)],
        )
        .unwrap();
        let err = hermitian_principal_eigenvector(&r, 1e-10, 10).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn eigen_convergence_failure_carries_last_iterate() {
        // Two equal off-dominant eigenvalues with a gap too small to resolve
        // in the allowed iterations at this tolerance.
        let r = ComplexMatrix::new(
            2,
            2,
            vec![
                c(1.0, 0.0),
                c(1e-14, 0.0),
                c(1e-14, 0.0),
                c(1.0 - 1e-13, 0.0),
            ],
        )
        .unwrap();
        match hermitian_principal_eigenvector(&r, 1e-16, 5) {
            Err(Error::Convergence { last_iterate, .. }) => {
                assert_eq!(last_iterate.len(), 2);
            }
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn eigen_survives_start_orthogonal_to_dominant() {
        // Dominant eigenvector (1,-1)/√2 is orthogonal to the uniform start;
        // the probe guard must still find it.
        let r = ComplexMatrix::new(
            2,
            2,
            vec![c(1.1, 0.0), c(-0.9, 0.0), c(-0.9, 0.0), c(1.1, 0.0)],
        )
        .unwrap();
        let (v, lambda) = hermitian_principal_eigenvector(&r, 1e-10, 1000).unwrap();
        assert!((lambda - 2.0).abs() <= 1e-8, "eigenvalue {lambda}, want 2");
        let diff = (v.entries()[0].norm() - v.entries()[1].norm()).abs();
        assert!(diff <= 1e-6, "expected symmetric magnitudes, diff {diff}");
    }

    #[test]
    fn dominant_vector_of_single_row_matrix() {
        // H = [1 0] → ‖Hv‖ is maximized by e₀.
        let h = ComplexMatrix::new(1, 2, vec![Complex64::ONE, Complex64::ZERO]).unwrap();
        let v = dominant_right_singular_vector(&h).unwrap();
        assert!((v.entries()[0].norm() - 1.0).abs() <= 1e-9);
        assert!(v.entries()[1].norm() <= 1e-9);
    }

    #[test]
    fn dominant_vector_rejects_zero_matrix() {
        let h = ComplexMatrix::zeros(2, 2);
        let err = dominant_right_singular_vector(&h).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)));
    }

    #[test]
    fn dominant_vector_matches_random_search() {
        // Oracle: 10^5 random unit candidates never beat the returned vector
        // by more than 1e-4 relative in ‖Hv‖².
        let mut rng = RandomStream::with_stream(11, 0).rng();
        let entries = complex_gaussian(&mut rng, 8);
        let h = ComplexMatrix::new(2, 4, entries).unwrap();
        let v = dominant_right_singular_vector(&h).unwrap();
        let gain = |x: &[Complex64]| -> f64 {
            h.mul_vector_unchecked(x)
                .iter()
                .map(|z| z.norm_sqr())
                .sum()
        };
        let best = gain(v.entries());
        let mut search_best = 0.0_f64;
        for _ in 0..100_000 {
            let cand = complex_gaussian(&mut rng, 4);
            let n = norm(&cand);
            if n == 0.0 {
                continue;
            }
            let cand: Vec<Complex64> = cand.iter().map(|z| z / n).collect();
            search_best = search_best.max(gain(&cand));
        }
        assert!(
            best >= search_best * (1.0 - 1e-4),
            "power iteration {best:.9} vs random search {search_best:.9}"
        );
    }

    #[test]
    fn dominant_vector_scale_invariant() {
        let mut rng = RandomStream::with_stream(13, 1).rng();
        let entries = complex_gaussian(&mut rng, 12);
        let h = ComplexMatrix::new(3, 4, entries.clone()).unwrap();
        let alpha = c(-2.5, 1.75);
        let scaled =
            ComplexMatrix::new(3, 4, entries.iter().map(|z| z * alpha).collect()).unwrap();
        let v1 = dominant_right_singular_vector(&h).unwrap();
        let v2 = dominant_right_singular_vector(&scaled).unwrap();
        let align = v1.inner(&v2).norm();
        assert!(
            (1.0 - align * align) <= 1e-9,
            "scaling changed the direction: chordal {}",
            1.0 - align * align
        );
    }
}
