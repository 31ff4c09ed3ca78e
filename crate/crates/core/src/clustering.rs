//! K-means on the complex unit sphere under the chordal metric.
//!
//! Samples and centroids are unit vectors compared through
//! `d²(h, t) = 1 − |t^H h|²`, which ignores global phase. The centroid of a
//! cluster is the principal eigenvector of its correlation matrix
//! `R = Σ h h^H`: the unit vector maximizing `Σ |t^H h|²`. Lloyd iteration
//! alternates nearest-centroid assignment with that eigenvector update;
//! centroid updates are warm-started from the previous centroid, which makes
//! the recorded objective non-increasing even when the eigensolver stops
//! early.
//!
//! [`brute_force_partition`] enumerates every partition of a tiny sample set
//! and serves as a global-optimum reference for tests.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{
    power_iteration, ComplexMatrix, ComplexUnitVector, RandomStream, EIGEN_MAX_ITER, EIGEN_TOL,
};

/// Iteration cap for a single warm-started centroid refinement inside Lloyd
/// steps; monotonicity holds even if the cap is hit.
const UPDATE_MAX_ITER: usize = 500;

/// Instances above this size are refused by [`brute_force_partition`].
pub const BRUTE_FORCE_MAX_SAMPLES: usize = 12;

// ---------------------------------------------------------------------------
// Distances
// ---------------------------------------------------------------------------

/// Squared chordal distance `1 − |t^H h|²`, in `[0, 1]`, invariant to a
/// global phase on either argument.
pub fn chordal_distance_sq(h: &ComplexUnitVector, t: &ComplexUnitVector) -> Result<f64> {
    if h.dim() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: h.dim(),
            got: t.dim(),
        });
    }
    Ok(chordal_sq_unchecked(h, t))
}

#[inline]
fn chordal_sq_unchecked(h: &ComplexUnitVector, t: &ComplexUnitVector) -> f64 {
    let overlap = t.inner(h).norm_sqr();
    (1.0 - overlap).clamp(0.0, 1.0)
}

// ---------------------------------------------------------------------------
// Assignment and centroid update
// ---------------------------------------------------------------------------

fn validate_family(samples: &[ComplexUnitVector], what: &str) -> Result<usize> {
    let first = samples
        .first()
        .ok_or_else(|| Error::invalid(format!("{what} must not be empty")))?;
    let dim = first.dim();
    for s in samples {
        if s.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: s.dim(),
            });
        }
    }
    Ok(dim)
}

/// Maps every sample to its nearest centroid; ties break to the lowest
/// centroid index.
pub fn assign(
    samples: &[ComplexUnitVector],
    centroids: &[ComplexUnitVector],
) -> Result<Vec<usize>> {
    let sdim = validate_family(samples, "samples")?;
    let cdim = validate_family(centroids, "centroids")?;
    if sdim != cdim {
        return Err(Error::DimensionMismatch {
            expected: sdim,
            got: cdim,
        });
    }
    Ok(assign_unchecked(samples, centroids))
}

fn assign_unchecked(samples: &[ComplexUnitVector], centroids: &[ComplexUnitVector]) -> Vec<usize> {
    samples
        .iter()
        .map(|s| {
            let mut best = 0usize;
            let mut best_d = chordal_sq_unchecked(s, &centroids[0]);
            for (i, c) in centroids.iter().enumerate().skip(1) {
                let d = chordal_sq_unchecked(s, c);
                if d < best_d {
                    best = i;
                    best_d = d;
                }
            }
            best
        })
        .collect()
}

/// `Σ h h^H` over the members, assembled exactly Hermitian.
fn correlation_matrix<'a>(
    dim: usize,
    members: impl Iterator<Item = &'a ComplexUnitVector> + Clone,
) -> ComplexMatrix {
    let mut r = ComplexMatrix::zeros(dim, dim);
    for i in 0..dim {
        for j in i..dim {
            let mut acc = Complex64::ZERO;
            for h in members.clone() {
                acc += h.entries()[i] * h.entries()[j].conj();
            }
            if i == j {
                acc.im = 0.0;
            }
            r.set(i, j, acc);
            if i != j {
                r.set(j, i, acc.conj());
            }
        }
    }
    r
}

/// Optimal centroid of a non-empty cluster: the unit vector maximizing
/// `Σ |t^H h|²`, i.e. the principal eigenvector of the cluster correlation
/// matrix, returned in canonical phase.
pub fn update_centroid(cluster: &[ComplexUnitVector]) -> Result<ComplexUnitVector> {
    if cluster.is_empty() {
        return Err(Error::EmptyCluster);
    }
    let dim = validate_family(cluster, "cluster")?;
    let r = correlation_matrix(dim, cluster.iter());
    let start: Vec<Complex64> = uniform_entries(dim);
    let out = power_iteration(&r, &start, EIGEN_TOL, EIGEN_MAX_ITER);
    if !out.converged && out.quotient_error_bound() > 1e-8 * out.eigenvalue.abs() {
        return Err(Error::Convergence {
            iterations: out.iterations,
            residual: out.residual,
            tolerance: EIGEN_TOL,
            eigenvalue: out.eigenvalue,
            last_iterate: out.vector,
        });
    }
    ComplexUnitVector::new(out.vector)
}

fn uniform_entries(dim: usize) -> Vec<Complex64> {
    let x = 1.0 / (dim as f64).sqrt();
    vec![Complex64::new(x, 0.0); dim]
}

/// Warm-started refinement used inside Lloyd iterations. Starting from the
/// previous centroid keeps the Rayleigh quotient — and so the cluster
/// objective — from regressing, converged or not.
fn update_centroid_warm(
    dim: usize,
    samples: &[ComplexUnitVector],
    member_idx: &[usize],
    start: &ComplexUnitVector,
) -> Result<ComplexUnitVector> {
    debug_assert!(!member_idx.is_empty());
    let r = correlation_matrix(dim, member_idx.iter().map(|&k| &samples[k]));
    let out = power_iteration(&r, start.entries(), EIGEN_TOL, UPDATE_MAX_ITER);
    ComplexUnitVector::new(out.vector)
}

/// Total squared chordal distance from each sample to its nearest centroid.
pub fn sum_distance(
    samples: &[ComplexUnitVector],
    centroids: &[ComplexUnitVector],
) -> Result<f64> {
    let sdim = validate_family(samples, "samples")?;
    let cdim = validate_family(centroids, "centroids")?;
    if sdim != cdim {
        return Err(Error::DimensionMismatch {
            expected: sdim,
            got: cdim,
        });
    }
    Ok(samples
        .iter()
        .map(|s| {
            centroids
                .iter()
                .map(|c| chordal_sq_unchecked(s, c))
                .fold(f64::INFINITY, f64::min)
        })
        .sum())
}

// ---------------------------------------------------------------------------
// K-means
// ---------------------------------------------------------------------------

/// Number of anchor samples the farthest-first policy restarts from.
pub const FARTHEST_FIRST_ANCHORS: usize = 16;

/// Centroid seeding policy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum InitPolicy {
    /// N distinct sample indices drawn from the settings' random stream.
    RandomDistinct,
    /// Deterministic restarts: a greedy max-min traversal seeded at each of
    /// the first [`FARTHEST_FIRST_ANCHORS`] samples in turn, keeping the fit
    /// with the lowest final objective. The anchor sweep makes small
    /// instances land on (or very near) the global optimum reproducibly; the
    /// cost is up to that many full fits, so prefer `RandomDistinct` for
    /// large training runs.
    FarthestFirst,
}

#[derive(Clone, Copy, Debug)]
pub struct KMeansSettings {
    pub num_clusters: usize,
    pub max_iterations: usize,
    /// Stop once an iteration moves the objective by less than this.
    pub objective_tolerance: f64,
    pub init: InitPolicy,
    pub stream: RandomStream,
}

impl KMeansSettings {
    pub fn new(num_clusters: usize, stream: RandomStream) -> Self {
        Self {
            num_clusters,
            max_iterations: 200,
            objective_tolerance: 1e-9,
            init: InitPolicy::RandomDistinct,
            stream,
        }
    }
}

/// A fitted clustering.
#[derive(Clone, Debug)]
pub struct ClusterModel {
    /// Unit-norm centroids in canonical phase, `num_clusters` of them.
    pub centroids: Vec<ComplexUnitVector>,
    /// Nearest-centroid index per sample, consistent with `centroids`.
    pub assignments: Vec<usize>,
    /// Objective after seeding and after every Lloyd step and repair step;
    /// non-increasing within rounding.
    pub objective_history: Vec<f64>,
    /// Number of Lloyd iterations executed.
    pub iterations: usize,
    /// False when `max_iterations` ran out first.
    pub converged: bool,
}

impl ClusterModel {
    /// Final value of the clustering objective.
    pub fn objective(&self) -> f64 {
        *self
            .objective_history
            .last()
            .expect("history is never empty")
    }
}

fn objective_of(
    samples: &[ComplexUnitVector],
    centroids: &[ComplexUnitVector],
    assignments: &[usize],
) -> f64 {
    samples
        .iter()
        .zip(assignments)
        .map(|(s, &a)| chordal_sq_unchecked(s, &centroids[a]))
        .sum()
}

fn random_distinct_seeds(
    samples: &[ComplexUnitVector],
    n: usize,
    stream: RandomStream,
) -> Vec<ComplexUnitVector> {
    let mut rng = stream.rng();
    let picks = rand::seq::index::sample(&mut rng, samples.len(), n);
    picks.iter().map(|i| samples[i].clone()).collect()
}

/// Greedy max-min traversal: after the anchor, each seed is the sample
/// farthest from all seeds chosen so far (ties to the lowest index).
fn farthest_first_seeds(
    samples: &[ComplexUnitVector],
    n: usize,
    anchor: usize,
) -> Vec<ComplexUnitVector> {
    let mut chosen = vec![anchor];
    let mut dist: Vec<f64> = samples
        .iter()
        .map(|s| chordal_sq_unchecked(s, &samples[anchor]))
        .collect();
    while chosen.len() < n {
        let mut best = 0usize;
        let mut best_d = -1.0;
        for (k, &d) in dist.iter().enumerate() {
            if d > best_d {
                best = k;
                best_d = d;
            }
        }
        chosen.push(best);
        for (k, d) in dist.iter_mut().enumerate() {
            *d = d.min(chordal_sq_unchecked(&samples[k], &samples[best]));
        }
    }
    chosen.iter().map(|&i| samples[i].clone()).collect()
}

/// Replaces centroids of empty clusters with the sample currently farthest
/// from its own centroid, reassigning after each seizure. Each repair appends
/// its own objective entry. Bounded by the cluster count; a cluster that
/// still ends up empty (possible only with duplicate samples) is left alone
/// and skipped by updates.
fn repair_empty_clusters(
    samples: &[ComplexUnitVector],
    centroids: &mut [ComplexUnitVector],
    assignments: &mut Vec<usize>,
    history: &mut Vec<f64>,
) {
    let n = centroids.len();
    for _ in 0..n {
        let mut counts = vec![0usize; n];
        for &a in assignments.iter() {
            counts[a] += 1;
        }
        let Some(empty) = counts.iter().position(|&c| c == 0) else {
            return;
        };
        let mut far_k = 0usize;
        let mut far_d = -1.0;
        for (k, (s, &a)) in samples.iter().zip(assignments.iter()).enumerate() {
            let d = chordal_sq_unchecked(s, &centroids[a]);
            if d > far_d {
                far_k = k;
                far_d = d;
            }
        }
        centroids[empty] = samples[far_k].clone();
        *assignments = assign_unchecked(samples, centroids);
        history.push(objective_of(samples, centroids, assignments));
    }
}

/// Fits `settings.num_clusters` centroids to the samples by Lloyd iteration.
///
/// Each run stops when an iteration leaves the assignments unchanged, when
/// the objective moves by less than `objective_tolerance`, or at
/// `max_iterations` (then `converged` is false). Under
/// [`InitPolicy::FarthestFirst`] several anchored runs race and the best one
/// is returned. The entire fit is a pure function of the samples and
/// settings.
pub fn kmeans_fit(
    samples: &[ComplexUnitVector],
    settings: &KMeansSettings,
) -> Result<ClusterModel> {
    let dim = validate_family(samples, "samples")?;
    let n = settings.num_clusters;
    if n == 0 {
        return Err(Error::invalid("cluster count must be at least 1"));
    }
    if samples.len() < n {
        return Err(Error::invalid(format!(
            "need at least {n} samples to fit {n} clusters, got {}",
            samples.len()
        )));
    }
    if !(settings.objective_tolerance >= 0.0 && settings.objective_tolerance.is_finite()) {
        return Err(Error::invalid("objective tolerance must be non-negative"));
    }
    if settings.max_iterations == 0 {
        return Err(Error::invalid("max_iterations must be at least 1"));
    }

    match settings.init {
        InitPolicy::RandomDistinct => {
            let seeds = random_distinct_seeds(samples, n, settings.stream);
            fit_from(dim, samples, seeds, settings)
        }
        InitPolicy::FarthestFirst => {
            let mut best: Option<ClusterModel> = None;
            for anchor in 0..samples.len().min(FARTHEST_FIRST_ANCHORS) {
                let seeds = farthest_first_seeds(samples, n, anchor);
                let model = fit_from(dim, samples, seeds, settings)?;
                if best
                    .as_ref()
                    .is_none_or(|b| model.objective() < b.objective())
                {
                    best = Some(model);
                }
            }
            Ok(best.expect("at least one anchor runs"))
        }
    }
}

fn fit_from(
    dim: usize,
    samples: &[ComplexUnitVector],
    seeds: Vec<ComplexUnitVector>,
    settings: &KMeansSettings,
) -> Result<ClusterModel> {
    let n = settings.num_clusters;
    let mut centroids = seeds;
    let mut assignments = assign_unchecked(samples, &centroids);
    let mut history = Vec::new();
    repair_empty_clusters(samples, &mut centroids, &mut assignments, &mut history);
    history.push(objective_of(samples, &centroids, &assignments));

    let mut members: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut iterations = 0usize;
    let mut converged = false;
    let mut prev_objective = *history.last().unwrap();

    while iterations < settings.max_iterations {
        iterations += 1;

        for m in &mut members {
            m.clear();
        }
        for (k, &a) in assignments.iter().enumerate() {
            members[a].push(k);
        }
        for i in 0..n {
            if !members[i].is_empty() {
                centroids[i] = update_centroid_warm(dim, samples, &members[i], &centroids[i])?;
            }
        }

        let mut new_assignments = assign_unchecked(samples, &centroids);
        repair_empty_clusters(samples, &mut centroids, &mut new_assignments, &mut history);
        let objective = objective_of(samples, &centroids, &new_assignments);
        history.push(objective);

        let stable = new_assignments == assignments;
        assignments = new_assignments;
        if stable || (prev_objective - objective).abs() < settings.objective_tolerance {
            converged = true;
            break;
        }
        prev_objective = objective;
    }

    Ok(ClusterModel {
        centroids,
        assignments,
        objective_history: history,
        iterations,
        converged,
    })
}

// ---------------------------------------------------------------------------
// Exhaustive reference
// ---------------------------------------------------------------------------

/// Finds the global minimum of the clustering objective over all partitions
/// of `samples` into at most `n` non-empty groups, each scored with its
/// optimal centroid. Returns `(objective, group label per sample)`.
///
/// Only instances up to [`BRUTE_FORCE_MAX_SAMPLES`] samples are accepted:
/// the partition count grows as the Bell numbers.
pub fn brute_force_partition(
    samples: &[ComplexUnitVector],
    n: usize,
) -> Result<(f64, Vec<usize>)> {
    let dim = validate_family(samples, "samples")?;
    let l = samples.len();
    if l > BRUTE_FORCE_MAX_SAMPLES {
        return Err(Error::SizeLimit {
            limit: BRUTE_FORCE_MAX_SAMPLES,
            got: l,
        });
    }
    if n == 0 {
        return Err(Error::invalid("group count must be at least 1"));
    }

    // Restricted growth strings enumerate set partitions exactly once.
    let mut labels = vec![0usize; l];
    let mut best_obj = f64::INFINITY;
    let mut best_labels = labels.clone();
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)]; // (position, next label to try)
    let mut max_used = vec![0usize; l + 1]; // labels used before position k

    while let Some((k, label)) = stack.pop() {
        if k == l {
            let obj = partition_objective(dim, samples, &labels, max_used[l])?;
            if obj < best_obj {
                best_obj = obj;
                best_labels = labels.clone();
            }
            continue;
        }
        let limit = (max_used[k] + 1).min(n);
        if label >= limit {
            continue;
        }
        stack.push((k, label + 1));
        labels[k] = label;
        max_used[k + 1] = max_used[k].max(label + 1);
        stack.push((k + 1, 0));
    }

    Ok((best_obj, best_labels))
}

fn partition_objective(
    dim: usize,
    samples: &[ComplexUnitVector],
    labels: &[usize],
    groups: usize,
) -> Result<f64> {
    let mut total = 0.0;
    for g in 0..groups {
        let member_idx: Vec<usize> = labels
            .iter()
            .enumerate()
            .filter_map(|(k, &lab)| (lab == g).then_some(k))
            .collect();
        debug_assert!(!member_idx.is_empty());
        let r = correlation_matrix(dim, member_idx.iter().map(|&k| &samples[k]));
        let out = power_iteration(&r, &uniform_entries(dim), 1e-13, 4000);
        let centroid = ComplexUnitVector::new(out.vector)?;
        for &k in &member_idx {
            total += chordal_sq_unchecked(&samples[k], &centroid);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::complex_gaussian;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn unit(entries: Vec<Complex64>) -> ComplexUnitVector {
        ComplexUnitVector::normalized(entries).unwrap()
    }

    fn e(dim: usize, k: usize) -> ComplexUnitVector {
        let mut v = vec![Complex64::ZERO; dim];
        v[k] = Complex64::ONE;
        ComplexUnitVector::new(v).unwrap()
    }

    fn random_units(seed: u64, dim: usize, count: usize) -> Vec<ComplexUnitVector> {
        let mut rng = RandomStream::with_stream(seed, 500).rng();
        (0..count)
            .map(|_| unit(complex_gaussian(&mut rng, dim)))
            .collect()
    }

    #[test]
    fn chordal_distance_of_vector_to_itself_is_zero() {
        let v = unit(vec![c(1.0, 2.0), c(-0.5, 0.3)]);
        assert_eq!(chordal_distance_sq(&v, &v).unwrap(), 0.0);
    }

    #[test]
    fn chordal_distance_of_orthogonal_vectors_is_one() {
        assert_eq!(chordal_distance_sq(&e(2, 0), &e(2, 1)).unwrap(), 1.0);
    }

    #[test]
    fn chordal_distance_ignores_global_phase() {
        let v = unit(vec![c(0.4, -0.9), c(1.1, 0.2), c(-0.3, 0.7)]);
        let rot = Complex64::from_polar(1.0, 1.234);
        let w =
            ComplexUnitVector::new(v.entries().iter().map(|z| z * rot).collect()).unwrap();
        let t = unit(vec![c(0.1, 0.0), c(0.5, -0.5), c(0.2, 0.9)]);
        let d1 = chordal_distance_sq(&v, &t).unwrap();
        let d2 = chordal_distance_sq(&w, &t).unwrap();
        assert!((d1 - d2).abs() <= 1e-12, "phase changed distance: {d1} vs {d2}");
    }

    #[test]
    fn chordal_distance_checks_dimensions() {
        let err = chordal_distance_sq(&e(2, 0), &e(3, 0)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn assign_samples_equal_to_centroids_is_identity() {
        let pts = random_units(1, 3, 5);
        let got = assign(&pts, &pts).unwrap();
        assert_eq!(got, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn assign_single_centroid_maps_everything_to_zero() {
        let pts = random_units(2, 2, 6);
        let got = assign(&pts, &pts[..1]).unwrap();
        assert!(got.iter().all(|&a| a == 0));
    }

    #[test]
    fn assign_matches_per_sample_argmin_scan() {
        // Independent oracle: recompute the argmin directly per sample.
        let samples = random_units(3, 4, 100);
        let centroids = random_units(4, 4, 7);
        let got = assign(&samples, &centroids).unwrap();
        for (s, &a) in samples.iter().zip(&got) {
            let dists: Vec<f64> = centroids
                .iter()
                .map(|t| 1.0 - t.inner(s).norm_sqr())
                .collect();
            let mut want = 0;
            for (i, &d) in dists.iter().enumerate() {
                if d < dists[want] {
                    want = i;
                }
            }
            assert_eq!(a, want);
        }
    }

    #[test]
    fn update_centroid_of_single_sample_is_that_sample() {
        let v = unit(vec![c(0.3, 0.4), c(-0.8, 0.1), c(0.2, 0.2)]);
        let t = update_centroid(std::slice::from_ref(&v)).unwrap();
        let d = chordal_distance_sq(&v, &t).unwrap();
        assert!(d <= 1e-10, "distance {d}");
        assert!(t.entries()[0].im.abs() <= 1e-12, "not canonical phase");
    }

    #[test]
    fn update_centroid_of_identical_samples_is_that_direction() {
        let v = unit(vec![c(0.3, 0.4), c(-0.8, 0.1)]);
        let rot = Complex64::from_polar(1.0, -2.1);
        let w = ComplexUnitVector::new(v.entries().iter().map(|z| z * rot).collect()).unwrap();
        let t = update_centroid(&[v.clone(), w]).unwrap();
        let d = chordal_distance_sq(&v, &t).unwrap();
        assert!(d <= 1e-10, "distance {d}");
    }

    #[test]
    fn update_centroid_rejects_empty_cluster() {
        let err = update_centroid(&[]).unwrap_err();
        assert!(matches!(err, Error::EmptyCluster));
    }

    #[test]
    fn update_centroid_beats_every_member_as_candidate() {
        // The optimal centroid scores at least as high as any member does.
        for seed in 0..20 {
            let cluster = random_units(100 + seed, 4, 6);
            let t = update_centroid(&cluster).unwrap();
            let score = |cand: &ComplexUnitVector| -> f64 {
                cluster.iter().map(|h| cand.inner(h).norm_sqr()).sum()
            };
            let best_member = cluster.iter().map(&score).fold(0.0, f64::max);
            let got = score(&t);
            assert!(
                got >= best_member - 1e-9,
                "seed {seed}: centroid score {got} < best member {best_member}"
            );
        }
    }

    #[test]
    fn kmeans_with_one_cluster_per_sample_reaches_zero() {
        let samples = vec![e(4, 0), e(4, 1), e(4, 2), e(4, 3)];
        let settings = KMeansSettings::new(4, RandomStream::new(8));
        let model = kmeans_fit(&samples, &settings).unwrap();
        assert!(model.converged);
        assert!(model.objective() <= 1e-12, "objective {}", model.objective());
    }

    #[test]
    fn kmeans_on_coincident_directions_reaches_zero() {
        // All samples share one direction up to phase; any cluster count fits
        // them perfectly even though repairs cannot fill the spare clusters.
        let base = unit(vec![c(0.6, -0.2), c(0.1, 0.9), c(-0.4, 0.3)]);
        let samples: Vec<ComplexUnitVector> = (0..10)
            .map(|k| {
                let rot = Complex64::from_polar(1.0, 0.41 * k as f64);
                ComplexUnitVector::new(base.entries().iter().map(|z| z * rot).collect()).unwrap()
            })
            .collect();
        let settings = KMeansSettings::new(3, RandomStream::new(5));
        let model = kmeans_fit(&samples, &settings).unwrap();
        assert!(model.converged);
        assert!(model.objective() <= 1e-9, "objective {}", model.objective());
    }

    #[test]
    fn kmeans_requires_enough_samples() {
        let samples = random_units(6, 2, 3);
        let settings = KMeansSettings::new(4, RandomStream::new(0));
        assert!(matches!(
            kmeans_fit(&samples, &settings),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn kmeans_history_is_monotone_and_matches_final_state() {
        for seed in 0..10 {
            let samples = random_units(200 + seed, 3, 40);
            let settings = KMeansSettings::new(5, RandomStream::new(seed));
            let model = kmeans_fit(&samples, &settings).unwrap();
            for w in model.objective_history.windows(2) {
                assert!(
                    w[1] <= w[0] + 1e-9,
                    "seed {seed}: history rose from {} to {}",
                    w[0],
                    w[1]
                );
            }
            // At convergence the assigned distance equals the nearest distance.
            let final_sum = sum_distance(&samples, &model.centroids).unwrap();
            assert!(
                (final_sum - model.objective()).abs() <= 1e-9,
                "seed {seed}: sum_distance {final_sum} vs objective {}",
                model.objective()
            );
        }
    }

    #[test]
    fn kmeans_farthest_first_separates_two_orthogonal_groups() {
        let mut samples = Vec::new();
        for k in 0..4 {
            let rot = Complex64::from_polar(1.0, 0.7 * k as f64);
            samples.push(
                ComplexUnitVector::new(e(2, 0).entries().iter().map(|z| z * rot).collect())
                    .unwrap(),
            );
            samples.push(
                ComplexUnitVector::new(e(2, 1).entries().iter().map(|z| z * rot).collect())
                    .unwrap(),
            );
        }
        let mut settings = KMeansSettings::new(2, RandomStream::new(0));
        settings.init = InitPolicy::FarthestFirst;
        let model = kmeans_fit(&samples, &settings).unwrap();
        assert!(model.objective() <= 1e-10, "objective {}", model.objective());
        // Even and odd samples belong to different clusters.
        for pair in model.assignments.chunks(2) {
            assert_ne!(pair[0], pair[1]);
        }
    }

    #[test]
    fn sum_distance_zero_when_every_sample_is_a_centroid() {
        let pts = random_units(9, 3, 4);
        assert!(sum_distance(&pts, &pts).unwrap() <= 1e-12);
    }

    #[test]
    fn brute_force_two_orthogonal_samples_split_perfectly() {
        let samples = vec![e(2, 0), e(2, 1)];
        let (obj, labels) = brute_force_partition(&samples, 2).unwrap();
        assert!(obj <= 1e-12, "objective {obj}");
        assert_ne!(labels[0], labels[1]);
    }

    #[test]
    fn brute_force_groups_two_orthogonal_triads() {
        let mut samples = Vec::new();
        for k in 0..3 {
            let rot = Complex64::from_polar(1.0, 1.1 * k as f64);
            samples.push(
                ComplexUnitVector::new(e(2, 0).entries().iter().map(|z| z * rot).collect())
                    .unwrap(),
            );
        }
        for k in 0..3 {
            let rot = Complex64::from_polar(1.0, 0.3 * k as f64);
            samples.push(
                ComplexUnitVector::new(e(2, 1).entries().iter().map(|z| z * rot).collect())
                    .unwrap(),
            );
        }
        let (obj, labels) = brute_force_partition(&samples, 2).unwrap();
        assert!(obj <= 1e-10, "objective {obj}");
        assert_eq!(labels[0], labels[1]);
        assert_eq!(labels[1], labels[2]);
        assert_eq!(labels[3], labels[4]);
        assert_eq!(labels[4], labels[5]);
        assert_ne!(labels[0], labels[3]);
    }

    #[test]
    fn brute_force_enforces_size_limit() {
        let samples = random_units(10, 2, 13);
        let err = brute_force_partition(&samples, 2).unwrap_err();
        assert!(matches!(err, Error::SizeLimit { limit: 12, got: 13 }));
    }

    #[test]
    fn brute_force_never_worse_than_kmeans() {
        for seed in 0..20 {
            let samples = random_units(300 + seed, 2, 8);
            let mut settings = KMeansSettings::new(2, RandomStream::new(seed));
            settings.init = InitPolicy::FarthestFirst;
            let model = kmeans_fit(&samples, &settings).unwrap();
            let (brute, _) = brute_force_partition(&samples, 2).unwrap();
            assert!(
                brute <= model.objective() + 1e-12,
                "seed {seed}: brute force {brute} worse than kmeans {}",
                model.objective()
            );
        }
    }
}
