//! Distribution bounds and Monte Carlo inequality checkers for the extreme
//! cone-restricted singular values of Gaussian matrices.
//!
//! For an `n x m` Gaussian matrix `G` and closed cones `C` in `R^m`, `D` in
//! `R^n`, two families of closed-form curves sandwich the distributions of
//! the restricted norm `||G||_{C->D}` and the restricted singular value
//! `sigma_{C->D}(G)`:
//!
//! * concentration curves driven by the squared spherical Gaussian widths
//!   `d* = w(K cap S)^2` of the two cones: the norm tail is bounded by
//!   `exp(-max{0, lambda - sqrt(d*_D) - sqrt(d*_C)}^2 / 2)` and the
//!   singular-value cdf by
//!   `exp(-max{0, sqrt(d*_D) - sqrt(d*_C) - lambda}^2 / 2)`;
//! * intrinsic-volume curves obtained by expanding the Gaussian comparison
//!   over conic intrinsic-volume profiles: a weighted sum of tail
//!   probabilities of signed combinations `chi_j +- chi_i` of independent
//!   chi variables, clipped at one.  The union-bound factor of two is kept
//!   exactly as derived; no tightening is attempted.
//!
//! Empirical counterparts estimate the same distributions by repeated
//! sampling, and a set of checkers certifies each comparison inequality by
//! reporting the signed margin between Monte Carlo estimates of its two
//! sides in units of the pooled standard error.  Margins are reported as
//! numbers rather than booleans so that inequalities holding with equality
//! do not flake under sampling noise.
//!
//! All stochastic routines draw from per-trial seed streams and reduce in
//! index order, so their output is independent of the worker-thread count.

use rayon::prelude::*;
use thiserror::Error;

use crate::cones::{Cone, ConeError};
use crate::feasibility::{self, FeasibilityError};
use crate::geometry::{GeometryError, IntrinsicVolumeProfile, MomentFunction};
use crate::numerics::{
    adaptive_simpson, chi_cdf, chi_pdf, chi_tail_cut, gauss_matrix, gauss_vector, kappa, norm2,
    Mat, NumericsError, QuadratureConfig, SeededSampler,
};
use crate::restricted::{
    restricted_norm, restricted_sv, RestrictedError, RestrictedKind, SolverConfig,
};

/// Failures surfaced by bound-curve construction and inequality checkers.
#[derive(Debug, Error)]
pub enum BoundsError {
    /// Malformed grid, dimensions, or parameter values.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// A moment function that does not satisfy the structural hypotheses of
    /// the requested comparison.
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),
    /// Contraction-instance tag not in the catalog.
    #[error("unknown contraction instance tag `{0}`")]
    UnknownInstance(String),
    /// Cone family outside the scope of a closed-form support function.
    #[error("unsupported cone: {0}")]
    UnsupportedCone(String),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Restricted(#[from] RestrictedError),
    #[error(transparent)]
    Feasibility(#[from] FeasibilityError),
}

/// Which distribution curve a [`BoundCurve`] represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    /// Concentration bound on the norm tail `P{||G||_{C->D} >= lambda}`.
    ConcNorm,
    /// Concentration bound on the singular-value cdf
    /// `P{sigma_{C->D}(G) < lambda}`.
    ConcSv,
    /// Intrinsic-volume bound on the norm tail.
    IvNorm,
    /// Intrinsic-volume bound on the singular-value cdf.
    IvSv,
    /// Empirical cdf of sampled restricted singular values.
    EmpiricalCdfSv,
    /// Empirical tail of sampled restricted norms.
    EmpiricalTailNorm,
}

impl CurveKind {
    /// True for curves that stem from sampling rather than a formula.
    pub fn is_empirical(self) -> bool {
        matches!(self, CurveKind::EmpiricalCdfSv | CurveKind::EmpiricalTailNorm)
    }

    /// Direction of monotonicity in `lambda`: cdf-type curves rise, tail-type
    /// curves fall.
    pub fn is_nondecreasing(self) -> bool {
        matches!(
            self,
            CurveKind::ConcSv | CurveKind::IvSv | CurveKind::EmpiricalCdfSv
        )
    }
}

impl std::fmt::Display for CurveKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CurveKind::ConcNorm => "conc_norm",
            CurveKind::ConcSv => "conc_sv",
            CurveKind::IvNorm => "iv_norm",
            CurveKind::IvSv => "iv_sv",
            CurveKind::EmpiricalCdfSv => "empirical_cdf_sv",
            CurveKind::EmpiricalTailNorm => "empirical_tail_norm",
        };
        f.write_str(s)
    }
}

/// Provenance attached to a curve: cone descriptors, matrix shape, and (for
/// sampled curves) the trial budget, seed, and count of unreliable trials.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveMeta {
    pub cone_c: String,
    pub cone_d: String,
    /// Rows of the sampled Gaussian matrix (0 for analytic curves).
    pub rows: usize,
    /// Columns of the sampled Gaussian matrix (0 for analytic curves).
    pub cols: usize,
    /// Number of Monte Carlo trials (0 for analytic curves).
    pub trials: usize,
    /// Seed of the trial streams (`None` for analytic curves).
    pub seed: Option<u64>,
    /// Trials whose solver runs had fewer than half the starts converge.
    pub unreliable_trials: usize,
}

impl CurveMeta {
    /// Metadata for a closed-form curve.
    pub fn analytic(cone_c: impl Into<String>, cone_d: impl Into<String>) -> Self {
        CurveMeta {
            cone_c: cone_c.into(),
            cone_d: cone_d.into(),
            rows: 0,
            cols: 0,
            trials: 0,
            seed: None,
            unreliable_trials: 0,
        }
    }
}

/// A curve `lambda -> value in [0, 1]` over an increasing grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCurve {
    pub kind: CurveKind,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub meta: CurveMeta,
}

impl BoundCurve {
    /// Validates the grid/value invariants and clamps values to `[0, 1]`
    /// (tolerating round-off of at most `1e-9` outside the interval).
    pub fn new(
        kind: CurveKind,
        grid: Vec<f64>,
        values: Vec<f64>,
        meta: CurveMeta,
    ) -> Result<Self, BoundsError> {
        if grid.is_empty() {
            return Err(BoundsError::InvalidInput("empty lambda grid".into()));
        }
        if grid.len() != values.len() {
            return Err(BoundsError::InvalidInput(format!(
                "grid has {} points but {} values were supplied",
                grid.len(),
                values.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) || grid.iter().any(|x| !x.is_finite()) {
            return Err(BoundsError::InvalidInput(
                "lambda grid must be finite and strictly increasing".into(),
            ));
        }
        let mut clamped = Vec::with_capacity(values.len());
        for &v in &values {
            if !(-1e-9..=1.0 + 1e-9).contains(&v) {
                return Err(BoundsError::InvalidInput(format!(
                    "curve value {v} outside [0, 1]"
                )));
            }
            clamped.push(v.clamp(0.0, 1.0));
        }
        if kind.is_empirical() && (meta.trials == 0 || meta.seed.is_none()) {
            return Err(BoundsError::InvalidInput(
                "empirical curves must record a positive trial count and a seed".into(),
            ));
        }
        Ok(BoundCurve {
            kind,
            grid,
            values: clamped,
            meta,
        })
    }

    /// Two-column whitespace table, one `lambda value` pair per line, in
    /// scientific notation with nine significant digits.
    pub fn table_text(&self) -> String {
        let mut out = String::with_capacity(self.grid.len() * 32);
        for (lam, v) in self.grid.iter().zip(&self.values) {
            out.push_str(&format!("{lam:.8e} {v:.8e}\n"));
        }
        out
    }
}

/// Evenly spaced grid of `points >= 2` values from `lo` to `hi` inclusive.
fn linspace(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let steps = (points - 1) as f64;
    (0..points)
        .map(|i| lo + (hi - lo) * i as f64 / steps)
        .collect()
}

/// Default 200-point grid for singular-value curves: `[0, sqrt(d*_D) -
/// sqrt(d*_C) + 4]`, floored at `[0, 1]` for degenerate width pairs.
pub fn default_sv_grid(dstar_c: f64, dstar_d: f64) -> Vec<f64> {
    let hi = (dstar_d.max(0.0).sqrt() - dstar_c.max(0.0).sqrt() + 4.0).max(1.0);
    linspace(0.0, hi, 200)
}

/// Default 200-point grid for norm curves: `[0, sqrt(d*_D) + sqrt(d*_C) + 6]`.
pub fn default_norm_grid(dstar_c: f64, dstar_d: f64) -> Vec<f64> {
    let hi = dstar_d.max(0.0).sqrt() + dstar_c.max(0.0).sqrt() + 6.0;
    linspace(0.0, hi, 200)
}

/// Enforces the monotonicity direction of `kind` exactly by running a
/// cumulative envelope over the values.  Both the raw value and its
/// predecessor dominate the target probability, so the envelope is still a
/// valid bound; it only absorbs quadrature jitter below `1e-10`.
fn monotone_envelope(kind: CurveKind, values: &mut [f64]) {
    for i in 1..values.len() {
        values[i] = if kind.is_nondecreasing() {
            values[i].max(values[i - 1])
        } else {
            values[i].min(values[i - 1])
        };
    }
}

/// Concentration bound curve from the squared Gaussian widths of the two
/// cones.  `kind` selects the norm tail (`Norm`) or the singular-value cdf
/// (`Sv`).  Note the cdf bound does not vanish at `lambda = 0`: its value
/// there is `exp(-(sqrt(d*_D) - sqrt(d*_C))^2 / 2) > 0`.
pub fn conc_bound(
    kind: RestrictedKind,
    lam_grid: &[f64],
    dstar_c: f64,
    dstar_d: f64,
) -> Result<BoundCurve, BoundsError> {
    if !(dstar_c >= 0.0) || !(dstar_d >= 0.0) || !dstar_c.is_finite() || !dstar_d.is_finite() {
        return Err(BoundsError::InvalidInput(
            "squared Gaussian widths must be finite and nonnegative".into(),
        ));
    }
    let (sc, sd) = (dstar_c.sqrt(), dstar_d.sqrt());
    let curve_kind = match kind {
        RestrictedKind::Norm => CurveKind::ConcNorm,
        RestrictedKind::Sv => CurveKind::ConcSv,
    };
    let mut values: Vec<f64> = lam_grid
        .iter()
        .map(|&lam| {
            let gap = match kind {
                RestrictedKind::Norm => (lam - sd - sc).max(0.0),
                RestrictedKind::Sv => (sd - sc - lam).max(0.0),
            };
            (-0.5 * gap * gap).exp()
        })
        .collect();
    monotone_envelope(curve_kind, &mut values);
    let meta = CurveMeta::analytic(format!("dstar {dstar_c:.6}"), format!("dstar {dstar_d:.6}"));
    BoundCurve::new(curve_kind, lam_grid.to_vec(), values, meta)
}

/// `P{X < x}` for the chi mixture with the given weights (`weights[k]` is
/// the mass on a chi variable with `k` degrees of freedom; `k = 0` is a
/// point mass at the origin).
fn mixture_cdf_strict(weights: &[f64], x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut acc = weights[0];
    for (k, &w) in weights.iter().enumerate().skip(1) {
        if w > 0.0 {
            acc += w * chi_cdf(k, x);
        }
    }
    acc
}

/// `P{X >= x}` for the same chi mixture.
fn mixture_tail(weights: &[f64], x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let mut acc = 0.0;
    for (k, &w) in weights.iter().enumerate().skip(1) {
        if w > 0.0 {
            acc += w * (1.0 - chi_cdf(k, x));
        }
    }
    acc
}

/// One point of the intrinsic-volume bound, evaluated by conditioning on the
/// mixture variable of the first profile: with `X_C`, `X_D` the independent
/// chi mixtures induced by the two profiles,
/// `Sv` evaluates `min{1, 2 P{X_D - X_C < lambda}}` and
/// `Norm` evaluates `min{1, 2 P{X_D + X_C >= lambda}}`.
///
/// Equal, term by term, to the weighted double sum over profile indices of
/// mixed chi tails; the conditional form needs one quadrature per point
/// instead of one per index pair.
fn iv_value(
    kind: RestrictedKind,
    lam: f64,
    vc: &[f64],
    vd: &[f64],
    cfg: &QuadratureConfig,
) -> Result<f64, NumericsError> {
    let inner = |t: f64| match kind {
        RestrictedKind::Sv => mixture_cdf_strict(vd, t + lam),
        RestrictedKind::Norm => mixture_tail(vd, lam - t),
    };
    let mut total = vc[0] * inner(0.0);
    let continuous_mass: f64 = vc[1..].iter().sum();
    if continuous_mass > 1e-15 {
        let density = |t: f64| {
            let mut p = 0.0;
            for (i, &w) in vc.iter().enumerate().skip(1) {
                if w > 0.0 {
                    p += w * chi_pdf(i, t);
                }
            }
            p
        };
        let integrand = |t: f64| density(t) * inner(t);
        let cut = chi_tail_cut(vc.len() - 1).min(cfg.tail_cut);
        // `inner` has a kink (or an atom step of the second mixture) where
        // its argument crosses zero; splitting there keeps the adaptive rule
        // on smooth pieces.
        let kink = match kind {
            RestrictedKind::Sv => -lam,
            RestrictedKind::Norm => lam,
        };
        if kink > 0.0 && kink < cut {
            total += adaptive_simpson(&integrand, 0.0, kink, cfg)?.0;
            total += adaptive_simpson(&integrand, kink, cut, cfg)?.0;
        } else {
            total += adaptive_simpson(&integrand, 0.0, cut, cfg)?.0;
        }
    }
    Ok((2.0 * total).clamp(0.0, 1.0))
}

/// Intrinsic-volume bound curve for the singular-value cdf (`Sv`) or the
/// norm tail (`Norm`), built from the two cones' intrinsic-volume profiles.
pub fn iv_bound(
    kind: RestrictedKind,
    lam_grid: &[f64],
    profile_c: &IntrinsicVolumeProfile,
    profile_d: &IntrinsicVolumeProfile,
) -> Result<BoundCurve, BoundsError> {
    let cfg = QuadratureConfig::default();
    let vc = profile_c.values();
    let vd = profile_d.values();
    let curve_kind = match kind {
        RestrictedKind::Norm => CurveKind::IvNorm,
        RestrictedKind::Sv => CurveKind::IvSv,
    };
    let mut values = Vec::with_capacity(lam_grid.len());
    for &lam in lam_grid {
        values.push(iv_value(kind, lam, vc, vd, &cfg)?);
    }
    monotone_envelope(curve_kind, &mut values);
    let meta = CurveMeta::analytic(
        format!("profile ambient {}", profile_c.ambient()),
        format!("profile ambient {}", profile_d.ambient()),
    );
    BoundCurve::new(curve_kind, lam_grid.to_vec(), values, meta)
}

/// Draws `trials` Gaussian matrices from per-trial seed streams and solves
/// the restricted extremum of `kind` on each.  Returns the samples in trial
/// order together with the number of unreliable trials (fewer than half the
/// multistarts converged).
pub fn empirical_samples(
    kind: RestrictedKind,
    c: &Cone,
    d: &Cone,
    n: usize,
    m: usize,
    trials: usize,
    seed: u64,
    solver_cfg: &SolverConfig,
) -> Result<(Vec<f64>, usize), BoundsError> {
    check_shape(c, d, n, m)?;
    if trials == 0 {
        return Err(BoundsError::InvalidInput("need at least one trial".into()));
    }
    let draws: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(f64, f64), BoundsError> {
            let mut sampler = SeededSampler::new(seed, t as u64);
            let g = gauss_matrix(&mut sampler, n, m);
            let ext = match kind {
                RestrictedKind::Norm => restricted_norm(&g, c, d, solver_cfg)?,
                RestrictedKind::Sv => restricted_sv(&g, c, d, solver_cfg)?,
            };
            Ok((ext.value, ext.converged_fraction))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let unreliable = draws.iter().filter(|&&(_, cf)| cf < 0.5).count();
    Ok((draws.into_iter().map(|(v, _)| v).collect(), unreliable))
}

/// Empirical cdf (`Sv`) or tail (`Norm`) of the restricted extremum over a
/// grid: per-trial Gaussian matrices, deterministic per seed.  The cdf
/// counts samples `<= lambda` and the tail counts samples `>= lambda`, so a
/// norm curve always starts at one.
#[allow(clippy::too_many_arguments)]
pub fn empirical_curve(
    kind: RestrictedKind,
    c: &Cone,
    d: &Cone,
    n: usize,
    m: usize,
    lam_grid: &[f64],
    trials: usize,
    seed: u64,
    solver_cfg: &SolverConfig,
) -> Result<BoundCurve, BoundsError> {
    if trials < 100 {
        return Err(BoundsError::InvalidInput(format!(
            "empirical curves need at least 100 trials, got {trials}"
        )));
    }
    let (samples, unreliable) = empirical_samples(kind, c, d, n, m, trials, seed, solver_cfg)?;
    let curve_kind = match kind {
        RestrictedKind::Norm => CurveKind::EmpiricalTailNorm,
        RestrictedKind::Sv => CurveKind::EmpiricalCdfSv,
    };
    let values = curve_values_from_samples(kind, lam_grid, &samples);
    let meta = CurveMeta {
        cone_c: format!("{c}"),
        cone_d: format!("{d}"),
        rows: n,
        cols: m,
        trials,
        seed: Some(seed),
        unreliable_trials: unreliable,
    };
    BoundCurve::new(curve_kind, lam_grid.to_vec(), values, meta)
}

/// Empirical cdf/tail values of pre-computed samples on a grid.
pub fn curve_values_from_samples(
    kind: RestrictedKind,
    lam_grid: &[f64],
    samples: &[f64],
) -> Vec<f64> {
    let total = samples.len() as f64;
    lam_grid
        .iter()
        .map(|&lam| {
            let count = match kind {
                RestrictedKind::Sv => samples.iter().filter(|&&s| s <= lam).count(),
                RestrictedKind::Norm => samples.iter().filter(|&&s| s >= lam).count(),
            };
            count as f64 / total
        })
        .collect()
}

/// Monte Carlo verdict on one comparison inequality: both side means with
/// standard errors, and the favorable margin in pooled standard errors
/// (positive when the claimed direction holds on the estimates).
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityCheck {
    pub lhs_mean: f64,
    pub rhs_mean: f64,
    pub lhs_se: f64,
    pub rhs_se: f64,
    pub satisfied_within: f64,
}

fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Margin in pooled standard errors, kept finite: a zero margin over zero
/// noise is 0, and any nonzero margin over (numerically) zero noise is
/// capped at `+-1e12`.
fn margin_in_ses(margin: f64, lhs_se: f64, rhs_se: f64) -> f64 {
    const CAP: f64 = 1e12;
    let pooled = (lhs_se * lhs_se + rhs_se * rhs_se).sqrt();
    if margin == 0.0 {
        return 0.0;
    }
    let ratio = margin / pooled;
    if ratio.is_finite() {
        ratio.clamp(-CAP, CAP)
    } else {
        CAP * margin.signum()
    }
}

/// Claimed direction of a comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Claim {
    LhsAtMostRhs,
    LhsAtLeastRhs,
}

fn build_check(lhs: &[f64], rhs: &[f64], claim: Claim) -> InequalityCheck {
    let (lm, ls) = mean_se(lhs);
    let (rm, rs) = mean_se(rhs);
    let margin = match claim {
        Claim::LhsAtMostRhs => rm - lm,
        Claim::LhsAtLeastRhs => lm - rm,
    };
    InequalityCheck {
        lhs_mean: lm,
        rhs_mean: rm,
        lhs_se: ls,
        rhs_se: rs,
        satisfied_within: margin_in_ses(margin, ls, rs),
    }
}

/// The three Gaussian moment comparisons relating restricted extrema of `G`
/// to free one-dimensional surrogates built from `g in R^m`, `g' in R^n`,
/// and a scalar Gaussian `gamma`, all independent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComparisonVariant {
    /// `E f(||G||_{C->D}) <= E f(||Proj_C g|| + ||Proj_D g'||)` for
    /// monotonically increasing convex `f`.
    ConvexNorm,
    /// `E f(||G||_{C->D} + gamma) <= E f(||Proj_C g|| + ||Proj_D g'||)` for
    /// monotonically increasing `f`.
    SmoothedNorm,
    /// `E f(sigma_{C->D}(G) + gamma) >= E f(||Proj_D g'|| - ||Proj_C g||)`
    /// for monotonically increasing `f` (the smoothing Gaussian sits inside
    /// the argument of `f`).
    SmoothedSv,
}

/// Shared per-trial samples for the comparison checkers, so several moment
/// functions and variants can be evaluated against one set of solves.
#[derive(Debug, Clone)]
pub struct ComparisonSamples {
    /// Restricted norms `||G_t||_{C->D}`.
    pub nres: Vec<f64>,
    /// Restricted singular values `sigma_{C->D}(G_t)`.
    pub sres: Vec<f64>,
    /// Scalar smoothing Gaussians, independent of everything else.
    pub gamma: Vec<f64>,
    /// `||Proj_C g_t||` for fresh Gaussians `g_t in R^m`.
    pub proj_c: Vec<f64>,
    /// `||Proj_D g'_t||` for fresh Gaussians `g'_t in R^n`.
    pub proj_d: Vec<f64>,
    /// Support values `h_K(g_t)` of the convex hull `K` of `C cap S^{m-1}`,
    /// when that hull admits a closed form for the family of `C`.
    pub hull_c: Option<Vec<f64>>,
    /// Trials whose solver runs had fewer than half the starts converge.
    pub unreliable: usize,
}

fn check_shape(c: &Cone, d: &Cone, n: usize, m: usize) -> Result<(), BoundsError> {
    if c.ambient() != m || d.ambient() != n {
        return Err(BoundsError::InvalidInput(format!(
            "matrix shape {n} x {m} does not match cone ambients {} (domain) and {} (range)",
            c.ambient(),
            d.ambient()
        )));
    }
    Ok(())
}

/// Draws the paired samples used by all comparison checkers.  Stream `2t`
/// feeds the matrix of trial `t` and stream `2t + 1` its independent
/// surrogate vectors, so results do not depend on the thread count.
pub fn comparison_samples(
    c: &Cone,
    d: &Cone,
    n: usize,
    m: usize,
    trials: usize,
    seed: u64,
    solver_cfg: &SolverConfig,
) -> Result<ComparisonSamples, BoundsError> {
    check_shape(c, d, n, m)?;
    if trials < 2 {
        return Err(BoundsError::InvalidInput(
            "comparison checks need at least two trials".into(),
        ));
    }
    struct Trial {
        nres: f64,
        sres: f64,
        gamma: f64,
        proj_c: f64,
        proj_d: f64,
        hull: Option<f64>,
        reliable: bool,
    }
    let rows: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<Trial, BoundsError> {
            let mut mat_stream = SeededSampler::new(seed, 2 * t as u64);
            let g_mat = gauss_matrix(&mut mat_stream, n, m);
            let max = restricted_norm(&g_mat, c, d, solver_cfg)?;
            let min = restricted_sv(&g_mat, c, d, solver_cfg)?;
            let mut vec_stream = SeededSampler::new(seed, 2 * t as u64 + 1);
            let g = gauss_vector(&mut vec_stream, m);
            let gp = gauss_vector(&mut vec_stream, n);
            let gamma = gauss_vector(&mut vec_stream, 1)[0];
            let proj_c = norm2(&c.project(&g)?);
            let proj_d = norm2(&d.project(&gp)?);
            let hull = sphere_hull_support(c, &g);
            Ok(Trial {
                nres: max.value,
                sres: min.value,
                gamma,
                proj_c,
                proj_d,
                hull,
                reliable: max.converged_fraction >= 0.5 && min.converged_fraction >= 0.5,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let unreliable = rows.iter().filter(|r| !r.reliable).count();
    Ok(ComparisonSamples {
        nres: rows.iter().map(|r| r.nres).collect(),
        sres: rows.iter().map(|r| r.sres).collect(),
        gamma: rows.iter().map(|r| r.gamma).collect(),
        proj_c: rows.iter().map(|r| r.proj_c).collect(),
        proj_d: rows.iter().map(|r| r.proj_d).collect(),
        hull_c: rows.iter().map(|r| r.hull).collect(),
        unreliable,
    })
}

fn require_monotone(f: &MomentFunction, context: &str) -> Result<(), BoundsError> {
    if !f.is_monotone() {
        return Err(BoundsError::HypothesisViolation(format!(
            "{context} needs a monotonically increasing moment function"
        )));
    }
    Ok(())
}

fn require_monotone_convex(f: &MomentFunction, context: &str) -> Result<(), BoundsError> {
    require_monotone(f, context)?;
    if !f.is_convex() {
        return Err(BoundsError::HypothesisViolation(format!(
            "{context} needs a convex moment function"
        )));
    }
    Ok(())
}

/// Evaluates one comparison variant against pre-drawn samples.
pub fn check_moment_comparison_from_samples(
    variant: ComparisonVariant,
    f: &MomentFunction,
    samples: &ComparisonSamples,
) -> Result<InequalityCheck, BoundsError> {
    match variant {
        ComparisonVariant::ConvexNorm => {
            require_monotone_convex(f, "the plain norm comparison")?
        }
        ComparisonVariant::SmoothedNorm => require_monotone(f, "the smoothed norm comparison")?,
        ComparisonVariant::SmoothedSv => {
            require_monotone(f, "the smoothed singular-value comparison")?
        }
    }
    let rhs_sum: Vec<f64> = samples
        .proj_c
        .iter()
        .zip(&samples.proj_d)
        .map(|(pc, pd)| f.eval(pc + pd))
        .collect();
    let (lhs, rhs, claim) = match variant {
        ComparisonVariant::ConvexNorm => {
            let lhs: Vec<f64> = samples.nres.iter().map(|&v| f.eval(v)).collect();
            (lhs, rhs_sum, Claim::LhsAtMostRhs)
        }
        ComparisonVariant::SmoothedNorm => {
            let lhs: Vec<f64> = samples
                .nres
                .iter()
                .zip(&samples.gamma)
                .map(|(&v, &gm)| f.eval(v + gm))
                .collect();
            (lhs, rhs_sum, Claim::LhsAtMostRhs)
        }
        ComparisonVariant::SmoothedSv => {
            let lhs: Vec<f64> = samples
                .sres
                .iter()
                .zip(&samples.gamma)
                .map(|(&v, &gm)| f.eval(v + gm))
                .collect();
            let rhs: Vec<f64> = samples
                .proj_c
                .iter()
                .zip(&samples.proj_d)
                .map(|(pc, pd)| f.eval(pd - pc))
                .collect();
            (lhs, rhs, Claim::LhsAtLeastRhs)
        }
    };
    Ok(build_check(&lhs, &rhs, claim))
}

/// Monte Carlo check of one Gaussian moment comparison between the
/// restricted extremum of an `n x m` Gaussian matrix on `(C, D)` and its
/// free surrogate.  Rejects moment functions that miss the variant's
/// hypotheses.
#[allow(clippy::too_many_arguments)]
pub fn check_moment_comparison(
    variant: ComparisonVariant,
    f: &MomentFunction,
    c: &Cone,
    d: &Cone,
    n: usize,
    m: usize,
    trials: usize,
    seed: u64,
    solver_cfg: &SolverConfig,
) -> Result<InequalityCheck, BoundsError> {
    // Gate before sampling so hypothesis errors are cheap.
    match variant {
        ComparisonVariant::ConvexNorm => {
            require_monotone_convex(f, "the plain norm comparison")?
        }
        _ => require_monotone(f, "the smoothed comparisons")?,
    }
    let samples = comparison_samples(c, d, n, m, trials, seed, solver_cfg)?;
    check_moment_comparison_from_samples(variant, f, &samples)
}

/// Outcome of the linear-image comparison: the same inequality certified
/// with the condition-number factor and with the sharper restricted
/// condition factor.  The stored factors are the products over the two maps
/// before raising to the moment order.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearImageCheck {
    pub kappa_check: InequalityCheck,
    pub renegar_check: InequalityCheck,
    pub kappa_factor: f64,
    pub renegar_factor: f64,
}

/// Checks `E ||G~||^r_{TC->UD} <= factor^r * E ||G||^r_{C->D}` for `r >= 1`,
/// where `G~` matches the image dimensions, with two choices of factor:
/// `kappa(T) kappa(U)` and the restricted condition numbers `R_C(T) R_D(U)`
/// (each `||.||` over `max` of the two one-sided restricted minima).  An
/// infinite factor makes the bound vacuous; the margin is then reported at
/// the cap instead of erroring.
#[allow(clippy::too_many_arguments)]
pub fn check_linear_image(
    c: &Cone,
    d: &Cone,
    t_map: &Mat,
    u_map: &Mat,
    r: f64,
    trials: usize,
    seed: u64,
    solver_cfg: &SolverConfig,
) -> Result<LinearImageCheck, BoundsError> {
    if !(r >= 1.0) || !r.is_finite() {
        return Err(BoundsError::InvalidInput(format!(
            "moment order must satisfy r >= 1, got {r}"
        )));
    }
    if trials < 2 {
        return Err(BoundsError::InvalidInput(
            "comparison checks need at least two trials".into(),
        ));
    }
    let tc = Cone::linear_image(t_map.clone(), c.clone())?;
    let ud = Cone::linear_image(u_map.clone(), d.clone())?;
    let ell = t_map.rows();
    let p = u_map.rows();
    let m = c.ambient();
    let n = d.ambient();

    let kappa_factor = kappa(t_map)? * kappa(u_map)?;
    let renegar_factor = feasibility::renegar(t_map, c, &Cone::full(ell), solver_cfg)?
        * feasibility::renegar(u_map, d, &Cone::full(p), solver_cfg)?;

    // Stream 2t drives the image-space trial, stream 2t + 1 the base trial.
    let pairs: Vec<(f64, f64)> = (0..trials)
        .into_par_iter()
        .map(|t| -> Result<(f64, f64), BoundsError> {
            let mut img_stream = SeededSampler::new(seed, 2 * t as u64);
            let g_img = gauss_matrix(&mut img_stream, p, ell);
            let image = restricted_norm(&g_img, &tc, &ud, solver_cfg)?;
            let mut base_stream = SeededSampler::new(seed, 2 * t as u64 + 1);
            let g_base = gauss_matrix(&mut base_stream, n, m);
            let base = restricted_norm(&g_base, c, d, solver_cfg)?;
            Ok((image.value.powf(r), base.value.powf(r)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let lhs: Vec<f64> = pairs.iter().map(|&(img, _)| img).collect();
    let base: Vec<f64> = pairs.iter().map(|&(_, b)| b).collect();

    let scaled_check = |factor: f64| {
        let (lm, ls) = mean_se(&lhs);
        let (bm, bs) = mean_se(&base);
        let scale = factor.powf(r);
        let (rm, rs) = (scale * bm, scale * bs);
        InequalityCheck {
            lhs_mean: lm,
            rhs_mean: rm,
            lhs_se: ls,
            rhs_se: if rs.is_finite() { rs } else { 0.0 },
            satisfied_within: margin_in_ses(rm - lm, ls, if rs.is_finite() { rs } else { 0.0 }),
        }
    };
    Ok(LinearImageCheck {
        kappa_check: scaled_check(kappa_factor),
        renegar_check: scaled_check(renegar_factor),
        kappa_factor,
        renegar_factor,
    })
}

/// Catalog of minimax contraction instances, each pairing a fiber family
/// built from restricted extrema with a coarser comparison family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ContractionKind {
    /// Tensor stubs against product stubs:
    /// `E f(||G||_{C->D}) <= E f(||Proj_C g|| + ||Proj_D g'||)` for
    /// monotonically increasing convex `f`.
    TensorProductStubs,
    /// Norm-preserved affine variant over the hull `K` of `C cap S^{m-1}`:
    /// `E f(||G||_{C->D} + gamma) <= E f(h_K(g) + ||Proj_D g'||)` for
    /// monotonically increasing `f`.
    NormPreservedAffine,
    /// Product bundle against the affine tensor bundle:
    /// `E f(sigma_{C->D}(G) + gamma) >= E f(||Proj_D g'|| - h_K(g))` for
    /// monotonically increasing `f`.
    ProductVsAffineBundle,
}

impl ContractionKind {
    /// Parses a catalog tag; anything else is an unknown-instance error.
    pub fn parse(tag: &str) -> Result<Self, BoundsError> {
        match tag {
            "tensor-product-stubs" => Ok(ContractionKind::TensorProductStubs),
            "norm-preserved-affine" => Ok(ContractionKind::NormPreservedAffine),
            "product-vs-affine-bundle" => Ok(ContractionKind::ProductVsAffineBundle),
            other => Err(BoundsError::UnknownInstance(other.to_string())),
        }
    }
}

impl std::fmt::Display for ContractionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ContractionKind::TensorProductStubs => "tensor-product-stubs",
            ContractionKind::NormPreservedAffine => "norm-preserved-affine",
            ContractionKind::ProductVsAffineBundle => "product-vs-affine-bundle",
        };
        f.write_str(s)
    }
}

/// A contraction instance: the catalog entry plus the cone pair (the matrix
/// shape is implied by the cone ambients).
#[derive(Debug, Clone)]
pub struct ContractionInstance {
    pub kind: ContractionKind,
    pub cone_c: Cone,
    pub cone_d: Cone,
}

/// Support function `h_K(g)` of `K = conv(C cap S^{m-1})` in closed form for
/// the cone families where the hull is tractable; `None` otherwise.  Unlike
/// the projection-norm support of `C cap B`, this support is signed: it goes
/// negative when `g` makes an obtuse angle with every unit vector of `C`.
fn sphere_hull_support(c: &Cone, g: &[f64]) -> Option<f64> {
    match c {
        Cone::Full(_) => Some(norm2(g)),
        Cone::Subspace { .. } => {
            let proj = c.project(g).ok()?;
            Some(norm2(&proj))
        }
        Cone::Orthant(_) => {
            let plus: Vec<f64> = g.iter().map(|&x| x.max(0.0)).collect();
            let plus_norm = norm2(&plus);
            if plus_norm > 0.0 {
                Some(plus_norm)
            } else {
                // All coordinates nonpositive: the best unit vector is the
                // coordinate axis of the largest entry.
                g.iter().copied().reduce(f64::max)
            }
        }
        Cone::Circular { slope, .. } => {
            let r = norm2(g);
            if r == 0.0 {
                return Some(0.0);
            }
            let alpha = slope.atan();
            let rest = norm2(&g[1..]);
            let theta = rest.atan2(g[0]);
            Some(r * (theta - alpha).max(0.0).cos())
        }
        _ => None,
    }
}

/// Monte Carlo check of one catalog instance.  The fiber side is sampled
/// through the restricted-extremum solver and the comparison side through
/// its closed-form surrogate; the reported margin is positive when the
/// claimed direction holds on the estimates.
pub fn check_gordon_variant(
    instance: &ContractionInstance,
    f: &MomentFunction,
    trials: usize,
    seed: u64,
    solver_cfg: &SolverConfig,
) -> Result<InequalityCheck, BoundsError> {
    match instance.kind {
        ContractionKind::TensorProductStubs => {
            require_monotone_convex(f, "the tensor-vs-product-stub instance")?
        }
        ContractionKind::NormPreservedAffine => {
            require_monotone(f, "the norm-preserved affine instance")?
        }
        ContractionKind::ProductVsAffineBundle => {
            require_monotone(f, "the product-vs-affine-bundle instance")?
        }
    }
    let c = &instance.cone_c;
    let d = &instance.cone_d;
    let samples = comparison_samples(c, d, d.ambient(), c.ambient(), trials, seed, solver_cfg)?;
    let hull = |s: &ComparisonSamples| -> Result<Vec<f64>, BoundsError> {
        s.hull_c.clone().ok_or_else(|| {
            BoundsError::UnsupportedCone(format!(
                "no closed-form sphere-hull support for `{c}`"
            ))
        })
    };
    let (lhs, rhs, claim) = match instance.kind {
        ContractionKind::TensorProductStubs => {
            let lhs: Vec<f64> = samples.nres.iter().map(|&v| f.eval(v)).collect();
            let rhs: Vec<f64> = samples
                .proj_c
                .iter()
                .zip(&samples.proj_d)
                .map(|(pc, pd)| f.eval(pc + pd))
                .collect();
            (lhs, rhs, Claim::LhsAtMostRhs)
        }
        ContractionKind::NormPreservedAffine => {
            let hk = hull(&samples)?;
            let lhs: Vec<f64> = samples
                .nres
                .iter()
                .zip(&samples.gamma)
                .map(|(&v, &gm)| f.eval(v + gm))
                .collect();
            let rhs: Vec<f64> = hk
                .iter()
                .zip(&samples.proj_d)
                .map(|(h, pd)| f.eval(h + pd))
                .collect();
            (lhs, rhs, Claim::LhsAtMostRhs)
        }
        ContractionKind::ProductVsAffineBundle => {
            let hk = hull(&samples)?;
            let lhs: Vec<f64> = samples
                .sres
                .iter()
                .zip(&samples.gamma)
                .map(|(&v, &gm)| f.eval(v + gm))
                .collect();
            let rhs: Vec<f64> = hk
                .iter()
                .zip(&samples.proj_d)
                .map(|(h, pd)| f.eval(pd - h))
                .collect();
            (lhs, rhs, Claim::LhsAtLeastRhs)
        }
    };
    Ok(build_check(&lhs, &rhs, claim))
}
