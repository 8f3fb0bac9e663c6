//! Cone-restricted operator norms and smallest restricted singular values.
//!
//! For a matrix `A` mapping `R^m -> R^n` and closed convex cones `C` in `R^m`
//! and `D` in `R^n`, this module computes
//!
//! * the restricted norm: the maximum of `||Proj_D(A x)||` over unit `x` in
//!   `C`, and
//! * the smallest restricted singular value: the minimum of the same
//!   objective over unit `x` in `C`.
//!
//! Both are driven by deterministic multistart local solvers ([`restricted_norm`]
//! uses alternating bilinear ascent over `(C cap B^m) x (D cap B^n)`,
//! [`restricted_sv`] uses projected gradient descent on the sphere slice of
//! `C`), with exact singular-value fast paths when both cones are the full
//! space. [`oracle_restricted`] provides an independent brute-force check:
//! exact face-pair enumeration for polyhedral cones and a dense projected
//! sphere grid with pattern-search polish for low ambient dimensions.
//!
//! Solvers are deterministic: starting points come from a fixed internal
//! seed, one RNG stream per start index, and the multistart reduction runs
//! in start order regardless of thread count.

use crate::cones::{Cone, ConeError};
use crate::numerics::{
    dot, gauss_vector, norm2, orthonormal_basis, scale_vec, svd, vec_sub, Mat, SeededSampler,
};
use rayon::prelude::*;

/// Fixed master seed for solver starting points, so results are reproducible
/// across runs and thread counts.
const SOLVER_SEED: u64 = 0x7d2a_91c4_5b68_3ef1;

/// Largest ambient dimension accepted by the sphere-grid oracle.
const MAX_ORACLE_AMBIENT: usize = 4;

/// Largest per-cone generator count accepted by the face-enumeration oracle.
const MAX_ORACLE_GENERATORS: usize = 12;

/// Tuning knobs shared by the restricted-norm and restricted-singular-value
/// solvers and the grid oracle.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Number of independent starting points (at least 1).
    pub multistarts: usize,
    /// Iteration cap per start.
    pub max_iters: usize,
    /// Stop a start once the iterate moves less than this (must be > 0).
    pub step_tol: f64,
    /// Tolerance used when reporting and cross-checking optimal values
    /// (must be > 0).
    pub value_tol: f64,
    /// Number of initial direction samples used by the sphere-grid oracle.
    pub oracle_grid: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            multistarts: 64,
            max_iters: 2000,
            step_tol: 1e-12,
            value_tol: 1e-8,
            oracle_grid: 20_000,
        }
    }
}

impl SolverConfig {
    /// Lighter iteration budget for cone-angle computations, where the
    /// bilinear objective is smooth and converges quickly.
    pub fn for_angles() -> Self {
        SolverConfig {
            max_iters: 500,
            ..SolverConfig::default()
        }
    }

    fn validate(&self) {
        assert!(self.multistarts >= 1, "multistarts must be at least 1");
        assert!(self.max_iters >= 1, "max_iters must be at least 1");
        assert!(self.step_tol > 0.0, "step_tol must be positive");
        assert!(self.value_tol > 0.0, "value_tol must be positive");
    }
}

/// Result of a restricted extremal computation.
#[derive(Debug, Clone)]
pub struct RestrictedExtremum {
    /// The extremal value (always nonnegative).
    pub value: f64,
    /// Attaining unit vector in `C`.
    pub x_cert: Vec<f64>,
    /// Witness direction in `D` (unit vector, or zero when the projection
    /// of `A x_cert` onto `D` vanishes). Pairs with `x_cert` so that
    /// `value = <A x_cert, y_cert>` for maxima and
    /// `value = ||Proj_D(A x_cert)||` in general.
    pub y_cert: Vec<f64>,
    /// Fraction of multistarts that reached their stopping rule before the
    /// iteration cap.
    pub converged_fraction: f64,
}

/// Which extremal quantity an oracle call should compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RestrictedKind {
    /// Maximize `||Proj_D(A x)||` over unit `x` in `C`.
    Norm,
    /// Minimize `||Proj_D(A x)||` over unit `x` in `C`.
    Sv,
}

/// Errors from restricted-extremum routines.
#[derive(Debug, thiserror::Error)]
pub enum RestrictedError {
    #[error("the zero cone admits no unit vectors to optimize over")]
    ZeroCone,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("input vector is not a member of the constraint cone")]
    NotInCone,
    #[error("oracle does not support this instance: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Cone(#[from] ConeError),
}

fn check_dims(a: &Mat, c: &Cone, d: &Cone) -> Result<(), RestrictedError> {
    if c.ambient() != a.cols() {
        return Err(RestrictedError::DimensionMismatch {
            expected: a.cols(),
            got: c.ambient(),
        });
    }
    if d.ambient() != a.rows() {
        return Err(RestrictedError::DimensionMismatch {
            expected: a.rows(),
            got: d.ambient(),
        });
    }
    Ok(())
}

fn is_full(c: &Cone) -> bool {
    matches!(c, Cone::Full(_))
}

/// Apply `A` to a vector that must lie in `C`, then project onto `D`.
pub fn apply_restricted(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    x: &[f64],
) -> Result<Vec<f64>, RestrictedError> {
    check_dims(a, c, d)?;
    if x.len() != a.cols() {
        return Err(RestrictedError::DimensionMismatch {
            expected: a.cols(),
            got: x.len(),
        });
    }
    if !c.member(x, 1e-8 * (1.0 + norm2(x)))? {
        return Err(RestrictedError::NotInCone);
    }
    Ok(d.project(&a.matvec(x))?)
}

/// `||Proj_D(A x)||`, the objective shared by both solvers.
fn objective(a: &Mat, d: &Cone, x: &[f64]) -> Result<f64, ConeError> {
    Ok(norm2(&d.project(&a.matvec(x))?))
}

/// Draw a unit vector in `C`: Gaussian directions projected onto the cone,
/// with projected signed axes as a deterministic fallback. `None` only for
/// the zero cone.
fn sample_stub(c: &Cone, sampler: &mut SeededSampler) -> Result<Option<Vec<f64>>, ConeError> {
    let m = c.ambient();
    for _ in 0..80 {
        let g = gauss_vector(sampler, m);
        let p = c.project(&g)?;
        let n = norm2(&p);
        if n > 1e-9 {
            return Ok(Some(scale_vec(&p, 1.0 / n)));
        }
    }
    for j in 0..m {
        for sign in [1.0, -1.0] {
            let mut e = vec![0.0; m];
            e[j] = sign;
            let p = c.project(&e)?;
            let n = norm2(&p);
            if n > 1e-9 {
                return Ok(Some(scale_vec(&p, 1.0 / n)));
            }
        }
    }
    Ok(None)
}

/// Evaluate the final certificate pair at `x`: the true objective value and
/// the unit witness direction in `D` (zero vector when the projection
/// vanishes).
fn certify(a: &Mat, d: &Cone, x: Vec<f64>) -> Result<(f64, Vec<f64>, Vec<f64>), ConeError> {
    let p = d.project(&a.matvec(&x))?;
    let pn = norm2(&p);
    if pn > 1e-15 {
        let y = scale_vec(&p, 1.0 / pn);
        Ok((pn, x, y))
    } else {
        let n = a.rows();
        Ok((0.0, x, vec![0.0; n]))
    }
}

pub(crate) struct BilinearOut {
    pub value: f64,
    pub x_cert: Vec<f64>,
    pub y_cert: Vec<f64>,
    pub converged_fraction: f64,
}

/// One alternating-ascent run of `<A x, y>` over `(C cap S) x (D cap S)`.
/// Each half-step is the exact maximizer for the other variable held fixed,
/// so the value is nondecreasing along the iteration.
fn alternate_from(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    x0: Vec<f64>,
    cfg: &SolverConfig,
) -> Result<(f64, Vec<f64>, Vec<f64>, bool), ConeError> {
    let mut x = x0;
    let mut converged = false;
    for _ in 0..cfg.max_iters {
        let p = d.project(&a.matvec(&x))?;
        let pn = norm2(&p);
        if pn <= 1e-15 {
            // No direction of D pairs positively with A x; the start
            // contributes the value at this stub, which is zero.
            converged = true;
            break;
        }
        let y = scale_vec(&p, 1.0 / pn);
        let q = c.project(&a.tr_matvec(&y))?;
        let qn = norm2(&q);
        if qn <= 1e-15 {
            converged = true;
            break;
        }
        let x_new = scale_vec(&q, 1.0 / qn);
        let step = norm2(&vec_sub(&x_new, &x));
        x = x_new;
        if step < cfg.step_tol {
            converged = true;
            break;
        }
    }
    let (value, x_cert, y_cert) = certify(a, d, x)?;
    Ok((value, x_cert, y_cert, converged))
}

/// Multistart alternating maximization of `<A x, y>`. Start `s` draws from
/// RNG stream `s` of the fixed solver seed; the reduction scans starts in
/// index order and keeps the first-found best, so the result does not depend
/// on thread count.
pub(crate) fn alternating_bilinear_max(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    cfg: &SolverConfig,
) -> Result<BilinearOut, ConeError> {
    cfg.validate();
    let runs: Vec<Result<Option<(f64, Vec<f64>, Vec<f64>, bool)>, ConeError>> = (0..cfg
        .multistarts)
        .into_par_iter()
        .map(|s| {
            let mut sampler = SeededSampler::new(SOLVER_SEED, s as u64);
            match sample_stub(c, &mut sampler)? {
                None => Ok(None),
                Some(x0) => alternate_from(a, c, d, x0, cfg).map(Some),
            }
        })
        .collect();
    reduce_starts(runs, true)
}

/// One projected-gradient descent run of `||Proj_D(A x)||` over `C cap S`.
/// The objective equals the distance from `A x` to the polar of `D`, which
/// is smooth wherever it is positive with gradient `A^T y` for the unit
/// witness `y`; a vanishing objective is a global minimum and stops the run.
fn descend_from(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    x0: Vec<f64>,
    cfg: &SolverConfig,
) -> Result<(f64, Vec<f64>, Vec<f64>, bool), ConeError> {
    let mut x = x0;
    let mut fval = objective(a, d, &x)?;
    let mut eta = 1.0;
    let mut converged = false;
    'outer: for _ in 0..cfg.max_iters {
        if fval <= 1e-14 {
            converged = true;
            break;
        }
        let p = d.project(&a.matvec(&x))?;
        let y = scale_vec(&p, 1.0 / norm2(&p));
        let grad = a.tr_matvec(&y);
        let radial = dot(&grad, &x);
        let tang = vec_sub(&grad, &scale_vec(&x, radial));
        let gnorm = norm2(&tang);
        if gnorm <= 1e-13 * (1.0 + fval) {
            converged = true;
            break;
        }
        let mut accepted = false;
        for _ in 0..60 {
            let trial = vec_sub(&x, &scale_vec(&tang, eta));
            let proj = c.project(&trial)?;
            let pn = norm2(&proj);
            if pn <= 1e-12 {
                eta *= 0.5;
                continue;
            }
            let xt = scale_vec(&proj, 1.0 / pn);
            let ft = objective(a, d, &xt)?;
            if ft <= fval - 1e-4 * eta * gnorm * gnorm {
                let step = norm2(&vec_sub(&xt, &x));
                x = xt;
                fval = ft;
                accepted = true;
                eta = (eta * 1.6).min(1e3);
                if step < cfg.step_tol {
                    converged = true;
                    break 'outer;
                }
                break;
            }
            eta *= 0.5;
        }
        if !accepted {
            // No sufficient decrease at any step length: stationary for the
            // projected gradient method, including at nonsmooth cone edges.
            converged = true;
            break;
        }
    }
    let (value, x_cert, y_cert) = certify(a, d, x)?;
    Ok((value, x_cert, y_cert, converged))
}

/// Order-stable reduction over multistart runs. `maximize` picks the sense;
/// ties keep the earliest start.
fn reduce_starts(
    runs: Vec<Result<Option<(f64, Vec<f64>, Vec<f64>, bool)>, ConeError>>,
    maximize: bool,
) -> Result<BilinearOut, ConeError> {
    let mut best: Option<(f64, Vec<f64>, Vec<f64>)> = None;
    let mut ran = 0usize;
    let mut conv = 0usize;
    for run in runs {
        if let Some((value, x, y, flag)) = run? {
            ran += 1;
            if flag {
                conv += 1;
            }
            let improves = match &best {
                None => true,
                Some((b, _, _)) => {
                    if maximize {
                        value > *b
                    } else {
                        value < *b
                    }
                }
            };
            if improves {
                best = Some((value, x, y));
            }
        }
    }
    let (value, x_cert, y_cert) =
        best.ok_or_else(|| ConeError::InvalidCone("cone admits no unit vectors".into()))?;
    Ok(BilinearOut {
        value,
        x_cert,
        y_cert,
        converged_fraction: conv as f64 / ran.max(1) as f64,
    })
}

/// Restricted norm of `A`: the maximum of `||Proj_D(A x)||` over unit
/// vectors `x` in `C`.
///
/// When both cones are the full space this equals the operator norm and is
/// computed exactly from the singular value decomposition; otherwise a
/// deterministic multistart alternating maximization of `<A x, y>` over
/// `(C cap B^m) x (D cap B^n)` is used.
pub fn restricted_norm(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    cfg: &SolverConfig,
) -> Result<RestrictedExtremum, RestrictedError> {
    check_dims(a, c, d)?;
    if c.is_zero() || d.is_zero() {
        return Err(RestrictedError::ZeroCone);
    }
    if is_full(c) && is_full(d) {
        let (vals, u, v) = svd(a);
        return Ok(RestrictedExtremum {
            value: vals[0],
            x_cert: v.col(0),
            y_cert: u.col(0),
            converged_fraction: 1.0,
        });
    }
    let out = alternating_bilinear_max(a, c, d, cfg)?;
    Ok(RestrictedExtremum {
        value: out.value,
        x_cert: out.x_cert,
        y_cert: out.y_cert,
        converged_fraction: out.converged_fraction,
    })
}

/// Unit vector orthogonal to all columns of `v` (which must span fewer than
/// `m` dimensions).
fn kernel_vector(v: &Mat, m: usize) -> Vec<f64> {
    let mut best: Option<(f64, Vec<f64>)> = None;
    for j in 0..m {
        let mut w = vec![0.0; m];
        w[j] = 1.0;
        for k in 0..v.cols() {
            let col = v.col(k);
            let coeff = dot(&w, &col);
            for i in 0..m {
                w[i] -= coeff * col[i];
            }
        }
        let n = norm2(&w);
        if best.as_ref().map_or(true, |(b, _)| n > *b) {
            best = Some((n, w));
        }
    }
    let (n, w) = best.expect("ambient dimension is positive");
    scale_vec(&w, 1.0 / n)
}

/// Smallest restricted singular value of `A`: the minimum of
/// `||Proj_D(A x)||` over unit vectors `x` in `C`.
///
/// When both cones are the full space this is exact: the smallest singular
/// value for `n >= m`, and zero with a kernel certificate for `n < m`.
/// Otherwise each start runs projected gradient descent on the sphere slice
/// of `C`, with Armijo backtracking; the objective is the distance from
/// `A x` to the polar of `D`, so a vanishing value certifies a global
/// minimum.
pub fn restricted_sv(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    cfg: &SolverConfig,
) -> Result<RestrictedExtremum, RestrictedError> {
    check_dims(a, c, d)?;
    if c.is_zero() || d.is_zero() {
        return Err(RestrictedError::ZeroCone);
    }
    if is_full(c) && is_full(d) {
        let (vals, u, v) = svd(a);
        if a.rows() >= a.cols() {
            let last = vals.len() - 1;
            return Ok(RestrictedExtremum {
                value: vals[last],
                x_cert: v.col(last),
                y_cert: u.col(last),
                converged_fraction: 1.0,
            });
        }
        let x = kernel_vector(&v, a.cols());
        return Ok(RestrictedExtremum {
            value: 0.0,
            x_cert: x,
            y_cert: vec![0.0; a.rows()],
            converged_fraction: 1.0,
        });
    }
    cfg.validate();
    let runs: Vec<Result<Option<(f64, Vec<f64>, Vec<f64>, bool)>, ConeError>> = (0..cfg
        .multistarts)
        .into_par_iter()
        .map(|s| {
            let mut sampler = SeededSampler::new(SOLVER_SEED, s as u64);
            match sample_stub(c, &mut sampler)? {
                None => Ok(None),
                Some(x0) => descend_from(a, c, d, x0, cfg).map(Some),
            }
        })
        .collect();
    let out = reduce_starts(runs, false)?;
    Ok(RestrictedExtremum {
        value: out.value,
        x_cert: out.x_cert,
        y_cert: out.y_cert,
        converged_fraction: out.converged_fraction,
    })
}

/// Generator list when the cone has an explicit conic-hull form.
fn v_form(c: &Cone) -> Option<Vec<Vec<f64>>> {
    match c {
        Cone::Orthant(m) => Some(
            (0..*m)
                .map(|j| {
                    let mut e = vec![0.0; *m];
                    e[j] = 1.0;
                    e
                })
                .collect(),
        ),
        Cone::PolyhedralV { generators, .. } => Some(generators.clone()),
        Cone::Subspace { ambient, basis } if !basis.is_empty() => {
            let _ = ambient;
            let mut gens = basis.clone();
            for b in basis {
                gens.push(scale_vec(b, -1.0));
            }
            Some(gens)
        }
        _ => None,
    }
}

/// Phase-one simplex feasibility test with Bland's rule: does there exist
/// `z >= 0` with `rows z = rhs`? All entries of `rhs` must be nonnegative.
fn phase_one_feasible(rows: &[Vec<f64>], rhs: &[f64]) -> bool {
    let m = rows.len();
    let n = rows[0].len();
    // Tableau columns: the n structural variables, then m artificials.
    let width = n + m;
    let mut t: Vec<Vec<f64>> = (0..m)
        .map(|i| {
            let mut row = vec![0.0; width + 1];
            row[..n].copy_from_slice(&rows[i]);
            row[n + i] = 1.0;
            row[width] = rhs[i];
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs for "minimize the sum of artificials" with the
    // artificial basis: structural columns get minus their column sums.
    let mut obj = vec![0.0; width + 1];
    for j in 0..=width {
        let col_sum: f64 = (0..m).map(|i| t[i][j]).sum();
        let cost = if j >= n && j < width { 1.0 } else { 0.0 };
        obj[j] = cost - col_sum;
    }
    for _ in 0..20_000 {
        // Bland: entering variable is the lowest-index negative reduced cost.
        let Some(enter) = (0..width).find(|&j| obj[j] < -1e-9) else {
            break;
        };
        // Ratio test, ties broken by the lowest basis index (Bland).
        let mut leave: Option<usize> = None;
        let mut best_ratio = f64::INFINITY;
        for i in 0..m {
            if t[i][enter] > 1e-11 {
                let ratio = t[i][width] / t[i][enter];
                let better = ratio < best_ratio - 1e-12
                    || ((ratio - best_ratio).abs() <= 1e-12
                        && leave.map_or(true, |l| basis[i] < basis[l]));
                if better {
                    best_ratio = ratio;
                    leave = Some(i);
                }
            }
        }
        let Some(leave) = leave else {
            break;
        };
        let pivot = t[leave][enter];
        for v in t[leave].iter_mut() {
            *v /= pivot;
        }
        for i in 0..m {
            if i != leave && t[i][enter].abs() > 0.0 {
                let f = t[i][enter];
                let (pr, row) = {
                    let (a, b) = if i < leave {
                        let (lo, hi) = t.split_at_mut(leave);
                        (&hi[0], &mut lo[i])
                    } else {
                        let (lo, hi) = t.split_at_mut(i);
                        (&lo[leave], &mut hi[0])
                    };
                    (a, b)
                };
                for (rv, pv) in row.iter_mut().zip(pr.iter()) {
                    *rv -= f * pv;
                }
            }
        }
        let f = obj[enter];
        if f.abs() > 0.0 {
            let pr = t[leave].clone();
            for (ov, pv) in obj.iter_mut().zip(pr.iter()) {
                *ov -= f * pv;
            }
        }
        basis[leave] = enter;
    }
    let artificial_sum: f64 = (0..m)
        .filter(|&i| basis[i] >= n)
        .map(|i| t[i][width].max(0.0))
        .sum();
    artificial_sum <= 1e-7
}

/// Does `cone(gens)` meet `{x : <n_j, x> <= 0 for all j}` in a nonzero
/// point? Decided exactly by linear programming over coefficients
/// `lambda >= 0` with `sum lambda = 1`; assumes the generated cone is
/// pointed so that the normalized combination cannot collapse to zero.
pub(crate) fn nontrivial_intersection(gens: &[Vec<f64>], normals: &[Vec<f64>]) -> bool {
    let k = gens.len();
    if k == 0 {
        return false;
    }
    let j = normals.len();
    // Variables: lambda (k) and slacks (j).
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(1 + j);
    let mut row0 = vec![0.0; k + j];
    for v in row0.iter_mut().take(k) {
        *v = 1.0;
    }
    rows.push(row0);
    for (jj, normal) in normals.iter().enumerate() {
        let mut row = vec![0.0; k + j];
        for (i, g) in gens.iter().enumerate() {
            row[i] = dot(normal, g);
        }
        row[k + jj] = 1.0;
        rows.push(row);
    }
    let mut rhs = vec![0.0; 1 + j];
    rhs[0] = 1.0;
    phase_one_feasible(&rows, &rhs)
}

/// Exact vanishing test for the smallest restricted singular value of
/// polyhedral instances: `sres(A; C, D) = 0` if and only if `C` meets the
/// polar of `A^T D` in a nonzero point. Requires both cones to have
/// explicit generators (orthants, conic hulls, subspaces) and `C` pointed
/// or subspace-like.
pub fn polyhedral_sres_vanishes(a: &Mat, c: &Cone, d: &Cone) -> Result<bool, RestrictedError> {
    check_dims(a, c, d)?;
    if c.is_zero() || d.is_zero() {
        return Err(RestrictedError::ZeroCone);
    }
    let gens_c = v_form(c).ok_or_else(|| {
        RestrictedError::Unsupported("vanishing test needs explicit generators for C".into())
    })?;
    let gens_d = v_form(d).ok_or_else(|| {
        RestrictedError::Unsupported("vanishing test needs explicit generators for D".into())
    })?;
    let normals: Vec<Vec<f64>> = gens_d.iter().map(|g| a.tr_matvec(g)).collect();
    Ok(nontrivial_intersection(&gens_c, &normals))
}

/// Orthonormal bases for the spans of all nonempty generator subsets.
fn all_face_bases(gens: &[Vec<f64>]) -> Vec<Mat> {
    let k = gens.len();
    let ambient = gens[0].len();
    let mut bases = Vec::with_capacity((1usize << k) - 1);
    for mask in 1u32..(1u32 << k) {
        let subset: Vec<Vec<f64>> = (0..k)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| gens[i].clone())
            .collect();
        let cols = orthonormal_basis(&subset, 1e-12);
        if cols.is_empty() {
            continue;
        }
        bases.push(Mat::from_fn(ambient, cols.len(), |i, j| cols[j][i]));
    }
    bases
}

/// Exact extremum for polyhedral cone pairs by face enumeration. Every
/// extremal point lies, together with its witness direction, in the span of
/// a face pair, where it is a singular vector of the compressed matrix; all
/// such candidates are enumerated, filtered by cone membership, and scored
/// with the true objective.
fn oracle_faces(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    gens_c: &[Vec<f64>],
    gens_d: &[Vec<f64>],
    kind: RestrictedKind,
) -> Result<f64, RestrictedError> {
    if kind == RestrictedKind::Sv {
        let normals: Vec<Vec<f64>> = gens_d.iter().map(|g| a.tr_matvec(g)).collect();
        if nontrivial_intersection(gens_c, &normals) {
            return Ok(0.0);
        }
    }
    let bases_c = all_face_bases(gens_c);
    let bases_d = all_face_bases(gens_d);
    let mut best: Option<f64> = None;
    let mut consider = |x: &[f64]| -> Result<(), RestrictedError> {
        if !c.member(x, 1e-9)? {
            return Ok(());
        }
        let val = objective(a, d, x)?;
        best = Some(match best {
            None => val,
            Some(b) => match kind {
                RestrictedKind::Norm => b.max(val),
                RestrictedKind::Sv => b.min(val),
            },
        });
        Ok(())
    };
    for g in gens_c {
        consider(g)?;
    }
    for bf in &bases_c {
        for bg in &bases_d {
            let compressed = bg.transpose().matmul(a).matmul(bf);
            let (_vals, _u, v) = svd(&compressed);
            for jj in 0..v.cols() {
                let candidate = bf.matvec(&v.col(jj));
                consider(&candidate)?;
                consider(&scale_vec(&candidate, -1.0))?;
            }
        }
    }
    best.ok_or_else(|| RestrictedError::Unsupported("no feasible candidate found".into()))
}

/// Deterministic covering point set on the unit sphere of `R^m`.
fn sphere_points(m: usize, budget: usize) -> Vec<Vec<f64>> {
    match m {
        0 => Vec::new(),
        1 => vec![vec![1.0], vec![-1.0]],
        2 => {
            let n = budget.max(16);
            (0..n)
                .map(|i| {
                    let theta = std::f64::consts::TAU * (i as f64 + 0.5) / n as f64;
                    vec![theta.cos(), theta.sin()]
                })
                .collect()
        }
        3 => {
            // Fibonacci sphere: near-uniform spacing ~ sqrt(4 pi / n).
            let n = budget.max(64);
            let golden = (1.0 + 5.0f64.sqrt()) / 2.0;
            (0..n)
                .map(|i| {
                    let z = 1.0 - 2.0 * (i as f64 + 0.5) / n as f64;
                    let r = (1.0 - z * z).max(0.0).sqrt();
                    let phi = std::f64::consts::TAU * (i as f64 / golden).fract();
                    vec![r * phi.cos(), r * phi.sin(), z]
                })
                .collect()
        }
        4 => {
            // Product grid in hyperspherical angles; spacing ~ pi / k.
            let k = (((budget.max(128) as f64) / 2.0).cbrt().round() as usize).max(6);
            let mut pts = Vec::with_capacity(2 * k * k * k);
            for i1 in 0..k {
                let t1 = std::f64::consts::PI * (i1 as f64 + 0.5) / k as f64;
                for i2 in 0..k {
                    let t2 = std::f64::consts::PI * (i2 as f64 + 0.5) / k as f64;
                    for i3 in 0..2 * k {
                        let t3 = std::f64::consts::TAU * (i3 as f64 + 0.5) / (2 * k) as f64;
                        pts.push(vec![
                            t1.cos(),
                            t1.sin() * t2.cos(),
                            t1.sin() * t2.sin() * t3.cos(),
                            t1.sin() * t2.sin() * t3.sin(),
                        ]);
                    }
                }
            }
            pts
        }
        _ => Vec::new(),
    }
}

/// Orthonormal basis of the tangent space of the sphere at unit vector `x`.
fn tangent_basis(x: &[f64]) -> Vec<Vec<f64>> {
    let m = x.len();
    let mut seed = Vec::with_capacity(m + 1);
    seed.push(x.to_vec());
    for j in 0..m {
        let mut e = vec![0.0; m];
        e[j] = 1.0;
        seed.push(e);
    }
    let full = orthonormal_basis(&seed, 1e-12);
    full.into_iter().skip(1).collect()
}

/// Compass-search polish on `C cap S`: poll signed tangent steps, halving
/// the radius whenever no poll direction improves.
fn polish(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    kind: RestrictedKind,
    mut x: Vec<f64>,
    mut fx: f64,
    h0: f64,
    budget: usize,
) -> Result<(f64, Vec<f64>), RestrictedError> {
    let improves = |new: f64, cur: f64| match kind {
        RestrictedKind::Norm => new > cur,
        RestrictedKind::Sv => new < cur,
    };
    let mut h = h0;
    let mut evals = 0usize;
    while h > 1e-9 && evals < budget {
        let tang = tangent_basis(&x);
        let mut moved = false;
        'poll: for t in &tang {
            for sign in [1.0, -1.0] {
                let mut trial = x.clone();
                for i in 0..trial.len() {
                    trial[i] += sign * h * t[i];
                }
                let proj = c.project(&trial)?;
                let pn = norm2(&proj);
                evals += 1;
                if pn <= 1e-12 {
                    continue;
                }
                let xt = scale_vec(&proj, 1.0 / pn);
                let ft = objective(a, d, &xt)?;
                if improves(ft, fx) {
                    x = xt;
                    fx = ft;
                    moved = true;
                    break 'poll;
                }
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    Ok((fx, x))
}

/// Dense sphere-grid oracle: project a covering point set into `C`, score
/// every surviving stub, then pattern-search the best few candidates.
fn oracle_sphere_grid(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    kind: RestrictedKind,
    grid: usize,
) -> Result<f64, RestrictedError> {
    let m = c.ambient();
    let mut raw = sphere_points(m, grid.max(1));
    for j in 0..m {
        for sign in [1.0, -1.0] {
            let mut e = vec![0.0; m];
            e[j] = sign;
            raw.push(e);
        }
    }
    let mut scored: Vec<(f64, Vec<f64>)> = Vec::new();
    for p in &raw {
        let proj = c.project(p)?;
        let pn = norm2(&proj);
        if pn <= 1e-12 {
            continue;
        }
        let x = scale_vec(&proj, 1.0 / pn);
        let val = objective(a, d, &x)?;
        scored.push((val, x));
    }
    if scored.is_empty() {
        return Err(RestrictedError::Unsupported(
            "no grid direction lands in the cone".into(),
        ));
    }
    match kind {
        RestrictedKind::Norm => scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap()),
        RestrictedKind::Sv => scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap()),
    }
    // Keep a handful of well-separated leaders for local polish.
    let mut leaders: Vec<(f64, Vec<f64>)> = Vec::new();
    for (val, x) in &scored {
        if leaders.len() >= 8 {
            break;
        }
        if leaders.iter().all(|(_, l)| dot(l, x) < 0.995) || leaders.is_empty() {
            leaders.push((*val, x.clone()));
        }
    }
    let h0 = match m {
        1 => 0.5,
        2 => std::f64::consts::TAU / raw.len() as f64 * 4.0,
        3 => (4.0 * std::f64::consts::PI / raw.len() as f64).sqrt() * 2.0,
        _ => 0.3,
    };
    let mut best = scored[0].0;
    for (val, x) in leaders {
        let (polished, _) = polish(a, c, d, kind, x, val, h0, 4000)?;
        best = match kind {
            RestrictedKind::Norm => best.max(polished),
            RestrictedKind::Sv => best.min(polished),
        };
    }
    Ok(best)
}

/// Independent brute-force evaluation of a restricted extremum, for checking
/// the iterative solvers.
///
/// Polyhedral pairs (orthants, conic hulls, subspaces) with at most 12
/// generators per side are solved exactly by face enumeration plus an LP
/// vanishing test. Everything else falls back to a dense projected sphere
/// grid with local polish, available for ambient dimension at most 4; `grid`
/// sets the number of initial directions.
pub fn oracle_restricted(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    kind: RestrictedKind,
    grid: usize,
) -> Result<f64, RestrictedError> {
    check_dims(a, c, d)?;
    if c.is_zero() || d.is_zero() {
        return Err(RestrictedError::ZeroCone);
    }
    if let (Some(gc), Some(gd)) = (v_form(c), v_form(d)) {
        if gc.len() <= MAX_ORACLE_GENERATORS && gd.len() <= MAX_ORACLE_GENERATORS {
            return oracle_faces(a, c, d, &gc, &gd, kind);
        }
    }
    if c.ambient() > MAX_ORACLE_AMBIENT {
        return Err(RestrictedError::Unsupported(format!(
            "sphere-grid oracle supports ambient dimension <= {}, got {}",
            MAX_ORACLE_AMBIENT,
            c.ambient()
        )));
    }
    oracle_sphere_grid(a, c, d, kind, grid)
}
