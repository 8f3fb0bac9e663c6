//! Biconic feasibility classification and condition numbers.
//!
//! A matrix `A` and a cone pair `(C, D)` define two existence problems: the
//! primal one asks for a nonzero `x ∈ C` with `Ax ∈ D°`, the dual one for a
//! nonzero `y ∈ D` with `-Aᵀy ∈ C°`. The restricted singular value of `A`
//! measures the distance from the set of primal-feasible matrices, and the
//! restricted singular value of `-Aᵀ` with the cones swapped measures the
//! distance from the dual-feasible set. Unless both cones are the full
//! space, every matrix lies in at least one of the two sets, so the smaller
//! distance vanishes and the instance can be classified by comparing both
//! distances against a tolerance. The ratio of `‖A‖` to the larger distance
//! is a Renegar-style condition number: it is at least one, and it blows up
//! exactly on the ill-posed set where both problems are feasible.
//!
//! The module also evaluates the exact kinematic vanishing probability
//! `P{σ_{C→D}(G) = 0}` for a Gaussian matrix `G` from the intrinsic-volume
//! profiles of the two cones, and constructs an explicit rank-one
//! perturbation that moves an infeasible instance onto the primal-feasible
//! set.

use std::fmt;

use crate::cones::Cone;
use crate::geometry::IntrinsicVolumeProfile;
use crate::numerics::{operator_norm, Mat};
use crate::restricted::{restricted_sv, RestrictedError, SolverConfig};
use thiserror::Error;

/// Relative feasibility tolerance: distances below `FEASIBILITY_REL_TOL`
/// times the operator norm of the instance count as zero.
pub const FEASIBILITY_REL_TOL: f64 = 1e-6;

/// Condition numbers above this cap are reported as infinite; beyond it the
/// ratio is dominated by solver noise rather than by the instance.
pub const RENEGAR_CAP: f64 = 1e12;

/// Errors from the feasibility layer.
#[derive(Debug, Error)]
pub enum FeasibilityError {
    /// The zero matrix has no well-defined condition number and admits no
    /// scaled tolerance.
    #[error("the zero matrix cannot be classified")]
    ZeroMatrix,
    /// A perturbation to the primal-feasible set was requested for an
    /// instance that is already primal feasible.
    #[error("instance is already primal feasible within tolerance {tol:.3e}")]
    AlreadyPrimalFeasible {
        /// Tolerance used for the pre-check.
        tol: f64,
    },
    /// The kinematic vanishing formula needs at least one cone that is not
    /// a linear subspace; for a subspace pair the probability degenerates
    /// to a rank event, not an intersection event.
    #[error("kinematic vanishing probability needs a cone that is not a subspace")]
    SubspacePair,
    /// An intrinsic-volume profile does not live in the stated ambient
    /// dimension.
    #[error("profile ambient dimension {got} does not match expected {expected}")]
    AmbientMismatch {
        /// Expected ambient dimension.
        expected: usize,
        /// Ambient dimension carried by the profile.
        got: usize,
    },
    /// Failure in the underlying restricted-extremum solver.
    #[error(transparent)]
    Restricted(#[from] RestrictedError),
}

/// Outcome of comparing the two feasibility distances to the tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeasibilityStatus {
    /// Only the primal distance vanishes: some nonzero `x ∈ C` has
    /// `Ax ∈ D°`.
    PrimalFeasible,
    /// Only the dual distance vanishes: some nonzero `y ∈ D` has
    /// `-Aᵀy ∈ C°`.
    DualFeasible,
    /// Both distances vanish: the instance sits on (or near) the ill-posed
    /// set where primal and dual problems are simultaneously feasible.
    NearIllPosed,
    /// Neither distance vanishes. For every cone pair other than
    /// full/full the smaller distance is zero in exact arithmetic, so this
    /// state signals either a genuine full/full instance (where both
    /// distances equal the smallest singular value) or a solver failure.
    NeitherFeasible,
}

impl fmt::Display for FeasibilityStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            FeasibilityStatus::PrimalFeasible => "primal_feasible",
            FeasibilityStatus::DualFeasible => "dual_feasible",
            FeasibilityStatus::NearIllPosed => "near_ill_posed",
            FeasibilityStatus::NeitherFeasible => "neither_feasible",
        };
        f.write_str(name)
    }
}

/// Classification result for one `(A, C, D)` instance.
#[derive(Clone, Debug)]
pub struct FeasibilityReport {
    /// Distance to the primal-feasible set: `σ_{C→D}(A)`.
    pub dist_primal: f64,
    /// Distance to the dual-feasible set: `σ_{D→C}(-Aᵀ)`.
    pub dist_dual: f64,
    /// Status from comparing both distances to [`FeasibilityReport::tol`].
    pub status: FeasibilityStatus,
    /// Condition number `‖A‖ / max(dist_primal, dist_dual)`, clamped to
    /// `[1, ∞]` and reported as infinity above [`RENEGAR_CAP`].
    pub renegar: f64,
    /// Operator norm of the instance.
    pub norm_a: f64,
    /// Witness `x ∈ C ∩ S^{m-1}` with `Ax` near `D°`, present when the
    /// primal distance is within tolerance.
    pub primal_certificate: Option<Vec<f64>>,
    /// Witness `y ∈ D ∩ S^{n-1}` with `-Aᵀy` near `C°`, present when the
    /// dual distance is within tolerance.
    pub dual_certificate: Option<Vec<f64>>,
    /// Absolute tolerance used for the comparison.
    pub tol: f64,
}

fn fmt_sci(v: f64) -> String {
    if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v:.8e}")
    }
}

impl FeasibilityReport {
    /// Serializes the report as flat `key=value` lines in a stable order.
    ///
    /// Scalar values use scientific notation with nine significant digits;
    /// certificate vectors are space-separated in the same format and are
    /// emitted only when present.
    pub fn to_key_values(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("status={}\n", self.status));
        out.push_str(&format!("dist_primal={}\n", fmt_sci(self.dist_primal)));
        out.push_str(&format!("dist_dual={}\n", fmt_sci(self.dist_dual)));
        out.push_str(&format!("renegar={}\n", fmt_sci(self.renegar)));
        out.push_str(&format!("norm_a={}\n", fmt_sci(self.norm_a)));
        out.push_str(&format!("tol={}\n", fmt_sci(self.tol)));
        if let Some(x) = &self.primal_certificate {
            let joined: Vec<String> = x.iter().map(|v| fmt_sci(*v)).collect();
            out.push_str(&format!("primal_certificate={}\n", joined.join(" ")));
        }
        if let Some(y) = &self.dual_certificate {
            let joined: Vec<String> = y.iter().map(|v| fmt_sci(*v)).collect();
            out.push_str(&format!("dual_certificate={}\n", joined.join(" ")));
        }
        out
    }
}

fn renegar_from(norm_a: f64, dist_primal: f64, dist_dual: f64) -> f64 {
    let denom = dist_primal.max(dist_dual);
    if denom <= 0.0 {
        return f64::INFINITY;
    }
    let ratio = (norm_a / denom).max(1.0);
    if ratio > RENEGAR_CAP {
        f64::INFINITY
    } else {
        ratio
    }
}

/// Classifies the biconic instance `(A, C, D)` with the default tolerance
/// `1e-6 · ‖A‖`.
///
/// Both feasibility distances come from the restricted-singular-value
/// solver: the primal distance directly, the dual distance from the swapped
/// instance `(-Aᵀ, D, C)`. The dichotomy (for any pair other than
/// full/full the smaller distance is zero) means the status is almost
/// always `PrimalFeasible`, `DualFeasible`, or `NearIllPosed`; see
/// [`FeasibilityStatus::NeitherFeasible`] for the exception.
///
/// Errors on the zero matrix, whose condition number is undefined.
pub fn classify(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    cfg: &SolverConfig,
) -> Result<FeasibilityReport, FeasibilityError> {
    let norm_a = operator_norm(a);
    if norm_a <= 0.0 {
        return Err(FeasibilityError::ZeroMatrix);
    }
    classify_with_tol(a, c, d, cfg, FEASIBILITY_REL_TOL * norm_a)
}

/// Classifies `(A, C, D)` against an explicit absolute tolerance.
pub fn classify_with_tol(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    cfg: &SolverConfig,
    tol: f64,
) -> Result<FeasibilityReport, FeasibilityError> {
    let norm_a = operator_norm(a);
    if norm_a <= 0.0 {
        return Err(FeasibilityError::ZeroMatrix);
    }
    let primal = restricted_sv(a, c, d, cfg)?;
    let swapped = a.transpose().scaled(-1.0);
    let dual = restricted_sv(&swapped, d, c, cfg)?;
    let dist_primal = primal.value;
    let dist_dual = dual.value;
    let status = if dist_primal <= tol && dist_dual <= tol {
        FeasibilityStatus::NearIllPosed
    } else if dist_primal <= tol {
        FeasibilityStatus::PrimalFeasible
    } else if dist_dual <= tol {
        FeasibilityStatus::DualFeasible
    } else {
        FeasibilityStatus::NeitherFeasible
    };
    let primal_certificate = if dist_primal <= tol {
        Some(primal.x_cert)
    } else {
        None
    };
    let dual_certificate = if dist_dual <= tol {
        Some(dual.x_cert)
    } else {
        None
    };
    Ok(FeasibilityReport {
        dist_primal,
        dist_dual,
        status,
        renegar: renegar_from(norm_a, dist_primal, dist_dual),
        norm_a,
        primal_certificate,
        dual_certificate,
        tol,
    })
}

/// Renegar-style condition number `‖A‖ / max(dist_primal, dist_dual)`.
///
/// The value is at least one, equals the classical spectral condition
/// number when both cones are the full space and `A` is square, and is
/// reported as infinity beyond [`RENEGAR_CAP`] (in particular on the
/// ill-posed set itself, where both distances vanish). Errors on the zero
/// matrix.
pub fn renegar(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    cfg: &SolverConfig,
) -> Result<f64, FeasibilityError> {
    Ok(classify(a, c, d, cfg)?.renegar)
}

/// Rank-one perturbation moving an infeasible instance onto the
/// primal-feasible set.
///
/// Writing `x₀` for the minimizer of `‖Proj_D(Ax)‖` over `C ∩ S^{m-1}` and
/// `y₀ = Proj_D(Ax₀)/‖Proj_D(Ax₀)‖`, the perturbation is `ΔA = -y₀y₀ᵀA`.
/// The Moreau decomposition gives `(A+ΔA)x₀ = Ax₀ - Proj_D(Ax₀) ∈ D°`, so
/// `A+ΔA` is primal feasible exactly, for every cone pair. The norm
/// guarantee `‖ΔA‖ ≤ dist_primal + tol` additionally requires the
/// minimizer to be a stationary point in the interior of `C`'s sphere
/// patch (automatic when `C` is the full space or a half-line, and checked
/// per instance otherwise): there `Aᵀy₀` is parallel to `x₀`, so the
/// rank-one factor has norm exactly `dist_primal`.
///
/// Errors when the instance is already primal feasible within
/// `1e-6 · ‖A‖`.
pub fn perturbation_to_primal(
    a: &Mat,
    c: &Cone,
    d: &Cone,
    cfg: &SolverConfig,
) -> Result<Mat, FeasibilityError> {
    let norm_a = operator_norm(a);
    if norm_a <= 0.0 {
        return Err(FeasibilityError::ZeroMatrix);
    }
    let tol = FEASIBILITY_REL_TOL * norm_a;
    let primal = restricted_sv(a, c, d, cfg)?;
    if primal.value <= tol {
        return Err(FeasibilityError::AlreadyPrimalFeasible { tol });
    }
    let y0 = &primal.y_cert;
    let w = a.tr_matvec(y0);
    Ok(Mat::outer(y0, &w).scaled(-1.0))
}

fn is_subspace_profile(p: &IntrinsicVolumeProfile) -> bool {
    // Subspaces are the only cones whose intrinsic-volume distribution is a
    // point mass.
    p.values().iter().any(|v| (*v - 1.0).abs() <= 1e-12)
}

/// Exact probability that the restricted singular value of a Gaussian
/// matrix vanishes, from the two intrinsic-volume profiles.
///
/// For an `n × m` matrix `G` with independent standard Gaussian entries,
/// `C ⊂ ℝ^m`, and `D ⊂ ℝ^n`,
///
/// ```text
/// P{σ_{C→D}(G) = 0} = 2 · Σ_{k odd} Σ_{ℓ=0}^{min(m-k, n)} v_{k+ℓ}(C) · v_ℓ(D),
/// ```
///
/// with empty sums equal to zero. The identity requires at least one of
/// the two cones to not be a linear subspace; a subspace pair is rejected.
/// `m` and `n` are checked against the profiles' ambient dimensions.
pub fn kinematic_vanishing_prob(
    profile_c: &IntrinsicVolumeProfile,
    profile_d: &IntrinsicVolumeProfile,
    m: usize,
    n: usize,
) -> Result<f64, FeasibilityError> {
    if profile_c.ambient() != m {
        return Err(FeasibilityError::AmbientMismatch {
            expected: m,
            got: profile_c.ambient(),
        });
    }
    if profile_d.ambient() != n {
        return Err(FeasibilityError::AmbientMismatch {
            expected: n,
            got: profile_d.ambient(),
        });
    }
    if is_subspace_profile(profile_c) && is_subspace_profile(profile_d) {
        return Err(FeasibilityError::SubspacePair);
    }
    let vc = profile_c.values();
    let vd = profile_d.values();
    let mut total = 0.0;
    let mut k = 1;
    while k <= m {
        let top = (m - k).min(n);
        for l in 0..=top {
            total += vc[k + l] * vd[l];
        }
        k += 2;
    }
    Ok((2.0 * total).clamp(0.0, 1.0))
}
