//! Conic intrinsic volumes, statistical dimension, Gaussian width, moment
//! functionals, and Steiner-formula machinery.
//!
//! The intrinsic volume profile of a closed convex cone `C` in `R^m` is the
//! discrete probability distribution `v_0(C), ..., v_m(C)` given by
//! `v_k(C) = P{ Proj_C(g) lies in the relative interior of a k-dimensional
//! face }` for a standard Gaussian `g`. Profiles are exact for subspaces,
//! orthants, circular cones, products, and polars of these, and estimated by
//! Monte Carlo face-dimension sampling for general polyhedral cones.
//!
//! From the profile flow the derived quantities: the statistical dimension
//! (mean of the profile), the squared Gaussian width, radial moments
//! `nu_r(C) = E ||Proj_C(g)||^r`, moment functionals of cone stubs
//! `C cap B^m`, Euclidean intrinsic volumes of stubs, and the circular-cone
//! quotient curves relating a cone to its image under an axis-preserving
//! scaling.

use crate::cones::{Cone, ConeError};
use crate::numerics::{
    adaptive_simpson, chi_cdf, chi_moment, chi_pdf, chi_tail_cut, dot, gauss_vector, ln_gamma,
    norm2, orthonormal_basis, vec_sub, Mat, NumericsError, QuadratureConfig, SeededSampler,
};
use rayon::prelude::*;
use std::sync::Arc;

/// Fixed seed for the Monte Carlo fallbacks inside [`profile`] and [`sdim`],
/// so those paths stay deterministic.
const GEOMETRY_MC_SEED: u64 = 0x1bd3_47a0_9c5e_6f82;

/// Sample budget for the internal Monte Carlo fallbacks.
const GEOMETRY_MC_TRIALS: usize = 200_000;

/// Errors from profile construction and moment evaluation.
#[derive(Debug, thiserror::Error)]
pub enum GeometryError {
    #[error("unsupported cone for this operation: {0}")]
    Unsupported(String),
    #[error("invalid intrinsic volume profile: {0}")]
    InvalidProfile(String),
    #[error("could not parse profile text: {0}")]
    Parse(String),
    #[error(transparent)]
    Cone(#[from] ConeError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Discrete distribution of conic intrinsic volumes `v_0 .. v_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct IntrinsicVolumeProfile {
    ambient: usize,
    v: Vec<f64>,
}

impl IntrinsicVolumeProfile {
    /// Validate and build a profile: length `ambient + 1`, entries at least
    /// `-1e-12` (tiny negatives are clamped to zero), total mass 1 within
    /// `1e-9`.
    pub fn new(ambient: usize, v: Vec<f64>) -> Result<Self, GeometryError> {
        if v.len() != ambient + 1 {
            return Err(GeometryError::InvalidProfile(format!(
                "expected {} entries, got {}",
                ambient + 1,
                v.len()
            )));
        }
        let mut clamped = v;
        for x in clamped.iter_mut() {
            if *x < -1e-12 {
                return Err(GeometryError::InvalidProfile(format!(
                    "negative intrinsic volume {x}"
                )));
            }
            if *x < 0.0 {
                *x = 0.0;
            }
        }
        let total: f64 = clamped.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(GeometryError::InvalidProfile(format!(
                "profile mass {total} is not 1"
            )));
        }
        Ok(IntrinsicVolumeProfile {
            ambient,
            v: clamped,
        })
    }

    /// Profile of a `dim`-dimensional subspace of `R^ambient`: an indicator.
    pub fn indicator(ambient: usize, dim: usize) -> Self {
        assert!(dim <= ambient, "subspace dimension exceeds ambient");
        let mut v = vec![0.0; ambient + 1];
        v[dim] = 1.0;
        IntrinsicVolumeProfile { ambient, v }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn values(&self) -> &[f64] {
        &self.v
    }

    /// Statistical dimension: the mean `sum_k k v_k`.
    pub fn sdim(&self) -> f64 {
        self.v
            .iter()
            .enumerate()
            .map(|(k, vk)| k as f64 * vk)
            .sum()
    }

    /// Squared Gaussian width `(sum_k E[chi_k] v_k)^2`.
    pub fn gwidth_sq(&self) -> f64 {
        let mean: f64 = self
            .v
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, vk)| chi_moment(k, 1.0) * vk)
            .sum();
        mean * mean
    }

    /// Radial moment `nu_r = E ||Proj_C(g)||^r = sum_j v_j E[chi_j^r]`,
    /// where the `j = 0` term contributes `0^r` (so 1 when `r = 0`).
    pub fn nu_r(&self, r: f64) -> f64 {
        assert!(r >= 0.0, "moment order must be nonnegative");
        let zero_term = if r == 0.0 { self.v[0] } else { 0.0 };
        zero_term
            + self
                .v
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, vj)| vj * chi_moment(j, r))
                .sum::<f64>()
    }

    /// Index-reversed profile, the profile of the polar cone.
    pub fn reversed(&self) -> Self {
        let mut v = self.v.clone();
        v.reverse();
        IntrinsicVolumeProfile {
            ambient: self.ambient,
            v,
        }
    }

    /// Profile of a product cone: ambient dimensions add and the
    /// distributions convolve.
    pub fn convolve(&self, other: &Self) -> Self {
        let ambient = self.ambient + other.ambient;
        let mut v = vec![0.0; ambient + 1];
        for (i, a) in self.v.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            for (j, b) in other.v.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        IntrinsicVolumeProfile { ambient, v }
    }

    /// Text form: a `# m` header then one `v_k` per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# {}\n", self.ambient);
        for vk in &self.v {
            out.push_str(&format!("{:.17e}\n", vk));
        }
        out
    }

    /// Parse the text form produced by [`IntrinsicVolumeProfile::to_text`].
    pub fn from_text(text: &str) -> Result<Self, GeometryError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| GeometryError::Parse("empty profile text".into()))?;
        let ambient: usize = header
            .trim()
            .strip_prefix('#')
            .ok_or_else(|| GeometryError::Parse("missing # header".into()))?
            .trim()
            .parse()
            .map_err(|e| GeometryError::Parse(format!("bad ambient dimension: {e}")))?;
        let mut v = Vec::with_capacity(ambient + 1);
        for line in lines {
            let x: f64 = line
                .trim()
                .parse()
                .map_err(|e| GeometryError::Parse(format!("bad entry {line:?}: {e}")))?;
            v.push(x);
        }
        IntrinsicVolumeProfile::new(ambient, v)
    }
}

/// Intrinsic volume profile of a supported cone.
///
/// Exact closed forms: subspaces and full spaces (indicators), orthants
/// (binomial), circular cones (see [`circular_profile`]), products
/// (convolution), polar wrappers (index reversal), and linear images under
/// orthogonal maps (profiles are rotation invariant). Polyhedral cones in
/// either form fall back to Monte Carlo face-dimension sampling with a fixed
/// internal seed.
pub fn profile(c: &Cone) -> Result<IntrinsicVolumeProfile, GeometryError> {
    match c {
        Cone::Full(m) => Ok(IntrinsicVolumeProfile::indicator(*m, *m)),
        Cone::Subspace { ambient, basis } => {
            Ok(IntrinsicVolumeProfile::indicator(*ambient, basis.len()))
        }
        Cone::Orthant(m) => {
            let mut v = vec![0.0; m + 1];
            // C(m, k) / 2^m by the multiplicative recurrence.
            let mut coeff = 0.5f64.powi(*m as i32);
            for k in 0..=*m {
                v[k] = coeff;
                coeff *= (*m - k) as f64 / (k + 1) as f64;
            }
            IntrinsicVolumeProfile::new(*m, v)
        }
        Cone::Circular { ambient, slope } => circular_profile(*ambient, *slope),
        Cone::Product(factors) => {
            let mut acc = IntrinsicVolumeProfile::indicator(0, 0);
            for f in factors {
                acc = acc.convolve(&profile(f)?);
            }
            Ok(acc)
        }
        Cone::Polar(inner) => Ok(profile(inner)?.reversed()),
        Cone::PolyhedralV { .. } | Cone::PolyhedralH { .. } => {
            mc_face_profile(c, GEOMETRY_MC_TRIALS, GEOMETRY_MC_SEED)
        }
        Cone::LinearImage { map, inner } => {
            if is_orthogonal(map) {
                profile(inner)
            } else {
                Err(GeometryError::Unsupported(format!(
                    "profile of a non-orthogonal linear image of {inner}"
                )))
            }
        }
    }
}

fn is_orthogonal(map: &Mat) -> bool {
    if map.rows() != map.cols() {
        return false;
    }
    let m = map.cols();
    for i in 0..m {
        for j in i..m {
            let target = if i == j { 1.0 } else { 0.0 };
            if (dot(&map.col(i), &map.col(j)) - target).abs() > 1e-10 {
                return false;
            }
        }
    }
    true
}

/// Closed-form circular-cone profile for half-aperture `alpha = atan(slope)`:
///
/// * for `1 <= j <= m-1`,
///   `v_j = Gamma(m/2) / (2 Gamma((j+1)/2) Gamma((m-j+1)/2))
///          * sin(alpha)^(j-1) * cos(alpha)^(m-j-1)`;
/// * `v_m = Gamma(m/2) / (sqrt(pi) Gamma((m-1)/2))
///          * integral_0^t tau^(m-2) / (1+tau^2)^(m/2) dtau`;
/// * `v_0` by complement, which enforces exact normalization.
///
/// The radial integral's exponent is `m/2`: this is the unique choice under
/// which the profile sums to one and the slope-1 cone has statistical
/// dimension `m/2`, both of which are verified by tests and Monte Carlo.
pub fn circular_profile(m: usize, slope: f64) -> Result<IntrinsicVolumeProfile, GeometryError> {
    if m < 2 {
        return Err(GeometryError::Unsupported(
            "circular profile needs ambient dimension >= 2".into(),
        ));
    }
    if !(slope > 0.0) || !slope.is_finite() {
        return Err(GeometryError::Unsupported(
            "circular profile needs a positive finite slope".into(),
        ));
    }
    let alpha = slope.atan();
    let ln_sin = alpha.sin().ln();
    let ln_cos = alpha.cos().ln();
    let lg = |x: f64| ln_gamma(x);
    let mut v = vec![0.0; m + 1];
    for j in 1..m {
        let mut log_term = lg(m as f64 / 2.0)
            - std::f64::consts::LN_2
            - lg((j as f64 + 1.0) / 2.0)
            - lg((m - j) as f64 / 2.0 + 0.5);
        if j > 1 {
            log_term += (j - 1) as f64 * ln_sin;
        }
        if m - j > 1 {
            log_term += (m - j - 1) as f64 * ln_cos;
        }
        v[j] = log_term.exp();
    }
    let prefactor =
        (lg(m as f64 / 2.0) - 0.5 * std::f64::consts::PI.ln() - lg((m as f64 - 1.0) / 2.0)).exp();
    let mexp = m as f64;
    let integrand = move |tau: f64| -> f64 {
        if tau <= 0.0 {
            return if m == 2 { 1.0 } else { 0.0 };
        }
        ((mexp - 2.0) * tau.ln() - 0.5 * mexp * tau.mul_add(tau, 1.0).ln()).exp()
    };
    let cfg = QuadratureConfig::default();
    let (integral, _) = adaptive_simpson(&integrand, 0.0, slope, &cfg)?;
    v[m] = prefactor * integral;
    let mass: f64 = v[1..].iter().sum();
    v[0] = (1.0 - mass).max(0.0);
    IntrinsicVolumeProfile::new(m, v)
}

/// Dimension of the face of `C` whose relative interior contains the
/// projection of `g`. Tightness is decided at tolerance `1e-8` on inner
/// products with unit generators or normals.
fn face_dimension(c: &Cone, g: &[f64]) -> Result<usize, GeometryError> {
    let p = c.project(g)?;
    match c {
        Cone::PolyhedralV { generators, .. } => {
            let residual = vec_sub(g, &p);
            let tol = 1e-8 * (1.0 + norm2(&residual));
            let tight: Vec<Vec<f64>> = generators
                .iter()
                .filter(|gen| dot(gen, &residual).abs() <= tol)
                .cloned()
                .collect();
            Ok(orthonormal_basis(&tight, 1e-10).len())
        }
        Cone::PolyhedralH { ambient, normals } => {
            let tol = 1e-8 * (1.0 + norm2(&p));
            let active: Vec<Vec<f64>> = normals
                .iter()
                .filter(|n| dot(n, &p).abs() <= tol)
                .cloned()
                .collect();
            Ok(ambient - orthonormal_basis(&active, 1e-10).len())
        }
        _ => Err(GeometryError::Unsupported(format!(
            "face-dimension sampling needs a polyhedral cone, got {c}"
        ))),
    }
}

/// Monte Carlo estimate of a polyhedral cone's intrinsic volume profile by
/// face-dimension sampling: each Gaussian sample contributes to the bin of
/// the face its projection lands in. Deterministic for a fixed seed
/// regardless of the number of threads.
pub fn mc_face_profile(
    c: &Cone,
    trials: usize,
    seed: u64,
) -> Result<IntrinsicVolumeProfile, GeometryError> {
    assert!(trials > 0, "trials must be positive");
    let m = c.ambient();
    let target = match c {
        Cone::Orthant(m) => {
            // Route orthants through the explicit generator form so the
            // estimator exercises the same code path as other cones.
            let gens = (0..*m)
                .map(|j| {
                    let mut e = vec![0.0; *m];
                    e[j] = 1.0;
                    e
                })
                .collect();
            Cone::polyhedral_v(*m, gens)?
        }
        Cone::PolyhedralV { .. } | Cone::PolyhedralH { .. } => c.clone(),
        _ => {
            return Err(GeometryError::Unsupported(format!(
                "face-dimension sampling needs a polyhedral cone, got {c}"
            )))
        }
    };
    let dims: Vec<Result<usize, GeometryError>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut sampler = SeededSampler::new(seed, t as u64);
            let g = gauss_vector(&mut sampler, m);
            face_dimension(&target, &g)
        })
        .collect();
    let mut counts = vec![0usize; m + 1];
    for d in dims {
        let d = d?;
        counts[d.min(m)] += 1;
    }
    let v: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / trials as f64)
        .collect();
    IntrinsicVolumeProfile::new(m, v)
}

/// Statistical dimension `sum_k k v_k(C) = E ||Proj_C(g)||^2`. Uses the
/// profile when available and falls back to a deterministic Monte Carlo
/// estimate of the squared projection norm otherwise.
pub fn sdim(c: &Cone) -> Result<f64, GeometryError> {
    match profile(c) {
        Ok(p) => Ok(p.sdim()),
        Err(GeometryError::Unsupported(_)) => {
            let m = c.ambient();
            let sq: Vec<Result<f64, ConeError>> = (0..GEOMETRY_MC_TRIALS)
                .into_par_iter()
                .map(|t| {
                    let mut sampler = SeededSampler::new(GEOMETRY_MC_SEED, t as u64);
                    let g = gauss_vector(&mut sampler, m);
                    let p = c.project(&g)?;
                    Ok(dot(&p, &p))
                })
                .collect();
            let mut total = 0.0;
            for s in sq {
                total += s?;
            }
            Ok(total / GEOMETRY_MC_TRIALS as f64)
        }
        Err(e) => Err(e),
    }
}

/// Squared Gaussian width `(sum_k E[chi_k] v_k(C))^2`.
pub fn gwidth_sq(c: &Cone) -> Result<f64, GeometryError> {
    Ok(profile(c)?.gwidth_sq())
}

/// Radial moment `nu_r(C) = E ||Proj_C(g)||^r`.
pub fn nu_r(c: &Cone, r: f64) -> Result<f64, GeometryError> {
    Ok(profile(c)?.nu_r(r))
}

/// Scalar moment function used to weigh radial distributions.
#[derive(Clone)]
pub enum MomentKind {
    /// `f(a) = a`.
    Identity,
    /// `f(a) = a^r` for `r >= 0`.
    Power(f64),
    /// `f(a) = exp(beta a)`.
    ExpScaled(f64),
    /// `f(a) = 1` when `a >= lambda`, else 0.
    Step(f64),
    /// Arbitrary function; expectations go through quadrature.
    Custom(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A moment function together with the structural flags that decide which
/// comparison inequalities apply to it.
#[derive(Clone)]
pub struct MomentFunction {
    kind: MomentKind,
    monotone: bool,
    convex: bool,
}

impl std::fmt::Debug for MomentFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match &self.kind {
            MomentKind::Identity => "identity".to_string(),
            MomentKind::Power(r) => format!("power({r})"),
            MomentKind::ExpScaled(b) => format!("exp_scaled({b})"),
            MomentKind::Step(l) => format!("step({l})"),
            MomentKind::Custom(_) => "custom".to_string(),
        };
        f.debug_struct("MomentFunction")
            .field("kind", &name)
            .field("monotone", &self.monotone)
            .field("convex", &self.convex)
            .finish()
    }
}

impl MomentFunction {
    pub fn identity() -> Self {
        MomentFunction {
            kind: MomentKind::Identity,
            monotone: true,
            convex: true,
        }
    }

    /// `f(a) = a^r` on `a >= 0`; convex exactly when `r >= 1` (or `r = 0`).
    pub fn power(r: f64) -> Self {
        assert!(r >= 0.0 && r.is_finite(), "power order must be >= 0");
        MomentFunction {
            kind: MomentKind::Power(r),
            monotone: true,
            convex: r >= 1.0 || r == 0.0,
        }
    }

    /// `f(a) = exp(beta a)`; always convex, monotone when `beta >= 0`.
    pub fn exp_scaled(beta: f64) -> Self {
        assert!(beta.is_finite());
        MomentFunction {
            kind: MomentKind::ExpScaled(beta),
            monotone: beta >= 0.0,
            convex: true,
        }
    }

    /// Indicator of `[lambda, infinity)`: monotone but not convex.
    pub fn step(lambda: f64) -> Self {
        assert!(lambda.is_finite());
        MomentFunction {
            kind: MomentKind::Step(lambda),
            monotone: true,
            convex: false,
        }
    }

    /// Custom function with caller-asserted structure flags.
    pub fn custom(
        f: impl Fn(f64) -> f64 + Send + Sync + 'static,
        monotone: bool,
        convex: bool,
    ) -> Self {
        MomentFunction {
            kind: MomentKind::Custom(Arc::new(f)),
            monotone,
            convex,
        }
    }

    pub fn eval(&self, a: f64) -> f64 {
        match &self.kind {
            MomentKind::Identity => a,
            MomentKind::Power(r) => {
                if *r == 0.0 {
                    1.0
                } else {
                    a.max(0.0).powf(*r)
                }
            }
            MomentKind::ExpScaled(beta) => (beta * a).exp(),
            MomentKind::Step(lambda) => {
                if a >= *lambda {
                    1.0
                } else {
                    0.0
                }
            }
            MomentKind::Custom(f) => f(a),
        }
    }

    pub fn is_monotone(&self) -> bool {
        self.monotone
    }

    pub fn is_convex(&self) -> bool {
        self.convex
    }
}

/// Expected value `E f(chi_j)` of a moment function against the chi
/// distribution with `j` degrees of freedom. Exact for powers and steps;
/// adaptive quadrature otherwise.
pub fn chi_ball_moment(f: &MomentFunction, j: usize) -> Result<f64, GeometryError> {
    if j == 0 {
        return Ok(f.eval(0.0));
    }
    match &f.kind {
        MomentKind::Identity => Ok(chi_moment(j, 1.0)),
        MomentKind::Power(r) => Ok(chi_moment(j, *r)),
        MomentKind::Step(lambda) => {
            if *lambda <= 0.0 {
                Ok(1.0)
            } else {
                Ok(1.0 - chi_cdf(j, *lambda))
            }
        }
        MomentKind::ExpScaled(beta) => {
            let cut = chi_tail_cut(j) + beta.max(0.0) + 2.0;
            let integrand = move |a: f64| (beta * a).exp() * chi_pdf(j, a);
            let cfg = QuadratureConfig {
                abs_tol: 1e-10,
                ..QuadratureConfig::default()
            };
            Ok(adaptive_simpson(&integrand, 0.0, cut, &cfg)?.0)
        }
        MomentKind::Custom(func) => {
            let cut = chi_tail_cut(j);
            let func = func.clone();
            let integrand = move |a: f64| func(a) * chi_pdf(j, a);
            let cfg = QuadratureConfig {
                abs_tol: 1e-10,
                ..QuadratureConfig::default()
            };
            Ok(adaptive_simpson(&integrand, 0.0, cut, &cfg)?.0)
        }
    }
}

/// Moment functional of the cone stub `C cap B^m`: the profile-weighted sum
/// of ball moments `sum_j v_j(C) E f(chi_j)`.
pub fn moment_functional(f: &MomentFunction, c: &Cone) -> Result<f64, GeometryError> {
    let p = profile(c)?;
    moment_functional_of_profile(f, &p)
}

/// Same as [`moment_functional`] but starting from an existing profile.
pub fn moment_functional_of_profile(
    f: &MomentFunction,
    p: &IntrinsicVolumeProfile,
) -> Result<f64, GeometryError> {
    let mut total = 0.0;
    for (j, vj) in p.values().iter().enumerate() {
        if *vj == 0.0 {
            continue;
        }
        total += vj * chi_ball_moment(f, j)?;
    }
    Ok(total)
}

/// Euclidean intrinsic volumes `V_0 .. V_m` of the stub `C cap B^m` from the
/// conic profile:
/// `V_i = sum_{j >= i} C(j, i) (vol B^j / vol B^(j-i)) v_j`.
pub fn stub_euclidean_volumes(p: &IntrinsicVolumeProfile) -> Vec<f64> {
    let m = p.ambient();
    (0..=m)
        .map(|i| {
            (i..=m)
                .map(|j| stub_coeff(i, j) * p.values()[j])
                .sum::<f64>()
        })
        .collect()
}

/// Inverse of [`stub_euclidean_volumes`]: recover the conic profile from the
/// Euclidean intrinsic volumes of the stub by back substitution on the
/// triangular transform.
pub fn profile_from_stub_volumes(
    ambient: usize,
    volumes: &[f64],
) -> Result<IntrinsicVolumeProfile, GeometryError> {
    if volumes.len() != ambient + 1 {
        return Err(GeometryError::InvalidProfile(format!(
            "expected {} volumes, got {}",
            ambient + 1,
            volumes.len()
        )));
    }
    let mut v = vec![0.0; ambient + 1];
    for i in (0..=ambient).rev() {
        let mut rest = 0.0;
        for j in i + 1..=ambient {
            rest += stub_coeff(i, j) * v[j];
        }
        v[i] = (volumes[i] - rest) / stub_coeff(i, i);
    }
    IntrinsicVolumeProfile::new(ambient, v)
}

/// `C(j, i) * vol B^j / vol B^(j-i)`, evaluated through logarithms.
fn stub_coeff(i: usize, j: usize) -> f64 {
    let lg = ln_gamma;
    let ln_binom = lg(j as f64 + 1.0) - lg(i as f64 + 1.0) - lg((j - i) as f64 + 1.0);
    (ln_binom + ln_ball_volume(j) - ln_ball_volume(j - i)).exp()
}

/// `ln vol B^j = (j/2) ln pi - ln Gamma(j/2 + 1)`.
fn ln_ball_volume(j: usize) -> f64 {
    0.5 * j as f64 * std::f64::consts::PI.ln() - ln_gamma(j as f64 / 2.0 + 1.0)
}

/// Result of a generalized-Steiner comparison: a Monte Carlo estimate
/// against the profile-weighted quadrature value.
#[derive(Debug, Clone)]
pub struct SteinerCheck {
    pub mc_value: f64,
    pub formula_value: f64,
    pub std_err: f64,
}

/// Compare the two sides of the generalized Steiner formula
/// `E f(||Proj_C(g)||, ||Proj_{C polar}(g)||)
///  = sum_i v_i(C) E f(chi_i, chi'_(m-i))`
/// for a bivariate `f`, independent chi variables on the right, and a
/// standard Gaussian `g` on the left. The Monte Carlo side uses the exact
/// orthogonal decomposition `||Proj_{C polar}(g)||^2 = ||g||^2 -
/// ||Proj_C(g)||^2`. Returns both values and the Monte Carlo standard
/// error; deterministic for a fixed seed.
pub fn mc_generalized_steiner<F>(
    f: F,
    c: &Cone,
    trials: usize,
    seed: u64,
) -> Result<SteinerCheck, GeometryError>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    assert!(trials > 1, "need at least two trials");
    let m = c.ambient();
    let p = profile(c)?;
    let samples: Vec<Result<f64, ConeError>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut sampler = SeededSampler::new(seed, t as u64);
            let g = gauss_vector(&mut sampler, m);
            let proj = c.project(&g)?;
            let a2 = dot(&proj, &proj);
            let b2 = (dot(&g, &g) - a2).max(0.0);
            Ok(f(a2.sqrt(), b2.sqrt()))
        })
        .collect();
    let mut values = Vec::with_capacity(trials);
    for s in samples {
        values.push(s?);
    }
    let mean: f64 = values.iter().sum::<f64>() / trials as f64;
    let var: f64 =
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (trials - 1) as f64;
    let std_err = (var / trials as f64).sqrt();

    let mut formula = 0.0;
    for (i, vi) in p.values().iter().enumerate() {
        if *vi == 0.0 {
            continue;
        }
        formula += vi * chi_pair_expectation(&f, i, m - i)?;
    }
    Ok(SteinerCheck {
        mc_value: mean,
        formula_value: formula,
        std_err,
    })
}

/// `E f(chi_i, chi'_j)` for independent chi variables, by (nested) adaptive
/// quadrature; zero degrees of freedom pin the argument to 0.
fn chi_pair_expectation<F>(f: &F, i: usize, j: usize) -> Result<f64, GeometryError>
where
    F: Fn(f64, f64) -> f64 + Sync,
{
    let outer_cfg = QuadratureConfig {
        abs_tol: 1e-8,
        ..QuadratureConfig::default()
    };
    let inner_cfg = QuadratureConfig {
        abs_tol: 1e-9,
        max_subdivisions: 1 << 12,
        ..QuadratureConfig::default()
    };
    match (i, j) {
        (0, 0) => Ok(f(0.0, 0.0)),
        (0, _) => {
            let integrand = |b: f64| f(0.0, b) * chi_pdf(j, b);
            Ok(adaptive_simpson(&integrand, 0.0, chi_tail_cut(j), &outer_cfg)?.0)
        }
        (_, 0) => {
            let integrand = |a: f64| f(a, 0.0) * chi_pdf(i, a);
            Ok(adaptive_simpson(&integrand, 0.0, chi_tail_cut(i), &outer_cfg)?.0)
        }
        _ => {
            let cut_j = chi_tail_cut(j);
            let integrand = |a: f64| {
                let inner = |b: f64| f(a, b) * chi_pdf(j, b);
                let val = adaptive_simpson(&inner, 0.0, cut_j, &inner_cfg)
                    .map(|(v, _)| v)
                    .unwrap_or(f64::NAN);
                val * chi_pdf(i, a)
            };
            let (value, _) = adaptive_simpson(&integrand, 0.0, chi_tail_cut(i), &outer_cfg)?;
            if value.is_nan() {
                return Err(GeometryError::Unsupported(
                    "inner quadrature failed for the chi-pair expectation".into(),
                ));
            }
            Ok(value)
        }
    }
}

/// Ordinate of the scaled-cone moment quotient curve:
/// `s^r nu_r(C_m(t)) / nu_r(C_m(s t))`.
///
/// The scaling `T = diag(1, s, ..., s)` maps the circular cone of slope `t`
/// onto the circular cone of slope `s t` and has condition number `s`; the
/// quotient compares the `r`-th radial moment of a cone with that of its
/// image, normalized by the condition number's `r`-th power.
pub fn circular_quotient(m: usize, t: f64, s: f64, r: f64) -> Result<f64, GeometryError> {
    if !(t > 0.0) || !(s > 0.0) {
        return Err(GeometryError::Unsupported(
            "slope and scale must be positive".into(),
        ));
    }
    let base = circular_profile(m, t)?.nu_r(r);
    let scaled = circular_profile(m, s * t)?.nu_r(r);
    Ok(s.powf(r) * base / scaled)
}
