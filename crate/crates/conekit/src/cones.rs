//! Closed convex cones: construction, exact projection, polarity, and cone
//! angles.
//!
//! A [`Cone`] is an immutable description; all operations are pure. The zero
//! cone is representable as a subspace of dimension zero and is accepted by
//! projections and polarity but rejected by the angle and restricted-operator
//! solvers, whose domain is the nonempty stub C ∩ S^{m-1}.

use crate::numerics::{dot, norm2, orthonormal_basis, scale_vec, solve, Mat};
use crate::restricted::SolverConfig;

/// Failures surfaced by cone construction and projection.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConeError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported projection: {0}")]
    UnsupportedProjection(String),
    #[error("invalid cone: {0}")]
    InvalidCone(String),
}

/// Hard cap on polyhedral generator or normal counts accepted by `project`.
pub const MAX_POLYHEDRAL_FACETS: usize = 20;

/// Description of a closed convex cone in some ambient dimension.
#[derive(Clone, Debug)]
pub enum Cone {
    /// All of R^m.
    Full(usize),
    /// Linear subspace given by an orthonormal basis (empty basis = {0}).
    Subspace { ambient: usize, basis: Vec<Vec<f64>> },
    /// Nonnegative orthant in R^m.
    Orthant(usize),
    /// Circular cone { x : ||x_rest|| <= slope * x_1 } with slope = tan(alpha).
    Circular { ambient: usize, slope: f64 },
    /// Conic hull of finitely many unit generators.
    PolyhedralV {
        ambient: usize,
        generators: Vec<Vec<f64>>,
    },
    /// Intersection of halfspaces { x : <n_i, x> >= 0 } with inward normals.
    PolyhedralH { ambient: usize, normals: Vec<Vec<f64>> },
    /// Polar of an arbitrary inner cone; projection goes through Moreau.
    Polar(Box<Cone>),
    /// Direct product; ambient dimension is the sum of the parts.
    Product(Vec<Cone>),
    /// Image T * inner. Constructed values are canonicalized where a closed
    /// form exists; the raw variant survives only for maps we cannot
    /// project through (see [`Cone::linear_image`]).
    LinearImage { map: Mat, inner: Box<Cone> },
}

impl Cone {
    pub fn full(m: usize) -> Cone {
        Cone::Full(m)
    }

    /// The zero cone {0} in R^m, a subspace of dimension zero.
    pub fn zero(m: usize) -> Cone {
        Cone::Subspace {
            ambient: m,
            basis: Vec::new(),
        }
    }

    pub fn orthant(m: usize) -> Cone {
        Cone::Orthant(m)
    }

    /// Subspace from an orthonormal basis, validated to 1e-10.
    pub fn subspace(ambient: usize, basis: Vec<Vec<f64>>) -> Result<Cone, ConeError> {
        for b in &basis {
            if b.len() != ambient {
                return Err(ConeError::DimensionMismatch {
                    expected: ambient,
                    got: b.len(),
                });
            }
        }
        for (i, bi) in basis.iter().enumerate() {
            for (j, bj) in basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                if (dot(bi, bj) - target).abs() > 1e-10 {
                    return Err(ConeError::InvalidCone(
                        "subspace basis is not orthonormal".into(),
                    ));
                }
            }
        }
        if basis.len() == ambient {
            return Ok(Cone::Full(ambient));
        }
        Ok(Cone::Subspace { ambient, basis })
    }

    /// Subspace spanned by arbitrary vectors (orthonormalized here).
    pub fn subspace_span(ambient: usize, span: &[Vec<f64>]) -> Result<Cone, ConeError> {
        for v in span {
            if v.len() != ambient {
                return Err(ConeError::DimensionMismatch {
                    expected: ambient,
                    got: v.len(),
                });
            }
        }
        let basis = orthonormal_basis(span, 1e-12);
        if basis.len() == ambient {
            return Ok(Cone::Full(ambient));
        }
        Ok(Cone::Subspace { ambient, basis })
    }

    pub fn circular(ambient: usize, slope: f64) -> Result<Cone, ConeError> {
        if ambient < 2 {
            return Err(ConeError::InvalidCone(
                "circular cone needs ambient dimension >= 2".into(),
            ));
        }
        if !(slope > 0.0) || !slope.is_finite() {
            return Err(ConeError::InvalidCone(
                "circular cone needs a positive finite slope".into(),
            ));
        }
        Ok(Cone::Circular { ambient, slope })
    }

    /// Conic hull of the given generators, normalized to unit length.
    pub fn polyhedral_v(ambient: usize, generators: Vec<Vec<f64>>) -> Result<Cone, ConeError> {
        if generators.is_empty() {
            return Ok(Cone::zero(ambient));
        }
        let mut unit = Vec::with_capacity(generators.len());
        for g in generators {
            if g.len() != ambient {
                return Err(ConeError::DimensionMismatch {
                    expected: ambient,
                    got: g.len(),
                });
            }
            let n = norm2(&g);
            if n <= 1e-12 {
                return Err(ConeError::InvalidCone("zero generator".into()));
            }
            unit.push(scale_vec(&g, 1.0 / n));
        }
        Ok(Cone::PolyhedralV {
            ambient,
            generators: unit,
        })
    }

    /// Halfspace intersection with the given inward normals (normalized).
    pub fn polyhedral_h(ambient: usize, normals: Vec<Vec<f64>>) -> Result<Cone, ConeError> {
        if normals.is_empty() {
            return Ok(Cone::Full(ambient));
        }
        let mut unit = Vec::with_capacity(normals.len());
        for n in normals {
            if n.len() != ambient {
                return Err(ConeError::DimensionMismatch {
                    expected: ambient,
                    got: n.len(),
                });
            }
            let norm = norm2(&n);
            if norm <= 1e-12 {
                return Err(ConeError::InvalidCone("zero normal".into()));
            }
            unit.push(scale_vec(&n, 1.0 / norm));
        }
        Ok(Cone::PolyhedralH {
            ambient,
            normals: unit,
        })
    }

    pub fn product(parts: Vec<Cone>) -> Result<Cone, ConeError> {
        if parts.is_empty() {
            return Err(ConeError::InvalidCone("empty product".into()));
        }
        Ok(Cone::Product(parts))
    }

    /// Image of `inner` under `map`, canonicalized where a closed form
    /// exists: spans map to subspaces, generators map through the matrix,
    /// pointed H-cones (ambient <= 8) go through extreme-ray enumeration,
    /// and diag(+-1, s, ..., s) maps of circular cones stay circular up to
    /// an axis reflection. Other inners are kept raw and cannot be
    /// projected onto.
    pub fn linear_image(map: Mat, inner: Cone) -> Result<Cone, ConeError> {
        if map.cols() != inner.ambient() {
            return Err(ConeError::DimensionMismatch {
                expected: inner.ambient(),
                got: map.cols(),
            });
        }
        let ell = map.rows();
        if inner.is_zero() {
            return Ok(Cone::zero(ell));
        }
        match &inner {
            Cone::Full(_) => {
                let cols: Vec<Vec<f64>> = (0..map.cols()).map(|j| map.col(j)).collect();
                Cone::subspace_span(ell, &cols)
            }
            Cone::Subspace { basis, .. } => {
                let image: Vec<Vec<f64>> = basis.iter().map(|b| map.matvec(b)).collect();
                Cone::subspace_span(ell, &image)
            }
            Cone::Orthant(m) => {
                let gens: Vec<Vec<f64>> = (0..*m)
                    .map(|j| map.col(j))
                    .filter(|g| norm2(g) > 1e-12)
                    .collect();
                Cone::polyhedral_v(ell, gens)
            }
            Cone::PolyhedralV { generators, .. } => {
                let gens: Vec<Vec<f64>> = generators
                    .iter()
                    .map(|g| map.matvec(g))
                    .filter(|g| norm2(g) > 1e-12)
                    .collect();
                Cone::polyhedral_v(ell, gens)
            }
            Cone::PolyhedralH { ambient, normals } => {
                let rays = h_cone_extreme_rays(*ambient, normals)?;
                let gens: Vec<Vec<f64>> = rays
                    .iter()
                    .map(|r| map.matvec(r))
                    .filter(|g| norm2(g) > 1e-12)
                    .collect();
                Cone::polyhedral_v(ell, gens)
            }
            Cone::Circular { ambient, slope } => {
                match signed_axis_scaling(&map) {
                    Some((axis_sign, s)) => {
                        let scaled = Cone::circular(*ambient, slope * s)?;
                        if axis_sign > 0.0 {
                            Ok(scaled)
                        } else {
                            Ok(reflected(scaled))
                        }
                    }
                    None => Ok(Cone::LinearImage {
                        map,
                        inner: Box::new(inner),
                    }),
                }
            }
            // A reflected circular cone is itself a LinearImage; compose the maps.
            Cone::LinearImage { .. } | Cone::Polar(_) | Cone::Product(_) => Ok(Cone::LinearImage {
                map,
                inner: Box::new(inner),
            }),
        }
    }

    /// Ambient dimension of the cone.
    pub fn ambient(&self) -> usize {
        match self {
            Cone::Full(m) | Cone::Orthant(m) => *m,
            Cone::Subspace { ambient, .. }
            | Cone::Circular { ambient, .. }
            | Cone::PolyhedralV { ambient, .. }
            | Cone::PolyhedralH { ambient, .. } => *ambient,
            Cone::Polar(inner) => inner.ambient(),
            Cone::Product(parts) => parts.iter().map(|p| p.ambient()).sum(),
            Cone::LinearImage { map, .. } => map.rows(),
        }
    }

    /// Structural test for the zero cone {0}.
    pub fn is_zero(&self) -> bool {
        match self {
            Cone::Subspace { basis, .. } => basis.is_empty(),
            Cone::Product(parts) => parts.iter().all(|p| p.is_zero()),
            Cone::Polar(inner) => matches!(&**inner, Cone::Full(_)),
            _ => false,
        }
    }

    /// Orthogonal projection of `x` onto the cone.
    pub fn project(&self, x: &[f64]) -> Result<Vec<f64>, ConeError> {
        if x.len() != self.ambient() {
            return Err(ConeError::DimensionMismatch {
                expected: self.ambient(),
                got: x.len(),
            });
        }
        match self {
            Cone::Full(_) => Ok(x.to_vec()),
            Cone::Subspace { basis, .. } => {
                let mut out = vec![0.0; x.len()];
                for b in basis {
                    let c = dot(b, x);
                    for (o, bi) in out.iter_mut().zip(b) {
                        *o += c * bi;
                    }
                }
                Ok(out)
            }
            Cone::Orthant(_) => Ok(x.iter().map(|&v| v.max(0.0)).collect()),
            Cone::Circular { slope, .. } => Ok(project_circular(*slope, x)),
            Cone::PolyhedralV { generators, .. } => {
                check_facet_cap(generators.len())?;
                Ok(nnls_cone_project(generators, x))
            }
            Cone::PolyhedralH { normals, .. } => {
                check_facet_cap(normals.len())?;
                // Moreau: the polar is generated by the negated normals.
                let negated: Vec<Vec<f64>> =
                    normals.iter().map(|n| scale_vec(n, -1.0)).collect();
                let polar_part = nnls_cone_project(&negated, x);
                Ok(x.iter().zip(&polar_part).map(|(a, b)| a - b).collect())
            }
            Cone::Polar(inner) => {
                let inner_part = inner.project(x)?;
                Ok(x.iter().zip(&inner_part).map(|(a, b)| a - b).collect())
            }
            Cone::Product(parts) => {
                let mut out = Vec::with_capacity(x.len());
                let mut offset = 0;
                for part in parts {
                    let d = part.ambient();
                    out.extend(part.project(&x[offset..offset + d])?);
                    offset += d;
                }
                Ok(out)
            }
            Cone::LinearImage { map, inner } => {
                if let (Some((sign, s)), Cone::Circular { slope, .. }) =
                    (signed_axis_scaling(map), &**inner)
                {
                    if sign < 0.0 {
                        let mut flipped = x.to_vec();
                        flipped[0] = -flipped[0];
                        let mut p = project_circular(slope * s, &flipped);
                        p[0] = -p[0];
                        return Ok(p);
                    }
                }
                Err(ConeError::UnsupportedProjection(format!(
                    "linear image of {} under a general map",
                    inner
                )))
            }
        }
    }

    /// Membership within tolerance: ||x - project(x)|| <= tol.
    pub fn member(&self, x: &[f64], tol: f64) -> Result<bool, ConeError> {
        let p = self.project(x)?;
        let dist = norm2(&x.iter().zip(&p).map(|(a, b)| a - b).collect::<Vec<_>>());
        Ok(dist <= tol)
    }

    /// Structural polar cone. Every constructible variant has a closed form
    /// except raw linear images, which are wrapped in the `Polar` tag.
    pub fn polar(&self) -> Cone {
        match self {
            Cone::Full(m) => Cone::zero(*m),
            Cone::Subspace { ambient, basis } => {
                if basis.is_empty() {
                    return Cone::Full(*ambient);
                }
                let comp = orthocomplement(*ambient, basis);
                if comp.is_empty() {
                    Cone::zero(*ambient)
                } else if comp.len() == *ambient {
                    Cone::Full(*ambient)
                } else {
                    Cone::Subspace {
                        ambient: *ambient,
                        basis: comp,
                    }
                }
            }
            Cone::Orthant(m) => {
                let normals = (0..*m)
                    .map(|i| {
                        let mut e = vec![0.0; *m];
                        e[i] = -1.0;
                        e
                    })
                    .collect();
                Cone::PolyhedralH {
                    ambient: *m,
                    normals,
                }
            }
            Cone::Circular { ambient, slope } => reflected(Cone::Circular {
                ambient: *ambient,
                slope: 1.0 / slope,
            }),
            Cone::PolyhedralV {
                ambient,
                generators,
            } => Cone::PolyhedralH {
                ambient: *ambient,
                normals: generators.iter().map(|g| scale_vec(g, -1.0)).collect(),
            },
            Cone::PolyhedralH { ambient, normals } => Cone::PolyhedralV {
                ambient: *ambient,
                generators: normals.iter().map(|n| scale_vec(n, -1.0)).collect(),
            },
            Cone::Polar(inner) => (**inner).clone(),
            Cone::Product(parts) => Cone::Product(parts.iter().map(|p| p.polar()).collect()),
            Cone::LinearImage { map, inner } => {
                if let (Some((sign, s)), Cone::Circular { ambient, slope }) =
                    (signed_axis_scaling(map), &**inner)
                {
                    // polar(sign * C_m(tau)) = -sign * C_m(1/tau)
                    let tau = slope * s;
                    let polar_inner = Cone::Circular {
                        ambient: *ambient,
                        slope: 1.0 / tau,
                    };
                    if sign > 0.0 {
                        return reflected(polar_inner);
                    }
                    return polar_inner;
                }
                Cone::Polar(Box::new(self.clone()))
            }
        }
    }

    /// Cosine of the capped angle between two cones, with maximizing stubs.
    ///
    /// Computed by alternating maximization of <x, y> over the two stubs
    /// with multistart, which equals the identity-matrix restricted norm.
    pub fn capped_angle(c: &Cone, d: &Cone, cfg: &SolverConfig) -> Result<AngleResult, ConeError> {
        if c.ambient() != d.ambient() {
            return Err(ConeError::DimensionMismatch {
                expected: c.ambient(),
                got: d.ambient(),
            });
        }
        if c.is_zero() || d.is_zero() {
            return Err(ConeError::InvalidCone(
                "capped angle of the zero cone is undefined".into(),
            ));
        }
        let m = c.ambient();
        let identity = Mat::identity(m);
        let out = crate::restricted::alternating_bilinear_max(&identity, c, d, cfg)?;
        Ok(AngleResult {
            cos_capped_angle: out.value.clamp(0.0, 1.0),
            x_cert: out.x_cert,
            y_cert: out.y_cert,
            converged_fraction: out.converged_fraction,
        })
    }
}

/// Maximizing stub pair for a capped angle query.
#[derive(Clone, Debug)]
pub struct AngleResult {
    /// cos of the capped angle, in [0, 1].
    pub cos_capped_angle: f64,
    /// Unit vector in C, or zero when every start collapsed.
    pub x_cert: Vec<f64>,
    /// Unit vector in D, or zero when every start collapsed.
    pub y_cert: Vec<f64>,
    /// Fraction of multistarts that met the step tolerance.
    pub converged_fraction: f64,
}

/// Reflected cone -C for a circular C, canonically a LinearImage under
/// diag(-1, 1, ..., 1).
fn reflected(circular: Cone) -> Cone {
    let m = circular.ambient();
    let mut d = vec![1.0; m];
    d[0] = -1.0;
    Cone::LinearImage {
        map: Mat::diag(&d),
        inner: Box::new(circular),
    }
}

fn check_facet_cap(k: usize) -> Result<(), ConeError> {
    if k > MAX_POLYHEDRAL_FACETS {
        return Err(ConeError::UnsupportedProjection(format!(
            "polyhedral projection supports at most {MAX_POLYHEDRAL_FACETS} generators or normals, got {k}"
        )));
    }
    Ok(())
}

/// Detects map = diag(d, s, ..., s) with |d| = 1 and s > 0; returns (d, s).
fn signed_axis_scaling(map: &Mat) -> Option<(f64, f64)> {
    if map.rows() != map.cols() || map.rows() < 2 {
        return None;
    }
    let m = map.rows();
    let d = map.get(0, 0);
    if (d.abs() - 1.0).abs() > 1e-12 {
        return None;
    }
    let s = map.get(1, 1);
    if !(s > 0.0) {
        return None;
    }
    for i in 0..m {
        for j in 0..m {
            let expect = if i != j {
                0.0
            } else if i == 0 {
                d
            } else {
                s
            };
            if (map.get(i, j) - expect).abs() > 1e-12 {
                return None;
            }
        }
    }
    Some((d, s))
}

/// Closed-form projection onto { x : ||x_rest|| <= slope * x_1 }.
fn project_circular(slope: f64, x: &[f64]) -> Vec<f64> {
    let x1 = x[0];
    let w = norm2(&x[1..]);
    if w <= slope * x1 {
        return x.to_vec();
    }
    if x1 <= -slope * w {
        return vec![0.0; x.len()];
    }
    let c = (x1 + slope * w) / (1.0 + slope * slope);
    let mut out = Vec::with_capacity(x.len());
    out.push(c);
    let scale = c * slope / w;
    out.extend(x[1..].iter().map(|&v| v * scale));
    out
}

/// Orthonormal basis of the orthogonal complement of `basis` in R^m.
fn orthocomplement(ambient: usize, basis: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut all: Vec<Vec<f64>> = basis.to_vec();
    for i in 0..ambient {
        let mut e = vec![0.0; ambient];
        e[i] = 1.0;
        all.push(e);
    }
    let full = orthonormal_basis(&all, 1e-10);
    full.into_iter().skip(basis.len()).collect()
}

/// Extreme rays of a pointed H-cone { x : <n_i, x> >= 0 } by enumerating
/// (m-1)-subsets of tight normals. Errors for non-pointed cones or
/// dimensions beyond the enumeration budget.
fn h_cone_extreme_rays(
    ambient: usize,
    normals: &[Vec<f64>],
) -> Result<Vec<Vec<f64>>, ConeError> {
    if ambient > 8 {
        return Err(ConeError::UnsupportedProjection(
            "H-cone ray enumeration supports ambient dimension <= 8".into(),
        ));
    }
    if ambient == 1 {
        // Halflines on the real line.
        let mut rays = Vec::new();
        for dir in [1.0, -1.0] {
            if normals.iter().all(|n| n[0] * dir >= -1e-12) {
                rays.push(vec![dir]);
            }
        }
        if rays.len() == 2 {
            return Err(ConeError::UnsupportedProjection(
                "H-cone is not pointed".into(),
            ));
        }
        return Ok(rays);
    }
    let lineality = {
        let rows: Vec<Vec<f64>> = normals.to_vec();
        let rank = orthonormal_basis(&rows, 1e-10).len();
        ambient - rank
    };
    if lineality > 0 {
        return Err(ConeError::UnsupportedProjection(
            "H-cone is not pointed; ray enumeration unsupported".into(),
        ));
    }
    let k = normals.len();
    let mut rays: Vec<Vec<f64>> = Vec::new();
    let mut subset = vec![0usize; ambient - 1];
    enumerate_subsets(k, ambient - 1, &mut subset, 0, 0, &mut |s| {
        let chosen: Vec<Vec<f64>> = s.iter().map(|&i| normals[i].clone()).collect();
        let null = null_space_1d(ambient, &chosen);
        if let Some(r) = null {
            for dir in [1.0, -1.0] {
                let cand = scale_vec(&r, dir);
                if normals.iter().all(|n| dot(n, &cand) >= -1e-9) {
                    if !rays
                        .iter()
                        .any(|existing| dot(existing, &cand) > 1.0 - 1e-9)
                    {
                        rays.push(cand);
                    }
                }
            }
        }
    });
    Ok(rays)
}

fn enumerate_subsets<F: FnMut(&[usize])>(
    k: usize,
    size: usize,
    buf: &mut Vec<usize>,
    depth: usize,
    start: usize,
    f: &mut F,
) {
    if depth == size {
        f(buf);
        return;
    }
    for i in start..k {
        buf[depth] = i;
        enumerate_subsets(k, size, buf, depth + 1, i + 1, f);
    }
}

/// Unit vector spanning the null space of the given rows when that space is
/// one-dimensional.
fn null_space_1d(ambient: usize, rows: &[Vec<f64>]) -> Option<Vec<f64>> {
    let basis = orthonormal_basis(rows, 1e-10);
    if basis.len() != ambient - 1 {
        return None;
    }
    let comp = orthocomplement(ambient, &basis);
    comp.into_iter().next()
}

/// Exact projection onto cone(generators) by Lawson-Hanson NNLS.
fn nnls_cone_project(generators: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
    let k = generators.len();
    if k == 0 {
        return vec![0.0; x.len()];
    }
    let scale = norm2(x).max(1.0);
    let tol = 1e-12 * scale;
    let mut passive: Vec<usize> = Vec::new();
    let mut lambda = vec![0.0; k];
    let gram = Mat::from_fn(k, k, |i, j| dot(&generators[i], &generators[j]));
    let gtx: Vec<f64> = generators.iter().map(|g| dot(g, x)).collect();
    let combine = |lam: &[f64]| -> Vec<f64> {
        let mut p = vec![0.0; x.len()];
        for (li, g) in lam.iter().zip(generators) {
            if *li != 0.0 {
                for (pi, gi) in p.iter_mut().zip(g) {
                    *pi += li * gi;
                }
            }
        }
        p
    };
    for _outer in 0..(3 * k + 30) {
        let p = combine(&lambda);
        let r: Vec<f64> = x.iter().zip(&p).map(|(a, b)| a - b).collect();
        let mut best = None;
        for i in 0..k {
            if passive.contains(&i) {
                continue;
            }
            let w = dot(&generators[i], &r);
            if w > tol && best.map_or(true, |(_, bw)| w > bw) {
                best = Some((i, w));
            }
        }
        let Some((enter, _)) = best else { break };
        passive.push(enter);
        for _inner in 0..(5 * k + 50) {
            let np = passive.len();
            let sub = Mat::from_fn(np, np, |a, b| {
                let g = gram.get(passive[a], passive[b]);
                if a == b {
                    g + 1e-13
                } else {
                    g
                }
            });
            let rhs: Vec<f64> = passive.iter().map(|&i| gtx[i]).collect();
            let z = match solve(&sub, &rhs) {
                Some(z) => z,
                None => {
                    passive.pop();
                    break;
                }
            };
            if z.iter().all(|&v| v > -1e-12) {
                for (&i, &zi) in passive.iter().zip(&z) {
                    lambda[i] = zi.max(0.0);
                }
                break;
            }
            let mut alpha = f64::INFINITY;
            for (&i, &zi) in passive.iter().zip(&z) {
                if zi <= 0.0 {
                    let li = lambda[i];
                    if li - zi > 0.0 {
                        alpha = alpha.min(li / (li - zi));
                    }
                }
            }
            if !alpha.is_finite() {
                alpha = 0.0;
            }
            for (&i, &zi) in passive.iter().zip(&z) {
                lambda[i] += alpha * (zi - lambda[i]);
            }
            let dropped: Vec<usize> = passive
                .iter()
                .copied()
                .filter(|&i| lambda[i] <= 1e-14)
                .collect();
            for d in dropped {
                lambda[d] = 0.0;
                passive.retain(|&i| i != d);
            }
        }
    }
    combine(&lambda)
}

impl std::fmt::Display for Cone {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Cone::Full(m) => write!(f, "full {m}"),
            Cone::Subspace { ambient, basis } => {
                write!(f, "subspace {ambient} dim {}", basis.len())
            }
            Cone::Orthant(m) => write!(f, "orthant {m}"),
            Cone::Circular { ambient, slope } => write!(f, "circ {ambient} {slope}"),
            Cone::PolyhedralV {
                ambient,
                generators,
            } => write!(f, "vcone {ambient} gens {}", generators.len()),
            Cone::PolyhedralH { ambient, normals } => {
                write!(f, "hcone {ambient} normals {}", normals.len())
            }
            Cone::Polar(inner) => write!(f, "polar ({inner})"),
            Cone::Product(parts) => {
                write!(f, "product")?;
                for p in parts {
                    write!(f, " ({p})")?;
                }
                Ok(())
            }
            Cone::LinearImage { map, inner } => {
                if let (Some((sign, _)), Cone::Circular { .. }) =
                    (signed_axis_scaling(map), &**inner)
                {
                    if sign < 0.0 {
                        return write!(f, "neg ({inner})");
                    }
                }
                write!(f, "image {}x{} ({inner})", map.rows(), map.cols())
            }
        }
    }
}
