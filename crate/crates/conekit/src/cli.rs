//! Command-line front door: cone-spec and matrix-file parsing, experiment
//! orchestration, and table emission.
//!
//! The command functions are plain library calls so they can be driven both
//! by the `conekit` binary and by tests.  Every stochastic command is a pure
//! function of its arguments including the seed, and all floats are emitted
//! in scientific notation with nine significant digits so reruns are
//! byte-identical.
//!
//! Cone grammar (one line, s-expression style for nesting):
//!
//! ```text
//! full M                  ambient space R^M
//! orthant M               nonnegative orthant in R^M
//! circ M T                circular cone in R^M with slope T = tan(alpha)
//! subspace M K            span of the first K coordinate axes in R^M
//! polar ( SPEC )          polar of the inner cone
//! product ( SPEC ) ...    direct product of the inner cones
//! image FILE ( SPEC )     image of the inner cone under the matrix in FILE
//! ```
//!
//! Matrix files carry a `# n m` header line followed by `n` rows of `m`
//! whitespace-separated entries.  Grid specs are `a:b:n` for `n` evenly
//! spaced points from `a` to `b` inclusive.

use std::fmt;
use std::path::{Path, PathBuf};

use crate::bounds::{
    conc_bound, curve_values_from_samples, default_norm_grid, default_sv_grid, empirical_samples,
    iv_bound, BoundCurve, BoundsError, CurveKind, CurveMeta,
};
use crate::cones::{Cone, ConeError};
use crate::feasibility::{self, FeasibilityError};
use crate::geometry::{self, GeometryError};
use crate::numerics::{Mat, NumericsError};
use crate::restricted::{RestrictedError, RestrictedKind, SolverConfig};

/// Command-level failures, classified by exit code: parse and input/output
/// problems exit 2, solver failures exit 3, unsupported cone combinations
/// exit 4.
#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Io(String),
    Solver(String),
    Unsupported(String),
}

impl CliError {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Unsupported(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
            CliError::Solver(m) => write!(f, "solver failure: {m}"),
            CliError::Unsupported(m) => write!(f, "unsupported cone combination: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ConeError> for CliError {
    fn from(e: ConeError) -> Self {
        match e {
            ConeError::UnsupportedProjection(m) => CliError::Unsupported(m),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<RestrictedError> for CliError {
    fn from(e: RestrictedError) -> Self {
        match e {
            RestrictedError::Unsupported(m) => CliError::Unsupported(m),
            RestrictedError::ZeroCone => CliError::Unsupported(e.to_string()),
            RestrictedError::Cone(inner) => inner.into(),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        match e {
            GeometryError::Unsupported(m) => CliError::Unsupported(m),
            GeometryError::Cone(inner) => inner.into(),
            GeometryError::Numerics(inner) => inner.into(),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<NumericsError> for CliError {
    fn from(e: NumericsError) -> Self {
        CliError::Solver(e.to_string())
    }
}

impl From<FeasibilityError> for CliError {
    fn from(e: FeasibilityError) -> Self {
        match e {
            FeasibilityError::SubspacePair => CliError::Unsupported(e.to_string()),
            FeasibilityError::Restricted(inner) => inner.into(),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        match e {
            BoundsError::UnsupportedCone(m) => CliError::Unsupported(m),
            BoundsError::Cone(inner) => inner.into(),
            BoundsError::Geometry(inner) => inner.into(),
            BoundsError::Numerics(inner) => inner.into(),
            BoundsError::Restricted(inner) => inner.into(),
            BoundsError::Feasibility(inner) => inner.into(),
            other => CliError::Parse(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn fmt_sci(x: f64) -> String {
    format!("{x:.8e}")
}

// ---------------------------------------------------------------------------
// Parsers
// ---------------------------------------------------------------------------

struct Tokens {
    items: Vec<String>,
    pos: usize,
}

impl Tokens {
    fn new(text: &str) -> Self {
        let spaced = text.replace('(', " ( ").replace(')', " ) ");
        Tokens {
            items: spaced.split_whitespace().map(str::to_string).collect(),
            pos: 0,
        }
    }

    fn next(&mut self) -> Result<&str, CliError> {
        let item = self
            .items
            .get(self.pos)
            .ok_or_else(|| CliError::Parse("unexpected end of cone spec".into()))?;
        self.pos += 1;
        Ok(item)
    }

    fn peek(&self) -> Option<&str> {
        self.items.get(self.pos).map(String::as_str)
    }

    fn expect(&mut self, tok: &str) -> Result<(), CliError> {
        let got = self.next()?;
        if got == tok {
            Ok(())
        } else {
            Err(CliError::Parse(format!("expected `{tok}`, got `{got}`")))
        }
    }

    fn usize_arg(&mut self, what: &str) -> Result<usize, CliError> {
        let tok = self.next()?;
        tok.parse()
            .map_err(|e| CliError::Parse(format!("bad {what} `{tok}`: {e}")))
    }

    fn f64_arg(&mut self, what: &str) -> Result<f64, CliError> {
        let tok = self.next()?;
        tok.parse()
            .map_err(|e| CliError::Parse(format!("bad {what} `{tok}`: {e}")))
    }
}

/// Parses the one-line cone grammar documented at the top of this module.
pub fn parse_cone_spec(spec: &str) -> Result<Cone, CliError> {
    let mut tokens = Tokens::new(spec);
    let cone = parse_cone(&mut tokens)?;
    if let Some(extra) = tokens.peek() {
        return Err(CliError::Parse(format!(
            "trailing input `{extra}` after cone spec"
        )));
    }
    Ok(cone)
}

fn parse_cone(tokens: &mut Tokens) -> Result<Cone, CliError> {
    let head = tokens.next()?.to_string();
    match head.as_str() {
        "full" => Ok(Cone::full(tokens.usize_arg("ambient dimension")?)),
        "orthant" => Ok(Cone::orthant(tokens.usize_arg("ambient dimension")?)),
        "circ" => {
            let m = tokens.usize_arg("ambient dimension")?;
            let t = tokens.f64_arg("slope")?;
            Ok(Cone::circular(m, t)?)
        }
        "subspace" => {
            let m = tokens.usize_arg("ambient dimension")?;
            let k = tokens.usize_arg("subspace dimension")?;
            if k > m {
                return Err(CliError::Parse(format!(
                    "subspace dimension {k} exceeds ambient dimension {m}"
                )));
            }
            let axes: Vec<Vec<f64>> = (0..k)
                .map(|i| {
                    let mut e = vec![0.0; m];
                    e[i] = 1.0;
                    e
                })
                .collect();
            Ok(Cone::subspace_span(m, &axes)?)
        }
        "polar" => {
            tokens.expect("(")?;
            let inner = parse_cone(tokens)?;
            tokens.expect(")")?;
            Ok(inner.polar())
        }
        "product" => {
            let mut parts = Vec::new();
            while tokens.peek() == Some("(") {
                tokens.expect("(")?;
                parts.push(parse_cone(tokens)?);
                tokens.expect(")")?;
            }
            if parts.is_empty() {
                return Err(CliError::Parse(
                    "product needs at least one parenthesized factor".into(),
                ));
            }
            Ok(Cone::product(parts)?)
        }
        "image" => {
            let path = tokens.next()?.to_string();
            let map = parse_matrix_file(Path::new(&path))?;
            tokens.expect("(")?;
            let inner = parse_cone(tokens)?;
            tokens.expect(")")?;
            Ok(Cone::linear_image(map, inner)?)
        }
        other => Err(CliError::Parse(format!("unknown cone family `{other}`"))),
    }
}

/// Parses matrix text: a `# n m` header line, then `n` rows of `m`
/// whitespace-separated entries (blank lines ignored).
pub fn parse_matrix_text(text: &str) -> Result<Mat, CliError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| CliError::Parse("empty matrix text".into()))?;
    let body = header
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| CliError::Parse("matrix text must start with a `# n m` header".into()))?;
    let dims: Vec<&str> = body.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(CliError::Parse(format!(
            "matrix header needs two dimensions, got `{}`",
            body.trim()
        )));
    }
    let n: usize = dims[0]
        .parse()
        .map_err(|e| CliError::Parse(format!("bad row count `{}`: {e}", dims[0])))?;
    let m: usize = dims[1]
        .parse()
        .map_err(|e| CliError::Parse(format!("bad column count `{}`: {e}", dims[1])))?;
    if n == 0 || m == 0 {
        return Err(CliError::Parse("matrix dimensions must be positive".into()));
    }
    let mut rows = Vec::with_capacity(n);
    for line in lines {
        let row: Vec<f64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>()
                    .map_err(|e| CliError::Parse(format!("bad matrix entry `{tok}`: {e}")))
            })
            .collect::<Result<_, _>>()?;
        if row.len() != m {
            return Err(CliError::Parse(format!(
                "matrix row has {} entries, expected {m}",
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(CliError::Parse(format!(
            "matrix has {} rows, header declared {n}",
            rows.len()
        )));
    }
    Ok(Mat::from_rows(&rows))
}

/// Reads and parses a matrix file.
pub fn parse_matrix_file(path: &Path) -> Result<Mat, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix_text(&text)
}

/// Parses a grid spec `a:b:n` into `n` evenly spaced points from `a` to `b`.
pub fn parse_grid_spec(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(CliError::Parse(format!(
            "grid spec must be `a:b:n`, got `{spec}`"
        )));
    }
    let a: f64 = parts[0]
        .parse()
        .map_err(|e| CliError::Parse(format!("bad grid start `{}`: {e}", parts[0])))?;
    let b: f64 = parts[1]
        .parse()
        .map_err(|e| CliError::Parse(format!("bad grid end `{}`: {e}", parts[1])))?;
    let n: usize = parts[2]
        .parse()
        .map_err(|e| CliError::Parse(format!("bad grid count `{}`: {e}", parts[2])))?;
    if n < 2 || !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(CliError::Parse(format!(
            "grid spec needs finite a < b and n >= 2, got `{spec}`"
        )));
    }
    let steps = (n - 1) as f64;
    Ok((0..n).map(|i| a + (b - a) * i as f64 / steps).collect())
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

/// Intrinsic-volume profile of a cone: one `vK=` line per degree followed by
/// a `delta=` (statistical dimension) and `dstar=` (squared Gaussian width)
/// footer.
pub fn cmd_profile(spec: &str) -> Result<String, CliError> {
    let cone = parse_cone_spec(spec)?;
    let profile = geometry::profile(&cone)?;
    let mut out = String::new();
    for (k, vk) in profile.values().iter().enumerate() {
        out.push_str(&format!("v{k}={}\n", fmt_sci(*vk)));
    }
    out.push_str(&format!("delta={}\n", fmt_sci(profile.sdim())));
    out.push_str(&format!("dstar={}\n", fmt_sci(profile.gwidth_sq())));
    Ok(out)
}

/// Formats a parameter for a filename: integral values lose the trailing
/// `.0` so `r=2.0` names the same file as `r=2`.
fn fmt_param(x: f64) -> String {
    format!("{x}").replace('.', "p")
}

/// Moment-quotient tables for scaled circular cones: for each requested
/// ambient dimension `m` and moment order `r`, tabulates
/// `s^r nu_r(C_m(t)) / nu_r(C_m(s t))` over the slope grid and writes
/// `quot_kappa={s}_r={r}_d={m}.table` into `out_dir`.  The quotient is at
/// least one for every `r >= 1` and can dip below one for `r < 1`.
pub fn cmd_figure1(
    ms: &[usize],
    s: f64,
    rs: &[f64],
    t_grid: &[f64],
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    if ms.is_empty() || rs.is_empty() || t_grid.is_empty() {
        return Err(CliError::Parse(
            "need at least one dimension, moment order, and grid point".into(),
        ));
    }
    if ms.iter().any(|&m| m < 2) {
        return Err(CliError::Parse("ambient dimensions must be at least 2".into()));
    }
    if !(s > 0.0) || !s.is_finite() {
        return Err(CliError::Parse(format!("scale must be positive, got {s}")));
    }
    if rs.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
        return Err(CliError::Parse("moment orders must be nonnegative".into()));
    }
    if t_grid.iter().any(|t| !(*t > 0.0)) {
        return Err(CliError::Parse("slope grid points must be positive".into()));
    }
    std::fs::create_dir_all(out_dir)?;
    let mut paths = Vec::new();
    for &m in ms {
        // One profile pair per grid point, shared across the moment orders.
        let mut rows: Vec<(f64, Vec<f64>)> = Vec::with_capacity(t_grid.len());
        for &t in t_grid {
            let base = geometry::circular_profile(m, t)?;
            let scaled = geometry::circular_profile(m, s * t)?;
            let quotients: Vec<f64> = rs
                .iter()
                .map(|&r| s.powf(r) * base.nu_r(r) / scaled.nu_r(r))
                .collect();
            rows.push((t, quotients));
        }
        for (ri, &r) in rs.iter().enumerate() {
            let mut table = String::new();
            for (t, quotients) in &rows {
                table.push_str(&format!("{} {}\n", fmt_sci(*t), fmt_sci(quotients[ri])));
            }
            let name = format!(
                "quot_kappa={}_r={}_d={m}.table",
                fmt_param(s),
                fmt_param(r)
            );
            let path = out_dir.join(name);
            std::fs::write(&path, table)?;
            paths.push(path);
        }
    }
    Ok(paths)
}

fn sanitize(token: &str) -> String {
    token
        .chars()
        .map(|ch| match ch {
            ' ' => '-',
            '(' | ')' => '_',
            '.' => 'p',
            other => other,
        })
        .collect()
}

fn segment_table(x: f64) -> String {
    format!("{} {}\n{} {}\n", fmt_sci(x), fmt_sci(0.0), fmt_sci(x), fmt_sci(1.0))
}

/// Empirical distribution tables and the four bound curves for one Gaussian
/// cone pair, plus mean markers: nine `.table` files in `out_dir`.
///
/// Per trial, one Gaussian matrix feeds both the restricted norm and the
/// restricted singular value.  The singular-value side gets its empirical
/// cdf, the intrinsic-volume and concentration cdf bounds, an empirical mean
/// marker, and an estimated mean marker at `sqrt(d*_D) - sqrt(d*_C)`; the
/// norm side gets its empirical tail, both tail bounds, and an estimated
/// mean marker at `sqrt(d*_D) + sqrt(d*_C)`.  Mean markers are two-point
/// vertical segments.
pub fn cmd_figure2(
    spec_c: &str,
    spec_d: &str,
    trials: usize,
    seed: u64,
    grid: Option<&str>,
    out_dir: &Path,
) -> Result<Vec<PathBuf>, CliError> {
    let cone_c = parse_cone_spec(spec_c)?;
    let cone_d = parse_cone_spec(spec_d)?;
    if trials < 100 {
        return Err(CliError::Parse(format!(
            "need at least 100 trials for stable tables, got {trials}"
        )));
    }
    let m = cone_c.ambient();
    let n = cone_d.ambient();
    let profile_c = geometry::profile(&cone_c)?;
    let profile_d = geometry::profile(&cone_d)?;
    let dstar_c = profile_c.gwidth_sq();
    let dstar_d = profile_d.gwidth_sq();
    let (sv_grid, norm_grid) = match grid {
        Some(spec) => {
            let g = parse_grid_spec(spec)?;
            (g.clone(), g)
        }
        None => (
            default_sv_grid(dstar_c, dstar_d),
            default_norm_grid(dstar_c, dstar_d),
        ),
    };
    let solver_cfg = SolverConfig::default();
    let (sv_samples, sv_unreliable) = empirical_samples(
        RestrictedKind::Sv,
        &cone_c,
        &cone_d,
        n,
        m,
        trials,
        seed,
        &solver_cfg,
    )?;
    let (norm_samples, norm_unreliable) = empirical_samples(
        RestrictedKind::Norm,
        &cone_c,
        &cone_d,
        n,
        m,
        trials,
        seed,
        &solver_cfg,
    )?;

    let meta = |unreliable: usize| CurveMeta {
        cone_c: format!("{cone_c}"),
        cone_d: format!("{cone_d}"),
        rows: n,
        cols: m,
        trials,
        seed: Some(seed),
        unreliable_trials: unreliable,
    };
    let sv_empirical = BoundCurve::new(
        CurveKind::EmpiricalCdfSv,
        sv_grid.clone(),
        curve_values_from_samples(RestrictedKind::Sv, &sv_grid, &sv_samples),
        meta(sv_unreliable),
    )?;
    let norm_empirical = BoundCurve::new(
        CurveKind::EmpiricalTailNorm,
        norm_grid.clone(),
        curve_values_from_samples(RestrictedKind::Norm, &norm_grid, &norm_samples),
        meta(norm_unreliable),
    )?;
    let sv_iv = iv_bound(RestrictedKind::Sv, &sv_grid, &profile_c, &profile_d)?;
    let sv_conc = conc_bound(RestrictedKind::Sv, &sv_grid, dstar_c, dstar_d)?;
    let norm_iv = iv_bound(RestrictedKind::Norm, &norm_grid, &profile_c, &profile_d)?;
    let norm_conc = conc_bound(RestrictedKind::Norm, &norm_grid, dstar_c, dstar_d)?;

    let sv_mean = sv_samples.iter().sum::<f64>() / trials as f64;
    let sv_mean_estimated = dstar_d.sqrt() - dstar_c.sqrt();
    let norm_mean_estimated = dstar_d.sqrt() + dstar_c.sqrt();

    std::fs::create_dir_all(out_dir)?;
    let tag = format!(
        "{}_{}_n{n}x{m}_t{trials}_seed{seed}",
        sanitize(spec_c.trim()),
        sanitize(spec_d.trim())
    );
    let mut paths = Vec::new();
    let mut emit = |stem: &str, content: String| -> Result<(), CliError> {
        let path = out_dir.join(format!("{stem}_{tag}.table"));
        std::fs::write(&path, content)?;
        paths.push(path);
        Ok(())
    };
    emit("empirical_cdf_sv", sv_empirical.table_text())?;
    emit("iv_sv", sv_iv.table_text())?;
    emit("conc_sv", sv_conc.table_text())?;
    emit("mean_sv_empirical", segment_table(sv_mean))?;
    emit("mean_sv_estimated", segment_table(sv_mean_estimated))?;
    emit("empirical_tail_norm", norm_empirical.table_text())?;
    emit("iv_norm", norm_iv.table_text())?;
    emit("conc_norm", norm_conc.table_text())?;
    emit("mean_norm_estimated", segment_table(norm_mean_estimated))?;
    Ok(paths)
}

/// Feasibility report for a matrix file against a cone pair, serialized as
/// `key=value` lines.  With no explicit tolerance the scale-relative default
/// applies.
pub fn cmd_classify(
    matrix_path: &Path,
    spec_c: &str,
    spec_d: &str,
    tol: Option<f64>,
) -> Result<String, CliError> {
    let a = parse_matrix_file(matrix_path)?;
    let cone_c = parse_cone_spec(spec_c)?;
    let cone_d = parse_cone_spec(spec_d)?;
    let cfg = SolverConfig::default();
    let report = match tol {
        Some(t) => feasibility::classify_with_tol(&a, &cone_c, &cone_d, &cfg, t)?,
        None => feasibility::classify(&a, &cone_c, &cone_d, &cfg)?,
    };
    Ok(report.to_key_values())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cone_specs_parse_and_reject() {
        assert_eq!(parse_cone_spec("full 5").unwrap().to_string(), "full 5");
        assert_eq!(
            parse_cone_spec("orthant 3").unwrap().to_string(),
            "orthant 3"
        );
        match parse_cone_spec("circ 100 1.0").unwrap() {
            Cone::Circular { ambient, slope } => {
                assert_eq!(ambient, 100);
                assert_abs_diff_eq!(slope, 1.0);
            }
            other => panic!("expected circular, got {other}"),
        }
        match parse_cone_spec("subspace 5 3").unwrap() {
            Cone::Subspace { ambient, basis } => {
                assert_eq!(ambient, 5);
                assert_eq!(basis.len(), 3);
            }
            other => panic!("expected subspace, got {other}"),
        }
        // Polar of a polar collapses back to the base family.
        let polar = parse_cone_spec("polar (circ 4 0.5)").unwrap();
        assert_eq!(polar.ambient(), 4);
        let product = parse_cone_spec("product (orthant 2) (circ 3 1.0)").unwrap();
        assert_eq!(product.ambient(), 5);

        for bad in [
            "gibberish 4",
            "full",
            "circ 4",
            "subspace 3 7",
            "polar circ 4 0.5",
            "full 5 extra",
            "product",
        ] {
            let err = parse_cone_spec(bad).unwrap_err();
            assert_eq!(err.exit_code(), 2, "spec `{bad}` should be a parse error");
        }
    }

    #[test]
    fn matrix_text_parses_and_validates() {
        let mat = parse_matrix_text("# 2 3\n1 2 3\n4 5 6\n").unwrap();
        assert_eq!((mat.rows(), mat.cols()), (2, 3));
        assert_eq!(mat.get(1, 2), 6.0);
        for bad in [
            "",
            "1 2\n3 4\n",
            "# 2\n1\n2\n",
            "# 2 2\n1 2\n3\n",
            "# 2 2\n1 2\n",
            "# 2 2\n1 2\n3 x\n",
        ] {
            assert!(parse_matrix_text(bad).is_err(), "should reject {bad:?}");
        }
    }

    #[test]
    fn grid_specs_parse_and_validate() {
        let g = parse_grid_spec("0:2:5").unwrap();
        assert_eq!(g, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
        for bad in ["0:2", "2:0:5", "0:2:1", "a:2:5"] {
            assert!(parse_grid_spec(bad).is_err());
        }
    }

    #[test]
    fn profile_command_emits_volumes_and_footer() {
        let out = cmd_profile("orthant 3").unwrap();
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(
            &lines[..5],
            &[
                "v0=1.25000000e-1",
                "v1=3.75000000e-1",
                "v2=3.75000000e-1",
                "v3=1.25000000e-1",
                "delta=1.50000000e0",
            ]
        );
        // The printed value carries nine significant digits.
        let dstar: f64 = lines[5].strip_prefix("dstar=").unwrap().parse().unwrap();
        let direct = geometry::profile(&Cone::orthant(3)).unwrap().gwidth_sq();
        assert_abs_diff_eq!(dstar, direct, epsilon = 1e-8);
        let sub = cmd_profile("subspace 5 3").unwrap();
        assert!(sub.contains("v3=1.00000000e0"));
        assert!(sub.contains("v0=0.00000000e0"));
        assert!(sub.contains("delta=3.00000000e0"));
    }

    #[test]
    fn figure1_tables_share_the_quotient_oracle() {
        let dir = std::env::temp_dir().join("conekit_fig1_test");
        let _ = std::fs::remove_dir_all(&dir);
        let paths = cmd_figure1(&[10], 2.0, &[0.5, 2.0], &[0.2, 0.4], &dir).unwrap();
        assert_eq!(paths.len(), 2);
        assert!(paths[0].ends_with("quot_kappa=2_r=0p5_d=10.table"));
        assert!(paths[1].ends_with("quot_kappa=2_r=2_d=10.table"));
        let text = std::fs::read_to_string(&paths[1]).unwrap();
        let first_line = text.lines().next().unwrap();
        let mut it = first_line.split_whitespace();
        let t: f64 = it.next().unwrap().parse().unwrap();
        let q: f64 = it.next().unwrap().parse().unwrap();
        assert_abs_diff_eq!(t, 0.2, epsilon = 1e-9);
        let oracle = geometry::circular_quotient(10, 0.2, 2.0, 2.0).unwrap();
        assert_abs_diff_eq!(q, oracle, epsilon = 1e-7);
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn classify_command_reports_and_scale_invariance() {
        let dir = std::env::temp_dir().join("conekit_classify_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("identity.mat");
        std::fs::write(&path, "# 2 2\n1 0\n0 1\n").unwrap();
        let report = cmd_classify(&path, "orthant 2", "orthant 2", None).unwrap();
        let field = |text: &str, key: &str| -> f64 {
            text.lines()
                .find_map(|l| l.strip_prefix(&format!("{key}=")))
                .unwrap_or_else(|| panic!("missing {key} in {text}"))
                .parse()
                .unwrap()
        };
        assert!(report.contains("status=dual_feasible"), "report: {report}");
        assert!(field(&report, "dist_dual") <= field(&report, "tol"));
        assert_abs_diff_eq!(field(&report, "dist_primal"), 1.0, epsilon = 1e-6);
        // Scaling the matrix by ten leaves the condition number unchanged.
        let scaled = dir.join("scaled.mat");
        std::fs::write(&scaled, "# 2 2\n10 0\n0 10\n").unwrap();
        let scaled_report = cmd_classify(&scaled, "orthant 2", "orthant 2", None).unwrap();
        assert_abs_diff_eq!(
            field(&report, "renegar"),
            field(&scaled_report, "renegar"),
            epsilon = 1e-6 * field(&report, "renegar")
        );
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn figure2_reruns_are_byte_identical() {
        let base = std::env::temp_dir().join("conekit_fig2_test");
        let _ = std::fs::remove_dir_all(&base);
        let run = |sub: &str| -> Vec<(String, String)> {
            let dir = base.join(sub);
            let paths =
                cmd_figure2("circ 3 1.0", "circ 4 1.0", 120, 0x5eed, None, &dir).unwrap();
            assert_eq!(paths.len(), 9);
            paths
                .iter()
                .map(|p| {
                    (
                        p.file_name().unwrap().to_string_lossy().into_owned(),
                        std::fs::read_to_string(p).unwrap(),
                    )
                })
                .collect()
        };
        let a = run("a");
        let b = run("b");
        assert_eq!(a, b);
        // The empirical cdf table runs from 0 to 1 and the bounds dominate.
        let cdf = &a
            .iter()
            .find(|(name, _)| name.starts_with("empirical_cdf_sv"))
            .unwrap()
            .1;
        let last = cdf.lines().last().unwrap();
        assert!(last.ends_with("1.00000000e0"), "cdf tail: {last}");
        let _ = std::fs::remove_dir_all(&base);
    }
}
