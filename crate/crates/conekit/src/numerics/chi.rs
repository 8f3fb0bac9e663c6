//! Chi distributions with arbitrary nonnegative integer degrees of freedom,
//! including the degenerate zero-degree point mass and mixed-tail integrals.

use super::gamma::{ln_gamma, reg_lower_gamma};
use super::quad::{adaptive_simpson, QuadratureConfig};
use super::NumericsError;

/// Chi distribution with `k` degrees of freedom; `k = 0` is the point mass
/// at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChiDist {
    k: usize,
}

impl ChiDist {
    pub fn new(k: usize) -> Self {
        ChiDist { k }
    }

    pub fn dof(&self) -> usize {
        self.k
    }

    pub fn pdf(&self, x: f64) -> f64 {
        chi_pdf(self.k, x)
    }

    pub fn cdf(&self, x: f64) -> f64 {
        chi_cdf(self.k, x)
    }

    pub fn moment(&self, r: f64) -> f64 {
        chi_moment(self.k, r)
    }

    /// Abscissa beyond which the tail mass is below 1e-14.
    pub fn tail_cut(&self) -> f64 {
        chi_tail_cut(self.k)
    }
}

/// Density of the chi distribution with `k` degrees of freedom.
pub fn chi_pdf(k: usize, x: f64) -> f64 {
    if k == 0 || x < 0.0 {
        return 0.0;
    }
    if x == 0.0 {
        return if k == 1 {
            (2.0 / std::f64::consts::PI).sqrt()
        } else {
            0.0
        };
    }
    let kf = k as f64;
    let log_pdf =
        (0.5 * kf - 1.0) * (0.5 * x * x).ln() - 0.5 * x * x - ln_gamma(0.5 * kf) + x.ln();
    log_pdf.exp()
}

/// Distribution function of the chi distribution with `k` degrees of freedom.
pub fn chi_cdf(k: usize, x: f64) -> f64 {
    if k == 0 {
        return if x >= 0.0 { 1.0 } else { 0.0 };
    }
    if x <= 0.0 {
        return 0.0;
    }
    reg_lower_gamma(0.5 * k as f64, 0.5 * x * x)
}

/// Raw moment E[chi_k^r] for real order r >= 0.
pub fn chi_moment(k: usize, r: f64) -> f64 {
    debug_assert!(r >= 0.0);
    if k == 0 {
        return if r == 0.0 { 1.0 } else { 0.0 };
    }
    if r == 0.0 {
        return 1.0;
    }
    let kf = k as f64;
    (0.5 * r * std::f64::consts::LN_2 + ln_gamma(0.5 * (kf + r)) - ln_gamma(0.5 * kf)).exp()
}

/// Truncation point where the chi_k tail mass falls below 1e-14.
pub fn chi_tail_cut(k: usize) -> f64 {
    (k as f64).sqrt() + 10.0
}

/// Which signed combination `chi'_j + chi_i` or `chi'_j - chi_i` to bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailSign {
    Plus,
    Minus,
}

/// Tail probability of a signed combination of two independent chi variables:
/// `P{chi'_j + chi_i >= lam}` for [`TailSign::Plus`] and
/// `P{chi'_j - chi_i >= lam}` for [`TailSign::Minus`].
pub fn mixed_chi_tail(i: usize, j: usize, lam: f64, sign: TailSign) -> Result<f64, NumericsError> {
    mixed_chi_tail_cfg(i, j, lam, sign, &QuadratureConfig::default())
}

/// [`mixed_chi_tail`] with explicit quadrature controls.
pub fn mixed_chi_tail_cfg(
    i: usize,
    j: usize,
    lam: f64,
    sign: TailSign,
    cfg: &QuadratureConfig,
) -> Result<f64, NumericsError> {
    let tail_j = |u: f64| if u <= 0.0 { 1.0 } else { 1.0 - chi_cdf(j, u) };
    if i == 0 && j == 0 {
        return Ok(if lam <= 0.0 { 1.0 } else { 0.0 });
    }
    if i == 0 {
        return Ok(tail_j(lam));
    }
    if j == 0 {
        return Ok(match sign {
            TailSign::Plus => {
                if lam <= 0.0 {
                    1.0
                } else {
                    1.0 - chi_cdf(i, lam)
                }
            }
            TailSign::Minus => {
                if lam <= 0.0 {
                    chi_cdf(i, -lam)
                } else {
                    0.0
                }
            }
        });
    }
    let upper = chi_tail_cut(i).min(cfg.tail_cut);
    let integrand = |x: f64| {
        let arg = match sign {
            TailSign::Plus => lam - x,
            TailSign::Minus => lam + x,
        };
        chi_pdf(i, x) * tail_j(arg)
    };
    let (value, _) = adaptive_simpson(&integrand, 0.0, upper, cfg)?;
    Ok(value.clamp(0.0, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn cdf_spot_values() {
        assert_eq!(chi_cdf(0, 0.5), 1.0);
        assert_eq!(chi_cdf(0, -0.5), 0.0);
        // |N(0,1)| at 1: 2 Phi(1) - 1
        assert_abs_diff_eq!(chi_cdf(1, 1.0), 0.682_689_492_137_086, epsilon = 1e-12);
        // Rayleigh median
        let med = (2.0 * std::f64::consts::LN_2).sqrt();
        assert_abs_diff_eq!(chi_cdf(2, med), 0.5, epsilon = 1e-12);
        // Rayleigh closed form across a grid
        for &x in &[0.2, 0.9, 1.7, 3.3] {
            assert_abs_diff_eq!(chi_cdf(2, x), 1.0 - (-0.5 * x * x).exp(), epsilon = 1e-12);
        }
    }

    #[test]
    fn moments() {
        assert_abs_diff_eq!(
            chi_moment(1, 1.0),
            (2.0 / std::f64::consts::PI).sqrt(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(chi_moment(2, 2.0), 2.0, epsilon = 1e-12);
        assert_eq!(chi_moment(0, 3.0), 0.0);
        assert_eq!(chi_moment(0, 0.0), 1.0);
        for k in 1..=200 {
            assert_abs_diff_eq!(chi_moment(k, 2.0), k as f64, epsilon = 1e-10);
        }
    }

    #[test]
    fn pdf_integrates_to_one() {
        let cfg = QuadratureConfig::default();
        for k in [1usize, 2, 3, 5, 10, 50, 200] {
            let (mass, _) =
                adaptive_simpson(&|x| chi_pdf(k, x), 0.0, chi_tail_cut(k), &cfg).unwrap();
            assert_abs_diff_eq!(mass, 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn mixed_tail_examples() {
        assert_eq!(mixed_chi_tail(0, 0, 0.5, TailSign::Plus).unwrap(), 0.0);
        assert_abs_diff_eq!(
            mixed_chi_tail(0, 2, 1.0, TailSign::Plus).unwrap(),
            (-0.5f64).exp(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            mixed_chi_tail(1, 1, 0.0, TailSign::Minus).unwrap(),
            0.5,
            epsilon = 1e-10
        );
    }

    #[test]
    fn mixed_tail_reference_values() {
        // Independent high-precision quadrature reference points.
        assert_abs_diff_eq!(
            mixed_chi_tail(2, 3, 1.0, TailSign::Plus).unwrap(),
            0.989_236_498_561_044,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            mixed_chi_tail(2, 3, 1.0, TailSign::Minus).unwrap(),
            0.240_252_017_034_591,
            epsilon = 1e-9
        );
        assert_abs_diff_eq!(
            mixed_chi_tail(2, 3, -0.7, TailSign::Minus).unwrap(),
            0.867_605_035_995_761,
            epsilon = 1e-9
        );
    }

    #[test]
    fn mixed_tail_monotone_in_lambda() {
        let mut prev = f64::INFINITY;
        let mut lam = -3.0;
        while lam <= 8.0 {
            let v = mixed_chi_tail(3, 4, lam, TailSign::Plus).unwrap();
            assert!((0.0..=1.0).contains(&v));
            assert!(v <= prev + 1e-12);
            prev = v;
            lam += 0.25;
        }
    }

    #[test]
    fn degenerate_dof_combinations() {
        assert_eq!(mixed_chi_tail(0, 0, -0.1, TailSign::Minus).unwrap(), 1.0);
        // j = 0, minus: P{-chi_i >= lam}
        let v = mixed_chi_tail(2, 0, -1.0, TailSign::Minus).unwrap();
        assert_abs_diff_eq!(v, chi_cdf(2, 1.0), epsilon = 1e-12);
        assert_eq!(mixed_chi_tail(2, 0, 0.5, TailSign::Minus).unwrap(), 0.0);
        // j = 0, plus: plain chi_i tail
        let v = mixed_chi_tail(2, 0, 1.0, TailSign::Plus).unwrap();
        assert_abs_diff_eq!(v, 1.0 - chi_cdf(2, 1.0), epsilon = 1e-12);
        // i = 0: plain chi_j tail regardless of sign
        let v = mixed_chi_tail(0, 3, 2.0, TailSign::Minus).unwrap();
        assert_abs_diff_eq!(v, 1.0 - chi_cdf(3, 2.0), epsilon = 1e-12);
    }
}
