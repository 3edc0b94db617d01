//! The limiting density of `Y_{infinity,2}` at `theta = 1`, its cumulant
//! function `K` and Stieltjes transform `G`.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::quad::integrate;
use crate::{Error, Result};

/// Distance from a branch cut below which evaluation is refused.
pub const CUT_TOLERANCE: f64 = 1e-12;

/// Radius inside which `K` is summed from its Taylor series.
const SERIES_RADIUS: f64 = 0.1;

/// `e^{3/2} / pi`, the density at the origin.
pub fn density_at_zero() -> f64 {
    1.5f64.exp() / PI
}

fn on_cut(z: Complex64) -> bool {
    z.im.abs() < CUT_TOLERANCE && z.re.abs() >= 1.0 - CUT_TOLERANCE
}

/// `K(z) = 3/2 - (1 - 1/z)^2 log(1 - z)/2 - (1 + 1/z)^2 log(1 + z)/2`,
/// analytic off `(-inf, -1]` and `[1, inf)`.
#[allow(non_snake_case)]
pub fn K_closed(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::InvalidParameter(format!("non-finite argument {z}")));
    }
    if on_cut(z) {
        return Err(Error::BranchCut(z.to_string()));
    }
    if z.norm() < SERIES_RADIUS {
        return Ok(k_series(z));
    }
    let one = Complex64::new(1.0, 0.0);
    let w = one / z;
    let a = (one - w) * (one - w) * (one - z).ln();
    let b = (one + w) * (one + w) * (one + z).ln();
    Ok(Complex64::new(1.5, 0.0) - 0.5 * (a + b))
}

/// `sum_m 2 z^{2m} / (2m (2m+1) (2m+2))`, summed until terms drop below
/// double precision.
fn k_series(z: Complex64) -> Complex64 {
    let z2 = z * z;
    let mut power = z2;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 1..200 {
        let e = 2.0 * m as f64;
        let term = power * (2.0 / (e * (e + 1.0) * (e + 2.0)));
        acc += term;
        if term.norm() < 1e-18 * acc.norm().max(1e-300) {
            break;
        }
        power *= z2;
    }
    acc
}

/// `G(z) = exp(K(1/z)) / z`, the Stieltjes transform `E[1/(z - Y)]`.
pub fn stieltjes_g(z: Complex64) -> Result<Complex64> {
    if z.im.abs() < CUT_TOLERANCE && z.re.abs() <= 1.0 + CUT_TOLERANCE {
        return Err(Error::BranchCut(z.to_string()));
    }
    let w = Complex64::new(1.0, 0.0) / z;
    Ok(K_closed(w)?.exp() * w)
}

/// The closed-form density `p(t)` on `[-1, 1]`.
pub fn density_p(t: f64) -> Result<f64> {
    if !t.is_finite() || t.abs() > 1.0 {
        return Err(Error::InvalidParameter(format!("density is supported on [-1, 1], got t = {t}")));
    }
    let a = t.abs();
    if a < 1e-8 {
        return Ok(density_at_zero());
    }
    if a == 1.0 {
        return Ok(0.0);
    }
    let log = 1.5 - PI.ln() - a.ln()
        - 0.5 * (1.0 - a).powi(2) * (1.0 / a - 1.0).ln()
        - 0.5 * (1.0 + a).powi(2) * (1.0 / a + 1.0).ln();
    Ok(log.exp() * (0.5 * PI * (1.0 - a).powi(2)).sin())
}

/// `-Im G(t + i eps) / pi`, which tends to `p(t)` as `eps -> 0`.
pub fn inversion_check(t: f64, epsilon: f64) -> Result<f64> {
    Ok(-stieltjes_g(Complex64::new(t, epsilon))?.im / PI)
}

/// Requested absolute tolerance for density quadratures.
pub const QUAD_TOLERANCE: f64 = 1e-10;

/// `int_0^x p(t) dt` for `0 <= x <= 1`.
fn half_mass(x: f64, m: i32) -> Result<f64> {
    let f = |t: f64| t.powi(m) * density_p(t).unwrap_or(0.0);
    let mid = x.min(0.5);
    let mut v = integrate(&f, 0.0, mid, QUAD_TOLERANCE)?.value;
    if x > mid {
        // Near t = 1 the density vanishes like (1 - t)^2; u = (1 - t)^2
        // keeps the integrand smooth there.
        let g = |u: f64| {
            let s = u.sqrt();
            if s == 0.0 {
                return 0.0;
            }
            let t = 1.0 - s;
            f(t) / (2.0 * s)
        };
        let u_hi = 0.25;
        let u_lo = (1.0 - x).powi(2);
        v += integrate(&g, u_lo, u_hi, QUAD_TOLERANCE)?.value;
    }
    Ok(v)
}

/// `int_{-1}^{1} t^m p(t) dt`.
pub fn density_moment(m: usize) -> Result<f64> {
    if m > 12 {
        return Err(Error::bound("m", m, 12));
    }
    if m % 2 == 1 {
        return Ok(0.0);
    }
    Ok(2.0 * half_mass(1.0, m as i32)?)
}

/// Limiting distribution function `P(Y <= t)`.
pub fn cdf(t: f64) -> Result<f64> {
    if t <= -1.0 {
        return Ok(0.0);
    }
    if t >= 1.0 {
        return Ok(1.0);
    }
    let h = half_mass(t.abs(), 0)?;
    Ok(if t >= 0.0 { 0.5 + h } else { 0.5 - h })
}

/// Distribution function tabulated on a uniform grid of `[-1, 1]` and
/// interpolated linearly; used for Kolmogorov-Smirnov distances.
#[derive(Debug, Clone)]
pub struct CdfTable {
    grid: Vec<f64>,
    values: Vec<f64>,
}

impl CdfTable {
    pub fn new(cells: usize) -> Result<Self> {
        let cells = cells.max(2) + cells % 2;
        let step = 2.0 / cells as f64;
        let grid: Vec<f64> = (0..=cells).map(|i| -1.0 + step * i as f64).collect();
        let f = |t: f64| density_p(t).unwrap_or(0.0);
        let half = cells / 2;
        let mut right = vec![0.0; half + 1];
        for i in 0..half {
            let a = grid[half + i];
            let b = grid[half + i + 1];
            right[i + 1] = right[i] + integrate(&f, a, b, QUAD_TOLERANCE / cells as f64)?.value;
        }
        let mut values = vec![0.0; cells + 1];
        for i in 0..=half {
            values[half + i] = 0.5 + right[i];
            values[half - i] = 0.5 - right[i];
        }
        Ok(CdfTable { grid, values })
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= -1.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let cells = self.grid.len() - 1;
        let x = (t + 1.0) / 2.0 * cells as f64;
        let i = (x.floor() as usize).min(cells - 1);
        let frac = x - i as f64;
        self.values[i] * (1.0 - frac) + self.values[i + 1] * frac
    }

    /// Kolmogorov-Smirnov distance between the empirical law of `samples`
    /// and this distribution.
    pub fn ks_distance(&self, samples: &[f64]) -> f64 {
        if samples.is_empty() {
            return 0.0;
        }
        let mut xs = samples.to_vec();
        xs.sort_by(f64::total_cmp);
        let n = xs.len() as f64;
        let mut d: f64 = 0.0;
        for (i, &x) in xs.iter().enumerate() {
            let f = self.eval(x);
            d = d.max((i as f64 + 1.0) / n - f).max(f - i as f64 / n);
        }
        d
    }
}

/// `(t, p(t))` on `points` equally spaced nodes of `[-1, 1]`.
pub fn density_table(points: usize) -> Vec<(f64, f64)> {
    let points = points.max(2);
    (0..points)
        .map(|i| {
            let t = -1.0 + 2.0 * i as f64 / (points - 1) as f64;
            (t, density_p(t).expect("grid inside support"))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::{cumulant_series, limiting_moments};
    use crate::combinat::rational_to_f64;
    use num_rational::BigRational;
    use num_traits::One;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn k_near_zero_and_even() {
        assert!(K_closed(c(1e-9, 0.0)).unwrap().norm() < 1e-17);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let r: f64 = rng.gen_range(0.0..0.95);
            let phi: f64 = rng.gen_range(0.0..2.0 * PI);
            let z = Complex64::from_polar(r, phi);
            let d = K_closed(z).unwrap() - K_closed(-z).unwrap();
            assert!(d.norm() < 1e-12, "{z}");
        }
    }

    #[test]
    fn k_matches_series() {
        let s10 = cumulant_series(2, &BigRational::one(), 20).unwrap();
        assert!((K_closed(c(0.3, 0.0)).unwrap().re - s10.eval_f64(0.3)).abs() < 1e-9);
        let s30 = cumulant_series(2, &BigRational::one(), 30).unwrap();
        for i in 0..=50 {
            let x = -0.5 + i as f64 / 50.0;
            assert!((K_closed(c(x, 0.0)).unwrap().re - s30.eval_f64(x)).abs() < 1e-9, "x={x}");
        }
        // Closed form and series agree across the switch radius.
        let z = c(0.1001, 0.02);
        assert!((K_closed(z).unwrap() - k_series(z)).norm() < 1e-13);
    }

    #[test]
    fn cuts_rejected() {
        assert!(matches!(K_closed(c(1.5, 0.0)), Err(Error::BranchCut(_))));
        assert!(matches!(K_closed(c(-1.0, 1e-13)), Err(Error::BranchCut(_))));
        assert!(K_closed(c(1.5, 1e-6)).is_ok());
        assert!(stieltjes_g(c(0.5, 0.0)).is_err());
    }

    #[test]
    fn g_asymptotics_and_symmetry() {
        let g = stieltjes_g(c(10.0, 0.0)).unwrap();
        let expected = 0.1 + (1.0 / 12.0) / 1e3 + (29.0 / 1440.0) / 1e5;
        assert!((g.re - expected).abs() < 1e-7 && g.im.abs() < 1e-15);
        for z in [c(1.3, 0.4), c(-2.0, 0.7), c(0.2, 0.5)] {
            assert!((stieltjes_g(z.conj()).unwrap() - stieltjes_g(z).unwrap().conj()).norm() < 1e-14);
            assert!((stieltjes_g(-z).unwrap() + stieltjes_g(z).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn density_values() {
        assert!((density_p(0.0).unwrap() - 1.426_566).abs() < 1e-6);
        assert!((density_p(0.0).unwrap() - 1.5f64.exp() / PI).abs() < 1e-15);
        assert!((density_p(1e-7).unwrap() - density_at_zero()).abs() < 1e-4);
        assert_eq!(density_p(1.0).unwrap(), 0.0);
        assert!(density_p(1.01).is_err());
        for i in 1..100 {
            let t = i as f64 / 100.0;
            assert!(density_p(t).unwrap() > 0.0);
            assert_eq!(density_p(t).unwrap(), density_p(-t).unwrap());
        }
    }

    #[test]
    fn inversion_matches_closed_form() {
        for t in [0.3, 0.5, 0.9] {
            let v = inversion_check(t, 1e-6).unwrap();
            assert!((v - density_p(t).unwrap()).abs() < 1e-5, "t={t}");
            assert!((inversion_check(-t, 1e-6).unwrap() - v).abs() < 1e-12);
        }
    }

    #[test]
    fn moments_match_engine() {
        let table = limiting_moments(2, &BigRational::one(), 8).unwrap();
        for m in (0..=8).step_by(2) {
            let exact = rational_to_f64(&table.moments[m]);
            assert!((density_moment(m).unwrap() - exact).abs() < 1e-6, "m={m}");
        }
        assert_eq!(density_moment(3).unwrap(), 0.0);
    }

    #[test]
    fn cdf_endpoints_and_table() {
        assert!((cdf(1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((cdf(0.999_999).unwrap() - 1.0).abs() < 1e-6);
        assert!((cdf(0.0).unwrap() - 0.5).abs() < 1e-15);
        let t = CdfTable::new(400).unwrap();
        for x in [-0.7, -0.2, 0.1, 0.55] {
            assert!((t.eval(x) - cdf(x).unwrap()).abs() < 1e-5);
        }
        assert!((t.eval(1.0) - 1.0).abs() < 1e-12);
    }
}
