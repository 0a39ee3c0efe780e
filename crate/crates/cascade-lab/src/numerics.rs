//! Special functions and generic numeric routines: Gaussian CDF and its log,
//! exponentially tilted Gaussian half-line integrals, Riemann-zeta partial
//! sums with tail bounds, adaptive quadrature, and bracketed scalar
//! minimization.

use thiserror::Error;

pub const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumericsError {
    #[error("argument must be positive, got {0}")]
    NonPositive(f64),
    #[error("series diverges for exponent {0} <= 1")]
    Divergent(f64),
    #[error("tilted integral overflowed (tilt too extreme)")]
    Overflow,
    #[error("objective returned NaN at x = {0}")]
    NanObjective(f64),
    #[error("invalid bracket [{lo}, {hi}]")]
    BadBracket { lo: f64, hi: f64 },
    #[error("quadrature failed to converge; best estimate {estimate}, error bound {error}")]
    QuadratureNoConvergence { estimate: f64, error: f64 },
}

/// Standard normal CDF, absolute error below 1e-15.
pub fn std_normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Standard normal density.
pub fn std_normal_pdf(x: f64) -> f64 {
    (-0.5 * x * x).exp() / SQRT_2PI
}

/// log of the standard normal CDF, stable for arbitrarily negative `x`.
///
/// For x < -37 the plain CDF underflows, so the asymptotic expansion
/// `Phi(x) ~ phi(x)/|x| (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8)` takes over.
pub fn log_std_normal_cdf(x: f64) -> f64 {
    if x > 0.0 {
        // ln(1 - Phi(-x)) with the complement still accurate.
        (-std_normal_cdf(-x)).ln_1p()
    } else if x > -37.0 {
        (0.5 * libm::erfc(-x * FRAC_1_SQRT_2)).ln()
    } else {
        let x2 = x * x;
        let corr = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2)
            + 105.0 / (x2 * x2 * x2 * x2);
        -0.5 * x2 - (-x).ln() - SQRT_2PI.ln() + corr.ln()
    }
}

/// Classical Gaussian tail bounds: for x > 0,
/// `phi(x)(1/x - 1/x^3) <= P(X >= x) <= phi(x)/x`.
pub fn gaussian_tail_bounds(x: f64) -> Result<(f64, f64), NumericsError> {
    if !(x > 0.0) {
        return Err(NumericsError::NonPositive(x));
    }
    let phi = std_normal_pdf(x);
    let lower = phi * (1.0 / x - 1.0 / (x * x * x));
    let upper = phi / x;
    Ok((lower, upper))
}

/// Which half-line a tilted Gaussian integral covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfLine {
    Below,
    Above,
}

/// Query for the integral of `N(s; mu, sigma^2) * exp(eps * s)` over a
/// half-line split at `T`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedGaussianQuery {
    pub mu: f64,
    pub sigma: f64,
    pub eps: f64,
    pub t: f64,
    pub side: HalfLine,
}

/// log of the tilted half-line integral, in closed form:
/// `eps*mu + eps^2 sigma^2/2 + log Phi(+/-(T - mu - eps sigma^2)/sigma)`.
pub fn log_tilted_gaussian_halfline(q: &TiltedGaussianQuery) -> f64 {
    let shift = (q.t - q.mu - q.eps * q.sigma * q.sigma) / q.sigma;
    let z = match q.side {
        HalfLine::Below => shift,
        HalfLine::Above => -shift,
    };
    q.eps * q.mu + 0.5 * q.eps * q.eps * q.sigma * q.sigma + log_std_normal_cdf(z)
}

/// Closed-form tilted Gaussian half-line integral. Overflow (extreme tilt)
/// is reported as an error, never as a silent infinity.
pub fn tilted_gaussian_halfline(q: &TiltedGaussianQuery) -> Result<f64, NumericsError> {
    if !(q.sigma > 0.0) {
        return Err(NumericsError::NonPositive(q.sigma));
    }
    let v = log_tilted_gaussian_halfline(q).exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(NumericsError::Overflow)
    }
}

/// `zeta(x) = sum n^-x` for x > 1, via a partial sum plus an integral-tail
/// bracket. The bracket is sharpened with the trapezoid and first
/// Euler-Maclaurin correction so that modest N reaches tight tolerances even
/// for x near 1; the returned value is the bracket midpoint.
pub fn zeta_partial(x: f64, tol: f64) -> Result<f64, NumericsError> {
    if !(tol > 0.0) {
        return Err(NumericsError::NonPositive(tol));
    }
    if x.is_nan() || x <= 1.0 {
        return Err(NumericsError::Divergent(x));
    }
    // Tail after N: the integral N^(1-x)/(x-1) bracketed and corrected with
    // Euler-Maclaurin terms; the remainder is bounded by the first omitted
    // term, so N is grown until that bound sits strictly inside tol.
    let mut n = 16u64;
    loop {
        let nf = n as f64;
        let rem = x * (x + 1.0) * (x + 2.0) * (x + 3.0) * (x + 4.0) * nf.powf(-x - 5.0) / 30240.0;
        if rem < 0.5 * tol || n >= 1 << 24 {
            let mut sum = 0.0;
            for k in (1..=n).rev() {
                sum += (k as f64).powf(-x);
            }
            let tail = nf.powf(1.0 - x) / (x - 1.0) - 0.5 * nf.powf(-x)
                + x * nf.powf(-x - 1.0) / 12.0
                - x * (x + 1.0) * (x + 2.0) * nf.powf(-x - 3.0) / 720.0;
            return Ok(sum + tail);
        }
        n *= 2;
    }
}

/// Bracketed scalar minimization: a 33-point grid scan refined by
/// golden-section search. Deterministic.
pub fn minimize_scalar<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    tol: f64,
) -> Result<(f64, f64), NumericsError> {
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(NumericsError::BadBracket { lo, hi });
    }
    if !(tol > 0.0) {
        return Err(NumericsError::NonPositive(tol));
    }
    const GRID: usize = 33;
    let step = (hi - lo) / (GRID - 1) as f64;
    let mut best_i = 0usize;
    let mut best_f = f64::INFINITY;
    for i in 0..GRID {
        let x = lo + step * i as f64;
        let v = f(x);
        if v.is_nan() {
            return Err(NumericsError::NanObjective(x));
        }
        if v < best_f {
            best_f = v;
            best_i = i;
        }
    }
    // Golden-section refine around the best grid point.
    let mut a = lo + step * best_i.saturating_sub(1) as f64;
    let mut b = (lo + step * (best_i + 1) as f64).min(hi);
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1.is_nan() {
            return Err(NumericsError::NanObjective(x1));
        }
        if f2.is_nan() {
            return Err(NumericsError::NanObjective(x2));
        }
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    let xmin = 0.5 * (a + b);
    Ok((xmin, f(xmin)))
}

/// Adaptive Simpson quadrature with an absolute-error target. Used as the
/// independent oracle for every closed-form integral in this crate.
pub fn adaptive_quadrature<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<f64, NumericsError> {
    if !(tol > 0.0) {
        return Err(NumericsError::NonPositive(tol));
    }
    struct Ctx<'a, F> {
        f: &'a F,
        evals: usize,
        budget: usize,
    }
    fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
        h / 6.0 * (fa + 4.0 * fm + fb)
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        ctx: &mut Ctx<F>,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> (f64, f64) {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (ctx.f)(lm);
        let frm = (ctx.f)(rm);
        ctx.evals += 2;
        let left = simpson(fa, flm, fm, m - a);
        let right = simpson(fm, frm, fb, b - m);
        let delta = left + right - whole;
        if depth == 0 || ctx.evals > ctx.budget {
            return (left + right + delta / 15.0, delta.abs());
        }
        if delta.abs() <= 15.0 * tol {
            return (left + right + delta / 15.0, delta.abs() / 15.0);
        }
        let (vl, el) = recurse(ctx, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1);
        let (vr, er) = recurse(ctx, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
        (vl + vr, el + er)
    }

    let mut ctx = Ctx { f: &f, evals: 3, budget: 2_000_000 };
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = simpson(fa, fm, fb, b - a);
    let (value, err) = recurse(&mut ctx, a, b, fa, fm, fb, whole, tol, 48);
    if err <= tol.max(1e-300) * 4.0 {
        Ok(value)
    } else {
        Err(NumericsError::QuadratureNoConvergence { estimate: value, error: err })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cdf_symmetry() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        for &x in &[0.3, 1.0, 2.5, 4.0, 7.5] {
            let s = std_normal_cdf(x) + std_normal_cdf(-x);
            assert!((s - 1.0).abs() <= 1e-15, "x={x} sum={s}");
        }
    }

    #[test]
    fn cdf_against_quadrature_oracle() {
        // Phi(5) cross-checked by integrating the density over [-5, 5].
        let mass = adaptive_quadrature(std_normal_pdf, -5.0, 5.0, 1e-13).unwrap();
        let phi5 = std_normal_cdf(5.0);
        let phi_neg5 = std_normal_cdf(-5.0);
        assert!(((phi5 - phi_neg5) - mass).abs() < 1e-12);
        assert!((phi5 - (1.0 - phi_neg5)).abs() < 1e-16);
    }

    #[test]
    fn log_cdf_matches_direct_and_tail() {
        for &x in &[-1.0, -5.0, -10.0, -20.0, -36.0] {
            let direct = std_normal_cdf(x).ln();
            let lg = log_std_normal_cdf(x);
            assert!((lg - direct).abs() < 1e-10 * direct.abs(), "x={x} {lg} {direct}");
        }
        // Deep-tail branch continuity across the switchover.
        let a = log_std_normal_cdf(-37.0 + 1e-7);
        let b = log_std_normal_cdf(-37.0 - 1e-7);
        assert!((a - b).abs() < 1e-4, "{a} vs {b}");
        // Deep tail stays finite where the plain CDF underflows.
        assert!(log_std_normal_cdf(-100.0).is_finite());
        assert!(std_normal_cdf(-100.0) == 0.0);
    }

    #[test]
    fn tail_bounds_sandwich() {
        let mut x = 1.01;
        while x <= 10.0 {
            let (lo, hi) = gaussian_tail_bounds(x).unwrap();
            let tail = std_normal_cdf(-x);
            assert!(lo <= tail && tail <= hi, "x={x} lo={lo} tail={tail} hi={hi}");
            x += 0.49;
        }
    }

    #[test]
    fn tail_bounds_edge_cases() {
        assert!(gaussian_tail_bounds(0.0).is_err());
        assert!(gaussian_tail_bounds(-1.0).is_err());
        let (lo, _) = gaussian_tail_bounds(1.0).unwrap();
        assert_eq!(lo, 0.0);
        let (lo, hi) = gaussian_tail_bounds(10.0).unwrap();
        assert!(hi / lo < 1.011, "ratio {}", hi / lo);
        let (lo, hi) = gaussian_tail_bounds(2.0).unwrap();
        let t = std_normal_cdf(-2.0);
        assert!((t - 0.02275).abs() < 1e-5);
        assert!(lo < t && t < hi);
    }

    #[test]
    fn tilted_halfline_mgf_identity() {
        // Below + Above = full-line integral = exp(eps*mu + eps^2 sigma^2/2).
        for &(mu, sigma, eps, t) in
            &[(0.0, 1.0, 1.0, 0.3), (-1.0, 2.0, 0.5, -2.0), (3.0, 0.5, -1.5, 3.1)]
        {
            let below = tilted_gaussian_halfline(&TiltedGaussianQuery {
                mu, sigma, eps, t, side: HalfLine::Below,
            })
            .unwrap();
            let above = tilted_gaussian_halfline(&TiltedGaussianQuery {
                mu, sigma, eps, t, side: HalfLine::Above,
            })
            .unwrap();
            let mgf = (eps * mu + 0.5 * eps * eps * sigma * sigma).exp();
            assert!(
                ((below + above) / mgf - 1.0).abs() < 1e-12,
                "mu={mu} sigma={sigma} eps={eps}"
            );
        }
    }

    #[test]
    fn tilted_halfline_zero_tilt_is_cdf() {
        let q = TiltedGaussianQuery { mu: 1.0, sigma: 2.0, eps: 0.0, t: 0.5, side: HalfLine::Below };
        let v = tilted_gaussian_halfline(&q).unwrap();
        assert!((v - std_normal_cdf((0.5 - 1.0) / 2.0)).abs() < 1e-15);
    }

    #[test]
    fn tilted_halfline_against_quadrature() {
        // mu=-1, sigma=1, eps=1, T=0, Above: oracle on [T, T+40 sigma].
        let q = TiltedGaussianQuery { mu: -1.0, sigma: 1.0, eps: 1.0, t: 0.0, side: HalfLine::Above };
        let closed = tilted_gaussian_halfline(&q).unwrap();
        let oracle = adaptive_quadrature(
            |s| std_normal_pdf((s + 1.0) / 1.0) * s.exp(),
            0.0,
            40.0,
            1e-13,
        )
        .unwrap();
        assert!((closed - oracle).abs() < 1e-10, "closed={closed} oracle={oracle}");
    }

    #[test]
    fn tilted_halfline_overflow_is_error() {
        let q = TiltedGaussianQuery { mu: 0.0, sigma: 10.0, eps: 50.0, t: 0.0, side: HalfLine::Above };
        assert_eq!(tilted_gaussian_halfline(&q), Err(NumericsError::Overflow));
    }

    #[test]
    fn zeta_basel() {
        let v = zeta_partial(2.0, 1e-12).unwrap();
        assert!((v - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12, "{v}");
    }

    #[test]
    fn zeta_divergence() {
        assert!(matches!(zeta_partial(1.0, 1e-9), Err(NumericsError::Divergent(_))));
        assert!(matches!(zeta_partial(0.5, 1e-9), Err(NumericsError::Divergent(_))));
    }

    #[test]
    fn zeta_against_brute_force() {
        // Direct summation to 1e7 terms for zeta(3).
        let mut brute = 0.0f64;
        for n in (1..=10_000_000u64).rev() {
            let nf = n as f64;
            brute += 1.0 / (nf * nf * nf);
        }
        let v = zeta_partial(3.0, 1e-10).unwrap();
        assert!((v - brute).abs() < 1e-10, "v={v} brute={brute}");
    }

    #[test]
    fn zeta_monotone_in_x() {
        let mut prev = f64::INFINITY;
        let mut x = 1.1;
        while x <= 10.0 {
            let v = zeta_partial(x, 1e-10).unwrap();
            assert!(v < prev, "zeta not decreasing at x={x}");
            prev = v;
            x += 0.18;
        }
    }

    #[test]
    fn minimize_quadratic() {
        let (x, _) = minimize_scalar(|x| (x - 2.0) * (x - 2.0), 0.0, 5.0, 1e-9).unwrap();
        assert!((x - 2.0).abs() < 1e-8);
    }

    #[test]
    fn minimize_boundary() {
        let (x, _) = minimize_scalar(|x| x, 0.0, 1.0, 1e-9).unwrap();
        assert!(x < 1e-7, "boundary minimum, got {x}");
    }

    #[test]
    fn minimize_rejects_nan() {
        let r = minimize_scalar(|x| if x > 2.0 { f64::NAN } else { x }, 0.0, 5.0, 1e-9);
        assert!(matches!(r, Err(NumericsError::NanObjective(_))));
    }

    #[test]
    fn quadrature_basics() {
        let one = adaptive_quadrature(|_| 1.0, 0.0, 1.0, 1e-14).unwrap();
        assert!((one - 1.0).abs() < 1e-14);
        let mass = adaptive_quadrature(std_normal_pdf, -8.0, 8.0, 1e-13).unwrap();
        assert!((mass - 1.0).abs() < 1e-12);
        // MGF identity: integral of N(s;-1,1) e^s over [-40, 40] = e^{-1+1/2}.
        let v = adaptive_quadrature(|s| std_normal_pdf(s + 1.0) * s.exp(), -40.0, 40.0, 1e-12)
            .unwrap();
        assert!((v - (-0.5f64).exp()).abs() < 1e-10);
    }
}
