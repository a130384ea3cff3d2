//! The numerator polynomials `Q_{α,β}` and series `G_{α,β}`, the transform
//! `T_β : a_n ↦ a_n/(n+β)`, and the identities tying them together.
//!
//! `G_{α,β}(ξ) = Σ (-1)^n binom(α+1, n) ξ^n / (n + β)` is `T_β` applied to
//! `(1 - ξ)^(α+1)`. For integer `α` it is a polynomial of degree `α + 1` and
//! `Q_{α,β} = β G_{α,β}` when `-1 < β < 0`.

use num_complex::Complex64;
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::params::KernelParams;
use crate::poly::ComplexPoly;
use crate::series::TruncatedSeries;
use crate::special::{
    abs_binom_tail, abs_binom_tail_in_disk, gen_binom, ln_abs_binom_beyond, ln_beta,
};

/// Largest truncation order [`build_g`] will consider for non-integer `α`.
pub const MAX_SERIES_ORDER: usize = 1 << 20;

/// Outcome of an identity check: the observed residual against the two error
/// sources that can legitimately produce one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityResidual {
    pub residual: f64,
    /// Certified contribution of the truncated tail.
    pub tail_bound: f64,
    /// `64 ε` times the magnitude of the summed terms.
    pub rounding_floor: f64,
}

impl IdentityResidual {
    /// `residual <= factor · tail_bound + rounding_floor`.
    pub fn within(&self, factor: f64) -> bool {
        self.residual <= factor * self.tail_bound + self.rounding_floor
    }

    fn merge(self, other: Self) -> Self {
        Self {
            residual: self.residual.max(other.residual),
            tail_bound: self.tail_bound.max(other.tail_bound),
            rounding_floor: self.rounding_floor.max(other.rounding_floor),
        }
    }
}

impl Default for IdentityResidual {
    fn default() -> Self {
        Self {
            residual: 0.0,
            tail_bound: 0.0,
            rounding_floor: 0.0,
        }
    }
}

fn require_int_alpha(params: &KernelParams) -> Result<u32> {
    params.alpha_int().ok_or(Error::NonIntegerAlpha(params.alpha()))
}

/// `β0 𝓑(α+1, β+1) / 𝓑(α+1, β0+1)`, the factor between `Q_{α,β}` and `G_{α,β0}`.
pub fn q_over_g_factor(params: &KernelParams) -> f64 {
    let a1 = params.alpha() + 1.0;
    let ratio = ln_beta(a1, params.beta() + 1.0).unwrap() - ln_beta(a1, params.beta0() + 1.0).unwrap();
    params.beta0() * ratio.exp()
}

/// `Q_{α,β}` from its closed form, integer `α` only.
///
/// Degree `α + 1`, or the constant `(α+1)𝓑(α+1, β+1)` when `β` is an integer.
pub fn build_q(params: &KernelParams) -> Result<ComplexPoly> {
    let alpha = require_int_alpha(params)?;
    let a = alpha as f64;
    if params.beta_is_integer() {
        let c = (a + 1.0) * ln_beta(a + 1.0, params.beta() + 1.0)?.exp();
        return Ok(ComplexPoly::from_real(&[c]));
    }
    let scale = q_over_g_factor(params);
    let b0 = params.beta0();
    let coeffs: Vec<f64> = (0..=alpha as usize + 1)
        .map(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            scale * sign * gen_binom(a + 1.0, n) / (n as f64 + b0)
        })
        .collect();
    Ok(ComplexPoly::from_real(&coeffs))
}

/// `Q_{α,β}` by the degree-raising recurrence in `α`, seeded with
/// `Q_{0,β}(ξ) = ((m - β)ξ + β - m + 1)/(β + 1)`.
pub fn build_q_recurrence(params: &KernelParams) -> Result<ComplexPoly> {
    let alpha = require_int_alpha(params)?;
    let beta = params.beta();
    let b0 = params.beta0();
    let mut q = ComplexPoly::from_real(&[(1.0 + b0) / (beta + 1.0), -b0 / (beta + 1.0)]);
    let xi_one_minus_xi = ComplexPoly::from_real(&[0.0, 1.0, -1.0]);
    for step in 0..alpha {
        let a = step as f64;
        let lin = ComplexPoly::from_real(&[a + 2.0 + b0, -b0]);
        let next = &(&xi_one_minus_xi * &q.derivative()) + &(&lin * &q);
        q = next.scale(Complex64::new(1.0 / (a + beta + 2.0), 0.0));
    }
    Ok(q)
}

/// Max over coefficients of `|a_n - b_n| / max(|b_n|, 1e-300)`.
pub fn max_rel_coeff_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    let len = a.len().max(b.len());
    let zero = Complex64::new(0.0, 0.0);
    (0..len)
        .map(|n| {
            let x = a.get(n).copied().unwrap_or(zero);
            let y = b.get(n).copied().unwrap_or(zero);
            (x - y).norm() / y.norm().max(1e-300)
        })
        .fold(0.0, f64::max)
}

/// Certified bound on `Σ_{n>N} |binom(α+1, n)| / (n + β0)` for `N + 1 > α + 1`.
fn g_tail_bound(alpha: f64, beta0: f64, order: usize) -> f64 {
    let a = alpha + 1.0;
    let first = order + 1;
    let nf = first as f64;
    if nf <= a {
        return f64::INFINITY;
    }
    let lead = ln_abs_binom_beyond(a, first).exp();
    let c = nf / (nf + beta0);
    lead * c * (1.0 / nf + 1.0 / (a + 1.0))
}

/// Truncation order and certified tail for `G_{α,β0}` at `truncation_tol`.
///
/// Exact (`tail = 0`) for integer `α`. Otherwise the order is the smallest
/// `N >= 2α + 10` whose certified tail is below `truncation_tol`.
pub fn g_truncation(params: &KernelParams, truncation_tol: f64) -> Result<(usize, f64)> {
    if !(truncation_tol > 0.0) {
        return Err(Error::Domain(format!(
            "truncation tolerance must be positive, got {truncation_tol}"
        )));
    }
    if let Some(k) = params.alpha_int() {
        return Ok((k as usize + 1, 0.0));
    }
    let alpha = params.alpha();
    let b0 = params.beta0();
    let floor = ((2.0 * alpha + 10.0).ceil() as usize).max((alpha + 1.0).floor() as usize + 1);
    let bound = |n| g_tail_bound(alpha, b0, n);
    if bound(floor) < truncation_tol {
        return Ok((floor, bound(floor)));
    }
    let mut hi = floor.max(16);
    while bound(hi) >= truncation_tol {
        if hi >= MAX_SERIES_ORDER {
            return Err(Error::TailNotCertified {
                requested: truncation_tol,
                achieved: bound(MAX_SERIES_ORDER),
                max_order: MAX_SERIES_ORDER,
            });
        }
        hi = (hi * 2).min(MAX_SERIES_ORDER);
    }
    let mut lo = (hi / 2).max(floor);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if bound(mid) < truncation_tol {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((hi, bound(hi)))
}

/// `(-1)^n binom(a, n)` for `n = 0..=order`, by the running product.
pub(crate) fn signed_binomials(a: f64, order: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(order + 1);
    let mut b = 1.0;
    for n in 0..=order {
        out.push(b);
        b *= -(a - n as f64) / (n as f64 + 1.0);
    }
    out
}

/// `G_{α,β0}` as a truncated series, truncated per [`g_truncation`].
pub fn build_g(params: &KernelParams, truncation_tol: f64) -> Result<TruncatedSeries> {
    if params.beta_is_integer() {
        return Err(Error::IntegerBeta(params.beta()));
    }
    let (order, tail) = g_truncation(params, truncation_tol)?;
    let b0 = params.beta0();
    let coeffs = signed_binomials(params.alpha() + 1.0, order)
        .into_iter()
        .enumerate()
        .map(|(n, b)| Complex64::new(b / (n as f64 + b0), 0.0))
        .collect();
    Ok(TruncatedSeries::new(coeffs, tail))
}

/// `T_β f`, coefficientwise `a_n / (n + β)`.
pub fn apply_t_beta(f: &TruncatedSeries, beta: f64) -> Result<TruncatedSeries> {
    if !(beta > -1.0 && beta < 0.0) {
        return Err(Error::Domain(format!("T_beta needs -1 < beta < 0, got {beta}")));
    }
    Ok(f.t_beta(beta))
}

/// Max over `samples` of `|z (T_β f)'(z) - f(z) + β T_β f(z)|`, using the exact
/// formal derivative of the kept terms.
pub fn check_tbeta_derivative(f: &TruncatedSeries, beta: f64, samples: &[Complex64]) -> f64 {
    let g = f.t_beta(beta);
    samples
        .iter()
        .map(|&z| {
            let (gv, gd) = g.eval_with_derivative(z);
            (z * gd - f.eval(z) + gv * beta).norm()
        })
        .fold(0.0, f64::max)
}

/// Like [`check_tbeta_derivative`] but also reports the rounding scale.
pub fn check_tbeta_derivative_scaled(
    f: &TruncatedSeries,
    beta: f64,
    samples: &[Complex64],
) -> IdentityResidual {
    let g = f.t_beta(beta);
    samples
        .iter()
        .map(|&z| {
            let (gv, gd) = g.eval_with_derivative(z);
            let r = z.norm();
            let scale: f64 = g
                .coeffs()
                .iter()
                .enumerate()
                .map(|(n, c)| c.norm() * (n as f64 + beta.abs()) * r.powi(n as i32))
                .sum::<f64>()
                + f.coeffs().iter().enumerate().map(|(n, c)| c.norm() * r.powi(n as i32)).sum::<f64>();
            IdentityResidual {
                residual: (z * gd - f.eval(z) + gv * beta).norm(),
                tail_bound: 0.0,
                rounding_floor: 64.0 * f64::EPSILON * scale,
            }
        })
        .fold(IdentityResidual::default(), IdentityResidual::merge)
}

/// Residual of `ξ F'(ξ) + β0 F(ξ) = (1 - ξ)^(α+1)` for `F = G_{α,β0}`.
///
/// For the truncated `F` the left side is the truncated binomial series, so the
/// residual is bounded by the binomial tail at `|ξ|`, reported as `tail_bound`.
pub fn check_ode_z1(
    alpha: f64,
    beta0: f64,
    samples: &[Complex64],
    truncation_tol: f64,
) -> Result<IdentityResidual> {
    if !(beta0 > -1.0 && beta0 < 0.0) {
        return Err(Error::Domain(format!("beta0 must lie in (-1, 0), got {beta0}")));
    }
    let params = KernelParams::new(alpha, beta0)?;
    let g = build_g(&params, truncation_tol)?;
    let order = g.truncation_order();
    let a = alpha + 1.0;
    Ok(samples
        .iter()
        .map(|&xi| {
            let (gv, gd) = g.eval_with_derivative(xi);
            let rhs = ((Complex64::new(1.0, 0.0) - xi).ln() * a).exp();
            let r = xi.norm();
            let tail = if r < 1.0 {
                abs_binom_tail_in_disk(a, order + 1, r)
            } else {
                abs_binom_tail(a, order + 1)
            };
            let scale: f64 = g
                .coeffs()
                .iter()
                .enumerate()
                .map(|(n, c)| c.norm() * (n as f64 + beta0.abs()) * r.powi(n as i32))
                .sum::<f64>()
                + rhs.norm();
            IdentityResidual {
                residual: (xi * gd + gv * beta0 - rhs).norm(),
                tail_bound: tail,
                rounding_floor: 64.0 * f64::EPSILON * scale,
            }
        })
        .fold(IdentityResidual::default(), IdentityResidual::merge))
}

/// One step `G_{α,β} ↦ G_{α+1,β} = ((α+2) G_{α,β} + (1-ξ)^(α+2)) / (α+β+2)`.
pub fn step_recurrence_g(g_prev: &TruncatedSeries, alpha: f64, beta: f64) -> TruncatedSeries {
    let order = if g_prev.is_exact() && alpha.fract() == 0.0 && alpha >= 0.0 {
        g_prev.truncation_order().max(alpha as usize + 2)
    } else {
        g_prev.truncation_order()
    };
    let a2 = alpha + 2.0;
    let denom = alpha + beta + 2.0;
    let coeffs = (0..=order)
        .map(|n| {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            (g_prev.coeff(n) * a2 + sign * gen_binom(a2, n)) / denom
        })
        .collect();
    let tail = (a2 * g_prev.tail_bound() + abs_binom_tail(a2, order + 1)) / denom;
    TruncatedSeries::new(coeffs, tail)
}

/// Max over `n <= n_max` of the relative defect in
/// `Σ_k binom(α+2,k)(-1)^k / 𝓑(α+1, n-k+β+1) = β binom(α+1,n)(-1)^n / ((n+β) 𝓑(α+1,β+1))`.
///
/// Both sides are divided by `1/𝓑(α+1, β+1)`, which turns every Beta ratio into
/// a finite product; the sums are then carried in double-double arithmetic since
/// the alternating terms cancel by many orders of magnitude. The relative error
/// is taken against `max(|RHS|, 2^-53 Σ|terms|)`, so that identically vanishing
/// right-hand sides (integer `α`, `n > α + 1`) are judged at rounding scale.
pub fn convolution_identity_check(alpha: f64, beta: f64, n_max: usize) -> Result<f64> {
    if !(beta > -1.0 && beta < 0.0) {
        return Err(Error::Domain(format!("beta must lie in (-1, 0), got {beta}")));
    }
    KernelParams::new(alpha, beta)?;
    let one = TwoFloat::from(1.0);
    let a = TwoFloat::from(alpha);
    let b = TwoFloat::from(beta);
    let ab2 = a + b + 2.0;

    // ρ_j = 𝓑(α+1, β+1) / 𝓑(α+1, j+β+1)
    let mut rho = Vec::with_capacity(n_max + 1);
    let mut r = one;
    for j in 0..=n_max {
        rho.push(r);
        r = dd_div(r * (ab2 + j as f64), b + 1.0 + j as f64);
    }
    let binoms = |top: TwoFloat| {
        let mut out = Vec::with_capacity(n_max + 1);
        let mut c = one;
        for k in 0..=n_max {
            out.push(c);
            c = c * (top - k as f64) / (k as f64 + 1.0);
        }
        out
    };
    let b2 = binoms(a + 2.0);
    let b1 = binoms(a + 1.0);

    let mut worst: f64 = 0.0;
    for n in 0..=n_max {
        let mut sum = TwoFloat::from(0.0);
        let mut mag = 0.0;
        for k in 0..=n {
            let term = b2[k] * rho[n - k];
            mag += term.hi().abs();
            if k % 2 == 0 {
                sum += term;
            } else {
                sum -= term;
            }
        }
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let rhs = dd_div(b * b1[n] * sign, b + n as f64);
        let defect = (sum - rhs).hi().abs();
        let denom = rhs.hi().abs().max(mag * f64::EPSILON / 2.0).max(1e-300);
        worst = worst.max(defect / denom);
    }
    Ok(worst)
}

/// `num / den` to double-double accuracy: one correction step on top of the
/// quotient by the leading part of `den`.
fn dd_div(num: TwoFloat, den: TwoFloat) -> TwoFloat {
    let q = num / den.hi();
    let r = num - q * den;
    q + r / den.hi()
}

/// `G_{α,β}(1)` with its tail bound. Nonzero whenever `|value| > tail`.
pub fn g_at_one(params: &KernelParams, truncation_tol: f64) -> Result<(f64, f64)> {
    let g = build_g(params, truncation_tol)?;
    Ok((g.eval(Complex64::new(1.0, 0.0)).re, g.tail_bound()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn q_alpha0_closed_form() {
        let p = KernelParams::new(0.0, -0.5).unwrap();
        let q = build_q(&p).unwrap();
        assert_eq!(q.degree(), 1);
        assert!((q.coeff(0) - c(1.0)).norm() < 1e-15);
        assert!((q.coeff(1) - c(1.0)).norm() < 1e-15);
        let qr = build_q_recurrence(&p).unwrap();
        assert!(max_rel_coeff_diff(q.coeffs(), qr.coeffs()) < 1e-14);
    }

    #[test]
    fn q_integer_beta_is_constant() {
        for alpha in 0..6 {
            for m in 0..4 {
                let p = KernelParams::new(alpha as f64, m as f64).unwrap();
                let q = build_q(&p).unwrap();
                assert_eq!(q.degree(), 0);
                let expected = (alpha as f64 + 1.0)
                    * crate::special::beta_fn(alpha as f64 + 1.0, m as f64 + 1.0).unwrap();
                assert_relative_eq!(q.coeff(0).re, expected, max_relative = 1e-13);
                let qr = build_q_recurrence(&p).unwrap();
                assert!(max_rel_coeff_diff(qr.coeffs(), q.coeffs()) < 1e-12);
            }
        }
    }

    #[test]
    fn q_dual_construction_with_m() {
        for alpha in 0..10 {
            for &beta in &[-0.7, 0.4, 1.25, 2.9] {
                let p = KernelParams::new(alpha as f64, beta).unwrap();
                let q = build_q(&p).unwrap();
                let qr = build_q_recurrence(&p).unwrap();
                assert_eq!(q.degree(), alpha + 1);
                assert!(max_rel_coeff_diff(qr.coeffs(), q.coeffs()) < 1e-12, "{alpha} {beta}");
            }
        }
    }

    #[test]
    fn q_at_one_recurrence() {
        let beta = -0.35;
        for alpha in 0..10u32 {
            let q0 = build_q(&KernelParams::new(alpha as f64, beta).unwrap()).unwrap();
            let q1 = build_q(&KernelParams::new(alpha as f64 + 1.0, beta).unwrap()).unwrap();
            let a = alpha as f64;
            let lhs = q1.eval(c(1.0)).re;
            let rhs = (a + 2.0) / (a + beta + 2.0) * q0.eval(c(1.0)).re;
            assert_relative_eq!(lhs, rhs, max_relative = 1e-12);
            assert!(lhs.abs() > 0.0);
        }
    }

    #[test]
    fn rejects_real_alpha_for_q() {
        let p = KernelParams::new(1.5, -0.5).unwrap();
        assert!(matches!(build_q(&p), Err(Error::NonIntegerAlpha(_))));
        assert!(matches!(build_q_recurrence(&p), Err(Error::NonIntegerAlpha(_))));
    }

    #[test]
    fn g_alpha1_coefficients() {
        let g = build_g(&KernelParams::new(1.0, -0.5).unwrap(), 1e-12).unwrap();
        assert!(g.is_exact());
        let expected = [-2.0, -4.0, 2.0 / 3.0];
        assert_eq!(g.truncation_order(), 2);
        for (n, e) in expected.iter().enumerate() {
            assert!((g.coeff(n) - c(*e)).norm() < 1e-15);
        }
        // G(1) = 𝓑(β, α+2) continued to β < 0: Γ(-0.5)Γ(3)/Γ(2.5) = -16/3
        assert_relative_eq!(g.eval(c(1.0)).re, -16.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn g_alpha0_root() {
        let g = build_g(&KernelParams::new(0.0, -0.5).unwrap(), 1e-12).unwrap();
        assert!(g.eval(c(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn g_rejects_integer_beta() {
        assert!(matches!(
            build_g(&KernelParams::new(2.0, 1.0).unwrap(), 1e-12),
            Err(Error::IntegerBeta(_))
        ));
    }

    #[test]
    fn g_real_alpha_tail_is_certified() {
        let p = KernelParams::new(2.5, -0.3).unwrap();
        let g = build_g(&p, 1e-10).unwrap();
        assert!(g.tail_bound() < 1e-10);
        assert!(g.truncation_order() >= 15);
        // brute-force the tail far beyond the order
        let n0 = g.truncation_order() + 1;
        let mut b = 1.0f64;
        let mut brute = 0.0;
        for n in 0..400_000usize {
            if n >= n0 {
                brute += b.abs() / (n as f64 - 0.3);
            }
            b *= (3.5 - n as f64) / (n as f64 + 1.0);
        }
        assert!(brute <= g.tail_bound());
        assert!(g.tail_bound() < 10.0 * brute);
    }

    #[test]
    fn g_at_one_matches_gamma_ratio_for_real_alpha() {
        // 𝓑(β, α+2) with Γ(β) = Γ(β+1)/β
        let (alpha, beta) = (2.5, -0.3);
        let p = KernelParams::new(alpha, beta).unwrap();
        let (v, tail) = g_at_one(&p, 1e-12).unwrap();
        let lg = crate::special::ln_gamma;
        let expected = (lg(beta + 1.0).unwrap() + lg(alpha + 2.0).unwrap()
            - lg(alpha + beta + 2.0).unwrap())
        .exp()
            / beta;
        assert!((v - expected).abs() <= tail + 1e-13);
    }

    #[test]
    fn t_beta_of_p_alpha_is_g() {
        for alpha in 0..8u32 {
            for &beta in &[-0.9, -0.5, -0.1] {
                let f = TruncatedSeries::from_poly(&ComplexPoly::p_alpha(alpha));
                let t = apply_t_beta(&f, beta).unwrap();
                let g = build_g(&KernelParams::new(alpha as f64, beta).unwrap(), 1e-12).unwrap();
                assert!(max_rel_coeff_diff(t.coeffs(), g.coeffs()) < 1e-15);
            }
        }
    }

    #[test]
    fn t_beta_linear_case() {
        let (a0, a1, beta) = (2.0, -3.0, -0.4);
        let f = TruncatedSeries::from_real(&[a0, a1], 0.0);
        let t = apply_t_beta(&f, beta).unwrap();
        let root = -(a0 / a1) * (beta + 1.0) / beta;
        assert!(t.eval(c(root)).norm() < 1e-14);
        let zero = TruncatedSeries::from_real(&[0.0], 0.0);
        assert_eq!(apply_t_beta(&zero, beta).unwrap().coeff(0), c(0.0));
        assert!(apply_t_beta(&f, 0.0).is_err());
    }

    #[test]
    fn t_beta_derivative_at_one() {
        let f = TruncatedSeries::from_poly(&ComplexPoly::p_alpha(1));
        let r = check_tbeta_derivative(&f, -0.5, &[c(1.0)]);
        assert!(r < 1e-12);
        let g = f.t_beta(-0.5);
        let (_, d) = g.eval_with_derivative(c(1.0));
        assert_relative_eq!(d.re, -8.0 / 3.0, max_relative = 1e-14);
        let zero = TruncatedSeries::from_real(&[0.0], 0.0);
        assert_eq!(check_tbeta_derivative(&zero, -0.5, &[c(0.3)]), 0.0);
    }

    #[test]
    fn ode_at_origin_and_integer_alpha() {
        let r = check_ode_z1(3.0, -0.4, &[c(0.0), Complex64::new(0.3, 0.5), c(-0.9)], 1e-12).unwrap();
        assert!(r.residual < 1e-12);
        assert_eq!(r.tail_bound, 0.0);
    }

    #[test]
    fn ode_real_alpha_against_long_series() {
        let xi = c(0.5);
        let r = check_ode_z1(2.5, -0.3, &[xi], 1e-10).unwrap();
        assert!(r.within(10.0), "{r:?}");
        assert!(r.residual < 1e-10);
        // independent oracle: truncate at N = 200 directly
        let a = 3.5;
        let mut lhs = Complex64::new(0.0, 0.0);
        for n in 0..=200 {
            let bn = gen_binom(a, n) * if n % 2 == 0 { 1.0 } else { -1.0 };
            lhs += xi.powu(n as u32) * bn;
        }
        let rhs = ((Complex64::new(1.0, 0.0) - xi).ln() * a).exp();
        assert!((lhs - rhs).norm() < 1e-15);
    }

    #[test]
    fn recurrence_alpha0_to_1() {
        let g0 = build_g(&KernelParams::new(0.0, -0.5).unwrap(), 1e-12).unwrap();
        let g1 = step_recurrence_g(&g0, 0.0, -0.5);
        assert_eq!(g1.truncation_order(), 2);
        let expected = [-2.0, -4.0, 2.0 / 3.0];
        for (n, e) in expected.iter().enumerate() {
            assert!((g1.coeff(n) - c(*e)).norm() < 1e-14);
        }
    }

    #[test]
    fn recurrence_is_affine_with_expected_slope() {
        let (alpha, beta) = (1.0, -0.25);
        let g = TruncatedSeries::from_real(&[0.3, -1.2, 0.7], 0.0);
        let zero = TruncatedSeries::from_real(&[0.0, 0.0, 0.0], 0.0);
        let lhs = step_recurrence_g(&g, alpha, beta);
        let base = step_recurrence_g(&zero, alpha, beta);
        let s = (alpha + 2.0) / (alpha + beta + 2.0);
        for n in 0..=2 {
            assert!((lhs.coeff(n) - base.coeff(n) - g.coeff(n) * s).norm() < 1e-15);
        }
    }

    #[test]
    fn recurrence_real_alpha_within_tail() {
        let (alpha, beta) = (1.7, -0.6);
        let g0 = build_g(&KernelParams::new(alpha, beta).unwrap(), 1e-9).unwrap();
        let g1 = step_recurrence_g(&g0, alpha, beta);
        let direct = build_g(&KernelParams::new(alpha + 1.0, beta).unwrap(), 1e-9).unwrap();
        let n = g1.truncation_order().min(direct.truncation_order());
        for k in 0..=n {
            let d = (g1.coeff(k) - direct.coeff(k)).norm();
            assert!(d <= 1e-13 * direct.coeff(k).norm().max(1e-3), "k = {k}");
        }
        assert!(g1.tail_bound().is_finite());
    }

    #[test]
    fn convolution_identity_cases() {
        // n = 0 reduces to a single term
        assert!(convolution_identity_check(2.3, -0.4, 0).unwrap() < 1e-15);
        assert!(convolution_identity_check(1.0, -0.5, 20).unwrap() < 1e-10);
        assert!(convolution_identity_check(3.7, -0.2, 20).unwrap() < 1e-9);
        assert!(convolution_identity_check(5.9, -0.05, 20).unwrap() < 1e-9);
    }

    #[test]
    fn convolution_identity_detects_wrong_parameters() {
        // the identity is sharp: perturbing α on one side breaks it
        let wrong = {
            let (alpha, beta) = (2.0, -0.5);
            let n = 2usize;
            let d: f64 = (0..=n)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    sign * gen_binom(alpha + 2.1, k)
                        / crate::special::beta_fn(alpha + 1.0, (n - k) as f64 + beta + 1.0).unwrap()
                })
                .sum();
            let rhs = beta / crate::special::beta_fn(alpha + 1.0, beta + 1.0).unwrap()
                * gen_binom(alpha + 1.0, n)
                / (n as f64 + beta);
            ((d - rhs) / rhs).abs()
        };
        assert!(wrong > 1e-3);
    }
}
