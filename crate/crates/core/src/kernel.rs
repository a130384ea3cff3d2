//! Evaluation of the reproducing kernel `𝕂_{α,β}(w, z) = 𝒦_{α,β}(w z̄)`,
//! the normalized family `β(1+β) G_{α,β}`, and the even/odd numerators.

use num_complex::Complex64;

use crate::analytic::{build_q, g_truncation, signed_binomials};
use crate::error::{Error, Result};
use crate::params::KernelParams;
use crate::poly::ComplexPoly;
use crate::series::TruncatedSeries;
use crate::special::ln_beta;

/// Certified tail used for the numerator series when `α` is not an integer.
pub const KERNEL_SERIES_TOL: f64 = 1e-14;

/// Kernel refuses arguments with `|1 - ξ|` below this.
pub const SINGULAR_DISTANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelValue {
    pub value: Complex64,
    /// `ξ = w z̄`.
    pub argument: Complex64,
    pub params: KernelParams,
}

/// Precomputed pieces of `𝒦_{α,β}(ξ) = c · 𝒦_{α,β0}(ξ) / ξ^m`, where
/// `𝒦_{α,β0}(ξ) = Q_{α,β0}(ξ) / (1-ξ)^(α+2)` and `c = 𝓑(α+1,β+1)/𝓑(α+1,β0+1)`.
#[derive(Debug, Clone)]
pub struct KernelEvaluator {
    params: KernelParams,
    /// `Q_{α,β0}`; `None` when `β0 = 0`, where it is identically 1.
    numerator: Option<TruncatedSeries>,
    prefactor: f64,
}

impl KernelEvaluator {
    pub fn new(params: KernelParams) -> Result<Self> {
        let reduced = params.reduced();
        let numerator = if params.beta_is_integer() {
            None
        } else if params.alpha_int().is_some() {
            Some(TruncatedSeries::from_poly(&build_q(&reduced)?))
        } else {
            // Q_{α,β0} = β0 G_{α,β0}
            let (order, tail) = g_truncation(&reduced, KERNEL_SERIES_TOL)?;
            let b0 = params.beta0();
            let coeffs = signed_binomials(params.alpha() + 1.0, order)
                .into_iter()
                .enumerate()
                .map(|(n, b)| Complex64::new(b0 * b / (n as f64 + b0), 0.0))
                .collect();
            Some(TruncatedSeries::new(coeffs, tail * b0.abs()))
        };
        let prefactor = if params.m() == 0 {
            1.0
        } else {
            let a1 = params.alpha() + 1.0;
            (ln_beta(a1, params.beta() + 1.0)? - ln_beta(a1, params.beta0() + 1.0)?).exp()
        };
        Ok(Self {
            params,
            numerator,
            prefactor,
        })
    }

    pub fn params(&self) -> &KernelParams {
        &self.params
    }

    /// Tail bound of the numerator series (0 for integer `α`).
    pub fn numerator_tail(&self) -> f64 {
        self.numerator.as_ref().map_or(0.0, |s| s.tail_bound())
    }

    /// `𝒦_{α,β}(ξ)` for `ξ` in the open unit disk.
    pub fn eval_xi(&self, xi: Complex64) -> Result<Complex64> {
        if !(xi.norm() < 1.0) {
            return Err(Error::Domain(format!("kernel argument {xi} outside the unit disk")));
        }
        let one_minus = Complex64::new(1.0, 0.0) - xi;
        if one_minus.norm() < SINGULAR_DISTANCE {
            return Err(Error::Singular(format!("|1 - xi| = {:e}", one_minus.norm())));
        }
        let m = self.params.m();
        if m >= 1 && xi == Complex64::new(0.0, 0.0) {
            return Err(Error::Singular("xi = 0 with a pole of order m >= 1".into()));
        }
        let denom = match self.params.alpha_int() {
            Some(k) => one_minus.powi(k as i32 + 2),
            None => (one_minus.ln() * (self.params.alpha() + 2.0)).exp(),
        };
        let num = self
            .numerator
            .as_ref()
            .map_or(Complex64::new(1.0, 0.0), |q| q.eval(xi));
        let mut value = num / denom;
        if m >= 1 {
            value = value * self.prefactor / xi.powi(m as i32);
        }
        Ok(value)
    }

    /// `𝕂_{α,β}(w, z)` for `w, z` in the open unit disk.
    pub fn eval(&self, w: Complex64, z: Complex64) -> Result<KernelValue> {
        if !(w.norm() < 1.0 && z.norm() < 1.0) {
            return Err(Error::Domain(format!("kernel points {w}, {z} must lie in the unit disk")));
        }
        let argument = w * z.conj();
        Ok(KernelValue {
            value: self.eval_xi(argument)?,
            argument,
            params: self.params,
        })
    }
}

/// One-shot `𝕂_{α,β}(w, z)`.
pub fn eval_kernel(params: &KernelParams, w: Complex64, z: Complex64) -> Result<Complex64> {
    Ok(KernelEvaluator::new(*params)?.eval(w, z)?.value)
}

/// The orthonormal basis element `e_n(z) = sqrt(𝓑(α+1,β+1)/𝓑(α+1,n+β+1)) z^n`, `n >= -m`.
pub fn basis_element(params: &KernelParams, n: i64, z: Complex64) -> Result<Complex64> {
    if n < -(params.m() as i64) {
        return Err(Error::Domain(format!("basis index {n} below -m = -{}", params.m())));
    }
    let a1 = params.alpha() + 1.0;
    let ln_ratio = ln_beta(a1, params.beta() + 1.0)? - ln_beta(a1, n as f64 + params.beta() + 1.0)?;
    Ok(z.powi(n as i32) * (0.5 * ln_ratio).exp())
}

/// `β(1+β) G_{α,β}` as a series with coefficients
/// `1 + β`, `-β(α+1)`, then `β(1+β)(-1)^n binom(α+1,n)/(n+β)`, none of which
/// divides by `β` or `1 + β`.
pub fn normalized_g_series(params: &KernelParams, truncation_tol: f64) -> Result<TruncatedSeries> {
    let beta = params.beta();
    if !(beta > -1.0 && beta < 0.0) {
        return Err(Error::Domain(format!("normalized family needs -1 < beta < 0, got {beta}")));
    }
    let (order, tail) = g_truncation(params, truncation_tol)?;
    let a = params.alpha() + 1.0;
    let scale = beta * (1.0 + beta);
    let coeffs = signed_binomials(a, order)
        .into_iter()
        .enumerate()
        .map(|(n, b)| {
            let c = match n {
                0 => 1.0 + beta,
                1 => -beta * a,
                _ => scale * b / (n as f64 + beta),
            };
            Complex64::new(c, 0.0)
        })
        .collect();
    Ok(TruncatedSeries::new(coeffs, tail * scale.abs()))
}

/// `β(1+β) G_{α,β}(ξ)` for `ξ` in the closed unit disk.
pub fn eval_normalized_g(params: &KernelParams, xi: Complex64) -> Result<Complex64> {
    if xi.norm() > 1.0 + 1e-12 {
        return Err(Error::Domain(format!("{xi} outside the closed unit disk")));
    }
    Ok(normalized_g_series(params, KERNEL_SERIES_TOL)?.eval(xi))
}

/// Numerators of the even and odd kernels:
/// `I(ξ) = (1+ξ)^(α+2) Q(ξ) + (1-ξ)^(α+2) Q(-ξ)` and `J` with a minus sign.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenOddPolys {
    pub i: ComplexPoly,
    pub j: ComplexPoly,
    pub params: KernelParams,
}

impl EvenOddPolys {
    /// `𝒦_{α,β}(ξ) (1-ξ²)^(α+2)`, i.e. `(I + J)/2`.
    pub fn kernel_numerator(&self) -> ComplexPoly {
        (&self.i + &self.j).scale(Complex64::new(0.5, 0.0))
    }
}

/// `I` and `J` for integer `α` and `-1 < β <= 0`, split by parity from
/// `A(ξ) = (1+ξ)^(α+2) Q(ξ)` so that the symmetry is exact.
pub fn build_even_odd(params: &KernelParams) -> Result<EvenOddPolys> {
    let alpha = params.alpha_int().ok_or(Error::NonIntegerAlpha(params.alpha()))?;
    if params.m() != 0 {
        return Err(Error::Domain(format!(
            "even/odd numerators need -1 < beta <= 0, got {}",
            params.beta()
        )));
    }
    let a = &ComplexPoly::binomial_power(alpha + 2, 1.0) * &build_q(params)?;
    let two = Complex64::new(2.0, 0.0);
    Ok(EvenOddPolys {
        i: a.parity_part(false).scale(two),
        j: a.parity_part(true).scale(two),
        params: *params,
    })
}

/// Zeros of `I_{α,0}` (`z_k = -i tan((2k+1)π/(2(α+2)))`) and of `J_{α,0}`
/// (`w_k = -i tan(kπ/(α+2))`), `k = 0..=α+1`, with the pole index dropped.
pub fn closed_form_zeros_beta0(alpha: u32) -> (Vec<Complex64>, Vec<Complex64>) {
    let d = alpha as u64 + 2;
    let tan_point = |num: u64, den: u64| {
        let t = (num as f64 * std::f64::consts::PI / den as f64).tan();
        Complex64::new(0.0, -t)
    };
    // (2k+1)/(2d) = 1/2  <=>  2k + 1 = d
    let even = (0..d).filter(|k| 2 * k + 1 != d).map(|k| tan_point(2 * k + 1, 2 * d)).collect();
    // k/d = 1/2  <=>  2k = d
    let odd = (0..d).filter(|k| 2 * k != d).map(|k| tan_point(k, d)).collect();
    (even, odd)
}

/// `ε_{α,0}, Θ_{α,0}, ε̂_{α,0}, Θ̂_{α,0}` from the closed-form table with `α = 4τ + r`.
pub fn even_odd_table(alpha: u32) -> [usize; 4] {
    let tau = (alpha / 4) as usize;
    let r = alpha % 4;
    let eps = if r == 0 { 2 * tau } else { 2 * tau + 2 };
    let theta = if r <= 2 { 2 * tau + 1 } else { 2 * tau + 3 };
    let eps_hat = 2 * tau + 2;
    let theta_hat = if r <= 1 { 2 * tau + 1 } else { 2 * tau + 3 };
    [eps, theta, eps_hat, theta_hat]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn params(a: f64, b: f64) -> KernelParams {
        KernelParams::new(a, b).unwrap()
    }

    /// Partial sums of `Σ_{n>=-m} 𝓑(α+1,β+1)/𝓑(α+1,n+β+1) ξ^n`.
    fn basis_series(p: &KernelParams, xi: Complex64, terms: usize) -> Complex64 {
        let a1 = p.alpha() + 1.0;
        let lb = ln_beta(a1, p.beta() + 1.0).unwrap();
        (-(p.m() as i64)..terms as i64)
            .map(|n| {
                let w = (lb - ln_beta(a1, n as f64 + p.beta() + 1.0).unwrap()).exp();
                xi.powi(n as i32) * w
            })
            .sum()
    }

    #[test]
    fn worked_examples() {
        assert_eq!(eval_kernel(&params(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)).unwrap(), c(1.0, 0.0));
        let k = KernelEvaluator::new(params(1.0, 0.0)).unwrap();
        assert_relative_eq!(k.eval_xi(c(0.5, 0.0)).unwrap().re, 8.0, max_relative = 1e-15);
        let k = KernelEvaluator::new(params(0.0, 1.0)).unwrap();
        let v = k.eval_xi(c(0.5, 0.0)).unwrap();
        assert_relative_eq!(v.re, 4.0, max_relative = 1e-14);
        let oracle = basis_series(&params(0.0, 1.0), c(0.5, 0.0), 80);
        assert!((v - oracle).norm() < 1e-12);
    }

    #[test]
    fn beta_zero_is_plain_power() {
        for alpha in 0..6 {
            let k = KernelEvaluator::new(params(alpha as f64, 0.0)).unwrap();
            let xi = c(0.3, -0.45);
            let mut p = c(1.0, 0.0);
            for _ in 0..alpha + 2 {
                p *= c(1.0, 0.0) - xi;
            }
            let expected = c(1.0, 0.0) / p;
            let got = k.eval_xi(xi).unwrap();
            assert!((got - expected).norm() <= 8.0 * f64::EPSILON * expected.norm());
        }
    }

    #[test]
    fn matches_basis_series() {
        let cases = [(0.0, -0.5), (2.0, -0.25), (1.5, -0.8), (3.0, 1.0), (2.0, 1.6), (2.5, 2.3)];
        let xi = c(0.2, 0.25);
        for (a, b) in cases {
            let p = params(a, b);
            let v = KernelEvaluator::new(p).unwrap().eval_xi(xi).unwrap();
            let oracle = basis_series(&p, xi, 120);
            assert!((v - oracle).norm() < 1e-11 * oracle.norm(), "({a}, {b}): {v} vs {oracle}");
        }
    }

    #[test]
    fn hermitian_and_positive_diagonal() {
        for (a, b) in [(0.0, -0.5), (2.0, -0.25), (1.5, -0.8), (3.0, 1.0)] {
            let k = KernelEvaluator::new(params(a, b)).unwrap();
            for j in 0..40 {
                let t = j as f64;
                let w = Complex64::from_polar(0.05 + 0.9 * ((t * 0.37).sin().abs()), t * 1.3);
                let z = Complex64::from_polar(0.05 + 0.9 * ((t * 0.71).cos().abs()), -t * 0.7);
                let kwz = k.eval(w, z).unwrap().value;
                let kzw = k.eval(z, w).unwrap().value;
                assert!((kwz - kzw.conj()).norm() <= 1e-12 * kwz.norm().max(1.0));
                let d = k.eval(z, z).unwrap().value;
                assert!(d.re > 0.0 && d.im.abs() <= 1e-12 * d.re);
            }
        }
    }

    #[test]
    fn singular_inputs() {
        let k = KernelEvaluator::new(params(1.0, 1.0)).unwrap();
        assert!(matches!(k.eval_xi(c(0.0, 0.0)), Err(Error::Singular(_))));
        let k = KernelEvaluator::new(params(1.0, -0.5)).unwrap();
        assert!(matches!(k.eval_xi(c(1.0 - 1e-13, 0.0)), Err(Error::Singular(_))));
        assert!(k.eval(c(1.0, 0.0), c(0.1, 0.0)).is_err());
    }

    #[test]
    fn integer_beta_is_limit_from_below() {
        // β → m⁻ through the reduced family
        for (a, m) in [(0.0, 1.0), (2.0, 1.0), (1.0, 2.0)] {
            let exact = KernelEvaluator::new(params(a, m)).unwrap();
            let near = KernelEvaluator::new(params(a, m - 1e-6)).unwrap();
            for xi in [c(0.3, 0.0), c(-0.2, 0.5), c(0.6, -0.3)] {
                let e = exact.eval_xi(xi).unwrap();
                let n = near.eval_xi(xi).unwrap();
                assert!((e - n).norm() < 1e-4 * e.norm(), "{a} {m} {xi}");
            }
        }
    }

    #[test]
    fn normalized_family() {
        let p = params(2.0, -1e-8);
        assert!((eval_normalized_g(&p, c(0.3, 0.0)).unwrap() - c(1.0, 0.0)).norm() < 1e-6);
        let p = params(2.0, -1.0 + 1e-8);
        assert!((eval_normalized_g(&p, c(0.3, 0.0)).unwrap() - c(0.9, 0.0)).norm() < 1e-6);
        let p = params(1.5, -0.3);
        assert_eq!(eval_normalized_g(&p, c(0.0, 0.0)).unwrap(), c(0.7, 0.0));
        // agrees with β(1+β)G computed directly away from the endpoints
        let p = params(3.0, -0.4);
        let g = crate::analytic::build_g(&p, 1e-14).unwrap();
        let xi = c(0.4, -0.6);
        let direct = g.eval(xi) * (-0.4 * 0.6);
        assert!((eval_normalized_g(&p, xi).unwrap() - direct).norm() < 1e-14);
    }

    #[test]
    fn even_odd_beta0_alpha0() {
        let eo = build_even_odd(&params(0.0, 0.0)).unwrap();
        assert_eq!(eo.i, ComplexPoly::from_real(&[2.0, 0.0, 2.0]));
        assert_eq!(eo.j.coeff(0), c(0.0, 0.0));
    }

    #[test]
    fn even_odd_identities() {
        for alpha in 0..8u32 {
            for beta in [0.0, -0.3, -0.85] {
                let p = params(alpha as f64, beta);
                let eo = build_even_odd(&p).unwrap();
                let scale = eo.i.max_abs_coeff().max(eo.j.max_abs_coeff());
                for n in 0..=eo.i.degree().max(eo.j.degree()) {
                    if n % 2 == 1 {
                        assert!(eo.i.coeff(n).norm() <= 1e-13 * scale);
                    } else {
                        assert!(eo.j.coeff(n).norm() <= 1e-13 * scale);
                    }
                }
                let k = KernelEvaluator::new(p).unwrap();
                for xi in [c(0.3, 0.1), c(-0.5, 0.4), c(0.0, -0.8)] {
                    let d = (c(1.0, 0.0) - xi * xi).powi(alpha as i32 + 2) * 2.0;
                    let e = (k.eval_xi(xi).unwrap() + k.eval_xi(-xi).unwrap()) * 0.5;
                    let o = (k.eval_xi(xi).unwrap() - k.eval_xi(-xi).unwrap()) * 0.5;
                    assert!((eo.i.eval(xi) / d - e).norm() < 1e-11 * e.norm().max(1.0));
                    assert!((eo.j.eval(xi) / d - o).norm() < 1e-11 * o.norm().max(1.0));
                }
            }
        }
    }

    #[test]
    fn closed_form_zeros_vanish() {
        for alpha in 0..10u32 {
            let (even, odd) = closed_form_zeros_beta0(alpha);
            let eo = build_even_odd(&params(alpha as f64, 0.0)).unwrap();
            assert_eq!(even.len(), eo.i.degree());
            assert_eq!(odd.len(), eo.j.degree());
            for z in even {
                assert!(eo.i.eval(z).norm() <= 1e-10 * eo.i.eval_abs(z.norm()));
            }
            for w in odd {
                assert!(eo.j.eval(w).norm() <= 1e-10 * eo.j.eval_abs(w.norm()).max(1.0));
            }
        }
        let (_, odd) = closed_form_zeros_beta0(0);
        assert_eq!(odd, vec![c(0.0, 0.0)]);
    }

    #[test]
    fn closed_form_counts_match_table() {
        for alpha in 0..=12u32 {
            let (even, odd) = closed_form_zeros_beta0(alpha);
            let open = |v: &[Complex64]| v.iter().filter(|z| z.norm() < 1.0 - 1e-12).count();
            let closed = |v: &[Complex64]| v.iter().filter(|z| z.norm() <= 1.0 + 1e-12).count();
            let t = even_odd_table(alpha);
            assert_eq!([open(&even), open(&odd), closed(&even), closed(&odd)], t, "alpha {alpha}");
        }
        assert_eq!(&even_odd_table(3)[..2], &[2, 3]);
    }
}
