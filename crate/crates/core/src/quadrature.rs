//! Gauss–Jacobi rules on `(0, 1)` and a quadrature check of the reproducing
//! property.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::{basis_element, KernelEvaluator};
use crate::params::KernelParams;
use crate::special::beta_fn;

/// Default number of radial nodes.
pub const DEFAULT_NODES: usize = 64;

/// Angular samples used by [`verify_reproducing`].
pub const ANGULAR_SAMPLES: usize = 256;

/// Nodes and weights for `∫_0^1 g(t) t^β (1-t)^α dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `(β, α)`: exponents of `t` and `1 - t`.
    pub exponents: (f64, f64),
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * g(t)).sum()
    }

    /// Relative error of the rule on `t^k` against `𝓑(k+β+1, α+1)`.
    pub fn moment_error(&self, k: u32) -> f64 {
        let (b, a) = self.exponents;
        let exact = beta_fn(k as f64 + b + 1.0, a + 1.0).unwrap();
        ((self.integrate(|t| t.powi(k as i32)) - exact) / exact).abs()
    }
}

/// Golub–Welsch rule for the weight `t^β (1-t)^α` on `(0, 1)`.
///
/// Built on `[-1, 1]` with weight `(1-x)^α (1+x)^β` and mapped by `t = (1+x)/2`.
pub fn gauss_jacobi_rule(alpha: f64, beta: f64, n_nodes: usize) -> Result<QuadratureRule> {
    if !(alpha > -1.0 && beta > -1.0) || !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::InvalidParams(format!(
            "Jacobi exponents must exceed -1, got ({alpha}, {beta})"
        )));
    }
    if n_nodes == 0 {
        return Err(Error::Domain("a quadrature rule needs at least one node".into()));
    }
    let (a, b) = (alpha, beta);
    let ab = a + b;
    let mut jac = DMatrix::<f64>::zeros(n_nodes, n_nodes);
    for k in 0..n_nodes {
        let kf = k as f64;
        jac[(k, k)] = if k == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
        };
        if k + 1 < n_nodes {
            let j = kf + 1.0;
            let sq = if k == 0 {
                4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * j * (j + a) * (j + b) * (j + ab)
                    / ((2.0 * j + ab).powi(2) * (2.0 * j + ab + 1.0) * (2.0 * j + ab - 1.0))
            };
            let off = sq.sqrt();
            jac[(k, k + 1)] = off;
            jac[(k + 1, k)] = off;
        }
    }
    let max_iter = 100 * n_nodes;
    let eig = jac
        .try_symmetric_eigen(f64::EPSILON, max_iter)
        .ok_or(Error::EigenNotConverged(max_iter))?;
    let mass = beta_fn(b + 1.0, a + 1.0)?;
    let mut pairs: Vec<(f64, f64)> = (0..n_nodes)
        .map(|i| {
            let v0 = eig.eigenvectors[(0, i)];
            ((1.0 + eig.eigenvalues[i]) / 2.0, mass * v0 * v0)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    Ok(QuadratureRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
        exponents: (beta, alpha),
    })
}

/// `|⟨𝕂(·, z), e_n⟩ - conj(e_n(z))|`.
///
/// Writing `w = √t e^{iθ}`, `dμ_{α,β} = t^β (1-t)^α dt dθ / (2π 𝓑(α+1,β+1))`.
/// The angle is integrated by the trapezoid rule on [`ANGULAR_SAMPLES`] points
/// (spectrally exact here), the radius by `rule`. The rule may carry any
/// `t`-exponent `b`; the integrand then picks up `t^(β-b)`, which is a
/// polynomial factor when `b = β0`.
pub fn verify_reproducing(
    params: &KernelParams,
    z: Complex64,
    n: i64,
    rule: &QuadratureRule,
) -> Result<f64> {
    let (rb, ra) = rule.exponents;
    if (ra - params.alpha()).abs() > 1e-15 {
        return Err(Error::Domain(format!(
            "rule exponent {ra} does not match alpha = {}",
            params.alpha()
        )));
    }
    let kernel = KernelEvaluator::new(*params)?;
    let mass = beta_fn(params.alpha() + 1.0, params.beta() + 1.0)?;
    let target = basis_element(params, n, z)?.conj();
    let m = ANGULAR_SAMPLES;
    let mut total = Complex64::new(0.0, 0.0);
    for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
        let rho = t.sqrt();
        let mut ring = Complex64::new(0.0, 0.0);
        for j in 0..m {
            let w = Complex64::from_polar(rho, std::f64::consts::TAU * j as f64 / m as f64);
            let k = kernel.eval(w, z)?.value;
            ring += k * basis_element(params, n, w)?.conj();
        }
        total += ring / m as f64 * wt * t.powf(params.beta() - rb);
    }
    Ok((total / mass - target).norm())
}

/// Relative error of the rule on `‖z^n‖²`, i.e. `∫ t^(n+β)(1-t)^α dt = 𝓑(n+β+1, α+1)`.
pub fn norm_moment_residual(params: &KernelParams, n: i64, rule: &QuadratureRule) -> Result<f64> {
    if n < -(params.m() as i64) {
        return Err(Error::Domain(format!("basis index {n} below -m")));
    }
    let (rb, _) = rule.exponents;
    let s = n as f64 + params.beta();
    let exact = beta_fn(s + 1.0, params.alpha() + 1.0)?;
    let approx = rule.integrate(|t| t.powf(s - rb));
    Ok(((approx - exact) / exact).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn low_moments() {
        let r = gauss_jacobi_rule(0.0, 0.0, 4).unwrap();
        assert_relative_eq!(r.integrate(|_| 1.0), 1.0, max_relative = 1e-14);
        assert_relative_eq!(r.integrate(|t| t), 0.5, max_relative = 1e-14);
        let r = gauss_jacobi_rule(1.0, -0.5, 8).unwrap();
        assert_relative_eq!(
            r.integrate(|t| t.powi(3)),
            beta_fn(3.5, 2.0).unwrap(),
            max_relative = 1e-12
        );
        assert!(r.nodes.iter().all(|&t| t > 0.0 && t < 1.0));
        assert!(r.weights.iter().all(|&w| w > 0.0));
    }

    #[test]
    fn exact_up_to_degree_2n_minus_1() {
        for (a, b) in [(0.0, -0.5), (2.0, -0.25), (1.5, -0.8), (3.0, 0.0), (-0.5, 2.5)] {
            let r = gauss_jacobi_rule(a, b, 16).unwrap();
            for k in 0..32 {
                assert!(r.moment_error(k) < 1e-12, "({a}, {b}) k = {k}: {}", r.moment_error(k));
            }
        }
    }

    #[test]
    fn single_node() {
        let r = gauss_jacobi_rule(1.0, 1.0, 1).unwrap();
        assert_relative_eq!(r.nodes[0], 0.5, max_relative = 1e-15);
        assert!(gauss_jacobi_rule(1.0, 1.0, 0).is_err());
        assert!(gauss_jacobi_rule(-1.0, 1.0, 3).is_err());
    }

    #[test]
    fn reproducing_constant_term() {
        let p = KernelParams::new(0.0, 0.0).unwrap();
        let r = gauss_jacobi_rule(0.0, 0.0, 16).unwrap();
        assert!(verify_reproducing(&p, Complex64::new(0.0, 0.0), 0, &r).unwrap() < 1e-10);
    }

    #[test]
    fn reproducing_sample_case() {
        let p = KernelParams::new(1.0, -0.5).unwrap();
        let r = gauss_jacobi_rule(1.0, -0.5, 64).unwrap();
        assert!(verify_reproducing(&p, Complex64::new(0.4, 0.0), 3, &r).unwrap() < 1e-8);
        for n in 0..=30 {
            assert!(norm_moment_residual(&p, n, &r).unwrap() < 1e-12);
        }
    }

    #[test]
    fn reproducing_with_pole_uses_reduced_rule() {
        let p = KernelParams::new(3.0, 1.0).unwrap();
        let r = gauss_jacobi_rule(3.0, p.beta0(), 64).unwrap();
        let z = Complex64::new(0.4, 0.3);
        for n in -1..=4 {
            assert!(verify_reproducing(&p, z, n, &r).unwrap() < 1e-8, "n = {n}");
            assert!(norm_moment_residual(&p, n, &r).unwrap() < 1e-12);
        }
    }

    #[test]
    fn residual_shrinks_with_nodes() {
        // rule with the wrong t-exponent: only converges as nodes are added
        let p = KernelParams::new(1.5, -0.8).unwrap();
        let z = Complex64::new(-0.7, 0.0);
        let mut last = f64::INFINITY;
        for nodes in [16, 32, 64, 128] {
            let r = gauss_jacobi_rule(1.5, 0.0, nodes).unwrap();
            let res = verify_reproducing(&p, z, 2, &r).unwrap();
            assert!(res <= last * 1.01 + 1e-14, "{nodes}: {res} vs {last}");
            last = res;
        }
    }
}
