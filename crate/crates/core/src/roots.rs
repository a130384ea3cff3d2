//! Simultaneous polynomial root finding (Aberth–Ehrlich) with Newton polishing.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;

pub const MAX_SWEEPS: usize = 200;
/// Sweeps between rotations of the unconverged iterates.
const KICK_INTERVAL: usize = 60;
pub const POLISH_STEPS: usize = 20;

/// Roots are flagged as clustered when two of them are closer than this,
/// relative to `max(1, |z|)`.
pub const CLUSTER_DISTANCE: f64 = 1e-4;

/// All roots of a polynomial, each listed once per multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct RootSet {
    pub roots: Vec<Complex64>,
    /// `|p(root)|` for each root.
    pub residuals: Vec<f64>,
    pub degree: usize,
    /// Some roots sit closer together than [`CLUSTER_DISTANCE`]; the residual
    /// criterion was relaxed for them.
    pub clustered: bool,
    pub sweeps: usize,
}

impl RootSet {
    /// The residual bound `1e-10 · max|c_n| · max(1, |z|)^degree`.
    pub fn residual_bound(p: &ComplexPoly, z: Complex64) -> f64 {
        1e-10 * p.max_abs_coeff() * z.norm().max(1.0).powi(p.degree() as i32)
    }
}

/// Horner value, derivative and running rounding-error bound of
/// `Σ c_k w^(n-k)` with coefficients taken in the given order.
fn horner_with_bound<'a>(coeffs: impl Iterator<Item = &'a Complex64>, w: Complex64) -> (Complex64, Complex64, f64) {
    let zero = Complex64::new(0.0, 0.0);
    let r = w.norm();
    let (mut p, mut dp, mut mu) = (zero, zero, 0.0);
    let mut first = true;
    for c in coeffs {
        dp = dp * w + p;
        p = p * w + c;
        if first {
            mu = p.norm() / 2.0;
            first = false;
        } else {
            mu = mu * r + p.norm();
        }
    }
    // running bound for complex Horner, with the complex product factor
    (p, dp, 4.0 * f64::EPSILON * (2.0 * mu - p.norm()).max(0.0))
}

/// `p(z)/p'(z)` and whether `|p(z)|` is within its running rounding-error
/// bound. For `|z| > 1` the reversed polynomial is used so that large roots do
/// not overflow.
fn newton_ratio(coeffs: &[Complex64], z: Complex64) -> (Complex64, bool) {
    let n = coeffs.len() - 1;
    if z.norm() <= 1.0 {
        let (p, dp, bound) = horner_with_bound(coeffs.iter().rev(), z);
        (p / dp, p.norm() <= bound)
    } else {
        let y = z.inv();
        let (q, dq, bound) = horner_with_bound(coeffs.iter(), y);
        // p(z) = z^n q(1/z)  =>  p/p' = z q / (n q - y q')
        (z * q / (q * n as f64 - y * dq), q.norm() <= bound)
    }
}

/// Starting points from the upper convex hull of `(n, ln|a_n|)`: each hull
/// edge of width `k` contributes `k` points on a circle whose radius is the
/// geometric mean modulus that edge predicts.
fn initial_points(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(i, c)| (i, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &p in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut out = Vec::with_capacity(n);
    for (e, w) in hull.windows(2).enumerate() {
        let k = w[1].0 - w[0].0;
        let radius = ((w[0].1 - w[1].1) / k as f64).exp();
        for j in 0..k {
            let theta = std::f64::consts::TAU * (j as f64 / k as f64 + e as f64 / n as f64) + 0.4;
            out.push(Complex64::from_polar(radius, theta));
        }
    }
    out
}

/// Every root of `p`, degree >= 1.
///
/// Deterministic: the starting configuration depends only on the coefficients.
pub fn find_roots(p: &ComplexPoly) -> Result<RootSet> {
    let all = p.coeffs();
    let lead = all.iter().take_while(|c| c.norm() == 0.0).count().min(all.len());
    let coeffs = &all[lead..];
    solve(p, |z| newton_ratio(coeffs, z), |z| {
        !(p.eval(z).norm() <= RootSet::residual_bound(p, z))
    })
}

/// Roots of `p` with every Newton correction taken from `eval`, which returns
/// `(p(z), p'(z), error bound of p(z))`.
///
/// Meant for polynomials whose monomial coefficients are badly conditioned but
/// which have an accurate evaluation by other means: `p` only supplies the
/// degree and the starting points. Residuals are reported through `eval`, and a
/// root is accepted when its value is within the error bound or its Newton
/// correction is below `1e-10 max(1, |z|)`.
pub fn find_roots_with(
    p: &ComplexPoly,
    eval: impl Fn(Complex64) -> (Complex64, Complex64, f64),
) -> Result<RootSet> {
    let all = p.coeffs();
    let coeffs = &all[all.iter().take_while(|c| c.norm() == 0.0).count().min(all.len())..];
    let ratio = |z: Complex64| {
        let (v, d, bound) = eval(z);
        if v.is_finite() && d.is_finite() && bound.is_finite() {
            (scaled_div(v, d), v.norm() <= bound)
        } else {
            // far from every root; the reversed monomial form cannot overflow
            (newton_ratio(coeffs, z).0, false)
        }
    };
    let mut set = solve(p, ratio, |z| {
        let (v, d, bound) = eval(z);
        !(v.norm() <= bound || scaled_div(v, d).norm() <= 1e-10 * z.norm().max(1.0))
    })?;
    set.residuals = set.roots.iter().map(|&z| eval(z).0.norm()).collect();
    Ok(set)
}

/// `a / b` without overflowing `|b|²`.
fn scaled_div(a: Complex64, b: Complex64) -> Complex64 {
    let s = b.re.abs().max(b.im.abs());
    if s == 0.0 || !s.is_finite() {
        return a / b;
    }
    (a / s) / (b / s)
}

fn solve(
    p: &ComplexPoly,
    ratio: impl Fn(Complex64) -> (Complex64, bool),
    fails: impl Fn(Complex64) -> bool,
) -> Result<RootSet> {
    let degree = p.degree();
    if p.is_zero() || degree == 0 {
        return Err(Error::Domain("root finding needs degree >= 1".into()));
    }
    let all = p.coeffs();
    let zeros_at_origin = all.iter().take_while(|c| c.norm() == 0.0).count();
    let coeffs = &all[zeros_at_origin..];
    let n = coeffs.len() - 1;
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros_at_origin];
    let mut sweeps = 0;
    if n == 1 {
        roots.push(-coeffs[0] / coeffs[1]);
    } else if n > 1 {
        let mut z = initial_points(coeffs);
        let mut done = vec![false; n];
        while sweeps < MAX_SWEEPS && done.iter().any(|d| !d) {
            sweeps += 1;
            if sweeps % KICK_INTERVAL == 0 {
                // a real iterate of a real polynomial never leaves the axis
                for (zi, _) in z.iter_mut().zip(&done).filter(|(_, d)| !**d) {
                    *zi *= Complex64::from_polar(1.0 + 1e-2, 0.05);
                }
            }
            for i in 0..n {
                if done[i] {
                    continue;
                }
                let (r, at_rounding) = ratio(z[i]);
                if at_rounding || !r.is_finite() {
                    done[i] = at_rounding;
                    if !r.is_finite() {
                        z[i] *= Complex64::from_polar(1.0 + 1e-3, 0.1);
                    }
                    continue;
                }
                let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
                let step = r / (Complex64::new(1.0, 0.0) - r * s);
                z[i] -= step;
                if step.norm() <= 4.0 * f64::EPSILON * z[i].norm() {
                    done[i] = true;
                }
            }
        }
        for zi in z.iter_mut() {
            polish(&ratio, zi);
        }
        roots.extend(z);
    }
    if p.is_real() {
        symmetrize_conjugates(&mut roots);
    }
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let residuals: Vec<f64> = roots.iter().map(|&z| p.eval(z).norm()).collect();
    let clustered = min_separation(&roots) < CLUSTER_DISTANCE;
    let failing = roots[zeros_at_origin..].iter().any(|&z| fails(z));
    if failing && !clustered {
        return Err(Error::RootsNotConverged {
            iterations: sweeps,
            best: roots,
            residuals,
        });
    }
    Ok(RootSet {
        roots,
        residuals,
        degree,
        clustered,
        sweeps,
    })
}

/// Newton steps, each kept only if the next correction is smaller.
fn polish(ratio: &impl Fn(Complex64) -> (Complex64, bool), z: &mut Complex64) {
    let (mut r, mut at_rounding) = ratio(*z);
    for _ in 0..POLISH_STEPS {
        if at_rounding || !r.is_finite() || r.norm() <= 2.0 * f64::EPSILON * z.norm() {
            break;
        }
        let next = *z - r;
        let (r2, a2) = ratio(next);
        if !(r2.norm() < r.norm()) {
            break;
        }
        *z = next;
        r = r2;
        at_rounding = a2;
    }
}

/// Smallest pairwise distance relative to `max(1, |z|)`.
fn min_separation(roots: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let d = (roots[i] - roots[j]).norm() / roots[i].norm().max(1.0);
            best = best.min(d);
        }
    }
    best
}

/// Make a root set of a real polynomial exactly closed under conjugation:
/// each root is paired with the nearest conjugate of another root, or made
/// real when it is its own best partner.
fn symmetrize_conjugates(roots: &mut [Complex64]) {
    let n = roots.len();
    let mut used = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    // handle the most nearly real roots first
    order.sort_by(|&a, &b| {
        let ka = roots[a].im.abs() / roots[a].norm().max(1e-300);
        let kb = roots[b].im.abs() / roots[b].norm().max(1e-300);
        ka.total_cmp(&kb).then(a.cmp(&b))
    });
    for &i in &order {
        if used[i] {
            continue;
        }
        used[i] = true;
        let zi = roots[i];
        let self_dist = 2.0 * zi.im.abs();
        let partner = (0..n)
            .filter(|&j| !used[j])
            .map(|j| (j, (roots[j] - zi.conj()).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match partner {
            Some((j, d)) if d < self_dist => {
                used[j] = true;
                let avg = (zi + roots[j].conj()) * 0.5;
                let avg = if avg.im > 0.0 { avg } else { avg.conj() };
                roots[i] = avg;
                roots[j] = avg.conj();
            }
            _ => roots[i] = Complex64::new(zi.re, 0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::build_g;
    use crate::params::KernelParams;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn g_poly(alpha: f64, beta: f64) -> ComplexPoly {
        build_g(&KernelParams::new(alpha, beta).unwrap(), 1e-12).unwrap().to_poly()
    }

    #[test]
    fn linear_g() {
        let r = find_roots(&g_poly(0.0, -0.6)).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert!((r.roots[0] - c(-2.0 / 3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn quadratic_g() {
        let r = find_roots(&g_poly(1.0, -0.5)).unwrap();
        let s = 2.0 * 3f64.sqrt();
        assert!((r.roots[0] - c(3.0 - s, 0.0)).norm() < 1e-12);
        assert!((r.roots[1] - c(3.0 + s, 0.0)).norm() < 1e-12);
        assert_eq!(r.roots[0].im, 0.0);
    }

    #[test]
    fn triple_root_is_flagged() {
        let r = find_roots(&ComplexPoly::p_alpha(2)).unwrap();
        assert!(r.clustered);
        for z in &r.roots {
            assert!((z - c(1.0, 0.0)).norm() < 1e-4);
        }
    }

    #[test]
    fn zero_roots_are_exact() {
        let p = ComplexPoly::from_real(&[0.0, 0.0, 1.0, 1.0]);
        let r = find_roots(&p).unwrap();
        assert_eq!(r.roots.iter().filter(|z| z.norm() == 0.0).count(), 2);
        assert!(r.roots.contains(&c(-1.0, 0.0)));
    }

    #[test]
    fn rejects_constants() {
        assert!(find_roots(&ComplexPoly::from_real(&[3.0])).is_err());
        assert!(find_roots(&ComplexPoly::zero()).is_err());
    }

    #[test]
    fn widely_spread_roots() {
        // near β → -1 one root is tiny and the rest are huge
        for alpha in [3.0, 9.0, 20.0] {
            for beta in [-1.0 + 1e-6, -1e-6] {
                let p = g_poly(alpha, beta);
                let r = find_roots(&p).unwrap();
                assert_eq!(r.roots.len(), alpha as usize + 1);
                assert!(!r.clustered);
            }
        }
    }

    #[test]
    fn g_family_structure() {
        let mut state = 0x2545f4914f6cdd1du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for alpha in 0..=10u32 {
            for _ in 0..50 {
                let beta = -0.999 * next() - 0.0005;
                let p = g_poly(alpha as f64, beta);
                let r = find_roots(&p).unwrap();
                assert_eq!(r.roots.len(), alpha as usize + 1);
                assert!(min_separation(&r.roots) > 1e-8);
                for z in &r.roots {
                    assert!(r.roots.iter().any(|w| (w - z.conj()).norm() <= 1e-9 * z.norm().max(1.0)));
                }
                let neg_real = r.roots.iter().filter(|z| z.im == 0.0 && z.re < 0.0).count();
                assert_eq!(neg_real, 1, "alpha {alpha} beta {beta}");
            }
        }
    }

    proptest! {
        #[test]
        fn planted_roots_recovered(
            planted in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..9),
        ) {
            let roots: Vec<Complex64> = planted.iter().map(|&(a, b)| c(a, b)).collect();
            prop_assume!(min_separation(&roots) > 1e-2);
            let p = ComplexPoly::from_roots(&roots);
            let found = find_roots(&p).unwrap();
            prop_assert_eq!(found.roots.len(), roots.len());
            for r in &roots {
                let d = found.roots.iter().map(|f| (f - r).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(d < 1e-8, "missed {} by {}", r, d);
            }
        }

        #[test]
        fn deterministic(coeffs in prop::collection::vec(-5.0f64..5.0, 2..10)) {
            let p = ComplexPoly::from_real(&coeffs);
            prop_assume!(p.degree() >= 1);
            let a = find_roots(&p);
            let b = find_roots(&p);
            prop_assert_eq!(a, b);
        }
    }
}
