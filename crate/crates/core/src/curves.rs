//! Continuation of the zero curves `𝒳_{α,k}(β)` of `G_{α,β}` over `β ∈ (-1, 0)`.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use crate::analytic::{build_g, signed_binomials};
use crate::error::{Error, Result};
use crate::params::KernelParams;
use crate::poly::ComplexPoly;
use crate::quadrature::{gauss_jacobi_rule, QuadratureRule};
use crate::roots::{find_roots_with, RootSet};

/// Largest `α` the tracer accepts.
pub const MAX_ALPHA: u32 = 150;

/// Smallest β-step the matcher may halve down to.
pub const MIN_STEP: f64 = 1e-9;

/// β at which components are labelled.
pub const LABEL_BETA: f64 = -1e-4;

/// Strictly increasing β values inside `(-1, 0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaGrid {
    betas: Vec<f64>,
}

impl BetaGrid {
    pub fn new(betas: Vec<f64>) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::Domain("empty beta grid".into()));
        }
        if betas.iter().any(|&b| !(b > -1.0 && b < 0.0)) {
            return Err(Error::Domain("beta grid must lie inside (-1, 0)".into()));
        }
        if betas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("beta grid must be strictly increasing".into()));
        }
        Ok(Self { betas })
    }

    /// `per_half` points geometric in `1 + β` from `-1 + min_offset` to `-0.5`,
    /// then `per_half` points geometric in `-β` down to `-min_offset`.
    pub fn geometric(per_half: usize, min_offset: f64) -> Result<Self> {
        if per_half < 2 || !(min_offset > 0.0 && min_offset < 0.5) {
            return Err(Error::Domain(format!(
                "geometric grid needs per_half >= 2 and 0 < offset < 0.5, got {per_half}, {min_offset}"
            )));
        }
        let ratio = 0.5 / min_offset;
        let mut betas = Vec::with_capacity(2 * per_half);
        for i in 0..per_half {
            let off = if i + 1 == per_half {
                0.5
            } else {
                min_offset * ratio.powf(i as f64 / (per_half - 1) as f64)
            };
            betas.push(-1.0 + off);
        }
        for j in (0..per_half).rev() {
            betas.push(-min_offset * ratio.powf(j as f64 / per_half as f64));
        }
        Self::new(betas)
    }

    /// 400 points, 200 per half, reaching `1e-6` from both ends.
    pub fn default_grid() -> Self {
        Self::geometric(200, 1e-6).unwrap()
    }

    pub fn values(&self) -> &[f64] {
        &self.betas
    }
}

/// One connected component of the zero set, sampled on a β grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ZeroCurve {
    pub alpha: u32,
    pub k: usize,
    /// `(β, 𝒳_{α,k}(β))`, β increasing.
    pub samples: Vec<(f64, Complex64)>,
    /// Relative RK4 deviation per consecutive sample pair, once refined.
    pub ode_deviations: Vec<f64>,
}

impl ZeroCurve {
    pub fn betas(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.0)
    }
}

/// `G_{α,β}` for integer `α` evaluated through
/// `G(ξ) = 1/β + ∫_0^1 s^β ((1 - sξ)^(α+1) - 1)/s ds` and
/// `G'(ξ) = -(α+1) ∫_0^1 s^β (1 - sξ)^α ds`.
///
/// Both integrands are polynomials of degree `α` in `s`, so a Gauss–Jacobi rule
/// with weight `s^β` and `α/2 + 2` nodes is exact. Unlike Horner on the
/// alternating binomial coefficients, the rounding error stays proportional to
/// `|1 - sξ|^(α+1)` rather than `(1 + |ξ|)^(α+1)`, which keeps the zeros
/// well conditioned for large `α`.
#[derive(Debug, Clone)]
pub struct GEvaluator {
    alpha: u32,
    beta: f64,
    poly: ComplexPoly,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    /// `G(1) = B(β, α+2)`.
    g_one: f64,
}

/// Nodes of the rule used away from the origin.
const FAR_NODES: usize = 96;

/// The weight `u^{α+1}` rule, shared across β.
fn far_rule(alpha: u32) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().unwrap().get(&alpha) {
        return Ok(rule.clone());
    }
    let rule = Arc::new(gauss_jacobi_rule(0.0, alpha as f64 + 1.0, FAR_NODES)?);
    cache.lock().unwrap().insert(alpha, rule.clone());
    Ok(rule)
}

impl GEvaluator {
    pub fn new(alpha: u32, beta: f64) -> Result<Self> {
        if !(beta > -1.0 && beta < 0.0) {
            return Err(Error::Domain(format!("beta must lie in (-1, 0), got {beta}")));
        }
        let poly = build_g(&KernelParams::new(alpha as f64, beta)?, 1.0)?.to_poly();
        let rule = gauss_jacobi_rule(0.0, beta, alpha as usize / 2 + 2)?;
        let g_one = (1..=alpha + 1).fold(1.0 / beta, |acc, k| acc * k as f64 / (beta + k as f64));
        Ok(Self {
            alpha,
            beta,
            poly,
            nodes: rule.nodes,
            weights: rule.weights,
            g_one,
        })
    }

    /// The monomial form, for starting points and export.
    pub fn poly(&self) -> &ComplexPoly {
        &self.poly
    }

    /// `(G(ξ), G'(ξ), error bound of G(ξ))` from Horner, the quadrature around
    /// the origin or the integral from `ξ = 1`, whichever bound is smallest.
    /// Horner wins near the origin, in particular for `β` close to -1 where
    /// the first rule's smallest node is tiny; the last one wins for `|ξ|`
    /// beyond about 1, where the other two cancel catastrophically.
    pub fn eval(&self, xi: Complex64) -> (Complex64, Complex64, f64) {
        let horner_bound = 2.0 * (self.alpha as f64 + 2.0) * f64::EPSILON * self.poly.eval_abs(xi.norm());
        let (g, dg) = self.poly.eval_with_derivative(xi);
        let mut best = (g, dg, horner_bound);
        let good = |b: &(Complex64, Complex64, f64)| b.2 <= 1e-13 * b.0.norm().max(1.0);
        if !good(&best) {
            let quad = self.eval_quadrature(xi);
            if quad.2 < best.2 {
                best = quad;
            }
        }
        if !good(&best) {
            if let Some(far) = self.eval_far(xi) {
                if far.2 < best.2 {
                    best = far;
                }
            }
        }
        best
    }

    /// `ξ^β G(ξ) = G(1) + ∫_1^ξ t^{β-1} (1-t)^{α+1} dt` along the segment,
    /// with `t = 1 + u(ξ-1)` and a rule for the weight `u^{α+1}`. The
    /// derivative comes from `ξG' + βG = (1-ξ)^{α+1}`. Unavailable when the
    /// segment passes too close to the origin for the rule to converge.
    fn eval_far(&self, xi: Complex64) -> Option<(Complex64, Complex64, f64)> {
        let one = Complex64::new(1.0, 0.0);
        let d = xi - one;
        if xi.norm() == 0.0 || d.norm() == 0.0 {
            return None;
        }
        // the integrand is singular at u = 1/(1-ξ); Bernstein ellipse parameter
        let x = (one - xi).inv() * 2.0 - one;
        let root = (x * x - one).sqrt();
        let rho = (x + root).norm().max((x - root).norm());
        let truncation = rho.powi(-2 * FAR_NODES as i32);
        if !(truncation < 1e-3) {
            return None;
        }
        let rule = far_rule(self.alpha).ok()?;
        let b1 = self.beta - 1.0;
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for (&u, &w) in rule.nodes.iter().zip(&rule.weights) {
            let f = (one + d * u).powf(b1);
            sum += f * w;
            abs += w * f.norm();
        }
        let a1 = self.alpha as i32 + 1;
        let sign = if a1 % 2 == 0 { 1.0 } else { -1.0 };
        let lift = d.powi(a1 + 1) * sign;
        let scale = xi.powf(-self.beta);
        let g = scale * (lift * sum + self.g_one);
        let dg = ((-d).powi(a1) - g * self.beta) / xi;
        let magnitude = scale.norm() * (lift.norm() * abs + self.g_one.abs());
        let bound = magnitude * ((self.alpha as f64 + 16.0) * f64::EPSILON + 64.0 * truncation);
        Some((g, dg, bound))
    }

    fn eval_quadrature(&self, xi: Complex64) -> (Complex64, Complex64, f64) {
        let one = Complex64::new(1.0, 0.0);
        let a = self.alpha as i32;
        let mut g = Complex64::new(1.0 / self.beta, 0.0);
        let mut dg = Complex64::new(0.0, 0.0);
        let mut scale = 1.0 / self.beta.abs();
        for (&s, &w) in self.nodes.iter().zip(&self.weights) {
            let base = one - xi * s;
            let pa = base.powi(a);
            let pa1 = pa * base;
            g += (pa1 - one) * (w / s);
            dg += pa * w;
            scale += w * (pa1.norm() + 1.0) / s;
        }
        let dg = dg * -(self.alpha as f64 + 1.0);
        (g, dg, (self.alpha as f64 + 8.0) * f64::EPSILON * scale)
    }

    pub fn roots(&self) -> Result<RootSet> {
        find_roots_with(&self.poly, |z| self.eval(z))
    }
}

/// Roots of `G_{α,β}`.
pub fn g_roots(alpha: u32, beta: f64) -> Result<Vec<Complex64>> {
    Ok(GEvaluator::new(alpha, beta)?.roots()?.roots)
}

/// `𝒳'(β) = 𝒳/f(𝒳) · Σ a_n 𝒳^n/(n+β)²`.
fn curve_velocity(coeffs: &[Complex64], x: Complex64, beta: f64) -> (Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let mut fx = zero;
    let mut s = zero;
    for (n, &a) in coeffs.iter().enumerate().rev() {
        fx = fx * x + a;
        s = s * x + a / ((n as f64 + beta) * (n as f64 + beta));
    }
    (x / fx * s, fx)
}

/// Nearest-neighbour assignment of `new` to `predicted`, or `None` when some
/// second-nearest candidate is closer than twice the nearest, or two
/// predictions claim the same root.
fn match_roots(predicted: &[Complex64], new: &[Complex64]) -> Option<Vec<Complex64>> {
    if predicted.len() != new.len() {
        return None;
    }
    if new.len() == 1 {
        return Some(new.to_vec());
    }
    let mut taken = vec![false; new.len()];
    let mut out = Vec::with_capacity(new.len());
    for p in predicted {
        let mut best = (usize::MAX, f64::INFINITY);
        let mut second = f64::INFINITY;
        for (j, q) in new.iter().enumerate() {
            let d = (q - p).norm();
            if d < best.1 {
                second = best.1;
                best = (j, d);
            } else if d < second {
                second = d;
            }
        }
        if second < 2.0 * best.1 || taken[best.0] {
            return None;
        }
        taken[best.0] = true;
        out.push(new[best.0]);
    }
    Some(out)
}

struct Tracker {
    alpha: u32,
    p_coeffs: Vec<Complex64>,
}

impl Tracker {
    fn advance(&self, b0: f64, z0: &[Complex64], b1: f64) -> Result<Vec<Complex64>> {
        let h = b1 - b0;
        let predicted: Vec<Complex64> = z0
            .iter()
            .map(|&x| x + curve_velocity(&self.p_coeffs, x, b0).0 * h)
            .collect();
        let new = g_roots(self.alpha, b1)?;
        if let Some(m) = match_roots(&predicted, &new) {
            return Ok(m);
        }
        if h.abs() < MIN_STEP {
            return Err(Error::MatchingAmbiguity {
                beta: b1,
                min_step: MIN_STEP,
            });
        }
        let mid = 0.5 * (b0 + b1);
        let zm = self.advance(b0, z0, mid)?;
        self.advance(mid, &zm, b1)
    }
}

/// Principal argument in `[-π, π)`, so the negative real axis maps to `-π`.
pub fn arg_lower(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a >= PI {
        a - 2.0 * PI
    } else {
        a
    }
}

/// Traces the `α + 1` zero curves of `G_{α,β}` across `grid`.
///
/// Roots at consecutive grid values are matched by nearest neighbour from an
/// Euler prediction; ambiguous steps are halved (the intermediate β values are
/// used for tracking only). Components are labelled at the grid value nearest
/// `β = -1e-4` by sorting arguments in `[-π, π)`, which follows the angular
/// pattern `(2k - α - 1)π/(α + 1)` of the large-root asymptotics.
pub fn trace_curves(alpha: u32, grid: &BetaGrid) -> Result<Vec<ZeroCurve>> {
    if alpha > MAX_ALPHA {
        return Err(Error::Precondition(format!("alpha = {alpha} exceeds the cap {MAX_ALPHA}")));
    }
    let tracker = Tracker {
        alpha,
        p_coeffs: ComplexPoly::p_alpha(alpha).into_coeffs(),
    };
    let betas = grid.values();
    let mut rows: Vec<Vec<Complex64>> = Vec::with_capacity(betas.len());
    rows.push(g_roots(alpha, betas[0])?);
    for w in betas.windows(2) {
        let next = tracker.advance(w[0], rows.last().unwrap(), w[1])?;
        rows.push(next);
    }
    let label_row = betas
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - LABEL_BETA).abs().total_cmp(&(b.1 - LABEL_BETA).abs()))
        .map(|(i, _)| i)
        .unwrap();
    let mut order: Vec<usize> = (0..=alpha as usize).collect();
    order.sort_by(|&a, &b| arg_lower(rows[label_row][a]).total_cmp(&arg_lower(rows[label_row][b])));
    Ok(order
        .iter()
        .enumerate()
        .map(|(k, &slot)| ZeroCurve {
            alpha,
            k,
            samples: betas.iter().zip(&rows).map(|(&b, r)| (b, r[slot])).collect(),
            ode_deviations: Vec::new(),
        })
        .collect())
}

fn rk4_step(coeffs: &[Complex64], x: Complex64, beta: f64, h: f64) -> Result<Complex64> {
    let vel = |x: Complex64, b: f64| -> Result<Complex64> {
        let (v, fx) = curve_velocity(coeffs, x, b);
        if fx.norm() < 1e-12 {
            return Err(Error::OdeAnomaly {
                beta: b,
                value: fx.norm(),
            });
        }
        Ok(v)
    };
    let k1 = vel(x, beta)?;
    let k2 = vel(x + k1 * (h / 2.0), beta + h / 2.0)?;
    let k3 = vel(x + k2 * (h / 2.0), beta + h / 2.0)?;
    let k4 = vel(x + k3 * h, beta + h)?;
    Ok(x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0))
}

/// Checks consecutive samples of `curve` against RK4 integration of the curve
/// ODE for `T_β f = 0`, subdividing each interval (up to 4096 substeps) until
/// the relative deviation drops below `1e-3`. The final deviations are stored
/// on the returned curve.
pub fn refine_by_ode(curve: &ZeroCurve, f: &ComplexPoly) -> Result<ZeroCurve> {
    if f.degree() == 0 {
        return Err(Error::Precondition(
            "a constant f has no zero curves to refine".into(),
        ));
    }
    let coeffs = f.coeffs();
    let mut deviations = Vec::with_capacity(curve.samples.len().saturating_sub(1));
    for w in curve.samples.windows(2) {
        let ((b0, x0), (b1, x1)) = (w[0], w[1]);
        let mut substeps = 1usize;
        let dev = loop {
            let h = (b1 - b0) / substeps as f64;
            let mut x = x0;
            for s in 0..substeps {
                x = rk4_step(coeffs, x, b0 + s as f64 * h, h)?;
            }
            let dev = (x - x1).norm() / x1.norm().max(f64::MIN_POSITIVE);
            if dev < 1e-3 || substeps >= 4096 {
                break dev;
            }
            substeps *= 2;
        };
        deviations.push(dev);
    }
    Ok(ZeroCurve {
        ode_deviations: deviations,
        ..curve.clone()
    })
}

/// `β ↦ G_{α,β}(-1) = Σ binom(α+1, n)/(n + β)`, strictly decreasing on `(-1, 0)`.
fn g_at_minus_one(alpha: u32, beta: f64) -> f64 {
    signed_binomials(alpha as f64 + 1.0, alpha as usize + 1)
        .iter()
        .enumerate()
        .map(|(n, b)| b.abs() / (n as f64 + beta))
        .sum()
}

/// The `β` at which the real curve passes through `-1`.
pub fn solve_s_alpha(alpha: u32) -> Result<f64> {
    let (mut lo, mut hi) = (-1.0 + 1e-15, -1e-15);
    if !(g_at_minus_one(alpha, lo) > 0.0 && g_at_minus_one(alpha, hi) < 0.0) {
        return Err(Error::Degenerate(format!("no sign change of G(-1) for alpha = {alpha}")));
    }
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g_at_minus_one(alpha, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Comparison of one sample with the endpoint asymptotics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AsymptoteSample {
    pub beta: f64,
    /// `|𝒳| / predicted modulus`.
    pub ratio: f64,
    /// Signed distance of `arg 𝒳` from the nearest predicted direction.
    pub angle_error: f64,
    /// Index of that direction (`s_k` near 0, `j_k` near -1).
    pub branch: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComponentAsymptotics {
    pub k: usize,
    /// Samples closest to `β = 0`, nearest last.
    pub near_zero: Vec<AsymptoteSample>,
    /// Samples closest to `β = -1`, nearest last.
    pub near_minus_one: Vec<AsymptoteSample>,
}

impl ComponentAsymptotics {
    fn all(&self) -> impl Iterator<Item = &AsymptoteSample> {
        self.near_zero.iter().chain(&self.near_minus_one)
    }

    /// Branch integers agree on the two extreme samples at each end.
    pub fn branches_stable(&self) -> bool {
        let stable = |v: &[AsymptoteSample]| v.len() < 2 || v[v.len() - 1].branch == v[v.len() - 2].branch;
        stable(&self.near_zero) && stable(&self.near_minus_one)
    }

    /// Ratio at the sample nearest each endpoint.
    pub fn extreme_ratios(&self) -> (Option<f64>, Option<f64>) {
        (
            self.near_zero.last().map(|s| s.ratio),
            self.near_minus_one.last().map(|s| s.ratio),
        )
    }

    pub fn max_ratio_deviation(&self) -> f64 {
        self.all().map(|s| (s.ratio - 1.0).abs()).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoteReport {
    pub alpha: u32,
    pub components: Vec<ComponentAsymptotics>,
}

fn wrap_angle(a: f64) -> f64 {
    let t = (a + PI).rem_euclid(2.0 * PI) - PI;
    if t < -PI {
        t + 2.0 * PI
    } else {
        t
    }
}

/// Nearest direction among `offset + 2πj/count`.
fn nearest_direction(arg: f64, offset: f64, count: u32) -> (i64, f64) {
    let step = 2.0 * PI / count as f64;
    let j = ((arg - offset) / step).round() as i64;
    let jm = j.rem_euclid(count as i64);
    (jm, wrap_angle(arg - offset - j as f64 * step))
}

/// Number of extreme samples examined at each end.
pub const ASYMPTOTE_SAMPLES: usize = 5;

/// Compares the curves with the endpoint laws
/// `|𝒳| ≈ (-(α+1)/β)^(1/(α+1))` at directions `-π + 2πs/(α+1)` as `β → 0⁻`;
/// `𝒳_{α,0} ≈ -(1+β)/(α+1)` and `|𝒳_{α,k}| ≈ (α(α+1)/(1+β))^(1/α)` at
/// directions `π + 2πj/α` (`k >= 1`) as `β → -1⁺`.
pub fn check_asymptotics(curves: &[ZeroCurve], alpha: u32) -> AsymptoteReport {
    let a = alpha as f64;
    let components = curves
        .iter()
        .map(|c| {
            let n = c.samples.len();
            let take = ASYMPTOTE_SAMPLES.min(n);
            let near_zero = c.samples[n - take..]
                .iter()
                .map(|&(beta, x)| {
                    let predicted = (-(a + 1.0) / beta).powf(1.0 / (a + 1.0));
                    let (branch, angle_error) = nearest_direction(arg_lower(x), -PI, alpha + 1);
                    AsymptoteSample {
                        beta,
                        ratio: x.norm() / predicted,
                        angle_error,
                        branch,
                    }
                })
                .collect();
            let near_minus_one = c.samples[..take]
                .iter()
                .rev()
                .map(|&(beta, x)| {
                    if c.k == 0 {
                        let predicted = (1.0 + beta) / (a + 1.0);
                        AsymptoteSample {
                            beta,
                            ratio: x.norm() / predicted,
                            angle_error: wrap_angle(arg_lower(x) + PI),
                            branch: 0,
                        }
                    } else {
                        let predicted = (a * (a + 1.0) / (1.0 + beta)).powf(1.0 / a);
                        let (branch, angle_error) = nearest_direction(arg_lower(x), PI, alpha);
                        AsymptoteSample {
                            beta,
                            ratio: x.norm() / predicted,
                            angle_error,
                            branch,
                        }
                    }
                })
                .collect();
            ComponentAsymptotics {
                k: c.k,
                near_zero,
                near_minus_one,
            }
        })
        .collect();
    AsymptoteReport { alpha, components }
}

/// The minimizer of `|𝒳_{α,k}|` over β.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinModulus {
    pub t: f64,
    pub r: f64,
    pub theta: f64,
    /// Stationarity double sum at `t`, normalized by the sum of absolute terms.
    pub stationarity: f64,
    /// `|𝒳|` on the samples decreases to the discrete minimum and then increases.
    pub unimodal: bool,
}

fn root_nearest(alpha: u32, beta: f64, guess: Complex64) -> Result<Complex64> {
    Ok(g_roots(alpha, beta)?
        .into_iter()
        .min_by(|a, b| (a - guess).norm().total_cmp(&(b - guess).norm()))
        .unwrap())
}

/// `Σ_{j,l} binom(α+1,j) binom(α+1,l) (-1)^{j+l} R^{j+l} cos(θ(j-l)) / (j+t)²`,
/// divided by the sum of its absolute terms.
pub fn stationarity_residual(alpha: u32, t: f64, r: f64, theta: f64) -> f64 {
    let b = signed_binomials(alpha as f64 + 1.0, alpha as usize + 1);
    let mut sum = 0.0;
    let mut mag = 0.0;
    for (j, bj) in b.iter().enumerate() {
        for (l, bl) in b.iter().enumerate() {
            let term = bj * bl * r.powi((j + l) as i32) * (theta * (j as f64 - l as f64)).cos()
                / ((j as f64 + t) * (j as f64 + t));
            sum += term;
            mag += term.abs();
        }
    }
    sum.abs() / mag
}

/// Minimum of `|𝒳_{α,k}|` for `k >= 1`: discrete minimizer on the samples, then
/// golden-section search between its neighbours with fresh root solves.
pub fn find_min_modulus(curve: &ZeroCurve) -> Result<MinModulus> {
    if curve.k == 0 {
        return Err(Error::Precondition(
            "the real component has no interior minimum of |X|".into(),
        ));
    }
    let mods: Vec<f64> = curve.samples.iter().map(|s| s.1.norm()).collect();
    let (i, _) = mods
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .ok_or_else(|| Error::Precondition("empty curve".into()))?;
    if i == 0 || i + 1 == mods.len() {
        return Err(Error::MinimumAtBoundary {
            beta: curve.samples[i].0,
        });
    }
    let unimodal = mods[..=i].windows(2).all(|w| w[1] <= w[0]) && mods[i..].windows(2).all(|w| w[1] >= w[0]);
    let alpha = curve.alpha;
    let mut guess = curve.samples[i].1;
    let modulus = |beta: f64, guess: &mut Complex64| -> Result<f64> {
        let z = root_nearest(alpha, beta, *guess)?;
        *guess = z;
        Ok(z.norm())
    };
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (curve.samples[i - 1].0, curve.samples[i + 1].0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = modulus(x1, &mut guess)?;
    let mut f2 = modulus(x2, &mut guess)?;
    while hi - lo > 1e-12 * (1.0 + lo.abs()) {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = modulus(x1, &mut guess)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = modulus(x2, &mut guess)?;
        }
    }
    let t = 0.5 * (lo + hi);
    let z = root_nearest(alpha, t, guess)?;
    Ok(MinModulus {
        t,
        r: z.norm(),
        theta: z.arg(),
        stationarity: stationarity_residual(alpha, t, z.norm(), z.arg()),
        unimodal,
    })
}

/// Atoms of `(1/(α+1)) Σ δ_{𝒳_{α,j}(β)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMeasure {
    pub alpha: u32,
    pub beta: f64,
    pub points: Vec<Complex64>,
    pub weight: f64,
}

pub fn empirical_measure(alpha: u32, beta: f64) -> Result<EmpiricalMeasure> {
    if !(beta > -1.0 && beta < 0.0) {
        return Err(Error::Domain(format!("beta must lie in (-1, 0), got {beta}")));
    }
    if alpha > MAX_ALPHA {
        return Err(Error::Precondition(format!("alpha = {alpha} exceeds the cap {MAX_ALPHA}")));
    }
    let points = g_roots(alpha, beta)?;
    Ok(EmpiricalMeasure {
        alpha,
        beta,
        weight: 1.0 / points.len() as f64,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_grid() -> BetaGrid {
        BetaGrid::geometric(60, 1e-6).unwrap()
    }

    #[test]
    fn evaluator_matches_horner() {
        for (alpha, beta) in [(0u32, -0.5), (3, -0.2), (9, -0.9), (20, -1e-4)] {
            let e = GEvaluator::new(alpha, beta).unwrap();
            let d = e.poly().derivative();
            for xi in [Complex64::new(0.3, -0.2), Complex64::new(-0.9, 0.1), Complex64::new(0.01, 0.0)] {
                let (g, dg, bound) = e.eval(xi);
                let scale = e.poly().eval_abs(xi.norm());
                assert!((g - e.poly().eval(xi)).norm() <= 1e-13 * scale + bound, "{alpha} {beta} {xi}");
                assert!((dg - d.eval(xi)).norm() <= 1e-12 * scale.max(1.0) * (alpha as f64 + 1.0));
            }
        }
    }

    #[test]
    fn far_evaluation_matches_high_precision() {
        // alpha = 80, beta = -0.5, 80-digit reference values
        let e = GEvaluator::new(80, -0.5).unwrap();
        let cases = [
            (Complex64::new(3.0, 2.0), Complex64::new(-2.014731675775727e34, -3.040991721407068e34)),
            (Complex64::new(1.025882, 1.107807), Complex64::new(-69.82631053861266, -30.48444533156156)),
            (Complex64::new(0.03508, 0.491541), Complex64::new(-3.755402962735081, -3.61375381911928)),
        ];
        for (xi, want) in cases {
            let (g, _, bound) = e.eval(xi);
            assert!((g - want).norm() <= bound.max(1e-14 * want.norm()), "{xi}: {g} vs {want}, bound {bound}");
            assert!(bound < 1e-11 * want.norm().max(1.0));
        }
    }

    #[test]
    fn roots_up_to_max_alpha() {
        for alpha in [74u32, 115, MAX_ALPHA] {
            let roots = g_roots(alpha, -0.5).unwrap();
            assert_eq!(roots.len(), alpha as usize + 1);
            assert!(roots.iter().all(|z| z.norm() < 3.0));
        }
    }

    #[test]
    fn large_alpha_roots_match_high_precision() {
        // alpha = 36, beta = -1e-4, three largest-real-part roots from a 60-digit solve
        let expected = [
            Complex64::new(2.3893802178796886, 0.35756050753521457),
            Complex64::new(2.4298609850370427, 0.12033611247247943),
            Complex64::new(2.3095866491596686, 0.5845406929404049),
        ];
        let roots = g_roots(36, -1e-4).unwrap();
        assert_eq!(roots.len(), 37);
        for e in expected {
            let d = roots.iter().map(|r| (r - e).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-12, "{e}: {d}");
        }
    }

    #[test]
    fn default_grid_shape() {
        let g = BetaGrid::default_grid();
        let v = g.values();
        assert_eq!(v.len(), 400);
        assert!((v[0] + 1.0 - 1e-6).abs() < 1e-15);
        assert!((v[399] + 1e-6).abs() < 1e-18);
        assert!(v.contains(&-0.5));
        assert!(BetaGrid::new(vec![-0.5, -0.6]).is_err());
        assert!(BetaGrid::new(vec![-0.5, 0.0]).is_err());
    }

    #[test]
    fn alpha0_is_closed_form() {
        let curves = trace_curves(0, &BetaGrid::default_grid()).unwrap();
        assert_eq!(curves.len(), 1);
        for &(b, z) in &curves[0].samples {
            let exact = (1.0 + b) / b;
            assert!((z.re - exact).abs() <= 1e-12 * exact.abs());
            assert_eq!(z.im, 0.0);
        }
        let half = curves[0].samples.iter().find(|s| s.0 == -0.5).unwrap();
        assert!((half.1.re + 1.0).abs() < 1e-15);
    }

    #[test]
    fn alpha1_curve0() {
        let grid = BetaGrid::new(vec![-0.9, -0.5, -0.1]).unwrap();
        let curves = trace_curves(1, &grid).unwrap();
        assert_eq!(curves.len(), 2);
        assert!((curves[0].samples[1].1.re - (3.0 - 2.0 * 3f64.sqrt())).abs() < 1e-12);
    }

    #[test]
    fn curve_structure() {
        for alpha in 0..=9u32 {
            let curves = trace_curves(alpha, &small_grid()).unwrap();
            assert_eq!(curves.len(), alpha as usize + 1);
            let c0 = &curves[0];
            assert!(c0.samples.iter().all(|s| s.1.im == 0.0 && s.1.re < 0.0));
            assert!(c0.samples.windows(2).all(|w| w[1].1.re < w[0].1.re));
            for k in 1..=alpha as usize {
                let mirror = &curves[alpha as usize + 1 - k];
                for (a, b) in curves[k].samples.iter().zip(&mirror.samples) {
                    assert!((a.1 - b.1.conj()).norm() <= 1e-9 * a.1.norm().max(1.0));
                }
                if k <= (alpha as usize + 1) / 2 {
                    assert!(curves[k].samples.iter().all(|s| s.1.im <= 0.0), "alpha {alpha} k {k}");
                }
            }
        }
    }

    #[test]
    fn real_curves_nest() {
        // ordered by modulus: the signed values satisfy X_{α,0} <= X_{α+1,0}
        let grid = small_grid();
        let c: Vec<Vec<ZeroCurve>> = (0..=9).map(|a| trace_curves(a, &grid).unwrap()).collect();
        for a in 0..9 {
            for (x, y) in c[a][0].samples.iter().zip(&c[a + 1][0].samples) {
                assert!(x.1.re <= y.1.re && x.1.norm() >= y.1.norm());
            }
        }
    }

    #[test]
    fn ode_refinement_accepts_traced_curves() {
        for alpha in [0u32, 3, 9] {
            let f = ComplexPoly::p_alpha(alpha);
            for c in trace_curves(alpha, &small_grid()).unwrap() {
                let r = refine_by_ode(&c, &f).unwrap();
                assert_eq!(r.ode_deviations.len(), c.samples.len() - 1);
                assert!(r.ode_deviations.iter().all(|&d| d < 1e-3), "alpha {alpha} k {}", c.k);
            }
        }
        let c = &trace_curves(1, &small_grid()).unwrap()[0];
        assert!(matches!(
            refine_by_ode(c, &ComplexPoly::from_real(&[2.0])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn alpha0_velocity_matches_closed_form() {
        let coeffs = ComplexPoly::p_alpha(0).into_coeffs();
        for b in [-0.9, -0.5, -0.01] {
            let x = Complex64::new((1.0 + b) / b, 0.0);
            let (v, _) = curve_velocity(&coeffs, x, b);
            assert!((v.re + 1.0 / (b * b)).abs() < 1e-10 / (b * b));
        }
    }

    #[test]
    fn s_alpha_values() {
        assert!((solve_s_alpha(0).unwrap() + 0.5).abs() < 1e-12);
        assert!((solve_s_alpha(1).unwrap() - (-1.0 + 2f64.sqrt() / 2.0)).abs() < 1e-12);
        let s: Vec<f64> = (0..=9).map(|a| solve_s_alpha(a).unwrap()).collect();
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        for (a, &sa) in s.iter().enumerate() {
            let x0 = g_roots(a as u32, sa).unwrap().into_iter().find(|z| z.im == 0.0 && z.re < 0.0).unwrap();
            assert!((x0.re + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn asymptotics_alpha0_and_1() {
        let grid = BetaGrid::default_grid();
        let rep = check_asymptotics(&trace_curves(0, &grid).unwrap(), 0);
        let c = &rep.components[0];
        // ratio ≡ 1 + β
        for s in &c.near_zero {
            assert!((s.ratio - (1.0 + s.beta)).abs() < 1e-12);
        }
        let rep = check_asymptotics(&trace_curves(1, &grid).unwrap(), 1);
        for c in &rep.components {
            let (z, m) = c.extreme_ratios();
            assert!((z.unwrap() - 1.0).abs() < 0.01);
            assert!((m.unwrap() - 1.0).abs() < 0.01);
            assert!(c.branches_stable());
        }
    }

    #[test]
    fn min_modulus_alpha1() {
        let curves = trace_curves(1, &BetaGrid::default_grid()).unwrap();
        assert!(matches!(find_min_modulus(&curves[0]), Err(Error::Precondition(_))));
        let m = find_min_modulus(&curves[1]).unwrap();
        assert!(m.stationarity < 1e-6);
        assert!(m.unimodal);
        // dense scan oracle
        let mut best = (0.0, f64::INFINITY);
        let mut b: f64 = -0.99;
        while b < -0.01 {
            // 1/β - 2ξ/(1+β) + ξ²/(2+β)
            let (a2, a1, a0) = (1.0 / (2.0 + b), -2.0 / (1.0 + b), 1.0 / b);
            let disc = Complex64::new(a1 * a1 - 4.0 * a2 * a0, 0.0).sqrt();
            let r = ((-a1 + disc) / (2.0 * a2)).norm().max(((-a1 - disc) / (2.0 * a2)).norm());
            if r < best.1 {
                best = (b, r);
            }
            b += 1e-5;
        }
        assert!((m.t - best.0).abs() < 1e-4, "{} vs {}", m.t, best.0);
        assert!(curves[1].samples.iter().all(|s| s.1.norm() >= m.r - 1e-12));
    }

    #[test]
    fn measure_counts() {
        let m = empirical_measure(0, -0.5).unwrap();
        assert_eq!(m.points.len(), 1);
        assert!((m.points[0] + 1.0).norm() < 1e-15);
        assert_eq!(m.weight, 1.0);
        let m = empirical_measure(35, -1e-4).unwrap();
        assert_eq!(m.points.len(), 36);
    }
}
