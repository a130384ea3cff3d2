//! Zero counting by the argument principle and the Rouché window for `T_β f`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly::ComplexPoly;
use crate::roots::find_roots;
use crate::series::TruncatedSeries;

/// Roots closer than `CONTOUR_CLEARANCE · radius` to the contour are refused.
pub const CONTOUR_CLEARANCE: f64 = 1e-8;
const FIRST_SAMPLES: usize = 256;
const MAX_SAMPLES: usize = 1 << 16;
/// Roots within this fraction of the radius are split off the integrand.
const NEAR_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskZeroCount {
    pub center: Complex64,
    pub radius: f64,
    pub count: usize,
    /// Winding number before rounding.
    pub winding_raw: f64,
}

/// `(1/M) Σ (ξ_j - c) (p'/p - Σ_near 1/(ξ - r))(ξ_j)` on `M` equispaced contour points.
fn trapezoid_winding(p: &ComplexPoly, center: Complex64, radius: f64, samples: usize, near: &[Complex64]) -> f64 {
    let sum: Complex64 = (0..samples)
        .map(|j| {
            let u = Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / samples as f64);
            let xi = center + u;
            let (v, d) = p.eval_with_derivative(xi);
            let poles: Complex64 = near.iter().map(|r| (xi - r).inv()).sum();
            u * (d / v - poles)
        })
        .sum();
    sum.re / samples as f64
}

/// Number of zeros of `p` in the open disk `|ξ - center| < radius`.
///
/// The root finder first certifies that no root lies on the contour; the
/// winding integral then doubles its sample count from 256 until two
/// consecutive estimates agree to 0.05 and sit within 0.25 of an integer.
/// Roots within `0.05 r` of the circle are counted directly from the root
/// finder and their poles subtracted from `p'/p`, which keeps the integrand
/// smooth; the rest is counted by the winding integral.
pub fn count_zeros_disk(p: &ComplexPoly, center: Complex64, radius: f64) -> Result<DiskZeroCount> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::Domain(format!("radius must be positive, got {radius}")));
    }
    if p.is_zero() {
        return Err(Error::Domain("the zero polynomial has no zero count".into()));
    }
    let mut near = Vec::new();
    if p.degree() >= 1 {
        let roots = find_roots(p)?;
        for r in &roots.roots {
            let distance = ((r - center).norm() - radius).abs();
            if distance < NEAR_FRACTION * radius {
                near.push(*r);
            }
            if distance < CONTOUR_CLEARANCE * radius {
                return Err(Error::RootOnContour {
                    center,
                    radius,
                    distance,
                });
            }
        }
    } else {
        return Ok(DiskZeroCount {
            center,
            radius,
            count: 0,
            winding_raw: 0.0,
        });
    }
    let near_inside = near.iter().filter(|r| (*r - center).norm() < radius).count();
    let mut samples = FIRST_SAMPLES;
    let mut prev = trapezoid_winding(p, center, radius, samples, &near) + near_inside as f64;
    while samples < MAX_SAMPLES {
        samples *= 2;
        let w = trapezoid_winding(p, center, radius, samples, &near) + near_inside as f64;
        if (w - prev).abs() < 0.05 && (w - w.round()).abs() < 0.25 && w.round() >= 0.0 {
            return Ok(DiskZeroCount {
                center,
                radius,
                count: w.round() as usize,
                winding_raw: w,
            });
        }
        prev = w;
    }
    Err(Error::WindingNotStabilized { last: prev, samples })
}

/// Open-disk and closed-disk counts on the unit circle. When a root sits on
/// the circle, the counts are taken at radii `1 ∓ offset` instead.
pub fn count_open_closed(p: &ComplexPoly, offset: f64) -> Result<(usize, usize)> {
    let origin = Complex64::new(0.0, 0.0);
    match count_zeros_disk(p, origin, 1.0) {
        Ok(c) => Ok((c.count, c.count)),
        Err(Error::RootOnContour { .. }) => {
            let inner = count_zeros_disk(p, origin, 1.0 - offset)?;
            let outer = count_zeros_disk(p, origin, 1.0 + offset)?;
            Ok((inner.count, outer.count))
        }
        Err(e) => Err(e),
    }
}

/// The window `(β1, β2)` outside which `T_β f` has exactly one simple zero
/// (`β < β1`) or none (`β > β2`) in `|ξ| < r0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RoucheBounds {
    pub r0: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// `-|a0| / (|a0| + r0 |a1|)`, where the linear part vanishes.
    pub midpoint: f64,
    /// Every zero of `ψ` located by the scan, ascending.
    pub sign_changes: Vec<f64>,
}

/// `ψ(β) = | |a0|/β + |a1| r0/(1+β) | - Σ_{n>=2} |a_n| r0^n/(n+β)`, with the
/// certified tail subtracted as well so that `ψ` stays a lower bound.
pub fn rouche_psi(f: &TruncatedSeries, r0: f64, beta: f64) -> f64 {
    let a0 = f.coeff(0).norm();
    let a1 = f.coeff(1).norm();
    let lead = (a0 / beta + a1 * r0 / (1.0 + beta)).abs();
    let mut power = r0;
    let mut rest = 0.0;
    for (n, c) in f.coeffs().iter().enumerate().skip(2) {
        power *= r0;
        rest += c.norm() * power / (n as f64 + beta);
    }
    let order = f.truncation_order() as f64;
    lead - rest - f.tail_bound() / (order + 1.0 + beta)
}

/// Scan points on `(-1, 0)`: a `1e-3` lattice plus geometric refinements
/// down to `1e-6` from either end.
fn psi_scan_grid() -> Vec<f64> {
    let mut g: Vec<f64> = (1..1000).map(|i| -1.0 + i as f64 * 1e-3).collect();
    for i in 0..=60 {
        let off = 1e-6 * 1000f64.powf(i as f64 / 60.0);
        g.push(-1.0 + off);
        g.push(-off);
    }
    g.sort_by(f64::total_cmp);
    g.dedup();
    g
}

fn bisect(psi: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut flo = psi(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 1e-15 {
            break;
        }
        let fm = psi(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (flo > 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    if psi(lo).abs() <= psi(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Rouché window for `T_β f` on the disk of radius `r0`.
///
/// `β1` and `β2` are the outermost zeros of `ψ` on either side of the midpoint:
/// `ψ > 0` on `(-1, β1)` and `(β2, 0)` is what the Rouché comparison needs.
/// Without a tail (`f` linear) both collapse to the midpoint.
pub fn rouche_bounds(f: &TruncatedSeries, r0: f64) -> Result<RoucheBounds> {
    let a0 = f.coeff(0).norm();
    let a1 = f.coeff(1).norm();
    if a0 == 0.0 && a1 == 0.0 {
        return Err(Error::Degenerate("a0 = a1 = 0".into()));
    }
    if !(r0 > 0.0) || !r0.is_finite() {
        return Err(Error::Domain(format!("r0 must be positive, got {r0}")));
    }
    if r0 > 1.0 && !f.is_exact() {
        return Err(Error::Domain(format!(
            "r0 = {r0} exceeds the disk on which the tail bound holds"
        )));
    }
    let midpoint = -a0 / (a0 + r0 * a1);
    let psi = |b: f64| rouche_psi(f, r0, b);
    let grid = psi_scan_grid();
    let values: Vec<f64> = grid.iter().map(|&b| psi(b)).collect();
    let mut sign_changes = Vec::new();
    for i in 0..grid.len() - 1 {
        let (u, v) = (values[i], values[i + 1]);
        if u == 0.0 {
            sign_changes.push(grid[i]);
        } else if (u > 0.0) != (v > 0.0) && v != 0.0 {
            sign_changes.push(bisect(&psi, grid[i], grid[i + 1]));
        }
    }
    let beta1 = sign_changes
        .iter()
        .copied()
        .filter(|&b| b <= midpoint)
        .fold(f64::NAN, f64::min);
    let beta2 = sign_changes
        .iter()
        .copied()
        .filter(|&b| b >= midpoint)
        .fold(f64::NAN, f64::max);
    Ok(RoucheBounds {
        r0,
        beta1: if beta1.is_nan() { midpoint } else { beta1 },
        beta2: if beta2.is_nan() { midpoint } else { beta2 },
        midpoint,
        sign_changes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    NoZero,
    OneSimpleZero,
    Unknown,
}

impl Verdict {
    /// The zero count this verdict commits to, if any.
    pub fn count(&self) -> Option<usize> {
        match self {
            Verdict::NoZero => Some(0),
            Verdict::OneSimpleZero => Some(1),
            Verdict::Unknown => None,
        }
    }
}

pub fn verdict_from_bounds(bounds: &RoucheBounds, beta: f64) -> Verdict {
    if beta > bounds.beta2 {
        Verdict::NoZero
    } else if beta < bounds.beta1 {
        Verdict::OneSimpleZero
    } else {
        Verdict::Unknown
    }
}

pub fn zero_window_verdict(f: &TruncatedSeries, r0: f64, beta: f64) -> Result<Verdict> {
    if !(beta > -1.0 && beta < 0.0) {
        return Err(Error::Domain(format!("beta must lie in (-1, 0), got {beta}")));
    }
    Ok(verdict_from_bounds(&rouche_bounds(f, r0)?, beta))
}

/// The verdict next to the argument-principle count of `T_β f` in `|ξ| < r0`
/// (available when `f` is a polynomial and no zero sits on the circle).
pub fn cross_checked_verdict(
    f: &TruncatedSeries,
    r0: f64,
    beta: f64,
) -> Result<(Verdict, Option<usize>)> {
    let verdict = zero_window_verdict(f, r0, beta)?;
    if !f.is_exact() {
        return Ok((verdict, None));
    }
    let g = f.t_beta(beta).to_poly();
    let count = match count_zeros_disk(&g, Complex64::new(0.0, 0.0), r0) {
        Ok(c) => Some(c.count),
        Err(Error::RootOnContour { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok((verdict, count))
}
