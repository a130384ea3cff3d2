//! Zero counts of the even and odd kernel numerators `I_{α,β}`, `J_{α,β}`
//! across `β ∈ (-1, 0]`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::curves::BetaGrid;
use crate::error::{Error, Result};
use crate::kernel::{build_even_odd, closed_form_zeros_beta0, even_odd_table};
use crate::params::KernelParams;
use crate::poly::ComplexPoly;
use crate::zeros::count_zeros_disk;

/// Radius offset used when `I_{α,0}` or `J_{α,0}` has zeros on the unit circle.
pub const BOUNDARY_OFFSET: f64 = 1e-3;

/// Radius perturbation tried when a scanned zero sits on the unit circle.
pub const CONTOUR_RETRY: f64 = 1e-6;

/// `tan(π/4 + π/(α+2))`, the stated upper limit for the scaled counts.
/// Not above 1 for `α <= 1`.
pub fn eta0(alpha: u32) -> f64 {
    (PI / 4.0 + PI / (alpha as f64 + 2.0)).tan()
}

/// Smallest modulus above 1 among the zeros of `I_{α,0}` and `J_{α,0}`
/// (infinite when there is none). Scaled counts at `β` near 0 or -1 can only
/// match the closed-disk values for `η` below this.
pub fn eta_nearest_zero(alpha: u32) -> f64 {
    let (even, odd) = closed_form_zeros_beta0(alpha);
    even.iter()
        .chain(&odd)
        .map(|z| z.norm())
        .filter(|&r| r > 1.0 + 1e-9)
        .fold(f64::INFINITY, f64::min)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CountsAtZero {
    /// Zeros of `I_{α,0}` in the open disk.
    pub eps: usize,
    pub theta: usize,
    /// Zeros of `I_{α,0}` in the closed disk.
    pub eps_hat: usize,
    pub theta_hat: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvenOddSample {
    pub beta: f64,
    pub eps: usize,
    pub theta: usize,
}

/// Counts of the scaled polynomials `I(ηξ)`, `J(ηξ)` in the unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EtaCheck {
    pub eta: f64,
    pub beta: f64,
    pub i_count: usize,
    pub j_count: usize,
    pub expected_i: usize,
    pub expected_j: usize,
}

impl EtaCheck {
    pub fn holds(&self) -> bool {
        self.i_count == self.expected_i && self.j_count == self.expected_j
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvenOddReport {
    pub alpha: u32,
    /// `[ε, Θ, ε̂, Θ̂]` at `β = 0` from the closed-form table.
    pub table: [usize; 4],
    pub at_zero: CountsAtZero,
    pub scan: Vec<EvenOddSample>,
    /// Largest scanned β with `ε ≠ ε_{α,0}`; `None` if the count never differs.
    pub beta4: Option<f64>,
    /// Smallest scanned β with `Θ ≠ ε_{α,0} + 1`.
    pub beta5: Option<f64>,
    /// Smallest scanned β with `ε ≠ Θ_{α,0} + 1`.
    pub beta3: Option<f64>,
    /// Largest scanned β with `Θ ≠ Θ_{α,0}`.
    pub beta6: Option<f64>,
    /// `(ε = ε_{α,0} near 0, Θ = ε_{α,0} + 1 near -1)`; `None` when `r = 0`.
    pub case1: Option<(bool, bool)>,
    /// `(ε = Θ_{α,0} + 1 near -1, Θ = Θ_{α,0} near 0)`; `None` when `r = 2`.
    pub case2: Option<(bool, bool)>,
    /// Scaled counts for `η` inside `(1, eta0)`; empty when `eta0 <= 1` or unbounded.
    pub eta_checks: Vec<EtaCheck>,
    /// Scaled counts for `η` inside `(1, min(eta0, eta_nearest_zero))`, or
    /// `(1, 2)` when both are unbounded or `eta0 <= 1`.
    pub eta_checks_safe: Vec<EtaCheck>,
}

impl EvenOddReport {
    pub fn table_matches(&self) -> bool {
        let c = self.at_zero;
        [c.eps, c.theta, c.eps_hat, c.theta_hat] == self.table
    }

    /// β values where `ε` (first) or `Θ` (second) changes between scan samples.
    pub fn transitions(&self) -> (Vec<f64>, Vec<f64>) {
        let mut e = Vec::new();
        let mut t = Vec::new();
        for w in self.scan.windows(2) {
            if w[0].eps != w[1].eps {
                e.push(w[1].beta);
            }
            if w[0].theta != w[1].theta {
                t.push(w[1].beta);
            }
        }
        (e, t)
    }

    /// Every applicable endpoint statement holds.
    pub fn endpoints_hold(&self) -> bool {
        let ok = |c: Option<(bool, bool)>| c.is_none_or(|(a, b)| a && b);
        self.table_matches() && ok(self.case1) && ok(self.case2)
    }
}

fn polys(alpha: u32, beta: f64) -> Result<(ComplexPoly, ComplexPoly)> {
    let p = build_even_odd(&KernelParams::new(alpha as f64, beta)?)?;
    Ok((p.i, p.j))
}

fn open_count(p: &ComplexPoly, radius: f64) -> Result<usize> {
    let origin = Complex64::new(0.0, 0.0);
    match count_zeros_disk(p, origin, radius) {
        Err(Error::RootOnContour { .. }) => {
            match count_zeros_disk(p, origin, radius * (1.0 - CONTOUR_RETRY)) {
                Err(Error::RootOnContour { .. }) => {
                    Ok(count_zeros_disk(p, origin, radius * (1.0 + CONTOUR_RETRY))?.count)
                }
                r => Ok(r?.count),
            }
        }
        r => Ok(r?.count),
    }
}

fn counts_at_zero(alpha: u32) -> Result<CountsAtZero> {
    let (i, j) = polys(alpha, 0.0)?;
    let origin = Complex64::new(0.0, 0.0);
    let both = |p: &ComplexPoly| -> Result<(usize, usize)> {
        match count_zeros_disk(p, origin, 1.0) {
            Ok(c) => Ok((c.count, c.count)),
            Err(Error::RootOnContour { .. }) => Ok((
                count_zeros_disk(p, origin, 1.0 - BOUNDARY_OFFSET)?.count,
                count_zeros_disk(p, origin, 1.0 + BOUNDARY_OFFSET)?.count,
            )),
            Err(e) => Err(e),
        }
    };
    let (eps, eps_hat) = both(&i)?;
    let (theta, theta_hat) = both(&j)?;
    Ok(CountsAtZero {
        eps,
        theta,
        eps_hat,
        theta_hat,
    })
}

/// β values at which the scaled counts are checked.
pub const ETA_BETAS: [f64; 2] = [-1.0 + 1e-5, -1e-5];

/// Scans `ε_{α,β}` and `Θ_{α,β}` over `grid`, compares the endpoint counts with
/// the closed-form values at `β = 0`, and checks the scaled counts at
/// `η = 1 + (limit - 1)·{1/4, 1/2, 3/4}` for both limits described on
/// [`EvenOddReport`].
pub fn even_odd_thresholds(alpha: u32, grid: &BetaGrid) -> Result<EvenOddReport> {
    let table = even_odd_table(alpha);
    let at_zero = counts_at_zero(alpha)?;
    let (eps0, theta0) = (table[0], table[1]);
    let mut scan = Vec::with_capacity(grid.values().len());
    for &beta in grid.values() {
        let (i, j) = polys(alpha, beta)?;
        scan.push(EvenOddSample {
            beta,
            eps: open_count(&i, 1.0)?,
            theta: open_count(&j, 1.0)?,
        });
    }
    let largest = |pred: &dyn Fn(&EvenOddSample) -> bool| scan.iter().rev().find(|s| pred(s)).map(|s| s.beta);
    let smallest = |pred: &dyn Fn(&EvenOddSample) -> bool| scan.iter().find(|s| pred(s)).map(|s| s.beta);
    let beta4 = largest(&|s| s.eps != eps0);
    let beta6 = largest(&|s| s.theta != theta0);
    let beta5 = smallest(&|s| s.theta != eps0 + 1);
    let beta3 = smallest(&|s| s.eps != theta0 + 1);
    let (first, last) = (scan[0], scan[scan.len() - 1]);
    let r = alpha % 4;
    let case1 = (r != 0).then(|| (last.eps == eps0, first.theta == eps0 + 1));
    let case2 = (r != 2).then(|| (first.eps == theta0 + 1, last.theta == theta0));

    let e0 = eta0(alpha);
    // α = 2 puts the angle at π/2
    let stated = (e0 > 1.0 && e0 < 1e12).then_some(e0);
    let safe = match stated {
        Some(e) => e.min(eta_nearest_zero(alpha)),
        None => eta_nearest_zero(alpha),
    };
    let safe = if safe.is_finite() { safe } else { 2.0 };
    let eta_checks = match stated {
        Some(e) => scaled_checks(alpha, e, &table)?,
        None => Vec::new(),
    };
    let eta_checks_safe = scaled_checks(alpha, safe, &table)?;
    Ok(EvenOddReport {
        alpha,
        table,
        at_zero,
        scan,
        beta4,
        beta5,
        beta3,
        beta6,
        case1,
        case2,
        eta_checks,
        eta_checks_safe,
    })
}

fn scaled_checks(alpha: u32, limit: f64, table: &[usize; 4]) -> Result<Vec<EtaCheck>> {
    let (eps_hat, theta_hat) = (table[2], table[3]);
    let mut out = Vec::new();
    for frac in [0.25, 0.5, 0.75] {
        let eta = 1.0 + (limit - 1.0) * frac;
        for beta in ETA_BETAS {
            let (i, j) = polys(alpha, beta)?;
            let near_zero = beta > -0.5;
            out.push(EtaCheck {
                eta,
                beta,
                i_count: open_count(&i, eta)?,
                j_count: open_count(&j, eta)?,
                expected_i: if near_zero { eps_hat } else { theta_hat + 1 },
                expected_j: if near_zero { theta_hat } else { eps_hat + 1 },
            });
        }
    }
    Ok(out)
}
