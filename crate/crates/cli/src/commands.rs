//! Validation and dispatch of each subcommand to the core routines.

use bergman_core::analytic::{
    build_g, check_ode_z1, check_tbeta_derivative_scaled, convolution_identity_check, step_recurrence_g,
};
use bergman_core::curves::{
    empirical_measure, solve_s_alpha, trace_curves, BetaGrid, GEvaluator, MAX_ALPHA,
};
use bergman_core::evenodd::{even_odd_thresholds, EtaCheck};
use bergman_core::kernel::KernelEvaluator;
use bergman_core::quadrature::{gauss_jacobi_rule, norm_moment_residual, verify_reproducing};
use bergman_core::zeros::rouche_bounds;
use bergman_core::{Complex64, ComplexPoly, KernelParams, TruncatedSeries};

use crate::args::{
    AlphaListArgs, Command, EvenOddArgs, KernelEvalArgs, PointArgs, RoucheArgs, TraceArgs, VerifyArgs,
};
use crate::diag::{Code, Diagnostic};
use crate::export::{curve_rows, curve_table, SvgSeries, Table, Value, Window};

/// What a command produced: a table, and for point-valued commands a plot.
#[derive(Debug, Clone)]
pub struct Output {
    pub table: Table,
    pub plot: Option<Plot>,
    /// Set when the command ran but a check it performs failed.
    pub failure: Option<Diagnostic>,
}

#[derive(Debug, Clone)]
pub struct Plot {
    pub title: String,
    pub series: Vec<SvgSeries>,
    pub window: Window,
}

impl Output {
    fn table(table: Table) -> Self {
        Self {
            table,
            plot: None,
            failure: None,
        }
    }
}

type Res<T> = std::result::Result<T, Diagnostic>;

fn invalid(code: Code, msg: String) -> Diagnostic {
    Diagnostic::new(code, msg)
}

pub fn alpha_real(alpha: f64) -> Res<f64> {
    if alpha.is_finite() && alpha > -1.0 {
        Ok(alpha)
    } else {
        Err(invalid(Code::AlphaOutOfRange, format!("alpha must exceed -1, got {alpha}")))
    }
}

pub fn alpha_integer(alpha: f64) -> Res<u32> {
    alpha_real(alpha)?;
    if alpha < 0.0 || alpha.fract() != 0.0 {
        return Err(invalid(
            Code::AlphaNotInteger,
            format!("this command needs a nonnegative integer alpha, got {alpha}"),
        ));
    }
    if alpha > MAX_ALPHA as f64 {
        return Err(invalid(Code::AlphaTooLarge, format!("alpha {alpha} exceeds {MAX_ALPHA}")));
    }
    Ok(alpha as u32)
}

pub fn beta_real(beta: f64) -> Res<f64> {
    if beta.is_finite() && beta > -1.0 {
        Ok(beta)
    } else {
        Err(invalid(Code::BetaOutOfRange, format!("beta must exceed -1, got {beta}")))
    }
}

/// β for commands built on `G_{α,β}`, which has a pole at every nonnegative integer β.
pub fn beta_for_g(beta: f64) -> Res<f64> {
    beta_real(beta)?;
    if beta >= 0.0 && beta.fract() == 0.0 {
        return Err(invalid(Code::BetaInteger, format!("G is undefined at integer beta = {beta}")));
    }
    Ok(beta)
}

/// β strictly inside `(-1, 0)`.
pub fn beta_negative(beta: f64) -> Res<f64> {
    beta_for_g(beta)?;
    if beta > 0.0 {
        return Err(invalid(Code::BetaNotNegative, format!("beta must lie in (-1, 0), got {beta}")));
    }
    Ok(beta)
}

pub fn r0_positive(r0: f64) -> Res<f64> {
    if r0.is_finite() && r0 > 0.0 {
        Ok(r0)
    } else {
        Err(invalid(Code::R0OutOfRange, format!("r0 must be positive, got {r0}")))
    }
}

/// `default`, `geometric:<per-half>:<offset>` or `uniform:<n>`.
pub fn parse_grid(spec: &str) -> Res<BetaGrid> {
    let bad = |why: &str| invalid(Code::GridInvalid, format!("grid `{spec}`: {why}"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["default"] => Ok(BetaGrid::default_grid()),
        ["geometric", n, off] => {
            let n: usize = n.parse().map_err(|_| bad("bad point count"))?;
            let off: f64 = off.parse().map_err(|_| bad("bad offset"))?;
            BetaGrid::geometric(n, off).map_err(|e| bad(&e.to_string()))
        }
        ["uniform", n] => {
            let n: usize = n.parse().map_err(|_| bad("bad point count"))?;
            if n == 0 {
                return Err(bad("needs at least one point"));
            }
            let betas = (1..=n).map(|i| -1.0 + i as f64 / (n + 1) as f64).collect();
            BetaGrid::new(betas).map_err(|e| bad(&e.to_string()))
        }
        _ => Err(bad("expected default, geometric:<n>:<offset> or uniform:<n>")),
    }
}

pub fn dispatch(command: &Command) -> Res<Output> {
    match command {
        Command::KernelEval(a) => kernel_eval(a),
        Command::Roots(a) => roots(a),
        Command::Trace(a) => trace(a),
        Command::Rouche(a) => rouche(a),
        Command::EvenOdd(a) => even_odd(a),
        Command::SAlpha(a) => s_alpha(a),
        Command::Measure(a) => measure(a),
        Command::Verify(a) => verify(a),
    }
}

fn kernel_eval(a: &KernelEvalArgs) -> Res<Output> {
    let alpha = alpha_real(a.alpha)?;
    let beta = beta_real(a.beta)?;
    let xi = Complex64::new(a.xi, a.xi_im);
    if !(xi.norm() < 1.0) {
        return Err(invalid(Code::XiOutsideDisk, format!("xi = {xi} must lie in the open unit disk")));
    }
    let params = KernelParams::new(alpha, beta)?;
    let value = KernelEvaluator::new(params)?.eval_xi(xi)?;
    let mut t = Table::new("kernel_value", &["alpha", "beta", "xi_re", "xi_im", "re", "im"]);
    t.push(vec![alpha.into(), beta.into(), xi.re.into(), xi.im.into(), value.re.into(), value.im.into()]);
    Ok(Output::table(t))
}

fn point_plot(title: String, label: String, points: &[Complex64]) -> Plot {
    let series = vec![SvgSeries {
        label,
        points: points.iter().map(|z| (z.re, z.im)).collect(),
    }];
    let window = Window::fit(&series);
    Plot { title, series, window }
}

/// Roots sorted by real part then imaginary part.
fn roots(a: &PointArgs) -> Res<Output> {
    let alpha = alpha_integer(a.alpha)?;
    let beta = beta_negative(a.beta)?;
    let roots = GEvaluator::new(alpha, beta)?.roots()?.roots;
    let mut t = Table::new("g_roots", &["alpha", "beta", "k", "re", "im"]);
    for (k, z) in roots.iter().enumerate() {
        t.push(vec![alpha.into(), beta.into(), k.into(), z.re.into(), z.im.into()]);
    }
    let plot = point_plot(format!("roots of G, alpha = {alpha}, beta = {beta}"), format!("alpha={alpha}"), &roots);
    Ok(Output {
        table: t,
        plot: Some(plot),
        failure: None,
    })
}

fn trace(a: &TraceArgs) -> Res<Output> {
    let alphas = a.alpha.iter().map(|&x| alpha_integer(x)).collect::<Res<Vec<u32>>>()?;
    let grid = parse_grid(&a.grid)?;
    let mut curves = Vec::new();
    for &alpha in &alphas {
        let traced = trace_curves(alpha, &grid)?;
        curves.extend(traced.into_iter().filter(|c| a.component.is_none_or(|k| c.k == k)));
    }
    let rows = curve_rows(&curves);
    // the real component alone is drawn as a graph over β
    let real_only = a.component == Some(0);
    let series: Vec<SvgSeries> = curves
        .iter()
        .map(|c| SvgSeries {
            label: format!("alpha={} k={}", c.alpha, c.k),
            points: c
                .samples
                .iter()
                .map(|&(b, z)| if real_only { (b, z.re) } else { (z.re, z.im) })
                .collect(),
        })
        .collect();
    let window = if real_only {
        Window { x0: -1.0, x1: 0.0, y0: -5.0, y1: 0.0 }
    } else {
        Window::fit(&series)
    };
    let title = if real_only {
        "real zero curves over beta".to_string()
    } else {
        "zero curves".to_string()
    };
    Ok(Output {
        table: curve_table(&rows),
        plot: Some(Plot { title, series, window }),
        failure: None,
    })
}

fn rouche(a: &RoucheArgs) -> Res<Output> {
    let r0 = r0_positive(a.r0)?;
    let alphas = a.alpha.iter().map(|&x| alpha_integer(x)).collect::<Res<Vec<u32>>>()?;
    let mut t = Table::new("rouche_window", &["alpha", "r0", "beta1", "beta2", "midpoint"]);
    for alpha in alphas {
        let f = TruncatedSeries::from_poly(&ComplexPoly::p_alpha(alpha));
        let b = rouche_bounds(&f, r0)?;
        t.push(vec![alpha.into(), r0.into(), b.beta1.into(), b.beta2.into(), b.midpoint.into()]);
    }
    Ok(Output::table(t))
}

fn even_odd(a: &EvenOddArgs) -> Res<Output> {
    let alphas = a.alpha.iter().map(|&x| alpha_integer(x)).collect::<Res<Vec<u32>>>()?;
    let grid = parse_grid(&a.grid)?;
    let mut scan = Table::new("even_odd_scan", &["alpha", "beta", "eps", "theta"]);
    let mut summary = Table::new(
        "even_odd_summary",
        &[
            "alpha",
            "eps",
            "theta",
            "eps_hat",
            "theta_hat",
            "table_matches",
            "beta3",
            "beta4",
            "beta5",
            "beta6",
            "case1_near_zero",
            "case1_near_minus_one",
            "case2_near_minus_one",
            "case2_near_zero",
            "eta_checks_hold",
            "eta_checks_safe_hold",
        ],
    );
    for alpha in alphas {
        let rep = even_odd_thresholds(alpha, &grid)?;
        for s in &rep.scan {
            scan.push(vec![alpha.into(), s.beta.into(), s.eps.into(), s.theta.into()]);
        }
        let c = rep.at_zero;
        let all = |v: &[EtaCheck]| -> Value {
            if v.is_empty() {
                Value::Missing
            } else {
                v.iter().all(EtaCheck::holds).into()
            }
        };
        summary.push(vec![
            alpha.into(),
            c.eps.into(),
            c.theta.into(),
            c.eps_hat.into(),
            c.theta_hat.into(),
            rep.table_matches().into(),
            rep.beta3.into(),
            rep.beta4.into(),
            rep.beta5.into(),
            rep.beta6.into(),
            rep.case1.map(|c| c.0).into(),
            rep.case1.map(|c| c.1).into(),
            rep.case2.map(|c| c.0).into(),
            rep.case2.map(|c| c.1).into(),
            all(&rep.eta_checks),
            all(&rep.eta_checks_safe),
        ]);
    }
    Ok(Output::table(if a.scan { scan } else { summary }))
}

fn s_alpha(a: &AlphaListArgs) -> Res<Output> {
    let alphas = a.alpha.iter().map(|&x| alpha_integer(x)).collect::<Res<Vec<u32>>>()?;
    let mut t = Table::new("s_alpha", &["alpha", "s"]);
    for alpha in alphas {
        t.push(vec![alpha.into(), solve_s_alpha(alpha)?.into()]);
    }
    Ok(Output::table(t))
}

fn measure(a: &PointArgs) -> Res<Output> {
    let alpha = alpha_integer(a.alpha)?;
    let beta = beta_negative(a.beta)?;
    let m = empirical_measure(alpha, beta)?;
    let mut t = Table::new("empirical_measure", &["alpha", "beta", "k", "re", "im", "weight"]);
    for (k, z) in m.points.iter().enumerate() {
        t.push(vec![alpha.into(), beta.into(), k.into(), z.re.into(), z.im.into(), m.weight.into()]);
    }
    let plot = point_plot(
        format!("empirical zero measure, alpha = {alpha}, beta = {beta}"),
        format!("alpha={alpha}"),
        &m.points,
    );
    Ok(Output {
        table: t,
        plot: Some(plot),
        failure: None,
    })
}

/// Golden-angle spiral in the disk of radius `r`.
fn spiral(n: usize, r: f64) -> Vec<Complex64> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| Complex64::from_polar(r * ((i as f64 + 0.5) / n as f64).sqrt(), golden * i as f64))
        .collect()
}

fn verify(a: &VerifyArgs) -> Res<Output> {
    let alpha = alpha_real(a.alpha)?;
    let beta = beta_real(a.beta)?;
    let params = KernelParams::new(alpha, beta)?;
    let samples = spiral(a.samples.max(1), 0.9);
    let mut t = Table::new("identity_checks", &["check", "alpha", "beta", "residual", "allowed", "pass"]);
    let push = |t: &mut Table, name: &str, residual: f64, allowed: f64| {
        t.push(vec![
            name.into(),
            alpha.into(),
            beta.into(),
            residual.into(),
            allowed.into(),
            (residual <= allowed).into(),
        ]);
    };

    let b0 = params.beta0();
    if b0 != 0.0 {
        let ode = check_ode_z1(alpha, b0, &samples, 1e-8)?;
        push(&mut t, "ode", ode.residual, 10.0 * ode.tail_bound + ode.rounding_floor);

        let coeffs: Vec<f64> = (0..8).map(|n| if n % 2 == 0 { 1.0 } else { -0.5 } / (n as f64 + 1.0)).collect();
        let tb = check_tbeta_derivative_scaled(&TruncatedSeries::from_real(&coeffs, 0.0), b0, &samples);
        push(&mut t, "t_beta_derivative", tb.residual, tb.tail_bound + tb.rounding_floor);

        let conv = convolution_identity_check(alpha, b0, 20)?;
        push(&mut t, "convolution", conv, 1e-9);

        let this = KernelParams::new(alpha, b0)?;
        let next = KernelParams::new(alpha + 1.0, b0)?;
        let g = build_g(&this, 1e-8)?;
        let stepped = step_recurrence_g(&g, alpha, b0);
        let direct = build_g(&next, 1e-8)?;
        let n = stepped.truncation_order().min(direct.truncation_order());
        let scale = direct.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        let worst = (0..=n)
            .map(|k| (stepped.coeff(k) - direct.coeff(k)).norm())
            .fold(0.0, f64::max);
        let allowed = if alpha.fract() == 0.0 {
            1e-11 * scale
        } else {
            1e-12 * scale + stepped.tail_bound() + direct.tail_bound()
        };
        push(&mut t, "recurrence", worst, allowed);
    }

    let rule = gauss_jacobi_rule(alpha, b0, 64)?;
    let lowest = -(params.m() as i64);
    let mut repro: f64 = 0.0;
    for z in [Complex64::new(0.1, 0.0), Complex64::new(0.4, 0.3), Complex64::new(-0.7, 0.0)] {
        for n in lowest..=10 {
            repro = repro.max(verify_reproducing(&params, z, n, &rule)?);
        }
    }
    push(&mut t, "reproducing", repro, 1e-8);

    let mut moments: f64 = 0.0;
    for n in lowest..=30 {
        moments = moments.max(norm_moment_residual(&params, n, &rule)?);
    }
    push(&mut t, "norm_moments", moments, 1e-12);

    let failed: Vec<String> = t
        .rows
        .iter()
        .filter(|r| r[5] == Value::Bool(false))
        .filter_map(|r| match &r[0] {
            Value::Text(s) => Some(s.clone()),
            _ => None,
        })
        .collect();
    let failure = (!failed.is_empty()).then(|| Diagnostic::new(Code::CheckFailed, format!("failed: {}", failed.join(", "))));
    Ok(Output {
        table: t,
        plot: None,
        failure,
    })
}
