//! Dense polynomials with complex coefficients.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::special::gen_binom;

/// A polynomial `Σ c_n ξ^n`, stored lowest power first.
///
/// Trailing zero coefficients are stripped on construction, so `degree()` is
/// canonical. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ComplexPoly {
    coeffs: Vec<Complex64>,
}

impl ComplexPoly {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `(1 + sign·ξ)^k` expanded.
    pub fn binomial_power(k: u32, sign: f64) -> Self {
        Self::from_real(
            &(0..=k as usize)
                .map(|n| gen_binom(k as f64, n) * sign.powi(n as i32))
                .collect::<Vec<_>>(),
        )
    }

    /// `P_α(ξ) = (1 - ξ)^(α+1)`.
    pub fn p_alpha(alpha: u32) -> Self {
        Self::binomial_power(alpha + 1, -1.0)
    }

    /// Planted-root polynomial `Π (ξ - r)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        roots.iter().fold(Self::constant(Complex64::new(1.0, 0.0)), |acc, &r| {
            acc * Self::new(vec![-r, Complex64::new(1.0, 0.0)])
        })
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Index of the last nonzero coefficient (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// Term-by-term summation `Σ c_n z^n`.
    pub fn eval_naive(&self, z: Complex64) -> Complex64 {
        let mut power = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(0.0, 0.0);
        for &c in &self.coeffs {
            sum += c * power;
            power *= z;
        }
        sum
    }

    /// `Σ |c_n| |z|^n`, the natural scale for rounding errors in `eval`.
    pub fn eval_abs(&self, r: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// `(p(z), p'(z))` in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        self.coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| (p * z + c, dp * z + p))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, &c)| c * n as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `ξ ↦ p(s ξ)`.
    pub fn compose_scale(&self, s: Complex64) -> Self {
        let mut power = Complex64::new(1.0, 0.0);
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| {
                let v = c * power;
                power *= s;
                v
            })
            .collect();
        Self::new(coeffs)
    }

    /// `ξ ↦ p(-ξ)`.
    pub fn reflect(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, &c)| if n % 2 == 0 { c } else { -c })
                .collect(),
        )
    }

    /// Keeps only the even (`odd = false`) or odd powers.
    pub fn parity_part(&self, odd: bool) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(n, &c)| if (n % 2 == 1) == odd { c } else { Complex64::new(0.0, 0.0) })
                .collect(),
        )
    }

    /// `ξ ↦ ξ p(ξ)`.
    pub fn shift_up(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&self.coeffs);
        Self::new(coeffs)
    }
}

impl Add for &ComplexPoly {
    type Output = ComplexPoly;

    fn add(self, rhs: &ComplexPoly) -> ComplexPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..len).map(|n| self.coeff(n) + rhs.coeff(n)).collect())
    }
}

impl Sub for &ComplexPoly {
    type Output = ComplexPoly;

    fn sub(self, rhs: &ComplexPoly) -> ComplexPoly {
        let len = self.coeffs.len().max(rhs.coeffs.len());
        ComplexPoly::new((0..len).map(|n| self.coeff(n) - rhs.coeff(n)).collect())
    }
}

impl Neg for ComplexPoly {
    type Output = ComplexPoly;

    fn neg(self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl Mul for &ComplexPoly {
    type Output = ComplexPoly;

    fn mul(self, rhs: &ComplexPoly) -> ComplexPoly {
        if self.is_zero() || rhs.is_zero() {
            return ComplexPoly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        ComplexPoly::new(out)
    }
}

impl Add for ComplexPoly {
    type Output = ComplexPoly;

    fn add(self, rhs: ComplexPoly) -> ComplexPoly {
        &self + &rhs
    }
}

impl Sub for ComplexPoly {
    type Output = ComplexPoly;

    fn sub(self, rhs: ComplexPoly) -> ComplexPoly {
        &self - &rhs
    }
}

impl Mul for ComplexPoly {
    type Output = ComplexPoly;

    fn mul(self, rhs: ComplexPoly) -> ComplexPoly {
        &self * &rhs
    }
}
