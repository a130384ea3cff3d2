use num_complex::Complex64;

use crate::poly::ComplexPoly;

/// A power series `Σ a_n z^n` kept up to order `N`, with a certified bound on
/// `Σ_{n>N} |a_n|` valid on the closed unit disk.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
    tail_bound: f64,
}

impl TruncatedSeries {
    /// `coeffs` must be nonempty; `tail_bound` must be nonnegative.
    pub fn new(coeffs: Vec<Complex64>, tail_bound: f64) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least a0");
        assert!(tail_bound >= 0.0, "tail bound must be nonnegative");
        Self { coeffs, tail_bound }
    }

    /// An exact series (zero tail) from a polynomial.
    pub fn from_poly(p: &ComplexPoly) -> Self {
        let mut coeffs = p.coeffs().to_vec();
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self::new(coeffs, 0.0)
    }

    pub fn from_real(coeffs: &[f64], tail_bound: f64) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(), tail_bound)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn truncation_order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn is_exact(&self) -> bool {
        self.tail_bound == 0.0
    }

    /// The kept part as a polynomial.
    pub fn to_poly(&self) -> ComplexPoly {
        ComplexPoly::new(self.coeffs.clone())
    }

    /// Sum of the kept terms; within `tail_bound` of the full series for `|z| <= 1`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `(s(z), s'(z))` of the kept part.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        self.coeffs.iter().rev().fold((zero, zero), |(p, dp), &c| (p * z + c, dp * z + p))
    }

    /// Formal derivative of the kept part.
    pub fn derivative(&self) -> ComplexPoly {
        self.to_poly().derivative()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// `a_n ↦ a_n / (n + beta)`; the tail shrinks by at least `N + 1 + beta`.
    pub fn t_beta(&self, beta: f64) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(n, &a)| a / (n as f64 + beta))
            .collect();
        let order = self.truncation_order() as f64;
        Self::new(coeffs, self.tail_bound / (order + 1.0 + beta))
    }
}
