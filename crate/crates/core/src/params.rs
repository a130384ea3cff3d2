//! Validated weight exponents of the measure `|z|^(2 beta) (1 - |z|^2)^alpha dA`.

use crate::error::{Error, Result};

/// The `(alpha, beta)` pair together with the decomposition `beta = beta0 + m`,
/// `m = ceil(beta)`, `-1 < beta0 <= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    alpha: f64,
    beta: f64,
    m: u32,
    beta0: f64,
}

impl KernelParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= -1.0 {
            return Err(Error::InvalidParams(format!("alpha must exceed -1, got {alpha}")));
        }
        if !beta.is_finite() || beta <= -1.0 {
            return Err(Error::InvalidParams(format!("beta must exceed -1, got {beta}")));
        }
        let ceil = beta.ceil();
        if ceil > u32::MAX as f64 {
            return Err(Error::InvalidParams(format!("beta too large: {beta}")));
        }
        let m = ceil.max(0.0) as u32;
        let beta0 = beta - m as f64;
        Ok(Self {
            alpha,
            beta,
            m,
            beta0,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn beta0(&self) -> f64 {
        self.beta0
    }

    /// `alpha` as an integer when it is one.
    pub fn alpha_int(&self) -> Option<u32> {
        as_nonneg_int(self.alpha)
    }

    /// True when `beta` is a nonnegative integer (the constant-`Q` branch).
    pub fn beta_is_integer(&self) -> bool {
        self.beta0 == 0.0
    }

    /// The parameters with `beta` replaced by its reduced part `beta0`.
    pub fn reduced(&self) -> Self {
        Self {
            alpha: self.alpha,
            beta: self.beta0,
            m: 0,
            beta0: self.beta0,
        }
    }
}

pub(crate) fn as_nonneg_int(x: f64) -> Option<u32> {
    if x >= 0.0 && x.fract() == 0.0 && x <= u32::MAX as f64 {
        Some(x as u32)
    } else {
        None
    }
}
