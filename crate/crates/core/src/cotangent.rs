//! Higher derivatives of cotangent as integer polynomials in `cot`.
//!
//! `cot^{(g)}(z) = P_g(cot z)` with `P_0(u) = u` and the recurrence
//! `P_{g+1}(u) = -(1 + u^2) P_g'(u)`; coefficients grow like `g! 2^g` so they
//! are kept as big integers.

use crate::{Error, Result};
use num::{BigInt, ToPrimitive, Zero};
use std::sync::RwLock;

static POLY_CACHE: RwLock<Vec<Vec<BigInt>>> = RwLock::new(Vec::new());

/// The polynomial `P_g` with `cot^{(g)}(z) = P_g(cot z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CotDerivativePoly {
    order: usize,
    coeffs: Vec<BigInt>,
}

impl CotDerivativePoly {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficients of `u^0, u^1, ..., u^{g+1}`.
    pub fn coefficients(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Horner evaluation at `u = cot(theta)` in double precision.
    pub fn eval(&self, u: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * u + c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }
}

fn extend_cache(cache: &mut Vec<Vec<BigInt>>, g: usize) {
    if cache.is_empty() {
        cache.push(vec![BigInt::zero(), BigInt::from(1)]);
    }
    while cache.len() <= g {
        let prev = cache.last().unwrap();
        // derivative of prev
        let dp: Vec<BigInt> = (1..prev.len()).map(|i| &prev[i] * BigInt::from(i)).collect();
        // -(1 + u^2) * dp
        let mut next = vec![BigInt::zero(); dp.len() + 2];
        for (i, c) in dp.iter().enumerate() {
            next[i] -= c;
            next[i + 2] -= c;
        }
        cache.push(next);
    }
}

/// `P_g`, memoized.
pub fn cot_derivative_poly(g: usize) -> CotDerivativePoly {
    {
        let cache = POLY_CACHE.read().unwrap();
        if g < cache.len() {
            return CotDerivativePoly {
                order: g,
                coeffs: cache[g].clone(),
            };
        }
    }
    let mut cache = POLY_CACHE.write().unwrap();
    extend_cache(&mut cache, g);
    CotDerivativePoly {
        order: g,
        coeffs: cache[g].clone(),
    }
}

/// `cot^{(g)}(theta)` in double precision. Errors on `theta ∈ πZ`.
pub fn cot_derivative(g: usize, theta: f64) -> Result<f64> {
    let s = theta.sin();
    if s.abs() < 1e-12 {
        return Err(Error::Pole(format!("cot^{{({g})}} at theta = {theta}")));
    }
    Ok(cot_derivative_poly(g).eval(theta.cos() / s))
}
