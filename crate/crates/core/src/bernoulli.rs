//! Bernoulli numbers, Bernoulli polynomials, their periodic extensions, and
//! the Hurwitz zeta special values at non-positive integers.
//!
//! Everything here is exact rational arithmetic. The number cache is grown
//! behind an `RwLock`, so concurrent readers are cheap once warmed up.

use crate::rational::Rational;
use crate::{Error, Result};
use num::{BigInt, Integer, One, Signed, Zero};
use std::sync::RwLock;

static BERNOULLI_CACHE: RwLock<Vec<Rational>> = RwLock::new(Vec::new());

/// Binomial coefficient `C(n, k)` as a big integer.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Bernoulli number `B_j` from the generating function `t/(e^t - 1)`.
///
/// Computed by the recurrence `sum_{i=0}^{n} C(n+1, i) B_i = 0` and memoized;
/// `B_1 = -1/2` and `B_j = 0` for odd `j >= 3`.
pub fn bernoulli_number(j: usize) -> Rational {
    {
        let cache = BERNOULLI_CACHE.read().unwrap();
        if j < cache.len() {
            return cache[j].clone();
        }
    }
    let mut cache = BERNOULLI_CACHE.write().unwrap();
    if cache.is_empty() {
        cache.push(Rational::one());
    }
    while cache.len() <= j {
        let n = cache.len();
        if n % 2 == 1 && n >= 3 {
            cache.push(Rational::zero());
            continue;
        }
        let mut acc = Rational::zero();
        for (i, b) in cache.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            acc += Rational::from(binomial(n + 1, i)) * b;
        }
        let value = -acc / Rational::from(BigInt::from(n + 1));
        cache.push(value);
    }
    cache[j].clone()
}

static SCALED_POLY_CACHE: RwLock<Vec<(Vec<BigInt>, BigInt)>> = RwLock::new(Vec::new());

/// Integer coefficients `c_0..c_j` and denominator `D` with
/// `B_j(X) = (sum_m c_m X^m) / D`; memoized so repeated evaluations cost a
/// Horner pass and nothing else.
pub fn bernoulli_poly_scaled(j: usize) -> (Vec<BigInt>, BigInt) {
    {
        let cache = SCALED_POLY_CACHE.read().unwrap();
        if j < cache.len() {
            return cache[j].clone();
        }
    }
    let mut cache = SCALED_POLY_CACHE.write().unwrap();
    while cache.len() <= j {
        let n = cache.len();
        let rational: Vec<Rational> = (0..=n)
            .map(|m| Rational::from(binomial(n, m)) * bernoulli_number(n - m))
            .collect();
        let mut denom = BigInt::one();
        for c in &rational {
            denom = denom.lcm(c.denom());
        }
        let coeffs = rational
            .iter()
            .map(|c| c.numer() * (&denom / c.denom()))
            .collect();
        cache.push((coeffs, denom));
    }
    cache[j].clone()
}

/// Bernoulli polynomial `B_j(alpha) = sum_i C(j, i) B_i alpha^{j-i}`.
pub fn bernoulli_poly(j: usize, alpha: &Rational) -> Rational {
    let (coeffs, denom) = bernoulli_poly_scaled(j);
    let mut acc = Rational::zero();
    for c in coeffs.iter().rev() {
        acc *= alpha;
        if !c.is_zero() {
            acc += Rational::from(c.clone());
        }
    }
    acc / Rational::from(denom)
}

/// Periodic Bernoulli polynomial `B~_j(alpha) = B_j(alpha - floor(alpha))`.
///
/// At integer `alpha` this evaluates `B_j(0)`; in particular `B~_1(n) = -1/2`
/// for integers `n`. That convention (no symmetrized Fourier value) is relied
/// upon by the level-2 Dedekind sums.
pub fn periodic_bernoulli(j: usize, alpha: &Rational) -> Rational {
    bernoulli_poly(j, &(alpha - alpha.floor()))
}

/// `zeta(-j; alpha) = -B_{j+1}(alpha)/(j+1)` for `j >= 0`, `alpha > 0`.
pub fn hurwitz_zeta_nonpositive(j: usize, alpha: &Rational) -> Result<Rational> {
    if !alpha.is_positive() {
        return Err(Error::Domain(format!(
            "hurwitz zeta at non-positive integers requires alpha > 0, got {alpha}"
        )));
    }
    Ok(-bernoulli_poly(j + 1, alpha) / Rational::from(BigInt::from(j + 1)))
}

/// Hurwitz zeta `zeta(s; alpha)` for integer `s >= 2` and `alpha in (0, 1]`,
/// by direct summation with an Euler-Maclaurin tail.
///
/// Only needed by the experimental starred L-term; accuracy ~1e-13.
pub fn hurwitz_zeta_int(s: u32, alpha: f64) -> f64 {
    assert!(s >= 2 && alpha > 0.0);
    let cutoff = 48usize;
    let mut head = 0.0;
    for n in 0..cutoff {
        head += (n as f64 + alpha).powi(-(s as i32));
    }
    let m = cutoff as f64 + alpha;
    let s = s as f64;
    // integral + half-term + two Bernoulli corrections
    let tail = m.powf(1.0 - s) / (s - 1.0) + 0.5 * m.powf(-s) + s * m.powf(-s - 1.0) / 12.0
        - s * (s + 1.0) * (s + 2.0) * m.powf(-s - 3.0) / 720.0;
    head + tail
}
