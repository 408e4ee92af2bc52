//! The genus-2 `SU(2)`-TQFT signature `σ₂(x)` by its independent evaluation
//! routes, and the machine verification of the shear-difference identity
//! `σ₂(x/(2x+1)) - σ₂(x) = 2r² + 2rp + p² - 1`.

use crate::dedekind::{s_odd_exact, NeumaierSum};
use crate::rational::ReducedFraction;
use crate::{Error, Result};
use num::{BigInt, BigRational, One, Signed};
use rayon::prelude::*;
use std::f64::consts::PI;
use std::time::Instant;

/// A valid argument of `σ₂`: `x = r/p` with `1 <= r < p`, both odd, coprime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sigma2Argument {
    x: ReducedFraction,
}

impl Sigma2Argument {
    pub fn new(r: i64, p: i64) -> Result<Self> {
        Self::from_fraction(ReducedFraction::new(r, p)?)
    }

    pub fn from_fraction(x: ReducedFraction) -> Result<Self> {
        let r = x.numer();
        let p = x.denom();
        if !x.is_odd_pair() || !r.is_positive() || r >= p {
            return Err(Error::Domain(format!(
                "sigma2 needs x = r/p with 1 <= r < p, r and p odd and coprime; got {x}"
            )));
        }
        Ok(Self { x })
    }

    pub fn x(&self) -> &ReducedFraction {
        &self.x
    }

    pub fn r(&self) -> i64 {
        self.x.numer_i64().expect("validated argument fits i64")
    }

    pub fn p(&self) -> i64 {
        self.x.denom_i64().expect("validated argument fits i64")
    }

    /// The shear image `x/(2x+1) = r/(2r+p)`, computed directly on the
    /// integer pair (`2r+p` is odd and coprime to `r`), never through floats.
    pub fn shear(&self) -> Self {
        let r = self.x.numer().clone();
        let p = BigInt::from(2) * &r + self.x.denom();
        Self {
            x: ReducedFraction::from_bigints(r, p).expect("denominator 2r+p > 0"),
        }
    }
}

/// `σ₂` from the trigonometric formula
///
/// `1/(6p²) - 1/6 + (1/4p²) Σ_{n odd <= p-2} T(n;x) / (sin³(πn/2p) sin²(πnx))`
///
/// with `T(n;x) = Σ_{ε=±1} (p+ε)(sin(π(2r-3ε)n/2p) + 3 sin(π(2r+ε)n/2p))`.
pub fn sigma2_trig(arg: &Sigma2Argument) -> f64 {
    let r = arg.r();
    let p = arg.p();
    let pf = p as f64;
    let mut sum = NeumaierSum::default();
    let mut n = 1i64;
    while n <= p - 2 {
        let mut t = 0.0;
        for eps in [1i64, -1] {
            let a = PI * ((2 * r - 3 * eps) * n).rem_euclid(4 * p) as f64 / (2.0 * pf);
            let b = PI * ((2 * r + eps) * n).rem_euclid(4 * p) as f64 / (2.0 * pf);
            t += (p + eps) as f64 * (a.sin() + 3.0 * b.sin());
        }
        let s_half = (PI * n as f64 / (2.0 * pf)).sin();
        let s_x = (PI * ((n * r).rem_euclid(2 * p)) as f64 / pf).sin();
        sum.add(t / (s_half.powi(3) * s_x.powi(2)));
        n += 2;
    }
    1.0 / (6.0 * pf * pf) - 1.0 / 6.0 + sum.total() / (4.0 * pf * pf)
}

/// `σ₂(x) = (2/p) Σ_{n odd <= p-2} cot³(πn/2p)/sin(πnx)`.
pub fn sigma2_cot3(arg: &Sigma2Argument) -> f64 {
    let r = arg.r();
    let p = arg.p();
    let pf = p as f64;
    let mut sum = NeumaierSum::default();
    let mut n = 1i64;
    while n <= p - 2 {
        let ct = 1.0 / (PI * n as f64 / (2.0 * pf)).tan();
        let s = (PI * ((n * r).rem_euclid(2 * p)) as f64 / pf).sin();
        sum.add(ct.powi(3) / s);
        n += 2;
    }
    2.0 * sum.total() / pf
}

/// `σ₂(x) = p² S₂^odd(x) - 2 S₀^odd(x)` in exact rational arithmetic; the
/// result is asserted to be an integer before it is returned.
pub fn sigma2_exact(arg: &Sigma2Argument) -> Result<BigInt> {
    let p2 = BigRational::from(arg.x.denom() * arg.x.denom());
    let value = p2 * s_odd_exact(2, &arg.x)?
        - BigRational::from(BigInt::from(2)) * s_odd_exact(0, &arg.x)?;
    if !value.denom().is_one() {
        return Err(Error::Integrality(format!(
            "sigma2({}) evaluated to the non-integer {value}",
            arg.x
        )));
    }
    Ok(value.numer().clone())
}

/// Outcome of the two closed-form trigonometric identity checks at one
/// `(p, x)`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TrigIdentityReport {
    pub p: i64,
    pub r: i64,
    /// `Σ_{n=1}^{p-1} 1/sin²(πn/p)` and its closed form `(p²-1)/3`.
    pub sin_sum: f64,
    pub sin_sum_expected: f64,
    /// `Σ_{n odd <= p-2} cos(πnx)/sin²(πnx)` and its closed form `(p²-1)/12`.
    pub cos_sum: f64,
    pub cos_sum_expected: f64,
    pub tolerance: f64,
    pub ok: bool,
}

/// Verifies the two sine/cosine closed forms behind the `σ₂` reduction, to
/// `1e-8 * p²`. Requires odd `p >= 3` and `x = r/p` with odd `r` coprime to
/// `p` (the second identity flips sign for even `r`).
pub fn trig_identity_checks(p: i64, x: &ReducedFraction) -> Result<TrigIdentityReport> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::Domain(format!("need odd p >= 3, got {p}")));
    }
    if x.denom() != &BigInt::from(p) {
        return Err(Error::Domain(format!("x = {x} is not a fraction over {p}")));
    }
    let r = x
        .numer_i64()
        .ok_or_else(|| Error::Domain("numerator too large".into()))?;
    if r.rem_euclid(2) == 0 {
        return Err(Error::Domain(format!(
            "second identity requires odd numerator, got {r}"
        )));
    }
    let pf = p as f64;
    let mut sin_sum = NeumaierSum::default();
    for n in 1..p {
        sin_sum.add(1.0 / (PI * n as f64 / pf).sin().powi(2));
    }
    let mut cos_sum = NeumaierSum::default();
    let mut n = 1i64;
    while n <= p - 2 {
        let angle = PI * ((n * r).rem_euclid(2 * p)) as f64 / pf;
        cos_sum.add(angle.cos() / angle.sin().powi(2));
        n += 2;
    }
    let tolerance = 1e-8 * pf * pf;
    let sin_expected = (pf * pf - 1.0) / 3.0;
    let cos_expected = (pf * pf - 1.0) / 12.0;
    let ok = (sin_sum.total() - sin_expected).abs() < tolerance
        && (cos_sum.total() - cos_expected).abs() < tolerance;
    Ok(TrigIdentityReport {
        p,
        r,
        sin_sum: sin_sum.total(),
        sin_sum_expected: sin_expected,
        cos_sum: cos_sum.total(),
        cos_sum_expected: cos_expected,
        tolerance,
        ok,
    })
}

/// Result of sweeping the shear-difference identity over all coprime odd
/// pairs `1 <= r < p <= p_max`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct MainTheoremReport {
    pub p_max: i64,
    pub pairs_checked: usize,
    /// Pairs `(r, p)` where the identity failed (empty on success).
    pub failures: Vec<(i64, i64)>,
    pub elapsed_seconds: f64,
}

impl MainTheoremReport {
    pub fn all_passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `sigma2_exact(r/(2r+p)) - sigma2_exact(r/p) = 2r² + 2rp + p² - 1`
/// in exact arithmetic for every coprime odd pair with `p <= p_max`.
pub fn verify_main_theorem(p_max: i64) -> Result<MainTheoremReport> {
    if p_max < 3 {
        return Err(Error::Domain(format!("p_max must be >= 3, got {p_max}")));
    }
    let started = Instant::now();
    let pairs: Vec<(i64, i64)> = (3..=p_max)
        .step_by(2)
        .flat_map(|p| {
            (1..p)
                .step_by(2)
                .filter(move |r| gcd(*r, p) == 1)
                .map(move |r| (r, p))
        })
        .collect();
    let failures: Vec<(i64, i64)> = pairs
        .par_iter()
        .filter_map(|&(r, p)| {
            let arg = Sigma2Argument::new(r, p).ok()?;
            let lhs = match (sigma2_exact(&arg.shear()), sigma2_exact(&arg)) {
                (Ok(a), Ok(b)) => a - b,
                _ => return Some((r, p)),
            };
            let rhs = BigInt::from(2 * r * r + 2 * r * p + p * p - 1);
            (lhs != rhs).then_some((r, p))
        })
        .collect();
    Ok(MainTheoremReport {
        p_max,
        pairs_checked: pairs.len(),
        failures,
        elapsed_seconds: started.elapsed().as_secs_f64(),
    })
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::ToPrimitive;

    #[test]
    fn domain_is_enforced() {
        assert!(Sigma2Argument::new(2, 4).is_err()); // even and non-coprime
        assert!(Sigma2Argument::new(2, 5).is_err()); // even r
        assert!(Sigma2Argument::new(1, 4).is_err()); // even p
        assert!(Sigma2Argument::new(3, 3).is_err()); // r = p
        assert!(Sigma2Argument::new(5, 3).is_err()); // r > p
        assert!(Sigma2Argument::new(-1, 3).is_err()); // r < 1
        assert!(Sigma2Argument::new(1, 3).is_ok());
    }

    #[test]
    fn exact_values() {
        for (r, p, expect) in [(1, 3, 4), (1, 5, 20), (3, 5, 12), (5, 7, 32)] {
            let v = sigma2_exact(&Sigma2Argument::new(r, p).unwrap()).unwrap();
            assert_eq!(v, BigInt::from(expect), "sigma2({r}/{p})");
        }
    }

    #[test]
    fn trig_and_cot3_match_exact() {
        for (r, p) in [(1, 3), (1, 5), (3, 5), (5, 7), (3, 11), (7, 9)] {
            let arg = Sigma2Argument::new(r, p).unwrap();
            let exact = sigma2_exact(&arg).unwrap().to_f64().unwrap();
            let trig = sigma2_trig(&arg);
            let cot3 = sigma2_cot3(&arg);
            assert!(
                (trig - exact).abs() < 1e-9,
                "trig at {r}/{p}: {trig} vs {exact}"
            );
            assert!(
                (cot3 - exact).abs() < 1e-9,
                "cot3 at {r}/{p}: {cot3} vs {exact}"
            );
        }
    }

    #[test]
    fn shear_is_exact_on_pairs() {
        let arg = Sigma2Argument::new(3, 5).unwrap();
        let sheared = arg.shear();
        assert_eq!(sheared.r(), 3);
        assert_eq!(sheared.p(), 11);
    }

    #[test]
    fn trig_identities_small_cases() {
        // p = 3: 1/sin²(π/3) + 1/sin²(2π/3) = 8/3, cos(π/3)/sin²(π/3) = 2/3
        let rep = trig_identity_checks(3, &ReducedFraction::new(1, 3).unwrap()).unwrap();
        assert!((rep.sin_sum - 8.0 / 3.0).abs() < 1e-12);
        assert!((rep.cos_sum - 2.0 / 3.0).abs() < 1e-12);
        assert!(rep.ok);
        // even numerators are rejected (the closed form flips sign there)
        assert!(trig_identity_checks(3, &ReducedFraction::new(2, 3).unwrap()).is_err());
    }

    #[test]
    fn main_theorem_small_sweep() {
        let rep = verify_main_theorem(15).unwrap();
        assert!(rep.all_passed(), "failures: {:?}", rep.failures);
        assert!(rep.pairs_checked > 0);
    }
}
