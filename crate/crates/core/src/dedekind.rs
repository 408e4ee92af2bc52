//! Generalized Dedekind sums, completed L-values, cusp constants, period
//! polynomials, and the reciprocity law.
//!
//! Two evaluation routes are kept side by side wherever the mathematics
//! offers them: a Bernoulli-polynomial route (exact over the rationals for
//! level <= 2) and a cotangent route (floating point), so each can serve as
//! an oracle for the other. The level-2 "odd" family `E_k^odd = (1/2)
//! E_k^{1_2,1_2}` runs exactly end to end.

use crate::bernoulli::{
    bernoulli_number, bernoulli_poly, bernoulli_poly_scaled, binomial, hurwitz_zeta_int,
    periodic_bernoulli,
};
use crate::cotangent::cot_derivative;
use crate::periodic::{
    twisted_cot, twisted_periodic_bernoulli, PeriodicMap,
};
use crate::rational::{Rational, ReducedFraction};
use crate::{Error, Result};
use num::complex::Complex64;
use num::{BigInt, BigRational, Integer, One, ToPrimitive, Zero};
use std::collections::HashSet;
use std::f64::consts::PI;

// ---------------------------------------------------------------------------
// Eisenstein specification
// ---------------------------------------------------------------------------

/// Identifies the Eisenstein series `scale * E_k^{chi,psi}` of weight `k`
/// for `Γ(N)`, where `N` is the common modulus of the two periodic maps.
#[derive(Clone, Debug)]
pub struct EisensteinSpec {
    weight: u32,
    chi: PeriodicMap,
    psi: PeriodicMap,
    scale: Rational,
}

impl EisensteinSpec {
    pub fn new(weight: u32, chi: PeriodicMap, psi: PeriodicMap) -> Result<Self> {
        if weight < 2 {
            return Err(Error::Domain(format!("weight must be >= 2, got {weight}")));
        }
        if chi.modulus() != psi.modulus() {
            return Err(Error::Domain(format!(
                "chi and psi must share a modulus ({} vs {})",
                chi.modulus(),
                psi.modulus()
            )));
        }
        Ok(Self {
            weight,
            chi,
            psi,
            scale: Rational::one(),
        })
    }

    pub fn with_scale(mut self, scale: Rational) -> Self {
        self.scale = scale;
        self
    }

    /// `E_k^odd = (1/2) E_k^{1_2,1_2}`, the level-2 family behind `S_g^odd`.
    pub fn odd_family(weight: u32) -> Result<Self> {
        if weight < 2 || !weight.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "odd family needs even weight >= 2, got {weight}"
            )));
        }
        let one2 = PeriodicMap::odd_indicator();
        Ok(Self::new(weight, one2.clone(), one2)?
            .with_scale(BigRational::new(BigInt::one(), BigInt::from(2))))
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn level(&self) -> u32 {
        self.chi.modulus() as u32
    }

    pub fn chi(&self) -> &PeriodicMap {
        &self.chi
    }

    pub fn psi(&self) -> &PeriodicMap {
        &self.psi
    }

    pub fn scale(&self) -> &Rational {
        &self.scale
    }

    /// Whether every quantity of this spec can be computed exactly: rational
    /// map values and level <= 2 (the DFT then stays rational).
    pub fn is_exact(&self) -> bool {
        self.level() <= 2 && self.chi.is_exact() && self.psi.is_exact()
    }

    /// `chi(0) = psi(0) = 0`, the hypothesis gating the starred L-term away.
    pub fn vanishes_at_zero(&self) -> bool {
        self.chi.value(0).norm() < 1e-15 && self.psi.value(0).norm() < 1e-15
    }
}

// ---------------------------------------------------------------------------
// Integer 2x2 matrices
// ---------------------------------------------------------------------------

/// Integer matrix `(a b; c d)` with determinant one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GammaMatrix {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl GammaMatrix {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if a * d - b * c != 1 {
            return Err(Error::Matrix(format!(
                "determinant of ({a},{b};{c},{d}) is {}, expected 1",
                a * d - b * c
            )));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Membership in the principal congruence subgroup `Γ(N)`.
    pub fn is_in_gamma(&self, level: u32) -> bool {
        let n = level as i64;
        (self.a - 1).rem_euclid(n) == 0
            && (self.d - 1).rem_euclid(n) == 0
            && self.b.rem_euclid(n) == 0
            && self.c.rem_euclid(n) == 0
    }

    /// Möbius action on a reduced fraction; errors when `cx + d = 0`.
    pub fn apply(&self, x: &ReducedFraction) -> Result<ReducedFraction> {
        let r = x.numer();
        let p = x.denom();
        let num = BigInt::from(self.a) * r + BigInt::from(self.b) * p;
        let den = BigInt::from(self.c) * r + BigInt::from(self.d) * p;
        if den.is_zero() {
            return Err(Error::Pole(format!(
                "cx + d vanishes at x = {x} for ({},{};{},{})",
                self.a, self.b, self.c, self.d
            )));
        }
        // det 1 forces gcd(ar+bp, cr+dp) = gcd(r, p) = 1
        ReducedFraction::from_bigints(num, den)
    }

    /// Möbius action on the upper half plane.
    pub fn apply_tau(&self, tau: Complex64) -> Complex64 {
        (tau * self.a as f64 + self.b as f64) / (tau * self.c as f64 + self.d as f64)
    }

    /// `c x + d` as an exact rational.
    pub fn j_factor(&self, x: &ReducedFraction) -> Rational {
        BigRational::new(
            BigInt::from(self.c) * x.numer() + BigInt::from(self.d) * x.denom(),
            x.denom().clone(),
        )
    }
}

/// All words of length at most `radius` in the shear generators of `Γ(N)`
/// and their inverses (breadth-first, deduplicated, identity included).
pub fn gamma_ball(level: u32, radius: usize) -> Vec<GammaMatrix> {
    let n = level as i64;
    let gens = [
        GammaMatrix {
            a: 1,
            b: n,
            c: 0,
            d: 1,
        },
        GammaMatrix {
            a: 1,
            b: -n,
            c: 0,
            d: 1,
        },
        GammaMatrix {
            a: 1,
            b: 0,
            c: n,
            d: 1,
        },
        GammaMatrix {
            a: 1,
            b: 0,
            c: -n,
            d: 1,
        },
    ];
    let mut seen = HashSet::new();
    let mut out = vec![GammaMatrix::identity()];
    seen.insert((1i64, 0i64, 0i64, 1i64));
    let mut frontier = out.clone();
    for _ in 0..radius {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &gens {
                let p = m.mul(g);
                if seen.insert((p.a, p.b, p.c, p.d)) {
                    next.push(p);
                }
            }
        }
        out.extend(next.iter().copied());
        frontier = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Scalar abstraction shared by the exact and floating period polynomials
// ---------------------------------------------------------------------------

/// Minimal field interface so period polynomials can be built once for both
/// `Rational` and `Complex64` coefficients.
pub trait Scalar:
    Clone
    + Zero
    + One
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
    fn from_bigint(v: &BigInt) -> Self;
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from(BigInt::from(v))
    }
    fn from_bigint(v: &BigInt) -> Self {
        Rational::from(v.clone())
    }
}

impl Scalar for Complex64 {
    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }
    fn from_bigint(v: &BigInt) -> Self {
        Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0)
    }
}

fn int_pow<T: Scalar>(base: T, exponent: i32) -> T {
    let mut acc = T::one();
    for _ in 0..exponent.unsigned_abs() {
        acc = acc * base.clone();
    }
    if exponent < 0 {
        T::one() / acc
    } else {
        acc
    }
}

// ---------------------------------------------------------------------------
// Period polynomial
// ---------------------------------------------------------------------------

/// `R_{f,γ}(X) = c_{-1}/(cX + d) + sum_i p_i X^i`, the regularized period
/// polynomial. The pole coefficient vanishes whenever the constant term of
/// `f` does (in particular for any spec with `chi(0) = 0`).
#[derive(Clone, Debug)]
pub struct PeriodPolynomial<T> {
    pub c: i64,
    pub d: i64,
    pub pole_coefficient: T,
    pub coefficients: Vec<T>,
}

impl<T: Scalar> PeriodPolynomial<T> {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }

    /// Evaluate at a point with `cX + d != 0` (caller's responsibility when
    /// the pole coefficient is nonzero).
    pub fn eval(&self, x: &T) -> T {
        let mut acc = T::zero();
        for c in self.coefficients.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        if !self.pole_coefficient.is_zero() {
            let den = T::from_i64(self.c) * x.clone() + T::from_i64(self.d);
            acc = acc + self.pole_coefficient.clone() / den;
        }
        acc
    }
}

fn assemble_period_polynomial<T: Scalar>(
    k: u32,
    c: i64,
    d: i64,
    lhat_values: &[T],
    a0: T,
) -> PeriodPolynomial<T> {
    let k = k as usize;
    let mut coeffs = vec![T::zero(); k];
    // -sum_{j=1}^{k-1} C(k-2, j-1) Lhat(j; -d/c) ((cX+d)/c)^{k-j-1}
    for (idx, lv) in lhat_values.iter().enumerate() {
        let j = idx + 1;
        let m = k - j - 1;
        let weight = T::from_bigint(&binomial(k - 2, j - 1)) * lv.clone();
        #[allow(clippy::needless_range_loop)]
        for i in 0..=m {
            let coef = T::from_bigint(&binomial(m, i))
                * int_pow(T::from_i64(d), (m - i) as i32)
                * int_pow(T::from_i64(c), i as i32 - m as i32);
            coeffs[i] = coeffs[i].clone() - weight.clone() * coef;
        }
    }
    let mut pole = T::zero();
    if !a0.is_zero() {
        // -(a0/(k-1)) [((cX+d)/c)^{k-1} + ((-c)^{k-1} (cX+d))^{-1}]
        let w = a0 / T::from_i64((k - 1) as i64);
        let m = k - 1;
        #[allow(clippy::needless_range_loop)]
        for i in 0..=m {
            let coef = T::from_bigint(&binomial(m, i))
                * int_pow(T::from_i64(d), (m - i) as i32)
                * int_pow(T::from_i64(c), i as i32 - m as i32);
            coeffs[i] = coeffs[i].clone() - w.clone() * coef;
        }
        pole = T::zero() - w / int_pow(T::from_i64(-c), (k - 1) as i32);
    }
    while coeffs.len() > 1 && coeffs.last().map(|t| t.is_zero()).unwrap_or(false) {
        coeffs.pop();
    }
    PeriodPolynomial {
        c,
        d,
        pole_coefficient: pole,
        coefficients: coeffs,
    }
}

// ---------------------------------------------------------------------------
// Fixed-denominator Bernoulli evaluation
// ---------------------------------------------------------------------------

/// Evaluator for `B~_j(a/q)` at integer `a` as a pure-integer Horner pass:
/// `B~_j(a/q) = eval_num(a) / denom` with a fixed denominator, so the long
/// exact sweeps accumulate big integers and reduce once at the end instead
/// of paying a gcd per term.
struct ScaledBernoulli {
    q: i64,
    coeffs: Vec<BigInt>, // coeffs[m] = c_m q^{j-m}
    denom: BigInt,       // D q^j where B_j(X) = sum c_m X^m / D
}

impl ScaledBernoulli {
    fn new(j: usize, q: i64) -> Self {
        let (cs, d) = bernoulli_poly_scaled(j);
        let qb = BigInt::from(q);
        let mut coeffs = Vec::with_capacity(cs.len());
        let mut pw = BigInt::one();
        for m in (0..cs.len()).rev() {
            coeffs.push(&cs[m] * &pw);
            pw *= &qb;
        }
        coeffs.reverse();
        Self {
            q,
            coeffs,
            denom: d * qb.pow(j as u32),
        }
    }

    /// Numerator of `B~_j(a/q)` over `self.denom`; `a` is reduced mod `q`.
    fn eval_num(&self, a: i64) -> BigInt {
        let a = a.rem_euclid(self.q);
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c;
        }
        acc
    }
}

/// Common-denominator view of an exact map: `values[m] = nums[m] / denom`.
fn integerized(values: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let mut denom = BigInt::one();
    for v in values {
        denom = denom.lcm(v.denom());
    }
    let nums = values.iter().map(|v| v.numer() * (&denom / v.denom())).collect();
    (nums, denom)
}

// ---------------------------------------------------------------------------
// Level-2 Dedekind sums S_g^odd
// ---------------------------------------------------------------------------

fn require_even(g: u32) -> Result<()> {
    if !g.is_multiple_of(2) {
        Err(Error::Domain(format!("S_g^odd requires even g, got {g}")))
    } else {
        Ok(())
    }
}

/// Exact `S_g^odd(x)` through its Bernoulli-sum expression
/// `((-1)^{g/2} 2^{2g+1}/(g+1)) sum_{m odd <= 2p}
///  (B~_{g+1}(mx/2) - B~_{g+1}(mx/2 + 1/2)) B_1(m/2p)`.
pub fn s_odd_exact(g: u32, x: &ReducedFraction) -> Result<Rational> {
    require_even(g)?;
    let g = g as usize;
    let (r, p) = small_pair(x)?;
    let two_p = 2 * p;
    let bern = ScaledBernoulli::new(g + 1, two_p);
    // sum of (B~_{g+1}(mr/2p) - B~_{g+1}(mr/2p + 1/2)) (m - p), all over
    // denom(bern) * 2p
    let mut num = BigInt::zero();
    let mut m = 1i64;
    let mut a = r.rem_euclid(two_p); // m*r mod 2p
    let step = (2 * r).rem_euclid(two_p);
    while m < two_p {
        let diff = bern.eval_num(a) - bern.eval_num(a + p);
        if !diff.is_zero() {
            num += diff * (m - p);
        }
        m += 2;
        a += step;
        if a >= two_p {
            a -= two_p;
        }
    }
    let sign = if (g / 2).is_multiple_of(2) { 1 } else { -1 };
    let front = BigRational::new(
        BigInt::from(sign) * BigInt::from(2).pow(2 * g as u32 + 1),
        BigInt::from(g + 1),
    );
    Ok(front * BigRational::new(num, bern.denom * two_p))
}

/// Floating-point `S_g^odd(x)` from the defining trigonometric sum, in its
/// symmetrized range `n odd, 1 <= n <= 2p, n != p`.
pub fn s_odd_float(g: u32, x: &ReducedFraction) -> Result<f64> {
    require_even(g)?;
    let (r, p) = small_pair(x)?;
    if p == 1 {
        return Ok(0.0);
    }
    let g = g as usize;
    let mut sum = NeumaierSum::default();
    let mut n = 1i64;
    while n < 2 * p {
        if n != p {
            let ct = cot_derivative(g, PI * n as f64 / (2 * p) as f64)?;
            let s = (PI * (((n * r).rem_euclid(2 * p)) as f64) / p as f64).sin();
            sum.add(ct / s);
        }
        n += 2;
    }
    Ok(sum.total() / (2.0 * (p as f64).powi(g as i32 + 1)))
}

/// The exponential-sum expression for `S_g^odd(x)`:
/// `(i/p^{g+1}) sum_{m,n odd < 2p} e(mnx/2) B_1(m/2p) cot^{(g)}(pi n/2p)`.
///
/// Floating point; serves as a third route for cross-validation.
pub fn s_odd_exp_sum(g: u32, x: &ReducedFraction) -> Result<Complex64> {
    require_even(g)?;
    let (r, p) = small_pair(x)?;
    if p == 1 {
        return Ok(Complex64::zero());
    }
    let g = g as usize;
    let two_p = 2 * p;
    let mut cot_vals = Vec::new();
    let mut n = 1i64;
    while n < two_p {
        cot_vals.push((n, cot_derivative(g, PI * n as f64 / two_p as f64)?));
        n += 2;
    }
    let mut acc = Complex64::zero();
    let mut m = 1i64;
    while m < two_p {
        let b1 = m as f64 / two_p as f64 - 0.5;
        for (n, ct) in &cot_vals {
            let e = ((m as i128 * *n as i128 * r as i128).rem_euclid(two_p as i128)) as f64;
            let angle = 2.0 * PI * e / two_p as f64;
            acc += Complex64::new(angle.cos(), angle.sin()) * (b1 * ct);
        }
        m += 2;
    }
    Ok(Complex64::new(0.0, 1.0) * acc / (p as f64).powi(g as i32 + 1))
}

// ---------------------------------------------------------------------------
// Completed L-values: Bernoulli route
// ---------------------------------------------------------------------------

fn check_j(spec: &EisensteinSpec, j: u32) -> Result<()> {
    if j < 1 || j > spec.weight() - 1 {
        return Err(Error::Domain(format!(
            "L-value index j = {j} outside [1, {}]",
            spec.weight() - 1
        )));
    }
    Ok(())
}

fn small_pair(x: &ReducedFraction) -> Result<(i64, i64)> {
    match (x.numer_i64(), x.denom_i64()) {
        (Some(r), Some(p)) => Ok((r, p)),
        _ => Err(Error::Domain(format!(
            "fraction {x} too large for the floating-point path"
        ))),
    }
}

/// Completed L-value `Lhat_{E_k^{chi,psi}}(j; x)` for `1 <= j <= k-1`,
/// through the Bernoulli-polynomial form
///
/// `-(N^{k-1} p^{k-j-1} / (j(k-j))) [ sum_{n=1}^{Np-1} psi(n) B_{k-j}(n/Np)
///   B~_j^{chi^}(nx/N) + (delta_{j,1}/2) sum_{w=1}^{N-1} psi(pw) chi^(-rw)
///   B_{k-1}(w/N) ]`
///
/// plus a `chi(0) zeta(j)` correction (even `j` only) and the starred term,
/// which vanishes identically when `chi(0) = psi(0) = 0`.
pub fn lhat_value(spec: &EisensteinSpec, j: u32, x: &ReducedFraction) -> Result<Complex64> {
    check_j(spec, j)?;
    let k = spec.weight() as usize;
    let j = j as usize;
    let n_level = spec.level() as i64;
    let (r, p) = small_pair(x)?;
    let np = n_level * p;
    let chi_hat = spec.chi.dft();
    let psi = &spec.psi;

    let mut main = Complex64::zero();
    let mut chi0_weight = Complex64::zero();
    for n in 1..np {
        let pv = psi.value(n);
        if pv.norm() == 0.0 {
            continue;
        }
        let b = bernoulli_poly(k - j, &BigRational::new(BigInt::from(n), BigInt::from(np)))
            .to_f64()
            .unwrap();
        let z = BigRational::new(
            BigInt::from(n) * x.numer(),
            BigInt::from(n_level) * x.denom(),
        );
        main += pv * b * twisted_periodic_bernoulli(j, &chi_hat, &z);
        chi0_weight += pv * b;
    }
    if j == 1 {
        let mut delta = Complex64::zero();
        for w in 1..n_level {
            let pv = psi.value(p * w);
            if pv.norm() == 0.0 {
                continue;
            }
            let b = bernoulli_poly(
                k - 1,
                &BigRational::new(BigInt::from(w), BigInt::from(n_level)),
            )
            .to_f64()
            .unwrap();
            delta += pv * chi_hat.value(-r * w) * b;
        }
        main += delta * 0.5;
    }
    let front = -(n_level as f64).powi(k as i32 - 1) * (p as f64).powi(k as i32 - j as i32 - 1)
        / (j as f64 * (k - j) as f64);
    let mut total = main * front;

    let chi0 = spec.chi.value(0);
    if chi0.norm() > 0.0 && j.is_multiple_of(2) {
        let bj = bernoulli_number(j).to_f64().unwrap();
        let coef = (n_level as f64).powi((k - 1 - j) as i32)
            * (p as f64).powi(k as i32 - 1 - 2 * j as i32)
            * bj
            / (j as f64 * (k - j) as f64);
        total += chi0 * chi0_weight * coef;
    }

    total += lhat_star(spec, j, p)?;
    Ok(total * spec.scale.to_f64().unwrap())
}

/// The starred correction `Lhat_k^{chi,psi,*}(j; x)`, implemented literally
/// from its displayed formula. It vanishes when `chi(0) = psi(0) = 0`; other
/// inputs are experimental and `j = 1` is rejected outright.
fn lhat_star(spec: &EisensteinSpec, j: usize, p: i64) -> Result<Complex64> {
    if spec.vanishes_at_zero() {
        return Ok(Complex64::zero());
    }
    if j == 1 {
        return Err(Error::Unsupported(
            "starred L-term with chi(0) or psi(0) nonzero at j = 1 (experimental surface)".into(),
        ));
    }
    let k = spec.weight() as usize;
    let n_level = spec.level() as i64;
    let np = n_level * p;
    let chi0 = spec.chi.value(0);
    let psi0 = spec.psi.value(0);
    let chi_hat0 = spec.chi.dft().value(0);
    let i = Complex64::new(0.0, 1.0);
    let bj = bernoulli_number(j).to_f64().unwrap();
    let bkj = bernoulli_number(k - j).to_f64().unwrap();
    let fact = |n: usize| (1..=n).map(|v| v as f64).product::<f64>();
    let zeta_j = if j.is_multiple_of(2) {
        hurwitz_zeta_int(j as u32, 1.0)
    } else {
        zeta_odd(j as u32)
    };

    let mut bracket = Complex64::zero();
    let s1 = ((-1f64).powi(j as i32) + (-1f64).powi((k - j) as i32)) * zeta_j;
    bracket += chi0 * psi0 * (s1 * bkj);

    if j.is_multiple_of(2) && psi0.norm() > 0.0 {
        let chi_big = chi_hat_level(spec, np);
        let mut cot_sum = Complex64::zero();
        for l in 1..np {
            let v = chi_big[l as usize];
            if v.norm() == 0.0 {
                continue;
            }
            cot_sum += v * cot_derivative(k - j - 1, PI * l as f64 / np as f64)?;
        }
        let c2 = -2.0 * i.powi(k as i32) * 2f64.powi(2 * j as i32 - k as i32)
            / (np as f64).powi((k - j - 1) as i32)
            * ((k - j) as f64 / fact(j))
            * bj
            * PI.powi(j as i32);
        bracket += c2 * psi0 * cot_sum;

        let c3 =
            2.0 * (-1f64).powi(j as i32 / 2 - 1) * 2f64.powi(j as i32) * bj * PI.powi(j as i32)
                / fact(j);
        bracket += Complex64::from(c3)
            * (-chi0 + chi_hat0 * ((n_level as f64).powi(-((k - j - 1) as i32)) - 1.0))
            * psi0
            * bkj;
    }

    if chi0.norm() > 0.0 {
        let mut zeta_sum = Complex64::zero();
        for n in 1..np {
            let w = spec.psi.value(n) * (-1f64).powi(k as i32) + spec.psi.value(-n);
            if w.norm() == 0.0 {
                continue;
            }
            zeta_sum += w * hurwitz_zeta_int(j as u32, n as f64 / np as f64);
        }
        bracket += chi0 * zeta_sum * ((-1f64).powi(j as i32) * bkj);
    }

    let front = -(n_level as f64).powi((k - j - 1) as i32)
        / Complex64::new(0.0, 2.0 * PI).powi(j as i32)
        * (fact(j - 1) / (k - j) as f64)
        * (p as f64).powi(k as i32 - 2 * j as i32 - 1);
    Ok(front * bracket)
}

fn zeta_odd(j: u32) -> f64 {
    // zeta(j) for odd j >= 3, only feeding the experimental starred term
    let mut acc = 0.0;
    for n in 1..200_000u64 {
        acc += (n as f64).powi(-(j as i32));
    }
    acc
}

fn chi_hat_level(spec: &EisensteinSpec, np: i64) -> Vec<Complex64> {
    let mut out = vec![Complex64::zero(); np as usize];
    for (l, slot) in out.iter_mut().enumerate() {
        let mut acc = Complex64::zero();
        for m in 0..np {
            let v = spec.chi.value(m);
            if v.norm() == 0.0 {
                continue;
            }
            let angle = -2.0 * PI * ((m * l as i64).rem_euclid(np)) as f64 / np as f64;
            acc += v * Complex64::new(angle.cos(), angle.sin());
        }
        *slot = acc / np as f64;
    }
    out
}

/// Exact rational `Lhat` for exact level <= 2 specs with
/// `chi(0) = psi(0) = 0` (the starred term then vanishes identically).
pub fn lhat_exact(spec: &EisensteinSpec, j: u32, x: &ReducedFraction) -> Result<Rational> {
    check_j(spec, j)?;
    if !spec.is_exact() {
        return Err(Error::NotExact(
            "exact L-values need rational maps of level <= 2".into(),
        ));
    }
    if !spec.vanishes_at_zero() {
        return Err(Error::NotExact(
            "exact L-values need chi(0) = psi(0) = 0 (starred term)".into(),
        ));
    }
    let k = spec.weight() as usize;
    let j = j as usize;
    let n_level = spec.level() as i64;
    let (r, p) = small_pair(x)?;
    let q = n_level * p;
    let chi_hat = spec.chi.dft();
    let psi_exact = spec.psi.exact_values().unwrap();

    // integer kernel: everything below is a big-integer sweep over a fixed
    // common denominator
    let outer = ScaledBernoulli::new(k - j, q);
    let twisted = ScaledBernoulli::new(j, q);
    let (psi_nums, psi_den) = integerized(psi_exact);
    let (chi_hat_nums, chi_hat_den) = integerized(chi_hat.exact_values().unwrap());
    let mut main_num = BigInt::zero();
    let mut a = r.rem_euclid(q); // n*r mod q
    let step = r.rem_euclid(q);
    for n in 1..q {
        let pv = &psi_nums[(n % n_level) as usize];
        if !pv.is_zero() {
            let mut tw = BigInt::zero();
            for (w, cv) in chi_hat_nums.iter().enumerate() {
                if !cv.is_zero() {
                    tw += cv * twisted.eval_num(a + w as i64 * p);
                }
            }
            main_num += pv * outer.eval_num(n) * tw;
        }
        a += step;
        if a >= q {
            a -= q;
        }
    }
    let mut main = BigRational::new(main_num, psi_den * outer.denom * chi_hat_den * twisted.denom);
    if j == 1 {
        let chi_hat_exact = chi_hat.exact_values().unwrap();
        let mut delta = Rational::zero();
        for w in 1..n_level {
            let pv = &psi_exact[((p * w).rem_euclid(n_level)) as usize];
            if pv.is_zero() {
                continue;
            }
            let ch = &chi_hat_exact[((-r * w).rem_euclid(n_level)) as usize];
            let b = bernoulli_poly(
                k - 1,
                &BigRational::new(BigInt::from(w), BigInt::from(n_level)),
            );
            delta += pv * ch * b;
        }
        main += delta / BigRational::from(BigInt::from(2));
    }
    let front = -BigRational::new(
        BigInt::from(n_level).pow(k as u32 - 1) * BigInt::from(p).pow((k - 1 - j) as u32),
        BigInt::from(j * (k - j)),
    );
    Ok(front * main * &spec.scale)
}

// ---------------------------------------------------------------------------
// Completed L-values: cotangent route
// ---------------------------------------------------------------------------

/// The cotangent-kernel route to the same L-value, with the `p | m` cells
/// completed exactly:
///
/// `-(-1)^j i^{-k} 2^{-k} p^{-j} sum_{m, p∤m} chi(m) cot_{psi^}^{(k-j-1)}
///  (pi m x/N) cot^{(j-1)}(pi m/Np)` plus completion terms for `m = p m0`.
///
/// Requires `chi(0) = psi(0) = 0`. Algorithmically independent of the
/// Bernoulli route, so the two serve as mutual oracles.
pub fn lhat_cotangent(spec: &EisensteinSpec, j: u32, x: &ReducedFraction) -> Result<Complex64> {
    check_j(spec, j)?;
    if !spec.vanishes_at_zero() {
        return Err(Error::Unsupported(
            "cotangent route requires chi(0) = psi(0) = 0".into(),
        ));
    }
    let k = spec.weight() as usize;
    let j = j as usize;
    let nu = k - j;
    let n_level = spec.level() as i64;
    let (r, p) = small_pair(x)?;
    let np = n_level * p;
    let psi_hat = spec.psi.dft();
    let i = Complex64::new(0.0, 1.0);

    let mut main = Complex64::zero();
    for m in 1..np {
        if m % p == 0 {
            continue;
        }
        let cv = spec.chi.value(m);
        if cv.norm() == 0.0 {
            continue;
        }
        // angle pi*m*x/N, reduced through the period pi of the kernels
        let red = ((m as i128 * r as i128).rem_euclid(np as i128)) as f64;
        let tw = twisted_cot(&psi_hat, k - j - 1, PI * red / np as f64)?;
        main += cv * tw * cot_derivative(j - 1, PI * m as f64 / np as f64)?;
    }
    main *= -(-1f64).powi(j as i32)
        * i.powi(-(k as i32))
        * 2f64.powi(-(k as i32))
        * (p as f64).powi(-(j as i32));

    // completion over m = p*m0, the cells the bare double sum skips
    let mut extra = Complex64::zero();
    let b_nu = bernoulli_number(nu).to_f64().unwrap();
    for m0 in 1..n_level {
        let cv = spec.chi.value(p * m0);
        if cv.norm() == 0.0 {
            continue;
        }
        let w0 = (-r * m0).rem_euclid(n_level);
        let mut inner = Complex64::zero();
        for w in 0..n_level {
            if w == w0 {
                continue;
            }
            let pv = psi_hat.value(w);
            if pv.norm() == 0.0 {
                continue;
            }
            let red = (m0 * r + w).rem_euclid(n_level);
            inner += pv * cot_derivative(nu - 1, PI * red as f64 / n_level as f64)?;
        }
        inner *= nu as f64
            / (Complex64::new(0.0, 2.0).powi(nu as i32) * (np as f64).powi(nu as i32 - 1));
        let noncot = psi_hat.value(w0)
            * (b_nu / (np as f64).powi(nu as i32 - 1) + if nu == 1 { 0.5 } else { 0.0 });
        extra += cv * cot_derivative(j - 1, PI * m0 as f64 / n_level as f64)? * (inner + noncot);
    }
    extra *= -i.powi(j as i32) * (n_level as f64).powi((k - j - 1) as i32)
        * (p as f64).powi(k as i32 - 2 * j as i32 - 1)
        / (2f64.powi(j as i32) * (k - j) as f64);

    Ok((main + extra) * spec.scale.to_f64().unwrap())
}

// ---------------------------------------------------------------------------
// Dedekind sums, constant terms, cusp constants
// ---------------------------------------------------------------------------

/// `S_f(x) = Lhat_f(k-1; x)`, the generalized Dedekind sum (Bernoulli route).
pub fn gen_dedekind_sum(spec: &EisensteinSpec, x: &ReducedFraction) -> Result<Complex64> {
    lhat_value(spec, spec.weight() - 1, x)
}

/// Exact twin of [`gen_dedekind_sum`].
pub fn gen_dedekind_sum_exact(spec: &EisensteinSpec, x: &ReducedFraction) -> Result<Rational> {
    lhat_exact(spec, spec.weight() - 1, x)
}

/// Cotangent route for `S_f(x)`; see [`lhat_cotangent`].
pub fn gen_dedekind_sum_cotangent(
    spec: &EisensteinSpec,
    x: &ReducedFraction,
) -> Result<Complex64> {
    lhat_cotangent(spec, spec.weight() - 1, x)
}

/// Constant Fourier coefficient
/// `a_0 = ((-N)^{k-1}/k) chi(0) sum_m psi(m) B~_k(m/N)`.
pub fn constant_term(spec: &EisensteinSpec) -> Complex64 {
    let k = spec.weight() as usize;
    let n = spec.level() as i64;
    let chi0 = spec.chi.value(0);
    if chi0.norm() == 0.0 {
        return Complex64::zero();
    }
    let mut acc = Complex64::zero();
    for m in 0..n {
        let pv = spec.psi.value(m);
        if pv.norm() == 0.0 {
            continue;
        }
        let b = periodic_bernoulli(k, &BigRational::new(BigInt::from(m), BigInt::from(n)))
            .to_f64()
            .unwrap();
        acc += pv * b;
    }
    let front = (-(n as f64)).powi(k as i32 - 1) / k as f64;
    chi0 * acc * front * spec.scale.to_f64().unwrap()
}

/// Exact twin of [`constant_term`].
pub fn constant_term_exact(spec: &EisensteinSpec) -> Result<Rational> {
    if !spec.is_exact() {
        return Err(Error::NotExact("constant term needs an exact spec".into()));
    }
    let k = spec.weight() as usize;
    let n = spec.level() as i64;
    let chi0 = spec.chi.exact_values().unwrap()[0].clone();
    if chi0.is_zero() {
        return Ok(Rational::zero());
    }
    let psis = spec.psi.exact_values().unwrap();
    let mut acc = Rational::zero();
    for m in 0..n {
        let pv = &psis[m as usize];
        if pv.is_zero() {
            continue;
        }
        acc += pv * periodic_bernoulli(k, &BigRational::new(BigInt::from(m), BigInt::from(n)));
    }
    let front = BigRational::new(BigInt::from(-n).pow(k as u32 - 1), BigInt::from(k));
    Ok(chi0 * acc * front * &spec.scale)
}

/// Cusp constant `a_0^{(x)}`, the constant coefficient of `f|_k delta` for
/// any unimodular `delta` with first column `(r, p)`:
///
/// `((-N)^{k-1}/k) sum_{l,m} chi(-pl) psi^(rl) e(-lm/N) B~_k(m/N)`.
pub fn cusp_constant(spec: &EisensteinSpec, x: &ReducedFraction) -> Result<Complex64> {
    let k = spec.weight() as usize;
    let n = spec.level() as i64;
    let (r, p) = small_pair(x)?;
    let psi_hat = spec.psi.dft();
    let mut acc = Complex64::zero();
    for l in 0..n {
        let w = spec.chi.value(-p * l) * psi_hat.value(r * l);
        if w.norm() == 0.0 {
            continue;
        }
        let mut inner = Complex64::zero();
        for m in 0..n {
            let b = periodic_bernoulli(k, &BigRational::new(BigInt::from(m), BigInt::from(n)))
                .to_f64()
                .unwrap();
            let angle = -2.0 * PI * ((l * m).rem_euclid(n)) as f64 / n as f64;
            inner += Complex64::new(angle.cos(), angle.sin()) * b;
        }
        acc += w * inner;
    }
    let front = (-(n as f64)).powi(k as i32 - 1) / k as f64;
    Ok(acc * front * spec.scale.to_f64().unwrap())
}

/// Exact twin of [`cusp_constant`]; for level <= 2 the twist `e(-lm/N)` is a
/// sign, so the whole expression stays rational.
pub fn cusp_constant_exact(spec: &EisensteinSpec, x: &ReducedFraction) -> Result<Rational> {
    if !spec.is_exact() {
        return Err(Error::NotExact("cusp constant needs an exact spec".into()));
    }
    let k = spec.weight() as usize;
    let n = spec.level() as i64;
    let chis = spec.chi.exact_values().unwrap();
    let psi_hat = spec.psi.dft();
    let psi_hat_exact = psi_hat.exact_values().unwrap();
    let modn = |v: BigInt| v.mod_floor(&BigInt::from(n)).to_usize().unwrap();
    let mut acc = Rational::zero();
    for l in 0..n {
        let cv = &chis[modn(-(x.denom() * l))];
        let pv = &psi_hat_exact[modn(x.numer() * l)];
        let w = cv * pv;
        if w.is_zero() {
            continue;
        }
        let mut inner = Rational::zero();
        for m in 0..n {
            let b = periodic_bernoulli(k, &BigRational::new(BigInt::from(m), BigInt::from(n)));
            // e(-lm/N) for N <= 2 is the sign (-1)^{lm}
            let sign = if n == 2 && (l * m) % 2 == 1 { -1 } else { 1 };
            inner += b * BigInt::from(sign);
        }
        acc += w * inner;
    }
    let front = BigRational::new(BigInt::from(-n).pow(k as u32 - 1), BigInt::from(k));
    Ok(acc * front * &spec.scale)
}

// ---------------------------------------------------------------------------
// Period polynomial and reciprocity
// ---------------------------------------------------------------------------

fn check_gamma(spec: &EisensteinSpec, gamma: &GammaMatrix) -> Result<()> {
    if !gamma.is_in_gamma(spec.level()) {
        return Err(Error::Matrix(format!(
            "({},{};{},{}) is not in Gamma({})",
            gamma.a,
            gamma.b,
            gamma.c,
            gamma.d,
            spec.level()
        )));
    }
    Ok(())
}

fn neg_d_over_c(gamma: &GammaMatrix) -> Result<ReducedFraction> {
    if gamma.c == 0 {
        return Err(Error::Domain(
            "period polynomial undefined for c = 0 (translations act by exact periodicity)".into(),
        ));
    }
    ReducedFraction::new(-gamma.d, gamma.c)
}

/// Regularized period polynomial `R_{f,γ}` (floating coefficients).
pub fn period_polynomial(
    spec: &EisensteinSpec,
    gamma: &GammaMatrix,
) -> Result<PeriodPolynomial<Complex64>> {
    check_gamma(spec, gamma)?;
    let cusp = neg_d_over_c(gamma)?;
    let k = spec.weight();
    let mut lhat = Vec::with_capacity(k as usize - 1);
    for j in 1..k {
        lhat.push(lhat_value(spec, j, &cusp)?);
    }
    Ok(assemble_period_polynomial(
        k,
        gamma.c,
        gamma.d,
        &lhat,
        constant_term(spec),
    ))
}

/// Exact twin of [`period_polynomial`].
pub fn period_polynomial_exact(
    spec: &EisensteinSpec,
    gamma: &GammaMatrix,
) -> Result<PeriodPolynomial<Rational>> {
    check_gamma(spec, gamma)?;
    let cusp = neg_d_over_c(gamma)?;
    let k = spec.weight();
    let mut lhat = Vec::with_capacity(k as usize - 1);
    for j in 1..k {
        lhat.push(lhat_exact(spec, j, &cusp)?);
    }
    Ok(assemble_period_polynomial(
        k,
        gamma.c,
        gamma.d,
        &lhat,
        constant_term_exact(spec)?,
    ))
}

/// The reciprocity defect
/// `[(cx+d)^{k-2} S_f(γx) - S_f(x)] - [R_{f,γ}(x) - (a_0^{(x)}/p^k) c/(cx+d)]`,
/// which the reciprocity law asserts to vanish. Translations (`c = 0`) are
/// checked through exact periodicity `S_f(x + b) = S_f(x)` instead.
pub fn reciprocity_defect(
    spec: &EisensteinSpec,
    gamma: &GammaMatrix,
    x: &ReducedFraction,
) -> Result<Complex64> {
    check_gamma(spec, gamma)?;
    let gx = gamma.apply(x)?;
    let s_gx = gen_dedekind_sum(spec, &gx)?;
    let s_x = gen_dedekind_sum(spec, x)?;
    let cxd = gamma.j_factor(x).to_f64().unwrap();
    let k = spec.weight() as i32;
    if gamma.c == 0 {
        return Ok(s_gx * cxd.powi(k - 2) - s_x);
    }
    let poly = period_polynomial(spec, gamma)?;
    let r_at_x = poly.eval(&Complex64::new(x.to_f64(), 0.0));
    let a0x = cusp_constant(spec, x)?;
    let p = x.denom().to_f64().unwrap();
    let lhs = s_gx * cxd.powi(k - 2) - s_x;
    let rhs = r_at_x - a0x / p.powi(k) * (gamma.c as f64 / cxd);
    Ok(lhs - rhs)
}

/// Exact twin of [`reciprocity_defect`]; exactly zero when the law holds.
pub fn reciprocity_defect_exact(
    spec: &EisensteinSpec,
    gamma: &GammaMatrix,
    x: &ReducedFraction,
) -> Result<Rational> {
    check_gamma(spec, gamma)?;
    let gx = gamma.apply(x)?;
    let s_gx = gen_dedekind_sum_exact(spec, &gx)?;
    let s_x = gen_dedekind_sum_exact(spec, x)?;
    let cxd = gamma.j_factor(x);
    let k = spec.weight();
    let cxd_pow = int_pow(cxd.clone(), k as i32 - 2);
    if gamma.c == 0 {
        return Ok(s_gx * cxd_pow - s_x);
    }
    let poly = period_polynomial_exact(spec, gamma)?;
    let r_at_x = poly.eval(x.as_rational());
    let a0x = cusp_constant_exact(spec, x)?;
    let p_pow = Rational::from(x.denom().pow(k));
    let lhs = s_gx * cxd_pow - s_x;
    let rhs = r_at_x - a0x / p_pow * (Rational::from(BigInt::from(gamma.c)) / cxd);
    Ok(lhs - rhs)
}

// ---------------------------------------------------------------------------
// Compensated accumulation for long trigonometric sums
// ---------------------------------------------------------------------------

/// Neumaier-compensated accumulator for the `O(p)` and `O(p^2)` trigonometric
/// sums whose terms vary over many orders of magnitude.
#[derive(Default, Clone, Copy)]
pub struct NeumaierSum {
    sum: f64,
    comp: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.comp += (self.sum - t) + value;
        } else {
            self.comp += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.comp
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> Rational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn frac(r: i64, p: i64) -> ReducedFraction {
        ReducedFraction::new(r, p).unwrap()
    }

    #[test]
    fn s_odd_exact_values() {
        assert_eq!(s_odd_exact(0, &frac(1, 3)).unwrap(), rat(2, 3));
        assert_eq!(s_odd_exact(2, &frac(1, 3)).unwrap(), rat(16, 27));
        assert_eq!(s_odd_exact(0, &frac(3, 7)).unwrap(), rat(4, 7));
        assert_eq!(s_odd_exact(2, &frac(5, 7)).unwrap(), rat(240, 343));
        assert_eq!(s_odd_exact(2, &frac(3, 5)).unwrap(), rat(64, 125));
        // p = 1: empty sum
        assert_eq!(s_odd_exact(0, &frac(4, 1)).unwrap(), rat(0, 1));
        assert!(s_odd_exact(1, &frac(1, 3)).is_err());
    }

    #[test]
    fn s_odd_closed_form_at_one_over_p() {
        // S_0^odd(1/p) = (p - 1/p)/4 for odd p
        for p in (3..=31i64).step_by(2) {
            let expect = (rat(p, 1) - rat(1, p)) / rat(4, 1);
            assert_eq!(s_odd_exact(0, &frac(1, p)).unwrap(), expect, "p = {p}");
        }
    }

    #[test]
    fn s_odd_is_odd_and_two_periodic() {
        for (g, r, p) in [(0, 1, 3), (2, 3, 5), (0, 1, 2), (2, 1, 4), (0, 2, 3)] {
            let x = frac(r, p);
            let a = s_odd_exact(g, &x).unwrap();
            assert_eq!(s_odd_exact(g, &x.neg()).unwrap(), -a.clone(), "odd {r}/{p}");
            assert_eq!(
                s_odd_exact(g, &ReducedFraction::from_rational(x.as_rational() + rat(2, 1)))
                    .unwrap(),
                a,
                "periodic {r}/{p}"
            );
        }
    }

    #[test]
    fn s_odd_float_matches_exact() {
        for (g, r, p) in [(0, 1, 3), (2, 1, 3), (0, 5, 7), (2, 5, 7), (0, 1, 2), (2, 7, 12)] {
            let x = frac(r, p);
            let exact = s_odd_exact(g, &x).unwrap().to_f64().unwrap();
            let float = s_odd_float(g, &x).unwrap();
            assert!((exact - float).abs() < 1e-12, "g={g} x={r}/{p}");
            let neg = s_odd_float(g, &x.neg()).unwrap();
            assert!((neg + float).abs() < 1e-12);
        }
        assert_eq!(s_odd_float(0, &frac(2, 1)).unwrap(), 0.0);
    }

    #[test]
    fn s_odd_exp_sum_matches_exact() {
        for (g, r, p) in [(0, 1, 3), (2, 3, 5), (0, 1, 2), (2, 2, 5)] {
            let x = frac(r, p);
            let exact = s_odd_exact(g, &x).unwrap().to_f64().unwrap();
            let v = s_odd_exp_sum(g, &x).unwrap();
            assert!((v - Complex64::new(exact, 0.0)).norm() < 1e-10, "g={g} x={r}/{p}");
        }
    }

    #[test]
    fn lhat_exact_frozen_values() {
        let full = |k| {
            EisensteinSpec::new(k, PeriodicMap::odd_indicator(), PeriodicMap::odd_indicator())
                .unwrap()
        };
        assert_eq!(lhat_exact(&full(2), 1, &frac(1, 3)).unwrap(), rat(-1, 3));
        assert_eq!(lhat_exact(&full(2), 1, &frac(-1, 2)).unwrap(), rat(1, 4));
        assert_eq!(lhat_exact(&full(4), 3, &frac(1, 3)).unwrap(), rat(2, 27));
        assert_eq!(lhat_exact(&full(4), 3, &frac(-1, 2)).unwrap(), rat(-1, 16));
        assert_eq!(lhat_exact(&full(4), 1, &frac(1, 3)).unwrap(), rat(5, 9));
        assert_eq!(lhat_exact(&full(4), 2, &frac(1, 3)).unwrap(), rat(-11, 144));
        assert_eq!(lhat_exact(&full(6), 5, &frac(1, 3)).unwrap(), rat(-22, 243));
        let expected = [rat(5, 4), rat(0, 1), rat(1, 16), rat(0, 1), rat(5, 64)];
        for (j, e) in (1..=5).zip(expected) {
            assert_eq!(lhat_exact(&full(6), j, &frac(-1, 2)).unwrap(), e, "j = {j}");
        }
        assert!(lhat_exact(&full(4), 0, &frac(1, 3)).is_err());
        assert!(lhat_exact(&full(4), 4, &frac(1, 3)).is_err());
    }

    #[test]
    fn gen_dedekind_scales_to_s_odd() {
        // S_g^odd = (-1)^{g/2+1} 2^{g+2} S_{E_{g+2}^odd}
        for (g, r, p) in [(0u32, 1i64, 3i64), (2, 1, 3), (2, 3, 5), (4, 5, 7), (0, 2, 5)] {
            let spec = EisensteinSpec::odd_family(g + 2).unwrap();
            let x = frac(r, p);
            let s = gen_dedekind_sum_exact(&spec, &x).unwrap();
            let sign = if (g / 2) % 2 == 0 { -1 } else { 1 };
            let scaled = rat(sign * (1i64 << (g + 2)), 1) * s;
            assert_eq!(scaled, s_odd_exact(g, &x).unwrap(), "g={g} x={r}/{p}");
        }
        // headline instance: S_{E_2^odd}(1/3) = -1/6
        let spec = EisensteinSpec::odd_family(2).unwrap();
        assert_eq!(gen_dedekind_sum_exact(&spec, &frac(1, 3)).unwrap(), rat(-1, 6));
    }

    #[test]
    fn lhat_float_matches_exact_on_level_2() {
        let spec = EisensteinSpec::odd_family(4).unwrap();
        for j in 1..=3 {
            for x in [frac(1, 3), frac(-1, 2), frac(3, 5)] {
                let e = lhat_exact(&spec, j, &x).unwrap().to_f64().unwrap();
                let f = lhat_value(&spec, j, &x).unwrap();
                assert!((f - Complex64::new(e, 0.0)).norm() < 1e-12, "j={j} x={x}");
            }
        }
    }

    #[test]
    fn cotangent_route_agrees_with_bernoulli_route() {
        for k in [2u32, 4, 6] {
            let spec = EisensteinSpec::odd_family(k).unwrap();
            for x in [frac(1, 3), frac(3, 5), frac(1, 2), frac(2, 7)] {
                let a = gen_dedekind_sum(&spec, &x).unwrap();
                let b = gen_dedekind_sum_cotangent(&spec, &x).unwrap();
                assert!((a - b).norm() < 1e-10, "k={k} x={x}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn constant_terms() {
        // chi(0) = 0 family
        let spec = EisensteinSpec::odd_family(4).unwrap();
        assert_eq!(constant_term_exact(&spec).unwrap(), rat(0, 1));
        // level 1, chi = psi = delta_0, weight 4: B_4/(-1)^3/4 = 1/120
        let delta = PeriodicMap::delta(0, 1).unwrap();
        let spec = EisensteinSpec::new(4, delta.clone(), delta).unwrap();
        assert_eq!(constant_term_exact(&spec).unwrap(), rat(1, 120));
        assert!((constant_term(&spec).re - 1.0 / 120.0).abs() < 1e-15);
    }

    #[test]
    fn cusp_constant_closed_form() {
        // odd family: a_0^{(x)} = 1_2(p) (-1)^{r+1} (2^{g+2}-1) B_{g+2} / (4(g+2))
        for (g, r, p) in [(0i64, 1i64, 3i64), (0, 3, 5), (2, 1, 3), (2, 5, 7), (0, 2, 3), (4, 1, 9)] {
            let spec = EisensteinSpec::odd_family(g as u32 + 2).unwrap();
            let x = frac(r, p);
            let got = cusp_constant_exact(&spec, &x).unwrap();
            let sign = if r % 2 == 1 { 1 } else { -1 };
            let expect = rat(sign * ((1i64 << (g + 2)) - 1), 4 * (g + 2))
                * bernoulli_number(g as usize + 2);
            assert_eq!(got, expect, "g={g} x={r}/{p}");
            let f = cusp_constant(&spec, &x).unwrap();
            assert!((f.re - got.to_f64().unwrap()).abs() < 1e-14);
        }
        // even denominator kills the constant
        let spec = EisensteinSpec::odd_family(2).unwrap();
        assert_eq!(cusp_constant_exact(&spec, &frac(1, 2)).unwrap(), rat(0, 1));
    }

    #[test]
    fn cusp_constant_cocycle_consistency() {
        // a_0^{(gamma x)} = sgn(cr + dp)^k a_0^{(x)} for gamma in Gamma(N)
        let spec = EisensteinSpec::odd_family(4).unwrap();
        let gamma = GammaMatrix::new(1, -2, 2, -3).unwrap();
        for x in [frac(1, 3), frac(3, 5), frac(-1, 5)] {
            let den = gamma.c * x.numer_i64().unwrap() + gamma.d * x.denom_i64().unwrap();
            let sgn: i64 = if den < 0 { -1 } else { 1 };
            let lhs = cusp_constant_exact(&spec, &gamma.apply(&x).unwrap()).unwrap();
            let rhs = cusp_constant_exact(&spec, &x).unwrap()
                * rat(sgn.pow(spec.weight()), 1);
            assert_eq!(lhs, rhs, "x={x}");
        }
    }

    #[test]
    fn period_polynomial_shear_values() {
        let shear = GammaMatrix::new(1, 0, 2, 1).unwrap();
        // weight 2: constant -1/8
        let poly = period_polynomial_exact(&EisensteinSpec::odd_family(2).unwrap(), &shear)
            .unwrap();
        assert!(poly.pole_coefficient.is_zero());
        assert_eq!(poly.coefficients, vec![rat(-1, 8)]);
        // weight 4: (2X^2 + 2X + 1)/16
        let poly = period_polynomial_exact(&EisensteinSpec::odd_family(4).unwrap(), &shear)
            .unwrap();
        assert!(poly.pole_coefficient.is_zero());
        assert_eq!(poly.coefficients, vec![rat(1, 16), rat(1, 8), rat(1, 8)]);
        assert_eq!(poly.eval(&rat(1, 1)), rat(5, 16));
        // degree bound k-2 whenever the constant term vanishes
        assert_eq!(poly.degree(), 2);
        // translations are rejected
        let t = GammaMatrix::new(1, 2, 0, 1).unwrap();
        assert!(period_polynomial_exact(&EisensteinSpec::odd_family(4).unwrap(), &t).is_err());
    }

    #[test]
    fn reciprocity_exact_zero_defect() {
        let shear = GammaMatrix::new(1, 0, 2, 1).unwrap();
        for k in [2u32, 4, 6] {
            let spec = EisensteinSpec::odd_family(k).unwrap();
            for x in [frac(1, 3), frac(3, 5), frac(-3, 7), frac(1, 2)] {
                let defect = reciprocity_defect_exact(&spec, &shear, &x).unwrap();
                assert!(defect.is_zero(), "k={k} x={x}: defect {defect}");
            }
        }
        // float twin
        let spec = EisensteinSpec::odd_family(4).unwrap();
        let d = reciprocity_defect(&spec, &shear, &frac(1, 3)).unwrap();
        assert!(d.norm() < 1e-13);
    }

    #[test]
    fn reciprocity_defect_instances() {
        // S_0^odd(1/5) - S_0^odd(1/3) = 1/2 + 1/30 = 8/15
        let lhs = s_odd_exact(0, &frac(1, 5)).unwrap() - s_odd_exact(0, &frac(1, 3)).unwrap();
        assert_eq!(lhs, rat(8, 15));
        // (5/3)^2 S_2^odd(1/5) - S_2^odd(1/3) = 17/9 + 1/135 = 256/135
        let lhs = rat(25, 9) * s_odd_exact(2, &frac(1, 5)).unwrap()
            - s_odd_exact(2, &frac(1, 3)).unwrap();
        assert_eq!(lhs, rat(256, 135));
    }

    #[test]
    fn translations_act_by_periodicity() {
        let spec = EisensteinSpec::odd_family(4).unwrap();
        let t = GammaMatrix::new(1, 2, 0, 1).unwrap();
        let defect = reciprocity_defect_exact(&spec, &t, &frac(3, 5)).unwrap();
        assert!(defect.is_zero());
    }

    #[test]
    fn gamma_membership_is_checked() {
        let spec = EisensteinSpec::odd_family(2).unwrap();
        let outside = GammaMatrix::new(1, 1, 0, 1).unwrap(); // in SL2(Z), not Gamma(2)
        assert!(matches!(
            reciprocity_defect_exact(&spec, &outside, &frac(1, 3)),
            Err(Error::Matrix(_))
        ));
        assert!(GammaMatrix::new(1, 1, 1, 1).is_err()); // det 0
    }

    #[test]
    fn gamma_ball_and_actions() {
        let ball = gamma_ball(2, 1);
        assert_eq!(ball.len(), 5); // identity + four generators
        for m in gamma_ball(2, 3) {
            assert_eq!(m.a * m.d - m.b * m.c, 1);
            assert!(m.is_in_gamma(2));
        }
        let shear = GammaMatrix::new(1, 0, 2, 1).unwrap();
        assert_eq!(shear.apply(&frac(1, 3)).unwrap(), frac(1, 5));
        assert_eq!(shear.j_factor(&frac(1, 3)), rat(5, 3));
        // negative denominator gets canonicalized
        let m = GammaMatrix::new(-1, 0, 2, -1).unwrap();
        assert!(m.is_in_gamma(2));
        let y = m.apply(&frac(1, 3)).unwrap();
        assert_eq!(y, frac(1, 1));
        // pole of the action
        let m = GammaMatrix::new(1, 0, 2, 1).unwrap();
        assert!(m.apply(&frac(-1, 2)).is_err());
    }

    #[test]
    fn exactness_gates() {
        // level 3 maps cannot enter the exact path
        let chi = PeriodicMap::from_integers(&[0, 1, -1]).unwrap();
        let spec = EisensteinSpec::new(3, chi.clone(), chi).unwrap();
        assert!(!spec.is_exact());
        assert!(matches!(
            lhat_exact(&spec, 1, &frac(1, 3)),
            Err(Error::NotExact(_))
        ));
        // nonzero chi(0) blocks the exact path even at level 1
        let delta = PeriodicMap::delta(0, 1).unwrap();
        let spec = EisensteinSpec::new(4, delta.clone(), delta).unwrap();
        assert!(matches!(
            lhat_exact(&spec, 2, &frac(1, 3)),
            Err(Error::NotExact(_))
        ));
        // ... and j = 1 with nonzero chi(0) is rejected on the float path
        assert!(matches!(
            lhat_value(&spec, 1, &frac(1, 3)),
            Err(Error::Unsupported(_))
        ));
    }
}
