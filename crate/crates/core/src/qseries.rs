//! Analytic side: q-expansions of Eisenstein series, Eichler integrals,
//! Jacobi theta functions, modular-transformation residuals, and radial-limit
//! extraction near rational points.
//!
//! Truncations carry explicit tail bounds; evaluation below the precision
//! floor is refused rather than silently degraded.

use crate::dedekind::{
    constant_term, cusp_constant_exact, period_polynomial, s_odd_exact, EisensteinSpec,
    GammaMatrix,
};
use crate::rational::ReducedFraction;
use crate::tqft::Sigma2Argument;
use crate::{Error, Result};
use num::complex::Complex64;
use num::{Integer, ToPrimitive, Zero};
use std::f64::consts::PI;

/// Evaluation controls for the q-series paths.
#[derive(Clone, Copy, Debug)]
pub struct Params {
    /// Relative tail bound for truncated series.
    pub tail_eps: f64,
    /// Smallest admissible `Im(tau)`.
    pub min_im: f64,
    /// Hard cap on the number of series terms.
    pub max_terms: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            tail_eps: 1e-14,
            min_im: 1e-4,
            max_terms: 4_000_000,
        }
    }
}

impl Params {
    /// Tighter tails and a lower floor, for arguments closer to the real
    /// axis than the double-precision default allows.
    pub fn extended() -> Self {
        Self {
            tail_eps: 1e-15,
            min_im: 1e-5,
            max_terms: 40_000_000,
        }
    }
}

/// A point `tau` of the upper half plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperHalfPoint(Complex64);

impl UpperHalfPoint {
    pub fn new(tau: Complex64) -> Result<Self> {
        if tau.im <= 0.0 || tau.im.is_nan() {
            return Err(Error::Domain(format!(
                "tau must lie in the upper half plane, got {tau}"
            )));
        }
        Ok(Self(tau))
    }

    pub fn value(&self) -> Complex64 {
        self.0
    }
}

/// Truncated expansion `sum_n a_n q^{n/N}`; `coeffs[n]` is `a_n` and
/// `coeffs[0]` the constant term.
#[derive(Clone, Debug)]
pub struct QSeries {
    level: u32,
    coeffs: Vec<Complex64>,
}

impl QSeries {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_else(Complex64::zero)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Plain evaluation of the stored truncation at `tau`.
    pub fn eval(&self, tau: UpperHalfPoint) -> Complex64 {
        let tau = tau.value();
        let mut acc = self.coeffs[0];
        for (n, a) in self.coeffs.iter().enumerate().skip(1) {
            if a.norm() == 0.0 {
                continue;
            }
            let e = (Complex64::new(0.0, 2.0 * PI) * (n as f64) * tau / self.level as f64).exp();
            acc += a * e;
        }
        acc
    }
}

/// Divisor sum `sigma_{k-1}^{chi,psi}(n) = sum_{d|n} chi(n/d) psi(d) d^{k-1}`
/// for all `n <= n_max`, computed sieve-style.
fn twisted_divisor_sums(spec: &EisensteinSpec, n_max: usize) -> Vec<Complex64> {
    let k = spec.weight() as i32;
    let mut out = vec![Complex64::zero(); n_max + 1];
    for d in 1..=n_max {
        let pv = spec.psi().value(d as i64);
        if pv.norm() == 0.0 {
            continue;
        }
        let dk = (d as f64).powi(k - 1);
        for m in 1..=(n_max / d) {
            let cv = spec.chi().value(m as i64);
            if cv.norm() == 0.0 {
                continue;
            }
            out[m * d] += cv * pv * dk;
        }
    }
    out
}

/// Fourier coefficients of `scale * E_k^{chi,psi}` up to `q^{n_max/N}`:
/// `a_n = sigma_{k-1}^{chi,psi}(n) + (-1)^k sigma_{k-1}^{chi-,psi-}(n)` with
/// the constant term supplied by [`constant_term`].
pub fn eisenstein_coeffs(spec: &EisensteinSpec, n_max: usize) -> Result<QSeries> {
    if n_max < 1 {
        return Err(Error::Domain("n_max must be >= 1".into()));
    }
    let n = spec.level() as usize;
    let reflect = |map: &crate::periodic::PeriodicMap| {
        crate::periodic::PeriodicMap::new((0..n).map(|m| map.value(-(m as i64))).collect()).unwrap()
    };
    let spec_minus = EisensteinSpec::new(
        spec.weight(),
        reflect(spec.chi()),
        reflect(spec.psi()),
    )?;
    let plus = twisted_divisor_sums(spec, n_max);
    let minus = twisted_divisor_sums(&spec_minus, n_max);
    let sign = if spec.weight().is_multiple_of(2) { 1.0 } else { -1.0 };
    let scale = spec.scale().to_f64().unwrap();
    let mut coeffs = vec![Complex64::zero(); n_max + 1];
    coeffs[0] = constant_term(spec);
    for i in 1..=n_max {
        coeffs[i] = (plus[i] + minus[i] * sign) * scale;
    }
    Ok(QSeries {
        level: spec.level(),
        coeffs,
    })
}

fn max_abs(map: &crate::periodic::PeriodicMap) -> f64 {
    map.values().iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Number of terms needed so that the tail of
/// `sum (1 + ln n) amp e^{-step n}` past `n_max` stays below `eps`.
fn terms_for_tail(amp: f64, step: f64, eps: f64, cap: usize) -> Result<usize> {
    let mut m = 64usize;
    loop {
        let bound = amp * (2.0 + (m as f64).ln() + 1.0 / (step * m as f64))
            * (-step * m as f64).exp()
            / (1.0 - (-step).exp());
        if bound < eps {
            return Ok(m);
        }
        m *= 2;
        if m > cap {
            return Err(Error::Precision(format!(
                "tail bound {eps:.2e} unreachable within {cap} terms"
            )));
        }
    }
}

/// Eichler integral of `f = scale * E_k^{chi,psi}`:
///
/// `-(N/(2 pi i))^{k-1} (k-2)! sum_{n>=1} (a_n / n^{k-1}) q^{n/N}`,
///
/// truncated so the tail bound is below `params.tail_eps * max(1, |value|)`.
pub fn eichler_integral(
    spec: &EisensteinSpec,
    tau: UpperHalfPoint,
    params: &Params,
) -> Result<Complex64> {
    let t = tau.value().im;
    if t < params.min_im {
        return Err(Error::Precision(format!(
            "Im(tau) = {t:.2e} below the floor {:.2e}",
            params.min_im
        )));
    }
    let n_level = spec.level() as f64;
    let step = 2.0 * PI * t / n_level;
    let amp = 2.0 * spec.scale().to_f64().unwrap().abs() * max_abs(spec.chi()) * max_abs(spec.psi());
    let n_max = terms_for_tail(amp.max(1e-300), step, params.tail_eps, params.max_terms)?;
    let series = eisenstein_coeffs(spec, n_max)?;
    let k = spec.weight() as i32;
    let mut acc = Complex64::zero();
    let tau = tau.value();
    for n in 1..=n_max {
        let a = series.coefficient(n);
        if a.norm() == 0.0 {
            continue;
        }
        let e = (Complex64::new(0.0, 2.0 * PI) * (n as f64) * tau / n_level).exp();
        acc += a / (n as f64).powi(k - 1) * e;
    }
    let fact: f64 = (1..=(k as usize - 2)).map(|v| v as f64).product();
    let front = -(Complex64::new(n_level, 0.0) / Complex64::new(0.0, 2.0 * PI)).powi(k - 1) * fact;
    Ok(front * acc)
}

/// Divisor power sums `sigma_e(n)` over odd `n <= n_max` (zero at even
/// indices), accumulated in doubles.
fn odd_sigma_table(e: u32, n_max: usize) -> Vec<f64> {
    let mut out = vec![0.0f64; n_max + 1];
    let mut d = 1usize;
    while d <= n_max {
        let de = (d as f64).powi(e as i32);
        let mut n = d;
        while n <= n_max {
            out[n] += de;
            n += 2 * d; // keep n/d odd: step by 2d
        }
        d += 2;
    }
    out
}

/// The weight `-g` level-2 series `E_{-g}(tau) = sum_{n odd} sigma_{-g-1}(n)
/// q^{n/2}`, i.e. the normalized Eichler integral of the weight `g+2` odd
/// family.
pub fn e_minus_g_odd(g: u32, tau: Complex64, params: &Params) -> Result<Complex64> {
    if !g.is_multiple_of(2) {
        return Err(Error::Domain(format!("even g required, got {g}")));
    }
    let t = tau.im;
    if t <= 0.0 {
        return Err(Error::Domain("tau must be in the upper half plane".into()));
    }
    if t < params.min_im {
        return Err(Error::Precision(format!(
            "Im(tau) = {t:.2e} below the floor {:.2e}",
            params.min_im
        )));
    }
    // sigma_{-g-1}(n) <= sigma_{-1}(n) <= 1 + ln n
    let step = PI * t;
    let n_max = terms_for_tail(1.0, step, params.tail_eps, params.max_terms)?;
    let sigma = odd_sigma_table(g + 1, n_max);
    let mut acc = Complex64::zero();
    let mut n = 1usize;
    while n <= n_max {
        let coeff = sigma[n] / (n as f64).powi(g as i32 + 1);
        let e = (Complex64::new(0.0, PI) * (n as f64) * tau).exp();
        acc += e * coeff;
        n += 2;
    }
    Ok(acc)
}

/// Which Jacobi theta function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theta {
    Two,
    Three,
    Four,
}

/// Product-formula evaluation of `theta_2`, `theta_3`, `theta_4` with tail
/// bound below 1e-14.
pub fn theta(which: Theta, tau: UpperHalfPoint) -> Complex64 {
    let tau = tau.value();
    let q = (Complex64::new(0.0, 2.0 * PI) * tau).exp();
    let qh = (Complex64::new(0.0, PI) * tau).exp(); // q^{1/2}
    let n_max = ((40.0 / (2.0 * PI * tau.im)).ceil() as usize).max(8);
    let mut prod = Complex64::new(1.0, 0.0);
    for n in 1..=n_max {
        let qn = q.powi(n as i32);
        let factor = match which {
            Theta::Two => (1.0 - qn) * (1.0 + qn) * (1.0 + qn),
            Theta::Three => {
                let h = qh.powi(2 * n as i32 - 1);
                (1.0 - qn) * (1.0 + h) * (1.0 + h)
            }
            Theta::Four => {
                let h = qh.powi(2 * n as i32 - 1);
                (1.0 - qn) * (1.0 - h) * (1.0 - h)
            }
        };
        prod *= factor;
    }
    if which == Theta::Two {
        prod *= (Complex64::new(0.0, 2.0 * PI) * tau / 8.0).exp();
    }
    prod
}

/// `(c tau + d)^{k-2} E_f(γ tau) - E_f(tau) - R_{f,γ}(tau)` for the Eichler
/// integral `E_f`; vanishes when the period polynomial is correct.
/// Translations (`c = 0`) are compared against exact periodicity instead.
pub fn eichler_transform_residual(
    spec: &EisensteinSpec,
    gamma: &GammaMatrix,
    tau: UpperHalfPoint,
    params: &Params,
) -> Result<Complex64> {
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
    let t = tau.value();
    let gt = gamma.apply_tau(t);
    let slashed = eichler_integral(spec, UpperHalfPoint::new(gt)?, params)?;
    let plain = eichler_integral(spec, tau, params)?;
    let j = t * gamma.c as f64 + gamma.d as f64;
    let lhs = slashed * j.powi(spec.weight() as i32 - 2) - plain;
    if gamma.c == 0 {
        return Ok(lhs);
    }
    let poly = period_polynomial(spec, gamma)?;
    Ok(lhs - poly.eval(&t))
}

// ---------------------------------------------------------------------------
// Radial limits
// ---------------------------------------------------------------------------

/// Default vertical grid for the constant-plus-linear asymptotic fits.
pub const DEFAULT_ASYMPTOTIC_GRID: [f64; 5] = [0.002, 0.0014, 0.001, 0.0007, 0.0005];

/// Default vertical grid for the `σ₂` radial limit.
pub const DEFAULT_RADIAL_GRID: [f64; 5] = [0.001, 0.0007, 0.0005, 0.00035, 0.00025];

/// Least-squares fit of `value ~ A + B t`.
#[derive(Clone, Copy, Debug)]
pub struct LinearFit {
    pub constant: Complex64,
    pub slope: Complex64,
    /// Largest pointwise deviation from the fitted line.
    pub residual: f64,
}

pub fn linear_fit(ts: &[f64], values: &[Complex64]) -> Result<LinearFit> {
    if ts.len() != values.len() || ts.len() < 3 {
        return Err(Error::IllConditioned(format!(
            "linear fit needs >= 3 grid points, got {}",
            ts.len()
        )));
    }
    let n = ts.len() as f64;
    let sx: f64 = ts.iter().sum();
    let sxx: f64 = ts.iter().map(|t| t * t).sum();
    let det = n * sxx - sx * sx;
    if det.abs() < 1e-30 {
        return Err(Error::IllConditioned("degenerate grid".into()));
    }
    let sy: Complex64 = values.iter().sum();
    let sxy: Complex64 = ts.iter().zip(values).map(|(t, v)| v * *t).sum();
    let constant = (sy * sxx - sxy * sx) / det;
    let slope = (sxy * n - sy * sx) / det;
    let residual = ts
        .iter()
        .zip(values)
        .map(|(t, v)| (v - (constant + slope * *t)).norm())
        .fold(0.0, f64::max);
    Ok(LinearFit {
        constant,
        slope,
        residual,
    })
}

/// Iterated Neville extrapolation of the grid values to `t = 0`; an optional
/// alternative to the least-squares model.
pub fn richardson_extrapolate(ts: &[f64], values: &[Complex64]) -> Result<Complex64> {
    if ts.len() != values.len() || ts.is_empty() {
        return Err(Error::IllConditioned("empty grid".into()));
    }
    let mut table: Vec<Complex64> = values.to_vec();
    let n = table.len();
    for level in 1..n {
        for i in 0..(n - level) {
            let t0 = ts[i];
            let t1 = ts[i + level];
            table[i] = (table[i + 1] * t0 - table[i] * t1) / (t0 - t1);
        }
    }
    Ok(table[0])
}

/// How the limit at `t -> 0` is extracted from the grid values.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Extrapolation {
    LinearFit,
    Richardson,
}

/// Outcome of the vertical-limit check on `E_{-g}` at a rational point.
#[derive(Clone, Debug, serde::Serialize)]
pub struct AsymptoticReport {
    pub g: u32,
    pub x: String,
    pub fitted_constant: [f64; 2],
    pub expected_constant: [f64; 2],
    pub deviation: f64,
    pub fit_residual: f64,
    pub pole_coefficient: [f64; 2],
    pub log_correction: f64,
}

/// Evaluates `E_{-g}(x + it)` on the grid, removes the simple pole
/// `-(pi i)^{g+1}/(g+1)! * a_0^{(x)}/p^{g+2} * 1/(it)` (and, at `g = 0`, the
/// constant cusp shift `1_2(p) (-1)^{r+1} ln(2)/4` of the weight-0 Eichler
/// integral), fits constant + linear in `t`, and compares the constant with
/// `i pi^{g+1}/(2^{g+2} g!) S_g^odd(x)`.
pub fn asymptotic_check(g: u32, x: &ReducedFraction, t_grid: &[f64]) -> Result<AsymptoticReport> {
    asymptotic_check_with(g, x, t_grid, Extrapolation::LinearFit, &Params::default())
}

pub fn asymptotic_check_with(
    g: u32,
    x: &ReducedFraction,
    t_grid: &[f64],
    method: Extrapolation,
    params: &Params,
) -> Result<AsymptoticReport> {
    if !g.is_multiple_of(2) {
        return Err(Error::Domain(format!("even g required, got {g}")));
    }
    if t_grid.len() < 3 {
        return Err(Error::IllConditioned(
            "need at least 3 grid points".into(),
        ));
    }
    let spec = EisensteinSpec::odd_family(g + 2)?;
    let a0x = cusp_constant_exact(&spec, x)?.to_f64().unwrap();
    let p = x.denom().to_f64().unwrap();
    let xf = x.to_f64();
    let i = Complex64::new(0.0, 1.0);
    let fact_g1: f64 = (1..=(g as usize + 1)).map(|v| v as f64).product();
    let pole_coeff = -(i * PI).powi(g as i32 + 1) / fact_g1 * a0x / p.powi(g as i32 + 2);
    let log_correction = if g == 0 && x.is_odd_pair() {
        // numerator odd: (-1)^{r+1} = +1
        2f64.ln() / 4.0
    } else if g == 0 && x.denom().is_odd() {
        // p odd, r even
        -(2f64.ln()) / 4.0
    } else {
        0.0
    };
    let mut values = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let tau = Complex64::new(xf, t);
        let v = e_minus_g_odd(g, tau, params)?;
        values.push(v - pole_coeff / Complex64::new(0.0, t) - log_correction);
    }
    let (constant, residual) = match method {
        Extrapolation::LinearFit => {
            let fit = linear_fit(t_grid, &values)?;
            (fit.constant, fit.residual)
        }
        Extrapolation::Richardson => (richardson_extrapolate(t_grid, &values)?, 0.0),
    };
    let fact_g: f64 = (1..=(g as usize)).map(|v| v as f64).product();
    let expected = i * PI.powi(g as i32 + 1) / (2f64.powi(g as i32 + 2) * fact_g)
        * s_odd_exact(g, x)?.to_f64().unwrap();
    Ok(AsymptoticReport {
        g,
        x: x.to_string(),
        fitted_constant: [constant.re, constant.im],
        expected_constant: [expected.re, expected.im],
        deviation: (constant - expected).norm(),
        fit_residual: residual,
        pole_coefficient: [pole_coeff.re, pole_coeff.im],
        log_correction,
    })
}

/// Outcome of the radial-limit evaluation of `σ₂`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RadialReport {
    /// Real part of the extrapolated limit — the `σ₂` estimate.
    pub limit: f64,
    /// Magnitude of the spurious imaginary part (sanity indicator).
    pub imaginary_part: f64,
    pub fit_residual: f64,
}

/// Radial limit `σ₂(x) = lim_{t->0} [ p² (32/(π³ i)) E_{-2}(x + it)
/// - (8/(π i)) E_0(x + it) - 1/(3 p² (it)) ]`.
///
/// The weight-0 series carries the constant cusp shift `ln(2)/4` on odd
/// pairs, which is removed before the two divergent pole parts cancel.
pub fn radial_limit_sigma2(arg: &Sigma2Argument, t_grid: &[f64]) -> Result<RadialReport> {
    radial_limit_sigma2_with(arg, t_grid, Extrapolation::LinearFit, &Params::default())
}

pub fn radial_limit_sigma2_with(
    arg: &Sigma2Argument,
    t_grid: &[f64],
    method: Extrapolation,
    params: &Params,
) -> Result<RadialReport> {
    if t_grid.len() < 3 {
        return Err(Error::IllConditioned("need at least 3 grid points".into()));
    }
    let p = arg.p() as f64;
    let xf = arg.x().to_f64();
    let i = Complex64::new(0.0, 1.0);
    let c2 = 32.0 / (PI.powi(3) * i);
    let c0 = 8.0 / (PI * i);
    let log_shift = 2f64.ln() / 4.0;
    let mut values = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let tau = Complex64::new(xf, t);
        let e2 = e_minus_g_odd(2, tau, params)?;
        let e0 = e_minus_g_odd(0, tau, params)? - log_shift;
        let v = e2 * c2 * (p * p) - e0 * c0 - 1.0 / (Complex64::new(0.0, t) * 3.0 * p * p);
        values.push(v);
    }
    let (constant, residual) = match method {
        Extrapolation::LinearFit => {
            let fit = linear_fit(t_grid, &values)?;
            (fit.constant, fit.residual)
        }
        Extrapolation::Richardson => (richardson_extrapolate(t_grid, &values)?, 0.0),
    };
    Ok(RadialReport {
        limit: constant.re,
        imaginary_part: constant.im.abs(),
        fit_residual: residual,
    })
}
