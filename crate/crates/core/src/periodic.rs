//! Periodic maps `Z/NZ -> C`, their discrete Fourier transforms, and the
//! twisted Bernoulli / cotangent kernels built from them.
//!
//! Maps with rational values keep an exact shadow of their entries; for
//! `N <= 2` the DFT stays rational (`e(-mn/2) = (-1)^{mn}`), which is what the
//! exact level-2 Dedekind path consumes. All other levels evaluate in complex
//! doubles.

use crate::bernoulli::periodic_bernoulli;
use crate::cotangent::cot_derivative;
use crate::rational::Rational;
use crate::{Error, Result};
use num::complex::Complex64;
use num::{BigInt, BigRational, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::f64::consts::PI;

/// A map `Z/NZ -> C` stored as its `N` values; index `m` holds the value at
/// the residue `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct PeriodicMap {
    values: Vec<Complex64>,
    exact: Option<Vec<Rational>>,
}

impl PeriodicMap {
    pub fn new(values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("periodic map needs modulus >= 1".into()));
        }
        Ok(Self {
            values,
            exact: None,
        })
    }

    /// A map with rational values; these stay on the exact path where the
    /// level permits.
    pub fn from_rationals(values: Vec<Rational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("periodic map needs modulus >= 1".into()));
        }
        let floats = values
            .iter()
            .map(|v| Complex64::new(v.to_f64().unwrap_or(f64::NAN), 0.0))
            .collect();
        Ok(Self {
            values: floats,
            exact: Some(values),
        })
    }

    pub fn from_integers(values: &[i64]) -> Result<Self> {
        Self::from_rationals(
            values
                .iter()
                .map(|&v| Rational::from(BigInt::from(v)))
                .collect(),
        )
    }

    /// The indicator `1_2` of odd residues on `Z/2Z`, values `(0, 1)`.
    pub fn odd_indicator() -> Self {
        Self::from_integers(&[0, 1]).unwrap()
    }

    /// Kronecker delta at residue `n` on `Z/NZ`.
    pub fn delta(n: usize, modulus: usize) -> Result<Self> {
        if modulus == 0 || n >= modulus {
            return Err(Error::Domain(format!(
                "delta index {n} out of range for modulus {modulus}"
            )));
        }
        let mut values = vec![Rational::zero(); modulus];
        values[n] = Rational::from(BigInt::from(1));
        Self::from_rationals(values)
    }

    pub fn modulus(&self) -> usize {
        self.values.len()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn index(&self, m: i64) -> usize {
        m.rem_euclid(self.modulus() as i64) as usize
    }

    /// Value at any integer, reduced mod `N`.
    pub fn value(&self, m: i64) -> Complex64 {
        self.values[self.index(m)]
    }

    pub fn exact_value(&self, m: i64) -> Option<&Rational> {
        self.exact.as_ref().map(|v| &v[self.index(m)])
    }

    pub fn exact_values(&self) -> Option<&[Rational]> {
        self.exact.as_deref()
    }

    /// Discrete Fourier transform `phi^(n) = (1/N) sum_m phi(m) e(-mn/N)`.
    ///
    /// Exact for rational maps of modulus 1 or 2.
    pub fn dft(&self) -> Self {
        self.transform(-1.0)
    }

    /// Inverse transform `phi(m) = sum_n phi^(n) e(mn/N)`; `idft(dft(phi))`
    /// reconstructs `phi`.
    pub fn idft(&self) -> Self {
        let n = self.modulus() as f64;
        let mut out = self.transform(1.0);
        for v in &mut out.values {
            *v *= n;
        }
        if let Some(exact) = &mut out.exact {
            let scale = Rational::from(BigInt::from(self.modulus()));
            for v in exact.iter_mut() {
                *v *= &scale;
            }
        }
        out
    }

    fn transform(&self, sign: f64) -> Self {
        let n = self.modulus();
        if let Some(exact) = &self.exact {
            if n == 1 {
                return self.clone();
            }
            if n == 2 {
                let half = BigRational::new(BigInt::from(1), BigInt::from(2));
                let values = vec![
                    (&exact[0] + &exact[1]) * &half,
                    (&exact[0] - &exact[1]) * &half,
                ];
                return Self::from_rationals(values).unwrap();
            }
        }
        let nf = n as f64;
        let values = (0..n)
            .map(|k| {
                let mut acc = Complex64::zero();
                for (m, v) in self.values.iter().enumerate() {
                    let angle = sign * 2.0 * PI * ((m * k) % n) as f64 / nf;
                    acc += v * Complex64::new(angle.cos(), angle.sin());
                }
                acc / nf
            })
            .collect();
        Self {
            values,
            exact: None,
        }
    }

    /// `+1` if the map is even, `-1` if odd, `None` otherwise.
    pub fn parity(&self) -> Option<i8> {
        let n = self.modulus() as i64;
        let tol = 1e-12;
        let mut even = true;
        let mut odd = true;
        for m in 0..n {
            let a = self.value(m);
            let b = self.value(-m);
            if (b - a).norm() > tol {
                even = false;
            }
            if (b + a).norm() > tol {
                odd = false;
            }
        }
        if even {
            Some(1)
        } else if odd {
            Some(-1)
        } else {
            None
        }
    }
}

impl Serialize for PeriodicMap {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            #[serde(rename = "N")]
            n: usize,
            values: Vec<[f64; 2]>,
        }
        Wire {
            n: self.modulus(),
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PeriodicMap {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            #[serde(rename = "N")]
            n: usize,
            values: Vec<[f64; 2]>,
        }
        let wire = Wire::deserialize(deserializer)?;
        if wire.n == 0 || wire.values.len() != wire.n {
            return Err(D::Error::custom(format!(
                "expected {} values for modulus {}",
                wire.n,
                wire.values.len()
            )));
        }
        PeriodicMap::new(
            wire.values
                .iter()
                .map(|[re, im]| Complex64::new(*re, *im))
                .collect(),
        )
        .map_err(D::Error::custom)
    }
}

/// Parse the `{"N": n, "values": [[re, im], ...]}` wire format.
pub fn map_from_json(text: &str) -> Result<PeriodicMap> {
    serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
}

/// Twisted periodic Bernoulli value
/// `B~_j^phi(z) = sum_{m in Z/NZ} phi(m) B~_j(z + m/N)`.
pub fn twisted_periodic_bernoulli(j: usize, phi: &PeriodicMap, z: &Rational) -> Complex64 {
    let n = phi.modulus();
    let mut acc = Complex64::zero();
    for m in 0..n {
        let v = phi.values()[m];
        if v.norm() == 0.0 {
            continue;
        }
        let arg = z + BigRational::new(BigInt::from(m), BigInt::from(n));
        let b = periodic_bernoulli(j, &arg).to_f64().unwrap_or(f64::NAN);
        acc += v * b;
    }
    acc
}

/// Exact twin of [`twisted_periodic_bernoulli`] for rational maps.
pub fn twisted_periodic_bernoulli_exact(
    j: usize,
    phi: &PeriodicMap,
    z: &Rational,
) -> Result<Rational> {
    let exact = phi
        .exact_values()
        .ok_or_else(|| Error::NotExact("map has non-rational values".into()))?;
    let n = phi.modulus();
    let mut acc = Rational::zero();
    for (m, v) in exact.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let arg = z + BigRational::new(BigInt::from(m), BigInt::from(n));
        acc += v * periodic_bernoulli(j, &arg);
    }
    Ok(acc)
}

/// Twisted cotangent kernel
/// `cot_phi^{(d)}(z) = sum_m phi(m) cot^{(d)}(z + pi m/N)`.
///
/// Errors when a summand with a nonzero coefficient sits on a pole.
pub fn twisted_cot(phi: &PeriodicMap, derivative_order: usize, z: f64) -> Result<Complex64> {
    let n = phi.modulus();
    let mut acc = Complex64::zero();
    for m in 0..n {
        let v = phi.values()[m];
        let arg = z + PI * m as f64 / n as f64;
        if v.norm() == 0.0 {
            continue;
        }
        acc += v * cot_derivative(derivative_order, arg)?;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::One;

    fn rat(n: i64, d: i64) -> Rational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn dft_of_odd_indicator() {
        let hat = PeriodicMap::odd_indicator().dft();
        assert_eq!(hat.exact_values().unwrap(), &[rat(1, 2), rat(-1, 2)]);
    }

    #[test]
    fn dft_of_constant_map() {
        let one = PeriodicMap::from_integers(&[1, 1, 1, 1, 1]).unwrap();
        let hat = one.dft();
        assert!((hat.value(0) - Complex64::one()).norm() < 1e-14);
        for m in 1..5 {
            assert!(hat.value(m).norm() < 1e-14);
        }
    }

    #[test]
    fn dft_of_delta_mod_4() {
        let hat = PeriodicMap::delta(1, 4).unwrap().dft();
        let quarter = 0.25;
        let expect = [
            Complex64::new(quarter, 0.0),
            Complex64::new(0.0, -quarter),
            Complex64::new(-quarter, 0.0),
            Complex64::new(0.0, quarter),
        ];
        for (m, e) in expect.iter().enumerate() {
            assert!((hat.value(m as i64) - e).norm() < 1e-14, "index {m}");
        }
    }

    #[test]
    fn idft_inverts_exactly_for_level_2() {
        let phi = PeriodicMap::from_rationals(vec![rat(3, 7), rat(-2, 5)]).unwrap();
        let back = phi.dft().idft();
        assert_eq!(back.exact_values().unwrap(), phi.exact_values().unwrap());
    }

    #[test]
    fn idft_of_delta_mod_3() {
        let phi = PeriodicMap::delta(0, 3).unwrap();
        let back = phi.dft().idft();
        for m in 0..3 {
            assert!((back.value(m) - phi.value(m)).norm() < 1e-13);
        }
    }

    #[test]
    fn parity_detection() {
        assert_eq!(PeriodicMap::odd_indicator().parity(), Some(1));
        let odd = PeriodicMap::from_integers(&[0, 1, -1]).unwrap();
        assert_eq!(odd.parity(), Some(-1));
        let neither = PeriodicMap::from_integers(&[0, 1, 2]).unwrap();
        assert_eq!(neither.parity(), None);
    }

    #[test]
    fn twisted_bernoulli_values() {
        let hat = PeriodicMap::odd_indicator().dft();
        // (1/2)[B~_1(1/6) - B~_1(1/6 + 1/2)] = (1/2)(-1/3 - 1/6) = -1/4
        let v = twisted_periodic_bernoulli_exact(1, &hat, &rat(1, 6)).unwrap();
        assert_eq!(v, rat(-1, 4));
        // unscaled difference map (1, -1) realizes B~_1(z) - B~_1(z + 1/2)
        let diff = PeriodicMap::from_integers(&[1, -1]).unwrap();
        assert_eq!(
            twisted_periodic_bernoulli_exact(1, &diff, &rat(1, 6)).unwrap(),
            rat(-1, 2)
        );
        // at z = 1/2 the second term hits the integer convention B~_1(1) = -1/2
        assert_eq!(
            twisted_periodic_bernoulli_exact(1, &diff, &rat(1, 2)).unwrap(),
            rat(1, 2)
        );
        // single-term sum through a delta
        let delta = PeriodicMap::delta(0, 5).unwrap();
        assert_eq!(
            twisted_periodic_bernoulli_exact(3, &delta, &rat(7, 10)).unwrap(),
            periodic_bernoulli(3, &rat(7, 10))
        );
    }

    #[test]
    fn twisted_bernoulli_is_periodic_in_z() {
        let hat = PeriodicMap::odd_indicator().dft();
        for z in [rat(1, 6), rat(3, 10), rat(-2, 7)] {
            let a = twisted_periodic_bernoulli_exact(2, &hat, &z).unwrap();
            let b =
                twisted_periodic_bernoulli_exact(2, &hat, &(&z + rat(1, 1))).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn twisted_cot_is_inverse_sine_doubling() {
        let hat = PeriodicMap::odd_indicator().dft();
        for &z in &[0.3, 1.1] {
            let v = twisted_cot(&hat, 0, z).unwrap();
            let expect = 1.0 / (2.0 * z).sin();
            assert!((v.re - expect).abs() < 1e-12 && v.im.abs() < 1e-14, "z={z}");
        }
    }

    #[test]
    fn twisted_cot_delta_reduces_to_plain_cot() {
        let delta = PeriodicMap::delta(0, 3).unwrap();
        for d in 0..4 {
            let v = twisted_cot(&delta, d, 0.7).unwrap();
            assert!((v.re - cot_derivative(d, 0.7).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn twisted_cot_pole_detection() {
        let phi = PeriodicMap::from_integers(&[1, 1]).unwrap();
        assert!(twisted_cot(&phi, 0, 0.0).is_err());
        // vanishing coefficient at the pole is fine
        let phi = PeriodicMap::from_integers(&[0, 1]).unwrap();
        assert!(twisted_cot(&phi, 0, 0.0).is_ok());
    }

    #[test]
    fn json_round_trip() {
        let phi = PeriodicMap::new(vec![
            Complex64::new(0.5, -1.0),
            Complex64::new(0.0, 2.0),
            Complex64::new(3.0, 0.0),
        ])
        .unwrap();
        let text = serde_json::to_string(&phi).unwrap();
        let back = map_from_json(&text).unwrap();
        assert_eq!(back.modulus(), 3);
        for m in 0..3 {
            assert!((back.value(m) - phi.value(m)).norm() < 1e-15);
        }
        assert!(map_from_json("{\"N\": 2, \"values\": [[1,0]]}").is_err());
    }
}
