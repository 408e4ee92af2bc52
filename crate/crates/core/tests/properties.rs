//! Property-based invariants for the arithmetic kernels.

use num::complex::Complex64;
use num::{BigInt, BigRational, ToPrimitive, Zero};
use proptest::prelude::*;
use qmod_core::bernoulli::{bernoulli_number, bernoulli_poly, periodic_bernoulli};
use qmod_core::dedekind::{s_odd_exact, s_odd_float};
use qmod_core::periodic::{map_from_json, twisted_cot, PeriodicMap};
use qmod_core::rational::ReducedFraction;

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn arb_rational() -> impl Strategy<Value = BigRational> {
    (-400i64..400, 1i64..60).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #[test]
    fn bernoulli_difference_equation(j in 0usize..=10, alpha in arb_rational()) {
        // B_j(alpha + 1) - B_j(alpha) = j alpha^{j-1}
        let lhs = bernoulli_poly(j, &(&alpha + rat(1, 1))) - bernoulli_poly(j, &alpha);
        let rhs = if j == 0 {
            BigRational::zero()
        } else {
            rat(j as i64, 1) * alpha.pow(j as i32 - 1)
        };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bernoulli_reflection(j in 0usize..=10, alpha in arb_rational()) {
        let lhs = bernoulli_poly(j, &(rat(1, 1) - &alpha));
        let rhs = bernoulli_poly(j, &alpha);
        let rhs = if j % 2 == 0 { rhs } else { -rhs };
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn periodic_bernoulli_is_periodic(j in 0usize..=8, alpha in arb_rational(), shift in -5i64..=5) {
        let lhs = periodic_bernoulli(j, &(&alpha + rat(shift, 1)));
        prop_assert_eq!(lhs, periodic_bernoulli(j, &alpha));
    }

    #[test]
    fn dft_inversion_float(values in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..9)) {
        let map = PeriodicMap::new(
            values.iter().map(|(re, im)| Complex64::new(*re, *im)).collect(),
        ).unwrap();
        let back = map.dft().idft();
        for m in 0..map.modulus() as i64 {
            prop_assert!((back.value(m) - map.value(m)).norm() < 1e-12);
        }
    }

    #[test]
    fn dft_double_transform(values in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..9)) {
        // dft(dft(phi))(m) = phi(-m)/N
        let map = PeriodicMap::new(
            values.iter().map(|(re, im)| Complex64::new(*re, *im)).collect(),
        ).unwrap();
        let twice = map.dft().dft();
        let n = map.modulus() as f64;
        for m in 0..map.modulus() as i64 {
            prop_assert!((twice.value(m) * n - map.value(-m)).norm() < 1e-12);
        }
    }

    #[test]
    fn dft_inversion_exact_level_2(a in -50i64..50, b in -50i64..50, d in 1i64..20) {
        let map = PeriodicMap::from_rationals(vec![rat(a, d), rat(b, d)]).unwrap();
        let back = map.dft().idft();
        prop_assert_eq!(back.exact_values().unwrap(), map.exact_values().unwrap());
    }

    #[test]
    fn twisted_cot_parity(seed in 0u64..1000, z in 0.05f64..1.4) {
        // phi(0) = 0 with parity eps  =>  cot_phi(-z) = -eps cot_phi(z)
        let n = 3 + (seed % 4) as usize;
        let eps = if seed % 2 == 0 { 1.0 } else { -1.0 };
        let mut values = vec![Complex64::zero(); n];
        for m in 1..=(n - 1) / 2 {
            let v = Complex64::new((seed as f64 * 0.37 + m as f64).sin(), (m as f64 * 1.3).cos());
            values[m] = v;
            values[n - m] = v * eps;
        }
        if n.is_multiple_of(2) {
            values[n / 2] = if eps > 0.0 { Complex64::new(0.7, -0.2) } else { Complex64::zero() };
        }
        let phi = PeriodicMap::new(values).unwrap();
        if let (Ok(neg), Ok(pos)) = (twisted_cot(&phi, 0, -z), twisted_cot(&phi, 0, z)) {
            // relative tolerance: near-pole samples have huge magnitudes
            prop_assert!((neg + pos * eps).norm() < 1e-9 * (1.0 + pos.norm()));
        }
    }

    #[test]
    fn s_odd_symmetries(g in prop::sample::select(vec![0u32, 2]), r in 1i64..40, p in 2i64..40) {
        prop_assume!(gcd(r, p) == 1);
        let x = ReducedFraction::new(r, p).unwrap();
        let value = s_odd_exact(g, &x).unwrap();
        // odd map
        prop_assert_eq!(s_odd_exact(g, &x.neg()).unwrap(), -value.clone());
        // 2-periodic
        let shifted = ReducedFraction::new(r + 2 * p, p).unwrap();
        prop_assert_eq!(s_odd_exact(g, &shifted).unwrap(), value.clone());
        // float path agrees
        let f = s_odd_float(g, &x).unwrap();
        let e = value.to_f64().unwrap();
        prop_assert!((f - e).abs() < 1e-9 * (1.0 + e.abs()));
    }

    #[test]
    fn periodic_map_json_round_trip(values in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..7)) {
        let map = PeriodicMap::new(
            values.iter().map(|(re, im)| Complex64::new(*re, *im)).collect(),
        ).unwrap();
        let text = serde_json::to_string(&map).unwrap();
        let back = map_from_json(&text).unwrap();
        prop_assert_eq!(back.modulus(), map.modulus());
        for m in 0..map.modulus() as i64 {
            prop_assert!((back.value(m) - map.value(m)).norm() < 1e-15);
        }
    }

    #[test]
    fn reduced_fraction_normalization(n in -500i64..500, d in -500i64..500) {
        prop_assume!(d != 0);
        let x = ReducedFraction::new(n, d).unwrap();
        prop_assert!(x.denom() > &BigInt::zero());
        let g = num::integer::gcd(x.numer().clone(), x.denom().clone());
        prop_assert_eq!(g, BigInt::from(1));
    }
}

#[test]
fn odd_bernoulli_vanish_up_to_50() {
    for j in (3..=49).step_by(2) {
        assert!(bernoulli_number(j).is_zero());
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}
