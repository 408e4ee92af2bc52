//! CSV sweeps over coprime pairs: raw values, shear defects, and
//! cusp-corrected defects (the corrected column is the smooth function
//! `1/2` for g = 0 and `2x^2 + 2x + 1` for g = 2, exactly).

use crate::fmt;
use clap::ValueEnum;
use num::{BigInt, BigRational, ToPrimitive};
use qmod_core::dedekind::{cusp_constant_exact, s_odd_exact, EisensteinSpec};
use qmod_core::rational::{rational_string, ReducedFraction};
use qmod_core::Error;
use std::io::Write;
use std::path::Path;

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Transform {
    /// The raw value S_g^odd(x).
    None,
    /// The shear defect (2x+1)^g S_g(x/(2x+1)) - S_g(x).
    QmDefect,
    /// The defect minus its exact cusp-correction term.
    QmDefectCorrected,
}

pub enum SweepError {
    Core(Error),
    Io(std::io::Error),
}

impl From<Error> for SweepError {
    fn from(e: Error) -> Self {
        SweepError::Core(e)
    }
}

impl From<std::io::Error> for SweepError {
    fn from(e: std::io::Error) -> Self {
        SweepError::Io(e)
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.abs()
}

/// One exact row of the sweep; `None` when the transform is undefined at
/// this pair (the shear pole 2r + p = 0).
fn row_value(g: u32, r: i64, p: i64, transform: Transform) -> Result<Option<BigRational>, Error> {
    let x = ReducedFraction::new(r, p)?;
    let value = match transform {
        Transform::None => s_odd_exact(g, &x)?,
        Transform::QmDefect | Transform::QmDefectCorrected => {
            let den = 2 * r + p;
            if den == 0 {
                return Ok(None);
            }
            let sheared = ReducedFraction::new(r, den)?;
            let j = BigRational::new(BigInt::from(den), BigInt::from(p)); // 2x + 1
            let jg = if g == 0 { BigRational::from(BigInt::from(1)) } else { &j * &j };
            let defect = jg * s_odd_exact(g, &sheared)? - s_odd_exact(g, &x)?;
            if transform == Transform::QmDefect {
                defect
            } else {
                // cusp correction (-1)^{g/2} 2^{g+2} a_0^{(x)} c / (p^{g+1}(cr+dp))
                let spec = EisensteinSpec::odd_family(g + 2)?;
                let a0 = cusp_constant_exact(&spec, &x)?;
                let sign = if (g / 2).is_multiple_of(2) { 1 } else { -1 };
                let correction = BigRational::from(BigInt::from(sign * (1i64 << (g + 2)) * 2))
                    * a0
                    / BigRational::from(BigInt::from(p).pow(g + 1) * den);
                defect - correction
            }
        }
    };
    Ok(Some(value))
}

pub fn run(g: u32, pmax: i64, transform: Transform, out: Option<&Path>) -> Result<(), SweepError> {
    if g != 0 && g != 2 {
        return Err(Error::Domain(format!("sweep supports g in {{0, 2}}, got {g}")).into());
    }
    if pmax < 3 {
        return Err(Error::Domain(format!("pmax must be >= 3, got {pmax}")).into());
    }
    let mut sink: Box<dyn Write> = match out {
        Some(path) => Box::new(std::io::BufWriter::new(std::fs::File::create(path)?)),
        None => Box::new(std::io::BufWriter::new(std::io::stdout())),
    };
    writeln!(sink, "r,p,x,value,exact")?;
    for p in 1..=pmax {
        let mut r = -2 * p + 1;
        while r < 2 * p {
            if r != 0 && r % 2 != 0 && gcd(r, p) == 1 {
                if let Some(value) = row_value(g, r, p, transform)? {
                    let x = r as f64 / p as f64;
                    writeln!(
                        sink,
                        "{r},{p},{},{},{}",
                        fmt::sig(x, 12),
                        fmt::sig(value.to_f64().unwrap_or(f64::NAN), 12),
                        rational_string(&value)
                    )?;
                }
            }
            r += 1;
        }
    }
    sink.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::Zero;

    #[test]
    fn corrected_defect_is_smooth() {
        // g = 0: exactly 1/2 everywhere
        for (r, p) in [(1i64, 3i64), (3, 5), (-5, 7), (1, 2), (-1, 4)] {
            let v = row_value(0, r, p, Transform::QmDefectCorrected).unwrap().unwrap();
            assert_eq!(v, BigRational::new(BigInt::from(1), BigInt::from(2)), "{r}/{p}");
        }
        // g = 2: exactly 2x^2 + 2x + 1
        for (r, p) in [(1i64, 3i64), (3, 5), (-5, 7), (1, 2)] {
            let v = row_value(2, r, p, Transform::QmDefectCorrected).unwrap().unwrap();
            let x = BigRational::new(BigInt::from(r), BigInt::from(p));
            let expect = BigRational::from(BigInt::from(2)) * &x * &x
                + BigRational::from(BigInt::from(2)) * &x
                + BigRational::from(BigInt::from(1));
            assert_eq!(v, expect, "{r}/{p}");
        }
        // the shear pole row is skipped
        assert!(row_value(0, -1, 2, Transform::QmDefect).unwrap().is_none());
    }

    #[test]
    fn raw_row_matches_example() {
        let v = row_value(0, 1, 3, Transform::None).unwrap().unwrap();
        assert_eq!(v, BigRational::new(BigInt::from(2), BigInt::from(3)));
        assert!(!v.is_zero());
    }
}
