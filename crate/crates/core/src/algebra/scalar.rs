use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::complex::Complex;
use num::{BigRational, One, ToPrimitive, Zero};

use crate::settings;

pub type C64 = Complex<f64>;
/// Complex number with exact rational real and imaginary parts.
pub type QComplex = Complex<BigRational>;

/// Field of matrix entries.
///
/// Two implementations ship: [`C64`], where zero tests use the global
/// tolerance, and [`QComplex`], where every test is exact.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn conj(&self) -> Self;
    /// Zero within the global tolerance (exactly zero for exact scalars).
    fn is_zero(&self) -> bool;
    /// max(|re|, |im|).
    fn abs_inf(&self) -> f64;
    fn to_c64(&self) -> C64;
    fn from_rational(re: &BigRational, im: &BigRational) -> Self;
    /// Converts a binary float pair; exact scalars take the exact binary value.
    fn from_f64(re: f64, im: f64) -> Option<Self>;

    fn real(x: f64) -> Self {
        Self::from_f64(x, 0.0).expect("finite literal")
    }

    /// Rescales a vector to unit norm. Exact scalars leave it untouched.
    fn renormalize(_v: &mut [Self]) {}

    /// Ordering key: real and imaginary parts rounded to 12 decimal places.
    fn sort_key(&self) -> (i64, i64) {
        let c = self.to_c64();
        (round12(c.re), round12(c.im))
    }
}

fn round12(x: f64) -> i64 {
    let r = (x * 1e12).round();
    // -0 and 0 share a key
    if r == 0.0 {
        0
    } else {
        r as i64
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        Complex::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex::new(1.0, 0.0)
    }
    fn conj(&self) -> Self {
        Complex::conj(self)
    }
    fn is_zero(&self) -> bool {
        self.abs_inf() <= settings::epsilon()
    }
    fn abs_inf(&self) -> f64 {
        self.re.abs().max(self.im.abs())
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn from_rational(re: &BigRational, im: &BigRational) -> Self {
        Complex::new(
            re.to_f64().unwrap_or(f64::NAN),
            im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn from_f64(re: f64, im: f64) -> Option<Self> {
        (re.is_finite() && im.is_finite()).then(|| Complex::new(re, im))
    }
    fn renormalize(v: &mut [Self]) {
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            for z in v.iter_mut() {
                *z /= norm;
            }
        }
    }
}

impl Scalar for QComplex {
    const EXACT: bool = true;

    fn zero() -> Self {
        Complex::new(BigRational::zero(), BigRational::zero())
    }
    fn one() -> Self {
        Complex::new(BigRational::one(), BigRational::zero())
    }
    fn conj(&self) -> Self {
        Complex::new(self.re.clone(), -self.im.clone())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
    fn abs_inf(&self) -> f64 {
        let c = self.to_c64();
        c.re.abs().max(c.im.abs())
    }
    fn to_c64(&self) -> C64 {
        Complex::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
    fn from_rational(re: &BigRational, im: &BigRational) -> Self {
        Complex::new(re.clone(), im.clone())
    }
    fn from_f64(re: f64, im: f64) -> Option<Self> {
        Some(Complex::new(
            BigRational::from_float(re)?,
            BigRational::from_float(im)?,
        ))
    }
}
