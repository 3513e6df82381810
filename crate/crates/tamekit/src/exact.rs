//! Exact complex scalars: Gaussian rationals (arbitrary precision) and
//! Gaussian integers (fixed width, overflow checked).
//!
//! These are the workhorses of every "exact mode" in the crate: point sets,
//! SL2 word balls, integrality certificates and rank computations all reduce
//! to arithmetic in `Q(i)` or `Z[i]`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Element of `Q(i)`: a complex number with rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussianRational::new(BigRational::one(), BigRational::zero())
    }

    pub fn i() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        GaussianRational::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    }

    pub fn from_ratios(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        GaussianRational::new(
            BigRational::new(BigInt::from(re_num), BigInt::from(re_den)),
            BigRational::new(BigInt::from(im_num), BigInt::from(im_den)),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    /// Squared modulus `re^2 + im^2`, exact.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Both coordinates are integers, i.e. the value lies in `Z[i]`.
    pub fn is_gaussian_integer(&self) -> bool {
        self.re.is_integer() && self.im.is_integer()
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Exact inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(GaussianRational::new(&self.re / &n, -(&self.im / &n)))
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}i", self.re, self.im)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl Div for &GaussianRational {
    type Output = GaussianRational;
    fn div(self, o: &GaussianRational) -> GaussianRational {
        let inv = o.inv().expect("division by zero Gaussian rational");
        self * &inv
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned_binop {
    ($imp:ident, $method:ident) => {
        impl $imp for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, o: GaussianRational) -> GaussianRational {
                (&self).$method(&o)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);
forward_owned_binop!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -(&self)
    }
}

/// Element of `Z[i]` with `i128` coordinates and overflow-checked arithmetic.
/// Used as a fast path for word-ball enumeration; word length and generator
/// sizes at desk scale keep entries far below the `i128` range, but every
/// operation still reports overflow rather than wrapping.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GaussianInt {
    pub re: i128,
    pub im: i128,
}

impl GaussianInt {
    pub fn new(re: i128, im: i128) -> Self {
        GaussianInt { re, im }
    }

    pub fn zero() -> Self {
        GaussianInt::new(0, 0)
    }

    pub fn one() -> Self {
        GaussianInt::new(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn checked_add(&self, o: &Self) -> Option<Self> {
        Some(GaussianInt::new(
            self.re.checked_add(o.re)?,
            self.im.checked_add(o.im)?,
        ))
    }

    pub fn checked_sub(&self, o: &Self) -> Option<Self> {
        Some(GaussianInt::new(
            self.re.checked_sub(o.re)?,
            self.im.checked_sub(o.im)?,
        ))
    }

    pub fn checked_mul(&self, o: &Self) -> Option<Self> {
        let rr = self.re.checked_mul(o.re)?;
        let ii = self.im.checked_mul(o.im)?;
        let ri = self.re.checked_mul(o.im)?;
        let ir = self.im.checked_mul(o.re)?;
        Some(GaussianInt::new(rr.checked_sub(ii)?, ri.checked_add(ir)?))
    }

    pub fn neg(&self) -> Self {
        GaussianInt::new(-self.re, -self.im)
    }

    pub fn checked_norm_sqr(&self) -> Option<i128> {
        self.re
            .checked_mul(self.re)?
            .checked_add(self.im.checked_mul(self.im)?)
    }

    pub fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }

    pub fn to_rational(&self) -> GaussianRational {
        GaussianRational::new(
            BigRational::from_integer(BigInt::from(self.re)),
            BigRational::from_integer(BigInt::from(self.im)),
        )
    }
}

/// Exact conversion of an f64 to a rational (f64 values are dyadic rationals).
/// Returns `None` for non-finite input.
pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}
