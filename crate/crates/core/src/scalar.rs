//! Scalar abstractions.
//!
//! Numerical routines (quadrature, kernels, affine maps) are generic over
//! [`Real`], which covers `f32` and `f64`. Galerkin entries are accumulated in
//! a [`FieldScalar`]: exact rationals, fixed-width binary floats of a chosen
//! precision, or plain `f64`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use dashu_float::FBig;
use dashu_int::IBig;
use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive, Zero};

/// Real floating-point scalar: `f32` or `f64`.
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Send + Sync + 'static {
    /// Converts an `f64` constant into `Self`.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite constant")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Field in which Galerkin matrix entries are formed before the final
/// conversion to `f64`.
pub trait FieldScalar:
    Clone
    + Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn field_zero() -> Self;
    fn field_int(v: i64) -> Self;
    fn field_bigint(v: &BigInt) -> Self;
    fn field_rational(q: &BigRational) -> Self;
    fn to_double(&self) -> f64;
    /// Human-readable arithmetic label, e.g. `exact` or `float(256)`.
    fn label() -> String;
}

impl FieldScalar for f64 {
    fn field_zero() -> Self {
        0.0
    }
    fn field_int(v: i64) -> Self {
        v as f64
    }
    fn field_bigint(v: &BigInt) -> Self {
        ToPrimitive::to_f64(v).unwrap_or(f64::NAN)
    }
    fn field_rational(q: &BigRational) -> Self {
        rational_to_f64(q)
    }
    fn to_double(&self) -> f64 {
        *self
    }
    fn label() -> String {
        "double".into()
    }
}

impl FieldScalar for BigRational {
    fn field_zero() -> Self {
        <BigRational as Zero>::zero()
    }
    fn field_int(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn field_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }
    fn field_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn to_double(&self) -> f64 {
        rational_to_f64(self)
    }
    fn label() -> String {
        "exact".into()
    }
}

/// Correctly scaled conversion of a big rational to `f64`, also when
/// numerator and denominator individually overflow `f64`.
pub fn rational_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = ToPrimitive::to_f64(q) {
        if v.is_finite() {
            return v;
        }
    }
    let n = q.numer().bits() as i64;
    let d = q.denom().bits() as i64;
    let shift = n - d - 60;
    let scaled = if shift > 0 {
        BigRational::new(q.numer().clone(), q.denom().clone() << (shift as usize))
    } else {
        BigRational::new(q.numer().clone() << ((-shift) as usize), q.denom().clone())
    };
    let head = ToPrimitive::to_f64(&scaled.to_integer()).unwrap_or(f64::NAN);
    head * 2f64.powi(shift as i32)
}

/// Binary floating-point number with `BITS` bits of significand.
#[derive(Clone, Debug)]
pub struct WideFloat<const BITS: usize>(FBig);

/// The default wide-float width used by the oracle's float mode.
pub type Wide256 = WideFloat<256>;

pub(crate) fn bigint_to_ibig(v: &BigInt) -> IBig {
    let (sign, bytes) = v.to_bytes_le();
    let mag = IBig::from(dashu_int::UBig::from_le_bytes(&bytes));
    if sign == Sign::Minus {
        -mag
    } else {
        mag
    }
}

impl<const BITS: usize> WideFloat<BITS> {
    fn wrap(v: FBig) -> Self {
        WideFloat(v.with_precision(BITS).value())
    }

    /// Exact conversion of a finite `f64` (rounded to `BITS` if `BITS < 53`).
    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            return Self::wrap(FBig::from(IBig::from(0)));
        }
        let bits = x.to_bits();
        let negative = bits >> 63 == 1;
        let exponent = ((bits >> 52) & 0x7ff) as isize;
        let fraction = bits & ((1u64 << 52) - 1);
        let (mantissa, exp) = if exponent == 0 {
            (fraction, -1074)
        } else {
            (fraction | (1u64 << 52), exponent - 1075)
        };
        let mut sig = IBig::from(mantissa);
        if negative {
            sig = -sig;
        }
        Self::wrap(FBig::from_parts(sig, exp))
    }

    pub fn zero() -> Self {
        Self::wrap(FBig::from(IBig::from(0)))
    }

    pub fn from_i64(v: i64) -> Self {
        Self::wrap(FBig::from(IBig::from(v)))
    }

    pub fn from_bigint(v: &BigInt) -> Self {
        Self::wrap(FBig::from(bigint_to_ibig(v)))
    }

    pub fn from_rational(q: &BigRational) -> Self {
        Self::from_bigint(q.numer()) / Self::from_bigint(q.denom())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    pub fn exp(&self) -> Self {
        Self::wrap(self.0.exp())
    }

    pub fn is_zero(&self) -> bool {
        *self.0.repr().significand() == IBig::from(0)
    }

    pub fn inner(&self) -> &FBig {
        &self.0
    }
}

macro_rules! wide_binop {
    ($tr:ident, $f:ident, $op:tt) => {
        impl<const BITS: usize> $tr for WideFloat<BITS> {
            type Output = Self;
            fn $f(self, rhs: Self) -> Self {
                Self::wrap(self.0 $op rhs.0)
            }
        }
        impl<'a, const BITS: usize> $tr<&'a WideFloat<BITS>> for &'a WideFloat<BITS> {
            type Output = WideFloat<BITS>;
            fn $f(self, rhs: Self) -> WideFloat<BITS> {
                WideFloat::wrap(&self.0 $op &rhs.0)
            }
        }
    };
}

wide_binop!(Add, add, +);
wide_binop!(Sub, sub, -);
wide_binop!(Mul, mul, *);
wide_binop!(Div, div, /);

impl<const BITS: usize> Neg for WideFloat<BITS> {
    type Output = Self;
    fn neg(self) -> Self {
        WideFloat(-self.0)
    }
}

impl<const BITS: usize> FieldScalar for WideFloat<BITS> {
    fn field_zero() -> Self {
        Self::zero()
    }
    fn field_int(v: i64) -> Self {
        Self::from_i64(v)
    }
    fn field_bigint(v: &BigInt) -> Self {
        Self::from_bigint(v)
    }
    fn field_rational(q: &BigRational) -> Self {
        Self::from_rational(q)
    }
    fn to_double(&self) -> f64 {
        self.to_f64()
    }
    fn label() -> String {
        format!("float({BITS})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_float_round_trips_doubles() {
        for x in [0.0, 1.0, -2.5, 1e-300, std::f64::consts::PI, -7.0e200] {
            assert_eq!(Wide256::from_f64(x).to_f64(), x);
        }
    }

    #[test]
    fn wide_float_keeps_digits_double_loses() {
        // (1 + 2^-80) - 1 survives at 256 bits.
        let one = Wide256::from_i64(1);
        let tiny = Wide256::from_f64(2f64.powi(-80));
        let diff = (one.clone() + tiny) - one;
        assert_eq!(diff.to_f64(), 2f64.powi(-80));
        let lossy: f64 = (1.0 + 2f64.powi(-80)) - 1.0;
        assert_eq!(lossy, 0.0);
    }

    #[test]
    fn wide_rational_conversion() {
        let q = BigRational::new(1.into(), 3.into());
        assert!((Wide256::from_rational(&q).to_f64() - 1.0 / 3.0).abs() < 1e-17);
        assert_eq!(Wide256::label(), "float(256)");
    }

    #[test]
    fn huge_rational_to_f64() {
        let big = BigInt::from(10).pow(400);
        let q = BigRational::new(big.clone() * 3, big);
        assert_eq!(rational_to_f64(&q), 3.0);
    }
}
