//! Arithmetic backends shared by the series machinery.
//!
//! Coefficient recursions are written once against [`Scalar`] and run on
//! exact rationals ([`RBig`]), fixed-precision decimal floats ([`Real`]) or
//! plain `f64`. [`RealScalar`] adds the transcendental operations needed to
//! turn coefficients into the boundary-layer constants and profiles.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use dashu::base::{Abs, SquareRoot};
use dashu::float::DBig;
use dashu::integer::IBig;
use dashu::rational::RBig;

use crate::error::Error;

/// Field operations needed by the coefficient recursions.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Whatever is needed to build new values of the same kind (a precision).
    type Context: Clone + fmt::Debug + PartialEq;

    fn from_int(n: i64, ctx: &Self::Context) -> Self;

    fn context(&self) -> Self::Context;

    /// Working significant decimal digits, `None` for exact arithmetic.
    fn precision_digits(ctx: &Self::Context) -> Option<usize>;

    /// True when the value cannot serve as a divisor at this precision.
    fn is_negligible(&self) -> bool;

    fn abs(&self) -> Self;

    fn to_f64(&self) -> f64;

    fn zero(ctx: &Self::Context) -> Self {
        Self::from_int(0, ctx)
    }

    fn one(ctx: &Self::Context) -> Self {
        Self::from_int(1, ctx)
    }
}

/// A [`Scalar`] that also approximates real functions.
pub trait RealScalar: Scalar {
    fn sqrt(&self) -> Self;

    fn exp(&self) -> Self;

    /// Rounds an exact rational into this representation.
    fn from_rational(r: &RBig, ctx: &Self::Context) -> Self;

    fn from_f64(x: f64, ctx: &Self::Context) -> Self;

    /// Decimal rendering with at most `digits` significant digits.
    fn to_digit_string(&self, digits: usize) -> String;
}

impl Scalar for RBig {
    type Context = ();

    fn from_int(n: i64, _: &()) -> Self {
        RBig::from(n)
    }

    fn context(&self) {}

    fn precision_digits(_: &()) -> Option<usize> {
        None
    }

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn abs(&self) -> Self {
        Abs::abs(self.clone())
    }

    fn to_f64(&self) -> f64 {
        RBig::to_f64(self).value()
    }
}

impl Scalar for f64 {
    type Context = ();

    fn from_int(n: i64, _: &()) -> Self {
        n as f64
    }

    fn context(&self) {}

    fn precision_digits(_: &()) -> Option<usize> {
        Some(17)
    }

    fn is_negligible(&self) -> bool {
        !self.is_finite() || self.abs() < f64::MIN_POSITIVE
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl RealScalar for f64 {
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }

    fn exp(&self) -> Self {
        f64::exp(*self)
    }

    fn from_rational(r: &RBig, _: &()) -> Self {
        r.to_f64().value()
    }

    fn from_f64(x: f64, _: &()) -> Self {
        x
    }

    fn to_digit_string(&self, digits: usize) -> String {
        if !self.is_finite() {
            return self.to_string();
        }
        // 17 or more digits: the shortest string that round-trips
        let sci = if digits >= 17 {
            format!("{self:e}")
        } else {
            format!("{:.*e}", digits.max(1) - 1, self)
        };
        // reparse so that trailing zeros and exponent style are canonical
        match sci.parse::<DBig>() {
            Ok(d) => Real(d).to_digit_string(digits.clamp(1, 17)),
            Err(_) => sci,
        }
    }
}

/// Working precision in significant decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Precision(pub usize);

impl Precision {
    pub fn digits(self) -> usize {
        self.0
    }
}

/// Decimal floating point number carrying its own precision.
///
/// Binary operations take the larger precision of the two operands, so
/// values built through one [`Precision`] stay at that precision.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Real(DBig);

impl Real {
    pub fn new(value: DBig, precision: Precision) -> Self {
        Real(value.with_precision(precision.0).value())
    }

    pub fn parse(s: &str, precision: Precision) -> Result<Self, Error> {
        let value = DBig::from_str(s.trim()).map_err(|_| Error::Parse(s.to_string()))?;
        Ok(Real::new(value, precision))
    }

    pub fn as_dbig(&self) -> &DBig {
        &self.0
    }

    /// Same value rounded to a different precision.
    pub fn with_precision(&self, precision: Precision) -> Self {
        Real::new(self.0.clone(), precision)
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0 < DBig::ZERO
    }
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Real({} @ {})", self.0, self.0.precision())
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

macro_rules! real_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                Real($tr::$method(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a Real> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: &'a Real) -> Real {
                Real($tr::$method(&self.0, &rhs.0))
            }
        }
    };
}

real_binop!(Add, add);
real_binop!(Sub, sub);
real_binop!(Mul, mul);
real_binop!(Div, div);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Scalar for Real {
    type Context = Precision;

    fn from_int(n: i64, ctx: &Precision) -> Self {
        Real::new(DBig::from(n), *ctx)
    }

    fn context(&self) -> Precision {
        Precision(self.0.precision())
    }

    fn precision_digits(ctx: &Precision) -> Option<usize> {
        Some(ctx.0)
    }

    fn is_negligible(&self) -> bool {
        self.0.repr().is_zero()
    }

    fn abs(&self) -> Self {
        Real(Abs::abs(self.0.clone()))
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
}

impl RealScalar for Real {
    fn sqrt(&self) -> Self {
        Real(SquareRoot::sqrt(&self.0))
    }

    fn exp(&self) -> Self {
        Real(self.0.exp())
    }

    fn from_rational(r: &RBig, ctx: &Precision) -> Self {
        let num = Real::new(DBig::from(r.numerator().clone()), *ctx);
        let den = Real::new(DBig::from(IBig::from(r.denominator().clone())), *ctx);
        num / den
    }

    fn from_f64(x: f64, ctx: &Precision) -> Self {
        // shortest round-trip decimal of the double, then widened
        Real::parse(&format!("{x:e}"), *ctx).unwrap_or_else(|_| Real::zero(ctx))
    }

    fn to_digit_string(&self, digits: usize) -> String {
        let rounded = self.0.clone().with_precision(digits.max(1)).value();
        if rounded.repr().is_zero() {
            return "0".to_string();
        }
        let (significand, exponent) = rounded.repr().clone().into_parts();
        let negative = significand < IBig::ZERO;
        let mut mantissa = Abs::abs(significand).to_string();
        let mut exponent = exponent;
        while mantissa.len() > 1 && mantissa.ends_with('0') {
            mantissa.pop();
            exponent += 1;
        }
        // decimal exponent of the leading digit
        let lead = exponent + mantissa.len() as isize - 1;
        let sign = if negative { "-" } else { "" };
        if (-7..21).contains(&lead) {
            let body = if exponent >= 0 {
                format!("{mantissa}{}", "0".repeat(exponent as usize))
            } else if lead >= 0 {
                let split = (lead + 1) as usize;
                format!("{}.{}", &mantissa[..split], &mantissa[split..])
            } else {
                format!("0.{}{mantissa}", "0".repeat((-lead - 1) as usize))
            };
            format!("{sign}{body}")
        } else if mantissa.len() == 1 {
            format!("{sign}{mantissa}e{lead}")
        } else {
            format!("{sign}{}.{}e{lead}", &mantissa[..1], &mantissa[1..])
        }
    }
}

impl PartialEq<f64> for Real {
    fn eq(&self, other: &f64) -> bool {
        self.to_f64() == *other
    }
}

impl PartialOrd<f64> for Real {
    fn partial_cmp(&self, other: &f64) -> Option<Ordering> {
        self.to_f64().partial_cmp(other)
    }
}
