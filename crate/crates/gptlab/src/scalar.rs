//! Run-wide scalar arithmetic: exact arbitrary-precision rationals or binary64.
//!
//! The scalar mode is chosen once per run and never mixed inside a value.
//! Exact mode is closed under `+ - * /` with no rounding; approx mode compares
//! through the run tolerance [`DEFAULT_TOL`].

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Run tolerance for approx-mode comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Run-wide scalar mode.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Approx,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Approx => write!(f, "approx"),
        }
    }
}

/// A scalar in the run-wide mode.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Approx(f64),
}

impl Scalar {
    pub fn mode(&self) -> Mode {
        match self {
            Scalar::Exact(_) => Mode::Exact,
            Scalar::Approx(_) => Mode::Approx,
        }
    }

    pub fn zero(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::zero()),
            Mode::Approx => Scalar::Approx(0.0),
        }
    }

    pub fn one(mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::one()),
            Mode::Approx => Scalar::Approx(1.0),
        }
    }

    pub fn from_int(n: i64, mode: Mode) -> Self {
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::from_integer(BigInt::from(n))),
            Mode::Approx => Scalar::Approx(n as f64),
        }
    }

    /// `p/q` in the given mode. Panics if `q == 0`.
    pub fn ratio(p: i64, q: i64, mode: Mode) -> Self {
        assert!(q != 0, "zero denominator");
        match mode {
            Mode::Exact => Scalar::Exact(BigRational::new(BigInt::from(p), BigInt::from(q))),
            Mode::Approx => Scalar::Approx(p as f64 / q as f64),
        }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Scalar::Exact(r)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Approx(x) => *x,
        }
    }

    /// The exact rational value, if in exact mode.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Approx(x) => *x == 0.0,
        }
    }

    /// Mode-aware equality: exact in exact mode, `|a-b| <= tol` in approx mode.
    pub fn eq_tol(&self, other: &Scalar, tol: f64) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            (Scalar::Approx(a), Scalar::Approx(b)) => (a - b).abs() <= tol,
            _ => panic!("scalar mode mismatch in comparison"),
        }
    }

    pub fn is_one_tol(&self, tol: f64) -> bool {
        self.eq_tol(&Scalar::one(self.mode()), tol)
    }

    pub fn is_zero_tol(&self, tol: f64) -> bool {
        self.eq_tol(&Scalar::zero(self.mode()), tol)
    }

    /// Nonnegative up to the tolerance (exact mode: exactly nonnegative).
    pub fn is_nonneg_tol(&self, tol: f64) -> bool {
        match self {
            Scalar::Exact(r) => !r.is_negative(),
            Scalar::Approx(x) => *x >= -tol,
        }
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r.abs()),
            Scalar::Approx(x) => Scalar::Approx(x.abs()),
        }
    }

    /// Multiplicative inverse. Returns `None` for zero.
    pub fn recip(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Exact(r) => Scalar::Exact(r.recip()),
            Scalar::Approx(x) => Scalar::Approx(1.0 / x),
        })
    }

    pub fn pow(&self, exp: u32) -> Scalar {
        let mut acc = Scalar::one(self.mode());
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    pub fn sum<'a, I: IntoIterator<Item = &'a Scalar>>(iter: I, mode: Mode) -> Scalar {
        iter.into_iter().fold(Scalar::zero(mode), |acc, s| &acc + s)
    }

    /// Parses `p/q`, an integer, or (approx mode only) a decimal literal.
    pub fn parse(text: &str, mode: Mode) -> Result<Scalar, String> {
        let text = text.trim();
        if let Some((p, q)) = text.split_once('/') {
            let p: BigInt = p
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in `{text}`"))?;
            let q: BigInt = q
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in `{text}`"))?;
            if q.is_zero() {
                return Err(format!("zero denominator in `{text}`"));
            }
            let r = BigRational::new(p, q);
            return Ok(match mode {
                Mode::Exact => Scalar::Exact(r),
                Mode::Approx => Scalar::Approx(r.to_f64().unwrap_or(f64::NAN)),
            });
        }
        if let Ok(n) = text.parse::<BigInt>() {
            return Ok(match mode {
                Mode::Exact => Scalar::Exact(BigRational::from_integer(n)),
                Mode::Approx => Scalar::Approx(n.to_f64().unwrap_or(f64::NAN)),
            });
        }
        match mode {
            Mode::Exact => Err(format!(
                "`{text}` is not an exact rational (use p/q or an integer)"
            )),
            Mode::Approx => text
                .parse::<f64>()
                .map(Scalar::Approx)
                .map_err(|_| format!("`{text}` is not a number")),
        }
    }

    /// Like [`Scalar::parse`], additionally accepting decimal literals in
    /// exact mode by converting them to rationals over a power of ten.
    pub fn parse_lenient(text: &str, mode: Mode) -> Result<Scalar, String> {
        if let Ok(s) = Scalar::parse(text, mode) {
            return Ok(s);
        }
        let text = text.trim();
        let (sign, body) = match text.strip_prefix('-') {
            Some(rest) => (-1i64, rest),
            None => (1, text),
        };
        if let Some((int_part, frac)) = body.split_once('.') {
            let digits = format!("{int_part}{frac}");
            if let Ok(n) = digits.parse::<BigInt>() {
                let den = BigInt::from(10u32).pow(frac.len() as u32);
                let r = BigRational::new(n * BigInt::from(sign), den);
                return Ok(match mode {
                    Mode::Exact => Scalar::Exact(r),
                    Mode::Approx => Scalar::Approx(r.to_f64().unwrap_or(f64::NAN)),
                });
            }
        }
        Err(format!("`{text}` is not a number"))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Approx(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(_) => ser.serialize_str(&self.to_string()),
            Scalar::Approx(x) => ser.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let v = serde_json::Value::deserialize(de)?;
        match v {
            serde_json::Value::String(s) => {
                Scalar::parse(&s, Mode::Exact).map_err(D::Error::custom)
            }
            serde_json::Value::Number(n) => Ok(Scalar::Approx(
                n.as_f64().ok_or_else(|| D::Error::custom("bad number"))?,
            )),
            _ => Err(D::Error::custom("expected string or number scalar")),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a $op b),
                    (Scalar::Approx(a), Scalar::Approx(b)) => Scalar::Approx(a $op b),
                    _ => panic!("scalar mode mismatch in arithmetic"),
                }
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                (&self).$method(rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "scalar division by zero");
        match (self, rhs) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a / b),
            (Scalar::Approx(a), Scalar::Approx(b)) => Scalar::Approx(a / b),
            _ => panic!("scalar mode mismatch in arithmetic"),
        }
    }
}

impl Div<Scalar> for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        &self / &rhs
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(-r),
            Scalar::Approx(x) => Scalar::Approx(-x),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_is_closed() {
        let a = Scalar::ratio(1, 3, Mode::Exact);
        let b = Scalar::ratio(1, 6, Mode::Exact);
        let s = &a + &b;
        assert_eq!(s, Scalar::ratio(1, 2, Mode::Exact));
        let p = &a * &b;
        assert_eq!(p, Scalar::ratio(1, 18, Mode::Exact));
        let d = &a / &b;
        assert_eq!(d, Scalar::from_int(2, Mode::Exact));
        let m = &a - &b;
        assert_eq!(m, Scalar::ratio(1, 6, Mode::Exact));
    }

    #[test]
    fn approx_comparisons_use_tolerance() {
        let a = Scalar::Approx(1.0);
        let b = Scalar::Approx(1.0 + 0.5e-9);
        assert!(a.eq_tol(&b, DEFAULT_TOL));
        let c = Scalar::Approx(1.0 + 1e-6);
        assert!(!a.eq_tol(&c, DEFAULT_TOL));
    }

    #[test]
    #[should_panic(expected = "mode mismatch")]
    fn mixed_mode_arithmetic_panics() {
        let _ = &Scalar::one(Mode::Exact) + &Scalar::one(Mode::Approx);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["3/4", "-7/2", "5", "0"] {
            let v = Scalar::parse(s, Mode::Exact).unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert!(Scalar::parse("0.5", Mode::Exact).is_err());
        let x = Scalar::parse("0.5", Mode::Approx).unwrap();
        assert_eq!(x, Scalar::Approx(0.5));
    }

    #[test]
    fn json_exact_scalars_are_ratio_strings() {
        let v = Scalar::ratio(2, 3, Mode::Exact);
        assert_eq!(serde_json::to_string(&v).unwrap(), "\"2/3\"");
        let back: Scalar = serde_json::from_str("\"2/3\"").unwrap();
        assert_eq!(back, v);
    }
}
