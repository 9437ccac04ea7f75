//! Exact Gaussian rationals.
//!
//! Every coefficient in the library lives in `Q(i)`. Both parts are kept as
//! reduced [`BigRational`]s so equality is structural.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn zero() -> Self {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar {
            re: BigRational::from_integer(BigInt::from(n)),
            im: BigRational::zero(),
        }
    }

    /// `num / den` as a real scalar. Panics if `den == 0`.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn gaussian(re: (i64, i64), im: (i64, i64)) -> Self {
        Scalar {
            re: BigRational::new(BigInt::from(re.0), BigInt::from(re.1)),
            im: BigRational::new(BigInt::from(im.0), BigInt::from(im.1)),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// Complex conjugation `x + iy -> x - iy`. Unrelated to the `b -> -b`
    /// conjugation of series.
    pub fn complex_conj(&self) -> Self {
        Scalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> BigRational {
        radd(&rmul(&self.re, &self.re), &rmul(&self.im, &self.im))
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.norm_sqr();
        Ok(Scalar {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    /// The integer `k` with `self == k`, if there is one.
    pub fn as_integer(&self) -> Option<i64> {
        if self.im.is_zero() && self.re.is_integer() {
            self.re.to_integer().to_i64()
        } else {
            None
        }
    }

    /// `self - other` is an integer.
    pub fn congruent_mod_z(&self, other: &Scalar) -> bool {
        (self - other).as_integer().is_some()
    }

    /// Representative of `self + Z` with real part in `[0, 1)`.
    pub fn reduce_mod_z(&self) -> Scalar {
        let fl = self.re.floor();
        Scalar {
            re: &self.re - fl,
            im: self.im.clone(),
        }
    }

    pub fn to_complex_f64(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    /// Lexicographic order on (real, imaginary) parts.
    pub fn lex_cmp(&self, other: &Scalar) -> std::cmp::Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    /// Sum of the bit lengths of numerators and denominators; a rough size
    /// measure used to prefer small witnesses.
    pub fn height(&self) -> u64 {
        self.re.numer().bits() + self.re.denom().bits() + self.im.numer().bits() + self.im.denom().bits()
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        let im_abs = self.im.abs();
        let im_part = if im_abs.is_one() {
            "i".to_string()
        } else {
            format!("{}*i", fmt_rational(&im_abs))
        };
        if self.re.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{im_part}")
            } else {
                write!(f, "{im_part}")
            }
        } else {
            let sign = if self.im.is_negative() { '-' } else { '+' };
            write!(f, "{}{}{}", fmt_rational(&self.re), sign, im_part)
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        // exact decimal
        let neg = int.trim_start().starts_with('-');
        let int_abs = int.trim().trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() {
            return None;
        }
        let digits = format!("{}{}", if int_abs.is_empty() { "0" } else { int_abs }, frac);
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Some(if neg { -r } else { r });
    }
    let n: BigInt = s.parse().ok()?;
    Some(BigRational::from_integer(n))
}

/// Parses an imaginary term body like `i`, `3*i`, `3i`, `1/2*i` (sign removed).
fn parse_imag(s: &str) -> Option<BigRational> {
    let body = s.trim().strip_suffix('i')?.trim_end();
    let body = body.strip_suffix('*').unwrap_or(body).trim();
    if body.is_empty() {
        Some(BigRational::one())
    } else {
        parse_rational(body)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `p`, `p/q`, `p/q+r/s*i`, `-i`, `2*i`, `1.5` and the like.
    fn from_str(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::InvalidScalar(text.to_string());
        if s.is_empty() {
            return Err(bad());
        }
        // split at a sign that is not the leading one
        let split = s
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(i, _)| i)
            .last();
        let (first, second) = match split {
            Some(i) => (&s[..i], Some(&s[i..])),
            None => (&s[..], None),
        };
        let signed = |t: &str| -> (bool, String) {
            match t.strip_prefix('-') {
                Some(r) => (true, r.to_string()),
                None => (false, t.trim_start_matches('+').to_string()),
            }
        };
        match second {
            None => {
                let (neg, body) = signed(first);
                if body.ends_with('i') {
                    let im = parse_imag(&body).ok_or_else(bad)?;
                    Ok(Scalar::new(BigRational::zero(), if neg { -im } else { im }))
                } else {
                    let re = parse_rational(&body).ok_or_else(bad)?;
                    Ok(Scalar::from_rational(if neg { -re } else { re }))
                }
            }
            Some(imag) => {
                let (neg_re, re_body) = signed(first);
                let (neg_im, im_body) = signed(imag);
                let re = parse_rational(&re_body).ok_or_else(bad)?;
                let im = parse_imag(&im_body).ok_or_else(bad)?;
                Ok(Scalar::new(
                    if neg_re { -re } else { re },
                    if neg_im { -im } else { im },
                ))
            }
        }
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

/// `(numer, denom)` when both fit in an `i64`.
fn small(r: &BigRational) -> Option<(i64, i64)> {
    Some((r.numer().to_i64()?, r.denom().to_i64()?))
}

fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `n / d` with `d > 0`, reduced without going through bignum gcd.
fn from_i128(n: i128, d: i128) -> BigRational {
    let g = gcd_u128(n.unsigned_abs(), d.unsigned_abs()) as i128;
    BigRational::new_raw(BigInt::from(n / g), BigInt::from(d / g))
}

// Word-sized operands are the common case; num-rational reduces every result
// with a bignum gcd, which dominates exact elimination otherwise.
fn radd(x: &BigRational, y: &BigRational) -> BigRational {
    if x.is_zero() {
        return y.clone();
    }
    if y.is_zero() {
        return x.clone();
    }
    match (small(x), small(y)) {
        (Some((a, b)), Some((c, d))) if b == d => from_i128(a as i128 + c as i128, b as i128),
        (Some((a, b)), Some((c, d))) => from_i128(a as i128 * d as i128 + c as i128 * b as i128, b as i128 * d as i128),
        _ => x + y,
    }
}

fn rneg(x: &BigRational) -> BigRational {
    -x.clone()
}

fn rsub(x: &BigRational, y: &BigRational) -> BigRational {
    if y.is_zero() {
        return x.clone();
    }
    radd(x, &rneg(y))
}

fn rmul(x: &BigRational, y: &BigRational) -> BigRational {
    if x.is_zero() || y.is_zero() {
        return BigRational::zero();
    }
    match (small(x), small(y)) {
        (Some((a, b)), Some((c, d))) => from_i128(a as i128 * c as i128, b as i128 * d as i128),
        _ => x * y,
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: radd(&self.re, &rhs.re),
            im: radd(&self.im, &rhs.im),
        }
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar {
            re: rsub(&self.re, &rhs.re),
            im: rsub(&self.im, &rhs.im),
        }
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar {
                re: rmul(&self.re, &rhs.re),
                im: BigRational::zero(),
            };
        }
        Scalar {
            re: rsub(&rmul(&self.re, &rhs.re), &rmul(&self.im, &rhs.im)),
            im: radd(&rmul(&self.re, &rhs.im), &rmul(&self.im, &rhs.re)),
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::inv`] for a checked inverse.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re = radd(&self.re, &rhs.re);
        self.im = radd(&self.im, &rhs.im);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re = rsub(&self.re, &rhs.re);
        self.im = rsub(&self.im, &rhs.im);
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

impl serde::Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_round_trip() {
        for text in [
            "0",
            "-3",
            "1/2",
            "-7/3",
            "i",
            "-i",
            "2*i",
            "1/2+3/4*i",
            "5-i",
            "-1/3-2*i",
        ] {
            let s: Scalar = text.parse().unwrap();
            assert_eq!(s.to_string(), text);
            assert_eq!(s.to_string().parse::<Scalar>().unwrap(), s);
        }
        assert_eq!("0.25".parse::<Scalar>().unwrap(), Scalar::ratio(1, 4));
        assert_eq!("3i".parse::<Scalar>().unwrap(), Scalar::gaussian((0, 1), (3, 1)));
        assert_eq!(" 2/4 ".parse::<Scalar>().unwrap(), Scalar::ratio(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for text in ["", "pi", "1/0", "1/2+", "x*i", "--1"] {
            assert!(text.parse::<Scalar>().is_err(), "{text}");
        }
    }

    #[test]
    fn field_operations() {
        let x = Scalar::gaussian((1, 2), (3, 1));
        let y = Scalar::gaussian((-2, 3), (1, 5));
        assert_eq!(&(&x + &y) - &y, x);
        assert_eq!(&(&x * &y) / &y, x);
        assert!((&x * &x.inv().unwrap()).is_one());
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::from_int(-1));
        assert!(Scalar::zero().inv().is_err());
    }

    #[test]
    fn mod_z_helpers() {
        let x = Scalar::ratio(-5, 3);
        assert_eq!(x.reduce_mod_z(), Scalar::ratio(1, 3));
        assert!(x.congruent_mod_z(&Scalar::ratio(4, 3)));
        assert!(!x.congruent_mod_z(&Scalar::ratio(2, 3)));
        assert_eq!(Scalar::from_int(7).as_integer(), Some(7));
        assert_eq!(Scalar::i().as_integer(), None);
    }
}
