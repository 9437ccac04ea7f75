//! Truncated power series and Laurent series in `b` over [`Scalar`].
//!
//! A [`BSeries`] is known modulo `b^N` where `N` is its precision. Binary
//! operations return the smaller of the two precisions, and no coefficient at
//! or beyond the declared precision is ever read.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone)]
pub struct BSeries {
    coeffs: Vec<Scalar>,
    precision: usize,
}

impl BSeries {
    /// Builds a series from its leading coefficients, dropping everything at
    /// order `precision` and above.
    pub fn new(mut coeffs: Vec<Scalar>, precision: usize) -> Self {
        coeffs.truncate(precision);
        let mut s = BSeries { coeffs, precision };
        s.trim();
        s
    }

    pub fn zero(precision: usize) -> Self {
        BSeries {
            coeffs: Vec::new(),
            precision,
        }
    }

    pub fn one(precision: usize) -> Self {
        Self::constant(Scalar::one(), precision)
    }

    pub fn constant(c: Scalar, precision: usize) -> Self {
        Self::monomial(c, 0, precision)
    }

    /// `c * b^k`.
    pub fn monomial(c: Scalar, k: usize, precision: usize) -> Self {
        if k >= precision || c.is_zero() {
            return Self::zero(precision);
        }
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.push(c);
        BSeries { coeffs, precision }
    }

    pub fn from_ints(coeffs: &[i64], precision: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| Scalar::from_int(c)).collect(), precision)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Scalar::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    /// Stored coefficients; trailing zeros are trimmed.
    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `b^k`; zero beyond the stored terms.
    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn coeff_ref(&self, k: usize) -> Option<&Scalar> {
        self.coeffs.get(k)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.coeffs.first().is_some_and(|c| !c.is_zero())
    }

    /// b-adic valuation; `None` when the series vanishes at its precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Degree of the stored polynomial part.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowers the precision to `p` (no-op when `p` is not smaller).
    pub fn truncate(&self, p: usize) -> Self {
        if p >= self.precision {
            return self.clone();
        }
        BSeries::new(self.coeffs.clone(), p)
    }

    /// Declares the series known to precision `p`, treating the missing
    /// coefficients as zero. Only sound when the caller knows they vanish
    /// (for instance when the product with a multiple of `b^k` is taken).
    pub fn assume_precision(&self, p: usize) -> Self {
        BSeries::new(self.coeffs.clone(), p)
    }

    /// Equality up to the smaller of the two precisions.
    pub fn eq_at(&self, other: &BSeries) -> bool {
        let p = self.precision.min(other.precision);
        (0..p).all(|k| self.coeff_ref(k).unwrap_or(&Scalar::zero()) == other.coeff_ref(k).unwrap_or(&Scalar::zero()))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.precision);
        }
        BSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            precision: self.precision,
        }
    }

    /// Multiplication by `b^k`; the precision rises by `k`.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero(self.precision + k);
        }
        let mut coeffs = vec![Scalar::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        BSeries {
            coeffs,
            precision: self.precision + k,
        }
    }

    /// Division by `b^k`; requires valuation at least `k`. Precision drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if let Some(v) = self.valuation() {
            if v < k {
                return Err(Error::NotAUnit);
            }
        }
        let p = self.precision.saturating_sub(k);
        Ok(BSeries::new(self.coeffs.iter().skip(k).cloned().collect(), p))
    }

    /// Formal derivative `d/db`; the precision drops by one.
    pub fn derivative(&self) -> Self {
        let p = self.precision.saturating_sub(1);
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &Scalar::from_int(k as i64))
            .collect();
        BSeries::new(coeffs, p)
    }

    /// `S(b) -> S(-b)`.
    pub fn conjugate(&self) -> Self {
        BSeries {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c } else { c.clone() })
                .collect(),
            precision: self.precision,
        }
    }

    /// Multiplicative inverse modulo `b^N`.
    pub fn invert(&self) -> Result<Self> {
        let a0 = self.coeffs.first().filter(|c| !c.is_zero()).ok_or(Error::NotAUnit)?;
        let inv0 = a0.inv()?;
        let n = self.precision;
        let mut out: Vec<Scalar> = Vec::with_capacity(n);
        if n > 0 {
            out.push(inv0.clone());
        }
        for k in 1..n {
            let mut acc = Scalar::zero();
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                acc += &(&self.coeffs[j] * &out[k - j]);
            }
            out.push(-(&acc * &inv0));
        }
        Ok(BSeries::new(out, n))
    }

    /// Splits off the b-adic valuation: `self = b^v * unit`.
    pub fn split_valuation(&self) -> Option<(usize, BSeries)> {
        let v = self.valuation()?;
        Some((v, self.shift_down(v).expect("valuation checked")))
    }

    pub fn eval_at_zero(&self) -> Scalar {
        self.constant_term()
    }

    /// Writes the series as a polynomial in `b`, e.g. `1 - 1/2*b + b^3`.
    pub fn to_poly_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let text = c.to_string();
            let complex = !c.is_real() && !num_traits::Zero::is_zero(c.re());
            let (neg, body) = if complex {
                (false, format!("({text})"))
            } else if let Some(rest) = text.strip_prefix('-') {
                (true, rest.to_string())
            } else {
                (false, text)
            };
            let bpow = match k {
                0 => String::new(),
                1 => "b".into(),
                _ => format!("b^{k}"),
            };
            let term = if bpow.is_empty() {
                body
            } else if body == "1" {
                bpow
            } else {
                format!("{body}*{bpow}")
            };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&term);
        }
        out
    }
}

impl PartialEq for BSeries {
    /// Compares up to the smaller precision ("equal at precision p").
    fn eq(&self, other: &Self) -> bool {
        self.eq_at(other)
    }
}

impl fmt::Debug for BSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for BSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(b^{})", self.to_poly_string(), self.precision)
    }
}

impl<'a> Add<&'a BSeries> for &'a BSeries {
    type Output = BSeries;
    fn add(self, rhs: &BSeries) -> BSeries {
        let p = self.precision.min(rhs.precision);
        let len = self.coeffs.len().max(rhs.coeffs.len()).min(p);
        let coeffs = (0..len)
            .map(|k| match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(x), Some(y)) => x + y,
                (Some(x), None) => x.clone(),
                (None, Some(y)) => y.clone(),
                (None, None) => Scalar::zero(),
            })
            .collect();
        BSeries::new(coeffs, p)
    }
}

impl<'a> Sub<&'a BSeries> for &'a BSeries {
    type Output = BSeries;
    fn sub(self, rhs: &BSeries) -> BSeries {
        let p = self.precision.min(rhs.precision);
        let len = self.coeffs.len().max(rhs.coeffs.len()).min(p);
        let coeffs = (0..len)
            .map(|k| match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(x), Some(y)) => x - y,
                (Some(x), None) => x.clone(),
                (None, Some(y)) => -y,
                (None, None) => Scalar::zero(),
            })
            .collect();
        BSeries::new(coeffs, p)
    }
}

impl<'a> Mul<&'a BSeries> for &'a BSeries {
    type Output = BSeries;
    fn mul(self, rhs: &BSeries) -> BSeries {
        let p = self.precision.min(rhs.precision);
        if self.is_zero() || rhs.is_zero() {
            return BSeries::zero(p);
        }
        let len = (self.coeffs.len() + rhs.coeffs.len() - 1).min(p);
        let mut coeffs = vec![Scalar::zero(); len];
        for (i, x) in self.coeffs.iter().enumerate() {
            if i >= len {
                break;
            }
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if y.is_zero() {
                    continue;
                }
                coeffs[i + j] += &(x * y);
            }
        }
        BSeries::new(coeffs, p)
    }
}

impl Neg for &BSeries {
    type Output = BSeries;
    fn neg(self) -> BSeries {
        BSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            precision: self.precision,
        }
    }
}

macro_rules! forward_series {
    ($tr:ident, $m:ident) => {
        impl $tr<BSeries> for BSeries {
            type Output = BSeries;
            fn $m(self, rhs: BSeries) -> BSeries {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BSeries> for BSeries {
            type Output = BSeries;
            fn $m(self, rhs: &BSeries) -> BSeries {
                (&self).$m(rhs)
            }
        }
    };
}
forward_series!(Add, add);
forward_series!(Sub, sub);
forward_series!(Mul, mul);

impl Neg for BSeries {
    type Output = BSeries;
    fn neg(self) -> BSeries {
        -&self
    }
}

/// A Laurent series `b^offset * body` with `body` a unit unless the value is zero.
///
/// The value is known modulo `b^(offset + body.precision())`.
#[derive(Clone, Debug)]
pub struct BLaurent {
    valuation_offset: i64,
    body: BSeries,
}

impl BLaurent {
    /// `b^offset * series`, renormalized so that the body is a unit.
    pub fn new(offset: i64, series: BSeries) -> Self {
        match series.split_valuation() {
            Some((v, unit)) => BLaurent {
                valuation_offset: offset + v as i64,
                body: unit,
            },
            None => BLaurent {
                valuation_offset: offset + series.precision() as i64,
                body: BSeries::zero(0),
            },
        }
    }

    pub fn from_series(s: BSeries) -> Self {
        Self::new(0, s)
    }

    pub fn zero(abs_precision: i64) -> Self {
        BLaurent {
            valuation_offset: abs_precision,
            body: BSeries::zero(0),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.body.is_zero()
    }

    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.valuation_offset)
    }

    pub fn offset(&self) -> i64 {
        self.valuation_offset
    }

    pub fn body(&self) -> &BSeries {
        &self.body
    }

    /// The value is known modulo `b^absolute_precision()`.
    pub fn absolute_precision(&self) -> i64 {
        self.valuation_offset + self.body.precision() as i64
    }

    /// Coefficient of `b^k` for any integer `k` below the absolute precision.
    pub fn coeff(&self, k: i64) -> Scalar {
        if k < self.valuation_offset {
            Scalar::zero()
        } else {
            self.body.coeff((k - self.valuation_offset) as usize)
        }
    }

    /// Multiplication by `b^k`, `k` of either sign.
    pub fn shift(&self, k: i64) -> Self {
        BLaurent {
            valuation_offset: self.valuation_offset + k,
            body: self.body.clone(),
        }
    }

    /// Re-expresses the value as `b^base * series`; fails if the valuation is below `base`.
    pub fn to_series_at(&self, base: i64) -> Result<BSeries> {
        let p = (self.absolute_precision() - base).max(0) as usize;
        if self.is_zero() {
            return Ok(BSeries::zero(p));
        }
        if self.valuation_offset < base {
            return Err(Error::NotAUnit);
        }
        Ok(self.body.shift_up((self.valuation_offset - base) as usize).truncate(p))
    }

    /// Formal derivative (valid also for negative powers).
    pub fn derivative(&self) -> Self {
        let base = self.valuation_offset;
        let n = self.body.precision();
        let coeffs: Vec<Scalar> = (0..n)
            .map(|k| &self.body.coeff(k) * &Scalar::from_int(base + k as i64))
            .collect();
        BLaurent::new(base - 1, BSeries::new(coeffs, n))
    }
}

impl<'a> Add<&'a BLaurent> for &'a BLaurent {
    type Output = BLaurent;
    fn add(self, rhs: &BLaurent) -> BLaurent {
        let base = self.valuation_offset.min(rhs.valuation_offset);
        let x = self.to_series_at(base).expect("base is minimal");
        let y = rhs.to_series_at(base).expect("base is minimal");
        BLaurent::new(base, &x + &y)
    }
}

impl<'a> Mul<&'a BLaurent> for &'a BLaurent {
    type Output = BLaurent;
    fn mul(self, rhs: &BLaurent) -> BLaurent {
        if self.is_zero() || rhs.is_zero() {
            let abs = (self.absolute_precision() + rhs.valuation().unwrap_or(rhs.absolute_precision()))
                .min(rhs.absolute_precision() + self.valuation().unwrap_or(self.absolute_precision()));
            return BLaurent::zero(abs);
        }
        BLaurent::new(self.valuation_offset + rhs.valuation_offset, &self.body * &rhs.body)
    }
}

impl Neg for &BLaurent {
    type Output = BLaurent;
    fn neg(self) -> BLaurent {
        BLaurent {
            valuation_offset: self.valuation_offset,
            body: -&self.body,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(c: &[i64], n: usize) -> BSeries {
        BSeries::from_ints(c, n)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&s(&[1, 1], 4) * &s(&[1, -1], 4), s(&[1, 0, -1], 4));
        assert!((&s(&[0, 1], 2) * &s(&[0, 1], 2)).is_zero());
        let sum = &s(&[1, 2, 3], 3) + &BSeries::constant(Scalar::ratio(1, 2), 3);
        assert_eq!(
            sum.coeffs(),
            &[Scalar::ratio(3, 2), Scalar::from_int(2), Scalar::from_int(3)]
        );
        assert_eq!((&s(&[1], 3) + &s(&[1], 7)).precision(), 3);
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(s(&[1, -1], 3).invert().unwrap().coeffs(), s(&[1, 1, 1], 3).coeffs());
        assert_eq!(s(&[2], 4).invert().unwrap().coeffs(), &[Scalar::ratio(1, 2)]);
        assert_eq!(s(&[0, 1], 4).invert().unwrap_err(), Error::NotAUnit);
    }

    #[test]
    fn derivative_examples() {
        let d = s(&[1, 3, 5], 3).derivative();
        assert_eq!(d.precision(), 2);
        assert_eq!(d.coeffs(), s(&[3, 10], 2).coeffs());
        assert!(s(&[7], 5).derivative().is_zero());
        let bk = BSeries::monomial(Scalar::one(), 4, 8).derivative();
        assert_eq!(bk.coeffs(), BSeries::monomial(Scalar::from_int(4), 3, 7).coeffs());
    }

    #[test]
    fn conjugate_flips_odd_terms() {
        assert_eq!(s(&[1, 1, 1], 5).conjugate().coeffs(), s(&[1, -1, 1], 5).coeffs());
    }

    #[test]
    fn poly_string() {
        assert_eq!(s(&[1, -1, 0, 2], 6).to_poly_string(), "1 - b + 2*b^3");
        let c = BSeries::new(vec![Scalar::zero(), Scalar::gaussian((1, 1), (1, 1))], 3);
        assert_eq!(c.to_poly_string(), "(1+i)*b");
    }

    #[test]
    fn laurent_basics() {
        let x = BLaurent::new(-2, s(&[0, 3, 1], 5));
        assert_eq!(x.valuation(), Some(-1));
        assert_eq!(x.coeff(-1), Scalar::from_int(3));
        assert_eq!(x.absolute_precision(), 3);
        let y = &x * &BLaurent::new(1, s(&[1], 5));
        assert_eq!(y.valuation(), Some(0));
        let z = &x + &BLaurent::from_series(s(&[1], 5));
        assert_eq!(z.coeff(0), Scalar::from_int(2));
        // d/db (b^-1) = -b^-2
        let d = BLaurent::new(-1, s(&[1], 4)).derivative();
        assert_eq!(d.valuation(), Some(-2));
        assert_eq!(d.coeff(-2), Scalar::from_int(-1));
        assert!(x.to_series_at(0).is_err());
    }

    fn arb_series(n: usize) -> impl Strategy<Value = BSeries> {
        prop::collection::vec((-6i64..6, 1i64..4, -3i64..3), 0..n).prop_map(move |v| {
            BSeries::new(
                v.into_iter()
                    .map(|(a, d, im)| Scalar::gaussian((a, d), (im, 1)))
                    .collect(),
                n,
            )
        })
    }

    proptest! {
        #[test]
        fn exact_additive_inverse(x in arb_series(6), y in arb_series(6)) {
            let back = &(&x + &y) - &y;
            prop_assert_eq!(back.coeffs(), x.coeffs());
        }

        #[test]
        fn inverse_is_two_sided(x in arb_series(7), c in 1i64..5) {
            let unit = &x.shift_up(1).truncate(7) + &BSeries::constant(Scalar::from_int(c), 7);
            let inv = unit.invert().unwrap();
            prop_assert!((&unit * &inv).eq_at(&BSeries::one(7)));
            prop_assert!((&inv * &unit).eq_at(&BSeries::one(7)));
        }

        #[test]
        fn conjugation_is_a_ring_involution(x in arb_series(6), y in arb_series(6)) {
            let twice = x.conjugate().conjugate();
            prop_assert_eq!(twice.coeffs(), x.coeffs());
            let sum_conj = (&x + &y).conjugate();
            let conj_sum = &x.conjugate() + &y.conjugate();
            prop_assert_eq!(sum_conj.coeffs(), conj_sum.coeffs());
            // brute-force expansion of the product, conjugated term by term
            let mut brute = vec![Scalar::zero(); 6];
            for i in 0..6 {
                for j in 0..6 - i {
                    let sign = if (i + j) % 2 == 1 { Scalar::from_int(-1) } else { Scalar::one() };
                    brute[i + j] += &(&(&x.coeff(i) * &y.coeff(j)) * &sign);
                }
            }
            let prod_conj = (&x * &y).conjugate();
            let conj_prod = &x.conjugate() * &y.conjugate();
            let brute = BSeries::new(brute, 6);
            prop_assert_eq!(prod_conj.coeffs(), brute.coeffs());
            prop_assert_eq!(prod_conj.coeffs(), conj_prod.coeffs());
        }

        #[test]
        fn precision_is_min_of_inputs(x in arb_series(5), y in arb_series(8)) {
            prop_assert_eq!((&x * &y).precision(), 5);
            prop_assert_eq!((&x - &y).precision(), 5);
        }
    }
}
