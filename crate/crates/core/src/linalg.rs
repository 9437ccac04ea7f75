//! Exact dense linear algebra and univariate polynomials over `Q(i)`.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq)]
pub struct ScalarMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl ScalarMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ScalarMatrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        ScalarMatrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        ScalarMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, cols: &[Vec<Scalar>]) -> Self {
        Self::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Row-major flattening.
    pub fn as_slice(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ScalarMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.data[i * other.cols + j] += &(a * b);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * &v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).sum()
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            // prefer the smallest nonzero entry to limit coefficient growth
            let Some(p) = (r..self.rows)
                .filter(|&i| !self.get(i, c).is_zero())
                .min_by_key(|&i| self.get(i, c).height())
            else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
            }
            let inv = self.get(r, c).inv().expect("nonzero pivot");
            for j in c..self.cols {
                let v = self.get(r, j) * &inv;
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c).clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let rv = self.get(r, j);
                    if rv.is_zero() {
                        continue;
                    }
                    let v = self.get(i, j) - &(&f * rv);
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Basis of the right kernel `{x : M x = 0}`.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m.get(r, free);
            }
            basis.push(v);
        }
        basis
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                for j in 0..n {
                    m.data.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.inv().expect("nonzero pivot");
            for i in c + 1..n {
                let f = m.get(i, c) * &inv;
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = m.get(i, j) - &(&f * m.get(c, j));
                    m.set(i, j, v);
                }
            }
        }
        det
    }

    pub fn inverse(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j).clone()
            } else if j - n == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let pivots = aug.rref_in_place();
        if pivots.len() < n || pivots[n - 1] >= n {
            return Err(Error::NotInvertible);
        }
        Ok(Self::from_fn(n, n, |i, j| aug.get(i, n + j).clone()))
    }

    /// Characteristic polynomial `det(t I - M)` by the Faddeev-LeVerrier recursion.
    pub fn char_poly(&self) -> ScalarPoly {
        let n = self.rows;
        let mut coeffs = vec![Scalar::zero(); n + 1];
        coeffs[n] = Scalar::one();
        let mut m_k = Self::zeros(n, n);
        for k in 1..=n {
            let mut next = self.mul(&m_k);
            for i in 0..n {
                let v = next.get(i, i) + &coeffs[n - k + 1];
                next.set(i, i, v);
            }
            let am = self.mul(&next);
            coeffs[n - k] = -(&am.trace() / &Scalar::from_int(k as i64));
            m_k = next;
        }
        ScalarPoly::new(coeffs)
    }

    /// Evaluates `p(M)` by Horner's rule.
    pub fn eval_poly(&self, p: &ScalarPoly) -> Self {
        let n = self.rows;
        let mut acc = Self::zeros(n, n);
        for c in p.coeffs().iter().rev() {
            acc = acc.mul(self);
            for i in 0..n {
                let v = acc.get(i, i) + c;
                acc.set(i, i, v);
            }
        }
        acc
    }
}

impl fmt::Debug for ScalarMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[")?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Indices of a maximal linearly independent subset of `vectors`, scanning in order.
pub fn independent_subset(vectors: &[Vec<Scalar>]) -> Vec<usize> {
    if vectors.is_empty() {
        return Vec::new();
    }
    let dim = vectors[0].len();
    let m = ScalarMatrix::from_columns(dim, vectors);
    m.clone().rref_in_place()
}

/// Dimension of the span of `vectors`.
pub fn span_rank(vectors: &[Vec<Scalar>]) -> usize {
    independent_subset(vectors).len()
}

/// Univariate polynomial over `Q(i)`, coefficients in ascending degree.
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarPoly {
    coeffs: Vec<Scalar>,
}

impl ScalarPoly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        ScalarPoly { coeffs }
    }

    pub fn zero() -> Self {
        ScalarPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Scalar) -> Self {
        Self::new(vec![c])
    }

    /// `t - r`.
    pub fn linear_root(r: &Scalar) -> Self {
        Self::new(vec![-r, Scalar::one()])
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(l) => {
                let inv = l.inv().expect("nonzero leading coefficient");
                Self::new(self.coeffs.iter().map(|c| c * &inv).collect())
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            (0..n)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_default();
                    let b = other.coeffs.get(k).cloned().unwrap_or_default();
                    a + b
                })
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut acc = Self::constant(Scalar::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &Scalar::from_int(k as i64))
                .collect(),
        )
    }

    /// Euclidean division: `(q, r)` with `self = q * d + r`.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let lead_inv = d.leading().unwrap().inv().expect("nonzero");
        let mut r = self.coeffs.clone();
        let mut q = vec![Scalar::zero(); self.coeffs.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let f = &r[r.len() - 1] * &lead_inv;
            for (j, c) in d.coeffs.iter().enumerate() {
                r[k + j] -= &(&f * c);
            }
            q[k] = f;
            r.pop();
            while r.last().is_some_and(Scalar::is_zero) {
                r.pop();
            }
        }
        (Self::new(q), Self::new(r))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let one = Self::constant(Scalar::one());
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (one.clone(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), one);
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        let inv = r0.leading().map(|l| l.inv().unwrap()).unwrap_or_else(Scalar::one);
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    /// The squarefree part `p / gcd(p, p')`, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Self) -> Self {
        let (q, r) = self.div_rem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Yun's squarefree factorization: pairs `(s_i, i)` with `self ~ Π s_i^i`,
    /// each `s_i` monic, squarefree, pairwise coprime and nonconstant.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, usize)> {
        let f = self.monic();
        if f.degree().unwrap_or(0) == 0 {
            return Vec::new();
        }
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0);
        let c = df.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut out = Vec::new();
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            let a = b.gcd(&d);
            let next_b = b.exact_div(&a);
            let next_c = d.div_rem(&a).0;
            d = next_c.sub(&next_b.derivative());
            if a.degree().unwrap_or(0) > 0 {
                out.push((a, i));
            }
            b = next_b;
            i += 1;
        }
        out
    }

    /// Multiplicity of `r` as a root.
    pub fn root_multiplicity(&self, r: &Scalar) -> usize {
        let lin = Self::linear_root(r);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() {
            let (q, rem) = p.div_rem(&lin);
            if !rem.is_zero() {
                break;
            }
            p = q;
            k += 1;
        }
        k
    }

    /// All roots lying in `Q(i)`, each listed once.
    ///
    /// Approximate roots of the squarefree part are located numerically and
    /// then snapped to nearby Gaussian rationals; only candidates that
    /// annihilate the polynomial exactly are reported. The second component
    /// is the degree of the squarefree factor left without a root in `Q(i)`.
    pub fn gaussian_rational_roots(&self) -> (Vec<Scalar>, usize) {
        let mut sf = self.squarefree_part();
        let mut roots = Vec::new();
        for _round in 0..3 {
            let deg = sf.degree().unwrap_or(0);
            if deg == 0 {
                break;
            }
            let approx = numeric_roots(&sf);
            let mut found_any = false;
            for z in approx {
                for cand in snap_candidates(z) {
                    if sf.eval(&cand).is_zero() {
                        sf = sf.div_rem(&Self::linear_root(&cand)).0;
                        roots.push(cand);
                        found_any = true;
                        break;
                    }
                }
                if sf.degree().unwrap_or(0) == 0 {
                    break;
                }
            }
            if !found_any {
                break;
            }
        }
        roots.sort_by(|a, b| a.lex_cmp(b));
        (roots, sf.degree().unwrap_or(0))
    }
}

impl fmt::Debug for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| format!("({c})t^{k}"))
            .collect();
        write!(
            f,
            "{}",
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            }
        )
    }
}

/// Aberth-Ehrlich iteration on a floating-point copy of a monic polynomial.
fn numeric_roots(p: &ScalarPoly) -> Vec<Complex64> {
    let monic = p.monic();
    let n = monic.degree().unwrap_or(0);
    if n == 0 {
        return Vec::new();
    }
    let c: Vec<Complex64> = monic
        .coeffs()
        .iter()
        .map(|s| {
            let (re, im) = s.to_complex_f64();
            Complex64::new(re, im)
        })
        .collect();
    let bound = 1.0 + c[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let eval = |z: Complex64| -> (Complex64, Complex64) {
        let mut v = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for a in c.iter().rev() {
            d = d * z + v;
            v = v * z + a;
        }
        (v, d)
    };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(bound * 0.7, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    for _ in 0..500 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let (v, d) = eval(z[i]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        s += diff.inv();
                    }
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm());
            }
        }
        if max_step < 1e-15 * bound {
            break;
        }
    }
    z
}

/// Continued-fraction convergents of `x` with bounded denominators.
fn convergents(x: f64, max_den: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (1i64, x.floor() as i64);
    let (mut k0, mut k1) = (0i64, 1i64);
    out.push((h1, k1));
    let mut frac = x - x.floor();
    for _ in 0..40 {
        if frac.abs() < 1e-12 {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        if !a.is_finite() || a > 1e12 {
            break;
        }
        let a = a as i64;
        let (Some(h2), Some(k2)) = (
            a.checked_mul(h1).and_then(|v| v.checked_add(h0)),
            a.checked_mul(k1).and_then(|v| v.checked_add(k0)),
        ) else {
            break;
        };
        if k2 > max_den {
            break;
        }
        out.push((h2, k2));
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        frac = inv - inv.floor();
    }
    out
}

fn snap_candidates(z: Complex64) -> Vec<Scalar> {
    if !z.is_finite() {
        return Vec::new();
    }
    let res: Vec<(i64, i64)> = convergents(z.re, 1_000_000).into_iter().rev().take(4).collect();
    let ims: Vec<(i64, i64)> = if z.im.abs() < 1e-7 {
        vec![(0, 1)]
    } else {
        convergents(z.im, 1_000_000).into_iter().rev().take(4).collect()
    };
    let mut out = Vec::new();
    for &(rn, rd) in &res {
        for &(inn, ind) in &ims {
            out.push(Scalar::gaussian((rn, rd), (inn, ind)));
        }
    }
    if z.im.abs() < 1e-7 {
        for &(rn, rd) in &convergents(z.re, 1_000_000) {
            out.push(Scalar::ratio(rn, rd));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn kernel_and_rank() {
        let m = ScalarMatrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel();
        assert_eq!(ker.len(), 1);
        assert!(m.mul_vec(&ker[0]).iter().all(Scalar::is_zero));
    }

    #[test]
    fn det_and_inverse() {
        let m = ScalarMatrix::from_int_rows(&[&[2, 1], &[7, 4]]);
        assert_eq!(m.det(), Scalar::from_int(1));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), ScalarMatrix::identity(2));
        let sing = ScalarMatrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.det(), Scalar::zero());
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn char_poly_matches_det() {
        let m = ScalarMatrix::from_int_rows(&[&[1, 2, 0], &[0, 3, 1], &[4, 0, 1]]);
        let p = m.char_poly();
        for t in [-2i64, 0, 1, 5] {
            let shifted = ScalarMatrix::identity(3).scale(&Scalar::from_int(t)).sub(&m);
            assert_eq!(p.eval(&Scalar::from_int(t)), shifted.det());
        }
        assert!(m.eval_poly(&p).is_zero(), "Cayley-Hamilton");
    }

    #[test]
    fn poly_gcd_and_squarefree() {
        // (t-1)^2 (t+1/2)
        let p = ScalarPoly::linear_root(&Scalar::one())
            .pow(2)
            .mul(&ScalarPoly::linear_root(&q(-1, 2)));
        let sf = p.squarefree_part();
        assert_eq!(sf.degree(), Some(2));
        assert_eq!(p.root_multiplicity(&Scalar::one()), 2);
        let (g, s, t) = p.ext_gcd(&p.derivative());
        assert_eq!(s.mul(&p).add(&t.mul(&p.derivative())), g);
    }

    #[test]
    fn yun_factorization() {
        let a = ScalarPoly::linear_root(&q(1, 2));
        let b = ScalarPoly::new(vec![Scalar::from_int(-2), Scalar::zero(), Scalar::one()]);
        let p = a.pow(3).mul(&b).scale(&Scalar::from_int(7));
        let parts = p.squarefree_decomposition();
        assert_eq!(parts, vec![(b, 1), (a, 3)]);
    }

    #[test]
    fn gaussian_rational_roots_are_exact() {
        let roots = [q(1, 3), q(-1, 3), Scalar::gaussian((1, 2), (-3, 1)), q(7, 1)];
        let mut p = ScalarPoly::constant(Scalar::from_int(5));
        for r in &roots {
            p = p.mul(&ScalarPoly::linear_root(r));
        }
        p = p.mul(&ScalarPoly::linear_root(&q(7, 1)));
        let (found, rest) = p.gaussian_rational_roots();
        assert_eq!(rest, 0);
        assert_eq!(found.len(), 4);
        for r in &roots {
            assert!(found.contains(r));
        }
        // t^2 - 2 has no root in Q(i)
        let irr = ScalarPoly::new(vec![Scalar::from_int(-2), Scalar::zero(), Scalar::one()]);
        let (found, rest) = irr.mul(&ScalarPoly::linear_root(&q(1, 1))).gaussian_rational_roots();
        assert_eq!(found, vec![Scalar::one()]);
        assert_eq!(rest, 2);
    }
}
