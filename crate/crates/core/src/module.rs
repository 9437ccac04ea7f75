//! (a,b)-modules given by the matrix of `a` on a basis, and the functor calculus on them.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::BMatrix;
use crate::scalar::Scalar;
use crate::series::BSeries;

/// A free module over `C[[b]]` (truncated mod `b^N`) with an operator `a`
/// such that `ab - ba = b^2`.
///
/// Column `j` of the presentation matrix holds the coordinates of `a·e_j`.
/// On a general element `x = Σ S_j(b) e_j` the action is
/// `a·x = Σ S_j(b) a·e_j + b^2 S_j'(b) e_j`.
#[derive(Clone)]
pub struct ABModule {
    a_matrix: BMatrix,
    labels: Vec<String>,
}

/// An element given by its coordinates on the basis of a module.
#[derive(Clone, Debug, PartialEq)]
pub struct Element {
    pub coords: Vec<BSeries>,
}

impl Element {
    pub fn new(coords: Vec<BSeries>) -> Self {
        Element { coords }
    }

    pub fn zero(rank: usize, precision: usize) -> Self {
        Element {
            coords: vec![BSeries::zero(precision); rank],
        }
    }

    pub fn basis(rank: usize, j: usize, precision: usize) -> Self {
        let mut e = Self::zero(rank, precision);
        e.coords[j] = BSeries::one(precision);
        e
    }

    pub fn precision(&self) -> usize {
        self.coords.iter().map(BSeries::precision).min().unwrap_or(usize::MAX)
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(BSeries::is_zero)
    }

    pub fn scale_series(&self, s: &BSeries) -> Self {
        Element::new(self.coords.iter().map(|c| c * s).collect())
    }

    pub fn add(&self, other: &Element) -> Self {
        Element::new(self.coords.iter().zip(&other.coords).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, other: &Element) -> Self {
        Element::new(self.coords.iter().zip(&other.coords).map(|(x, y)| x - y).collect())
    }

    /// Multiplication by `b`.
    pub fn times_b(&self) -> Self {
        Element::new(self.coords.iter().map(|c| c.shift_up(1)).collect())
    }

    pub fn valuation(&self) -> Option<usize> {
        self.coords.iter().filter_map(BSeries::valuation).min()
    }

    pub fn truncate(&self, p: usize) -> Self {
        Element::new(self.coords.iter().map(|c| c.truncate(p)).collect())
    }
}

/// Outcome of checking `a(b·x) - b·a(x) = b^2 x` on basis elements.
#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub passed: bool,
    pub effective_precision: usize,
    /// Basis indices on which the commutation relation fails.
    pub failures: Vec<usize>,
}

/// Checks the commutation relation for an arbitrary action on coordinates.
///
/// For every basis element `e_j` and a few series multiples `S(b) e_j`,
/// computes `a(b·x) - b·a(x) - b^2 x` and checks that it vanishes.
pub fn validate_action(rank: usize, precision: usize, action: impl Fn(&[BSeries]) -> Vec<BSeries>) -> ValidationReport {
    let mut failures = Vec::new();
    let multipliers = [
        BSeries::one(precision),
        BSeries::from_ints(&[1, 2, 0, -1], precision),
        BSeries::from_ints(&[0, 0, 3, 1], precision),
    ];
    let mut effective = precision;
    for j in 0..rank {
        let mut ok = true;
        for s in &multipliers {
            let x = Element::basis(rank, j, precision).scale_series(s);
            let bx = x.times_b().truncate(precision);
            let a_bx = action(&bx.coords);
            let ax = action(&x.coords);
            for k in 0..rank {
                let lhs = &a_bx[k] - &ax[k].shift_up(1);
                let rhs = x.coords[k].shift_up(2);
                effective = effective.min(lhs.precision().min(rhs.precision()));
                if !lhs.eq_at(&rhs) {
                    ok = false;
                }
            }
        }
        if !ok {
            failures.push(j);
        }
    }
    ValidationReport {
        passed: failures.is_empty(),
        effective_precision: effective,
        failures,
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("e{i}")).collect()
}

/// Makes labels pairwise distinct by appending a numeric suffix to repeats.
fn dedup_labels(labels: Vec<String>) -> Vec<String> {
    let mut out: Vec<String> = Vec::with_capacity(labels.len());
    for l in labels {
        if !out.contains(&l) {
            out.push(l);
            continue;
        }
        let mut k = 2;
        while out.contains(&format!("{l}_{k}")) {
            k += 1;
        }
        out.push(format!("{l}_{k}"));
    }
    out
}

impl ABModule {
    pub fn new(a_matrix: BMatrix, labels: Vec<String>) -> Result<Self> {
        if !a_matrix.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "presentation matrix is {}x{}",
                a_matrix.rows(),
                a_matrix.cols()
            )));
        }
        if labels.len() != a_matrix.rows() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for rank {}",
                labels.len(),
                a_matrix.rows()
            )));
        }
        Ok(ABModule {
            a_matrix,
            labels: dedup_labels(labels),
        })
    }

    /// Module with default basis labels `e1, e2, ...`.
    pub fn from_matrix(a_matrix: BMatrix) -> Result<Self> {
        let n = a_matrix.rows();
        Self::new(a_matrix, default_labels(n))
    }

    pub fn zero(precision: usize) -> Self {
        ABModule {
            a_matrix: BMatrix::zeros(0, 0, precision),
            labels: Vec::new(),
        }
    }

    /// `E_λ`: rank one, `a·e = λ b e`.
    pub fn elementary(lambda: &Scalar, precision: usize) -> Self {
        let a = BMatrix::from_fn(1, 1, precision, |_, _| BSeries::monomial(lambda.clone(), 1, precision));
        ABModule {
            a_matrix: a,
            labels: vec!["e".into()],
        }
    }

    pub fn rank(&self) -> usize {
        self.a_matrix.rows()
    }

    pub fn precision(&self) -> usize {
        self.a_matrix.precision()
    }

    pub fn a_matrix(&self) -> &BMatrix {
        &self.a_matrix
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<Self> {
        Self::new(self.a_matrix.clone(), labels)
    }

    pub fn truncate(&self, p: usize) -> Self {
        ABModule {
            a_matrix: self.a_matrix.truncate(p),
            labels: self.labels.clone(),
        }
    }

    pub fn basis_element(&self, j: usize) -> Element {
        Element::basis(self.rank(), j, self.precision())
    }

    /// `a·x` on coordinates: `A x + b^2 x'`.
    pub fn a_apply_coords(&self, x: &[BSeries]) -> Vec<BSeries> {
        let ax = self.a_matrix.mul_vec(x);
        ax.iter().zip(x).map(|(v, s)| v + &s.derivative().shift_up(2)).collect()
    }

    pub fn a_apply(&self, x: &Element) -> Result<Element> {
        if x.coords.len() != self.rank() {
            return Err(Error::DimensionMismatch(format!(
                "element of length {} in a module of rank {}",
                x.coords.len(),
                self.rank()
            )));
        }
        Ok(Element::new(self.a_apply_coords(&x.coords)))
    }

    pub fn validate(&self) -> ValidationReport {
        validate_action(self.rank(), self.precision(), |x| self.a_apply_coords(x))
    }

    fn check_precision(&self, other: &ABModule) -> Result<()> {
        if self.precision() != other.precision() {
            return Err(Error::PrecisionMismatch(self.precision(), other.precision()));
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &ABModule) -> Result<Self> {
        self.check_precision(other)?;
        let labels = self.labels.iter().chain(&other.labels).cloned().collect();
        Self::new(self.a_matrix.block_diag(&other.a_matrix), labels)
    }

    /// Direct sum of a nonempty list of modules of equal precision.
    pub fn direct_sum_all(parts: &[ABModule]) -> Result<Self> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| Error::DimensionMismatch("empty direct sum".into()))?;
        rest.iter().try_fold(first.clone(), |acc, m| acc.direct_sum(m))
    }

    /// Same set with `a` and `b` negated: presentation `-A(-b)`.
    pub fn conjugate(&self) -> Self {
        ABModule {
            a_matrix: self.a_matrix.conjugate().neg(),
            labels: self.labels.iter().map(|l| format!("{l}_c")).collect(),
        }
    }

    /// Morphisms into `E_0` with `(Λφ)(x) = a φ(x) - φ(a x)`: presentation `-Aᵀ` on the dual basis.
    pub fn dual(&self) -> Self {
        ABModule {
            a_matrix: self.a_matrix.transpose().neg(),
            labels: self.labels.iter().map(|l| format!("{l}_d")).collect(),
        }
    }

    /// Conjugate of the dual: presentation `A(-b)ᵀ`.
    pub fn adjoint(&self) -> Self {
        ABModule {
            a_matrix: self.a_matrix.conjugate().transpose(),
            labels: self.labels.iter().map(|l| format!("{l}_ad")).collect(),
        }
    }

    /// Tensor product over `C[[b]]` with `a(v⊗w) = av⊗w + v⊗aw`.
    ///
    /// The basis vector `e_i ⊗ f_j` has index `i * rank(F) + j`.
    pub fn tensor(&self, other: &ABModule) -> Result<Self> {
        self.check_precision(other)?;
        let p = self.precision();
        let a = self
            .a_matrix
            .kron(&BMatrix::identity(other.rank(), p))
            .add(&BMatrix::identity(self.rank(), p).kron(&other.a_matrix));
        let labels = self
            .labels
            .iter()
            .flat_map(|l| other.labels.iter().map(move |m| format!("{l}_x_{m}")))
            .collect();
        Self::new(a, labels)
    }

    /// The module of `b`-linear maps `E -> F` with `Λφ = a_F ∘ φ - φ ∘ a_E`.
    ///
    /// Realized as `F ⊗ E*`; basis vector `i * rank(E) + j` is the map `e_j ↦ f_i`.
    pub fn hom_module(e: &ABModule, f: &ABModule) -> Result<Self> {
        f.tensor(&e.dual())
    }

    /// `Ě* ⊗ E_δ`.
    pub fn delta_dual(&self, delta: &Scalar) -> Self {
        let elementary = ABModule::elementary(delta, self.precision());
        self.adjoint().tensor(&elementary).expect("equal precision")
    }

    /// Presentation in the basis given by the columns of `t`: `T^{-1}(A T + b^2 T')`.
    pub fn base_change(&self, t: &BMatrix) -> Result<Self> {
        if t.rows() != self.rank() || !t.is_square() {
            return Err(Error::DimensionMismatch(
                "base change matrix has the wrong shape".into(),
            ));
        }
        let p = self.precision();
        let t = t.truncate(p).assume_precision(p);
        let t_inv = t.inverse()?;
        let rhs = self.a_matrix.mul(&t).add(&t.b2_derivative());
        Self::new(t_inv.mul(&rhs), self.labels.clone())
    }

    /// Exact equality of presentations at the smaller precision (labels ignored).
    pub fn same_presentation(&self, other: &ABModule) -> bool {
        self.a_matrix.eq_at(&other.a_matrix)
    }

    /// Human-readable relations `a e1 = ...`, one per basis vector.
    pub fn relations(&self) -> Vec<String> {
        (0..self.rank())
            .map(|j| {
                let terms: Vec<String> = (0..self.rank())
                    .filter(|&i| !self.a_matrix.get(i, j).is_zero())
                    .map(|i| format_term(self.a_matrix.get(i, j), &self.labels[i]))
                    .collect();
                let rhs = if terms.is_empty() {
                    "0".to_string()
                } else {
                    join_terms(&terms)
                };
                format!("a {} = {}", self.labels[j], rhs)
            })
            .collect()
    }
}

fn format_term(coef: &BSeries, label: &str) -> String {
    let poly = coef.to_poly_string();
    if coef.coeffs().iter().filter(|c| !c.is_zero()).count() == 1 {
        if poly == "1" {
            return label.to_string();
        }
        if poly == "-1" {
            return format!("-{label}");
        }
        return format!("{poly}*{label}");
    }
    format!("({poly})*{label}")
}

fn join_terms(terms: &[String]) -> String {
    let mut out = String::new();
    for (k, t) in terms.iter().enumerate() {
        if k == 0 {
            out.push_str(t);
        } else if let Some(rest) = t.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(t);
        }
    }
    out
}

impl PartialEq for ABModule {
    fn eq(&self, other: &Self) -> bool {
        self.rank() == other.rank() && self.same_presentation(other)
    }
}

impl fmt::Debug for ABModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ABModule(rank {}, mod b^{}) {{ ", self.rank(), self.precision())?;
        write!(f, "{}", self.relations().join("; "))?;
        write!(f, " }}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn elementary_action() {
        let e = ABModule::elementary(&q(-3, 2), 6);
        let ax = e.a_apply(&e.basis_element(0)).unwrap();
        assert_eq!(ax.coords[0], BSeries::monomial(q(-3, 2), 1, 6));
    }

    #[test]
    fn e0_on_b_times_generator() {
        let e0 = ABModule::elementary(&Scalar::zero(), 6);
        let x = e0.basis_element(0).times_b().truncate(6);
        let ax = e0.a_apply(&x).unwrap();
        assert_eq!(ax.coords[0], BSeries::monomial(Scalar::one(), 2, 6));
    }

    #[test]
    fn corrupted_action_fails_validation() {
        let e = ABModule::elementary(&Scalar::one(), 6);
        assert!(e.validate().passed);
        // drops the b^2 S' term
        let bad = validate_action(1, 6, |x| e.a_matrix().mul_vec(x));
        assert!(!bad.passed);
        assert_eq!(bad.failures, vec![0]);
    }

    #[test]
    fn functor_closed_forms_rank_one() {
        let l = q(2, 3);
        let e = ABModule::elementary(&l, 5);
        let minus = ABModule::elementary(&-&l, 5);
        assert_eq!(e.conjugate(), e);
        assert_eq!(e.dual(), minus);
        assert_eq!(e.adjoint(), minus);
        let hom = ABModule::hom_module(&e, &ABModule::elementary(&Scalar::one(), 5)).unwrap();
        assert_eq!(hom, ABModule::elementary(&(&Scalar::one() - &l), 5));
        assert_eq!(
            e.delta_dual(&Scalar::from_int(3)),
            ABModule::elementary(&(&Scalar::from_int(3) - &l), 5)
        );
    }

    #[test]
    fn involutions_are_exact() {
        let a = BMatrix::from_int_polys(&[&[&[0, 1, 2], &[1, 1]], &[&[3], &[0, -1, 0, 5]]], 6);
        let e = ABModule::from_matrix(a).unwrap();
        assert_eq!(e.conjugate().conjugate(), e);
        assert_eq!(e.adjoint().adjoint(), e);
        assert_eq!(e.dual().dual(), e);
        assert_eq!(e.adjoint(), e.dual().conjugate());
    }

    #[test]
    fn hom_module_action_is_lambda() {
        // a on hom_module(E, F) applied to vec(M) equals vec(B M + b^2 M' - M A)
        let p = 6;
        let e = ABModule::from_matrix(BMatrix::from_int_polys(&[&[&[0, 1], &[1]], &[&[0], &[0, -1]]], p)).unwrap();
        let f = ABModule::from_matrix(BMatrix::from_int_polys(&[&[&[0, 2], &[0, 0, 1]], &[&[2], &[1, 1]]], p)).unwrap();
        let m = BMatrix::from_fn(f.rank(), e.rank(), p, |i, j| {
            BSeries::from_ints(&[i as i64 + 1, j as i64 - 1, 2], p)
        });
        let hom = ABModule::hom_module(&e, &f).unwrap();
        let v: Vec<BSeries> = m.entries().to_vec();
        let lam = hom.a_apply_coords(&v);
        let expected = f.a_matrix().mul(&m).add(&m.b2_derivative()).sub(&m.mul(e.a_matrix()));
        for (x, y) in lam.iter().zip(expected.entries()) {
            assert!(x.eq_at(y));
        }
    }

    #[test]
    fn base_change_identity_is_trivial() {
        let a = BMatrix::from_int_polys(&[&[&[0, 1], &[1]], &[&[0], &[0, -1]]], 6);
        let e = ABModule::from_matrix(a).unwrap();
        assert_eq!(e.base_change(&BMatrix::identity(2, 6)).unwrap(), e);
        let sing = BMatrix::from_int_polys(&[&[&[0, 1], &[0]], &[&[0], &[1]]], 6);
        assert_eq!(e.base_change(&sing).unwrap_err(), Error::NotInvertible);
    }

    #[test]
    fn constructed_modules_validate() {
        let a = BMatrix::from_int_polys(&[&[&[0, 1], &[1]], &[&[0], &[0, -1]]], 6);
        let e = ABModule::from_matrix(a).unwrap();
        for m in [
            e.dual(),
            e.conjugate(),
            e.adjoint(),
            e.tensor(&e).unwrap(),
            e.delta_dual(&Scalar::from_int(3)),
        ] {
            assert!(m.validate().passed);
        }
    }
}
