//! Morphisms of (a,b)-modules and the exact solver for `Hom(E, F)`.
//!
//! A `b`-linear map with matrix `M(b)` is an (a,b)-morphism `E -> F` iff
//! `B M + b^2 M' = M A`, where `A`, `B` present `E`, `F`. Written order by
//! order this reads
//!
//! ```text
//! Σ_{p ≤ m} (B_p M_{m-p} - M_{m-p} A_p) + (m-1) M_{m-1} = 0.
//! ```

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::ScalarMatrix;
use crate::matrix::BMatrix;
use crate::module::{ABModule, Element};
use crate::scalar::Scalar;
use crate::series::BSeries;

#[derive(Clone, Debug)]
pub struct ABMorphism {
    domain: ABModule,
    codomain: ABModule,
    matrix: BMatrix,
}

impl ABMorphism {
    /// Wraps a matrix without checking the intertwining equation.
    pub fn new(domain: ABModule, codomain: ABModule, matrix: BMatrix) -> Result<Self> {
        if matrix.rows() != codomain.rank() || matrix.cols() != domain.rank() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                codomain.rank(),
                domain.rank()
            )));
        }
        let p = matrix.precision().min(domain.precision()).min(codomain.precision());
        Ok(ABMorphism {
            domain,
            codomain,
            matrix: matrix.truncate(p),
        })
    }

    /// Like [`ABMorphism::new`] but rejects matrices that do not intertwine.
    pub fn checked(domain: ABModule, codomain: ABModule, matrix: BMatrix) -> Result<Self> {
        let f = Self::new(domain, codomain, matrix)?;
        match f.first_defect() {
            None => Ok(f),
            Some((row, col, order)) => Err(Error::NotCompatible { row, col, order }),
        }
    }

    pub fn identity(e: &ABModule) -> Self {
        ABMorphism {
            domain: e.clone(),
            codomain: e.clone(),
            matrix: BMatrix::identity(e.rank(), e.precision()),
        }
    }

    pub fn zero(e: &ABModule, f: &ABModule) -> Self {
        let p = e.precision().min(f.precision());
        ABMorphism {
            domain: e.clone(),
            codomain: f.clone(),
            matrix: BMatrix::zeros(f.rank(), e.rank(), p),
        }
    }

    pub fn domain(&self) -> &ABModule {
        &self.domain
    }

    pub fn codomain(&self) -> &ABModule {
        &self.codomain
    }

    pub fn matrix(&self) -> &BMatrix {
        &self.matrix
    }

    pub fn precision(&self) -> usize {
        self.matrix.precision()
    }

    pub fn is_endomorphism(&self) -> bool {
        self.domain == self.codomain
    }

    pub fn truncate(&self, p: usize) -> Self {
        ABMorphism {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.truncate(p),
        }
    }

    /// `B M + b^2 M' - M A`, known to the precision of `M`.
    pub fn intertwining_defect(&self) -> BMatrix {
        let b = self.codomain.a_matrix();
        let a = self.domain.a_matrix();
        let m = &self.matrix;
        b.mul(m).add(&m.b2_derivative()).sub(&m.mul(a)).truncate(m.precision())
    }

    /// First entry and order at which the intertwining equation fails.
    pub fn first_defect(&self) -> Option<(usize, usize, usize)> {
        let d = self.intertwining_defect();
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                if let Some(v) = d.get(i, j).valuation() {
                    if best.is_none_or(|(_, _, o)| v < o) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        best
    }

    pub fn verify(&self) -> bool {
        self.first_defect().is_none()
    }

    /// Checks `φ(a x) = a φ(x)` by evaluating both sides through the module actions,
    /// on every basis vector and on a few series multiples of them.
    pub fn verify_by_evaluation(&self) -> bool {
        let p = self.precision();
        let multipliers = [
            BSeries::one(p),
            BSeries::from_ints(&[2, -1, 0, 3], p),
            BSeries::from_ints(&[0, 1, 1], p),
        ];
        for j in 0..self.domain.rank() {
            for s in &multipliers {
                let x = Element::basis(self.domain.rank(), j, p).scale_series(s);
                let ax = self.domain.a_apply_coords(&x.coords);
                let lhs = self.matrix.mul_vec(&ax);
                let rhs = self.codomain.a_apply_coords(&self.matrix.mul_vec(&x.coords));
                if lhs.iter().zip(&rhs).any(|(l, r)| !l.eq_at(r)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn apply(&self, x: &Element) -> Element {
        Element::new(self.matrix.mul_vec(&x.coords))
    }

    fn check_parallel(&self, other: &Self) -> Result<()> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::DimensionMismatch("morphisms between different modules".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_parallel(other)?;
        Self::new(
            self.domain.clone(),
            self.codomain.clone(),
            self.matrix.try_add(&other.matrix)?,
        )
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_parallel(other)?;
        Self::new(
            self.domain.clone(),
            self.codomain.clone(),
            self.matrix.try_sub(&other.matrix)?,
        )
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ABMorphism {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.scale(c),
        }
    }

    /// `g ∘ f`.
    pub fn compose(g: &ABMorphism, f: &ABMorphism) -> Result<Self> {
        if g.domain != f.codomain {
            return Err(Error::DimensionMismatch(
                "domain of g differs from codomain of f".into(),
            ));
        }
        Self::new(f.domain.clone(), g.codomain.clone(), g.matrix.try_mul(&f.matrix)?)
    }

    /// The inverse morphism when `det M(0) ≠ 0`.
    pub fn inverse(&self) -> Option<Self> {
        if self.domain.rank() != self.codomain.rank() {
            return None;
        }
        let inv = self.matrix.inverse().ok()?;
        Some(ABMorphism {
            domain: self.codomain.clone(),
            codomain: self.domain.clone(),
            matrix: inv,
        })
    }

    pub fn is_invertible(&self) -> bool {
        self.domain.rank() == self.codomain.rank() && !self.matrix.constant_term().det().is_zero()
    }

    /// `Ǧ* -> Ě*` for `φ: E -> G`, with matrix `M(-b)ᵀ`.
    pub fn adjoint(&self) -> Self {
        ABMorphism {
            domain: self.codomain.adjoint(),
            codomain: self.domain.adjoint(),
            matrix: self.matrix.conjugate().transpose(),
        }
    }

    /// `φ^k` for an endomorphism.
    pub fn pow(&self, k: usize) -> Self {
        ABMorphism {
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.pow(k),
        }
    }
}

/// Basis of a truncated morphism space.
#[derive(Clone, Debug)]
pub struct HomBasis {
    pub morphisms: Vec<ABMorphism>,
    pub dim: usize,
    /// Precision of the returned morphisms.
    pub precision: usize,
    pub stable: bool,
    /// `dims[L]` is the dimension modulo `b^(L-1)` when solving at precision `L` (`dims[0]` unused).
    pub dims: Vec<usize>,
    /// Precision beyond which truncated solutions extend uniquely, when it can be certified.
    pub resonance_bound: Option<usize>,
}

impl HomBasis {
    /// `Σ c_i φ_i`.
    pub fn combination(&self, coeffs: &[Scalar], domain: &ABModule, codomain: &ABModule) -> ABMorphism {
        let mut m = BMatrix::zeros(codomain.rank(), domain.rank(), self.precision);
        for (c, f) in coeffs.iter().zip(&self.morphisms) {
            if !c.is_zero() {
                m = m.add(&f.matrix.scale(c));
            }
        }
        ABMorphism {
            domain: domain.clone(),
            codomain: codomain.clone(),
            matrix: m,
        }
    }
}

/// Matrix of `X ↦ B X - X A + k X` on row-major `vec(X)`.
fn sylvester_matrix(b: &ScalarMatrix, a: &ScalarMatrix, k: i64) -> ScalarMatrix {
    let (nf, ne) = (b.rows(), a.rows());
    let s = nf * ne;
    let kk = Scalar::from_int(k);
    ScalarMatrix::from_fn(s, s, |r, c| {
        let (i, j) = (r / ne, r % ne);
        let (l, m) = (c / ne, c % ne);
        let mut v = Scalar::zero();
        if j == m {
            v += b.get(i, l);
        }
        if i == l {
            v -= a.get(m, j);
            if j == m {
                v += &kk;
            }
        }
        v
    })
}

fn sylvester_apply(b: &ScalarMatrix, a: &ScalarMatrix, k: i64, x: &ScalarMatrix) -> ScalarMatrix {
    let mut out = b.mul(x).sub(&x.mul(a));
    if k != 0 {
        out = out.add(&x.scale(&Scalar::from_int(k)));
    }
    out
}

fn flatten(coeffs: &[ScalarMatrix]) -> Vec<Scalar> {
    coeffs.iter().flat_map(|c| c.as_slice().iter().cloned()).collect()
}

/// Reduced row echelon basis of the span of `rows`.
fn canonical_rows(rows: Vec<Vec<Scalar>>, width: usize) -> Vec<Vec<Scalar>> {
    if rows.is_empty() {
        return rows;
    }
    let mut m = ScalarMatrix::from_rows(rows);
    let pivots = m.rref_in_place();
    (0..pivots.len())
        .map(|r| (0..width).map(|c| m.get(r, c).clone()).collect())
        .collect()
}

/// `2 + max{α - β ∈ Z_{≥0}}` over eigenvalues `α` of `A_1` and `β` of `B_1`,
/// valid when both presentations have a simple pole (`A(0) = B(0) = 0`).
pub fn resonance_bound(e: &ABModule, f: &ABModule) -> Option<usize> {
    let (a, b) = (e.a_matrix(), f.a_matrix());
    if !a.constant_term().is_zero() || !b.constant_term().is_zero() {
        return None;
    }
    let (ra, rest_a) = a.coeff_matrix(1).char_poly().gaussian_rational_roots();
    let (rb, rest_b) = b.coeff_matrix(1).char_poly().gaussian_rational_roots();
    if rest_a > 0 || rest_b > 0 {
        return None;
    }
    let mut k_max: i64 = 0;
    for alpha in &ra {
        for beta in &rb {
            if let Some(k) = (alpha - beta).as_integer() {
                k_max = k_max.max(k);
            }
        }
    }
    Some(2 + k_max as usize)
}

/// All morphisms `E -> F` at the largest precision the data supports.
///
/// Solves the order-`m` equations for `m < N` one order at a time, keeping a
/// basis of the solutions `(M_0, …, M_m)` in reduced echelon form.
///
/// Truncated solutions need not extend: when `A(0)` or `B(0)` is nilpotent but
/// nonzero, a band of spurious solutions sits just below the truncation order.
/// For simple-pole presentations past the resonance bound every truncated
/// solution modulo `b^(N-1)` extends, and that precision is returned. Otherwise
/// the output precision is the largest `K` at which solving with precision `N`
/// and `N-1` give the same space of `K`-truncated solutions.
pub fn solve_hom(e: &ABModule, f: &ABModule) -> Result<HomBasis> {
    if e.precision() != f.precision() {
        return Err(Error::PrecisionMismatch(e.precision(), f.precision()));
    }
    let n = e.precision();
    let (ne, nf) = (e.rank(), f.rank());
    let s = ne * nf;
    let a: Vec<ScalarMatrix> = (0..n).map(|k| e.a_matrix().coeff_matrix(k)).collect();
    let b: Vec<ScalarMatrix> = (0..n).map(|k| f.a_matrix().coeff_matrix(k)).collect();

    let mut dims = vec![0; n + 1];
    if n == 0 {
        return Ok(HomBasis {
            morphisms: Vec::new(),
            dim: 0,
            precision: 0,
            stable: false,
            dims,
            resonance_bound: None,
        });
    }
    let t0 = sylvester_matrix(&b[0], &a[0], 0);

    // basis of solutions of the equations of order < m, as coefficient lists M_0..M_{m-1}
    let mut basis: Vec<Vec<ScalarMatrix>> = Vec::new();
    let mut pivot_orders: Vec<Vec<usize>> = Vec::with_capacity(n);
    for m in 0..n {
        // unknowns: weights z on the current basis, then the new coefficient M_m
        let d = basis.len();
        let residuals: Vec<ScalarMatrix> = basis
            .iter()
            .map(|sol| {
                let mut acc = ScalarMatrix::zeros(nf, ne);
                for (k, mk) in sol.iter().enumerate() {
                    let p = m - k;
                    let extra = if p == 1 { k as i64 } else { 0 };
                    acc = acc.add(&sylvester_apply(&b[p], &a[p], extra, mk));
                }
                acc
            })
            .collect();
        let system = ScalarMatrix::from_fn(s, d + s, |r, c| {
            if c < d {
                residuals[c].as_slice()[r].clone()
            } else {
                t0.get(r, c - d).clone()
            }
        });
        let kernel = if m == 0 {
            // before the first step the basis is the single empty solution
            t0.kernel().into_iter().map(|v| (vec![], v)).collect::<Vec<_>>()
        } else {
            system
                .kernel()
                .into_iter()
                .map(|v| (v[..d].to_vec(), v[d..].to_vec()))
                .collect()
        };
        let mut next: Vec<Vec<Scalar>> = Vec::with_capacity(kernel.len());
        for (z, x) in kernel {
            let mut coeffs = vec![ScalarMatrix::zeros(nf, ne); m];
            for (zi, sol) in z.iter().zip(&basis) {
                if zi.is_zero() {
                    continue;
                }
                for (k, mk) in sol.iter().enumerate() {
                    coeffs[k] = coeffs[k].add(&mk.scale(zi));
                }
            }
            let mut flat = flatten(&coeffs);
            flat.extend(x);
            next.push(flat);
        }
        let width = s * (m + 1);
        let rows = canonical_rows(next, width);
        basis = rows
            .iter()
            .map(|row| {
                (0..=m)
                    .map(|k| ScalarMatrix::from_fn(nf, ne, |i, j| row[k * s + i * ne + j].clone()))
                    .collect()
            })
            .collect();
        // rows are in echelon form, so the rank of the projection onto the
        // first K coefficients is the number of pivots below K
        pivot_orders.push(
            rows.iter()
                .map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row") / s)
                .collect(),
        );
        dims[m + 1] = pivot_orders[m].iter().filter(|&&q| q < m).count();
    }

    let rank_at = |level: usize, k: usize| pivot_orders[level - 1].iter().filter(|&&q| q < k).count();
    let bound = resonance_bound(e, f);
    let certified = bound.is_some_and(|bd| n >= bd);
    let (out_prec, stable) = if certified {
        (n - 1, true)
    } else {
        match (1..n.saturating_sub(1))
            .rev()
            .find(|&k| rank_at(n, k) == rank_at(n - 1, k))
        {
            Some(k) => (k, bound.is_none()),
            None => (n - 1, false),
        }
    };
    let projected: Vec<Vec<Scalar>> = basis.iter().map(|sol| flatten(&sol[..out_prec])).collect();
    let rows = canonical_rows(projected, s * out_prec);
    let morphisms: Vec<ABMorphism> = rows
        .iter()
        .map(|row| {
            let coeffs: Vec<ScalarMatrix> = (0..out_prec)
                .map(|k| ScalarMatrix::from_fn(nf, ne, |i, j| row[k * s + i * ne + j].clone()))
                .collect();
            ABMorphism {
                domain: e.clone(),
                codomain: f.clone(),
                matrix: BMatrix::from_coeff_matrices(&coeffs, nf, ne, out_prec),
            }
        })
        .collect();
    let dim = morphisms.len();
    Ok(HomBasis {
        morphisms,
        dim,
        precision: out_prec,
        stable,
        dims,
        resonance_bound: bound,
    })
}

/// Outcome of an isomorphism test.
#[derive(Clone, Debug)]
pub enum IsoVerdict {
    Yes(ABMorphism),
    /// Not isomorphic; `certified` is false only for verdicts resting on random trials.
    No {
        certified: bool,
    },
    Inconclusive(String),
}

impl IsoVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, IsoVerdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, IsoVerdict::No { .. })
    }
}

/// Largest grid evaluated when deciding exactly that no combination is invertible.
const GRID_LIMIT: usize = 200_000;

fn combine_constants(cs: &[ScalarMatrix], t: &[i64]) -> ScalarMatrix {
    let mut m = ScalarMatrix::zeros(cs[0].rows(), cs[0].cols());
    for (c, &ti) in cs.iter().zip(t) {
        if ti != 0 {
            m = m.add(&c.scale(&Scalar::from_int(ti)));
        }
    }
    m
}

/// Decides whether `E ≅ F` at the working precision.
///
/// A witness is an element of `Hom(E, F)` whose constant term is invertible.
/// `det(Σ t_i C_i)` over the constant terms `C_i` of a basis is a polynomial of
/// degree at most `rank` in each `t_i`; it vanishes identically iff it vanishes
/// on the grid `{0..rank}^d`, which is evaluated when small enough. Otherwise
/// `trials` random points from a large box are tried.
pub fn are_isomorphic(e: &ABModule, f: &ABModule, trials: usize, seed: u64) -> Result<IsoVerdict> {
    if e.precision() != f.precision() {
        return Err(Error::PrecisionMismatch(e.precision(), f.precision()));
    }
    if e.rank() != f.rank() {
        return Ok(IsoVerdict::No { certified: true });
    }
    let n = e.rank();
    let hom = solve_hom(e, f)?;
    if n == 0 {
        return Ok(IsoVerdict::Yes(ABMorphism::zero(e, f)));
    }
    if hom.dim == 0 {
        return Ok(IsoVerdict::No { certified: true });
    }
    let cs: Vec<ScalarMatrix> = hom.morphisms.iter().map(|m| m.matrix().constant_term()).collect();
    Ok(match find_invertible_combination(&cs, trials, seed) {
        CombinationSearch::Found(t) => {
            let coeffs: Vec<Scalar> = t.iter().map(|&x| Scalar::from_int(x)).collect();
            let w = hom.combination(&coeffs, e, f);
            if hom.stable {
                IsoVerdict::Yes(w)
            } else {
                IsoVerdict::Inconclusive(format!(
                    "an invertible morphism exists at precision {}, but the morphism space is not stable there",
                    hom.precision
                ))
            }
        }
        CombinationSearch::Absent => IsoVerdict::No { certified: true },
        CombinationSearch::Unknown => IsoVerdict::Inconclusive(format!(
            "no invertible combination among {trials} random trials in a {}-dimensional morphism space",
            cs.len()
        )),
    })
}

/// Result of searching a span of square matrices for an invertible element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CombinationSearch {
    /// Integer coefficients of an invertible combination.
    Found(Vec<i64>),
    /// Every combination is singular.
    Absent,
    Unknown,
}

/// Looks for integer `t` with `det(Σ t_k C_k) != 0`.
///
/// Basis elements come first, then `trials` random points, the first half
/// with coefficients in `-3..=3`. The determinant is
/// a polynomial of degree at most `n` in each coefficient, so when the grid
/// `{0..n}^d` is small enough its exhaustive search is a proof either way.
pub fn find_invertible_combination(cs: &[ScalarMatrix], trials: usize, seed: u64) -> CombinationSearch {
    let d = cs.len();
    if d == 0 {
        return CombinationSearch::Absent;
    }
    let n = cs[0].rows();
    if n == 0 {
        return CombinationSearch::Found(vec![0; d]);
    }
    for k in 0..d {
        if !cs[k].det().is_zero() {
            let mut t = vec![0i64; d];
            t[k] = 1;
            return CombinationSearch::Found(t);
        }
    }
    // small coefficients first so that witnesses stay readable
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Vec<i64>> = (0..trials)
        .map(|i| {
            let r = if i < trials / 2 { 3 } else { 1i64 << 30 };
            (0..d).map(|_| rng.gen_range(-r..=r)).collect()
        })
        .collect();
    if let Some(t) = points
        .par_iter()
        .find_first(|t| !combine_constants(cs, t).det().is_zero())
    {
        return CombinationSearch::Found(t.clone());
    }
    let side = n + 1;
    if (side as f64).powi(d as i32) > GRID_LIMIT as f64 {
        return CombinationSearch::Unknown;
    }
    let point = |idx: usize| -> Vec<i64> {
        let mut t = vec![0i64; d];
        let mut r = idx;
        for ti in t.iter_mut() {
            *ti = (r % side) as i64;
            r /= side;
        }
        t
    };
    let total = side.pow(d as u32);
    match (0..total)
        .into_par_iter()
        .find_first(|&idx| !combine_constants(cs, &point(idx)).det().is_zero())
    {
        Some(idx) => CombinationSearch::Found(point(idx)),
        None => CombinationSearch::Absent,
    }
}

/// The module presented in the basis given by the columns of `t`, with the
/// isomorphism to `E` whose matrix is `t`.
pub fn base_change_iso(e: &ABModule, t: &BMatrix) -> Result<(ABModule, ABMorphism)> {
    let changed = e.base_change(t)?;
    let iso = ABMorphism::new(changed.clone(), e.clone(), t.truncate(e.precision()))?;
    Ok((changed, iso))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(n: i64, d: i64, p: usize) -> ABModule {
        ABModule::elementary(&Scalar::ratio(n, d), p)
    }

    #[test]
    fn rank_one_homs() {
        let h = solve_hom(&el(1, 1, 8), &el(0, 1, 8)).unwrap();
        assert_eq!(h.dim, 1);
        assert!(h.stable);
        assert_eq!(
            h.morphisms[0].matrix().get(0, 0),
            &BSeries::monomial(Scalar::one(), 1, 7)
        );
        let h = solve_hom(&el(0, 1, 8), &el(1, 1, 8)).unwrap();
        assert_eq!(h.dim, 0);
    }

    #[test]
    fn composition_of_generators() {
        let p = 8;
        let g = solve_hom(&el(1, 1, p), &el(0, 1, p)).unwrap().morphisms[0].clone();
        let f = solve_hom(&el(2, 1, p), &el(1, 1, p)).unwrap().morphisms[0].clone();
        let h = solve_hom(&el(2, 1, p), &el(0, 1, p)).unwrap();
        let gf = ABMorphism::compose(&g, &f).unwrap();
        assert_eq!(gf.matrix(), h.morphisms[0].matrix());
        assert_eq!(
            h.morphisms[0].matrix().get(0, 0),
            &BSeries::monomial(Scalar::one(), 2, 7)
        );
    }

    #[test]
    fn adjoint_of_generator() {
        let g = solve_hom(&el(1, 1, 6), &el(0, 1, 6)).unwrap().morphisms[0].clone();
        let adj = g.adjoint();
        assert_eq!(adj.domain(), &el(0, 1, 6));
        assert_eq!(adj.codomain(), &el(-1, 1, 6));
        assert_eq!(adj.matrix().get(0, 0), &BSeries::monomial(Scalar::from_int(-1), 1, 5));
        assert!(adj.verify() && adj.verify_by_evaluation());
    }

    #[test]
    fn inverse_of_base_change() {
        let p = 6;
        let e = ABModule::from_matrix(BMatrix::from_int_polys(&[&[&[0, 1], &[1]], &[&[0], &[0, -1]]], p)).unwrap();
        let t = BMatrix::from_int_polys(&[&[&[1, 1], &[2]], &[&[0, 3], &[1, 0, 1]]], p);
        let (e2, iso) = base_change_iso(&e, &t).unwrap();
        assert!(iso.verify() && iso.verify_by_evaluation());
        let inv = iso.inverse().unwrap();
        assert!(inv.verify());
        assert_eq!(
            ABMorphism::compose(&inv, &iso).unwrap().matrix(),
            ABMorphism::identity(&e2).matrix()
        );
    }

    #[test]
    fn iso_verdicts() {
        let p = 8;
        assert!(are_isomorphic(&el(1, 1, p), &el(0, 1, p), 8, 1).unwrap().is_no());
        assert!(are_isomorphic(&el(1, 2, p), &el(1, 2, p), 8, 1).unwrap().is_yes());
    }
}
