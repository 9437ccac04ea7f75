//! Structure theory: Smith normal form over the truncated series ring,
//! saturation and regularity, monomials and exponents, quotients,
//! composition series, Fitting splitting and Krull-Schmidt decomposition.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::hom::{are_isomorphic, solve_hom, ABMorphism, IsoVerdict};
use crate::linalg::{independent_subset, ScalarMatrix, ScalarPoly};
use crate::matrix::BMatrix;
use crate::module::{ABModule, Element};
use crate::scalar::Scalar;
use crate::series::BSeries;

/// `U · M · V = D` with `U`, `V` invertible and `D` diagonal with entries `b^k`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: BMatrix,
    pub d: BMatrix,
    pub v: BMatrix,
    /// Valuation of each diagonal entry; `None` when it vanishes at the working precision.
    pub diagonal: Vec<Option<usize>>,
}

impl Snf {
    /// Number of unit diagonal entries.
    pub fn unit_rank(&self) -> usize {
        self.diagonal.iter().filter(|d| **d == Some(0)).count()
    }

    /// True when every diagonal entry is a unit or zero (no proper powers of `b`).
    pub fn is_clean(&self) -> bool {
        self.diagonal.iter().all(|d| matches!(d, Some(0) | None))
    }
}

type Rows = Vec<Vec<BSeries>>;

fn to_rows(m: &BMatrix) -> Rows {
    (0..m.rows()).map(|i| m.row(i)).collect()
}

fn identity_rows(n: usize, p: usize) -> Rows {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BSeries::one(p) } else { BSeries::zero(p) })
                .collect()
        })
        .collect()
}

fn from_rows(rows: &Rows, cols: usize, p: usize) -> BMatrix {
    BMatrix::from_fn(rows.len(), cols, p, |i, j| rows[i][j].clone())
}

/// `row_i -= q * row_t`.
fn row_axpy(rows: &mut Rows, i: usize, t: usize, q: &BSeries) {
    let src = rows[t].clone();
    for (x, y) in rows[i].iter_mut().zip(&src) {
        if !y.is_zero() {
            *x = &*x - &(q * y);
        }
    }
}

/// `col_j -= q * col_t`.
fn col_axpy(rows: &mut Rows, j: usize, t: usize, q: &BSeries) {
    for row in rows.iter_mut() {
        if !row[t].is_zero() {
            let d = q * &row[t];
            row[j] = &row[j] - &d;
        }
    }
}

/// Smith normal form over `C[[b]]/(b^N)`.
///
/// Pivots are chosen of minimal valuation, so every multiplier `q` used to
/// clear a row or column multiplies a vector divisible by the pivot's power of
/// `b`; the unknown tail of `q` therefore never reaches a known coefficient.
pub fn smith_normal_form(m: &BMatrix) -> Snf {
    let (r, c, p) = (m.rows(), m.cols(), m.precision());
    let mut a = to_rows(m);
    let mut u = identity_rows(r, p);
    let mut v = identity_rows(c, p);
    let mut diagonal = Vec::new();
    for t in 0..r.min(c) {
        let mut best: Option<(usize, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(t) {
            for (j, x) in row.iter().enumerate().skip(t) {
                if let Some(val) = x.valuation() {
                    if best.is_none_or(|(_, _, bv)| val < bv) {
                        best = Some((i, j, val));
                    }
                }
            }
        }
        let Some((i, j, val)) = best else {
            diagonal.extend(std::iter::repeat_n(None, r.min(c) - t));
            break;
        };
        a.swap(t, i);
        u.swap(t, i);
        for row in a.iter_mut() {
            row.swap(t, j);
        }
        for row in v.iter_mut() {
            row.swap(t, j);
        }
        let unit = a[t][t].shift_down(val).expect("valuation checked");
        let inv = unit.invert().expect("unit").assume_precision(p);
        for x in a[t].iter_mut().chain(u[t].iter_mut()) {
            *x = &*x * &inv;
        }
        a[t][t] = BSeries::monomial(Scalar::one(), val, p);
        for i2 in t + 1..r {
            if a[i2][t].is_zero() {
                continue;
            }
            let q = a[i2][t].shift_down(val).expect("minimal valuation").assume_precision(p);
            row_axpy(&mut a, i2, t, &q);
            row_axpy(&mut u, i2, t, &q);
            a[i2][t] = BSeries::zero(p);
        }
        for (j2, x) in a[t].iter_mut().enumerate().skip(t + 1) {
            if x.is_zero() {
                continue;
            }
            let q = x.shift_down(val).expect("minimal valuation").assume_precision(p);
            col_axpy(&mut v, j2, t, &q);
            *x = BSeries::zero(p);
        }
        diagonal.push(Some(val));
    }
    Snf {
        u: from_rows(&u, r, p),
        d: from_rows(&a, c, p),
        v: from_rows(&v, c, p),
        diagonal,
    }
}

/// A sub-(a,b)-module spanned by the columns of `generators`.
#[derive(Clone, Debug)]
pub struct Submodule {
    pub ambient: ABModule,
    pub generators: BMatrix,
    /// The quotient is free (all SNF diagonal entries of the generators are units).
    pub normal: bool,
    /// Exponent `λ` when the generators are monomials of type `(λ, 0)`.
    pub exponent: Option<Scalar>,
}

impl Submodule {
    pub fn rank(&self) -> usize {
        self.generators.cols()
    }

    pub fn generator(&self, j: usize) -> Element {
        Element::new(self.generators.column(j))
    }
}

fn is_normal_span(g: &BMatrix) -> bool {
    let snf = smith_normal_form(g);
    snf.diagonal.len() == g.cols() && snf.diagonal.iter().all(|d| *d == Some(0))
}

/// A monomial `x` with `a x = λ b x`.
#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub element: Element,
    pub exponent: Scalar,
}

/// Monomials of type `(λ, 0)`: images of the generator under `Hom(E_λ, E)`.
///
/// A solution of valuation `v > 0` is `b^v y` with `y` of type `(λ - v, 0)`;
/// such solutions are returned divided by `b^v` with the exponent lowered.
pub fn monomials_of_type(e: &ABModule, lambda: &Scalar) -> Result<Vec<Monomial>> {
    let el = ABModule::elementary(lambda, e.precision());
    let hom = solve_hom(&el, e)?;
    let mut out = Vec::new();
    for f in &hom.morphisms {
        let x = Element::new(f.matrix().column(0));
        let v = x.valuation().unwrap_or(0);
        let coords = x
            .coords
            .iter()
            .map(|c| c.shift_down(v).expect("valuation checked"))
            .collect();
        out.push(Monomial {
            element: Element::new(coords),
            exponent: lambda - &Scalar::from_int(v as i64),
        });
    }
    Ok(out)
}

/// Outcome of the saturation algorithm.
#[derive(Clone, Debug)]
pub enum Regularity {
    Regular(Saturation),
    NotRegular { steps: usize },
    Inconclusive(String),
}

/// The simple-pole lattice `b^{-shift} · span(lattice)` generated by `E` under `b^{-1} a`.
#[derive(Clone, Debug)]
pub struct Saturation {
    pub lattice: BMatrix,
    pub shift: usize,
    pub steps: usize,
    /// Presentation of the saturation in the basis given by the lattice columns;
    /// its constant term vanishes.
    pub presentation: ABModule,
}

impl Saturation {
    /// Residue matrix: the coefficient of `b` in the saturated presentation.
    pub fn residue(&self) -> ScalarMatrix {
        self.presentation.a_matrix().coeff_matrix(1)
    }
}

/// `A G + b^2 G' - s b G`: coordinates of `b^{s} a (b^{-s} G)`.
fn twisted_action(e: &ABModule, g: &BMatrix, s: usize) -> BMatrix {
    let p = g.precision();
    let ag = e.a_matrix().mul(g).add(&g.b2_derivative()).truncate(p);
    ag.sub(&g.shift_up(1).truncate(p).scale(&Scalar::from_int(s as i64)))
}

/// Iterates `L ← L + b^{-1} a L` starting from the module itself.
pub fn is_regular(e: &ABModule, max_steps: usize) -> Regularity {
    let n = e.rank();
    let p = e.precision();
    if n == 0 {
        return Regularity::Regular(Saturation {
            lattice: BMatrix::zeros(0, 0, p),
            shift: 0,
            steps: 0,
            presentation: e.clone(),
        });
    }
    let mut g = BMatrix::identity(n, p);
    let mut s = 0usize;
    let mut volume: i64 = 0;
    for step in 0..=max_steps {
        let x = g.shift_up(1).truncate(p).hstack(&twisted_action(e, &g, s));
        let snf = smith_normal_form(&x);
        if snf.diagonal.iter().any(Option::is_none) {
            return Regularity::Inconclusive(format!(
                "lattice generators lost rank at precision {p} after {step} steps"
            ));
        }
        let ks: Vec<usize> = snf.diagonal.iter().map(|d| d.unwrap()).collect();
        let kmin = *ks.iter().min().unwrap();
        let new_shift = (s + 1) as i64 - kmin as i64;
        let new_volume: i64 = ks.iter().map(|&k| (k - kmin) as i64).sum::<i64>() - n as i64 * new_shift;
        if new_volume == volume {
            // L + b^{-1} a L = L: read off the presentation on the lattice basis
            return match saturated_presentation(e, &g, s) {
                Ok(pres) => Regularity::Regular(Saturation {
                    lattice: g,
                    shift: s,
                    steps: step,
                    presentation: pres,
                }),
                Err(err) => Regularity::Inconclusive(err.to_string()),
            };
        }
        if new_shift < 0 {
            return Regularity::Inconclusive("lattice shrank below the module".into());
        }
        let u_inv = match snf.u.inverse() {
            Ok(m) => m,
            Err(err) => return Regularity::Inconclusive(err.to_string()),
        };
        let diag = BMatrix::from_fn(n, n, p, |i, j| {
            if i == j {
                BSeries::monomial(Scalar::one(), ks[i] - kmin, p)
            } else {
                BSeries::zero(p)
            }
        });
        g = u_inv.mul(&diag);
        s = new_shift as usize;
        volume = new_volume;
        if s >= p {
            return Regularity::Inconclusive(format!("saturation depth exceeds precision {p}"));
        }
    }
    Regularity::NotRegular { steps: max_steps }
}

/// Presentation of `b^{-s} span(G)` on the basis `b^{-s} G`.
fn saturated_presentation(e: &ABModule, g: &BMatrix, s: usize) -> Result<ABModule> {
    let n = e.rank();
    let snf = smith_normal_form(g);
    // G = U^{-1} D V^{-1}, so G^{-1} = V D^{-1} U
    let ks: Vec<usize> = snf
        .diagonal
        .iter()
        .map(|d| d.ok_or_else(|| Error::Inconclusive("degenerate lattice".into())))
        .collect::<Result<_>>()?;
    let y = snf.u.mul(&twisted_action(e, g, s));
    let kmax = ks.iter().copied().max().unwrap_or(0);
    let p = y.precision().saturating_sub(kmax);
    let mut rows = Vec::with_capacity(n);
    for (i, &k) in ks.iter().enumerate() {
        let row: Vec<BSeries> = y
            .row(i)
            .iter()
            .map(|x| {
                x.shift_down(k)
                    .map(|z| z.truncate(p))
                    .map_err(|_| Error::Inconclusive("lattice is not a-stable".into()))
            })
            .collect::<Result<_>>()?;
        rows.push(row);
    }
    let inner = BMatrix::from_fn(n, n, p, |i, j| rows[i][j].clone());
    let a = snf.v.truncate(p).mul(&inner);
    if !a.constant_term().is_zero() {
        return Err(Error::Inconclusive("saturated presentation has no simple pole".into()));
    }
    ABModule::from_matrix(a)
}

/// One class of exponents modulo `Z`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentClass {
    /// Representative with real part in `[0, 1)`.
    pub representative: Scalar,
    /// Eigenvalues of the saturation residue in this class, with multiplicity.
    pub residue_eigenvalues: Vec<Scalar>,
    /// Smallest exponent of a monomial in the class, if one exists within the horizon.
    pub minimum: Option<Scalar>,
    /// Exponents in the class with nonzero monomials, up to the horizon.
    pub exponents: Vec<Scalar>,
}

/// Exponents of monomials, grouped into classes modulo `Z`.
///
/// Every monomial lies in the simple-pole saturation, where a monomial of
/// type `λ` and valuation `v` forces `λ - v` to be an eigenvalue of the
/// residue. The search in each class therefore starts at the smallest residue
/// eigenvalue and proceeds by integer steps up to `horizon` steps.
pub fn candidate_exponents(e: &ABModule, horizon: usize) -> Result<Vec<ExponentClass>> {
    let sat = match is_regular(e, e.rank() * e.precision()) {
        Regularity::Regular(s) => s,
        Regularity::NotRegular { .. } => {
            return Err(Error::Inconclusive("module is not regular".into()));
        }
        Regularity::Inconclusive(msg) => return Err(Error::Inconclusive(msg)),
    };
    let chi = sat.residue().char_poly();
    let (roots, rest) = chi.gaussian_rational_roots();
    if rest > 0 {
        return Err(Error::NonRationalExponent(format!("{chi:?}")));
    }
    let mut classes: Vec<ExponentClass> = Vec::new();
    for r in &roots {
        let mult = chi.root_multiplicity(r);
        let rep = r.reduce_mod_z();
        match classes.iter_mut().find(|c| c.representative == rep) {
            Some(c) => c.residue_eigenvalues.extend(std::iter::repeat_n(r.clone(), mult)),
            None => classes.push(ExponentClass {
                representative: rep,
                residue_eigenvalues: vec![r.clone(); mult],
                minimum: None,
                exponents: Vec::new(),
            }),
        }
    }
    classes.sort_by(|a, b| a.representative.lex_cmp(&b.representative));
    for class in classes.iter_mut() {
        class.residue_eigenvalues.sort_by(|a, b| a.lex_cmp(b));
        let start = class.residue_eigenvalues[0].clone();
        for j in 0..=horizon {
            let lambda = &start + &Scalar::from_int(j as i64);
            let monos = monomials_of_type(e, &lambda)?;
            if monos.is_empty() {
                continue;
            }
            if class.minimum.is_none() {
                class.minimum = Some(lambda.clone());
            }
            class.exponents.push(lambda);
        }
    }
    Ok(classes)
}

/// Span of the monomials at the minimal exponent of the first class.
pub fn v_lambda_min(e: &ABModule) -> Result<Submodule> {
    let classes = candidate_exponents(e, e.precision() / 2)?;
    let lambda = classes
        .iter()
        .find_map(|c| c.minimum.clone())
        .ok_or_else(|| Error::Inconclusive("no monomial found within the precision horizon".into()))?;
    let el = ABModule::elementary(&lambda, e.precision());
    let hom = solve_hom(&el, e)?;
    let cols: Vec<Vec<BSeries>> = hom.morphisms.iter().map(|f| f.matrix().column(0)).collect();
    let g = BMatrix::from_columns(e.rank(), &cols, hom.precision);
    let normal = is_normal_span(&g);
    Ok(Submodule {
        ambient: e.clone(),
        generators: g,
        normal,
        exponent: Some(lambda),
    })
}

/// Whether the constant terms of the generators are linearly independent, so
/// that every monomial in the span has constant coordinates on the generators.
pub fn has_constant_transition(s: &Submodule) -> bool {
    let consts: Vec<Vec<Scalar>> = (0..s.rank())
        .map(|j| s.generators.column(j).iter().map(BSeries::constant_term).collect())
        .collect();
    independent_subset(&consts).len() == s.rank()
}

/// Quotient `E / S` together with the projection `E -> E/S`.
pub fn quotient(e: &ABModule, s: &Submodule) -> Result<(ABModule, ABMorphism)> {
    let g = &s.generators;
    let p = g.precision().min(e.precision());
    let d = g.cols();
    let n = e.rank();
    let snf = smith_normal_form(&g.truncate(p));
    if snf.diagonal.len() != d || snf.diagonal.iter().any(|x| *x != Some(0)) {
        return Err(Error::NotNormal);
    }
    let ep = e.truncate(p);
    let t = snf.u.inverse()?;
    let changed = ep.base_change(&t)?;
    let a = changed.a_matrix();
    if !a.block(d, n, 0, d).is_zero() {
        return Err(Error::Inconclusive(
            "submodule is not a-stable at this precision".into(),
        ));
    }
    let labels = ep.labels()[..n - d].iter().map(|l| format!("{l}_q")).collect();
    let q = ABModule::new(a.block(d, n, d, n), labels)?;
    let proj = ABMorphism::new(ep, q.clone(), snf.u.block(d, n, 0, n))?;
    Ok((q, proj))
}

/// One step of a composition series.
#[derive(Clone, Debug)]
pub struct CompositionStep {
    pub exponent: Scalar,
    /// Primitive monomial generating the elementary sub, in the coordinates of the current quotient.
    pub monomial: Element,
    /// Precision at which the step was computed.
    pub precision: usize,
}

/// Exponents of the elementary quotients of a composition series.
pub fn composition_series(e: &ABModule) -> Result<Vec<CompositionStep>> {
    let mut steps = Vec::new();
    let mut current = e.clone();
    while current.rank() > 0 {
        if current.precision() < 2 {
            return Err(Error::Inconclusive(format!(
                "precision exhausted after {} steps",
                steps.len()
            )));
        }
        let v = v_lambda_min(&current)?;
        let lambda = v.exponent.clone().expect("exponent set");
        if v.rank() == 0 {
            return Err(Error::Inconclusive(
                "no primitive monomial at the minimal exponent".into(),
            ));
        }
        let x = v.generators.block(0, current.rank(), 0, 1);
        let line = Submodule {
            ambient: current.clone(),
            generators: x.clone(),
            normal: is_normal_span(&x),
            exponent: Some(lambda.clone()),
        };
        let (q, _) = quotient(&current, &line)?;
        steps.push(CompositionStep {
            exponent: lambda,
            monomial: Element::new(x.column(0)),
            precision: x.precision(),
        });
        current = q;
    }
    Ok(steps)
}

/// `E = Im φ^m ⊕ Ker φ^m` for an endomorphism `φ`.
#[derive(Clone, Debug)]
pub struct FittingSplit {
    pub m: usize,
    /// Columns: a basis of the image part, then of the kernel part.
    pub transform: BMatrix,
    pub image_rank: usize,
    pub image: ABModule,
    pub kernel: ABModule,
    /// `T^{-1} φ T`, block diagonal.
    pub phi_blocks: BMatrix,
    pub a_stable: bool,
    pub bijective_on_image: bool,
    pub nilpotent_on_kernel: bool,
}

impl FittingSplit {
    pub fn verified(&self) -> bool {
        self.a_stable && self.bijective_on_image && self.nilpotent_on_kernel
    }
}

fn off_diagonal_zero(m: &BMatrix, r: usize) -> bool {
    let n = m.rows();
    m.block(0, r, r, n).is_zero() && m.block(r, n, 0, r).is_zero()
}

pub fn fitting_split(e: &ABModule, phi: &ABMorphism) -> Result<FittingSplit> {
    if phi.domain() != e || phi.codomain() != e {
        return Err(Error::NotEndomorphism);
    }
    let n = e.rank();
    let p = phi.precision();
    let ep = e.truncate(p);
    let mut chosen = None;
    let mut power = phi.matrix().clone();
    let mut prev: Option<(usize, Snf, BMatrix)> = None;
    for m in 1..=n + 1 {
        let snf = smith_normal_form(&power);
        if let Some((pm, psnf, pmat)) = prev.take() {
            if psnf.is_clean() && snf.is_clean() && psnf.unit_rank() == snf.unit_rank() {
                chosen = Some((pm, psnf, pmat));
                break;
            }
        }
        prev = Some((m, snf, power.clone()));
        power = power.mul(phi.matrix());
    }
    let (m, snf, _) =
        chosen.ok_or_else(|| Error::Inconclusive("powers of the endomorphism do not stabilize".into()))?;
    let r = snf.unit_rank();
    let u_inv = snf.u.inverse()?;
    let t = u_inv.block(0, n, 0, r).hstack(&snf.v.block(0, n, r, n));
    if t.constant_term().det().is_zero() {
        return Err(Error::Inconclusive("image and kernel do not span the module".into()));
    }
    let changed = ep.base_change(&t)?;
    let a = changed.a_matrix().clone();
    let t_inv = t.inverse()?;
    let phi_blocks = t_inv.mul(phi.matrix()).mul(&t);
    let a_stable = off_diagonal_zero(&a, r) && off_diagonal_zero(&phi_blocks, r);
    let top = phi_blocks.block(0, r, 0, r);
    let bottom = phi_blocks.block(r, n, r, n);
    let bijective_on_image = r == 0 || !top.constant_term().det().is_zero();
    let nilpotent_on_kernel = bottom.pow(m.max(n - r)).is_zero();
    let labels = ep.labels();
    Ok(FittingSplit {
        m,
        transform: t,
        image_rank: r,
        image: ABModule::new(a.block(0, r, 0, r), labels[..r].to_vec())?,
        kernel: ABModule::new(a.block(r, n, r, n), labels[r..].to_vec())?,
        phi_blocks,
        a_stable,
        bijective_on_image,
        nilpotent_on_kernel,
    })
}

/// Behavior of an endomorphism at the working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EndoKind {
    Bijective,
    Nilpotent,
    Neither,
}

pub fn endomorphism_kind(phi: &ABMorphism) -> EndoKind {
    if phi.is_invertible() {
        EndoKind::Bijective
    } else if phi.matrix().pow(phi.domain().rank()).is_zero() {
        EndoKind::Nilpotent
    } else {
        EndoKind::Neither
    }
}

/// One isomorphism class of indecomposable summands.
#[derive(Clone, Debug)]
pub struct FactorClass {
    pub module: ABModule,
    pub multiplicity: usize,
    /// Indices into [`DecompositionReport::blocks`].
    pub blocks: Vec<usize>,
    /// The local-endomorphism-ring test succeeded for every member.
    pub certified_indecomposable: bool,
}

#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub blocks: Vec<ABModule>,
    pub factors: Vec<FactorClass>,
    /// Isomorphism from the block sum to the module (matrix `T`).
    pub witness: ABMorphism,
    pub precision: usize,
    /// All summands certified indecomposable, the endomorphism space stable and
    /// every grouping decided.
    pub certified: bool,
    pub notes: Vec<String>,
}

impl DecompositionReport {
    /// Ranks of the factor classes with multiplicities, sorted.
    pub fn rank_profile(&self) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> = self.factors.iter().map(|f| (f.module.rank(), f.multiplicity)).collect();
        v.sort();
        v
    }
}

/// Dimension of `span(cs) / radical`, the radical being the kernel of the trace form.
fn semisimple_dimension(cs: &[ScalarMatrix]) -> usize {
    let vecs: Vec<Vec<Scalar>> = cs.iter().map(|c| c.as_slice().to_vec()).collect();
    let idx = independent_subset(&vecs);
    let basis: Vec<&ScalarMatrix> = idx.iter().map(|&i| &cs[i]).collect();
    let gram = ScalarMatrix::from_fn(basis.len(), basis.len(), |i, j| basis[i].mul(basis[j]).trace());
    gram.rank()
}

/// `Σ c_k x^k` with `x^0` read as the corner unit `eps`.
fn corner_poly(poly: &ScalarPoly, x: &BMatrix, eps: &BMatrix) -> BMatrix {
    let mut acc = BMatrix::zeros(x.rows(), x.cols(), x.precision());
    let mut power = eps.clone();
    for c in poly.coeffs() {
        if !c.is_zero() {
            acc = acc.add(&power.scale(c));
        }
        power = power.mul(x);
    }
    acc
}

/// Coprime split `χ = f g` with both factors nonconstant, when one is visible over `Q(i)`.
fn coprime_split(chi: &ScalarPoly) -> Option<(ScalarPoly, ScalarPoly)> {
    let parts = chi.squarefree_decomposition();
    if parts.len() >= 2 {
        let (s, k) = &parts[0];
        let f = s.pow(*k);
        let g = chi.monic().exact_div(&f);
        return Some((f, g));
    }
    let (s, k) = parts.first()?;
    if s.degree()? < 2 {
        return None;
    }
    let (roots, _) = s.gaussian_rational_roots();
    let r = roots.first()?;
    let f = ScalarPoly::linear_root(r).pow(*k);
    let g = chi.monic().exact_div(&f);
    Some((f, g))
}

fn newton_idempotent(e: &BMatrix) -> BMatrix {
    let steps = (usize::BITS - e.precision().max(1).leading_zeros()) as usize + 2;
    let mut x = e.clone();
    let three = Scalar::from_int(3);
    let two = Scalar::from_int(2);
    for _ in 0..steps {
        let x2 = x.mul(&x);
        let x3 = x2.mul(&x);
        let next = x2.scale(&three).sub(&x3.scale(&two));
        if next.eq_at(&x) {
            break;
        }
        x = next;
    }
    x
}

/// Tries to split the corner idempotent `eps` using the element `x = eps φ eps`.
fn split_with(x: &BMatrix, eps: &BMatrix, corner_rank: usize) -> Option<BMatrix> {
    let n = x.rows();
    let chi_full = x.constant_term().char_poly();
    let t = ScalarPoly::new(vec![Scalar::zero(), Scalar::one()]);
    let chi = chi_full.exact_div(&t.pow(n - corner_rank));
    let (f, g) = coprime_split(&chi)?;
    let (_, _, v) = f.ext_gcd(&g);
    let proj = v.mul(&g).div_rem(&chi.monic()).1;
    let e1 = newton_idempotent(&corner_poly(&proj, x, eps));
    let r1 = e1.constant_term().rank();
    if r1 == 0 || r1 >= corner_rank || !e1.mul(&e1).eq_at(&e1) {
        return None;
    }
    Some(e1)
}

/// Krull-Schmidt decomposition through idempotents of the endomorphism ring.
///
/// `End(E)` is computed once. Starting from the identity, each idempotent `ε`
/// is tested for locality of its corner ring `ε End ε` (semisimple quotient of
/// the constant-term algebra of dimension one); otherwise an element of the
/// corner with a coprime factorization of its characteristic polynomial gives
/// a spectral projector, lifted to an exact idempotent by `e ← 3e² - 2e³`.
pub fn krull_schmidt(e: &ABModule, trials: usize, seed: u64) -> Result<DecompositionReport> {
    let n = e.rank();
    let end = solve_hom(e, e)?;
    let p = end.precision;
    let ep = e.truncate(p);
    let mut notes = Vec::new();
    let mut certified = end.stable;
    if !end.stable {
        notes.push(format!("endomorphism space not certified stable at precision {p}"));
    }
    let basis: Vec<BMatrix> = end.morphisms.iter().map(|f| f.matrix().clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut pending = vec![BMatrix::identity(n, p)];
    let mut primitive: Vec<(BMatrix, bool)> = Vec::new();
    while let Some(eps) = pending.pop() {
        let e0 = eps.constant_term();
        let r = e0.rank();
        if r <= 1 {
            primitive.push((eps, true));
            continue;
        }
        let corner: Vec<BMatrix> = basis.iter().map(|m| eps.mul(m).mul(&eps)).collect();
        let consts: Vec<ScalarMatrix> = corner.iter().map(BMatrix::constant_term).collect();
        if semisimple_dimension(&consts) == 1 {
            primitive.push((eps, true));
            continue;
        }
        let mut candidates: Vec<BMatrix> = corner.clone();
        for i in 0..corner.len() {
            for j in i + 1..corner.len() {
                candidates.push(corner[i].add(&corner[j]));
            }
        }
        let mut split = None;
        for x in candidates.iter() {
            if let Some(e1) = split_with(x, &eps, r) {
                split = Some(e1);
                break;
            }
        }
        if split.is_none() {
            for _ in 0..trials {
                let mut x = BMatrix::zeros(n, n, p);
                for c in &corner {
                    let t: i64 = rng.gen_range(-3..=3);
                    if t != 0 {
                        x = x.add(&c.scale(&Scalar::from_int(t)));
                    }
                }
                if let Some(e1) = split_with(&x, &eps, r) {
                    split = Some(e1);
                    break;
                }
            }
        }
        match split {
            Some(e1) => {
                let e2 = eps.sub(&e1);
                pending.push(e2);
                pending.push(e1);
            }
            None => {
                notes.push(format!(
                    "no splitting idempotent found for a summand of rank {r} in {trials} trials"
                ));
                certified = false;
                primitive.push((eps, false));
            }
        }
    }
    if primitive.len() == 1 {
        // indecomposable: no base change, so nothing is lost to the End precision
        let local = primitive[0].1;
        return Ok(DecompositionReport {
            blocks: vec![e.clone()],
            factors: vec![FactorClass {
                module: e.clone(),
                multiplicity: 1,
                blocks: vec![0],
                certified_indecomposable: local,
            }],
            witness: ABMorphism::identity(e),
            precision: e.precision(),
            certified: certified && local,
            notes,
        });
    }
    let mut columns = Vec::new();
    let mut sizes = Vec::new();
    let mut local_flags = Vec::new();
    for (eps, local) in &primitive {
        let snf = smith_normal_form(eps);
        let r = snf.unit_rank();
        let u_inv = snf.u.inverse()?;
        columns.push(u_inv.block(0, n, 0, r));
        sizes.push(r);
        local_flags.push(*local);
    }
    let mut t = columns[0].clone();
    for c in &columns[1..] {
        t = t.hstack(c);
    }
    if t.constant_term().det().is_zero() {
        return Err(Error::Inconclusive("idempotent images do not span the module".into()));
    }
    let changed = ep.base_change(&t)?;
    let a = changed.a_matrix();
    let mut blocks = Vec::new();
    let mut offset = 0;
    for &r in &sizes {
        let off_rows = a.block(offset, offset + r, 0, n);
        for j in 0..n {
            if (j < offset || j >= offset + r) && !off_rows.column(j).iter().all(BSeries::is_zero) {
                return Err(Error::Inconclusive("summands are not a-stable".into()));
            }
        }
        blocks.push(ABModule::new(
            a.block(offset, offset + r, offset, offset + r),
            (1..=r).map(|i| format!("f{}_{i}", blocks.len() + 1)).collect(),
        )?);
        offset += r;
    }
    let mut factors: Vec<FactorClass> = Vec::new();
    for (idx, blk) in blocks.iter().enumerate() {
        let mut placed = false;
        for class in factors.iter_mut() {
            if class.module.rank() != blk.rank() {
                continue;
            }
            match are_isomorphic(blk, &class.module, trials, seed)? {
                IsoVerdict::Yes(_) => {
                    class.multiplicity += 1;
                    class.blocks.push(idx);
                    class.certified_indecomposable &= local_flags[idx];
                    placed = true;
                    break;
                }
                IsoVerdict::No { certified: c } => {
                    if !c {
                        certified = false;
                    }
                }
                IsoVerdict::Inconclusive(msg) => {
                    certified = false;
                    notes.push(format!("grouping of summand {idx}: {msg}"));
                }
            }
        }
        if !placed {
            factors.push(FactorClass {
                module: blk.clone(),
                multiplicity: 1,
                blocks: vec![idx],
                certified_indecomposable: local_flags[idx],
            });
        }
    }
    certified &= local_flags.iter().all(|&f| f);
    let witness = ABMorphism::new(changed.clone(), ep, t)?;
    Ok(DecompositionReport {
        blocks,
        factors,
        witness,
        precision: p,
        certified,
        notes,
    })
}
