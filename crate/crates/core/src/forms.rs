//! Sesquilinear forms on an (a,b)-module, stored as pairing matrices
//! `P_ij = H(e_i, ě_j)` with values in `E_0`.
//!
//! A compatible pairing satisfies `b²P' = AᵀP - P·A(-b)`. The form is the
//! same thing as a morphism `E -> Ě*` with matrix `Pᵀ`.

use crate::error::{Error, Result};
use crate::hom::{are_isomorphic, find_invertible_combination, solve_hom, ABMorphism, CombinationSearch, IsoVerdict};
use crate::linalg::ScalarMatrix;
use crate::matrix::BMatrix;
use crate::module::{ABModule, Element};
use crate::scalar::Scalar;
use crate::series::BSeries;
use crate::structure::krull_schmidt;

#[derive(Clone, Debug, PartialEq)]
pub struct SesquilinearForm {
    pub module: ABModule,
    pub pairing: BMatrix,
}

/// Parity of a pairing under `P ↦ P(-b)ᵀ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormType {
    Hermitian,
    Antihermitian,
    Neither,
}

impl FormType {
    pub fn name(self) -> &'static str {
        match self {
            FormType::Hermitian => "hermitian",
            FormType::Antihermitian => "antihermitian",
            FormType::Neither => "neither",
        }
    }
}

impl SesquilinearForm {
    /// Builds a form, truncating module and pairing to their common precision.
    pub fn new(module: ABModule, pairing: BMatrix) -> Result<Self> {
        let n = module.rank();
        if pairing.rows() != n || pairing.cols() != n {
            return Err(Error::DimensionMismatch(format!(
                "pairing is {}x{} on a module of rank {n}",
                pairing.rows(),
                pairing.cols()
            )));
        }
        let p = module.precision().min(pairing.precision());
        Ok(SesquilinearForm {
            module: module.truncate(p),
            pairing: pairing.truncate(p),
        })
    }

    /// A compatible form, or the first coefficient where compatibility fails.
    pub fn checked(module: ABModule, pairing: BMatrix) -> Result<Self> {
        let h = Self::new(module, pairing)?;
        match h.first_defect() {
            None => Ok(h),
            Some((row, col, order)) => Err(Error::NotCompatible { row, col, order }),
        }
    }

    pub fn zero(module: &ABModule) -> Self {
        let n = module.rank();
        SesquilinearForm {
            module: module.clone(),
            pairing: BMatrix::zeros(n, n, module.precision()),
        }
    }

    pub fn precision(&self) -> usize {
        self.pairing.precision()
    }

    /// `b²P' - AᵀP + P·A(-b)`, known modulo `b^{N-1}`.
    pub fn compatibility_defect(&self) -> BMatrix {
        let a = self.module.a_matrix();
        let p = &self.pairing;
        let lhs = p.b2_derivative();
        let rhs = a.transpose().mul(p).sub(&p.mul(&a.conjugate()));
        lhs.sub(&rhs).truncate(self.precision().saturating_sub(1))
    }

    fn first_defect(&self) -> Option<(usize, usize, usize)> {
        let d = self.compatibility_defect();
        let n = d.rows();
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..n {
            for j in 0..n {
                if let Some(v) = d.get(i, j).valuation() {
                    if best.is_none_or(|(_, _, o)| v < o) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        best
    }

    pub fn is_compatible(&self) -> bool {
        self.compatibility_defect().is_zero()
    }

    /// `H(x, y)` for `x` in `E` and `y` in `Ě`, both in their own coordinates.
    pub fn evaluate(&self, x: &Element, y: &Element) -> BSeries {
        let py = self.pairing.mul_vec(&y.coords);
        let p = self.precision();
        x.coords
            .iter()
            .zip(&py)
            .fold(BSeries::zero(p), |acc, (u, v)| &acc + &(u * v))
    }

    /// Checks `a·H(x,y) = H(ax,y) + H(x,ay)` on basis pairs through `a_apply`
    /// on `E` and on `Ě`, with `a` acting on `E_0` as `b²d/db`.
    pub fn compatible_by_evaluation(&self) -> bool {
        let e = &self.module;
        let conj = e.conjugate();
        let n = e.rank();
        let p = self.precision();
        let q = p.saturating_sub(1);
        for i in 0..n {
            let x = Element::basis(n, i, p);
            let ax = e.a_apply_coords(&x.coords);
            for j in 0..n {
                let y = Element::basis(n, j, p);
                let ay = conj.a_apply_coords(&y.coords);
                let lhs = self.evaluate(&x, &y).derivative().shift_up(2);
                let rhs = &self.evaluate(&Element::new(ax.clone()), &y) + &self.evaluate(&x, &Element::new(ay));
                if !lhs.truncate(q).eq_at(&rhs.truncate(q)) {
                    return false;
                }
            }
        }
        true
    }

    /// `P(-b)ᵀ`.
    pub fn conjugate_transpose(&self) -> Self {
        SesquilinearForm {
            module: self.module.clone(),
            pairing: self.pairing.conjugate().transpose(),
        }
    }

    pub fn hermitian_type(&self) -> FormType {
        let c = self.conjugate_transpose().pairing;
        if self.pairing.eq_at(&c) {
            FormType::Hermitian
        } else if self.pairing.eq_at(&c.neg()) {
            FormType::Antihermitian
        } else {
            FormType::Neither
        }
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.pairing.constant_term().det().is_zero()
    }

    /// `(P + P(-b)ᵀ)/2` and `(P - P(-b)ᵀ)/2`.
    pub fn split_parity(&self) -> (Self, Self) {
        let c = self.conjugate_transpose().pairing;
        let half = Scalar::ratio(1, 2);
        let plus = self.pairing.add(&c).scale(&half);
        let minus = self.pairing.sub(&c).scale(&half);
        (
            SesquilinearForm {
                module: self.module.clone(),
                pairing: plus,
            },
            SesquilinearForm {
                module: self.module.clone(),
                pairing: minus,
            },
        )
    }
}

/// The morphism `E -> Ě*` attached to a compatible form.
pub fn curry(h: &SesquilinearForm) -> Result<ABMorphism> {
    if let Some((row, col, order)) = h.first_defect() {
        return Err(Error::NotCompatible { row, col, order });
    }
    ABMorphism::new(h.module.clone(), h.module.adjoint(), h.pairing.transpose())
}

/// Inverse of [`curry`].
pub fn uncurry(f: &ABMorphism) -> Result<SesquilinearForm> {
    let p = f.precision();
    if !f
        .codomain()
        .truncate(p)
        .same_presentation(&f.domain().adjoint().truncate(p))
    {
        return Err(Error::WrongCodomain("expected the adjoint of the domain".into()));
    }
    SesquilinearForm::new(f.domain().clone(), f.matrix().transpose())
}

/// Swap pairing on `G ⊕ Ǧ*`.
pub fn hyperbolic_form(g: &ABModule) -> Result<SesquilinearForm> {
    let n = g.rank();
    let p = g.precision();
    let m = g.direct_sum(&g.adjoint())?;
    let pairing = BMatrix::from_fn(2 * n, 2 * n, p, |i, j| {
        if (i < n && j == i + n) || (i >= n && j + n == i) {
            BSeries::one(p)
        } else {
            BSeries::zero(p)
        }
    });
    SesquilinearForm::checked(m, pairing)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictKind {
    Hermitian,
    Antihermitian,
    Both,
    Neither,
}

impl VerdictKind {
    pub fn name(self) -> &'static str {
        match self {
            VerdictKind::Hermitian => "hermitian",
            VerdictKind::Antihermitian => "antihermitian",
            VerdictKind::Both => "both",
            VerdictKind::Neither => "neither",
        }
    }
}

#[derive(Clone, Debug)]
pub struct FormVerdict {
    pub kind: VerdictKind,
    pub hermitian: Option<SesquilinearForm>,
    pub antihermitian: Option<SesquilinearForm>,
    /// Both absences were proved and the form space is stable.
    pub certified: bool,
    pub precision: usize,
    pub notes: Vec<String>,
}

/// Which parities carry a nondegenerate compatible form.
///
/// The space of forms is `Hom(E, Ě*)` transposed. It splits into hermitian
/// and antihermitian parts under `P ↦ P(-b)ᵀ`; each part is searched for an
/// element with invertible constant term.
pub fn hermitianize(e: &ABModule, trials: usize, seed: u64) -> Result<FormVerdict> {
    let hom = solve_hom(e, &e.adjoint())?;
    let p = hom.precision;
    let ep = e.truncate(p);
    let forms: Vec<SesquilinearForm> = hom.morphisms.iter().map(uncurry).collect::<Result<_>>()?;
    let mut notes = Vec::new();
    let mut certified = hom.stable;
    if !hom.stable {
        notes.push(format!("form space not certified stable at precision {p}"));
    }
    let all: Vec<ScalarMatrix> = forms.iter().map(|f| f.pairing.constant_term()).collect();
    let (plus, minus): (Vec<_>, Vec<_>) = forms.iter().map(SesquilinearForm::split_parity).unzip();
    let mut search = |parts: &[SesquilinearForm], label: &str| -> Option<SesquilinearForm> {
        let cs: Vec<ScalarMatrix> = parts.iter().map(|f| f.pairing.constant_term()).collect();
        match find_invertible_combination(&cs, trials, seed) {
            CombinationSearch::Found(t) => {
                let mut acc = BMatrix::zeros(e.rank(), e.rank(), p);
                for (f, &c) in parts.iter().zip(&t) {
                    if c != 0 {
                        acc = acc.add(&f.pairing.scale(&Scalar::from_int(c)));
                    }
                }
                Some(SesquilinearForm {
                    module: ep.clone(),
                    pairing: acc,
                })
            }
            CombinationSearch::Absent => None,
            CombinationSearch::Unknown => {
                certified = false;
                notes.push(format!("{label} search inconclusive after {trials} trials"));
                None
            }
        }
    };
    let herm = search(&plus, "hermitian");
    let anti = search(&minus, "antihermitian");
    let kind = match (&herm, &anti) {
        (Some(_), Some(_)) => VerdictKind::Both,
        (Some(_), None) => VerdictKind::Hermitian,
        (None, Some(_)) => VerdictKind::Antihermitian,
        (None, None) => match find_invertible_combination(&all, trials, seed) {
            CombinationSearch::Absent => return Err(Error::NotSelfAdjoint),
            CombinationSearch::Unknown => {
                return Err(Error::Inconclusive("no nondegenerate form found".into()));
            }
            CombinationSearch::Found(_) => VerdictKind::Neither,
        },
    };
    Ok(FormVerdict {
        kind,
        hermitian: herm,
        antihermitian: anti,
        certified,
        precision: p,
        notes,
    })
}

/// A self-adjoint indecomposable class with its form verdict.
#[derive(Clone, Debug)]
pub struct SelfAdjointFactor {
    pub class: usize,
    pub multiplicity: usize,
    pub verdict: std::result::Result<FormVerdict, String>,
}

/// Two classes exchanged by the adjoint.
#[derive(Clone, Debug)]
pub struct AdjointPair {
    pub class: usize,
    pub adjoint_class: usize,
    pub multiplicity: usize,
    pub adjoint_multiplicity: usize,
}

#[derive(Clone, Debug)]
pub struct SelfAdjointReport {
    pub decomposition: crate::structure::DecompositionReport,
    pub self_adjoint: Vec<SelfAdjointFactor>,
    pub pairs: Vec<AdjointPair>,
    /// Classes whose adjoint does not occur in the decomposition.
    pub unmatched: Vec<usize>,
    /// Multiplicities of paired classes agree and nothing is unmatched.
    pub module_is_self_adjoint: bool,
    pub certified: bool,
    pub notes: Vec<String>,
}

pub fn classify_self_adjoint(e: &ABModule, trials: usize, seed: u64) -> Result<SelfAdjointReport> {
    let ks = krull_schmidt(e, trials, seed)?;
    let mut certified = ks.certified;
    let mut notes = ks.notes.clone();
    let k = ks.factors.len();
    let mut partner: Vec<Option<usize>> = vec![None; k];
    for (i, factor) in ks.factors.iter().enumerate() {
        let adj = factor.module.adjoint();
        for j in 0..k {
            if ks.factors[j].module.rank() != adj.rank() {
                continue;
            }
            let target = ks.factors[j].module.truncate(adj.precision());
            match are_isomorphic(&adj.truncate(target.precision()), &target, trials, seed)? {
                IsoVerdict::Yes(_) => {
                    partner[i] = Some(j);
                    break;
                }
                IsoVerdict::No { certified: c } => certified &= c,
                IsoVerdict::Inconclusive(msg) => {
                    certified = false;
                    notes.push(format!("adjoint of class {i} against class {j}: {msg}"));
                }
            }
        }
    }
    let mut self_adjoint = Vec::new();
    let mut pairs = Vec::new();
    let mut unmatched = Vec::new();
    let mut consistent = true;
    for (i, factor) in ks.factors.iter().enumerate() {
        let mult = factor.multiplicity;
        match partner[i] {
            Some(j) if j == i => self_adjoint.push(SelfAdjointFactor {
                class: i,
                multiplicity: mult,
                verdict: hermitianize(&factor.module, trials, seed).map_err(|e| e.to_string()),
            }),
            Some(j) => {
                if i < j {
                    let other = ks.factors[j].multiplicity;
                    consistent &= mult == other;
                    pairs.push(AdjointPair {
                        class: i,
                        adjoint_class: j,
                        multiplicity: mult,
                        adjoint_multiplicity: other,
                    });
                }
            }
            None => unmatched.push(i),
        }
    }
    Ok(SelfAdjointReport {
        module_is_self_adjoint: consistent && unmatched.is_empty(),
        decomposition: ks,
        self_adjoint,
        pairs,
        unmatched,
        certified,
        notes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(n: i64, d: i64, p: usize) -> ABModule {
        ABModule::elementary(&Scalar::ratio(n, d), p)
    }

    #[test]
    fn unit_form_on_e0() {
        let e = el(0, 1, 8);
        let h = SesquilinearForm::checked(e.clone(), BMatrix::identity(1, 8)).unwrap();
        assert!(h.compatible_by_evaluation());
        assert_eq!(h.hermitian_type(), FormType::Hermitian);
        let f = curry(&h).unwrap();
        assert!(f.verify());
        assert_eq!(uncurry(&f).unwrap(), h);
    }

    #[test]
    fn degenerate_form_on_half() {
        let e = el(1, 2, 8);
        let p = BMatrix::from_int_polys(&[&[&[0, 1]]], 8);
        let h = SesquilinearForm::checked(e, p).unwrap();
        assert!(!h.is_nondegenerate());
        assert_eq!(h.hermitian_type(), FormType::Antihermitian);
    }

    #[test]
    fn corrupted_form_fails_both_checks() {
        let e = el(0, 1, 8);
        let h = SesquilinearForm::new(e, BMatrix::from_int_polys(&[&[&[1, 1]]], 8)).unwrap();
        assert!(!h.is_compatible());
        assert!(!h.compatible_by_evaluation());
        assert!(matches!(curry(&h), Err(Error::NotCompatible { order: 2, .. })));
    }

    #[test]
    fn hyperbolic_is_hermitian() {
        let h = hyperbolic_form(&el(1, 1, 8)).unwrap();
        assert!(h.is_nondegenerate());
        assert!(h.compatible_by_evaluation());
        assert_eq!(h.hermitian_type(), FormType::Hermitian);
    }

    #[test]
    fn elementary_with_nonzero_exponent_is_not_self_adjoint() {
        assert!(matches!(hermitianize(&el(1, 1, 8), 8, 0), Err(Error::NotSelfAdjoint)));
    }
}
