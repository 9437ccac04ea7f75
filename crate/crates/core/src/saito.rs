//! Higher residue pairings read off a duality isomorphism `Δ: E -> Ě* ⊗ E_δ`.
//!
//! With `S = mat(Δ)`, the pairing of `x ∈ Ě` (coordinates `u`) against
//! `y ∈ E` (coordinates `v`) is the series `uᵀ S v = c Σ_k Δ_k(x,y) b^k`
//! where `c` is the normalization. In the first slot `b` and `a` act as in
//! `Ě`. In the second slot they act through the conjugate structure:
//! `b` as `-b` and `a` as `-(Av + b²v')`.

use crate::error::{Error, Result};
use crate::forms::SesquilinearForm;
use crate::hom::{are_isomorphic, find_invertible_combination, solve_hom, ABMorphism, CombinationSearch, IsoVerdict};
use crate::linalg::ScalarMatrix;
use crate::matrix::BMatrix;
use crate::module::ABModule;
use crate::scalar::Scalar;
use crate::series::BSeries;

#[derive(Clone, Debug, PartialEq)]
pub struct PairingFamily {
    pub delta: Scalar,
    pub normalization: Scalar,
    pub s: BMatrix,
}

/// `δ!` for a positive integer `δ`, otherwise `1`.
pub fn default_normalization(delta: &Scalar) -> Scalar {
    match delta.as_integer() {
        Some(d) if d > 0 => (1..=d).fold(Scalar::one(), |acc, k| &acc * &Scalar::from_int(k)),
        _ => Scalar::one(),
    }
}

impl PairingFamily {
    pub fn new(delta: Scalar, normalization: Scalar, s: BMatrix) -> Result<Self> {
        if normalization.is_zero() {
            return Err(Error::ZeroNormalization);
        }
        if !s.is_square() {
            return Err(Error::DimensionMismatch(format!("S is {}x{}", s.rows(), s.cols())));
        }
        Ok(PairingFamily {
            delta,
            normalization,
            s,
        })
    }

    pub fn rank(&self) -> usize {
        self.s.rows()
    }

    pub fn precision(&self) -> usize {
        self.s.precision()
    }

    /// `Δ_k`, zero from the precision on.
    pub fn level(&self, k: usize) -> ScalarMatrix {
        let inv = self.normalization.inv().expect("nonzero normalization");
        self.s.coeff_matrix(k).scale(&inv)
    }

    pub fn levels(&self) -> Vec<ScalarMatrix> {
        (0..self.precision()).map(|k| self.level(k)).collect()
    }

    /// The series `uᵀ S v`.
    fn pair(&self, u: &[BSeries], v: &[BSeries]) -> BSeries {
        let sv = self.s.mul_vec(v);
        u.iter()
            .zip(&sv)
            .fold(BSeries::zero(self.precision()), |acc, (x, y)| &acc + &(x * y))
    }

    /// `Δ_k(x, y)` on coordinate vectors.
    pub fn value(&self, k: usize, u: &[BSeries], v: &[BSeries]) -> Scalar {
        let inv = self.normalization.inv().expect("nonzero normalization");
        &self.pair(u, v).coeff(k) * &inv
    }

    fn basis(&self, i: usize) -> Vec<BSeries> {
        let p = self.precision();
        (0..self.rank())
            .map(|j| if i == j { BSeries::one(p) } else { BSeries::zero(p) })
            .collect()
    }
}

/// Reads the family off a morphism into the δ-dual.
pub fn extract_pairings(delta_map: &ABMorphism, delta: &Scalar, normalization: &Scalar) -> Result<PairingFamily> {
    let e = delta_map.domain();
    let p = delta_map.precision();
    let expected = e.delta_dual(delta).truncate(p);
    if !delta_map.codomain().truncate(p).same_presentation(&expected) {
        return Err(Error::WrongCodomain(format!("expected the {delta}-dual of the domain")));
    }
    PairingFamily::new(delta.clone(), normalization.clone(), delta_map.matrix().clone())
}

/// First identity that failed, with the level and basis indices involved.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomFailure {
    pub k: usize,
    pub i: usize,
    pub j: usize,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AxiomReport {
    pub axiom: &'static str,
    pub passed: bool,
    /// Levels `k` below this bound were checked.
    pub checked_levels: usize,
    pub failure: Option<AxiomFailure>,
    pub note: Option<String>,
}

impl AxiomReport {
    fn new(axiom: &'static str, checked_levels: usize, failure: Option<AxiomFailure>) -> Self {
        AxiomReport {
            axiom,
            passed: failure.is_none(),
            checked_levels,
            failure,
            note: None,
        }
    }
}

/// `Δ_k(x,y) = Δ_{k+1}(bx,y)` and `Δ_k(x,y) = -Δ_{k+1}(x,by)` for `k < N-1`.
pub fn check_axiom_i(f: &PairingFamily) -> AxiomReport {
    let n = f.rank();
    let levels = f.precision().saturating_sub(1);
    for k in 0..levels {
        for i in 0..n {
            let u = f.basis(i);
            let bu: Vec<BSeries> = u.iter().map(|x| x.shift_up(1)).collect();
            for j in 0..n {
                let v = f.basis(j);
                // b acts on the second slot as -b
                let bv: Vec<BSeries> = v.iter().map(|x| -&x.shift_up(1)).collect();
                let base = f.value(k, &u, &v);
                let left = f.value(k + 1, &bu, &v);
                let right = -&f.value(k + 1, &u, &bv);
                if base != left || base != right {
                    let detail = format!("Δ_k(x,y) = {base}, Δ_(k+1)(bx,y) = {left}, -Δ_(k+1)(x,by) = {right}");
                    return AxiomReport::new("i", levels, Some(AxiomFailure { k, i, j, detail }));
                }
            }
        }
    }
    AxiomReport::new("i", levels, None)
}

/// `Δ_k(ax,y) - Δ_k(x,ay) = (δ-1+k) Δ_{k-1}(x,y)` on basis pairs.
pub fn check_axiom_ii(f: &PairingFamily, e: &ABModule) -> AxiomReport {
    let n = f.rank();
    let p = f.precision().min(e.precision());
    if e.rank() != n {
        return AxiomReport {
            note: Some(format!("module of rank {} does not match the family", e.rank())),
            ..AxiomReport::new(
                "ii",
                0,
                Some(AxiomFailure {
                    k: 0,
                    i: 0,
                    j: 0,
                    detail: "rank mismatch".into(),
                }),
            )
        };
    }
    let conj = e.truncate(p).conjugate();
    let ep = e.truncate(p);
    let shift = &f.delta - &Scalar::one();
    for i in 0..n {
        let u = f.basis(i);
        let au = conj.a_apply_coords(&u);
        for j in 0..n {
            let v = f.basis(j);
            let av: Vec<BSeries> = ep.a_apply_coords(&v).iter().map(|x| -x).collect();
            for k in 0..p {
                let lhs = &f.value(k, &au, &v) - &f.value(k, &u, &av);
                let rhs = if k == 0 {
                    Scalar::zero()
                } else {
                    &(&shift + &Scalar::from_int(k as i64)) * &f.value(k - 1, &u, &v)
                };
                if lhs != rhs {
                    let detail = format!("Δ_k(ax,y) - Δ_k(x,ay) = {lhs}, (n+k)Δ_(k-1)(x,y) = {rhs}");
                    return AxiomReport::new("ii", p, Some(AxiomFailure { k, i, j, detail }));
                }
            }
        }
    }
    AxiomReport::new("ii", p, None)
}

/// `Δ_k(b^{k+1}x, y) = Δ_k(x, b^{k+1}y) = 0`; in particular `Δ_0` vanishes on `bD`.
pub fn check_axiom_iii_partial(f: &PairingFamily) -> AxiomReport {
    let n = f.rank();
    let levels = f.precision();
    let shift_report = check_axiom_i(f);
    let mut report = 'outer: {
        for k in 0..levels {
            for i in 0..n {
                let u = f.basis(i);
                let bu: Vec<BSeries> = u.iter().map(|x| x.shift_up(k + 1)).collect();
                for j in 0..n {
                    let v = f.basis(j);
                    let bv: Vec<BSeries> = v.iter().map(|x| x.shift_up(k + 1)).collect();
                    let l = f.value(k, &bu, &v);
                    let r = f.value(k, &u, &bv);
                    if !l.is_zero() || !r.is_zero() {
                        let detail = format!("Δ_k(b^(k+1)x,y) = {l}, Δ_k(x,b^(k+1)y) = {r}");
                        break 'outer AxiomReport::new("iii-partial", levels, Some(AxiomFailure { k, i, j, detail }));
                    }
                }
            }
        }
        AxiomReport::new("iii-partial", levels, None)
    };
    if report.passed && !shift_report.passed {
        report.passed = false;
        report.failure = shift_report.failure;
    }
    report.note = Some("comparison of Δ_0 with the residue pairing is not checked".into());
    report
}

/// `Δ_kᵀ = (-1)^k Δ_k`, equivalently `S(-b)ᵀ = S`.
pub fn check_axiom_iv(f: &PairingFamily) -> AxiomReport {
    let levels = f.precision();
    for k in 0..levels {
        let d = f.level(k);
        let target = if k % 2 == 0 {
            d.clone()
        } else {
            d.scale(&Scalar::from_int(-1))
        };
        let t = d.transpose();
        if t != target {
            let n = d.rows();
            let (i, j) = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .find(|&(i, j)| t.get(i, j) != target.get(i, j))
                .unwrap_or((0, 0));
            let detail = format!(
                "Δ_k({j},{i}) = {}, (-1)^k Δ_k({i},{j}) = {}",
                t.get(i, j),
                target.get(i, j)
            );
            return AxiomReport::new("iv", levels, Some(AxiomFailure { k, i, j, detail }));
        }
    }
    AxiomReport::new("iv", levels, None)
}

pub fn check_all(f: &PairingFamily, e: &ABModule) -> Vec<AxiomReport> {
    vec![
        check_axiom_i(f),
        check_axiom_ii(f, e),
        check_axiom_iii_partial(f),
        check_axiom_iv(f),
    ]
}

/// `(S + S(-b)ᵀ)/2`, the symmetrized isomorphism, and the axiom reports of its family.
#[derive(Clone, Debug)]
pub struct Symmetrization {
    pub morphism: ABMorphism,
    pub family: PairingFamily,
    pub reports: Vec<AxiomReport>,
    /// The input already satisfied `Δ_0ᵀ = Δ_0`, so the constant term is unchanged.
    pub constant_term_unchanged: bool,
}

pub fn symmetrize_delta(delta_map: &ABMorphism, delta: &Scalar, normalization: &Scalar) -> Result<Symmetrization> {
    let fam = extract_pairings(delta_map, delta, normalization)?;
    let s0 = fam.s.constant_term();
    if s0.det().is_zero() {
        return Err(Error::NotIsomorphism);
    }
    let phi = symmetric_part(&fam.s);
    if phi.constant_term().det().is_zero() {
        return Err(Error::DegenerateSymmetrization);
    }
    let morphism = ABMorphism::checked(delta_map.domain().clone(), delta_map.codomain().clone(), phi)?;
    let family = PairingFamily::new(delta.clone(), normalization.clone(), morphism.matrix().clone())?;
    let reports = check_all(&family, morphism.domain());
    Ok(Symmetrization {
        constant_term_unchanged: s0 == s0.transpose(),
        morphism,
        family,
        reports,
    })
}

/// `Δ ⊗ Id` on `E ⊗ E_{-δ/2}`, read as a sesquilinear form; hermitian exactly
/// when the family satisfies `S(-b)ᵀ = S`.
pub fn half_twist(delta_map: &ABMorphism, delta: &Scalar) -> Result<SesquilinearForm> {
    let e = delta_map.domain();
    let half = -&(delta * &Scalar::ratio(1, 2));
    let twisted = e.tensor(&ABModule::elementary(&half, e.precision()))?;
    SesquilinearForm::checked(twisted, delta_map.matrix().transpose())
}

fn symmetric_part(s: &BMatrix) -> BMatrix {
    s.add(&s.conjugate().transpose()).scale(&Scalar::ratio(1, 2))
}

/// An isomorphism `E -> Ě* ⊗ E_δ` found by the morphism solver.
///
/// The solver's witness is returned when its symmetric part is invertible.
/// Otherwise the symmetric parts of a Hom basis are searched for an
/// invertible combination, which is returned itself; only when none exists
/// is the unsymmetrizable witness returned.
pub fn find_duality(e: &ABModule, delta: &Scalar, trials: usize, seed: u64) -> Result<ABMorphism> {
    let target = e.delta_dual(delta);
    let witness = match are_isomorphic(e, &target, trials, seed)? {
        IsoVerdict::Yes(m) => m,
        IsoVerdict::No { .. } => return Err(Error::NotIsomorphism),
        IsoVerdict::Inconclusive(msg) => return Err(Error::Inconclusive(msg)),
    };
    if !symmetric_part(witness.matrix()).constant_term().det().is_zero() {
        return Ok(witness);
    }
    let homs = solve_hom(e, &target)?;
    let parts: Vec<BMatrix> = homs.morphisms.iter().map(|m| symmetric_part(m.matrix())).collect();
    let constants: Vec<ScalarMatrix> = parts.iter().map(|m| m.constant_term()).collect();
    match find_invertible_combination(&constants, trials, seed) {
        CombinationSearch::Found(t) => {
            let p = homs.precision;
            let mut acc = BMatrix::zeros(e.rank(), e.rank(), p);
            for (c, m) in t.iter().zip(&parts) {
                acc = acc.add(&m.scale(&Scalar::from_int(*c)));
            }
            ABMorphism::checked(e.truncate(p), target.truncate(p), acc)
        }
        _ => Ok(witness),
    }
}

/// `a·b^k e_δ = (δ+k) b^{k+1} e_δ` in `E_δ`, checked through `a_apply` for `k < N-1`.
pub fn ladder_holds(delta: &Scalar, precision: usize) -> bool {
    let e = ABModule::elementary(delta, precision);
    (0..precision.saturating_sub(1)).all(|k| {
        let x = BSeries::monomial(Scalar::one(), k, precision);
        let ax = e.a_apply_coords(&[x]);
        let expected = BSeries::monomial(delta + &Scalar::from_int(k as i64), k + 1, precision);
        ax[0].eq_at(&expected)
    })
}
