#![allow(dead_code)]

use std::sync::Mutex;

use abmod::script::parse_module;
use abmod::{ABModule, ABMorphism, BMatrix, BSeries, Scalar};
use rand::seq::SliceRandom;
use rand::Rng;

pub const N: usize = 12;

pub fn s(n: i64, d: i64) -> Scalar {
    Scalar::ratio(n, d)
}

pub fn el(n: i64, d: i64) -> ABModule {
    ABModule::elementary(&s(n, d), N)
}

pub fn rank4_at(lambda: Scalar, mu: Scalar, p: usize) -> ABModule {
    let z = || BSeries::zero(p);
    let c = |x: i64| BSeries::constant(Scalar::from_int(x), p);
    let lb = |x: &Scalar| BSeries::monomial(x.clone(), 1, p);
    let rows = vec![
        vec![lb(&lambda), c(1), c(1), z()],
        vec![z(), lb(&mu), z(), c(1)],
        vec![z(), z(), lb(&-&mu), c(-1)],
        vec![z(), z(), z(), lb(&-&lambda)],
    ];
    ABModule::from_matrix(BMatrix::from_rows(rows).unwrap()).unwrap()
}

/// λ = 1, μ = 1/3.
pub fn rank4() -> ABModule {
    rank4_at(Scalar::one(), s(1, 3), N)
}

/// `a x = 0`, `a y = (1 + b) x`.
pub fn unipotent_shift() -> ABModule {
    parse_module("basis x y\na x = 0\na y = (1 + b)*x", N, None).unwrap()
}

/// `a x = 0`, `a y = b y + x`.
pub fn r2() -> ABModule {
    parse_module("basis x y\na x = 0\na y = b*y + x", N, None).unwrap()
}

/// Isomorphic to its 3-dual.
pub fn self_dual3() -> ABModule {
    parse_module("basis x y\na x = 3/2*b*x\na y = 3/2*b*y + x", N, None).unwrap()
}

static EMITTED: Mutex<Vec<ABMorphism>> = Mutex::new(Vec::new());

/// Records a morphism for the final re-verification pass.
pub fn emit(m: &ABMorphism) {
    EMITTED.lock().unwrap().push(m.clone());
}

pub fn emitted() -> Vec<ABMorphism> {
    EMITTED.lock().unwrap().clone()
}

/// `P (I + L) + b K + b² K2` with `P` a permutation, `L` strictly lower triangular.
pub fn random_base_change<R: Rng>(n: usize, p: usize, rng: &mut R) -> BMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut lower = vec![vec![0i64; n]; n];
    for (i, row) in lower.iter_mut().enumerate() {
        row[i] = 1;
        for x in row.iter_mut().take(i) {
            *x = rng.gen_range(-2..=2);
        }
    }
    BMatrix::from_fn(n, n, p, |i, j| {
        let c0 = lower[perm[i]][j];
        let c1 = rng.gen_range(-1..=1);
        let c2 = rng.gen_range(-1..=1);
        BSeries::from_ints(&[c0, c1, c2], p)
    })
}
