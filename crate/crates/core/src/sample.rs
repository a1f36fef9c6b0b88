//! Seeded random inputs for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::lie_model::LieModel;
use crate::linalg::{is_zero_vector, Matrix, Vector};
use crate::rational::{self, Rational};
use crate::spec::{ModelSpec, Parity};
use crate::superfunction::SuperFunction;

pub type SampleRng = ChaCha8Rng;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_601;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_nonzero(rng: &mut SampleRng, bound: i64) -> Rational {
    loop {
        let v = rng.gen_range(-bound..=bound);
        if v != 0 {
            return rational::int(v);
        }
    }
}

/// Up to `max_terms` monomials with integer coefficients in `[-3, 3]`,
/// optionally of one parity.
pub fn function(
    spec: ModelSpec,
    rng: &mut SampleRng,
    max_terms: usize,
    parity: Option<Parity>,
) -> SuperFunction {
    let bases = spec.base_monomials();
    let odds: Vec<_> = spec
        .odd_monomials()
        .into_iter()
        .filter(|o| parity.is_none_or(|p| o.parity() == p))
        .collect();
    let terms = rng.gen_range(1..=max_terms.max(1));
    let mut f = SuperFunction::zero(spec);
    for _ in 0..terms {
        let b = bases.choose(rng).expect("nonempty").clone();
        let o = *odds.choose(rng).expect("nonempty");
        let c = small_nonzero(rng, 3);
        f = &f + &SuperFunction::monomial(spec, b, o, c);
    }
    f
}

/// Nonzero combination of up to four basis vectors drawn from `indices`.
pub fn combination(m: &LieModel, rng: &mut SampleRng, indices: &[usize]) -> Vector {
    let mut v = m.zero_vector();
    if indices.is_empty() {
        return v;
    }
    while is_zero_vector(&v) {
        for _ in 0..rng.gen_range(1..=4) {
            let i = *indices.choose(rng).expect("nonempty");
            v[i] += small_nonzero(rng, 3);
        }
    }
    v
}

/// Homogeneous element of the given parity.
pub fn homogeneous(m: &LieModel, rng: &mut SampleRng, parity: Parity) -> Vector {
    combination(m, rng, &m.indices_of_parity(parity))
}

/// Nonzero element of `⊕_{i>0} 𝔤^{2i}` with every coordinate an integer in
/// `[-3, 3]`. Zero when that ideal is.
pub fn ideal_element(m: &LieModel, rng: &mut SampleRng) -> Vector {
    let idx: Vec<usize> = (0..m.dim())
        .filter(|&i| {
            let d = m.degrees()[i];
            d > 0 && d % 2 == 0
        })
        .collect();
    let mut v = m.zero_vector();
    if idx.is_empty() {
        return v;
    }
    while is_zero_vector(&v) {
        for &i in &idx {
            v[i] = rational::int(rng.gen_range(-3..=3));
        }
    }
    v
}

/// Invertible r×r matrix with entries `p/q`, `|p| ≤ 3`, `1 ≤ q ≤ 3`.
pub fn invertible_matrix(r: usize, rng: &mut SampleRng) -> Matrix {
    loop {
        let rows = (0..r)
            .map(|_| {
                (0..r)
                    .map(|_| rational::frac(rng.gen_range(-3..=3), rng.gen_range(1..=3)))
                    .collect()
            })
            .collect();
        let m = Matrix::from_rows(rows).expect("square");
        if m.inverse().is_some() {
            return m;
        }
    }
}
