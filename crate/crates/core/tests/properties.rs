use std::sync::OnceLock;

use proptest::prelude::*;

use svf_core::automorphism::{
    ad_exp, check_automorphism, induced_automorphism, reconstruct_bundle_map,
};
use svf_core::lie_model::{build_model, LieModel};
use svf_core::rational::{self, Rational};
use svf_core::sample;
use svf_core::spec::{ModelSpec, Parity};
use svf_core::superfunction::{RawTerm, SuperFunction};
use svf_core::vector_field::SuperVectorField;

const SPECS: [(usize, usize, usize); 6] = [
    (0, 0, 1),
    (0, 0, 2),
    (0, 0, 3),
    (1, 1, 1),
    (1, 2, 1),
    (1, 1, 2),
];

fn models() -> &'static [LieModel] {
    static MODELS: OnceLock<Vec<LieModel>> = OnceLock::new();
    MODELS.get_or_init(|| {
        SPECS
            .iter()
            .map(|&(s, d, r)| build_model(ModelSpec::new(s, d, r).unwrap()).unwrap())
            .collect()
    })
}

fn sign(p: Parity, q: Parity) -> Rational {
    rational::sign(p.both_odd(q))
}

fn parity() -> impl Strategy<Value = Parity> {
    prop_oneof![Just(Parity::Even), Just(Parity::Odd)]
}

/// Raw terms over (s, d, r) = (2, 3, 3): possibly repeated or unsorted odd
/// indices and base exponents past the truncation order.
fn raw_terms() -> impl Strategy<Value = Vec<RawTerm>> {
    let term = (
        prop::collection::vec(0u32..5, 2),
        prop::collection::vec(1usize..=3, 0..4),
        -4i64..=4,
        1i64..=3,
    )
        .prop_map(|(b, o, p, q)| (b, o, rational::frac(p, q)));
    prop::collection::vec(term, 0..6)
}

fn jet_spec() -> ModelSpec {
    ModelSpec::new(2, 3, 3).unwrap()
}

fn to_raw(f: &SuperFunction) -> Vec<RawTerm> {
    f.terms()
        .map(|(b, o, c)| (b.exponents().to_vec(), o.indices(), c.clone()))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_is_idempotent(raw in raw_terms()) {
        let spec = jet_spec();
        let f = SuperFunction::normalize(spec, &raw).unwrap();
        let g = SuperFunction::normalize(spec, &to_raw(&f)).unwrap();
        prop_assert_eq!(f, g);
    }

    #[test]
    fn product_is_associative(a in raw_terms(), b in raw_terms(), c in raw_terms()) {
        let spec = jet_spec();
        let [f, g, h] = [a, b, c].map(|r| SuperFunction::normalize(spec, &r).unwrap());
        let left = f.multiply(&g).unwrap().multiply(&h).unwrap();
        let right = f.multiply(&g.multiply(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn grade_split_sums_back_and_diagonalizes_euler(raw in raw_terms()) {
        let spec = jet_spec();
        let f = SuperFunction::normalize(spec, &raw).unwrap();
        let euler = SuperVectorField::euler(spec);
        let mut total = SuperFunction::zero(spec);
        for (k, part) in f.grade_split() {
            let e = euler.apply(&part).unwrap();
            prop_assert_eq!(e, part.scale(&rational::int(k as i64)));
            total = &total + &part;
        }
        prop_assert_eq!(total, f);
    }

    #[test]
    fn leibniz_rule(which in 0..SPECS.len(), seed in any::<u64>(), px in parity(), pf in parity()) {
        let m = &models()[which];
        let spec = m.spec();
        let mut rng = sample::rng(seed);
        let x = m.field_of(&sample::homogeneous(m, &mut rng, px));
        let f = sample::function(spec, &mut rng, 4, Some(pf));
        let g = sample::function(spec, &mut rng, 4, None);
        let lhs = x.apply(&f.multiply(&g).unwrap()).unwrap();
        let first = x.apply(&f).unwrap().multiply(&g).unwrap();
        let second = f.multiply(&x.apply(&g).unwrap()).unwrap().scale(&sign(px, pf));
        prop_assert_eq!(lhs, &first + &second);
    }

    #[test]
    fn field_bracket_is_super_antisymmetric(
        which in 0..SPECS.len(),
        seed in any::<u64>(),
        px in parity(),
        py in parity(),
    ) {
        let m = &models()[which];
        let mut rng = sample::rng(seed);
        let x = m.field_of(&sample::homogeneous(m, &mut rng, px));
        let y = m.field_of(&sample::homogeneous(m, &mut rng, py));
        let xy = x.bracket(&y).unwrap();
        let yx = y.bracket(&x).unwrap();
        prop_assert_eq!(xy, yx.scale(&-sign(px, py)));
    }

    #[test]
    fn field_bracket_satisfies_jacobi(
        which in 0..SPECS.len(),
        seed in any::<u64>(),
        px in parity(),
        py in parity(),
        pz in parity(),
    ) {
        let m = &models()[which];
        let mut rng = sample::rng(seed);
        let x = m.field_of(&sample::homogeneous(m, &mut rng, px));
        let y = m.field_of(&sample::homogeneous(m, &mut rng, py));
        let z = m.field_of(&sample::homogeneous(m, &mut rng, pz));
        let lhs = x.bracket(&y.bracket(&z).unwrap()).unwrap();
        let a = x.bracket(&y).unwrap().bracket(&z).unwrap();
        let b = y.bracket(&x.bracket(&z).unwrap()).unwrap().scale(&sign(px, py));
        prop_assert_eq!(lhs, a.add(&b).unwrap());
    }

    #[test]
    fn exponentials_of_the_ideal_are_automorphisms(which in 0..3usize, seed in any::<u64>()) {
        // (0,0,3) and the jets have a nonzero canonical ideal
        let m = &models()[[2, 3, 5][which]];
        let y = sample::ideal_element(m, &mut sample::rng(seed));
        let e = ad_exp(m, &y).unwrap();
        prop_assert!(check_automorphism(m, &e).unwrap().passed());
        let back = ad_exp(m, &y.iter().map(|c| -c).collect::<Vec<_>>()).unwrap();
        prop_assert!(e.mul(&back).is_identity());
    }

    #[test]
    fn bundle_maps_compose(which in 0..3usize, seed in any::<u64>()) {
        let m = &models()[which];
        let r = m.spec().odd_rank;
        let mut rng = sample::rng(seed);
        let s = sample::invertible_matrix(r, &mut rng);
        let t = sample::invertible_matrix(r, &mut rng);
        let st = induced_automorphism(m, &s.mul(&t)).unwrap();
        let composed = induced_automorphism(m, &s).unwrap().mul(&induced_automorphism(m, &t).unwrap());
        prop_assert_eq!(st, composed);
    }

    #[test]
    fn reconstruction_inverts_induction(which in 0..3usize, seed in any::<u64>()) {
        let m = &models()[which];
        let t = sample::invertible_matrix(m.spec().odd_rank, &mut sample::rng(seed));
        let psi = induced_automorphism(m, &t).unwrap();
        prop_assert!(check_automorphism(m, &psi).unwrap().passed());
        prop_assert_eq!(reconstruct_bundle_map(m, &psi).unwrap(), t);
    }
}
