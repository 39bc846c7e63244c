//! Property tests for the algebraic invariants of each layer.

use std::sync::{Arc, OnceLock};

use exhopf::bst::{full_table, Strategy as BstStrategy};
use exhopf::ffpoly::{chern_ring, weight_ring, Coeff, Monomial, Polynomial, RingContext};
use exhopf::groebner::buchberger;
use exhopf::hopf::{build_model, Element, HopfModel};
use exhopf::liedata::Group;
use exhopf::steenrod::SteenrodContext;
use proptest::prelude::*;

const PRIMES: [u32; 3] = [2, 3, 5];

fn poly(ring: &Arc<RingContext>, terms: &[(Vec<u16>, Coeff)]) -> Polynomial {
    Polynomial::from_terms(ring, terms.iter().map(|(e, c)| (Monomial::from_exponents(e), *c)))
}

fn terms(nvars: usize, max_exp: u16, max_terms: usize) -> impl Strategy<Value = Vec<(Vec<u16>, Coeff)>> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nvars), 0..5u32), 0..=max_terms)
}

/// Homogeneous part of weight `d` of a random polynomial, made nonzero by
/// adding a fixed monomial of that weight.
fn homogeneous(ring: &Arc<RingContext>, raw: &[(Vec<u16>, Coeff)], d: u32) -> Polynomial {
    let f = poly(ring, raw).component(d);
    let anchor = Polynomial::named(ring, &ring.vars()[0].name).pow(d / ring.vars()[0].weight);
    if f.is_zero() && d.is_multiple_of(ring.vars()[0].weight) {
        anchor
    } else {
        f
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(pi in 0..3usize, a in terms(3, 3, 6), b in terms(3, 3, 6), c in terms(3, 3, 6)) {
        let ring = weight_ring(PRIMES[pi], 3).unwrap();
        let (a, b, c) = (poly(&ring, &a), poly(&ring, &b), poly(&ring, &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &Polynomial::one(&ring), a.clone());
        prop_assert_eq!(&a + &(-&a), Polynomial::zero(&ring));
    }

    #[test]
    fn frobenius_is_additive(pi in 0..3usize, a in terms(3, 2, 5), b in terms(3, 2, 5)) {
        let p = PRIMES[pi];
        let ring = weight_ring(p, 3).unwrap();
        let (a, b) = (poly(&ring, &a), poly(&ring, &b));
        prop_assert_eq!((&a + &b).pow(p), &a.pow(p) + &b.pow(p));
    }

    #[test]
    fn render_then_parse_round_trips(pi in 0..3usize, a in terms(4, 4, 8)) {
        let ring = chern_ring(PRIMES[pi], 1, 4).unwrap();
        let a = poly(&ring, &a);
        prop_assert_eq!(Polynomial::parse(&a.render(), &ring).unwrap(), a);
    }

    #[test]
    fn normal_forms(
        pi in 0..3usize,
        g1 in terms(4, 2, 4), g2 in terms(4, 2, 4),
        q1 in terms(4, 2, 4), q2 in terms(4, 2, 4),
        f in terms(4, 3, 8),
    ) {
        let ring = chern_ring(PRIMES[pi], 1, 4).unwrap();
        let d = 8;
        let gens = vec![homogeneous(&ring, &g1, 3), homogeneous(&ring, &g2, 4)];
        let gb = buchberger(&ring, &gens, d).unwrap();
        let f = homogeneous(&ring, &f, d);

        let r = gb.remainder(&f).unwrap();
        prop_assert_eq!(gb.remainder(&r).unwrap(), r.clone());

        let nf = gb.normal_form(&f).unwrap();
        let mut back = nf.remainder.clone();
        for (q, b) in nf.quotients.iter().zip(gb.basis()) {
            back = &back + &(q * b);
        }
        prop_assert_eq!(back, f.clone());

        let member = &(&homogeneous(&ring, &q1, d - 3) * &gens[0]) + &(&homogeneous(&ring, &q2, d - 4) * &gens[1]);
        prop_assert!(gb.remainder(&member).unwrap().is_zero());

        let deeper = buchberger(&ring, &gens, d + 4).unwrap();
        prop_assert_eq!(deeper.remainder(&f).unwrap(), r);
        prop_assert!(gb.remainder(&(&f * &f)).is_err());
    }

    #[test]
    fn cartan_formula(pi in 0..3usize, k in 0..4u32, a in terms(3, 2, 4), b in terms(3, 2, 4)) {
        let ring = weight_ring(PRIMES[pi], 3).unwrap();
        let ctx = SteenrodContext::weight_ring(&ring).unwrap();
        let (f, g) = (homogeneous(&ring, &a, 2), homogeneous(&ring, &b, 3));
        let mut rhs = Polynomial::zero(&ring);
        for i in 0..=k {
            rhs = &rhs + &(&ctx.power(i, &f).unwrap() * &ctx.power(k - i, &g).unwrap());
        }
        prop_assert_eq!(ctx.power(k, &(&f * &g)).unwrap(), rhs);
    }

    #[test]
    fn adem_and_instability(pi in 0..3usize, a in terms(3, 3, 5), d in 1..5u32) {
        let p = PRIMES[pi];
        let ring = weight_ring(p, 3).unwrap();
        let ctx = SteenrodContext::weight_ring(&ring).unwrap();
        let f = homogeneous(&ring, &a, d);
        let twice = ctx.power(1, &ctx.power(1, &f).unwrap()).unwrap();
        prop_assert_eq!(twice, ctx.power(2, &f).unwrap().scale(2 % p));
        prop_assert_eq!(ctx.power(d, &f).unwrap(), f.pow(p));
        prop_assert!(ctx.power(d + 1, &f).unwrap().is_zero());
        prop_assert_eq!(ctx.power(0, &f).unwrap(), f);
    }

    #[test]
    fn restricted_powers_agree_with_weight_powers(pi in 1..3usize, a in terms(2, 3, 4), k in 0..3u32) {
        // With c1 = 0 the Chern classes are those of t = (w1, w2, -w1-w2),
        // so the Wu-formula action must match the action on the weights.
        let p = PRIMES[pi];
        let cring = chern_ring(p, 2, 3).unwrap();
        let wring = weight_ring(p, 2).unwrap();
        let f = homogeneous(&cring, &a, 6);
        let (w1, w2) = (Polynomial::named(&wring, "w1"), Polynomial::named(&wring, "w2"));
        let w3 = -&(&w1 + &w2);
        let e2 = &(&(&w1 * &w2) + &(&w1 * &w3)) + &(&w2 * &w3);
        let e3 = &(&w1 * &w2) * &w3;
        let images = vec![Some(e2), Some(e3)];
        let chern = SteenrodContext::abstract_chern(&cring).unwrap();
        let weights = SteenrodContext::weight_ring(&wring).unwrap();
        let lhs = chern.power(k, &f).unwrap().substitute(&wring, &images).unwrap();
        let rhs = weights.power(k, &f.substitute(&wring, &images).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}

fn models() -> &'static Vec<HopfModel> {
    static MODELS: OnceLock<Vec<HopfModel>> = OnceLock::new();
    MODELS.get_or_init(|| {
        [(Group::G2, 2), (Group::F4, 3), (Group::E6, 2), (Group::E8, 5)]
            .into_iter()
            .map(|(g, p)| build_model(g, p, &full_table(g, p, BstStrategy::Method2).unwrap()).unwrap())
            .collect()
    })
}

/// A sum of scaled products of generators.
fn element(model: &HopfModel, picks: &[(Vec<usize>, Coeff)]) -> Element {
    let gens = model.generators();
    let mut acc = Element::zero();
    for (factors, c) in picks {
        let mut term = model.one();
        for &i in factors {
            term = model.multiply(&term, &gens[i % gens.len()].1);
        }
        acc = model.add(&acc, &model.scale(&term, *c));
    }
    acc
}

fn monomial(model: &HopfModel, factors: &[usize]) -> Element {
    element(model, &[(factors.to_vec(), 1)])
}

fn degree(model: &HopfModel, a: &Element) -> Option<u32> {
    a.terms().keys().next().map(|b| model.degree(b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bockstein_squares_to_zero(mi in 0..4usize, picks in prop::collection::vec((prop::collection::vec(0..16usize, 0..4), 0..5u32), 0..5)) {
        let model = &models()[mi];
        let a = element(model, &picks);
        prop_assert!(model.bockstein(&model.bockstein(&a)).is_zero());
    }

    #[test]
    fn bockstein_is_a_graded_derivation(
        mi in 0..4usize,
        x in prop::collection::vec(0..16usize, 0..3),
        y in prop::collection::vec(0..16usize, 0..3),
    ) {
        let model = &models()[mi];
        let (a, b) = (monomial(model, &x), monomial(model, &y));
        prop_assume!(!a.is_zero());
        let sign = if degree(model, &a).unwrap() % 2 == 1 { model.p() - 1 } else { 1 };
        let rhs = model.add(
            &model.multiply(&model.bockstein(&a), &b),
            &model.scale(&model.multiply(&a, &model.bockstein(&b)), sign),
        );
        prop_assert_eq!(model.bockstein(&model.multiply(&a, &b)), rhs);
    }
}
