use birat::groebner::{groebner, normal_form, s_polynomial, Budget};
use birat::polyring::{int, ratio, Coeff, Field, Monomial, MonomialOrder, Polynomial, Ring};
use proptest::prelude::*;

const ORDERS: [MonomialOrder; 3] = [MonomialOrder::Lex, MonomialOrder::GrevLex, MonomialOrder::Block(1)];

fn ring(field: Field) -> Ring {
    Ring::with_names(&["x", "y", "z"], field).unwrap()
}

fn coeff() -> impl Strategy<Value = (i64, i64)> {
    (-6i64..=6, 1i64..=3)
}

fn term() -> impl Strategy<Value = ((i64, i64), [u32; 3])> {
    (coeff(), [0u32..3, 0u32..3, 0u32..3])
}

fn build(r: &Ring, terms: &[((i64, i64), [u32; 3])]) -> Polynomial {
    r.from_terms(terms.iter().map(|&((n, d), e)| (Monomial::from_dense(&e), ratio(n, d))))
}

fn poly_in(r: Ring, max_terms: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(term(), 0..=max_terms).prop_map(move |ts| build(&r, &ts))
}

fn poly() -> impl Strategy<Value = Polynomial> {
    poly_in(ring(Field::Rational), 5)
}

fn fp_poly() -> impl Strategy<Value = Polynomial> {
    poly_in(ring(Field::prime(7).unwrap()), 5)
}

fn point() -> impl Strategy<Value = Vec<Coeff>> {
    prop::collection::vec((-4i64..=4).prop_map(int), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &a.ring().one(), a.clone());
    }

    #[test]
    fn ring_axioms_mod_p(a in fp_poly(), b in fp_poly(), c in fp_poly()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        let seven = (0..7).fold(a.ring().zero(), |acc, _| &acc + &a);
        prop_assert!(seven.is_zero());
    }

    #[test]
    fn parse_format_round_trip(a in poly()) {
        let text = a.to_string();
        prop_assert_eq!(a.ring().parse(&text).unwrap(), a);
    }

    #[test]
    fn leibniz_rule(a in poly(), b in poly(), v in 0usize..3) {
        let lhs = (&a * &b).differentiate(v);
        let rhs = &(&a.differentiate(v) * &b) + &(&a * &b.differentiate(v));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in poly(), b in poly(), p in point()) {
        let f = a.field();
        let (ea, eb) = (a.evaluate(&p).unwrap(), b.evaluate(&p).unwrap());
        prop_assert_eq!((&a + &b).evaluate(&p).unwrap(), f.add(&ea, &eb));
        prop_assert_eq!((&a * &b).evaluate(&p).unwrap(), f.mul(&ea, &eb));
    }
}

fn small_system() -> impl Strategy<Value = Vec<Polynomial>> {
    let r = ring(Field::Rational);
    prop::collection::vec(prop::collection::vec(((-3i64..=3, 1i64..=1), [0u32..3, 0u32..2, 0u32..2]), 1..=3), 1..=3)
        .prop_map(move |ps| ps.iter().map(|ts| build(&r, ts)).filter(|p| !p.is_zero()).collect::<Vec<_>>())
        .prop_filter("nonempty", |v| !v.is_empty())
}

fn budget() -> Budget {
    Budget { max_spairs: 400, max_degree: 12, max_terms: 400 }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn basis_ignores_generator_order(gens in small_system(), k in 0usize..3, rot in 0usize..3) {
        let order = ORDERS[k];
        let r = gens[0].ring().clone();
        let Ok(a) = groebner(&r, &gens, order, &budget()) else { return Ok(()) };
        let mut shuffled = gens.clone();
        shuffled.rotate_left(rot % gens.len());
        shuffled.reverse();
        let b = groebner(&r, &shuffled, order, &budget()).unwrap();
        prop_assert_eq!(a.basis, b.basis);
    }

    #[test]
    fn s_polynomials_reduce_to_zero(gens in small_system(), k in 0usize..3) {
        let order = ORDERS[k];
        let r = gens[0].ring().clone();
        let Ok(gb) = groebner(&r, &gens, order, &budget()) else { return Ok(()) };
        for (i, f) in gb.basis.iter().enumerate() {
            for g in &gb.basis[i + 1..] {
                prop_assert!(normal_form(&s_polynomial(f, g, order), &gb.basis, order).is_zero());
            }
        }
        for g in &gens {
            prop_assert!(normal_form(g, &gb.basis, order).is_zero());
        }
    }

    #[test]
    fn normal_form_is_linear_and_idempotent(gens in small_system(), a in poly(), b in poly(), c in coeff()) {
        let order = MonomialOrder::GrevLex;
        let r = gens[0].ring().clone();
        let Ok(gb) = groebner(&r, &gens, order, &budget()) else { return Ok(()) };
        let nf = |p: &Polynomial| normal_form(p, &gb.basis, order);
        let s = ratio(c.0, c.1);
        prop_assert_eq!(nf(&(&a.scale(&s) + &b)), &nf(&a).scale(&s) + &nf(&b));
        prop_assert_eq!(nf(&nf(&a)), nf(&a));
        // a and its normal form differ by an ideal element
        prop_assert!(nf(&(&a - &nf(&a))).is_zero());
    }
}
