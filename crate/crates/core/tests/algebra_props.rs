use proptest::prelude::*;
use todavolt_core::catalog::{self, SystemId, Symmetry};
use todavolt_core::poisson::PoissonTensor;
use todavolt_core::{qi, LinearMap, Monomial, Poly, VarSpace, Vars, Q};

fn space() -> Vars {
    VarSpace::new(["a1", "b1", "b2"])
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0i32..3, 0i32..3, 0i32..3), -5i64..=5), 0..5).prop_map(|terms| {
        let vars = space();
        Poly::from_terms(&vars, terms.into_iter().map(|((x, y, z), c)| (Monomial(vec![x, y, z]), qi(c))).collect::<Vec<_>>())
    })
}

fn point() -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(-4i64..=4, 3).prop_map(|v| v.into_iter().map(qi).collect())
}

fn signed_perm() -> impl Strategy<Value = LinearMap> {
    (Just(vec![0usize, 1, 2]).prop_shuffle(), prop::collection::vec(prop::bool::ANY, 3)).prop_map(|(p, s)| {
        let images = p.into_iter().zip(s).map(|(i, neg)| (i, qi(if neg { -1 } else { 1 }))).collect();
        LinearMap::new("g", images, 4).unwrap()
    })
}

proptest! {
    #[test]
    fn ring_axioms(p in poly(), q in poly(), r in poly()) {
        prop_assert_eq!(&p + &q, &q + &p);
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn derivatives_commute_and_obey_leibniz(p in poly(), q in poly()) {
        prop_assert_eq!(p.diff("a1").unwrap().diff("b2").unwrap(), p.diff("b2").unwrap().diff("a1").unwrap());
        let lhs = (&p * &q).diff("b1").unwrap();
        prop_assert_eq!(lhs, &(&p.diff("b1").unwrap() * &q) + &(&p * &q.diff("b1").unwrap()));
    }

    #[test]
    fn substitution_is_a_homomorphism(p in poly(), q in poly(), g in signed_perm(), x in point()) {
        prop_assert_eq!(g.subst(&(&p * &q)).unwrap(), &g.subst(&p).unwrap() * &g.subst(&q).unwrap());
        prop_assert_eq!(g.subst(&p).unwrap().eval(&x).unwrap(), p.eval(&g.apply(&x).unwrap()).unwrap());
    }

    #[test]
    fn canonical_string_round_trips(p in poly()) {
        prop_assert_eq!(Poly::parse(&p.to_canonical_string(), &space()).unwrap(), p);
    }

    #[test]
    fn brackets_are_antisymmetric_and_leibniz(f in poly(), g in poly(), h in poly()) {
        let vars = catalog::variables(SystemId::toda_a(2));
        let pi = catalog::tensor(SystemId::toda_a(2), 2).unwrap();
        let (f, g, h) = (f.embed(&vars).unwrap(), g.embed(&vars).unwrap(), h.embed(&vars).unwrap());
        prop_assert_eq!(pi.bracket(&f, &g).unwrap(), -pi.bracket(&g, &f).unwrap());
        let lhs = pi.bracket(&f, &(&g * &h)).unwrap();
        let rhs = &(&pi.bracket(&f, &g).unwrap() * &h) + &(&g * &pi.bracket(&f, &h).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pushforward_is_functorial(g in signed_perm(), k in signed_perm()) {
        let pi: PoissonTensor = catalog::tensor(SystemId::toda_a(2), 3).unwrap();
        let gk = g.compose(&k).unwrap();
        prop_assert_eq!(pi.pushforward(&gk).unwrap(), pi.pushforward(&k).unwrap().pushforward(&g).unwrap());
        let back = pi.pushforward(&g).unwrap().pushforward(&g.inverse()).unwrap();
        prop_assert_eq!(back, pi);
    }
}

#[test]
fn symmetry_orders() {
    let psi = catalog::symmetry(Symmetry::Psi, SystemId::toda_a(5)).unwrap();
    assert_eq!(psi.actual_order(), 2);
}
