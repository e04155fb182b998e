mod common;

use std::collections::BTreeMap;

use algkit_core::poly::{parse_poly, VarSpace};
use algkit_core::{Polynomial, Variable};
use common::poly_in;
use proptest::prelude::*;

fn vars() -> Vec<Variable> {
    vec![Variable::base(0), Variable::base(1), Variable::fiber(0), Variable::dual_fiber(1)]
}

fn space() -> VarSpace {
    VarSpace::standard(2, 2)
}

fn small() -> impl Strategy<Value = Polynomial> {
    poly_in(vars(), 3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn addition_is_associative(p in small(), q in small(), r in small()) {
        prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
    }

    #[test]
    fn multiplication_distributes(p in small(), q in small(), r in small()) {
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
    }

    #[test]
    fn multiplication_commutes(p in small(), q in small()) {
        prop_assert_eq!(&p * &q, &q * &p);
    }

    #[test]
    fn multiplication_is_associative(p in small(), q in small(), r in small()) {
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
    }

    #[test]
    fn additive_inverse(p in small()) {
        prop_assert!((&p - &p).is_zero());
        prop_assert_eq!(&p + &(-&p), Polynomial::zero());
    }

    #[test]
    fn print_then_parse(p in small()) {
        let s = space();
        let printed = p.display(&s).to_string();
        let back = parse_poly(&printed, &s).unwrap();
        prop_assert_eq!(back, p, "{}", printed);
    }

    #[test]
    fn partials_commute(p in small(), i in 0usize..4, j in 0usize..4) {
        let (u, v) = (vars()[i], vars()[j]);
        prop_assert_eq!(p.partial(u).partial(v), p.partial(v).partial(u));
    }

    #[test]
    fn partial_obeys_leibniz(p in small(), q in small(), i in 0usize..4) {
        let v = vars()[i];
        prop_assert_eq!((&p * &q).partial(v), &(&p.partial(v) * &q) + &(&p * &q.partial(v)));
    }

    #[test]
    fn substitution_is_a_ring_map(p in small(), q in small(), a in small(), b in small()) {
        let mut bind = BTreeMap::new();
        bind.insert(Variable::base(0), a);
        bind.insert(Variable::fiber(0), b);
        prop_assert_eq!((&p * &q).substitute(&bind), &p.substitute(&bind) * &q.substitute(&bind));
        prop_assert_eq!((&p + &q).substitute(&bind), &p.substitute(&bind) + &q.substitute(&bind));
    }

    #[test]
    fn identity_substitution_is_trivial(p in small()) {
        let bind: BTreeMap<_, _> = vars().into_iter().map(|v| (v, Polynomial::var(v))).collect();
        prop_assert_eq!(p.substitute(&bind), p);
    }
}

#[test]
fn parse_matches_hand_expansion() {
    let s = space();
    let p = parse_poly("(x1 + 1)^2 - 2*x1", &s).unwrap();
    let x1 = Polynomial::var(Variable::base(0));
    assert_eq!(p, &(&x1 * &x1) + &Polynomial::one());
    assert_eq!(parse_poly("2/3*x1^2 - x2", &s).unwrap().display(&s).to_string(), "2/3*x1^2 - x2");
    assert!(parse_poly("x9", &s).is_err());
}
