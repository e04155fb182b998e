mod common;

use algkit_core::algebroid::{CovectorFrame, FiberForm, FiberMultivector};
use algkit_core::calculus::{apply_in_form, deformed_differential, exterior_derivative, lie_derivative_form, schouten};
use algkit_core::examples::{abelian, ex4, nonjac, sl2, tm2};
use algkit_core::lifts::*;
use algkit_core::{Algebroid, AnchorSide, Bundle, Polynomial, Section, Variable};
use common::*;
use proptest::prelude::*;

fn pseudo() -> Algebroid {
    let x = |i| Polynomial::var(Variable::base(i));
    let mut a = Algebroid::new(vec!["x1".into()], 2, false);
    a.set_structure(0, 1, 1, x(0)).unwrap();
    a.set_structure(1, 0, 0, Polynomial::int(2)).unwrap();
    a.set_anchor_side(AnchorSide::Left, 0, 0, Polynomial::one()).unwrap();
    a.set_anchor_side(AnchorSide::Right, 1, 0, &x(0) * &x(0)).unwrap();
    a
}

/// Complete lift of a bivector written out over all index pairs: with `P^{ij}` the skew matrix of
/// components, `P^{ij} d^a_j dy_i ^ dx_a + (P^{kj} c^i_lk + 1/2 d_a P^{ij} d^a_l) y^l dy_i ^ dy_j`.
fn bivector_lift_oracle(a: &Algebroid, p: &FiberMultivector) -> SpaceMultivector {
    let space = TotalSpace::carrier_of(a);
    let (m, r) = (a.base_dim(), a.rank());
    let pm = |i: usize, j: usize| p.component(&[i, j]);
    let half = Polynomial::constant(algkit_core::poly::rat(1, 2));
    let mut out = SpaceMultivector::zero(&space, 2);
    for i in 0..r {
        for j in 0..r {
            for b in 0..m {
                let c = &pm(i, j) * a.anchor(AnchorSide::Left, j, b);
                out = out.add(&SpaceMultivector::monomial(&space, &[space.fiber_direction(i), b], c)).unwrap();
            }
            let mut c = Polynomial::zero();
            for l in 0..r {
                let y = Polynomial::var(space.fiber_var(l));
                for k in 0..r {
                    c += &(&pm(k, j) * a.structure(l, k, i)) * &y;
                }
                for b in 0..m {
                    c += &(&(&pm(i, j).partial(Variable::base(b)) * a.anchor(AnchorSide::Left, l, b)) * &half) * &y;
                }
            }
            out = out.add(&SpaceMultivector::monomial(&space, &[space.fiber_direction(i), space.fiber_direction(j)], c)).unwrap();
        }
    }
    out
}

/// Base multivector of the tangent algebroid as a field on TM with no fiber dependence.
fn horizontal(a: &Algebroid, u: &FiberMultivector) -> SpaceMultivector {
    let space = TotalSpace::carrier_of(a);
    let mut out = SpaceMultivector::zero(&space, u.degree());
    for (idx, c) in u.terms() {
        let dirs: Vec<usize> = idx.iter().map(|&i| i as usize).collect();
        out = out.add(&SpaceMultivector::monomial(&space, &dirs, c.clone())).unwrap();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn linear_tensor_encodes_bracket_and_anchors(
        (a, x, y, f) in prop_oneof![lie_example(), Just(pseudo())].prop_flat_map(|a| {
            let vars = base_vars(&a);
            (Just(a.clone()), section_in(&a), section_in(&a), poly_in(vars, 2))
        })
    ) {
        let t = to_linear_tensor(&a);
        let (ix, iy) = (iota_dual(&a, &x), iota_dual(&a, &y));
        prop_assert_eq!(iota_dual(&a, &a.bracket_sections(&x, &y).unwrap()), t.bracket(&ix, &iy));
        prop_assert_eq!(a.anchor_apply(&x, &f, AnchorSide::Left).unwrap(), t.bracket(&ix, &f));
        prop_assert_eq!(a.anchor_apply(&x, &f, AnchorSide::Right).unwrap(), -t.bracket(&f, &ix));
    }

    #[test]
    fn vertical_and_complete_lifts_on_linear_functions(
        (a, x, mu, f) in lie_example().prop_flat_map(|a| {
            let vars = base_vars(&a);
            (Just(a.clone()), section_in(&a), form_in(&a), poly_in(vars, 2))
        })
    ) {
        let vx = vertical_lift(&a, &x.to_multivector());
        let pairing = algkit_core::calculus::pair(&x.to_multivector(), std::slice::from_ref(&mu)).unwrap();
        prop_assert_eq!(vx.apply(&iota(&a, &mu)).unwrap(), pairing);
        let cx = complete_lift(&a, &x.to_multivector()).unwrap();
        prop_assert_eq!(cx.apply(&iota(&a, &mu)).unwrap(), iota(&a, &lie_derivative_form(&a, &x, &mu).unwrap()));
        prop_assert_eq!(cx.apply(&f).unwrap(), a.anchor_apply(&x, &f, AnchorSide::Left).unwrap());
        prop_assert!(cx.fiber_degree() <= 1);
    }

    #[test]
    fn complete_lift_is_a_bracket_homomorphism(
        (a, du, dv, u, v) in lie_example().prop_flat_map(|a| (0usize..=2, 1usize..=2).prop_flat_map(move |(du, dv)| {
            (Just(a.clone()), Just(du), Just(dv), multivector_in(&a, du), multivector_in(&a, dv))
        }))
    ) {
        let _ = (du, dv);
        let lhs = complete_lift(&a, &schouten(&a, &u, &v).unwrap()).unwrap();
        let rhs = space_schouten(&complete_lift(&a, &u).unwrap(), &complete_lift(&a, &v).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn bivector_lift_matches_closed_formula((a, p) in lie_example().prop_flat_map(|a| (Just(a.clone()), multivector_in(&a, 2)))) {
        prop_assert_eq!(complete_lift(&a, &p).unwrap(), bivector_lift_oracle(&a, &p));
        prop_assert!(complete_lift(&a, &p).unwrap().fiber_degree() <= 1);
    }

    #[test]
    fn deformation_routes_agree((a, n, p) in lie_example().prop_flat_map(|a| (Just(a.clone()), endo_in(&a), multivector_in(&a, 2)))) {
        prop_assert_eq!(lambda_n_lie(&a, &n).unwrap(), lambda_n_local(&a, &n).unwrap());
        prop_assert_eq!(
            complete_lift_deformed_rebuilt(&a, &n, &p).unwrap(),
            complete_lift_deformed_formula(&a, &n, &p).unwrap()
        );
        let x = Section::basis(a.rank(), 0);
        prop_assert_eq!(
            complete_lift_deformed_rebuilt(&a, &n, &x.to_multivector()).unwrap(),
            complete_lift_deformed_formula(&a, &n, &x.to_multivector()).unwrap()
        );
    }

    #[test]
    fn deformed_differential_is_rebuilt_differential(
        (a, n, w) in lie_example().prop_flat_map(|a| (0usize..=2).prop_flat_map(move |k| {
            (Just(a.clone()), endo_in(&a), multivector_in(&a, k).prop_map(|u| u.retag::<CovectorFrame>()))
        }))
    ) {
        let rebuilt = deformed_algebroid(&a, &n).unwrap();
        prop_assert_eq!(deformed_differential(&a, &n, &w).unwrap(), exterior_derivative(&rebuilt, &w).unwrap());
    }

    #[test]
    fn j_field_identities((a, n, x, mu) in lie_example().prop_flat_map(|a| (Just(a.clone()), endo_in(&a), section_in(&a), form_in(&a)))) {
        let j = j_field(&a, &n, Bundle::EDual).unwrap();
        prop_assert_eq!(iota_dual(&a, &n.apply(&x)), -j.apply(&iota_dual(&a, &x)).unwrap());
        let lhs = space_lie_derivative(&j, &vertical_lift_form(&a, &mu)).unwrap();
        prop_assert_eq!(lhs, vertical_lift_form(&a, &apply_in_form(&n, &mu)));
        let nu = mu.wedge(&FiberForm::basis(a.rank(), &[a.rank() - 1]));
        let lhs = space_lie_derivative(&j, &vertical_lift_form(&a, &nu)).unwrap();
        prop_assert_eq!(lhs, vertical_lift_form(&a, &apply_in_form(&n, &nu)));
    }

    #[test]
    fn vertical_lift_intertwines_differential(
        (a, w) in lie_example().prop_flat_map(|a| (0usize..=1).prop_flat_map(move |k| {
            (Just(a.clone()), multivector_in(&a, k).prop_map(|u| u.retag::<CovectorFrame>()))
        }))
    ) {
        let lambda = to_linear_bivector(&a).unwrap();
        let lhs = vertical_lift_form(&a, &exterior_derivative(&a, &w).unwrap());
        prop_assert_eq!(lhs, space_schouten(&lambda, &vertical_lift_form(&a, &w)).unwrap());
    }

    #[test]
    fn form_bracket_routes_agree((a, p, mu, nu) in lie_example().prop_flat_map(|a| (Just(a.clone()), multivector_in(&a, 2), form_in(&a), form_in(&a)))) {
        prop_assert_eq!(
            lifted_form_bracket(&a, &p, &mu, &nu).unwrap(),
            lifted_form_bracket_via_lift(&a, &p, &mu, &nu).unwrap()
        );
    }

    #[test]
    fn tangent_schouten_is_classical(
        (u, v) in (1usize..=2, 1usize..=2).prop_flat_map(|(du, dv)| (multivector_in(&tm2(), du), multivector_in(&tm2(), dv)))
    ) {
        let a = tm2();
        let lhs = horizontal(&a, &schouten(&a, &u, &v).unwrap());
        prop_assert_eq!(lhs, space_schouten(&horizontal(&a, &u), &horizontal(&a, &v)).unwrap());
    }
}

#[test]
fn linear_tensor_round_trips() {
    for a in [ex4(), sl2(), tm2(), nonjac(), pseudo(), abelian(3)] {
        let t = to_linear_tensor(&a);
        assert_eq!(from_linear_tensor(&t).unwrap(), a);
    }
}

#[test]
fn lambda_is_poisson_exactly_for_lie() {
    for (_, a) in lie_examples() {
        let l = to_linear_bivector(&a).unwrap();
        assert!(space_schouten(&l, &l).unwrap().is_zero());
    }
    let l = to_linear_bivector(&nonjac()).unwrap();
    assert!(!space_schouten(&l, &l).unwrap().is_zero());
}

#[test]
fn lift_homomorphism_fails_without_jacobi() {
    let a = nonjac();
    let mut witness = None;
    for i in 0..3 {
        for j in 0..3 {
            let (u, v) = (FiberMultivector::basis(3, &[i]), FiberMultivector::basis(3, &[j]));
            let lhs = complete_lift(&a, &schouten(&a, &u, &v).unwrap()).unwrap();
            let rhs = space_schouten(&complete_lift(&a, &u).unwrap(), &complete_lift(&a, &v).unwrap()).unwrap();
            if lhs != rhs && witness.is_none() {
                witness = Some((i, j));
            }
        }
    }
    assert!(witness.is_some());
}
