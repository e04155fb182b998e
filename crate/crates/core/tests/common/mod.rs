#![allow(dead_code)]

use algkit_core::algebroid::{FiberForm, FiberMultivector};
use algkit_core::examples::{ex4, sl2, tm2};
use algkit_core::poly::{rat, Monomial};
use algkit_core::{Algebroid, EndoTensor, Polynomial, Section, Variable};
use proptest::prelude::*;

pub fn base_vars(a: &Algebroid) -> Vec<Variable> {
    (0..a.base_dim()).map(Variable::base).collect()
}

/// Polynomials with small integer and half-integer coefficients.
pub fn poly_in(vars: Vec<Variable>, max_deg: u32) -> impl Strategy<Value = Polynomial> {
    let n = vars.len();
    let term = (-4i64..=4, prop::bool::ANY, prop::collection::vec(0..=max_deg, n));
    prop::collection::vec(term, 0..4).prop_map(move |terms| {
        let mut p = Polynomial::zero();
        for (c, half, exps) in terms {
            let mut powers = Vec::new();
            let mut total = 0;
            for (v, e) in vars.iter().zip(exps) {
                if total + e <= max_deg && e > 0 {
                    powers.push((*v, e));
                    total += e;
                }
            }
            let coeff = if half { rat(c, 2) } else { rat(c, 1) };
            p += Polynomial::term(coeff, Monomial::from_powers(powers));
        }
        p
    })
}

pub fn section_in(a: &Algebroid) -> impl Strategy<Value = Section> {
    prop::collection::vec(poly_in(base_vars(a), 2), a.rank()).prop_map(Section)
}

pub fn form_in(a: &Algebroid) -> impl Strategy<Value = FiberForm> {
    prop::collection::vec(poly_in(base_vars(a), 2), a.rank()).prop_map(|c| FiberForm::from_vector(&c))
}

/// Random element of the given degree over the rank of `a`.
pub fn multivector_in(a: &Algebroid, degree: usize) -> impl Strategy<Value = FiberMultivector> {
    let r = a.rank();
    let tuples = algkit_core::calculus::increasing_tuples(r, degree);
    prop::collection::vec(poly_in(base_vars(a), 2), tuples.len()).prop_map(move |cs| {
        let mut u = FiberMultivector::zero(r, degree);
        for (idx, c) in tuples.iter().zip(cs) {
            u += FiberMultivector::monomial(r, idx, c);
        }
        u
    })
}

pub fn endo_in(a: &Algebroid) -> impl Strategy<Value = EndoTensor> {
    let r = a.rank();
    prop::collection::vec(prop::collection::vec(poly_in(base_vars(a), 2), r), r).prop_map(EndoTensor)
}

pub fn lie_examples() -> Vec<(&'static str, Algebroid)> {
    vec![("ex4", ex4()), ("sl2", sl2()), ("tm2", tm2())]
}

/// Index into the Lie examples; proptest picks the instance.
pub fn lie_example() -> impl Strategy<Value = Algebroid> {
    (0usize..3).prop_map(|i| lie_examples().swap_remove(i).1)
}
