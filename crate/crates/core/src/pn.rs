//! Verifiers for Poisson tensors, Nijenhuis tensors, Poisson-Nijenhuis pairs
//! and Lie bialgebroids.
//!
//! Every check returns a [`CheckReport`]; a failing report carries a witness
//! naming where the defect was found and its canonical printed value.

use crate::algebroid::{render_form, render_multivector, Algebroid, EndoTensor, FiberForm, FiberMultivector, LieWitness, Section};
use crate::calculus::{self, increasing_tuples};
use crate::error::{Error, Result};
use crate::lifts::{self, FiberLinearMap, SpaceMultivector};
use crate::poly::{rat, Polynomial, VarSpace, Variable};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub at: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub pass: bool,
    pub witness: Option<Witness>,
    pub notes: String,
    /// Reported but not part of the overall verdict.
    pub informational: bool,
}

impl CheckReport {
    pub fn passed(name: &str) -> Self {
        CheckReport { name: name.into(), pass: true, witness: None, notes: String::new(), informational: false }
    }

    pub fn failed(name: &str, at: impl Into<String>, value: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            pass: false,
            witness: Some(Witness { at: at.into(), value: value.into() }),
            notes: String::new(),
            informational: false,
        }
    }

    pub fn with_notes(mut self, notes: impl Into<String>) -> Self {
        self.notes = notes.into();
        self
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self
    }

    fn renamed(mut self, name: &str) -> Self {
        self.name = name.into();
        self
    }
}

/// All non-informational rows pass.
pub fn overall(reports: &[CheckReport]) -> bool {
    reports.iter().filter(|r| !r.informational).all(|r| r.pass)
}

fn names(a: &Algebroid) -> VarSpace {
    a.total_space_names()
}

fn basis_label(prefix: &str, idx: &[usize]) -> String {
    idx.iter().map(|i| format!("{prefix}{}", i + 1)).collect::<Vec<_>>().join("^")
}

pub fn require_lie(a: &Algebroid) -> Result<()> {
    let r = a.is_lie();
    if r.lie {
        return Ok(());
    }
    let names = names(a);
    let why = match r.witness {
        Some(LieWitness::NotSkew) | None => "bracket is not skew-symmetric".to_string(),
        Some(LieWitness::Jacobi { triple, value }) => format!(
            "jacobiator(e{},e{},e{}) = {}",
            triple[0] + 1,
            triple[1] + 1,
            triple[2] + 1,
            value.render(&names, "e")
        ),
        Some(LieWitness::Anchor { pair, coordinate, defect }) => format!(
            "anchor is not a morphism at (e{},e{}) on {}: {}",
            pair[0] + 1,
            pair[1] + 1,
            names.name(Variable::base(coordinate)),
            defect.display(&names)
        ),
    };
    Err(Error::NotLie(why))
}

/// Lie axioms as a list of reports: skew, Jacobi, anchor morphism.
pub fn lie_reports(a: &Algebroid) -> Vec<CheckReport> {
    let names = names(a);
    let v = a.validate();
    let mut out = vec![if v.skew_consistent && a.is_skew() {
        CheckReport::passed("skew")
    } else {
        let issue = v.issues.first().cloned().unwrap_or_else(|| "structure is declared non-skew".into());
        CheckReport::failed("skew", "structure", issue)
    }];
    let r = a.is_lie();
    let (jac, anchor) = match (&r.witness, r.lie) {
        (_, true) => (CheckReport::passed("jacobi"), CheckReport::passed("anchor_morphism")),
        (Some(LieWitness::NotSkew), _) | (None, _) => (
            CheckReport::failed("jacobi", "structure", "not skew"),
            CheckReport::failed("anchor_morphism", "structure", "not skew"),
        ),
        (Some(LieWitness::Jacobi { triple, value }), _) => (
            CheckReport::failed(
                "jacobi",
                format!("(e{},e{},e{})", triple[0] + 1, triple[1] + 1, triple[2] + 1),
                value.render(&names, "e"),
            ),
            CheckReport::passed("anchor_morphism").with_notes("not examined after Jacobi failure").informational(),
        ),
        (Some(LieWitness::Anchor { pair, coordinate, defect }), _) => (
            CheckReport::passed("jacobi"),
            CheckReport::failed(
                "anchor_morphism",
                format!("(e{},e{}), {}", pair[0] + 1, pair[1] + 1, names.name(Variable::base(*coordinate))),
                defect.display(&names).to_string(),
            ),
        ),
    };
    out.push(jac);
    out.push(anchor);
    out
}

fn first_component(u: &FiberMultivector) -> Option<(Vec<usize>, Polynomial)> {
    u.terms().next().map(|(i, c)| (i.iter().map(|&k| k as usize).collect(), c.clone()))
}

fn zero_report(name: &str, a: &Algebroid, u: &FiberMultivector) -> CheckReport {
    match first_component(u) {
        None => CheckReport::passed(name),
        Some((idx, c)) => {
            CheckReport::failed(name, basis_label("e", &idx), c.display(&names(a)).to_string())
                .with_notes(format!("full value {}", render_multivector(u, &names(a))))
        }
    }
}

fn space_zero_report(name: &str, at: &str, t: &SpaceMultivector) -> CheckReport {
    if t.is_zero() {
        CheckReport::passed(name)
    } else {
        CheckReport::failed(name, at, t.render())
    }
}

fn require_bivector(a: &Algebroid, p: &FiberMultivector) -> Result<()> {
    if p.degree() != 2 || p.dim() != a.rank() {
        return Err(Error::Degree(format!("expected a bivector of rank {}", a.rank())));
    }
    Ok(())
}

/// `[P, P] = 0`.
pub fn is_poisson_for(a: &Algebroid, p: &FiberMultivector) -> Result<CheckReport> {
    require_lie(a)?;
    require_bivector(a, p)?;
    let sq = calculus::schouten(a, p, p)?;
    Ok(zero_report("poisson", a, &sq))
}

/// `d_T [P, P] = 0`.
pub fn modified_yb(a: &Algebroid, p: &FiberMultivector) -> Result<CheckReport> {
    require_lie(a)?;
    require_bivector(a, p)?;
    let lifted = lifts::complete_lift(a, &calculus::schouten(a, p, p)?)?;
    Ok(space_zero_report("modified_yang_baxter", "d_T[P,P]", &lifted))
}

/// Torsion, half the Frolicher-Nijenhuis square and relatedness of
/// `Lambda`, `Lambda_N` under `N~*` must agree.
pub fn is_nijenhuis(a: &Algebroid, n: &EndoTensor) -> Result<CheckReport> {
    a.require_skew()?;
    let t = calculus::nijenhuis_torsion(a, n)?;
    let half = calculus::half_fn_square(a, n)?;
    if t != half {
        return Err(Error::Inconsistent(format!(
            "torsion {} differs from half the Frolicher-Nijenhuis square {}",
            t.render(&names(a)),
            half.render(&names(a))
        )));
    }
    let lambda = lifts::to_linear_bivector(a)?;
    let lambda_n = lifts::lambda_n_lie(a, n)?;
    let related = lifts::are_related(&FiberLinearMap::n_star_tilde(a, n)?, &lambda, &lambda_n)?.related;
    if related != t.is_zero() {
        return Err(Error::Inconsistent(format!(
            "torsion vanishing is {} but relatedness of Lambda and Lambda_N is {}",
            t.is_zero(),
            related
        )));
    }
    let report = match t.entries().next() {
        None => CheckReport::passed("nijenhuis"),
        Some((&(i, j), v)) => CheckReport::failed("nijenhuis", format!("(e{},e{})", i + 1, j + 1), v.render(&names(a), "e"))
            .with_notes(format!("torsion {}", t.render(&names(a)))),
    };
    Ok(report)
}

/// Matrix `M^{ij} = P^{ij}`.
fn bivector_matrix(p: &FiberMultivector) -> EndoTensor {
    let n = p.dim();
    EndoTensor((0..n).map(|i| (0..n).map(|j| p.component(&[i, j])).collect()).collect())
}

/// `NP` with components `N^i_k P^{kj}`, skew part.
pub fn np_bivector(n: &EndoTensor, p: &FiberMultivector) -> FiberMultivector {
    let m = n.matmul(&bivector_matrix(p));
    let r = p.dim();
    let half = Polynomial::constant(rat(1, 2));
    let mut out = FiberMultivector::zero(r, 2);
    for i in 0..r {
        for j in i + 1..r {
            let c = (m.entry(i, j) - m.entry(j, i)) * &half;
            out += FiberMultivector::monomial(r, &[i, j], c);
        }
    }
    out
}

/// `NP = PN*`, i.e. the matrix `N P` is skew.
pub fn np_commutes(a: &Algebroid, n: &EndoTensor, p: &FiberMultivector) -> CheckReport {
    let m = n.matmul(&bivector_matrix(p));
    let r = p.dim();
    for i in 0..r {
        for j in i..r {
            let s = m.entry(i, j) + m.entry(j, i);
            if !s.is_zero() {
                return CheckReport::failed("np_equals_pn_star", format!("(e*{},e*{})", i + 1, j + 1), s.display(&names(a)).to_string())
                    .with_notes("NP - PN* at the given pair");
            }
        }
    }
    CheckReport::passed("np_equals_pn_star")
}

fn equality_report(name: &str, at: &str, lhs: &SpaceMultivector, rhs: &SpaceMultivector) -> Result<CheckReport> {
    let diff = lhs.sub(rhs)?;
    Ok(space_zero_report(name, at, &diff).with_notes(format!("{} vs {}", lhs.render(), rhs.render())))
}

/// `(d_T P)_N = L_{J_E(N)} d_T P`.
pub fn lifted_deformation(a: &Algebroid, n: &EndoTensor, p: &FiberMultivector) -> Result<SpaceMultivector> {
    let j = lifts::j_field(a, n, a.carrier())?;
    lifts::space_lie_derivative(&j, &lifts::complete_lift(a, p)?)
}

/// Poisson-Nijenhuis conditions; the last row is informational.
pub fn check_pn(a: &Algebroid, p: &FiberMultivector, n: &EndoTensor) -> Result<Vec<CheckReport>> {
    require_lie(a)?;
    require_bivector(a, p)?;
    let mut out = vec![is_poisson_for(a, p)?, is_nijenhuis(a, n)?, np_commutes(a, n, p)];
    let deformed = lifts::complete_lift_deformed_rebuilt(a, n, p)?;
    let lie = lifted_deformation(a, n, p)?;
    out.push(equality_report("lift_compatibility", "d_T^{Lambda_N}(P) - (d_T P)_N", &deformed, &lie)?);
    let np = lifts::complete_lift(a, &np_bivector(n, p))?;
    out.push(equality_report("lift_compatibility_np", "(d_T P)_N - d_T(NP)", &lie, &np)?.informational());
    Ok(out)
}

/// Generators of degree at most one: base coordinates, basis forms and a
/// mixed pair with polynomial coefficients.
fn generators(a: &Algebroid) -> Vec<FiberForm> {
    let (m, r) = (a.base_dim(), a.rank());
    let mut out: Vec<FiberForm> = (0..m).map(|b| FiberForm::scalar(r, Polynomial::var(Variable::base(b)))).collect();
    out.extend((0..r).map(|i| FiberForm::basis(r, &[i])));
    out
}

fn mixed_pair(a: &Algebroid) -> (FiberForm, FiberForm) {
    let (m, r) = (a.base_dim(), a.rank());
    let coord = |k: usize| if m == 0 { Polynomial::zero() } else { Polynomial::var(Variable::base(k % m)) };
    let mu: Vec<Polynomial> = (0..r).map(|i| Polynomial::int(i as i64 + 1) + &coord(i)).collect();
    let nu: Vec<Polynomial> = (0..r).map(|i| &coord(i + 1) * &coord(i) - Polynomial::int(2 * i as i64 - 1)).collect();
    (FiberForm::from_vector(&mu), FiberForm::from_vector(&nu))
}

fn form_label(a: &Algebroid, w: &FiberForm) -> String {
    render_form(w, &names(a))
}

/// Bracket of the structure `dual` (on `E*`) on elements of `wedge E*`.
fn dual_bracket(dual: &Algebroid, u: &FiberForm, v: &FiberForm) -> Result<FiberForm> {
    Ok(calculus::schouten(dual, &u.clone().retag(), &v.clone().retag())?.retag())
}

/// `d[mu, nu] = [d mu, nu] + (-1)^{|mu|+1} [mu, d nu]` on generators, where
/// `d` comes from `base` and the bracket from `dual`.
pub fn derivation_compatibility(base: &Algebroid, dual: &Algebroid, name: &str) -> Result<CheckReport> {
    let gens = generators(base);
    let mut pairs: Vec<(FiberForm, FiberForm)> = Vec::new();
    for u in &gens {
        for v in &gens {
            pairs.push((u.clone(), v.clone()));
        }
    }
    pairs.push(mixed_pair(base));
    for (u, v) in &pairs {
        let lhs = if u.degree() + v.degree() == 0 {
            FiberForm::zero(base.rank(), 0)
        } else {
            calculus::exterior_derivative(base, &dual_bracket(dual, u, v)?)?
        };
        let du = calculus::exterior_derivative(base, u)?;
        let dv = calculus::exterior_derivative(base, v)?;
        let mut rhs = dual_bracket(dual, &du, v)?;
        let second = dual_bracket(dual, u, &dv)?;
        if u.degree() % 2 == 1 {
            rhs += second;
        } else {
            rhs = rhs - second;
        }
        let diff = lhs - rhs;
        if !diff.is_zero() {
            return Ok(CheckReport::failed(
                name,
                format!("({}, {})", form_label(base, u), form_label(base, v)),
                form_label(base, &diff),
            ));
        }
    }
    Ok(CheckReport::passed(name))
}

/// `d' X = [P, X]` for the structure induced on `E*` by `d_T P`, on base
/// coordinates and basis sections.
pub fn differential_matches_schouten(a: &Algebroid, p: &FiberMultivector) -> Result<CheckReport> {
    let dual = lifts::lifted_algebroid(a, p)?;
    let (m, r) = (a.base_dim(), a.rank());
    let mut args: Vec<FiberMultivector> =
        (0..m).map(|b| FiberMultivector::scalar(r, Polynomial::var(Variable::base(b)))).collect();
    args.extend((0..r).map(|i| FiberMultivector::basis(r, &[i])));
    for x in &args {
        let lhs: FiberMultivector = calculus::exterior_derivative(&dual, &x.clone().retag())?.retag();
        let rhs = calculus::schouten(a, p, x)?;
        let diff = &lhs - &rhs;
        if !diff.is_zero() {
            return Ok(CheckReport::failed(
                "differential_is_schouten",
                render_multivector(x, &names(a)),
                render_multivector(&diff, &names(a)),
            ));
        }
    }
    Ok(CheckReport::passed("differential_is_schouten"))
}

/// `1/2 [P,P](mu, nu, gamma) - <[P_mu, P_nu] - P~([mu, nu]), gamma>`, with the
/// bracket of forms induced by `d_T P`. Vanishes for every bivector `P`.
pub fn fp23_defect(a: &Algebroid, p: &FiberMultivector, mu: &FiberForm, nu: &FiberForm, gamma: &FiberForm) -> Result<Polynomial> {
    require_bivector(a, p)?;
    let sq = calculus::schouten(a, p, p)?;
    let lhs = calculus::pair(&sq, &[mu.clone(), nu.clone(), gamma.clone()])? * Polynomial::constant(rat(1, 2));
    let bracket = lifts::lifted_form_bracket(a, p, mu, nu)?;
    let p_bracket = calculus::interior_form(&bracket, p)?;
    let p_mu = Section::from_multivector(&calculus::interior_form(mu, p)?);
    let p_nu = Section::from_multivector(&calculus::interior_form(nu, p)?);
    let sections = a.bracket_sections(&p_mu, &p_nu)?.to_multivector();
    let rhs = calculus::pair(&(&sections - &p_bracket), std::slice::from_ref(gamma))?;
    Ok(lhs - rhs)
}

fn fp23_report(a: &Algebroid, p: &FiberMultivector) -> Result<CheckReport> {
    let r = a.rank();
    let mut forms: Vec<FiberForm> = (0..r).map(|i| FiberForm::basis(r, &[i])).collect();
    let (mu, nu) = mixed_pair(a);
    forms.push(mu);
    forms.push(nu);
    for u in &forms {
        for v in &forms {
            for w in &forms {
                let d = fp23_defect(a, p, u, v, w)?;
                if !d.is_zero() {
                    return Ok(CheckReport::failed(
                        "schouten_square_identity",
                        format!("({}, {}, {})", form_label(a, u), form_label(a, v), form_label(a, w)),
                        d.display(&names(a)).to_string(),
                    ));
                }
            }
        }
    }
    Ok(CheckReport::passed("schouten_square_identity"))
}

/// Differential, square identity and derivation compatibility for the pair
/// `(Lambda, d_T P)`.
pub fn bialgebroid_suite(a: &Algebroid, p: &FiberMultivector) -> Result<Vec<CheckReport>> {
    require_lie(a)?;
    require_bivector(a, p)?;
    let poisson = is_poisson_for(a, p)?;
    if !poisson.pass {
        let w = poisson.witness.clone().map(|w| format!("[P,P] at {} = {}", w.at, w.value)).unwrap_or_default();
        return Err(Error::Precondition(format!("P is not a Poisson tensor: {w}")));
    }
    let dual = lifts::lifted_algebroid(a, p)?;
    Ok(vec![
        differential_matches_schouten(a, p)?,
        fp23_report(a, p)?,
        derivation_compatibility(a, &dual, "derivation_compatibility")?,
    ])
}

pub fn check_bialgebroid(a: &Algebroid, p: &FiberMultivector) -> Result<CheckReport> {
    let rows = bialgebroid_suite(a, p)?;
    Ok(match rows.iter().find(|r| !r.pass) {
        None => CheckReport::passed("bialgebroid"),
        Some(r) => r.clone().renamed("bialgebroid").with_notes(format!("failed row {}", r.name)),
    })
}

fn poisson_space_report(name: &str, t: &SpaceMultivector) -> Result<CheckReport> {
    let sq = lifts::space_schouten(t, t)?;
    Ok(space_zero_report(name, "[T,T]", &sq))
}

fn related_report(name: &str, phi: &FiberLinearMap, t1: &SpaceMultivector, t2: &SpaceMultivector) -> Result<CheckReport> {
    let r = lifts::are_related(phi, t1, t2)?;
    Ok(match r.witness {
        None => CheckReport::passed(name),
        Some((idx, c)) => {
            let at = idx.iter().map(|&d| phi.target().direction_name(d as usize)).collect::<Vec<_>>().join("^");
            let src = phi.source().names();
            CheckReport::failed(name, at, c.display(&src).to_string())
        }
    })
}

/// Poisson property of the four corners, relatedness along the four arrows,
/// commutativity, the bottom-right equality and the four bialgebroid pairs.
pub fn diagram_report(a: &Algebroid, p: &FiberMultivector, n: &EndoTensor) -> Result<Vec<CheckReport>> {
    require_lie(a)?;
    require_bivector(a, p)?;
    let lambda = lifts::to_linear_bivector(a)?;
    let lambda_n = lifts::lambda_n_lie(a, n)?;
    let dtp = lifts::complete_lift(a, p)?;
    let dtp_n = lifted_deformation(a, n, p)?;
    let np = np_bivector(n, p);
    let dt_np = lifts::complete_lift(a, &np)?;
    let mp = FiberLinearMap::minus_p_tilde(a, p)?;
    let nt = FiberLinearMap::n_tilde(a, n)?;
    let ns = FiberLinearMap::n_star_tilde(a, n)?;
    let mut out = vec![
        poisson_space_report("poisson_lambda", &lambda)?,
        poisson_space_report("poisson_lambda_n", &lambda_n)?,
        poisson_space_report("poisson_lift_p", &dtp)?,
        poisson_space_report("poisson_lift_p_n", &dtp_n)?,
        related_report("related_top", &mp, &lambda, &dtp)?,
        related_report("related_left", &ns, &lambda, &lambda_n)?,
        related_report("related_right", &nt, &dtp, &dtp_n)?,
        related_report("related_bottom", &mp, &lambda_n, &dtp_n)?,
    ];
    let top_right = lifts::compose(&mp, &nt)?;
    let left_bottom = lifts::compose(&ns, &mp)?;
    out.push(if top_right == left_bottom {
        CheckReport::passed("commutative")
    } else {
        CheckReport::failed("commutative", "N o (-P~) - (-P~) o N*", "nonzero")
            .with_notes(np_commutes(a, n, p).witness.map(|w| format!("{} = {}", w.at, w.value)).unwrap_or_default())
    });
    out.push(equality_report("bottom_equality", "(d_T P)_N - d_T(NP)", &dtp_n, &dt_np)?);
    let deformed = lifts::deformed_algebroid(a, n)?;
    let duals = [("lift_p", lifts::lifted_algebroid(a, p)?), ("lift_np", lifts::lifted_algebroid(a, &np)?)];
    for (left_name, left) in [("lambda", a), ("lambda_n", &deformed)] {
        for (right_name, dual) in &duals {
            let name = format!("bialgebroid_{left_name}_{right_name}");
            out.push(derivation_compatibility(left, dual, &name)?);
        }
    }
    Ok(out)
}

/// Every component index tuple of degree `k` over rank `n`.
pub fn basis_multivectors(n: usize, k: usize) -> Vec<FiberMultivector> {
    increasing_tuples(n, k).into_iter().map(|idx| FiberMultivector::basis(n, &idx)).collect()
}
