use std::fmt;

use algkit_core::algebroid::{render_form, FiberForm, FiberMultivector};
use algkit_core::calculus;
use algkit_core::lifts::{self, space_schouten};
use algkit_core::pn::{self, CheckReport};
use algkit_core::{EndoTensor, Error, Section};

use crate::definition::{Definition, Tensor};
use crate::report::Report;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Lift,
    Deform,
    Torsion,
    PnCheck,
    BialgebroidCheck,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Lift => "lift",
            Command::Deform => "deform",
            Command::Torsion => "torsion",
            Command::PnCheck => "pn-check",
            Command::BialgebroidCheck => "bialgebroid-check",
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub tensor: Option<String>,
    pub endo: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CommandError {
    Usage(String),
    Core(Error),
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CommandError::Usage(m) => f.write_str(m),
            CommandError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CommandError {
    fn from(e: Error) -> Self {
        CommandError::Core(e)
    }
}

type Result<T> = std::result::Result<T, CommandError>;

fn multivector<'a>(def: &'a Definition, opts: &Options) -> Result<&'a FiberMultivector> {
    let name = opts.tensor.as_deref().ok_or_else(|| CommandError::Usage("--tensor is required".into()))?;
    match def.tensors.get(name) {
        Some(Tensor::Multivector(u)) => Ok(u),
        Some(Tensor::Endomorphism(_)) => Err(CommandError::Usage(format!("tensor `{name}` is an endomorphism, expected a multivector"))),
        None => Err(CommandError::Usage(format!("unknown tensor `{name}`"))),
    }
}

fn bivector<'a>(def: &'a Definition, opts: &Options) -> Result<&'a FiberMultivector> {
    let p = multivector(def, opts)?;
    if p.degree() != 2 {
        return Err(CommandError::Usage(format!("tensor `{}` has degree {}, expected 2", opts.tensor.as_deref().unwrap_or(""), p.degree())));
    }
    Ok(p)
}

fn endomorphism<'a>(def: &'a Definition, opts: &Options) -> Result<&'a EndoTensor> {
    let name = opts.endo.as_deref().ok_or_else(|| CommandError::Usage("--endo is required".into()))?;
    match def.tensors.get(name) {
        Some(Tensor::Endomorphism(n)) => Ok(n),
        Some(Tensor::Multivector(_)) => Err(CommandError::Usage(format!("tensor `{name}` is a multivector, expected an endomorphism"))),
        None => Err(CommandError::Usage(format!("unknown tensor `{name}`"))),
    }
}

/// Adds the Lie rows and reports whether the structure is Lie.
fn lie_gate(def: &Definition, report: &mut Report) -> bool {
    let rows = pn::lie_reports(&def.algebroid);
    let ok = pn::overall(&rows);
    if !ok {
        for r in rows {
            report.check(r);
        }
    }
    ok
}

pub fn run(cmd: Command, def: &Definition, input: &[u8], opts: &Options) -> Result<Report> {
    let a = &def.algebroid;
    let names = a.total_space_names();
    let mut report = Report::new(cmd.name(), input);
    match cmd {
        Command::Validate => {
            for r in pn::lie_reports(a) {
                report.check(r);
            }
            if a.is_skew() && a.validate().skew_consistent {
                let lambda = lifts::to_linear_bivector(a)?;
                report.output("Lambda", lambda.render());
                let sq = space_schouten(&lambda, &lambda)?;
                report.check(if sq.is_zero() {
                    CheckReport::passed("lambda_poisson")
                } else {
                    CheckReport::failed("lambda_poisson", "[Lambda,Lambda]", sq.render())
                });
            }
        }
        Command::Lift => {
            let u = multivector(def, opts)?;
            let lifted = lifts::complete_lift(a, u)?;
            report.output(format!("d_T({})", opts.tensor.as_deref().unwrap_or_default()), lifted.render());
            report.check(if lifted.fiber_degree() <= 1 {
                CheckReport::passed("lift_is_linear")
            } else {
                CheckReport::failed("lift_is_linear", "d_T", lifted.render())
            });
        }
        Command::Deform => {
            let n = endomorphism(def, opts)?;
            let by_lie = lifts::lambda_n_lie(a, n)?;
            let local = lifts::lambda_n_local(a, n)?;
            report.output("Lambda_N", by_lie.render());
            let r = a.rank();
            for i in 0..r {
                for j in i + 1..r {
                    let b = calculus::deformed_bracket(a, n, &Section::basis(r, i), &Section::basis(r, j))?;
                    report.output(format!("[e{},e{}]_N", i + 1, j + 1), b.render(&names, "e"));
                }
            }
            let diff = by_lie.sub(&local)?;
            report.check(if diff.is_zero() {
                CheckReport::passed("lambda_n_routes")
            } else {
                CheckReport::failed("lambda_n_routes", "Lie derivative - local formula", diff.render())
            });
        }
        Command::Torsion => {
            let n = endomorphism(def, opts)?;
            let t = calculus::nijenhuis_torsion(a, n)?;
            report.output("torsion", t.render(&names));
            report.check(pn::is_nijenhuis(a, n)?);
        }
        Command::PnCheck => {
            let p = bivector(def, opts)?;
            let n = endomorphism(def, opts)?;
            if !lie_gate(def, &mut report) {
                return Ok(report);
            }
            let np = pn::np_bivector(n, p);
            report.output("NP", algkit_core::algebroid::render_multivector(&np, &names));
            report.output("d_T(P)", lifts::complete_lift(a, p)?.render());
            report.output("d_T^{Lambda_N}(P)", lifts::complete_lift_deformed_rebuilt(a, n, p)?.render());
            report.output("(d_T P)_N", pn::lifted_deformation(a, n, p)?.render());
            report.output("d_T(NP)", lifts::complete_lift(a, &np)?.render());
            for r in pn::check_pn(a, p, n)? {
                report.check(r);
            }
            for mut r in pn::diagram_report(a, p, n)? {
                r.name = format!("diagram.{}", r.name);
                report.check(r.informational());
            }
        }
        Command::BialgebroidCheck => {
            let p = bivector(def, opts)?;
            if !lie_gate(def, &mut report) {
                return Ok(report);
            }
            report.output("d_T(P)", lifts::complete_lift(a, p)?.render());
            let r = a.rank();
            for i in 0..r {
                for j in i + 1..r {
                    let b = lifts::lifted_form_bracket(a, p, &FiberForm::basis(r, &[i]), &FiberForm::basis(r, &[j]))?;
                    report.output(format!("[e*{},e*{}]_P", i + 1, j + 1), render_form(&b, &names));
                }
            }
            let poisson = pn::is_poisson_for(a, p)?;
            if !poisson.pass {
                report.check(poisson);
                return Ok(report);
            }
            for r in pn::bialgebroid_suite(a, p)? {
                report.check(r);
            }
        }
    }
    Ok(report)
}
