//! Closed form for a product with a single diffuse factor side:
//! the output is one interpolated free-group factor with parameter
//! t = s + fdim(other side) − fdim(D), where s is the factor's
//! parameter (1 for the hyperfinite factor).

use super::certificate::{CertRule, CertStep};
use super::dispatch::{finish, single_column_locator, Solved};
use super::problem::Problem;
use super::report::{OutputPart, ResultReport};
use crate::model::{fdim, fdim_multimatrix, Summand, SummandKind};
use crate::rat::ExtRat;

/// `swapped = false`: B is the factor side; `true`: A is.
pub(crate) fn solve_closed(p: &Problem, swapped: bool, depth: u32) -> Result<Solved, String> {
    let (s_side, factor_side) = if swapped { (&p.b, &p.a) } else { (&p.a, &p.b) };
    let factor_kind = factor_side
        .single_factor()
        .ok_or("closed form requires a single-factor side")?;
    let s = factor_kind
        .factor_param()
        .expect("factor kinds carry a parameter");
    let x = fdim(s_side).value;
    let fdim_d = fdim_multimatrix(&p.d).value;
    let t = if s.is_inf() || x.is_inf() {
        ExtRat::inf()
    } else {
        s + x.clone() - fdim_d.clone()
    };
    if t <= ExtRat::one() {
        return Err(format!(
            "single-factor product parameter {t} is not above 1 for {}",
            p.describe()
        ));
    }
    let output = Summand::new(SummandKind::Ifgf(t.clone()), ExtRat::one());
    let step = CertStep::new(
        depth,
        CertRule::ClosedForm {
            swapped,
            a: s_side.clone(),
            d: p.d.clone(),
            factor: Summand::new(factor_kind.clone(), ExtRat::one()),
            x,
            fdim_d,
            t,
            output: output.clone(),
        },
    );
    Ok(Solved {
        parts: vec![OutputPart::Summand(output)],
        locator: single_column_locator(p),
        steps: vec![step],
    })
}

/// Public entry: compute a single-factor product by the closed form
/// alone, regardless of what the general dispatch would pick.
pub fn single_factor_closed_form(problem: &Problem) -> ResultReport {
    let diagnostics = problem.validate();
    if !diagnostics.is_empty() {
        return ResultReport::error(diagnostics);
    }
    let swapped = if problem.b.single_factor().is_some() {
        false
    } else if problem.a.single_factor().is_some() {
        true
    } else {
        return ResultReport::internal_error(
            "closed form requires one side to be a single diffuse factor",
        );
    };
    match solve_closed(problem, swapped, 0) {
        Ok(sol) => finish(problem, sol),
        Err(msg) => ResultReport::internal_error(msg),
    }
}
