//! Route dispatch for M = A ∗_D B, and the report assembly shared by
//! all routes: free-dimension cross-check, locator conservation check,
//! certificate replay, canonical ordering.

use super::certificate::{verify_certificate, CertRule, CertStep};
use super::locator::{Locator, LocatorEntry, TrackedId};
use super::problem::Problem;
use super::report::{OutputPart, ResultReport, Status};
use super::{closed_form, peel, scalars, strip};
use crate::model::{fdim, Inclusion, MultiMatrix, TracialAlgebra};
use crate::rat::ExtRat;

/// A route's answer: output parts, the locator for this problem's
/// tracked projections, and the certificate steps that produced it.
pub(crate) struct Solved {
    pub parts: Vec<OutputPart>,
    pub locator: Locator,
    pub steps: Vec<CertStep>,
}

/// A locator whose single output part carries every tracked projection.
pub(crate) fn single_column_locator(p: &Problem) -> Locator {
    Locator::new(
        p.tracked_expected()
            .into_iter()
            .map(|(id, total)| LocatorEntry {
                id,
                traces: vec![total],
            })
            .collect(),
    )
}

/// A partial answer covering the whole problem with one unresolved leaf.
pub(crate) fn collapse_unresolved(p: &Problem, detail: String) -> Solved {
    Solved {
        parts: vec![OutputPart::Unresolved {
            weight: ExtRat::one(),
            detail,
        }],
        locator: single_column_locator(p),
        steps: Vec::new(),
    }
}

/// One side coincides with the amalgam: the product is the other side.
/// `perm[i]` is the amalgam block the identified side's summand i maps
/// onto.
fn trivial_side(p: &Problem, side: char, perm: &[usize], depth: u32) -> Result<Solved, String> {
    let (other, other_incl) = match side {
        'A' => (&p.b, &p.incl_b),
        _ => (&p.a, &p.incl_a),
    };
    let width = other.summands.len();
    let global = |prof: &crate::model::ProjectionSpec| -> Vec<ExtRat> {
        (0..width)
            .map(|l| other.summands[l].weight.clone() * prof.relative_trace(l, other))
            .collect()
    };
    let mut entries = Vec::new();
    for j in 0..p.d.summands.len() {
        entries.push(LocatorEntry {
            id: TrackedId::D(j),
            traces: global(&other_incl.min_profile(j, other)),
        });
    }
    let unit_vec =
        |i: usize| -> Vec<ExtRat> { global(&other_incl.unit_profile(perm[i], &p.d, other)) };
    match side {
        'A' => {
            for i in 0..p.a.summands.len() {
                entries.push(LocatorEntry {
                    id: TrackedId::A(i),
                    traces: unit_vec(i),
                });
            }
            for l in 0..width {
                let mut traces = vec![ExtRat::zero(); width];
                traces[l] = other.summands[l].weight.clone();
                entries.push(LocatorEntry {
                    id: TrackedId::B(l),
                    traces,
                });
            }
        }
        _ => {
            for l in 0..width {
                let mut traces = vec![ExtRat::zero(); width];
                traces[l] = other.summands[l].weight.clone();
                entries.push(LocatorEntry {
                    id: TrackedId::A(l),
                    traces,
                });
            }
            for i in 0..p.b.summands.len() {
                entries.push(LocatorEntry {
                    id: TrackedId::B(i),
                    traces: unit_vec(i),
                });
            }
        }
    }
    Ok(Solved {
        parts: other
            .summands
            .iter()
            .map(|s| OutputPart::Summand(s.clone()))
            .collect(),
        locator: Locator::new(entries),
        steps: vec![CertStep::new(
            depth,
            CertRule::TrivialSide {
                side,
                output: other.clone(),
            },
        )],
    })
}

/// Pick and run a rewrite route. Order: identified side, single-factor
/// side, factor-summand peel, scalar amalgam, tensor strip; anything
/// left is reported unresolved.
pub(crate) fn solve(p: &Problem, depth: u32) -> Result<Solved, String> {
    if depth > 64 {
        return Err("rewrite recursion exceeded its depth bound".to_string());
    }
    if let Some(perm) = p.incl_a.isomorphism_onto(&p.d, &p.a) {
        return trivial_side(p, 'A', &perm, depth);
    }
    if let Some(perm) = p.incl_b.isomorphism_onto(&p.d, &p.b) {
        return trivial_side(p, 'B', &perm, depth);
    }
    if p.b.single_factor().is_some() {
        return closed_form::solve_closed(p, false, depth);
    }
    if p.a.single_factor().is_some() {
        return closed_form::solve_closed(p, true, depth);
    }
    let a_f = p.a.has_factor_summand();
    let b_f = p.b.has_factor_summand();
    // Peeling a factor summand needs somewhere for its own recursion to
    // land: over the scalars with factor summands on one side only, the
    // scalar route covers the whole problem directly.
    if (a_f || b_f) && (!p.d.is_scalars() || (a_f && b_f)) {
        return peel::solve_peel(p, depth);
    }
    if p.d.is_scalars() {
        return scalars::solve_scalars(p, depth);
    }
    if let Some(plan) = strip::find_strip(p, true) {
        return strip::solve_strip(p, &plan, depth);
    }
    Ok(collapse_unresolved(
        p,
        format!("no applicable rewrite: {}", p.describe()),
    ))
}

/// Assemble the final report for `problem` from a route's answer: check
/// free-dimension additivity on resolved outputs, locator conservation,
/// and certificate replay; order parts canonically.
pub(crate) fn finish(problem: &Problem, sol: Solved) -> ResultReport {
    let prediction = problem.fdim_prediction();
    if let Some(alg) = sol
        .parts
        .iter()
        .map(|p| p.as_summand().cloned())
        .collect::<Option<Vec<_>>>()
        .map(TracialAlgebra::new)
    {
        let got = fdim(&alg).value;
        if got != prediction {
            return ResultReport::internal_error(format!(
                "free dimension of the output is {got}, additivity demands {prediction}"
            ));
        }
    }
    if let Err(e) = sol.locator.check(
        &sol.parts
            .iter()
            .map(|q| q.weight().clone())
            .collect::<Vec<_>>(),
        &problem.tracked_expected(),
    ) {
        return ResultReport::internal_error(format!("locator conservation failed: {e}"));
    }
    if let Err(e) = verify_certificate(&sol.steps) {
        return ResultReport::internal_error(format!("certificate replay failed: {e}"));
    }
    let status = if sol.parts.iter().all(|q| q.as_summand().is_some()) {
        Status::Resolved
    } else {
        Status::Partial
    };
    let in_r0 = ResultReport::computed_in_r0(&sol.parts) && prediction.is_finite();
    ResultReport {
        status,
        parts: sol.parts,
        fdim: Some(prediction),
        in_r0,
        locator: sol.locator,
        certificate: sol.steps,
        diagnostics: Vec::new(),
    }
    .canonicalized()
}

/// Compute M = A ∗_D B for a validated problem.
pub fn compute(problem: &Problem) -> ResultReport {
    let diagnostics = problem.validate();
    if !diagnostics.is_empty() {
        return ResultReport::error(diagnostics);
    }
    match solve(problem, 0) {
        Ok(sol) => finish(problem, sol),
        Err(msg) => ResultReport::internal_error(msg),
    }
}

/// Compute M = A ∗_D B.
pub fn amalgamated_free_product(
    a: TracialAlgebra,
    b: TracialAlgebra,
    d: MultiMatrix,
    incl_a: Inclusion,
    incl_b: Inclusion,
) -> ResultReport {
    compute(&Problem::new(a, b, d, incl_a, incl_b))
}

/// Convenience entry for plain free products (amalgam = ℂ).
pub fn free_product_over_scalars(a: TracialAlgebra, b: TracialAlgebra) -> ResultReport {
    compute(&Problem::over_scalars(a, b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Coupling, SummandKind};
    use crate::rat::ExtRat;

    fn rat(p: i64, q: i64) -> ExtRat {
        ExtRat::ratio(p, q)
    }

    #[test]
    fn identity_inclusion_returns_the_other_side() {
        let d = MultiMatrix::new(vec![(2, rat(1, 2)), (1, rat(1, 2))]);
        let a = TracialAlgebra::new(vec![
            crate::model::Summand::new(SummandKind::Matrix(2), rat(1, 2)),
            crate::model::Summand::new(SummandKind::Matrix(1), rat(1, 2)),
        ]);
        let incl_a = Inclusion::new(vec![
            vec![Coupling::Mult(1), Coupling::Mult(0)],
            vec![Coupling::Mult(0), Coupling::Mult(1)],
        ]);
        let b = TracialAlgebra::single(SummandKind::Ifgf(rat(2, 1)));
        let incl_b = Inclusion::new(vec![vec![
            Coupling::Trace(rat(1, 4)),
            Coupling::Trace(rat(1, 2)),
        ]]);
        let report = amalgamated_free_product(a, b.clone(), d, incl_a, incl_b);
        assert_eq!(report.status, Status::Resolved);
        assert_eq!(report.output_algebra().unwrap(), b);
        assert_eq!(report.certificate.len(), 1);
        assert_eq!(report.certificate[0].rule.tag(), "TRIVIAL_AD");
        assert_eq!(report.fdim, Some(rat(2, 1)));
        // The amalgam's minimal projections land in the factor with
        // their own traces.
        assert_eq!(
            report.locator.get(crate::engine::locator::TrackedId::D(0)),
            Some(&[rat(1, 4)][..])
        );
    }

    #[test]
    fn unreduced_products_report_partial_with_the_sub_problem() {
        let d = MultiMatrix::new(vec![(1, rat(1, 2)), (1, rat(1, 2))]);
        let m2 = TracialAlgebra::single(SummandKind::Matrix(2));
        let incl = Inclusion::new(vec![vec![Coupling::Mult(1), Coupling::Mult(1)]]);
        let report = amalgamated_free_product(m2.clone(), m2, d, incl.clone(), incl);
        assert_eq!(report.status, Status::Partial);
        assert_eq!(report.fdim, Some(rat(1, 1)));
        assert_eq!(report.parts.len(), 1);
        match &report.parts[0] {
            OutputPart::Unresolved { weight, detail } => {
                assert!(weight.is_one());
                assert!(detail.contains("matrix(2):1"), "{detail}");
            }
            other => panic!("expected an unresolved part, got {other}"),
        }
    }

    #[test]
    fn invalid_input_is_an_error_with_diagnostics() {
        let a = TracialAlgebra::new(vec![crate::model::Summand::new(
            SummandKind::Matrix(1),
            rat(1, 2),
        )]);
        let b = TracialAlgebra::single(SummandKind::HypII1);
        let report = free_product_over_scalars(a, b);
        assert_eq!(report.status, Status::Error);
        assert_eq!(report.fdim, None);
        assert!(!report.diagnostics.is_empty());
    }
}
