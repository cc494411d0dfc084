//! Recursive route for a product with a single diffuse factor side,
//! independent of the closed form: split off the smallest amalgam
//! block, solve the restricted product, and reassemble the factor by
//! compressions, free joins and dilations. Every level is audited
//! against the closed-form value, so the two routes check one another.

use super::certificate::{
    carrier_split, complement_profile, compress_param, dilate_param, profile_of, CertRule, CertStep,
};
use super::closed_form;
use super::dispatch::{finish, single_column_locator, Solved};
use super::problem::Problem;
use super::report::{OutputPart, ResultReport};
use crate::model::{
    compress_dropping_zeros, fdim, fdim_multimatrix, restrict_to_corner, Coupling, Inclusion,
    MultiMatrix, Summand, SummandKind, TracialAlgebra,
};
use crate::rat::ExtRat;

/// One level's answer: a single weight-1 factor summand and its steps.
struct Level {
    output: Summand,
    steps: Vec<CertStep>,
}

/// The unique trace-compatible embedding of `d` into a single factor.
fn factor_inclusion(d: &MultiMatrix) -> Inclusion {
    Inclusion::new(vec![(0..d.summands.len())
        .map(|j| Coupling::Trace(d.min_trace(j)))
        .collect()])
}

fn compress_factor(s: &Summand, rel: &ExtRat) -> Summand {
    let kind = match &s.kind {
        SummandKind::HypII1 => SummandKind::HypII1,
        SummandKind::Ifgf(t) => SummandKind::Ifgf(compress_param(t, rel)),
        k => unreachable!("not a factor kind: {k}"),
    };
    Summand::new(kind, ExtRat::one())
}

fn dilate_summand(s: &Summand, lambda: &ExtRat) -> Summand {
    let kind = match &s.kind {
        SummandKind::HypII1 => SummandKind::HypII1,
        SummandKind::Ifgf(t) => SummandKind::Ifgf(dilate_param(t, lambda)),
        k => unreachable!("not a factor kind: {k}"),
    };
    Summand::new(kind, ExtRat::one())
}

/// Solve one level: B must be a single factor. Returns the weight-1
/// output summand after auditing it against the closed-form value.
fn solve_factor_level(p: &Problem, depth: u32) -> Result<Level, String> {
    if depth > 64 {
        return Err("recursive route exceeded its depth bound".to_string());
    }
    let factor_kind =
        p.b.single_factor()
            .ok_or("recursive route requires a single-factor side")?
            .clone();
    let factor = Summand::new(factor_kind, ExtRat::one());
    let s = factor
        .kind
        .factor_param()
        .expect("factor kinds carry a parameter");

    let level = if !p.d.is_abelian() {
        corner_entry(p, &factor, depth)?
    } else if p.incl_a.isomorphism_onto(&p.d, &p.a).is_some() {
        Level {
            output: p.b.summands[0].clone(),
            steps: vec![CertStep::new(
                depth,
                CertRule::TrivialSide {
                    side: 'A',
                    output: p.b.clone(),
                },
            )],
        }
    } else if p.d.summands.len() == 1 {
        let sol = closed_form::solve_closed(p, false, depth)?;
        let output = sol.parts[0]
            .as_summand()
            .expect("closed form yields one factor")
            .clone();
        Level {
            output,
            steps: sol.steps,
        }
    } else {
        split_join(p, &factor, depth)?
    };

    // Audit: the level's output must carry the closed-form parameter.
    let x = fdim(&p.a).value;
    let t_check = if s.is_inf() || x.is_inf() {
        ExtRat::inf()
    } else {
        s + x - fdim_multimatrix(&p.d).value
    };
    let agrees = match &level.output.kind {
        SummandKind::HypII1 => t_check.is_one(),
        SummandKind::Ifgf(t) => *t == t_check,
        _ => false,
    };
    if !agrees {
        return Err(format!(
            "recursive route landed on {} where the closed form gives parameter {t_check}",
            level.output.kind
        ));
    }
    Ok(level)
}

/// Non-abelian amalgam: cut everything down by one minimal projection
/// per block, solve the abelian-amalgam corner, dilate back.
fn corner_entry(p: &Problem, factor: &Summand, depth: u32) -> Result<Level, String> {
    let red = restrict_to_corner(&p.d, &p.a, &p.incl_a);
    let corner_b = compress_factor(factor, &red.scale);
    let sub = Problem::new(
        red.target.clone(),
        TracialAlgebra::new(vec![corner_b.clone()]),
        red.source.clone(),
        red.inclusion,
        factor_inclusion(&red.source),
    );
    debug_assert!(
        sub.validate().is_empty(),
        "corner problem: {:?}",
        sub.validate()
    );
    let inner = solve_factor_level(&sub, depth + 1)?;
    let output = dilate_summand(&inner.output, &red.scale);
    let mut steps = vec![CertStep::new(
        depth,
        CertRule::CornerScale {
            scale: red.scale,
            a: p.a.clone(),
            d: p.d.clone(),
            b_param: factor.kind.factor_param().unwrap(),
            q_profile: profile_of(&red.projection),
            corner_a: red.target,
            corner_d: red.source,
            corner_b,
            sub_output: inner.output,
            output: output.clone(),
        },
    )];
    steps.extend(inner.steps);
    Ok(Level { output, steps })
}

/// Abelian amalgam with at least two blocks and A ≇ D: restrict away
/// the smallest block, recurse, then rebuild the full factor.
fn split_join(p: &Problem, factor: &Summand, depth: u32) -> Result<Level, String> {
    let d = &p.d;
    let j_star = (0..d.summands.len())
        .min_by_key(|&j| d.summands[j].weight.clone())
        .expect("abelian amalgam has blocks");
    let beta = d.summands[j_star].weight.clone();
    let one_minus = ExtRat::one() - beta.clone();
    let b_param = factor.kind.factor_param().unwrap();

    // (b) Restrict to 1 − p, where p is the image of the split-off
    // block's projection in A.
    let proj = p.incl_a.min_profile(j_star, &p.a);
    let complement = complement_profile(&p.a, &proj)?;
    let (sub_a, _, kept) = compress_dropping_zeros(&p.a, &complement).map_err(|e| e.to_string())?;
    let sub_d = MultiMatrix::new(
        (0..d.summands.len())
            .filter(|&j| j != j_star)
            .map(|j| (1, d.summands[j].weight.clone() / one_minus.clone()))
            .collect(),
    );
    let sub_b = compress_factor(factor, &one_minus);
    let sub_incl_a = Inclusion::new(
        kept.iter()
            .map(|&i| {
                (0..d.summands.len())
                    .filter(|&j| j != j_star)
                    .map(|j| match &p.incl_a.rows[i][j] {
                        Coupling::Mult(k) => Coupling::Mult(*k),
                        Coupling::Trace(c) => Coupling::Trace(c.clone() / one_minus.clone()),
                    })
                    .collect()
            })
            .collect(),
    );
    let sub = Problem::new(
        sub_a.clone(),
        TracialAlgebra::new(vec![sub_b.clone()]),
        sub_d.clone(),
        sub_incl_a,
        factor_inclusion(&sub_d),
    );
    debug_assert!(
        sub.validate().is_empty(),
        "split problem: {:?}",
        sub.validate()
    );
    let inner = solve_factor_level(&sub, depth + 1)?;
    let n1 = inner.output.clone();
    let split_step = CertStep::new(
        depth,
        CertRule::RecursionSplit {
            j_star,
            beta: beta.clone(),
            a: p.a.clone(),
            d: d.clone(),
            b_param: b_param.clone(),
            p_profile: profile_of(&proj),
            sub_a,
            sub_d,
            sub_b,
            n1: n1.clone(),
        },
    );

    // (c) Compress N₁ back under p and join it freely with the corner
    // of the augmented side.
    let (gamma, p_tilde) = carrier_split(&p.a, &proj, &beta)?;
    let f_rel = beta.clone() / one_minus.clone();
    let fn1f = compress_factor(&n1, &f_rel);
    let x_p_tilde = fdim(&p_tilde).value;
    let s_f = fn1f.kind.factor_param().unwrap();
    let t2 = if s_f.is_inf() {
        ExtRat::inf()
    } else {
        s_f + x_p_tilde.clone()
    };
    let fn2f = if x_p_tilde.is_zero() {
        fn1f.clone()
    } else {
        Summand::new(SummandKind::Ifgf(t2.clone()), ExtRat::one())
    };
    let join_step = CertStep::new(
        depth,
        CertRule::RecursionJoin {
            beta: beta.clone(),
            gamma: gamma.clone(),
            a: p.a.clone(),
            d: d.clone(),
            b_param,
            p_profile: profile_of(&proj),
            n1,
            f_rel,
            fn1f,
            p_tilde,
            x_p_tilde,
            t2,
        },
    );

    // (d) Re-expand: directly when p's image is a union of central
    // summands, otherwise through a free complement of a diffuse
    // abelian generator on the carrier remainder.
    let (rn2r, rmr, dilation, output) = if gamma.is_zero() {
        (None, None, beta.clone(), dilate_summand(&fn2f, &beta))
    } else {
        let rn2r = compress_factor(&fn2f, &(gamma.clone() / beta.clone()));
        let s_r = rn2r.kind.factor_param().unwrap();
        let rmr = Summand::new(
            SummandKind::Ifgf(if s_r.is_inf() {
                ExtRat::inf()
            } else {
                s_r + ExtRat::one()
            }),
            ExtRat::one(),
        );
        let out = dilate_summand(&rmr, &gamma);
        (Some(rn2r), Some(rmr), gamma.clone(), out)
    };
    let assemble_step = CertStep::new(
        depth,
        CertRule::RecursionAssemble {
            beta,
            gamma,
            fn2f,
            rn2r,
            rmr,
            dilation,
            output: output.clone(),
        },
    );

    let mut steps = vec![split_step];
    steps.extend(inner.steps);
    steps.push(join_step);
    steps.push(assemble_step);
    Ok(Level { output, steps })
}

/// Public entry: compute a single-factor product by the recursive
/// route alone. The factor side may be either A or B.
pub fn single_factor_recursion(problem: &Problem) -> ResultReport {
    let diagnostics = problem.validate();
    if !diagnostics.is_empty() {
        return ResultReport::error(diagnostics);
    }
    let normalized = if problem.b.single_factor().is_some() {
        problem.clone()
    } else if problem.a.single_factor().is_some() {
        problem.swapped()
    } else {
        return ResultReport::internal_error(
            "the recursive route requires one side to be a single diffuse factor",
        );
    };
    match solve_factor_level(&normalized, 0) {
        Ok(level) => finish(
            problem,
            Solved {
                parts: vec![OutputPart::Summand(level.output)],
                locator: single_column_locator(problem),
                steps: level.steps,
            },
        ),
        Err(msg) => ResultReport::internal_error(msg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::report::Status;
    use crate::model::Coupling;

    fn rat(p: i64, q: i64) -> ExtRat {
        ExtRat::ratio(p, q)
    }

    fn single_param(report: &ResultReport) -> ExtRat {
        report
            .single_factor()
            .expect("single factor output")
            .kind
            .factor_param()
            .expect("diffuse factor")
    }

    fn find_rule<'a>(report: &'a ResultReport, tag: &str) -> Vec<&'a CertRule> {
        report
            .certificate
            .iter()
            .filter(|s| s.rule.tag() == tag)
            .map(|s| &s.rule)
            .collect()
    }

    /// A = B = a parameter-2 factor over ℂ⊕ℂ with equal halves.
    fn split_halves_problem() -> Problem {
        let d = MultiMatrix::new(vec![(1, rat(1, 2)), (1, rat(1, 2))]);
        let f = TracialAlgebra::single(SummandKind::Ifgf(rat(2, 1)));
        let incl = Inclusion::new(vec![vec![
            Coupling::Trace(rat(1, 2)),
            Coupling::Trace(rat(1, 2)),
        ]]);
        Problem::new(f.clone(), f, d, incl.clone(), incl)
    }

    #[test]
    fn split_halves_chain_is_fully_recorded() {
        let p = split_halves_problem();
        let report = single_factor_recursion(&p);
        assert_eq!(report.status, Status::Resolved);
        assert_eq!(single_param(&report), rat(7, 2));

        // The restricted product N₁ is a parameter-10 factor.
        match find_rule(&report, "THM21_B")[0] {
            CertRule::RecursionSplit {
                beta, n1, sub_a, ..
            } => {
                assert_eq!(*beta, rat(1, 2));
                assert_eq!(n1.kind, SummandKind::Ifgf(rat(10, 1)));
                assert_eq!(*sub_a, TracialAlgebra::single(SummandKind::Ifgf(rat(5, 1))));
            }
            _ => unreachable!(),
        }
        match find_rule(&report, "THM21_C")[0] {
            CertRule::RecursionJoin { gamma, t2, .. } => {
                assert_eq!(*gamma, rat(1, 2));
                assert_eq!(*t2, rat(10, 1));
            }
            _ => unreachable!(),
        }
        match find_rule(&report, "THM21_D")[0] {
            CertRule::RecursionAssemble { rmr, dilation, .. } => {
                assert_eq!(rmr.as_ref().unwrap().kind, SummandKind::Ifgf(rat(11, 1)));
                assert_eq!(*dilation, rat(1, 2));
            }
            _ => unreachable!(),
        }
        // The inner closed-form leaf sits one level deeper.
        let leaf = report
            .certificate
            .iter()
            .find(|s| s.rule.tag() == "PROP43")
            .unwrap();
        assert_eq!(leaf.depth, 1);
    }

    #[test]
    fn recursive_route_agrees_with_dispatch_on_the_split_example() {
        let p = split_halves_problem();
        let rec = single_factor_recursion(&p);
        let direct = crate::engine::dispatch::compute(&p);
        assert_eq!(rec.status, Status::Resolved);
        assert_eq!(rec.parts, direct.parts);
        assert_eq!(rec.fdim, direct.fdim);
        assert_eq!(rec.locator, direct.locator);
    }

    #[test]
    fn matrix_against_the_hyperfinite_factor_over_two_points() {
        let d = MultiMatrix::new(vec![(1, rat(1, 2)), (1, rat(1, 2))]);
        let a = TracialAlgebra::single(SummandKind::Matrix(2));
        let incl_a = Inclusion::new(vec![vec![Coupling::Mult(1), Coupling::Mult(1)]]);
        let b = TracialAlgebra::single(SummandKind::HypII1);
        let incl_b = Inclusion::new(vec![vec![
            Coupling::Trace(rat(1, 2)),
            Coupling::Trace(rat(1, 2)),
        ]]);
        let p = Problem::new(a, b, d, incl_a, incl_b);
        let report = single_factor_recursion(&p);
        assert_eq!(report.status, Status::Resolved);
        assert_eq!(single_param(&report), rat(5, 4));
        // The restricted sub-product is trivial: its side collapses
        // onto the restricted amalgam.
        assert_eq!(find_rule(&report, "TRIVIAL_AD").len(), 1);
    }

    #[test]
    fn non_abelian_amalgam_enters_through_a_corner() {
        // M₄ against the hyperfinite factor over M₂.
        let d = MultiMatrix::new(vec![(2, rat(1, 1))]);
        let a = TracialAlgebra::single(SummandKind::Matrix(4));
        let incl_a = Inclusion::new(vec![vec![Coupling::Mult(2)]]);
        let b = TracialAlgebra::single(SummandKind::HypII1);
        let incl_b = Inclusion::new(vec![vec![Coupling::Trace(rat(1, 2))]]);
        let p = Problem::new(a, b, d, incl_a, incl_b);
        let report = single_factor_recursion(&p);
        assert_eq!(report.status, Status::Resolved);
        assert_eq!(single_param(&report), rat(19, 16));
        match find_rule(&report, "CORNER_A")[0] {
            CertRule::CornerScale {
                scale, sub_output, ..
            } => {
                assert_eq!(*scale, rat(1, 2));
                assert_eq!(sub_output.kind, SummandKind::Ifgf(rat(7, 4)));
            }
            _ => unreachable!(),
        }
        assert_eq!(report.fdim, Some(rat(19, 16)));
    }

    #[test]
    fn factor_on_the_a_side_is_normalized_by_swapping() {
        let d = MultiMatrix::new(vec![(1, rat(1, 2)), (1, rat(1, 2))]);
        let a = TracialAlgebra::single(SummandKind::HypII1);
        let incl_a = Inclusion::new(vec![vec![
            Coupling::Trace(rat(1, 2)),
            Coupling::Trace(rat(1, 2)),
        ]]);
        let b = TracialAlgebra::single(SummandKind::Matrix(2));
        let incl_b = Inclusion::new(vec![vec![Coupling::Mult(1), Coupling::Mult(1)]]);
        let p = Problem::new(a, b, d, incl_a, incl_b);
        let report = single_factor_recursion(&p);
        assert_eq!(report.status, Status::Resolved);
        assert_eq!(single_param(&report), rat(5, 4));
        // Locator rows still use the original problem's labels.
        assert!(report
            .locator
            .get(crate::engine::locator::TrackedId::B(0))
            .is_some());
    }

    #[test]
    fn uneven_blocks_split_off_the_smaller_one() {
        // A = parameter-2 factor over ℂ⊕ℂ with weights 2/3, 1/3.
        let d = MultiMatrix::new(vec![(1, rat(2, 3)), (1, rat(1, 3))]);
        let f = TracialAlgebra::single(SummandKind::Ifgf(rat(2, 1)));
        let incl = Inclusion::new(vec![vec![
            Coupling::Trace(rat(2, 3)),
            Coupling::Trace(rat(1, 3)),
        ]]);
        let p = Problem::new(f.clone(), f, d, incl.clone(), incl);
        let report = single_factor_recursion(&p);
        assert_eq!(report.status, Status::Resolved);
        // Closed form: t = 2 + 2 − (1 − 4/9 − 1/9) = 4 − 4/9.
        assert_eq!(single_param(&report), rat(32, 9));
        match find_rule(&report, "THM21_B")[0] {
            CertRule::RecursionSplit { j_star, beta, .. } => {
                assert_eq!(*j_star, 1);
                assert_eq!(*beta, rat(1, 3));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn three_block_amalgam_recurses_twice() {
        let d = MultiMatrix::new(vec![(1, rat(1, 2)), (1, rat(1, 4)), (1, rat(1, 4))]);
        let f = TracialAlgebra::single(SummandKind::Ifgf(rat(2, 1)));
        let incl = Inclusion::new(vec![vec![
            Coupling::Trace(rat(1, 2)),
            Coupling::Trace(rat(1, 4)),
            Coupling::Trace(rat(1, 4)),
        ]]);
        let p = Problem::new(f.clone(), f, d, incl.clone(), incl);
        let report = single_factor_recursion(&p);
        assert_eq!(report.status, Status::Resolved);
        // Closed form: t = 2 + 2 − (1 − 1/4 − 1/16 − 1/16) = 4 − 5/8.
        assert_eq!(single_param(&report), rat(27, 8));
        assert_eq!(find_rule(&report, "THM21_B").len(), 2);
        let direct = crate::engine::dispatch::compute(&p);
        assert_eq!(report.parts, direct.parts);
    }
}
