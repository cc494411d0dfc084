//! Strip a common matrix tensor factor off a family of type-I summands.
//!
//! A family of summands on one side whose coupling rows are parallel
//! decomposes as M_k ⊗ C₂ with the amalgam landing in the M_k leg. The
//! family is replaced by that single M_k block, the reduced product M₀
//! is solved recursively, and the complement C₂ is joined back freely
//! in the corner of M₀ at a minimal projection of the block. Dilating
//! the join to the block's carrier weight restores the stripped region.

use super::certificate::{corner_of_parts, dilate_param, CertRule, CertStep};
use super::dispatch::{self, finish, Solved};
use super::locator::{Locator, LocatorEntry, TrackedId};
use super::problem::Problem;
use super::report::{OutputPart, ResultReport};
use crate::model::{Coupling, Inclusion, Summand, SummandKind, TracialAlgebra};
use crate::rat::ExtRat;

/// One tensor pattern: the summands it covers, the stripped block's
/// coupling row and size, and the complement sizes left behind.
pub(crate) struct StripPlan {
    pub side: char,
    pub members: Vec<usize>,
    pub h: Vec<u32>,
    pub k: u32,
    pub c: Vec<u32>,
    pub weight: ExtRat,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Look for a family of type-I summands with parallel coupling rows.
/// With `require_progress` the stripped multiplicity λ is the largest
/// common divisor leaving a nontrivial complement (Σᵢ sᵢ/λ ≥ 2), and
/// families admitting none are skipped; without it the full common
/// divisor is stripped, which for a lone summand is the identity
/// rewrite. Side A is searched before side B; within a side the
/// heaviest family wins, earliest first member on ties.
pub(crate) fn find_strip(p: &Problem, require_progress: bool) -> Option<StripPlan> {
    for (side, alg, incl) in [('A', &p.a, &p.incl_a), ('B', &p.b, &p.incl_b)] {
        // Group type-I summands by the primitive direction of their row.
        let mut groups: Vec<(Vec<u32>, Vec<usize>, Vec<u32>)> = Vec::new();
        for (i, s) in alg.summands.iter().enumerate() {
            if !s.kind.is_type_i() {
                continue;
            }
            let row: Vec<u32> = incl.rows[i]
                .iter()
                .map(|cell| match cell {
                    Coupling::Mult(m) => *m,
                    Coupling::Trace(_) => 0,
                })
                .collect();
            let g = row.iter().fold(0, |acc, &x| gcd(acc, x));
            if g == 0 {
                continue;
            }
            let dir: Vec<u32> = row.iter().map(|&x| x / g).collect();
            match groups.iter_mut().find(|(d, _, _)| *d == dir) {
                Some((_, members, mults)) => {
                    members.push(i);
                    mults.push(g);
                }
                None => groups.push((dir, vec![i], vec![g])),
            }
        }
        let mut best: Option<StripPlan> = None;
        for (dir, members, mults) in groups {
            let g = mults.iter().fold(0, |acc, &x| gcd(acc, x));
            let total: u32 = mults.iter().sum();
            let lambda = if require_progress {
                match (1..=g).rev().find(|&l| g % l == 0 && total / l >= 2) {
                    Some(l) => l,
                    None => continue,
                }
            } else {
                g
            };
            let h: Vec<u32> = dir.iter().map(|&x| x * lambda).collect();
            let k: u32 = h
                .iter()
                .zip(&p.d.summands)
                .map(|(&hj, dj)| dj.size * hj)
                .sum();
            let weight: ExtRat = members
                .iter()
                .map(|&i| alg.summands[i].weight.clone())
                .sum();
            let plan = StripPlan {
                side,
                members,
                h,
                k,
                c: mults.iter().map(|&s| s / lambda).collect(),
                weight,
            };
            let better = match &best {
                None => true,
                Some(b) => {
                    plan.weight > b.weight
                        || (plan.weight == b.weight && plan.members[0] < b.members[0])
                }
            };
            if better {
                best = Some(plan);
            }
        }
        if best.is_some() {
            return best;
        }
    }
    None
}

pub(crate) fn solve_strip(p: &Problem, plan: &StripPlan, depth: u32) -> Result<Solved, String> {
    let (side_alg, side_incl) = match plan.side {
        'A' => (&p.a, &p.incl_a),
        _ => (&p.b, &p.incl_b),
    };
    for (&i, &ci) in plan.members.iter().zip(&plan.c) {
        let n = match side_alg.summands[i].kind {
            SummandKind::Matrix(n) | SummandKind::Interval(n) => n,
            _ => return Err("strip family member is not type I".to_string()),
        };
        debug_assert_eq!(n, ci * plan.k, "family member does not factor through M_k");
    }

    // The reduced side: the non-members keep their couplings, the
    // family collapses to one M_k block carrying the pattern row.
    let mut a0_summands = Vec::new();
    let mut a0_rows = Vec::new();
    for (i, s) in side_alg.summands.iter().enumerate() {
        if !plan.members.contains(&i) {
            a0_summands.push(s.clone());
            a0_rows.push(side_incl.rows[i].clone());
        }
    }
    a0_summands.push(Summand::new(
        SummandKind::Matrix(plan.k),
        plan.weight.clone(),
    ));
    a0_rows.push(plan.h.iter().map(|&hj| Coupling::Mult(hj)).collect());
    let a0 = TracialAlgebra::new(a0_summands);
    let a0_incl = Inclusion::new(a0_rows);
    let sub = match plan.side {
        'A' => Problem::new(
            a0.clone(),
            p.b.clone(),
            p.d.clone(),
            a0_incl,
            p.incl_b.clone(),
        ),
        _ => Problem::new(
            p.a.clone(),
            a0.clone(),
            p.d.clone(),
            p.incl_a.clone(),
            a0_incl,
        ),
    };
    debug_assert!(
        sub.validate().is_empty(),
        "stripped subproblem fails validation"
    );
    let inner = dispatch::solve(&sub, depth + 1)?;

    // The stripped block's carrier in M₀.
    let q_index = a0.summands.len() - 1;
    let q_id = match plan.side {
        'A' => TrackedId::A(q_index),
        _ => TrackedId::B(q_index),
    };
    let loc = inner
        .locator
        .get(q_id)
        .ok_or("missing locator row for the stripped block")?
        .to_vec();
    let width = inner.parts.len();
    let support: Vec<usize> = (0..width).filter(|&l| loc[l].is_positive()).collect();
    let tau_z: ExtRat = support
        .iter()
        .map(|&l| inner.parts[l].weight().clone())
        .sum();
    let tau_p = plan.weight.clone() / ExtRat::int(plan.k as i64);

    // Locator for the original problem: carrier columns merge into the
    // rejoined part; a family member's unit is the carrier's.
    let missing = |id: TrackedId| move || format!("missing locator row for {id}");
    let remap = |row: &[ExtRat]| -> Vec<ExtRat> {
        let mut out: Vec<ExtRat> = (0..width)
            .filter(|l| !support.contains(l))
            .map(|l| row[l].clone())
            .collect();
        out.push(support.iter().map(|&l| row[l].clone()).sum());
        out
    };
    let a0_index = |i: usize| i - plan.members.iter().filter(|&&m| m < i).count();
    let mut entries = Vec::new();
    for j in 0..p.d.summands.len() {
        let id = TrackedId::D(j);
        let row = inner.locator.get(id).ok_or_else(missing(id))?;
        entries.push(LocatorEntry {
            id,
            traces: remap(row),
        });
    }
    let non_support = width - support.len();
    for (count, make) in [
        (p.a.summands.len(), TrackedId::A as fn(usize) -> TrackedId),
        (p.b.summands.len(), TrackedId::B as fn(usize) -> TrackedId),
    ] {
        for i in 0..count {
            let id = make(i);
            let own_side = match id {
                TrackedId::A(_) => 'A',
                _ => 'B',
            };
            let traces = if own_side == plan.side && plan.members.contains(&i) {
                let mut row = vec![ExtRat::zero(); non_support];
                row.push(side_alg.summands[i].weight.clone());
                row
            } else {
                let inner_id = if own_side == plan.side {
                    make(a0_index(i))
                } else {
                    id
                };
                remap(inner.locator.get(inner_id).ok_or_else(missing(inner_id))?)
            };
            entries.push(LocatorEntry { id, traces });
        }
    }
    let locator = Locator::new(entries);

    let partial = |detail: String, steps: Vec<CertStep>| -> Solved {
        let mut parts: Vec<OutputPart> = (0..width)
            .filter(|l| !support.contains(l))
            .map(|l| inner.parts[l].clone())
            .collect();
        parts.push(OutputPart::Unresolved {
            weight: tau_z.clone(),
            detail,
        });
        Solved {
            parts,
            locator: locator.clone(),
            steps,
        }
    };

    // An unresolved carrier part blocks the rejoin.
    if let Some(&l) = support
        .iter()
        .find(|&&l| inner.parts[l].as_summand().is_none())
    {
        let detail = match &inner.parts[l] {
            OutputPart::Unresolved { detail, .. } => detail.clone(),
            _ => unreachable!("non-summand output part is unresolved"),
        };
        return Ok(partial(detail, inner.steps));
    }

    // Corner at one minimal projection of the M_k block.
    let p_rel: Vec<ExtRat> = support
        .iter()
        .map(|&l| loc[l].clone() / (ExtRat::int(plan.k as i64) * inner.parts[l].weight().clone()))
        .collect();
    let (corner_input, tau) = corner_of_parts(&inner.parts, &support, &p_rel)?;
    if tau != tau_p {
        return Err(format!(
            "tensor-unit trace {tau} disagrees with the expected {tau_p}"
        ));
    }
    let c2 = TracialAlgebra::new(
        plan.members
            .iter()
            .zip(&plan.c)
            .map(|(&i, &ci)| {
                let s = &side_alg.summands[i];
                let kind = match s.kind {
                    SummandKind::Interval(_) => SummandKind::Interval(ci),
                    _ => SummandKind::Matrix(ci),
                };
                Summand::new(kind, s.weight.clone() / plan.weight.clone())
            })
            .collect(),
    );
    let corner_problem = Problem::over_scalars(corner_input.clone(), c2.clone());
    let corner = dispatch::solve(&corner_problem, depth + 1)?;
    let corner_sol = match corner.parts.as_slice() {
        [OutputPart::Summand(s)] if s.weight.is_one() => s.clone(),
        _ => {
            let mut steps = inner.steps;
            steps.extend(corner.steps);
            return Ok(partial(
                format!(
                    "tensor complement rejoin is not a single factor: {}",
                    corner_problem.describe()
                ),
                steps,
            ));
        }
    };

    // Dilate the rejoined corner from the unit's trace back to the
    // carrier weight.
    let ratio = tau_z.clone() / tau_p.clone();
    let strip_kind = match &corner_sol.kind {
        SummandKind::Matrix(r) => SummandKind::Matrix(
            (ExtRat::int(*r as i64) * ratio.clone())
                .as_u32()
                .ok_or("matrix size does not dilate integrally")?,
        ),
        SummandKind::Interval(r) => SummandKind::Interval(
            (ExtRat::int(*r as i64) * ratio.clone())
                .as_u32()
                .ok_or("interval multiplicity does not dilate integrally")?,
        ),
        SummandKind::HypII1 => SummandKind::HypII1,
        SummandKind::Ifgf(t) => {
            SummandKind::Ifgf(dilate_param(t, &(tau_p.clone() / tau_z.clone())))
        }
    };
    let strip_part = Summand::new(strip_kind, tau_z.clone());

    let mut parts: Vec<OutputPart> = (0..width)
        .filter(|l| !support.contains(l))
        .map(|l| inner.parts[l].clone())
        .collect();
    parts.push(OutputPart::Summand(strip_part.clone()));

    let step = CertStep::new(
        depth,
        CertRule::StripTensor {
            side: plan.side,
            class_indices: plan.members.clone(),
            h: plan.h.clone(),
            k: plan.k,
            class_weight: plan.weight.clone(),
            a0,
            c2,
            m0_parts: inner.parts,
            q_support: support,
            p_rel,
            tau_p,
            tau_z,
            corner_input,
            corner_output: corner_sol,
            strip_part,
            output: parts.clone(),
        },
    );
    let mut steps = vec![step];
    steps.extend(inner.steps);
    steps.extend(corner.steps);
    Ok(Solved {
        parts,
        locator,
        steps,
    })
}

/// The strip rewrite on its own, as an audit entry: applied even when
/// no multiplicity can be split off, in which case the complement is
/// trivial and the rewrite must reproduce the product unchanged.
pub fn tensor_strip(problem: &Problem) -> ResultReport {
    let violations = problem.validate();
    if !violations.is_empty() {
        return ResultReport::error(violations);
    }
    match find_strip(problem, false) {
        Some(plan) => match solve_strip(problem, &plan, 0) {
            Ok(sol) => finish(problem, sol),
            Err(e) => ResultReport::internal_error(e),
        },
        None => ResultReport::internal_error("no parallel type-I family to strip"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::dispatch::compute;
    use crate::engine::report::Status;
    use crate::model::MultiMatrix;

    fn rat(p: i64, q: i64) -> ExtRat {
        ExtRat::ratio(p, q)
    }

    fn strip_rules(report: &ResultReport) -> Vec<&CertRule> {
        report
            .certificate
            .iter()
            .filter(|s| s.rule.tag() == "STRIP_TENSOR")
            .map(|s| &s.rule)
            .collect()
    }

    /// A = M₂ ⊗ ℂ², B = L(F₂) over scalars.
    fn matrix_pair_problem() -> Problem {
        let a = TracialAlgebra::new(vec![
            Summand::new(SummandKind::Matrix(2), rat(1, 2)),
            Summand::new(SummandKind::Matrix(2), rat(1, 2)),
        ]);
        let b = TracialAlgebra::single(SummandKind::Ifgf(rat(2, 1)));
        Problem::over_scalars(a, b)
    }

    #[test]
    fn strip_and_direct_routes_agree_on_the_matrix_pair() {
        let p = matrix_pair_problem();
        let direct = compute(&p);
        let stripped = tensor_strip(&p);
        assert_eq!(direct.status, Status::Resolved);
        assert_eq!(stripped.status, Status::Resolved);
        assert_eq!(direct.parts, stripped.parts);
        assert_eq!(
            stripped.single_factor().unwrap().kind,
            SummandKind::Ifgf(rat(23, 8))
        );
        assert_eq!(stripped.fdim, Some(rat(23, 8)));

        match strip_rules(&stripped)[0] {
            CertRule::StripTensor {
                k,
                c2,
                m0_parts,
                corner_input,
                corner_output,
                tau_p,
                ..
            } => {
                assert_eq!(*k, 2);
                assert_eq!(c2.summands.len(), 2);
                assert_eq!(
                    m0_parts[0].as_summand().unwrap().kind,
                    SummandKind::Ifgf(rat(11, 4))
                );
                assert_eq!(corner_input.summands[0].kind, SummandKind::Ifgf(rat(8, 1)));
                assert_eq!(corner_output.kind, SummandKind::Ifgf(rat(17, 2)));
                assert_eq!(*tau_p, rat(1, 2));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn tensor_family_strips_through_the_amalgam() {
        let d = MultiMatrix::new(vec![(2, rat(1, 1))]);
        let a = TracialAlgebra::new(vec![
            Summand::new(SummandKind::Matrix(2), rat(1, 2)),
            Summand::new(SummandKind::Matrix(2), rat(1, 2)),
        ]);
        let incl_a = Inclusion::new(vec![vec![Coupling::Mult(1)], vec![Coupling::Mult(1)]]);
        let b = TracialAlgebra::single(SummandKind::Matrix(4));
        let incl_b = Inclusion::new(vec![vec![Coupling::Mult(2)]]);
        let p = Problem::new(a, b, d, incl_a, incl_b);
        let report = compute(&p);
        assert_eq!(report.status, Status::Resolved);
        assert_eq!(
            report.single_factor().unwrap().kind,
            SummandKind::Ifgf(rat(17, 16))
        );
        match strip_rules(&report)[0] {
            CertRule::StripTensor { corner_output, .. } => {
                assert_eq!(corner_output.kind, SummandKind::Ifgf(rat(5, 4)));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn lone_summand_splits_off_its_own_tensor_factor() {
        let d = MultiMatrix::new(vec![(2, rat(1, 1))]);
        let side = TracialAlgebra::single(SummandKind::Matrix(4));
        let incl = Inclusion::new(vec![vec![Coupling::Mult(2)]]);
        let p = Problem::new(side.clone(), side, d, incl.clone(), incl);
        let report = compute(&p);
        assert_eq!(report.status, Status::Resolved);
        assert_eq!(
            report.single_factor().unwrap().kind,
            SummandKind::Ifgf(rat(9, 8))
        );
        assert_eq!(report.fdim, Some(rat(9, 8)));
        match strip_rules(&report)[0] {
            CertRule::StripTensor {
                k,
                c2,
                corner_output,
                ..
            } => {
                assert_eq!(*k, 2);
                assert_eq!(c2.summands[0].kind, SummandKind::Matrix(2));
                assert_eq!(corner_output.kind, SummandKind::Ifgf(rat(3, 2)));
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn matrices_over_the_diagonal_stay_partial() {
        let d = MultiMatrix::new(vec![(1, rat(1, 2)), (1, rat(1, 2))]);
        let side = TracialAlgebra::single(SummandKind::Matrix(2));
        let incl = Inclusion::new(vec![vec![Coupling::Mult(1), Coupling::Mult(1)]]);
        let p = Problem::new(side.clone(), side, d, incl.clone(), incl);
        let report = compute(&p);
        assert_eq!(report.status, Status::Partial);
        assert_eq!(report.parts.len(), 1);
        match &report.parts[0] {
            OutputPart::Unresolved { weight, detail } => {
                assert_eq!(*weight, rat(1, 1));
                assert!(detail.contains("no applicable rewrite"), "{detail}");
            }
            _ => unreachable!(),
        }
        // The free dimension is still reported.
        assert_eq!(report.fdim, Some(rat(1, 1)));
    }

    #[test]
    fn splitting_finer_than_the_carrier_leaves_the_rejoin_open() {
        let d = MultiMatrix::new(vec![(1, rat(1, 2)), (1, rat(1, 2))]);
        let a = TracialAlgebra::single(SummandKind::Matrix(2));
        let incl_a = Inclusion::new(vec![vec![Coupling::Mult(1), Coupling::Mult(1)]]);
        let b = TracialAlgebra::new(vec![
            Summand::new(SummandKind::Matrix(1), rat(1, 2)),
            Summand::new(SummandKind::Matrix(1), rat(1, 4)),
            Summand::new(SummandKind::Matrix(1), rat(1, 4)),
        ]);
        let incl_b = Inclusion::new(vec![
            vec![Coupling::Mult(1), Coupling::Mult(0)],
            vec![Coupling::Mult(0), Coupling::Mult(1)],
            vec![Coupling::Mult(0), Coupling::Mult(1)],
        ]);
        let p = Problem::new(a, b, d, incl_a, incl_b);
        let report = compute(&p);
        assert_eq!(report.status, Status::Partial);
        match &report.parts[0] {
            OutputPart::Unresolved { weight, detail } => {
                assert_eq!(*weight, rat(1, 1));
                assert!(detail.contains("rejoin"), "{detail}");
            }
            _ => unreachable!(),
        }
        // Locator rows still aggregate onto the unresolved region.
        assert_eq!(report.locator.get(TrackedId::A(0)).unwrap(), &[rat(1, 1)]);
        assert_eq!(report.locator.get(TrackedId::B(1)).unwrap(), &[rat(1, 4)]);
    }

    #[test]
    fn trivial_complement_reproduces_the_product() {
        let a = TracialAlgebra::single(SummandKind::Matrix(2));
        let b = TracialAlgebra::single(SummandKind::Ifgf(rat(2, 1)));
        let p = Problem::over_scalars(a, b);
        let direct = compute(&p);
        let stripped = tensor_strip(&p);
        assert_eq!(stripped.status, Status::Resolved);
        assert_eq!(direct.parts, stripped.parts);
        assert_eq!(
            stripped.single_factor().unwrap().kind,
            SummandKind::Ifgf(rat(11, 4))
        );
        match strip_rules(&stripped)[0] {
            CertRule::StripTensor {
                c2, corner_input, ..
            } => {
                assert_eq!(c2.summands.len(), 1);
                assert_eq!(c2.summands[0].kind, SummandKind::Matrix(1));
                assert_eq!(corner_input.summands[0].kind, SummandKind::Ifgf(rat(8, 1)));
            }
            _ => unreachable!(),
        }
    }
}
