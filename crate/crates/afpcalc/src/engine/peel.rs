//! Peel one diffuse factor central summand off a direct-sum side.
//!
//! The factor summand is cut out and replaced by the multimatrix image
//! of the amalgam under the summand's central unit p. The modified
//! product M̃ is solved recursively, p's carrier z is located in its
//! output, and the factor is joined back freely inside the corner pM̃p.
//! Dilating that join from trace τ(p) up to the carrier weight τ(z)
//! yields the summand that replaces the carrier region.

use super::certificate::{corner_of_parts, dilate_param, CertRule, CertStep};
use super::dispatch::{self, Solved};
use super::locator::{Locator, LocatorEntry, TrackedId};
use super::problem::Problem;
use super::report::OutputPart;
use crate::model::{
    fdim, fdim_multimatrix, Coupling, Inclusion, MultiMatrix, Summand, SummandKind, TracialAlgebra,
};
use crate::rat::ExtRat;

pub(crate) fn solve_peel(p: &Problem, depth: u32) -> Result<Solved, String> {
    let a_has = p.a.has_factor_summand();
    let b_has = p.b.has_factor_summand();
    // Peel from the side with more summands first; ties go to A.
    let side = if a_has && b_has {
        if p.b.summands.len() > p.a.summands.len() {
            'B'
        } else {
            'A'
        }
    } else if a_has {
        'A'
    } else if b_has {
        'B'
    } else {
        return Err("peel needs a diffuse factor central summand".to_string());
    };
    let (side_alg, side_incl) = match side {
        'A' => (&p.a, &p.incl_a),
        _ => (&p.b, &p.incl_b),
    };

    // The peeled summand: the heaviest factor, earliest index on ties.
    let mut i_p = usize::MAX;
    for (i, s) in side_alg.summands.iter().enumerate() {
        if s.kind.is_factor() && (i_p == usize::MAX || s.weight > side_alg.summands[i_p].weight) {
            i_p = i;
        }
    }
    let factor = side_alg.summands[i_p].clone();
    let alpha = factor.weight.clone();
    let s_param = factor
        .kind
        .factor_param()
        .ok_or("peeled summand is not a diffuse factor")?;

    // Blocks of D meeting the factor, with the global trace a minimal
    // projection of each carries there.
    let mut blocks: Vec<(usize, ExtRat)> = Vec::new();
    for (j, cell) in side_incl.rows[i_p].iter().enumerate() {
        let c = match cell {
            Coupling::Trace(c) => c.clone(),
            Coupling::Mult(_) => {
                return Err("factor summand carries a multiplicity coupling".to_string())
            }
        };
        if c.is_positive() {
            blocks.push((j, c));
        }
    }

    // M̃'s peeled side: the image of D under the factor's unit (one
    // matrix block per met block of D, coupled one-to-one), followed by
    // the kept summands with their original couplings.
    let mut tilde_summands = Vec::new();
    let mut tilde_rows = Vec::new();
    for &(j, ref c) in &blocks {
        let m = p.d.summands[j].size;
        tilde_summands.push(Summand::new(
            SummandKind::Matrix(m),
            ExtRat::int(m as i64) * c.clone(),
        ));
        let mut row = vec![Coupling::Mult(0); p.d.summands.len()];
        row[j] = Coupling::Mult(1);
        tilde_rows.push(row);
    }
    for (i, s) in side_alg.summands.iter().enumerate() {
        if i != i_p {
            tilde_summands.push(s.clone());
            tilde_rows.push(side_incl.rows[i].clone());
        }
    }
    let tilde = TracialAlgebra::new(tilde_summands);
    let tilde_incl = Inclusion::new(tilde_rows);
    let sub = match side {
        'A' => Problem::new(
            tilde.clone(),
            p.b.clone(),
            p.d.clone(),
            tilde_incl,
            p.incl_b.clone(),
        ),
        _ => Problem::new(
            p.a.clone(),
            tilde.clone(),
            p.d.clone(),
            p.incl_a.clone(),
            tilde_incl,
        ),
    };
    debug_assert!(
        sub.validate().is_empty(),
        "peeled subproblem fails validation"
    );
    let inner = dispatch::solve(&sub, depth + 1)?;

    // p's image in M̃: the sum of the front blocks' units.
    let front_id = |k: usize| match side {
        'A' => TrackedId::A(k),
        _ => TrackedId::B(k),
    };
    let width = inner.parts.len();
    let mut p_loc = vec![ExtRat::zero(); width];
    for k in 0..blocks.len() {
        let row = inner
            .locator
            .get(front_id(k))
            .ok_or("missing locator row for a front block")?;
        for (l, v) in row.iter().enumerate() {
            p_loc[l] = p_loc[l].clone() + v.clone();
        }
    }
    let support: Vec<usize> = (0..width).filter(|&l| p_loc[l].is_positive()).collect();
    let beta: ExtRat = support
        .iter()
        .map(|&l| inner.parts[l].weight().clone())
        .sum();

    // Locator for the original problem: carrier columns merge into the
    // joined part, the peeled summand sits exactly where p went, and
    // kept summands shift past the front blocks.
    let missing = |id: TrackedId| move || format!("missing locator row for {id}");
    let remap = |row: &[ExtRat]| -> Vec<ExtRat> {
        let mut out: Vec<ExtRat> = (0..width)
            .filter(|l| !support.contains(l))
            .map(|l| row[l].clone())
            .collect();
        out.push(support.iter().map(|&l| row[l].clone()).sum());
        out
    };
    let tilde_index = |i: usize| blocks.len() + if i > i_p { i - 1 } else { i };
    let mut entries = Vec::new();
    for j in 0..p.d.summands.len() {
        let id = TrackedId::D(j);
        let row = inner.locator.get(id).ok_or_else(missing(id))?;
        entries.push(LocatorEntry {
            id,
            traces: remap(row),
        });
    }
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
            let traces = if own_side == side && i == i_p {
                remap(&p_loc)
            } else {
                let inner_id = if own_side == side {
                    make(tilde_index(i))
                } else {
                    id
                };
                remap(inner.locator.get(inner_id).ok_or_else(missing(inner_id))?)
            };
            entries.push(LocatorEntry { id, traces });
        }
    }
    let locator = Locator::new(entries);

    // An unresolved carrier part blocks the corner join: report the
    // whole carrier as one unresolved region.
    if let Some(&l) = support
        .iter()
        .find(|&&l| inner.parts[l].as_summand().is_none())
    {
        let detail = match &inner.parts[l] {
            OutputPart::Unresolved { detail, .. } => detail.clone(),
            _ => unreachable!("non-summand output part is unresolved"),
        };
        let mut parts: Vec<OutputPart> = (0..width)
            .filter(|l| !support.contains(l))
            .map(|l| inner.parts[l].clone())
            .collect();
        parts.push(OutputPart::Unresolved {
            weight: beta,
            detail,
        });
        return Ok(Solved {
            parts,
            locator,
            steps: inner.steps,
        });
    }

    let p_rel: Vec<ExtRat> = support
        .iter()
        .map(|&l| p_loc[l].clone() / inner.parts[l].weight().clone())
        .collect();
    let (pmp_input, tau) = corner_of_parts(&inner.parts, &support, &p_rel)?;
    if tau != alpha {
        return Err(format!(
            "carrier corner trace {tau} disagrees with the peeled weight {alpha}"
        ));
    }

    // The corner problem pM̃p ∗_pD pAp, everything renormalized by τ(p).
    let pd = MultiMatrix::new(
        blocks
            .iter()
            .map(|(j, c)| {
                let m = p.d.summands[*j].size;
                (m, ExtRat::int(m as i64) * c.clone() / alpha.clone())
            })
            .collect(),
    );
    let fdim_pd = fdim_multimatrix(&pd).value;
    let mut corner_rows = Vec::new();
    for &l in &support {
        let part = inner.parts[l].as_summand().expect("support is resolved");
        let mut row = Vec::new();
        for (k, (j, _)) in blocks.iter().enumerate() {
            let lam = inner.locator.get(front_id(k)).ok_or("front row vanished")?;
            let m = ExtRat::int(p.d.summands[*j].size as i64);
            let cell = match &part.kind {
                SummandKind::Matrix(r) | SummandKind::Interval(r) => {
                    let mult =
                        ExtRat::int(*r as i64) * lam[l].clone() / (m.clone() * part.weight.clone());
                    Coupling::Mult(mult.as_u32().ok_or_else(|| {
                        format!("front block {j} lands non-integrally in carrier part {l}")
                    })?)
                }
                _ => Coupling::Trace(lam[l].clone() / (m.clone() * alpha.clone())),
            };
            row.push(cell);
        }
        corner_rows.push(row);
    }
    let pa = TracialAlgebra::new(vec![Summand::new(factor.kind.clone(), ExtRat::one())]);
    let pa_rows = vec![blocks
        .iter()
        .map(|(_, c)| Coupling::Trace(c.clone() / alpha.clone()))
        .collect()];
    let corner_problem = Problem::new(
        pmp_input.clone(),
        pa,
        pd.clone(),
        Inclusion::new(corner_rows),
        Inclusion::new(pa_rows),
    );
    debug_assert!(
        corner_problem.validate().is_empty(),
        "corner problem fails validation"
    );
    let corner = dispatch::solve(&corner_problem, depth + 1)?;
    let pmp_sol = match corner.parts.as_slice() {
        [OutputPart::Summand(s)] if s.weight.is_one() => s.clone(),
        _ => {
            return Err(format!(
                "corner join did not resolve to a single factor: {}",
                corner_problem.describe()
            ))
        }
    };
    let pmp_trivial = corner.steps.first().map(|st| st.rule.tag()) == Some("TRIVIAL_AD");

    let x_pmp = fdim(&pmp_input).value;
    let t3 = if x_pmp.is_inf() || s_param.is_inf() {
        ExtRat::inf()
    } else {
        s_param.clone() + x_pmp.clone() - fdim_pd.clone()
    };
    let lambda = alpha.clone() / beta.clone();
    let qm_kind = match &pmp_sol.kind {
        SummandKind::HypII1 => SummandKind::HypII1,
        SummandKind::Ifgf(t) => SummandKind::Ifgf(dilate_param(t, &lambda)),
        k => return Err(format!("corner join produced a non-factor {k}")),
    };
    let qm = Summand::new(qm_kind, beta.clone());
    let renorm: Vec<Summand> = support
        .iter()
        .map(|&l| {
            let part = inner.parts[l].as_summand().expect("support is resolved");
            Summand::new(part.kind.clone(), part.weight.clone() / beta.clone())
        })
        .collect();
    let q_fdim = fdim(&TracialAlgebra::new(renorm)).value;

    let mut parts: Vec<OutputPart> = (0..width)
        .filter(|l| !support.contains(l))
        .map(|l| inner.parts[l].clone())
        .collect();
    parts.push(OutputPart::Summand(qm.clone()));

    let step = CertStep::new(
        depth,
        CertRule::PeelSummand {
            side,
            index: i_p,
            alpha,
            factor,
            pd,
            a_tilde: tilde,
            m_tilde: inner.parts,
            q_support: support,
            beta,
            p_rel,
            q_fdim,
            pmp_input,
            pmp_trivial,
            x_pmp,
            fdim_pd,
            t3,
            qm,
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
