//! Free products over the scalars: atoms from pairs of minimal
//! projections whose traces sum past 1, one interpolated-factor summand
//! carrying the rest of the free-dimension budget.

use super::certificate::{CertRule, CertStep};
use super::dispatch::{collapse_unresolved, Solved};
use super::locator::{Locator, LocatorEntry, TrackedId};
use super::problem::Problem;
use super::report::OutputPart;
use crate::model::{fdim, Summand, SummandKind, TracialAlgebra};
use crate::rat::ExtRat;
use serde::Serialize;

/// One atomic summand of the output, recording which pair of minimal
/// projections produced it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AtomRecord {
    pub a_index: usize,
    pub b_index: usize,
    pub size: u32,
    pub min_trace: ExtRat,
    pub weight: ExtRat,
}

/// Apply the atom rule to a pair of sides: every (matrix, matrix)
/// summand pair whose minimal projections have traces a, b with
/// a + b > 1 yields a matrix atom of size nᵢ·m_j and minimal trace
/// a + b − 1. Diffuse summands contribute no atoms.
pub fn recompute_atoms(a: &TracialAlgebra, b: &TracialAlgebra) -> Vec<AtomRecord> {
    let mut atoms = Vec::new();
    for (i, sa) in a.summands.iter().enumerate() {
        let n = match sa.kind {
            SummandKind::Matrix(n) => n,
            _ => continue,
        };
        let ai = sa.weight.clone() / ExtRat::int(n as i64);
        for (j, sb) in b.summands.iter().enumerate() {
            let m = match sb.kind {
                SummandKind::Matrix(m) => m,
                _ => continue,
            };
            let bj = sb.weight.clone() / ExtRat::int(m as i64);
            let excess = ai.clone() + bj - ExtRat::one();
            if excess.is_positive() {
                let size = n * m;
                atoms.push(AtomRecord {
                    a_index: i,
                    b_index: j,
                    size,
                    min_trace: excess.clone(),
                    weight: ExtRat::int(size as i64) * excess,
                });
            }
        }
    }
    atoms
}

/// Atom sizes where both factors exceed 1; the size claim for such
/// atoms rests on the adopted rule rather than an internal derivation.
pub fn any_flagged_size(a: &TracialAlgebra, b: &TracialAlgebra, atoms: &[AtomRecord]) -> bool {
    atoms.iter().any(|at| {
        matches!(a.summands[at.a_index].kind, SummandKind::Matrix(n) if n >= 2)
            && matches!(b.summands[at.b_index].kind, SummandKind::Matrix(m) if m >= 2)
    })
}

/// Solve the diffuse factor's parameter from the free-dimension budget:
/// w = 1 − Σ weights, t = 1 + w⁻²(d_total − 1 − Σ w_k²(d_k − 1)).
pub fn solve_factor_param(
    d_total: &ExtRat,
    atoms: &[(u32, ExtRat)],
) -> Result<(ExtRat, ExtRat), String> {
    let total: ExtRat = atoms.iter().map(|(_, w)| w.clone()).sum();
    let w = ExtRat::one() - total.clone();
    if !w.is_positive() {
        return Err(format!(
            "atoms carry total weight {total}, leaving no diffuse part"
        ));
    }
    if d_total.is_inf() {
        return Ok((ExtRat::inf(), w));
    }
    let mut budget = d_total.clone() - ExtRat::one();
    for (size, wt) in atoms {
        budget = budget - wt.square() * (SummandKind::Matrix(*size).rel_dim() - ExtRat::one());
    }
    Ok((ExtRat::one() + budget / w.square(), w))
}

pub(crate) fn solve_scalars(p: &Problem, depth: u32) -> Result<Solved, String> {
    if !p.d.is_scalars() {
        return Err("scalar route applied to a nontrivial amalgam".to_string());
    }
    let a = &p.a;
    let b = &p.b;
    // The one uncovered shape: both sides two-dimensional.
    let two_points = |alg: &TracialAlgebra| {
        alg.summands.len() == 2
            && alg
                .summands
                .iter()
                .all(|s| matches!(s.kind, SummandKind::Matrix(1)))
    };
    if two_points(a) && two_points(b) {
        return Ok(collapse_unresolved(
            p,
            format!("outside covered hypotheses: {}", p.describe()),
        ));
    }

    let atoms = recompute_atoms(a, b);
    let d_total = fdim(a).value + fdim(b).value;
    let (t, w) = solve_factor_param(
        &d_total,
        &atoms
            .iter()
            .map(|at| (at.size, at.weight.clone()))
            .collect::<Vec<_>>(),
    )?;
    if t <= ExtRat::one() {
        return Ok(collapse_unresolved(
            p,
            format!(
                "outside covered hypotheses: diffuse parameter {t} not above 1 in {}",
                p.describe()
            ),
        ));
    }

    let mut parts: Vec<OutputPart> = atoms
        .iter()
        .map(|at| {
            OutputPart::Summand(Summand::new(
                SummandKind::Matrix(at.size),
                at.weight.clone(),
            ))
        })
        .collect();
    let factor_index = parts.len();
    parts.push(OutputPart::Summand(Summand::new(
        SummandKind::Ifgf(t.clone()),
        w.clone(),
    )));
    let width = parts.len();

    // Locators: each atom sits fully under both of its parents' central
    // projections; the leftover mass of every central projection lands
    // on the diffuse factor. The scalar amalgam sees everything.
    let mut entries = Vec::new();
    for (i, sa) in a.summands.iter().enumerate() {
        let mut traces = vec![ExtRat::zero(); width];
        let mut rest = sa.weight.clone();
        for (k, at) in atoms.iter().enumerate() {
            if at.a_index == i {
                traces[k] = at.weight.clone();
                rest = rest - at.weight.clone();
            }
        }
        traces[factor_index] = rest;
        entries.push(LocatorEntry {
            id: TrackedId::A(i),
            traces,
        });
    }
    for (j, sb) in b.summands.iter().enumerate() {
        let mut traces = vec![ExtRat::zero(); width];
        let mut rest = sb.weight.clone();
        for (k, at) in atoms.iter().enumerate() {
            if at.b_index == j {
                traces[k] = at.weight.clone();
                rest = rest - at.weight.clone();
            }
        }
        traces[factor_index] = rest;
        entries.push(LocatorEntry {
            id: TrackedId::B(j),
            traces,
        });
    }
    entries.push(LocatorEntry {
        id: TrackedId::D(0),
        traces: parts.iter().map(|q| q.weight().clone()).collect(),
    });
    let locator = Locator::new(entries);

    let output = TracialAlgebra::new(
        parts
            .iter()
            .map(|q| q.as_summand().unwrap().clone())
            .collect(),
    );
    let step = CertStep::new(
        depth,
        CertRule::ScalarAmalgam {
            a: a.clone(),
            b: b.clone(),
            size_flagged: any_flagged_size(a, b, &atoms),
            atoms,
            d_total,
            factor_weight: w,
            factor_param: t,
            output,
        },
    );

    Ok(Solved {
        parts,
        locator,
        steps: vec![step],
    })
}
