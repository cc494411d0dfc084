//! Unital trace-compatible embeddings of a multimatrix algebra.

use super::ops::compress;
use super::projection::{ProjComponent, ProjectionSpec};
use super::summand::{MultiMatrix, SummandKind, TracialAlgebra};
use super::Violation;
use crate::rat::ExtRat;
use std::fmt;

/// How one source block couples into one target summand: an integer
/// multiplicity for type-I targets, or the global trace of the image of
/// a minimal projection for diffuse targets.
#[derive(Clone, PartialEq, Eq)]
pub enum Coupling {
    Mult(u32),
    Trace(ExtRat),
}

impl Coupling {
    pub fn is_zero(&self) -> bool {
        match self {
            Coupling::Mult(k) => *k == 0,
            Coupling::Trace(c) => c.is_zero(),
        }
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Mult(k) => write!(f, "mult {k}"),
            Coupling::Trace(c) => write!(f, "trace {c}"),
        }
    }
}

impl fmt::Debug for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The coupling table of an embedding D ↪ A: `rows[i][j]` couples source
/// block j into target summand i.
#[derive(Clone, PartialEq, Eq)]
pub struct Inclusion {
    pub rows: Vec<Vec<Coupling>>,
}

impl Inclusion {
    pub fn new(rows: Vec<Vec<Coupling>>) -> Self {
        Inclusion { rows }
    }

    /// The unique embedding of the scalars: every summand absorbs the
    /// unit with full multiplicity.
    pub fn of_scalars(target: &TracialAlgebra) -> Self {
        Inclusion::new(
            target
                .summands
                .iter()
                .map(|s| {
                    vec![match s.kind {
                        SummandKind::Matrix(n) | SummandKind::Interval(n) => Coupling::Mult(n),
                        _ => Coupling::Trace(s.weight.clone()),
                    }]
                })
                .collect(),
        )
    }

    pub fn validate(
        &self,
        source: &MultiMatrix,
        target: &TracialAlgebra,
        path: &str,
    ) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.rows.len() != target.summands.len() {
            out.push(Violation::new(
                path,
                format!(
                    "coupling table has {} rows but the target has {} summands",
                    self.rows.len(),
                    target.summands.len()
                ),
            ));
            return out;
        }
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != source.summands.len() {
                out.push(Violation::new(
                    format!("{path}.row[{i}]"),
                    format!(
                        "row has {} entries but the amalgam has {} blocks",
                        row.len(),
                        source.summands.len()
                    ),
                ));
                return out;
            }
        }
        // Cell shapes.
        for (i, row) in self.rows.iter().enumerate() {
            let type_i = target.summands[i].kind.is_type_i();
            for (j, cell) in row.iter().enumerate() {
                let cp = format!("{path}.row[{i}].col[{j}]");
                match cell {
                    Coupling::Mult(_) if type_i => {}
                    Coupling::Trace(c) if !type_i => {
                        if c.is_inf() || c.is_negative() {
                            out.push(Violation::new(
                                &cp,
                                format!(
                                    "coupling trace must be a finite nonnegative rational, got {c}"
                                ),
                            ));
                        }
                    }
                    Coupling::Mult(_) => {
                        out.push(Violation::new(
                            &cp,
                            "integer multiplicity used for a diffuse target summand",
                        ));
                    }
                    Coupling::Trace(_) => {
                        out.push(Violation::new(
                            &cp,
                            "trace coupling used for a type-I target summand",
                        ));
                    }
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        // Unitality per target summand.
        for (i, row) in self.rows.iter().enumerate() {
            match &target.summands[i].kind {
                SummandKind::Matrix(n) | SummandKind::Interval(n) => {
                    let got: u64 = row
                        .iter()
                        .zip(&source.summands)
                        .map(|(cell, b)| match cell {
                            Coupling::Mult(k) => (b.size as u64) * (*k as u64),
                            Coupling::Trace(_) => 0,
                        })
                        .sum();
                    if got != *n as u64 {
                        out.push(Violation::new(
                            format!("{path}.row[{i}]"),
                            format!("non-unital at summand {i}: block multiplicities fill {got} of size {n}"),
                        ));
                    }
                }
                _ => {
                    let got: ExtRat = row
                        .iter()
                        .zip(&source.summands)
                        .map(|(cell, b)| match cell {
                            Coupling::Trace(c) => ExtRat::int(b.size as i64) * c.clone(),
                            Coupling::Mult(_) => ExtRat::zero(),
                        })
                        .sum();
                    if got != target.summands[i].weight {
                        out.push(Violation::new(
                            format!("{path}.row[{i}]"),
                            format!(
                                "non-unital at summand {i}: coupling traces sum to {got}, summand weight is {}",
                                target.summands[i].weight
                            ),
                        ));
                    }
                }
            }
        }
        // Trace compatibility per source block.
        for j in 0..source.summands.len() {
            let got = self.min_profile(j, target).global_trace(target);
            let want = source.min_trace(j);
            if got != want {
                out.push(Violation::new(
                    format!("{path}.col[{j}]"),
                    format!(
                        "trace-incompatible at block {j}: minimal projection image has trace {got}, expected {want}"
                    ),
                ));
            }
        }
        out
    }

    /// Image of one minimal projection of source block j, as a
    /// projection of the target.
    pub fn min_profile(&self, j: usize, target: &TracialAlgebra) -> ProjectionSpec {
        ProjectionSpec::new(
            self.rows
                .iter()
                .zip(&target.summands)
                .map(|(row, s)| match (&row[j], &s.kind) {
                    (Coupling::Mult(k), _) => ProjComponent::Rank(*k),
                    (Coupling::Trace(c), _) => {
                        ProjComponent::RelTrace(c.clone() / s.weight.clone())
                    }
                })
                .collect(),
        )
    }

    /// Image of the unit of source block j (m_j minimal projections).
    pub fn unit_profile(
        &self,
        j: usize,
        source: &MultiMatrix,
        target: &TracialAlgebra,
    ) -> ProjectionSpec {
        let m = source.summands[j].size;
        ProjectionSpec::new(
            self.rows
                .iter()
                .zip(&target.summands)
                .map(|(row, s)| match (&row[j], &s.kind) {
                    (Coupling::Mult(k), _) => ProjComponent::Rank(k * m),
                    (Coupling::Trace(c), _) => ProjComponent::RelTrace(
                        ExtRat::int(m as i64) * c.clone() / s.weight.clone(),
                    ),
                })
                .collect(),
        )
    }

    /// Detect that the embedding is an isomorphism onto the whole target
    /// (the target is a permuted copy of the source). Returns, for each
    /// target summand, the source block it coincides with.
    pub fn isomorphism_onto(
        &self,
        source: &MultiMatrix,
        target: &TracialAlgebra,
    ) -> Option<Vec<usize>> {
        if target.summands.len() != source.summands.len() {
            return None;
        }
        let mut assignment = Vec::with_capacity(self.rows.len());
        let mut used = vec![false; source.summands.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let n = match target.summands[i].kind {
                SummandKind::Matrix(n) => n,
                _ => return None,
            };
            let mut hit = None;
            for (j, cell) in row.iter().enumerate() {
                match cell {
                    Coupling::Mult(0) => {}
                    Coupling::Mult(1) if hit.is_none() && source.summands[j].size == n => {
                        hit = Some(j)
                    }
                    _ => return None,
                }
            }
            let j = hit?;
            if used[j] {
                return None;
            }
            used[j] = true;
            assignment.push(j);
        }
        Some(assignment)
    }
}

impl fmt::Debug for Inclusion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Result of cutting an embedding down to an abelian corner of the
/// source: one minimal projection per block.
pub struct CornerReduction {
    /// The corner of the source: abelian, one block per original block.
    pub source: MultiMatrix,
    /// The corner of the target.
    pub target: TracialAlgebra,
    /// The induced embedding of the abelian corner.
    pub inclusion: Inclusion,
    /// Global trace of the corner projection in the target.
    pub scale: ExtRat,
    /// The corner projection in the original target.
    pub projection: ProjectionSpec,
}

/// Cut down to q = a sum of one minimal projection per source block.
/// The corner qDq is abelian; couplings survive verbatim (ranks) or
/// renormalized by the corner trace (diffuse couplings). Unitality of
/// the original embedding guarantees q has full central support.
pub fn restrict_to_corner(
    source: &MultiMatrix,
    target: &TracialAlgebra,
    incl: &Inclusion,
) -> CornerReduction {
    let q = ProjectionSpec::new(
        incl.rows
            .iter()
            .zip(&target.summands)
            .map(|(row, s)| {
                if s.kind.is_type_i() {
                    let total: u32 = row
                        .iter()
                        .map(|c| match c {
                            Coupling::Mult(k) => *k,
                            Coupling::Trace(_) => 0,
                        })
                        .sum();
                    ProjComponent::Rank(total)
                } else {
                    let total: ExtRat = row
                        .iter()
                        .map(|c| match c {
                            Coupling::Trace(t) => t.clone(),
                            Coupling::Mult(_) => ExtRat::zero(),
                        })
                        .sum();
                    ProjComponent::RelTrace(total / s.weight.clone())
                }
            })
            .collect(),
    );
    let scale = q.global_trace(target);
    let corner_target = compress(target, &q).expect("unitality forces full central support");
    let corner_source = MultiMatrix::new(
        (0..source.summands.len())
            .map(|j| (1, source.min_trace(j) / scale.clone()))
            .collect(),
    );
    let corner_incl = Inclusion::new(
        incl.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| match c {
                        Coupling::Mult(k) => Coupling::Mult(*k),
                        Coupling::Trace(t) => Coupling::Trace(t.clone() / scale.clone()),
                    })
                    .collect()
            })
            .collect(),
    );
    CornerReduction {
        source: corner_source,
        target: corner_target,
        inclusion: corner_incl,
        scale,
        projection: q,
    }
}
