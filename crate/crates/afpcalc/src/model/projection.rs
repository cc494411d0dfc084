//! Projections specified summand-by-summand.

use super::summand::{SummandKind, TracialAlgebra};
use super::Violation;
use crate::rat::ExtRat;
use std::fmt;

/// One summand's component of a projection: an integer rank (matrix
/// summands), an integer multiplicity (interval summands, constant
/// across the interval after canonicalization), or a relative trace in
/// [0,1] (diffuse factor summands).
#[derive(Clone, PartialEq, Eq)]
pub enum ProjComponent {
    Rank(u32),
    RelTrace(ExtRat),
}

impl fmt::Display for ProjComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjComponent::Rank(k) => write!(f, "rank {k}"),
            ProjComponent::RelTrace(t) => write!(f, "trace {t}"),
        }
    }
}

impl fmt::Debug for ProjComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A projection in a tracial algebra, one component per summand.
#[derive(Clone, PartialEq, Eq)]
pub struct ProjectionSpec {
    pub components: Vec<ProjComponent>,
}

impl ProjectionSpec {
    pub fn new(components: Vec<ProjComponent>) -> Self {
        ProjectionSpec { components }
    }

    /// The identity projection of `alg`.
    pub fn full(alg: &TracialAlgebra) -> Self {
        ProjectionSpec::new(
            alg.summands
                .iter()
                .map(|s| match s.kind {
                    SummandKind::Matrix(n) | SummandKind::Interval(n) => ProjComponent::Rank(n),
                    _ => ProjComponent::RelTrace(ExtRat::one()),
                })
                .collect(),
        )
    }

    pub fn validate(&self, alg: &TracialAlgebra, path: &str) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.components.len() != alg.summands.len() {
            out.push(Violation::new(
                path,
                format!(
                    "projection has {} components but the algebra has {} summands",
                    self.components.len(),
                    alg.summands.len()
                ),
            ));
            return out;
        }
        for (i, (c, s)) in self.components.iter().zip(&alg.summands).enumerate() {
            let cp = format!("{path}.component[{i}]");
            match (c, &s.kind) {
                (ProjComponent::Rank(k), SummandKind::Matrix(n))
                | (ProjComponent::Rank(k), SummandKind::Interval(n)) => {
                    if k > n {
                        out.push(Violation::new(
                            &cp,
                            format!("rank {k} exceeds summand size {n}"),
                        ));
                    }
                }
                (ProjComponent::RelTrace(t), SummandKind::HypII1)
                | (ProjComponent::RelTrace(t), SummandKind::Ifgf(_)) => {
                    if t.is_inf() || t.is_negative() || *t > ExtRat::one() {
                        out.push(Violation::new(
                            &cp,
                            format!("relative trace must lie in [0,1], got {t}"),
                        ));
                    }
                }
                (c, k) => {
                    out.push(Violation::new(
                        &cp,
                        format!("component `{c}` does not match summand kind {k}"),
                    ));
                }
            }
        }
        out
    }

    /// Trace of the component within its summand (k/n or the stored β).
    pub fn relative_trace(&self, i: usize, alg: &TracialAlgebra) -> ExtRat {
        match (&self.components[i], &alg.summands[i].kind) {
            (ProjComponent::Rank(k), SummandKind::Matrix(n))
            | (ProjComponent::Rank(k), SummandKind::Interval(n)) => {
                ExtRat::int(*k as i64) / ExtRat::int(*n as i64)
            }
            (ProjComponent::RelTrace(t), _) => t.clone(),
            _ => panic!("projection component does not match summand kind"),
        }
    }

    /// Global trace τ(p) = Σᵢ αᵢ · (relative trace in summand i).
    pub fn global_trace(&self, alg: &TracialAlgebra) -> ExtRat {
        (0..self.components.len())
            .map(|i| alg.summands[i].weight.clone() * self.relative_trace(i, alg))
            .sum()
    }

    pub fn is_zero_component(&self, i: usize) -> bool {
        match &self.components[i] {
            ProjComponent::Rank(k) => *k == 0,
            ProjComponent::RelTrace(t) => t.is_zero(),
        }
    }

    pub fn is_full_component(&self, i: usize, alg: &TracialAlgebra) -> bool {
        match (&self.components[i], &alg.summands[i].kind) {
            (ProjComponent::Rank(k), SummandKind::Matrix(n))
            | (ProjComponent::Rank(k), SummandKind::Interval(n)) => k == n,
            (ProjComponent::RelTrace(t), _) => t.is_one(),
            _ => false,
        }
    }

    /// Every component nonzero.
    pub fn has_full_central_support(&self) -> bool {
        (0..self.components.len()).all(|i| !self.is_zero_component(i))
    }

    pub fn is_identity(&self, alg: &TracialAlgebra) -> bool {
        (0..self.components.len()).all(|i| self.is_full_component(i, alg))
    }
}

impl fmt::Display for ProjectionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl fmt::Debug for ProjectionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::summand::Summand;

    fn mixed() -> TracialAlgebra {
        TracialAlgebra::new(vec![
            Summand::new(SummandKind::Matrix(2), ExtRat::ratio(1, 2)),
            Summand::new(SummandKind::HypII1, ExtRat::ratio(1, 2)),
        ])
    }

    #[test]
    fn traces_combine_rank_and_relative_parts() {
        let a = mixed();
        let p = ProjectionSpec::new(vec![
            ProjComponent::Rank(1),
            ProjComponent::RelTrace(ExtRat::ratio(1, 2)),
        ]);
        assert!(p.validate(&a, "p").is_empty());
        // 1/2·(1/2) + 1/2·(1/2) = 1/2
        assert_eq!(p.global_trace(&a), ExtRat::ratio(1, 2));
        assert!(p.has_full_central_support());
        assert!(!p.is_identity(&a));
        assert!(ProjectionSpec::full(&a).is_identity(&a));
    }

    #[test]
    fn component_kind_mismatch_is_rejected() {
        let a = mixed();
        let p = ProjectionSpec::new(vec![
            ProjComponent::RelTrace(ExtRat::ratio(1, 2)),
            ProjComponent::Rank(1),
        ]);
        assert_eq!(p.validate(&a, "p").len(), 2);
    }

    #[test]
    fn rank_bounds_are_checked() {
        let a = mixed();
        let p = ProjectionSpec::new(vec![
            ProjComponent::Rank(3),
            ProjComponent::RelTrace(ExtRat::ratio(3, 2)),
        ]);
        let v = p.validate(&a, "p");
        assert_eq!(v.len(), 2);
        assert!(v[0].message.contains("exceeds"));
    }
}
