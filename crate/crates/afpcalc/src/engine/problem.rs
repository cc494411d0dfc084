//! An amalgamated free product problem: two tracial direct sums with
//! trace-preserving unital inclusions of a common multimatrix algebra.

use super::locator::TrackedId;
use crate::model::{fdim, fdim_multimatrix, Inclusion, MultiMatrix, TracialAlgebra, Violation};
use crate::rat::ExtRat;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub a: TracialAlgebra,
    pub b: TracialAlgebra,
    pub d: MultiMatrix,
    pub incl_a: Inclusion,
    pub incl_b: Inclusion,
}

impl Problem {
    pub fn new(
        a: TracialAlgebra,
        b: TracialAlgebra,
        d: MultiMatrix,
        incl_a: Inclusion,
        incl_b: Inclusion,
    ) -> Self {
        Problem {
            a,
            b,
            d,
            incl_a,
            incl_b,
        }
    }

    /// Both sides over the scalars, with the canonical embeddings.
    pub fn over_scalars(a: TracialAlgebra, b: TracialAlgebra) -> Self {
        let incl_a = Inclusion::of_scalars(&a);
        let incl_b = Inclusion::of_scalars(&b);
        Problem {
            a,
            b,
            d: MultiMatrix::scalars(),
            incl_a,
            incl_b,
        }
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        v.extend(self.a.validate("A"));
        v.extend(self.b.validate("B"));
        v.extend(self.d.validate("D"));
        if v.is_empty() {
            v.extend(self.incl_a.validate(&self.d, &self.a, "embed D into A"));
            v.extend(self.incl_b.validate(&self.d, &self.b, "embed D into B"));
        }
        v
    }

    /// The free-dimension value the output must carry:
    /// fdim(A) + fdim(B) − fdim(D).
    pub fn fdim_prediction(&self) -> ExtRat {
        let da = fdim(&self.a).value;
        let db = fdim(&self.b).value;
        let dd = fdim_multimatrix(&self.d).value;
        if da.is_inf() || db.is_inf() {
            ExtRat::inf()
        } else {
            da + db - dd
        }
    }

    /// Swap the two sides (used to normalize which side carries a
    /// distinguished summand).
    pub fn swapped(&self) -> Problem {
        Problem {
            a: self.b.clone(),
            b: self.a.clone(),
            d: self.d.clone(),
            incl_a: self.incl_b.clone(),
            incl_b: self.incl_a.clone(),
        }
    }

    /// Every tracked projection with its global trace: one minimal
    /// projection per amalgam block, plus each side's central summand
    /// projections.
    pub fn tracked_expected(&self) -> Vec<(TrackedId, ExtRat)> {
        let mut out = Vec::new();
        for j in 0..self.d.summands.len() {
            out.push((TrackedId::D(j), self.d.min_trace(j)));
        }
        for (i, s) in self.a.summands.iter().enumerate() {
            out.push((TrackedId::A(i), s.weight.clone()));
        }
        for (i, s) in self.b.summands.iter().enumerate() {
            out.push((TrackedId::B(i), s.weight.clone()));
        }
        out
    }

    /// Compact one-line description, used in unresolved-case details.
    pub fn describe(&self) -> String {
        format!("{} *_[{}] {}", self.a, self.d, self.b)
    }
}

impl fmt::Display for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}
