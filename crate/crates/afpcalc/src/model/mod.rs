//! Exact data model: direct sums of tracial summands, multimatrix
//! algebras, projections, unital trace-preserving embeddings, and the
//! free-dimension ledger.

pub mod fdim;
pub mod inclusion;
pub mod ops;
pub mod projection;
pub mod summand;

pub use fdim::{fdim, fdim_multimatrix, FdimEntry, FdimValue};
pub use inclusion::{restrict_to_corner, CornerReduction, Coupling, Inclusion};
pub use ops::{
    central_carrier_complement, compress, compress_dropping_zeros, dilate_factor,
    restrict_to_support,
};
pub use projection::{ProjComponent, ProjectionSpec};
pub use summand::{Dim, MultiMatrix, MultiMatrixSummand, Summand, SummandKind, TracialAlgebra};

use serde::Serialize;
use std::fmt;

/// One validation failure, addressed by a path into the offending object.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("summand {summand} has a zero projection component: not full central support")]
    NotFullCentralSupport { summand: usize },
    #[error("projection has {got} components but the algebra has {want} summands")]
    ComponentCountMismatch { got: usize, want: usize },
    #[error("dilation target must be a single diffuse summand: ambiguous dilation")]
    AmbiguousDilation,
    #[error("dilation ratio must lie in (0,1], got {0}")]
    BadDilationRatio(crate::rat::ExtRat),
    #[error("projection component {summand} is malformed: {message}")]
    BadComponent { summand: usize, message: String },
}
