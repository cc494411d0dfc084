//! Tagged summands and finite direct sums with exact trace weights.

use super::Violation;
use crate::rat::ExtRat;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;

/// Forward Debug to Display so assertion output stays readable.
macro_rules! fmt_as_display {
    () => {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            fmt::Display::fmt(self, f)
        }
    };
}

/// The kind of one central summand.
///
/// `Matrix(1)` is the scalars; `Interval(n)` is the diffuse abelian
/// algebra tensored with an n×n matrix algebra; `HypII1` is the
/// hyperfinite factor; `Ifgf(t)` is the interpolated free-group factor
/// with parameter `t` (`t > 1`, possibly `inf`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum SummandKind {
    Matrix(u32),
    Interval(u32),
    HypII1,
    Ifgf(ExtRat),
}

impl SummandKind {
    /// Relative dimension of this kind on its own (weight 1).
    pub fn rel_dim(&self) -> ExtRat {
        match self {
            SummandKind::Matrix(n) => {
                ExtRat::one() - (ExtRat::int(*n as i64) * ExtRat::int(*n as i64)).recip()
            }
            SummandKind::Interval(_) | SummandKind::HypII1 => ExtRat::one(),
            SummandKind::Ifgf(t) => t.clone(),
        }
    }

    pub fn is_type_i(&self) -> bool {
        matches!(self, SummandKind::Matrix(_) | SummandKind::Interval(_))
    }

    /// A II₁ factor summand (hyperfinite or interpolated free-group).
    pub fn is_factor(&self) -> bool {
        matches!(self, SummandKind::HypII1 | SummandKind::Ifgf(_))
    }

    /// Internal factor parameter: 1 for the hyperfinite factor, t for
    /// `Ifgf(t)`. None for type-I kinds.
    pub fn factor_param(&self) -> Option<ExtRat> {
        match self {
            SummandKind::HypII1 => Some(ExtRat::one()),
            SummandKind::Ifgf(t) => Some(t.clone()),
            _ => None,
        }
    }

    fn order_tag(&self) -> u8 {
        match self {
            SummandKind::Matrix(_) => 0,
            SummandKind::Interval(_) => 1,
            SummandKind::HypII1 => 2,
            SummandKind::Ifgf(_) => 3,
        }
    }

    fn order_param(&self) -> ExtRat {
        match self {
            SummandKind::Matrix(n) | SummandKind::Interval(n) => ExtRat::int(*n as i64),
            SummandKind::HypII1 => ExtRat::zero(),
            SummandKind::Ifgf(t) => t.clone(),
        }
    }

    pub fn wire_name(&self) -> &'static str {
        match self {
            SummandKind::Matrix(_) => "matrix",
            SummandKind::Interval(_) => "interval",
            SummandKind::HypII1 => "hyp2",
            SummandKind::Ifgf(_) => "ifgf",
        }
    }

    pub fn wire_param(&self) -> Option<String> {
        match self {
            SummandKind::Matrix(n) | SummandKind::Interval(n) => Some(n.to_string()),
            SummandKind::HypII1 => None,
            SummandKind::Ifgf(t) => Some(t.to_string()),
        }
    }

    fn order_key(&self) -> (u8, ExtRat) {
        (self.order_tag(), self.order_param())
    }
}

impl PartialOrd for SummandKind {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SummandKind {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

impl fmt::Display for SummandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.wire_param() {
            Some(p) => write!(f, "{}({})", self.wire_name(), p),
            None => write!(f, "{}", self.wire_name()),
        }
    }
}

impl fmt::Debug for SummandKind {
    fmt_as_display!();
}

/// One central summand with its global trace weight.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Summand {
    pub kind: SummandKind,
    pub weight: ExtRat,
}

impl Summand {
    pub fn new(kind: SummandKind, weight: ExtRat) -> Self {
        Summand { kind, weight }
    }
}

impl fmt::Display for Summand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind, self.weight)
    }
}

impl fmt::Debug for Summand {
    fmt_as_display!();
}

impl Serialize for Summand {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Summand", 3)?;
        st.serialize_field("kind", self.kind.wire_name())?;
        st.serialize_field("param", &self.kind.wire_param())?;
        st.serialize_field("weight", &self.weight)?;
        st.end()
    }
}

/// Total (complex) dimension of an algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dim {
    Finite(u64),
    Infinite,
}

/// A finite direct sum of tracial summands; weights sum to exactly 1.
///
/// Summands are kept in the order given (it is how projections,
/// embeddings and locators address them); `canonicalize` produces the
/// sorted form together with the permutation used.
#[derive(Clone, PartialEq, Eq)]
pub struct TracialAlgebra {
    pub summands: Vec<Summand>,
}

impl TracialAlgebra {
    pub fn new(summands: Vec<Summand>) -> Self {
        TracialAlgebra { summands }
    }

    pub fn single(kind: SummandKind) -> Self {
        TracialAlgebra::new(vec![Summand::new(kind, ExtRat::one())])
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn validate(&self, path: &str) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.summands.is_empty() {
            out.push(Violation::new(path, "algebra has no summands"));
            return out;
        }
        for (i, s) in self.summands.iter().enumerate() {
            let sp = format!("{path}.summand[{i}]");
            match &s.kind {
                SummandKind::Matrix(n) | SummandKind::Interval(n) => {
                    if *n == 0 {
                        out.push(Violation::new(&sp, "size must be a positive integer"));
                    }
                }
                SummandKind::Ifgf(t) => {
                    if *t <= ExtRat::one() {
                        out.push(Violation::new(
                            &sp,
                            format!("ifgf parameter must exceed 1, got {t}"),
                        ));
                    }
                }
                SummandKind::HypII1 => {}
            }
            if s.weight.is_inf() || !s.weight.is_positive() || s.weight > ExtRat::one() {
                out.push(Violation::new(
                    &sp,
                    format!("weight must lie in (0,1], got {}", s.weight),
                ));
            }
        }
        let total: ExtRat = self.summands.iter().map(|s| s.weight.clone()).sum();
        if !total.is_one() {
            out.push(Violation::new(path, format!("weights sum {total} ≠ 1")));
        }
        out
    }

    pub fn dim(&self) -> Dim {
        let mut total: u64 = 0;
        for s in &self.summands {
            match s.kind {
                SummandKind::Matrix(n) => total += (n as u64) * (n as u64),
                _ => return Dim::Infinite,
            }
        }
        Dim::Finite(total)
    }

    pub fn is_type_i(&self) -> bool {
        self.summands.iter().all(|s| s.kind.is_type_i())
    }

    /// If the algebra is one diffuse factor of full weight, its kind.
    pub fn single_factor(&self) -> Option<&SummandKind> {
        match self.summands.as_slice() {
            [s] if s.kind.is_factor() => Some(&s.kind),
            _ => None,
        }
    }

    pub fn has_factor_summand(&self) -> bool {
        self.summands.iter().any(|s| s.kind.is_factor())
    }

    /// Sorted copy plus the permutation used: `perm[new] = old`.
    pub fn canonicalize_with_perm(&self) -> (TracialAlgebra, Vec<usize>) {
        let mut idx: Vec<usize> = (0..self.summands.len()).collect();
        idx.sort_by(|&a, &b| {
            let sa = &self.summands[a];
            let sb = &self.summands[b];
            sa.kind
                .cmp(&sb.kind)
                .then_with(|| sa.weight.cmp(&sb.weight))
        });
        let sorted = TracialAlgebra::new(idx.iter().map(|&i| self.summands[i].clone()).collect());
        (sorted, idx)
    }

    pub fn canonicalize(&self) -> TracialAlgebra {
        self.canonicalize_with_perm().0
    }
}

impl fmt::Display for TracialAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.summands.iter().map(|s| s.to_string()).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TracialAlgebra {
    fmt_as_display!();
}

impl Serialize for TracialAlgebra {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.summands.serialize(serializer)
    }
}

/// One matrix block of a multimatrix algebra.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct MultiMatrixSummand {
    pub size: u32,
    pub weight: ExtRat,
}

/// A finite-dimensional amalgam: a direct sum of matrix blocks with
/// exact trace weights summing to 1.
#[derive(Clone, PartialEq, Eq, Serialize)]
pub struct MultiMatrix {
    pub summands: Vec<MultiMatrixSummand>,
}

impl MultiMatrix {
    pub fn new(blocks: Vec<(u32, ExtRat)>) -> Self {
        MultiMatrix {
            summands: blocks
                .into_iter()
                .map(|(size, weight)| MultiMatrixSummand { size, weight })
                .collect(),
        }
    }

    pub fn scalars() -> Self {
        MultiMatrix::new(vec![(1, ExtRat::one())])
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// D = ℂ.
    pub fn is_scalars(&self) -> bool {
        self.summands.len() == 1 && self.summands[0].size == 1
    }

    pub fn is_abelian(&self) -> bool {
        self.summands.iter().all(|s| s.size == 1)
    }

    /// Global trace of one minimal projection of block j.
    pub fn min_trace(&self, j: usize) -> ExtRat {
        let s = &self.summands[j];
        s.weight.clone() / ExtRat::int(s.size as i64)
    }

    pub fn validate(&self, path: &str) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.summands.is_empty() {
            out.push(Violation::new(path, "amalgam has no blocks"));
            return out;
        }
        for (j, s) in self.summands.iter().enumerate() {
            let sp = format!("{path}.block[{j}]");
            if s.size == 0 {
                out.push(Violation::new(&sp, "size must be a positive integer"));
            }
            if s.weight.is_inf() || !s.weight.is_positive() || s.weight > ExtRat::one() {
                out.push(Violation::new(
                    &sp,
                    format!("weight must lie in (0,1], got {}", s.weight),
                ));
            }
        }
        let total: ExtRat = self.summands.iter().map(|s| s.weight.clone()).sum();
        if !total.is_one() {
            out.push(Violation::new(path, format!("weights sum {total} ≠ 1")));
        }
        out
    }

    /// The same algebra viewed as a direct sum of matrix summands.
    pub fn as_algebra(&self) -> TracialAlgebra {
        TracialAlgebra::new(
            self.summands
                .iter()
                .map(|s| Summand::new(SummandKind::Matrix(s.size), s.weight.clone()))
                .collect(),
        )
    }
}

impl fmt::Display for MultiMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .summands
            .iter()
            .map(|s| format!("matrix({}):{}", s.size, s.weight))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for MultiMatrix {
    fmt_as_display!();
}
