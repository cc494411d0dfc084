//! Result reports: status, output parts, free dimension, locators,
//! certificate.

use super::certificate::CertStep;
use super::locator::Locator;
use crate::model::{Summand, SummandKind, TracialAlgebra, Violation};
use crate::rat::ExtRat;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Resolved,
    Partial,
    Error,
}

/// One output part: a fully identified summand, or an unresolved leaf
/// carrying its weight and a description of the open sub-product.
#[derive(Clone, PartialEq, Eq)]
pub enum OutputPart {
    Summand(Summand),
    Unresolved { weight: ExtRat, detail: String },
}

impl OutputPart {
    pub fn weight(&self) -> &ExtRat {
        match self {
            OutputPart::Summand(s) => &s.weight,
            OutputPart::Unresolved { weight, .. } => weight,
        }
    }

    pub fn as_summand(&self) -> Option<&Summand> {
        match self {
            OutputPart::Summand(s) => Some(s),
            OutputPart::Unresolved { .. } => None,
        }
    }
}

impl fmt::Display for OutputPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutputPart::Summand(s) => write!(f, "{s}"),
            OutputPart::Unresolved { weight, detail } => {
                write!(f, "unresolved:{weight} ({detail})")
            }
        }
    }
}

impl fmt::Debug for OutputPart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for OutputPart {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            OutputPart::Summand(s) => s.serialize(serializer),
            OutputPart::Unresolved { weight, detail } => {
                let mut st = serializer.serialize_struct("Unresolved", 4)?;
                st.serialize_field("kind", "unresolved")?;
                st.serialize_field("param", &None::<String>)?;
                st.serialize_field("weight", weight)?;
                st.serialize_field("detail", detail)?;
                st.end()
            }
        }
    }
}

#[derive(Clone, Serialize)]
pub struct ResultReport {
    pub status: Status,
    #[serde(rename = "summands")]
    pub parts: Vec<OutputPart>,
    pub fdim: Option<ExtRat>,
    pub in_r0: bool,
    #[serde(rename = "locators")]
    pub locator: Locator,
    pub certificate: Vec<CertStep>,
    pub diagnostics: Vec<Violation>,
}

impl ResultReport {
    pub fn error(diagnostics: Vec<Violation>) -> Self {
        ResultReport {
            status: Status::Error,
            parts: Vec::new(),
            fdim: None,
            in_r0: false,
            locator: Locator::default(),
            certificate: Vec::new(),
            diagnostics,
        }
    }

    pub fn internal_error(message: impl Into<String>) -> Self {
        ResultReport::error(vec![Violation::new("engine", message)])
    }

    /// The output as an algebra, when every part is resolved.
    pub fn output_algebra(&self) -> Option<TracialAlgebra> {
        let mut summands = Vec::with_capacity(self.parts.len());
        for p in &self.parts {
            summands.push(p.as_summand()?.clone());
        }
        Some(TracialAlgebra::new(summands))
    }

    pub fn single_factor(&self) -> Option<&Summand> {
        match self.parts.as_slice() {
            [OutputPart::Summand(s)] if s.kind.is_factor() => Some(s),
            _ => None,
        }
    }

    pub fn part_weights(&self) -> Vec<ExtRat> {
        self.parts.iter().map(|p| p.weight().clone()).collect()
    }

    /// True iff no output free-group parameter is infinite.
    pub fn computed_in_r0(parts: &[OutputPart]) -> bool {
        parts.iter().all(|p| match p {
            OutputPart::Summand(Summand {
                kind: SummandKind::Ifgf(t),
                ..
            }) => t.is_finite(),
            _ => true,
        })
    }

    /// Sort parts canonically (summands by kind/parameter/weight, then
    /// unresolved leaves by weight) and permute locator columns to
    /// match.
    pub fn canonicalized(mut self) -> Self {
        let mut idx: Vec<usize> = (0..self.parts.len()).collect();
        idx.sort_by(|&x, &y| {
            let px = &self.parts[x];
            let py = &self.parts[y];
            match (px, py) {
                (OutputPart::Summand(a), OutputPart::Summand(b)) => {
                    a.kind.cmp(&b.kind).then_with(|| a.weight.cmp(&b.weight))
                }
                (OutputPart::Summand(_), OutputPart::Unresolved { .. }) => std::cmp::Ordering::Less,
                (OutputPart::Unresolved { .. }, OutputPart::Summand(_)) => {
                    std::cmp::Ordering::Greater
                }
                (
                    OutputPart::Unresolved {
                        weight: wa,
                        detail: da,
                    },
                    OutputPart::Unresolved {
                        weight: wb,
                        detail: db,
                    },
                ) => wa.cmp(wb).then_with(|| da.cmp(db)),
            }
        });
        self.parts = idx.iter().map(|&i| self.parts[i].clone()).collect();
        self.locator = self.locator.permuted(&idx);
        self
    }
}

impl fmt::Display for ResultReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(
            f,
            "{:?}: {} (fdim {})",
            self.status,
            parts.join(" + "),
            self.fdim
                .as_ref()
                .map(|v| v.to_string())
                .unwrap_or_else(|| "-".to_string())
        )
    }
}
