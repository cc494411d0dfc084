//! Projection locators: where the tracked input projections land.
//!
//! Tracked projections are one minimal projection per amalgam block
//! (`D:j`) and the central summand projections of both inputs (`A:i`,
//! `B:i`). A locator stores, for each tracked projection, its global
//! trace within every output part; each vector sums to the projection's
//! global trace, and each entry is bounded by the part's weight.

use crate::rat::ExtRat;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TrackedId {
    D(usize),
    A(usize),
    B(usize),
}

impl fmt::Display for TrackedId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrackedId::D(j) => write!(f, "D:{j}"),
            TrackedId::A(i) => write!(f, "A:{i}"),
            TrackedId::B(i) => write!(f, "B:{i}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocatorEntry {
    pub id: TrackedId,
    pub traces: Vec<ExtRat>,
}

impl Serialize for LocatorEntry {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("LocatorEntry", 2)?;
        st.serialize_field("id", &self.id.to_string())?;
        st.serialize_field("traces", &self.traces)?;
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct Locator {
    pub entries: Vec<LocatorEntry>,
}

impl Locator {
    pub fn new(entries: Vec<LocatorEntry>) -> Self {
        Locator { entries }
    }

    pub fn get(&self, id: TrackedId) -> Option<&[ExtRat]> {
        self.entries
            .iter()
            .find(|e| e.id == id)
            .map(|e| e.traces.as_slice())
    }

    /// Apply an output-part permutation (`perm[new] = old`) to every
    /// trace vector.
    pub fn permuted(&self, perm: &[usize]) -> Locator {
        Locator::new(
            self.entries
                .iter()
                .map(|e| LocatorEntry {
                    id: e.id,
                    traces: perm.iter().map(|&old| e.traces[old].clone()).collect(),
                })
                .collect(),
        )
    }

    /// Check conservation against expected totals and per-part weight
    /// bounds. `part_weights` indexes output parts.
    pub fn check(
        &self,
        part_weights: &[ExtRat],
        expected_totals: &[(TrackedId, ExtRat)],
    ) -> Result<(), String> {
        for (id, want) in expected_totals {
            let entry = self
                .entries
                .iter()
                .find(|e| e.id == *id)
                .ok_or_else(|| format!("locator is missing tracked projection {id}"))?;
            if entry.traces.len() != part_weights.len() {
                return Err(format!(
                    "locator for {id} has {} entries across {} output parts",
                    entry.traces.len(),
                    part_weights.len()
                ));
            }
            let mut total = ExtRat::zero();
            for (t, w) in entry.traces.iter().zip(part_weights) {
                if t.is_negative() {
                    return Err(format!("locator for {id} has a negative trace {t}"));
                }
                if *t > *w {
                    return Err(format!("locator for {id} exceeds a part weight: {t} > {w}"));
                }
                total = total + t.clone();
            }
            if total != *want {
                return Err(format!("locator for {id} sums to {total}, expected {want}"));
            }
        }
        Ok(())
    }
}
