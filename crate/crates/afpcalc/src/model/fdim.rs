//! Free-dimension values with a replayable computation ledger.
//!
//! The direct-sum rule: for A = ⊕ᵢ Aᵢ with weights αᵢ and per-kind
//! relative dimensions dᵢ is fdim(A) = 1 + Σᵢ αᵢ²(dᵢ − 1),
//! where dᵢ = 1 − nᵢ⁻² for a matrix summand, 1 for interval and
//! hyperfinite summands, and t for an interpolated free-group factor.
//! For a multimatrix algebra this collapses to 1 − Σⱼ γⱼ²/mⱼ².

use super::summand::{MultiMatrix, TracialAlgebra};
use crate::rat::ExtRat;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "entry", rename_all = "snake_case")]
pub enum FdimEntry {
    /// One summand's contribution: weight αᵢ, relative dimension dᵢ.
    SummandTerm {
        index: usize,
        kind: String,
        weight: ExtRat,
        rel_dim: ExtRat,
    },
    /// The combined value 1 + Σ αᵢ²(dᵢ − 1).
    DirectSum { value: ExtRat },
}

/// An exact free-dimension value together with the ledger of terms that
/// produced it; `replay` recomputes the value from the ledger alone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FdimValue {
    pub value: ExtRat,
    pub ledger: Vec<FdimEntry>,
}

impl FdimValue {
    /// Recompute the value from the recorded terms.
    pub fn replay(&self) -> Result<ExtRat, String> {
        let mut acc = ExtRat::one();
        let mut recorded_total = None;
        for e in &self.ledger {
            match e {
                FdimEntry::SummandTerm {
                    weight, rel_dim, ..
                } => {
                    let deficit = rel_dim
                        .clone()
                        .checked_sub(ExtRat::one())
                        .map_err(|e| e.to_string())?;
                    let term = weight
                        .square()
                        .checked_mul(deficit)
                        .map_err(|e| e.to_string())?;
                    acc = acc + term;
                }
                FdimEntry::DirectSum { value } => recorded_total = Some(value.clone()),
            }
        }
        match recorded_total {
            Some(v) if v == acc => Ok(acc),
            Some(v) => Err(format!("ledger replays to {acc} but records {v}")),
            None => Err("ledger has no total entry".to_string()),
        }
    }
}

/// Direct-sum rule over the summands of a tracial algebra.
pub fn fdim(alg: &TracialAlgebra) -> FdimValue {
    let mut ledger = Vec::with_capacity(alg.summands.len() + 1);
    let mut value = ExtRat::one();
    for (i, s) in alg.summands.iter().enumerate() {
        let d = s.kind.rel_dim();
        ledger.push(FdimEntry::SummandTerm {
            index: i,
            kind: s.kind.to_string(),
            weight: s.weight.clone(),
            rel_dim: d.clone(),
        });
        // αᵢ²(dᵢ − 1): for t = inf this is inf (weights are positive),
        // for matrix summands it is negative.
        let term = if d.is_inf() {
            ExtRat::inf()
        } else {
            s.weight.square() * (d - ExtRat::one())
        };
        value = value + term;
    }
    ledger.push(FdimEntry::DirectSum {
        value: value.clone(),
    });
    FdimValue { value, ledger }
}

/// The same rule specialized to a multimatrix algebra: 1 − Σⱼ γⱼ²/mⱼ².
pub fn fdim_multimatrix(d: &MultiMatrix) -> FdimValue {
    // Shared code path: a multimatrix algebra is a direct sum of matrix
    // summands, on which the closed form agrees with the general rule.
    fdim(&d.as_algebra())
}
