//! Spectral statistics of the compressed product of two projections in
//! general position.
//!
//! P is the diagonal projection of rank round(a·n); Q is a Haar-rotated
//! diagonal projection of rank round(b·n). The estimate reports the
//! eigenvalues of PQP restricted to the range of P — the kernel of P
//! itself is excluded throughout. The histogram is normalized to total
//! mass 1 over that compression range, while the endpoint atoms are
//! reported in the ambient normalized trace, the convention in which
//! the unit atom converges to max(a+b−1, 0) and the null atom to
//! max(a−b, 0) as n grows.

use super::haar::haar_frame;
use super::McError;
use crate::rat::ExtRat;
use ndarray::prelude::*;
use ndarray_linalg::{EigValsh, UPLO};
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::Serialize;

pub const HISTOGRAM_BINS: usize = 50;

/// Eigenvalue statistics of PQP on the range of P. Deterministic for a
/// fixed (a, b, n, seed, reps) tuple.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEstimate {
    pub a: ExtRat,
    pub b: ExtRat,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub reps: u32,
    /// Atom window half-width: eigenvalues within `delta` of an
    /// endpoint count toward that endpoint's atom.
    pub delta: f64,
    /// max(a+b−1, 0), the exact unit-atom mass for free projections.
    pub predicted_atom1: f64,
    pub atom1: f64,
    pub atom0: f64,
    pub histogram: Vec<f64>,
}

fn rank_of(trace: &ExtRat, n: usize) -> Result<usize, McError> {
    let strict_interior = trace.is_positive() && trace < &ExtRat::one();
    if trace.is_inf() || !strict_interior {
        return Err(McError::TraceOutOfRange(trace.clone()));
    }
    let scaled = trace.clone() * ExtRat::int(n as i64) + ExtRat::ratio(1, 2);
    let rank = match scaled {
        ExtRat::Fin(r) => r.floor().to_integer().to_usize().unwrap_or(n),
        ExtRat::Inf => unreachable!("finite trace times finite dimension"),
    };
    if rank == 0 || rank >= n {
        return Err(McError::DegenerateRank {
            trace: trace.clone(),
            rank,
            n,
        });
    }
    Ok(rank)
}

struct Tally {
    bins: [u64; HISTOGRAM_BINS],
    unit: u64,
    null: u64,
}

/// Monte Carlo spectrum of PQP for independent Haar-positioned
/// projection pairs of traces ≈ a and ≈ b.
pub fn two_free_projections_spectrum(
    a: &ExtRat,
    b: &ExtRat,
    n: usize,
    seed: u64,
    reps: u32,
) -> Result<SpectrumEstimate, McError> {
    if n < 500 {
        return Err(McError::DimensionTooSmall { got: n, min: 500 });
    }
    if reps == 0 {
        return Err(McError::NoRepetitions);
    }
    let rp = rank_of(a, n)?;
    let rq = rank_of(b, n)?;
    let delta = 5.0 / n as f64;

    // Integer tallies per repetition; integer aggregation makes the
    // reduction independent of scheduling order.
    let tallies: Vec<Tally> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(rep as u64);
            let frame = haar_frame(n, rq, &mut rng);
            let w = frame.slice(s![..rp, ..]);
            // PQP on range(P) is W·W†; its spectrum is the smaller Gram
            // matrix's, padded with rp − rq zeros when rq < rp.
            let (gram, pad) = if rq <= rp {
                (w.t().mapv(|z| z.conj()).dot(&w), rp - rq)
            } else {
                let wc = w.mapv(|z| z.conj());
                (w.dot(&wc.t()), 0)
            };
            let vals = gram
                .eigvalsh(UPLO::Lower)
                .expect("eigenvalues of a Gram matrix");
            let mut t = Tally {
                bins: [0; HISTOGRAM_BINS],
                unit: 0,
                null: 0,
            };
            t.null += pad as u64;
            t.bins[0] += pad as u64;
            for &v in vals.iter() {
                let v = v.clamp(0.0, 1.0);
                if v >= 1.0 - delta {
                    t.unit += 1;
                }
                if v <= delta {
                    t.null += 1;
                }
                let idx = ((v * HISTOGRAM_BINS as f64) as usize).min(HISTOGRAM_BINS - 1);
                t.bins[idx] += 1;
            }
            t
        })
        .collect();

    let mut bins = [0u64; HISTOGRAM_BINS];
    let mut unit = 0u64;
    let mut null = 0u64;
    for t in &tallies {
        for (acc, c) in bins.iter_mut().zip(t.bins.iter()) {
            *acc += c;
        }
        unit += t.unit;
        null += t.null;
    }

    let ambient = 1.0 / (reps as f64 * n as f64);
    let range_p = 1.0 / (reps as f64 * rp as f64);
    let predicted = {
        let excess = a.clone() + b.clone() - ExtRat::one();
        if excess.is_negative() {
            0.0
        } else {
            excess.as_f64()
        }
    };
    Ok(SpectrumEstimate {
        a: a.clone(),
        b: b.clone(),
        n,
        seed,
        reps,
        delta,
        predicted_atom1: predicted,
        atom1: unit as f64 * ambient,
        atom0: null as f64 * ambient,
        histogram: bins.iter().map(|&c| c as f64 * range_p).collect(),
    })
}
