//! Shared generators for randomized integration tests.
//!
//! `random_problem` produces inputs that are valid by construction, across
//! four families: free products over the scalars, mixed direct sums over a
//! small amalgam (built by spending each block's minimal-trace budget and
//! absorbing the remainder into a diffuse summand), and purely type-I sides
//! whose amalgam weights are derived from integer multiplicity patterns.

#![allow(dead_code)]

use afpcalc::engine::Problem;
use afpcalc::model::{Coupling, Inclusion, MultiMatrix, Summand, SummandKind, TracialAlgebra};
use afpcalc::rat::ExtRat;
use rand::prelude::*;
use rand_chacha::ChaCha12Rng;

pub fn rng_for(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn rat(p: i64, q: i64) -> ExtRat {
    ExtRat::ratio(p, q)
}

/// `n` positive rationals summing to one.
pub fn random_weights(rng: &mut ChaCha12Rng, n: usize) -> Vec<ExtRat> {
    let picks: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=9)).collect();
    let total: i64 = picks.iter().sum();
    picks.into_iter().map(|p| rat(p, total)).collect()
}

/// A free-group parameter in (1, ∞]; infinite roughly one time in ten.
pub fn random_factor_param(rng: &mut ChaCha12Rng) -> ExtRat {
    if rng.gen_ratio(1, 10) {
        ExtRat::inf()
    } else {
        let q = rng.gen_range(1..=4);
        let p = rng.gen_range(q + 1..=6 * q);
        rat(p, q)
    }
}

fn random_diffuse_kind(rng: &mut ChaCha12Rng) -> SummandKind {
    if rng.gen_bool(0.5) {
        SummandKind::HypII1
    } else {
        SummandKind::Ifgf(random_factor_param(rng))
    }
}

pub fn random_scalar_algebra(rng: &mut ChaCha12Rng) -> TracialAlgebra {
    let n = rng.gen_range(1..=3);
    let weights = random_weights(rng, n);
    let summands = weights
        .into_iter()
        .map(|w| {
            let kind = match rng.gen_range(0..6) {
                0 => SummandKind::Matrix(1),
                1 => SummandKind::Matrix(rng.gen_range(2..=3)),
                2 => SummandKind::Interval(rng.gen_range(1..=2)),
                3 => SummandKind::HypII1,
                _ => SummandKind::Ifgf(random_factor_param(rng)),
            };
            Summand::new(kind, w)
        })
        .collect();
    TracialAlgebra::new(summands)
}

struct RowSpec {
    kind: SummandKind,
    weight: ExtRat,
    couplings: Vec<Coupling>,
}

fn assemble(mut rows: Vec<RowSpec>, rng: &mut ChaCha12Rng) -> (TracialAlgebra, Inclusion) {
    rows.shuffle(rng);
    let alg = TracialAlgebra::new(
        rows.iter()
            .map(|r| Summand::new(r.kind.clone(), r.weight.clone()))
            .collect(),
    );
    let incl = Inclusion::new(rows.into_iter().map(|r| r.couplings).collect());
    (alg, incl)
}

/// Build one side over `d` by spending each block's minimal-trace budget:
/// a few rows take integer multiplicities (type I) or trace fractions
/// (diffuse), each leaving at least half of every touched budget, and a
/// final diffuse row absorbs whatever remains.
fn budget_side(rng: &mut ChaCha12Rng, d: &MultiMatrix) -> (TracialAlgebra, Inclusion) {
    let k = d.len();
    let sizes: Vec<u32> = d.summands.iter().map(|b| b.size).collect();
    let mut rem: Vec<ExtRat> = (0..k).map(|j| d.min_trace(j)).collect();
    let mut rows: Vec<RowSpec> = Vec::new();

    for _ in 0..rng.gen_range(0..=2) {
        if rng.gen_bool(0.5) {
            // Type-I row: shared minimal trace λ across integer multiplicities.
            let mut mults: Vec<u32> = (0..k).map(|_| rng.gen_range(0..=2)).collect();
            if mults.iter().all(|&c| c == 0) {
                mults[rng.gen_range(0..k)] = 1;
            }
            let mut lam: Option<ExtRat> = None;
            for j in 0..k {
                if mults[j] > 0 {
                    let cap = rem[j].clone() / rat(2 * i64::from(mults[j]), 1);
                    lam = Some(match lam {
                        Some(l) if l < cap => l,
                        _ => cap,
                    });
                }
            }
            let lam = lam.unwrap() / rat(rng.gen_range(1..=3), 1);
            let n: u32 = (0..k).map(|j| mults[j] * sizes[j]).sum();
            for j in 0..k {
                if mults[j] > 0 {
                    rem[j] = rem[j].clone() - lam.clone() * rat(i64::from(mults[j]), 1);
                }
            }
            let kind = if rng.gen_bool(0.75) {
                SummandKind::Matrix(n)
            } else {
                SummandKind::Interval(n)
            };
            rows.push(RowSpec {
                kind,
                weight: lam * rat(i64::from(n), 1),
                couplings: mults.into_iter().map(Coupling::Mult).collect(),
            });
        } else {
            // Diffuse row: a fraction of each block's remaining budget.
            let mut traces: Vec<ExtRat> = Vec::with_capacity(k);
            for j in 0..k {
                let f = match rng.gen_range(0..4) {
                    0 => rat(0, 1),
                    1 => rat(1, 4),
                    2 => rat(1, 3),
                    _ => rat(1, 2),
                };
                traces.push(rem[j].clone() * f);
            }
            if traces.iter().all(|t| t.is_zero()) {
                let j = rng.gen_range(0..k);
                traces[j] = rem[j].clone() * rat(1, 2);
            }
            let mut alpha = ExtRat::zero();
            for j in 0..k {
                rem[j] = rem[j].clone() - traces[j].clone();
                alpha = alpha + rat(i64::from(sizes[j]), 1) * traces[j].clone();
            }
            rows.push(RowSpec {
                kind: random_diffuse_kind(rng),
                weight: alpha,
                couplings: traces.into_iter().map(Coupling::Trace).collect(),
            });
        }
    }

    // Tail row: one diffuse summand absorbs the remaining budget exactly.
    let mut alpha = ExtRat::zero();
    for j in 0..k {
        alpha = alpha + rat(i64::from(sizes[j]), 1) * rem[j].clone();
    }
    rows.push(RowSpec {
        kind: random_diffuse_kind(rng),
        weight: alpha,
        couplings: rem.into_iter().map(Coupling::Trace).collect(),
    });
    assemble(rows, rng)
}

/// Split the multiplicity column sums `cols` among up to three type-I
/// rows; `lam` is the shared minimal trace of the side's summands.
fn pure_side(
    rng: &mut ChaCha12Rng,
    sizes: &[u32],
    cols: &[u32],
    lam: &ExtRat,
) -> (TracialAlgebra, Inclusion) {
    let k = sizes.len();
    let nrows = rng.gen_range(1..=3);
    let mut mults = vec![vec![0u32; k]; nrows];
    for j in 0..k {
        for _ in 0..cols[j] {
            mults[rng.gen_range(0..nrows)][j] += 1;
        }
    }
    mults.retain(|row| row.iter().any(|&c| c > 0));
    let rows = mults
        .into_iter()
        .map(|row| {
            let n: u32 = (0..k).map(|j| row[j] * sizes[j]).sum();
            let kind = if rng.gen_bool(0.8) {
                SummandKind::Matrix(n)
            } else {
                SummandKind::Interval(n)
            };
            RowSpec {
                kind,
                weight: lam.clone() * rat(i64::from(n), 1),
                couplings: row.into_iter().map(Coupling::Mult).collect(),
            }
        })
        .collect();
    assemble(rows, rng)
}

fn random_amalgam(rng: &mut ChaCha12Rng) -> MultiMatrix {
    if rng.gen_bool(0.25) {
        // One full matrix block.
        MultiMatrix::new(vec![(rng.gen_range(2..=3), ExtRat::one())])
    } else {
        let k = rng.gen_range(1..=3);
        let weights = random_weights(rng, k);
        MultiMatrix::new(weights.into_iter().map(|w| (1, w)).collect())
    }
}

/// A valid random problem; panics (generator bug) if validation fails.
pub fn random_problem(rng: &mut ChaCha12Rng) -> Problem {
    let roll = rng.gen_range(0..100);
    let problem = if roll < 30 {
        Problem::over_scalars(random_scalar_algebra(rng), random_scalar_algebra(rng))
    } else if roll < 70 {
        let d = random_amalgam(rng);
        let (a, ia) = budget_side(rng, &d);
        let (b, ib) = budget_side(rng, &d);
        Problem::new(a, b, d, ia, ib)
    } else {
        // Pure type-I side(s): derive the amalgam weights from integer
        // column sums so that one shared minimal trace fits both sides.
        let k = rng.gen_range(1..=2);
        let sizes: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=2)).collect();
        let cols: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        let denom: i64 = (0..k)
            .map(|j| i64::from(sizes[j]) * i64::from(cols[j]))
            .sum();
        let lam = rat(1, denom);
        let d = MultiMatrix::new(
            (0..k)
                .map(|j| {
                    let w = lam.clone() * rat(i64::from(sizes[j]), 1) * rat(i64::from(cols[j]), 1);
                    (sizes[j], w)
                })
                .collect(),
        );
        let (a, ia) = pure_side(rng, &sizes, &cols, &lam);
        let (b, ib) = if roll < 85 {
            pure_side(rng, &sizes, &cols, &lam)
        } else {
            budget_side(rng, &d)
        };
        Problem::new(a, b, d, ia, ib)
    };
    let violations = problem.validate();
    assert!(
        violations.is_empty(),
        "generator produced an invalid problem {}: {violations:?}",
        problem.describe()
    );
    problem
}
