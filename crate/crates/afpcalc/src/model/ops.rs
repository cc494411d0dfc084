//! Compression, dilation, restriction and central-carrier computations.

use super::projection::{ProjComponent, ProjectionSpec};
use super::summand::{Summand, SummandKind, TracialAlgebra};
use super::ModelError;
use crate::rat::ExtRat;

/// Compress `alg` by a projection with full central support.
///
/// Summand-wise: a rank-k corner of a size-n matrix or interval summand
/// becomes size k; a diffuse factor corner of relative trace s keeps its
/// kind, with an interpolated parameter rescaled t ↦ 1 + s⁻²(t−1).
/// Weights renormalize by the global trace of the projection. The
/// compressed free dimension satisfies
/// fdim(pAp) = 1 + τ(p)⁻²(fdim(A) − 1).
pub fn compress(alg: &TracialAlgebra, p: &ProjectionSpec) -> Result<TracialAlgebra, ModelError> {
    if p.components.len() != alg.summands.len() {
        return Err(ModelError::ComponentCountMismatch {
            got: p.components.len(),
            want: alg.summands.len(),
        });
    }
    for i in 0..p.components.len() {
        if p.is_zero_component(i) {
            return Err(ModelError::NotFullCentralSupport { summand: i });
        }
    }
    let tau = p.global_trace(alg);
    let mut summands = Vec::with_capacity(alg.summands.len());
    for (i, s) in alg.summands.iter().enumerate() {
        let kind = match (&p.components[i], &s.kind) {
            (ProjComponent::Rank(k), SummandKind::Matrix(_)) => SummandKind::Matrix(*k),
            (ProjComponent::Rank(k), SummandKind::Interval(_)) => SummandKind::Interval(*k),
            (ProjComponent::RelTrace(_), SummandKind::HypII1) => SummandKind::HypII1,
            (ProjComponent::RelTrace(rel), SummandKind::Ifgf(t)) => {
                SummandKind::Ifgf(rescale_factor_param(t, rel))
            }
            _ => {
                return Err(ModelError::BadComponent {
                    summand: i,
                    message: "component does not match summand kind".to_string(),
                })
            }
        };
        let weight = s.weight.clone() * p.relative_trace(i, alg) / tau.clone();
        summands.push(Summand::new(kind, weight));
    }
    Ok(TracialAlgebra::new(summands))
}

/// t ↦ 1 + s⁻²(t − 1) for a corner of relative trace s.
fn rescale_factor_param(t: &ExtRat, s: &ExtRat) -> ExtRat {
    if t.is_inf() {
        return ExtRat::inf();
    }
    ExtRat::one() + (t.clone() - ExtRat::one()) / s.square()
}

/// Drop the summands where `p` vanishes: restrict to the central support
/// of `p`. Returns the restricted algebra (weights renormalized by the
/// support's trace), the projection re-indexed to it, and the indices of
/// the kept summands.
pub fn restrict_to_support(
    alg: &TracialAlgebra,
    p: &ProjectionSpec,
) -> (TracialAlgebra, ProjectionSpec, Vec<usize>) {
    let kept: Vec<usize> = (0..alg.summands.len())
        .filter(|&i| !p.is_zero_component(i))
        .collect();
    let support_trace: ExtRat = kept.iter().map(|&i| alg.summands[i].weight.clone()).sum();
    let restricted = TracialAlgebra::new(
        kept.iter()
            .map(|&i| {
                let s = &alg.summands[i];
                Summand::new(s.kind.clone(), s.weight.clone() / support_trace.clone())
            })
            .collect(),
    );
    let proj = ProjectionSpec::new(kept.iter().map(|&i| p.components[i].clone()).collect());
    (restricted, proj, kept)
}

/// Restrict to the support, then compress. Returns the corner algebra,
/// the global trace τ(p) in the original algebra, and the kept indices.
pub fn compress_dropping_zeros(
    alg: &TracialAlgebra,
    p: &ProjectionSpec,
) -> Result<(TracialAlgebra, ExtRat, Vec<usize>), ModelError> {
    let tau = p.global_trace(alg);
    let (restricted, proj, kept) = restrict_to_support(alg, p);
    let corner = compress(&restricted, &proj)?;
    Ok((corner, tau, kept))
}

/// Undo a compression of ratio λ on a single diffuse factor:
/// IFGF(t′) → IFGF(1 + λ²(t′ − 1)), the hyperfinite factor is fixed.
pub fn dilate_factor(alg: &TracialAlgebra, lambda: &ExtRat) -> Result<TracialAlgebra, ModelError> {
    if alg.summands.len() != 1 || !alg.summands[0].kind.is_factor() {
        return Err(ModelError::AmbiguousDilation);
    }
    if !lambda.is_positive() || *lambda > ExtRat::one() || lambda.is_inf() {
        return Err(ModelError::BadDilationRatio(lambda.clone()));
    }
    let kind = match &alg.summands[0].kind {
        SummandKind::HypII1 => SummandKind::HypII1,
        SummandKind::Ifgf(t) => SummandKind::Ifgf(if t.is_inf() {
            ExtRat::inf()
        } else {
            ExtRat::one() + lambda.square() * (t.clone() - ExtRat::one())
        }),
        _ => unreachable!(),
    };
    Ok(TracialAlgebra::single(kind))
}

/// The part `r` of `p` lying under the central carrier of `1 − p`:
/// componentwise, `r_i = p_i` where `p_i` is a proper nonzero corner of
/// summand i, and `r_i = 0` where `p_i` is zero or the full corner.
pub fn central_carrier_complement(alg: &TracialAlgebra, p: &ProjectionSpec) -> ProjectionSpec {
    ProjectionSpec::new(
        (0..p.components.len())
            .map(|i| {
                if p.is_zero_component(i) || p.is_full_component(i, alg) {
                    match alg.summands[i].kind {
                        SummandKind::Matrix(_) | SummandKind::Interval(_) => ProjComponent::Rank(0),
                        _ => ProjComponent::RelTrace(ExtRat::zero()),
                    }
                } else {
                    p.components[i].clone()
                }
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fdim::fdim;

    fn alg(parts: Vec<(SummandKind, ExtRat)>) -> TracialAlgebra {
        TracialAlgebra::new(parts.into_iter().map(|(k, w)| Summand::new(k, w)).collect())
    }

    #[test]
    fn identity_compression_is_a_no_op() {
        let a = alg(vec![
            (SummandKind::Matrix(2), ExtRat::ratio(1, 2)),
            (SummandKind::Ifgf(ExtRat::int(3)), ExtRat::ratio(1, 2)),
        ]);
        let p = ProjectionSpec::full(&a);
        assert_eq!(compress(&a, &p).unwrap(), a);
    }

    #[test]
    fn half_corner_of_parameter_five_gives_seventeen() {
        let a = alg(vec![(SummandKind::Ifgf(ExtRat::int(5)), ExtRat::one())]);
        let p = ProjectionSpec::new(vec![ProjComponent::RelTrace(ExtRat::ratio(1, 2))]);
        let c = compress(&a, &p).unwrap();
        assert_eq!(
            c,
            alg(vec![(SummandKind::Ifgf(ExtRat::int(17)), ExtRat::one())])
        );
    }

    #[test]
    fn mixed_compression_matches_the_dimension_ledger_law() {
        // matrix(2) w 1/2 ⊕ hyp2 w 1/2, p = (rank 1, global trace 1/4).
        let a = alg(vec![
            (SummandKind::Matrix(2), ExtRat::ratio(1, 2)),
            (SummandKind::HypII1, ExtRat::ratio(1, 2)),
        ]);
        let p = ProjectionSpec::new(vec![
            ProjComponent::Rank(1),
            ProjComponent::RelTrace(ExtRat::ratio(1, 2)),
        ]);
        let c = compress(&a, &p).unwrap();
        assert_eq!(
            c,
            alg(vec![
                (SummandKind::Matrix(1), ExtRat::ratio(1, 2)),
                (SummandKind::HypII1, ExtRat::ratio(1, 2)),
            ])
        );
        // fdim(pAp) = 1 + τ(p)⁻²(fdim(A) − 1): 3/4 = 1 + 4(15/16 − 1).
        let tau = p.global_trace(&a);
        assert_eq!(tau, ExtRat::ratio(1, 2));
        let lhs = fdim(&c).value;
        let rhs = ExtRat::one() + (fdim(&a).value - ExtRat::one()) / tau.square();
        assert_eq!(lhs, ExtRat::ratio(3, 4));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn zero_component_is_not_full_central_support() {
        let a = alg(vec![
            (SummandKind::Matrix(2), ExtRat::ratio(1, 2)),
            (SummandKind::Matrix(2), ExtRat::ratio(1, 2)),
        ]);
        let p = ProjectionSpec::new(vec![ProjComponent::Rank(0), ProjComponent::Rank(2)]);
        assert_eq!(
            compress(&a, &p),
            Err(ModelError::NotFullCentralSupport { summand: 0 })
        );
        // The restriction step drops the dead summand first.
        let (corner, tau, kept) = compress_dropping_zeros(&a, &p).unwrap();
        assert_eq!(kept, vec![1]);
        assert_eq!(tau, ExtRat::ratio(1, 2));
        assert_eq!(corner, alg(vec![(SummandKind::Matrix(2), ExtRat::one())]));
    }

    #[test]
    fn dilation_inverts_compression() {
        let c = alg(vec![(SummandKind::Ifgf(ExtRat::int(17)), ExtRat::one())]);
        let d = dilate_factor(&c, &ExtRat::ratio(1, 2)).unwrap();
        assert_eq!(
            d,
            alg(vec![(SummandKind::Ifgf(ExtRat::int(5)), ExtRat::one())])
        );

        let h = TracialAlgebra::single(SummandKind::HypII1);
        assert_eq!(dilate_factor(&h, &ExtRat::ratio(1, 3)).unwrap(), h);

        let f = alg(vec![(
            SummandKind::Ifgf(ExtRat::ratio(7, 2)),
            ExtRat::one(),
        )]);
        assert_eq!(dilate_factor(&f, &ExtRat::one()).unwrap(), f);

        let multi = alg(vec![
            (SummandKind::HypII1, ExtRat::ratio(1, 2)),
            (SummandKind::HypII1, ExtRat::ratio(1, 2)),
        ]);
        assert_eq!(
            dilate_factor(&multi, &ExtRat::ratio(1, 2)),
            Err(ModelError::AmbiguousDilation)
        );
    }

    #[test]
    fn central_carrier_complement_examples() {
        let a = alg(vec![(SummandKind::Matrix(2), ExtRat::one())]);
        let full = ProjectionSpec::full(&a);
        let r = central_carrier_complement(&a, &full);
        assert!(r
            .components
            .iter()
            .all(|c| matches!(c, ProjComponent::Rank(0))));

        let f = alg(vec![(SummandKind::Ifgf(ExtRat::int(2)), ExtRat::one())]);
        let p = ProjectionSpec::new(vec![ProjComponent::RelTrace(ExtRat::ratio(1, 2))]);
        assert_eq!(central_carrier_complement(&f, &p), p);

        let mixed = alg(vec![
            (SummandKind::Matrix(2), ExtRat::ratio(1, 2)),
            (SummandKind::Matrix(3), ExtRat::ratio(1, 2)),
        ]);
        let q = ProjectionSpec::new(vec![ProjComponent::Rank(2), ProjComponent::Rank(1)]);
        let r = central_carrier_complement(&mixed, &q);
        assert_eq!(
            r.components,
            vec![ProjComponent::Rank(0), ProjComponent::Rank(1)]
        );
    }
}
