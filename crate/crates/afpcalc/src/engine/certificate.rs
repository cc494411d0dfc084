//! Derivation certificates: every rewrite application is recorded with
//! enough of its inputs that the step's formulas can be replayed locally
//! and compared against the recorded outputs. Results of recursive
//! sub-computations appear as recorded inputs; they are justified by
//! their own steps, which follow the parent step (pre-order) at greater
//! depth.

use super::report::OutputPart;
use super::scalars::{any_flagged_size, recompute_atoms, solve_factor_param, AtomRecord};
use crate::model::{
    compress, compress_dropping_zeros, fdim, fdim_multimatrix, MultiMatrix, ProjComponent,
    ProjectionSpec, Summand, SummandKind, TracialAlgebra,
};
use crate::rat::ExtRat;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Serializable mirror of a projection component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfilePart {
    Rank(u32),
    RelTrace(ExtRat),
}

impl ProfilePart {
    pub fn from_component(c: &ProjComponent) -> Self {
        match c {
            ProjComponent::Rank(k) => ProfilePart::Rank(*k),
            ProjComponent::RelTrace(t) => ProfilePart::RelTrace(t.clone()),
        }
    }

    pub fn to_component(&self) -> ProjComponent {
        match self {
            ProfilePart::Rank(k) => ProjComponent::Rank(*k),
            ProfilePart::RelTrace(t) => ProjComponent::RelTrace(t.clone()),
        }
    }
}

pub fn profile_of(p: &ProjectionSpec) -> Vec<ProfilePart> {
    p.components
        .iter()
        .map(ProfilePart::from_component)
        .collect()
}

pub fn profile_to_projection(p: &[ProfilePart]) -> ProjectionSpec {
    ProjectionSpec::new(p.iter().map(ProfilePart::to_component).collect())
}

/// One rewrite application. Variant names are internal; the wire tags
/// are fixed by the certificate format.
#[derive(Clone, Serialize)]
#[serde(untagged)]
pub enum CertRule {
    /// One side coincides with the amalgam; the product is the other side.
    TrivialSide { side: char, output: TracialAlgebra },
    /// Closed form for a single-factor side: t = s + x − fdim(D).
    ClosedForm {
        swapped: bool,
        a: TracialAlgebra,
        d: MultiMatrix,
        factor: Summand,
        x: ExtRat,
        fdim_d: ExtRat,
        t: ExtRat,
        output: Summand,
    },
    /// Cut a non-abelian amalgam down to an abelian corner and undo the
    /// cut by dilation afterwards.
    CornerScale {
        scale: ExtRat,
        a: TracialAlgebra,
        d: MultiMatrix,
        b_param: ExtRat,
        q_profile: Vec<ProfilePart>,
        corner_a: TracialAlgebra,
        corner_d: MultiMatrix,
        corner_b: Summand,
        sub_output: Summand,
        output: Summand,
    },
    /// Recursion step: split off the smallest-trace minimal projection
    /// of the abelian amalgam and form the restricted sub-product N₁.
    RecursionSplit {
        j_star: usize,
        beta: ExtRat,
        a: TracialAlgebra,
        d: MultiMatrix,
        b_param: ExtRat,
        p_profile: Vec<ProfilePart>,
        sub_a: TracialAlgebra,
        sub_d: MultiMatrix,
        sub_b: Summand,
        n1: Summand,
    },
    /// Recursion step: compress N₁ and free-join the corner of the
    /// augmented side, giving the factor fN₂f with parameter t₂.
    RecursionJoin {
        beta: ExtRat,
        gamma: ExtRat,
        a: TracialAlgebra,
        d: MultiMatrix,
        b_param: ExtRat,
        p_profile: Vec<ProfilePart>,
        n1: Summand,
        f_rel: ExtRat,
        fn1f: Summand,
        p_tilde: TracialAlgebra,
        x_p_tilde: ExtRat,
        t2: ExtRat,
    },
    /// Recursion step: re-expand from the corner — via a free complement
    /// of a diffuse abelian generator when the carrier remainder r ≠ 0 —
    /// and dilate to full size.
    RecursionAssemble {
        beta: ExtRat,
        gamma: ExtRat,
        fn2f: Summand,
        rn2r: Option<Summand>,
        rmr: Option<Summand>,
        dilation: ExtRat,
        output: Summand,
    },
    /// Peel one II₁-factor central summand off a direct-sum side.
    PeelSummand {
        side: char,
        index: usize,
        alpha: ExtRat,
        factor: Summand,
        pd: MultiMatrix,
        a_tilde: TracialAlgebra,
        m_tilde: Vec<OutputPart>,
        q_support: Vec<usize>,
        beta: ExtRat,
        /// Relative trace of the peeled projection in each support part.
        p_rel: Vec<ExtRat>,
        q_fdim: ExtRat,
        pmp_input: TracialAlgebra,
        pmp_trivial: bool,
        x_pmp: ExtRat,
        fdim_pd: ExtRat,
        t3: ExtRat,
        qm: Summand,
        output: Vec<OutputPart>,
    },
    /// Split a matrix-tensor block off one type-I side and rejoin the
    /// tensor complement freely in the corner.
    StripTensor {
        side: char,
        class_indices: Vec<usize>,
        h: Vec<u32>,
        k: u32,
        class_weight: ExtRat,
        a0: TracialAlgebra,
        c2: TracialAlgebra,
        m0_parts: Vec<OutputPart>,
        q_support: Vec<usize>,
        /// Relative trace of the tensor-unit projection in each support
        /// part.
        p_rel: Vec<ExtRat>,
        tau_p: ExtRat,
        tau_z: ExtRat,
        corner_input: TracialAlgebra,
        corner_output: Summand,
        strip_part: Summand,
        output: Vec<OutputPart>,
    },
    /// Base case over the scalars: atoms from minimal-projection pairs
    /// with trace sum > 1, diffuse part solved from the dimension budget.
    ScalarAmalgam {
        a: TracialAlgebra,
        b: TracialAlgebra,
        atoms: Vec<AtomRecord>,
        d_total: ExtRat,
        factor_weight: ExtRat,
        factor_param: ExtRat,
        size_flagged: bool,
        output: TracialAlgebra,
    },
}

impl CertRule {
    pub fn tag(&self) -> &'static str {
        match self {
            CertRule::TrivialSide { .. } => "TRIVIAL_AD",
            CertRule::ClosedForm { .. } => "PROP43",
            CertRule::CornerScale { .. } => "CORNER_A",
            CertRule::RecursionSplit { .. } => "THM21_B",
            CertRule::RecursionJoin { .. } => "THM21_C",
            CertRule::RecursionAssemble { .. } => "THM21_D",
            CertRule::PeelSummand { .. } => "PEEL_PP",
            CertRule::StripTensor { .. } => "STRIP_TENSOR",
            CertRule::ScalarAmalgam { .. } => "SCALARS_BASE",
        }
    }
}

#[derive(Clone)]
pub struct CertStep {
    pub depth: u32,
    pub rule: CertRule,
}

impl CertStep {
    pub fn new(depth: u32, rule: CertRule) -> Self {
        CertStep { depth, rule }
    }
}

impl Serialize for CertStep {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Data<'a> {
            depth: u32,
            #[serde(flatten)]
            rule: &'a CertRule,
        }
        let mut st = serializer.serialize_struct("CertStep", 2)?;
        st.serialize_field("rule", self.rule.tag())?;
        st.serialize_field(
            "data",
            &Data {
                depth: self.depth,
                rule: &self.rule,
            },
        )?;
        st.end()
    }
}

fn expect_eq<T: PartialEq + std::fmt::Debug>(what: &str, got: T, want: &T) -> Result<(), String> {
    if got == *want {
        Ok(())
    } else {
        Err(format!(
            "{what}: replay gives {got:?}, step records {want:?}"
        ))
    }
}

/// Rescale a factor parameter to a corner of relative trace `rel`.
pub(crate) fn compress_param(param: &ExtRat, rel: &ExtRat) -> ExtRat {
    if param.is_inf() {
        ExtRat::inf()
    } else {
        ExtRat::one() + (param.clone() - ExtRat::one()) / rel.square()
    }
}

/// Rescale a factor parameter by dilation with ratio `lambda`.
pub(crate) fn dilate_param(param: &ExtRat, lambda: &ExtRat) -> ExtRat {
    if param.is_inf() {
        ExtRat::inf()
    } else {
        ExtRat::one() + lambda.square() * (param.clone() - ExtRat::one())
    }
}

fn factor_summand_param(s: &Summand) -> Result<ExtRat, String> {
    s.kind
        .factor_param()
        .ok_or_else(|| format!("expected a diffuse factor summand, found {}", s.kind))
}

/// Apply the compress/dilate law to a recorded single-factor summand.
fn replay_factor_rescale(
    what: &str,
    input: &Summand,
    output: &Summand,
    ratio_is_dilation: bool,
    ratio: &ExtRat,
) -> Result<(), String> {
    match (&input.kind, &output.kind) {
        (SummandKind::HypII1, SummandKind::HypII1) => Ok(()),
        (SummandKind::Ifgf(t), SummandKind::Ifgf(u)) => {
            let expect = if ratio_is_dilation {
                dilate_param(t, ratio)
            } else {
                compress_param(t, ratio)
            };
            expect_eq(what, expect, u)
        }
        _ => Err(format!(
            "{what}: kinds {} -> {} do not follow the rescale law",
            input.kind, output.kind
        )),
    }
}

impl CertStep {
    /// Re-execute this step's formulas from its recorded inputs and
    /// compare with its recorded outputs.
    pub fn replay(&self) -> Result<(), String> {
        match &self.rule {
            CertRule::TrivialSide { side, .. } => {
                if *side == 'A' || *side == 'B' {
                    Ok(())
                } else {
                    Err(format!("unknown side {side}"))
                }
            }
            CertRule::ClosedForm {
                a,
                d,
                factor,
                x,
                fdim_d,
                t,
                output,
                ..
            } => {
                expect_eq("closed form x", fdim(a).value, x)?;
                expect_eq("closed form fdim(D)", fdim_multimatrix(d).value, fdim_d)?;
                let s = factor_summand_param(factor)?;
                let expect_t = if s.is_inf() || x.is_inf() {
                    ExtRat::inf()
                } else {
                    s + x.clone() - fdim_d.clone()
                };
                expect_eq("closed form t", expect_t, t)?;
                if *t <= ExtRat::one() {
                    return Err(format!("closed form t = {t} is not above 1"));
                }
                expect_eq(
                    "closed form output",
                    Summand::new(SummandKind::Ifgf(t.clone()), ExtRat::one()),
                    output,
                )
            }
            CertRule::CornerScale {
                scale,
                a,
                d,
                b_param,
                q_profile,
                corner_a,
                corner_d,
                corner_b,
                sub_output,
                output,
            } => {
                let want_scale: ExtRat = (0..d.summands.len()).map(|j| d.min_trace(j)).sum();
                expect_eq("corner scale", want_scale, scale)?;
                let q = profile_to_projection(q_profile);
                expect_eq("corner trace", q.global_trace(a), scale)?;
                let got_corner_a = compress(a, &q).map_err(|e| e.to_string())?;
                expect_eq("corner of the augmented side", got_corner_a, corner_a)?;
                let want_corner_d = MultiMatrix::new(
                    (0..d.summands.len())
                        .map(|j| (1, d.min_trace(j) / scale.clone()))
                        .collect(),
                );
                expect_eq("abelian corner of the amalgam", want_corner_d, corner_d)?;
                let got_b = factor_summand_param(corner_b)?;
                expect_eq(
                    "corner factor parameter",
                    compress_param(b_param, scale),
                    &got_b,
                )?;
                replay_factor_rescale("corner dilation", sub_output, output, true, scale)
            }
            CertRule::RecursionSplit {
                j_star,
                beta,
                a,
                d,
                b_param,
                p_profile,
                sub_a,
                sub_d,
                sub_b,
                n1: _,
            } => {
                if !d.is_abelian() {
                    return Err("split requires an abelian amalgam".to_string());
                }
                let min = (0..d.summands.len())
                    .min_by_key(|&j| d.summands[j].weight.clone())
                    .unwrap();
                expect_eq("smallest-trace block", min, j_star)?;
                expect_eq("beta", d.summands[*j_star].weight.clone(), beta)?;
                let one_minus = ExtRat::one() - beta.clone();
                let want_sub_d = MultiMatrix::new(
                    (0..d.summands.len())
                        .filter(|j| j != j_star)
                        .map(|j| (1, d.summands[j].weight.clone() / one_minus.clone()))
                        .collect(),
                );
                expect_eq("restricted amalgam", want_sub_d, sub_d)?;
                let got_sub_b = factor_summand_param(sub_b)?;
                expect_eq(
                    "restricted factor parameter",
                    compress_param(b_param, &one_minus),
                    &got_sub_b,
                )?;
                let p = profile_to_projection(p_profile);
                expect_eq("p trace", p.global_trace(a), beta)?;
                let complement = complement_profile(a, &p)?;
                let (got_sub_a, _, _) =
                    compress_dropping_zeros(a, &complement).map_err(|e| e.to_string())?;
                expect_eq("restricted side", got_sub_a, sub_a)
            }
            CertRule::RecursionJoin {
                beta,
                gamma,
                a,
                d,
                b_param,
                p_profile,
                n1,
                f_rel,
                fn1f,
                p_tilde,
                x_p_tilde,
                t2,
            } => {
                let p = profile_to_projection(p_profile);
                let (want_gamma, want_p_tilde) = carrier_split(a, &p, beta)?;
                expect_eq("gamma", want_gamma, gamma)?;
                expect_eq("corner of the augmented side", want_p_tilde, p_tilde)?;
                expect_eq(
                    "f relative trace",
                    beta.clone() / (ExtRat::one() - beta.clone()),
                    f_rel,
                )?;
                replay_factor_rescale("compressed N1", n1, fn1f, false, f_rel)?;
                expect_eq("fdim of the corner", fdim(p_tilde).value, x_p_tilde)?;
                let s_f = factor_summand_param(fn1f)?;
                let want_t2 = if s_f.is_inf() {
                    ExtRat::inf()
                } else {
                    s_f + x_p_tilde.clone()
                };
                expect_eq("t2", want_t2.clone(), t2)?;
                // Closed-form cross-check from the level's raw data:
                // t₂ = 1 − (γ/β)² + β⁻²((s−1) + (x−1) − (fdim(D)−1)).
                let x = fdim(a).value;
                let fdim_d = fdim_multimatrix(d).value;
                if b_param.is_finite() && x.is_finite() {
                    let b2 = beta.square();
                    let cross = ExtRat::one() - (gamma.clone() / beta.clone()).square()
                        + ((b_param.clone() - ExtRat::one()) + (x - ExtRat::one())
                            - (fdim_d - ExtRat::one()))
                            / b2;
                    expect_eq("t2 closed-form cross-check", cross, t2)?;
                } else if t2.is_finite() {
                    return Err("infinite inputs cannot give a finite t2".to_string());
                }
                Ok(())
            }
            CertRule::RecursionAssemble {
                beta,
                gamma,
                fn2f,
                rn2r,
                rmr,
                dilation,
                output,
            } => {
                if gamma.is_zero() {
                    expect_eq("dilation scale", beta.clone(), dilation)?;
                    if rn2r.is_some() || rmr.is_some() {
                        return Err(
                            "no carrier remainder: intermediate corners must be absent".to_string()
                        );
                    }
                    replay_factor_rescale("final dilation", fn2f, output, true, beta)
                } else {
                    expect_eq("dilation scale", gamma.clone(), dilation)?;
                    let rn2r = rn2r.as_ref().ok_or("missing rN2r")?;
                    let rmr = rmr.as_ref().ok_or("missing rMr")?;
                    replay_factor_rescale(
                        "compression to the carrier remainder",
                        fn2f,
                        rn2r,
                        false,
                        &(gamma.clone() / beta.clone()),
                    )?;
                    let s = factor_summand_param(rn2r)?;
                    let want_rmr = Summand::new(
                        SummandKind::Ifgf(if s.is_inf() {
                            ExtRat::inf()
                        } else {
                            s + ExtRat::one()
                        }),
                        ExtRat::one(),
                    );
                    expect_eq("free join with a diffuse abelian generator", want_rmr, rmr)?;
                    replay_factor_rescale("final dilation", rmr, output, true, gamma)
                }
            }
            CertRule::PeelSummand {
                alpha,
                factor,
                pd,
                m_tilde,
                q_support,
                beta,
                p_rel,
                q_fdim,
                pmp_input,
                pmp_trivial,
                x_pmp,
                fdim_pd,
                t3,
                qm,
                output,
                ..
            } => {
                let want_beta: ExtRat =
                    q_support.iter().map(|&l| m_tilde[l].weight().clone()).sum();
                expect_eq("beta", want_beta, beta)?;
                let (corner, tau) = corner_of_parts(m_tilde, q_support, p_rel)?;
                expect_eq("trace of the peeled projection", tau, alpha)?;
                expect_eq("compressed corner", corner, pmp_input)?;
                expect_eq("fdim(pD)", fdim_multimatrix(pd).value, fdim_pd)?;
                expect_eq(
                    "fdim of the compressed corner",
                    fdim(pmp_input).value,
                    x_pmp,
                )?;
                let s = factor_summand_param(factor)?;
                let want_t3 = if s.is_inf() || x_pmp.is_inf() {
                    ExtRat::inf()
                } else {
                    s.clone() + x_pmp.clone() - fdim_pd.clone()
                };
                expect_eq("t3", want_t3, t3)?;
                let pmp = if *pmp_trivial {
                    Summand::new(factor.kind.clone(), ExtRat::one())
                } else {
                    Summand::new(SummandKind::Ifgf(t3.clone()), ExtRat::one())
                };
                let lambda = alpha.clone() / beta.clone();
                replay_factor_rescale("corner dilation", &pmp, qm, true, &lambda)?;
                expect_eq("qm weight", beta.clone(), &qm.weight)?;
                // Dimension cross-check: the dilated parameter equals
                // λ²(s − fdim(pD)) + fdim of the support corner.
                if let SummandKind::Ifgf(u) = &qm.kind {
                    if u.is_finite() {
                        let cross = lambda.square() * (s - fdim_pd.clone()) + q_fdim.clone();
                        expect_eq("peel dimension cross-check", cross, u)?;
                    }
                }
                // Output surgery: non-support parts pass through, the
                // support is replaced by qm.
                let mut want: Vec<OutputPart> = m_tilde
                    .iter()
                    .enumerate()
                    .filter(|(l, _)| !q_support.contains(l))
                    .map(|(_, p)| p.clone())
                    .collect();
                want.push(OutputPart::Summand(qm.clone()));
                expect_parts("peel output", &want, output)
            }
            CertRule::StripTensor {
                h,
                k,
                class_weight,
                c2,
                m0_parts,
                q_support,
                p_rel,
                tau_p,
                tau_z,
                corner_input,
                corner_output,
                strip_part,
                output,
                ..
            } => {
                if h.is_empty() || c2.is_empty() {
                    return Err("strip records an empty pattern".to_string());
                }
                expect_eq(
                    "tau of the tensor unit",
                    class_weight.clone() / ExtRat::int(*k as i64),
                    tau_p,
                )?;
                let want_tau_z: ExtRat = q_support
                    .iter()
                    .map(|&l| m0_parts[l].weight().clone())
                    .sum();
                expect_eq("tau of the support", want_tau_z, tau_z)?;
                let (corner, tau) = corner_of_parts(m0_parts, q_support, p_rel)?;
                expect_eq("trace of the tensor-unit projection", tau, tau_p)?;
                expect_eq("corner at the tensor unit", corner, corner_input)?;
                let ratio = tau_z.clone() / tau_p.clone();
                let want_kind = match &corner_output.kind {
                    SummandKind::Matrix(r) => {
                        let n = (ExtRat::int(*r as i64) * ratio.clone())
                            .as_u32()
                            .ok_or("matrix size does not dilate integrally")?;
                        SummandKind::Matrix(n)
                    }
                    SummandKind::Interval(r) => {
                        let n = (ExtRat::int(*r as i64) * ratio.clone())
                            .as_u32()
                            .ok_or("interval multiplicity does not dilate integrally")?;
                        SummandKind::Interval(n)
                    }
                    SummandKind::HypII1 => SummandKind::HypII1,
                    SummandKind::Ifgf(t) => {
                        SummandKind::Ifgf(dilate_param(t, &(tau_p.clone() / tau_z.clone())))
                    }
                };
                expect_eq(
                    "reassembled part",
                    Summand::new(want_kind, tau_z.clone()),
                    strip_part,
                )?;
                let mut want: Vec<OutputPart> = m0_parts
                    .iter()
                    .enumerate()
                    .filter(|(l, _)| !q_support.contains(l))
                    .map(|(_, p)| p.clone())
                    .collect();
                want.push(OutputPart::Summand(strip_part.clone()));
                expect_parts("strip output", &want, output)
            }
            CertRule::ScalarAmalgam {
                a,
                b,
                atoms,
                d_total,
                factor_weight,
                factor_param,
                size_flagged,
                output,
            } => {
                let want_atoms = recompute_atoms(a, b);
                expect_eq("atom list", want_atoms, atoms)?;
                let want_total = fdim(a).value + fdim(b).value;
                expect_eq("dimension budget", want_total, d_total)?;
                let (t, w) = solve_factor_param(
                    d_total,
                    &atoms
                        .iter()
                        .map(|at| (at.size, at.weight.clone()))
                        .collect::<Vec<_>>(),
                )?;
                expect_eq("factor weight", w, factor_weight)?;
                expect_eq("factor parameter", t, factor_param)?;
                if *factor_param <= ExtRat::one() {
                    return Err(format!("factor parameter {factor_param} is not above 1"));
                }
                let want_flag = any_flagged_size(a, b, atoms);
                expect_eq("size flag", want_flag, size_flagged)?;
                let mut want: Vec<Summand> = atoms
                    .iter()
                    .map(|at| Summand::new(SummandKind::Matrix(at.size), at.weight.clone()))
                    .collect();
                want.push(Summand::new(
                    SummandKind::Ifgf(factor_param.clone()),
                    factor_weight.clone(),
                ));
                expect_eq("scalar-amalgam output", TracialAlgebra::new(want), output)
            }
        }
    }
}

fn expect_parts(what: &str, want: &[OutputPart], got: &[OutputPart]) -> Result<(), String> {
    if want == got {
        Ok(())
    } else {
        Err(format!("{what}: replay disagrees with the recorded parts"))
    }
}

/// Rebuild the corner algebra cut from `parts` by a projection living
/// on `support` with the given relative traces. Returns the corner and
/// the projection's global trace.
pub(crate) fn corner_of_parts(
    parts: &[OutputPart],
    support: &[usize],
    rel: &[ExtRat],
) -> Result<(TracialAlgebra, ExtRat), String> {
    if support.len() != rel.len() {
        return Err("support and relative-trace lists disagree in length".to_string());
    }
    let mut tau = ExtRat::zero();
    let mut raw = Vec::with_capacity(support.len());
    for (&l, r) in support.iter().zip(rel) {
        if !r.is_positive() || *r > ExtRat::one() {
            return Err(format!("relative trace {r} outside (0,1]"));
        }
        let s = parts
            .get(l)
            .and_then(|p| p.as_summand())
            .ok_or_else(|| format!("support part {l} is not a resolved summand"))?;
        let kind = match &s.kind {
            SummandKind::Matrix(n) => SummandKind::Matrix(
                (ExtRat::int(*n as i64) * r.clone())
                    .as_u32()
                    .ok_or_else(|| format!("rank {n}·{r} is not integral"))?,
            ),
            SummandKind::Interval(n) => SummandKind::Interval(
                (ExtRat::int(*n as i64) * r.clone())
                    .as_u32()
                    .ok_or_else(|| format!("rank {n}·{r} is not integral"))?,
            ),
            SummandKind::HypII1 => SummandKind::HypII1,
            SummandKind::Ifgf(t) => SummandKind::Ifgf(compress_param(t, r)),
        };
        let trace = s.weight.clone() * r.clone();
        tau = tau + trace.clone();
        raw.push((kind, trace));
    }
    let corner = TracialAlgebra::new(
        raw.into_iter()
            .map(|(kind, trace)| Summand::new(kind, trace / tau.clone()))
            .collect(),
    );
    Ok((corner, tau))
}

/// Componentwise complement of a projection.
pub(crate) fn complement_profile(
    alg: &TracialAlgebra,
    p: &ProjectionSpec,
) -> Result<ProjectionSpec, String> {
    let mut comps = Vec::with_capacity(p.components.len());
    for (i, (c, s)) in p.components.iter().zip(&alg.summands).enumerate() {
        let comp = match (c, &s.kind) {
            (ProjComponent::Rank(k), SummandKind::Matrix(n))
            | (ProjComponent::Rank(k), SummandKind::Interval(n)) => {
                if k > n {
                    return Err(format!("component {i} overfills its summand"));
                }
                ProjComponent::Rank(n - k)
            }
            (ProjComponent::RelTrace(t), _) => ProjComponent::RelTrace(ExtRat::one() - t.clone()),
            _ => return Err(format!("component {i} does not match its summand kind")),
        };
        comps.push(comp);
    }
    Ok(ProjectionSpec::new(comps))
}

/// Split the image of p: the proper-corner remainder trace γ and the
/// corner algebra pÃp = ℂ_{γ/β} ⊕ (fully covered summands, renormalized).
pub fn carrier_split(
    a: &TracialAlgebra,
    p: &ProjectionSpec,
    beta: &ExtRat,
) -> Result<(ExtRat, TracialAlgebra), String> {
    let mut gamma = ExtRat::zero();
    let mut full = Vec::new();
    for i in 0..a.summands.len() {
        if p.is_zero_component(i) {
            continue;
        }
        if p.is_full_component(i, a) {
            full.push(i);
        } else {
            gamma = gamma + a.summands[i].weight.clone() * p.relative_trace(i, a);
        }
    }
    let mut parts = Vec::new();
    if !gamma.is_zero() {
        parts.push(Summand::new(
            SummandKind::Matrix(1),
            gamma.clone() / beta.clone(),
        ));
    }
    for i in full {
        parts.push(Summand::new(
            a.summands[i].kind.clone(),
            a.summands[i].weight.clone() / beta.clone(),
        ));
    }
    if parts.is_empty() {
        return Err("projection has empty image".to_string());
    }
    Ok((gamma, TracialAlgebra::new(parts)))
}

/// Replay every step of a certificate.
pub fn verify_certificate(steps: &[CertStep]) -> Result<(), String> {
    for (i, step) in steps.iter().enumerate() {
        step.replay()
            .map_err(|e| format!("step {i} ({}): {e}", step.rule.tag()))?;
    }
    Ok(())
}
