//! Exact yes/no deciders for hypercyclicity and supercyclicity of the
//! operator families with known characterizations: weighted backward shifts
//! on `c_0(Z)` and `c_0(N)`, `lambda*I + mu*B` on both domains, and the
//! finite-dimensional blanket obstruction.
//!
//! Everything reduces to integer valuation arithmetic. A product of weight
//! norms is `p` raised to a partial sum of valuations, so divergence
//! questions about weight products become sign questions about period means
//! of an eventually periodic integer sequence — decidable exactly, with no
//! tolerances.

use std::fmt;
use std::num::NonZeroU64;

use num_integer::Integer;
use thiserror::Error;

use crate::field::{NormExp, PadicScalar};
use crate::ops::{OperatorSpec, OpsError, WeightModel};
use crate::seq::IndexDomain;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CriteriaError {
    #[error("decider expects a weight model over {expected}, found {found}")]
    WrongDomain {
        expected: IndexDomain,
        found: IndexDomain,
    },
    #[error("perturbation dominance |a_n| > |b_n| fails at index {index}")]
    PrecedenceViolation { index: i64 },
    #[error("no characterization implemented for operator: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Ops(#[from] OpsError),
}

/// Which dynamical property a verdict speaks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Property {
    Hypercyclic,
    Supercyclic,
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Property::Hypercyclic => write!(f, "hypercyclic"),
            Property::Supercyclic => write!(f, "supercyclic"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Yes => write!(f, "yes"),
            Answer::No => write!(f, "no"),
        }
    }
}

/// Which characterization produced the verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    /// Finite dimension rules out hypercyclicity outright.
    FiniteDim,
    /// Bilateral shift, hypercyclicity: forward and backward period-mean
    /// signs decide divergence of both valuation sums.
    BilateralHcWeightTest,
    /// Bilateral shift, supercyclicity: the combined forward-minus-backward
    /// mean decides divergence of the difference sum.
    BilateralScWeightTest,
    /// Every unilateral weighted backward shift is supercyclic.
    UnilateralAlwaysSc,
    /// Unilateral shift, hypercyclicity: forward period-mean sign decides
    /// whether the weight products blow up.
    UnilateralHcWeightTest,
    /// `lambda*I + mu*B` on `c_0(Z)`: never supercyclic, any parameters.
    LambdaMuIntegers,
    /// `lambda*I + mu*B` on `c_0(N)`, hypercyclic iff `|lambda| < 1 < |mu|`.
    LambdaMuNaturalsHc,
    /// `lambda*I + mu*B` on `c_0(N)`, supercyclic iff `|lambda| < |mu|`.
    LambdaMuNaturalsSc,
    /// Verdict obtained by stripping a strictly dominated perturbation.
    PerturbationReduction,
}

impl Rule {
    pub fn tag(&self) -> &'static str {
        match self {
            Rule::FiniteDim => "finite-dim",
            Rule::BilateralHcWeightTest => "bilateral-hc-weight-test",
            Rule::BilateralScWeightTest => "bilateral-sc-weight-test",
            Rule::UnilateralAlwaysSc => "unilateral-always-sc",
            Rule::UnilateralHcWeightTest => "unilateral-hc-weight-test",
            Rule::LambdaMuIntegers => "lambda-mu-integers",
            Rule::LambdaMuNaturalsHc => "lambda-mu-naturals-hc",
            Rule::LambdaMuNaturalsSc => "lambda-mu-naturals-sc",
            Rule::PerturbationReduction => "perturbation-reduction",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Why a property fails, attached to No verdicts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionKind {
    /// On a finite-dimensional space the determinant-power dichotomy blocks
    /// dense orbits.
    FiniteDimensional,
    /// A period mean has the wrong sign: the relevant valuation sums drift
    /// the wrong way, so the weight products stay bounded away from the
    /// required limit.
    WeightMeanSign,
    /// A period mean is exactly zero: partial sums oscillate inside a fixed
    /// band forever.
    BoundedOscillation,
    /// `(lambda, mu)` lies outside the property's norm region.
    ParameterRegion,
    /// The failure covers every parameter choice of the family.
    AllParameters,
}

impl ObstructionKind {
    pub fn tag(&self) -> &'static str {
        match self {
            ObstructionKind::FiniteDimensional => "finite-dimensional",
            ObstructionKind::WeightMeanSign => "weight-mean-sign",
            ObstructionKind::BoundedOscillation => "bounded-oscillation",
            ObstructionKind::ParameterRegion => "parameter-region",
            ObstructionKind::AllParameters => "all-parameters",
        }
    }
}

impl fmt::Display for ObstructionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Constructive payload of a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    /// Closed-form subsequence `n_k = start + stride*k` (`k >= 1`) along
    /// which the defining valuation sums diverge linearly. `m_exponent`
    /// records the threshold exponent chosen for downstream witness
    /// construction: the smallest integer exceeding `max(0, -min v(a_n))`.
    Subsequence {
        start: u64,
        stride: u64,
        m_exponent: Option<u32>,
    },
    /// Norm facts placing `(lambda, mu)` inside the Yes region; the
    /// criterion subsequence is simply `n_k = k`.
    ParameterWitness {
        lambda_norm: NormExp,
        mu_norm: NormExp,
    },
    /// Structured reason a property fails.
    Obstruction {
        kind: ObstructionKind,
        detail: String,
    },
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::Subsequence {
                start,
                stride,
                m_exponent,
            } => {
                write!(f, "subsequence n_k = {start} + {stride}*k")?;
                if let Some(m) = m_exponent {
                    write!(f, " (threshold exponent {m})")?;
                }
                Ok(())
            }
            Certificate::ParameterWitness {
                lambda_norm,
                mu_norm,
            } => write!(
                f,
                "parameter witness |lambda| = {lambda_norm}, |mu| = {mu_norm}; n_k = k"
            ),
            Certificate::Obstruction { kind, detail } => {
                write!(f, "obstruction [{kind}]: {detail}")
            }
        }
    }
}

/// A decided question with its justification trail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub property: Property,
    pub answer: Answer,
    pub rule: Rule,
    pub certificate: Certificate,
    pub justification: String,
}

/// Exact partial sums of weight valuations in O(1) per query.
///
/// `forward_partial(n)` is `sum_{i=1}^{n} v(a_i)`; for bilateral models
/// `backward_partial(n)` is `sum_{j=1}^{n} v(a_{-j+1})`. Norm products in
/// the shift characterizations are `p` raised to (minus) these sums, so all
/// divergence checks happen here as integer arithmetic.
#[derive(Debug, Clone)]
pub struct ValuationSumModel {
    fwd: SideSums,
    bwd: Option<SideSums>,
}

#[derive(Debug, Clone)]
struct SideSums {
    prefix_cum: Vec<i64>,
    period_cum: Vec<i64>,
    period_sum: i64,
}

impl SideSums {
    fn new(prefix: &[PadicScalar], period: &[PadicScalar]) -> Self {
        let vals = |ws: &[PadicScalar]| {
            ws.iter()
                .map(|w| w.valuation().expect("weights are nonzero"))
                .collect::<Vec<_>>()
        };
        let cum = |vs: &[i64]| {
            vs.iter()
                .scan(0i64, |acc, v| {
                    *acc += v;
                    Some(*acc)
                })
                .collect::<Vec<_>>()
        };
        let prefix_cum = cum(&vals(prefix));
        let period_cum = cum(&vals(period));
        let period_sum = *period_cum.last().expect("period nonempty");
        SideSums {
            prefix_cum,
            period_cum,
            period_sum,
        }
    }

    fn partial(&self, n: u64) -> i64 {
        if n == 0 {
            return 0;
        }
        let p = self.prefix_cum.len() as u64;
        if n <= p {
            return self.prefix_cum[(n - 1) as usize];
        }
        let rem = n - p;
        let l = self.period_cum.len() as u64;
        let base = self.prefix_cum.last().copied().unwrap_or(0);
        let whole = (rem / l) as i64 * self.period_sum;
        let part = match rem % l {
            0 => 0,
            r => self.period_cum[(r - 1) as usize],
        };
        base + whole + part
    }

    fn period_len(&self) -> u64 {
        self.period_cum.len() as u64
    }

    fn prefix_len(&self) -> u64 {
        self.prefix_cum.len() as u64
    }
}

impl ValuationSumModel {
    pub fn new(w: &WeightModel) -> Self {
        let fwd = SideSums::new(w.forward_prefix(), w.forward_period());
        let bwd = match w.domain() {
            IndexDomain::Naturals => None,
            IndexDomain::Integers => {
                Some(SideSums::new(w.backward_prefix(), w.backward_period()))
            }
        };
        ValuationSumModel { fwd, bwd }
    }

    /// `sum_{i=1}^{n} v(a_i)`.
    pub fn forward_partial(&self, n: u64) -> i64 {
        self.fwd.partial(n)
    }

    /// `sum_{j=1}^{n} v(a_{-j+1})`, bilateral models only.
    pub fn backward_partial(&self, n: u64) -> Option<i64> {
        self.bwd.as_ref().map(|s| s.partial(n))
    }

    /// Sum of valuations over one forward period, with the period length.
    pub fn forward_period(&self) -> (i64, u64) {
        (self.fwd.period_sum, self.fwd.period_len())
    }

    pub fn backward_period(&self) -> Option<(i64, u64)> {
        self.bwd.as_ref().map(|s| (s.period_sum, s.period_len()))
    }

    /// Stride and start of an arithmetic progression beyond all prefixes on
    /// which every partial sum is exactly linear in `k`: the stride is the
    /// lcm of the period lengths, the start that stride rounded up past the
    /// longest prefix.
    pub fn aligned_progression(&self) -> (u64, u64) {
        let mut stride = self.fwd.period_len();
        let mut prefix = self.fwd.prefix_len();
        if let Some(b) = &self.bwd {
            stride = stride.lcm(&b.period_len());
            prefix = prefix.max(b.prefix_len());
        }
        let start = prefix.div_ceil(stride) * stride;
        (start, stride)
    }
}

fn threshold_exponent(w: &WeightModel) -> u32 {
    let min_v = w
        .forward_prefix()
        .iter()
        .chain(w.forward_period())
        .chain(w.backward_prefix())
        .chain(w.backward_period())
        .map(|a| a.valuation().expect("weights are nonzero"))
        .min()
        .expect("period nonempty");
    u32::try_from(0.max(-min_v) + 1).expect("small exponent")
}

const Q_FREE_NOTE: &str = "window shifts by any fixed offset q change each \
partial sum by a bounded amount, so they do not affect divergence";

/// Is the bilateral weighted backward shift `B_a` hypercyclic on `c_0(Z)`?
///
/// The characterization asks that products of inverse forward weight norms
/// and of backward weight norms both degenerate along a common subsequence;
/// in valuations, that `S+_n -> -infinity` and `S-_n -> +infinity`. For an
/// eventually periodic model this holds iff the forward period mean is
/// negative and the backward period mean is positive.
pub fn decide_bilateral_hypercyclic(a: &WeightModel) -> Result<Verdict, CriteriaError> {
    expect_model_domain(a, IndexDomain::Integers)?;
    let sums = ValuationSumModel::new(a);
    let (fs, fl) = sums.forward_period();
    let (bs, bl) = sums.backward_period().expect("bilateral model");
    if fs < 0 && bs > 0 {
        let (start, stride) = sums.aligned_progression();
        return Ok(Verdict {
            property: Property::Hypercyclic,
            answer: Answer::Yes,
            rule: Rule::BilateralHcWeightTest,
            certificate: Certificate::Subsequence {
                start,
                stride,
                m_exponent: Some(threshold_exponent(a)),
            },
            justification: format!(
                "forward period valuation sum {fs}/{fl} < 0 and backward period \
                 valuation sum {bs}/{bl} > 0: along n_k = {start} + {stride}k both \
                 partial sums diverge linearly, so the weight-product condition \
                 holds every window shift ({Q_FREE_NOTE})"
            ),
        });
    }
    let (kind, detail) = bilateral_hc_obstruction(fs, fl, bs, bl);
    Ok(Verdict {
        property: Property::Hypercyclic,
        answer: Answer::No,
        rule: Rule::BilateralHcWeightTest,
        certificate: Certificate::Obstruction {
            kind,
            detail: detail.clone(),
        },
        justification: detail,
    })
}

fn bilateral_hc_obstruction(fs: i64, fl: u64, bs: i64, bl: u64) -> (ObstructionKind, String) {
    let mut reasons = Vec::new();
    let mut oscillates = false;
    if fs == 0 {
        oscillates = true;
        reasons.push(format!(
            "forward period valuation sum is 0 over length {fl}: forward partial \
             sums oscillate in a fixed band and never tend to -infinity"
        ));
    } else if fs > 0 {
        reasons.push(format!(
            "forward period valuation sum {fs}/{fl} > 0: forward partial sums \
             drift to +infinity, so the inverse-weight products stay bounded"
        ));
    }
    if bs == 0 {
        oscillates = true;
        reasons.push(format!(
            "backward period valuation sum is 0 over length {bl}: backward \
             partial sums oscillate in a fixed band and never tend to +infinity"
        ));
    } else if bs < 0 {
        reasons.push(format!(
            "backward period valuation sum {bs}/{bl} < 0: backward partial sums \
             drift to -infinity, so the backward weight products stay bounded"
        ));
    }
    assert!(!reasons.is_empty(), "called only when the Yes test failed");
    // Oscillation is the kind only when no side fails by a strict wrong sign.
    let kind = if oscillates && fs <= 0 && bs >= 0 {
        ObstructionKind::BoundedOscillation
    } else {
        ObstructionKind::WeightMeanSign
    };
    (kind, reasons.join("; "))
}

/// Is the bilateral weighted backward shift `B_a` supercyclic on `c_0(Z)`?
///
/// The condition couples the two sides: the product of inverse forward
/// norms and backward norms must degenerate, i.e. `S+_n - S-_n ->
/// -infinity`, which holds iff the forward period mean is strictly below
/// the backward one. A constant valuation shift of all weights cancels in
/// the difference, so scalar multiples of the weight sequence do not change
/// the verdict.
pub fn decide_bilateral_supercyclic(a: &WeightModel) -> Result<Verdict, CriteriaError> {
    expect_model_domain(a, IndexDomain::Integers)?;
    let sums = ValuationSumModel::new(a);
    let (fs, fl) = sums.forward_period();
    let (bs, bl) = sums.backward_period().expect("bilateral model");
    // m_f < m_b without rationals: fs/fl < bs/bl <=> fs*bl - bs*fl < 0.
    let combined = fs * bl as i64 - bs * fl as i64;
    if combined < 0 {
        let (start, stride) = sums.aligned_progression();
        return Ok(Verdict {
            property: Property::Supercyclic,
            answer: Answer::Yes,
            rule: Rule::BilateralScWeightTest,
            certificate: Certificate::Subsequence {
                start,
                stride,
                m_exponent: Some(threshold_exponent(a)),
            },
            justification: format!(
                "forward period mean {fs}/{fl} is below backward period mean \
                 {bs}/{bl}: along n_k = {start} + {stride}k the difference of \
                 partial sums diverges to -infinity ({Q_FREE_NOTE}); constant \
                 valuation shifts cancel in the difference, so scalar multiples \
                 of the weights decide identically"
            ),
        });
    }
    let (kind, detail) = if combined == 0 {
        (
            ObstructionKind::BoundedOscillation,
            format!(
                "forward period mean {fs}/{fl} equals backward period mean {bs}/{bl}: \
                 the difference of partial sums oscillates in a fixed band (this \
                 covers weight sequences with symmetric norms |a_n| = |a_-n|)"
            ),
        )
    } else {
        (
            ObstructionKind::WeightMeanSign,
            format!(
                "forward period mean {fs}/{fl} exceeds backward period mean {bs}/{bl}: \
                 the difference of partial sums drifts to +infinity, so the combined \
                 weight product stays bounded away from zero"
            ),
        )
    };
    Ok(Verdict {
        property: Property::Supercyclic,
        answer: Answer::No,
        rule: Rule::BilateralScWeightTest,
        certificate: Certificate::Obstruction {
            kind,
            detail: detail.clone(),
        },
        justification: detail,
    })
}

/// Decide a property for a unilateral weighted backward shift on `c_0(N)`.
///
/// Supercyclicity is unconditional: powers of the shift annihilate any
/// finitely supported vector exactly, and the forward-shift powers supply
/// the right-inverse family. Hypercyclicity needs the weight products
/// `|a_1 ... a_n|` to blow up, i.e. `S+_n -> -infinity`: negative forward
/// period mean.
pub fn decide_unilateral(a: &WeightModel, property: Property) -> Result<Verdict, CriteriaError> {
    expect_model_domain(a, IndexDomain::Naturals)?;
    match property {
        Property::Supercyclic => Ok(Verdict {
            property,
            answer: Answer::Yes,
            rule: Rule::UnilateralAlwaysSc,
            certificate: Certificate::Subsequence {
                start: 0,
                stride: 1,
                m_exponent: None,
            },
            justification: "every unilateral weighted backward shift is supercyclic: \
                B_a^k x = 0 exactly once k passes the support of x, so the norm \
                product in the supercyclicity criterion vanishes along n_k = k"
                .to_string(),
        }),
        Property::Hypercyclic => {
            let sums = ValuationSumModel::new(a);
            let (fs, fl) = sums.forward_period();
            if fs < 0 {
                let (start, stride) = sums.aligned_progression();
                Ok(Verdict {
                    property,
                    answer: Answer::Yes,
                    rule: Rule::UnilateralHcWeightTest,
                    certificate: Certificate::Subsequence {
                        start,
                        stride,
                        m_exponent: None,
                    },
                    justification: format!(
                        "forward period valuation sum {fs}/{fl} < 0: |a_1 ... a_n| = \
                         p^(-S+_n) blows up along n_k = {start} + {stride}k"
                    ),
                })
            } else {
                let (kind, detail) = if fs == 0 {
                    (
                        ObstructionKind::BoundedOscillation,
                        format!(
                            "forward period valuation sum is 0 over length {fl}: the \
                             weight products |a_1 ... a_n| oscillate in a fixed band \
                             and have no unbounded subsequence"
                        ),
                    )
                } else {
                    (
                        ObstructionKind::WeightMeanSign,
                        format!(
                            "forward period valuation sum {fs}/{fl} > 0: the weight \
                             products |a_1 ... a_n| tend to zero, never unbounded"
                        ),
                    )
                };
                Ok(Verdict {
                    property,
                    answer: Answer::No,
                    rule: Rule::UnilateralHcWeightTest,
                    certificate: Certificate::Obstruction {
                        kind,
                        detail: detail.clone(),
                    },
                    justification: detail,
                })
            }
        }
    }
}

/// Decide a property for `lambda*I + mu*B` on either domain.
///
/// On `c_0(Z)` the answer is No for both properties and all parameters. On
/// `c_0(N)`: hypercyclic iff `|lambda| < 1 < |mu|`, supercyclic iff
/// `|lambda| < |mu|`.
pub fn decide_lambda_mu(
    lambda: &PadicScalar,
    mu: &PadicScalar,
    domain: IndexDomain,
    property: Property,
) -> Verdict {
    let ln = lambda.norm();
    let mn = mu.norm();
    match domain {
        IndexDomain::Integers => Verdict {
            property,
            answer: Answer::No,
            rule: Rule::LambdaMuIntegers,
            certificate: Certificate::Obstruction {
                kind: ObstructionKind::AllParameters,
                detail: "on c0(Z) the operator lambda*I + mu*B is never supercyclic \
                    (hence never hypercyclic), regardless of the parameters: the \
                    coordinate of maximal norm moves left under powers while keeping \
                    its norm ratio to its neighbours, which blocks projective density"
                    .to_string(),
            },
            justification: format!(
                "|lambda| = {ln}, |mu| = {mn} play no role on c0(Z): no parameter \
                 choice makes the operator supercyclic"
            ),
        },
        IndexDomain::Naturals => match property {
            Property::Hypercyclic => {
                let yes = ln < NormExp::Pow(0) && NormExp::Pow(0) < mn;
                if yes {
                    Verdict {
                        property,
                        answer: Answer::Yes,
                        rule: Rule::LambdaMuNaturalsHc,
                        certificate: Certificate::ParameterWitness {
                            lambda_norm: ln,
                            mu_norm: mn,
                        },
                        justification: format!(
                            "|lambda| = {ln} < 1 < {mn} = |mu|: powers contract the \
                             identity part while the shift part expands, matching the \
                             hypercyclicity region of the family"
                        ),
                    }
                } else {
                    let detail = format!(
                        "hypercyclicity requires |lambda| < 1 < |mu|; here |lambda| = \
                         {ln} and |mu| = {mn}"
                    );
                    Verdict {
                        property,
                        answer: Answer::No,
                        rule: Rule::LambdaMuNaturalsHc,
                        certificate: Certificate::Obstruction {
                            kind: ObstructionKind::ParameterRegion,
                            detail: detail.clone(),
                        },
                        justification: detail,
                    }
                }
            }
            Property::Supercyclic => {
                if ln < mn {
                    Verdict {
                        property,
                        answer: Answer::Yes,
                        rule: Rule::LambdaMuNaturalsSc,
                        certificate: Certificate::ParameterWitness {
                            lambda_norm: ln,
                            mu_norm: mn,
                        },
                        justification: format!(
                            "|lambda| = {ln} < {mn} = |mu|: the shift part dominates \
                             in norm, matching the supercyclicity region of the family"
                        ),
                    }
                } else {
                    let detail = format!(
                        "supercyclicity requires |lambda| < |mu|; here |lambda| = {ln} \
                         and |mu| = {mn}"
                    );
                    Verdict {
                        property,
                        answer: Answer::No,
                        rule: Rule::LambdaMuNaturalsSc,
                        certificate: Certificate::Obstruction {
                            kind: ObstructionKind::ParameterRegion,
                            detail: detail.clone(),
                        },
                        justification: detail,
                    }
                }
            }
        },
    }
}

/// No operator on a nonzero finite-dimensional space is hypercyclic.
///
/// The justification is the determinant dichotomy: a dense orbit would make
/// `{|det T|^n : n}` dense in the value group, but that set is either
/// unbounded, vanishing, or constant.
pub fn decide_finite_dim(dim: NonZeroU64) -> Verdict {
    Verdict {
        property: Property::Hypercyclic,
        answer: Answer::No,
        rule: Rule::FiniteDim,
        certificate: Certificate::Obstruction {
            kind: ObstructionKind::FiniteDimensional,
            detail: format!(
                "dimension {dim} is finite: |det(T)^n| = |det T|^n is geometric in n, \
                 so the orbit norms of a basis parallelepiped cannot be dense in the \
                 value group; no operator on the space is hypercyclic"
            ),
        },
        justification: format!("finite dimension {dim}; holds for every operator"),
    }
}

/// Strip a strictly dominated perturbation: given weights `a` and `b` with
/// `|a_n| > |b_n|` at every index, `|a_n + b_n| = |a_n|` exactly, so the
/// summed model decides like `a`. Returns the entrywise sum model (whose
/// valuations equal `a`'s); fails with the offending index when dominance
/// breaks.
pub fn perturbation_reduce(
    a: &WeightModel,
    b: &WeightModel,
) -> Result<WeightModel, CriteriaError> {
    if a.domain() != b.domain() {
        return Err(CriteriaError::WrongDomain {
            expected: a.domain(),
            found: b.domain(),
        });
    }
    let fwd_prefix_len = a
        .forward_prefix()
        .len()
        .max(b.forward_prefix().len());
    let fwd_period_len = a.forward_period().len().lcm(&b.forward_period().len());
    let sum_at = |n: i64| -> Result<PadicScalar, CriteriaError> {
        let aw = a.weight_at(n)?;
        let bw = b.weight_at(n)?;
        let va = aw.valuation().expect("weights are nonzero");
        let vb = bw.valuation().expect("weights are nonzero");
        if va >= vb {
            return Err(CriteriaError::PrecedenceViolation { index: n });
        }
        Ok(aw.add(bw))
    };
    let pl = fwd_prefix_len as i64;
    let mut fwd_prefix = Vec::new();
    for n in 1..=pl {
        fwd_prefix.push(sum_at(n)?);
    }
    let mut fwd_period = Vec::new();
    for n in (pl + 1)..=(pl + fwd_period_len as i64) {
        fwd_period.push(sum_at(n)?);
    }
    match a.domain() {
        IndexDomain::Naturals => Ok(WeightModel::unilateral(fwd_prefix, fwd_period)?),
        IndexDomain::Integers => {
            let bwd_prefix_len = a
                .backward_prefix()
                .len()
                .max(b.backward_prefix().len()) as i64;
            let bwd_period_len =
                a.backward_period().len().lcm(&b.backward_period().len()) as i64;
            let mut bwd_prefix = Vec::new();
            for k in 0..bwd_prefix_len {
                bwd_prefix.push(sum_at(-k)?);
            }
            let mut bwd_period = Vec::new();
            for k in bwd_prefix_len..(bwd_prefix_len + bwd_period_len) {
                bwd_period.push(sum_at(-k)?);
            }
            Ok(WeightModel::bilateral(
                fwd_prefix, fwd_period, bwd_prefix, bwd_period,
            )?)
        }
    }
}

/// Decide a property for the shift with weights `a_n + b_n` by reducing to
/// `a` through [`perturbation_reduce`]. The verdict carries rule
/// [`Rule::PerturbationReduction`] and names the inner rule in its
/// justification.
pub fn decide_perturbed(
    a: &WeightModel,
    b: &WeightModel,
    property: Property,
) -> Result<Verdict, CriteriaError> {
    let reduced = perturbation_reduce(a, b)?;
    let inner = match reduced.domain() {
        IndexDomain::Naturals => decide_unilateral(&reduced, property)?,
        IndexDomain::Integers => match property {
            Property::Hypercyclic => decide_bilateral_hypercyclic(&reduced)?,
            Property::Supercyclic => decide_bilateral_supercyclic(&reduced)?,
        },
    };
    Ok(Verdict {
        property: inner.property,
        answer: inner.answer,
        rule: Rule::PerturbationReduction,
        certificate: inner.certificate,
        justification: format!(
            "|a_n| > |b_n| at every index, so |a_n + b_n| = |a_n| and the sum decides \
             like a; inner rule {}: {}",
            inner.rule, inner.justification
        ),
    })
}

/// Dispatch to the matching decider, refusing families without a proved
/// characterization.
pub fn decide_operator(
    op: &OperatorSpec,
    property: Property,
) -> Result<Verdict, CriteriaError> {
    match op {
        OperatorSpec::BilateralBackwardShift(w) => match property {
            Property::Hypercyclic => decide_bilateral_hypercyclic(w),
            Property::Supercyclic => decide_bilateral_supercyclic(w),
        },
        OperatorSpec::UnilateralBackwardShift(w) => decide_unilateral(w, property),
        OperatorSpec::LambdaMu { lambda, mu, domain } => {
            Ok(decide_lambda_mu(lambda, mu, *domain, property))
        }
        other => Err(CriteriaError::Unsupported(other.to_string())),
    }
}

fn expect_model_domain(w: &WeightModel, expected: IndexDomain) -> Result<(), CriteriaError> {
    if w.domain() != expected {
        return Err(CriteriaError::WrongDomain {
            expected,
            found: w.domain(),
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldConfig;
    use proptest::prelude::*;

    fn f5() -> FieldConfig {
        FieldConfig::new(5, 8).unwrap()
    }

    fn sc(f: &FieldConfig, n: i64, d: i64) -> PadicScalar {
        f.from_rational(n, d).unwrap()
    }

    /// Bilateral model from valuation lists (weight p^v).
    fn model_z(f: &FieldConfig, fp: &[i64], fper: &[i64], bp: &[i64], bper: &[i64]) -> WeightModel {
        let conv = |vs: &[i64]| vs.iter().map(|&v| f.p_power(v)).collect::<Vec<_>>();
        WeightModel::bilateral(conv(fp), conv(fper), conv(bp), conv(bper)).unwrap()
    }

    fn model_n(f: &FieldConfig, fp: &[i64], fper: &[i64]) -> WeightModel {
        let conv = |vs: &[i64]| vs.iter().map(|&v| f.p_power(v)).collect::<Vec<_>>();
        WeightModel::unilateral(conv(fp), conv(fper)).unwrap()
    }

    #[test]
    fn partial_sums_walk_prefix_then_period() {
        let f = f5();
        let w = model_n(&f, &[2], &[-1, 3]);
        let sums = ValuationSumModel::new(&w);
        // v sequence: 2, -1, 3, -1, 3, ...
        let expect = [0, 2, 1, 4, 3, 6, 5, 8];
        for (n, e) in expect.iter().enumerate() {
            assert_eq!(sums.forward_partial(n as u64), *e, "n = {n}");
        }
        assert_eq!(sums.forward_period(), (2, 2));
        assert_eq!(sums.aligned_progression(), (2, 2));
    }

    #[test]
    fn bilateral_hc_drifting_model_is_yes() {
        let f = f5();
        // |a_n| = 5 forward (v = -1), |a_n| = 1/5 backward (v = +1).
        let w = model_z(&f, &[], &[-1], &[], &[1]);
        let v = decide_bilateral_hypercyclic(&w).unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(v.rule, Rule::BilateralHcWeightTest);
        let Certificate::Subsequence { start, stride, m_exponent } = v.certificate else {
            panic!("expected subsequence certificate");
        };
        assert_eq!((start, stride), (0, 1));
        // min valuation is -1, so the threshold exponent is 1 + 1.
        assert_eq!(m_exponent, Some(2));
        // The certified progression really diverges both ways.
        let sums = ValuationSumModel::new(&w);
        for k in 1..=5u64 {
            let n = start + stride * k;
            assert_eq!(sums.forward_partial(n), -(n as i64));
            assert_eq!(sums.backward_partial(n), Some(n as i64));
        }
    }

    #[test]
    fn unweighted_bilateral_shift_is_no_everywhere() {
        let f = f5();
        let w = model_z(&f, &[], &[0], &[], &[0]);
        let hc = decide_bilateral_hypercyclic(&w).unwrap();
        assert_eq!(hc.answer, Answer::No);
        assert!(matches!(
            hc.certificate,
            Certificate::Obstruction {
                kind: ObstructionKind::BoundedOscillation,
                ..
            }
        ));
        let sc_v = decide_bilateral_supercyclic(&w).unwrap();
        assert_eq!(sc_v.answer, Answer::No);
    }

    #[test]
    fn symmetric_norm_weights_are_not_supercyclic() {
        let f = f5();
        // |a_n| = |a_{-n}|: same valuation pattern both ways.
        let w = model_z(&f, &[], &[1, -1], &[], &[1, -1]);
        let v = decide_bilateral_supercyclic(&w).unwrap();
        assert_eq!(v.answer, Answer::No);
        assert!(matches!(
            v.certificate,
            Certificate::Obstruction {
                kind: ObstructionKind::BoundedOscillation,
                ..
            }
        ));
    }

    #[test]
    fn unilateral_is_always_supercyclic() {
        let f = f5();
        for per in [&[0i64][..], &[3], &[-2, 5]] {
            let w = model_n(&f, &[], per);
            let v = decide_unilateral(&w, Property::Supercyclic).unwrap();
            assert_eq!(v.answer, Answer::Yes);
            assert_eq!(v.rule, Rule::UnilateralAlwaysSc);
        }
    }

    #[test]
    fn unilateral_hc_needs_expanding_weights() {
        let f = f5();
        // |a_i| = 5: yes.
        let yes = decide_unilateral(&model_n(&f, &[], &[-1]), Property::Hypercyclic).unwrap();
        assert_eq!(yes.answer, Answer::Yes);
        // Unweighted: no, bounded oscillation.
        let no = decide_unilateral(&model_n(&f, &[], &[0]), Property::Hypercyclic).unwrap();
        assert_eq!(no.answer, Answer::No);
        assert!(matches!(
            no.certificate,
            Certificate::Obstruction {
                kind: ObstructionKind::BoundedOscillation,
                ..
            }
        ));
        // A long prefix cannot rescue a drifting period.
        let no2 =
            decide_unilateral(&model_n(&f, &[-3, -3, -3], &[1]), Property::Hypercyclic).unwrap();
        assert_eq!(no2.answer, Answer::No);
    }

    #[test]
    fn lambda_mu_trichotomy_examples() {
        let f = f5();
        // lambda = 5, mu = 1/5: |lambda| = 1/5 < 1 < 5 = |mu|.
        let v = decide_lambda_mu(
            &sc(&f, 5, 1),
            &sc(&f, 1, 5),
            IndexDomain::Naturals,
            Property::Hypercyclic,
        );
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(v.rule, Rule::LambdaMuNaturalsHc);
        // lambda = 1: I + mu*B is never hypercyclic.
        for mu in [sc(&f, 1, 5), sc(&f, 5, 1), f.zero(), f.one()] {
            let v = decide_lambda_mu(
                &f.one(),
                &mu,
                IndexDomain::Naturals,
                Property::Hypercyclic,
            );
            assert_eq!(v.answer, Answer::No);
        }
        // Supercyclicity only compares the two norms.
        let v = decide_lambda_mu(
            &sc(&f, 25, 1),
            &sc(&f, 5, 1),
            IndexDomain::Naturals,
            Property::Supercyclic,
        );
        assert_eq!(v.answer, Answer::Yes);
        // Integers domain: no for every parameter pair.
        let v = decide_lambda_mu(
            &sc(&f, 5, 1),
            &sc(&f, 1, 5),
            IndexDomain::Integers,
            Property::Supercyclic,
        );
        assert_eq!(v.answer, Answer::No);
        assert_eq!(v.rule, Rule::LambdaMuIntegers);
        // Zero operator (lambda = mu = 0) is nothing.
        let v = decide_lambda_mu(
            &f.zero(),
            &f.zero(),
            IndexDomain::Naturals,
            Property::Supercyclic,
        );
        assert_eq!(v.answer, Answer::No);
    }

    #[test]
    fn finite_dim_is_always_no() {
        for dim in [1u64, 7] {
            let v = decide_finite_dim(NonZeroU64::new(dim).unwrap());
            assert_eq!(v.answer, Answer::No);
            assert_eq!(v.rule, Rule::FiniteDim);
            let Certificate::Obstruction { kind, detail } = &v.certificate else {
                panic!("expected obstruction");
            };
            assert_eq!(*kind, ObstructionKind::FiniteDimensional);
            assert!(detail.contains("det"));
        }
    }

    #[test]
    fn perturbation_reduction_strips_dominated_summand() {
        let f = f5();
        let a = model_n(&f, &[], &[-1, -1]);
        let b = model_n(&f, &[], &[0]);
        let reduced = perturbation_reduce(&a, &b).unwrap();
        // Valuations of the sum equal a's valuations.
        for n in 1..=6 {
            assert_eq!(
                reduced.weight_at(n).unwrap().valuation(),
                a.weight_at(n).unwrap().valuation(),
                "n = {n}"
            );
        }
        let direct = decide_unilateral(&a, Property::Hypercyclic).unwrap();
        let via_sum = decide_perturbed(&a, &b, Property::Hypercyclic).unwrap();
        assert_eq!(via_sum.answer, direct.answer);
        assert_eq!(via_sum.rule, Rule::PerturbationReduction);
        // Equal models violate strict dominance at the first index.
        assert_eq!(
            perturbation_reduce(&a, &a),
            Err(CriteriaError::PrecedenceViolation { index: 1 })
        );
        // Violation index is reported precisely.
        let a2 = model_n(&f, &[-1], &[0]);
        let b2 = model_n(&f, &[0], &[0]);
        assert_eq!(
            perturbation_reduce(&a2, &b2),
            Err(CriteriaError::PrecedenceViolation { index: 2 })
        );
    }

    #[test]
    fn dispatcher_refuses_uncharacterized_operators() {
        let f = f5();
        assert!(matches!(
            decide_operator(&OperatorSpec::Identity, Property::Hypercyclic),
            Err(CriteriaError::Unsupported(_))
        ));
        let w = WeightModel::constant(IndexDomain::Naturals, f.one()).unwrap();
        assert!(matches!(
            decide_operator(&OperatorSpec::forward_shift(w), Property::Supercyclic),
            Err(CriteriaError::Unsupported(_))
        ));
    }

    // --- scan oracle: thresholded brute-force partial sums via weight_at ---

    fn scan_forward(w: &WeightModel, n_max: u64) -> Vec<i64> {
        let mut acc = 0;
        (1..=n_max as i64)
            .map(|n| {
                acc += w.weight_at(n).unwrap().valuation().unwrap();
                acc
            })
            .collect()
    }

    fn scan_backward(w: &WeightModel, n_max: u64) -> Vec<i64> {
        let mut acc = 0;
        (1..=n_max as i64)
            .map(|j| {
                acc += w.weight_at(-j + 1).unwrap().valuation().unwrap();
                acc
            })
            .collect()
    }

    proptest! {
        // The O(1) partial-sum model agrees with a literal walk.
        #[test]
        fn valuation_sums_match_walk(
            fp in proptest::collection::vec(-3i64..4, 0..3),
            fper in proptest::collection::vec(-3i64..4, 1..5),
            bp in proptest::collection::vec(-3i64..4, 0..3),
            bper in proptest::collection::vec(-3i64..4, 1..5),
        ) {
            let f = f5();
            let w = model_z(&f, &fp, &fper, &bp, &bper);
            let sums = ValuationSumModel::new(&w);
            let fwd = scan_forward(&w, 40);
            let bwd = scan_backward(&w, 40);
            for n in 1..=40u64 {
                prop_assert_eq!(sums.forward_partial(n), fwd[(n - 1) as usize]);
                prop_assert_eq!(sums.backward_partial(n).unwrap(), bwd[(n - 1) as usize]);
            }
        }

        // Decider vs. threshold-crossing scan on models away from the mean-0
        // boundary; mean-0 models are separately asserted No by boundedness.
        #[test]
        fn bilateral_deciders_match_scan(
            fp in proptest::collection::vec(-2i64..3, 0..3),
            fper in proptest::collection::vec(-2i64..3, 1..5),
            bp in proptest::collection::vec(-2i64..3, 0..3),
            bper in proptest::collection::vec(-2i64..3, 1..5),
        ) {
            let f = f5();
            let w = model_z(&f, &fp, &fper, &bp, &bper);
            let fwd = scan_forward(&w, 2000);
            let bwd = scan_backward(&w, 2000);
            let fsum: i64 = fper.iter().sum();
            let bsum: i64 = bper.iter().sum();
            let t = 40;
            let hc = decide_bilateral_hypercyclic(&w).unwrap();
            if fsum != 0 && bsum != 0 {
                let crossed = (0..2000).any(|i| fwd[i] < -t && bwd[i] > t);
                prop_assert_eq!(hc.answer == Answer::Yes, crossed);
            } else {
                prop_assert_eq!(hc.answer, Answer::No);
            }
            let scv = decide_bilateral_supercyclic(&w).unwrap();
            if fsum * bper.len() as i64 != bsum * fper.len() as i64 {
                let crossed = (0..2000).any(|i| fwd[i] - bwd[i] < -t);
                prop_assert_eq!(scv.answer == Answer::Yes, crossed);
            } else {
                prop_assert_eq!(scv.answer, Answer::No);
            }
        }

        // Hypercyclic-Yes forces supercyclic-Yes on bilateral shifts.
        #[test]
        fn hc_yes_implies_sc_yes(
            fper in proptest::collection::vec(-3i64..4, 1..5),
            bper in proptest::collection::vec(-3i64..4, 1..5),
        ) {
            let f = f5();
            let w = model_z(&f, &[], &fper, &[], &bper);
            let hc = decide_bilateral_hypercyclic(&w).unwrap();
            let scv = decide_bilateral_supercyclic(&w).unwrap();
            if hc.answer == Answer::Yes {
                prop_assert_eq!(scv.answer, Answer::Yes);
            }
        }

        // Multiplying every weight by a fixed scalar leaves the supercyclic
        // verdict unchanged.
        #[test]
        fn sc_verdict_scalar_invariant(
            fper in proptest::collection::vec(-2i64..3, 1..4),
            bper in proptest::collection::vec(-2i64..3, 1..4),
            shift in -3i64..4,
        ) {
            let f = f5();
            let w = model_z(&f, &[], &fper, &[], &bper);
            let scaled_f: Vec<i64> = fper.iter().map(|v| v + shift).collect();
            let scaled_b: Vec<i64> = bper.iter().map(|v| v + shift).collect();
            let ws = model_z(&f, &[], &scaled_f, &[], &scaled_b);
            let v1 = decide_bilateral_supercyclic(&w).unwrap();
            let v2 = decide_bilateral_supercyclic(&ws).unwrap();
            prop_assert_eq!(v1.answer, v2.answer);
        }

        // lambda-mu verdicts depend only on the valuations, and the HC region
        // sits inside the SC region.
        #[test]
        fn lambda_mu_regions_nest(vl in -3i64..4, vm in -3i64..4) {
            let f = f5();
            let lambda = f.p_power(vl);
            let mu = f.p_power(vm);
            let hc = decide_lambda_mu(&lambda, &mu, IndexDomain::Naturals, Property::Hypercyclic);
            let scv = decide_lambda_mu(&lambda, &mu, IndexDomain::Naturals, Property::Supercyclic);
            prop_assert_eq!(hc.answer == Answer::Yes, vl > 0 && vm < 0);
            prop_assert_eq!(scv.answer == Answer::Yes, vl > vm);
            if hc.answer == Answer::Yes {
                prop_assert_eq!(scv.answer, Answer::Yes);
            }
        }
    }
}
