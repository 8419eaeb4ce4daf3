//! Constructive dynamics: orbits, criterion verification with finite decay
//! certificates, transitivity witnesses, norm-obstruction witnesses, the
//! scaling-sequence constructor, and the invariant-band check.
//!
//! Everything here produces *checked* artifacts: witnesses are re-verified by
//! independent recomputation before being returned, convergence claims are
//! certified threshold by threshold, and obstruction identities are exact
//! norm equalities.

mod band;
mod criterion;
mod obstruction;
mod scaling;
mod witness;

pub use band::{band_invariance_check, BandInvarianceReport, BandStep};
pub use criterion::{
    verify_hc_criterion, verify_sc_criterion, CriterionReport, CriterionStep, DecayCertificate,
    Stabilization, DEFAULT_THRESHOLD_MAX,
};
pub use obstruction::{
    finite_dim_obstruction, obstruction_witness_lambda_mu, FiniteDimCheck, FiniteDimReport,
    ObstructionBranch, ObstructionStep, ObstructionWitness,
};
pub use scaling::scaling_sequence;
pub use witness::{transitivity_witness, TransitivityWitness};

use thiserror::Error;

use crate::field::NormExp;
use crate::ops::{OperatorSpec, OpsError};
use crate::seq::{FinVector, SeqError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("no constructed right inverse for this operator pairing: {0}")]
    UnsupportedPairing(String),
    #[error("no transitivity witness found with n <= {n_max} (inconclusive, not a disproof)")]
    WitnessNotFound { n_max: u64 },
    #[error("norm products must decay along the list; violated at position {position}")]
    HypothesisViolated { position: usize },
    #[error("the zero vector admits no obstruction witness")]
    ZeroVector,
    #[error("zero scalar has no norm dichotomy")]
    ZeroScalar,
    #[error("parameter requirements violated: {0}")]
    ParameterViolation(String),
    #[error("internal certification failed ({0}); this indicates an arithmetic bug")]
    CertificationFailed(String),
    #[error(transparent)]
    Ops(#[from] OpsError),
    #[error(transparent)]
    Seq(#[from] SeqError),
}

/// Arithmetic progression `n_k = start + stride * k` for `k >= 1`, the shape
/// of subsequences carried by Yes certificates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SequenceGen {
    start: u64,
    stride: u64,
}

impl SequenceGen {
    pub fn new(start: u64, stride: u64) -> Result<Self, DynamicsError> {
        if stride == 0 {
            return Err(DynamicsError::ParameterViolation(
                "subsequence stride must be positive".to_string(),
            ));
        }
        Ok(SequenceGen { start, stride })
    }

    /// The tail-to-head sequence `n_k = k`.
    pub fn identity() -> Self {
        SequenceGen { start: 0, stride: 1 }
    }

    pub fn at(&self, k: u64) -> u64 {
        self.start + self.stride * k
    }
}

/// One computed orbit point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitPoint {
    pub n: u64,
    pub vector: FinVector,
    pub norm: NormExp,
}

/// The exact orbit prefix `x, Tx, ..., T^{n_max} x` with sup norms.
///
/// Computed by iterated application, which agrees exactly with the closed
/// power forms (a tested identity).
pub fn orbit(
    op: &OperatorSpec,
    x: &FinVector,
    n_max: u64,
) -> Result<Vec<OrbitPoint>, DynamicsError> {
    let mut points = Vec::with_capacity(n_max as usize + 1);
    let mut cur = x.clone();
    for n in 0..=n_max {
        if n > 0 {
            cur = op.apply(&cur)?;
        }
        points.push(OrbitPoint {
            n,
            norm: cur.sup_norm(),
            vector: cur.clone(),
        });
    }
    Ok(points)
}

/// Accept only the operator/right-inverse pairings with a constructed
/// inverse: a weighted backward shift with its own forward shift, or
/// `lambda I + mu B` on the naturals with its series right inverse. The
/// unweighted bilateral pair is admitted through a constant-one weight model.
pub(crate) fn validate_pairing(
    op: &OperatorSpec,
    inv: &OperatorSpec,
) -> Result<(), DynamicsError> {
    let ok = match (op, inv) {
        (OperatorSpec::UnilateralBackwardShift(a), OperatorSpec::ForwardShift(b)) => a == b,
        (OperatorSpec::BilateralBackwardShift(a), OperatorSpec::ForwardShift(b)) => a == b,
        (OperatorSpec::BilateralBackwardShift(a), OperatorSpec::ForwardShiftBilateral) => {
            constant_one(a)
        }
        (
            OperatorSpec::LambdaMu {
                lambda,
                mu,
                domain: crate::seq::IndexDomain::Naturals,
            },
            OperatorSpec::RightInverseLambdaMu {
                lambda: l2,
                mu: m2,
            },
        ) => lambda == l2 && mu == m2,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(DynamicsError::UnsupportedPairing(format!(
            "{op} with {inv}"
        )))
    }
}

fn constant_one(w: &crate::ops::WeightModel) -> bool {
    w.forward_prefix()
        .iter()
        .chain(w.forward_period())
        .chain(w.backward_prefix())
        .chain(w.backward_period())
        .all(|a| a.is_one())
}
