//! Norm-obstruction witnesses: exact certificates that no scalar multiple
//! of an orbit ever enters a specific unit ball, ruling out dense (even
//! projectively dense) orbits.
//!
//! For `T = lambda I + mu B` on two-sided sequences the orbit of a nonzero
//! finitely supported `x` keeps a rigid norm profile. Two regimes:
//!
//! * `|lambda| >= |mu|`: at the last index `k` attaining `||x||` the
//!   coordinate recursion is dominated by its `lambda^n x_k` term, so
//!   `|x_k^(n)| = |lambda^n x_k|` while `|x_{k+1}^(n)|` stays strictly
//!   below. For any scalar `alpha`, either `|alpha x_k^(n)| >= 1` (the
//!   `k`-th coordinate already misses `e_{k+1}` by `>= 1`) or
//!   `|alpha x_{k+1}^(n)| < 1` forces `|alpha x_{k+1}^(n) - 1| = 1`.
//! * `|mu| > |lambda|`: with `l` the first and `m` the last index attaining
//!   `||x||`, the travelling coordinate `l - n` carries exactly
//!   `|mu^n x_l|` while every coordinate beyond `m` stays strictly below.
//!   Membership of `beta T^n x` in the open unit ball around `e_{m+1}`
//!   would need `|beta x_{l-n}^(n)| < 1`, which drags the `m+1` coordinate
//!   strictly below `1` and pins its distance from `1` at exactly `1`.
//!
//! The inequalities are certified for every `n <= n_max` by exact orbit
//! computation; the quantifier over scalars is then discharged symbolically
//! from the two norm facts, no sampling involved.

use crate::field::{FieldConfig, NormExp, PadicScalar};
use crate::ops::OperatorSpec;
use crate::seq::{FinVector, IndexDomain};

use super::DynamicsError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionBranch {
    /// `|lambda| >= |mu|`, `lambda != 0`; `critical` is the last index
    /// attaining the sup norm.
    DominantLambda { critical: i64 },
    /// `|mu| > |lambda|`; `first_peak`/`last_peak` are the first and last
    /// indices attaining the sup norm.
    DominantMu { first_peak: i64, last_peak: i64 },
    /// `lambda = mu = 0`: every orbit point past `n = 0` is the origin,
    /// at distance exactly `1` from the target basis vector.
    ZeroOperator { critical: i64 },
}

/// Exact norms certified at one orbit stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObstructionStep {
    pub n: u64,
    /// Norm of the carried coordinate; certified equal to
    /// `|lambda|^n ||x||` (resp. `|mu|^n ||x||`).
    pub carried_norm: NormExp,
    /// Largest competing coordinate norm; certified strictly smaller.
    pub competitor_norm: NormExp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionWitness {
    pub branch: ObstructionBranch,
    /// Index `t` such that no scalar multiple of the orbit meets the open
    /// unit ball around `e_t`.
    pub separation_target: i64,
    pub n_checked: u64,
    pub steps: Vec<ObstructionStep>,
    /// The symbolic scalar-quantifier argument, spelled out.
    pub conclusion: String,
}

/// Certify a separation witness for `lambda I + mu B` acting on two-sided
/// finitely supported sequences.
pub fn obstruction_witness_lambda_mu(
    lambda: &PadicScalar,
    mu: &PadicScalar,
    x: &FinVector,
    n_max: u64,
) -> Result<ObstructionWitness, DynamicsError> {
    if x.is_zero() {
        return Err(DynamicsError::ZeroVector);
    }
    if x.domain() != IndexDomain::Integers {
        return Err(DynamicsError::ParameterViolation(
            "separation witnesses live on two-sided sequences".to_string(),
        ));
    }
    let sup = x.sup_norm();
    let mut first_peak = None;
    let mut last_peak = None;
    for (i, c) in x.iter() {
        if c.norm() == sup {
            first_peak.get_or_insert(i);
            last_peak = Some(i);
        }
    }
    let first_peak = first_peak.expect("nonzero vector has a peak");
    let last_peak = last_peak.expect("nonzero vector has a peak");

    let branch = if lambda.is_zero() && mu.is_zero() {
        ObstructionBranch::ZeroOperator {
            critical: last_peak,
        }
    } else if lambda.norm() >= mu.norm() {
        ObstructionBranch::DominantLambda {
            critical: last_peak,
        }
    } else {
        ObstructionBranch::DominantMu {
            first_peak,
            last_peak,
        }
    };
    let separation_target = last_peak + 1;

    let op = OperatorSpec::lambda_mu(lambda.clone(), mu.clone(), IndexDomain::Integers);
    let mut steps = Vec::with_capacity(n_max as usize + 1);
    let mut cur = x.clone();
    for n in 0..=n_max {
        if n > 0 {
            cur = op.apply(&cur)?;
        }
        let step = match branch {
            ObstructionBranch::DominantLambda { critical } => {
                let expected = lambda.norm().pow(n) * sup;
                let carried = cur.coeff_norm(critical);
                let competitor = cur.coeff_norm(critical + 1);
                if carried != expected {
                    return Err(DynamicsError::CertificationFailed(format!(
                        "carried coordinate at {critical} drifted off |lambda|^{n}||x|| at stage {n}"
                    )));
                }
                if competitor >= expected {
                    return Err(DynamicsError::CertificationFailed(format!(
                        "competitor at {} caught up with the carried norm at stage {n}",
                        critical + 1
                    )));
                }
                ObstructionStep {
                    n,
                    carried_norm: carried,
                    competitor_norm: competitor,
                }
            }
            ObstructionBranch::DominantMu {
                first_peak,
                last_peak,
            } => {
                let expected = mu.norm().pow(n) * sup;
                let carried = cur.coeff_norm(first_peak - n as i64);
                let competitor = cur
                    .iter()
                    .filter(|(i, _)| *i > last_peak)
                    .map(|(_, c)| c.norm())
                    .max()
                    .unwrap_or(NormExp::Zero);
                if carried != expected {
                    return Err(DynamicsError::CertificationFailed(format!(
                        "travelling coordinate at {} drifted off |mu|^{n}||x|| at stage {n}",
                        first_peak - n as i64
                    )));
                }
                if competitor >= expected {
                    return Err(DynamicsError::CertificationFailed(format!(
                        "tail beyond {last_peak} caught up with the travelling norm at stage {n}"
                    )));
                }
                ObstructionStep {
                    n,
                    carried_norm: carried,
                    competitor_norm: competitor,
                }
            }
            ObstructionBranch::ZeroOperator { critical } => {
                if n == 0 {
                    let carried = cur.coeff_norm(critical);
                    let competitor = cur.coeff_norm(critical + 1);
                    if carried != sup || competitor >= sup {
                        return Err(DynamicsError::CertificationFailed(
                            "peak structure broken at stage 0".to_string(),
                        ));
                    }
                    ObstructionStep {
                        n,
                        carried_norm: carried,
                        competitor_norm: competitor,
                    }
                } else {
                    if !cur.is_zero() {
                        return Err(DynamicsError::CertificationFailed(format!(
                            "zero operator produced a nonzero point at stage {n}"
                        )));
                    }
                    ObstructionStep {
                        n,
                        carried_norm: NormExp::Zero,
                        competitor_norm: NormExp::Zero,
                    }
                }
            }
        };
        steps.push(step);
    }

    let conclusion = match branch {
        ObstructionBranch::DominantLambda { critical } => format!(
            "for every scalar alpha and every n <= {n_max}: if |alpha (T^n x)_{k}| >= 1 then \
             coordinate {k} of alpha T^n x - e_{t} has norm >= 1; otherwise the certified strict \
             gap gives |alpha (T^n x)_{t}| < 1, so coordinate {t} has norm exactly 1. Either way \
             ||alpha T^n x - e_{t}|| >= 1.",
            k = critical,
            t = separation_target,
        ),
        ObstructionBranch::DominantMu { first_peak, .. } => format!(
            "for every scalar beta and every n <= {n_max}: membership of beta T^n x in the open \
             unit ball around e_{t} would force |beta (T^n x)_i| < 1 at the travelling \
             coordinate i = {first_peak} - n; the certified strict gap then gives \
             |beta (T^n x)_{t}| < 1, so coordinate {t} of beta T^n x - e_{t} has norm exactly 1. \
             Hence ||beta T^n x - e_{t}|| >= 1.",
            t = separation_target,
        ),
        ObstructionBranch::ZeroOperator { critical } => format!(
            "T = 0: for n >= 1 every orbit point is 0, so ||alpha T^n x - e_{t}|| = 1; at n = 0 \
             the certified peak at {critical} gives the same bound for every alpha.",
            t = separation_target,
        ),
    };

    Ok(ObstructionWitness {
        branch,
        separation_target,
        n_checked: n_max,
        steps,
        conclusion,
    })
}

/// One-dimensional obstruction, certified materially: powers of a nonzero
/// scalar either stay in the closed unit ball (and miss every target of
/// norm `> 1` by that target's full norm) or escape it (and miss every
/// target of norm `<= 1` by `|a|^n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDimCheck {
    pub n: u64,
    pub target: String,
    pub distance: NormExp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteDimReport {
    pub scalar_norm: NormExp,
    pub bounded_orbit: bool,
    pub checks: Vec<FiniteDimCheck>,
    /// Least distance observed; certified `> 1`.
    pub separation: NormExp,
}

pub fn finite_dim_obstruction(
    a: &PadicScalar,
    n_max: u64,
) -> Result<FiniteDimReport, DynamicsError> {
    if a.is_zero() {
        return Err(DynamicsError::ZeroScalar);
    }
    let f = FieldConfig::with_prime(a.prime())
        .map_err(|e| DynamicsError::ParameterViolation(e.to_string()))?;
    let bounded = a.norm() <= NormExp::Pow(0);
    // Bounded orbits are tested against escaping targets and vice versa.
    let targets: Vec<PadicScalar> = if bounded {
        vec![
            f.p_power(-1),
            f.p_power(-3),
            f.from_int(1 + f.prime() as i64).mul(&f.p_power(-2)),
        ]
    } else {
        vec![f.zero(), f.one(), f.p_power(1), f.from_int(3)]
    };

    let mut checks = Vec::new();
    let mut separation: Option<NormExp> = None;
    let mut power = f.one();
    for n in 0..=n_max {
        if n > 0 {
            power = power.mul(a);
        }
        // In the escaping branch the power only clears the unit ball from
        // n = 1 on (a^0 = 1 may *be* a target).
        if !bounded && n == 0 {
            continue;
        }
        for z in &targets {
            let distance = power.sub(z).norm();
            if distance <= NormExp::Pow(0) {
                return Err(DynamicsError::CertificationFailed(format!(
                    "power a^{n} came within the unit ball of {z}"
                )));
            }
            separation = Some(match separation {
                Some(s) => s.min(distance),
                None => distance,
            });
            checks.push(FiniteDimCheck {
                n,
                target: z.to_string(),
                distance,
            });
        }
    }

    Ok(FiniteDimReport {
        scalar_norm: a.norm(),
        bounded_orbit: bounded,
        checks,
        separation: separation.expect("at least one check ran"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldConfig {
        FieldConfig::new(5, 16).unwrap()
    }

    #[test]
    fn dominant_lambda_on_a_basis_vector() {
        let f = f5();
        let x = FinVector::monomial(IndexDomain::Integers, 0, f.one()).unwrap();
        let w = obstruction_witness_lambda_mu(&f.one(), &f.from_int(5), &x, 40).unwrap();
        assert_eq!(w.branch, ObstructionBranch::DominantLambda { critical: 0 });
        assert_eq!(w.separation_target, 1);
        assert_eq!(w.steps.len(), 41);
        for s in &w.steps {
            assert_eq!(s.carried_norm, NormExp::Pow(0));
            assert!(s.competitor_norm < s.carried_norm);
        }
    }

    #[test]
    fn dominant_mu_travels_left() {
        let f = f5();
        // |mu| = 5 > 1 = |lambda|.
        let mu = f.from_rational(1, 5).unwrap();
        let x = FinVector::from_entries(
            IndexDomain::Integers,
            vec![
                (-1, f.from_int(5)),
                (0, f.from_int(2)),
                (2, f.from_int(3)),
                (3, f.from_int(25)),
            ],
        )
        .unwrap();
        // Peaks: norms are 1/5, 1, 1, 1/25 -> first peak 0, last peak 2.
        let w = obstruction_witness_lambda_mu(&f.one(), &mu, &x, 30).unwrap();
        assert_eq!(
            w.branch,
            ObstructionBranch::DominantMu {
                first_peak: 0,
                last_peak: 2
            }
        );
        assert_eq!(w.separation_target, 3);
        for s in &w.steps {
            assert_eq!(s.carried_norm, NormExp::Pow(s.n as i64));
            assert!(s.competitor_norm < s.carried_norm);
        }
    }

    #[test]
    fn equal_norms_with_tied_peaks_use_the_last_one() {
        let f = f5();
        // lambda = mu = 1, x = e_0 + e_3: both peaks norm 1; k = 3.
        let x = FinVector::from_entries(
            IndexDomain::Integers,
            vec![(0, f.one()), (3, f.one())],
        )
        .unwrap();
        let w = obstruction_witness_lambda_mu(&f.one(), &f.one(), &x, 25).unwrap();
        assert_eq!(w.branch, ObstructionBranch::DominantLambda { critical: 3 });
        assert_eq!(w.separation_target, 4);
    }

    #[test]
    fn zero_operator_branch() {
        let f = f5();
        let x = FinVector::monomial(IndexDomain::Integers, 2, f.from_int(7)).unwrap();
        let w = obstruction_witness_lambda_mu(&f.zero(), &f.zero(), &x, 5).unwrap();
        assert_eq!(w.branch, ObstructionBranch::ZeroOperator { critical: 2 });
        assert!(w.steps[1..]
            .iter()
            .all(|s| s.carried_norm == NormExp::Zero));
    }

    #[test]
    fn pure_shift_case_lambda_zero() {
        let f = f5();
        // lambda = 0, mu != 0: dominant-mu branch, exact translation.
        let mu = f.from_int(2);
        let x = FinVector::from_entries(
            IndexDomain::Integers,
            vec![(1, f.one()), (2, f.from_int(5))],
        )
        .unwrap();
        let w = obstruction_witness_lambda_mu(&f.zero(), &mu, &x, 12).unwrap();
        assert_eq!(
            w.branch,
            ObstructionBranch::DominantMu {
                first_peak: 1,
                last_peak: 1
            }
        );
    }

    #[test]
    fn zero_vector_is_rejected() {
        let f = f5();
        let x = FinVector::zero(IndexDomain::Integers);
        let err = obstruction_witness_lambda_mu(&f.one(), &f.one(), &x, 3).unwrap_err();
        assert_eq!(err, DynamicsError::ZeroVector);
    }

    #[test]
    fn one_sided_vectors_are_rejected() {
        let f = f5();
        let x = FinVector::monomial(IndexDomain::Naturals, 1, f.one()).unwrap();
        let err = obstruction_witness_lambda_mu(&f.one(), &f.one(), &x, 3).unwrap_err();
        assert!(matches!(err, DynamicsError::ParameterViolation(_)));
    }

    #[test]
    fn finite_dim_bounded_branch() {
        let f = f5();
        let rep = finite_dim_obstruction(&f.from_int(5), 30).unwrap();
        assert!(rep.bounded_orbit);
        assert!(rep.separation > NormExp::Pow(0));
        // Distances to the escaping targets equal the target norms.
        assert!(rep
            .checks
            .iter()
            .all(|c| c.distance >= NormExp::Pow(1)));
    }

    #[test]
    fn finite_dim_escaping_branch() {
        let f = f5();
        let rep = finite_dim_obstruction(&f.from_rational(1, 5).unwrap(), 30).unwrap();
        assert!(!rep.bounded_orbit);
        assert!(rep.separation > NormExp::Pow(0));
        // |a^n - w| = 5^n for bounded targets.
        assert!(rep.checks.iter().all(|c| c.distance == NormExp::Pow(c.n as i64)));
    }

    #[test]
    fn zero_scalar_is_rejected() {
        let f = f5();
        assert_eq!(
            finite_dim_obstruction(&f.zero(), 5).unwrap_err(),
            DynamicsError::ZeroScalar
        );
    }
}
