//! Invariant-band construction for `T = lambda I + mu B` on one-sided
//! sequences in the regime `1 <= |lambda| < |mu|`.
//!
//! With `r = |lambda| / |mu| = p^{-d}` (`d >= 1`), the open set of
//! sequences whose `k`-th coordinate norm lies strictly inside
//! `(r^{3^k + 2}, r^{3^k})` is mapped into `lambda * (itself)` by `T`: the
//! gaps grow so fast that in `(Tx)_k = lambda x_k + mu x_{k+1}` the first
//! term always dominates. Members also keep `|x_1| > |x_2|`, while any
//! point of the open unit ball around `e_2` has `|x_2| = 1 > |x_1|`, so the
//! whole forward orbit of the band misses that ball: a topological
//! obstruction to dense orbits in this parameter regime.
//!
//! The check is material: a concrete band member with
//! `v(x_k) = d(3^k + 1)` is built, the dominance equalities and the scaled
//! band membership of every computed orbit point are verified in exact
//! arithmetic, and the distance to the excluded ball is computed outright.

use crate::field::{FieldConfig, NormExp, PadicScalar};
use crate::ops::OperatorSpec;
use crate::seq::{FinVector, IndexDomain};

use super::DynamicsError;

/// Valuation window certified for one coordinate of the sampled member:
/// `lower < valuation < upper` with `valuation = d(3^k + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandRow {
    pub k: i64,
    pub lower: i64,
    pub valuation: i64,
    pub upper: i64,
}

/// One certified orbit stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandStep {
    pub n: u64,
    /// `(|y_1|, |y_2|)`; certified strictly decreasing.
    pub head_norms: (NormExp, NormExp),
    /// `||y - e_2||`; certified `>= 1`.
    pub distance_from_target: NormExp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BandInvarianceReport {
    /// `d` with `|lambda|/|mu| = p^{-d}`.
    pub ratio_exponent: i64,
    pub k_max: i64,
    pub samples: u64,
    pub band_rows: Vec<BandRow>,
    /// `(k, |lambda x_k + mu x_{k+1}|)`, certified equal to `|lambda x_k|`.
    pub dominance: Vec<(i64, NormExp)>,
    pub steps: Vec<BandStep>,
}

/// Build the sample member, certify per-coordinate dominance, and walk
/// `samples` orbit steps certifying the scaled band structure and the
/// separation from the open unit ball around `e_2`.
pub fn band_invariance_check(
    lambda: &PadicScalar,
    mu: &PadicScalar,
    k_max: i64,
    samples: u64,
) -> Result<BandInvarianceReport, DynamicsError> {
    if lambda.prime() != mu.prime() {
        return Err(DynamicsError::ParameterViolation(
            "lambda and mu live in different fields".to_string(),
        ));
    }
    if lambda.norm() < NormExp::Pow(0) {
        return Err(DynamicsError::ParameterViolation(
            "need |lambda| >= 1".to_string(),
        ));
    }
    if mu.norm() <= lambda.norm() {
        return Err(DynamicsError::ParameterViolation(
            "need |mu| > |lambda|".to_string(),
        ));
    }
    if !(3..=10).contains(&k_max) {
        return Err(DynamicsError::ParameterViolation(
            "k_max must lie in 3..=10".to_string(),
        ));
    }
    if samples > 1000 {
        return Err(DynamicsError::ParameterViolation(
            "sample count capped at 1000".to_string(),
        ));
    }
    let v_lambda = lambda.valuation().expect("|lambda| >= 1 is nonzero");
    let v_mu = mu.valuation().expect("|mu| > |lambda| >= 1 is nonzero");
    let d = v_lambda - v_mu;
    debug_assert!(d >= 1);
    let deepest = 3i64.checked_pow(k_max as u32).expect("k_max <= 10");
    if d.checked_mul(deepest + 2).is_none() || d * (deepest + 2) > 20_000 {
        return Err(DynamicsError::ParameterViolation(
            "band exponents too large; reduce k_max or the valuation gap".to_string(),
        ));
    }

    let f = FieldConfig::with_prime(lambda.prime())
        .map_err(|e| DynamicsError::ParameterViolation(e.to_string()))?;

    // Sample member: v(x_k) = d(3^k + 1), strictly inside the band.
    let mut x = FinVector::zero(IndexDomain::Naturals);
    let mut band_rows = Vec::new();
    for k in 1..=k_max {
        let pow3 = 3i64.pow(k as u32);
        let val = d * (pow3 + 1);
        x.insert_add(k, f.p_power(val))?;
        let row = BandRow {
            k,
            lower: d * pow3,
            valuation: val,
            upper: d * (pow3 + 2),
        };
        let actual = x
            .get(k)
            .and_then(|c| c.valuation())
            .ok_or_else(|| DynamicsError::CertificationFailed("sample coordinate vanished".into()))?;
        if !(row.lower < actual && actual < row.upper) {
            return Err(DynamicsError::CertificationFailed(format!(
                "coordinate {k} left its band: {} not in ({}, {})",
                actual, row.lower, row.upper
            )));
        }
        band_rows.push(row);
    }

    // Dominance: |lambda x_k + mu x_{k+1}| = |lambda x_k|.
    let mut dominance = Vec::new();
    for k in 1..k_max {
        let head = lambda.mul(x.get(k).expect("sample support"));
        let tail = mu.mul(x.get(k + 1).expect("sample support"));
        let sum_norm = head.add(&tail).norm();
        if sum_norm != head.norm() {
            return Err(DynamicsError::CertificationFailed(format!(
                "dominance failed at coordinate {k}"
            )));
        }
        dominance.push((k, sum_norm));
    }

    // Orbit walk with scaled-band certification.
    let op = OperatorSpec::lambda_mu(lambda.clone(), mu.clone(), IndexDomain::Naturals);
    let e2 = FinVector::monomial(IndexDomain::Naturals, 2, f.one())?;
    let mut steps = Vec::new();
    let mut y = x.clone();
    for n in 0..=samples {
        if n > 0 {
            y = op.apply(&y)?;
        }
        let scale = lambda.norm().pow(n);
        for k in 1..=k_max {
            if y.coeff_norm(k) != scale * x.coeff_norm(k) {
                return Err(DynamicsError::CertificationFailed(format!(
                    "orbit point {n} left the scaled band at coordinate {k}"
                )));
            }
        }
        let head_norms = (y.coeff_norm(1), y.coeff_norm(2));
        if head_norms.0 <= head_norms.1 {
            return Err(DynamicsError::CertificationFailed(format!(
                "head norms stopped decreasing at stage {n}"
            )));
        }
        let distance_from_target = y.dist(&e2)?;
        if distance_from_target < NormExp::Pow(0) {
            return Err(DynamicsError::CertificationFailed(format!(
                "orbit point {n} entered the excluded ball"
            )));
        }
        steps.push(BandStep {
            n,
            head_norms,
            distance_from_target,
        });
    }

    Ok(BandInvarianceReport {
        ratio_exponent: d,
        k_max,
        samples,
        band_rows,
        dominance,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> FieldConfig {
        FieldConfig::new(5, 16).unwrap()
    }

    #[test]
    fn unit_lambda_with_expanding_mu() {
        let f = f5();
        // |lambda| = 1, |mu| = 5: d = 1.
        let rep =
            band_invariance_check(&f.one(), &f.from_rational(1, 5).unwrap(), 6, 4).unwrap();
        assert_eq!(rep.ratio_exponent, 1);
        assert_eq!(rep.band_rows.len(), 6);
        assert_eq!(rep.steps.len(), 5);
        for s in &rep.steps {
            assert!(s.distance_from_target >= NormExp::Pow(0));
            assert!(s.head_norms.0 > s.head_norms.1);
        }
        // |lambda| = 1: the band is literally invariant, step norms fixed.
        assert_eq!(rep.steps[0].head_norms, rep.steps[4].head_norms);
    }

    #[test]
    fn expanding_lambda_scales_the_band() {
        let f = f5();
        // |lambda| = 5, |mu| = 125: d = 2.
        let lambda = f.from_rational(1, 5).unwrap();
        let mu = f.from_rational(1, 125).unwrap();
        let rep = band_invariance_check(&lambda, &mu, 5, 3).unwrap();
        assert_eq!(rep.ratio_exponent, 2);
        // Head norm grows like 5^n from p^{-8}: v(x_1) = 2 * 4 = 8.
        assert_eq!(rep.steps[0].head_norms.0, NormExp::Pow(-8));
        assert_eq!(rep.steps[3].head_norms.0, NormExp::Pow(-5));
    }

    #[test]
    fn parameter_region_is_enforced() {
        let f = f5();
        // |lambda| < 1.
        assert!(matches!(
            band_invariance_check(&f.from_int(5), &f.from_rational(1, 5).unwrap(), 6, 2),
            Err(DynamicsError::ParameterViolation(_))
        ));
        // |mu| = |lambda|.
        assert!(matches!(
            band_invariance_check(&f.one(), &f.from_int(3), 6, 2),
            Err(DynamicsError::ParameterViolation(_))
        ));
        // Zero lambda.
        assert!(matches!(
            band_invariance_check(&f.zero(), &f.from_rational(1, 5).unwrap(), 6, 2),
            Err(DynamicsError::ParameterViolation(_))
        ));
        // Out-of-range depth.
        assert!(matches!(
            band_invariance_check(&f.one(), &f.from_rational(1, 5).unwrap(), 2, 2),
            Err(DynamicsError::ParameterViolation(_))
        ));
    }
}
