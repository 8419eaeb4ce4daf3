//! Scalar balancing for supercyclicity-style constructions: given pairs
//! `(x_n, y_n)` whose norm products shrink, pick powers of `p` that make
//! both `lambda_n x_n` and `lambda_n^{-1} y_n` small *simultaneously*.
//!
//! Returned is the valuation `alpha_n` of each `lambda_n = p^{alpha_n}`.
//! With `||x|| = p^{E_x}` and `||y|| = p^{E_y}` the balanced choice
//! `alpha = ceil((E_x - E_y) / 2)` gives
//!
//! ```text
//! max(||lambda x||, ||lambda^{-1} y||) = p^{ceil((E_x + E_y)/2)}
//!                                      <= p * sqrt(||x|| ||y||),
//! ```
//!
//! so the maxima tend to zero exactly as fast as the square root of the
//! products. Pairs with one zero member get a drifting exponent that sends
//! the surviving side to zero; a pair of zeros is immaterial and gets
//! `alpha = 0`.

use crate::seq::FinVector;

use super::DynamicsError;

/// Norm products must be (strictly) decreasing along the list wherever they
/// are nonzero, and may only vanish from some point on; otherwise the
/// offending position is reported.
pub fn scaling_sequence(pairs: &[(FinVector, FinVector)]) -> Result<Vec<i64>, DynamicsError> {
    // Validate the decay hypothesis first.
    let mut prev: Option<Option<i64>> = None; // None: not seen; Some(None): zero product
    for (pos, (x, y)) in pairs.iter().enumerate() {
        let cur = match (x.sup_norm().exponent(), y.sup_norm().exponent()) {
            (Some(ex), Some(ey)) => Some(ex + ey),
            _ => None,
        };
        if let Some(p) = prev {
            let ok = match (p, cur) {
                (Some(pe), Some(ce)) => ce < pe,
                (Some(_), None) => true,
                (None, None) => true,
                (None, Some(_)) => false,
            };
            if !ok {
                return Err(DynamicsError::HypothesisViolated { position: pos });
            }
        }
        prev = Some(cur);
    }

    Ok(pairs
        .iter()
        .enumerate()
        .map(|(pos, (x, y))| {
            let n = pos as i64 + 1;
            match (x.sup_norm().exponent(), y.sup_norm().exponent()) {
                (Some(ex), Some(ey)) => div_ceil_2(ex - ey),
                // x = 0: only ||lambda^{-1} y|| matters; drive it to p^{-n}.
                (None, Some(ey)) => -ey - n,
                // y = 0: drive ||lambda x|| to p^{-n}.
                (Some(ex), None) => ex + n,
                (None, None) => 0,
            }
        })
        .collect())
}

fn div_ceil_2(q: i64) -> i64 {
    // Ceiling division by 2 for either sign.
    q.div_euclid(2) + q.rem_euclid(2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{FieldConfig, NormExp};
    use crate::seq::IndexDomain;

    fn f5() -> FieldConfig {
        FieldConfig::new(5, 16).unwrap()
    }

    fn vec_of_norm(f: &FieldConfig, e: i64) -> FinVector {
        // Single coordinate of norm 5^e.
        FinVector::monomial(IndexDomain::Naturals, 1, f.p_power(-e)).unwrap()
    }

    /// The guaranteed bound, checked materially by scaling actual vectors.
    fn check_balance(pairs: &[(FinVector, FinVector)], alphas: &[i64]) {
        let f = f5();
        for ((x, y), &alpha) in pairs.iter().zip(alphas) {
            let lambda = f.p_power(alpha);
            let lambda_inv = f.p_power(-alpha);
            let mx = x.scale(&lambda).sup_norm();
            let my = y.scale(&lambda_inv).sup_norm();
            let max = mx.max(my);
            let product = x.sup_norm() * y.sup_norm();
            match product {
                NormExp::Zero => {}
                NormExp::Pow(e) => {
                    // max <= p^(e/2 + 1) <=> 2*max_exp <= e + 2.
                    let me = max.exponent().expect("nonzero side");
                    assert!(2 * me <= e + 2, "alpha {alpha} exps {me} vs {e}");
                }
            }
        }
    }

    #[test]
    fn balanced_pairs_meet_the_square_root_bound() {
        let f = f5();
        let pairs: Vec<(FinVector, FinVector)> = (0..12)
            .map(|n| {
                // ||x|| = 5^{-n}, ||y|| = 1: product 5^{-n}.
                (vec_of_norm(&f, -n), vec_of_norm(&f, 0))
            })
            .collect();
        let alphas = scaling_sequence(&pairs).unwrap();
        check_balance(&pairs, &alphas);
        // Balanced exponent: max norm = p^{ceil(-n/2)}.
        for (n, &alpha) in alphas.iter().enumerate() {
            assert_eq!(alpha, div_ceil_2(-(n as i64)));
        }
    }

    #[test]
    fn lopsided_pairs_still_balance() {
        let f = f5();
        // ||x|| = 5^{n}, ||y|| = 5^{-3n}: product 5^{-2n} decreasing.
        let pairs: Vec<(FinVector, FinVector)> = (0..10)
            .map(|n| (vec_of_norm(&f, n), vec_of_norm(&f, -3 * n)))
            .collect();
        let alphas = scaling_sequence(&pairs).unwrap();
        check_balance(&pairs, &alphas);
    }

    #[test]
    fn zero_members_get_drifting_exponents() {
        let f = f5();
        let zero = FinVector::zero(IndexDomain::Naturals);
        let pairs = vec![
            (zero.clone(), vec_of_norm(&f, 2)),
            (zero.clone(), vec_of_norm(&f, 2)),
            (vec_of_norm(&f, 0), zero.clone()),
            (zero.clone(), zero.clone()),
        ];
        let alphas = scaling_sequence(&pairs).unwrap();
        // x = 0 at position 0 (n = 1): alpha = -2 - 1.
        assert_eq!(alphas[0], -3);
        assert_eq!(alphas[1], -4);
        // y = 0 at position 2 (n = 3): alpha = 0 + 3.
        assert_eq!(alphas[2], 3);
        assert_eq!(alphas[3], 0);
        // The surviving sides decay through p^{-n}.
        let l1 = f.p_power(-alphas[0]);
        assert_eq!(
            pairs[0].1.scale(&l1).sup_norm(),
            NormExp::Pow(-1)
        );
        let l3 = f.p_power(alphas[2]);
        assert_eq!(pairs[2].0.scale(&l3).sup_norm(), NormExp::Pow(-3));
    }

    #[test]
    fn increasing_products_are_rejected() {
        let f = f5();
        let pairs = vec![
            (vec_of_norm(&f, 0), vec_of_norm(&f, -1)),
            (vec_of_norm(&f, 0), vec_of_norm(&f, -1)),
        ];
        let err = scaling_sequence(&pairs).unwrap_err();
        assert_eq!(err, DynamicsError::HypothesisViolated { position: 1 });
    }

    #[test]
    fn nonzero_after_zero_product_is_rejected() {
        let f = f5();
        let zero = FinVector::zero(IndexDomain::Naturals);
        let pairs = vec![
            (zero.clone(), vec_of_norm(&f, 0)),
            (vec_of_norm(&f, -5), vec_of_norm(&f, -5)),
        ];
        let err = scaling_sequence(&pairs).unwrap_err();
        assert_eq!(err, DynamicsError::HypothesisViolated { position: 1 });
    }

    #[test]
    fn empty_input_is_fine() {
        assert_eq!(scaling_sequence(&[]).unwrap(), Vec::<i64>::new());
    }
}
