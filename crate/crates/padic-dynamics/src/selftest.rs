//! End-to-end robustness suite: every published guarantee of the library,
//! exercised at desk scale with deterministic pseudo-randomness and
//! independent oracles (brute-force scans, iterated products, material
//! re-scaling) rather than the code paths under test.
//!
//! Each check returns a [`CheckResult`] with a pass flag and a short
//! account of what was covered; [`run_all`] fans the checks out through the
//! batch mapper and reassembles them in fixed order, so reports are
//! byte-stable for a given seed and budget.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criteria::{
    decide_bilateral_hypercyclic, decide_bilateral_supercyclic, decide_lambda_mu,
    decide_unilateral, Answer, Property,
};
use crate::dynamics::{
    obstruction_witness_lambda_mu, scaling_sequence, transitivity_witness, verify_hc_criterion,
    verify_sc_criterion, ObstructionBranch, SequenceGen,
};
use crate::field::{FieldConfig, NormExp, PadicScalar};
use crate::ops::{right_inverse_identity_defect, OperatorSpec, WeightModel};
use crate::par;
use crate::seq::{Ball, FinVector, IndexDomain};

#[derive(Debug, Clone, Copy)]
pub struct SelftestConfig {
    pub seed: u64,
    /// Scales the randomized repeat counts; 100 is the published scale.
    pub budget_percent: u32,
}

impl Default for SelftestConfig {
    fn default() -> Self {
        SelftestConfig {
            seed: 0,
            budget_percent: 100,
        }
    }
}

impl SelftestConfig {
    fn scaled(&self, full: u64) -> u64 {
        ((full * self.budget_percent as u64) / 100).max(1)
    }
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub details: String,
}

impl CheckResult {
    fn from_failures(name: &'static str, covered: String, failures: Vec<String>) -> Self {
        if failures.is_empty() {
            CheckResult {
                name,
                passed: true,
                details: covered,
            }
        } else {
            let shown = failures.iter().take(3).cloned().collect::<Vec<_>>().join("; ");
            CheckResult {
                name,
                passed: false,
                details: format!("{} failure(s): {shown}", failures.len()),
            }
        }
    }
}

/// Run the whole suite. Checks are independent; order of the returned list
/// is fixed regardless of execution order.
pub fn run_all(cfg: &SelftestConfig) -> Vec<CheckResult> {
    type Check = fn(&SelftestConfig) -> CheckResult;
    let checks: Vec<Check> = vec![
        field_laws,
        power_oracle,
        right_inverse_identity,
        decider_scan_agreement,
        parameter_grid,
        witness_search,
        obstruction_certificates,
        scaling_balance,
        consistency_meta,
    ];
    par::map(checks, |c| c(cfg))
}

fn rng_for(cfg: &SelftestConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(salt))
}

/// Nonzero scalar with valuation exactly zero.
fn random_unit(f: &FieldConfig, rng: &mut ChaCha8Rng) -> PadicScalar {
    let p = f.prime() as i64;
    loop {
        let num = rng.gen_range(1..=499) * if rng.gen_bool(0.5) { 1 } else { -1 };
        let den = rng.gen_range(1..=499);
        if num % p != 0 && den % p != 0 {
            return f.from_rational(num, den).expect("nonzero denominator");
        }
    }
}

/// Nonzero scalar with valuation exactly `v`.
fn random_with_valuation(f: &FieldConfig, rng: &mut ChaCha8Rng, v: i64) -> PadicScalar {
    f.p_power(v).mul(&random_unit(f, rng))
}

/// Scalar with valuation uniform in `lo..=hi`, or zero with the given
/// probability.
fn random_scalar(
    f: &FieldConfig,
    rng: &mut ChaCha8Rng,
    lo: i64,
    hi: i64,
    zero_prob: f64,
) -> PadicScalar {
    if zero_prob > 0.0 && rng.gen_bool(zero_prob) {
        return f.zero();
    }
    let v = rng.gen_range(lo..=hi);
    random_with_valuation(f, rng, v)
}

/// Nonzero vector with support of the requested size inside `lo..=hi`.
fn random_vector(
    f: &FieldConfig,
    rng: &mut ChaCha8Rng,
    domain: IndexDomain,
    lo: i64,
    hi: i64,
    max_support: usize,
    val_lo: i64,
    val_hi: i64,
) -> FinVector {
    let mut x = FinVector::zero(domain);
    let size = rng.gen_range(1..=max_support);
    while x.support_len() < size {
        let idx = rng.gen_range(lo..=hi);
        if x.get(idx).is_none() {
            let v = rng.gen_range(val_lo..=val_hi);
            x.insert_add(idx, random_with_valuation(f, rng, v))
                .expect("index inside the domain");
        }
    }
    x
}

fn random_weight_list(
    f: &FieldConfig,
    rng: &mut ChaCha8Rng,
    len: usize,
) -> Vec<PadicScalar> {
    (0..len)
        .map(|_| {
            let v = rng.gen_range(-3..=3);
            random_with_valuation(f, rng, v)
        })
        .collect()
}

fn random_bilateral_weights(f: &FieldConfig, rng: &mut ChaCha8Rng) -> WeightModel {
    let fp = rng.gen_range(0..=3);
    let fl = rng.gen_range(1..=8);
    let bp = rng.gen_range(0..=3);
    let bl = rng.gen_range(1..=8);
    WeightModel::bilateral(
        random_weight_list(f, rng, fp),
        random_weight_list(f, rng, fl),
        random_weight_list(f, rng, bp),
        random_weight_list(f, rng, bl),
    )
    .expect("nonzero weights and nonempty periods")
}

fn period_val_sum(period: &[PadicScalar]) -> i64 {
    period
        .iter()
        .map(|a| a.valuation().expect("nonzero weight"))
        .sum()
}

/// Bilateral model whose period means (and their SC combination) are
/// bounded away from zero, so scans and deciders are both decisive.
fn decisive_bilateral_weights(f: &FieldConfig, rng: &mut ChaCha8Rng) -> WeightModel {
    loop {
        let w = random_bilateral_weights(f, rng);
        let fs = period_val_sum(w.forward_period());
        let bs = period_val_sum(w.backward_period());
        let fl = w.forward_period().len() as i64;
        let bl = w.backward_period().len() as i64;
        if fs != 0 && bs != 0 && fs * bl - bs * fl != 0 {
            return w;
        }
    }
}

// ---------------------------------------------------------------------------
// 1. Field laws.
// ---------------------------------------------------------------------------

/// Norm multiplicativity, the strong triangle inequality, and its equality
/// case on random scalar pairs over p = 2, 5, 7 at precision 64.
pub fn field_laws(cfg: &SelftestConfig) -> CheckResult {
    let per_prime = cfg.scaled(3400);
    let mut failures = Vec::new();
    for (pi, p) in [2u64, 5, 7].into_iter().enumerate() {
        let f = FieldConfig::new(p, 64).expect("prime");
        let mut rng = rng_for(cfg, 0x01 + pi as u64);
        for i in 0..per_prime {
            let x = random_scalar(&f, &mut rng, -6, 6, 0.05);
            let y = random_scalar(&f, &mut rng, -6, 6, 0.05);
            if x.mul(&y).norm() != x.norm() * y.norm() {
                failures.push(format!("p={p} case {i}: |xy| != |x||y|"));
            }
            let bound = x.norm().max(y.norm());
            for (label, s) in [("x+y", x.add(&y)), ("x-y", x.sub(&y))] {
                if s.norm() > bound {
                    failures.push(format!("p={p} case {i}: |{label}| above the max"));
                }
                if x.norm() != y.norm() && s.norm() != bound {
                    failures.push(format!(
                        "p={p} case {i}: equality case failed for {label}"
                    ));
                }
            }
        }
    }
    CheckResult::from_failures(
        "field-laws",
        format!(
            "{} pairs per prime over p in {{2, 5, 7}}: multiplicativity, ultrametric bound, \
             equality case — all exact",
            per_prime
        ),
        failures,
    )
}

// ---------------------------------------------------------------------------
// 2. Closed power forms against iterated application.
// ---------------------------------------------------------------------------

/// `apply_power` must equal naked iteration of `apply`, exactly, across
/// every operator kind.
pub fn power_oracle(cfg: &SelftestConfig) -> CheckResult {
    let cases = cfg.scaled(210);
    let f = FieldConfig::new(5, 64).expect("prime");
    let mut rng = rng_for(cfg, 0x02);
    let mut failures = Vec::new();
    for i in 0..cases {
        let op = match i % 10 {
            0 => OperatorSpec::Identity,
            1 => OperatorSpec::ScalarMul(random_scalar(&f, &mut rng, -3, 3, 0.1)),
            2 => OperatorSpec::unilateral_backward(random_unilateral_weights(&f, &mut rng))
                .expect("valid weights"),
            3 => OperatorSpec::bilateral_backward(random_bilateral_weights(&f, &mut rng))
                .expect("valid weights"),
            4 => OperatorSpec::forward_shift(random_unilateral_weights(&f, &mut rng)),
            5 => OperatorSpec::forward_shift(random_bilateral_weights(&f, &mut rng)),
            6 => OperatorSpec::ForwardShiftBilateral,
            7 => OperatorSpec::lambda_mu(
                random_scalar(&f, &mut rng, -3, 3, 0.1),
                random_scalar(&f, &mut rng, -3, 3, 0.1),
                IndexDomain::Naturals,
            ),
            8 => OperatorSpec::lambda_mu(
                random_scalar(&f, &mut rng, -3, 3, 0.1),
                random_scalar(&f, &mut rng, -3, 3, 0.1),
                IndexDomain::Integers,
            ),
            _ => OperatorSpec::right_inverse_lambda_mu(
                random_scalar(&f, &mut rng, -3, 3, 0.1),
                random_scalar(&f, &mut rng, -3, 3, 0.0),
            )
            .expect("nonzero mu"),
        };
        let domain = op.domain().unwrap_or(IndexDomain::Integers);
        let (lo, hi) = match domain {
            IndexDomain::Naturals => (1, 40),
            IndexDomain::Integers => (-20, 20),
        };
        let x = random_vector(&f, &mut rng, domain, lo, hi, 20, -3, 3);
        let n = rng.gen_range(0..=30);
        let closed = match op.apply_power(n, &x) {
            Ok(v) => v,
            Err(e) => {
                failures.push(format!("case {i}: apply_power failed: {e}"));
                continue;
            }
        };
        let mut iterated = x.clone();
        for _ in 0..n {
            iterated = op.apply(&iterated).expect("apply after apply_power succeeded");
        }
        if closed != iterated {
            failures.push(format!("case {i}: {op} power {n} disagrees with iteration"));
        }
    }
    CheckResult::from_failures(
        "power-oracle",
        format!("{cases} random (operator, vector, n <= 30) cases, every kind: exact equality"),
        failures,
    )
}

fn random_unilateral_weights(f: &FieldConfig, rng: &mut ChaCha8Rng) -> WeightModel {
    let pl = rng.gen_range(0..=3);
    let fl = rng.gen_range(1..=4);
    WeightModel::unilateral(random_weight_list(f, rng, pl), random_weight_list(f, rng, fl))
        .expect("nonzero weights and nonempty period")
}

// ---------------------------------------------------------------------------
// 3. Right-inverse identity on the support window.
// ---------------------------------------------------------------------------

/// Applying `lambda I + mu B` after its series right inverse returns the
/// input exactly on its whole support; the only discrepancy is the single
/// predicted boundary term above it (absent when `lambda = 0`).
pub fn right_inverse_identity(cfg: &SelftestConfig) -> CheckResult {
    let cases = cfg.scaled(520);
    let f = FieldConfig::new(5, 64).expect("prime");
    let mut rng = rng_for(cfg, 0x03);
    let mut failures = Vec::new();
    for i in 0..cases {
        let lambda = random_scalar(&f, &mut rng, -3, 3, 0.1);
        let mu = random_scalar(&f, &mut rng, -3, 3, 0.0);
        let x = random_vector(&f, &mut rng, IndexDomain::Naturals, 1, 50, 10, -3, 3);
        let top = x.max_index().expect("nonzero vector") + 1;
        let (diff, predicted) = match right_inverse_identity_defect(&lambda, &mu, &x) {
            Ok(pair) => pair,
            Err(e) => {
                failures.push(format!("case {i}: defect computation failed: {e}"));
                continue;
            }
        };
        if diff != predicted {
            failures.push(format!("case {i}: defect differs from the predicted boundary term"));
        }
        if diff.support().any(|j| j != top) {
            failures.push(format!("case {i}: defect leaked below the boundary index {top}"));
        }
        if lambda.is_zero() && !diff.is_zero() {
            failures.push(format!("case {i}: lambda = 0 must give the exact identity"));
        }
    }
    CheckResult::from_failures(
        "right-inverse-identity",
        format!(
            "{cases} vectors with support in [1, 50]: T(Sx) = x on the support, boundary \
             defect exactly lambda (Sx)_top e_top, zero when lambda = 0"
        ),
        failures,
    )
}

// ---------------------------------------------------------------------------
// 4. Closed-form deciders against brute-force valuation scans.
// ---------------------------------------------------------------------------

const SCAN_LEN: u64 = 100_000;
const SCAN_THRESHOLD: i64 = 100;

/// Does the running valuation sum stay at or below `-threshold`
/// (resp. at or above `+threshold`) over the entire second half of the
/// scan? With period means bounded away from zero this is a faithful
/// divergence test.
fn scan_tail_extreme(sums: impl Iterator<Item = i64>, len: u64) -> (i64, i64) {
    let half = len / 2;
    let mut tail_max = i64::MIN;
    let mut tail_min = i64::MAX;
    for (idx, s) in sums.enumerate() {
        if idx as u64 + 1 > half {
            tail_max = tail_max.max(s);
            tail_min = tail_min.min(s);
        }
    }
    (tail_min, tail_max)
}

fn forward_sums<'a>(w: &'a WeightModel) -> impl Iterator<Item = i64> + 'a {
    let mut s = 0i64;
    (1..=SCAN_LEN as i64).map(move |n| {
        s += w.weight_at(n).expect("forward index").valuation().expect("nonzero");
        s
    })
}

fn backward_sums<'a>(w: &'a WeightModel) -> impl Iterator<Item = i64> + 'a {
    let mut s = 0i64;
    (1..=SCAN_LEN as i64).map(move |j| {
        s += w.weight_at(1 - j).expect("backward index").valuation().expect("nonzero");
        s
    })
}

/// Deciders for the three weight characterizations against partial-sum
/// scans to `n = 100000` on models with decisive means.
pub fn decider_scan_agreement(cfg: &SelftestConfig) -> CheckResult {
    let models = cfg.scaled(110);
    let f = FieldConfig::new(5, 64).expect("prime");
    let mut rng = rng_for(cfg, 0x04);
    let inputs: Vec<WeightModel> = (0..models)
        .map(|_| decisive_bilateral_weights(&f, &mut rng))
        .collect();
    let failures: Vec<String> = par::map(inputs.into_iter().enumerate().collect(), |(i, w)| {
        let mut local = Vec::new();
        // Independent scans.
        let (_, fwd_tail_max) = scan_tail_extreme(forward_sums(&w), SCAN_LEN);
        let (bwd_tail_min, _) = scan_tail_extreme(backward_sums(&w), SCAN_LEN);
        let diff = {
            let mut fs = forward_sums(&w);
            let mut bs = backward_sums(&w);
            let (_, m) = scan_tail_extreme(
                (0..SCAN_LEN).map(|_| fs.next().unwrap() - bs.next().unwrap()),
                SCAN_LEN,
            );
            m
        };
        let scan_hc = fwd_tail_max <= -SCAN_THRESHOLD && bwd_tail_min >= SCAN_THRESHOLD;
        let scan_sc = diff <= -SCAN_THRESHOLD;

        let hc = decide_bilateral_hypercyclic(&w).expect("bilateral model");
        let sc = decide_bilateral_supercyclic(&w).expect("bilateral model");
        if (hc.answer == Answer::Yes) != scan_hc {
            local.push(format!("model {i}: bilateral HC decider disagrees with the scan"));
        }
        if (sc.answer == Answer::Yes) != scan_sc {
            local.push(format!("model {i}: bilateral SC decider disagrees with the scan"));
        }

        // Unilateral shift built from the forward side.
        let uni = WeightModel::unilateral(
            w.forward_prefix().to_vec(),
            w.forward_period().to_vec(),
        )
        .expect("forward side is a valid unilateral model");
        let uni_hc = decide_unilateral(&uni, Property::Hypercyclic).expect("unilateral model");
        if (uni_hc.answer == Answer::Yes) != (fwd_tail_max <= -SCAN_THRESHOLD) {
            local.push(format!("model {i}: unilateral HC decider disagrees with the scan"));
        }
        local
    })
    .into_iter()
    .flatten()
    .collect();
    CheckResult::from_failures(
        "decider-scan-agreement",
        format!(
            "{models} prefix+periodic weight models (period <= 8, valuations in [-3, 3], \
             decisive means) against partial-sum scans to n = {SCAN_LEN}"
        ),
        failures,
    )
}

// ---------------------------------------------------------------------------
// 5. The (lambda, mu) valuation grid.
// ---------------------------------------------------------------------------

/// Deciders across the full valuation grid `[-3, 3]^2` and criterion
/// verification (depth 40, basis bound 20 at full budget) passing exactly
/// on Yes cells.
pub fn parameter_grid(cfg: &SelftestConfig) -> CheckResult {
    let depth = cfg.scaled(40).max(4);
    let basis = cfg.scaled(20).max(2);
    let f = FieldConfig::new(5, 64).expect("prime");
    let cells: Vec<(i64, i64)> = (-3..=3)
        .flat_map(|vl| (-3..=3).map(move |vm| (vl, vm)))
        .collect();
    let total = cells.len();
    let failures: Vec<String> = par::map(cells, |(vl, vm)| {
        let mut local = Vec::new();
        let lambda = f.p_power(vl);
        let mu = f.p_power(vm);
        let expected_hc = vl > 0 && vm < 0;
        let expected_sc = vl > vm;

        let hc = decide_lambda_mu(&lambda, &mu, IndexDomain::Naturals, Property::Hypercyclic);
        if (hc.answer == Answer::Yes) != expected_hc {
            local.push(format!("cell ({vl}, {vm}): one-sided HC verdict wrong"));
        }
        let sc = decide_lambda_mu(&lambda, &mu, IndexDomain::Naturals, Property::Supercyclic);
        if (sc.answer == Answer::Yes) != expected_sc {
            local.push(format!("cell ({vl}, {vm}): one-sided SC verdict wrong"));
        }
        for prop in [Property::Hypercyclic, Property::Supercyclic] {
            let z = decide_lambda_mu(&lambda, &mu, IndexDomain::Integers, prop);
            if z.answer != Answer::No {
                local.push(format!("cell ({vl}, {vm}): two-sided {prop} must be No"));
            }
        }

        let op = OperatorSpec::lambda_mu(lambda.clone(), mu.clone(), IndexDomain::Naturals);
        let inv = OperatorSpec::right_inverse_lambda_mu(lambda, mu).expect("nonzero mu");
        match verify_hc_criterion(&op, &inv, SequenceGen::identity(), depth, basis) {
            Ok(rep) => {
                if rep.pass != expected_hc {
                    local.push(format!(
                        "cell ({vl}, {vm}): HC criterion verification pass={} expected={}",
                        rep.pass, expected_hc
                    ));
                }
            }
            Err(e) => local.push(format!("cell ({vl}, {vm}): HC verification error: {e}")),
        }
        match verify_sc_criterion(&op, &inv, SequenceGen::identity(), depth, basis) {
            Ok(rep) => {
                if rep.pass != expected_sc {
                    local.push(format!(
                        "cell ({vl}, {vm}): SC criterion verification pass={} expected={}",
                        rep.pass, expected_sc
                    ));
                }
            }
            Err(e) => local.push(format!("cell ({vl}, {vm}): SC verification error: {e}")),
        }
        local
    })
    .into_iter()
    .flatten()
    .collect();
    CheckResult::from_failures(
        "parameter-grid",
        format!(
            "{total} cells (v(lambda), v(mu)) in [-3, 3]^2: verdict regions and criterion \
             verification at depth {depth}, basis bound {basis}"
        ),
        failures,
    )
}

// ---------------------------------------------------------------------------
// 6. Transitivity witnesses on random ball pairs.
// ---------------------------------------------------------------------------

fn hypercyclic_roster(f: &FieldConfig) -> Vec<(String, OperatorSpec, OperatorSpec)> {
    let mut roster = Vec::new();
    // Every HC-Yes cell of the valuation grid.
    for vl in 1..=3 {
        for vm in -3..=-1 {
            let lambda = f.p_power(vl);
            let mu = f.p_power(vm);
            roster.push((
                format!("lambda-mu v=({vl}, {vm})"),
                OperatorSpec::lambda_mu(lambda.clone(), mu.clone(), IndexDomain::Naturals),
                OperatorSpec::right_inverse_lambda_mu(lambda, mu).expect("nonzero mu"),
            ));
        }
    }
    // Expanding unilateral shift.
    let uni = WeightModel::constant(IndexDomain::Naturals, f.from_rational(1, 5).expect("ok"))
        .expect("nonzero weight");
    roster.push((
        "unilateral shift |a| = 5".to_string(),
        OperatorSpec::unilateral_backward(uni.clone()).expect("valid"),
        OperatorSpec::forward_shift(uni),
    ));
    // Bilateral shift with shrinking forward and growing backward products.
    let bil = WeightModel::bilateral(
        vec![],
        vec![f.from_rational(1, 5).expect("ok")],
        vec![],
        vec![f.from_int(5)],
    )
    .expect("valid");
    roster.push((
        "bilateral shift v = (-1 | +1)".to_string(),
        OperatorSpec::bilateral_backward(bil.clone()).expect("valid"),
        OperatorSpec::forward_shift(bil),
    ));
    roster
}

fn random_ball(f: &FieldConfig, rng: &mut ChaCha8Rng, domain: IndexDomain) -> Ball {
    let (lo, hi) = match domain {
        IndexDomain::Naturals => (1, 12),
        IndexDomain::Integers => (-6, 6),
    };
    let center = random_vector(f, rng, domain, lo, hi, 5, -3, 3);
    let radius = NormExp::Pow(rng.gen_range(-6..=1));
    Ball::new(center, radius, rng.gen_bool(0.5)).expect("positive radius")
}

/// For every hypercyclic operator in the roster and random ball pairs, a
/// witness is found within `n <= 1000` and re-verified from scratch.
pub fn witness_search(cfg: &SelftestConfig) -> CheckResult {
    let pairs = cfg.scaled(50);
    let f = FieldConfig::new(5, 64).expect("prime");
    let roster = hypercyclic_roster(&f);
    let total_ops = roster.len();
    let failures: Vec<String> = par::map(
        roster.into_iter().enumerate().collect(),
        |(op_idx, (name, op, inv))| {
            let mut local = Vec::new();
            let mut rng = rng_for(cfg, 0x06 + op_idx as u64);
            let domain = op.domain().expect("roster operators have fixed domains");
            for i in 0..pairs {
                let u = random_ball(&f, &mut rng, domain);
                let v = random_ball(&f, &mut rng, domain);
                match transitivity_witness(&op, &inv, &u, &v, 1000) {
                    Ok(w) => {
                        let replay = op
                            .apply_power(w.n, &w.point)
                            .expect("witness image recomputation");
                        let ok = u.contains(&w.point).expect("domain match")
                            && v.contains(&w.image).expect("domain match")
                            && replay == w.image;
                        if !ok {
                            local.push(format!("{name}, pair {i}: witness failed re-verification"));
                        }
                    }
                    Err(e) => local.push(format!("{name}, pair {i}: {e}")),
                }
            }
            local
        },
    )
    .into_iter()
    .flatten()
    .collect();
    CheckResult::from_failures(
        "witness-search",
        format!(
            "{pairs} random ball pairs (radius >= p^-6, centers with support <= 5) against \
             each of {total_ops} hypercyclic operators, witnesses re-verified from scratch"
        ),
        failures,
    )
}

// ---------------------------------------------------------------------------
// 7. Obstruction certificates.
// ---------------------------------------------------------------------------

/// Dominant-lambda separation certificates on random two-sided vectors:
/// the carried-norm identity and the strict competitor gap hold at every
/// stage to 100, cross-checked against the closed power form.
pub fn obstruction_certificates(cfg: &SelftestConfig) -> CheckResult {
    let count = cfg.scaled(50);
    let f = FieldConfig::new(5, 64).expect("prime");
    let mut rng = rng_for(cfg, 0x07);
    let mut failures = Vec::new();
    for i in 0..count {
        let vl = rng.gen_range(-3..=3);
        let lambda = random_with_valuation(&f, &mut rng, vl);
        // |mu| <= |lambda|, occasionally mu = 0.
        let mu = if rng.gen_bool(0.1) {
            f.zero()
        } else {
            let vm = rng.gen_range(vl..=3);
            random_with_valuation(&f, &mut rng, vm)
        };
        let x = random_vector(&f, &mut rng, IndexDomain::Integers, -10, 10, 8, -3, 3);
        let w = match obstruction_witness_lambda_mu(&lambda, &mu, &x, 100) {
            Ok(w) => w,
            Err(e) => {
                failures.push(format!("case {i}: certification failed: {e}"));
                continue;
            }
        };
        let ObstructionBranch::DominantLambda { critical } = w.branch else {
            failures.push(format!("case {i}: expected the dominant-lambda branch"));
            continue;
        };
        if w.separation_target != critical + 1 || w.steps.len() != 101 {
            failures.push(format!("case {i}: malformed certificate"));
            continue;
        }
        // Independent spot checks through the closed power form.
        let op = OperatorSpec::lambda_mu(lambda.clone(), mu.clone(), IndexDomain::Integers);
        for n in [1u64, 47, 100] {
            let y = op.apply_power(n, &x).expect("power");
            let expected = lambda.norm().pow(n) * x.sup_norm();
            if y.coeff_norm(critical) != expected || y.coeff_norm(critical + 1) >= expected {
                failures.push(format!("case {i}: spot check failed at n = {n}"));
            }
        }
    }
    CheckResult::from_failures(
        "obstruction-certificates",
        format!(
            "{count} random two-sided vectors with |lambda| >= |mu|: carried-norm identity and \
             strict gap to stage 100, scalar quantifier discharged symbolically"
        ),
        failures,
    )
}

// ---------------------------------------------------------------------------
// 8. Scaling balance.
// ---------------------------------------------------------------------------

/// On pairs with `||x_n|| ||y_n|| = p^{-n}` the constructed scalings drive
/// `max(||lambda_n x_n||, ||lambda_n^{-1} y_n||)` below `p^{-m}` for all
/// `n >= 2m + 2`, for every `m <= 10`.
pub fn scaling_balance(cfg: &SelftestConfig) -> CheckResult {
    let f = FieldConfig::new(5, 64).expect("prime");
    let mut rng = rng_for(cfg, 0x08);
    let mut failures = Vec::new();
    let pairs: Vec<(FinVector, FinVector)> = (1..=30)
        .map(|n| {
            let e = rng.gen_range(-3..=3);
            let x = FinVector::monomial(
                IndexDomain::Naturals,
                rng.gen_range(1..=9),
                random_with_valuation(&f, &mut rng, n - e),
            )
            .expect("valid index");
            let y = FinVector::monomial(
                IndexDomain::Naturals,
                rng.gen_range(1..=9),
                random_with_valuation(&f, &mut rng, e),
            )
            .expect("valid index");
            (x, y)
        })
        .collect();
    match scaling_sequence(&pairs) {
        Ok(alphas) => {
            let maxima: Vec<NormExp> = pairs
                .iter()
                .zip(&alphas)
                .map(|((x, y), &alpha)| {
                    let lx = x.scale(&f.p_power(alpha)).sup_norm();
                    let ly = y.scale(&f.p_power(-alpha)).sup_norm();
                    lx.max(ly)
                })
                .collect();
            for m in 0..=10u32 {
                let from = (2 * m + 2) as usize; // pairs are 1-based
                for (pos, norm) in maxima.iter().enumerate() {
                    let n = pos + 1;
                    if n >= from && *norm > NormExp::Pow(-(m as i64)) {
                        failures.push(format!(
                            "n = {n}: max norm {norm} above p^-{m} despite n >= {from}"
                        ));
                    }
                }
            }
        }
        Err(e) => failures.push(format!("constructor rejected valid input: {e}")),
    }
    CheckResult::from_failures(
        "scaling-balance",
        "30 pairs with ||x_n|| ||y_n|| = p^-n: balanced maxima below p^-m from n = 2m+2 on, \
         m <= 10"
            .to_string(),
        failures,
    )
}

// ---------------------------------------------------------------------------
// 9. Cross-module consistency.
// ---------------------------------------------------------------------------

/// Hypercyclic implies supercyclic; hypercyclic implies operator norm
/// above one; supercyclic verdicts are invariant under scaling the whole
/// weight sequence.
pub fn consistency_meta(cfg: &SelftestConfig) -> CheckResult {
    let models = cfg.scaled(60);
    let f = FieldConfig::new(5, 64).expect("prime");
    let mut rng = rng_for(cfg, 0x09);
    let mut failures = Vec::new();

    for i in 0..models {
        let w = decisive_bilateral_weights(&f, &mut rng);
        let hc = decide_bilateral_hypercyclic(&w).expect("bilateral");
        let sc = decide_bilateral_supercyclic(&w).expect("bilateral");
        if hc.answer == Answer::Yes && sc.answer != Answer::Yes {
            failures.push(format!("model {i}: HC-Yes without SC-Yes"));
        }
        if hc.answer == Answer::Yes {
            let op = OperatorSpec::bilateral_backward(w.clone()).expect("valid");
            let norm = op.operator_norm().expect("shift norms are defined");
            if norm <= NormExp::Pow(0) {
                failures.push(format!("model {i}: HC-Yes with operator norm {norm}"));
            }
        }
        // Scalar invariance of the SC verdict.
        let cv = rng.gen_range(-2..=2);
        let c = random_with_valuation(&f, &mut rng, cv);
        let scaled = scale_weights(&w, &c);
        let sc_scaled = decide_bilateral_supercyclic(&scaled).expect("bilateral");
        if sc.answer != sc_scaled.answer {
            failures.push(format!("model {i}: SC verdict changed under weight scaling"));
        }

        // The unilateral shift from the forward side.
        let uni = WeightModel::unilateral(
            w.forward_prefix().to_vec(),
            w.forward_period().to_vec(),
        )
        .expect("valid");
        let uni_hc = decide_unilateral(&uni, Property::Hypercyclic).expect("unilateral");
        let uni_sc = decide_unilateral(&uni, Property::Supercyclic).expect("unilateral");
        if uni_hc.answer == Answer::Yes && uni_sc.answer != Answer::Yes {
            failures.push(format!("model {i}: unilateral HC-Yes without SC-Yes"));
        }
        if uni_hc.answer == Answer::Yes {
            let op = OperatorSpec::unilateral_backward(uni.clone()).expect("valid");
            if op.operator_norm().expect("defined") <= NormExp::Pow(0) {
                failures.push(format!("model {i}: unilateral HC-Yes with norm <= 1"));
            }
        }
    }

    // The lambda-mu grid obeys the same implications.
    for vl in -3..=3 {
        for vm in -3..=3 {
            let lambda = f.p_power(vl);
            let mu = f.p_power(vm);
            let hc = decide_lambda_mu(&lambda, &mu, IndexDomain::Naturals, Property::Hypercyclic);
            let sc = decide_lambda_mu(&lambda, &mu, IndexDomain::Naturals, Property::Supercyclic);
            if hc.answer == Answer::Yes && sc.answer != Answer::Yes {
                failures.push(format!("cell ({vl}, {vm}): HC-Yes without SC-Yes"));
            }
            if hc.answer == Answer::Yes {
                let op = OperatorSpec::lambda_mu(lambda, mu, IndexDomain::Naturals);
                if op.operator_norm().expect("defined") <= NormExp::Pow(0) {
                    failures.push(format!("cell ({vl}, {vm}): HC-Yes with norm <= 1"));
                }
            }
        }
    }

    CheckResult::from_failures(
        "consistency-meta",
        format!(
            "{models} weight models plus the valuation grid: HC-Yes implies SC-Yes, HC-Yes \
             implies operator norm > 1, SC verdicts invariant under weight scaling"
        ),
        failures,
    )
}

fn scale_weights(w: &WeightModel, c: &PadicScalar) -> WeightModel {
    let scale = |list: &[PadicScalar]| list.iter().map(|a| a.mul(c)).collect::<Vec<_>>();
    WeightModel::bilateral(
        scale(w.forward_prefix()),
        scale(w.forward_period()),
        scale(w.backward_prefix()),
        scale(w.backward_period()),
    )
    .expect("scaling by a nonzero scalar preserves validity")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> SelftestConfig {
        SelftestConfig {
            seed: 7,
            budget_percent: 6,
        }
    }

    #[test]
    fn quick_field_laws() {
        let r = field_laws(&quick());
        assert!(r.passed, "{}", r.details);
    }

    #[test]
    fn quick_power_oracle() {
        let r = power_oracle(&quick());
        assert!(r.passed, "{}", r.details);
    }

    #[test]
    fn quick_right_inverse() {
        let r = right_inverse_identity(&quick());
        assert!(r.passed, "{}", r.details);
    }

    #[test]
    fn quick_scan_agreement() {
        let r = decider_scan_agreement(&SelftestConfig {
            seed: 7,
            budget_percent: 3,
        });
        assert!(r.passed, "{}", r.details);
    }

    #[test]
    fn quick_witnesses() {
        let r = witness_search(&SelftestConfig {
            seed: 7,
            budget_percent: 4,
        });
        assert!(r.passed, "{}", r.details);
    }

    #[test]
    fn quick_obstructions() {
        let r = obstruction_certificates(&quick());
        assert!(r.passed, "{}", r.details);
    }

    #[test]
    fn quick_scaling() {
        let r = scaling_balance(&quick());
        assert!(r.passed, "{}", r.details);
    }

    #[test]
    fn quick_meta() {
        let r = consistency_meta(&quick());
        assert!(r.passed, "{}", r.details);
    }

    #[test]
    fn deterministic_across_runs() {
        let cfg = quick();
        let a = field_laws(&cfg);
        let b = field_laws(&cfg);
        assert_eq!(a.passed, b.passed);
        assert_eq!(a.details, b.details);
    }
}
