//! Executes a validated spec and assembles both report flavors.
//!
//! Every command produces a human-readable summary and a machine-readable
//! record stream (see [`crate::records`]); the caller decides where each
//! goes. Exit codes: `0` for a completed run, `2` for an inconclusive
//! witness search, `1` for any error.

use std::fmt;
use std::fmt::Write as _;

use padic_dynamics::criteria::{decide_operator, Answer, Certificate, Verdict};
use padic_dynamics::dynamics::{
    obstruction_witness_lambda_mu, orbit, transitivity_witness, verify_hc_criterion,
    verify_sc_criterion, CriterionReport, DynamicsError, ObstructionBranch, SequenceGen,
};
use padic_dynamics::field::{FieldConfig, NormExp, PadicScalar};
use padic_dynamics::ops::OperatorSpec;
use padic_dynamics::selftest::{run_all, SelftestConfig};
use padic_dynamics::seq::{Ball, IndexDomain};

use crate::experiment::{Command, ExperimentSpec};
use crate::records::{self, Records};

/// A runtime failure, already rendered with context.
#[derive(Debug)]
pub struct RunError(pub String);

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl<E: std::error::Error> From<E> for RunError {
    fn from(e: E) -> Self {
        RunError(e.to_string())
    }
}

/// Exit code for a completed run.
pub const EXIT_OK: i32 = 0;
/// Exit code for an inconclusive outcome (witness search exhausted).
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Debug)]
pub struct RunOutput {
    pub human: String,
    pub records: String,
    pub exit: i32,
}

/// Run the spec's command. `seed` and `budget` only matter for `selftest`
/// but are echoed into every report header so reruns are reproducible.
pub fn run(spec: &ExperimentSpec, seed: u64, budget: u32) -> Result<RunOutput, RunError> {
    let mut rec = Records::new();
    rec.push(
        "spec",
        &[
            ("command", spec.command.name().to_string()),
            ("seed", seed.to_string()),
            ("budget", budget.to_string()),
            ("prime", spec.field.prime().to_string()),
            ("precision", spec.field.precision().to_string()),
        ],
    );
    if let Some(op) = &spec.operator {
        push_operator_record(&mut rec, &spec.field, op);
    }

    match &spec.command {
        Command::Decide { property } => {
            let op = required_operator(spec)?;
            let verdict = decide_operator(op, *property)?;
            let mut human = format!("decide {} for {op}\n", verdict.property);
            let _ = writeln!(human, "verdict: {}", verdict.answer);
            let _ = writeln!(human, "rule: {}", verdict.rule);
            let _ = writeln!(human, "certificate: {}", verdict.certificate);
            let _ = writeln!(human, "justification: {}", verdict.justification);
            push_verdict_records(&mut rec, &verdict);
            Ok(RunOutput {
                human,
                records: rec.finish(),
                exit: EXIT_OK,
            })
        }
        Command::Orbit { vector, n_max } => {
            let op = required_operator(spec)?;
            let points = orbit(op, vector, *n_max)?;
            rec.push(
                "orbit",
                &[
                    ("n-max", n_max.to_string()),
                    ("vector", records::vector(vector)),
                ],
            );
            let mut human = format!("orbit of {vector} under {op}, n = 0..={n_max}\n");
            for pt in &points {
                let _ = writeln!(
                    human,
                    "n {:>4}  norm {:<8} {}",
                    pt.n,
                    pt.norm.to_string(),
                    pt.vector
                );
                rec.push(
                    "step",
                    &[
                        ("n", pt.n.to_string()),
                        ("norm", records::norm(pt.norm)),
                        ("vector", records::vector(&pt.vector)),
                    ],
                );
            }
            Ok(RunOutput {
                human,
                records: rec.finish(),
                exit: EXIT_OK,
            })
        }
        Command::Witness {
            center_u,
            radius_u,
            closed_u,
            center_v,
            radius_v,
            closed_v,
            n_max,
        } => {
            let op = required_operator(spec)?;
            let inv = derive_right_inverse(op)?;
            let u = Ball::new(center_u.clone(), NormExp::Pow(*radius_u), *closed_u)?;
            let v = Ball::new(center_v.clone(), NormExp::Pow(*radius_v), *closed_v)?;
            rec.push(
                "witness",
                &[
                    ("n-max", n_max.to_string()),
                    ("center-u", records::vector(center_u)),
                    ("radius-u", radius_u.to_string()),
                    ("closed-u", closed_u.to_string()),
                    ("center-v", records::vector(center_v)),
                    ("radius-v", radius_v.to_string()),
                    ("closed-v", closed_v.to_string()),
                ],
            );
            match transitivity_witness(op, &inv, &u, &v, *n_max) {
                Ok(w) => {
                    let mut human = format!(
                        "witness for {op}: T^n maps U into V at n = {}\n",
                        w.n
                    );
                    let _ = writeln!(human, "point: {}", w.point);
                    let _ = writeln!(human, "image: {}", w.image);
                    let _ = writeln!(
                        human,
                        "both memberships re-verified exactly ({} candidate(s) checked)",
                        w.candidates_tried
                    );
                    rec.push(
                        "outcome",
                        &[
                            ("status", "found".to_string()),
                            ("n", w.n.to_string()),
                            ("tried", w.candidates_tried.to_string()),
                        ],
                    );
                    rec.push("point", &[("vector", records::vector(&w.point))]);
                    rec.push("image", &[("vector", records::vector(&w.image))]);
                    Ok(RunOutput {
                        human,
                        records: rec.finish(),
                        exit: EXIT_OK,
                    })
                }
                Err(DynamicsError::WitnessNotFound { n_max }) => {
                    let human = format!(
                        "no witness with n <= {n_max}; inconclusive, not a disproof\n"
                    );
                    rec.push(
                        "outcome",
                        &[
                            ("status", "not-found".to_string()),
                            ("n-max", n_max.to_string()),
                        ],
                    );
                    Ok(RunOutput {
                        human,
                        records: rec.finish(),
                        exit: EXIT_INCONCLUSIVE,
                    })
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::VerifyCriterion {
            property,
            depth,
            basis_bound,
            seq_start,
            seq_stride,
        } => {
            let op = required_operator(spec)?;
            let inv = derive_right_inverse(op)?;
            let seq = SequenceGen::new(*seq_start, *seq_stride)?;
            let report = match property {
                padic_dynamics::criteria::Property::Hypercyclic => {
                    verify_hc_criterion(op, &inv, seq, *depth, *basis_bound)?
                }
                padic_dynamics::criteria::Property::Supercyclic => {
                    verify_sc_criterion(op, &inv, seq, *depth, *basis_bound)?
                }
            };
            let human = render_criterion_human(&report);
            push_criterion_records(&mut rec, &report, *seq_start, *seq_stride);
            Ok(RunOutput {
                human,
                records: rec.finish(),
                exit: EXIT_OK,
            })
        }
        Command::Obstruct { vector, n_max } => {
            let op = required_operator(spec)?;
            let OperatorSpec::LambdaMu { lambda, mu, .. } = op else {
                return Err(RunError(
                    "obstruct needs a lambda-mu operator".to_string(),
                ));
            };
            let w = obstruction_witness_lambda_mu(lambda, mu, vector, *n_max)?;
            let mut human = format!("separation certificate for {op} on x = {vector}\n");
            let _ = writeln!(human, "branch: {}", branch_human(&w.branch));
            let _ = writeln!(
                human,
                "no scalar multiple of the orbit enters the open unit ball around e_{}",
                w.separation_target
            );
            let _ = writeln!(human, "norms checked exactly for n = 1..={}", w.n_checked);
            let _ = writeln!(human, "{}", w.conclusion);
            let mut fields = vec![("branch", branch_tag(&w.branch).to_string())];
            fields.extend(branch_fields(&w.branch));
            fields.push(("target", w.separation_target.to_string()));
            fields.push(("n-checked", w.n_checked.to_string()));
            rec.push("obstruction", &fields);
            for step in &w.steps {
                rec.push(
                    "step",
                    &[
                        ("n", step.n.to_string()),
                        ("carried", records::norm(step.carried_norm)),
                        ("competitor", records::norm(step.competitor_norm)),
                    ],
                );
            }
            Ok(RunOutput {
                human,
                records: rec.finish(),
                exit: EXIT_OK,
            })
        }
        Command::Selftest => {
            let cfg = SelftestConfig {
                seed,
                budget_percent: budget,
            };
            let results = run_all(&cfg);
            let mut human = String::new();
            let mut passed = 0usize;
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(human, "{status} {}: {}", r.name, r.details);
                rec.push(
                    "check",
                    &[
                        ("name", r.name.to_string()),
                        ("pass", records::yes_no(r.passed)),
                    ],
                );
                passed += r.passed as usize;
            }
            let all = passed == results.len();
            let _ = writeln!(
                human,
                "selftest: {passed}/{} checks passed",
                results.len()
            );
            rec.push(
                "suite",
                &[
                    ("pass", records::yes_no(all)),
                    ("passed", passed.to_string()),
                    ("total", results.len().to_string()),
                ],
            );
            if all {
                Ok(RunOutput {
                    human,
                    records: rec.finish(),
                    exit: EXIT_OK,
                })
            } else {
                // A failing suite is an error state, but the report still
                // carries the per-check lines for debugging.
                Ok(RunOutput {
                    human,
                    records: rec.finish(),
                    exit: 1,
                })
            }
        }
    }
}

fn required_operator(spec: &ExperimentSpec) -> Result<&OperatorSpec, RunError> {
    spec.operator.as_ref().ok_or_else(|| {
        RunError(format!(
            "the `{}` command needs an [operator] section",
            spec.command.name()
        ))
    })
}

/// The constructed right inverse used by witness search and criterion
/// verification: the matching forward shift for weighted backward shifts,
/// the windowed series inverse for the one-sided scalar-plus-shift family.
fn derive_right_inverse(op: &OperatorSpec) -> Result<OperatorSpec, RunError> {
    match op {
        OperatorSpec::UnilateralBackwardShift(w) | OperatorSpec::BilateralBackwardShift(w) => {
            Ok(OperatorSpec::forward_shift(w.clone()))
        }
        OperatorSpec::LambdaMu {
            lambda,
            mu,
            domain: IndexDomain::Naturals,
        } => Ok(OperatorSpec::right_inverse_lambda_mu(
            lambda.clone(),
            mu.clone(),
        )?),
        OperatorSpec::LambdaMu {
            domain: IndexDomain::Integers,
            ..
        } => Err(RunError(
            "no constructed right inverse on two-sided sequences; witness and \
             criterion commands need domain = naturals or a weighted shift"
                .to_string(),
        )),
        other => Err(RunError(format!(
            "no constructed right inverse for {other}"
        ))),
    }
}

fn push_operator_record(rec: &mut Records, field: &FieldConfig, op: &OperatorSpec) {
    match op {
        OperatorSpec::UnilateralBackwardShift(w) => {
            rec.push(
                "operator",
                &[
                    ("kind", "unilateral-shift".to_string()),
                    ("prefix", weights_token(field, w.forward_prefix())),
                    ("period", weights_token(field, w.forward_period())),
                ],
            );
        }
        OperatorSpec::BilateralBackwardShift(w) => {
            rec.push(
                "operator",
                &[
                    ("kind", "bilateral-shift".to_string()),
                    ("forward-prefix", weights_token(field, w.forward_prefix())),
                    ("forward-period", weights_token(field, w.forward_period())),
                    ("backward-prefix", weights_token(field, w.backward_prefix())),
                    ("backward-period", weights_token(field, w.backward_period())),
                ],
            );
        }
        OperatorSpec::LambdaMu { lambda, mu, domain } => {
            rec.push(
                "operator",
                &[
                    ("kind", "lambda-mu".to_string()),
                    ("lambda", lambda.to_string()),
                    ("mu", mu.to_string()),
                    (
                        "domain",
                        match domain {
                            IndexDomain::Naturals => "naturals".to_string(),
                            IndexDomain::Integers => "integers".to_string(),
                        },
                    ),
                ],
            );
        }
        other => {
            rec.push("operator", &[("kind", format!("{other}"))]);
        }
    }
}

/// Weight list as one atomic token: comma-joined, valuation shorthand where
/// the weight is a pure power of `p`.
fn weights_token(field: &FieldConfig, weights: &[PadicScalar]) -> String {
    let parts: Vec<String> = weights
        .iter()
        .map(|w| match w.valuation() {
            Some(v) if *w == field.p_power(v) => v.to_string(),
            _ => w.to_string(),
        })
        .collect();
    format!("[{}]", parts.join(","))
}

fn push_verdict_records(rec: &mut Records, verdict: &Verdict) {
    rec.push(
        "verdict",
        &[
            ("property", verdict.property.to_string()),
            ("answer", verdict.answer.to_string()),
            ("rule", verdict.rule.tag().to_string()),
        ],
    );
    match &verdict.certificate {
        Certificate::Subsequence {
            start,
            stride,
            m_exponent,
        } => {
            rec.push(
                "certificate",
                &[
                    ("kind", "subsequence".to_string()),
                    ("start", start.to_string()),
                    ("stride", stride.to_string()),
                    (
                        "m-exponent",
                        m_exponent.map_or("none".to_string(), |m| m.to_string()),
                    ),
                ],
            );
        }
        Certificate::ParameterWitness {
            lambda_norm,
            mu_norm,
        } => {
            rec.push(
                "certificate",
                &[
                    ("kind", "parameter-witness".to_string()),
                    ("lambda-norm", records::norm(*lambda_norm)),
                    ("mu-norm", records::norm(*mu_norm)),
                ],
            );
        }
        Certificate::Obstruction { kind, .. } => {
            rec.push(
                "certificate",
                &[
                    ("kind", "obstruction".to_string()),
                    ("reason", kind.tag().to_string()),
                ],
            );
        }
    }
    debug_assert!(
        verdict.answer == Answer::No
            || !matches!(verdict.certificate, Certificate::Obstruction { .. }),
        "yes verdicts carry constructive certificates"
    );
}

fn render_criterion_human(report: &CriterionReport) -> String {
    let mut out = format!(
        "criterion data for {} on {} (inverse: {}): {}\n",
        report.property,
        report.operator,
        report.right_inverse,
        if report.pass { "PASS" } else { "FAIL" }
    );
    let _ = writeln!(
        out,
        "stages: {} (basis block 1..={})",
        report.stages.len(),
        report.basis_bound
    );
    for step in &report.steps {
        let _ = writeln!(
            out,
            "n {:>5}  max||T^n e|| = {:<8} max||S^n e|| = {:<8} bounds {} / {}  identities {}",
            step.n,
            step.t_max_norm.to_string(),
            step.s_max_norm.to_string(),
            records::opt_norm(step.t_bound_norm),
            records::opt_norm(step.s_bound_norm),
            if step.identity_exact { "exact" } else { "VIOLATED" }
        );
    }
    for d in &report.decay {
        let _ = writeln!(
            out,
            "threshold p^-{}: T {}  S {}  product {}",
            d.threshold_exponent,
            records::stabilization(d.t_below),
            records::stabilization(d.s_below),
            records::stabilization(d.product_below)
        );
    }
    if let Some(note) = &report.tail_note {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

fn push_criterion_records(
    rec: &mut Records,
    report: &CriterionReport,
    seq_start: u64,
    seq_stride: u64,
) {
    rec.push(
        "criterion",
        &[
            ("property", report.property.to_string()),
            ("pass", records::yes_no(report.pass)),
            ("stages", report.stages.len().to_string()),
            ("basis-bound", report.basis_bound.to_string()),
            ("seq-start", seq_start.to_string()),
            ("seq-stride", seq_stride.to_string()),
        ],
    );
    for step in &report.steps {
        rec.push(
            "stage",
            &[
                ("n", step.n.to_string()),
                ("t-max", records::norm(step.t_max_norm)),
                ("s-max", records::norm(step.s_max_norm)),
                ("t-bound", records::opt_norm(step.t_bound_norm)),
                ("s-bound", records::opt_norm(step.s_bound_norm)),
                (
                    "identity",
                    if step.identity_exact { "exact" } else { "violated" }.to_string(),
                ),
            ],
        );
    }
    for d in &report.decay {
        rec.push(
            "decay",
            &[
                ("m", d.threshold_exponent.to_string()),
                ("t", records::stabilization(d.t_below)),
                ("s", records::stabilization(d.s_below)),
                ("product", records::stabilization(d.product_below)),
            ],
        );
    }
}

fn branch_tag(b: &ObstructionBranch) -> &'static str {
    match b {
        ObstructionBranch::DominantLambda { .. } => "dominant-lambda",
        ObstructionBranch::DominantMu { .. } => "dominant-mu",
        ObstructionBranch::ZeroOperator { .. } => "zero-operator",
    }
}

fn branch_fields(b: &ObstructionBranch) -> Vec<(&'static str, String)> {
    match b {
        ObstructionBranch::DominantLambda { critical } => {
            vec![("critical", critical.to_string())]
        }
        ObstructionBranch::DominantMu {
            first_peak,
            last_peak,
        } => vec![
            ("first-peak", first_peak.to_string()),
            ("last-peak", last_peak.to_string()),
        ],
        ObstructionBranch::ZeroOperator { critical } => {
            vec![("critical", critical.to_string())]
        }
    }
}

fn branch_human(b: &ObstructionBranch) -> String {
    match b {
        ObstructionBranch::DominantLambda { critical } => format!(
            "|lambda| >= |mu|; the coordinate at index {critical} carries the norm"
        ),
        ObstructionBranch::DominantMu {
            first_peak,
            last_peak,
        } => format!(
            "|mu| > |lambda|; peaks travel from index {first_peak} (first) / {last_peak} (last)"
        ),
        ObstructionBranch::ZeroOperator { critical } => format!(
            "lambda = mu = 0; the orbit collapses to the origin, separated from e_{critical}"
        ),
    }
}
