//! Experiment spec files: a small sectioned key-value format.
//!
//! A spec has up to three sections, `[field]`, `[operator]` and `[command]`,
//! each holding `key = value` lines. `#` starts a comment, blank lines are
//! skipped, and every key is checked against the section's vocabulary:
//! unknown sections, unknown keys and duplicate keys are all reported with
//! their line number rather than silently ignored.
//!
//! Values are exact: rationals are written `num/den` (or a bare integer),
//! weight lists are bracketed arrays whose elements are either a bare
//! integer valuation `v` (meaning the weight `p^v`) or an explicit rational,
//! vectors are space-separated `index:num/den` entries (`0` for the zero
//! vector), and ball radii are integer exponents `e` meaning `p^e`. Nothing
//! in the format or in [`serialize`] involves floating point, so a spec
//! round-trips exactly.

use std::fmt;

use padic_dynamics::criteria::Property;
use padic_dynamics::field::{FieldConfig, FieldError, PadicScalar};
use padic_dynamics::ops::{OperatorSpec, OpsError, WeightModel};
use padic_dynamics::seq::{FinVector, IndexDomain, SeqError};

/// A problem found while parsing or validating a spec file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    /// 1-based line in the spec file, 0 when the problem is not tied to a
    /// single line (e.g. a missing section).
    pub line: usize,
    /// Dotted path of the offending field, e.g. `operator.period`.
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line > 0 {
            write!(f, "line {}: {}: {}", self.line, self.field, self.message)
        } else {
            write!(f, "{}: {}", self.field, self.message)
        }
    }
}

/// Everything a single invocation needs: field, operator, command.
///
/// `operator` is `None` only for `selftest`, which runs the library's
/// whole-suite checks and needs no input operator.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub field: FieldConfig,
    pub operator: Option<OperatorSpec>,
    pub command: Command,
}

/// The command section, fully validated against the operator.
#[derive(Debug, Clone)]
pub enum Command {
    Decide {
        property: Property,
    },
    Orbit {
        vector: FinVector,
        n_max: u64,
    },
    Witness {
        center_u: FinVector,
        radius_u: i64,
        closed_u: bool,
        center_v: FinVector,
        radius_v: i64,
        closed_v: bool,
        n_max: u64,
    },
    VerifyCriterion {
        property: Property,
        depth: u64,
        basis_bound: u64,
        seq_start: u64,
        seq_stride: u64,
    },
    Obstruct {
        vector: FinVector,
        n_max: u64,
    },
    Selftest,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Decide { .. } => "decide",
            Command::Orbit { .. } => "orbit",
            Command::Witness { .. } => "witness",
            Command::VerifyCriterion { .. } => "verify-criterion",
            Command::Obstruct { .. } => "obstruct",
            Command::Selftest => "selftest",
        }
    }
}

/// Largest accepted `n-max` for orbit/witness/obstruct scans; keeps a typo
/// from turning into an hour of exact arithmetic.
pub const N_MAX_LIMIT: u64 = 100_000;

const DEFAULT_PRECISION: u32 = 64;

// ---------------------------------------------------------------------------
// Tokenizing: file text -> sections of (line, key, value)
// ---------------------------------------------------------------------------

struct RawSection {
    line: usize,
    name: String,
    entries: Vec<RawEntry>,
}

struct RawEntry {
    line: usize,
    key: String,
    value: String,
}

fn tokenize(text: &str) -> Result<Vec<RawSection>, Vec<Diagnostic>> {
    let mut sections: Vec<RawSection> = Vec::new();
    let mut errors = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('[') {
            match rest.strip_suffix(']') {
                Some(name) if !name.trim().is_empty() => {
                    sections.push(RawSection {
                        line,
                        name: name.trim().to_string(),
                        entries: Vec::new(),
                    });
                }
                _ => errors.push(Diagnostic {
                    line,
                    field: "section".to_string(),
                    message: format!("malformed section header `{trimmed}`"),
                }),
            }
            continue;
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            errors.push(Diagnostic {
                line,
                field: "entry".to_string(),
                message: format!("expected `key = value`, got `{trimmed}`"),
            });
            continue;
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() {
            errors.push(Diagnostic {
                line,
                field: "entry".to_string(),
                message: "empty key before `=`".to_string(),
            });
            continue;
        }
        match sections.last_mut() {
            Some(section) => section.entries.push(RawEntry { line, key, value }),
            None => errors.push(Diagnostic {
                line,
                field: key,
                message: "entry appears before any section header".to_string(),
            }),
        }
    }
    if errors.is_empty() {
        Ok(sections)
    } else {
        Err(errors)
    }
}

// ---------------------------------------------------------------------------
// Section views: key lookup with vocabulary and duplicate checking
// ---------------------------------------------------------------------------

struct SectionView<'a> {
    section: &'a str,
    entries: &'a [RawEntry],
}

impl<'a> SectionView<'a> {
    /// Returns `(line, value)` for `key`, recording a diagnostic on
    /// duplicates.
    fn get(&self, key: &str, errors: &mut Vec<Diagnostic>) -> Option<(usize, &'a str)> {
        let mut hits = self.entries.iter().filter(|e| e.key == key);
        let first = hits.next()?;
        for dup in hits {
            errors.push(Diagnostic {
                line: dup.line,
                field: format!("{}.{}", self.section, key),
                message: format!("duplicate key (first set on line {})", first.line),
            });
        }
        Some((first.line, first.value.as_str()))
    }

    fn require(&self, key: &str, errors: &mut Vec<Diagnostic>) -> Option<(usize, &'a str)> {
        let hit = self.get(key, errors);
        if hit.is_none() {
            errors.push(Diagnostic {
                line: 0,
                field: format!("{}.{}", self.section, key),
                message: "required key is missing".to_string(),
            });
        }
        hit
    }

    /// Flags every key outside `allowed`.
    fn check_vocabulary(&self, allowed: &[&str], errors: &mut Vec<Diagnostic>) {
        for entry in self.entries {
            if !allowed.contains(&entry.key.as_str()) {
                errors.push(Diagnostic {
                    line: entry.line,
                    field: format!("{}.{}", self.section, entry.key),
                    message: format!(
                        "unknown key; expected one of: {}",
                        allowed.join(", ")
                    ),
                });
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Scalar-level parsers
// ---------------------------------------------------------------------------

fn parse_u64(section: &str, key: &str, line: usize, value: &str) -> Result<u64, Diagnostic> {
    value.parse().map_err(|_| Diagnostic {
        line,
        field: format!("{section}.{key}"),
        message: format!("expected a non-negative integer, got `{value}`"),
    })
}

fn parse_i64(section: &str, key: &str, line: usize, value: &str) -> Result<i64, Diagnostic> {
    value.parse().map_err(|_| Diagnostic {
        line,
        field: format!("{section}.{key}"),
        message: format!("expected an integer, got `{value}`"),
    })
}

fn parse_bool(section: &str, key: &str, line: usize, value: &str) -> Result<bool, Diagnostic> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Diagnostic {
            line,
            field: format!("{section}.{key}"),
            message: format!("expected `true` or `false`, got `{value}`"),
        }),
    }
}

/// `num/den` or a bare integer. Zero is allowed here; callers that need a
/// nonzero value say so themselves.
fn parse_rational(
    field: &FieldConfig,
    section: &str,
    key: &str,
    line: usize,
    value: &str,
) -> Result<PadicScalar, Diagnostic> {
    let diag = |message: String| Diagnostic {
        line,
        field: format!("{section}.{key}"),
        message,
    };
    let (num_text, den_text) = match value.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (value, "1"),
    };
    let num: i64 = num_text
        .parse()
        .map_err(|_| diag(format!("bad rational numerator `{num_text}`")))?;
    let den: i64 = den_text
        .parse()
        .map_err(|_| diag(format!("bad rational denominator `{den_text}`")))?;
    field
        .from_rational(num, den)
        .map_err(|e| diag(render_field_error(&e)))
}

fn render_field_error(e: &FieldError) -> String {
    e.to_string()
}

/// A bracketed weight array: `[e, e, ...]` or `[]`. Each element is either
/// a bare integer valuation `v` (the weight `p^v`) or an explicit `num/den`
/// rational; an element equal to zero is rejected here so the error carries
/// the spec line instead of surfacing later from the weight model.
fn parse_weight_array(
    field: &FieldConfig,
    section: &str,
    key: &str,
    line: usize,
    value: &str,
) -> Result<Vec<PadicScalar>, Diagnostic> {
    let diag = |message: String| Diagnostic {
        line,
        field: format!("{section}.{key}"),
        message,
    };
    let inner = value
        .strip_prefix('[')
        .and_then(|rest| rest.strip_suffix(']'))
        .ok_or_else(|| diag(format!("expected a bracketed array, got `{value}`")))?
        .trim();
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    let mut weights = Vec::new();
    for element in inner.split(',') {
        let element = element.trim();
        let w = if element.contains('/') {
            parse_rational(field, section, key, line, element)?
        } else {
            let v: i64 = element
                .parse()
                .map_err(|_| diag(format!("bad array element `{element}`")))?;
            field.p_power(v)
        };
        if w.is_zero() {
            return Err(diag(format!("zero weight `{element}`")));
        }
        weights.push(w);
    }
    Ok(weights)
}

/// A vector literal: `0`, or space-separated `index:num/den` entries.
fn parse_vector(
    field: &FieldConfig,
    domain: IndexDomain,
    section: &str,
    key: &str,
    line: usize,
    value: &str,
) -> Result<FinVector, Diagnostic> {
    let diag = |message: String| Diagnostic {
        line,
        field: format!("{section}.{key}"),
        message,
    };
    if value == "0" {
        return Ok(FinVector::zero(domain));
    }
    let mut entries = Vec::new();
    for chunk in value.split_whitespace() {
        let (idx_text, coeff_text) = chunk
            .split_once(':')
            .ok_or_else(|| diag(format!("expected `index:num/den`, got `{chunk}`")))?;
        let idx: i64 = idx_text
            .parse()
            .map_err(|_| diag(format!("bad index `{idx_text}`")))?;
        let coeff = parse_rational(field, section, key, line, coeff_text)?;
        entries.push((idx, coeff));
    }
    FinVector::from_entries(domain, entries).map_err(|e| diag(render_seq_error(&e)))
}

fn render_seq_error(e: &SeqError) -> String {
    e.to_string()
}

fn render_ops_error(e: &OpsError) -> String {
    e.to_string()
}

// ---------------------------------------------------------------------------
// Section builders
// ---------------------------------------------------------------------------

fn build_field(view: &SectionView<'_>, errors: &mut Vec<Diagnostic>) -> Option<FieldConfig> {
    view.check_vocabulary(&["prime", "precision"], errors);
    let (prime_line, prime_text) = view.require("prime", errors)?;
    let prime = match parse_u64("field", "prime", prime_line, prime_text) {
        Ok(p) => p,
        Err(d) => {
            errors.push(d);
            return None;
        }
    };
    let precision = match view.get("precision", errors) {
        Some((line, text)) => match parse_u64("field", "precision", line, text) {
            Ok(n) if n <= u32::MAX as u64 => n as u32,
            Ok(_) => {
                errors.push(Diagnostic {
                    line,
                    field: "field.precision".to_string(),
                    message: "precision is out of range".to_string(),
                });
                return None;
            }
            Err(d) => {
                errors.push(d);
                return None;
            }
        },
        None => DEFAULT_PRECISION,
    };
    match FieldConfig::new(prime, precision) {
        Ok(f) => Some(f),
        Err(e) => {
            errors.push(Diagnostic {
                line: prime_line,
                field: "field.prime".to_string(),
                message: render_field_error(&e),
            });
            None
        }
    }
}

fn build_operator(
    field: &FieldConfig,
    view: &SectionView<'_>,
    errors: &mut Vec<Diagnostic>,
) -> Option<OperatorSpec> {
    let (kind_line, kind) = view.require("kind", errors)?;
    let array = |key: &str, required: bool, errors: &mut Vec<Diagnostic>| -> Option<Vec<PadicScalar>> {
        let hit = if required {
            view.require(key, errors)
        } else {
            view.get(key, errors)
        };
        match hit {
            Some((line, text)) => match parse_weight_array(field, "operator", key, line, text) {
                Ok(ws) => Some(ws),
                Err(d) => {
                    errors.push(d);
                    None
                }
            },
            None if required => None,
            None => Some(Vec::new()),
        }
    };
    match kind {
        "unilateral-shift" => {
            view.check_vocabulary(&["kind", "prefix", "period"], errors);
            let prefix = array("prefix", false, errors)?;
            let period = array("period", true, errors)?;
            let model = WeightModel::unilateral(prefix, period)
                .map_err(|e| {
                    errors.push(Diagnostic {
                        line: kind_line,
                        field: "operator.period".to_string(),
                        message: render_ops_error(&e),
                    })
                })
                .ok()?;
            OperatorSpec::unilateral_backward(model)
                .map_err(|e| {
                    errors.push(Diagnostic {
                        line: kind_line,
                        field: "operator".to_string(),
                        message: render_ops_error(&e),
                    })
                })
                .ok()
        }
        "bilateral-shift" => {
            view.check_vocabulary(
                &[
                    "kind",
                    "forward-prefix",
                    "forward-period",
                    "backward-prefix",
                    "backward-period",
                ],
                errors,
            );
            let fwd_prefix = array("forward-prefix", false, errors)?;
            let fwd_period = array("forward-period", true, errors)?;
            let bwd_prefix = array("backward-prefix", false, errors)?;
            let bwd_period = array("backward-period", true, errors)?;
            let model = WeightModel::bilateral(fwd_prefix, fwd_period, bwd_prefix, bwd_period)
                .map_err(|e| {
                    errors.push(Diagnostic {
                        line: kind_line,
                        field: "operator".to_string(),
                        message: render_ops_error(&e),
                    })
                })
                .ok()?;
            OperatorSpec::bilateral_backward(model)
                .map_err(|e| {
                    errors.push(Diagnostic {
                        line: kind_line,
                        field: "operator".to_string(),
                        message: render_ops_error(&e),
                    })
                })
                .ok()
        }
        "lambda-mu" => {
            view.check_vocabulary(&["kind", "lambda", "mu", "domain"], errors);
            let scalar = |key: &str, errors: &mut Vec<Diagnostic>| -> Option<PadicScalar> {
                let (line, text) = view.require(key, errors)?;
                match parse_rational(field, "operator", key, line, text) {
                    Ok(s) => Some(s),
                    Err(d) => {
                        errors.push(d);
                        None
                    }
                }
            };
            let lambda = scalar("lambda", errors)?;
            let mu = scalar("mu", errors)?;
            let domain = match view.get("domain", errors) {
                Some((_, "naturals")) | None => IndexDomain::Naturals,
                Some((_, "integers")) => IndexDomain::Integers,
                Some((line, other)) => {
                    errors.push(Diagnostic {
                        line,
                        field: "operator.domain".to_string(),
                        message: format!(
                            "expected `naturals` or `integers`, got `{other}`"
                        ),
                    });
                    return None;
                }
            };
            Some(OperatorSpec::lambda_mu(lambda, mu, domain))
        }
        other => {
            errors.push(Diagnostic {
                line: kind_line,
                field: "operator.kind".to_string(),
                message: format!(
                    "unknown kind `{other}`; expected unilateral-shift, bilateral-shift or lambda-mu"
                ),
            });
            None
        }
    }
}

fn build_command(
    field: &FieldConfig,
    operator: Option<&OperatorSpec>,
    view: &SectionView<'_>,
    errors: &mut Vec<Diagnostic>,
) -> Option<Command> {
    let (name_line, name) = view.require("name", errors)?;
    // Every command except selftest acts on the spec's operator.
    let require_operator = |errors: &mut Vec<Diagnostic>| -> Option<&OperatorSpec> {
        if operator.is_none() {
            errors.push(Diagnostic {
                line: name_line,
                field: "operator".to_string(),
                message: format!("the `{name}` command needs an [operator] section"),
            });
        }
        operator
    };
    let property = |view: &SectionView<'_>, errors: &mut Vec<Diagnostic>| -> Option<Property> {
        let (line, text) = view.require("property", errors)?;
        match text {
            "hypercyclic" => Some(Property::Hypercyclic),
            "supercyclic" => Some(Property::Supercyclic),
            other => {
                errors.push(Diagnostic {
                    line,
                    field: "command.property".to_string(),
                    message: format!(
                        "expected `hypercyclic` or `supercyclic`, got `{other}`"
                    ),
                });
                None
            }
        }
    };
    let bounded_u64 = |key: &str,
                       default: Option<u64>,
                       limit: u64,
                       view: &SectionView<'_>,
                       errors: &mut Vec<Diagnostic>|
     -> Option<u64> {
        let hit = if default.is_some() {
            view.get(key, errors)
        } else {
            view.require(key, errors)
        };
        let (line, text) = match hit {
            Some(h) => h,
            None => return default,
        };
        match parse_u64("command", key, line, text) {
            Ok(n) if n <= limit => Some(n),
            Ok(n) => {
                errors.push(Diagnostic {
                    line,
                    field: format!("command.{key}"),
                    message: format!("{n} exceeds the limit {limit}"),
                });
                None
            }
            Err(d) => {
                errors.push(d);
                None
            }
        }
    };
    let vector = |key: &str,
                  domain: IndexDomain,
                  view: &SectionView<'_>,
                  errors: &mut Vec<Diagnostic>|
     -> Option<FinVector> {
        let (line, text) = view.require(key, errors)?;
        match parse_vector(field, domain, "command", key, line, text) {
            Ok(v) => Some(v),
            Err(d) => {
                errors.push(d);
                None
            }
        }
    };
    match name {
        "decide" => {
            view.check_vocabulary(&["name", "property"], errors);
            require_operator(errors)?;
            Some(Command::Decide {
                property: property(view, errors)?,
            })
        }
        "orbit" => {
            view.check_vocabulary(&["name", "vector", "n-max"], errors);
            let op = require_operator(errors)?;
            let domain = op.domain().unwrap_or(IndexDomain::Naturals);
            Some(Command::Orbit {
                vector: vector("vector", domain, view, errors)?,
                n_max: bounded_u64("n-max", None, N_MAX_LIMIT, view, errors)?,
            })
        }
        "witness" => {
            view.check_vocabulary(
                &[
                    "name", "center-u", "radius-u", "closed-u", "center-v", "radius-v",
                    "closed-v", "n-max",
                ],
                errors,
            );
            let op = require_operator(errors)?;
            let domain = op.domain().unwrap_or(IndexDomain::Naturals);
            let radius = |key: &str, errors: &mut Vec<Diagnostic>| -> Option<i64> {
                let (line, text) = view.require(key, errors)?;
                match parse_i64("command", key, line, text) {
                    Ok(e) => Some(e),
                    Err(d) => {
                        errors.push(d);
                        None
                    }
                }
            };
            let closed = |key: &str, errors: &mut Vec<Diagnostic>| -> Option<bool> {
                match view.get(key, errors) {
                    Some((line, text)) => match parse_bool("command", key, line, text) {
                        Ok(b) => Some(b),
                        Err(d) => {
                            errors.push(d);
                            None
                        }
                    },
                    None => Some(true),
                }
            };
            Some(Command::Witness {
                center_u: vector("center-u", domain, view, errors)?,
                radius_u: radius("radius-u", errors)?,
                closed_u: closed("closed-u", errors)?,
                center_v: vector("center-v", domain, view, errors)?,
                radius_v: radius("radius-v", errors)?,
                closed_v: closed("closed-v", errors)?,
                n_max: bounded_u64("n-max", Some(1000), N_MAX_LIMIT, view, errors)?,
            })
        }
        "verify-criterion" => {
            view.check_vocabulary(
                &["name", "property", "depth", "basis-bound", "seq-start", "seq-stride"],
                errors,
            );
            require_operator(errors)?;
            let stride = bounded_u64("seq-stride", Some(1), 1000, view, errors)?;
            if stride == 0 {
                errors.push(Diagnostic {
                    line: 0,
                    field: "command.seq-stride".to_string(),
                    message: "stride must be positive".to_string(),
                });
                return None;
            }
            Some(Command::VerifyCriterion {
                property: property(view, errors)?,
                depth: bounded_u64("depth", Some(40), 1000, view, errors)?,
                basis_bound: bounded_u64("basis-bound", Some(20), 1000, view, errors)?,
                seq_start: bounded_u64("seq-start", Some(0), 1_000_000, view, errors)?,
                seq_stride: stride,
            })
        }
        "obstruct" => {
            view.check_vocabulary(&["name", "vector", "n-max"], errors);
            let op = require_operator(errors)?;
            match op {
                OperatorSpec::LambdaMu {
                    domain: IndexDomain::Integers,
                    ..
                } => {}
                _ => {
                    errors.push(Diagnostic {
                        line: name_line,
                        field: "command.name".to_string(),
                        message:
                            "obstruct needs a lambda-mu operator with domain = integers"
                                .to_string(),
                    });
                    return None;
                }
            }
            let x = vector("vector", IndexDomain::Integers, view, errors)?;
            if x.is_zero() {
                errors.push(Diagnostic {
                    line: 0,
                    field: "command.vector".to_string(),
                    message: "the obstruction vector must be nonzero".to_string(),
                });
                return None;
            }
            Some(Command::Obstruct {
                vector: x,
                n_max: bounded_u64("n-max", Some(100), N_MAX_LIMIT, view, errors)?,
            })
        }
        "selftest" => {
            view.check_vocabulary(&["name"], errors);
            Some(Command::Selftest)
        }
        other => {
            errors.push(Diagnostic {
                line: name_line,
                field: "command.name".to_string(),
                message: format!(
                    "unknown command `{other}`; expected decide, orbit, witness, \
                     verify-criterion, obstruct or selftest"
                ),
            });
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Entry points
// ---------------------------------------------------------------------------

/// Parse and validate a spec file. Diagnostics are collected per section
/// rather than stopping at the first, but a broken `[field]` section masks
/// the later sections: their literals cannot be interpreted without the
/// prime.
pub fn parse_spec(text: &str) -> Result<ExperimentSpec, Vec<Diagnostic>> {
    let sections = tokenize(text)?;
    let mut errors = Vec::new();

    let mut seen: Vec<&str> = Vec::new();
    for section in &sections {
        if seen.contains(&section.name.as_str()) {
            errors.push(Diagnostic {
                line: section.line,
                field: "section".to_string(),
                message: format!("duplicate section [{}]", section.name),
            });
        }
        seen.push(&section.name);
        if !["field", "operator", "command"].contains(&section.name.as_str()) {
            errors.push(Diagnostic {
                line: section.line,
                field: "section".to_string(),
                message: format!(
                    "unknown section [{}]; expected [field], [operator] or [command]",
                    section.name
                ),
            });
        }
    }

    let find = |name: &'static str| -> Option<SectionView<'_>> {
        sections
            .iter()
            .find(|s| s.name == name)
            .map(|s| SectionView {
                section: name,
                entries: &s.entries,
            })
    };

    let command_view = find("command");
    if command_view.is_none() {
        errors.push(Diagnostic {
            line: 0,
            field: "command".to_string(),
            message: "a spec needs a [command] section".to_string(),
        });
    }
    // Selftest runs without a field section; default to the smallest prime
    // so the config is still well-formed.
    let is_bare_selftest = command_view
        .as_ref()
        .map(|v| {
            let mut sink = Vec::new();
            v.get("name", &mut sink).map(|(_, n)| n) == Some("selftest")
        })
        .unwrap_or(false);

    let field = match find("field") {
        Some(view) => build_field(&view, &mut errors),
        None if is_bare_selftest => FieldConfig::new(2, DEFAULT_PRECISION).ok(),
        None => {
            errors.push(Diagnostic {
                line: 0,
                field: "field".to_string(),
                message: "a spec needs a [field] section".to_string(),
            });
            None
        }
    };

    let operator = match (&field, find("operator")) {
        (Some(f), Some(view)) => build_operator(f, &view, &mut errors),
        _ => None,
    };

    let command = match (&field, &command_view) {
        (Some(f), Some(view)) => build_command(f, operator.as_ref(), view, &mut errors),
        _ => None,
    };

    match (field, command) {
        (Some(field), Some(command)) if errors.is_empty() => Ok(ExperimentSpec {
            field,
            operator,
            command,
        }),
        _ => Err(errors),
    }
}

// ---------------------------------------------------------------------------
// Serialization: the canonical spelling of a parsed spec
// ---------------------------------------------------------------------------

/// Render a spec in canonical form: weights print as bare valuations when
/// they are pure powers of `p` and as `num/den` otherwise, rationals print
/// as `num/den`, and every default is written out. Parsing the output gives
/// back an equal spec, and serializing again is a fixed point.
pub fn serialize(spec: &ExperimentSpec) -> String {
    let mut out = String::new();
    let field = &spec.field;
    out.push_str("[field]\n");
    out.push_str(&format!("prime = {}\n", field.prime()));
    out.push_str(&format!("precision = {}\n", field.precision()));

    if let Some(op) = &spec.operator {
        out.push_str("\n[operator]\n");
        match op {
            OperatorSpec::UnilateralBackwardShift(w) => {
                out.push_str("kind = unilateral-shift\n");
                out.push_str(&format!(
                    "prefix = {}\n",
                    render_weights(field, w.forward_prefix())
                ));
                out.push_str(&format!(
                    "period = {}\n",
                    render_weights(field, w.forward_period())
                ));
            }
            OperatorSpec::BilateralBackwardShift(w) => {
                out.push_str("kind = bilateral-shift\n");
                out.push_str(&format!(
                    "forward-prefix = {}\n",
                    render_weights(field, w.forward_prefix())
                ));
                out.push_str(&format!(
                    "forward-period = {}\n",
                    render_weights(field, w.forward_period())
                ));
                out.push_str(&format!(
                    "backward-prefix = {}\n",
                    render_weights(field, w.backward_prefix())
                ));
                out.push_str(&format!(
                    "backward-period = {}\n",
                    render_weights(field, w.backward_period())
                ));
            }
            OperatorSpec::LambdaMu { lambda, mu, domain } => {
                out.push_str("kind = lambda-mu\n");
                out.push_str(&format!("lambda = {lambda}\n"));
                out.push_str(&format!("mu = {mu}\n"));
                out.push_str(&format!(
                    "domain = {}\n",
                    match domain {
                        IndexDomain::Naturals => "naturals",
                        IndexDomain::Integers => "integers",
                    }
                ));
            }
            // parse_spec never builds the remaining variants.
            other => {
                out.push_str(&format!("# unrepresentable operator: {other}\n"));
            }
        }
    }

    out.push_str("\n[command]\n");
    match &spec.command {
        Command::Decide { property } => {
            out.push_str("name = decide\n");
            out.push_str(&format!("property = {property}\n"));
        }
        Command::Orbit { vector, n_max } => {
            out.push_str("name = orbit\n");
            out.push_str(&format!("vector = {vector}\n"));
            out.push_str(&format!("n-max = {n_max}\n"));
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
            out.push_str("name = witness\n");
            out.push_str(&format!("center-u = {center_u}\n"));
            out.push_str(&format!("radius-u = {radius_u}\n"));
            out.push_str(&format!("closed-u = {closed_u}\n"));
            out.push_str(&format!("center-v = {center_v}\n"));
            out.push_str(&format!("radius-v = {radius_v}\n"));
            out.push_str(&format!("closed-v = {closed_v}\n"));
            out.push_str(&format!("n-max = {n_max}\n"));
        }
        Command::VerifyCriterion {
            property,
            depth,
            basis_bound,
            seq_start,
            seq_stride,
        } => {
            out.push_str("name = verify-criterion\n");
            out.push_str(&format!("property = {property}\n"));
            out.push_str(&format!("depth = {depth}\n"));
            out.push_str(&format!("basis-bound = {basis_bound}\n"));
            out.push_str(&format!("seq-start = {seq_start}\n"));
            out.push_str(&format!("seq-stride = {seq_stride}\n"));
        }
        Command::Obstruct { vector, n_max } => {
            out.push_str("name = obstruct\n");
            out.push_str(&format!("vector = {vector}\n"));
            out.push_str(&format!("n-max = {n_max}\n"));
        }
        Command::Selftest => {
            out.push_str("name = selftest\n");
        }
    }
    out
}

fn render_weights(field: &FieldConfig, weights: &[PadicScalar]) -> String {
    let parts: Vec<String> = weights
        .iter()
        .map(|w| match w.valuation() {
            Some(v) if *w == field.p_power(v) => v.to_string(),
            _ => w.to_string(),
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "\
[field]
prime = 5

[operator]
kind = unilateral-shift
period = [-1]

[command]
name = decide
property = hypercyclic
";

    #[test]
    fn minimal_decide_spec_parses_and_round_trips() {
        let spec = parse_spec(MINIMAL).unwrap();
        assert_eq!(spec.field.prime(), 5);
        assert_eq!(spec.field.precision(), 64);
        assert!(matches!(
            spec.command,
            Command::Decide {
                property: Property::Hypercyclic
            }
        ));
        let canonical = serialize(&spec);
        let reparsed = parse_spec(&canonical).unwrap();
        assert_eq!(serialize(&reparsed), canonical);
        match (&spec.operator, &reparsed.operator) {
            (Some(a), Some(b)) => assert_eq!(a, b),
            other => panic!("operators lost in round trip: {other:?}"),
        }
    }

    #[test]
    fn composite_prime_is_a_validation_error() {
        let text = MINIMAL.replace("prime = 5", "prime = 4");
        let errors = parse_spec(&text).unwrap_err();
        assert!(
            errors.iter().any(|d| d.field == "field.prime"
                && d.message.contains("not a prime")),
            "{errors:?}"
        );
    }

    #[test]
    fn zero_weight_is_a_validation_error() {
        let text = MINIMAL.replace("period = [-1]", "period = [0/1]");
        let errors = parse_spec(&text).unwrap_err();
        assert!(
            errors.iter().any(|d| d.message.contains("zero weight")),
            "{errors:?}"
        );
    }

    #[test]
    fn unknown_keys_are_reported_with_their_line() {
        let text = MINIMAL.replace("property = hypercyclic", "property = hypercyclic\nextra = 3");
        let errors = parse_spec(&text).unwrap_err();
        let diag = errors
            .iter()
            .find(|d| d.field == "command.extra")
            .expect("unknown key diagnostic");
        assert_eq!(diag.line, 11);
        assert!(diag.message.contains("unknown key"));
    }

    #[test]
    fn duplicate_keys_are_rejected() {
        let text = MINIMAL.replace("prime = 5", "prime = 5\nprime = 7");
        let errors = parse_spec(&text).unwrap_err();
        assert!(errors.iter().any(|d| d.message.contains("duplicate key")));
    }

    #[test]
    fn weight_arrays_accept_valuations_and_rationals() {
        let text = MINIMAL.replace("period = [-1]", "period = [-1, 2/3, 0]");
        let spec = parse_spec(&text).unwrap();
        let Some(OperatorSpec::UnilateralBackwardShift(w)) = &spec.operator else {
            panic!("wrong operator");
        };
        let f = spec.field;
        assert_eq!(w.forward_period()[0], f.p_power(-1));
        assert_eq!(w.forward_period()[1], f.from_rational(2, 3).unwrap());
        assert_eq!(w.forward_period()[2], f.one());
    }

    #[test]
    fn obstruct_requires_the_two_sided_family() {
        let text = "\
[field]
prime = 5

[operator]
kind = lambda-mu
lambda = 1
mu = 5
domain = naturals

[command]
name = obstruct
vector = 0:1/1
";
        let errors = parse_spec(text).unwrap_err();
        assert!(
            errors
                .iter()
                .any(|d| d.message.contains("domain = integers")),
            "{errors:?}"
        );
    }

    #[test]
    fn bare_selftest_needs_no_field_or_operator() {
        let spec = parse_spec("[command]\nname = selftest\n").unwrap();
        assert!(matches!(spec.command, Command::Selftest));
        assert!(spec.operator.is_none());
    }
}
