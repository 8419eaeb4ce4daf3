//! The machine-readable report format: line-delimited records.
//!
//! Each line is a record type followed by `key=value` pairs in a fixed
//! order. Values never contain spaces — vectors are comma-joined — and all
//! norms are integer-exponent forms (`0`, `1`, `p^e`), so reports are exact
//! and diff-able. The same spec, seed and budget always produce the same
//! bytes.

use std::fmt::Write as _;

use padic_dynamics::dynamics::Stabilization;
use padic_dynamics::field::NormExp;
use padic_dynamics::seq::FinVector;

/// Accumulates report lines.
#[derive(Debug, Default)]
pub struct Records {
    buf: String,
}

impl Records {
    pub fn new() -> Self {
        Records::default()
    }

    /// Appends one record: the type token followed by `key=value` fields.
    pub fn push(&mut self, record: &str, fields: &[(&str, String)]) {
        self.buf.push_str(record);
        for (key, value) in fields {
            debug_assert!(
                !value.contains(' ') && !value.contains('\n'),
                "record value for {key} must be atomic: {value:?}"
            );
            let _ = write!(self.buf, " {key}={value}");
        }
        self.buf.push('\n');
    }

    pub fn finish(self) -> String {
        self.buf
    }
}

/// `0`, `1` or `p^e` — the exact norm spelling.
pub fn norm(n: NormExp) -> String {
    n.to_string()
}

/// An optional closed-form bound: the norm spelling or `none`.
pub fn opt_norm(n: Option<NormExp>) -> String {
    match n {
        Some(n) => norm(n),
        None => "none".to_string(),
    }
}

/// `observed:k`, `bounded:n` or `none`.
pub fn stabilization(s: Option<Stabilization>) -> String {
    match s {
        Some(Stabilization::Observed { stage }) => format!("observed:{stage}"),
        Some(Stabilization::Bounded { power }) => format!("bounded:{power}"),
        None => "none".to_string(),
    }
}

/// A vector as a single atomic token: comma-joined `index:num/den` entries,
/// `0` for the zero vector.
pub fn vector(v: &FinVector) -> String {
    if v.is_zero() {
        return "0".to_string();
    }
    let parts: Vec<String> = v.iter().map(|(i, c)| format!("{i}:{c}")).collect();
    parts.join(",")
}

pub fn yes_no(b: bool) -> String {
    if b { "yes" } else { "no" }.to_string()
}
