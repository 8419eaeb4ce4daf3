//! Finitely supported vectors of `c_0` and ultrametric balls.
//!
//! Vectors are sparse maps from indices to nonzero scalars. `c_0(N)` uses
//! indices `>= 1`; `c_0(Z)` allows any integer index. The zero vector has an
//! empty support, and entrywise operations drop entries that cancel exactly,
//! so equality of vectors is plain structural equality.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::field::{NormExp, PadicScalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeqError {
    #[error("index domain mismatch: expected {expected:?}, found {found:?}")]
    DomainMismatch {
        expected: IndexDomain,
        found: IndexDomain,
    },
    #[error("index {0} is outside the domain")]
    IndexOutOfDomain(i64),
    #[error("ball radius must be a nonzero norm value")]
    ZeroRadius,
}

/// Index set of the sequence space: `N` starts at 1, `Z` is unrestricted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IndexDomain {
    Naturals,
    Integers,
}

impl IndexDomain {
    pub fn contains(&self, idx: i64) -> bool {
        match self {
            IndexDomain::Naturals => idx >= 1,
            IndexDomain::Integers => true,
        }
    }
}

impl fmt::Display for IndexDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IndexDomain::Naturals => write!(f, "naturals"),
            IndexDomain::Integers => write!(f, "integers"),
        }
    }
}

/// A finitely supported vector: ordered support, no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinVector {
    domain: IndexDomain,
    entries: BTreeMap<i64, PadicScalar>,
}

impl FinVector {
    pub fn zero(domain: IndexDomain) -> Self {
        FinVector {
            domain,
            entries: BTreeMap::new(),
        }
    }

    /// The basis vector `e_idx` with the given coefficient.
    pub fn monomial(
        domain: IndexDomain,
        idx: i64,
        coeff: PadicScalar,
    ) -> Result<Self, SeqError> {
        let mut v = FinVector::zero(domain);
        v.insert_add(idx, coeff)?;
        Ok(v)
    }

    /// Builds a vector from `(index, coefficient)` pairs; repeated indices
    /// accumulate, zero coefficients are dropped.
    pub fn from_entries(
        domain: IndexDomain,
        entries: impl IntoIterator<Item = (i64, PadicScalar)>,
    ) -> Result<Self, SeqError> {
        let mut v = FinVector::zero(domain);
        for (idx, c) in entries {
            v.insert_add(idx, c)?;
        }
        Ok(v)
    }

    /// Adds `coeff` into the entry at `idx`, dropping the entry when the sum
    /// cancels exactly.
    pub fn insert_add(&mut self, idx: i64, coeff: PadicScalar) -> Result<(), SeqError> {
        if !self.domain.contains(idx) {
            return Err(SeqError::IndexOutOfDomain(idx));
        }
        if coeff.is_zero() {
            return Ok(());
        }
        match self.entries.remove(&idx) {
            None => {
                self.entries.insert(idx, coeff);
            }
            Some(old) => {
                let sum = old.add(&coeff);
                if !sum.is_zero() {
                    self.entries.insert(idx, sum);
                }
            }
        }
        Ok(())
    }

    pub fn domain(&self) -> IndexDomain {
        self.domain
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, idx: i64) -> Option<&PadicScalar> {
        self.entries.get(&idx)
    }

    /// Coefficient at `idx`, reading absent entries as zero norms.
    pub fn coeff_norm(&self, idx: i64) -> NormExp {
        self.entries.get(&idx).map_or(NormExp::Zero, |c| c.norm())
    }

    /// Support indices in ascending order.
    pub fn support(&self) -> impl Iterator<Item = i64> + '_ {
        self.entries.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, &PadicScalar)> + '_ {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn min_index(&self) -> Option<i64> {
        self.entries.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<i64> {
        self.entries.keys().next_back().copied()
    }

    /// `sup_n |x_n|`, attained on the finite support.
    pub fn sup_norm(&self) -> NormExp {
        self.entries
            .values()
            .map(|c| c.norm())
            .max()
            .unwrap_or(NormExp::Zero)
    }

    pub fn add(&self, other: &FinVector) -> Result<FinVector, SeqError> {
        self.check_domain(other)?;
        let mut out = self.clone();
        for (idx, c) in other.iter() {
            out.insert_add(idx, c.clone())?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &FinVector) -> Result<FinVector, SeqError> {
        self.check_domain(other)?;
        let mut out = self.clone();
        for (idx, c) in other.iter() {
            out.insert_add(idx, c.neg())?;
        }
        Ok(out)
    }

    /// Scalar multiple; an exact zero scalar gives the zero vector.
    pub fn scale(&self, lambda: &PadicScalar) -> FinVector {
        if lambda.is_zero() {
            return FinVector::zero(self.domain);
        }
        FinVector {
            domain: self.domain,
            entries: self
                .entries
                .iter()
                .map(|(i, c)| (*i, lambda.mul(c)))
                .collect(),
        }
    }

    /// `||x - y||`, the ultrametric distance.
    pub fn dist(&self, other: &FinVector) -> Result<NormExp, SeqError> {
        Ok(self.sub(other)?.sup_norm())
    }

    fn check_domain(&self, other: &FinVector) -> Result<(), SeqError> {
        if self.domain != other.domain {
            return Err(SeqError::DomainMismatch {
                expected: self.domain,
                found: other.domain,
            });
        }
        Ok(())
    }
}

impl fmt::Display for FinVector {
    /// Renders the CLI vector literal: space-separated `i:num/den` pairs,
    /// or `0` for the zero vector.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.iter() {
            if !first {
                write!(f, " ")?;
            }
            write!(f, "{i}:{c}")?;
            first = false;
        }
        Ok(())
    }
}

/// An ultrametric ball with an exact power radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    center: FinVector,
    radius: NormExp,
    closed: bool,
}

impl Ball {
    /// `closed = true` gives `{x : ||x - c|| <= r}`, otherwise strict.
    pub fn new(center: FinVector, radius: NormExp, closed: bool) -> Result<Self, SeqError> {
        if radius.is_zero() {
            return Err(SeqError::ZeroRadius);
        }
        Ok(Ball {
            center,
            radius,
            closed,
        })
    }

    pub fn center(&self) -> &FinVector {
        &self.center
    }

    pub fn radius(&self) -> NormExp {
        self.radius
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn contains(&self, x: &FinVector) -> Result<bool, SeqError> {
        let d = self.center.dist(x)?;
        Ok(if self.closed {
            d <= self.radius
        } else {
            d < self.radius
        })
    }
}

impl fmt::Display for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.closed { "closed" } else { "open" };
        write!(f, "{kind} ball radius {} center {}", self.radius, self.center)
    }
}
