//! Exact linear dynamics on p-adic sequence spaces.
//!
//! The crate models the ingredients needed to decide and witness
//! hypercyclicity and supercyclicity of weighted backward shifts and
//! `lambda*I + mu*B` operators on `c_0(N)` and `c_0(Z)` over `Q_p`:
//!
//! * [`field`] — exact `Q_p` scalars and integer-exponent norms;
//! * [`seq`] — finitely supported vectors, sup norms, ultrametric balls;
//! * [`ops`] — shift and `lambda*I + mu*B` operators with exact powers;
//! * [`criteria`] — closed-form deciders over prefix+periodic weight models;
//! * [`dynamics`] — orbits, criterion checkers, transitivity witnesses and
//!   norm-obstruction certificates;
//! * [`selftest`] — the acceptance checks packaged for the CLI.

pub mod criteria;
pub mod dynamics;
pub mod field;
pub mod ops;
pub mod par;
pub mod selftest;
pub mod seq;
