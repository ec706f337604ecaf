//! Exact arithmetic for deciding when degree-3 symbol algebras over the
//! third cyclotomic field split.
//!
//! The stack, bottom to top:
//!
//! * [`eisenstein`]: arithmetic and factorization in Z[w], w^2 + w + 1 = 0.
//! * [`residue`]: cubic (and general q-th power) residue characters with
//!   values in the cube roots of unity.
//! * [`cyclotomic`]: decomposition shapes of rational primes in cyclotomic
//!   and Kummer extensions, determined by character values.
//! * [`kummer`]: the degree-6 field L = Q(w, cbrt(m)); maximal order,
//!   ideals in Hermite normal form, prime factorization.
//! * [`realcubic`]: exact arithmetic in Q(cbrt(|m|)) with certified interval
//!   bounds; carries the T2 trace form used by the lattice layer.
//! * [`lattice`]: LLL reduction and Fincke-Pohst enumeration over exact
//!   Gram matrices; unit search and principality testing.
//! * [`classgrp`]: factor-base relation sieving, Smith normal form, class
//!   numbers and ideal class orders.
//! * [`algebra`]: the decision rules for symbol algebras (w, b / K, w) and
//!   the relative norm equation solver.

pub mod algebra;
pub mod arith;
pub mod budget;
pub mod classgrp;
pub mod cyclotomic;
pub mod eisenstein;
pub mod kummer;
pub mod lattice;
pub mod linalg;
pub mod polymod;
pub mod realcubic;
pub mod residue;

pub use budget::Budgets;
pub use classgrp::{Certainty, ClassGroup, ClassOrder, Principality};
pub use eisenstein::{EisensteinInt, PrimeClass};
pub use kummer::{FieldElement, IdealHnf, NumberFieldOrder, PrimeIdeal};
pub use residue::CharacterValue;
