//! Exact arithmetic for power-residue classes, sums of powers and diagonal
//! forms over finite fields, together with Hilbert identities over ℚ and the
//! effective bounds that go with them.
//!
//! Everything in this crate is `no_std` (with `alloc`) and free of IO. Each
//! constructive result (a [`waring::PowerSumCertificate`], a
//! [`hilbert::HilbertIdentity`], a [`solvers::SolutionVector`]) is checked by
//! exact evaluation when it is built, so holding one is proof that it is
//! valid.

#![no_std]

extern crate alloc;

pub mod bounds;
pub mod field;
pub mod hilbert;
mod limits;
pub mod residue;
pub mod solvers;
pub mod waring;

pub use field::{element_arith, ArithOp, Element, Field, FieldError, FieldSpec, Rational};
pub use limits::Limits;
