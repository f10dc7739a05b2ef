//! Lattice reduction over rings of imaginary quadratic integers, with a
//! compute-and-forward layer on top.

// `!(x <= t)` is used on purpose so NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cf;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod reduction;
pub mod ring;
pub mod rng;
pub mod svp;

pub use error::{Error, Result};
pub use lattice::{ComplexBasis, RingMatrix, UnimodularMatrix};
pub use ring::{quantize, FieldMorphism, RingElem, RingKind, RingSpec};
