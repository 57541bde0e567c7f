//! Finite-field workbench for vectorial dual-bent functions and the few-weight
//! codes and secret-sharing schemes built from them.

#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod cli;
pub mod constructions;
pub mod cyclotomic;
pub mod error;
pub mod field;
mod linalg;
pub mod sss;
pub mod walsh;
pub mod zoo;

pub use error::{Error, Result};
pub use field::{Elem, Field, FieldElem, VPoint, VSpace};
