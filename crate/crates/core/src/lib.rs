//! Exact polynomial arithmetic, algebraic circuits, power-series roots and
//! circuit-level factorization.

pub mod circuit;
pub mod error;
pub mod factor;
pub mod field;
pub mod pipeline;
pub mod poly;
pub mod roots;
pub mod verify;

pub use error::{Error, Result};
pub use field::{Elem, Field, FieldElement};
