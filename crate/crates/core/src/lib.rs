//! Degree behaviour of vectorial Boolean functions under restriction to
//! affine subspaces of F_2^n.

pub mod counting;
pub mod degree_drop;
pub mod error;
pub mod boolfn;
pub mod cli;
pub mod field;
pub mod formats;
pub mod linalg;
pub mod power;
pub mod subspace;

pub use error::{Error, Result};
pub use boolfn::{AnfForm, Degree, UnivariateForm, VectorialFunction};
pub use field::{Embedding, FieldCtx, FieldElement};
pub use subspace::{AffineSubspace, LinearSubspace, Scope, TraceEquations};
pub use degree_drop::{ScanOptions, ScanReport};
