//! Exact constructions over GF(p) of composition, structurable and J-ternary
//! algebras, the Lie algebras built from them, and the characteristic-3 Lie
//! superalgebras obtained by semisimplification.

pub mod algebra;
pub mod check;
pub mod composition;
pub mod field;
pub mod identity;
pub mod io;
pub mod jternary;
pub mod lie;
pub mod linalg;
pub mod magic;
pub mod reference;
pub mod semisimplify;
pub mod structurable;
pub mod superalgebra;
pub mod tensor;

pub use algebra::Algebra;
pub use check::{Mode, Outcome, Report};
pub use field::{Field, Scalar};
pub use linalg::{Matrix, Subspace};
pub use tensor::Tensor;
