//! Finite-dimensional calculus of linear relations between spaces carrying a
//! nondegenerate sesquilinear pairing.
//!
//! Everything is realized in `K^n` (`K` = ℝ or ℂ) with the Euclidean norm, which
//! makes directed gaps, minimum gaps and reduced minimum moduli computable from
//! singular values and Hermitian eigenvalues.
//!
//! The crate is organized bottom-up:
//!
//! * [`subspace`]: subspaces, gap metrics, Fredholm pairs.
//! * [`forms`]: sesquilinear pairings, annihilators, the graph symplectic form.
//! * [`relations`]: linear relations, Ω-adjoints, symmetry predicates, index.
//! * [`symplectic`]: isotropic classification, sign, reduction, transversal splitting.
//! * [`morse`]: symmetric pairs, Morse indices, the c-gap, the Witt parity identity.
//! * [`stability`]: certifiers for the perturbation theorems.
//! * [`cayley`]: the Cayley parameterization of skew-adjoint relations and paths.
//! * [`io`], [`report`], [`experiment`]: text formats and sweep drivers used by the CLI.
//!
//! Conventions: a form with matrix `G` evaluates as `Ω(x, y) = xᵀ G ȳ` (linear in
//! the first slot, conjugate-linear in the second).

pub mod cayley;
mod dense;
pub mod error;
pub mod experiment;
pub mod forms;
pub mod io;
pub mod morse;
pub mod random;
pub mod relations;
pub mod report;
pub mod scalar;
pub mod stability;
pub mod subspace;
pub mod symplectic;

pub use error::{Error, Result};
pub use forms::{Form, FormKind, Nondegeneracy, Side};
pub use relations::{Relation, SymmetryReport};
pub use scalar::{Field, Scalar, Tolerance};
pub use subspace::{GapReport, PairIndex, Subspace};

pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;
