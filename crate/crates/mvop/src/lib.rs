//! Matrix-valued orthogonal polynomial (MVOP) families attached to compact
//! Gelfand pairs, the one-parameter weight deformations that intertwine
//! with the derivative, and the verification battery for the identities
//! these families satisfy: orthogonality, operator symmetry, eigenvalues,
//! derivative shifts, raising operators, and Rodrigues-type formulas.
//!
//! Layout:
//! - [`linalg`], [`poly`]: dense complex matrices, matrix polynomials,
//!   weighted matrix polynomials, entrywise polynomial fitting.
//! - [`quadrature`]: Gauss-Jacobi rules on `[0,1]` and the matrix pairing.
//! - [`krawtchouk`]: exact rational Krawtchouk layer (the oracle tier).
//! - [`families`]: the concrete family constructors.
//! - [`deform`]: the weight/operator deformation engine.
//! - [`engine`]: orthogonalization and the identity checks.
//! - [`verify`]: named check suites shared by the CLI and the test suite.

pub mod deform;
pub mod engine;
pub mod error;
pub mod families;
pub mod krawtchouk;
pub mod linalg;
pub mod poly;
pub mod quadrature;
pub mod report;
pub mod tolerances;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use poly::{MatPoly, WeightedMatPoly};
