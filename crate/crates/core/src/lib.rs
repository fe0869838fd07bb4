//! Exact and numerical toolkit for the alpha-cosine transform on real
//! Grassmannians.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`]: exact eigenvalues of the normalized transform, their poles
//!   and Laurent data, step relations, chains and the support table.
//! * [`symmetric`]: exact multivariate polynomials, symmetric functions and
//!   the polynomial identities behind the invariant differential operators.
//! * [`enveloping`]: Pfaffian elements and the invariants `V_d` as concrete
//!   operators on finite-dimensional representations of `o(n)`.
//! * [`grassmann`]: polynomial functions of the projection matrix, their
//!   isotypic decomposition and exact application of invariant operators.
//! * [`numerics`]: Haar sampling, Monte-Carlo and quadrature transforms, and
//!   numerical cross-checks of the exact results.
//! * [`suites`]: named verification suites shared by the CLI and tests.

pub mod enveloping;
pub mod error;
pub mod grassmann;
pub mod linalg;
pub mod numerics;
pub mod rational;
pub mod spectral;
pub mod suites;
pub mod symmetric;

pub use error::{Error, Result};
pub use rational::Q;
pub use spectral::{FactoredRational, GrassmannSignature, HighestWeight};
