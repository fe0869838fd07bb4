//! Haar sampling of Grassmannians, Monte-Carlo and quadrature transforms, and
//! the numerical cross-checks of the exact spectral results.

mod haar;
mod mc;
mod quadrature;
mod radon;
mod recursion;

pub use haar::{block_rng, cosine, haar_orthogonal, sample_uniform, SubspaceFrame, BLOCK};
pub use mc::{check_alpha, mc_cosine_transform, monte_carlo, CovAccumulator, TransformEstimate};
pub use quadrature::{
    cosine_transform_sphere, eval_poly, funk_hecke_eigenvalue, funk_hecke_ratio_continued, gauss_jacobi, gegenbauer,
    gegenbauer_at_zero, radon_sphere, sphere_average,
};
pub use radon::{compos_test_function, radon_grassmann, verify_radon_factorization, RadonCase, RadonReport, RatioPoint};
pub use recursion::{
    component_cosine_ratio, recursion_check, verify_recursion_functional, ComponentRatio, RecursionPoint, RecursionReport,
    Z_LIMIT,
};
