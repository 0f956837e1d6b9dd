//! Spectral Green calculus: functions as eigen-coefficient vectors, the
//! operators `G_α`, Sobolev norms, and the kernels `g_α`.

mod function;
mod kernel;
mod operators;

pub use function::{CoeffEntry, SpectralFunction, SpectralFunctionWire};
pub use kernel::{kernel_g_alpha_spectral, kernel_g_alpha_timeint, KernelValue, TimeQuadrature};
pub use operators::{
    apply_g_alpha, apply_g_half_inverse, embedding_constant, green_bilinear, green_quadratic_form, inner_product_l2,
    l2_embedding_constant, lil_sigma, semigroup_check, sobolev_inner, sobolev_norm, HalfInverse, OperatorTag,
    SemigroupReport, SEMIGROUP_TOLERANCE,
};
