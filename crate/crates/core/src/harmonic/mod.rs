//! Exact polynomial algebra for harmonic functions on R^N: homogeneous
//! harmonic bases, sphere inner products, minimal-norm antiderivatives,
//! the Poisson kernel, and the dimension-dependent constants.

pub mod antiderivative;
pub mod basis;
pub mod constants;
pub mod poly;
pub mod sphere;

pub use antiderivative::{
    alpha_norm_envelope, antiderivative_alpha, antiderivative_chain, antiderivative_coord,
    c_coeff, c_coeff_estimate, calibrate_lemma_constants, compatibility_check, Antiderivative,
};
pub use basis::{
    dim_harmonic, dim_harmonic_usize, harmonic_basis, laplacian_rank, monomials,
    HarmonicHomogBasis,
};
pub use constants::c_n_constant;
pub use poly::{
    homogeneous_decompose, homogeneous_parts, is_harmonic, is_homogeneous, laplacian,
    partial_derivative, translate_harmonic, MultiIndex, MultiIndexPoly,
};
pub use sphere::{
    gauss_legendre, inner_product_exact, inner_product_r, m2_profile, m2_sphere, m2_sq_exact,
    poisson_integral, poisson_kernel, sphere_moment, sphere_surface_area, sup_norm_sphere,
    sup_norm_sphere_sampled,
};
