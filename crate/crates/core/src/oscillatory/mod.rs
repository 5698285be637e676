//! Brute-force quadrature of the boundary integrals and their leading-order
//! stationary-phase approximations.

mod asymp;
mod density;
mod quad;

pub use asymp::{asymp_i, asymp_i_with, asymp_triple, AsympTerm, Asymptotic};
pub use density::{AngularFn, Density, DensitySpec};
pub use quad::{
    auto_nodes, boundary_identity, herglotz_eval, herglotz_with_gradient, quad_i, quad_i_derivs, quad_i_phase,
    required_eta_grid, triple_quad, DerivTable, IntegralKernel, QuadResult, QuadratureSpec,
};
