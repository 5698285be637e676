//! Boundary oscillatory integrals for penetrable star-shaped media.
//!
//! The crate evaluates the double integral of `Ψ φ e^{ikψ}` over the boundary
//! angle and the plane-wave direction, its stationary points and leading-order
//! asymptotics, the admissibility inequalities for radius functions, the
//! Vandermonde null-space bookkeeping used to read off vanishing densities, and
//! a radially symmetric Bessel oracle.
//!
//! ```
//! use nonscatter_core::{geometry::RadiusProfile, medium::Medium, stationary};
//!
//! let medium = Medium::new(0.36, RadiusProfile::ellipse_focus(1.0, 0.5).unwrap()).unwrap();
//! let set = stationary::ellipse_stationary_points(&medium, std::f64::consts::FRAC_PI_2).unwrap();
//! assert_eq!(set.points.len(), 4);
//! ```

pub mod admissibility;
pub mod diskoracle;
pub mod error;
pub mod geometry;
pub mod medium;
pub mod numeric;
pub mod oscillatory;
pub mod stationary;
pub mod vandermonde;

pub use error::{Error, Result};
pub use geometry::{BoundaryFrame, ProfileSpec, RadiusProfile, RadiusValues};
pub use medium::Medium;
