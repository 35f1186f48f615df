//! Special functions, quadrature, root finding and scalar maximization.

mod quadrature;
mod roots;
mod special;

pub use quadrature::{
    integrate, integrate_partitioned, integrate_real, try_integrate_real, Integrand, QuadratureSpec,
};
pub use roots::{find_root, maximize_scalar, Bracket};
pub use special::{binary_entropy, erf, erfc};
