//! Special functions, quadrature and seeded random streams.

mod compensated;
mod quadrature;
mod random;
mod special;

pub use compensated::{DoubleDouble, NeumaierSum};
pub use quadrature::{integrate_finite, integrate_semi_infinite, QuadratureResult, SemiInfinite};
pub use random::RandomStream;
pub use special::{hurwitz_zeta_ln, lgamma, zeta, ZETA_DOMAIN_MARGIN};
