//! Matrices over `Q_p`, characteristic polynomials, the power-boundedness
//! oracle and the seminorm model of the locally convex structure.

pub mod charpoly;
mod matrix;
pub mod newton;
pub mod powers;
pub mod seminorm;

pub use charpoly::{char_poly, CharPoly};
pub use matrix::PadicMatrix;
pub use newton::{power_bounded_oracle, spectral_growth, NewtonPolygon, PowerBound};
pub use powers::power_norm_exponents;
pub use seminorm::{
    equicontinuity_check, seminorm_eval, EquiContinuityVerdict, Refutation, SeminormFamily, Status, Witness,
    DEFAULT_SCALING_BUDGET,
};
