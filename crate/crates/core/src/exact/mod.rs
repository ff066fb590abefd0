//! Closed-form and semi-closed-form solution families.

pub mod haff;
pub mod ode;
pub mod profile;
pub mod roots;
pub mod singular;

pub use haff::{cooled_pressure, haff_temperature};
pub use profile::{
    automodel_eval, automodel_eval_with_slope, profile_dxi_dz, profile_xi_of_z, profile_z_of_xi,
    steady_state_eval, SteadyParams,
};
pub use singular::{
    integrate_singular, integrate_singular_with, singular_field_residual, singular_rhs,
    SingularPoint, SingularState, SingularThresholds, SingularTrajectory,
};
