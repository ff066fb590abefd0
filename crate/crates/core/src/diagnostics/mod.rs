//! Integral functionals and the checks built on them.

pub mod blowup_fit;
pub mod functionals;
pub mod identities;
pub mod inequalities;
pub mod report;
pub mod support;

pub use blowup_fit::{estimate_blowup, BlowupEstimate};
pub use functionals::{functionals, functionals_with, velocity_gradient, Region};
pub use identities::{check_identities, IdentityReport};
pub use inequalities::{
    check_inequalities, check_inequalities_with, conservation_checks, energy_monotone,
    entropy_monotone, interpolation_constant, k_plus, moment_interpolation_check,
    momentum_hypothesis, InequalityReport,
};
pub use report::{analyze, AnalysisSetup, Report};
pub use support::{propagation_checks, track_support};
