//! Finite-volume simulation, exact solutions and integral diagnostics for the
//! equations of ideal granular hydrodynamics in one space dimension.
//!
//! ```text
//! rho_t + (rho u)_x = 0
//! (rho u)_t + (rho u^2 + p)_x = 0
//! p_t + u p_x + gamma p u_x = -lambda rho^(1/2) p^(3/2),      p = rho T
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod blowup;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod exact;
pub mod hydro;
pub mod io;
pub mod par;
pub mod solver;

pub use blowup::{BlowupReport, BlowupTrigger};
pub use error::{Error, Result};
pub use hydro::{
    conserved_to_primitive, entropy_k, primitive_to_conserved, Balance, Conserved,
    ConservedField, DiagnosticRecord, Floors, GasParams, Grid1D, Primitive, PrimitiveField,
};
pub use par::ExecMode;
