//! Front propagation for a KPP field coupled to a line with fast diffusion,
//! transport and reaction.
//!
//! The crate is organised around the three ways of looking at the problem:
//!
//! - [`dispersion`] computes the critical plane-wave speeds `w*±` from the
//!   geometry of exponential solutions of the linearised system, together
//!   with the closed-form enhancement threshold and the large-`D` / large-`q`
//!   scaling constants.
//! - [`stationary`] computes the positive bounded `x`-independent stationary
//!   state `(U, V(y))` by an energy root and by shooting.
//! - [`simulator`] integrates the full road–field system with an explicit
//!   monotone finite-difference scheme and measures empirical front speeds.
//!
//! [`model`] holds the parameters and reaction terms shared by all of them and
//! [`cli`] ties everything to a config file and CSV/SVG outputs.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod dispersion;
pub mod error;
pub mod model;
pub mod numeric;
pub mod simulator;
pub mod stationary;

pub use error::{Error, Result};
pub use model::{kpp_speed, Direction, FieldReaction, ModelParams, RoadReaction};
