//! Reliability of coherent systems whose components follow a
//! time-transformed exponential (TTE) model `TTE(W, R_1, ..., R_n)`:
//! joint survival `W(R_1(x_1) + ... + R_n(x_n))` with an Archimedean
//! generator `W` and aging functions `R_i`.
//!
//! - [`structure`]: coherent structures from minimal path sets.
//! - [`generators`]: Archimedean generators and their aging classes.
//! - [`tte`]: system survival, density and hazard.
//! - [`orders`]: grid checks of ST/HR/RHR/LR orders and of sufficient
//!   conditions for them.
//! - [`residual`]: residual lifetimes at the system and component level.
//! - [`mc_oracle`]: a seeded frailty sampler used as an independent oracle.
//! - [`spec`], [`cli`], [`figures`]: JSON model specs and the command line.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod figures;
pub mod generators;
pub mod mc_oracle;
pub mod orders;
pub mod residual;
pub mod spec;
pub mod structure;
pub mod tte;

pub use error::{Error, Result};
pub use generators::Generator;
pub use orders::{Grid, Order, OrderReport, Verdict};
pub use structure::{BuiltinStructure, Structure};
pub use tte::{AgingFunction, Lifetime, Target, TteModel};
