// `!(x < bound)` style guards are deliberate: they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod boundary;
pub mod dirichlet;
pub mod error;
pub mod jordan;
pub mod registry;
pub mod rh;
pub mod series;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
