//! Operational events and their localisation relative to a lab, with the
//! quantum switch models used to exercise them.
//!
//! * [`linalg`]: dense complex algebra over labelled composite spaces.
//! * [`lab`]: labs, relative events, and the measurability and localisation
//!   checks.
//! * [`switch`]: coarse, fine-grained, effective and routed descriptions of the
//!   quantum switch, and its process vector.
//! * [`atlas`]: concrete scenarios (switch realisations and the double slit)
//!   analysed with the checks.

pub mod atlas;
pub mod error;
pub mod lab;
pub mod linalg;
pub mod switch;

pub use error::{Error, Result};
