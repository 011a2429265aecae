//! Certified rotation numbers for circle actions of the modular group
//! `Z/2 ∗ Z/3 = ⟨α, β | α² = β³ = 1⟩`, the Fuchsian action and its lifts, and
//! machine-checkable semi-conjugacy certificates.

pub mod actions;
pub mod circle;
pub mod cli;
pub mod error;
pub mod io;
pub mod rational;
pub mod semiconj;
pub mod words;

pub use error::{Error, Result};
