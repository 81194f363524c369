//! Machine-checked verdicts on whether finite group actions on closed
//! surfaces extend over a compact 3-manifold.
//!
//! Actions are surface-kernel epimorphisms from Fuchsian groups onto explicit
//! permutation groups ([`fuchsian`], [`group`]). Non-bounding is proved by the
//! axis-closure obstruction ([`bounding`]), possibly after restricting to a
//! subgroup ([`subactions`]); bounding is proved by checkable certificates
//! ([`certs`]). [`report`] reproduces the genus-3 and genus-4 tables.

pub mod bounding;
pub mod certs;
pub mod error;
pub mod fuchsian;
pub mod group;
pub mod report;
pub mod subactions;

pub use error::{Error, Result};
