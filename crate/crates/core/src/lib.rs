//! Polar codes for two-user binary-input multiple access channels.
//!
//! Both users encode independently with `G^{⊗n}`; the receiver runs one joint
//! successive cancellation decoder whose schedule is set by a permutation of
//! the `2L` inputs of an `L`-use building block. Changing that permutation
//! moves the achieved rate pair along the dominant face of the uniform rate
//! region.
//!
//! Modules:
//! - [`channels`]: MAC and binary-input channel models, splitting/combining,
//!   mutual information, Bhattacharyya parameters, Gaussian quantization.
//! - [`polar`]: single-user transform, SC decoder, exact bit-channels.
//! - [`mac_polar`]: block orders, schedules, block rates, joint SC decoding.
//! - [`construction`]: genie-aided estimation, frozen-set selection, region
//!   sweeps, exact good sets.
//! - [`compound`]: compound-code time sharing.
//! - [`verification`]: exact-enumeration checks of the polarization lemmas.

pub mod channels;
pub mod compound;
pub mod construction;
pub mod error;
pub mod mac_polar;
pub mod polar;
pub mod report;
pub mod trials;
pub mod verification;

pub use error::{Error, Result};
