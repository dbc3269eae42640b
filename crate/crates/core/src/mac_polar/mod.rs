//! Two-user polar coding with a tunable building-block decoding order.
//!
//! Each user applies `G^{⊗n}` to its own `N` inputs. Since
//! `G^{⊗n} = G^{⊗l} ⊗ G^{⊗(n-l)}`, the `N` channel uses split into `N/L`
//! building blocks, block `t` holding uses `t, t + N/L, t + 2N/L, ...`. The
//! `2L` block inputs are decided in the order given by a [`BlockOrder`];
//! input `k` of all blocks forms one super-channel, decoded by an outer
//! length-`N/L` SC pass.

mod block;
mod code;
mod decoder;
mod order;

pub use block::{
    block_rates, block_rates_for_order, building_block_channels, building_block_functionals, exact_mac_bit_channels,
    exact_mac_bit_functionals, BlockRateProfile, MAX_BLOCK_TERMS,
};
pub use code::{mac_polar_encode, MacPolarCode};
pub use decoder::{joint_sc_decode, DecodeStats, GenieOutcome, JointDecision, JointScDecoder};
pub use order::{enumerate_monotone_orders, BlockOrder, Label, Schedule, SlotInfo, User, MAX_ENUMERATED_BLOCK};
