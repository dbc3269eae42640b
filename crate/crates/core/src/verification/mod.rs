//! Exact-enumeration checks of the polarization lemmas and of the pairwise
//! polarization example built from a single-user channel.

mod brute;
mod lemmas;
mod sty;

pub use brute::{JointEnumeration, MAX_BRUTE_LEN, MAX_ENUMERATION};
pub use lemmas::{verify_chain_rules, verify_channel_split, verify_recursion_split, LemmaReport};
pub use sty::{
    build_sty_example, mac_combine_minus, mac_combine_plus, pair_bit_channels, sty_triples, verify_sty_identities,
    StyTriple,
};
