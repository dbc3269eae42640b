//! Single-user polar machinery: the `G^{⊗n}` transform, successive
//! cancellation decoding and exact bit-channel enumeration.

mod exact;
mod sc;
mod transform;

pub use exact::{exact_bit_channel_functionals, exact_bit_channels, MAX_ALPHABET, MAX_EXACT_ORDER};
pub use sc::{bit_node, check_node, hard_decision, sc_decode, CheckRule, FrozenSpec, ScDecoder, LLR_CLAMP, LLR_TIE};
pub use transform::{polar_encode, polar_transform_in_place, TransformOrder};
