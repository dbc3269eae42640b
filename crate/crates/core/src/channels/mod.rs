//! Channel models, channel splitting and combining, and the information
//! functionals evaluated on them.

mod bimc;
mod file;
mod gaussian;
mod mac;
mod model;

pub use bimc::{combine_functionals, combine_minus, combine_plus, DiscreteBimc, Functionals, MERGE_RESOLUTION};
pub use file::{ChannelFile, LoadedChannel};
pub use gaussian::{bpsk, GaussianMac};
pub use mac::{DiscreteMac, RatePair, RegionVertices};
pub use model::{
    conditional_llr, ddot_llr, dot_llr, marginal_llr, ChannelModel, DiscreteSource, Observation, DEFAULT_BINS,
};

pub(crate) use bimc::pair_information;
pub(crate) use model::llr_from_logs;
