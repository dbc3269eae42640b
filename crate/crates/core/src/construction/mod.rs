//! Code construction: genie-aided estimates of per-slot error probabilities,
//! greedy frozen-set selection under error budgets, exact good sets and
//! rate-region sweeps over decoding orders.

mod genie;
mod good;
mod region;
mod select;
mod simulate;

pub use genie::{genie_error_estimates, GenieEstimates, SlotEstimate};
pub use good::{good_sets_exact, GoodSets};
pub use region::{
    budget_splits, excess_over, region_from_estimates, region_sweep, RegionRecord, RegionReport, DEFAULT_SPLITS,
    REGION_CSV_HEADER,
};
pub use select::{select_frozen_sets, Selection};
pub use simulate::{simulate_fer, FerReport};
