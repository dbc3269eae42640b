//! Exact good sets from bit-channel Bhattacharyya parameters.

use crate::channels::DiscreteMac;
use crate::error::Result;
use crate::mac_polar::{exact_mac_bit_functionals, BlockOrder, Schedule, User};

/// Slots of each user whose bit-channel has `Z` below a threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodSets {
    pub n_user: usize,
    pub g1: Vec<usize>,
    pub g2: Vec<usize>,
}

impl GoodSets {
    /// `(|G1| / N, |G2| / N)`.
    pub fn fractions(&self) -> (f64, f64) {
        let n = self.n_user as f64;
        (self.g1.len() as f64 / n, self.g2.len() as f64 / n)
    }
}

/// Good slots at per-user length `2^n`, computed from the exact joint
/// bit-channels.
pub fn good_sets_exact(w: &DiscreteMac, order: &BlockOrder, n: u32, z_threshold: f64) -> Result<GoodSets> {
    let sch = Schedule::new(1 << n, order.clone())?;
    let funcs = exact_mac_bit_functionals(w, order, n)?;
    let (mut g1, mut g2) = (Vec::new(), Vec::new());
    for (slot, (info, f)) in sch.iter().zip(&funcs).enumerate() {
        if f.bhattacharyya < z_threshold {
            match info.owner {
                User::One => g1.push(slot),
                User::Two => g2.push(slot),
            }
        }
    }
    Ok(GoodSets { n_user: 1 << n, g1, g2 })
}
