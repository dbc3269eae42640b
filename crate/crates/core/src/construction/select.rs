//! Frozen-set selection under per-user error budgets.

use super::genie::GenieEstimates;
use crate::error::{Error, Result};
use crate::mac_polar::{MacPolarCode, User};
use crate::trials::frozen_bits;

/// Relative slack when comparing a running sum against a budget, so that a
/// budget equal to a sum of estimates admits all of them.
const BUDGET_SLACK: f64 = 1e-12;

/// A selected code with the union bound of each user's chosen slots.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub code: MacPolarCode,
    pub p1: f64,
    pub p2: f64,
}

impl Selection {
    pub fn rates(&self) -> (f64, f64) {
        (self.code.rate(User::One), self.code.rate(User::Two))
    }
}

/// Greedy choice per user: slots in increasing estimated error (ties by slot
/// index) are taken while the running sum stays within that user's budget.
///
/// Frozen values are uniform random bits drawn from the estimates' seed. The
/// joint bit-channels are not symmetric in each user's input, so the
/// estimates (taken over uniform inputs) only describe codes whose frozen
/// bits are uniform too.
pub fn select_frozen_sets(est: &GenieEstimates, budget_1: f64, budget_2: f64) -> Result<Selection> {
    if !(budget_1 >= 0.0 && budget_2 >= 0.0) {
        return Err(Error::InvalidArgument("budgets must be nonnegative".into()));
    }
    let sch = &est.schedule;
    let mut info: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    let mut spent = [0.0f64; 2];
    for (k, (user, budget)) in [(User::One, budget_1), (User::Two, budget_2)].into_iter().enumerate() {
        let mut mine: Vec<_> = est.slots.iter().filter(|s| s.owner == user).collect();
        mine.sort_by(|a, b| a.first_error_prob().total_cmp(&b.first_error_prob()).then(a.slot.cmp(&b.slot)));
        for s in mine {
            let p = s.first_error_prob();
            if spent[k] + p > budget * (1.0 + BUDGET_SLACK) {
                break;
            }
            spent[k] += p;
            info[k].push(sch.slot(s.slot).polar_index);
        }
    }
    let [i1, i2] = info;
    let n = sch.n_user();
    let code = MacPolarCode::new(
        n,
        sch.order().clone(),
        i1,
        i2,
        frozen_bits(est.seed, 1, n),
        frozen_bits(est.seed, 2, n),
    )?;
    Ok(Selection { code, p1: spent[0], p2: spent[1] })
}
