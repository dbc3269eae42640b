//! Genie-aided Monte-Carlo estimates of per-slot first-error probabilities.

use crate::channels::ChannelModel;
use crate::error::{Error, Result};
use crate::mac_polar::{BlockOrder, JointScDecoder, Schedule, User};
use crate::polar::polar_transform_in_place;
use crate::report::{csv_line, fmt_sig};
use crate::trials::{run_trials, trial_rng};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Estimated probability that slot `slot` is decided wrongly when every
/// earlier slot is supplied correctly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlotEstimate {
    pub slot: usize,
    pub owner: User,
    pub errors: u64,
    pub trials: u64,
}

impl SlotEstimate {
    pub fn first_error_prob(&self) -> f64 {
        self.errors as f64 / self.trials as f64
    }

    /// Binomial standard error of the estimate.
    pub fn std_error(&self) -> f64 {
        let p = self.first_error_prob();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// No error was observed; the estimate is reported as zero.
    pub fn is_zero_count(&self) -> bool {
        self.errors == 0
    }
}

/// One estimate per schedule slot of a joint code.
#[derive(Debug, Clone, PartialEq)]
pub struct GenieEstimates {
    pub schedule: Schedule,
    pub seed: u64,
    pub slots: Vec<SlotEstimate>,
}

impl GenieEstimates {
    pub fn trials(&self) -> u64 {
        self.slots.first().map_or(0, |s| s.trials)
    }

    /// `slot,owner,err_prob,trials`.
    pub fn to_csv(&self) -> String {
        let mut out = csv_line(&["slot", "owner", "err_prob", "trials"].map(String::from));
        for s in &self.slots {
            out += &csv_line(&[
                s.slot.to_string(),
                s.owner.number().to_string(),
                fmt_sig(s.first_error_prob(), 6),
                s.trials.to_string(),
            ]);
        }
        out
    }
}

/// Runs `trials` genie-aided joint decodes with uniform inputs for both users
/// (nothing frozen) and counts, per slot, decisions that differ from the true
/// bit.
pub fn genie_error_estimates(
    n_user: usize,
    order: &BlockOrder,
    channel: &ChannelModel,
    trials: u64,
    seed: u64,
) -> Result<GenieEstimates> {
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    let schedule = Schedule::new(n_user, order.clone())?;
    let proto = JointScDecoder::new(order.clone(), n_user)?;
    let counts = run_trials(
        trials,
        2 * n_user,
        || proto.clone(),
        |dec, t, counts| {
            let mut rng = trial_rng(seed, t);
            let u: Vec<u8> = (0..n_user).map(|_| rng.random_range(0..2)).collect();
            let v: Vec<u8> = (0..n_user).map(|_| rng.random_range(0..2)).collect();
            let (mut x1, mut x2) = (u.clone(), v.clone());
            polar_transform_in_place(&mut x1);
            polar_transform_in_place(&mut x2);
            let obs = channel.transmit(&x1, &x2, &mut rng).expect("equal lengths");
            let ll = channel.use_logliks(&obs).expect("matching observation");
            let out = dec.decode_genie(&ll, &u, &v).expect("valid frame");
            for (c, e) in counts.iter_mut().zip(out.errors()) {
                *c += u64::from(e);
            }
        },
    );
    let slots = schedule
        .iter()
        .zip(counts)
        .enumerate()
        .map(|(slot, (info, errors))| SlotEstimate { slot, owner: info.owner, errors, trials })
        .collect();
    Ok(GenieEstimates { schedule, seed, slots })
}
