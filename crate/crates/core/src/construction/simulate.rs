//! End-to-end frame error simulation of a joint code.

use crate::channels::ChannelModel;
use crate::error::Result;
use crate::mac_polar::{mac_polar_encode, JointScDecoder, MacPolarCode, User};
use crate::trials::{run_trials, trial_rng, wilson_interval, Z95};
use rand::Rng;
use serde::Serialize;

/// Frame error counts of one simulation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FerReport {
    pub frames: u64,
    pub errors1: u64,
    pub errors2: u64,
    /// Frames in which at least one user is wrong.
    pub errors_any: u64,
    pub seed: u64,
}

impl FerReport {
    pub fn fer(&self, user: Option<User>) -> f64 {
        self.count(user) as f64 / self.frames as f64
    }

    /// Wilson 95% interval of a user's FER, or of the total FER for `None`.
    pub fn interval(&self, user: Option<User>) -> (f64, f64) {
        wilson_interval(self.count(user), self.frames, Z95)
    }

    fn count(&self, user: Option<User>) -> u64 {
        match user {
            Some(User::One) => self.errors1,
            Some(User::Two) => self.errors2,
            None => self.errors_any,
        }
    }
}

/// Sends `frames` frames with uniform information bits through `channel` and
/// decodes each with the joint SC decoder.
pub fn simulate_fer(code: &MacPolarCode, channel: &ChannelModel, frames: u64, seed: u64) -> Result<FerReport> {
    let proto = JointScDecoder::new(code.order().clone(), code.n_user())?;
    let (k1, k2) = (code.info_set(User::One).len(), code.info_set(User::Two).len());
    let counts = run_trials(
        frames,
        3,
        || proto.clone(),
        |dec, t, c| {
            let mut rng = trial_rng(seed, t);
            let a: Vec<u8> = (0..k1).map(|_| rng.random_range(0..2)).collect();
            let b: Vec<u8> = (0..k2).map(|_| rng.random_range(0..2)).collect();
            let (x1, x2) = mac_polar_encode(code, &a, &b).expect("info lengths match");
            let obs = channel.transmit(&x1, &x2, &mut rng).expect("equal lengths");
            let ll = channel.use_logliks(&obs).expect("matching observation");
            let out = dec.decode(code, &ll).expect("valid frame");
            let e1 = code.gather(User::One, &out.u) != a;
            let e2 = code.gather(User::Two, &out.v) != b;
            c[0] += u64::from(e1);
            c[1] += u64::from(e2);
            c[2] += u64::from(e1 || e2);
        },
    );
    Ok(FerReport { frames, errors1: counts[0], errors2: counts[1], errors_any: counts[2], seed })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::DiscreteMac;
    use crate::construction::{genie_error_estimates, select_frozen_sets};
    use crate::mac_polar::BlockOrder;

    #[test]
    fn noiseless_adder_zero_budget_code_is_error_free() {
        let ch = ChannelModel::discrete(DiscreteMac::adder());
        let o = BlockOrder::preset(2, 2).unwrap();
        let est = genie_error_estimates(16, &o, &ch, 2000, 9).unwrap();
        let sel = select_frozen_sets(&est, 0.0, 0.0).unwrap();
        let (r1, r2) = sel.rates();
        assert!(r1 + r2 > 0.5);
        let rep = simulate_fer(&sel.code, &ch, 500, 1).unwrap();
        assert_eq!(rep.errors_any, 0);
        assert_eq!(rep.interval(None).0, 0.0);
    }

    #[test]
    fn gaussian_fer_within_union_bound() {
        let ch = ChannelModel::gaussian(1.0).unwrap();
        let o = BlockOrder::preset(2, 1).unwrap();
        let est = genie_error_estimates(64, &o, &ch, 4000, 2).unwrap();
        let sel = select_frozen_sets(&est, 0.02, 0.02).unwrap();
        let rep = simulate_fer(&sel.code, &ch, 2000, 3).unwrap();
        assert_eq!(rep, simulate_fer(&sel.code, &ch, 2000, 3).unwrap());
        let bound = sel.p1 + sel.p2;
        let se = (bound * (1.0 - bound) / 2000.0).sqrt();
        assert!(rep.fer(None) <= bound + 3.0 * se + 0.01, "{rep:?} vs {bound}");
    }
}
