//! Time sharing between the two corner points, with a compound polar code of
//! length `2N` for the second user.
//!
//! Block 1 decodes user 1 first (user 1 sees `Ẇ`, user 2 sees `Ẅ`); block 2
//! swaps the roles. User 1 sends two length-`N` codewords `C1` (for `Ẇ`) and
//! `C2` (for `Ẅ`); user 2 sends one length-`2N` codeword whose first `N`
//! positions travel in block 1 and last `N` in block 2. The decoder runs
//! `C1`, then the compound code, then `C2`.

use crate::channels::{combine_minus, combine_plus, conditional_llr, marginal_llr, ChannelModel, DiscreteBimc};
use crate::construction::SlotEstimate;
use crate::error::{Error, Result};
use crate::mac_polar::User;
use crate::polar::{
    exact_bit_channels, hard_decision, polar_transform_in_place, CheckRule, FrozenSpec, ScDecoder, TransformOrder,
};
use crate::report::{csv_line, fmt_sig};
use crate::trials::{frozen_bits, run_trials, trial_rng, wilson_interval, Z95};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// What the decoder knows about the other user when forming a bit's LLR.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Evidence {
    /// The other user's bit is unknown and uniform (`Ẇ`).
    Marginal,
    /// The other user's bit is known (`Ẅ`).
    Conditional,
}

/// Leaf channels of the compound code: positions `0..N` see `Ẅ`, positions
/// `N..2N` see `Ẇ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MultiChannelAssignment {
    half: usize,
}

impl MultiChannelAssignment {
    pub fn new(half: usize) -> Result<Self> {
        if !half.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("half length {half} is not a power of two")));
        }
        Ok(Self { half })
    }

    pub fn half(&self) -> usize {
        self.half
    }

    pub fn len(&self) -> usize {
        2 * self.half
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn leaf(&self, position: usize) -> Evidence {
        if position < self.half {
            Evidence::Conditional
        } else {
            Evidence::Marginal
        }
    }
}

/// A single-user polar code: information positions and frozen bits.
#[derive(Debug, Clone, PartialEq)]
pub struct SingleUserCode {
    info: Vec<usize>,
    frozen: FrozenSpec,
}

impl SingleUserCode {
    /// Frozen bits are zero.
    pub fn new(len: usize, info: Vec<usize>) -> Result<Self> {
        Self::with_frozen(len, info, vec![0; len])
    }

    /// `frozen[i]` is used at every position `i` outside `info`.
    pub fn with_frozen(len: usize, mut info: Vec<usize>, frozen: Vec<u8>) -> Result<Self> {
        if !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("block length {len} is not a power of two")));
        }
        info.sort_unstable();
        info.dedup();
        if info.last().is_some_and(|&i| i >= len) {
            return Err(Error::InvalidCode("information position out of range".into()));
        }
        if frozen.len() != len {
            return Err(Error::LengthMismatch { expected: len, got: frozen.len() });
        }
        let mut bits: Vec<Option<u8>> = frozen.iter().map(|&b| Some(b & 1)).collect();
        for &i in &info {
            bits[i] = None;
        }
        Ok(Self { info, frozen: FrozenSpec::new(bits) })
    }

    pub fn len(&self) -> usize {
        self.frozen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frozen.is_empty()
    }

    pub fn info_set(&self) -> &[usize] {
        &self.info
    }

    pub fn rate(&self) -> f64 {
        self.info.len() as f64 / self.len() as f64
    }

    pub fn encode(&self, info_bits: &[u8]) -> Result<Vec<u8>> {
        if info_bits.len() != self.info.len() {
            return Err(Error::LengthMismatch { expected: self.info.len(), got: info_bits.len() });
        }
        let mut x: Vec<u8> = (0..self.len()).map(|i| self.frozen.get(i).unwrap_or(0)).collect();
        for (&i, &b) in self.info.iter().zip(info_bits) {
            x[i] = b & 1;
        }
        polar_transform_in_place(&mut x);
        Ok(x)
    }

    /// Decodes `llrs`, returning the information bits and the re-encoded
    /// codeword.
    fn decode(&self, dec: &mut ScDecoder, llrs: &[f64]) -> (Vec<u8>, Vec<u8>) {
        let mut u = vec![0u8; self.len()];
        let mut x = vec![0u8; self.len()];
        dec.run(llrs, &mut x, |i, llr| {
            u[i] = self.frozen.get(i).unwrap_or_else(|| hard_decision(llr));
            u[i]
        });
        (self.info.iter().map(|&i| u[i]).collect(), x)
    }
}

/// Greedy single-user selection: positions in increasing estimated error
/// (ties by position) while the sum stays within `budget`. Frozen bits are
/// uniform random bits drawn from `seed`. Returns the code and the union
/// bound of its positions.
pub fn select_single(estimates: &[SlotEstimate], budget: f64, seed: u64) -> Result<(SingleUserCode, f64)> {
    if budget.is_nan() || budget < 0.0 {
        return Err(Error::InvalidArgument("budget must be nonnegative".into()));
    }
    let mut order: Vec<_> = estimates.iter().collect();
    order.sort_by(|a, b| a.first_error_prob().total_cmp(&b.first_error_prob()).then(a.slot.cmp(&b.slot)));
    let mut spent = 0.0;
    let mut info = Vec::new();
    for s in order {
        let p = s.first_error_prob();
        if spent + p > budget * (1.0 + 1e-12) {
            break;
        }
        spent += p;
        info.push(s.slot);
    }
    let len = estimates.len();
    Ok((SingleUserCode::with_frozen(len, info, frozen_bits(seed, 0, len))?, spent))
}

fn uniform_bits(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random_range(0..2)).collect()
}

fn llrs(ll: &[[f64; 4]], user: User, evidence: Evidence, other: &[u8]) -> Vec<f64> {
    match evidence {
        Evidence::Marginal => ll.iter().map(|l| marginal_llr(l, user)).collect(),
        Evidence::Conditional => ll.iter().zip(other).map(|(l, &o)| conditional_llr(l, user, o)).collect(),
    }
}

/// Sends `x` for `user` and `other` for the other user through one block.
fn send(model: &ChannelModel, user: User, x: &[u8], other: &[u8], rng: &mut ChaCha8Rng) -> Vec<[f64; 4]> {
    let (x1, x2) = match user {
        User::One => (x, other),
        User::Two => (other, x),
    };
    let obs = model.transmit(x1, x2, rng).expect("equal lengths");
    model.use_logliks(&obs).expect("matching observation")
}

/// Genie-aided SC over `trials` frames; `frame` draws the true input vector
/// and its leaf LLRs.
fn genie_estimate<F>(len: usize, owner: User, trials: u64, seed: u64, frame: F) -> Result<Vec<SlotEstimate>>
where
    F: Fn(&mut ChaCha8Rng) -> (Vec<u8>, Vec<f64>) + Sync,
{
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is required".into()));
    }
    if !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("block length {len} is not a power of two")));
    }
    let counts = run_trials(
        trials,
        len,
        || (ScDecoder::new(len, CheckRule::Exact), vec![0u8; len]),
        |(dec, x), t, counts| {
            let mut rng = trial_rng(seed, t);
            let (u, l) = frame(&mut rng);
            dec.run(&l, x, |i, llr| {
                counts[i] += u64::from(hard_decision(llr) != u[i]);
                u[i]
            });
        },
    );
    Ok(counts
        .into_iter()
        .enumerate()
        .map(|(slot, errors)| SlotEstimate { slot, owner, errors, trials })
        .collect())
}

/// Genie estimates of a length-`len` polar code for `user` over the
/// single-user channel given by `evidence`; the other user's inputs are
/// uniform and, for [`Evidence::Conditional`], known.
pub fn single_user_estimates(
    len: usize,
    model: &ChannelModel,
    user: User,
    evidence: Evidence,
    trials: u64,
    seed: u64,
) -> Result<Vec<SlotEstimate>> {
    genie_estimate(len, user, trials, seed, |rng| {
        let u = uniform_bits(rng, len);
        let mut x = u.clone();
        polar_transform_in_place(&mut x);
        let other = uniform_bits(rng, len);
        let ll = send(model, user, &x, &other, rng);
        (u, llrs(&ll, user, evidence, &other))
    })
}

/// Genie estimates of user 2's length-`2N` compound code: the first `N`
/// codeword positions carry `Ẅ` evidence (user 1's block-1 bits supplied by
/// the genie), the last `N` carry `Ẇ` evidence.
pub fn compound_bit_estimates(n: usize, model: &ChannelModel, trials: u64, seed: u64) -> Result<Vec<SlotEstimate>> {
    let assign = MultiChannelAssignment::new(n)?;
    genie_estimate(assign.len(), User::Two, trials, seed, |rng| {
        let v = uniform_bits(rng, 2 * n);
        let mut x = v.clone();
        polar_transform_in_place(&mut x);
        let mut l = Vec::with_capacity(2 * n);
        for (b, half) in x.chunks(n).enumerate() {
            let other = uniform_bits(rng, n);
            let ll = send(model, User::Two, half, &other, rng);
            l.extend(llrs(&ll, User::Two, assign.leaf(b * n), &other));
        }
        (v, l)
    })
}

/// Exact bit-channels of the length-`2^(n+1)` compound transform whose first
/// half of leaves is `first` and second half `second`. The outermost level
/// pairs leaf `i` with leaf `i + N`, so positions `0..N` are the length-`N`
/// bit-channels of `first ⊞ second` and positions `N..2N` those of
/// `first ⊛ second`.
pub fn compound_bit_channels_exact(first: &DiscreteBimc, second: &DiscreteBimc, n: u32) -> Result<Vec<DiscreteBimc>> {
    let order = TransformOrder::new(n);
    let (a, b) = (first.merged(), second.merged());
    let mut out = exact_bit_channels(&combine_minus(&a, &b).merged(), order)?;
    out.extend(exact_bit_channels(&combine_plus(&a, &b).merged(), order)?);
    Ok(out)
}

/// User 1's codes `C1` (block 1, `Ẇ`) and `C2` (block 2, `Ẅ`) and user 2's
/// compound code.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeshareCodes {
    pub c1: SingleUserCode,
    pub c2: SingleUserCode,
    pub compound: SingleUserCode,
}

impl TimeshareCodes {
    pub fn new(c1: SingleUserCode, c2: SingleUserCode, compound: SingleUserCode) -> Result<Self> {
        let n = c1.len();
        if c2.len() != n || compound.len() != 2 * n {
            return Err(Error::InvalidCode(format!(
                "expected lengths (N, N, 2N), got ({}, {}, {})",
                c1.len(),
                c2.len(),
                compound.len()
            )));
        }
        Ok(Self { c1, c2, compound })
    }

    /// Builds all three codes from genie estimates, each within `budget`.
    pub fn construct(n: usize, model: &ChannelModel, budget: f64, trials: u64, seed: u64) -> Result<Self> {
        let e1 = single_user_estimates(n, model, User::One, Evidence::Marginal, trials, seed)?;
        let e2 = single_user_estimates(n, model, User::One, Evidence::Conditional, trials, seed)?;
        let ec = compound_bit_estimates(n, model, trials, seed)?;
        Self::new(
            select_single(&e1, budget, seed)?.0,
            select_single(&e2, budget, seed.wrapping_add(1))?.0,
            select_single(&ec, budget, seed.wrapping_add(2))?.0,
        )
    }

    /// `(R(C1), R(C2), R(compound))`.
    pub fn rates(&self) -> [f64; 3] {
        [self.c1.rate(), self.c2.rate(), self.compound.rate()]
    }
}

/// Frame errors of the three-stage pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PipelineReport {
    pub frames: u64,
    /// Frames where `C1` or `C2` is wrong.
    pub errors1: u64,
    /// Frames where the compound codeword is wrong.
    pub errors2: u64,
    pub rates: [f64; 3],
    pub seed: u64,
}

impl PipelineReport {
    pub fn fer(&self, user: User) -> f64 {
        self.count(user) as f64 / self.frames as f64
    }

    pub fn interval(&self, user: User) -> (f64, f64) {
        wilson_interval(self.count(user), self.frames, Z95)
    }

    fn count(&self, user: User) -> u64 {
        match user {
            User::One => self.errors1,
            User::Two => self.errors2,
        }
    }
}

/// Simulates `frames` pairs of transmission blocks and decodes `C1`, the
/// compound code and `C2` in turn, each stage using the previous stage's
/// decisions.
pub fn timeshare_pipeline(codes: &TimeshareCodes, model: &ChannelModel, frames: u64, seed: u64) -> Result<PipelineReport> {
    run_pipeline(codes, model, frames, seed, false)
}

/// As [`timeshare_pipeline`], but the first re-encoded bit of `C1` is
/// flipped before the later stages use it.
pub fn timeshare_pipeline_corrupted(
    codes: &TimeshareCodes,
    model: &ChannelModel,
    frames: u64,
    seed: u64,
) -> Result<PipelineReport> {
    run_pipeline(codes, model, frames, seed, true)
}

fn run_pipeline(codes: &TimeshareCodes, model: &ChannelModel, frames: u64, seed: u64, corrupt: bool) -> Result<PipelineReport> {
    let codes = TimeshareCodes::new(codes.c1.clone(), codes.c2.clone(), codes.compound.clone())?;
    let n = codes.c1.len();
    let (k1, k2, kc) = (codes.c1.info.len(), codes.c2.info.len(), codes.compound.info.len());
    let counts = run_trials(
        frames,
        2,
        || (ScDecoder::new(n, CheckRule::Exact), ScDecoder::new(2 * n, CheckRule::Exact)),
        |(short, long), t, c| {
            let mut rng = trial_rng(seed, t);
            let a1 = uniform_bits(&mut rng, k1);
            let a2 = uniform_bits(&mut rng, k2);
            let b = uniform_bits(&mut rng, kc);
            let x1a = codes.c1.encode(&a1).expect("info length");
            let x1b = codes.c2.encode(&a2).expect("info length");
            let xc = codes.compound.encode(&b).expect("info length");
            let ll1 = send(model, User::One, &x1a, &xc[..n], &mut rng);
            let ll2 = send(model, User::One, &x1b, &xc[n..], &mut rng);

            let (d1, mut y1a) = codes.c1.decode(short, &llrs(&ll1, User::One, Evidence::Marginal, &[]));
            if corrupt {
                y1a[0] ^= 1;
            }
            let mut lc = llrs(&ll1, User::Two, Evidence::Conditional, &y1a);
            lc.extend(llrs(&ll2, User::Two, Evidence::Marginal, &[]));
            let (dc, yc) = codes.compound.decode(long, &lc);
            let (d2, _) = codes.c2.decode(short, &llrs(&ll2, User::One, Evidence::Conditional, &yc[n..]));

            c[0] += u64::from(d1 != a1 || d2 != a2);
            c[1] += u64::from(dc != b);
        },
    );
    Ok(PipelineReport { frames, errors1: counts[0], errors2: counts[1], rates: codes.rates(), seed })
}

/// One row of the compound-rate comparison.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateRow {
    pub n: usize,
    /// Mean of the `Ẇ` and `Ẅ` code rates at length `2N`.
    pub rate_2n: f64,
    /// The same at length `N`.
    pub rate_n: f64,
    /// Rate of the length-`2N` compound code.
    pub rate_compound: f64,
}

pub const TABLE_CSV_HEADER: &str = "N,rate_2N,rate_N,rate_compound";

pub fn table_csv(rows: &[RateRow]) -> String {
    let mut out = format!("{TABLE_CSV_HEADER}\n");
    for r in rows {
        out += &csv_line(&[r.n.to_string(), fmt_sig(r.rate_2n, 6), fmt_sig(r.rate_n, 6), fmt_sig(r.rate_compound, 6)]);
    }
    out
}

fn mean_corner_rate(len: usize, model: &ChannelModel, budget: f64, trials: u64, seed: u64) -> Result<f64> {
    let dot = single_user_estimates(len, model, User::One, Evidence::Marginal, trials, seed)?;
    let ddot = single_user_estimates(len, model, User::Two, Evidence::Conditional, trials, seed)?;
    Ok(0.5 * (select_single(&dot, budget, seed)?.0.rate() + select_single(&ddot, budget, seed)?.0.rate()))
}

/// For each `N`: the mean of the separately constructed `Ẇ`/`Ẅ` rates at
/// lengths `2N` and `N`, and the compound rate at `2N`; every code is held to
/// `budget`.
pub fn compound_rate_table(n_list: &[usize], model: &ChannelModel, budget: f64, trials: u64, seed: u64) -> Result<Vec<RateRow>> {
    n_list
        .iter()
        .map(|&n| {
            let comp = compound_bit_estimates(n, model, trials, seed)?;
            Ok(RateRow {
                n,
                rate_2n: mean_corner_rate(2 * n, model, budget, trials, seed)?,
                rate_n: mean_corner_rate(n, model, budget, trials, seed)?,
                rate_compound: select_single(&comp, budget, seed)?.0.rate(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::{DiscreteBimc, DiscreteMac};

    #[test]
    fn assignment_halves() {
        let a = MultiChannelAssignment::new(4).unwrap();
        let cond = (0..a.len()).filter(|&i| a.leaf(i) == Evidence::Conditional).count();
        assert_eq!(cond, 4);
        assert_eq!(a.leaf(3), Evidence::Conditional);
        assert_eq!(a.leaf(4), Evidence::Marginal);
    }

    #[test]
    fn code_encode_round_trip() {
        let c = SingleUserCode::new(8, vec![7, 3, 5]).unwrap();
        assert_eq!(c.info_set(), &[3, 5, 7]);
        let x = c.encode(&[1, 0, 1]).unwrap();
        let llrs: Vec<f64> = x.iter().map(|&b| if b == 1 { -10.0 } else { 10.0 }).collect();
        let (d, y) = c.decode(&mut ScDecoder::new(8, CheckRule::Exact), &llrs);
        assert_eq!(d, vec![1, 0, 1]);
        assert_eq!(y, x);
    }

    #[test]
    fn noiseless_pipeline_is_error_free() {
        let model = ChannelModel::discrete(crate::verification::build_sty_example(&DiscreteBimc::noiseless()));
        let codes = TimeshareCodes::construct(16, &model, 0.0, 200, 1).unwrap();
        assert_eq!(codes.rates(), [1.0, 1.0, 1.0]);
        let rep = timeshare_pipeline(&codes, &model, 200, 2).unwrap();
        assert_eq!((rep.errors1, rep.errors2), (0, 0));
    }

    #[test]
    fn pipeline_is_deterministic_and_corruption_hurts() {
        let model = ChannelModel::gaussian(1.0).unwrap();
        let codes = TimeshareCodes::construct(32, &model, 1e-2, 2000, 3).unwrap();
        let a = timeshare_pipeline(&codes, &model, 1000, 4).unwrap();
        assert_eq!(a, timeshare_pipeline(&codes, &model, 1000, 4).unwrap());
        let b = timeshare_pipeline_corrupted(&codes, &model, 1000, 4).unwrap();
        assert!(b.errors2 >= a.errors2);
    }

    #[test]
    fn adder_compound_estimates_shape() {
        let model = ChannelModel::discrete(DiscreteMac::adder());
        let est = compound_bit_estimates(8, &model, 1000, 5).unwrap();
        assert_eq!(est.len(), 16);
        assert!(est.iter().all(|s| s.owner == User::Two && s.first_error_prob() <= 0.6));
        let rows = compound_rate_table(&[8], &model, 1e-2, 1000, 5).unwrap();
        assert!(table_csv(&rows).starts_with("N,rate_2N,rate_N,rate_compound\n"));
    }
}
