//! Joint successive cancellation decoding of both users.

use super::block::block_inputs;
use super::code::MacPolarCode;
use super::order::{BlockOrder, Schedule, SlotInfo, User};
use crate::channels::{llr_from_logs, ChannelModel, Observation};
use crate::error::{Error, Result};
use crate::polar::{hard_decision, CheckRule, ScDecoder};

/// Output of a joint decode. `decisions[j]` is the bit committed at
/// schedule slot `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointDecision {
    pub u: Vec<u8>,
    pub v: Vec<u8>,
    pub decisions: Vec<u8>,
}

/// Genie-aided pass: the decoder's own hard decision and LLR at every slot
/// given the true prefix.
#[derive(Debug, Clone, PartialEq)]
pub struct GenieOutcome {
    pub raw: Vec<u8>,
    pub llrs: Vec<f64>,
    pub truth: Vec<u8>,
}

impl GenieOutcome {
    pub fn errors(&self) -> impl Iterator<Item = bool> + '_ {
        self.raw.iter().zip(&self.truth).map(|(a, b)| a != b)
    }
}

/// Work counters accumulated over all frames decoded so far.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DecodeStats {
    pub frames: u64,
    /// Check- and bit-node updates in the outer SC passes.
    pub outer_ops: u64,
    /// Terms summed while building block likelihood tables.
    pub table_terms: u64,
    /// Table entries visited while marginalizing undecided block inputs.
    pub marginal_terms: u64,
}

/// `ln sum exp(xs)`; `-inf` for an empty or all-impossible slice.
fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + xs.iter().map(|&x| (x - m).exp()).sum::<f64>().ln()
}

/// Reusable joint decoder for one `(N, order)` pair.
#[derive(Debug, Clone)]
pub struct JointScDecoder {
    schedule: Schedule,
    inputs: Vec<u8>,
    outer: ScDecoder,
    tables: Vec<f64>,
    prefix: Vec<usize>,
    leaf: Vec<f64>,
    reenc: Vec<u8>,
    stats: DecodeStats,
}

impl JointScDecoder {
    pub fn new(order: BlockOrder, n_user: usize) -> Result<Self> {
        Self::with_rule(order, n_user, CheckRule::Exact)
    }

    pub fn with_rule(order: BlockOrder, n_user: usize, rule: CheckRule) -> Result<Self> {
        let inputs = block_inputs(&order);
        let schedule = Schedule::new(n_user, order)?;
        let w = schedule.outer_len();
        let words = 1usize << (2 * schedule.order().l());
        Ok(Self {
            inputs,
            outer: ScDecoder::new(w, rule),
            tables: vec![0.0; w * words],
            prefix: vec![0; w],
            leaf: vec![0.0; w],
            reenc: vec![0; w],
            schedule,
            stats: DecodeStats::default(),
        })
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn stats(&self) -> DecodeStats {
        let mut s = self.stats;
        s.outer_ops = self.outer.ops();
        s
    }

    /// Runs the schedule over per-use log-likelihoods. `decide(j, slot, llr)`
    /// returns the bit committed at slot `j`.
    pub fn run<F>(&mut self, logliks: &[[f64; 4]], mut decide: F) -> Result<JointDecision>
    where
        F: FnMut(usize, SlotInfo, f64) -> u8,
    {
        let n = self.schedule.n_user();
        if logliks.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: logliks.len() });
        }
        let l = self.schedule.order().l();
        let w = self.schedule.outer_len();
        let width = 2 * l;
        let words = 1usize << width;

        // block t collects channel uses b * w + t
        for t in 0..w {
            let table = &mut self.tables[t * words..(t + 1) * words];
            for (d, entry) in table.iter_mut().enumerate() {
                let ins = &self.inputs[d * l..(d + 1) * l];
                *entry = ins.iter().enumerate().map(|(b, &i)| logliks[b * w + t][i as usize]).sum();
            }
        }
        self.stats.table_terms += (w * words * l) as u64;
        self.prefix.fill(0);

        let mut decisions = vec![0u8; 2 * n];
        let mut u = vec![0u8; n];
        let mut v = vec![0u8; n];
        for k in 0..width {
            let size = 1usize << (width - k);
            let half = size / 2;
            for t in 0..w {
                let base = t * words + (self.prefix[t] << (width - k));
                let r = &self.tables[base..base + size];
                self.leaf[t] = llr_from_logs(log_sum_exp(&r[..half]), log_sum_exp(&r[half..]));
            }
            self.stats.marginal_terms += (w * size) as u64;
            let schedule = &self.schedule;
            self.outer.run(&self.leaf, &mut self.reenc, |m, llr| {
                let j = k * w + m;
                let info = schedule.slot(j);
                let b = decide(j, info, llr) & 1;
                decisions[j] = b;
                match info.owner {
                    User::One => u[info.polar_index] = b,
                    User::Two => v[info.polar_index] = b,
                }
                b
            });
            for (p, &x) in self.prefix.iter_mut().zip(&self.reenc) {
                *p = (*p << 1) | x as usize;
            }
        }
        self.stats.frames += 1;
        Ok(JointDecision { u, v, decisions })
    }

    /// Standard decoding: frozen slots echo the owner's frozen value.
    pub fn decode(&mut self, code: &MacPolarCode, logliks: &[[f64; 4]]) -> Result<JointDecision> {
        if code.schedule() != &self.schedule {
            return Err(Error::InvalidCode("code schedule differs from the decoder's".into()));
        }
        let frozen = [code.frozen_spec(User::One), code.frozen_spec(User::Two)];
        self.run(logliks, |_, info, llr| {
            frozen[(info.owner.number() - 1) as usize]
                .get(info.polar_index)
                .unwrap_or_else(|| hard_decision(llr))
        })
    }

    /// Genie-aided pass: every slot is decided, the mismatch recorded, and the
    /// true bit committed before moving on.
    pub fn decode_genie(&mut self, logliks: &[[f64; 4]], u_true: &[u8], v_true: &[u8]) -> Result<GenieOutcome> {
        let n = self.schedule.n_user();
        for x in [u_true, v_true] {
            if x.len() != n {
                return Err(Error::LengthMismatch { expected: n, got: x.len() });
            }
        }
        let mut raw = vec![0u8; 2 * n];
        let mut llrs = vec![0.0; 2 * n];
        let out = self.run(logliks, |j, info, llr| {
            raw[j] = hard_decision(llr);
            llrs[j] = llr;
            match info.owner {
                User::One => u_true[info.polar_index],
                User::Two => v_true[info.polar_index],
            }
        })?;
        Ok(GenieOutcome { raw, llrs, truth: out.decisions })
    }
}

/// One-shot joint decode of a received frame.
pub fn joint_sc_decode(code: &MacPolarCode, model: &ChannelModel, obs: &Observation) -> Result<JointDecision> {
    let logliks = model.use_logliks(obs)?;
    JointScDecoder::new(code.order().clone(), code.n_user())?.decode(code, &logliks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::DiscreteMac;
    use crate::mac_polar::mac_polar_encode;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn log_sum_exp_edge_cases() {
        assert_eq!(log_sum_exp(&[f64::NEG_INFINITY; 3]), f64::NEG_INFINITY);
        assert!((log_sum_exp(&[0.0, 0.0]) - 2f64.ln()).abs() < 1e-15);
        assert!((log_sum_exp(&[-1000.0, -1000.0]) - (-1000.0 + 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn full_rate_on_noiseless_user_two_side() {
        // adder with all of user 1 frozen and decided first: user 2 then
        // sees a noiseless channel
        let model = ChannelModel::discrete(DiscreteMac::adder());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for o in [BlockOrder::preset(2, 1).unwrap(), BlockOrder::preset(1, 1).unwrap()] {
            let code = MacPolarCode::with_zero_frozen(16, o, vec![], (0..16).collect()).unwrap();
            let info2: Vec<u8> = (0..16).map(|_| rng.random_range(0..2)).collect();
            let (x1, x2) = mac_polar_encode(&code, &[], &info2).unwrap();
            let obs = model.transmit(&x1, &x2, &mut rng).unwrap();
            let dec = joint_sc_decode(&code, &model, &obs).unwrap();
            assert_eq!(dec.v, info2);
            assert_eq!(dec.u, vec![0; 16]);
        }
    }

    #[test]
    fn counts_work() {
        let o = BlockOrder::preset(2, 2).unwrap();
        let mut dec = JointScDecoder::new(o, 16).unwrap();
        let ll = vec![[0.0; 4]; 16];
        dec.decode_genie(&ll, &[0; 16], &[0; 16]).unwrap();
        let s = dec.stats();
        assert_eq!(s.frames, 1);
        // 8 blocks x (16 + 8 + 4 + 2) visited entries
        assert_eq!(s.marginal_terms, 8 * 30);
        // 4 outer passes of length 8
        assert_eq!(s.outer_ops, 4 * 8 * 3);
    }

    #[test]
    fn rejects_wrong_length() {
        let mut dec = JointScDecoder::new(BlockOrder::preset(2, 1).unwrap(), 8).unwrap();
        assert!(dec.run(&[[0.0; 4]; 4], |_, _, _| 0).is_err());
    }
}
