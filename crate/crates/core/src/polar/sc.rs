//! Successive cancellation decoding in the LLR domain.
//!
//! LLRs are natural-log ratios `ln P(.|0) / P(.|1)`; positive favours `0`.

use crate::error::{Error, Result};

/// LLR magnitudes are clamped here before combining so that `±inf` inputs
/// (genie pins, noiseless channels) never produce `inf - inf`.
pub const LLR_CLAMP: f64 = 1e9;

/// Frozen positions and their values. `None` marks an information position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrozenSpec {
    bits: Vec<Option<u8>>,
}

impl FrozenSpec {
    pub fn new(bits: Vec<Option<u8>>) -> Self {
        Self { bits }
    }

    pub fn from_mask(mask: &[bool], values: &[u8]) -> Result<Self> {
        if mask.len() != values.len() {
            return Err(Error::LengthMismatch { expected: mask.len(), got: values.len() });
        }
        Ok(Self::new(mask.iter().zip(values).map(|(&m, &v)| m.then_some(v & 1)).collect()))
    }

    pub fn all_frozen(len: usize, value: u8) -> Self {
        Self::new(vec![Some(value & 1); len])
    }

    pub fn none_frozen(len: usize) -> Self {
        Self::new(vec![None; len])
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, i: usize) -> Option<u8> {
        self.bits[i]
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.bits[i].is_some()
    }

    pub fn info_positions(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().filter(|(_, b)| b.is_none()).map(|(i, _)| i)
    }
}

/// Check-node update rule.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CheckRule {
    /// Exact `2 atanh(tanh(a/2) tanh(b/2))`.
    #[default]
    Exact,
    MinSum,
}

#[inline]
fn clamp(a: f64) -> f64 {
    a.clamp(-LLR_CLAMP, LLR_CLAMP)
}

/// Check-node combine of two LLRs.
#[inline]
pub fn check_node(a: f64, b: f64, rule: CheckRule) -> f64 {
    let (a, b) = (clamp(a), clamp(b));
    let sign = if (a < 0.0) != (b < 0.0) { -1.0 } else { 1.0 };
    let m = sign * a.abs().min(b.abs());
    match rule {
        CheckRule::MinSum => m,
        CheckRule::Exact => m + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p(),
    }
}

/// Variable-node combine given the partial-sum bit `s` of the upper branch.
#[inline]
pub fn bit_node(a: f64, b: f64, s: u8) -> f64 {
    let (a, b) = (clamp(a), clamp(b));
    if s == 0 {
        b + a
    } else {
        b - a
    }
}

/// LLRs this close to zero are ties. Exact ties computed along different
/// log-domain paths land a few ulps either side of zero.
pub const LLR_TIE: f64 = 1e-9;

/// Hard decision with ties going to `0`.
#[inline]
pub fn hard_decision(llr: f64) -> u8 {
    u8::from(llr < -LLR_TIE)
}

/// Reusable SC decoder for one block length.
#[derive(Debug, Clone)]
pub struct ScDecoder {
    len: usize,
    rule: CheckRule,
    scratch: Vec<f64>,
    ops: u64,
}

impl ScDecoder {
    pub fn new(len: usize, rule: CheckRule) -> Self {
        assert!(len.is_power_of_two(), "block length must be a power of two");
        Self { len, rule, scratch: vec![0.0; len], ops: 0 }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Number of check-node and bit-node updates performed so far.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    /// Runs SC over `llrs`. At position `i` the callback receives the
    /// bit-channel LLR and returns the bit to commit. On return `x` holds the
    /// re-encoded codeword `u G^{⊗n}` of the committed bits.
    pub fn run<F>(&mut self, llrs: &[f64], x: &mut [u8], mut decide: F)
    where
        F: FnMut(usize, f64) -> u8,
    {
        assert_eq!(llrs.len(), self.len);
        assert_eq!(x.len(), self.len);
        let rule = self.rule;
        descend(llrs, x, &mut self.scratch, 0, rule, &mut self.ops, &mut decide);
    }

    /// Standard decoding: frozen positions echo their values, information
    /// positions take hard decisions.
    pub fn decode(&mut self, llrs: &[f64], frozen: &FrozenSpec) -> Vec<u8> {
        let mut u = vec![0u8; self.len];
        let mut x = vec![0u8; self.len];
        self.run(llrs, &mut x, |i, llr| {
            let b = frozen.get(i).unwrap_or_else(|| hard_decision(llr));
            u[i] = b;
            b
        });
        u
    }
}

fn descend<F>(
    llr: &[f64],
    x: &mut [u8],
    scratch: &mut [f64],
    base: usize,
    rule: CheckRule,
    ops: &mut u64,
    decide: &mut F,
) where
    F: FnMut(usize, f64) -> u8,
{
    let n = llr.len();
    if n == 1 {
        x[0] = decide(base, llr[0]) & 1;
        return;
    }
    let h = n / 2;
    let (cur, rest) = scratch.split_at_mut(h);
    let (top, bottom) = llr.split_at(h);
    for ((c, &a), &b) in cur.iter_mut().zip(top).zip(bottom) {
        *c = check_node(a, b, rule);
    }
    let (xa, xb) = x.split_at_mut(h);
    descend(cur, xa, rest, base, rule, ops, decide);
    for (((c, &a), &b), &s) in cur.iter_mut().zip(top).zip(bottom).zip(xa.iter()) {
        *c = bit_node(a, b, s);
    }
    descend(cur, xb, rest, base + h, rule, ops, decide);
    for (a, &b) in xa.iter_mut().zip(xb.iter()) {
        *a ^= b;
    }
    *ops += n as u64;
}

/// One-shot SC decode with the exact check-node rule.
pub fn sc_decode(llrs: &[f64], frozen: &FrozenSpec) -> Result<Vec<u8>> {
    if llrs.len() != frozen.len() {
        return Err(Error::LengthMismatch { expected: frozen.len(), got: llrs.len() });
    }
    if !llrs.len().is_power_of_two() {
        return Err(Error::InvalidArgument(format!("block length {} is not a power of two", llrs.len())));
    }
    if llrs.iter().any(|l| l.is_nan()) {
        return Err(Error::InvalidArgument("NaN leaf LLR".into()));
    }
    Ok(ScDecoder::new(llrs.len(), CheckRule::Exact).decode(llrs, frozen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::{polar_encode, TransformOrder};

    fn noiseless_llrs(x: &[u8]) -> Vec<f64> {
        x.iter().map(|&b| if b == 0 { f64::INFINITY } else { f64::NEG_INFINITY }).collect()
    }

    #[test]
    fn all_frozen_echoes_values() {
        let llrs = [-3.0, 2.0, -0.5, 7.0];
        assert_eq!(sc_decode(&llrs, &FrozenSpec::all_frozen(4, 0)).unwrap(), vec![0; 4]);
        assert_eq!(sc_decode(&llrs, &FrozenSpec::all_frozen(4, 1)).unwrap(), vec![1; 4]);
    }

    #[test]
    fn single_position_sign_decision() {
        assert_eq!(sc_decode(&[3.2], &FrozenSpec::none_frozen(1)).unwrap(), vec![0]);
        assert_eq!(sc_decode(&[-0.1], &FrozenSpec::none_frozen(1)).unwrap(), vec![1]);
        assert_eq!(sc_decode(&[0.0], &FrozenSpec::none_frozen(1)).unwrap(), vec![0]);
        assert_eq!(sc_decode(&[-1e-15], &FrozenSpec::none_frozen(1)).unwrap(), vec![0]);
    }

    #[test]
    fn length_two_noiseless() {
        // codeword (1, 0) comes from u = (1, 0)
        let u = sc_decode(&noiseless_llrs(&[1, 0]), &FrozenSpec::none_frozen(2)).unwrap();
        assert_eq!(u, vec![1, 0]);
        assert_eq!(polar_encode(&u, TransformOrder::new(1)).unwrap(), vec![1, 0]);
        let u = sc_decode(&noiseless_llrs(&[0, 1]), &FrozenSpec::none_frozen(2)).unwrap();
        assert_eq!(polar_encode(&u, TransformOrder::new(1)).unwrap(), vec![0, 1]);
    }

    #[test]
    fn check_node_rules() {
        assert_eq!(check_node(f64::INFINITY, 1.5, CheckRule::Exact), 1.5);
        assert_eq!(check_node(f64::NEG_INFINITY, 1.5, CheckRule::Exact), -1.5);
        assert_eq!(check_node(0.0, 4.0, CheckRule::Exact), 0.0);
        let exact = 2.0 * ((1.0f64 / 2.0).tanh() * (2.0f64 / 2.0).tanh()).atanh();
        assert!((check_node(1.0, 2.0, CheckRule::Exact) - exact).abs() < 1e-12);
        assert_eq!(check_node(-1.0, 2.0, CheckRule::MinSum), -1.0);
        assert!(!check_node(f64::INFINITY, f64::NEG_INFINITY, CheckRule::Exact).is_nan());
        assert!(!bit_node(f64::INFINITY, f64::NEG_INFINITY, 0).is_nan());
    }

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(sc_decode(&[1.0, 2.0], &FrozenSpec::none_frozen(4)).is_err());
        assert!(sc_decode(&[1.0, 2.0, 3.0], &FrozenSpec::none_frozen(3)).is_err());
    }

    #[test]
    fn run_reencodes_committed_bits() {
        let mut dec = ScDecoder::new(8, CheckRule::Exact);
        let u = [1, 0, 1, 1, 0, 0, 1, 0];
        let mut x = [0u8; 8];
        dec.run(&[0.3; 8], &mut x, |i, _| u[i]);
        assert_eq!(x.to_vec(), polar_encode(&u, TransformOrder::new(3)).unwrap());
        assert_eq!(dec.ops(), 8 * 3);
    }
}
