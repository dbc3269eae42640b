//! Exact bit-channels of the building block and of the lifted joint
//! transform.
//!
//! A block input word `d` holds the `2L` building-block inputs in decoding
//! order, position `j` at bit `2L - 1 - j`, so every decided prefix is a
//! contiguous range of words.

use super::order::{BlockOrder, User};
use crate::channels::{pair_information, DiscreteBimc, DiscreteMac, Functionals};
use crate::error::{Error, Result};
use crate::polar::{exact_bit_channel_functionals, exact_bit_channels, polar_transform_in_place, TransformOrder};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Largest number of `(y-tuple, block word)` terms a materialized building
/// block may hold.
pub const MAX_BLOCK_TERMS: usize = 50_000_000;

/// Per-use input index `2 x + x'` for every block word and use:
/// entry `d * L + b`.
pub(crate) fn block_inputs(order: &BlockOrder) -> Vec<u8> {
    let l = order.l();
    let width = 2 * l;
    let mut out = Vec::with_capacity((1 << width) * l);
    let mut wu = vec![0u8; l];
    let mut wv = vec![0u8; l];
    for d in 0..1usize << width {
        for (j, lab) in order.sequence().iter().enumerate() {
            let bit = (d >> (width - 1 - j) & 1) as u8;
            match lab.user {
                User::One => wu[lab.index] = bit,
                User::Two => wv[lab.index] = bit,
            }
        }
        let (mut x, mut xv) = (wu.clone(), wv.clone());
        polar_transform_in_place(&mut x);
        polar_transform_in_place(&mut xv);
        out.extend(x.iter().zip(&xv).map(|(&a, &b)| (a << 1) | b));
    }
    out
}

fn log2(l: usize) -> u32 {
    l.trailing_zeros()
}

struct BlockEnumerator<'a> {
    w: &'a DiscreteMac,
    l: usize,
    inputs: Vec<u8>,
    tuples: usize,
}

impl<'a> BlockEnumerator<'a> {
    fn new(w: &'a DiscreteMac, order: &BlockOrder) -> Result<Self> {
        let l = order.l();
        let tuples = w
            .output_size()
            .checked_pow(l as u32)
            .ok_or_else(|| Error::Infeasible("output tuple count overflows".into()))?;
        Ok(Self { w, l, inputs: block_inputs(order), tuples })
    }

    fn words(&self) -> usize {
        1 << (2 * self.l)
    }

    /// Fills `p[d] = W^L(y | d)` for the `t`-th output tuple (first use most
    /// significant). Returns false if the tuple has zero probability.
    fn fill(&self, t: usize, p: &mut [f64]) -> bool {
        let m = self.w.output_size();
        let outs = self.w.outputs();
        let mut rows = [[0.0f64; 4]; 64];
        let mut rest = t;
        for b in (0..self.l).rev() {
            rows[b] = outs[rest % m];
            rest /= m;
        }
        let mut any = false;
        for (d, pd) in p.iter_mut().enumerate() {
            let ins = &self.inputs[d * self.l..(d + 1) * self.l];
            let mut q = 1.0;
            for (b, &i) in ins.iter().enumerate() {
                q *= rows[b][i as usize];
            }
            *pd = q;
            any |= q > 0.0;
        }
        any
    }
}

/// Folds prefix sums in place, calling `visit(k, prefix, a, b)` with the
/// unnormalized pair of bit-channel `k` (positions `0..2L`) for every prefix.
fn sweep_levels(p: &mut [f64], width: usize, mut visit: impl FnMut(usize, usize, f64, f64)) {
    for k in (0..width).rev() {
        let half = 1 << k;
        for q in 0..half {
            let (a, b) = (p[2 * q], p[2 * q + 1]);
            visit(k, q, a, b);
            p[q] = a + b;
        }
    }
}

/// The `2L` building-block bit-channels `W_{2L}^(k)` in decoding order,
/// merged. Channel `k` has output `(y_1..y_L, d_1..d_{k-1})`.
pub fn building_block_channels(w: &DiscreteMac, order: &BlockOrder) -> Result<Vec<DiscreteBimc>> {
    let e = BlockEnumerator::new(w, order)?;
    let words = e.words();
    if e.tuples.checked_mul(words).is_none_or(|t| t > MAX_BLOCK_TERMS) {
        return Err(Error::Infeasible(format!(
            "building block with {} output tuples and {words} input words exceeds {MAX_BLOCK_TERMS} terms",
            e.tuples
        )));
    }
    let width = 2 * e.l;
    let scale = 0.5f64.powi(width as i32 - 1);
    let mut pairs: Vec<Vec<[f64; 2]>> = (0..width).map(|k| Vec::with_capacity(e.tuples << k)).collect();
    let mut p = vec![0.0; words];
    for t in 0..e.tuples {
        if !e.fill(t, &mut p) {
            continue;
        }
        sweep_levels(&mut p, width, |k, _, a, b| pairs[k].push([a * scale, b * scale]));
    }
    Ok(pairs.into_iter().map(|ps| DiscreteBimc::from_pairs_unchecked(ps).merged()).collect())
}

/// Mutual information and Bhattacharyya parameter of the building-block
/// bit-channels, streamed over output tuples without materializing them.
pub fn building_block_functionals(w: &DiscreteMac, order: &BlockOrder) -> Result<Vec<Functionals>> {
    let e = BlockEnumerator::new(w, order)?;
    let width = 2 * e.l;
    let words = e.words();
    let scale = 0.5f64.powi(width as i32 - 1);
    const CHUNK: usize = 4096;
    let chunks = e.tuples.div_ceil(CHUNK);
    let partial: Vec<Vec<[f64; 2]>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = vec![[0.0f64; 2]; width];
            let mut p = vec![0.0; words];
            for t in c * CHUNK..((c + 1) * CHUNK).min(e.tuples) {
                if !e.fill(t, &mut p) {
                    continue;
                }
                sweep_levels(&mut p, width, |k, _, a, b| {
                    let (a, b) = (a * scale, b * scale);
                    acc[k][0] += pair_information(a, b);
                    acc[k][1] += (a * b).sqrt();
                });
            }
            acc
        })
        .collect();
    let mut total = vec![[0.0f64; 2]; width];
    for acc in partial {
        for (t, a) in total.iter_mut().zip(acc) {
            t[0] += a[0];
            t[1] += a[1];
        }
    }
    Ok(total
        .into_iter()
        .map(|[i, z]| Functionals { information: i, bhattacharyya: z.clamp(0.0, 1.0) })
        .collect())
}

/// Building-block rates for one order: `terms[j] = I(W_{2L}^(j))` in
/// decoding order; each user's rate is the average of its own terms.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockRateProfile {
    pub l: usize,
    /// Preset index `i` when the order is `P^(i)`.
    pub preset: Option<usize>,
    pub order: String,
    pub terms: Vec<f64>,
    pub bhattacharyya: Vec<f64>,
    pub r1: f64,
    pub r2: f64,
}

impl BlockRateProfile {
    pub fn sum(&self) -> f64 {
        self.r1 + self.r2
    }
}

/// Block rates of order `P^(i)`.
pub fn block_rates(w: &DiscreteMac, l: usize, i: usize) -> Result<BlockRateProfile> {
    let mut p = block_rates_for_order(w, &BlockOrder::preset(l, i)?)?;
    p.preset = Some(i);
    Ok(p)
}

pub fn block_rates_for_order(w: &DiscreteMac, order: &BlockOrder) -> Result<BlockRateProfile> {
    let f = building_block_functionals(w, order)?;
    let l = order.l();
    let mut r = [0.0; 2];
    for (lab, fj) in order.sequence().iter().zip(&f) {
        r[(lab.user.number() - 1) as usize] += fj.information;
    }
    Ok(BlockRateProfile {
        l,
        preset: None,
        order: order.to_string(),
        terms: f.iter().map(|x| x.information).collect(),
        bhattacharyya: f.iter().map(|x| x.bhattacharyya).collect(),
        r1: r[0] / l as f64,
        r2: r[1] / l as f64,
    })
}

fn outer_order(order: &BlockOrder, n: u32) -> Result<TransformOrder> {
    let l = log2(order.l());
    if n < l {
        return Err(Error::InvalidArgument(format!("n = {n} is smaller than log2 L = {l}")));
    }
    Ok(TransformOrder::new(n - l))
}

/// All `2N` joint bit-channels for per-user length `N = 2^n`, in schedule
/// order: slot `k N/L + m` is outer bit-channel `m` of building-block
/// channel `k`.
pub fn exact_mac_bit_channels(w: &DiscreteMac, order: &BlockOrder, n: u32) -> Result<Vec<DiscreteBimc>> {
    let outer = outer_order(order, n)?;
    let blocks = building_block_channels(w, order)?;
    let mut out = Vec::with_capacity(2 << n);
    for b in &blocks {
        out.extend(exact_bit_channels(b, outer)?);
    }
    Ok(out)
}

/// Functionals of [`exact_mac_bit_channels`], skipping the materialization of
/// the last level.
pub fn exact_mac_bit_functionals(w: &DiscreteMac, order: &BlockOrder, n: u32) -> Result<Vec<Functionals>> {
    let outer = outer_order(order, n)?;
    if outer.n() == 0 {
        return building_block_functionals(w, order);
    }
    let blocks = building_block_channels(w, order)?;
    let mut out = Vec::with_capacity(2 << n);
    for b in &blocks {
        out.extend(exact_bit_channel_functionals(b, outer)?);
    }
    Ok(out)
}
