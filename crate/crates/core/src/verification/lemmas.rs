//! Checks of the channel-splitting recursion and the block-rate chain rules.

use super::brute::JointEnumeration;
use crate::channels::{combine_functionals, DiscreteMac, Functionals, RatePair};
use crate::error::Result;
use crate::mac_polar::{block_rates, exact_mac_bit_channels, exact_mac_bit_functionals, BlockOrder};
use serde::Serialize;
use std::fmt;

/// Outcome of one exactly checkable claim.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LemmaReport {
    pub id: String,
    pub instances: usize,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl LemmaReport {
    pub fn new(id: impl Into<String>, tolerance: f64) -> Self {
        Self { id: id.into(), instances: 0, max_deviation: 0.0, tolerance, pass: true }
    }

    /// Records one checked instance with its deviation; `NaN` fails.
    pub fn record(&mut self, deviation: f64) {
        self.instances += 1;
        if deviation.is_nan() {
            self.max_deviation = f64::NAN;
        } else if !self.max_deviation.is_nan() {
            self.max_deviation = self.max_deviation.max(deviation);
        }
        self.pass = self.max_deviation <= self.tolerance;
    }

    pub fn merge(&mut self, other: &LemmaReport) {
        self.instances += other.instances;
        if other.max_deviation.is_nan() || self.max_deviation.is_nan() {
            self.max_deviation = f64::NAN;
        } else {
            self.max_deviation = self.max_deviation.max(other.max_deviation);
        }
        self.pass = self.max_deviation <= self.tolerance;
    }
}

impl fmt::Display for LemmaReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<24} instances={:<6} max_dev={:.3e} tol={:.1e} {}",
            self.id,
            self.instances,
            self.max_deviation,
            self.tolerance,
            if self.pass { "PASS" } else { "FAIL" }
        )
    }
}

/// Bit-channel functionals at per-user length `2^n`, from the definition when
/// that is small enough, otherwise through the lifted recursion.
fn joint_functionals(w: &DiscreteMac, order: &BlockOrder, n: u32) -> Result<Vec<Functionals>> {
    match JointEnumeration::new(w, order, n) {
        Ok(e) => Ok(e.functionals()),
        Err(_) => exact_mac_bit_functionals(w, order, n),
    }
}

/// Checks `W_{2N}^(2j-1) = W_N^(j) ⊞ W_N^(j)` and `W_{2N}^(2j) = W_N^(j) ⊛ W_N^(j)`
/// on `I` and `Z` for every per-user length `2^n`, `log2 L < n <= n_max`.
/// The length-`N` channels are enumerated from the definition whenever
/// feasible.
pub fn verify_channel_split(w: &DiscreteMac, order: &BlockOrder, n_max: u32, tol: f64) -> Result<LemmaReport> {
    let mut rep = LemmaReport::new("channel-split", tol);
    let l = order.l().trailing_zeros();
    for n in l + 1..=n_max {
        let parents = match JointEnumeration::new(w, order, n - 1) {
            Ok(e) => e.channels(),
            Err(_) => exact_mac_bit_channels(w, order, n - 1)?,
        };
        let children = joint_functionals(w, order, n)?;
        for (j, p) in parents.iter().enumerate() {
            let [minus, plus] = combine_functionals(p, p);
            rep.record(children[2 * j].max_deviation(&minus));
            rep.record(children[2 * j + 1].max_deviation(&plus));
        }
    }
    Ok(rep)
}

/// Checks that every joint bit-channel equals the outer bit-channel of its
/// building-block channel, comparing against the definition for
/// `log2 L <= n <= n_max` wherever enumeration is feasible.
pub fn verify_recursion_split(w: &DiscreteMac, order: &BlockOrder, n_max: u32, tol: f64) -> Result<LemmaReport> {
    let mut rep = LemmaReport::new("recursion-split", tol);
    for n in order.l().trailing_zeros()..=n_max {
        let Ok(e) = JointEnumeration::new(w, order, n) else { continue };
        let lifted = exact_mac_bit_functionals(w, order, n)?;
        for (a, b) in e.functionals().iter().zip(&lifted) {
            rep.record(a.max_deviation(b));
        }
    }
    Ok(rep)
}

fn gap(p: RatePair, q: RatePair) -> f64 {
    (p.r1 - q.r1).abs().max((p.r2 - q.r2).abs())
}

/// Amount by which `x` falls outside `[lo, hi]`.
fn outside(x: f64, lo: f64, hi: f64) -> f64 {
    (lo - x).max(x - hi).max(0.0)
}

/// Chain-rule claims for the presets `P^(1)..P^(L+1)`:
/// - `sum-rate`: `sum_j I_{j,i} = L I(W)`;
/// - `dominant-face`: each `(r1, r2)` lies on the segment between the corners;
/// - `resolution`: consecutive presets move `r1` up and `r2` down by at most `1/L`;
/// - `corner-points`: `P^(1)` gives the corner decoding user 1 first, `P^(L+1)`
///   the other corner;
/// - `face-coverage`: every probe point on the dominant face has a preset within
///   `1/L` in both coordinates.
pub fn verify_chain_rules(w: &DiscreteMac, l: usize, tol: f64) -> Result<Vec<LemmaReport>> {
    let verts = w.region_vertices();
    let cap = verts.sum_rate;
    let profiles = (1..=l + 1).map(|i| block_rates(w, l, i)).collect::<Result<Vec<_>>>()?;
    let pts: Vec<RatePair> = profiles.iter().map(|p| RatePair::new(p.r1, p.r2)).collect();
    let step = 1.0 / l as f64;

    let mut sum = LemmaReport::new("sum-rate", tol);
    let mut face = LemmaReport::new("dominant-face", tol);
    for (p, q) in profiles.iter().zip(&pts) {
        sum.record((p.terms.iter().sum::<f64>() - l as f64 * cap).abs());
        face.record(
            (q.sum() - cap)
                .abs()
                .max(outside(q.r1, verts.a_point.r1, verts.b_point.r1))
                .max(outside(q.r2, verts.b_point.r2, verts.a_point.r2)),
        );
    }
    let mut res = LemmaReport::new("resolution", tol);
    for win in pts.windows(2) {
        res.record(outside(win[1].r1 - win[0].r1, 0.0, step).max(outside(win[0].r2 - win[1].r2, 0.0, step)));
    }
    let mut ends = LemmaReport::new("corner-points", tol);
    ends.record(gap(pts[0], verts.a_point));
    ends.record(gap(pts[l], verts.b_point));
    let mut cover = LemmaReport::new("face-coverage", tol);
    const PROBES: usize = 33;
    for s in 0..PROBES {
        let lam = s as f64 / (PROBES - 1) as f64;
        let q = RatePair::new(
            verts.a_point.r1 + lam * (verts.b_point.r1 - verts.a_point.r1),
            verts.a_point.r2 + lam * (verts.b_point.r2 - verts.a_point.r2),
        );
        let best = pts.iter().map(|&p| gap(p, q)).fold(f64::INFINITY, f64::min);
        cover.record((best - step).max(0.0));
    }
    Ok(vec![sum, face, res, ends, cover])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels::GaussianMac;
    use crate::mac_polar::enumerate_monotone_orders;

    #[test]
    fn report_bookkeeping() {
        let mut r = LemmaReport::new("x", 1e-9);
        assert!(r.pass && r.instances == 0);
        r.record(1e-12);
        assert!(r.pass);
        r.record(1e-3);
        assert!(!r.pass);
        let mut s = LemmaReport::new("y", 1e-9);
        s.record(f64::NAN);
        assert!(!s.pass);
    }

    #[test]
    fn vacuous_when_no_outer_levels() {
        let r = verify_channel_split(&DiscreteMac::adder(), &BlockOrder::preset(2, 1).unwrap(), 1, 1e-10).unwrap();
        assert_eq!(r.instances, 0);
        assert!(r.pass);
    }

    #[test]
    fn adder_split_and_recursion() {
        let w = DiscreteMac::adder();
        for o in enumerate_monotone_orders(2).unwrap() {
            let r = verify_channel_split(&w, &o, 3, 1e-10).unwrap();
            assert!(r.pass && r.instances == 8 + 16, "{r}");
            let r = verify_recursion_split(&w, &o, 3, 1e-10).unwrap();
            assert!(r.pass, "{r}");
        }
    }

    #[test]
    fn gaussian_split() {
        let w = GaussianMac::new(1.0).unwrap().quantize_default(8).unwrap();
        let o: BlockOrder = "U1,V1,U2,V2".parse().unwrap();
        let r = verify_channel_split(&w, &o, 2, 1e-10).unwrap();
        assert!(r.pass && r.instances == 8, "{r}");
    }

    #[test]
    fn adder_chain_rules() {
        for l in [1, 2, 4] {
            for r in verify_chain_rules(&DiscreteMac::adder(), l, 1e-10).unwrap() {
                assert!(r.pass, "L = {l}: {r}");
            }
        }
    }
}
