//! The two-user MAC built from a single-user channel `W'` as
//! `W((y1, y2) | u, v) = W'(y1 | u ^ v) W'(y2 | v)`, and the bit-channel
//! identities relating its pairwise polarization to the single-user
//! transform of `W'` at twice the length.
//!
//! Polarizing the input pairs `(U_i, V_i)` jointly is the single-user
//! transform of `W'` at length `2N` applied to `(u_1, v_1, u_2, v_2, ...)`,
//! because `G^{⊗n} ⊗ G = G^{⊗(n+1)}`. Hence the pair channel `i` splits into
//! single-user bit-channels `2i - 1` (for `U_i`) and `2i` (for `V_i`).

use super::lemmas::LemmaReport;
use crate::channels::{DiscreteBimc, DiscreteMac};
use crate::error::{Error, Result};
use crate::polar::{exact_bit_channels, TransformOrder, MAX_ALPHABET};
use serde::Serialize;

/// Output `(y1, y2)` is indexed `y1 * M + y2`.
pub fn build_sty_example(wp: &DiscreteBimc) -> DiscreteMac {
    let m = wp.output_size();
    let mut outputs = Vec::with_capacity(m * m);
    for y1 in 0..m {
        for y2 in 0..m {
            let mut p = [0.0; 4];
            for u in 0..2u8 {
                for v in 0..2u8 {
                    p[((u << 1) | v) as usize] = wp.prob(u ^ v, y1) * wp.prob(v, y2);
                }
            }
            outputs.push(p);
        }
    }
    DiscreteMac::from_outputs_unchecked(outputs)
}

/// `(I(U;Y,V), I(V;Y,U), I(U,V;Y))` of a pair channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StyTriple {
    pub i1: f64,
    pub i2: f64,
    pub sum: f64,
}

impl StyTriple {
    pub fn of(w: &DiscreteMac) -> Self {
        Self { i1: w.user1_information(), i2: w.user2_information(), sum: w.sum_rate() }
    }

    /// Distance by which the triple violates its own consistency bounds.
    pub fn inconsistency(&self) -> f64 {
        let range = |x: f64| (-x).max(x - 1.0).max(0.0);
        range(self.i1)
            .max(range(self.i2))
            .max(self.sum - self.i1 - self.i2)
            .max(self.i1.max(self.i2) - self.sum)
            .max(0.0)
    }
}

/// Pair channel with output `(y1, y2)`, inputs decided first:
/// `1/4 sum_{u', v'} W1(y1 | u ^ u', v ^ v') W2(y2 | u', v')`.
pub fn mac_combine_minus(w1: &DiscreteMac, w2: &DiscreteMac) -> DiscreteMac {
    let mut outputs = Vec::with_capacity(w1.output_size() * w2.output_size());
    for p1 in w1.outputs() {
        for p2 in w2.outputs() {
            let mut q = [0.0; 4];
            for (k, qk) in q.iter_mut().enumerate() {
                *qk = 0.25 * (0..4).map(|k2| p1[k ^ k2] * p2[k2]).sum::<f64>();
            }
            outputs.push(q);
        }
    }
    DiscreteMac::from_outputs_unchecked(outputs)
}

/// Pair channel with output `(y1, y2, u1, v1)`:
/// `1/4 W1(y1 | u1 ^ u, v1 ^ v) W2(y2 | u, v)`.
pub fn mac_combine_plus(w1: &DiscreteMac, w2: &DiscreteMac) -> DiscreteMac {
    let mut outputs = Vec::with_capacity(4 * w1.output_size() * w2.output_size());
    for p1 in w1.outputs() {
        for p2 in w2.outputs() {
            for known in 0..4 {
                outputs.push(std::array::from_fn(|k| 0.25 * p1[known ^ k] * p2[k]));
            }
        }
    }
    DiscreteMac::from_outputs_unchecked(outputs)
}

/// The `N = 2^n` pair channels of the jointly polarized MAC, merged.
pub fn pair_bit_channels(w: &DiscreteMac, n: u32) -> Result<Vec<DiscreteMac>> {
    let mut chans = vec![w.merged()];
    for _ in 0..n {
        let mut next = Vec::with_capacity(2 * chans.len());
        for c in &chans {
            if 4 * c.output_size() * c.output_size() > 50_000_000 {
                return Err(Error::Infeasible(format!("pair channel with {} outputs is too large to combine", c.output_size())));
            }
            for d in [mac_combine_minus(c, c).merged(), mac_combine_plus(c, c).merged()] {
                if d.output_size() > MAX_ALPHABET {
                    return Err(Error::Infeasible(format!("merged alphabet {} exceeds {MAX_ALPHABET}", d.output_size())));
                }
                next.push(d);
            }
        }
        chans = next;
    }
    Ok(chans)
}

pub fn sty_triples(wp: &DiscreteBimc, n: u32) -> Result<Vec<StyTriple>> {
    Ok(pair_bit_channels(&build_sty_example(wp), n)?.iter().map(StyTriple::of).collect())
}

/// For `N = 2^n`, `n <= n_max`, compares each pair channel's triple against
/// the single-user bit-channels of `W'` at length `2N`:
/// `I2 = I(W'^(2i))`, `sum = I(W'^(2i-1)) + I(W'^(2i))` and
/// `I1 >= I(W'^(2i-1))`, plus the triple's own consistency bounds.
pub fn verify_sty_identities(wp: &DiscreteBimc, n_max: u32, tol: f64) -> Result<LemmaReport> {
    let mut rep = LemmaReport::new("sty-identities", tol);
    for n in 0..=n_max {
        let triples = sty_triples(wp, n)?;
        let single = exact_bit_channels(wp, TransformOrder::new(n + 1))?;
        for (i, t) in triples.iter().enumerate() {
            let lo = single[2 * i].mutual_information();
            let hi = single[2 * i + 1].mutual_information();
            rep.record((t.i2 - hi).abs());
            rep.record((t.sum - lo - hi).abs());
            rep.record((lo - t.i1).max(0.0));
            rep.record(t.inconsistency());
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(p: f64) -> f64 {
        -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
    }

    #[test]
    fn bec_vertices() {
        let w = build_sty_example(&DiscreteBimc::bec(0.5).unwrap());
        let r = w.region_vertices();
        assert!((r.a_point.r1 - 0.25).abs() < 1e-12 && (r.a_point.r2 - 0.75).abs() < 1e-12);
        assert!((r.b_point.r1 - 0.5).abs() < 1e-12 && (r.b_point.r2 - 0.5).abs() < 1e-12);
    }

    #[test]
    fn noiseless_example() {
        let w = build_sty_example(&DiscreteBimc::noiseless());
        let r = w.region_vertices();
        assert!((r.sum_rate - 2.0).abs() < 1e-12);
        assert!((r.a_point.r1 - 1.0).abs() < 1e-12 && (r.a_point.r2 - 1.0).abs() < 1e-12);
        for t in sty_triples(&DiscreteBimc::noiseless(), 2).unwrap() {
            assert!((t.i1 - 1.0).abs() < 1e-12 && (t.i2 - 1.0).abs() < 1e-12 && (t.sum - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bsc_user_one_rate() {
        let w = build_sty_example(&DiscreteBimc::bsc(0.11).unwrap());
        assert!((w.user1_information() - (1.0 - h(0.11))).abs() < 1e-9);
    }

    #[test]
    fn identities_hold() {
        for wp in [DiscreteBimc::bec(0.5).unwrap(), DiscreteBimc::bsc(0.11).unwrap()] {
            let r = verify_sty_identities(&wp, 2, 1e-10).unwrap();
            assert!(r.pass, "{r}");
        }
    }
}
