//! Joint bit-channels enumerated straight from their definition.
//!
//! For per-user length `N` every joint input word `d` (the `2N` decisions in
//! schedule order, slot `j` at bit `2N - 1 - j`) is mapped to `(u, v)`,
//! encoded, and pushed through `N` uses of the MAC. Outputs are grouped by
//! the received tuple so that bit-channel `j` is read off as
//! `W(y, d_<j | d_j) = 2^{-(2N-1)} sum_{d_>j} W^N(y | d)`.

use crate::channels::{pair_information, DiscreteBimc, DiscreteMac, Functionals};
use crate::error::{Error, Result};
use crate::mac_polar::{BlockOrder, Schedule, User};
use crate::polar::polar_transform_in_place;
use std::collections::HashMap;

/// Largest number of `(output tuple, input word)` pairs held in memory.
pub const MAX_ENUMERATION: usize = 20_000_000;

/// Largest per-user length enumerated.
pub const MAX_BRUTE_LEN: usize = 8;

#[derive(Debug, Clone)]
pub struct JointEnumeration {
    schedule: Schedule,
    output_size: usize,
    keys: Vec<u64>,
    groups: Vec<Vec<(u32, f64)>>,
}

impl JointEnumeration {
    pub fn new(w: &DiscreteMac, order: &BlockOrder, n: u32) -> Result<Self> {
        let n_user = 1usize << n;
        if n_user > MAX_BRUTE_LEN {
            return Err(Error::Infeasible(format!("brute force limited to N <= {MAX_BRUTE_LEN}")));
        }
        let schedule = Schedule::new(n_user, order.clone())?;
        let m = w.output_size();
        if (m as u64).checked_pow(n_user as u32).is_none() {
            return Err(Error::Infeasible("output tuple index overflows".into()));
        }
        // nonzero outputs per input pair
        let support: Vec<Vec<(usize, f64)>> = (0..4)
            .map(|k| {
                w.outputs()
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| p[k] > 0.0)
                    .map(|(y, p)| (y, p[k]))
                    .collect()
            })
            .collect();
        let slots: Vec<_> = schedule.iter().collect();
        let width = 2 * n_user;
        let widest = support.iter().map(Vec::len).max().unwrap_or(0) as f64;
        if (1u64 << width) as f64 * widest.powi(n_user as i32) > 4.0 * MAX_ENUMERATION as f64 {
            return Err(Error::Infeasible(format!("joint enumeration would exceed {MAX_ENUMERATION} terms")));
        }
        let mut map: HashMap<u64, Vec<(u32, f64)>> = HashMap::new();
        let mut total = 0usize;
        let mut x1 = vec![0u8; n_user];
        let mut x2 = vec![0u8; n_user];
        for d in 0u32..1 << width {
            for (j, s) in slots.iter().enumerate() {
                let bit = (d >> (width - 1 - j) & 1) as u8;
                match s.owner {
                    User::One => x1[s.polar_index] = bit,
                    User::Two => x2[s.polar_index] = bit,
                }
            }
            polar_transform_in_place(&mut x1);
            polar_transform_in_place(&mut x2);
            let ins: Vec<usize> = x1.iter().zip(&x2).map(|(&a, &b)| ((a << 1) | b) as usize).collect();
            // odometer over the supports of every use
            let mut pos = vec![0usize; n_user];
            'tuples: loop {
                let mut key = 0u64;
                let mut p = 1.0;
                for t in (0..n_user).rev() {
                    let (y, q) = support[ins[t]][pos[t]];
                    key = key * m as u64 + y as u64;
                    p *= q;
                }
                map.entry(key).or_default().push((d, p));
                total += 1;
                if total > MAX_ENUMERATION {
                    return Err(Error::Infeasible(format!("more than {MAX_ENUMERATION} joint terms")));
                }
                for t in 0..n_user {
                    pos[t] += 1;
                    if pos[t] < support[ins[t]].len() {
                        continue 'tuples;
                    }
                    pos[t] = 0;
                }
                break;
            }
        }
        let mut entries: Vec<(u64, Vec<(u32, f64)>)> = map.into_iter().collect();
        entries.sort_unstable_by_key(|e| e.0);
        let (keys, groups) = entries.into_iter().unzip();
        Ok(Self { schedule, output_size: m, keys, groups })
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    pub fn slots(&self) -> usize {
        self.schedule.slots()
    }

    /// Number of distinct received tuples.
    pub fn outputs(&self) -> usize {
        self.groups.len()
    }

    /// The received tuple `y_1..y_N` of output group `g`.
    pub fn output_tuple(&self, g: usize) -> Vec<usize> {
        let mut key = self.keys[g];
        (0..self.schedule.n_user())
            .map(|_| {
                let y = (key % self.output_size as u64) as usize;
                key /= self.output_size as u64;
                y
            })
            .collect()
    }

    /// Input words with nonzero probability for output group `g`, with
    /// `W^N(y | d)`, sorted by word.
    pub fn group(&self, g: usize) -> &[(u32, f64)] {
        &self.groups[g]
    }

    fn scale(&self) -> f64 {
        0.5f64.powi(self.slots() as i32 - 1)
    }

    /// Calls `visit(prefix, [W(y, prefix | 0), W(y, prefix | 1)])` for every
    /// decided prefix of slot `j` seen in group `g`.
    fn for_each_pair(&self, g: usize, j: usize, mut visit: impl FnMut(u32, [f64; 2])) {
        let shift = self.slots() - 1 - j;
        let scale = self.scale();
        let mut cur: Option<u32> = None;
        let mut acc = [0.0; 2];
        for &(d, p) in &self.groups[g] {
            let pre = d >> shift;
            if cur.is_some_and(|c| c != pre >> 1) {
                visit(cur.unwrap(), acc.map(|a| a * scale));
                acc = [0.0; 2];
            }
            cur = Some(pre >> 1);
            acc[(pre & 1) as usize] += p;
        }
        if let Some(c) = cur {
            visit(c, acc.map(|a| a * scale));
        }
    }

    /// The pair `[W(y, prefix | 0), W(y, prefix | 1)]` of slot `j`.
    pub fn pair(&self, g: usize, j: usize, prefix: u32) -> [f64; 2] {
        let mut out = [0.0; 2];
        self.for_each_pair(g, j, |p, pair| {
            if p == prefix {
                out = pair;
            }
        });
        out
    }

    pub fn functionals(&self) -> Vec<Functionals> {
        (0..self.slots())
            .map(|j| {
                let (mut i, mut z) = (0.0, 0.0);
                for g in 0..self.groups.len() {
                    self.for_each_pair(g, j, |_, [a, b]| {
                        i += pair_information(a, b);
                        z += (a * b).sqrt();
                    });
                }
                Functionals { information: i, bhattacharyya: z.clamp(0.0, 1.0) }
            })
            .collect()
    }

    /// Materialized, merged bit-channels of every slot.
    pub fn channels(&self) -> Vec<DiscreteBimc> {
        (0..self.slots())
            .map(|j| {
                let mut pairs = Vec::new();
                for g in 0..self.groups.len() {
                    self.for_each_pair(g, j, |_, pair| pairs.push(pair));
                }
                DiscreteBimc::from_pairs_unchecked(pairs).merged()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mac_polar::{building_block_functionals, exact_mac_bit_functionals};

    #[test]
    fn block_level_matches_block_enumeration() {
        let w = crate::channels::GaussianMac::new(1.0).unwrap().quantize(-4.0, 4.0, 5).unwrap();
        for o in crate::mac_polar::enumerate_monotone_orders(2).unwrap() {
            let brute = JointEnumeration::new(&w, &o, 1).unwrap().functionals();
            let block = building_block_functionals(&w, &o).unwrap();
            for (a, b) in brute.iter().zip(&block) {
                assert!(a.max_deviation(b) < 1e-12);
            }
        }
    }

    #[test]
    fn adder_recursion_at_n3() {
        let w = DiscreteMac::adder();
        let o: BlockOrder = "U1,V1,U2,V2".parse().unwrap();
        let brute = JointEnumeration::new(&w, &o, 3).unwrap();
        assert_eq!(brute.outputs(), 3usize.pow(8));
        let f = brute.functionals();
        let total: f64 = f.iter().map(|x| x.information).sum();
        assert!((total - 8.0 * 1.5).abs() < 1e-9);
        let lifted = exact_mac_bit_functionals(&w, &o, 3).unwrap();
        for (a, b) in f.iter().zip(&lifted) {
            assert!(a.max_deviation(b) < 1e-10);
        }
    }

    #[test]
    fn too_long_is_rejected() {
        assert!(JointEnumeration::new(&DiscreteMac::adder(), &BlockOrder::preset(2, 1).unwrap(), 4).is_err());
    }
}
