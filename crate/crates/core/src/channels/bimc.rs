//! Binary-input discrete memoryless channels and the two channel-combining
//! operations of the polar transform.

use crate::error::{Error, Result};

/// Tolerance on row sums when validating user-supplied transition matrices.
pub const ROW_SUM_TOL: f64 = 1e-12;

/// Outputs whose posteriors `W(y|0) / (W(y|0) + W(y|1))` agree to this
/// resolution are merged by [`DiscreteBimc::merged`].
pub const MERGE_RESOLUTION: f64 = 1e-12;

/// Symmetric capacity (bits) and Bhattacharyya parameter of a channel.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Functionals {
    pub information: f64,
    pub bhattacharyya: f64,
}

impl Functionals {
    /// Largest absolute difference over the two functionals.
    pub fn max_deviation(&self, other: &Functionals) -> f64 {
        (self.information - other.information)
            .abs()
            .max((self.bhattacharyya - other.bhattacharyya).abs())
    }
}

/// A binary-input channel with a finite output alphabet.
///
/// Stored as one likelihood pair `[W(y|0), W(y|1)]` per output symbol `y`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteBimc {
    pairs: Vec<[f64; 2]>,
}

impl DiscreteBimc {
    /// Builds a channel from its two rows `W(.|0)` and `W(.|1)`.
    pub fn new(row0: Vec<f64>, row1: Vec<f64>) -> Result<Self> {
        if row0.len() != row1.len() {
            return Err(Error::LengthMismatch {
                expected: row0.len(),
                got: row1.len(),
            });
        }
        Self::from_pairs(row0.into_iter().zip(row1).map(|(a, b)| [a, b]).collect())
    }

    pub fn from_pairs(pairs: Vec<[f64; 2]>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidChannel("empty output alphabet".into()));
        }
        let mut sums = [0.0; 2];
        for (y, p) in pairs.iter().enumerate() {
            for x in 0..2 {
                if !(0.0..=1.0).contains(&p[x]) {
                    return Err(Error::InvalidChannel(format!(
                        "W({y}|{x}) = {} is not a probability",
                        p[x]
                    )));
                }
                sums[x] += p[x];
            }
        }
        for (x, s) in sums.iter().enumerate() {
            if (s - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidChannel(format!("row {x} sums to {s}")));
            }
        }
        Ok(Self { pairs })
    }

    pub(crate) fn from_pairs_unchecked(pairs: Vec<[f64; 2]>) -> Self {
        debug_assert!(!pairs.is_empty());
        Self { pairs }
    }

    /// Binary erasure channel with erasure probability `eps`; outputs are
    /// `0`, `1` and the erasure symbol `2`.
    pub fn bec(eps: f64) -> Result<Self> {
        Self::new(vec![1.0 - eps, 0.0, eps], vec![0.0, 1.0 - eps, eps])
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        Self::new(vec![1.0 - p, p], vec![p, 1.0 - p])
    }

    pub fn noiseless() -> Self {
        Self::from_pairs_unchecked(vec![[1.0, 0.0], [0.0, 1.0]])
    }

    /// A channel whose output carries no information about the input.
    pub fn pure_noise(outputs: usize) -> Self {
        let p = 1.0 / outputs.max(1) as f64;
        Self::from_pairs_unchecked(vec![[p, p]; outputs.max(1)])
    }

    pub fn output_size(&self) -> usize {
        self.pairs.len()
    }

    pub fn pairs(&self) -> &[[f64; 2]] {
        &self.pairs
    }

    pub fn prob(&self, x: u8, y: usize) -> f64 {
        self.pairs[y][x as usize]
    }

    /// Symmetric capacity `I(X;Y)` in bits under a uniform input.
    pub fn mutual_information(&self) -> f64 {
        self.pairs.iter().map(|p| pair_information(p[0], p[1])).sum()
    }

    /// Bhattacharyya parameter `Z(W) = sum_y sqrt(W(y|0) W(y|1))`.
    pub fn bhattacharyya(&self) -> f64 {
        let z: f64 = self.pairs.iter().map(|p| (p[0] * p[1]).sqrt()).sum();
        z.clamp(0.0, 1.0)
    }

    pub fn functionals(&self) -> Functionals {
        Functionals { information: self.mutual_information(), bhattacharyya: self.bhattacharyya() }
    }

    /// Error probability of the maximum-likelihood decision (ties decided as
    /// `0`) under a uniform input.
    pub fn ml_error_probability(&self) -> f64 {
        self.pairs.iter().map(|p| 0.5 * p[0].min(p[1])).sum()
    }

    /// Hard ML decision on output `y`; ties go to `0`.
    pub fn ml_decision(&self, y: usize) -> u8 {
        let p = self.pairs[y];
        u8::from(p[1] > p[0])
    }

    /// Lossless alphabet reduction: outputs with zero probability under both
    /// inputs are dropped and outputs sharing a posterior are summed into one
    /// symbol. Mutual information, Bhattacharyya parameter and ML error are
    /// unchanged.
    pub fn merged(&self) -> Self {
        let mut keyed: Vec<(i64, [f64; 2])> = self
            .pairs
            .iter()
            .filter(|p| p[0] + p[1] > 0.0)
            .map(|p| (posterior_key(p[0], p[1]), *p))
            .collect();
        if keyed.is_empty() {
            return self.clone();
        }
        keyed.sort_by_key(|&(k, _)| k);
        let mut out: Vec<[f64; 2]> = Vec::with_capacity(keyed.len());
        let mut last = None;
        for (k, p) in keyed {
            match (last, out.last_mut()) {
                (Some(prev), Some(acc)) if prev == k => {
                    acc[0] += p[0];
                    acc[1] += p[1];
                }
                _ => out.push(p),
            }
            last = Some(k);
        }
        Self::from_pairs_unchecked(out)
    }
}

pub(crate) fn posterior_key(a: f64, b: f64) -> i64 {
    (a / (a + b) / MERGE_RESOLUTION).round() as i64
}

/// Contribution of one output with likelihood pair `(a, b)` to `I(X;Y)`.
#[inline]
pub(crate) fn pair_information(a: f64, b: f64) -> f64 {
    let q = a + b;
    if q <= 0.0 {
        return 0.0;
    }
    let mut t = 0.0;
    if a > 0.0 {
        t += a * (2.0 * a / q).log2();
    }
    if b > 0.0 {
        t += b * (2.0 * b / q).log2();
    }
    0.5 * t
}

/// `W1 ⊞ W2`: output `(y1, y2)` indexed `y1 * |Y2| + y2`, with transition
/// `1/2 sum_x W1(y1 | u ^ x) W2(y2 | x)`.
///
/// The second factor is driven by the free bit `x`, matching the way
/// `x = u G` splits into `((a ^ b) G', b G')`.
pub fn combine_minus(w1: &DiscreteBimc, w2: &DiscreteBimc) -> DiscreteBimc {
    let mut pairs = Vec::with_capacity(w1.output_size() * w2.output_size());
    for p1 in &w1.pairs {
        for p2 in &w2.pairs {
            pairs.push([
                0.5 * (p1[0] * p2[0] + p1[1] * p2[1]),
                0.5 * (p1[1] * p2[0] + p1[0] * p2[1]),
            ]);
        }
    }
    DiscreteBimc::from_pairs_unchecked(pairs)
}

/// `W1 ⊛ W2`: output `(y1, y2, u')` indexed `(y1 * |Y2| + y2) * 2 + u'`
/// where `u'` is the already-decided bit of the pair; transition
/// `1/2 W1(y1 | u' ^ x) W2(y2 | x)` for input `x`.
pub fn combine_plus(w1: &DiscreteBimc, w2: &DiscreteBimc) -> DiscreteBimc {
    let mut pairs = Vec::with_capacity(2 * w1.output_size() * w2.output_size());
    for p1 in &w1.pairs {
        for p2 in &w2.pairs {
            for u in 0..2 {
                pairs.push([0.5 * p1[u] * p2[0], 0.5 * p1[u ^ 1] * p2[1]]);
            }
        }
    }
    DiscreteBimc::from_pairs_unchecked(pairs)
}

/// Mutual information and Bhattacharyya parameter of `W1 ⊞ W2` and
/// `W1 ⊛ W2` without materializing either channel.
///
/// Returns the functionals of `[W1 ⊞ W2, W1 ⊛ W2]`.
pub fn combine_functionals(w1: &DiscreteBimc, w2: &DiscreteBimc) -> [Functionals; 2] {
    let mut acc = [(0.0, 0.0); 2];
    for p1 in &w1.pairs {
        for p2 in &w2.pairs {
            let a = 0.5 * (p1[0] * p2[0] + p1[1] * p2[1]);
            let b = 0.5 * (p1[1] * p2[0] + p1[0] * p2[1]);
            acc[0].0 += pair_information(a, b);
            acc[0].1 += (a * b).sqrt();
            for u in 0..2 {
                let a = 0.5 * p1[u] * p2[0];
                let b = 0.5 * p1[u ^ 1] * p2[1];
                acc[1].0 += pair_information(a, b);
                acc[1].1 += (a * b).sqrt();
            }
        }
    }
    acc.map(|(information, z)| Functionals { information, bhattacharyya: z.clamp(0.0, 1.0) })
}
