//! Two-user binary-input multiple access channels.

use super::bimc::{DiscreteBimc, MERGE_RESOLUTION, ROW_SUM_TOL};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A two-user MAC `W(y|u,v)` with binary inputs and a finite output alphabet.
///
/// Each output symbol stores `[W(y|0,0), W(y|0,1), W(y|1,0), W(y|1,1)]`,
/// i.e. the input pair `(u, v)` sits at index `2u + v`.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMac {
    outputs: Vec<[f64; 4]>,
}

/// A rate pair `(R1, R2)` in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: f64,
    pub r2: f64,
}

impl RatePair {
    pub fn new(r1: f64, r2: f64) -> Self {
        Self { r1, r2 }
    }

    pub fn sum(&self) -> f64 {
        self.r1 + self.r2
    }
}

/// Corner points of the uniform rate region.
///
/// `a_point` decodes user 1 first (`(I(U;Y), I(V;Y|U))`), `b_point` decodes
/// user 2 first (`(I(U;Y|V), I(V;Y))`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionVertices {
    pub a_point: RatePair,
    pub b_point: RatePair,
    pub sum_rate: f64,
}

impl RegionVertices {
    /// Largest rate either user can get alone, `I(U;Y|V)` for user 1.
    pub fn user1_max(&self) -> f64 {
        self.b_point.r1
    }

    pub fn user2_max(&self) -> f64 {
        self.a_point.r2
    }

    /// Whether `p` lies on the dominant face between the two corners.
    pub fn on_dominant_face(&self, p: RatePair, tol: f64) -> bool {
        (p.sum() - self.sum_rate).abs() <= tol
            && p.r1 >= self.a_point.r1 - tol
            && p.r1 <= self.b_point.r1 + tol
    }
}

impl DiscreteMac {
    /// Builds a MAC from the tensor `prob[u][v][y]`.
    pub fn new(prob: [[Vec<f64>; 2]; 2]) -> Result<Self> {
        let m = prob[0][0].len();
        for row in prob.iter().flatten() {
            if row.len() != m {
                return Err(Error::LengthMismatch { expected: m, got: row.len() });
            }
        }
        let outputs = (0..m)
            .map(|y| [prob[0][0][y], prob[0][1][y], prob[1][0][y], prob[1][1][y]])
            .collect();
        Self::from_outputs(outputs)
    }

    pub fn from_outputs(outputs: Vec<[f64; 4]>) -> Result<Self> {
        if outputs.is_empty() {
            return Err(Error::InvalidChannel("empty output alphabet".into()));
        }
        let mut sums = [0.0; 4];
        for (y, p) in outputs.iter().enumerate() {
            for (k, &q) in p.iter().enumerate() {
                if !(0.0..=1.0).contains(&q) {
                    return Err(Error::InvalidChannel(format!(
                        "W({y}|{},{}) = {q} is not a probability",
                        k >> 1,
                        k & 1
                    )));
                }
                sums[k] += q;
            }
        }
        for (k, s) in sums.iter().enumerate() {
            if (s - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidChannel(format!(
                    "slice (u={}, v={}) sums to {s}",
                    k >> 1,
                    k & 1
                )));
            }
        }
        Ok(Self { outputs })
    }

    pub(crate) fn from_outputs_unchecked(outputs: Vec<[f64; 4]>) -> Self {
        Self { outputs }
    }

    /// Noiseless adder: `y = u + v` over the integers.
    pub fn adder() -> Self {
        Self::from_outputs_unchecked(vec![
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ])
    }

    /// Output independent of both inputs.
    pub fn pure_noise(outputs: usize) -> Self {
        let p = 1.0 / outputs.max(1) as f64;
        Self::from_outputs_unchecked(vec![[p; 4]; outputs.max(1)])
    }

    pub fn output_size(&self) -> usize {
        self.outputs.len()
    }

    pub fn outputs(&self) -> &[[f64; 4]] {
        &self.outputs
    }

    pub fn prob(&self, y: usize, u: u8, v: u8) -> f64 {
        self.outputs[y][((u << 1) | v) as usize]
    }

    /// The tensor `prob[u][v][y]`.
    pub fn to_tensor(&self) -> [[Vec<f64>; 2]; 2] {
        let col = |k: usize| self.outputs.iter().map(|p| p[k]).collect::<Vec<_>>();
        [[col(0), col(1)], [col(2), col(3)]]
    }

    /// The same channel with the roles of the two users exchanged.
    pub fn swap_users(&self) -> Self {
        Self::from_outputs_unchecked(self.outputs.iter().map(|p| [p[0], p[2], p[1], p[3]]).collect())
    }

    /// Channel seen by user 1 treating user 2's bit as uniform noise:
    /// `W'(y|u) = 1/2 sum_v W(y|u,v)`.
    pub fn dot_channel(&self) -> DiscreteBimc {
        DiscreteBimc::from_pairs_unchecked(
            self.outputs
                .iter()
                .map(|p| [0.5 * (p[0] + p[1]), 0.5 * (p[2] + p[3])])
                .collect(),
        )
    }

    /// Channel seen by user 2 when user 1's uniform bit is revealed at the
    /// output: `W''(y, u | v) = 1/2 W(y|u,v)`, output `(u, y)` indexed
    /// `u * M + y`.
    pub fn ddot_channel(&self) -> DiscreteBimc {
        let mut pairs = Vec::with_capacity(2 * self.outputs.len());
        for u in 0..2 {
            pairs.extend(self.outputs.iter().map(|p| [0.5 * p[2 * u], 0.5 * p[2 * u + 1]]));
        }
        DiscreteBimc::from_pairs_unchecked(pairs)
    }

    /// `I(U,V;Y)` in bits for independent uniform inputs.
    pub fn sum_rate(&self) -> f64 {
        let mut h_y = 0.0;
        let mut h_y_uv = 0.0;
        for p in &self.outputs {
            let q = 0.25 * p.iter().sum::<f64>();
            if q > 0.0 {
                h_y -= q * q.log2();
            }
            for &x in p {
                if x > 0.0 {
                    h_y_uv -= 0.25 * x * x.log2();
                }
            }
        }
        h_y - h_y_uv
    }

    /// `I(U;Y,V)`, which equals `I(U;Y|V)` for independent inputs.
    pub fn user1_information(&self) -> f64 {
        self.swap_users().ddot_channel().mutual_information()
    }

    /// `I(V;Y,U)`.
    pub fn user2_information(&self) -> f64 {
        self.ddot_channel().mutual_information()
    }

    pub fn region_vertices(&self) -> RegionVertices {
        let swapped = self.swap_users();
        RegionVertices {
            a_point: RatePair::new(
                self.dot_channel().mutual_information(),
                self.ddot_channel().mutual_information(),
            ),
            b_point: RatePair::new(
                swapped.ddot_channel().mutual_information(),
                swapped.dot_channel().mutual_information(),
            ),
            sum_rate: self.sum_rate(),
        }
    }

    /// Lossless alphabet reduction: outputs whose likelihood 4-vectors are
    /// proportional are summed, zero-probability outputs dropped.
    pub fn merged(&self) -> Self {
        let mut keyed: Vec<([i64; 3], [f64; 4])> = self
            .outputs
            .iter()
            .filter_map(|p| {
                let s: f64 = p.iter().sum();
                (s > 0.0).then(|| {
                    let k = |i: usize| (p[i] / s / MERGE_RESOLUTION).round() as i64;
                    ([k(0), k(1), k(2)], *p)
                })
            })
            .collect();
        if keyed.is_empty() {
            return self.clone();
        }
        keyed.sort_by_key(|a| a.0);
        let mut out: Vec<[f64; 4]> = Vec::with_capacity(keyed.len());
        let mut last: Option<[i64; 3]> = None;
        for (k, p) in keyed {
            match (last, out.last_mut()) {
                (Some(prev), Some(acc)) if prev == k => {
                    for i in 0..4 {
                        acc[i] += p[i];
                    }
                }
                _ => out.push(p),
            }
            last = Some(k);
        }
        Self::from_outputs_unchecked(out)
    }
}
