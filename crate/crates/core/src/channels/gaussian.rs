//! Binary-additive Gaussian MAC with BPSK inputs.
//!
//! Inputs map `0 -> -1`, `1 -> +1` and the receiver sees
//! `y = u_bar + v_bar + noise`. The noise density is proportional to
//! `exp(-t^2 / sigma^2)`, so `sigma^2` plays the role of `N0` and the noise
//! variance is `sigma^2 / 2`. With `sigma = 1` this channel has
//! `I(U,V;Y) ~ 1.11` and `I(U;Y|V) ~ 0.7215` bits.

use super::mac::DiscreteMac;
use crate::error::{Error, Result};
use statrs::function::erf::erfc;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMac {
    sigma: f64,
}

#[inline]
pub fn bpsk(bit: u8) -> f64 {
    if bit == 0 {
        -1.0
    } else {
        1.0
    }
}

/// `ln(e^a + e^b)` without overflow; `-inf` inputs are handled.
#[inline]
pub(crate) fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    hi + (lo - hi).exp().ln_1p()
}

impl GaussianMac {
    pub fn new(sigma: f64) -> Result<Self> {
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::InvalidChannel(format!("sigma must be positive, got {sigma}")));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Standard deviation of the additive noise, `sigma / sqrt(2)`.
    pub fn noise_std(&self) -> f64 {
        self.sigma * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn mean(u: u8, v: u8) -> f64 {
        bpsk(u) + bpsk(v)
    }

    /// `ln p(y|u,v)` up to an additive constant shared by all input pairs.
    #[inline]
    pub fn log_likelihood(&self, y: f64, u: u8, v: u8) -> f64 {
        let t = y - Self::mean(u, v);
        -t * t / (self.sigma * self.sigma)
    }

    /// Natural-log LLR of the channel seen by user 1 with user 2 as noise;
    /// positive values favour `u = 0`.
    pub fn llr_dot(&self, y: f64) -> f64 {
        let s2 = self.sigma * self.sigma;
        let mid = -y * y / s2;
        let plus = -(y + 2.0) * (y + 2.0) / s2;
        let minus = -(y - 2.0) * (y - 2.0) / s2;
        log_add_exp(mid, plus) - log_add_exp(mid, minus)
    }

    /// Natural-log LLR of user 2's bit when user 1's bit `u` is known:
    /// `-4 (y - u_bar) / sigma^2`.
    pub fn llr_ddot(&self, y: f64, u: u8) -> f64 {
        -4.0 * (y - bpsk(u)) / (self.sigma * self.sigma)
    }

    /// Half-width of the default quantization range, `2 + 8 sigma`.
    pub fn default_half_range(&self) -> f64 {
        2.0 + 8.0 * self.sigma
    }

    /// Discretizes the output into `bins` equal-width bins on `[lo, hi]`.
    /// Each bin carries the Gaussian mass of its interval; mass beyond the
    /// range is folded into the two edge bins.
    pub fn quantize(&self, lo: f64, hi: f64, bins: usize) -> Result<DiscreteMac> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi && bins >= 2) {
            return Err(Error::InvalidRange { lo, hi, bins });
        }
        let std = self.noise_std();
        let width = (hi - lo) / bins as f64;
        let mut outputs = vec![[0.0; 4]; bins];
        for (k, (u, v)) in [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().enumerate() {
            let mean = Self::mean(u, v);
            // mass of (a, b] for a standard normal, accurate in both tails
            let mass = |a: f64, b: f64| -> f64 {
                let a = (a - mean) / std;
                let b = (b - mean) / std;
                if a >= 0.0 {
                    upper_tail(a) - upper_tail(b)
                } else if b <= 0.0 {
                    upper_tail(-b) - upper_tail(-a)
                } else {
                    1.0 - upper_tail(-a) - upper_tail(b)
                }
            };
            let mut total = 0.0;
            for (i, out) in outputs.iter_mut().enumerate() {
                let a = if i == 0 { f64::NEG_INFINITY } else { lo + i as f64 * width };
                let b = if i + 1 == bins { f64::INFINITY } else { lo + (i + 1) as f64 * width };
                out[k] = mass(a, b).max(0.0);
                total += out[k];
            }
            for out in outputs.iter_mut() {
                out[k] /= total;
            }
        }
        DiscreteMac::from_outputs(outputs)
    }

    /// Quantization with the default range and the given bin count.
    pub fn quantize_default(&self, bins: usize) -> Result<DiscreteMac> {
        let h = self.default_half_range();
        self.quantize(-h, h, bins)
    }
}

/// `P(Z > z)` for a standard normal `Z`.
fn upper_tail(z: f64) -> f64 {
    if z == f64::INFINITY {
        0.0
    } else if z == f64::NEG_INFINITY {
        1.0
    } else {
        0.5 * erfc(z * std::f64::consts::FRAC_1_SQRT_2)
    }
}
