//! Channels as simulated transmission media: sampling outputs and turning
//! received outputs into per-use likelihood evidence.

use super::gaussian::{log_add_exp, GaussianMac};
use super::mac::DiscreteMac;
use crate::error::{Error, Result};
use crate::mac_polar::User;
use rand::Rng;
use rand_distr::StandardNormal;

/// Number of bins used when a Gaussian MAC has to be treated exactly.
pub const DEFAULT_BINS: usize = 2000;

#[derive(Debug, Clone)]
pub enum ChannelModel {
    Discrete(DiscreteSource),
    Gaussian(GaussianMac),
}

/// A discrete MAC together with its sampling tables.
#[derive(Debug, Clone)]
pub struct DiscreteSource {
    mac: DiscreteMac,
    cdf: [Vec<f64>; 4],
}

impl DiscreteSource {
    pub fn new(mac: DiscreteMac) -> Self {
        let cdf = std::array::from_fn(|k| {
            let mut acc = 0.0;
            mac.outputs()
                .iter()
                .map(|p| {
                    acc += p[k];
                    acc
                })
                .collect()
        });
        Self { mac, cdf }
    }

    pub fn mac(&self) -> &DiscreteMac {
        &self.mac
    }

    fn sample<R: Rng + ?Sized>(&self, u: u8, v: u8, rng: &mut R) -> usize {
        let cdf = &self.cdf[((u << 1) | v) as usize];
        let r: f64 = rng.random::<f64>() * cdf[cdf.len() - 1];
        cdf.partition_point(|&c| c <= r).min(cdf.len() - 1)
    }
}

/// Received outputs of one frame.
#[derive(Debug, Clone, PartialEq)]
pub enum Observation {
    Discrete(Vec<usize>),
    Gaussian(Vec<f64>),
}

impl Observation {
    pub fn len(&self) -> usize {
        match self {
            Observation::Discrete(y) => y.len(),
            Observation::Gaussian(y) => y.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl ChannelModel {
    pub fn discrete(mac: DiscreteMac) -> Self {
        ChannelModel::Discrete(DiscreteSource::new(mac))
    }

    pub fn gaussian(sigma: f64) -> Result<Self> {
        Ok(ChannelModel::Gaussian(GaussianMac::new(sigma)?))
    }

    /// The channel as a finite-output MAC; Gaussian channels are quantized
    /// with `bins` bins over the default range.
    pub fn to_discrete(&self, bins: usize) -> Result<DiscreteMac> {
        match self {
            ChannelModel::Discrete(d) => Ok(d.mac.clone()),
            ChannelModel::Gaussian(g) => g.quantize_default(bins),
        }
    }

    /// Sends codewords `x1` (user 1) and `x2` (user 2) through independent
    /// uses of the channel.
    pub fn transmit<R: Rng + ?Sized>(&self, x1: &[u8], x2: &[u8], rng: &mut R) -> Result<Observation> {
        if x1.len() != x2.len() {
            return Err(Error::LengthMismatch { expected: x1.len(), got: x2.len() });
        }
        Ok(match self {
            ChannelModel::Discrete(d) => {
                Observation::Discrete(x1.iter().zip(x2).map(|(&u, &v)| d.sample(u, v, rng)).collect())
            }
            ChannelModel::Gaussian(g) => Observation::Gaussian(
                x1.iter()
                    .zip(x2)
                    .map(|(&u, &v)| {
                        let z: f64 = rng.sample(StandardNormal);
                        GaussianMac::mean(u, v) + g.noise_std() * z
                    })
                    .collect(),
            ),
        })
    }

    /// Per-use log-likelihoods `[ln W(y|0,0), ln W(y|0,1), ln W(y|1,0), ln W(y|1,1)]`
    /// (Gaussian values are shifted by a per-use constant).
    pub fn use_logliks(&self, obs: &Observation) -> Result<Vec<[f64; 4]>> {
        match (self, obs) {
            (ChannelModel::Discrete(d), Observation::Discrete(ys)) => ys
                .iter()
                .map(|&y| {
                    let p = d.mac.outputs().get(y).ok_or_else(|| {
                        Error::InvalidArgument(format!("output symbol {y} outside the alphabet"))
                    })?;
                    Ok(p.map(f64::ln))
                })
                .collect(),
            (ChannelModel::Gaussian(g), Observation::Gaussian(ys)) => Ok(ys
                .iter()
                .map(|&y| {
                    [
                        g.log_likelihood(y, 0, 0),
                        g.log_likelihood(y, 0, 1),
                        g.log_likelihood(y, 1, 0),
                        g.log_likelihood(y, 1, 1),
                    ]
                })
                .collect()),
            _ => Err(Error::InvalidArgument("observation does not match channel family".into())),
        }
    }
}

/// LLR of user 1's bit with user 2's bit uniform, from per-use log-likelihoods.
#[inline]
pub fn dot_llr(l: &[f64; 4]) -> f64 {
    let a = log_add_exp(l[0], l[1]);
    let b = log_add_exp(l[2], l[3]);
    llr_from_logs(a, b)
}

/// LLR of user 2's bit given user 1's bit `u`.
#[inline]
pub fn ddot_llr(l: &[f64; 4], u: u8) -> f64 {
    let k = 2 * u as usize;
    llr_from_logs(l[k], l[k + 1])
}

/// LLR of `user`'s bit with the other user's bit uniform.
#[inline]
pub fn marginal_llr(l: &[f64; 4], user: User) -> f64 {
    match user {
        User::One => dot_llr(l),
        User::Two => llr_from_logs(log_add_exp(l[0], l[2]), log_add_exp(l[1], l[3])),
    }
}

/// LLR of `user`'s bit given the other user's bit `other`.
#[inline]
pub fn conditional_llr(l: &[f64; 4], user: User, other: u8) -> f64 {
    match user {
        User::One => llr_from_logs(l[other as usize], l[2 + other as usize]),
        User::Two => ddot_llr(l, other),
    }
}

/// `a - b` with the convention that two impossible hypotheses give `0`.
#[inline]
pub(crate) fn llr_from_logs(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY && b == f64::NEG_INFINITY {
        0.0
    } else {
        a - b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn adder_transmission_is_exact() {
        let ch = ChannelModel::discrete(DiscreteMac::adder());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let obs = ch.transmit(&[0, 1, 0, 1], &[0, 0, 1, 1], &mut rng).unwrap();
        assert_eq!(obs, Observation::Discrete(vec![0, 1, 1, 2]));
    }

    #[test]
    fn gaussian_noise_has_expected_variance() {
        let ch = ChannelModel::gaussian(1.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let n = 100_000;
        let Observation::Gaussian(ys) = ch.transmit(&vec![0; n], &vec![1; n], &mut rng).unwrap() else {
            unreachable!()
        };
        let mean = ys.iter().sum::<f64>() / n as f64;
        let var = ys.iter().map(|y| (y - mean).powi(2)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01);
        assert!((var - 0.5).abs() < 0.01);
    }

    #[test]
    fn generic_llrs_match_closed_forms() {
        let g = GaussianMac::new(1.0).unwrap();
        let ch = ChannelModel::Gaussian(g);
        let obs = Observation::Gaussian(vec![-2.3, -0.1, 0.0, 0.8, 3.5]);
        let ls = ch.use_logliks(&obs).unwrap();
        let Observation::Gaussian(ys) = obs else { unreachable!() };
        for (l, y) in ls.iter().zip(ys) {
            assert!((dot_llr(l) - g.llr_dot(y)).abs() < 1e-10);
            for u in 0..2 {
                assert!((ddot_llr(l, u) - g.llr_ddot(y, u)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn mismatched_observation_is_rejected() {
        let ch = ChannelModel::discrete(DiscreteMac::adder());
        assert!(ch.use_logliks(&Observation::Gaussian(vec![0.0])).is_err());
        assert!(ch.use_logliks(&Observation::Discrete(vec![3])).is_err());
    }

    #[test]
    fn role_llrs_match_user_swap() {
        let l = [-0.3f64, -1.2, -2.0, -0.7];
        let swapped = [l[0], l[2], l[1], l[3]];
        assert!((marginal_llr(&l, User::Two) - marginal_llr(&swapped, User::One)).abs() < 1e-15);
        for b in 0..2 {
            assert!((conditional_llr(&l, User::One, b) - conditional_llr(&swapped, User::Two, b)).abs() < 1e-15);
        }
    }
}
