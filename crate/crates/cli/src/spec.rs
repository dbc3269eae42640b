//! Channel and order shorthand.
//!
//! Channels: `gaussian:sigma=<float>`, `adder`, `file:<path>`,
//! `sty:bec=<eps>`, `sty:bsc=<p>`.
//!
//! Orders: `preset:<L>,<i>`, an explicit sequence such as `U1,V1,U2,V2`, or
//! `all-monotone:<L>`.

use macpolar::channels::{ChannelFile, ChannelModel, DiscreteBimc, DiscreteMac, GaussianMac, LoadedChannel};
use macpolar::mac_polar::{enumerate_monotone_orders, BlockOrder};
use macpolar::verification::build_sty_example;
use macpolar::{Error, Result};

#[derive(Debug, Clone)]
pub enum ChannelSpec {
    Gaussian(GaussianMac),
    Discrete(DiscreteMac),
    /// The pair channel built from a single-user channel.
    Sty(DiscreteBimc),
}

fn bad(what: &str, s: &str) -> Error {
    Error::InvalidArgument(format!("bad {what} `{s}`"))
}

fn number(s: &str, what: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| bad(what, s))
}

impl ChannelSpec {
    pub fn parse(s: &str) -> Result<Self> {
        let (kind, rest) = s.split_once(':').unwrap_or((s, ""));
        match kind {
            "adder" if rest.is_empty() => Ok(Self::Discrete(DiscreteMac::adder())),
            "gaussian" => {
                let sigma = rest.strip_prefix("sigma=").ok_or_else(|| bad("channel", s))?;
                Ok(Self::Gaussian(GaussianMac::new(number(sigma, "sigma")?)?))
            }
            "sty" => {
                let (k, v) = rest.split_once('=').ok_or_else(|| bad("channel", s))?;
                let p = number(v, "parameter")?;
                match k {
                    "bec" => Ok(Self::Sty(DiscreteBimc::bec(p)?)),
                    "bsc" => Ok(Self::Sty(DiscreteBimc::bsc(p)?)),
                    _ => Err(bad("channel", s)),
                }
            }
            "file" if !rest.is_empty() => match ChannelFile::read(rest)?.load()? {
                LoadedChannel::Mac(w) => Ok(Self::Discrete(w)),
                LoadedChannel::Gaussian(g) => Ok(Self::Gaussian(g)),
                LoadedChannel::Bimc(_) => {
                    Err(Error::InvalidChannel(format!("{rest} holds a single-user channel; use sty:")))
                }
            },
            _ => Err(bad("channel", s)),
        }
    }

    /// Sampling model; Gaussian channels stay continuous.
    pub fn model(&self) -> ChannelModel {
        match self {
            Self::Gaussian(g) => ChannelModel::Gaussian(*g),
            Self::Discrete(w) => ChannelModel::discrete(w.clone()),
            Self::Sty(wp) => ChannelModel::discrete(build_sty_example(wp)),
        }
    }

    /// Finite-output channel for exact computations; `bins` applies to
    /// Gaussian channels only.
    pub fn discrete(&self, bins: usize) -> Result<DiscreteMac> {
        match self {
            Self::Gaussian(g) => g.quantize_default(bins),
            Self::Discrete(w) => Ok(w.clone()),
            Self::Sty(wp) => Ok(build_sty_example(wp)),
        }
    }
}

pub fn parse_orders(s: &str) -> Result<Vec<BlockOrder>> {
    let s = s.trim();
    if let Some(l) = s.strip_prefix("all-monotone:").or_else(|| s.strip_prefix("all-monotone ")) {
        let l = l.trim().parse().map_err(|_| bad("order", s))?;
        return enumerate_monotone_orders(l);
    }
    if let Some(rest) = s.strip_prefix("preset:") {
        let (l, i) = rest.split_once(',').ok_or_else(|| bad("order", s))?;
        let l = l.trim().parse().map_err(|_| bad("order", s))?;
        let i = i.trim().parse().map_err(|_| bad("order", s))?;
        return Ok(vec![BlockOrder::preset(l, i)?]);
    }
    Ok(vec![s.parse()?])
}

pub fn parse_order(s: &str) -> Result<BlockOrder> {
    let mut v = parse_orders(s)?;
    if v.len() != 1 {
        return Err(Error::InvalidArgument(format!("`{s}` names {} orders, expected one", v.len())));
    }
    Ok(v.remove(0))
}
