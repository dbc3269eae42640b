//! JSON channel files.
//!
//! ```json
//! {"type": "discrete_mac", "prob": [[[...], [...]], [[...], [...]]]}
//! {"type": "discrete_bimc", "prob": [[...], [...]]}
//! {"type": "gaussian_mac", "sigma": 1.0}
//! ```
//!
//! `discrete_mac` probabilities are indexed `[u][v][y]`, `discrete_bimc`
//! probabilities `[x][y]`.

use super::{DiscreteBimc, DiscreteMac, GaussianMac};
use crate::error::Result;
use serde::{Deserialize, Serialize};
use std::path::Path;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ChannelFile {
    DiscreteMac { prob: [[Vec<f64>; 2]; 2] },
    DiscreteBimc { prob: [Vec<f64>; 2] },
    GaussianMac { sigma: f64 },
}

/// A validated channel loaded from a [`ChannelFile`].
#[derive(Debug, Clone)]
pub enum LoadedChannel {
    Mac(DiscreteMac),
    Bimc(DiscreteBimc),
    Gaussian(GaussianMac),
}

impl ChannelFile {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn load(self) -> Result<LoadedChannel> {
        Ok(match self {
            ChannelFile::DiscreteMac { prob } => LoadedChannel::Mac(DiscreteMac::new(prob)?),
            ChannelFile::DiscreteBimc { prob: [r0, r1] } => LoadedChannel::Bimc(DiscreteBimc::new(r0, r1)?),
            ChannelFile::GaussianMac { sigma } => LoadedChannel::Gaussian(GaussianMac::new(sigma)?),
        })
    }
}

impl From<&DiscreteMac> for ChannelFile {
    fn from(w: &DiscreteMac) -> Self {
        ChannelFile::DiscreteMac { prob: w.to_tensor() }
    }
}

impl From<&DiscreteBimc> for ChannelFile {
    fn from(w: &DiscreteBimc) -> Self {
        let row = |x: usize| w.pairs().iter().map(|p| p[x]).collect();
        ChannelFile::DiscreteBimc { prob: [row(0), row(1)] }
    }
}
