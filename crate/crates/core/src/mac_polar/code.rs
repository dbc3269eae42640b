//! Two-user polar codes and their encoders.

use super::order::{BlockOrder, Schedule, User};
use crate::error::{Error, Result};
use crate::polar::{polar_transform_in_place, FrozenSpec};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;

/// A two-user polar code: per-user length `N`, block order, information sets
/// (0-based polar indices) and the values of the frozen inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MacPolarCode {
    schedule: Schedule,
    info: [Vec<usize>; 2],
    frozen_values: [Vec<u8>; 2],
}

#[derive(Serialize, Deserialize)]
struct CodeFile {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "L")]
    l: usize,
    order: Vec<[usize; 2]>,
    info_set_1: Vec<usize>,
    info_set_2: Vec<usize>,
    /// Keyed by user number; one value per polar index (information
    /// positions hold 0).
    frozen_values: BTreeMap<String, Vec<u8>>,
}

impl MacPolarCode {
    pub fn new(
        n_user: usize,
        order: BlockOrder,
        info_set_1: Vec<usize>,
        info_set_2: Vec<usize>,
        frozen_values_1: Vec<u8>,
        frozen_values_2: Vec<u8>,
    ) -> Result<Self> {
        let schedule = Schedule::new(n_user, order)?;
        let mut info = [info_set_1, info_set_2];
        for set in info.iter_mut() {
            set.sort_unstable();
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidCode("duplicate information index".into()));
            }
            if set.last().is_some_and(|&i| i >= n_user) {
                return Err(Error::InvalidCode(format!("information index outside [0, {n_user})")));
            }
        }
        let mut frozen_values = [frozen_values_1, frozen_values_2];
        for (k, f) in frozen_values.iter_mut().enumerate() {
            if f.len() != n_user {
                return Err(Error::LengthMismatch { expected: n_user, got: f.len() });
            }
            for b in f.iter_mut() {
                *b &= 1;
            }
            for &i in &info[k] {
                f[i] = 0;
            }
        }
        Ok(Self { schedule, info, frozen_values })
    }

    /// A code with every input frozen to zero except the given sets.
    pub fn with_zero_frozen(n_user: usize, order: BlockOrder, info_set_1: Vec<usize>, info_set_2: Vec<usize>) -> Result<Self> {
        Self::new(n_user, order, info_set_1, info_set_2, vec![0; n_user], vec![0; n_user])
    }

    pub fn n_user(&self) -> usize {
        self.schedule.n_user()
    }

    pub fn order(&self) -> &BlockOrder {
        self.schedule.order()
    }

    pub fn schedule(&self) -> &Schedule {
        &self.schedule
    }

    fn k(user: User) -> usize {
        (user.number() - 1) as usize
    }

    pub fn info_set(&self, user: User) -> &[usize] {
        &self.info[Self::k(user)]
    }

    pub fn frozen_values(&self, user: User) -> &[u8] {
        &self.frozen_values[Self::k(user)]
    }

    pub fn rate(&self, user: User) -> f64 {
        self.info_set(user).len() as f64 / self.n_user() as f64
    }

    /// Frozen specification of one user over its own polar indices.
    pub fn frozen_spec(&self, user: User) -> FrozenSpec {
        let mut bits: Vec<Option<u8>> = self.frozen_values(user).iter().map(|&b| Some(b)).collect();
        for &i in self.info_set(user) {
            bits[i] = None;
        }
        FrozenSpec::new(bits)
    }

    /// Places information bits into a full input vector for `user`.
    pub fn scatter(&self, user: User, info_bits: &[u8]) -> Result<Vec<u8>> {
        let set = self.info_set(user);
        if info_bits.len() != set.len() {
            return Err(Error::LengthMismatch { expected: set.len(), got: info_bits.len() });
        }
        let mut u = self.frozen_values(user).to_vec();
        for (&i, &b) in set.iter().zip(info_bits) {
            u[i] = b & 1;
        }
        Ok(u)
    }

    /// Reads the information bits of `user` out of a full input vector.
    pub fn gather(&self, user: User, u: &[u8]) -> Vec<u8> {
        self.info_set(user).iter().map(|&i| u[i]).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        let file = CodeFile {
            n: self.n_user(),
            l: self.order().l(),
            order: self.order().to_pairs(),
            info_set_1: self.info[0].clone(),
            info_set_2: self.info[1].clone(),
            frozen_values: BTreeMap::from([
                ("1".to_string(), self.frozen_values[0].clone()),
                ("2".to_string(), self.frozen_values[1].clone()),
            ]),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let mut file: CodeFile = serde_json::from_str(text)?;
        let order = BlockOrder::from_pairs(file.l, &file.order)?;
        let mut take = |key: &str| file.frozen_values.remove(key).unwrap_or_else(|| vec![0; file.n]);
        let (f1, f2) = (take("1"), take("2"));
        Self::new(file.n, order, file.info_set_1, file.info_set_2, f1, f2)
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Encodes both users independently: `x1 = u G^{⊗n}`, `x2 = v G^{⊗n}`.
pub fn mac_polar_encode(code: &MacPolarCode, info1: &[u8], info2: &[u8]) -> Result<(Vec<u8>, Vec<u8>)> {
    let mut x1 = code.scatter(User::One, info1)?;
    let mut x2 = code.scatter(User::Two, info2)?;
    polar_transform_in_place(&mut x1);
    polar_transform_in_place(&mut x2);
    Ok((x1, x2))
}
