//! Building-block decoding orders and the schedules they induce.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Largest building block accepted by [`enumerate_monotone_orders`].
pub const MAX_ENUMERATED_BLOCK: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum User {
    One,
    Two,
}

impl User {
    /// `1` or `2`.
    pub fn number(self) -> u8 {
        match self {
            User::One => 1,
            User::Two => 2,
        }
    }

    pub fn from_number(k: u8) -> Result<Self> {
        match k {
            1 => Ok(User::One),
            2 => Ok(User::Two),
            _ => Err(Error::InvalidOrder(format!("user must be 1 or 2, got {k}"))),
        }
    }

    pub fn other(self) -> Self {
        match self {
            User::One => User::Two,
            User::Two => User::One,
        }
    }
}

/// One building-block input: user `user`, 0-based index `index` in `[L]`.
/// Displayed 1-based, `U1` for user 1 and `V1` for user 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Label {
    pub user: User,
    pub index: usize,
}

impl Label {
    pub fn u(index: usize) -> Self {
        Self { user: User::One, index }
    }

    pub fn v(index: usize) -> Self {
        Self { user: User::Two, index }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = if self.user == User::One { 'U' } else { 'V' };
        write!(f, "{c}{}", self.index + 1)
    }
}

/// A monotone permutation of the `2L` inputs of a building block.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockOrder {
    l: usize,
    sequence: Vec<Label>,
}

impl BlockOrder {
    pub fn new(l: usize, sequence: Vec<Label>) -> Result<Self> {
        if l == 0 || !l.is_power_of_two() {
            return Err(Error::InvalidOrder(format!("block size {l} is not a power of two")));
        }
        if sequence.len() != 2 * l {
            return Err(Error::InvalidOrder(format!(
                "expected {} labels for L = {l}, got {}",
                2 * l,
                sequence.len()
            )));
        }
        let mut next = [0usize; 2];
        for lab in &sequence {
            let k = (lab.user.number() - 1) as usize;
            if lab.index >= l {
                return Err(Error::InvalidOrder(format!("label {lab} outside [1, {l}]")));
            }
            if lab.index != next[k] {
                return Err(Error::InvalidOrder(format!(
                    "label {lab} breaks the increasing index order of its user"
                )));
            }
            next[k] += 1;
        }
        Ok(Self { l, sequence })
    }

    /// `(V_1..V_{i-1}, U_1..U_L, V_i..V_L)` for `1 <= i <= L + 1`.
    pub fn preset(l: usize, i: usize) -> Result<Self> {
        if i == 0 || i > l + 1 {
            return Err(Error::InvalidOrder(format!("preset index {i} outside [1, {}]", l + 1)));
        }
        let seq = (0..i - 1)
            .map(Label::v)
            .chain((0..l).map(Label::u))
            .chain((i - 1..l).map(Label::v))
            .collect();
        Self::new(l, seq)
    }

    /// Builds an order from the positions of user 1's labels; the bit for
    /// slot `j` counts from the most significant end of a `2L`-bit word.
    fn from_user1_positions(l: usize, mask: u64) -> Self {
        let mut next = [0usize; 2];
        let sequence = (0..2 * l)
            .map(|j| {
                let user = if mask >> (2 * l - 1 - j) & 1 == 1 { User::One } else { User::Two };
                let k = (user.number() - 1) as usize;
                next[k] += 1;
                Label { user, index: next[k] - 1 }
            })
            .collect();
        Self { l, sequence }
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn sequence(&self) -> &[Label] {
        &self.sequence
    }

    /// Position of `label` in the decoding sequence.
    pub fn position(&self, label: Label) -> Option<usize> {
        self.sequence.iter().position(|&x| x == label)
    }

    /// `(user, index)` pairs, both 1-based, as stored in code files.
    pub fn to_pairs(&self) -> Vec<[usize; 2]> {
        self.sequence.iter().map(|lab| [lab.user.number() as usize, lab.index + 1]).collect()
    }

    pub fn from_pairs(l: usize, pairs: &[[usize; 2]]) -> Result<Self> {
        let seq = pairs
            .iter()
            .map(|&[user, idx]| {
                if idx == 0 {
                    return Err(Error::InvalidOrder("label indices are 1-based".into()));
                }
                Ok(Label { user: User::from_number(user.min(255) as u8)?, index: idx - 1 })
            })
            .collect::<Result<_>>()?;
        Self::new(l, seq)
    }
}

impl fmt::Display for BlockOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, lab) in self.sequence.iter().enumerate() {
            if j > 0 {
                f.write_str(",")?;
            }
            write!(f, "{lab}")?;
        }
        Ok(())
    }
}

/// Parses `U1,V1,U2,V2` (case-insensitive, `U`/`V` or `1`/`2` user tags).
impl FromStr for BlockOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let seq: Vec<Label> = s
            .split(',')
            .map(|tok| {
                let tok = tok.trim();
                let mut chars = tok.chars();
                let user = match chars.next().map(|c| c.to_ascii_uppercase()) {
                    Some('U') => User::One,
                    Some('V') => User::Two,
                    _ => return Err(Error::InvalidOrder(format!("bad label '{tok}'"))),
                };
                let idx: usize = chars
                    .as_str()
                    .parse()
                    .map_err(|_| Error::InvalidOrder(format!("bad label '{tok}'")))?;
                if idx == 0 {
                    return Err(Error::InvalidOrder(format!("bad label '{tok}'")));
                }
                Ok(Label { user, index: idx - 1 })
            })
            .collect::<Result<_>>()?;
        let l = seq.len() / 2;
        Self::new(l, seq)
    }
}

/// All `C(2L, L)` monotone orders, sorted so that orders placing user 1
/// earlier come first.
pub fn enumerate_monotone_orders(l: usize) -> Result<Vec<BlockOrder>> {
    if l == 0 || !l.is_power_of_two() || l > MAX_ENUMERATED_BLOCK {
        return Err(Error::InvalidOrder(format!(
            "L = {l} must be a power of two no larger than {MAX_ENUMERATED_BLOCK}"
        )));
    }
    let width = 2 * l;
    let mut masks: Vec<u64> = (0u64..1 << width).filter(|m| m.count_ones() as usize == l).collect();
    masks.sort_unstable_by(|a, b| b.cmp(a));
    Ok(masks.into_iter().map(|m| BlockOrder::from_user1_positions(l, m)).collect())
}

/// Where joint decision slot `j` lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlotInfo {
    /// Super-channel (position in the block order), 0-based.
    pub super_channel: usize,
    /// Index within the super-channel's outer transform.
    pub outer: usize,
    pub owner: User,
    /// Index into the owner's length-`N` input vector.
    pub polar_index: usize,
}

/// The lifted schedule of `2N` decisions for per-user length `N`.
///
/// Slot `j` belongs to super-channel `k = j / (N/L)` at outer index
/// `m = j % (N/L)`; label `(user, a)` at position `k` decides that user's
/// inputs `a N/L .. (a+1) N/L`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schedule {
    n_user: usize,
    order: BlockOrder,
}

impl Schedule {
    pub fn new(n_user: usize, order: BlockOrder) -> Result<Self> {
        if !n_user.is_power_of_two() || n_user < order.l() {
            return Err(Error::InvalidArgument(format!(
                "per-user length {n_user} must be a power of two no smaller than L = {}",
                order.l()
            )));
        }
        Ok(Self { n_user, order })
    }

    pub fn n_user(&self) -> usize {
        self.n_user
    }

    pub fn order(&self) -> &BlockOrder {
        &self.order
    }

    /// Length `N/L` of each outer transform.
    pub fn outer_len(&self) -> usize {
        self.n_user / self.order.l()
    }

    pub fn slots(&self) -> usize {
        2 * self.n_user
    }

    pub fn slot(&self, j: usize) -> SlotInfo {
        let w = self.outer_len();
        let (k, m) = (j / w, j % w);
        let lab = self.order.sequence()[k];
        SlotInfo { super_channel: k, outer: m, owner: lab.user, polar_index: lab.index * w + m }
    }

    pub fn iter(&self) -> impl Iterator<Item = SlotInfo> + '_ {
        (0..self.slots()).map(|j| self.slot(j))
    }

    /// Slot deciding input `polar_index` of `user`.
    pub fn slot_of(&self, user: User, polar_index: usize) -> usize {
        let w = self.outer_len();
        let lab = Label { user, index: polar_index / w };
        let k = self.order.position(lab).expect("order contains every label");
        k * w + polar_index % w
    }
}
