use crate::error::{Error, Result};

/// The Kronecker power `G^{⊗n}` of `G = [[1, 0], [1, 1]]`, acting on
/// length `N = 2^n` vectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TransformOrder {
    n: u32,
}

impl TransformOrder {
    pub fn new(n: u32) -> Self {
        assert!(n < usize::BITS, "transform order too large");
        Self { n }
    }

    pub fn from_len(len: usize) -> Result<Self> {
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("block length {len} is not a power of two")));
        }
        Ok(Self { n: len.trailing_zeros() })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn len(&self) -> usize {
        1 << self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `x = u G^{⊗n}` over GF(2) in natural (not bit-reversed) order, in place.
pub fn polar_transform_in_place(bits: &mut [u8]) {
    let n = bits.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in bits.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter()) {
                *a ^= *b;
            }
        }
        half <<= 1;
    }
}

pub fn polar_encode(u: &[u8], order: TransformOrder) -> Result<Vec<u8>> {
    if u.len() != order.len() {
        return Err(Error::LengthMismatch { expected: order.len(), got: u.len() });
    }
    let mut x = u.to_vec();
    polar_transform_in_place(&mut x);
    Ok(x)
}
