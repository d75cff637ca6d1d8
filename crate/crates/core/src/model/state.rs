use std::fmt;

/// Joint state of the components. Bit `i` is component `i` (0-indexed);
/// a set bit means the component works.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateVector(u32);

impl StateVector {
    /// Wraps a raw mask without validation; use [`StateVector::new`] when the
    /// component count is known.
    pub const fn from_mask(mask: u32) -> Self {
        Self(mask)
    }

    pub fn new(mask: u32, n: usize) -> crate::Result<Self> {
        if n < 32 && mask >> n != 0 {
            return Err(crate::Error::InvalidState { mask, n });
        }
        Ok(Self(mask))
    }

    pub fn all_working(n: usize) -> Self {
        Self(full_mask(n))
    }

    /// Builds a state from per-component flags (`true` = working).
    pub fn from_bits(bits: &[bool]) -> Self {
        Self(
            bits.iter()
                .enumerate()
                .fold(0, |m, (i, &b)| if b { m | 1 << i } else { m }),
        )
    }

    pub const fn mask(self) -> u32 {
        self.0
    }

    pub fn is_working(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize, working: bool) -> Self {
        if working {
            Self(self.0 | 1 << i)
        } else {
            Self(self.0 & !(1 << i))
        }
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}

/// Mask with the low `n` bits set.
pub(crate) fn full_mask(n: usize) -> u32 {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}
