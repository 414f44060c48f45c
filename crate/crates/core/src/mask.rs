//! Bit-vector subset masks over the candidate variables.
//!
//! Bit `c` corresponds to the `c`-th candidate variable in dataset order;
//! masks of every width share the `u32` backing store, so the enumeration
//! engine can guard `q <= 30` once and use plain integer operations after.

use std::fmt;

/// A subset of the candidate variables, fixed width `q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubsetMask {
    bits: u32,
    width: u8,
}

/// Widest mask the engine accepts; `2^q` enumeration above this is infeasible
/// anyway, and `u32` masks keep superset tests branch-free.
pub const MAX_MASK_WIDTH: usize = 30;

impl SubsetMask {
    pub fn empty(width: usize) -> Self {
        assert!(width <= MAX_MASK_WIDTH);
        Self { bits: 0, width: width as u8 }
    }

    pub fn full(width: usize) -> Self {
        assert!(width <= MAX_MASK_WIDTH);
        let bits = if width == 0 { 0 } else { (1u32 << width) - 1 };
        Self { bits, width: width as u8 }
    }

    /// Builds a mask from raw bits; bits at or above `width` must be clear.
    pub fn from_bits(bits: u32, width: usize) -> Self {
        assert!(width <= MAX_MASK_WIDTH);
        assert!(width == 32 || bits < (1u32 << width), "bits exceed mask width");
        Self { bits, width: width as u8 }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn popcount(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        *self == Self::full(self.width())
    }

    pub fn contains(&self, candidate: usize) -> bool {
        debug_assert!(candidate < self.width());
        self.bits & (1u32 << candidate) != 0
    }

    /// Returns a copy with `candidate` selected.
    pub fn with(&self, candidate: usize) -> Self {
        debug_assert!(candidate < self.width());
        Self { bits: self.bits | (1u32 << candidate), width: self.width }
    }

    pub fn is_superset_of(&self, other: &Self) -> bool {
        debug_assert_eq!(self.width, other.width);
        self.bits & other.bits == other.bits
    }

    pub fn is_disjoint_from(&self, other: &Self) -> bool {
        self.bits & other.bits == 0
    }

    pub fn union(&self, other: &Self) -> Self {
        debug_assert_eq!(self.width, other.width);
        Self { bits: self.bits | other.bits, width: self.width }
    }

    /// Indices of the selected candidates, ascending.
    pub fn iter_set(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.width()).filter(|&c| self.contains(c))
    }

    /// All `2^f` masks formed by extending `self` with subsets of `free`.
    /// `free` must be disjoint from `self`. Ascending in the submask bits.
    pub fn extensions<'a>(&'a self, free: &'a Self) -> impl Iterator<Item = SubsetMask> + 'a {
        debug_assert!(self.is_disjoint_from(free));
        let free_bits = free.bits;
        let width = self.width;
        let base = self.bits;
        // Standard submask enumeration: s' = (s - 1) & free, started from 0
        // and walked upward instead so the order is deterministic-ascending.
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let sub = next?;
            next = if sub == free_bits {
                None
            } else {
                Some((sub.wrapping_sub(free_bits)) & free_bits)
            };
            Some(SubsetMask { bits: base | sub, width })
        })
    }
}

impl fmt::Display for SubsetMask {
    /// Candidate 0 is printed leftmost, so `1001` with width 4 selects the
    /// first and last candidates.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in 0..self.width() {
            f.write_str(if self.contains(c) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SubsetMask({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_puts_first_candidate_leftmost() {
        let m = SubsetMask::empty(4).with(0).with(3);
        assert_eq!(m.to_string(), "1001");
        assert_eq!(m.popcount(), 2);
    }

    #[test]
    fn superset_and_union() {
        let a = SubsetMask::from_bits(0b0101, 4);
        let b = SubsetMask::from_bits(0b0001, 4);
        assert!(a.is_superset_of(&b));
        assert!(!b.is_superset_of(&a));
        assert_eq!(a.union(&b), a);
    }

    #[test]
    fn extensions_cover_each_submask_once() {
        let base = SubsetMask::from_bits(0b00001, 5);
        let free = SubsetMask::from_bits(0b10110, 5);
        let got: Vec<u32> = base.extensions(&free).map(|m| m.bits()).collect();
        assert_eq!(got.len(), 8);
        let mut sorted = got.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), 8);
        for bits in got {
            assert_eq!(bits & 0b00001, 0b00001);
            assert_eq!(bits & !0b10111, 0);
        }
    }

    #[test]
    fn empty_extension_is_just_the_prefix() {
        let base = SubsetMask::from_bits(0b11, 2);
        let free = SubsetMask::empty(2);
        let got: Vec<_> = base.extensions(&free).collect();
        assert_eq!(got, vec![base]);
    }
}
