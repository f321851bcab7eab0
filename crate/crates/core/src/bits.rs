//! Fixed-universe bit sets used for downsets, state sets and relation rows.

use std::fmt;

use smallvec::{smallvec, SmallVec};

const WORD: usize = 64;

/// A subset of `0..universe`.
///
/// Universes up to 64 elements are stored inline.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits {
    universe: usize,
    words: SmallVec<[u64; 1]>,
}

impl Bits {
    pub fn empty(universe: usize) -> Self {
        Bits {
            universe,
            words: smallvec![0; universe.div_ceil(WORD).max(1)],
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut b = Bits::empty(universe);
        for i in 0..universe {
            b.insert(i);
        }
        b
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut b = Bits::empty(universe);
        for i in indices {
            b.insert(i);
        }
        b
    }

    /// The set whose members are the set bits of `mask`. Requires `universe <= 64`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        debug_assert!(universe <= WORD);
        let keep = if universe == WORD {
            u64::MAX
        } else {
            (1u64 << universe) - 1
        };
        let mut b = Bits::empty(universe);
        b.words[0] = mask & keep;
        b
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < self.universe, "index {i} outside universe {}", self.universe);
        self.words[i / WORD] |= 1 << (i % WORD);
    }

    pub fn remove(&mut self, i: usize) {
        assert!(i < self.universe, "index {i} outside universe {}", self.universe);
        self.words[i / WORD] &= !(1 << (i % WORD));
    }

    pub fn contains(&self, i: usize) -> bool {
        i < self.universe && self.words[i / WORD] & (1 << (i % WORD)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_subset(&self, other: &Bits) -> bool {
        debug_assert_eq!(self.universe, other.universe);
        self.words
            .iter()
            .zip(other.words.iter())
            .all(|(a, b)| a & !b == 0)
    }

    pub fn union(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &Bits) -> Bits {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &Bits) -> Bits {
        debug_assert_eq!(self.universe, other.universe);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(other.words.iter()) {
            *a &= !b;
        }
        out
    }

    pub fn union_with(&mut self, other: &Bits) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Bits) {
        debug_assert_eq!(self.universe, other.universe);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a &= b;
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |i| self.contains(*i))
    }

    /// First word of the set; only meaningful for universes up to 64.
    pub fn mask(&self) -> u64 {
        self.words[0]
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_operations() {
        let a = Bits::from_indices(70, [0, 3, 65]);
        let b = Bits::from_indices(70, [3, 4]);
        assert_eq!(a.union(&b).iter().collect::<Vec<_>>(), vec![0, 3, 4, 65]);
        assert_eq!(a.intersection(&b).iter().collect::<Vec<_>>(), vec![3]);
        assert_eq!(a.difference(&b).iter().collect::<Vec<_>>(), vec![0, 65]);
        assert!(Bits::from_indices(70, [3]).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert_eq!(a.len(), 3);
    }

    #[test]
    fn mask_round_trip() {
        let b = Bits::from_mask(3, 0b1111);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![0, 1, 2]);
        assert_eq!(b, Bits::full(3));
        assert!(Bits::empty(0).is_empty());
    }
}
