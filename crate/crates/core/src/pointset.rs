use std::fmt;

use crate::error::{Error, Result};

/// A subset of the points of a plane, stored as a dense bitset over point ids.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet {
    words: Vec<u64>,
    universe: usize,
    size: usize,
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[inline]
fn word_count(universe: usize) -> usize {
    universe.div_ceil(64)
}

impl PointSet {
    pub fn new(universe: usize) -> Self {
        PointSet {
            words: vec![0; word_count(universe)],
            universe,
            size: 0,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut words = vec![u64::MAX; word_count(universe)];
        if !universe.is_multiple_of(64) {
            if let Some(last) = words.last_mut() {
                *last = (1u64 << (universe % 64)) - 1;
            }
        }
        PointSet {
            words,
            universe,
            size: universe,
        }
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(universe: usize, ids: I) -> Result<Self> {
        let mut set = PointSet::new(universe);
        for id in ids {
            if id >= universe {
                return Err(Error::PointOutOfRange { id, len: universe });
            }
            set.insert(id);
        }
        Ok(set)
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn contains(&self, id: usize) -> bool {
        id < self.universe && self.words[id / 64] >> (id % 64) & 1 == 1
    }

    /// Returns `true` if `id` was not already present.
    ///
    /// Panics if `id` is outside the universe.
    #[inline]
    pub fn insert(&mut self, id: usize) -> bool {
        assert!(id < self.universe, "point id {id} out of range");
        let w = &mut self.words[id / 64];
        let bit = 1u64 << (id % 64);
        let fresh = *w & bit == 0;
        *w |= bit;
        self.size += fresh as usize;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, id: usize) -> bool {
        if id >= self.universe {
            return false;
        }
        let w = &mut self.words[id / 64];
        let bit = 1u64 << (id % 64);
        let present = *w & bit != 0;
        *w &= !bit;
        self.size -= present as usize;
        present
    }

    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.zip_assign(other, |a, b| a | b);
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        self.zip_assign(other, |a, b| a & b);
    }

    pub fn difference_with(&mut self, other: &PointSet) {
        self.zip_assign(other, |a, b| a & !b);
    }

    fn zip_assign(&mut self, other: &PointSet, op: impl Fn(u64, u64) -> u64) {
        assert_eq!(
            self.universe, other.universe,
            "point sets over different planes"
        );
        let mut size = 0;
        for (a, &b) in self.words.iter_mut().zip(&other.words) {
            *a = op(*a, b);
            size += a.count_ones() as usize;
        }
        self.size = size;
    }

    pub fn intersection_len(&self, other: &PointSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.universe == other.universe
            && self
                .words
                .iter()
                .zip(&other.words)
                .all(|(a, b)| a & !b == 0)
    }

    /// Smallest id in the set.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * 64 + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a PointSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_and_empty() {
        let full = PointSet::full(70);
        assert_eq!(full.len(), 70);
        assert_eq!(full.iter().count(), 70);
        assert!(!full.contains(70));
        let empty = PointSet::new(0);
        assert!(empty.is_empty());
        assert_eq!(empty.iter().next(), None);
    }

    #[test]
    fn insert_remove_track_size() {
        let mut s = PointSet::new(130);
        assert!(s.insert(129));
        assert!(!s.insert(129));
        assert!(s.insert(0));
        assert_eq!(s.len(), 2);
        assert!(s.remove(0));
        assert!(!s.remove(0));
        assert_eq!(s.to_vec(), vec![129]);
        assert!(PointSet::from_ids(10, [10]).is_err());
    }

    proptest! {
        #[test]
        fn set_algebra_matches_btreeset(a in proptest::collection::btree_set(0usize..200, 0..80),
                                        b in proptest::collection::btree_set(0usize..200, 0..80)) {
            let sa = PointSet::from_ids(200, a.iter().copied()).unwrap();
            let sb = PointSet::from_ids(200, b.iter().copied()).unwrap();
            let mut u = sa.clone();
            u.union_with(&sb);
            prop_assert_eq!(u.to_vec(), a.union(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(u.len(), a.union(&b).count());
            let mut d = sa.clone();
            d.difference_with(&sb);
            prop_assert_eq!(d.to_vec(), a.difference(&b).copied().collect::<Vec<_>>());
            prop_assert_eq!(sa.intersection_len(&sb), a.intersection(&b).count());
            prop_assert_eq!(sa.is_subset(&u), true);
        }
    }
}
