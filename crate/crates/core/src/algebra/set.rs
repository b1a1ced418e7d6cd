use std::fmt;

use fixedbitset::FixedBitSet;

/// Dense index of an element (or point, or arrow) inside a finite structure.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementId(u32);

impl ElementId {
    pub fn new(index: usize) -> Self {
        debug_assert!(index <= u32::MAX as usize);
        ElementId(index as u32)
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl From<usize> for ElementId {
    fn from(i: usize) -> Self {
        ElementId::new(i)
    }
}

/// Fixed-width bitset over `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ElementSet(FixedBitSet);

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        ElementSet(bits)
    }

    pub fn singleton(universe: usize, x: ElementId) -> Self {
        let mut s = Self::empty(universe);
        s.insert(x);
        s
    }

    pub fn from_ids<I: IntoIterator<Item = ElementId>>(universe: usize, ids: I) -> Self {
        let mut s = Self::empty(universe);
        for x in ids {
            s.insert(x);
        }
        s
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, ids: I) -> Self {
        Self::from_ids(universe, ids.into_iter().map(ElementId::new))
    }

    /// Size of the ambient index range, not the number of members.
    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    #[inline]
    pub fn contains(&self, x: ElementId) -> bool {
        self.0.contains(x.index())
    }

    /// Returns `true` if `x` was not already present.
    pub fn insert(&mut self, x: ElementId) -> bool {
        !self.0.put(x.index())
    }

    pub fn remove(&mut self, x: ElementId) {
        self.0.set(x.index(), false);
    }

    pub fn iter(&self) -> impl Iterator<Item = ElementId> + '_ {
        self.0.ones().map(ElementId::new)
    }

    /// Members as raw indices, for sets over points or arrows.
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    #[inline]
    pub fn has(&self, i: usize) -> bool {
        self.0.contains(i)
    }

    pub fn add(&mut self, i: usize) -> bool {
        !self.0.put(i)
    }

    pub fn first(&self) -> Option<ElementId> {
        self.0.minimum().map(ElementId::new)
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &ElementSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &ElementSet) {
        self.0.difference_with(&other.0);
    }

    pub fn union(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &ElementSet) -> ElementSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn complement(&self) -> ElementSet {
        let mut s = self.clone();
        s.0.toggle_range(..);
        s
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn is_disjoint(&self, other: &ElementSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn intersects(&self, other: &ElementSet) -> bool {
        !self.is_disjoint(other)
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.ones()).finish()
    }
}

/// All subsets of `members`, as bitsets, in binary-counter order.
///
/// Fails when `members` has more than `cap_bits` elements.
pub fn subsets_of(
    members: &ElementSet,
    cap_bits: usize,
) -> Option<impl Iterator<Item = ElementSet>> {
    let items: Vec<ElementId> = members.iter().collect();
    if items.len() > cap_bits || items.len() >= 63 {
        return None;
    }
    let universe = members.universe();
    Some((0u64..(1u64 << items.len())).map(move |mask| {
        let mut s = ElementSet::empty(universe);
        for (bit, &x) in items.iter().enumerate() {
            if mask & (1 << bit) != 0 {
                s.insert(x);
            }
        }
        s
    }))
}
