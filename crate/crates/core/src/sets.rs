//! Dense id sets over a fixed universe (all vertices or all arcs of one network).

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::marker::PhantomData;

use fixedbitset::FixedBitSet;

use crate::graph::{ArcId, VertexId};

/// Index newtypes that can live in an [`IdSet`].
pub trait Idx: Copy + Ord + fmt::Debug {
    fn index(self) -> usize;
    fn from_index(index: usize) -> Self;
}

impl Idx for VertexId {
    fn index(self) -> usize {
        self.0
    }
    fn from_index(index: usize) -> Self {
        VertexId(index)
    }
}

impl Idx for ArcId {
    fn index(self) -> usize {
        self.0
    }
    fn from_index(index: usize) -> Self {
        ArcId(index)
    }
}

/// A set of ids backed by a bitset whose length equals the universe size.
///
/// Ordering compares the ascending element sequences lexicographically, so
/// sorting a list of sets gives a stable, human-predictable order.
pub struct IdSet<T> {
    bits: FixedBitSet,
    _marker: PhantomData<T>,
}

pub type ArcSet = IdSet<ArcId>;
pub type VertexSet = IdSet<VertexId>;

impl<T: Idx> IdSet<T> {
    pub fn empty(universe: usize) -> Self {
        IdSet {
            bits: FixedBitSet::with_capacity(universe),
            _marker: PhantomData,
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        IdSet {
            bits,
            _marker: PhantomData,
        }
    }

    pub fn from_ids<I: IntoIterator<Item = T>>(universe: usize, ids: I) -> Self {
        let mut set = Self::empty(universe);
        for id in ids {
            set.insert(id);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn contains(&self, id: T) -> bool {
        self.bits.contains(id.index())
    }

    /// Returns true if the id was newly inserted.
    pub fn insert(&mut self, id: T) -> bool {
        !self.bits.put(id.index())
    }

    pub fn remove(&mut self, id: T) {
        self.bits.set(id.index(), false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = T> + '_ {
        self.bits.ones().map(T::from_index)
    }

    pub fn to_vec(&self) -> Vec<T> {
        self.iter().collect()
    }

    pub fn first(&self) -> Option<T> {
        self.bits.ones().next().map(T::from_index)
    }

    pub fn union_with(&mut self, other: &Self) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &Self) {
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    /// Complement within the universe.
    pub fn complement(&self) -> Self {
        let mut out = Self::full(self.universe());
        out.difference_with(self);
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }
}

impl<T> Clone for IdSet<T> {
    fn clone(&self) -> Self {
        IdSet {
            bits: self.bits.clone(),
            _marker: PhantomData,
        }
    }
}

impl<T> PartialEq for IdSet<T> {
    fn eq(&self, other: &Self) -> bool {
        self.bits == other.bits
    }
}

impl<T> Eq for IdSet<T> {}

impl<T> Hash for IdSet<T> {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.bits.hash(state);
    }
}

impl<T: Idx> PartialOrd for IdSet<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Idx> Ord for IdSet<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl<T: Idx> fmt::Debug for IdSet<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
