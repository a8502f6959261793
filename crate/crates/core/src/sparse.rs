use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// Sparse coordinate vector. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseVec<S> {
    entries: BTreeMap<usize, S>,
}

impl<S: Scalar> Default for SparseVec<S> {
    fn default() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }
}

impl<S: Scalar> SparseVec<S> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn unit(index: usize) -> Self {
        Self::single(index, S::one())
    }

    pub fn single(index: usize, coeff: S) -> Self {
        let mut v = Self::new();
        v.add_term(index, &coeff);
        v
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, S)>) -> Self {
        let mut v = Self::new();
        for (i, c) in pairs {
            v.add_term(i, &c);
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, index: usize) -> Option<&S> {
        self.entries.get(&index)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &S)> {
        self.entries.iter().map(|(i, c)| (*i, c))
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.entries.keys().copied()
    }

    pub fn leading(&self) -> Option<(usize, &S)> {
        self.entries.iter().next().map(|(i, c)| (*i, c))
    }

    pub fn add_term(&mut self, index: usize, coeff: &S) {
        if coeff.is_zero() {
            return;
        }
        match self.entries.get_mut(&index) {
            Some(c) => {
                let s = c.add(coeff);
                if s.is_zero() {
                    self.entries.remove(&index);
                } else {
                    *c = s;
                }
            }
            None => {
                self.entries.insert(index, coeff.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &Self, factor: &S) {
        if factor.is_zero() {
            return;
        }
        for (i, c) in &other.entries {
            self.add_term(*i, &c.mul(factor));
        }
    }

    pub fn scaled(&self, factor: &S) -> Self {
        let mut out = Self::new();
        if factor.is_zero() {
            return out;
        }
        for (i, c) in &self.entries {
            out.add_term(*i, &c.mul(factor));
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &S::one());
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_scaled(other, &S::one().neg());
        out
    }

    pub fn neg(&self) -> Self {
        self.scaled(&S::one().neg())
    }

    pub fn map_indices(&self, f: impl Fn(usize) -> usize) -> Self {
        Self::from_pairs(self.entries.iter().map(|(i, c)| (f(*i), c.clone())))
    }

    pub fn retain(&mut self, keep: impl Fn(usize) -> bool) {
        self.entries.retain(|i, _| keep(*i));
    }
}
