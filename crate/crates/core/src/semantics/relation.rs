//! Binary relations on trace positions, stored as one bitmask row per source.

use std::fmt;

/// `(k, i)` is in the relation iff bit `i` of `rows[k]` is set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AccessRelation {
    rows: Vec<u64>,
}

impl AccessRelation {
    pub fn empty(len: usize) -> Self {
        AccessRelation { rows: vec![0; len] }
    }

    pub fn identity(len: usize) -> Self {
        AccessRelation {
            rows: (0..len).map(|k| 1u64 << k).collect(),
        }
    }

    /// Successor pairs `(k, k+1)`.
    pub fn step(len: usize) -> Self {
        AccessRelation {
            rows: (0..len)
                .map(|k| if k + 1 < len { 1u64 << (k + 1) } else { 0 })
                .collect(),
        }
    }

    /// Pairs `(k, k)` for the positions set in `mask`.
    pub fn diagonal(len: usize, mask: u64) -> Self {
        AccessRelation {
            rows: (0..len).map(|k| mask & (1u64 << k)).collect(),
        }
    }

    pub fn from_pairs(len: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = AccessRelation::empty(len);
        for (k, i) in pairs {
            r.rows[k] |= 1 << i;
        }
        r
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| *r == 0)
    }

    pub fn row(&self, k: usize) -> u64 {
        self.rows[k]
    }

    pub fn contains(&self, k: usize, i: usize) -> bool {
        k < self.rows.len() && self.rows[k] >> i & 1 == 1
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (k, row) in self.rows.iter().enumerate() {
            for i in bits(*row) {
                out.push((k, i));
            }
        }
        out
    }

    pub fn union(&self, other: &AccessRelation) -> AccessRelation {
        AccessRelation {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    pub fn compose(&self, other: &AccessRelation) -> AccessRelation {
        let rows = self
            .rows
            .iter()
            .map(|row| bits(*row).fold(0, |acc, j| acc | other.rows[j]))
            .collect();
        AccessRelation { rows }
    }

    /// Reflexive-transitive closure (Warshall).
    pub fn closure(&self) -> AccessRelation {
        let mut rows = self.rows.clone();
        for (k, r) in rows.iter_mut().enumerate() {
            *r |= 1 << k;
        }
        for j in 0..rows.len() {
            let via = rows[j];
            for r in rows.iter_mut() {
                if *r >> j & 1 == 1 {
                    *r |= via;
                }
            }
        }
        AccessRelation { rows }
    }

    pub fn transpose(&self) -> AccessRelation {
        let mut out = AccessRelation::empty(self.rows.len());
        for (k, row) in self.rows.iter().enumerate() {
            for i in bits(*row) {
                out.rows[i] |= 1 << k;
            }
        }
        out
    }

    pub fn is_subset(&self, other: &AccessRelation) -> bool {
        self.rows.len() == other.rows.len()
            && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }
}

impl fmt::Debug for AccessRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// Indices of the set bits of `mask`, ascending.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(i)
    })
}
