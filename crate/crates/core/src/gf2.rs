//! Small GF(2) linear algebra over `u128` bit rows.

/// Row-echelon basis of a subspace of GF(2)^128, with an optional tag per
/// row recording which "generator" bits were combined to produce it.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    // (vector, tag); every vector has a distinct highest set bit.
    rows: Vec<(u128, u64)>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` (with tag `t`) against the basis.
    pub fn reduce_tagged(&self, mut v: u128, mut t: u64) -> (u128, u64) {
        for &(r, rt) in &self.rows {
            let pivot = 127 - r.leading_zeros();
            if v >> pivot & 1 == 1 {
                v ^= r;
                t ^= rt;
            }
        }
        (v, t)
    }

    pub fn reduce(&self, v: u128) -> u128 {
        self.reduce_tagged(v, 0).0
    }

    pub fn contains(&self, v: u128) -> bool {
        self.reduce(v) == 0
    }

    /// Inserts `v`; returns whether it was independent.
    pub fn insert(&mut self, v: u128) -> bool {
        self.insert_tagged(v, 0)
    }

    pub fn insert_tagged(&mut self, v: u128, t: u64) -> bool {
        let (v, t) = self.reduce_tagged(v, t);
        if v == 0 {
            return false;
        }
        // keep rows sorted by decreasing pivot so one pass reduces fully
        let pivot = 127 - v.leading_zeros();
        let pos = self
            .rows
            .iter()
            .position(|&(r, _)| 127 - r.leading_zeros() < pivot)
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, (v, t));
        true
    }
}

/// Rank of a set of vectors over GF(2).
pub fn rank(vectors: &[u128]) -> usize {
    let mut e = Echelon::new();
    vectors.iter().filter(|&&v| e.insert(v)).count()
}
