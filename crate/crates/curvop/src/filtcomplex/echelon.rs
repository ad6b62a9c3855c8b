//! Sparse Gaussian elimination over the rationals.

use super::lincomb::{LinComb, Q};
use num::{One, Zero};
use std::collections::BTreeMap;

#[derive(Clone, Debug)]
struct Row<K: Ord> {
    vec: LinComb<K>,
    tag: LinComb<usize>,
}

/// An echelon basis of a subspace, keyed by pivot.
///
/// Every stored row has coefficient 1 on its pivot, which is its largest
/// key. Rows optionally carry a tag recording which inserted generators
/// they combine, so membership tests also return preimages.
#[derive(Clone, Debug)]
pub struct Echelon<K: Ord> {
    rows: BTreeMap<K, Row<K>>,
}

impl<K: Ord + Clone> Default for Echelon<K> {
    fn default() -> Self {
        Echelon { rows: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> Echelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    /// Full reduction. Returns `(r, c)` with `v = Σ_i c_i g_i + r`, where
    /// `g_i` are the tagged generators and `r` has no pivot keys. `r` is a
    /// linear function of `v`.
    pub fn reduce(&self, v: &LinComb<K>) -> (LinComb<K>, LinComb<usize>) {
        let mut r = v.clone();
        let mut comb = LinComb::new();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => r.keys().rev().find(|k| self.rows.contains_key(k)).cloned(),
                Some(b) => r.keys_below(b).find(|k| self.rows.contains_key(k)).cloned(),
            };
            let Some(k) = next else { break };
            let row = &self.rows[&k];
            let c = r.coeff(&k);
            r.add_scaled(&row.vec, &-c.clone());
            comb.add_scaled(&row.tag, &c);
            cursor = Some(k);
        }
        (r, comb)
    }

    pub fn contains(&self, v: &LinComb<K>) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts `v`, the image of the formal combination `tag`. Returns a
    /// kernel relation `z` (so `Σ z_i g_i = 0`) when `v` was already in the
    /// span, and `None` when it produced a new pivot.
    pub fn insert(&mut self, v: &LinComb<K>, tag: LinComb<usize>) -> Option<LinComb<usize>> {
        let (r, comb) = self.reduce(v);
        let mut t = tag;
        t.sub_assign(&comb);
        if r.is_zero() {
            return Some(t);
        }
        let p = r.max_key().unwrap().clone();
        let lead = r.coeff(&p);
        let inv = Q::one() / lead;
        self.rows.insert(p, Row { vec: r.scaled(&inv), tag: t.scaled(&inv) });
        None
    }

    /// Inserts without tracking preimages.
    pub fn push(&mut self, v: &LinComb<K>) -> bool {
        let (r, _) = self.reduce_untagged(v);
        if r.is_zero() {
            return false;
        }
        let p = r.max_key().unwrap().clone();
        let inv = Q::one() / r.coeff(&p);
        self.rows.insert(p, Row { vec: r.scaled(&inv), tag: LinComb::new() });
        true
    }

    fn reduce_untagged(&self, v: &LinComb<K>) -> (LinComb<K>, ()) {
        let mut r = v.clone();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => r.keys().rev().find(|k| self.rows.contains_key(k)).cloned(),
                Some(b) => r.keys_below(b).find(|k| self.rows.contains_key(k)).cloned(),
            };
            let Some(k) = next else { break };
            let c = r.coeff(&k);
            r.add_scaled(&self.rows[&k].vec, &-c);
            cursor = Some(k);
        }
        (r, ())
    }

    /// Solves `Σ c_i g_i = v` if possible.
    pub fn solve(&self, v: &LinComb<K>) -> Option<LinComb<usize>> {
        let (r, c) = self.reduce(v);
        if r.is_zero() {
            Some(c)
        } else {
            None
        }
    }

    /// Basis vectors in reduced row echelon form, ordered by pivot.
    pub fn rref(&self) -> Vec<LinComb<K>> {
        let mut out: Vec<LinComb<K>> = Vec::new();
        let mut done: Echelon<K> = Echelon::new();
        for (k, row) in &self.rows {
            let mut v = row.vec.clone();
            for (pk, prev) in done.rows.iter() {
                let c = v.coeff(pk);
                if !c.is_zero() {
                    v.add_scaled(&prev.vec, &-c);
                }
            }
            for (pk, prev) in done.rows.iter_mut() {
                let c = prev.vec.coeff(k);
                if !c.is_zero() {
                    prev.vec.add_scaled(&v, &-c);
                }
                let _ = pk;
            }
            done.rows.insert(k.clone(), Row { vec: v, tag: LinComb::new() });
        }
        for row in done.rows.into_values() {
            out.push(row.vec);
        }
        out
    }
}

/// Rank of a family of vectors.
pub fn rank<K: Ord + Clone>(vectors: &[LinComb<K>]) -> usize {
    let mut e = Echelon::new();
    for v in vectors {
        e.push(v);
    }
    e.rank()
}

/// Kernel of the linear map sending generator `i` to `images[i]`, as
/// combinations of generator indices.
pub fn kernel<K: Ord + Clone>(images: &[LinComb<K>]) -> Vec<LinComb<usize>> {
    let mut e = Echelon::new();
    let mut out = Vec::new();
    for (i, v) in images.iter().enumerate() {
        if let Some(z) = e.insert(v, LinComb::basis(i)) {
            out.push(z);
        }
    }
    out
}

/// True when the two families span the same subspace.
pub fn same_span<K: Ord + Clone>(a: &[LinComb<K>], b: &[LinComb<K>]) -> bool {
    let mut ea = Echelon::new();
    for v in a {
        ea.push(v);
    }
    let mut eb = Echelon::new();
    for v in b {
        eb.push(v);
    }
    ea.rank() == eb.rank() && a.iter().all(|v| eb.contains(v)) && b.iter().all(|v| ea.contains(v))
}
