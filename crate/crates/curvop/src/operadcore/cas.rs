//! The curved operad `cAs`: associative products with curvature marks.
//!
//! A basis element `μ_{m+k}^S` is stored as its sequence of `m + k` slots,
//! `k` of them carrying the curvature mark `•`. Composition splices words, so
//! associativity holds on the nose. All degrees are even, so no Koszul signs
//! arise.

use super::free::{extend_derivation, GeneratorSet, Presentation, TreeComb};
use super::CurvedOperad;
use crate::planartree::{Dec, Tree};
use crate::{q, LinComb};
use std::collections::BTreeMap;
use std::fmt;

/// `μ_{m+k}^S`: `marks[j]` is true when slot `j` carries `•`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CasBasis {
    pub marks: Vec<bool>,
}

impl CasBasis {
    pub fn identity() -> Self {
        CasBasis { marks: vec![false] }
    }

    /// `μ_n` without marks.
    pub fn mu(n: usize) -> Self {
        CasBasis { marks: vec![false; n] }
    }

    /// `μ_N^S` with `S` given by 1-based slot positions.
    pub fn marked(n_slots: usize, s: &[usize]) -> Self {
        let mut marks = vec![false; n_slots];
        for &j in s {
            marks[j - 1] = true;
        }
        CasBasis { marks }
    }

    /// Parses a word over `x` and `•` (or `o`).
    pub fn from_word(w: &str) -> Option<Self> {
        let marks: Option<Vec<bool>> = w
            .chars()
            .map(|c| match c {
                'x' => Some(false),
                '•' | 'o' => Some(true),
                _ => None,
            })
            .collect();
        let marks = marks?;
        if marks.is_empty() {
            return None;
        }
        Some(CasBasis { marks })
    }

    pub fn arity(&self) -> usize {
        self.marks.iter().filter(|m| !**m).count()
    }

    pub fn weight(&self) -> u32 {
        self.marks.iter().filter(|m| **m).count() as u32
    }

    pub fn degree(&self) -> i64 {
        -2 * self.weight() as i64
    }

    pub fn slots(&self) -> usize {
        self.marks.len()
    }

    /// 1-based marked slots.
    pub fn mark_set(&self) -> Vec<usize> {
        (0..self.marks.len()).filter(|&j| self.marks[j]).map(|j| j + 1).collect()
    }

    pub fn is_identity(&self) -> bool {
        self.marks == [false]
    }

    pub fn word(&self) -> String {
        self.marks.iter().map(|&m| if m { '•' } else { 'x' }).collect()
    }

    /// `self ∘_i other`: the `i`-th unmarked slot replaced by `other`.
    pub fn compose(&self, i: usize, other: &CasBasis) -> Option<CasBasis> {
        let pos = (0..self.marks.len()).filter(|&j| !self.marks[j]).nth(i.checked_sub(1)?)?;
        let mut marks = self.marks[..pos].to_vec();
        marks.extend_from_slice(&other.marks);
        marks.extend_from_slice(&self.marks[pos + 1..]);
        Some(CasBasis { marks })
    }
}

impl fmt::Display for CasBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "|");
        }
        let s = self.mark_set();
        if s.is_empty() {
            write!(f, "μ{}", self.slots())
        } else {
            let s: Vec<String> = s.iter().map(|j| j.to_string()).collect();
            write!(f, "μ{}^{{{}}}", self.slots(), s.join(","))
        }
    }
}

impl fmt::Debug for CasBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// All `μ_{m+k}^S` of arity `m` with `k` marks.
pub fn cas_cell(m: usize, k: usize) -> Vec<CasBasis> {
    let n = m + k;
    let mut out = Vec::new();
    let mut marks = vec![false; n];
    fn rec(out: &mut Vec<CasBasis>, marks: &mut Vec<bool>, from: usize, left: usize) {
        if left == 0 {
            out.push(CasBasis { marks: marks.clone() });
            return;
        }
        for j in from..marks.len() {
            if marks.len() - j < left {
                break;
            }
            marks[j] = true;
            rec(out, marks, j + 1, left - 1);
            marks[j] = false;
        }
    }
    if n > 0 {
        rec(&mut out, &mut marks, 0, k);
    }
    out
}

/// `cAs` truncated at filtration `max_filtration`.
#[derive(Clone, Debug)]
pub struct Cas {
    pub max_arity: usize,
    pub max_weight: usize,
    pub max_filtration: u32,
}

pub fn cas(max_arity: usize, max_weight: usize, p: u32) -> Cas {
    Cas { max_arity, max_weight, max_filtration: p }
}

/// The curvature `θ = μ∘₂• − μ∘₁•`.
pub fn cas_theta() -> LinComb<CasBasis> {
    let mut t = LinComb::basis(CasBasis::marked(2, &[2]));
    t.add_term(CasBasis::marked(2, &[1]), q(-1));
    t
}

impl CurvedOperad for Cas {
    type B = CasBasis;

    fn arity(&self, b: &CasBasis) -> usize {
        b.arity()
    }
    fn degree(&self, b: &CasBasis) -> i64 {
        b.degree()
    }
    fn weight(&self, b: &CasBasis) -> u32 {
        b.weight()
    }
    fn max_filtration(&self) -> u32 {
        self.max_filtration
    }
    fn basis(&self, arity: usize, _size: usize) -> Vec<CasBasis> {
        (0..=self.max_filtration as usize).flat_map(|k| cas_cell(arity, k)).collect()
    }
    fn compose(&self, a: &CasBasis, i: usize, b: &CasBasis) -> LinComb<CasBasis> {
        match a.compose(i, b) {
            Some(c) if c.weight() <= self.max_filtration => LinComb::basis(c),
            _ => LinComb::new(),
        }
    }
    fn d(&self, _b: &CasBasis) -> LinComb<CasBasis> {
        LinComb::new()
    }
    fn curvature(&self) -> LinComb<CasBasis> {
        cas_theta()
    }
    fn render(&self, b: &CasBasis) -> String {
        b.to_string()
    }
    fn unit(&self) -> Option<CasBasis> {
        Some(CasBasis::identity())
    }
}

/// `σ` in the curved A∞ relation `m₁∘₁m₁ = σ(m₂∘₁m₀ − m₂∘₂m₀)` that
/// goes with the curvature `θ = μ∘₂• − μ∘₁•`.
pub const CURVATURE_SIGN: i64 = -1;

/// Decorations of the tree presentation of `cAs`.
pub const CAS_MU: Dec = 0;
pub const CAS_DOT: Dec = 1;

/// `T(• ⊔ μ)/(μ∘₁μ − μ∘₂μ)` with zero predifferential and curvature
/// `μ(−, •) − μ(•, −)`.
pub fn cas_presentation() -> Presentation {
    let mut gens = GeneratorSet::new();
    gens.push("μ", 2, 0, 0);
    gens.push("•", 0, -2, 1);
    let mu = Tree::corolla(CAS_MU, 2);
    let dot = Tree::corolla(CAS_DOT, 0);
    let mut assoc = LinComb::basis(Tree::Node(CAS_MU, vec![mu.clone(), Tree::Leaf]));
    assoc.add_term(Tree::Node(CAS_MU, vec![Tree::Leaf, mu]), q(-1));
    let mut theta = LinComb::basis(Tree::Node(CAS_MU, vec![Tree::Leaf, dot.clone()]));
    theta.add_term(Tree::Node(CAS_MU, vec![dot, Tree::Leaf]), q(-1));
    let d = extend_derivation(&gens, -1, BTreeMap::new()).expect("zero images");
    Presentation { gens, relations: vec![assoc], d, curvature: theta }
}

/// Reads a `μ`/`•` tree as a word: its leaves and marks left to right.
pub fn cas_tree_word(t: &Tree) -> CasBasis {
    fn walk(t: &Tree, out: &mut Vec<bool>) {
        match t {
            Tree::Leaf => out.push(false),
            Tree::Node(g, ch) if *g == CAS_DOT && ch.is_empty() => out.push(true),
            Tree::Node(_, ch) => ch.iter().for_each(|c| walk(c, out)),
        }
    }
    let mut marks = Vec::new();
    walk(t, &mut marks);
    CasBasis { marks }
}

/// The left comb on a word: the normal form of the tree rewrite system.
pub fn cas_word_tree(b: &CasBasis) -> Tree {
    let slot = |m: bool| if m { Tree::corolla(CAS_DOT, 0) } else { Tree::Leaf };
    let mut t = slot(b.marks[0]);
    for &m in &b.marks[1..] {
        t = Tree::Node(CAS_MU, vec![t, slot(m)]);
    }
    t
}

/// Order in which redexes `μ(a, μ(b, c)) → μ(μ(a, b), c)` are rewritten.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteOrder {
    InnermostLeft,
    OutermostRight,
}

fn is_redex(t: &Tree) -> bool {
    matches!(t, Tree::Node(CAS_MU, ch) if matches!(&ch[1], Tree::Node(CAS_MU, _)))
}

fn rotate(t: &Tree) -> Tree {
    let Tree::Node(_, ch) = t else { unreachable!() };
    let Tree::Node(_, inner) = &ch[1] else { unreachable!() };
    Tree::Node(CAS_MU, vec![Tree::Node(CAS_MU, vec![ch[0].clone(), inner[0].clone()]), inner[1].clone()])
}

fn step(t: &Tree, s: RewriteOrder) -> Option<Tree> {
    let Tree::Node(g, ch) = t else { return None };
    let children = |ch: &Vec<Tree>| -> Option<Tree> {
        let order: Vec<usize> = match s {
            RewriteOrder::InnermostLeft => (0..ch.len()).collect(),
            RewriteOrder::OutermostRight => (0..ch.len()).rev().collect(),
        };
        for i in order {
            if let Some(c) = step(&ch[i], s) {
                let mut nch = ch.clone();
                nch[i] = c;
                return Some(Tree::Node(*g, nch));
            }
        }
        None
    };
    match s {
        RewriteOrder::InnermostLeft => children(ch).or_else(|| is_redex(t).then(|| rotate(t))),
        RewriteOrder::OutermostRight => {
            if is_redex(t) {
                Some(rotate(t))
            } else {
                children(ch)
            }
        }
    }
}

/// Rewrites a `μ`/`•` tree to a left comb, returning the number of steps.
pub fn cas_rewrite(t: &Tree, s: RewriteOrder) -> (Tree, usize) {
    let mut cur = t.clone();
    let mut n = 0;
    while let Some(next) = step(&cur, s) {
        cur = next;
        n += 1;
    }
    (cur, n)
}

/// Images of the presentation generators in [`Cas`].
pub fn cas_generator_images() -> BTreeMap<Dec, LinComb<CasBasis>> {
    let mut m = BTreeMap::new();
    m.insert(CAS_MU, LinComb::basis(CasBasis::mu(2)));
    m.insert(CAS_DOT, LinComb::basis(CasBasis { marks: vec![true] }));
    m
}

/// Re-expresses a word combination as trees of the presentation.
pub fn cas_as_trees(x: &LinComb<CasBasis>) -> TreeComb {
    x.map_keys(cas_word_tree)
}
