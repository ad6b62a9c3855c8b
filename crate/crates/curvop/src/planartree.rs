//! Planar rooted trees with decorated vertices.
//!
//! Vertices are ordered root-first, left to right (preorder). Every sign
//! in the tree calculus is the Koszul sign of moving decorations between
//! such an ordering and the order in which an operation lists them.

use crate::filtcomplex::koszul_sign_of_order;
use crate::{Error, Result};
use std::collections::HashMap;
use std::fmt;

/// Decoration id; its meaning (arity, degree, weight) lives in a
/// [`crate::operadcore::GeneratorSet`].
pub type Dec = u32;

/// A planar tree: the trivial tree, or a decorated vertex with ordered
/// children. The arity of a vertex is its number of children.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf,
    Node(Dec, Vec<Tree>),
}

/// A position in a tree: a vertex or a leaf, reached by child indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Position {
    pub path: Vec<usize>,
    /// Number of vertices before this position in preorder.
    pub start: usize,
    pub is_leaf: bool,
}

/// `(upper; lowers)` with `lowers.len() == upper.arity()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Split {
    pub upper: Tree,
    pub lowers: Vec<Tree>,
    /// Koszul sign of listing upper's vertices, then each lower's.
    pub sign: i64,
}

/// `(upper, position, lower)`: a split whose other lowers are trivial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfSplit {
    pub upper: Tree,
    /// 1-based input of `upper` receiving `lower`.
    pub pos: usize,
    pub lower: Tree,
    pub sign: i64,
}

impl Tree {
    pub fn corolla(g: Dec, arity: usize) -> Tree {
        Tree::Node(g, vec![Tree::Leaf; arity])
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn arity(&self) -> usize {
        match self {
            Tree::Leaf => 1,
            Tree::Node(_, ch) => ch.iter().map(|c| c.arity()).sum(),
        }
    }

    /// Number of vertices.
    pub fn weight(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Node(_, ch) => 1 + ch.iter().map(|c| c.weight()).sum::<usize>(),
        }
    }

    pub fn root(&self) -> Option<Dec> {
        match self {
            Tree::Leaf => None,
            Tree::Node(g, _) => Some(*g),
        }
    }

    /// Decorations in preorder.
    pub fn decorations(&self) -> Vec<Dec> {
        let mut out = Vec::new();
        self.collect_decs(&mut out);
        out
    }

    fn collect_decs(&self, out: &mut Vec<Dec>) {
        if let Tree::Node(g, ch) = self {
            out.push(*g);
            for c in ch {
                c.collect_decs(out);
            }
        }
    }

    /// Sum of decoration degrees.
    pub fn degree(&self, deg: &dyn Fn(Dec) -> i64) -> i64 {
        self.decorations().into_iter().map(deg).sum()
    }

    pub fn subtree(&self, path: &[usize]) -> &Tree {
        let mut t = self;
        for &i in path {
            match t {
                Tree::Node(_, ch) => t = &ch[i],
                Tree::Leaf => panic!("path runs through a leaf"),
            }
        }
        t
    }

    /// Replaces the subtree at `path`.
    pub fn replace_at(&self, path: &[usize], new: Tree) -> Tree {
        if path.is_empty() {
            return new;
        }
        match self {
            Tree::Node(g, ch) => {
                let mut ch = ch.clone();
                ch[path[0]] = ch[path[0]].replace_at(&path[1..], new);
                Tree::Node(*g, ch)
            }
            Tree::Leaf => panic!("path runs through a leaf"),
        }
    }

    /// All vertex and leaf positions, in preorder.
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        let mut count = 0;
        self.walk_positions(&mut Vec::new(), &mut count, &mut out);
        out
    }

    fn walk_positions(&self, path: &mut Vec<usize>, count: &mut usize, out: &mut Vec<Position>) {
        match self {
            Tree::Leaf => out.push(Position { path: path.clone(), start: *count, is_leaf: true }),
            Tree::Node(_, ch) => {
                out.push(Position { path: path.clone(), start: *count, is_leaf: false });
                *count += 1;
                for (i, c) in ch.iter().enumerate() {
                    path.push(i);
                    c.walk_positions(path, count, out);
                    path.pop();
                }
            }
        }
    }

    /// Positions of the leaves, left to right.
    pub fn leaf_positions(&self) -> Vec<Position> {
        self.positions().into_iter().filter(|p| p.is_leaf).collect()
    }

    /// Renders as a term, e.g. `μ2(μ2(•, -), -)`; leaves print as `-`.
    pub fn render(&self, name: &dyn Fn(Dec) -> String) -> String {
        match self {
            Tree::Leaf => "|".into(),
            Tree::Node(g, ch) if ch.is_empty() => name(*g),
            Tree::Node(g, ch) => {
                let parts: Vec<String> = ch
                    .iter()
                    .map(|c| if c.is_leaf() { "-".to_string() } else { c.render(name) })
                    .collect();
                format!("{}({})", name(*g), parts.join(", "))
            }
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&|g| format!("g{g}")))
    }
}

/// `t ∘_i s`: leaf `i` (1-based) of `t` replaced by `s`.
pub fn graft(t: &Tree, i: usize, s: &Tree) -> Result<Tree> {
    let leaves = t.leaf_positions();
    if i == 0 || i > leaves.len() {
        return Err(Error::Input(format!("graft position {i} out of range 1..={}", leaves.len())));
    }
    Ok(t.replace_at(&leaves[i - 1].path, s.clone()))
}

/// `t ∘_i s` with its Koszul sign `(−1)^{|s| · Σ degrees of t after leaf i}`.
pub fn graft_signed(t: &Tree, i: usize, s: &Tree, deg: &dyn Fn(Dec) -> i64) -> Result<(Tree, i64)> {
    let leaves = t.leaf_positions();
    if i == 0 || i > leaves.len() {
        return Err(Error::Input(format!("graft position {i} out of range 1..={}", leaves.len())));
    }
    let start = leaves[i - 1].start;
    let after: i64 = t.decorations()[start..].iter().map(|&g| deg(g)).sum();
    let sign = if (after * s.degree(deg)).rem_euclid(2) == 0 { 1 } else { -1 };
    Ok((t.replace_at(&leaves[i - 1].path, s.clone()), sign))
}

/// Full composite `γ(t; s_1, …, s_k)` with the Koszul sign of passing from
/// the order `(t, s_1, …, s_k)` to preorder.
pub fn compose_full(t: &Tree, lowers: &[Tree], deg: &dyn Fn(Dec) -> i64) -> Result<(Tree, i64)> {
    let leaves = t.leaf_positions();
    if leaves.len() != lowers.len() {
        return Err(Error::Input(format!("{} lowers for a tree of arity {}", lowers.len(), leaves.len())));
    }
    let mut out = t.clone();
    for (p, s) in leaves.iter().zip(lowers).rev() {
        out = out.replace_at(&p.path, s.clone());
    }
    // source order: t's vertices then each lower's block
    let tw = t.weight();
    let mut degrees: Vec<i64> = t.decorations().into_iter().map(deg).collect();
    let mut block_start = Vec::new();
    for s in lowers {
        block_start.push(degrees.len());
        degrees.extend(s.decorations().into_iter().map(deg));
    }
    let mut order = Vec::with_capacity(degrees.len());
    let mut ti = 0;
    for (j, p) in leaves.iter().enumerate() {
        while ti < p.start {
            order.push(ti);
            ti += 1;
        }
        order.extend(block_start[j]..block_start[j] + lowers[j].weight());
    }
    order.extend(ti..tw);
    Ok((out, koszul_sign_of_order(&order, &degrees)))
}

/// A root subtree cut: vertex preorder indices in the upper part, the
/// upper tree, and the hanging lowers.
struct Cut {
    upper: Tree,
    lowers: Vec<Tree>,
    upper_idx: Vec<usize>,
    lower_ranges: Vec<(usize, usize)>,
}

/// Cuts whose upper part has at most `max` vertices.
fn cuts(t: &Tree, offset: usize, max: usize) -> Vec<Cut> {
    match t {
        Tree::Leaf => vec![Cut { upper: Tree::Leaf, lowers: vec![Tree::Leaf], upper_idx: vec![], lower_ranges: vec![(offset, offset)] }],
        Tree::Node(g, ch) => {
            let mut out = vec![Cut {
                upper: Tree::Leaf,
                lowers: vec![t.clone()],
                upper_idx: vec![],
                lower_ranges: vec![(offset, offset + t.weight())],
            }];
            if max == 0 {
                return out;
            }
            // root kept: combine child cuts
            let mut partial: Vec<(Vec<Tree>, Vec<Tree>, Vec<usize>, Vec<(usize, usize)>)> =
                vec![(vec![], vec![], vec![offset], vec![])];
            let mut off = offset + 1;
            for c in ch {
                let cc = cuts(c, off, max - 1);
                let mut next = Vec::with_capacity(partial.len() * cc.len());
                for (ups, lows, idx, ranges) in &partial {
                    for k in &cc {
                        if idx.len() + k.upper_idx.len() > max {
                            continue;
                        }
                        let mut ups = ups.clone();
                        ups.push(k.upper.clone());
                        let mut lows = lows.clone();
                        lows.extend(k.lowers.iter().cloned());
                        let mut idx = idx.clone();
                        idx.extend(k.upper_idx.iter().cloned());
                        let mut ranges = ranges.clone();
                        ranges.extend(k.lower_ranges.iter().cloned());
                        next.push((ups, lows, idx, ranges));
                    }
                }
                partial = next;
                off += c.weight();
            }
            for (ups, lows, idx, ranges) in partial {
                out.push(Cut { upper: Tree::Node(*g, ups), lowers: lows, upper_idx: idx, lower_ranges: ranges });
            }
            out
        }
    }
}

fn cut_sign(c: &Cut, degrees: &[i64]) -> i64 {
    let mut order = c.upper_idx.clone();
    for &(a, b) in &c.lower_ranges {
        order.extend(a..b);
    }
    koszul_sign_of_order(&order, degrees)
}

/// Every decomposition of `t` as an upper tree grafted with a forest,
/// including the trivial upper and the all-trivial forest, with Koszul
/// signs for the given decoration degrees.
pub fn two_level_splits_signed(t: &Tree, deg: &dyn Fn(Dec) -> i64) -> Vec<Split> {
    let degrees: Vec<i64> = t.decorations().into_iter().map(deg).collect();
    cuts(t, 0, usize::MAX)
        .into_iter()
        .map(|c| {
            let sign = cut_sign(&c, &degrees);
            Split { upper: c.upper, lowers: c.lowers, sign }
        })
        .collect()
}

/// Unsigned two-level splits.
pub fn two_level_splits(t: &Tree) -> Vec<Split> {
    two_level_splits_signed(t, &|_| 0)
}

/// Splits with at most one nontrivial lower. A split whose lowers are all
/// trivial contributes once per input of the upper tree.
pub fn infinitesimal_splits_signed(t: &Tree, deg: &dyn Fn(Dec) -> i64) -> Vec<InfSplit> {
    let mut out = Vec::new();
    for s in two_level_splits_signed(t, deg) {
        let nontrivial: Vec<usize> = (0..s.lowers.len()).filter(|&i| !s.lowers[i].is_leaf()).collect();
        match nontrivial.len() {
            0 => {
                for j in 0..s.lowers.len() {
                    out.push(InfSplit { upper: s.upper.clone(), pos: j + 1, lower: Tree::Leaf, sign: s.sign });
                }
            }
            1 => {
                let j = nontrivial[0];
                out.push(InfSplit { upper: s.upper.clone(), pos: j + 1, lower: s.lowers[j].clone(), sign: s.sign });
            }
            _ => {}
        }
    }
    out
}

pub fn infinitesimal_splits(t: &Tree) -> Vec<InfSplit> {
    infinitesimal_splits_signed(t, &|_| 0)
}

/// A connected subtree `τ` of `t` (possibly empty at an edge) that can be
/// contracted to a single vertex.
#[derive(Clone, Debug)]
pub struct Site {
    /// Position of `τ`'s root, or of the edge's lower end when `τ` is empty.
    pub path: Vec<usize>,
    pub tau: Tree,
    /// Subtrees hanging below `τ`, left to right.
    pub lowers: Vec<Tree>,
    /// Koszul sign of making `τ`'s vertices contiguous.
    pub sign: i64,
    /// Total degree of the vertices preceding `τ` in preorder.
    pub degree_before: i64,
}

impl Site {
    /// `t` with `τ` replaced by the single vertex `g`.
    pub fn contract(&self, t: &Tree, g: Dec) -> Tree {
        t.replace_at(&self.path, Tree::Node(g, self.lowers.clone()))
    }
}

/// All contraction sites of `t` with at most `max_size` vertices in `τ`.
pub fn contraction_sites(t: &Tree, max_size: usize, deg: &dyn Fn(Dec) -> i64) -> Vec<Site> {
    let decs = t.decorations();
    let mut out = Vec::new();
    for p in t.positions() {
        let sub = t.subtree(&p.path);
        let before: i64 = decs[..p.start].iter().map(|&g| deg(g)).sum();
        let sub_deg: Vec<i64> = sub.decorations().into_iter().map(deg).collect();
        for c in cuts(sub, 0, max_size) {
            let sign = cut_sign(&c, &sub_deg);
            out.push(Site { path: p.path.clone(), tau: c.upper, lowers: c.lowers, sign, degree_before: before });
        }
    }
    out
}

/// The sites of [`contraction_sites`] with between `min_size` and
/// `max_size ≤ 2` vertices in `τ`, listed directly.
pub fn small_contraction_sites(t: &Tree, min_size: usize, max_size: usize, deg: &dyn Fn(Dec) -> i64) -> Vec<Site> {
    assert!(max_size <= 2, "small sites have at most two vertices");
    let mut out = Vec::new();
    let mut before = 0i64;
    for p in t.positions() {
        let sub = t.subtree(&p.path);
        if min_size == 0 {
            out.push(Site { path: p.path.clone(), tau: Tree::Leaf, lowers: vec![sub.clone()], sign: 1, degree_before: before });
        }
        let Tree::Node(g, ch) = sub else { continue };
        if min_size <= 1 && max_size >= 1 {
            out.push(Site {
                path: p.path.clone(),
                tau: Tree::corolla(*g, ch.len()),
                lowers: ch.clone(),
                sign: 1,
                degree_before: before,
            });
        }
        if max_size >= 2 {
            let mut passed = 0i64;
            for (j, c) in ch.iter().enumerate() {
                if let Tree::Node(h, below) = c {
                    let mut upper = vec![Tree::Leaf; ch.len()];
                    upper[j] = Tree::corolla(*h, below.len());
                    let mut lowers = ch[..j].to_vec();
                    lowers.extend(below.iter().cloned());
                    lowers.extend(ch[j + 1..].iter().cloned());
                    let sign = if deg(*h) * passed % 2 == 0 { 1 } else { -1 };
                    out.push(Site { path: p.path.clone(), tau: Tree::Node(*g, upper), lowers, sign, degree_before: before });
                }
                passed += c.degree(deg);
            }
        }
        before += deg(*g);
    }
    out
}

/// `t` with the vertex at `path` replaced by the tree `s` (same arity),
/// the vertex's children grafted into the leaves of `s`. Returns the
/// Koszul sign of passing from `(before, s, children…, after)` to preorder.
pub fn substitute_vertex(t: &Tree, path: &[usize], s: &Tree, deg: &dyn Fn(Dec) -> i64) -> Result<(Tree, i64)> {
    let Tree::Node(_, ch) = t.subtree(path) else {
        return Err(Error::Input("substitution target is a leaf".into()));
    };
    if ch.len() != s.arity() {
        return Err(Error::Input(format!("substituting arity {} into a vertex of arity {}", s.arity(), ch.len())));
    }
    let (new_sub, sign) = compose_full(s, ch, deg)?;
    Ok((t.replace_at(path, new_sub), sign))
}

/// All trees with decorations from `gens` (`(id, arity)` pairs), the given
/// arity and at most `max_vertices` vertices, in a deterministic order.
/// The trivial tree is included for arity 1.
pub fn enumerate_trees(gens: &[(Dec, usize)], arity: usize, max_vertices: usize) -> Vec<Tree> {
    let weighted: Vec<(Dec, usize, u32)> = gens.iter().map(|&(g, k)| (g, k, 0)).collect();
    enumerate_trees_weighted(&weighted, arity, max_vertices, 0)
}

/// As [`enumerate_trees`] for `(id, arity, weight)` generators, keeping
/// trees whose decoration weights sum to at most `max_weight`. Trees are
/// listed by vertex count, then weight.
pub fn enumerate_trees_weighted(gens: &[(Dec, usize, u32)], arity: usize, max_vertices: usize, max_weight: u32) -> Vec<Tree> {
    let mut e = Enumerator { gens: gens.to_vec(), trees: HashMap::new(), forests: HashMap::new(), max_arity: arity };
    let mut out = Vec::new();
    for v in 0..=max_vertices {
        for w in 0..=max_weight {
            out.extend(e.trees_exact(v, arity, w));
        }
    }
    out
}

type Forests = Vec<Vec<Tree>>;

struct Enumerator {
    gens: Vec<(Dec, usize, u32)>,
    trees: HashMap<(usize, usize, u32), Vec<Tree>>,
    forests: HashMap<(usize, usize, usize, u32), Forests>,
    max_arity: usize,
}

impl Enumerator {
    fn trees_exact(&mut self, v: usize, a: usize, w: u32) -> Vec<Tree> {
        if let Some(t) = self.trees.get(&(v, a, w)) {
            return t.clone();
        }
        let mut out = Vec::new();
        if v == 0 {
            if a == 1 && w == 0 {
                out.push(Tree::Leaf);
            }
        } else {
            for (g, k, gw) in self.gens.clone() {
                if gw > w {
                    continue;
                }
                for f in self.forests_exact(k, v - 1, a, w - gw) {
                    out.push(Tree::Node(g, f));
                }
            }
        }
        self.trees.insert((v, a, w), out.clone());
        out
    }

    fn forests_exact(&mut self, k: usize, v: usize, a: usize, w: u32) -> Forests {
        if let Some(f) = self.forests.get(&(k, v, a, w)) {
            return f.clone();
        }
        let mut out = Vec::new();
        if k == 0 {
            if v == 0 && a == 0 && w == 0 {
                out.push(Vec::new());
            }
        } else {
            for v1 in 0..=v {
                for a1 in 0..=a.min(self.max_arity) {
                    for w1 in 0..=w {
                        let firsts = self.trees_exact(v1, a1, w1);
                        if firsts.is_empty() {
                            continue;
                        }
                        let rests = self.forests_exact(k - 1, v - v1, a - a1, w - w1);
                        for t in &firsts {
                            for r in &rests {
                                let mut f = Vec::with_capacity(k);
                                f.push(t.clone());
                                f.extend(r.iter().cloned());
                                out.push(f);
                            }
                        }
                    }
                }
            }
        }
        self.forests.insert((k, v, a, w), out.clone());
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const M: Dec = 0;
    const B: Dec = 1;

    fn mu() -> Tree {
        Tree::corolla(M, 2)
    }

    fn left_comb() -> Tree {
        Tree::Node(M, vec![mu(), Tree::Leaf])
    }

    fn right_comb() -> Tree {
        Tree::Node(M, vec![Tree::Leaf, mu()])
    }

    #[test]
    fn graft_examples() {
        assert_eq!(graft(&Tree::Leaf, 1, &mu()).unwrap(), mu());
        assert_eq!(graft(&mu(), 1, &mu()).unwrap(), left_comb());
        assert!(graft(&mu(), 3, &mu()).is_err());
        let g = graft(&left_comb(), 2, &Tree::corolla(B, 0)).unwrap();
        assert_eq!(g.arity(), 2);
        assert_eq!(g.weight(), 3);
    }

    #[test]
    fn graft_sign_counts_later_vertices() {
        let deg = |_g: Dec| 1;
        let (_, s1) = graft_signed(&right_comb(), 1, &mu(), &deg).unwrap();
        let (_, s2) = graft_signed(&right_comb(), 3, &mu(), &deg).unwrap();
        assert_eq!(s1, -1);
        assert_eq!(s2, 1);
    }

    #[test]
    fn split_examples() {
        assert_eq!(two_level_splits(&Tree::Leaf).len(), 1);
        let s = two_level_splits(&mu());
        assert_eq!(s.len(), 2);
        assert_eq!(s[0].upper, Tree::Leaf);
        assert_eq!(s[1].lowers, vec![Tree::Leaf, Tree::Leaf]);
        let c = two_level_splits(&left_comb());
        assert_eq!(c.len(), 3);
        assert!(c.iter().any(|s| s.upper == mu() && s.lowers == vec![mu(), Tree::Leaf]));
    }

    #[test]
    fn corolla_infinitesimal_count() {
        for n in 0..6 {
            let t = Tree::corolla(M, n);
            assert_eq!(infinitesimal_splits(&t).len(), n + 1);
        }
        assert_eq!(infinitesimal_splits(&Tree::Leaf).len(), 1);
    }

    #[test]
    fn enumeration_counts() {
        let g = [(M, 2)];
        assert_eq!(enumerate_trees(&g, 3, 2).len(), 2);
        assert_eq!(enumerate_trees(&g, 1, 7), vec![Tree::Leaf]);
        let g2 = [(M, 2), (B, 0)];
        let t = enumerate_trees(&g2, 0, 2);
        assert_eq!(t, vec![Tree::corolla(B, 0)]);
        assert_eq!(enumerate_trees(&g2, 0, 3).len(), 2);
    }

    #[test]
    fn render_term_syntax() {
        let names = |g: Dec| if g == M { "μ2".to_string() } else { "•".to_string() };
        let t = Tree::Node(M, vec![Tree::Node(M, vec![Tree::corolla(B, 0), Tree::Leaf]), Tree::Leaf]);
        assert_eq!(t.render(&names), "μ2(μ2(•, -), -)");
    }
}
