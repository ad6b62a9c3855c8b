//! Filtered kernels and the subcooperads they cut out of a cofree cooperad.

use super::TreeCooperad;
use crate::filtcomplex::echelon::{kernel, Echelon};
use crate::filtcomplex::lincomb::sign_q;
use crate::operadcore::TreeComb;
use crate::planartree::{contraction_sites, Dec, Tree};
use crate::{par, LinComb, Q};
use std::cmp::Reverse;
use std::collections::HashMap;
use std::sync::Mutex;

/// Marks the contracted vertex inside a context tree.
pub const PLACEHOLDER: Dec = Dec::MAX;

struct Candidate<K: Ord> {
    x: LinComb<usize>,
    r: LinComb<K>,
}

fn layer<K: Ord + Clone>(v: &LinComb<K>, key_weight: &dyn Fn(&K) -> u32, w: u32) -> LinComb<K> {
    v.filter(|k| key_weight(k) == w)
}

/// Kernel of a filtration-preserving map on columns `0..images.len()`,
/// column `j` of weight `col_weights[j]` going to `images[j]`.
///
/// Returns vectors `x` supported on columns of weight at most `p` whose
/// image vanishes on every key of weight at most `p + 1` once the columns
/// of weight `p + 1` are allowed as corrections; those corrections are
/// then dropped. Built weight by weight from the associated graded kernel.
pub fn filtered_kernel<K: Ord + Clone>(
    col_weights: &[u32],
    images: &[LinComb<K>],
    key_weight: &dyn Fn(&K) -> u32,
    p: u32,
) -> Vec<LinComb<usize>> {
    let mut cands: Vec<Candidate<K>> = Vec::new();
    for w in 0..=p + 1 {
        let cols: Vec<usize> = (0..images.len()).filter(|&j| col_weights[j] == w).collect();
        let last = w == p + 1;
        let mut ech: Echelon<K> = Echelon::new();
        let mut gr_kernel = Vec::new();
        for &j in &cols {
            let gr = layer(&images[j], key_weight, w);
            if last {
                ech.push(&gr);
            } else if let Some(rel) = ech.insert(&gr, LinComb::basis(j)) {
                gr_kernel.push(rel);
            }
        }
        let rems: Vec<LinComb<K>> = cands.iter().map(|c| ech.reduce(&layer(&c.r, key_weight, w)).0).collect();
        let mut next = Vec::new();
        for z in kernel(&rems) {
            let mut x = LinComb::new();
            let mut r = LinComb::new();
            for (i, c) in z.iter() {
                x.add_scaled(&cands[*i].x, c);
                r.add_scaled(&cands[*i].r, c);
            }
            if !last {
                let y = ech.solve(&layer(&r, key_weight, w)).expect("residual lies in the graded image");
                for (j, c) in y.iter() {
                    x.add_term(*j, -c.clone());
                    r.add_scaled(&images[*j], &-c.clone());
                }
            }
            next.push(Candidate { x, r });
        }
        cands = next;
        if !last {
            for rel in gr_kernel {
                let mut r = LinComb::new();
                for (j, c) in rel.iter() {
                    r.add_scaled(&images[*j], c);
                }
                cands.push(Candidate { x: rel, r });
            }
        }
    }
    cands
        .into_iter()
        .map(|c| c.x.filter(|j| col_weights[*j] <= p))
        .filter(|x| !x.is_zero())
        .collect()
}

/// A kernel vector whose terms of lowest weight sit in `lead_weight`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelVector {
    pub lead_weight: u32,
    pub vector: TreeComb,
}

/// The kernel in one arity, in reduced echelon form.
#[derive(Clone, Debug)]
pub struct KernelCell {
    pub arity: usize,
    pub degree: i64,
    pub columns: usize,
    pub vectors: Vec<KernelVector>,
}

impl KernelCell {
    /// Number of kernel vectors with each lead weight `0..=p`.
    pub fn gr_dims(&self, p: u32) -> Vec<usize> {
        (0..=p).map(|w| self.vectors.iter().filter(|v| v.lead_weight == w).count()).collect()
    }
}

/// The kernel cells of one arity, one per degree.
#[derive(Clone, Debug)]
pub struct ArityKernel {
    pub arity: usize,
    pub cells: Vec<KernelCell>,
    /// Set when the vertex bound cut off trees inside the filtration window.
    pub inconclusive: bool,
}

impl ArityKernel {
    pub fn dim(&self) -> usize {
        self.cells.iter().map(|c| c.vectors.len()).sum()
    }
}

/// Reduces `vectors` so that each has a distinct lead weight and tree.
pub fn lead_weight_basis(c: &TreeCooperad, vectors: &[TreeComb]) -> Vec<KernelVector> {
    let mut ech: Echelon<(Reverse<u32>, Tree)> = Echelon::new();
    for v in vectors {
        ech.push(&v.map_keys(|t| (Reverse(c.tree_weight(t)), t.clone())));
    }
    let mut out: Vec<KernelVector> = ech
        .rref()
        .into_iter()
        .map(|row| {
            let lead = row.max_key().unwrap().0 .0;
            KernelVector { lead_weight: lead, vector: row.map_keys(|(_, t)| t.clone()) }
        })
        .collect();
    out.reverse();
    out
}

/// Normal forms modulo a space of relations in `I ⊕ C^(2)`, the trivial
/// tree standing for `I`.
#[derive(Debug)]
pub struct Quotient {
    ech: Echelon<Tree>,
    cache: Mutex<HashMap<Tree, TreeComb>>,
}

impl Quotient {
    pub fn new(relations: &[TreeComb]) -> Self {
        let mut ech = Echelon::new();
        for r in relations {
            ech.push(r);
        }
        Quotient { ech, cache: Mutex::new(HashMap::new()) }
    }

    pub fn reduce(&self, tau: &Tree) -> TreeComb {
        if let Some(v) = self.cache.lock().unwrap().get(tau) {
            return v.clone();
        }
        let v = self.ech.reduce(&LinComb::basis(tau.clone())).0;
        self.cache.lock().unwrap().insert(tau.clone(), v.clone());
        v
    }
}

type Key = (Tree, Tree);

/// `Σ` over contraction sites with `τ` empty or of two vertices of the
/// context (with `τ` collapsed to [`PLACEHOLDER`]) tensored with the normal
/// form of `τ`.
pub fn contraction_image(c: &TreeCooperad, quotient: &Quotient, t: &Tree) -> LinComb<Key> {
    let deg = c.deg();
    let mut out = LinComb::new();
    for site in contraction_sites(t, 2, &deg) {
        let nv = site.tau.weight();
        if nv == 1 {
            continue;
        }
        let ctx = site.contract(t, PLACEHOLDER);
        let s = crate::q(site.sign);
        for (coord, k) in quotient.reduce(&site.tau).iter() {
            out.add_term((ctx.clone(), coord.clone()), k * &s);
        }
    }
    out
}

const LEAF_TOKEN: u32 = u32::MAX - 1;

fn push_tokens(t: &Tree, toks: &mut Vec<u32>) {
    match t {
        Tree::Leaf => toks.push(LEAF_TOKEN),
        Tree::Node(g, ch) => {
            toks.push(*g);
            for c in ch {
                push_tokens(c, toks);
            }
        }
    }
}

fn flatten(t: &Tree, toks: &mut Vec<u32>, ends: &mut Vec<usize>) -> usize {
    let i = toks.len();
    ends.push(0);
    match t {
        Tree::Leaf => toks.push(LEAF_TOKEN),
        Tree::Node(g, ch) => {
            toks.push(*g);
            for c in ch {
                flatten(c, toks, ends);
            }
        }
    }
    ends[i] = toks.len();
    toks.len()
}

/// Weighted key in preorder token form: context tokens, the placeholder
/// followed by its arity, then the normal-form tree's tokens.
type FlatKey = (u32, Vec<u32>);

/// [`contraction_image`] with keys in token form.
fn contraction_image_flat(c: &TreeCooperad, quotient: &Quotient, t: &Tree) -> LinComb<FlatKey> {
    let mut toks = Vec::new();
    let mut ends = Vec::new();
    flatten(t, &mut toks, &mut ends);
    let gw = |x: u32| if x == LEAF_TOKEN { 0 } else { c.gens.get(x).weight };
    let gd = |x: u32| if x == LEAF_TOKEN { 0 } else { c.gens.degree_of(x) };
    let ga = |x: u32| if x == LEAF_TOKEN { 0 } else { c.gens.get(x).arity as u32 };
    let wt: u32 = toks.iter().map(|&x| gw(x)).sum();
    let mut out = LinComb::new();
    let mut emit = |ctx: Vec<u32>, ctx_w: u32, tau: &Tree, sign: Q| {
        for (coord, k) in quotient.reduce(tau).iter() {
            let mut key = ctx.clone();
            push_tokens(coord, &mut key);
            let w = ctx_w + if coord.is_leaf() { 1 } else { c.gens.tree_weight(coord) };
            out.add_term((w, key), k * &sign);
        }
    };
    for i in 0..toks.len() {
        let mut ctx = toks[..i].to_vec();
        ctx.extend([PLACEHOLDER, 1]);
        ctx.extend_from_slice(&toks[i..]);
        emit(ctx, wt, &Tree::Leaf, crate::q(1));
    }
    for i in 0..toks.len() {
        let g = toks[i];
        if g == LEAF_TOKEN {
            continue;
        }
        let mut cs = i + 1;
        for j in 0..ga(g) as usize {
            let h = toks[cs];
            if h != LEAF_TOKEN {
                let mut ch = vec![Tree::Leaf; ga(g) as usize];
                ch[j] = Tree::corolla(h, ga(h) as usize);
                let tau = Tree::Node(g, ch);
                let passed: i64 = toks[i + 1..cs].iter().map(|&x| gd(x)).sum();
                let mut ctx = toks[..i].to_vec();
                ctx.extend([PLACEHOLDER, ga(g) + ga(h) - 1]);
                ctx.extend_from_slice(&toks[i + 1..cs]);
                ctx.extend_from_slice(&toks[cs + 1..]);
                emit(ctx, wt - gw(g) - gw(h), &tau, sign_q(gd(h) * passed));
            }
            cs = ends[cs];
        }
    }
    out
}

/// The largest subcooperad of `c` whose infinitesimal two-level part lies
/// in `relations`: the filtered kernel of [`contraction_image`] in one
/// arity, over trees with at most `max_vertices` vertices and weight at
/// most `p`.
pub fn subcooperad_kernel(
    c: &TreeCooperad,
    relations: &[TreeComb],
    arity: usize,
    max_vertices: usize,
    p: u32,
) -> ArityKernel {
    let plain = TreeCooperad::new(c.gens.clone());
    let quotient = Quotient::new(relations);
    let trees = plain.basis_trees(arity, max_vertices, p + 1);
    let inconclusive = plain
        .basis_trees(arity, max_vertices + 1, p + 1)
        .iter()
        .any(|t| t.weight() == max_vertices + 1);
    let mut degrees: Vec<i64> = trees.iter().map(|t| plain.gens.tree_degree(t)).collect();
    degrees.sort();
    degrees.dedup();
    let mut cells = Vec::new();
    for d in degrees {
        let cols: Vec<Tree> = trees.iter().filter(|t| plain.gens.tree_degree(t) == d).cloned().collect();
        let weights: Vec<u32> = cols.iter().map(|t| plain.tree_weight(t)).collect();
        let images = par::map(&cols, |t| contraction_image_flat(&plain, &quotient, t));
        let ker = filtered_kernel(&weights, &images, &|k: &FlatKey| k.0, p);
        let vectors: Vec<TreeComb> = ker.iter().map(|x| x.map_keys(|j| cols[*j].clone())).collect();
        cells.push(KernelCell {
            arity,
            degree: d,
            columns: weights.iter().filter(|w| **w <= p).count(),
            vectors: lead_weight_basis(&plain, &vectors),
        });
    }
    ArityKernel { arity, cells, inconclusive }
}

/// `Σ_t x_t · contraction_image(t)`.
pub fn contraction_image_comb(c: &TreeCooperad, quotient: &Quotient, x: &TreeComb) -> LinComb<Key> {
    let mut out = LinComb::new();
    for (t, k) in x.iter() {
        out.add_scaled(&contraction_image(c, quotient, t), k);
    }
    out
}
