//! The syzygy grading of a bar construction, its degree 0 homology and the
//! vanishing of the higher syzygy homology on the associated graded.

use super::dual::{cas_dual_generators, S_DOT, S_MU};
use crate::barcobar::{bar, BarCooperad};
use crate::cooperadcore::{filtered_kernel, lead_weight_basis, KernelVector};
use crate::filtcomplex::echelon::same_span;
use crate::filtcomplex::{gr_homology, BasisAtom, FGModule, Window};
use crate::operadcore::{cas, CasBasis, CurvedOperad, TreeComb};
use crate::planartree::{enumerate_trees_weighted, Dec, Tree};
use crate::{par, Error, Result, Truncation};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// `Σ_v (1 − w_E(decoration of v))` where `w_E` counts generators of `E`.
pub fn syzygy_degree<O: CurvedOperad>(bar: &BarCooperad<'_, O>, t: &Tree, e_weight: &dyn Fn(&O::B) -> u32) -> i64 {
    match t {
        Tree::Leaf => 0,
        Tree::Node(g, ch) => {
            1 - e_weight(bar.decoration(*g)) as i64 + ch.iter().map(|c| syzygy_degree(bar, c, e_weight)).sum::<i64>()
        }
    }
}

/// Words in `μ` and `•`: `μ^S_N` is `N − 1` products and `|S|` marks.
pub fn cas_e_weight(b: &CasBasis) -> u32 {
    (b.slots() - 1) as u32 + b.weight()
}

#[derive(Clone, Debug, Serialize)]
pub struct SyzygyH0Cell {
    pub arity: usize,
    /// Syzygy 0 trees of weight at most the filtration bound.
    pub columns: usize,
    pub dim: usize,
    /// Basis vectors per lead weight `0..=p`.
    pub gr_dims: Vec<usize>,
    /// A syzygy 0 tree of admissible weight has more vertices than the
    /// window allows, so `dim` may undercount.
    pub edge: bool,
    #[serde(skip)]
    pub vectors: Vec<KernelVector>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SyzygyH0 {
    pub window: Truncation,
    pub max_filtration: u32,
    pub cells: Vec<SyzygyH0Cell>,
}

impl SyzygyH0 {
    /// `(arity, dim)` per arity.
    pub fn pbw_table(&self) -> Vec<(usize, usize)> {
        self.cells.iter().map(|c| (c.arity, c.dim)).collect()
    }
}

/// `H₀` of `(B̂O, d_β)` in the syzygy grading, through filtration `p`.
///
/// Nothing has positive syzygy degree, so `H₀` is the kernel of
/// `d_β` on syzygy 0 trees, filtered as a complete kernel: weight `p + 1`
/// trees enter as corrections, hence the bar needs filtration `p + 1`.
pub fn syzygy_h0<O: CurvedOperad>(
    bar: &BarCooperad<'_, O>,
    e_weight: &dyn Fn(&O::B) -> u32,
    p: u32,
) -> Result<SyzygyH0> {
    let w = bar.window;
    if w.max_filtration < p + 1 {
        return Err(Error::Input(format!("syzygy H0 at filtration {p} needs a bar at filtration {}", p + 1)));
    }
    let gens: Vec<(Dec, usize, u32)> = bar
        .decorations
        .iter()
        .enumerate()
        .filter(|(_, b)| e_weight(b) == 1)
        .map(|(i, b)| (i as Dec, bar.op.arity(b), bar.op.weight(b)))
        .collect();
    let d = bar.d_beta();
    let mut cells = Vec::new();
    for m in 0..=w.max_arity {
        let cols = enumerate_trees_weighted(&gens, m, w.max_weight, p + 1);
        let edge = enumerate_trees_weighted(&gens, m, w.max_weight + 1, p + 1).len() > cols.len();
        let weights: Vec<u32> = cols.iter().map(|t| bar.cooperad.tree_weight(t)).collect();
        let images = par::map(&cols, |t| d.apply_tree(t));
        let kw = |t: &Tree| bar.cooperad.tree_weight(t);
        let ker = filtered_kernel(&weights, &images, &kw, p);
        let vectors: Vec<TreeComb> = ker.iter().map(|x| x.map_keys(|j| cols[*j].clone())).collect();
        let vectors = lead_weight_basis(&bar.cooperad, &vectors);
        let gr_dims = (0..=p).map(|l| vectors.iter().filter(|v| v.lead_weight == l).count()).collect();
        cells.push(SyzygyH0Cell {
            arity: m,
            columns: weights.iter().filter(|x| **x <= p).count(),
            dim: vectors.len(),
            gr_dims,
            edge,
            vectors,
        });
    }
    Ok(SyzygyH0 { window: w, max_filtration: p, cells })
}

/// One `(arity, weight, syzygy)` cell of `H(Gr B̂O, d₂)`.
#[derive(Clone, Debug, Serialize)]
pub struct SyzygyHomologyCell {
    pub arity: usize,
    pub weight: u32,
    pub syzygy: i64,
    pub trees: usize,
    pub dim: usize,
    /// Every tree of this arity and weight fits in the window.
    pub interior: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SyzygyHomology {
    pub window: Truncation,
    pub cells: Vec<SyzygyHomologyCell>,
}

impl SyzygyHomology {
    /// Interior cells of negative syzygy with nonzero homology.
    pub fn higher_failures(&self) -> Vec<&SyzygyHomologyCell> {
        self.cells.iter().filter(|c| c.interior && c.syzygy < 0 && c.dim > 0).collect()
    }

    pub fn interior_cells(&self) -> usize {
        self.cells.iter().filter(|c| c.interior).count()
    }
}

/// Homology of the associated graded `(Gr B̂O, d₁ + d₂)`, one complex per
/// arity and weight, graded by syzygy degree. `interior(m, w)` says whether
/// the window holds every tree of arity `m` and weight `w`.
pub fn gr_syzygy_homology<O: CurvedOperad>(
    bar: &BarCooperad<'_, O>,
    e_weight: &dyn Fn(&O::B) -> u32,
    interior: &dyn Fn(usize, u32) -> bool,
) -> Result<SyzygyHomology> {
    let w = bar.window;
    let (d1, d2) = (bar.d1(), bar.d2());
    let mut cells = Vec::new();
    for m in 0..=w.max_arity {
        let mut by_weight: BTreeMap<u32, Vec<Tree>> = BTreeMap::new();
        for t in bar.basis(m) {
            by_weight.entry(bar.cooperad.tree_weight(&t)).or_default().push(t);
        }
        for (wt, trees) in by_weight {
            let index: HashMap<&Tree, usize> = trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
            let syz: Vec<i64> = trees.iter().map(|t| syzygy_degree(bar, t, e_weight)).collect();
            let atoms = trees.iter().enumerate().map(|(i, _)| BasisAtom::new(format!("t{i}"), syz[i], wt)).collect();
            let mut module = FGModule::new(atoms, Window::weight(wt))?;
            let images = par::map(&trees, |t| {
                let mut x = d2.apply_tree(t);
                if !bar.d1_vanishes {
                    x.add_assign(&d1.apply_tree(t));
                }
                x.filter(|r| bar.cooperad.tree_weight(r) == wt)
            });
            for (j, img) in images.iter().enumerate() {
                for (r, c) in img.iter() {
                    let i = *index.get(r).ok_or_else(|| Error::Input("d₂ leaves the window".into()))?;
                    module.add_d(i, j, c.clone())?;
                }
            }
            let h = gr_homology(&module)?;
            let mut counts: BTreeMap<i64, usize> = BTreeMap::new();
            for s in &syz {
                *counts.entry(*s).or_default() += 1;
            }
            for (s, n) in counts {
                cells.push(SyzygyHomologyCell {
                    arity: m,
                    weight: wt,
                    syzygy: s,
                    trees: n,
                    dim: h.dim(s, wt),
                    interior: interior(m, wt),
                });
            }
        }
    }
    Ok(SyzygyHomology { window: w, cells })
}

/// `B̂cAs` trees of arity `m` and weight `w` have at most `m − 1 + 2w`
/// vertices.
pub fn cas_interior(max_weight: usize) -> impl Fn(usize, u32) -> bool {
    move |m, w| m + 2 * w as usize <= max_weight + 1
}

/// `H₀(B̂cAs)` against the closed form `μ̂ₙᶜ`, per arity.
#[derive(Clone, Debug, Serialize)]
pub struct CasSyzygyReport {
    pub h0: SyzygyH0,
    /// `H₀(n)` is spanned by the image of `μ̂ₙᶜ` under `sμ₂ ↦ sμ, s• ↦ s•`.
    pub matches_dual: Vec<bool>,
    pub higher: SyzygyHomology,
}

impl CasSyzygyReport {
    pub fn passed(&self) -> bool {
        self.h0.cells.iter().all(|c| !c.edge && c.dim == 1)
            && self.matches_dual.iter().all(|x| *x)
            && self.higher.higher_failures().is_empty()
    }
}

fn relabel_tree(t: &Tree, f: &dyn Fn(Dec) -> Dec) -> Tree {
    match t {
        Tree::Leaf => Tree::Leaf,
        Tree::Node(g, ch) => Tree::Node(f(*g), ch.iter().map(|c| relabel_tree(c, f)).collect()),
    }
}

/// The syzygy computations for `cAs` in the window `(A, W, P)`: `H₀`
/// through filtration `P` on every arity up to `A`, and the graded higher
/// syzygy homology of `B̂cAs` inside the window.
pub fn cas_syzygy(window: Truncation) -> Result<CasSyzygyReport> {
    let (a, p) = (window.max_arity, window.max_filtration);
    // syzygy 0 trees of arity a and weight p + 1 have a + 2p + 1 vertices
    let h0_window = Truncation::new(a, a + 2 * p as usize + 1, p + 1);
    let op0 = cas(a + p as usize + 2, h0_window.max_weight, p + 1);
    let b0 = bar(&op0, h0_window)?;
    let h0 = syzygy_h0(&b0, &cas_e_weight, p)?;
    let mut matches_dual = Vec::new();
    for cell in &h0.cells {
        let mu = b0.suspended(&CasBasis::mu(2));
        let dot = b0.suspended(&CasBasis::marked(1, &[1]));
        let relabel = |g: Dec| if Some(g) == mu { S_MU } else if Some(g) == dot { S_DOT } else { Dec::MAX };
        let ours: Vec<TreeComb> = cell.vectors.iter().map(|v| v.vector.map_keys(|t| relabel_tree(t, &relabel))).collect();
        matches_dual.push(same_span(&ours, &[cas_dual_generators(cell.arity, p).expansion]));
    }
    let op = cas(a + window.max_weight, window.max_weight, p);
    let b = bar(&op, window)?;
    let higher = gr_syzygy_homology(&b, &cas_e_weight, &cas_interior(window.max_weight))?;
    Ok(CasSyzygyReport { h0, matches_dual, higher })
}

/// A syzygy 0 kernel element, as a combination with rendered trees.
pub fn render_h0_vector<O: CurvedOperad>(bar: &BarCooperad<'_, O>, v: &KernelVector) -> String {
    bar.render(&v.vector)
}
