//! The bar-cobar counit `Ω̂B̂O → O` and its per-cell graded
//! quasi-isomorphism verdicts.

use super::{bar, cobar, BarCooperad};
use crate::cooperadcore::Cooperad;
use crate::filtcomplex::{graded_quasi_iso_cells, is_strict_surjection, BasisAtom, FGModule, ModuleMap, Window};
use crate::operadcore::{evaluate_tree, CurvedOperad, TreeComb};
use crate::planartree::{enumerate_trees_weighted, Dec, Tree};
use crate::{par, Error, LinComb, Result, Truncation};
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

#[derive(Clone, Debug, Serialize)]
pub struct CounitCell {
    pub degree: i64,
    pub weight: u32,
    pub source_dim: usize,
    pub target_dim: usize,
    pub quasi_iso: bool,
    pub interior: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CounitArity {
    pub arity: usize,
    pub source_trees: usize,
    pub target_dim: usize,
    pub strict_surjection: bool,
    pub chain_map: bool,
    pub cells: Vec<CounitCell>,
}

impl CounitArity {
    pub fn passed(&self) -> bool {
        self.strict_surjection && self.chain_map && self.cells.iter().all(|c| c.quasi_iso || !c.interior)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CounitReport {
    pub window: Truncation,
    pub generators: usize,
    /// Terms of `d_ω` needing a generator outside the table.
    pub dropped_terms: usize,
    /// `f·d_ω` on generators, outside the associated graded checked per arity.
    pub curved_morphism: bool,
    pub arities: Vec<CounitArity>,
}

impl CounitReport {
    pub fn passed(&self) -> bool {
        self.curved_morphism && self.arities.iter().all(|a| a.passed())
    }

    pub fn interior_cells(&self) -> usize {
        self.arities.iter().flat_map(|a| &a.cells).filter(|c| c.interior).count()
    }
}

/// Size of a cobar vertex: the vertex count of the bar tree it carries,
/// at least 1.
fn size_of(t: &Tree) -> u32 {
    t.weight().max(1) as u32
}

/// `ε: Ω̂B̂O → O`, sending `s⁻¹(sa)` to `−a`, `ϑ` to `θ` and every other
/// generator to 0, on arities `≤ A`, cobar trees of total size `≤ W` (each
/// vertex counted by the size of its bar tree) and filtration `≤ P`.
///
/// `interior(m, w)` says whether every tree of arity `m` and weight `w`
/// has size at most `W`; only those cells enter the verdict.
pub fn counit_map<O: CurvedOperad>(
    op: &O,
    window: Truncation,
    interior: &dyn Fn(usize, u32) -> bool,
) -> Result<CounitReport> {
    counit_map_signed(op, window, interior, -1)
}

/// As [`counit_map`] with `s⁻¹(sa) ↦ sign·a`; any sign but −1 breaks
/// the chain map property.
pub fn counit_map_signed<O: CurvedOperad>(
    op: &O,
    window: Truncation,
    interior: &dyn Fn(usize, u32) -> bool,
    sign: i64,
) -> Result<CounitReport> {
    let (a, w, p) = (window.max_arity, window.max_weight, window.max_filtration);
    // a vertex of a tree of arity ≤ a and size ≤ w has arity ≤ a + w − 1
    let gen_arity = a + w.saturating_sub(1);
    let b = bar(op, Truncation::new(gen_arity, w, p))?;
    let co = b.cooperad.coideal();
    let dc = |t: &Tree| b.d_beta().apply_tree(t);
    let cob = cobar(&co, |m| b.basis(m), Some(&dc), gen_arity, p)?;
    let gens = cob.gens();
    let table: Vec<(Dec, usize, u32)> = gens
        .ids()
        .map(|g| {
            let size = if g == cob.theta { 1 } else { size_of(&cob.generators[(g - 1) as usize]) };
            (g, gens.get(g).arity, size)
        })
        .collect();
    let images = counit_images(&b, &cob.generators, |x| cob.generator(x), cob.theta, sign);
    // f is a curved morphism when f(d_ω s⁻¹c) = 0 for every generator that
    // fits in a tree of the window, each extra input costing one constant
    let fits = |x: &Tree| size_of(x) as usize + co.arity(x).saturating_sub(a) <= w;
    let curved_morphism = cob.generators.iter().filter(|x| fits(x)).all(|x| {
        let img = cob.d_omega(&LinComb::basis(cob.generator_tree(x).unwrap()));
        eval_comb(op, &images, &img).is_zero()
    });
    let mut arities = Vec::new();
    for m in 0..=a {
        let trees: Vec<Tree> = enumerate_trees_weighted(&table, m, w, w as u32)
            .into_iter()
            .filter(|t| gens.tree_weight(t) <= p)
            .collect();
        let index: HashMap<&Tree, usize> = trees.iter().enumerate().map(|(i, t)| (t, i)).collect();
        let atoms = trees.iter().enumerate().map(|(i, t)| BasisAtom::new(format!("x{i}"), gens.tree_degree(t), gens.tree_weight(t)));
        let mut x = FGModule::new(atoms.collect(), Window::weight(p))?;
        let ds = par::map(&trees, |t| {
            let wt = gens.tree_weight(t);
            cob.d_omega(&LinComb::basis(t.clone())).filter(|r| gens.tree_weight(r) == wt)
        });
        for (j, img) in ds.iter().enumerate() {
            for (r, c) in img.iter() {
                let i = *index.get(r).ok_or_else(|| Error::Contract(format!("Gr d_ω leaves the size window at {}", gens.render(r))))?;
                x.add_d(i, j, c.clone())?;
            }
        }
        let target: Vec<O::B> = op.basis(m, w).into_iter().filter(|y| op.weight(y) <= p).collect();
        let tindex: BTreeMap<&O::B, usize> = target.iter().enumerate().map(|(i, y)| (y, i)).collect();
        let y_atoms = target.iter().enumerate().map(|(i, y)| BasisAtom::new(format!("y{i}"), op.degree(y), op.weight(y)));
        let mut y = FGModule::new(y_atoms.collect(), Window::weight(p))?;
        for (j, t) in target.iter().enumerate() {
            for (r, c) in op.d(t).iter() {
                if let Some(&i) = tindex.get(r) {
                    y.add_d(i, j, c.clone())?;
                }
            }
        }
        let mut f = ModuleMap::new(x, y, 0);
        for (j, t) in trees.iter().enumerate() {
            let v = eval(op, &images, t);
            for (r, c) in v.iter() {
                if let Some(&i) = tindex.get(r) {
                    f.add_entry(i, j, c.clone())?;
                }
            }
        }
        let chain_map = f.is_chain_map();
        let strict_surjection = is_strict_surjection(&f);
        let mut cells = Vec::new();
        if chain_map {
            for ((deg, wt), (ok, _)) in graded_quasi_iso_cells(&f)? {
                cells.push(CounitCell {
                    degree: deg,
                    weight: wt,
                    source_dim: f.source.cell(deg, wt).len(),
                    target_dim: f.target.cell(deg, wt).len(),
                    quasi_iso: ok,
                    interior: interior(m, wt),
                });
            }
        }
        arities.push(CounitArity { arity: m, source_trees: trees.len(), target_dim: target.len(), strict_surjection, chain_map, cells });
    }
    Ok(CounitReport {
        window,
        generators: cob.generators.len(),
        dropped_terms: cob.dropped_terms,
        curved_morphism,
        arities,
    })
}

fn counit_images<O: CurvedOperad>(
    b: &BarCooperad<'_, O>,
    generators: &[Tree],
    id: impl Fn(&Tree) -> Option<Dec>,
    theta: Dec,
    sign: i64,
) -> BTreeMap<Dec, LinComb<O::B>> {
    let mut images = BTreeMap::new();
    images.insert(theta, b.op.curvature());
    for t in generators {
        if let Tree::Node(g, ch) = t {
            if ch.iter().all(Tree::is_leaf) {
                images.insert(id(t).unwrap(), LinComb::term(b.decoration(*g).clone(), crate::q(sign)));
            }
        }
    }
    images
}

fn eval<O: CurvedOperad>(op: &O, images: &BTreeMap<Dec, LinComb<O::B>>, t: &Tree) -> LinComb<O::B> {
    match evaluate_tree(op, images, t) {
        Some(v) => v,
        None => op.unit().map(LinComb::basis).unwrap_or_default(),
    }
}

fn eval_comb<O: CurvedOperad>(op: &O, images: &BTreeMap<Dec, LinComb<O::B>>, x: &TreeComb) -> LinComb<O::B> {
    let mut out = LinComb::new();
    for (t, c) in x.iter() {
        out.add_scaled(&eval(op, images, t), c);
    }
    out
}

/// Every tree of `Ω̂B̂cAs` of arity `m` and weight `w` has size at most
/// `m − 1 + 2w`.
pub fn cas_counit_interior(max_weight: usize) -> impl Fn(usize, u32) -> bool {
    move |m, w| m + 2 * w as usize <= max_weight + 1
}
