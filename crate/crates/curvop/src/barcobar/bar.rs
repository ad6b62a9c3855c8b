//! The bar construction `B̂O = (T^c(sŌ), d₀ + d₁ + d₂)`.

use crate::cooperadcore::{extend_coderivation, Coderivation, TreeCooperad};
use crate::filtcomplex::lincomb::sign_q;
use crate::operadcore::{CurvedOperad, GeneratorSet, TreeComb};
use crate::planartree::{Dec, Tree};
use crate::{par, Error, LinComb, Result, Truncation};
use serde::Serialize;
use std::collections::BTreeMap;

/// The cofree cooperad on `sŌ` with its three coderivations.
///
/// Decorations are the non-unit basis elements of `O` with weight at most
/// the filtration bound and arity large enough for every vertex of a tree
/// in the window.
pub struct BarCooperad<'o, O: CurvedOperad> {
    pub op: &'o O,
    pub cooperad: TreeCooperad,
    pub decorations: Vec<O::B>,
    index: BTreeMap<O::B, Dec>,
    pub window: Truncation,
    /// `d̄` vanishes on every decoration, hence `d₁ = 0`.
    pub d1_vanishes: bool,
}

/// Largest vertex arity occurring in a tree of the window.
fn decoration_arity_bound<O: CurvedOperad>(op: &O, w: &Truncation) -> usize {
    let extra = w.max_weight.saturating_sub(1);
    let weightless_constants = op.basis(0, w.max_weight).iter().any(|b| op.weight(b) == 0);
    if weightless_constants {
        w.max_arity + extra
    } else {
        w.max_arity + extra.min(w.max_filtration as usize)
    }
}

pub fn bar<O: CurvedOperad>(op: &O, window: Truncation) -> Result<BarCooperad<'_, O>> {
    if window.max_filtration > op.max_filtration() {
        return Err(Error::Input(format!(
            "bar window filtration {} exceeds the operad truncation {}",
            window.max_filtration,
            op.max_filtration()
        )));
    }
    let unit = op.unit();
    let mut gens = GeneratorSet::new();
    let mut decorations = Vec::new();
    let mut index = BTreeMap::new();
    for a in 0..=decoration_arity_bound(op, &window) {
        for b in op.basis(a, window.max_weight) {
            if Some(&b) == unit.as_ref() || op.weight(&b) > window.max_filtration {
                continue;
            }
            let g = gens.push(format!("s{}", op.render(&b)), a, op.degree(&b) + 1, op.weight(&b));
            index.insert(b.clone(), g);
            decorations.push(b);
        }
    }
    let d1_vanishes = decorations.iter().all(|b| op.d(b).is_zero());
    Ok(BarCooperad { op, cooperad: TreeCooperad::new(gens), decorations, index, window, d1_vanishes })
}

/// The two vertices of a two-vertex cut: `(root, input of the root, lower)`.
fn two_vertex_split(tau: &Tree) -> Option<(Dec, usize, Dec)> {
    let Tree::Node(g, ch) = tau else { return None };
    let mut found = None;
    for (i, c) in ch.iter().enumerate() {
        if let Tree::Node(h, below) = c {
            if found.is_some() || below.iter().any(|x| !x.is_leaf()) {
                return None;
            }
            found = Some((*g, i + 1, *h));
        }
    }
    found
}

impl<O: CurvedOperad> BarCooperad<'_, O> {
    pub fn gens(&self) -> &GeneratorSet {
        &self.cooperad.gens
    }

    pub fn decoration(&self, g: Dec) -> &O::B {
        &self.decorations[g as usize]
    }

    /// The decoration `sb`, if `b` lies in the window.
    pub fn suspended(&self, b: &O::B) -> Option<Dec> {
        self.index.get(b).copied()
    }

    /// `s`-suspension of a combination in `Ō`. The unit component is
    /// dropped; terms outside the decoration table must lie above the
    /// filtration bound.
    fn suspend(&self, x: &LinComb<O::B>) -> LinComb<Dec> {
        let unit = self.op.unit();
        let mut out = LinComb::new();
        for (b, c) in x.iter() {
            if Some(b) == unit.as_ref() || self.op.weight(b) > self.window.max_filtration {
                continue;
            }
            match self.index.get(b) {
                Some(&g) => out.add_term(g, c.clone()),
                None => panic!("bar decoration {} missing from the window", self.op.render(b)),
            }
        }
        out
    }

    fn d0_image(&self, tau: &Tree) -> LinComb<Dec> {
        if tau.is_leaf() {
            self.suspend(&self.op.curvature()).neg()
        } else {
            LinComb::new()
        }
    }

    fn d1_image(&self, tau: &Tree) -> LinComb<Dec> {
        match tau {
            Tree::Node(g, ch) if ch.iter().all(|c| c.is_leaf()) => self.suspend(&self.op.d(self.decoration(*g))).neg(),
            _ => LinComb::new(),
        }
    }

    /// `γ_s(sa ⊗ sb) = (−1)^{|a|} s(a ∘_i b)`.
    fn d2_image(&self, tau: &Tree) -> LinComb<Dec> {
        let Some((g, i, h)) = two_vertex_split(tau) else { return LinComb::new() };
        let a = self.decoration(g);
        let b = self.decoration(h);
        self.suspend(&self.op.compose(a, i, b)).scaled(&sign_q(self.op.degree(a)))
    }

    /// Extends `−sθ` on the trivial tree.
    pub fn d0(&self) -> Coderivation<'_> {
        extend_coderivation(&self.cooperad, -1, move |t| self.d0_image(t), 0, self.window.max_filtration)
    }

    /// Extends `id_s ⊗ d̄`.
    pub fn d1(&self) -> Coderivation<'_> {
        extend_coderivation(&self.cooperad, -1, move |t| self.d1_image(t), 1, self.window.max_filtration).with_min_tau(1)
    }

    /// Extends `γ_s ⊗ γ̄₍₁₎`.
    pub fn d2(&self) -> Coderivation<'_> {
        extend_coderivation(&self.cooperad, -1, move |t| self.d2_image(t), 2, self.window.max_filtration).with_min_tau(2)
    }

    /// `d_β = d₀ + d₁ + d₂`.
    pub fn d_beta(&self) -> Coderivation<'_> {
        extend_coderivation(
            &self.cooperad,
            -1,
            move |t| match t.weight() {
                0 => self.d0_image(t),
                1 => self.d1_image(t),
                2 => self.d2_image(t),
                _ => LinComb::new(),
            },
            2,
            self.window.max_filtration,
        )
    }

    /// Basis trees of arity `m` in the window.
    pub fn basis(&self, m: usize) -> Vec<Tree> {
        self.cooperad.basis_trees(m, self.window.max_weight, self.window.max_filtration)
    }

    pub fn all_basis(&self) -> Vec<Tree> {
        (0..=self.window.max_arity).flat_map(|m| self.basis(m)).collect()
    }

    pub fn render(&self, x: &TreeComb) -> String {
        self.cooperad.gens.render_comb(x)
    }
}

/// The five brackets of `d_β²`, in the order
/// `d₀²`, `d₀d₁ + d₁d₀`, `d₁² + d₀d₂ + d₂d₀`, `d₁d₂ + d₂d₁`, `d₂²`.
pub const BAR_BRACKETS: [&str; 5] = ["d0^2", "d0d1+d1d0", "d1^2+d0d2+d2d0", "d1d2+d2d1", "d2^2"];

#[derive(Clone, Debug, Serialize)]
pub struct BarResidual {
    pub tree: String,
    pub bracket: &'static str,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct BarSquareReport {
    pub window: Truncation,
    pub trees: usize,
    /// Trees per arity.
    pub per_arity: Vec<usize>,
    /// Nonzero residual count per bracket.
    pub bracket_failures: [usize; 5],
    pub residuals: Vec<BarResidual>,
}

impl BarSquareReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }
}

/// The five brackets of `d_β²` on one tree.
pub fn bar_square_brackets<O: CurvedOperad>(bar: &BarCooperad<'_, O>, t: &Tree) -> [TreeComb; 5] {
    let (d0, d1, d2) = (bar.d0(), bar.d1(), bar.d2());
    let d1 = |x: &TreeComb| if bar.d1_vanishes { LinComb::new() } else { d1.apply(x) };
    let x = LinComb::basis(t.clone());
    let (x0, x1, x2) = (d0.apply(&x), d1(&x), d2.apply(&x));
    let mut b2 = d1(&x1);
    b2.add_assign(&d0.apply(&x2));
    b2.add_assign(&d2.apply(&x0));
    [d0.apply(&x0), d0.apply(&x1).plus(&d1(&x0)), b2, d1(&x2).plus(&d2.apply(&x1)), d2.apply(&x2)]
}

/// Checks every bracket of `d_β²` on every basis tree of the window.
pub fn check_bar_square<O: CurvedOperad>(bar: &BarCooperad<'_, O>) -> BarSquareReport {
    let per_arity: Vec<usize> = (0..=bar.window.max_arity).map(|m| bar.basis(m).len()).collect();
    let trees = bar.all_basis();
    let found = par::map(&trees, |t| {
        let br = bar_square_brackets(bar, t);
        let mut out = Vec::new();
        for (k, r) in br.iter().enumerate() {
            if !r.is_zero() {
                out.push((k, BarResidual { tree: bar.gens().render(t), bracket: BAR_BRACKETS[k], residual: bar.render(r) }));
            }
        }
        out
    });
    let mut bracket_failures = [0usize; 5];
    let mut residuals = Vec::new();
    for (k, r) in found.into_iter().flatten() {
        bracket_failures[k] += 1;
        residuals.push(r);
    }
    BarSquareReport { window: bar.window, trees: trees.len(), per_arity, bracket_failures, residuals }
}

/// `d_β(|)`.
pub fn bar_on_trivial_tree<O: CurvedOperad>(bar: &BarCooperad<'_, O>) -> TreeComb {
    bar.d_beta().apply(&LinComb::basis(Tree::Leaf))
}

/// `−s` of a combination, as corollas: the expected `d₀(|)` for a curvature.
pub fn minus_suspended_corollas<O: CurvedOperad>(bar: &BarCooperad<'_, O>, x: &LinComb<O::B>) -> TreeComb {
    let mut out = LinComb::new();
    for (b, c) in x.iter() {
        if let Some(g) = bar.suspended(b) {
            out.add_term(Tree::corolla(g, bar.op.arity(b)), -c.clone());
        }
    }
    out
}
