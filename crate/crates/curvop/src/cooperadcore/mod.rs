//! Cofree tree cooperads: decomposition, counit, cooperad maps and
//! coderivations built from cogenerator data, and subcooperads cut out as
//! filtered kernels.

mod kernel;

pub use kernel::*;

use crate::filtcomplex::lincomb::sign_q;
use crate::operadcore::{GeneratorSet, TreeComb};
use crate::planartree::{compose_full, contraction_sites, two_level_splits_signed, Dec, Tree};
use crate::{par, q, Error, LinComb, Result, Q};
use num::Zero;
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt::Debug;

/// `(upper; lowers)`.
pub type Decomp<B> = (B, Vec<B>);

/// `(top; middles; bottoms)`, the middles forming a forest under `top`.
pub type ThreeLevel<B> = (B, Vec<B>, Vec<B>);

/// A coaugmented cooperad on a basis.
pub trait Cooperad: Sync {
    type B: Clone + Ord + Debug + Send + Sync;

    fn arity(&self, b: &Self::B) -> usize;
    fn degree(&self, b: &Self::B) -> i64;
    fn weight(&self, b: &Self::B) -> u32;
    fn delta(&self, b: &Self::B) -> LinComb<Decomp<Self::B>>;
    fn counit(&self, b: &Self::B) -> Q;
    fn coaugmentation(&self) -> Self::B;
    fn render(&self, b: &Self::B) -> String;
}

/// The cofree conilpotent cooperad on a collection of cogenerators.
///
/// With `infinitesimal` set the trivial tree carries weight 1, the
/// infinitesimal coideal shift; arities and degrees are unchanged.
#[derive(Clone, Debug)]
pub struct TreeCooperad {
    pub gens: GeneratorSet,
    pub infinitesimal: bool,
}

impl TreeCooperad {
    pub fn new(gens: GeneratorSet) -> Self {
        TreeCooperad { gens, infinitesimal: false }
    }

    pub fn coideal(&self) -> Self {
        TreeCooperad { gens: self.gens.clone(), infinitesimal: true }
    }

    pub fn deg(&self) -> impl Fn(Dec) -> i64 + '_ {
        move |g| self.gens.degree_of(g)
    }

    pub fn tree_weight(&self, t: &Tree) -> u32 {
        if t.is_leaf() && self.infinitesimal {
            1
        } else {
            self.gens.tree_weight(t)
        }
    }

    /// Trees of the given arity, at most `max_vertices` vertices and weight
    /// at most `p`.
    pub fn basis_trees(&self, arity: usize, max_vertices: usize, p: u32) -> Vec<Tree> {
        crate::operadcore::free_operad_basis_weighted(&self.gens, arity, max_vertices, p)
            .into_iter()
            .filter(|t| self.tree_weight(t) <= p)
            .collect()
    }

    pub fn delta_comb(&self, x: &TreeComb) -> LinComb<Decomp<Tree>> {
        let mut out = LinComb::new();
        for (t, c) in x.iter() {
            out.add_scaled(&self.delta(t), c);
        }
        out
    }

    /// The part of `x` on single-vertex trees, as cogenerators.
    pub fn project(&self, x: &TreeComb) -> LinComb<Dec> {
        x.iter()
            .filter(|(t, _)| t.weight() == 1)
            .map(|(t, c)| (t.root().unwrap(), c.clone()))
            .collect()
    }
}

impl Cooperad for TreeCooperad {
    type B = Tree;

    fn arity(&self, b: &Tree) -> usize {
        b.arity()
    }
    fn degree(&self, b: &Tree) -> i64 {
        self.gens.tree_degree(b)
    }
    fn weight(&self, b: &Tree) -> u32 {
        self.tree_weight(b)
    }
    fn delta(&self, t: &Tree) -> LinComb<Decomp<Tree>> {
        two_level_splits_signed(t, &self.deg()).into_iter().map(|s| ((s.upper, s.lowers), q(s.sign))).collect()
    }
    fn counit(&self, b: &Tree) -> Q {
        if b.is_leaf() {
            q(1)
        } else {
            Q::zero()
        }
    }
    fn coaugmentation(&self) -> Tree {
        Tree::Leaf
    }
    fn render(&self, b: &Tree) -> String {
        self.gens.render(b)
    }
}

/// `(ε ∘ id)Δ` and `(id ∘ ε)Δ` of a basis element.
pub fn counit_sides<C: Cooperad>(c: &C, b: &C::B) -> (LinComb<C::B>, LinComb<C::B>) {
    let mut left = LinComb::new();
    let mut right = LinComb::new();
    for ((u, ls), k) in c.delta(b).iter() {
        let eu = c.counit(u);
        if ls.len() == 1 && !eu.is_zero() {
            left.add_term(ls[0].clone(), k * eu);
        }
        let el: Q = ls.iter().map(|l| c.counit(l)).product();
        if !el.is_zero() {
            right.add_term(u.clone(), k * el);
        }
    }
    (left, right)
}

/// `(Δ ∘ id)Δ(b)`.
pub fn three_level_via_upper<C: Cooperad>(c: &C, b: &C::B) -> LinComb<ThreeLevel<C::B>> {
    let mut out = LinComb::new();
    for ((u, ls), k) in c.delta(b).iter() {
        for ((top, mids), k2) in c.delta(u).iter() {
            out.add_term((top.clone(), mids.clone(), ls.clone()), k * k2);
        }
    }
    out
}

/// `(id ∘ Δ)Δ(b)`, with the sign of moving each middle past the bottoms
/// already listed.
pub fn three_level_via_lowers<C: Cooperad>(c: &C, b: &C::B) -> LinComb<ThreeLevel<C::B>> {
    let mut out = LinComb::new();
    for ((top, ls), k) in c.delta(b).iter() {
        let mut acc: Vec<(Vec<C::B>, Vec<C::B>, Q, i64)> = vec![(vec![], vec![], k.clone(), 0)];
        for l in ls {
            let parts = c.delta(l);
            let mut next = Vec::new();
            for (mids, bots, coeff, botdeg) in &acc {
                for ((m, bs), k2) in parts.iter() {
                    let pass = sign_q(c.degree(m) * botdeg);
                    let mut mids = mids.clone();
                    mids.push(m.clone());
                    let mut bots = bots.clone();
                    bots.extend(bs.iter().cloned());
                    let d: i64 = bs.iter().map(|x| c.degree(x)).sum();
                    next.push((mids, bots, coeff * k2 * pass, botdeg + d));
                }
            }
            acc = next;
        }
        for (mids, bots, coeff, _) in acc {
            out.add_term((top.clone(), mids, bots), coeff);
        }
    }
    out
}

/// `(Δ ∘ id)Δ − (id ∘ Δ)Δ` on `b`.
pub fn coassociativity_defect<C: Cooperad>(c: &C, b: &C::B) -> LinComb<ThreeLevel<C::B>> {
    three_level_via_upper(c, b).minus(&three_level_via_lowers(c, b))
}

/// The cooperad map `Φ = Σ_n Φ_n` into a tree cooperad determined by a
/// projection `φ` onto cogenerators; `Φ_n` lands on trees with `n`
/// vertices.
pub struct CooperadExtension<'a, C: Cooperad> {
    pub source: &'a C,
    pub target: &'a TreeCooperad,
    phi: Box<dyn Fn(&C::B) -> LinComb<Dec> + 'a>,
    pub max_vertices: usize,
    pub max_filtration: u32,
    cache: RefCell<BTreeMap<(C::B, usize), TreeComb>>,
}

/// Builds `Φ` with `Φ_0 = ε`, `Φ_1 = φ` and
/// `Φ_n = Σ φ(u) ∘ (Φ_{i_1}(l_1), …, Φ_{i_k}(l_k))` over `Δ = Σ (u; l)`,
/// `Σ i_j = n − 1`.
pub fn extend_to_cooperad_map<'a, C: Cooperad>(
    source: &'a C,
    target: &'a TreeCooperad,
    phi: impl Fn(&C::B) -> LinComb<Dec> + 'a,
    max_vertices: usize,
    max_filtration: u32,
) -> Result<CooperadExtension<'a, C>> {
    let eta = source.coaugmentation();
    for (g, _) in phi(&eta).iter() {
        if target.gens.get(*g).weight == 0 {
            return Err(Error::Contract(format!(
                "φ sends the coaugmentation to {} of weight 0",
                target.gens.get(*g).name
            )));
        }
    }
    Ok(CooperadExtension {
        source,
        target,
        phi: Box::new(phi),
        max_vertices,
        max_filtration,
        cache: RefCell::new(BTreeMap::new()),
    })
}

impl<C: Cooperad> CooperadExtension<'_, C> {
    /// `Φ_n(b)`.
    pub fn component(&self, b: &C::B, n: usize) -> TreeComb {
        if let Some(v) = self.cache.borrow().get(&(b.clone(), n)) {
            return v.clone();
        }
        let v = self.compute(b, n);
        self.cache.borrow_mut().insert((b.clone(), n), v.clone());
        v
    }

    fn compute(&self, b: &C::B, n: usize) -> TreeComb {
        let p = self.max_filtration;
        if n == 0 {
            return LinComb::term(Tree::Leaf, self.source.counit(b));
        }
        let deg = self.target.deg();
        let mut out = LinComb::new();
        for ((u, ls), k) in self.source.delta(b).iter() {
            let pu = (self.phi)(u);
            if pu.is_zero() {
                continue;
            }
            // forests with n − 1 vertices in total
            let mut forests: Vec<(Vec<Tree>, Q, usize)> = vec![(vec![], q(1), 0)];
            for l in ls {
                let mut next = Vec::new();
                for (f, c, used) in &forests {
                    for i in 0..=(n - 1 - used) {
                        for (t, ct) in self.component(l, i).iter() {
                            let mut f = f.clone();
                            f.push(t.clone());
                            next.push((f, c * ct, used + i));
                        }
                    }
                }
                forests = next;
            }
            for (g, cg) in pu.iter() {
                let top = Tree::corolla(*g, ls.len());
                for (f, c, used) in &forests {
                    if *used != n - 1 {
                        continue;
                    }
                    let (t, sign) = compose_full(&top, f, &deg).expect("arity matches");
                    if self.target.tree_weight(&t) <= p {
                        out.add_term(t, k * cg * c * q(sign));
                    }
                }
            }
        }
        out
    }

    /// `Σ_{n ≤ max_vertices} Φ_n(b)`.
    pub fn apply(&self, b: &C::B) -> TreeComb {
        let mut out = LinComb::new();
        for n in 0..=self.max_vertices {
            out.add_assign(&self.component(b, n));
        }
        out
    }
}

/// `Δ·Φ − (Φ ∘ Φ)·Δ` on `b`, restricted to decompositions with at most
/// `max_vertices` vertices and weight at most `p` in total.
pub fn cooperad_map_defect<C: Cooperad>(
    source: &C,
    target: &TreeCooperad,
    phi_total: &dyn Fn(&C::B) -> TreeComb,
    b: &C::B,
    max_vertices: usize,
    p: u32,
) -> LinComb<Decomp<Tree>> {
    let inside = |d: &Decomp<Tree>| {
        let v = d.0.weight() + d.1.iter().map(|t| t.weight()).sum::<usize>();
        let w = target.gens.tree_weight(&d.0) + d.1.iter().map(|t| target.gens.tree_weight(t)).sum::<u32>();
        v <= max_vertices && w <= p
    };
    let lhs = target.delta_comb(&phi_total(b)).filter(inside);
    let mut rhs = LinComb::new();
    for ((u, ls), k) in source.delta(b).iter() {
        let mut acc: Vec<(Tree, Vec<Tree>, Q)> =
            phi_total(u).iter().map(|(t, c)| (t.clone(), vec![], k * c)).collect();
        for l in ls {
            let img = phi_total(l);
            let mut next = Vec::new();
            for (top, f, c) in &acc {
                for (t, ct) in img.iter() {
                    let mut f = f.clone();
                    f.push(t.clone());
                    next.push((top.clone(), f, c * ct));
                }
            }
            acc = next;
        }
        for (top, f, c) in acc {
            let d = (top, f);
            if inside(&d) {
                rhs.add_term(d, c);
            }
        }
    }
    lhs.minus(&rhs)
}

/// The coderivation of the identity of a tree cooperad extending a map to
/// cogenerators: each connected subtree `τ` (possibly an empty edge) is
/// contracted to `image(τ)`.
pub struct Coderivation<'a> {
    pub target: &'a TreeCooperad,
    pub degree: i64,
    image: Box<dyn Fn(&Tree) -> LinComb<Dec> + Sync + 'a>,
    /// Largest `τ` on which `image` can be nonzero.
    pub max_tau: usize,
    /// Smallest such `τ`.
    pub min_tau: usize,
    pub max_filtration: u32,
}

pub fn extend_coderivation<'a>(
    target: &'a TreeCooperad,
    degree: i64,
    image: impl Fn(&Tree) -> LinComb<Dec> + Sync + 'a,
    max_tau: usize,
    max_filtration: u32,
) -> Coderivation<'a> {
    Coderivation { target, degree, image: Box::new(image), max_tau, min_tau: 0, max_filtration }
}

impl Coderivation<'_> {
    pub fn image(&self, tau: &Tree) -> LinComb<Dec> {
        (self.image)(tau)
    }

    /// Declares `image` zero on every `τ` with fewer than `k` vertices.
    pub fn with_min_tau(mut self, k: usize) -> Self {
        self.min_tau = k;
        self
    }

    fn sites(&self, t: &Tree) -> Vec<crate::planartree::Site> {
        let deg = self.target.deg();
        if self.max_tau <= 2 {
            crate::planartree::small_contraction_sites(t, self.min_tau, self.max_tau, &deg)
        } else {
            contraction_sites(t, self.max_tau, &deg).into_iter().filter(|s| s.tau.weight() >= self.min_tau).collect()
        }
    }

    pub fn apply_tree(&self, t: &Tree) -> TreeComb {
        let mut out = LinComb::new();
        for site in self.sites(t) {
            let img = (self.image)(&site.tau);
            if img.is_zero() {
                continue;
            }
            let s = q(site.sign) * sign_q(self.degree * site.degree_before);
            for (g, c) in img.iter() {
                let r = site.contract(t, *g);
                if self.target.tree_weight(&r) <= self.max_filtration {
                    out.add_term(r, c * &s);
                }
            }
        }
        out
    }

    pub fn apply(&self, x: &TreeComb) -> TreeComb {
        let terms: Vec<(Tree, Q)> = x.iter().map(|(t, c)| (t.clone(), c.clone())).collect();
        let parts = par::map(&terms, |(t, c)| self.apply_tree(t).scaled(c));
        let mut out = LinComb::new();
        for p in &parts {
            out.add_assign(p);
        }
        out
    }

    /// `Δ·D − (D ∘ id)·Δ − (id ∘′ D)·Δ` on `t`, on decompositions of
    /// total weight at most the filtration bound.
    pub fn law_defect(&self, t: &Tree) -> LinComb<Decomp<Tree>> {
        let c = self.target;
        let p = self.max_filtration;
        let inside = |d: &Decomp<Tree>| c.gens.tree_weight(&d.0) + d.1.iter().map(|x| c.gens.tree_weight(x)).sum::<u32>() <= p;
        let lhs = c.delta_comb(&self.apply_tree(t));
        let mut rhs = LinComb::new();
        for ((u, ls), k) in c.delta(t).iter() {
            for (du, cu) in self.apply_tree(u).iter() {
                rhs.add_term((du.clone(), ls.clone()), k * cu);
            }
            let mut before = c.degree(u);
            for j in 0..ls.len() {
                let s = sign_q(self.degree * before);
                for (dl, cl) in self.apply_tree(&ls[j]).iter() {
                    let mut nl = ls.clone();
                    nl[j] = dl.clone();
                    rhs.add_term((u.clone(), nl), k * cl * &s);
                }
                before += c.degree(&ls[j]);
            }
        }
        lhs.minus(&rhs).filter(inside)
    }
}

/// The infinitesimal part of `Δ(b)`: terms `(u; 1, …, l, …, 1)` as
/// `(u, j, l, coefficient)` with `l` at the 1-based input `j`. A term whose
/// lowers are all trivial contributes once per input of `u`.
pub fn infinitesimal_delta<C: Cooperad>(c: &C, b: &C::B) -> Vec<(C::B, usize, C::B, Q)> {
    let one = c.coaugmentation();
    let mut out = Vec::new();
    for ((u, ls), k) in c.delta(b).iter() {
        let nontrivial: Vec<usize> = (0..ls.len()).filter(|&i| ls[i] != one).collect();
        match nontrivial.len() {
            0 => {
                for j in 0..ls.len() {
                    out.push((u.clone(), j + 1, one.clone(), k.clone()));
                }
            }
            1 => {
                let j = nontrivial[0];
                out.push((u.clone(), j + 1, ls[j].clone(), k.clone()));
            }
            _ => {}
        }
    }
    out
}
