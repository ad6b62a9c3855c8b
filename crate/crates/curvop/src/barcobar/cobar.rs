//! The cobar construction `Ω̂C = (T(s⁻¹C ⊔ ϑI), d₁ + d₂ + d_ϑ)`.

use crate::cooperadcore::{infinitesimal_delta, Cooperad};
use crate::filtcomplex::lincomb::sign_q;
use crate::operadcore::{apply_d, extend_derivation, lie_bracket, Derivation, FreeOperad, GeneratorSet, TreeComb};
use crate::planartree::{Dec, Tree};
use crate::{par, LinComb, Result};
use num::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// The free operad on `s⁻¹C ⊔ ϑ` with `d_ω` split into its three parts.
///
/// Generators cover every basis element of arity at most
/// `max_generator_arity` and weight at most the filtration bound. Terms of
/// `d_ω` that need a generator beyond that arity are dropped and counted
/// in `dropped_terms`; on trees of arity `a` they cannot occur below
/// filtration `max_generator_arity − a`.
pub struct CobarOperad<'c, C: Cooperad> {
    pub cooperad: &'c C,
    pub free: FreeOperad,
    pub d1: Derivation,
    pub d2: Derivation,
    pub d_theta: Derivation,
    pub generators: Vec<C::B>,
    index: BTreeMap<C::B, Dec>,
    pub theta: Dec,
    pub max_generator_arity: usize,
    pub dropped_terms: usize,
}

/// A cooperad predifferential, given on basis elements.
pub type CoDifferential<'a, B> = &'a (dyn Fn(&B) -> LinComb<B> + Sync);

/// Weight of the generator `s⁻¹b`: the coaugmentation sits in weight 1.
fn generator_weight<C: Cooperad>(c: &C, b: &C::B) -> u32 {
    let w = c.weight(b);
    if *b == c.coaugmentation() {
        w.max(1)
    } else {
        w
    }
}

pub fn cobar<'c, C: Cooperad>(
    c: &'c C,
    basis: impl Fn(usize) -> Vec<C::B>,
    dc: Option<CoDifferential<'_, C::B>>,
    max_generator_arity: usize,
    max_filtration: u32,
) -> Result<CobarOperad<'c, C>> {
    let mut gens = GeneratorSet::new();
    let theta = gens.with_theta();
    let mut generators = Vec::new();
    let mut index = BTreeMap::new();
    for a in 0..=max_generator_arity {
        for b in basis(a) {
            let w = generator_weight(c, &b);
            if w > max_filtration || index.contains_key(&b) {
                continue;
            }
            let g = gens.push(format!("s⁻¹{}", c.render(&b)), a, c.degree(&b) - 1, w);
            index.insert(b.clone(), g);
            generators.push(b);
        }
    }
    let id = |b: &C::B| index.get(b).copied();
    let mut dropped = 0usize;
    let (mut i1, mut i2, mut it) = (BTreeMap::new(), BTreeMap::new(), BTreeMap::new());
    for b in &generators {
        let g = index[b];
        // d₁(s⁻¹b) = −s⁻¹(d_C b)
        if let Some(dc) = dc {
            let mut img = LinComb::new();
            for (x, k) in dc(b).iter() {
                if generator_weight(c, x) > max_filtration {
                    continue;
                }
                match id(x) {
                    Some(h) => img.add_term(Tree::corolla(h, c.arity(x)), -k.clone()),
                    None => dropped += 1,
                }
            }
            if !img.is_zero() {
                i1.insert(g, img);
            }
        }
        // d₂(s⁻¹b) = Σ (−1)^{|u|} s⁻¹u ∘_j s⁻¹l over the infinitesimal part of Δ
        let mut img = LinComb::new();
        for (u, j, l, k) in infinitesimal_delta(c, b) {
            if generator_weight(c, &u) + generator_weight(c, &l) > max_filtration {
                continue;
            }
            let (Some(gu), Some(gl)) = (id(&u), id(&l)) else {
                dropped += 1;
                continue;
            };
            let mut ch = vec![Tree::Leaf; c.arity(&u)];
            ch[j - 1] = Tree::corolla(gl, c.arity(&l));
            img.add_term(Tree::Node(gu, ch), k * sign_q(c.degree(&u)));
        }
        if !img.is_zero() {
            i2.insert(g, img);
        }
        // d_ϑ(s⁻¹b) = ε(b) ϑ
        let e = c.counit(b);
        if !e.is_zero() {
            it.insert(g, LinComb::term(Tree::corolla(theta, 1), e));
        }
    }
    let mut total: BTreeMap<Dec, TreeComb> = BTreeMap::new();
    for m in [&i1, &i2, &it] {
        for (g, x) in m {
            total.entry(*g).or_default().add_assign(x);
        }
    }
    let d1 = extend_derivation(&gens, -1, i1)?;
    let d2 = extend_derivation(&gens, -1, i2)?;
    let d_theta = extend_derivation(&gens, -1, it)?;
    let d = extend_derivation(&gens, -1, total)?;
    let free = FreeOperad { gens, d, theta: LinComb::basis(Tree::corolla(theta, 1)), max_filtration };
    Ok(CobarOperad {
        cooperad: c,
        free,
        d1,
        d2,
        d_theta,
        generators,
        index,
        theta,
        max_generator_arity,
        dropped_terms: dropped,
    })
}

impl<C: Cooperad> CobarOperad<'_, C> {
    pub fn gens(&self) -> &GeneratorSet {
        &self.free.gens
    }

    /// The decoration of `s⁻¹b`.
    pub fn generator(&self, b: &C::B) -> Option<Dec> {
        self.index.get(b).copied()
    }

    pub fn generator_tree(&self, b: &C::B) -> Option<Tree> {
        self.generator(b).map(|g| Tree::corolla(g, self.cooperad.arity(b)))
    }

    pub fn d_omega(&self, x: &TreeComb) -> TreeComb {
        self.free.truncate(self.free.d.apply(&self.free.gens, x))
    }

    pub fn apply(&self, d: &Derivation, x: &TreeComb) -> TreeComb {
        self.free.truncate(d.apply(&self.free.gens, x))
    }

    pub fn bracket_theta(&self, x: &TreeComb) -> TreeComb {
        lie_bracket(&self.free, &self.free.theta, x)
    }

    pub fn render(&self, x: &TreeComb) -> String {
        self.free.gens.render_comb(x)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CobarResidual {
    pub element: String,
    pub check: &'static str,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct CobarSquareReport {
    pub max_arity: usize,
    pub max_vertices: usize,
    pub max_filtration: u32,
    pub generators: usize,
    pub trees: usize,
    pub theta_closed: bool,
    pub residuals: Vec<CobarResidual>,
}

impl CobarSquareReport {
    pub fn passed(&self) -> bool {
        self.theta_closed && self.residuals.is_empty()
    }
}

/// Checks `d_ω(ϑ) = 0`; on generators of arity ≤ `max_arity` the separate
/// identities `d₂d_ϑ = 0` and `d_ϑd₂ = [ϑ, −]`; and `d_ω² = [ϑ, −]` on
/// every tree of arity ≤ `max_arity` with at most `max_vertices` vertices.
pub fn check_cobar_square<C: Cooperad>(cob: &CobarOperad<'_, C>, max_arity: usize, max_vertices: usize) -> CobarSquareReport {
    let theta = &cob.free.theta;
    let theta_closed = cob.d_omega(theta).is_zero();
    let mut residuals = Vec::new();
    let mut n_gens = 0;
    for b in &cob.generators {
        if cob.cooperad.arity(b) > max_arity {
            continue;
        }
        n_gens += 1;
        let x = LinComb::basis(cob.generator_tree(b).unwrap());
        let a = cob.apply(&cob.d2, &cob.apply(&cob.d_theta, &x));
        if !a.is_zero() {
            residuals.push(CobarResidual { element: cob.render(&x), check: "d2 dtheta", residual: cob.render(&a) });
        }
        let r = cob.apply(&cob.d_theta, &cob.apply(&cob.d2, &x)).minus(&cob.bracket_theta(&x));
        if !r.is_zero() {
            residuals.push(CobarResidual { element: cob.render(&x), check: "dtheta d2 - [theta,-]", residual: cob.render(&r) });
        }
    }
    let mut trees = Vec::new();
    for m in 0..=max_arity {
        trees.extend(crate::operadcore::CurvedOperad::basis(&cob.free, m, max_vertices));
    }
    let found = par::map(&trees, |t| {
        let x = LinComb::basis(t.clone());
        let r = apply_d(&cob.free, &apply_d(&cob.free, &x)).minus(&cob.bracket_theta(&x));
        (!r.is_zero()).then(|| CobarResidual { element: cob.render(&x), check: "d_omega^2 - [theta,-]", residual: cob.render(&r) })
    });
    residuals.extend(found.into_iter().flatten());
    CobarSquareReport {
        max_arity,
        max_vertices,
        max_filtration: cob.free.max_filtration,
        generators: n_gens,
        trees: trees.len(),
        theta_closed,
        residuals,
    }
}
