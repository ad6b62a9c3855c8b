//! Non-symmetric curved operads: free operads on planar trees, derivations,
//! free curved operads, `cAs`, endomorphism operads and representations.
//!
//! Concrete operads implement [`CurvedOperad`] over their own normal-form
//! basis. The bracket, pre-Lie product and curvature check are written once
//! against that trait.

mod cas;
mod endop;
mod free;

pub use cas::*;
pub use endop::*;
pub use free::*;

use crate::filtcomplex::lincomb::sign_q;
use crate::{par, LinComb};
use std::fmt::Debug;

/// A curved operad truncated at filtration `max_filtration`, given on a
/// normal-form basis.
pub trait CurvedOperad: Sync {
    type B: Clone + Ord + Debug + Send + Sync;

    fn arity(&self, b: &Self::B) -> usize;
    fn degree(&self, b: &Self::B) -> i64;
    fn weight(&self, b: &Self::B) -> u32;
    fn max_filtration(&self) -> u32;
    /// Normal forms of the given arity in the window. `size` bounds the
    /// number of vertices where the basis is tree-shaped.
    fn basis(&self, arity: usize, size: usize) -> Vec<Self::B>;
    /// `a ∘_i b` in normal form, terms above the filtration window dropped.
    fn compose(&self, a: &Self::B, i: usize, b: &Self::B) -> LinComb<Self::B>;
    fn d(&self, b: &Self::B) -> LinComb<Self::B>;
    fn curvature(&self) -> LinComb<Self::B>;
    fn render(&self, b: &Self::B) -> String;
    /// The unit, when it is a basis element. Its complement spans the
    /// augmentation ideal.
    fn unit(&self) -> Option<Self::B> {
        None
    }
}

/// `x ∘_i y`, bilinearly. Terms of `x` with fewer than `i` inputs give 0.
pub fn partial<O: CurvedOperad>(op: &O, x: &LinComb<O::B>, i: usize, y: &LinComb<O::B>) -> LinComb<O::B> {
    let mut out = LinComb::new();
    for (a, ca) in x.iter() {
        if i == 0 || i > op.arity(a) {
            continue;
        }
        for (b, cb) in y.iter() {
            out.add_scaled(&op.compose(a, i, b), &(ca * cb));
        }
    }
    out
}

/// `{x, y} = Σ_i x ∘_i y`.
pub fn prelie<O: CurvedOperad>(op: &O, x: &LinComb<O::B>, y: &LinComb<O::B>) -> LinComb<O::B> {
    let mut out = LinComb::new();
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            let c = ca * cb;
            for i in 1..=op.arity(a) {
                out.add_scaled(&op.compose(a, i, b), &c);
            }
        }
    }
    out
}

/// `[x, y] = {x, y} − (−1)^{|x||y|} {y, x}`, signs taken term by term.
pub fn lie_bracket<O: CurvedOperad>(op: &O, x: &LinComb<O::B>, y: &LinComb<O::B>) -> LinComb<O::B> {
    let mut out = prelie(op, x, y);
    for (a, ca) in x.iter() {
        for (b, cb) in y.iter() {
            let s = -sign_q(op.degree(a) * op.degree(b));
            let c = ca * cb * s;
            for j in 1..=op.arity(b) {
                out.add_scaled(&op.compose(b, j, a), &c);
            }
        }
    }
    out
}

pub fn apply_d<O: CurvedOperad>(op: &O, x: &LinComb<O::B>) -> LinComb<O::B> {
    x.map_linear(|b| op.d(b))
}

/// One failing basis element of a curvature check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Residual {
    pub arity: usize,
    pub element: String,
    pub residual: String,
}

/// Outcome of [`curvature_check`].
#[derive(Clone, Debug)]
pub struct CurvatureReport {
    pub checked: usize,
    /// Nonzero values of `d²(b) − [θ, b]`.
    pub residuals: Vec<Residual>,
    pub curvature_closed: bool,
    /// `θ` is homogeneous of arity 1, degree −2 and weight ≥ 1.
    pub curvature_shape_ok: bool,
    pub max_arity: usize,
    pub max_filtration: u32,
}

impl CurvatureReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty() && self.curvature_closed && self.curvature_shape_ok
    }
}

/// Checks `d(θ) = 0` and `d² = [θ, −]` on every normal form of arity
/// ≤ `max_arity` (and at most `size` vertices where that applies).
pub fn curvature_check<O: CurvedOperad>(op: &O, max_arity: usize, size: usize) -> CurvatureReport {
    let theta = op.curvature();
    let curvature_closed = apply_d(op, &theta).is_zero();
    let curvature_shape_ok = theta
        .keys()
        .all(|b| op.arity(b) == 1 && op.degree(b) == -2 && op.weight(b) >= 1);
    let mut all = Vec::new();
    for m in 0..=max_arity {
        all.extend(op.basis(m, size));
    }
    let found = par::map(&all, |b| {
        let x = LinComb::basis(b.clone());
        let r = apply_d(op, &apply_d(op, &x)).minus(&lie_bracket(op, &theta, &x));
        if r.is_zero() {
            None
        } else {
            Some(Residual { arity: op.arity(b), element: op.render(b), residual: render_comb(op, &r) })
        }
    });
    CurvatureReport {
        checked: all.len(),
        residuals: found.into_iter().flatten().collect(),
        curvature_closed,
        curvature_shape_ok,
        max_arity,
        max_filtration: op.max_filtration(),
    }
}

/// Renders `Σ c b` using the operad's own basis names.
pub fn render_comb<O: CurvedOperad>(op: &O, x: &LinComb<O::B>) -> String {
    if x.is_zero() {
        return "0".into();
    }
    let parts: Vec<String> = x
        .iter()
        .map(|(b, c)| format!("{}{}", crate::filtcomplex::lincomb::fmt_signed(c), op.render(b)))
        .collect();
    parts.join(" ")
}
