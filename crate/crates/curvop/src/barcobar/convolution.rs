//! The convolution curved Lie algebra `Hom(C, O)` and twisting morphisms.

use crate::cooperadcore::{infinitesimal_delta, Cooperad};
use crate::filtcomplex::lincomb::sign_q;
use crate::operadcore::{apply_d, partial, CurvedOperad};
use crate::{Error, LinComb, Result};
use num::Zero;
use serde::Serialize;
use std::collections::BTreeMap;

/// A homogeneous map `C → O`: the value on each basis element of the
/// window, missing entries being zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvElement<CB: Ord, OB: Ord> {
    pub degree: i64,
    pub values: BTreeMap<CB, LinComb<OB>>,
}

impl<CB: Ord + Clone, OB: Ord + Clone> ConvElement<CB, OB> {
    pub fn zero(degree: i64) -> Self {
        ConvElement { degree, values: BTreeMap::new() }
    }

    pub fn value(&self, c: &CB) -> LinComb<OB> {
        self.values.get(c).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }

    fn from_values(degree: i64, values: impl IntoIterator<Item = (CB, LinComb<OB>)>) -> Self {
        ConvElement { degree, values: values.into_iter().filter(|(_, v)| !v.is_zero()).collect() }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut values = self.values.clone();
        for (c, v) in &other.values {
            values.entry(c.clone()).or_default().add_assign(v);
        }
        Self::from_values(self.degree, values)
    }

    pub fn scaled(&self, k: &crate::Q) -> Self {
        Self::from_values(self.degree, self.values.iter().map(|(c, v)| (c.clone(), v.scaled(k))))
    }
}

/// `Hom(C, O)` on the basis `basis` of the source window.
pub struct ConvolutionAlgebra<'a, C: Cooperad, O: CurvedOperad> {
    pub source: &'a C,
    pub target: &'a O,
    pub basis: Vec<C::B>,
    dc: Option<&'a (dyn Fn(&C::B) -> LinComb<C::B> + Sync)>,
}

pub type Elem<C, O> = ConvElement<<C as Cooperad>::B, <O as CurvedOperad>::B>;

pub fn convolution<'a, C: Cooperad, O: CurvedOperad>(
    source: &'a C,
    target: &'a O,
    basis: Vec<C::B>,
    dc: Option<&'a (dyn Fn(&C::B) -> LinComb<C::B> + Sync)>,
) -> ConvolutionAlgebra<'a, C, O> {
    ConvolutionAlgebra { source, target, basis, dc }
}

impl<C: Cooperad, O: CurvedOperad> ConvolutionAlgebra<'_, C, O> {
    /// Checks that every value of `f` has degree `|c| + |f|` and the arity of `c`.
    pub fn check_homogeneous(&self, f: &Elem<C, O>) -> Result<()> {
        for (c, v) in &f.values {
            for b in v.keys() {
                if self.target.arity(b) != self.source.arity(c) {
                    return Err(Error::Input(format!("value on {} has the wrong arity", self.source.render(c))));
                }
                if self.target.degree(b) != self.source.degree(c) + f.degree {
                    return Err(Error::Input(format!(
                        "value on {} is not of degree {}",
                        self.source.render(c),
                        f.degree
                    )));
                }
            }
        }
        Ok(())
    }

    /// `(f ⋆ g)(c) = Σ ± f(u) ∘_j g(l)` over the infinitesimal part of `Δ(c)`.
    pub fn star(&self, f: &Elem<C, O>, g: &Elem<C, O>) -> Elem<C, O> {
        let vals = self.basis.iter().map(|c| {
            let mut out = LinComb::new();
            for (u, j, l, k) in infinitesimal_delta(self.source, c) {
                let fu = f.value(&u);
                if fu.is_zero() {
                    continue;
                }
                let gl = g.value(&l);
                if gl.is_zero() {
                    continue;
                }
                let s = k * sign_q(g.degree * self.source.degree(&u));
                out.add_scaled(&partial(self.target, &fu, j, &gl), &s);
            }
            (c.clone(), out)
        });
        ConvElement::from_values(f.degree + g.degree, vals.collect::<Vec<_>>())
    }

    /// `{f, g} = f ⋆ g − (−1)^{|f||g|} g ⋆ f`.
    pub fn bracket(&self, f: &Elem<C, O>, g: &Elem<C, O>) -> Elem<C, O> {
        let a = self.star(f, g);
        let b = self.star(g, f).scaled(&-sign_q(f.degree * g.degree));
        a.plus(&b)
    }

    /// `∂f = d_O·f − (−1)^{|f|} f·d_C`.
    pub fn partial(&self, f: &Elem<C, O>) -> Elem<C, O> {
        let s = -sign_q(f.degree);
        let vals: Vec<_> = self
            .basis
            .iter()
            .map(|c| {
                let mut out = apply_d(self.target, &f.value(c));
                if let Some(dc) = self.dc {
                    for (x, k) in dc(c).iter() {
                        out.add_scaled(&f.value(x), &(k * &s));
                    }
                }
                (c.clone(), out)
            })
            .collect();
        ConvElement::from_values(f.degree - 1, vals)
    }

    /// `Θ = θ_O·ε_C`.
    pub fn theta(&self) -> Elem<C, O> {
        let th = self.target.curvature();
        let vals: Vec<_> = self
            .basis
            .iter()
            .filter_map(|c| {
                let e = self.source.counit(c);
                (!e.is_zero()).then(|| (c.clone(), th.scaled(&e)))
            })
            .collect();
        ConvElement::from_values(-2, vals)
    }

    pub fn render_value(&self, x: &LinComb<O::B>) -> String {
        crate::operadcore::render_comb(self.target, x)
    }
}

/// One nonzero Maurer–Cartan residual cell.
#[derive(Clone, Debug, Serialize)]
pub struct TwistCell {
    pub arity: usize,
    pub degree: i64,
    pub weight: u32,
    pub element: String,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistingReport {
    pub checked: usize,
    /// `ε_O·α = 0`: no value has a unit component.
    pub augmentation_ok: bool,
    /// `α(η_C)` lies in filtration at least 1.
    pub coaugmentation_ok: bool,
    pub failures: Vec<TwistCell>,
}

impl TwistingReport {
    pub fn passed(&self) -> bool {
        self.augmentation_ok && self.coaugmentation_ok && self.failures.is_empty()
    }

    /// Smallest arity with a nonzero residual.
    pub fn first_failing_arity(&self) -> Option<usize> {
        self.failures.iter().map(|f| f.arity).min()
    }
}

/// The residual `Θ + ∂α + ½{α, α}`, per (arity, degree, weight) cell.
pub fn is_twisting_morphism<C: Cooperad, O: CurvedOperad>(
    conv: &ConvolutionAlgebra<'_, C, O>,
    alpha: &Elem<C, O>,
) -> Result<TwistingReport> {
    if alpha.degree != -1 {
        return Err(Error::Input(format!("a twisting morphism has degree −1, got {}", alpha.degree)));
    }
    conv.check_homogeneous(alpha)?;
    let half = crate::Q::new(1.into(), 2.into());
    let r = conv.theta().plus(&conv.partial(alpha)).plus(&conv.bracket(alpha, alpha).scaled(&half));
    let unit = conv.target.unit();
    let augmentation_ok = alpha.values.values().all(|v| unit.as_ref().map_or(true, |u| v.coeff(u).is_zero()));
    let coaug = conv.source.coaugmentation();
    let coaugmentation_ok = alpha.value(&coaug).keys().all(|b| conv.target.weight(b) >= 1);
    let mut failures = Vec::new();
    for c in &conv.basis {
        let v = r.value(c);
        let mut by_weight: BTreeMap<u32, LinComb<O::B>> = BTreeMap::new();
        for (b, k) in v.iter() {
            by_weight.entry(conv.target.weight(b)).or_default().add_term(b.clone(), k.clone());
        }
        for (w, part) in by_weight {
            failures.push(TwistCell {
                arity: conv.source.arity(c),
                degree: conv.source.degree(c),
                weight: w,
                element: conv.source.render(c),
                residual: conv.render_value(&part),
            });
        }
    }
    Ok(TwistingReport { checked: conv.basis.len(), augmentation_ok, coaugmentation_ok, failures })
}
