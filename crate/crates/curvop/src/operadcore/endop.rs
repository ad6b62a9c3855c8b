//! Endomorphism operads of finite filtered modules, and representations.

use super::free::{evaluate, Presentation};
use super::{apply_d, lie_bracket, partial, render_comb, CurvedOperad};
use crate::filtcomplex::lincomb::sign_q;
use crate::filtcomplex::{BasisAtom, FGModule, Window};
use crate::planartree::Dec;
use crate::{Error, LinComb, Result};
use std::collections::BTreeMap;
use std::fmt;

/// The elementary map sending the input tuple `ins` to the atom `out` and
/// every other basis tuple to zero.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndBasis {
    pub out: usize,
    pub ins: Vec<usize>,
}

impl fmt::Debug for EndBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}<-{:?}]", self.out, self.ins)
    }
}

/// `End_A`: components `Hom(A^⊗n, A)` for `n ≤ n_max`, with `∂ = [d_A, −]`
/// and curvature `d_A²`.
#[derive(Clone, Debug)]
pub struct EndOperad {
    pub module: FGModule,
    pub n_max: usize,
    d_a: LinComb<EndBasis>,
}

pub fn end_operad(a: &FGModule, n_max: usize) -> EndOperad {
    let mut d_a = LinComb::new();
    for j in 0..a.dim() {
        for (k, c) in a.d(j).iter() {
            d_a.add_term(EndBasis { out: *k, ins: vec![j] }, c.clone());
        }
    }
    EndOperad { module: a.clone(), n_max, d_a }
}

impl EndOperad {
    /// `d_A` as an arity-1 element.
    pub fn d_a(&self) -> &LinComb<EndBasis> {
        &self.d_a
    }

    pub fn identity(&self) -> LinComb<EndBasis> {
        (0..self.module.dim()).map(|j| (EndBasis { out: j, ins: vec![j] }, crate::q(1))).collect()
    }

    /// The value of `f` on the basis tuple `ins`.
    pub fn eval(&self, f: &LinComb<EndBasis>, ins: &[usize]) -> LinComb<usize> {
        f.iter().filter(|(b, _)| b.ins == ins).map(|(b, c)| (b.out, c.clone())).collect()
    }

    fn elem_weight(&self, out: usize, ins: &[usize]) -> i64 {
        self.module.atom(out).weight as i64 - ins.iter().map(|&i| self.module.atom(i).weight as i64).sum::<i64>()
    }

    /// `Hom(A^⊗n, A)` as a filtered module with predifferential `∂`.
    pub fn component(&self, n: usize) -> Result<FGModule> {
        let basis = self.basis(n, 0);
        let atoms = basis
            .iter()
            .map(|b| BasisAtom::new(format!("{b:?}"), self.degree(b), self.weight(b)))
            .collect();
        let mut m = FGModule::new(atoms, Window::weight(self.max_filtration()))?;
        let index: BTreeMap<&EndBasis, usize> = basis.iter().enumerate().map(|(i, b)| (b, i)).collect();
        for (j, b) in basis.iter().enumerate() {
            for (t, c) in self.d(b).iter() {
                m.add_d(index[t], j, c.clone())?;
            }
        }
        Ok(m)
    }
}

impl CurvedOperad for EndOperad {
    type B = EndBasis;

    fn arity(&self, b: &EndBasis) -> usize {
        b.ins.len()
    }
    fn degree(&self, b: &EndBasis) -> i64 {
        self.module.atom(b.out).degree - b.ins.iter().map(|&i| self.module.atom(i).degree).sum::<i64>()
    }
    fn weight(&self, b: &EndBasis) -> u32 {
        self.elem_weight(b.out, &b.ins).max(0) as u32
    }
    fn max_filtration(&self) -> u32 {
        self.module.window.max_weight
    }
    /// Filtration-preserving elementary maps of arity `n`.
    fn basis(&self, n: usize, _size: usize) -> Vec<EndBasis> {
        if n > self.n_max {
            return Vec::new();
        }
        let dim = self.module.dim();
        let mut out = Vec::new();
        let mut ins = vec![0usize; n];
        if dim == 0 {
            return out;
        }
        loop {
            for o in 0..dim {
                if self.elem_weight(o, &ins) >= 0 {
                    out.push(EndBasis { out: o, ins: ins.clone() });
                }
            }
            let mut k = n;
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                ins[k] += 1;
                if ins[k] < dim {
                    break;
                }
                ins[k] = 0;
            }
        }
    }
    fn compose(&self, a: &EndBasis, i: usize, b: &EndBasis) -> LinComb<EndBasis> {
        if i == 0 || i > a.ins.len() || a.ins[i - 1] != b.out {
            return LinComb::new();
        }
        let before: i64 = a.ins[..i - 1].iter().map(|&j| self.module.atom(j).degree).sum();
        let mut ins = a.ins[..i - 1].to_vec();
        ins.extend_from_slice(&b.ins);
        ins.extend_from_slice(&a.ins[i..]);
        LinComb::term(EndBasis { out: a.out, ins }, sign_q(self.degree(b) * before))
    }
    fn d(&self, b: &EndBasis) -> LinComb<EndBasis> {
        lie_bracket(self, &self.d_a, &LinComb::basis(b.clone()))
    }
    fn curvature(&self) -> LinComb<EndBasis> {
        partial(self, &self.d_a, 1, &self.d_a)
    }
    fn render(&self, b: &EndBasis) -> String {
        let ins: Vec<&str> = b.ins.iter().map(|&i| self.module.atom(i).id.as_str()).collect();
        format!("{}<-({})", self.module.atom(b.out).id, ins.join(","))
    }
}

/// Outcome of [`check_representation`]; every list must be empty.
#[derive(Clone, Debug, Default)]
pub struct RepresentationReport {
    /// `(relation index, image)` for relations not sent to zero.
    pub relations: Vec<(usize, String)>,
    /// `(generator, ∂F(g) − F(dg))` where the predifferentials disagree.
    pub differential: Vec<(String, String)>,
    /// `F(θ) − d_A²` when nonzero.
    pub curvature: Option<String>,
}

impl RepresentationReport {
    pub fn passed(&self) -> bool {
        self.relations.is_empty() && self.differential.is_empty() && self.curvature.is_none()
    }
}

/// Checks that `assignment` defines a curved-operad map `O → End_A`.
pub fn check_representation(
    pres: &Presentation,
    a: &FGModule,
    assignment: &BTreeMap<Dec, LinComb<EndBasis>>,
) -> Result<RepresentationReport> {
    let n_max = pres
        .gens
        .ids()
        .map(|g| pres.gens.get(g).arity)
        .chain(pres.relations.iter().flat_map(|r| r.keys().map(|t| t.arity())))
        .max()
        .unwrap_or(1)
        .max(1);
    let end = end_operad(a, n_max);
    for (g, img) in assignment {
        if *g as usize >= pres.gens.len() {
            return Err(Error::Input(format!("assignment for unknown generator {g}")));
        }
        let gen = pres.gens.get(*g);
        for b in img.keys() {
            if b.out >= a.dim() || b.ins.iter().any(|&i| i >= a.dim()) {
                return Err(Error::Input(format!("image of {} refers to a missing atom", gen.name)));
            }
            if b.ins.len() != gen.arity {
                return Err(Error::Input(format!("image of {} has arity {}, expected {}", gen.name, b.ins.len(), gen.arity)));
            }
            if end.degree(b) != gen.degree {
                return Err(Error::Input(format!("image of {} has degree {}, expected {}", gen.name, end.degree(b), gen.degree)));
            }
            if end.elem_weight(b.out, &b.ins) < gen.weight as i64 {
                return Err(Error::Input(format!("image of {} lowers the filtration below {}", gen.name, gen.weight)));
            }
        }
    }
    let unit = end.identity();
    let mut report = RepresentationReport::default();
    for (i, r) in pres.relations.iter().enumerate() {
        let v = evaluate(&end, assignment, Some(&unit), r)?;
        if !v.is_zero() {
            report.relations.push((i, render_comb(&end, &v)));
        }
    }
    for g in pres.gens.ids() {
        let fg = assignment.get(&g).cloned().unwrap_or_default();
        let lhs = apply_d(&end, &fg);
        let rhs = match pres.d.image(g) {
            Some(img) => evaluate(&end, assignment, Some(&unit), img)?,
            None => LinComb::new(),
        };
        let r = lhs.minus(&rhs);
        if !r.is_zero() {
            report.differential.push((pres.gens.get(g).name.clone(), render_comb(&end, &r)));
        }
    }
    let r = evaluate(&end, assignment, Some(&unit), &pres.curvature)?.minus(&end.curvature());
    if !r.is_zero() {
        report.curvature = Some(render_comb(&end, &r));
    }
    Ok(report)
}
