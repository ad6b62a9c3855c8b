//! Curved A∞ relations: the displayed family, the family read off the
//! cobar construction of `cAs^¡`, and evaluation on explicit algebras.

use super::dual::{as_dual, cas_dual, CasDual};
use crate::barcobar::cobar;
use crate::filtcomplex::lincomb::fmt_q;
use crate::filtcomplex::{BasisAtom, FGModule, Window};
use crate::planartree::Tree;
use crate::{par, q, Error, LinComb, Result, Q};
use num::ToPrimitive;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// `sign · m_k ∘_position m_q` in the relation of arity `n = k + q − 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RelationTerm {
    pub n: usize,
    pub k: usize,
    pub q: usize,
    pub position: usize,
    pub sign: i64,
}

impl fmt::Display for RelationTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign > 0 { '+' } else { '-' };
        write!(f, "{s}m{}∘{}m{}", self.k, self.position, self.q)
    }
}

pub fn render_relation(terms: &[RelationTerm]) -> String {
    let body: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
    format!("{} = 0", body.join(" "))
}

/// `Σ_{p+q+r=n} (−1)^{p+qr} m_{p+1+r} ∘_{p+1} m_q`, ordered by `k` then
/// position.
pub fn ainfty_relations(n: usize) -> Vec<RelationTerm> {
    let mut out = Vec::new();
    for k in 1..=n + 1 {
        let q = n + 1 - k;
        for position in 1..=k {
            let (p, r) = (position - 1, k - position);
            let sign = if (p + q * r) % 2 == 0 { 1 } else { -1 };
            out.push(RelationTerm { n, k, q, position, sign });
        }
    }
    out
}

/// The relation of arity `n` read off `d_ω(s⁻¹μ̂ₙᶜ)`.
#[derive(Clone, Debug, Serialize)]
pub struct CobarRelation {
    pub n: usize,
    pub terms: Vec<RelationTerm>,
    /// Coefficient of `ϑ`, which an algebra with predifferential `d` sends
    /// to the `d²` part of `m₁∘₁m₁`.
    pub theta: i64,
    /// Some term needed a generator or weight outside the window.
    pub partial: bool,
}

/// The relation family of `Ω̂C` for `C = cAs^¡` (or `As^¡` without
/// curvature), arities `0..=n_max`, built at filtration `p`.
pub fn relations_from_cobar(n_max: usize, p: u32, curved: bool) -> Result<Vec<CobarRelation>> {
    let dual: CasDual = if curved { cas_dual(p) } else { as_dual() };
    let p_built = if curved { p } else { 2 };
    let cob = cobar(&dual, |a| dual.basis(a), None, n_max + 1, p_built)?;
    // m₁∘₁m₁ and m₁∘₁m₀ each carry two weight-1 generators
    let room = p_built >= 2;
    let mut out = Vec::new();
    for n in 0..=n_max {
        let Some(g) = cob.generator(&n) else { continue };
        let img = cob.d_omega(&LinComb::basis(Tree::corolla(g, n)));
        let mut terms = Vec::new();
        let mut theta = 0;
        for (t, c) in img.iter() {
            let c = c.to_i64().ok_or_else(|| Error::Contract("non-integral cobar coefficient".into()))?;
            let Tree::Node(u, ch) = t else { unreachable!() };
            if *u == cob.theta {
                theta += c;
                continue;
            }
            let (j, lower) = ch.iter().enumerate().find(|(_, x)| !x.is_leaf()).expect("two-vertex term");
            let Tree::Node(l, _) = lower else { unreachable!() };
            let gen = |d: u32| cob.generators.iter().copied().find(|b| cob.generator(b) == Some(d)).unwrap();
            terms.push(RelationTerm { n, k: gen(*u), q: gen(*l), position: j + 1, sign: c });
        }
        terms.sort_by_key(|t| (t.k, t.position));
        out.push(CobarRelation { n, terms, theta, partial: !room });
    }
    Ok(out)
}

/// Which terms of `ainfty_relations(n)` survive without curvature.
pub fn classical_relations(n: usize) -> Vec<RelationTerm> {
    ainfty_relations(n).into_iter().filter(|t| t.q >= 1).collect()
}

/// Term-by-term comparison of the two relation families.
#[derive(Clone, Debug, Serialize)]
pub struct RelationComparison {
    pub n_max: usize,
    pub max_filtration: u32,
    /// Ratio of cobar signs to displayed signs, when one ratio fits all.
    pub relative_sign: Option<i64>,
    pub mismatched_arities: Vec<usize>,
    /// `σ` in `m₁∘₁m₁ = σ(m₂∘₁m₀ − m₂∘₂m₀)`, read off the cobar relation.
    pub curvature_sign: Option<i64>,
    pub expected_curvature_sign: i64,
}

impl RelationComparison {
    pub fn passed(&self) -> bool {
        self.relative_sign.is_some()
            && self.mismatched_arities.is_empty()
            && self.curvature_sign == Some(self.expected_curvature_sign)
    }
}

/// Reads `σ` off an `n = 1` relation: `m₁∘₁m₁ + a m₂∘₁m₀ + b m₂∘₂m₀` with
/// `b = −a` gives `σ = −a / c(m₁∘₁m₁)`.
pub fn curvature_sign_of(terms: &[RelationTerm]) -> Option<i64> {
    let c = |k, q, pos| terms.iter().find(|t| t.k == k && t.q == q && t.position == pos).map(|t| t.sign);
    let (m11, a, b) = (c(1, 1, 1)?, c(2, 0, 1)?, c(2, 0, 2)?);
    (a == -b && terms.len() == 3).then_some(-a * m11)
}

pub fn compare_relations(n_max: usize, p: u32, expected_curvature_sign: i64) -> Result<RelationComparison> {
    let fam = relations_from_cobar(n_max, p, true)?;
    let mut ratio = None;
    let mut consistent = true;
    let mut mismatched = Vec::new();
    for r in &fam {
        let want = ainfty_relations(r.n);
        let same_shape = r.terms.len() == want.len()
            && r.terms.iter().zip(&want).all(|(a, b)| (a.k, a.q, a.position) == (b.k, b.q, b.position));
        if r.partial || !same_shape {
            mismatched.push(r.n);
            continue;
        }
        for (a, b) in r.terms.iter().zip(&want) {
            let x = a.sign * b.sign;
            if *ratio.get_or_insert(x) != x {
                consistent = false;
                mismatched.push(r.n);
                break;
            }
        }
    }
    let curvature_sign = fam.iter().find(|r| r.n == 1).and_then(|r| curvature_sign_of(&r.terms));
    Ok(RelationComparison {
        n_max,
        max_filtration: p,
        relative_sign: if consistent { ratio } else { None },
        mismatched_arities: mismatched,
        curvature_sign,
        expected_curvature_sign,
    })
}

/// One nonzero entry `coeff · out ← (ins…)` of an operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpEntry {
    pub out: usize,
    pub ins: Vec<usize>,
    pub coeff: Q,
}

/// A filtered graded module with operations `m_n` of degree `n − 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvedAInftyAlgebra {
    pub module: FGModule,
    pub ops: BTreeMap<usize, Vec<OpEntry>>,
}

type OpTable = BTreeMap<Vec<usize>, LinComb<usize>>;

impl CurvedAInftyAlgebra {
    /// Checks degrees and the filtration conditions on every entry.
    pub fn new(module: FGModule, ops: BTreeMap<usize, Vec<OpEntry>>) -> Result<Self> {
        let a = CurvedAInftyAlgebra { module, ops };
        a.validate()?;
        Ok(a)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.module;
        for (&n, entries) in &self.ops {
            for (idx, e) in entries.iter().enumerate() {
                let here = format!("operations[\"{n}\"][{idx}]");
                if e.ins.len() != n {
                    return Err(Error::Input(format!("{here}: m{n} entry has {} inputs", e.ins.len())));
                }
                if e.out >= m.dim() || e.ins.iter().any(|&i| i >= m.dim()) {
                    return Err(Error::Input(format!("{here}: atom index out of range")));
                }
                let din: i64 = e.ins.iter().map(|&i| m.atom(i).degree).sum();
                if m.atom(e.out).degree != din + n as i64 - 2 {
                    return Err(Error::Input(format!("{here}: invariant violated: m{n} has degree {}", n as i64 - 2)));
                }
                let win: u32 = e.ins.iter().map(|&i| m.atom(i).weight).sum();
                if m.atom(e.out).weight < win {
                    return Err(Error::Input(format!("{here}: invariant violated: m{n} lowers filtration weight")));
                }
                if n == 0 && m.atom(e.out).weight < 1 {
                    return Err(Error::Input(format!("{here}: invariant violated: m0 has filtration weight at least 1")));
                }
            }
        }
        // m₁ − d raises filtration weight
        let m1 = self.table(1);
        for j in 0..m.dim() {
            let diff = m1.get(&vec![j]).cloned().unwrap_or_default().minus(m.d(j));
            let kept = diff.keys().copied().find(|&i| m.atom(i).weight == m.atom(j).weight);
            if let Some(i) = kept {
                return Err(Error::Input(format!(
                    "invariant violated: m1 - d keeps the weight of {} -> {}",
                    m.atom(j).id,
                    m.atom(i).id
                )));
            }
        }
        Ok(())
    }

    pub fn table(&self, n: usize) -> OpTable {
        let mut t: OpTable = BTreeMap::new();
        for e in self.ops.get(&n).into_iter().flatten() {
            t.entry(e.ins.clone()).or_default().add_term(e.out, e.coeff.clone());
        }
        t.retain(|_, v| !v.is_zero());
        t
    }

    pub fn max_arity(&self) -> usize {
        self.ops.keys().copied().max().unwrap_or(0)
    }
}

/// `m_k ∘_{p+1} m_q` on basis inputs, with the Koszul sign of moving
/// `m_q` past the first `p` inputs.
fn eval_term(a: &CurvedAInftyAlgebra, tables: &BTreeMap<usize, OpTable>, t: &RelationTerm, ins: &[usize]) -> LinComb<usize> {
    let (Some(mk), Some(mq)) = (tables.get(&t.k), tables.get(&t.q)) else { return LinComb::new() };
    let p = t.position - 1;
    let inner = mq.get(&ins[p..p + t.q].to_vec()).cloned().unwrap_or_default();
    let passed: i64 = ins[..p].iter().map(|&i| a.module.atom(i).degree).sum();
    let s = crate::filtcomplex::lincomb::sign_q((t.q as i64 - 2) * passed);
    let mut out = LinComb::new();
    for (y, c) in inner.iter() {
        let mut args = ins[..p].to_vec();
        args.push(*y);
        args.extend_from_slice(&ins[p + t.q..]);
        if let Some(v) = mk.get(&args) {
            out.add_scaled(v, &(c * &s));
        }
    }
    out.scaled(&q(t.sign))
}

#[derive(Clone, Debug, Serialize)]
pub struct AInftyResidual {
    pub n: usize,
    pub inputs: Vec<String>,
    pub weight: u32,
    pub residual: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AInftyReport {
    pub n_max: usize,
    pub max_filtration: u32,
    pub tuples: usize,
    pub residuals: Vec<AInftyResidual>,
}

impl AInftyReport {
    pub fn passed(&self) -> bool {
        self.residuals.is_empty()
    }

    pub fn first_failing_arity(&self) -> Option<usize> {
        self.residuals.iter().map(|r| r.n).min()
    }
}

fn tuples(dim: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|t| (0..dim).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

/// Evaluates every relation of arity `≤ n_max` on all basis tuples; the
/// residual is split by output weight and only weights `≤ p` count.
pub fn check_ainfty(a: &CurvedAInftyAlgebra, n_max: usize, p: u32) -> Result<AInftyReport> {
    if a.max_arity() > n_max + 1 {
        return Err(Error::Input(format!("operations up to arity {} exceed n_max + 1 = {}", a.max_arity(), n_max + 1)));
    }
    let tables: BTreeMap<usize, OpTable> = (0..=n_max + 1).map(|n| (n, a.table(n))).collect();
    let m = &a.module;
    let mut residuals = Vec::new();
    let mut count = 0;
    for n in 0..=n_max {
        let rel = ainfty_relations(n);
        let ts = tuples(m.dim(), n);
        count += ts.len();
        let found = par::map(&ts, |ins| {
            let mut r = LinComb::new();
            for t in &rel {
                r.add_assign(&eval_term(a, &tables, t, ins));
            }
            let mut by_weight: BTreeMap<u32, Vec<String>> = BTreeMap::new();
            for (i, c) in r.iter() {
                let w = m.atom(*i).weight;
                if w <= p {
                    by_weight.entry(w).or_default().push(format!("{}{}", crate::filtcomplex::lincomb::fmt_signed(c), m.atom(*i).id));
                }
            }
            by_weight
                .into_iter()
                .map(|(weight, parts)| AInftyResidual {
                    n,
                    inputs: ins.iter().map(|&i| m.atom(i).id.clone()).collect(),
                    weight,
                    residual: parts.join(" "),
                })
                .collect::<Vec<_>>()
        });
        residuals.extend(found.into_iter().flatten());
    }
    Ok(AInftyReport { n_max, max_filtration: p, tuples: count, residuals })
}

fn entry(out: usize, ins: &[usize], c: i64) -> OpEntry {
    OpEntry { out, ins: ins.to_vec(), coeff: q(c) }
}

/// The dual numbers `k[x]/(x²)` in degree 0 with only `m₂`.
pub fn strict_associative_instance() -> CurvedAInftyAlgebra {
    let module = FGModule::new(vec![BasisAtom::new("1", 0, 0), BasisAtom::new("x", 0, 0)], Window::weight(3)).unwrap();
    let m2 = vec![entry(0, &[0, 0], 1), entry(1, &[0, 1], 1), entry(1, &[1, 0], 1)];
    CurvedAInftyAlgebra::new(module, BTreeMap::from([(2, m2)])).unwrap()
}

/// `u` of degree 0 and weight 0, `w` of degree −2 and weight 1, with
/// `m₀ = w`, `d = 0` and the commutative unital product `u·u = u`,
/// `u·w = w·u = w`, `w·w = 0`.
pub fn curved_two_dim_instance() -> CurvedAInftyAlgebra {
    let module = FGModule::new(vec![BasisAtom::new("u", 0, 0), BasisAtom::new("w", -2, 1)], Window::weight(3)).unwrap();
    let m2 = vec![entry(0, &[0, 0], 1), entry(1, &[0, 1], 1), entry(1, &[1, 0], 1)];
    CurvedAInftyAlgebra::new(module, BTreeMap::from([(0, vec![entry(1, &[], 1)]), (2, m2)])).unwrap()
}

/// Renders an operation entry as `c·out <- (ins)`.
pub fn render_entry(a: &CurvedAInftyAlgebra, e: &OpEntry) -> String {
    let ins: Vec<&str> = e.ins.iter().map(|&i| a.module.atom(i).id.as_str()).collect();
    format!("{}{} <- ({})", fmt_q(&e.coeff), a.module.atom(e.out).id, ins.join(", "))
}
