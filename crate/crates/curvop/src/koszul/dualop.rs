//! Koszul dual operads of homogeneous quadratic curved and
//! constant-quadratic presentations, through the pairing on two-vertex
//! trees.

use crate::filtcomplex::echelon::{kernel, rank, same_span};
use crate::operadcore::{cas_presentation, GeneratorSet, Presentation, TreeComb};
use crate::planartree::{enumerate_trees_weighted, substitute_vertex, Dec, Tree};
use crate::{q, Error, LinComb, Result};
use num::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PresentationKind {
    /// `cT(E)/(R ⊔ (ϑ − θ))`; the trivial tree stands for `ϑ`.
    Curved,
    /// `T(E)/(R)` with `R ⊂ I ⊔ T(E)^(2)`.
    ConstantQuadratic,
}

/// A presentation whose relations live in `I ⊔ T(E)^(2)`. The trivial tree
/// is `ϑ·1` for curved presentations and the unit for constant-quadratic
/// ones, so the pairing `⟨ϑ1, 1⟩ = 1` reads as the identity on it.
#[derive(Clone, Debug)]
pub struct QuadraticPresentation {
    pub gens: GeneratorSet,
    pub relations: Vec<TreeComb>,
    pub kind: PresentationKind,
}

/// `E = (E₀ᵃ ⊔ E₀ᵇ) ⊔ E₁`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorSplit {
    pub zero_a: Vec<Dec>,
    pub zero_b: Vec<Dec>,
    pub one: Vec<Dec>,
}

impl QuadraticPresentation {
    /// The relations `R` together with `ϑ − θ`.
    pub fn from_curved(p: &Presentation) -> Self {
        let mut rels = p.relations.clone();
        rels.push(LinComb::basis(Tree::Leaf).minus(&p.curvature));
        QuadraticPresentation { gens: p.gens.clone(), relations: rels, kind: PresentationKind::Curved }
    }

    /// Relations not touching the trivial tree.
    pub fn homogeneous_relations(&self) -> Vec<TreeComb> {
        self.relations.iter().filter(|r| r.coeff(&Tree::Leaf).is_zero()).cloned().collect()
    }

    /// For a curved presentation: `θ`, read off the relation `ϑ − θ` once the
    /// relation space is reduced to have a single one meeting `ϑ`.
    pub fn curvature(&self) -> Option<TreeComb> {
        let with: Vec<&TreeComb> = self.relations.iter().filter(|r| !r.coeff(&Tree::Leaf).is_zero()).collect();
        let first = with.first()?;
        let c = first.coeff(&Tree::Leaf);
        Some(first.scaled(&(-q(1) / c)).filter(|t| !t.is_leaf()))
    }
}

/// The pairing sign on the two-vertex tree `a ∘_i b`: `(−1)^{(i−1)(ar(b)−1)}`.
/// Upper vertices of arity 0 sit at their own input, so the basis already
/// puts them as far left as their position allows.
pub fn pairing_sign(t: &Tree) -> i64 {
    match t {
        Tree::Leaf => 1,
        Tree::Node(_, ch) => {
            let (i, b) = ch.iter().enumerate().find(|(_, c)| !c.is_leaf()).map(|(i, c)| (i, c.arity())).unwrap_or((0, 1));
            if (i * (b + 1)) % 2 == 1 {
                -1
            } else {
                1
            }
        }
    }
}

fn two_vertex_trees(gens: &GeneratorSet, arity: usize) -> Vec<Tree> {
    let table: Vec<(Dec, usize, u32)> = gens.arity_table().into_iter().map(|(g, a)| (g, a, 0)).collect();
    enumerate_trees_weighted(&table, arity, 2, 0).into_iter().filter(|t| t.weight() == 2).collect()
}

/// `e ↦ e^∨` with `|e^∨| = ar(e) − 2 − |e|`, the shift of `s⁻¹S⁻¹ ⊗_H E*`.
pub fn dual_degree(arity: usize, degree: i64) -> i64 {
    arity as i64 - 2 - degree
}

#[derive(Clone, Debug, Serialize)]
pub struct DualCell {
    pub arity: usize,
    pub trees: usize,
    pub relations: usize,
    pub annihilator: usize,
}

#[derive(Clone, Debug)]
pub struct DualPresentation {
    pub presentation: QuadraticPresentation,
    /// The splitting of the dual generators for dualizing back.
    pub split: GeneratorSplit,
    pub cells: Vec<DualCell>,
}

fn check_split(p: &QuadraticPresentation, split: &GeneratorSplit) -> Result<()> {
    let all: BTreeSet<Dec> = split.zero_a.iter().chain(&split.zero_b).chain(&split.one).copied().collect();
    let n = split.zero_a.len() + split.zero_b.len() + split.one.len();
    if all.len() != n || all != p.gens.ids().collect() {
        return Err(Error::Input("the splitting must partition the generators".into()));
    }
    for &g in &split.one {
        if p.kind == PresentationKind::ConstantQuadratic {
            return Err(Error::Input(format!("constant-quadratic presentations have no E₁ generator, got {}", p.gens.get(g).name)));
        }
    }
    let inside = |t: &Tree, hot: &[Dec], cold: &[Dec]| {
        let ds = t.decorations();
        ds.iter().any(|d| hot.contains(d)) && ds.iter().all(|d| hot.contains(d) || cold.contains(d))
    };
    for r in &p.relations {
        if r.coeff(&Tree::Leaf).is_zero() {
            continue;
        }
        for t in r.keys().filter(|t| !t.is_leaf()) {
            let ok = match p.kind {
                PresentationKind::Curved => inside(t, &split.one, &split.zero_a),
                PresentationKind::ConstantQuadratic => inside(t, &split.zero_b, &split.zero_a),
            };
            if !ok {
                return Err(Error::Input(format!("the constant part of a relation contains {}, outside the inclusion", p.gens.render(t))));
            }
        }
    }
    Ok(())
}

/// `O^!`: generators `e^∨`, relations the annihilator of the relation space
/// under `⟨t^∨, t⟩ = pairing_sign(t)` and `⟨ϑ1, 1⟩ = 1`, arity by arity.
pub fn koszul_dual_operad(p: &QuadraticPresentation, split: &GeneratorSplit) -> Result<DualPresentation> {
    check_split(p, split)?;
    let mut gens = GeneratorSet::new();
    for g in p.gens.ids() {
        let e = p.gens.get(g);
        let weight = u32::from(split.zero_b.contains(&g));
        gens.push(format!("{}^", e.name), e.arity, dual_degree(e.arity, e.degree), weight);
    }
    let mut arities: BTreeSet<usize> = BTreeSet::new();
    for r in &p.relations {
        for t in r.keys() {
            if t.weight() > 2 {
                return Err(Error::Input(format!("relation term {} has more than two vertices", p.gens.render(t))));
            }
            arities.insert(t.arity());
        }
    }
    let mut relations = Vec::new();
    let mut cells = Vec::new();
    for m in arities {
        let mut basis = two_vertex_trees(&p.gens, m);
        if m == 1 {
            basis.insert(0, Tree::Leaf);
        }
        let rels: Vec<&TreeComb> = p.relations.iter().filter(|r| r.keys().next().map(Tree::arity) == Some(m)).collect();
        let images: Vec<LinComb<usize>> = basis
            .iter()
            .map(|t| {
                let s = q(pairing_sign(t));
                rels.iter().enumerate().map(|(j, r)| (j, r.coeff(t) * &s)).filter(|(_, c)| !c.is_zero()).collect()
            })
            .collect();
        if images.iter().all(|x| x.is_zero()) && !rels.is_empty() {
            return Err(Error::Input(format!("pairing degenerate in arity {m}")));
        }
        let ann = kernel(&images);
        cells.push(DualCell { arity: m, trees: basis.len(), relations: rels.len(), annihilator: ann.len() });
        relations.extend(ann.into_iter().map(|x| x.map_keys(|j| basis[*j].clone())));
    }
    let kind = match p.kind {
        PresentationKind::Curved => PresentationKind::ConstantQuadratic,
        PresentationKind::ConstantQuadratic => PresentationKind::Curved,
    };
    // E₁ and E₀ᵃ dualize to weight 0, E₀ᵇ to weight 1
    let split = match p.kind {
        PresentationKind::Curved => {
            let mut zero_b: Vec<Dec> = split.one.clone();
            zero_b.sort();
            GeneratorSplit { zero_a: split.zero_a.clone(), zero_b, one: Vec::new() }
        }
        PresentationKind::ConstantQuadratic => {
            GeneratorSplit { zero_a: split.zero_a.clone(), zero_b: Vec::new(), one: split.zero_b.clone() }
        }
    };
    Ok(DualPresentation { presentation: QuadraticPresentation { gens, relations, kind }, split, cells })
}

/// `E₁ = ⟨•⟩`, `E₀ᵃ = ⟨μ⟩`.
pub fn cas_split() -> GeneratorSplit {
    use crate::operadcore::{CAS_DOT, CAS_MU};
    GeneratorSplit { zero_a: vec![CAS_MU], zero_b: Vec::new(), one: vec![CAS_DOT] }
}

/// `cAs^!`: a unit `u` of degree 0, a product `μ`, associativity and the
/// two unit laws `μ(u, −) − |`, `μ(−, u) − |`.
pub fn cas_shriek() -> Result<DualPresentation> {
    koszul_dual_operad(&QuadraticPresentation::from_curved(&cas_presentation()), &cas_split())
}

/// The relations of unital associative algebras, on `μ = CAS_MU`, `u = CAS_DOT`.
pub fn unital_associative_relations() -> Vec<TreeComb> {
    use crate::operadcore::{CAS_DOT, CAS_MU};
    let mu = Tree::corolla(CAS_MU, 2);
    let u = Tree::corolla(CAS_DOT, 0);
    let leaf = LinComb::basis(Tree::Leaf);
    vec![
        LinComb::basis(Tree::Node(CAS_MU, vec![mu.clone(), Tree::Leaf])).minus(&LinComb::basis(Tree::Node(CAS_MU, vec![Tree::Leaf, mu]))),
        LinComb::basis(Tree::Node(CAS_MU, vec![u.clone(), Tree::Leaf])).minus(&leaf),
        LinComb::basis(Tree::Node(CAS_MU, vec![Tree::Leaf, u])).minus(&leaf),
    ]
}

/// One rewriting step of `μ(μ(a, b), c) → μ(a, μ(b, c))`, `μ(u, a) → a`,
/// `μ(a, u) → a`, leftmost outermost.
fn unital_step(t: &Tree, mu: Dec, u: Dec) -> Option<Tree> {
    let Tree::Node(g, ch) = t else { return None };
    if *g == mu {
        if ch[0].root() == Some(u) {
            return Some(ch[1].clone());
        }
        if ch[1].root() == Some(u) {
            return Some(ch[0].clone());
        }
        if let Tree::Node(h, inner) = &ch[0] {
            if *h == mu {
                return Some(Tree::Node(mu, vec![inner[0].clone(), Tree::Node(mu, vec![inner[1].clone(), ch[1].clone()])]));
            }
        }
    }
    for (i, c) in ch.iter().enumerate() {
        if let Some(r) = unital_step(c, mu, u) {
            let mut nch = ch.clone();
            nch[i] = r;
            return Some(Tree::Node(*g, nch));
        }
    }
    None
}

/// Normal form under unital associativity: `u` in arity 0, a right comb
/// otherwise.
pub fn unital_normal_form(t: &Tree, mu: Dec, u: Dec) -> Tree {
    let mut cur = t.clone();
    while let Some(next) = unital_step(&cur, mu, u) {
        cur = next;
    }
    cur
}

/// `T(E)/(relations)` in one arity, on trees with at most `max_vertices`
/// vertices: the number of trees, the rank of the ideal there and the
/// quotient dimension.
#[derive(Clone, Debug, Serialize)]
pub struct QuotientCell {
    pub arity: usize,
    pub trees: usize,
    pub ideal_rank: usize,
    pub dim: usize,
    /// Distinct normal forms, where a rewrite system is supplied.
    pub normal_forms: Option<usize>,
}

pub fn quotient_dimension(
    gens: &GeneratorSet,
    relations: &[TreeComb],
    arity: usize,
    max_vertices: usize,
    normal_form: Option<&dyn Fn(&Tree) -> Tree>,
) -> QuotientCell {
    let table: Vec<(Dec, usize, u32)> = gens.arity_table().into_iter().map(|(g, a)| (g, a, 0)).collect();
    let trees = enumerate_trees_weighted(&table, arity, max_vertices, 0);
    let hole = gens.len() as Dec;
    let by_arity: BTreeMap<usize, Vec<&TreeComb>> = relations.iter().fold(BTreeMap::new(), |mut m, r| {
        if let Some(t) = r.keys().next() {
            m.entry(t.arity()).or_insert_with(Vec::new).push(r);
        }
        m
    });
    let deg = |g: Dec| if g == hole { 0 } else { gens.degree_of(g) };
    let mut ideal: Vec<TreeComb> = Vec::new();
    for (&k, rels) in &by_arity {
        let mut ctx_gens = table.clone();
        ctx_gens.push((hole, k, 1));
        for c in enumerate_trees_weighted(&ctx_gens, arity, max_vertices.saturating_sub(1), 1) {
            let Some(pos) = c.positions().into_iter().find(|p| c.subtree(&p.path).root() == Some(hole)) else { continue };
            for r in rels {
                let mut x = LinComb::new();
                for (s, coeff) in r.iter() {
                    let (t, sg) = substitute_vertex(&c, &pos.path, s, &deg).expect("arity matches");
                    x.add_term(t, coeff * q(sg));
                }
                ideal.push(x);
            }
        }
    }
    let ideal_rank = rank(&ideal);
    let normal_forms = normal_form.map(|f| trees.iter().map(f).collect::<BTreeSet<_>>().len());
    QuotientCell { arity, trees: trees.len(), ideal_rank, dim: trees.len() - ideal_rank, normal_forms }
}

#[derive(Clone, Debug, Serialize)]
pub struct ShriekReport {
    pub cells: Vec<DualCell>,
    /// `(cAs^!)` relations span exactly the unital associative ones.
    pub unital_associative: bool,
    pub quotient: Vec<QuotientCell>,
    /// `(cAs^!)^!` relations span `R ⊔ (ϑ − θ)` of `cAs`.
    pub double_dual: bool,
    /// The curvature read off from the double dual.
    pub curvature: String,
}

impl ShriekReport {
    pub fn passed(&self) -> bool {
        self.unital_associative
            && self.double_dual
            && self.quotient.iter().all(|c| c.dim == 1 && c.normal_forms == Some(1))
    }
}

/// `cAs^!` checks through arity `max_arity`, quotients on trees with at
/// most `max_vertices` vertices.
pub fn check_cas_shriek(max_arity: usize, max_vertices: usize) -> Result<ShriekReport> {
    use crate::operadcore::{CAS_DOT, CAS_MU};
    let d = cas_shriek()?;
    let p = &d.presentation;
    let unital_associative = same_span(&p.relations, &unital_associative_relations());
    let nf = |t: &Tree| unital_normal_form(t, CAS_MU, CAS_DOT);
    let quotient =
        (0..=max_arity).map(|m| quotient_dimension(&p.gens, &p.relations, m, max_vertices, Some(&nf))).collect();
    let dd = koszul_dual_operad(p, &d.split)?;
    let original = QuadraticPresentation::from_curved(&cas_presentation());
    let double_dual = dd.presentation.kind == PresentationKind::Curved
        && same_span(&dd.presentation.relations, &original.relations)
        && dd.presentation.gens.ids().all(|g| {
            let (a, b) = (dd.presentation.gens.get(g), original.gens.get(g));
            a.arity == b.arity && a.degree == b.degree && a.weight == b.weight
        });
    let curvature = dd.presentation.curvature().map(|c| original.gens.render_comb(&c)).unwrap_or_default();
    Ok(ShriekReport { cells: d.cells, unital_associative, quotient, double_dual, curvature })
}
