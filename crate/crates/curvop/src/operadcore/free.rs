use super::CurvedOperad;
use crate::filtcomplex::lincomb::sign_q;
use crate::planartree::{enumerate_trees, enumerate_trees_weighted, graft_signed, substitute_vertex, Dec, Tree};
use crate::{Error, LinComb, Result};
use std::collections::BTreeMap;

/// A combination of decorated planar trees.
pub type TreeComb = LinComb<Tree>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub arity: usize,
    pub degree: i64,
    pub weight: u32,
}

/// Generators indexed by [`Dec`], with an optional formal curvature `ϑ`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeneratorSet {
    gens: Vec<Generator>,
    theta: Option<Dec>,
}

impl GeneratorSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, arity: usize, degree: i64, weight: u32) -> Dec {
        self.gens.push(Generator { name: name.into(), arity, degree, weight });
        (self.gens.len() - 1) as Dec
    }

    /// Adds `ϑ` (arity 1, degree −2, weight 1) unless already present.
    pub fn with_theta(&mut self) -> Dec {
        if let Some(t) = self.theta {
            return t;
        }
        let t = self.push("ϑ", 1, -2, 1);
        self.theta = Some(t);
        t
    }

    pub fn theta(&self) -> Option<Dec> {
        self.theta
    }

    pub fn get(&self, g: Dec) -> &Generator {
        &self.gens[g as usize]
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = Dec> {
        0..self.gens.len() as Dec
    }

    pub fn by_name(&self, name: &str) -> Option<Dec> {
        self.gens.iter().position(|g| g.name == name).map(|i| i as Dec)
    }

    pub fn degree_of(&self, g: Dec) -> i64 {
        self.gens[g as usize].degree
    }

    pub fn arity_table(&self) -> Vec<(Dec, usize)> {
        self.gens.iter().enumerate().map(|(i, g)| (i as Dec, g.arity)).collect()
    }

    pub fn tree_degree(&self, t: &Tree) -> i64 {
        t.decorations().into_iter().map(|g| self.degree_of(g)).sum()
    }

    /// Filtration weight: the sum of the generator weights.
    pub fn tree_weight(&self, t: &Tree) -> u32 {
        t.decorations().into_iter().map(|g| self.get(g).weight).sum()
    }

    pub fn render(&self, t: &Tree) -> String {
        t.render(&|g| self.get(g).name.clone())
    }

    pub fn render_comb(&self, x: &TreeComb) -> String {
        if x.is_zero() {
            return "0".into();
        }
        let parts: Vec<String> =
            x.iter().map(|(t, c)| format!("{}{}", crate::filtcomplex::lincomb::fmt_signed(c), self.render(t))).collect();
        parts.join(" ")
    }

    /// Checks that every vertex has the arity of its decoration.
    pub fn check_tree(&self, t: &Tree) -> Result<()> {
        if let Tree::Node(g, ch) = t {
            let gen = self
                .gens
                .get(*g as usize)
                .ok_or_else(|| Error::Input(format!("unknown generator {g}")))?;
            if gen.arity != ch.len() {
                return Err(Error::Input(format!("{} has arity {}, vertex has {} children", gen.name, gen.arity, ch.len())));
            }
            for c in ch {
                self.check_tree(c)?;
            }
        }
        Ok(())
    }
}

/// All trees over `gens` of the given arity with at most `max_vertices`
/// vertices.
pub fn free_operad_basis(gens: &GeneratorSet, arity: usize, max_vertices: usize) -> Vec<Tree> {
    enumerate_trees(&gens.arity_table(), arity, max_vertices)
}

/// As [`free_operad_basis`], keeping trees of weight at most `max_weight`.
pub fn free_operad_basis_weighted(gens: &GeneratorSet, arity: usize, max_vertices: usize, max_weight: u32) -> Vec<Tree> {
    let table: Vec<(Dec, usize, u32)> = gens.ids().map(|g| (g, gens.get(g).arity, gens.get(g).weight)).collect();
    enumerate_trees_weighted(&table, arity, max_vertices, max_weight)
}

/// Signed `x ∘_i y` in the free operad. Terms of `x` with fewer than `i`
/// leaves are skipped.
pub fn graft_comb(gens: &GeneratorSet, x: &TreeComb, i: usize, y: &TreeComb) -> TreeComb {
    let deg = |g: Dec| gens.degree_of(g);
    let mut out = LinComb::new();
    for (t, ct) in x.iter() {
        if i == 0 || i > t.arity() {
            continue;
        }
        for (s, cs) in y.iter() {
            let (g, sign) = graft_signed(t, i, s, &deg).expect("position checked");
            out.add_term(g, ct * cs * crate::q(sign));
        }
    }
    out
}

/// A derivation of the free operad, determined by its values on generators.
#[derive(Clone, Debug)]
pub struct Derivation {
    pub degree: i64,
    images: BTreeMap<Dec, TreeComb>,
}

/// The unique derivation of degree `degree` extending `images`; missing
/// generators map to zero.
pub fn extend_derivation(gens: &GeneratorSet, degree: i64, images: BTreeMap<Dec, TreeComb>) -> Result<Derivation> {
    for (g, img) in &images {
        let gen = gens.get(*g);
        for t in img.keys() {
            gens.check_tree(t)?;
            if t.arity() != gen.arity {
                return Err(Error::Input(format!("image of {} has arity {}", gen.name, t.arity())));
            }
            let d = gens.tree_degree(t) - gen.degree;
            if d != degree {
                return Err(Error::Input(format!(
                    "image of {} shifts degree by {d}, derivation degree is {degree}",
                    gen.name
                )));
            }
        }
    }
    Ok(Derivation { degree, images })
}

impl Derivation {
    pub fn zero(degree: i64) -> Self {
        Derivation { degree, images: BTreeMap::new() }
    }

    pub fn image(&self, g: Dec) -> Option<&TreeComb> {
        self.images.get(&g)
    }

    /// Leibniz expansion: each vertex in turn replaced by its image, with
    /// `(−1)^{|D| · degree of the vertices before it}`.
    pub fn apply_tree(&self, gens: &GeneratorSet, t: &Tree) -> TreeComb {
        let deg = |g: Dec| gens.degree_of(g);
        let decs = t.decorations();
        let mut out = LinComb::new();
        let mut before = 0i64;
        for p in t.positions() {
            if p.is_leaf {
                continue;
            }
            let g = decs[p.start];
            if let Some(img) = self.images.get(&g) {
                let outer = sign_q(self.degree * before);
                for (s, c) in img.iter() {
                    let (r, sign) = substitute_vertex(t, &p.path, s, &deg).expect("arity checked");
                    out.add_term(r, c * &outer * crate::q(sign));
                }
            }
            before += deg(g);
        }
        out
    }

    pub fn apply(&self, gens: &GeneratorSet, x: &TreeComb) -> TreeComb {
        x.map_linear(|t| self.apply_tree(gens, t))
    }
}

/// A free operad with a derivation and a chosen curvature, truncated at
/// filtration `max_filtration`. No relations are imposed.
#[derive(Clone, Debug)]
pub struct FreeOperad {
    pub gens: GeneratorSet,
    pub d: Derivation,
    pub theta: TreeComb,
    pub max_filtration: u32,
}

impl FreeOperad {
    pub fn truncate(&self, x: TreeComb) -> TreeComb {
        let p = self.max_filtration;
        x.filter(|t| self.gens.tree_weight(t) <= p)
    }
}

impl CurvedOperad for FreeOperad {
    type B = Tree;

    fn arity(&self, b: &Tree) -> usize {
        b.arity()
    }
    fn degree(&self, b: &Tree) -> i64 {
        self.gens.tree_degree(b)
    }
    fn weight(&self, b: &Tree) -> u32 {
        self.gens.tree_weight(b)
    }
    fn max_filtration(&self) -> u32 {
        self.max_filtration
    }
    fn basis(&self, arity: usize, size: usize) -> Vec<Tree> {
        let p = self.max_filtration;
        free_operad_basis_weighted(&self.gens, arity, size, p)
    }
    fn compose(&self, a: &Tree, i: usize, b: &Tree) -> TreeComb {
        self.truncate(graft_comb(&self.gens, &LinComb::basis(a.clone()), i, &LinComb::basis(b.clone())))
    }
    fn d(&self, b: &Tree) -> TreeComb {
        self.truncate(self.d.apply_tree(&self.gens, b))
    }
    fn curvature(&self) -> TreeComb {
        self.theta.clone()
    }
    fn render(&self, b: &Tree) -> String {
        self.gens.render(b)
    }
    fn unit(&self) -> Option<Tree> {
        Some(Tree::Leaf)
    }
}

/// The free curved operad on `(E, d_E)`: trees in `E ⊔ ϑ` modulo the ideal
/// generated by `d²(x) − [ϑ, x]` for `x ∈ E`.
///
/// Normal forms keep every `ϑ` directly above a leaf or another `ϑ`; the
/// rewrite rule is `ϑ ∘₁ x → d_E²(x) + Σ_i x ∘_i ϑ`.
#[derive(Clone, Debug)]
pub struct FreeCurvedOperad {
    pub free: FreeOperad,
    /// `d_E²` on generators of `E`.
    square: BTreeMap<Dec, LinComb<Dec>>,
    pub max_arity: usize,
    pub max_weight: usize,
}

/// Builds the free curved operad. `d_e` lists `(to, from, c)` entries of a
/// degree −1, weight-preserving predifferential on the generators.
pub fn free_curved_operad(
    e: &GeneratorSet,
    d_e: &[(Dec, Dec, crate::Q)],
    max_arity: usize,
    max_weight: usize,
    p: u32,
) -> Result<FreeCurvedOperad> {
    let mut gens = e.clone();
    if gens.theta().is_some() {
        return Err(Error::Input("generator set already contains ϑ".into()));
    }
    let theta = gens.with_theta();
    let mut lin: BTreeMap<Dec, LinComb<Dec>> = BTreeMap::new();
    for (to, from, c) in d_e {
        let (gt, gf) = (e.get(*to), e.get(*from));
        if gt.arity != gf.arity || gt.degree != gf.degree - 1 {
            return Err(Error::Input(format!("d_E entry {} <- {} changes arity or is not of degree -1", gt.name, gf.name)));
        }
        if gt.weight < gf.weight {
            return Err(Error::Input(format!("d_E entry {} <- {} lowers the weight", gt.name, gf.name)));
        }
        lin.entry(*from).or_default().add_term(*to, c.clone());
    }
    let mut square = BTreeMap::new();
    for (g, img) in &lin {
        let sq = img.map_linear(|h| lin.get(h).cloned().unwrap_or_default());
        if !sq.is_zero() {
            square.insert(*g, sq);
        }
    }
    let images = lin
        .iter()
        .map(|(g, img)| (*g, img.map_keys(|h| Tree::corolla(*h, e.get(*h).arity))))
        .collect();
    let d = extend_derivation(&gens, -1, images)?;
    let free = FreeOperad { gens, d, theta: LinComb::basis(Tree::corolla(theta, 1)), max_filtration: p };
    Ok(FreeCurvedOperad { free, square, max_arity, max_weight })
}

impl FreeCurvedOperad {
    pub fn theta(&self) -> Dec {
        self.free.gens.theta().expect("constructed with ϑ")
    }

    pub fn is_normal(&self, t: &Tree) -> bool {
        match t {
            Tree::Leaf => true,
            Tree::Node(g, ch) => {
                if *g == self.theta() && !matches!(&ch[0], Tree::Leaf) && ch[0].root() != Some(self.theta()) {
                    return false;
                }
                ch.iter().all(|c| self.is_normal(c))
            }
        }
    }

    /// Rewrites to normal form, truncated at the filtration window.
    pub fn normal_form(&self, x: &TreeComb) -> TreeComb {
        let mut done = LinComb::new();
        let mut todo = self.free.truncate(x.clone());
        while !todo.is_zero() {
            let mut next = LinComb::new();
            for (t, c) in todo.iter() {
                match self.rewrite_once(t) {
                    None => done.add_term(t.clone(), c.clone()),
                    Some(r) => next.add_scaled(&r, c),
                }
            }
            todo = self.free.truncate(next);
        }
        done
    }

    /// One application of the rewrite rule at the first redex in preorder.
    fn rewrite_once(&self, t: &Tree) -> Option<TreeComb> {
        let th = self.theta();
        let gens = &self.free.gens;
        for p in t.positions() {
            if p.is_leaf {
                continue;
            }
            let Tree::Node(g, ch) = t.subtree(&p.path) else { unreachable!() };
            if *g != th {
                continue;
            }
            let Tree::Node(x, xch) = &ch[0] else { continue };
            if *x == th {
                continue;
            }
            let mut out = LinComb::new();
            if let Some(sq) = self.square.get(x) {
                for (y, c) in sq.iter() {
                    out.add_term(t.replace_at(&p.path, Tree::Node(*y, xch.clone())), c.clone());
                }
            }
            // ϑ is even, so pushing it below x costs no sign
            for i in 0..xch.len() {
                let mut nch = xch.clone();
                nch[i] = Tree::Node(th, vec![nch[i].clone()]);
                out.add_term(t.replace_at(&p.path, Tree::Node(*x, nch)), crate::q(1));
            }
            debug_assert!(out.keys().all(|r| gens.tree_weight(r) >= gens.tree_weight(t)));
            return Some(out);
        }
        None
    }
}

impl CurvedOperad for FreeCurvedOperad {
    type B = Tree;

    fn arity(&self, b: &Tree) -> usize {
        b.arity()
    }
    fn degree(&self, b: &Tree) -> i64 {
        self.free.degree(b)
    }
    fn weight(&self, b: &Tree) -> u32 {
        self.free.weight(b)
    }
    fn max_filtration(&self) -> u32 {
        self.free.max_filtration
    }
    fn basis(&self, arity: usize, size: usize) -> Vec<Tree> {
        self.free.basis(arity, size).into_iter().filter(|t| self.is_normal(t)).collect()
    }
    fn compose(&self, a: &Tree, i: usize, b: &Tree) -> TreeComb {
        self.normal_form(&self.free.compose(a, i, b))
    }
    fn d(&self, b: &Tree) -> TreeComb {
        self.normal_form(&self.free.d(b))
    }
    fn curvature(&self) -> TreeComb {
        self.free.theta.clone()
    }
    fn render(&self, b: &Tree) -> String {
        self.free.render(b)
    }
    fn unit(&self) -> Option<Tree> {
        Some(Tree::Leaf)
    }
}

/// Generators, relations, predifferential and curvature of a presented
/// curved operad, all as trees over the generators.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub gens: GeneratorSet,
    pub relations: Vec<TreeComb>,
    pub d: Derivation,
    pub curvature: TreeComb,
}

/// Evaluates a tree in `op` given the images of its decorations, grafting
/// children left to right.
pub fn evaluate_tree<O: CurvedOperad>(op: &O, images: &BTreeMap<Dec, LinComb<O::B>>, t: &Tree) -> Option<LinComb<O::B>> {
    match t {
        Tree::Leaf => None,
        Tree::Node(g, ch) => {
            let mut acc = images.get(g).cloned().unwrap_or_default();
            let mut offset = 0;
            for c in ch {
                match evaluate_tree(op, images, c) {
                    None => offset += 1,
                    Some(v) => {
                        acc = super::partial(op, &acc, offset + 1, &v);
                        offset += c.arity();
                    }
                }
            }
            Some(acc)
        }
    }
}

/// Evaluates a combination of non-trivial trees; the trivial tree maps to
/// `unit` when given.
pub fn evaluate<O: CurvedOperad>(
    op: &O,
    images: &BTreeMap<Dec, LinComb<O::B>>,
    unit: Option<&LinComb<O::B>>,
    x: &TreeComb,
) -> Result<LinComb<O::B>> {
    let mut out = LinComb::new();
    for (t, c) in x.iter() {
        match evaluate_tree(op, images, t) {
            Some(v) => out.add_scaled(&v, c),
            None => match unit {
                Some(u) => out.add_scaled(u, c),
                None => return Err(Error::Input("cannot evaluate the trivial tree without a unit".into())),
            },
        }
    }
    Ok(out)
}
