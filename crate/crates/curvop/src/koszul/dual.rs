//! The Koszul dual cooperad `cAs^¡`: its generators `μ̂ₙᶜ` as explicit
//! elements of the cofree cooperad on `sμ ⊔ s•`, and the abstract
//! cooperad spanned by them.

use crate::cooperadcore::{subcooperad_kernel, ArityKernel, Cooperad, Decomp, TreeCooperad};
use crate::filtcomplex::echelon::same_span;
use crate::filtcomplex::lincomb::sign_q;
use crate::operadcore::{GeneratorSet, TreeComb};
use crate::planartree::{compose_full, enumerate_trees, two_level_splits_signed, Dec, Tree};
use crate::{q, LinComb, Q};
use num::Zero;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Cogenerators of the cofree cooperad on `sE`, `E = μ ⊔ •`.
pub const S_MU: Dec = 0;
pub const S_DOT: Dec = 1;

/// `F^c(sμ ⊔ s•)`: `sμ` binary of degree 1, `s•` a constant of degree −1
/// and weight 1.
pub fn cas_quadratic_cooperad() -> TreeCooperad {
    let mut g = GeneratorSet::new();
    g.push("sμ", 2, 1, 0);
    g.push("s•", 0, -1, 1);
    TreeCooperad::new(g)
}

/// `s²R ⊔ (1 − s²θ̃(1))` inside `I ⊕ F^c(sE)^(2)`: the suspended
/// associator, and the trivial tree identified with the suspended curvature.
pub fn cas_quadratic_relations() -> Vec<TreeComb> {
    let mu = Tree::corolla(S_MU, 2);
    let dot = Tree::corolla(S_DOT, 0);
    let mut assoc = LinComb::basis(Tree::Node(S_MU, vec![mu.clone(), Tree::Leaf]));
    assoc.add_term(Tree::Node(S_MU, vec![Tree::Leaf, mu]), q(-1));
    let mut unit = LinComb::basis(Tree::Leaf);
    unit.add_term(Tree::Node(S_MU, vec![Tree::Leaf, dot.clone()]), q(1));
    unit.add_term(Tree::Node(S_MU, vec![dot, Tree::Leaf]), q(-1));
    vec![assoc, unit]
}

/// Number of internal vertices of each left subtree, summed over vertices.
fn left_internal(t: &Tree) -> usize {
    match t {
        Tree::Leaf => 0,
        Tree::Node(_, ch) => ch[0].weight() + ch.iter().map(left_internal).sum::<usize>(),
    }
}

/// `μₘᶜ ∈ As^¡(m)`: every binary tree on `sμ`, signed by the parity of
/// the left-subtree sizes. The right comb has coefficient 1; `μ₁ᶜ = |`.
pub fn mu_c(m: usize) -> TreeComb {
    if m == 0 {
        return LinComb::new();
    }
    enumerate_trees(&[(S_MU, 2)], m, m - 1)
        .into_iter()
        .filter(|t| t.weight() == m - 1)
        .map(|t| {
            let s = sign_q(left_internal(&t) as i64);
            (t, s)
        })
        .collect()
}

/// `μ^S_N`: `μ_Nᶜ` with `s•` grafted at the 1-based leaves in `S`.
pub fn mu_s(n_slots: usize, s: &[usize]) -> TreeComb {
    let c = cas_quadratic_cooperad();
    let deg = c.deg();
    let lowers: Vec<Tree> =
        (1..=n_slots).map(|i| if s.contains(&i) { Tree::corolla(S_DOT, 0) } else { Tree::Leaf }).collect();
    let mut out = LinComb::new();
    for (t, k) in mu_c(n_slots).iter() {
        let (g, sg) = compose_full(t, &lowers, &deg).expect("arity matches");
        out.add_term(g, k * q(sg));
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// A truncation of `μ̂ₙᶜ = Σ_k Σ_{|S|=k} (−1)^{Σ s_j − k(n+k)} μ^S_{n+k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGenerator {
    pub n: usize,
    pub max_filtration: u32,
    pub degree: i64,
    pub expansion: TreeComb,
}

impl DualGenerator {
    /// The part with exactly `k` marks.
    pub fn weight_part(&self, k: u32) -> TreeComb {
        let c = cas_quadratic_cooperad();
        self.expansion.filter(|t| c.tree_weight(t) == k)
    }

    /// The term of lowest weight with coefficient 1: the right comb, or
    /// `s•` for `n = 0`.
    pub fn lead_tree(&self) -> Tree {
        lead_tree(self.n)
    }
}

pub fn lead_tree(n: usize) -> Tree {
    match n {
        0 => Tree::corolla(S_DOT, 0),
        1 => Tree::Leaf,
        _ => Tree::Node(S_MU, vec![Tree::Leaf, lead_tree(n - 1)]),
    }
}

/// `μ̂ₙᶜ` through weight `p`.
pub fn cas_dual_generators(n: usize, p: u32) -> DualGenerator {
    let mut expansion = LinComb::new();
    for k in 0..=p as usize {
        let slots = n + k;
        if slots == 0 {
            continue;
        }
        for s in subsets(slots, k) {
            let e = s.iter().sum::<usize>() as i64 - (k * slots) as i64;
            expansion.add_scaled(&mu_s(slots, &s), &sign_q(e));
        }
    }
    DualGenerator { n, max_filtration: p, degree: n as i64 - 1, expansion }
}

/// The kernel of the `cAs` quadratic data in one arity, at filtration `p`.
pub fn cas_dual_kernel(n: usize, p: u32) -> ArityKernel {
    let c = cas_quadratic_cooperad();
    // a tree with k marks has n + 2k − 1 vertices; room for k = p + 1
    let max_vertices = (n + 2 * p as usize + 1).max(1);
    subcooperad_kernel(&c, &cas_quadratic_relations(), n, max_vertices, p)
}

/// Kernel versus closed form in one arity.
#[derive(Clone, Debug, Serialize)]
pub struct KernelComparison {
    pub arity: usize,
    pub max_filtration: u32,
    pub kernel_dim: usize,
    /// Kernel vectors per lead weight `0..=p`.
    pub gr_dims: Vec<usize>,
    pub degree: Option<i64>,
    pub inconclusive: bool,
    pub same_span: bool,
}

impl KernelComparison {
    pub fn passed(&self) -> bool {
        !self.inconclusive && self.same_span && self.kernel_dim == 1
    }
}

pub fn compare_with_kernel(n: usize, p: u32) -> KernelComparison {
    let k = cas_dual_kernel(n, p);
    let g = cas_dual_generators(n, p);
    let vectors: Vec<TreeComb> = k.cells.iter().flat_map(|c| c.vectors.iter().map(|v| v.vector.clone())).collect();
    let nonempty: Vec<_> = k.cells.iter().filter(|c| !c.vectors.is_empty()).collect();
    let mut gr_dims = vec![0; p as usize + 1];
    for c in &nonempty {
        for (w, d) in c.gr_dims(p).into_iter().enumerate() {
            gr_dims[w] += d;
        }
    }
    KernelComparison {
        arity: n,
        max_filtration: p,
        kernel_dim: vectors.len(),
        gr_dims,
        degree: (nonempty.len() == 1).then(|| nonempty[0].degree),
        inconclusive: k.inconclusive,
        same_span: same_span(&vectors, &[g.expansion]),
    }
}

/// `cAs^¡` on the basis `μ̂ₙᶜ`, `n ≥ 0`, with
/// `Δ(μ̂ₙᶜ) = Σ (−1)^{Σ(i_j−1)(k−j)} (μ̂_kᶜ; μ̂_{i₁}ᶜ, …, μ̂_{i_k}ᶜ)`,
/// truncated at `max_filtration` copies of `μ̂₀ᶜ`. Without `curved` there
/// is no `μ̂₀ᶜ` and this is `As^¡`.
#[derive(Clone, Debug)]
pub struct CasDual {
    pub max_filtration: u32,
    pub curved: bool,
}

pub fn cas_dual(max_filtration: u32) -> CasDual {
    CasDual { max_filtration, curved: true }
}

pub fn as_dual() -> CasDual {
    CasDual { max_filtration: 0, curved: false }
}

/// The sign of `(μ̂_k; μ̂_{i₁}, …, μ̂_{i_k})` in `Δ(μ̂ₙ)`.
pub fn decomposition_sign(parts: &[usize]) -> i64 {
    let k = parts.len() as i64;
    let e: i64 = parts.iter().enumerate().map(|(j, &i)| (i as i64 - 1) * (k - j as i64 - 1)).sum();
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sequences of naturals summing to `n` with at most `zeros` zero
/// entries; the empty one only for `n = 0`.
fn compositions(n: usize, zeros: usize) -> Vec<Vec<usize>> {
    fn go(left: usize, zeros: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
        }
        if zeros > 0 {
            cur.push(0);
            go(left, zeros - 1, cur, out);
            cur.pop();
        }
        for i in 1..=left {
            cur.push(i);
            go(left - i, zeros, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, zeros, &mut Vec::new(), &mut out);
    out
}

impl CasDual {
    pub fn basis(&self, arity: usize) -> Vec<usize> {
        if arity == 0 && !self.curved {
            Vec::new()
        } else {
            vec![arity]
        }
    }

    /// The `(k; i₁, …, i_k)` decompositions of `μ̂ₙ` inside the window.
    pub fn decompositions(&self, n: usize) -> Vec<Vec<usize>> {
        let z = if self.curved { self.max_filtration as usize } else { 0 };
        compositions(n, z)
    }
}

impl Cooperad for CasDual {
    type B = usize;

    fn arity(&self, b: &usize) -> usize {
        *b
    }
    fn degree(&self, b: &usize) -> i64 {
        *b as i64 - 1
    }
    fn weight(&self, b: &usize) -> u32 {
        u32::from(*b == 0)
    }
    fn delta(&self, b: &usize) -> LinComb<Decomp<usize>> {
        self.decompositions(*b).into_iter().map(|parts| ((parts.len(), parts.clone()), q(decomposition_sign(&parts)))).collect()
    }
    fn counit(&self, b: &usize) -> Q {
        if *b == 1 {
            q(1)
        } else {
            Q::zero()
        }
    }
    fn coaugmentation(&self) -> usize {
        1
    }
    fn render(&self, b: &usize) -> String {
        format!("μ̂{b}")
    }
}

/// One `(k; i₁, …, i_k)` coefficient read off `Δ(μ̂ₙᶜ)`.
#[derive(Clone, Debug, Serialize)]
pub struct DecompositionTerm {
    pub upper: usize,
    pub lowers: Vec<usize>,
    pub coefficient: String,
    pub expected: i64,
    pub matches: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DecompositionReport {
    pub n: usize,
    pub max_filtration: u32,
    pub terms: Vec<DecompositionTerm>,
    /// `Δ(μ̂ₙᶜ)` minus the recombined dual-generator tensors is zero.
    pub closed: bool,
}

impl DecompositionReport {
    pub fn passed(&self) -> bool {
        self.closed && self.terms.iter().all(|t| t.matches)
    }

    pub fn coefficient(&self, upper: usize, lowers: &[usize]) -> Option<&str> {
        self.terms.iter().find(|t| t.upper == upper && t.lowers == lowers).map(|t| t.coefficient.as_str())
    }
}

type IntTensor = HashMap<Decomp<Tree>, i64>;

fn int_terms(x: &TreeComb) -> Vec<(Tree, i64)> {
    x.iter().map(|(t, k)| (t.clone(), k.to_integer().try_into().expect("integral expansion"))).collect()
}

/// Adds `k·(x; y₁, …, y_k)` over the expansions into `acc`, keeping total
/// weight ≤ p.
fn add_tensor_expansion(c: &TreeCooperad, gens: &BTreeMap<usize, Vec<(Tree, i64)>>, parts: &[usize], p: u32, k: i64, acc: &mut IntTensor) {
    fn go(
        c: &TreeCooperad,
        gens: &BTreeMap<usize, Vec<(Tree, i64)>>,
        parts: &[usize],
        p: u32,
        cur: (&Tree, &mut Vec<Tree>, u32, i64),
        acc: &mut IntTensor,
    ) {
        let (u, ls, w, k) = cur;
        let Some(&i) = parts.get(ls.len()) else {
            *acc.entry((u.clone(), ls.clone())).or_insert(0) += k;
            return;
        };
        for (t, kt) in &gens[&i] {
            let wt = w + c.tree_weight(t);
            if wt <= p {
                ls.push(t.clone());
                go(c, gens, parts, p, (u, ls, wt, k * kt), acc);
                ls.pop();
            }
        }
    }
    for (u, ku) in &gens[&parts.len()] {
        let w = c.tree_weight(u);
        if w <= p {
            go(c, gens, parts, p, (u, &mut Vec::new(), w, k * ku), acc);
        }
    }
}

/// Expands `Δ` of the truncated `μ̂ₙᶜ` in the cofree cooperad, reads the
/// coefficient of each `(μ̂_k; μ̂_{i₁}, …)` off its lead tensor, and checks
/// that those tensors recombine to all of `Δ(μ̂ₙᶜ)` through weight `p`.
pub fn cas_dual_decomposition(n: usize, p: u32) -> DecompositionReport {
    let c = cas_quadratic_cooperad();
    let deg = c.deg();
    let parts_list = cas_dual(p).decompositions(n);
    // each factor only needs the weight left over by the marks of the others
    let mut budget: BTreeMap<usize, u32> = BTreeMap::from([(n, p)]);
    for ps in &parts_list {
        let spare = p - ps.iter().filter(|i| **i == 0).count() as u32;
        for a in ps.iter().filter(|i| **i > 0).copied().chain([ps.len()]) {
            let b = budget.entry(a).or_insert(0);
            *b = (*b).max(spare);
        }
    }
    budget.entry(0).or_insert(p);
    let gens: BTreeMap<usize, Vec<(Tree, i64)>> =
        budget.into_iter().map(|(a, b)| (a, int_terms(&cas_dual_generators(a, b).expansion))).collect();
    let mut rest: IntTensor = HashMap::new();
    for (t, k) in &gens[&n] {
        for s in two_level_splits_signed(t, &deg) {
            *rest.entry((s.upper, s.lowers)).or_insert(0) += k * s.sign;
        }
    }
    let mut terms = Vec::new();
    let mut readings = Vec::new();
    for parts in &parts_list {
        let lead = (lead_tree(parts.len()), parts.iter().map(|&i| lead_tree(i)).collect::<Vec<_>>());
        readings.push(rest.get(&lead).copied().unwrap_or(0));
    }
    for (parts, x) in parts_list.into_iter().zip(readings) {
        if x != 0 {
            add_tensor_expansion(&c, &gens, &parts, p, -x, &mut rest);
        }
        let expected = decomposition_sign(&parts);
        terms.push(DecompositionTerm {
            upper: parts.len(),
            lowers: parts,
            coefficient: x.to_string(),
            expected,
            matches: x == expected,
        });
    }
    DecompositionReport { n, max_filtration: p, terms, closed: rest.values().all(|k| *k == 0) }
}
