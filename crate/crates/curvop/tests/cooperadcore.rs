use curvop::cooperadcore::*;
use curvop::operadcore::{free_operad_basis, GeneratorSet, TreeComb};
use curvop::planartree::{compose_full, Dec, Tree};
use curvop::{q, LinComb};
use proptest::prelude::*;

fn node(g: Dec, ch: Vec<Tree>) -> Tree {
    Tree::Node(g, ch)
}

const L: Tree = Tree::Leaf;

/// a(2, odd), b(2, even), c(0, odd, weight 1), d(1, odd, weight 1).
fn mixed() -> TreeCooperad {
    let mut g = GeneratorSet::new();
    g.push("a", 2, 1, 0);
    g.push("b", 2, 0, 0);
    g.push("c", 0, -1, 1);
    g.push("d", 1, 1, 1);
    TreeCooperad::new(g)
}

fn sample_trees(c: &TreeCooperad, max_vertices: usize) -> Vec<Tree> {
    (0..=2).flat_map(|n| free_operad_basis(&c.gens, n, max_vertices)).collect()
}

#[test]
fn delta_of_small_trees() {
    let c = mixed();
    assert_eq!(c.delta(&L), LinComb::basis((L, vec![L])));
    let corolla = Tree::corolla(0, 2);
    let d = c.delta(&corolla);
    assert_eq!(d.len(), 2);
    assert_eq!(d.coeff(&(L, vec![corolla.clone()])), q(1));
    assert_eq!(d.coeff(&(corolla.clone(), vec![L, L])), q(1));
    // a(a(-, -), -): trivial upper, root only, whole tree
    let t = node(0, vec![corolla.clone(), L]);
    let d = c.delta(&t);
    assert_eq!(d.len(), 3);
    assert_eq!(d.coeff(&(corolla.clone(), vec![corolla.clone(), L])), q(1));
}

#[test]
fn delta_sign_passes_odd_vertices() {
    let c = mixed();
    // a(c, a): splitting off the upper a leaves (c, a) below it, the c
    // preceding the lower a in preorder already
    let t = node(0, vec![Tree::corolla(2, 0), Tree::corolla(0, 2)]);
    let up = node(0, vec![Tree::corolla(2, 0), L]);
    assert_eq!(c.delta(&t).coeff(&(up, vec![Tree::corolla(0, 2)])), q(1));
    // a(a, -) with upper a(-, -) and lowers (a, |): the upper root moves
    // in front of nothing
    let t = node(0, vec![Tree::corolla(0, 2), L]);
    assert_eq!(c.delta(&t).coeff(&(Tree::corolla(0, 2), vec![Tree::corolla(0, 2), L])), q(1));
}

#[test]
fn counit_and_coassociativity() {
    let c = mixed();
    for t in sample_trees(&c, 4) {
        let (l, r) = counit_sides(&c, &t);
        assert_eq!(l, LinComb::basis(t.clone()));
        assert_eq!(r, LinComb::basis(t.clone()));
        assert!(coassociativity_defect(&c, &t).is_zero(), "{}", c.render(&t));
    }
}

#[test]
fn coideal_weight_of_trivial_tree() {
    let c = mixed();
    assert_eq!(c.tree_weight(&L), 0);
    assert_eq!(c.coideal().tree_weight(&L), 1);
    assert_eq!(c.coideal().tree_weight(&Tree::corolla(2, 0)), 1);
}

fn projection(t: &Tree) -> LinComb<Dec> {
    if t.weight() == 1 {
        LinComb::basis(t.root().unwrap())
    } else {
        LinComb::new()
    }
}

#[test]
fn identity_extends_to_identity() {
    let c = mixed();
    let phi = extend_to_cooperad_map(&c, &c, projection, 4, 10).unwrap();
    for t in sample_trees(&c, 4) {
        assert_eq!(phi.apply(&t), LinComb::basis(t.clone()));
        assert_eq!(phi.component(&t, t.weight()), LinComb::basis(t.clone()));
        let total = |b: &Tree| phi.apply(b);
        assert!(cooperad_map_defect(&c, &c, &total, &t, 4, 10).is_zero());
    }
}

#[test]
fn rescaling_extends_multiplicatively() {
    let c = mixed();
    let phi = extend_to_cooperad_map(&c, &c, |t: &Tree| projection(t).scaled(&q(2)), 4, 10).unwrap();
    for t in sample_trees(&c, 4) {
        let k = q(1 << t.weight());
        assert_eq!(phi.apply(&t), LinComb::term(t.clone(), k));
    }
}

/// Target with an extra arity-3 cogenerator `e` hit by the two-vertex
/// trees `a(a, -)` and `a(-, a)`.
fn with_ternary() -> (TreeCooperad, Dec) {
    let mut c = mixed();
    let e = c.gens.push("e", 3, 2, 0);
    (c, e)
}

#[test]
fn nonlinear_projection_extends_to_a_cooperad_map() {
    let (c, e) = with_ternary();
    let src = mixed();
    let left = node(0, vec![Tree::corolla(0, 2), L]);
    let right = node(0, vec![L, Tree::corolla(0, 2)]);
    let phi_fn = move |t: &Tree| {
        if *t == left {
            LinComb::basis(e)
        } else if *t == right {
            LinComb::term(e, q(-3))
        } else {
            projection(t)
        }
    };
    let phi = extend_to_cooperad_map(&src, &c, phi_fn, 5, 10).unwrap();
    let total = |b: &Tree| phi.apply(b);
    let mut hit = false;
    for t in sample_trees(&src, 4) {
        assert!(cooperad_map_defect(&src, &c, &total, &t, 5, 10).is_zero(), "{}", src.render(&t));
        hit |= phi.apply(&t).keys().any(|x| x.decorations().contains(&e));
    }
    assert!(hit);
}

#[test]
fn perturbing_the_second_component_is_detected() {
    let c = mixed();
    let phi = extend_to_cooperad_map(&c, &c, projection, 4, 10).unwrap();
    let bad = node(0, vec![Tree::corolla(0, 2), L]);
    let total = |b: &Tree| {
        let mut v = phi.apply(b);
        if *b == bad {
            v.add_term(node(0, vec![L, Tree::corolla(0, 2)]), q(1));
        }
        v
    };
    assert!(!cooperad_map_defect(&c, &c, &total, &bad, 4, 10).is_zero());
    let three = node(0, vec![bad.clone(), L]);
    assert!(!cooperad_map_defect(&c, &c, &total, &three, 4, 10).is_zero());
}

#[test]
fn coaugmentation_must_not_hit_weight_zero() {
    let c = mixed();
    let r = extend_to_cooperad_map(&c, &c, |t: &Tree| if t.is_leaf() { LinComb::basis(0) } else { projection(t) }, 3, 3);
    assert!(r.is_err());
    // weight 1 is allowed; the trivial tree then maps to d + |
    let phi = extend_to_cooperad_map(&c, &c, |t: &Tree| if t.is_leaf() { LinComb::basis(3) } else { projection(t) }, 3, 3).unwrap();
    assert_eq!(phi.component(&L, 1), LinComb::basis(Tree::corolla(3, 1)));
}

/// `sμ` of degree 1 and `sθ` of degree −1 in arity 1.
fn bar_gens() -> (TreeCooperad, Dec, Dec) {
    let mut g = GeneratorSet::new();
    let m = g.push("sμ", 2, 1, 0);
    let t = g.push("sθ", 1, -1, 1);
    (TreeCooperad::new(g), m, t)
}

#[test]
fn curvature_coderivation_on_a_corolla() {
    let (c, m, th) = bar_gens();
    let d0 = extend_coderivation(
        &c,
        -1,
        move |tau: &Tree| if tau.is_leaf() { LinComb::term(th, q(-1)) } else { LinComb::new() },
        0,
        5,
    );
    let mu = Tree::corolla(m, 2);
    let theta = Tree::corolla(th, 1);
    let got = d0.apply_tree(&mu);
    let mut want = LinComb::new();
    want.add_term(node(th, vec![mu.clone()]), q(-1));
    want.add_term(node(m, vec![theta.clone(), L]), q(1));
    want.add_term(node(m, vec![L, theta]), q(1));
    assert_eq!(got, want);
    assert_eq!(d0.apply_tree(&L), LinComb::term(Tree::corolla(th, 1), q(-1)));
}

/// `mixed` plus g(1, −1, weight 1), h(3, 1) and k(3, −1).
fn with_targets() -> TreeCooperad {
    let mut c = mixed();
    c.gens.push("g", 1, -1, 1);
    c.gens.push("h", 3, 1, 0);
    c.gens.push("k", 3, -1, 0);
    c
}

fn test_coderivation(c: &TreeCooperad) -> Coderivation<'_> {
    // odd, nonzero on the trivial tree and on two-vertex trees
    extend_coderivation(
        c,
        -1,
        |tau: &Tree| match tau {
            Tree::Leaf => LinComb::term(4, q(2)),
            Tree::Node(0, ch) if ch[0] == Tree::corolla(0, 2) && ch[1].is_leaf() => LinComb::basis(5),
            Tree::Node(0, ch) if ch[0].is_leaf() && ch[1] == Tree::corolla(0, 2) => LinComb::term(5, q(-3)),
            Tree::Node(0, ch) if ch[0].is_leaf() && ch[1] == Tree::corolla(2, 0) => LinComb::term(4, q(-1)),
            Tree::Node(1, ch) if ch[0] == Tree::corolla(1, 2) && ch[1].is_leaf() => LinComb::term(6, q(5)),
            _ => LinComb::new(),
        },
        2,
        4,
    )
}

#[test]
fn coderivation_law_holds() {
    let c = with_targets();
    let d = test_coderivation(&c);
    let deg = c.deg();
    for t in sample_trees(&c, 3) {
        for (x, _) in d.apply_tree(&t).iter() {
            assert_eq!(x.degree(&deg), t.degree(&deg) - 1);
            assert_eq!(x.arity(), t.arity());
        }
    }
    for t in sample_trees(&c, 3) {
        let r = d.law_defect(&t);
        assert!(r.is_zero(), "{} -> {:?}", c.render(&t), r);
    }
}

#[test]
fn coderivation_projects_to_its_image() {
    let c = with_targets();
    let d = test_coderivation(&c);
    let t = node(0, vec![Tree::corolla(0, 2), L]);
    assert_eq!(c.project(&d.apply_tree(&t)), LinComb::basis(5));
}

#[test]
fn filtered_kernel_corrects_and_obstructs() {
    // a ↦ e, b ↦ e with a of weight 0, b and e of weight 1
    let kw = |k: &u8| if *k == 0 { 1 } else { 0 };
    let images = vec![LinComb::basis(0u8), LinComb::basis(0u8)];
    let ker = filtered_kernel(&[0, 1], &images, &kw, 1);
    assert_eq!(ker.len(), 1);
    let mut want = LinComb::basis(0usize);
    want.add_term(1, q(-1));
    assert_eq!(ker[0], want);
    assert_eq!(filtered_kernel(&[0, 1], &images, &kw, 0), vec![LinComb::basis(0usize)]);
    // without b the lift of a is obstructed in weight 1
    assert!(filtered_kernel(&[0], &images[..1], &kw, 0).is_empty());
    // a graded injective column contributes nothing
    let images = vec![LinComb::basis(7u8)];
    assert!(filtered_kernel(&[0], &images, &kw, 3).is_empty());
}

/// The associative cooperad as the subcooperad of the cofree one on an
/// odd binary cogenerator cut out by the associator; nothing is curved, so
/// `I` itself is a relation.
#[test]
fn associator_kernel_is_one_dimensional() {
    let mut g = GeneratorSet::new();
    let m = g.push("sμ", 2, 1, 0);
    let c = TreeCooperad::new(g);
    let mu = Tree::corolla(m, 2);
    let mut assoc: TreeComb = LinComb::basis(node(m, vec![mu.clone(), L]));
    assoc.add_term(node(m, vec![L, mu.clone()]), q(-1));
    let rel = [assoc, LinComb::basis(L)];
    for n in 2..=5 {
        let k = subcooperad_kernel(&c, &rel, n, n - 1, 0);
        assert_eq!(k.cells.len(), 1);
        let cell = &k.cells[0];
        assert_eq!(cell.degree, n as i64 - 1);
        assert_eq!(cell.vectors.len(), 1, "arity {n}");
        assert!(!k.inconclusive);
        // every binary tree appears
        assert_eq!(cell.vectors[0].vector.len(), cell.columns);
    }
    // too few vertices to see the whole cell
    let k = subcooperad_kernel(&c, &rel, 4, 2, 0);
    assert!(k.inconclusive);
    assert_eq!(k.dim(), 0);
}

#[test]
fn lead_weight_basis_orders_by_lowest_weight() {
    let c = mixed();
    let low = Tree::corolla(0, 2);
    let high = node(0, vec![Tree::corolla(2, 0), L]);
    let mut v = LinComb::basis(low.clone());
    v.add_term(high.clone(), q(2));
    let b = lead_weight_basis(&c, &[v.clone(), LinComb::basis(high)]);
    assert_eq!(b.len(), 2);
    assert_eq!(b[0].lead_weight, 0);
    assert_eq!(b[0].vector, LinComb::basis(low));
    assert_eq!(b[1].lead_weight, 1);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delta_terms_recompose(seed in 0usize..1000) {
        let c = mixed();
        let trees = sample_trees(&c, 4);
        let t = &trees[seed % trees.len()];
        let deg = c.deg();
        for ((u, ls), k) in c.delta(t).iter() {
            let (back, s) = compose_full(u, ls, &deg).unwrap();
            prop_assert_eq!(&back, t);
            prop_assert_eq!(q(s), k.clone());
        }
    }
}
