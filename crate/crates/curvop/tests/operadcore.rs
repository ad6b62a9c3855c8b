use curvop::filtcomplex::*;
use curvop::operadcore::*;
use curvop::planartree::*;
use curvop::{q, LinComb};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn mu_only() -> GeneratorSet {
    let mut g = GeneratorSet::new();
    g.push("μ", 2, 0, 0);
    g
}

#[test]
fn free_basis_examples() {
    let e = mu_only();
    assert_eq!(free_operad_basis(&e, 3, 2).len(), 2);
    assert_eq!(free_operad_basis(&e, 1, 6), vec![Tree::Leaf]);
    let mut e2 = mu_only();
    e2.push("•", 0, -2, 1);
    let b = free_operad_basis(&e2, 0, 2);
    let names: Vec<String> = b.iter().map(|t| e2.render(t)).collect();
    assert_eq!(names, vec!["•".to_string()]);
    let b3: Vec<String> = free_operad_basis(&e2, 0, 3).iter().map(|t| e2.render(t)).collect();
    assert_eq!(b3, vec!["•", "μ(•, •)"]);
}

/// Free operad on a binary `m` of degree `dm`, a unary `c` of degree 0 and
/// an arity-0 `b` of degree −1, with zero differential.
fn small_free(dm: i64) -> FreeOperad {
    let mut g = GeneratorSet::new();
    g.push("m", 2, dm, 0);
    g.push("c", 1, 0, 0);
    g.push("b", 0, -1, 1);
    FreeOperad { gens: g, d: Derivation::zero(-1), theta: LinComb::new(), max_filtration: 10 }
}

#[test]
fn bracket_antisymmetry_cases() {
    let even = small_free(0);
    let x = LinComb::basis(Tree::corolla(0, 2));
    assert!(lie_bracket(&even, &x, &x).is_zero());
    let odd = small_free(1);
    let b = lie_bracket(&odd, &x, &x);
    assert_eq!(b, prelie(&odd, &x, &x).scaled(&q(2)));
    assert_eq!(b.len(), 2);
}

#[test]
fn theta_commutes_with_every_mu_n() {
    let c = cas(6, 0, 3);
    for n in 0..=6 {
        if n == 1 {
            continue;
        }
        let m = LinComb::basis(CasBasis::mu(n));
        assert!(lie_bracket(&c, &cas_theta(), &m).is_zero(), "n={n}");
    }
    let id = LinComb::basis(CasBasis::identity());
    assert!(lie_bracket(&c, &cas_theta(), &id).is_zero());
}

#[test]
fn cas_cell_dimensions() {
    let c = cas(4, 0, 3);
    let gr1: Vec<CasBasis> = c.basis(2, 0).into_iter().filter(|b| b.weight() == 1).collect();
    assert_eq!(gr1.len(), 3);
    assert!(gr1.iter().all(|b| b.degree() == -2 && b.slots() == 3));
    for m in 1..6 {
        assert_eq!(cas_cell(m, 0), vec![CasBasis::mu(m)]);
    }
    assert!(cas_cell(0, 0).is_empty());
    // C(m+k, k)
    assert_eq!(cas_cell(2, 3).len(), 10);
    assert_eq!(cas_cell(4, 3).len(), 35);
}

#[test]
fn cas_rewriting_is_confluent_at_weight_5() {
    let pres = cas_presentation();
    for a in 0..=5 {
        for t in free_operad_basis(&pres.gens, a, 5) {
            let (l, _) = cas_rewrite(&t, RewriteOrder::InnermostLeft);
            let (r, _) = cas_rewrite(&t, RewriteOrder::OutermostRight);
            assert_eq!(l, r, "{}", pres.gens.render(&t));
            assert_eq!(l, cas_word_tree(&cas_tree_word(&t)));
        }
    }
}

#[test]
fn word_composition_matches_tree_grafting() {
    let pres = cas_presentation();
    let c = cas(5, 0, 10);
    let trees: Vec<Tree> = (0..=3).flat_map(|a| free_operad_basis(&pres.gens, a, 3)).collect();
    for t in &trees {
        for s in &trees {
            for i in 1..=t.arity() {
                let g = graft(t, i, s).unwrap();
                let w = c.compose(&cas_tree_word(t), i, &cas_tree_word(s));
                assert_eq!(w, LinComb::basis(cas_tree_word(&g)));
            }
        }
    }
}

#[test]
fn cas_passes_curvature_check() {
    let r = curvature_check(&cas(5, 0, 3), 5, 0);
    assert!(r.passed(), "{:?}", r.residuals);
    assert!(r.checked > 100);
}

/// Associator of the pre-Lie product.
fn assoc<O: CurvedOperad>(op: &O, a: &LinComb<O::B>, b: &LinComb<O::B>, c: &LinComb<O::B>) -> LinComb<O::B> {
    prelie(op, &prelie(op, a, b), c).minus(&prelie(op, a, &prelie(op, b, c)))
}

fn arb_tree_of(op: &FreeOperad) -> impl Strategy<Value = Tree> {
    let pool: Vec<Tree> = (0..=3).flat_map(|a| op.basis(a, 3)).collect();
    proptest::sample::select(pool)
}

proptest! {
    #[test]
    fn prelie_identity(dm in 0i64..2, ia in 0usize..1000, ib in 0usize..1000, ic in 0usize..1000) {
        let op = small_free(dm);
        let pool: Vec<Tree> = (0..=3).flat_map(|a| op.basis(a, 3)).collect();
        let pick = |i: usize| pool[i % pool.len()].clone();
        let (a, b, c) = (pick(ia), pick(ib), pick(ic));
        let sbc = if (op.degree(&b) * op.degree(&c)) % 2 == 0 { q(1) } else { q(-1) };
        let (a, b, c) = (LinComb::basis(a), LinComb::basis(b), LinComb::basis(c));
        prop_assert_eq!(assoc(&op, &a, &b, &c), assoc(&op, &a, &c, &b).scaled(&sbc));
    }

    #[test]
    fn derivation_commutes_with_partial_composition(s in arb_tree_of(&odd_derivation_operad()), t in arb_tree_of(&odd_derivation_operad()), i in 1usize..4) {
        let op = odd_derivation_operad();
        prop_assume!(i <= s.arity());
        let (sc, tc) = (LinComb::basis(s.clone()), LinComb::basis(t.clone()));
        let lhs = op.d.apply(&op.gens, &graft_comb(&op.gens, &sc, i, &tc));
        let sign = if (op.d.degree * op.degree(&s)) % 2 == 0 { q(1) } else { q(-1) };
        let mut rhs = graft_comb(&op.gens, &op.d.apply(&op.gens, &sc), i, &tc);
        rhs.add_scaled(&graft_comb(&op.gens, &sc, i, &op.d.apply(&op.gens, &tc)), &sign);
        prop_assert_eq!(lhs, rhs);
    }
}

/// Generators of mixed parity with an odd derivation mixing them.
fn odd_derivation_operad() -> FreeOperad {
    let mut g = GeneratorSet::new();
    let m = g.push("m", 2, 1, 0);
    let n = g.push("n", 2, 0, 0);
    let b = g.push("b", 0, -1, 1);
    let c = g.push("c", 1, -1, 0);
    let mut images = BTreeMap::new();
    let mut dm = LinComb::basis(Tree::corolla(n, 2));
    dm.add_term(Tree::Node(m, vec![Tree::corolla(c, 1), Tree::Leaf]), q(3));
    images.insert(m, dm);
    images.insert(n, LinComb::term(Tree::Node(c, vec![Tree::corolla(n, 2)]), q(-1)));
    images.insert(b, LinComb::term(Tree::Node(n, vec![Tree::corolla(b, 0), Tree::corolla(b, 0)]), q(2)));
    images.insert(c, LinComb::basis(Tree::Node(c, vec![Tree::corolla(c, 1)])));
    let d = extend_derivation(&g, -1, images).unwrap();
    FreeOperad { gens: g, d, theta: LinComb::new(), max_filtration: 20 }
}

#[test]
fn derivation_examples() {
    let op = small_free(1);
    let zero = extend_derivation(&op.gens, 0, BTreeMap::new()).unwrap();
    let t = Tree::Node(0, vec![Tree::corolla(1, 1), Tree::corolla(2, 0)]);
    assert!(zero.apply_tree(&op.gens, &t).is_zero());
    let ids: BTreeMap<Dec, TreeComb> =
        op.gens.ids().map(|g| (g, LinComb::basis(Tree::corolla(g, op.gens.get(g).arity)))).collect();
    let count = extend_derivation(&op.gens, 0, ids).unwrap();
    for a in 0..3 {
        for t in free_operad_basis(&op.gens, a, 4) {
            assert_eq!(count.apply_tree(&op.gens, &t), LinComb::term(t.clone(), q(t.weight() as i64)));
        }
    }
    let mut bad = BTreeMap::new();
    bad.insert(0, LinComb::basis(Tree::corolla(1, 1)));
    assert!(extend_derivation(&op.gens, 0, bad).is_err());
}

/// `E = {x, y, z}` binary with `d x = y`, `d y = z`, `z` of weight 1.
fn xyz() -> (GeneratorSet, Vec<(Dec, Dec, curvop::Q)>) {
    let mut e = GeneratorSet::new();
    let x = e.push("x", 2, 0, 0);
    let y = e.push("y", 2, -1, 0);
    let z = e.push("z", 2, -2, 1);
    (e, vec![(y, x, q(1)), (z, y, q(1))])
}

#[test]
fn free_curved_with_zero_differential() {
    let mut e = GeneratorSet::new();
    e.push("x", 2, 1, 0);
    let op = free_curved_operad(&e, &[], 3, 3, 3).unwrap();
    let th = op.theta();
    assert!(apply_d(&op, &op.curvature()).is_zero());
    let nf = op.basis(2, 2);
    assert!(nf.contains(&Tree::Node(0, vec![Tree::Node(th, vec![Tree::Leaf]), Tree::Leaf])));
    assert!(!nf.contains(&Tree::Node(th, vec![Tree::corolla(0, 2)])));
    // [ϑ, x] = 0 in the quotient
    let x = LinComb::basis(Tree::corolla(0, 2));
    assert!(lie_bracket(&op, &op.curvature(), &x).is_zero());
}

#[test]
fn d_squared_of_composite_is_bracket() {
    let (e, d) = xyz();
    let op = free_curved_operad(&e, &d, 3, 4, 3).unwrap();
    let xx = LinComb::basis(Tree::Node(0, vec![Tree::corolla(0, 2), Tree::Leaf]));
    let dd = apply_d(&op, &apply_d(&op, &xx));
    let z1 = Tree::Node(2, vec![Tree::corolla(0, 2), Tree::Leaf]);
    let z2 = Tree::Node(0, vec![Tree::corolla(2, 2), Tree::Leaf]);
    assert_eq!(dd, [(z1, q(1)), (z2, q(1))].into_iter().collect());
    let x = LinComb::basis(Tree::corolla(0, 2));
    let bx = lie_bracket(&op, &op.curvature(), &x);
    let expected = partial(&op, &bx, 1, &x).plus(&partial(&op, &x, 1, &bx));
    assert_eq!(dd, expected);
    assert_eq!(dd, lie_bracket(&op, &op.curvature(), &xx));
}

#[test]
fn free_curved_curvature_check_and_fault_injection() {
    let (e, d) = xyz();
    let op = free_curved_operad(&e, &d, 3, 4, 3).unwrap();
    let r = curvature_check(&op, 3, 4);
    assert!(r.passed(), "{:?}", r.residuals);
    let mut bad = op.clone();
    let mut images = BTreeMap::new();
    images.insert(0, LinComb::basis(Tree::corolla(1, 2)));
    images.insert(1, LinComb::term(Tree::corolla(2, 2), q(2)));
    bad.free.d = extend_derivation(&bad.free.gens, -1, images).unwrap();
    let r = curvature_check(&bad, 2, 1);
    assert!(!r.passed());
    assert!(r.residuals.iter().any(|x| x.element == "x(-, -)"));
}

#[test]
fn free_curved_rejects_weight_lowering_differential() {
    let mut e = GeneratorSet::new();
    let a = e.push("a", 1, 0, 1);
    let b = e.push("b", 1, -1, 0);
    assert!(free_curved_operad(&e, &[(b, a, q(1))], 2, 2, 2).is_err());
}

/// Morphisms out of the free curved operad on one binary `x` into `cAs`
/// are the assignments `x ↦ c·μ₂`.
#[test]
fn free_adjunction_shadow() {
    let mut e = GeneratorSet::new();
    e.push("x", 2, 0, 0);
    let free = free_curved_operad(&e, &[], 3, 3, 2).unwrap();
    let c = cas(3, 0, 2);
    let th = free.theta();
    let candidates: Vec<CasBasis> = c.basis(2, 0).into_iter().filter(|b| b.degree() == 0).collect();
    assert_eq!(candidates, vec![CasBasis::mu(2)]);
    let mut seen = Vec::new();
    for k in -2i64..=2 {
        let mut images = BTreeMap::new();
        images.insert(0, LinComb::term(CasBasis::mu(2), q(k)));
        images.insert(th, cas_theta());
        // the relation tree [ϑ, x] must map to zero for the map to descend
        let x = LinComb::basis(Tree::corolla(0, 2));
        let mut rel = LinComb::basis(Tree::Node(th, vec![Tree::corolla(0, 2)]));
        rel.add_scaled(&graft_comb(&free.free.gens, &x, 1, &LinComb::basis(Tree::corolla(th, 1))), &q(-1));
        rel.add_scaled(&graft_comb(&free.free.gens, &x, 2, &LinComb::basis(Tree::corolla(th, 1))), &q(-1));
        assert!(evaluate(&c, &images, None, &rel).unwrap().is_zero());
        for a in 0..=3 {
            for t in free.free.basis(a, 3) {
                if t.is_leaf() {
                    continue;
                }
                let direct = evaluate(&c, &images, None, &LinComb::basis(t.clone())).unwrap();
                let via_nf = evaluate(&c, &images, None, &free.normal_form(&LinComb::basis(t.clone()))).unwrap();
                assert_eq!(direct, via_nf, "{}", free.render(&t));
            }
        }
        let on_x = evaluate(&c, &images, None, &x).unwrap();
        assert!(!seen.contains(&on_x));
        seen.push(on_x);
    }
}

#[test]
fn end_operad_with_zero_differential() {
    let a = FGModule::new(vec![BasisAtom::new("a", 0, 0), BasisAtom::new("b", 1, 1)], Window::weight(2)).unwrap();
    let end = end_operad(&a, 2);
    assert!(end.curvature().is_zero());
    for n in 0..=2 {
        for b in end.basis(n, 0) {
            assert!(end.d(&b).is_zero());
        }
    }
}

#[test]
fn end_of_z0_has_shift_curvature() {
    let a = make_standard_complex(StdKind::Z0, 0, 0, 2).unwrap();
    let end = end_operad(&a, 1);
    let th = end.curvature();
    for (b, c) in th.iter() {
        assert_eq!(c, &q(1));
        let (o, i) = (a.atom(b.out), a.atom(b.ins[0]));
        assert_eq!(o.degree, i.degree - 2);
        assert_eq!(o.weight, i.weight + 1);
    }
    assert_eq!(th.len(), a.dim() - 2);
}

#[test]
fn end_of_z1_passes_curvature_check() {
    let a = make_standard_complex(StdKind::Z1, 0, 0, 2).unwrap();
    let end = end_operad(&a, 2);
    let r = curvature_check(&end, 2, 0);
    assert!(r.passed(), "{:?}", r.residuals.first());
    assert!(is_gr_dg(&end.component(2).unwrap()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn end_partial_squared_is_bracket(seed in proptest::collection::vec((0usize..400, -3i64..4), 1..6), n in 0usize..3) {
        let a = curved_module();
        let end = end_operad(&a, 3);
        let basis = end.basis(n, 0);
        let f: LinComb<EndBasis> = seed.iter().map(|&(i, c)| (basis[i % basis.len()].clone(), q(c))).collect();
        let dd = apply_d(&end, &apply_d(&end, &f));
        prop_assert_eq!(dd, lie_bracket(&end, &end.curvature(), &f));
    }
}

/// x(1,0) → y(0,0) → 2z(−1,1), u(0,1) → z.
fn curved_module() -> FGModule {
    let atoms =
        vec![BasisAtom::new("x", 1, 0), BasisAtom::new("y", 0, 0), BasisAtom::new("z", -1, 1), BasisAtom::new("u", 0, 1)];
    let mut m = FGModule::new(atoms, Window::weight(2)).unwrap();
    m.add_d(1, 0, q(1)).unwrap();
    m.add_d(2, 1, q(2)).unwrap();
    m.add_d(2, 3, q(1)).unwrap();
    m
}

fn el(out: usize, ins: &[usize], c: i64) -> LinComb<EndBasis> {
    LinComb::term(EndBasis { out, ins: ins.to_vec() }, q(c))
}

#[test]
fn uncurved_representation_passes() {
    let a = FGModule::new(vec![BasisAtom::new("e", 0, 0)], Window::weight(1)).unwrap();
    let mut asg = BTreeMap::new();
    asg.insert(CAS_MU, el(0, &[0, 0], 1));
    let r = check_representation(&cas_presentation(), &a, &asg).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn z1_with_zero_product_fails_curvature() {
    let a = make_standard_complex(StdKind::Z1, 0, 0, 2).unwrap();
    let r = check_representation(&cas_presentation(), &a, &BTreeMap::new()).unwrap();
    assert!(!r.passed());
    assert!(r.curvature.is_some());
    assert!(r.relations.is_empty() && r.differential.is_empty());
}

#[test]
fn representation_shape_errors() {
    let a = FGModule::new(vec![BasisAtom::new("e", 0, 0)], Window::weight(1)).unwrap();
    let mut asg = BTreeMap::new();
    asg.insert(CAS_MU, el(0, &[0], 1));
    assert!(check_representation(&cas_presentation(), &a, &asg).is_err());
}

/// Two atoms `e` (degree 0, weight 0) and `c` (degree −2, weight 1); `m₀ = c`.
fn two_dim() -> FGModule {
    FGModule::new(vec![BasisAtom::new("e", 0, 0), BasisAtom::new("c", -2, 1)], Window::weight(2)).unwrap()
}

#[test]
fn brute_force_two_dimensional_curved_algebra() {
    let a = two_dim();
    let pres = cas_presentation();
    let slots = [(0usize, [0usize, 0usize]), (1, [0, 1]), (1, [1, 0])];
    let mut found = Vec::new();
    for code in 0..27 {
        let cs = [code % 3, (code / 3) % 3, code / 9].map(|v| v as i64 - 1);
        let mut m2 = LinComb::new();
        for ((o, ins), c) in slots.iter().zip(cs) {
            m2.add_term(EndBasis { out: *o, ins: ins.to_vec() }, q(c));
        }
        let mut asg = BTreeMap::new();
        asg.insert(CAS_MU, m2);
        asg.insert(CAS_DOT, el(1, &[], 1));
        if check_representation(&pres, &a, &asg).unwrap().passed() {
            found.push(cs);
        }
    }
    assert!(found.contains(&[1, 1, 1]));
    assert!(found.contains(&[0, 0, 0]));
    assert!(found.iter().all(|cs| cs[1] == cs[2]));
}
