use curvop::barcobar::*;
use curvop::operadcore::*;
use curvop::planartree::*;
use curvop::{q, LinComb, Truncation};
use std::collections::BTreeMap;

#[test]
fn d0_on_the_trivial_tree_is_minus_s_theta() {
    let c = cas(4, 3, 2);
    let b = bar(&c, Truncation::new(2, 2, 2)).unwrap();
    let got = bar_on_trivial_tree(&b);
    let expected = minus_suspended_corollas(&b, &cas_theta());
    assert_eq!(got, expected);
    assert_eq!(got.len(), 2);
    assert!(!got.is_zero());
}

#[test]
fn bar_decoration_table_sizes() {
    let c = cas(8, 5, 3);
    let b = bar(&c, Truncation::new(4, 1, 3)).unwrap();
    let mut per_arity = BTreeMap::new();
    for d in &b.decorations {
        *per_arity.entry(d.arity()).or_insert(0usize) += 1;
    }
    // one vertex: no room for constants below the root
    let expected: BTreeMap<usize, usize> = [(0, 3), (1, 9), (2, 20), (3, 35), (4, 56)].into_iter().collect();
    assert_eq!(per_arity, expected);
    assert!(b.decorations.iter().all(|d| !d.is_identity()));
}

#[test]
fn bar_square_vanishes_bracket_by_bracket_small_window() {
    let c = cas(8, 8, 2);
    let b = bar(&c, Truncation::new(3, 3, 2)).unwrap();
    let r = check_bar_square(&b);
    assert!(r.trees > 100, "{}", r.trees);
    assert!(r.passed(), "{:?}", &r.residuals[..r.residuals.len().min(3)]);
}

/// Flipping the `γ_s` sign breaks `d₂² = 0`.
#[test]
fn bar_square_detects_a_wrong_composition_sign() {
    // an operad whose products differ from cAs by the sign (−1)^{number of marks}
    #[derive(Clone)]
    struct Twisted(Cas);
    impl CurvedOperad for Twisted {
        type B = CasBasis;
        fn arity(&self, b: &CasBasis) -> usize {
            b.arity()
        }
        fn degree(&self, b: &CasBasis) -> i64 {
            b.degree()
        }
        fn weight(&self, b: &CasBasis) -> u32 {
            b.weight()
        }
        fn max_filtration(&self) -> u32 {
            self.0.max_filtration
        }
        fn basis(&self, a: usize, s: usize) -> Vec<CasBasis> {
            self.0.basis(a, s)
        }
        fn compose(&self, a: &CasBasis, i: usize, b: &CasBasis) -> LinComb<CasBasis> {
            // mixes a non-associative sign into composition
            let s = if i == 1 && b.arity() == 2 { q(-1) } else { q(1) };
            self.0.compose(a, i, b).scaled(&s)
        }
        fn d(&self, _: &CasBasis) -> LinComb<CasBasis> {
            LinComb::new()
        }
        fn curvature(&self) -> LinComb<CasBasis> {
            cas_theta()
        }
        fn render(&self, b: &CasBasis) -> String {
            b.to_string()
        }
        fn unit(&self) -> Option<CasBasis> {
            Some(CasBasis::identity())
        }
    }
    let t = Twisted(cas(6, 6, 1));
    let b = bar(&t, Truncation::new(3, 3, 1)).unwrap();
    let r = check_bar_square(&b);
    assert!(!r.passed());
    assert!(r.bracket_failures[4] > 0);
}

/// `A = k[x]/(x^3)` as an operad concentrated in arity 1.
#[derive(Clone)]
struct Truncated {
    top: usize,
}

impl CurvedOperad for Truncated {
    type B = usize;
    fn arity(&self, _: &usize) -> usize {
        1
    }
    fn degree(&self, _: &usize) -> i64 {
        0
    }
    fn weight(&self, _: &usize) -> u32 {
        0
    }
    fn max_filtration(&self) -> u32 {
        0
    }
    fn basis(&self, a: usize, _: usize) -> Vec<usize> {
        if a == 1 {
            (0..self.top).collect()
        } else {
            Vec::new()
        }
    }
    fn compose(&self, a: &usize, _: usize, b: &usize) -> LinComb<usize> {
        if a + b < self.top {
            LinComb::basis(a + b)
        } else {
            LinComb::new()
        }
    }
    fn d(&self, _: &usize) -> LinComb<usize> {
        LinComb::new()
    }
    fn curvature(&self) -> LinComb<usize> {
        LinComb::new()
    }
    fn render(&self, b: &usize) -> String {
        format!("x{b}")
    }
    fn unit(&self) -> Option<usize> {
        Some(0)
    }
}

/// Reads a linear tree as the word of exponents, root first.
fn word_of<O: CurvedOperad<B = usize>>(b: &BarCooperad<'_, O>, t: &Tree) -> Vec<usize> {
    let mut out = Vec::new();
    let mut cur = t;
    while let Tree::Node(g, ch) = cur {
        out.push(*b.decoration(*g));
        cur = &ch[0];
    }
    out
}

/// `b'(a₁|…|aₙ) = Σ_i (−1)^i (a₁|…|a_i a_{i+1}|…|aₙ)`, coded directly.
fn classical_bar(w: &[usize], top: usize) -> LinComb<Vec<usize>> {
    let mut out = LinComb::new();
    for i in 0..w.len().saturating_sub(1) {
        let p = w[i] + w[i + 1];
        if p >= top {
            continue;
        }
        let mut v = w[..i].to_vec();
        v.push(p);
        v.extend_from_slice(&w[i + 2..]);
        out.add_term(v, if (i + 1) % 2 == 0 { q(1) } else { q(-1) });
    }
    out
}

#[test]
fn bar_of_an_algebra_is_the_classical_bar_complex() {
    let a = Truncated { top: 3 };
    let b = bar(&a, Truncation::new(1, 5, 0)).unwrap();
    let trees = b.basis(1);
    // words of length 0..=5 over {x, x²}
    assert_eq!(trees.len(), 1 + 2 + 4 + 8 + 16 + 32);
    let mut global = None;
    for t in &trees {
        let ours = b.d_beta().apply(&LinComb::basis(t.clone())).map_keys(|s| word_of(&b, s));
        let theirs = classical_bar(&word_of(&b, t), 3);
        if theirs.is_zero() {
            assert!(ours.is_zero());
            continue;
        }
        let s = if ours == theirs {
            1
        } else {
            assert_eq!(ours, theirs.neg(), "on {:?}", word_of(&b, t));
            -1
        };
        assert_eq!(*global.get_or_insert(s), s, "sign changes between words");
    }
    assert!(global.is_some());
}

// ---- cobar

#[test]
fn cobar_of_the_trivial_infinitesimal_cooperad() {
    use curvop::cooperadcore::TreeCooperad;
    let c = TreeCooperad::new(GeneratorSet::new()).coideal();
    let cob = cobar(&c, |a| if a == 1 { vec![Tree::Leaf] } else { vec![] }, None, 3, 2).unwrap();
    assert_eq!(cob.generators, vec![Tree::Leaf]);
    let g = cob.generator_tree(&Tree::Leaf).unwrap();
    let img = cob.d_omega(&LinComb::basis(g.clone()));
    // d(g) = ϑ alone would give d² = 0 ≠ [ϑ, g]; Δ(|) = (|; |) adds g∘₁g
    let mut want = LinComb::basis(Tree::corolla(cob.theta, 1));
    want.add_term(Tree::Node(cob.generator(&Tree::Leaf).unwrap(), vec![g]), q(1));
    assert_eq!(img, want);
    let r = check_cobar_square(&cob, 1, 3);
    assert!(r.passed() && r.theta_closed, "{:?}", r.residuals);
}

#[test]
fn cobar_of_cas_dual_squares_to_the_curvature_bracket() {
    use curvop::koszul::cas_dual;
    let d = cas_dual(2);
    let cob = cobar(&d, |a| d.basis(a), None, 6, 2).unwrap();
    let r = check_cobar_square(&cob, 4, 3);
    assert!(r.generators >= 5);
    assert!(r.passed(), "{:?}", &r.residuals[..r.residuals.len().min(3)]);
}

// ---- convolution

#[test]
fn convolution_curvature_is_closed_and_squares_match() {
    use rand::{Rng, SeedableRng};
    let d = curvop::koszul::cas_dual(2);
    let cob = cobar(&d, |a| d.basis(a), None, 6, 2).unwrap();
    let o = &cob.free;
    let conv = convolution(&d, o, (0..=3).collect(), None);
    let theta = conv.theta();
    assert_eq!(theta.degree, -2);
    assert!(theta.values.values().flat_map(|v| v.keys()).all(|t| o.weight(t) >= 1));
    assert!(conv.partial(&theta).is_zero());
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    let mut nonzero = 0;
    for _ in 0..20 {
        let deg: i64 = rng.gen_range(-1..=1);
        let mut f = ConvElement::zero(deg);
        for n in 0..=3usize {
            let trees: Vec<Tree> = o.basis(n, 3).into_iter().filter(|t| o.degree(t) == n as i64 - 1 + deg).collect();
            if trees.is_empty() || rng.gen_bool(0.3) {
                continue;
            }
            let mut v = LinComb::new();
            for _ in 0..rng.gen_range(1..=3) {
                let t = trees[rng.gen_range(0..trees.len())].clone();
                v.add_term(t, q(rng.gen_range(-3..=3)));
            }
            f.values.insert(n, v);
        }
        conv.check_homogeneous(&f).unwrap();
        let lhs = conv.partial(&conv.partial(&f));
        let rhs = conv.bracket(&theta, &f);
        if !rhs.is_zero() {
            nonzero += 1;
        }
        assert_eq!(lhs.values, rhs.values, "degree {deg}");
    }
    assert!(nonzero > 5);
}

// ---- twisting morphisms

#[test]
fn a_non_degree_minus_one_element_is_not_twisting() {
    let d = curvop::koszul::cas_dual(1);
    let o = cas(4, 4, 1);
    let conv = convolution(&d, &o, (0..=2).collect(), None);
    assert!(is_twisting_morphism(&conv, &ConvElement::zero(0)).is_err());
}

// ---- the counit

#[test]
fn counit_is_a_graded_quasi_isomorphism_small_window() {
    let o = cas(6, 3, 2);
    let r = counit_map(&o, Truncation::new(2, 3, 2), &cas_counit_interior(3)).unwrap();
    assert!(r.passed(), "{:?}", r.arities.iter().filter(|a| !a.passed()).collect::<Vec<_>>());
    assert!(r.curved_morphism);
    assert!(r.interior_cells() > 0);
    assert!(r.arities.iter().all(|a| a.strict_surjection && a.chain_map));
}

#[test]
fn counit_with_the_wrong_sign_is_not_a_chain_map() {
    let o = cas(6, 3, 2);
    let r = counit_map_signed(&o, Truncation::new(2, 3, 2), &cas_counit_interior(3), 1).unwrap();
    assert!(!r.passed());
}
