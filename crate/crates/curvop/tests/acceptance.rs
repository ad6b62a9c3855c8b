//! The acceptance sweep: one line per criterion, nonzero exit on any failure.

mod common;

use curvop::barcobar::*;
use curvop::cooperadcore::*;
use curvop::filtcomplex::*;
use curvop::koszul::*;
use curvop::operadcore::*;
use curvop::planartree::{Dec, Tree};
use curvop::{q, LinComb, Truncation};
use rand::SeedableRng;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

type Check = fn() -> Result<String, String>;

fn ok(cond: bool, detail: String) -> Result<String, String> {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_bar_square() -> Result<String, String> {
    let c = cas(12, 12, 3);
    let b = bar(&c, Truncation::new(4, 5, 3)).map_err(|e| e.to_string())?;
    let r = check_bar_square(&b);
    ok(r.passed(), format!("{} trees, residuals by bracket {:?}", r.trees, r.bracket_failures))
}

fn c2_cobar_square() -> Result<String, String> {
    let d = cas_dual(3);
    let cob = cobar(&d, |a| d.basis(a), None, 8, 3).map_err(|e| e.to_string())?;
    let r = check_cobar_square(&cob, 5, 4);
    ok(r.passed() && r.theta_closed, format!("{} generators, {} trees, {} residuals", r.generators, r.trees, r.residuals.len()))
}

fn c3_dual_identification() -> Result<String, String> {
    let mut bad = Vec::new();
    let mut cells = 0;
    for p in 0..=3 {
        for n in 0..=4 {
            if n == 0 && p == 0 {
                continue;
            }
            cells += 1;
            if !compare_with_kernel(n, p).passed() {
                bad.push(format!("kernel n={n} P={p}"));
            }
        }
    }
    for n in 0..=4 {
        let r = cas_dual_decomposition(n, 3);
        if !r.passed() {
            bad.push(format!("decomposition n={n}"));
        }
    }
    ok(bad.is_empty(), format!("{cells} kernel cells, decomposition n<=4 at P=3; failures {bad:?}"))
}

fn c4_pbw() -> Result<String, String> {
    let r = cas_syzygy(Truncation::new(4, 5, 3)).map_err(|e| e.to_string())?;
    let ones = r.h0.pbw_table().iter().all(|(_, d)| *d == 1);
    ok(
        r.passed() && ones,
        format!(
            "H0 dims {:?}, spanned by the dual generators {:?}, {} interior higher cells, {} nonzero",
            r.h0.pbw_table().iter().map(|x| x.1).collect::<Vec<_>>(),
            r.matches_dual.iter().all(|x| *x),
            r.higher.interior_cells(),
            r.higher.higher_failures().len()
        ),
    )
}

fn c5_kappa() -> Result<String, String> {
    let d = cas_dual(3);
    let o = cas(8, 8, 3);
    let conv = convolution(&d, &o, (0..=5).collect(), None);
    let mut k = ConvElement::zero(-1);
    k.values.insert(2usize, LinComb::basis(CasBasis::mu(2)));
    k.values.insert(0usize, LinComb::basis(CasBasis::marked(1, &[1])));
    let r = is_twisting_morphism(&conv, &k).map_err(|e| e.to_string())?;
    ok(r.passed(), format!("{} cells checked, {} nonzero", r.checked, r.failures.len()))
}

fn c6_relations() -> Result<String, String> {
    let r = compare_relations(6, 3, CURVATURE_SIGN).map_err(|e| e.to_string())?;
    let n1 = render_relation(&ainfty_relations(1));
    ok(
        r.passed(),
        format!(
            "n<=6, relative sign {:?}, mismatches {:?}, n=1: {n1} with m1∘1m1 = {}(m2∘1m0 - m2∘2m0)",
            r.relative_sign, r.mismatched_arities, r.curvature_sign.unwrap_or(0)
        ),
    )
}

fn c7_counit() -> Result<String, String> {
    let (a, w, p) = (2, 4, 2);
    let o = cas(a + w + 2, w, p);
    let r = counit_map(&o, Truncation::new(a, w, p), &cas_counit_interior(w)).map_err(|e| e.to_string())?;
    ok(r.passed(), format!("{} generators, {} interior cells, curved morphism {}", r.generators, r.interior_cells(), r.curved_morphism))
}

fn c8_model_shadow() -> Result<String, String> {
    let mut bad = Vec::new();
    for (q0, n) in [(0u32, 0i64), (1, 2), (2, -1)] {
        let z0 = make_standard_complex(StdKind::Z0, q0, n, q0 + 3).unwrap();
        if !gr_homology(&z0).unwrap().is_acyclic() {
            bad.push(format!("Z0 q={q0} n={n}"));
        }
        let z1 = make_standard_complex(StdKind::Z1, q0, n, q0 + 3).unwrap();
        if gr_homology(&z1).unwrap().support() != vec![(n, q0, 1)] {
            bad.push(format!("Z1 q={q0} n={n}"));
        }
        if !phi_map(q0, n, q0 + 3).unwrap().is_chain_map() {
            bad.push(format!("phi q={q0} n={n}"));
        }
        let cone = mapping_cone(&ModuleMap::identity(&z1)).unwrap();
        if !gr_homology(&cone).unwrap().is_acyclic() {
            bad.push(format!("cone q={q0} n={n}"));
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(50);
    let mut agree = 0;
    for _ in 0..50 {
        let (k, d) = common::fibration_verdicts(&common::random_map(&mut rng));
        agree += usize::from(k == d);
    }
    ok(bad.is_empty() && agree == 50, format!("standard complexes failures {bad:?}, fibration predicates agree on {agree}/50"))
}

fn c9_extension() -> Result<String, String> {
    let mut g = GeneratorSet::new();
    g.push("a", 2, 1, 0);
    g.push("b", 2, 0, 0);
    g.push("c", 0, -1, 1);
    let c = TreeCooperad::new(g);
    let proj = |t: &Tree| if t.weight() == 1 { LinComb::basis(t.root().unwrap()) } else { LinComb::<Dec>::new() };
    let phi = extend_to_cooperad_map(&c, &c, proj, 4, 10).map_err(|e| e.to_string())?;
    let trees: Vec<Tree> = (0..=2).flat_map(|n| free_operad_basis(&c.gens, n, 4)).collect();
    let identity = trees.iter().all(|t| phi.apply(t) == LinComb::basis(t.clone()));
    // perturb Φ₂ on a(a, −) and require the checker to notice
    let bad = Tree::Node(0, vec![Tree::corolla(0, 2), Tree::Leaf]);
    let total = |b: &Tree| {
        let mut v = phi.apply(b);
        if *b == bad {
            v.add_term(Tree::Node(0, vec![Tree::Leaf, Tree::corolla(0, 2)]), q(1));
        }
        v
    };
    let detected = !cooperad_map_defect(&c, &c, &total, &bad, 4, 10).is_zero();
    ok(identity && detected, format!("identity on {} trees {identity}, perturbation detected {detected}", trees.len()))
}

fn c10_dual_operad() -> Result<String, String> {
    let r = check_cas_shriek(4, 6).map_err(|e| e.to_string())?;
    ok(
        r.passed(),
        format!(
            "normal form dims {:?}, unital associative {}, double dual {} with curvature {}",
            r.quotient.iter().map(|c| c.dim).collect::<Vec<_>>(),
            r.unital_associative,
            r.double_dual,
            r.curvature
        ),
    )
}

fn main() {
    let criteria: [(&str, Check); 10] = [
        ("bar differential squares to zero, A=4 W=5 P=3", c1_bar_square),
        ("cobar square is the curvature bracket, P=3", c2_cobar_square),
        ("kernel equals closed-form dual, decomposition signs n<=4", c3_dual_identification),
        ("PBW table and higher syzygy vanishing, A=4 W=5 P=3", c4_pbw),
        ("kappa is a twisting morphism, arity<=5 P=3", c5_kappa),
        ("curved A-infinity relations from the cobar, n<=6", c6_relations),
        ("bar-cobar counit graded quasi-iso, A=2 W=4 P=2", c7_counit),
        ("model-structure shadow on standard complexes", c8_model_shadow),
        ("cooperad extension uniqueness", c9_extension),
        ("dual operad is unital associative", c10_dual_operad),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} ({secs:.1}s)", i + 1),
            Err(d) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {d} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
