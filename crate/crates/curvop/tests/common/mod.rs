//! Random filtered maps shared by the filtcomplex and acceptance suites.

use curvop::filtcomplex::*;
use curvop::q;
use rand::Rng;

/// A direct sum of one to three standard complexes truncated at `p`.
pub fn random_sum(rng: &mut impl Rng, p: u32, tag: &str) -> FGModule {
    let mut m = FGModule::zero();
    for i in 0..rng.gen_range(1..=3) {
        let kind = [StdKind::Z0, StdKind::Z1, StdKind::B1][rng.gen_range(0..3)];
        let c = make_standard_complex(kind, rng.gen_range(0..=p), rng.gen_range(-2..=2), p).unwrap();
        m = if i == 0 { c.relabel(tag) } else { m.direct_sum(&c.relabel(tag)) };
    }
    m
}

/// One test map: projections off a random summand, `φ`, zero maps onto
/// nonzero targets, or the non-strict surjection `Ẑ¹_{0} → Ẑ¹_{1}`.
pub fn random_map(rng: &mut impl Rng) -> ModuleMap {
    let p = rng.gen_range(1..=3);
    match rng.gen_range(0..6) {
        0..=2 => projection_first(&random_sum(rng, p, "y"), &random_sum(rng, p, "k")),
        3 => phi_map(rng.gen_range(0..p), rng.gen_range(-2..=2), p).unwrap(),
        4 => ModuleMap::zero_map(&random_sum(rng, p, "x"), &random_sum(rng, p, "y")),
        _ => {
            let n = rng.gen_range(-2..=2);
            let src = make_standard_complex(StdKind::Z1, 0, n, 0).unwrap();
            let mut tgt = make_standard_complex(StdKind::Z1, 1, n, 1).unwrap();
            tgt.window = Window::weight(1);
            let mut f = ModuleMap::new(src, tgt, 0);
            f.add_entry(0, 0, q(1)).unwrap();
            f
        }
    }
}

/// `(via kernel, strict surjection ∧ graded quasi-iso)` on one map.
pub fn fibration_verdicts(f: &ModuleMap) -> (bool, bool) {
    let direct = is_strict_surjection(f) && is_graded_quasi_iso(f).unwrap();
    (is_trivial_fibration_via_kernel(f).unwrap(), direct)
}
