//! The standard complexes `Ẑ⁰`, `Ẑ¹`, `B̂¹` and the map `φ : Ẑ¹ → B̂¹`.

use super::lincomb::q;
use super::module::{BasisAtom, FGModule, ModuleMap, Window};
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum StdKind {
    Z0,
    Z1,
    B1,
}

fn z_atoms(kind: StdKind, q0: u32, n: i64, p: u32) -> Vec<BasisAtom> {
    let tag = if kind == StdKind::Z0 { "Z0" } else { "Z1" };
    let mut out = Vec::new();
    let mut k = 0u32;
    loop {
        let w = match kind {
            StdKind::Z0 => q0 + k / 2,
            _ => q0 + k.div_ceil(2),
        };
        if w > p {
            break;
        }
        out.push(BasisAtom::new(format!("{tag}[q={q0},n={n}]/{k}"), n - k as i64, w));
        k += 1;
    }
    out
}

fn chain(atoms: Vec<BasisAtom>, p: u32, links: &[(usize, usize)]) -> Result<FGModule> {
    let mut m = FGModule::new(atoms, Window::weight(p))?;
    for &(to, from) in links {
        m.add_d(to, from, q(1))?;
    }
    Ok(m)
}

/// Truncation of a standard complex to atoms of weight `≤ p`.
///
/// `Ẑ⁰_{q,n}` has an atom in degree `n−k` of weight `q+⌊k/2⌋`, `Ẑ¹_{q,n}`
/// of weight `q+⌈k/2⌉`, consecutive atoms linked by `d = 1`.
/// `B̂¹_{q,n} = Ẑ⁰_{q,n+1} ⊔ Ẑ⁰_{q+1,n}`, with the atom ids of those two
/// complexes. `p < q` gives the empty module with the warning flag set.
pub fn make_standard_complex(kind: StdKind, q0: u32, n: i64, p: u32) -> Result<FGModule> {
    if p < q0 {
        let mut m = FGModule::zero();
        m.window = Window { max_weight: p, empty_warning: true, ..Default::default() };
        return Ok(m);
    }
    match kind {
        StdKind::Z0 | StdKind::Z1 => {
            let atoms = z_atoms(kind, q0, n, p);
            let links: Vec<(usize, usize)> = (1..atoms.len()).map(|k| (k, k - 1)).collect();
            chain(atoms, p, &links)
        }
        StdKind::B1 => {
            let a = make_standard_complex(StdKind::Z0, q0, n + 1, p)?;
            let b = make_standard_complex(StdKind::Z0, q0 + 1, n, p)?;
            let mut atoms: Vec<BasisAtom> = a.atoms().to_vec();
            atoms.extend(b.atoms().iter().cloned());
            let off = a.dim();
            let mut links: Vec<(usize, usize)> = (1..a.dim()).map(|k| (k, k - 1)).collect();
            links.extend((1..b.dim()).map(|k| (off + k, off + k - 1)));
            chain(atoms, p, &links)
        }
    }
}

/// `φ : Ẑ¹_{q,n} → B̂¹_{q,n}`, sending each source atom to the sum of the
/// two target atoms of the same degree.
pub fn phi_map(q0: u32, n: i64, p: u32) -> Result<ModuleMap> {
    let src = make_standard_complex(StdKind::Z1, q0, n, p)?;
    let tgt = make_standard_complex(StdKind::B1, q0, n, p)?;
    let mut f = ModuleMap::new(src.clone(), tgt.clone(), 0);
    for j in 0..src.dim() {
        let deg = src.atom(j).degree;
        for i in 0..tgt.dim() {
            if tgt.atom(i).degree == deg {
                f.add_entry(i, j, q(1))?;
            }
        }
    }
    Ok(f)
}
