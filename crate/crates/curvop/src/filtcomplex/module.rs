use super::echelon::{rank, Echelon};
use super::lincomb::{sign_q, LinComb, Q};
use crate::{Error, Result};
use num::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// A basis vector spanning a pure summand of degree `degree` and
/// filtration weight `weight`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisAtom {
    pub id: String,
    pub degree: i64,
    pub weight: u32,
}

impl BasisAtom {
    pub fn new(id: impl Into<String>, degree: i64, weight: u32) -> Self {
        BasisAtom { id: id.into(), degree, weight }
    }
}

/// The range a result is valid in.
#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Window {
    pub max_weight: u32,
    /// Degrees whose homology sees a truncated differential.
    pub unreliable_degrees: BTreeSet<i64>,
    /// Set when the constructor was asked for an empty window.
    pub empty_warning: bool,
}

impl Window {
    pub fn weight(max_weight: u32) -> Self {
        Window { max_weight, ..Default::default() }
    }
}

/// A finite-basis filtered graded module with a degree −1 predifferential.
///
/// `d[j]` is the image of atom `j` as a combination of atom indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FGModule {
    atoms: Vec<BasisAtom>,
    index: HashMap<String, usize>,
    d: Vec<LinComb<usize>>,
    pub window: Window,
}

impl FGModule {
    pub fn new(atoms: Vec<BasisAtom>, window: Window) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, a) in atoms.iter().enumerate() {
            if index.insert(a.id.clone(), i).is_some() {
                return Err(Error::Input(format!("duplicate atom id {}", a.id)));
            }
        }
        let d = vec![LinComb::new(); atoms.len()];
        Ok(FGModule { atoms, index, d, window })
    }

    pub fn zero() -> Self {
        FGModule::new(Vec::new(), Window::default()).unwrap()
    }

    pub fn atoms(&self) -> &[BasisAtom] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom(&self, i: usize) -> &BasisAtom {
        &self.atoms[i]
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn d(&self, j: usize) -> &LinComb<usize> {
        &self.d[j]
    }

    /// Sets `d(atom from) += c · atom to`, enforcing degree −1 and
    /// filtration preservation.
    pub fn add_d(&mut self, to: usize, from: usize, c: Q) -> Result<()> {
        let (a, b) = (&self.atoms[to], &self.atoms[from]);
        if a.degree != b.degree - 1 {
            return Err(Error::Input(format!(
                "predifferential entry {} <- {} does not lower degree by 1",
                a.id, b.id
            )));
        }
        if a.weight < b.weight {
            return Err(Error::Input(format!(
                "predifferential entry {} <- {} lowers filtration weight",
                a.id, b.id
            )));
        }
        self.d[from].add_term(to, c);
        Ok(())
    }

    pub fn apply_d(&self, v: &LinComb<usize>) -> LinComb<usize> {
        v.map_linear(|&j| self.d[j].clone())
    }

    /// Atom indices of a given degree and weight.
    pub fn cell(&self, degree: i64, weight: u32) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.atoms[i].degree == degree && self.atoms[i].weight == weight)
            .collect()
    }

    pub fn degrees(&self) -> BTreeSet<i64> {
        self.atoms.iter().map(|a| a.degree).collect()
    }

    pub fn weights(&self) -> BTreeSet<u32> {
        self.atoms.iter().map(|a| a.weight).collect()
    }

    /// `d` restricted to weight-preserving components.
    pub fn gr_d(&self, j: usize) -> LinComb<usize> {
        let w = self.atoms[j].weight;
        self.d[j].filter(|&i| self.atoms[i].weight == w)
    }

    /// Direct sum with id prefixes `a/` and `b/`.
    pub fn direct_sum(&self, other: &FGModule) -> FGModule {
        let mut atoms = Vec::new();
        for a in &self.atoms {
            atoms.push(BasisAtom::new(format!("a/{}", a.id), a.degree, a.weight));
        }
        for a in &other.atoms {
            atoms.push(BasisAtom::new(format!("b/{}", a.id), a.degree, a.weight));
        }
        let mut window = Window::weight(self.window.max_weight.min(other.window.max_weight));
        window.unreliable_degrees =
            self.window.unreliable_degrees.union(&other.window.unreliable_degrees).cloned().collect();
        let mut out = FGModule::new(atoms, window).unwrap();
        let off = self.dim();
        for j in 0..self.dim() {
            out.d[j] = self.d[j].clone();
        }
        for j in 0..other.dim() {
            out.d[off + j] = other.d[j].map_keys(|&i| i + off);
        }
        out
    }

    /// Renames every atom id with a prefix.
    pub fn relabel(&self, prefix: &str) -> FGModule {
        let atoms = self
            .atoms
            .iter()
            .map(|a| BasisAtom::new(format!("{prefix}{}", a.id), a.degree, a.weight))
            .collect();
        let mut out = FGModule::new(atoms, self.window.clone()).unwrap();
        out.d = self.d.clone();
        out
    }

    /// All entries `(to, from, coefficient)` of the predifferential.
    pub fn d_entries(&self) -> Vec<(usize, usize, Q)> {
        let mut out = Vec::new();
        for j in 0..self.dim() {
            for (i, c) in self.d[j].iter() {
                out.push((*i, j, c.clone()));
            }
        }
        out
    }
}

/// A filtration-preserving linear map of a fixed degree shift.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleMap {
    pub source: FGModule,
    pub target: FGModule,
    /// `entries[j]` is the image of source atom `j`.
    pub entries: Vec<LinComb<usize>>,
    pub shift: i64,
}

impl ModuleMap {
    pub fn new(source: FGModule, target: FGModule, shift: i64) -> Self {
        let n = source.dim();
        ModuleMap { source, target, entries: vec![LinComb::new(); n], shift }
    }

    pub fn add_entry(&mut self, to: usize, from: usize, c: Q) -> Result<()> {
        let (a, b) = (self.target.atom(to), self.source.atom(from));
        if a.degree != b.degree + self.shift {
            return Err(Error::Input(format!("map entry {} <- {} has the wrong degree", a.id, b.id)));
        }
        if a.weight < b.weight {
            return Err(Error::Input(format!("map entry {} <- {} lowers filtration weight", a.id, b.id)));
        }
        self.entries[from].add_term(to, c);
        Ok(())
    }

    pub fn identity(m: &FGModule) -> Self {
        let mut f = ModuleMap::new(m.clone(), m.clone(), 0);
        for j in 0..m.dim() {
            f.entries[j] = LinComb::basis(j);
        }
        f
    }

    pub fn zero_map(source: &FGModule, target: &FGModule) -> Self {
        ModuleMap::new(source.clone(), target.clone(), 0)
    }

    pub fn apply(&self, v: &LinComb<usize>) -> LinComb<usize> {
        v.map_linear(|&j| self.entries[j].clone())
    }

    /// `self ∘ first`.
    pub fn compose_after(&self, first: &ModuleMap) -> ModuleMap {
        let mut out = ModuleMap::new(first.source.clone(), self.target.clone(), self.shift + first.shift);
        for j in 0..first.source.dim() {
            out.entries[j] = self.apply(&first.entries[j]);
        }
        out
    }

    /// True when `d f = (−1)^shift f d`.
    pub fn is_chain_map(&self) -> bool {
        let s = sign_q(self.shift);
        (0..self.source.dim()).all(|j| {
            let a = self.target.apply_d(&self.entries[j]);
            let b = self.apply(self.source.d(j)).scaled(&s);
            a == b
        })
    }

    pub fn is_filtration_preserving(&self) -> bool {
        (0..self.source.dim()).all(|j| {
            let w = self.source.atom(j).weight;
            self.entries[j].keys().all(|&i| self.target.atom(i).weight >= w)
        })
    }

    /// The kernel as a module, when the map is a strict surjection: atoms
    /// are an echelon basis of the kernel, each tagged with its leading
    /// filtration weight.
    pub fn kernel_module(&self) -> Result<(FGModule, Vec<LinComb<usize>>)> {
        // order source atoms so that higher weight comes first in the elimination
        let mut order: Vec<usize> = (0..self.source.dim()).collect();
        order.sort_by_key(|&j| (std::cmp::Reverse(self.source.atom(j).weight), self.source.atom(j).degree, j));
        let mut basis: Vec<LinComb<usize>> = Vec::new();
        let mut e: Echelon<usize> = Echelon::new();
        for &j in &order {
            if let Some(z) = e.insert(&self.entries[j], LinComb::basis(j)) {
                basis.push(z);
            }
        }
        let atoms: Vec<BasisAtom> = basis
            .iter()
            .enumerate()
            .map(|(k, z)| {
                let j0 = *z.keys().next().unwrap();
                let deg = self.source.atom(j0).degree;
                let wt = z.keys().map(|&j| self.source.atom(j).weight).min().unwrap();
                BasisAtom::new(format!("ker{k}"), deg, wt)
            })
            .collect();
        let mut k = FGModule::new(atoms, self.source.window.clone())?;
        let mut ek: Echelon<usize> = Echelon::new();
        for (i, z) in basis.iter().enumerate() {
            ek.insert(z, LinComb::basis(i));
        }
        for (i, z) in basis.iter().enumerate() {
            let dz = self.source.apply_d(z);
            let c = ek
                .solve(&dz)
                .ok_or_else(|| Error::Contract("kernel is not closed under d; map is not a chain map".into()))?;
            for (t, v) in c.iter() {
                k.d[i].add_term(*t, v.clone());
            }
        }
        Ok((k, basis))
    }
}

/// One cell of a homology table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyCell {
    pub degree: i64,
    pub weight: u32,
    pub dim: usize,
    pub reliable: bool,
}

/// `H^gr` dimensions indexed by (degree, weight).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologyTable {
    pub cells: Vec<HomologyCell>,
}

impl HomologyTable {
    pub fn dim(&self, degree: i64, weight: u32) -> usize {
        self.cells
            .iter()
            .find(|c| c.degree == degree && c.weight == weight)
            .map(|c| c.dim)
            .unwrap_or(0)
    }

    /// Nonzero reliable cells.
    pub fn support(&self) -> Vec<(i64, u32, usize)> {
        self.cells
            .iter()
            .filter(|c| c.reliable && c.dim > 0)
            .map(|c| (c.degree, c.weight, c.dim))
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.support().is_empty()
    }
}

/// True iff `d²` raises filtration weight on every atom.
pub fn is_gr_dg(m: &FGModule) -> bool {
    (0..m.dim()).all(|j| {
        let w = m.atom(j).weight;
        let dd = m.apply_d(m.d(j));
        let ok = dd.keys().all(|&i| m.atom(i).weight > w);
        ok
    })
}

fn gr_layer_data(m: &FGModule, degree: i64, weight: u32) -> (Vec<usize>, Vec<LinComb<usize>>, Vec<LinComb<usize>>) {
    let cell = m.cell(degree, weight);
    let out_images: Vec<LinComb<usize>> = cell.iter().map(|&j| m.gr_d(j)).collect();
    let incoming: Vec<LinComb<usize>> = m.cell(degree + 1, weight).iter().map(|&j| m.gr_d(j)).collect();
    (cell, out_images, incoming)
}

/// Cycles of the weight layer at a cell, as combinations of atom indices.
fn gr_cycles(m: &FGModule, degree: i64, weight: u32) -> Vec<LinComb<usize>> {
    let (cell, out_images, _) = gr_layer_data(m, degree, weight);
    super::echelon::kernel(&out_images)
        .into_iter()
        .map(|z| z.map_keys(|&k| cell[k]))
        .collect()
}

fn gr_boundaries(m: &FGModule, degree: i64, weight: u32) -> Vec<LinComb<usize>> {
    gr_layer_data(m, degree, weight).2
}

/// Homology of the associated graded, per (degree, weight).
pub fn gr_homology(m: &FGModule) -> Result<HomologyTable> {
    if !is_gr_dg(m) {
        return Err(Error::Contract("gr_homology needs a gr-dg module".into()));
    }
    let mut cells = Vec::new();
    let mut keys: BTreeSet<(u32, i64)> = BTreeSet::new();
    for a in m.atoms() {
        keys.insert((a.weight, a.degree));
    }
    for (w, n) in keys {
        let z = gr_cycles(m, n, w).len();
        let b = rank(&gr_boundaries(m, n, w));
        cells.push(HomologyCell {
            degree: n,
            weight: w,
            dim: z - b,
            reliable: !m.window.unreliable_degrees.contains(&n),
        });
    }
    cells.sort_by_key(|c| (c.weight, std::cmp::Reverse(c.degree)));
    Ok(HomologyTable { cells })
}

/// Per-cell verdict of whether `f^gr` is an isomorphism on homology.
pub fn graded_quasi_iso_cells(f: &ModuleMap) -> Result<BTreeMap<(i64, u32), (bool, bool)>> {
    if f.shift != 0 {
        return Err(Error::Input("a graded quasi-isomorphism has degree 0".into()));
    }
    if !f.is_chain_map() {
        return Err(Error::Contract("map does not commute with the predifferentials".into()));
    }
    if !is_gr_dg(&f.source) || !is_gr_dg(&f.target) {
        return Err(Error::Contract("both endpoints must be gr-dg".into()));
    }
    let mut keys: BTreeSet<(i64, u32)> = BTreeSet::new();
    for a in f.source.atoms().iter().chain(f.target.atoms()) {
        keys.insert((a.degree, a.weight));
    }
    let mut out = BTreeMap::new();
    for (n, w) in keys {
        let zx = gr_cycles(&f.source, n, w);
        let bx = rank(&gr_boundaries(&f.source, n, w));
        let zy = gr_cycles(&f.target, n, w);
        let by_vecs = gr_boundaries(&f.target, n, w);
        let by = rank(&by_vecs);
        let hx = zx.len() - bx;
        let hy = zy.len() - by;
        // weight-q part of f on cycles
        let mut imgs: Vec<LinComb<usize>> = zx
            .iter()
            .map(|z| f.apply(z).filter(|&i| f.target.atom(i).weight == w))
            .collect();
        imgs.extend(by_vecs);
        let r = rank(&imgs);
        let ok = hx == hy && r - by == hx && r == zy.len();
        let reliable = !f.source.window.unreliable_degrees.contains(&n)
            && !f.target.window.unreliable_degrees.contains(&n);
        out.insert((n, w), (ok, reliable));
    }
    Ok(out)
}

/// True iff `f^gr` is a quasi-isomorphism at every reliable cell.
pub fn is_graded_quasi_iso(f: &ModuleMap) -> Result<bool> {
    Ok(graded_quasi_iso_cells(f)?.values().all(|&(ok, reliable)| ok || !reliable))
}

/// For every weight `q`, the weight-`≥q` part of the source surjects onto
/// the weight-`≥q` span of the target.
pub fn is_strict_surjection(f: &ModuleMap) -> bool {
    let mut ws: BTreeSet<u32> = f.target.weights();
    ws.extend(f.source.weights());
    ws.iter().all(|&q| {
        let imgs: Vec<LinComb<usize>> =
            (0..f.source.dim()).filter(|&j| f.source.atom(j).weight >= q).map(|j| f.entries[j].clone()).collect();
        let need = (0..f.target.dim()).filter(|&i| f.target.atom(i).weight >= q).count();
        rank(&imgs) == need
    })
}

/// Strict surjection whose kernel is gr-acyclic.
///
/// For a strict surjection the sequence `0 → K → X → Y → 0` stays exact
/// after `Gr`, so this agrees with `is_strict_surjection ∧ is_graded_quasi_iso`
/// without ever comparing homology of the two endpoints.
pub fn is_trivial_fibration_via_kernel(f: &ModuleMap) -> Result<bool> {
    if !is_strict_surjection(f) {
        return Ok(false);
    }
    let (k, _) = f.kernel_module()?;
    Ok(gr_homology(&k)?.is_acyclic())
}

/// `M ⊗ N` with the Leibniz predifferential and additive weights; atoms
/// of total weight above the smaller window are dropped.
pub fn tensor(m: &FGModule, n: &FGModule) -> FGModule {
    let p = m.window.max_weight.min(n.window.max_weight);
    let mut atoms = Vec::new();
    let mut pos: HashMap<(usize, usize), usize> = HashMap::new();
    for i in 0..m.dim() {
        for j in 0..n.dim() {
            let (a, b) = (m.atom(i), n.atom(j));
            if a.weight + b.weight > p {
                continue;
            }
            pos.insert((i, j), atoms.len());
            atoms.push(BasisAtom::new(format!("({})⊗({})", a.id, b.id), a.degree + b.degree, a.weight + b.weight));
        }
    }
    let mut unreliable = BTreeSet::new();
    for a in m.window.unreliable_degrees.iter() {
        for b in n.degrees() {
            unreliable.insert(a + b);
        }
    }
    for b in n.window.unreliable_degrees.iter() {
        for a in m.degrees() {
            unreliable.insert(a + b);
        }
    }
    let mut out = FGModule::new(atoms, Window { max_weight: p, unreliable_degrees: unreliable, empty_warning: false })
        .unwrap();
    for (&(i, j), &t) in pos.iter() {
        let mut img = LinComb::new();
        for (i2, c) in m.d(i).iter() {
            if let Some(&t2) = pos.get(&(*i2, j)) {
                img.add_term(t2, c.clone());
            }
        }
        let s = sign_q(m.atom(i).degree);
        for (j2, c) in n.d(j).iter() {
            if let Some(&t2) = pos.get(&(i, *j2)) {
                img.add_term(t2, c * &s);
            }
        }
        out.d[t] = img;
    }
    out
}

/// Cone of `f : Y → X`: atoms `sY ⊔ X`, `D(sy) = −s d_Y y + f(y)`,
/// `D(x) = d_X x`.
pub fn mapping_cone(f: &ModuleMap) -> Result<FGModule> {
    if f.shift != 0 {
        return Err(Error::Input("mapping cone needs a degree 0 map".into()));
    }
    if !f.is_chain_map() {
        return Err(Error::Contract("mapping cone needs a chain map".into()));
    }
    let (y, x) = (&f.source, &f.target);
    let mut atoms = Vec::new();
    for a in y.atoms() {
        atoms.push(BasisAtom::new(format!("s({})", a.id), a.degree + 1, a.weight));
    }
    for a in x.atoms() {
        atoms.push(BasisAtom::new(format!("({})", a.id), a.degree, a.weight));
    }
    let mut unreliable: BTreeSet<i64> = y.window.unreliable_degrees.iter().map(|d| d + 1).collect();
    unreliable.extend(x.window.unreliable_degrees.iter().cloned());
    let window = Window {
        max_weight: y.window.max_weight.min(x.window.max_weight),
        unreliable_degrees: unreliable,
        empty_warning: false,
    };
    let mut c = FGModule::new(atoms, window)?;
    let off = y.dim();
    for j in 0..y.dim() {
        let mut img = y.d(j).neg();
        img.add_assign(&f.entries[j].map_keys(|&i| i + off));
        c.d[j] = img;
    }
    for j in 0..x.dim() {
        c.d[off + j] = x.d(j).map_keys(|&i| i + off);
    }
    Ok(c)
}

/// Projection `M ⊕ N → M`.
pub fn projection_first(m: &FGModule, n: &FGModule) -> ModuleMap {
    let sum = m.direct_sum(n);
    let mut f = ModuleMap::new(sum, m.clone(), 0);
    for j in 0..m.dim() {
        f.entries[j] = LinComb::basis(j);
    }
    f
}

/// Weight-preserving entries `(to, from, c)` of `d²`; empty iff gr-dg.
pub fn gr_dg_residual(m: &FGModule) -> Vec<(usize, usize, Q)> {
    let mut out = Vec::new();
    for j in 0..m.dim() {
        let w = m.atom(j).weight;
        for (i, c) in m.apply_d(m.d(j)).iter() {
            if m.atom(*i).weight == w && !c.is_zero() {
                out.push((*i, j, c.clone()));
            }
        }
    }
    out
}
