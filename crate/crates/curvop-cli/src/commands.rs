//! One function per subcommand, each returning a finished report.

use crate::algebra_file::{load_algebra, load_module};
use curvop::barcobar::{bar, bar_on_trivial_tree, cas_counit_interior, check_bar_square, check_cobar_square, cobar, counit_map};
use curvop::filtcomplex::{gr_dg_residual, gr_homology};
use curvop::koszul::*;
use curvop::operadcore::cas;
use curvop::Truncation;
use serde_json::{json, Value};
use std::path::Path;

/// A verification outcome: text lines and a JSON body, both deterministic.
pub struct Report {
    pub command: &'static str,
    pub window: Truncation,
    pub passed: bool,
    pub lines: Vec<String>,
    pub body: Value,
}

impl Report {
    fn new(command: &'static str, window: Truncation) -> Self {
        Report { command, window, passed: true, lines: Vec::new(), body: json!({}) }
    }

    fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn header(&self) -> String {
        format!("# curvop {} | {}", self.command, self.window)
    }

    pub fn text(&self) -> String {
        let mut out = self.header();
        out.push('\n');
        for l in &self.lines {
            out.push_str(l);
            out.push('\n');
        }
        out.push_str(if self.passed { "result: PASS\n" } else { "result: FAIL\n" });
        out
    }

    pub fn json(&self) -> String {
        let w = self.window;
        let v = json!({
            "command": self.command,
            "window": {"max_arity": w.max_arity, "max_weight": w.max_weight, "max_filtration": w.max_filtration},
            "passed": self.passed,
            "report": self.body,
        });
        serde_json::to_string_pretty(&v).unwrap() + "\n"
    }
}

pub type CmdResult = Result<Report, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn to_json(x: &impl serde::Serialize) -> Value {
    serde_json::to_value(x).unwrap()
}

/// Residual listings stop after this many entries.
const SHOWN: usize = 5;

pub fn bar_cmd(w: Truncation) -> CmdResult {
    let a = w.max_arity + w.max_weight + 3;
    let op = cas(a, a, w.max_filtration);
    let b = bar(&op, w).map_err(err)?;
    let r = check_bar_square(&b);
    let mut rep = Report::new("bar", w);
    rep.line(format!("operad: cAs, {} bar cogenerators", b.decorations.len()));
    rep.line(format!("d_beta(|) = {}", b.render(&bar_on_trivial_tree(&b))));
    rep.line(format!("trees per arity: {:?}", r.per_arity));
    rep.line(format!("d_beta^2 = 0 on {} trees; nonzero residuals per bracket [d0d0, d0d1+d1d0, d1d1+d0d2+d2d0, d1d2+d2d1, d2d2] = {:?}", r.trees, r.bracket_failures));
    for x in r.residuals.iter().take(SHOWN) {
        rep.line(format!("  residual on {} ({}): {}", x.tree, x.bracket, x.residual));
    }
    rep.passed = r.passed();
    rep.body = to_json(&r);
    Ok(rep)
}

pub fn cobar_cmd(w: Truncation) -> CmdResult {
    let d = cas_dual(w.max_filtration);
    let gen_arity = (w.max_arity + w.max_weight).saturating_sub(1).max(1);
    let cob = cobar(&d, |a| d.basis(a), None, gen_arity, w.max_filtration).map_err(err)?;
    let r = check_cobar_square(&cob, w.max_arity, w.max_weight);
    let mut rep = Report::new("cobar", w);
    rep.line(format!("cooperad: cAs^¡, generators s⁻¹μ̂ₙ for n ≤ {gen_arity} and ϑ"));
    for n in 0..=w.max_arity.min(3) {
        if let Some(t) = cob.generator_tree(&n) {
            let img = cob.d_omega(&curvop::LinComb::basis(t.clone()));
            rep.line(format!("d_omega({}) = {}", cob.gens().render(&t), cob.render(&img)));
        }
    }
    rep.line(format!("d_omega(ϑ) = 0: {}", r.theta_closed));
    rep.line(format!("d_omega^2 = [ϑ, -] on {} generators and {} trees: {} residuals", r.generators, r.trees, r.residuals.len()));
    for x in r.residuals.iter().take(SHOWN) {
        rep.line(format!("  {} on {}: {}", x.check, x.element, x.residual));
    }
    rep.passed = r.passed();
    rep.body = to_json(&r);
    Ok(rep)
}

pub fn koszul_dual_cmd(w: Truncation) -> CmdResult {
    let d = cas_shriek().map_err(err)?;
    let r = check_cas_shriek(w.max_arity, w.max_weight + 1).map_err(err)?;
    let p = &d.presentation;
    let mut rep = Report::new("koszul-dual", w);
    rep.line("cAs^! generators:");
    for g in p.gens.ids() {
        let x = p.gens.get(g);
        rep.line(format!("  {} arity {} degree {} weight {}", x.name, x.arity, x.degree, x.weight));
    }
    rep.line("cAs^! relations:");
    let rels: Vec<String> = p.relations.iter().map(|x| p.gens.render_comb(x)).collect();
    for x in &rels {
        rep.line(format!("  {x}"));
    }
    for c in &r.cells {
        rep.line(format!("annihilator arity {}: {} trees, {} relations, {} dual relations", c.arity, c.trees, c.relations, c.annihilator));
    }
    rep.line(format!("relations are unital associativity: {}", r.unital_associative));
    for c in &r.quotient {
        rep.line(format!("dim cAs^!({}) = {} ({} trees, ideal rank {}, normal forms {:?})", c.arity, c.dim, c.trees, c.ideal_rank, c.normal_forms));
    }
    rep.line(format!("(cAs^!)^! = cAs: {}, curvature {}", r.double_dual, r.curvature));
    rep.passed = r.passed();
    rep.body = json!({"relations": rels, "check": to_json(&r)});
    Ok(rep)
}

pub fn syzygy_h0_cmd(w: Truncation) -> CmdResult {
    let r = cas_syzygy(w).map_err(err)?;
    let mut rep = Report::new("syzygy-h0", w);
    rep.line(format!("H0 of B(cAs) in syzygy degree 0, filtration ≤ {}", r.h0.max_filtration));
    for (c, m) in r.h0.cells.iter().zip(&r.matches_dual) {
        rep.line(format!(
            "  arity {}: dim {} (per lead weight {:?}), {} syzygy-0 trees, spanned by μ̂{}: {}{}",
            c.arity,
            c.dim,
            c.gr_dims,
            c.columns,
            c.arity,
            m,
            if c.edge { ", window edge" } else { "" }
        ));
    }
    let fails = r.higher.higher_failures();
    rep.line(format!("higher syzygy homology: {} interior cells, {} nonzero", r.higher.interior_cells(), fails.len()));
    for c in fails.iter().take(SHOWN) {
        rep.line(format!("  arity {} weight {} syzygy {}: dim {}", c.arity, c.weight, c.syzygy, c.dim));
    }
    rep.passed = r.passed();
    rep.body = to_json(&r);
    Ok(rep)
}

/// The curvature term of the relations sits in filtration 2, so the
/// comparison never runs below it.
fn relation_filtration(w: Truncation) -> u32 {
    w.max_filtration.max(2)
}

pub fn ainfty_relations_cmd(w: Truncation, n: Option<usize>, n_max: usize, sign: i64) -> CmdResult {
    let ns: Vec<usize> = match n {
        Some(n) => vec![n],
        None => (0..=n_max).collect(),
    };
    let mut rep = Report::new("ainfty-relations", w);
    let mut rels = Vec::new();
    for &n in &ns {
        let t = ainfty_relations(n);
        let s = render_relation(&t);
        rep.line(format!("n={n}: {s}"));
        rels.push(json!({"n": n, "relation": s, "terms": to_json(&t)}));
    }
    let top = *ns.last().unwrap();
    let p = relation_filtration(w);
    let c = compare_relations(top, p, sign).map_err(err)?;
    rep.line(format!(
        "cobar of cAs^¡ through n={top} at P={p}: relative sign {:?}, mismatched arities {:?}, curvature sign {:?} (expected {sign})",
        c.relative_sign, c.mismatched_arities, c.curvature_sign
    ));
    rep.passed = c.passed();
    rep.body = json!({"relations": rels, "cobar_comparison": to_json(&c)});
    Ok(rep)
}

pub fn check_ainfty_cmd(w: Truncation, path: &Path, n_max: usize) -> CmdResult {
    let a = load_algebra(path).map_err(err)?;
    let r = check_ainfty(&a, n_max, w.max_filtration).map_err(err)?;
    let mut rep = Report::new("check-ainfty", w);
    rep.line(format!("algebra: {} atoms, operations in arities {:?}", a.module.dim(), a.ops.keys().collect::<Vec<_>>()));
    rep.line(format!("relations n ≤ {n_max} on {} input tuples: {} nonzero residuals", r.tuples, r.residuals.len()));
    if let Some(n) = r.first_failing_arity() {
        rep.line(format!("first failing arity: {n}"));
    }
    for x in r.residuals.iter().take(SHOWN) {
        rep.line(format!("  n={} ({}) weight {}: {}", x.n, x.inputs.join(", "), x.weight, x.residual));
    }
    rep.passed = r.passed();
    rep.body = to_json(&r);
    Ok(rep)
}

pub fn gr_homology_cmd(w: Truncation, path: &Path) -> CmdResult {
    let m = load_module(path).map_err(err)?;
    let mut rep = Report::new("gr-homology", w);
    let bad = gr_dg_residual(&m);
    if !bad.is_empty() {
        for (i, j, c) in bad.iter().take(SHOWN) {
            rep.line(format!("d² keeps the weight: {} <- {} with coefficient {c}", m.atom(*i).id, m.atom(*j).id));
        }
        rep.passed = false;
        rep.body = json!({"gr_dg": false});
        return Ok(rep);
    }
    let h = gr_homology(&m).map_err(err)?;
    let p = w.max_filtration;
    let cells: Vec<_> = h.cells.iter().filter(|c| c.weight <= p).collect();
    for c in &cells {
        rep.line(format!("H(weight {}, degree {}) = {}", c.weight, c.degree, c.dim));
    }
    rep.line(format!("acyclic through weight {p}: {}", cells.iter().all(|c| c.dim == 0)));
    rep.body = json!({"gr_dg": true, "cells": to_json(&cells)});
    Ok(rep)
}

pub fn verify_signs_cmd(w: Truncation, sign: i64) -> CmdResult {
    let mut rep = Report::new("verify-signs", w);
    let mut kernel = Vec::new();
    for p in 0..=w.max_filtration {
        for n in 0..=w.max_arity {
            if n == 0 && p == 0 {
                continue;
            }
            let k = compare_with_kernel(n, p);
            rep.line(format!("kernel vs μ̂{n} at P={p}: dim {} per weight {:?}, same span {}", k.kernel_dim, k.gr_dims, k.same_span));
            rep.passed &= k.passed();
            kernel.push(to_json(&k));
        }
    }
    let mut decomposition = Vec::new();
    for n in 0..=w.max_arity {
        let r = cas_dual_decomposition(n, w.max_filtration);
        let wrong: Vec<String> = r.terms.iter().filter(|t| !t.matches).map(|t| format!("({};{:?})", t.upper, t.lowers)).collect();
        rep.line(format!("Δ(μ̂{n}): {} terms, closed {}, sign mismatches {:?}", r.terms.len(), r.closed, wrong));
        rep.passed &= r.passed();
        decomposition.push(to_json(&r));
    }
    let p = relation_filtration(w);
    let c = compare_relations(w.max_arity.max(2), p, sign).map_err(err)?;
    rep.line(format!("cobar relations at P={p}: relative sign {:?}, curvature sign {:?} (expected {sign})", c.relative_sign, c.curvature_sign));
    rep.passed &= c.passed();
    rep.body = json!({"kernel": kernel, "decomposition": decomposition, "relations": to_json(&c)});
    Ok(rep)
}

pub fn counit_check_cmd(w: Truncation) -> CmdResult {
    let op = cas(w.max_arity + w.max_weight + 2, w.max_weight, w.max_filtration);
    let r = counit_map(&op, w, &cas_counit_interior(w.max_weight)).map_err(err)?;
    let mut rep = Report::new("counit-check", w);
    rep.line(format!("Ω̂B̂cAs → cAs: {} cobar generators, {} d_omega terms outside the table", r.generators, r.dropped_terms));
    rep.line(format!("curved morphism on fitting generators: {}", r.curved_morphism));
    for a in &r.arities {
        let interior: Vec<_> = a.cells.iter().filter(|c| c.interior).collect();
        let bad = interior.iter().filter(|c| !c.quasi_iso).count();
        rep.line(format!(
            "arity {}: {} trees onto {} basis elements, strict surjection {}, chain map {}, {} interior cells, {} not quasi-iso",
            a.arity, a.source_trees, a.target_dim, a.strict_surjection, a.chain_map, interior.len(), bad
        ));
    }
    rep.passed = r.passed();
    rep.body = to_json(&r);
    Ok(rep)
}
