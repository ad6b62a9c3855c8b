//! The algebra file format.
//!
//! ```text
//! {
//!   "basis": [{"id": "u", "degree": 0, "weight": 0}, ...],
//!   "predifferential": [[to, from, num, den], ...],
//!   "operations": {"0": [[out, num, den]], "2": [[out, in1, in2, num, den]], ...}
//! }
//! ```
//!
//! Atoms are referred to by their position in `basis`. Coefficients are
//! exact rationals `num/den`.

use curvop::filtcomplex::{BasisAtom, FGModule, Window};
use curvop::koszul::{CurvedAInftyAlgebra, OpEntry};
use curvop::Q;
use num::BigInt;
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::fmt::Write;
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("json syntax: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("schema: {0}")]
    Schema(String),
    #[error("{0}")]
    Invariant(String),
}

fn schema(at: &str, msg: impl std::fmt::Display) -> FileError {
    FileError::Schema(format!("{at}: {msg}"))
}

fn int(v: &Value, at: &str) -> Result<i64, FileError> {
    v.as_i64().ok_or_else(|| schema(at, format!("expected an integer, got {v}")))
}

fn index(v: &Value, at: &str, dim: usize) -> Result<usize, FileError> {
    let i = int(v, at)?;
    usize::try_from(i).ok().filter(|i| *i < dim).ok_or_else(|| schema(at, format!("atom index {i} out of range 0..{dim}")))
}

fn rational(num: &Value, den: &Value, at: &str) -> Result<Q, FileError> {
    let (n, d) = (int(num, at)?, int(den, at)?);
    if d == 0 {
        return Err(schema(at, "zero denominator"));
    }
    Ok(Q::new(BigInt::from(n), BigInt::from(d)))
}

fn rows<'a>(v: &'a Value, at: &str, len: usize) -> Result<Vec<&'a Vec<Value>>, FileError> {
    let list = v.as_array().ok_or_else(|| schema(at, "expected an array"))?;
    list.iter()
        .enumerate()
        .map(|(i, r)| {
            let here = format!("{at}[{i}]");
            let r = r.as_array().ok_or_else(|| schema(&here, "expected an array"))?;
            if r.len() != len {
                return Err(schema(&here, format!("expected {len} entries, got {}", r.len())));
            }
            Ok(r)
        })
        .collect()
}

fn object<'a>(v: &'a Value, at: &str, allowed: &[&str]) -> Result<&'a Map<String, Value>, FileError> {
    let o = v.as_object().ok_or_else(|| schema(at, "expected an object"))?;
    if let Some(k) = o.keys().find(|k| !allowed.contains(&k.as_str())) {
        return Err(schema(at, format!("unknown field \"{k}\"")));
    }
    Ok(o)
}

fn field<'a>(o: &'a Map<String, Value>, at: &str, name: &str) -> Result<&'a Value, FileError> {
    o.get(name).ok_or_else(|| schema(at, format!("missing field \"{name}\"")))
}

/// Basis and predifferential only.
pub fn parse_module(text: &str) -> Result<FGModule, FileError> {
    let v: Value = serde_json::from_str(text)?;
    module_of(&v)
}

fn module_of(v: &Value) -> Result<FGModule, FileError> {
    let top = object(v, "top level", &["basis", "predifferential", "operations"])?;
    let basis = field(top, "top level", "basis")?.as_array().ok_or_else(|| schema("basis", "expected an array"))?;
    let mut atoms = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        let at = format!("basis[{i}]");
        let o = object(a, &at, &["id", "degree", "weight"])?;
        let id = field(o, &at, "id")?.as_str().ok_or_else(|| schema(&at, "id must be a string"))?;
        let degree = int(field(o, &at, "degree")?, &format!("{at}.degree"))?;
        let weight = int(field(o, &at, "weight")?, &format!("{at}.weight"))?;
        let weight = u32::try_from(weight).map_err(|_| schema(&format!("{at}.weight"), "weight must be nonnegative"))?;
        if atoms.iter().any(|b: &BasisAtom| b.id == id) {
            return Err(schema(&at, format!("duplicate id \"{id}\"")));
        }
        atoms.push(BasisAtom::new(id, degree, weight));
    }
    let p = atoms.iter().map(|a| a.weight).max().unwrap_or(0);
    let dim = atoms.len();
    let mut m = FGModule::new(atoms, Window::weight(p)).map_err(|e| schema("basis", e))?;
    let empty = Value::Array(Vec::new());
    let d = top.get("predifferential").unwrap_or(&empty);
    for (i, r) in rows(d, "predifferential", 4)?.into_iter().enumerate() {
        let at = format!("predifferential[{i}]");
        let (to, from) = (index(&r[0], &at, dim)?, index(&r[1], &at, dim)?);
        let c = rational(&r[2], &r[3], &at)?;
        m.add_d(to, from, c).map_err(|e| FileError::Invariant(format!("{at}: {e}")))?;
    }
    Ok(m)
}

pub fn parse_algebra(text: &str) -> Result<CurvedAInftyAlgebra, FileError> {
    let v: Value = serde_json::from_str(text)?;
    let module = module_of(&v)?;
    let dim = module.dim();
    let mut ops = BTreeMap::new();
    if let Some(o) = v.get("operations") {
        let o = o.as_object().ok_or_else(|| schema("operations", "expected an object"))?;
        for (key, list) in o {
            let n: usize = key.parse().map_err(|_| schema("operations", format!("arity key \"{key}\" is not a natural number")))?;
            let at = format!("operations[\"{n}\"]");
            let mut entries = Vec::new();
            for (i, r) in rows(list, &at, n + 3)?.into_iter().enumerate() {
                let here = format!("{at}[{i}]");
                let out = index(&r[0], &here, dim)?;
                let ins = r[1..=n].iter().map(|x| index(x, &here, dim)).collect::<Result<Vec<_>, _>>()?;
                entries.push(OpEntry { out, ins, coeff: rational(&r[n + 1], &r[n + 2], &here)? });
            }
            if ops.insert(n, entries).is_some() {
                return Err(schema("operations", format!("arity {n} given twice")));
            }
        }
    }
    CurvedAInftyAlgebra::new(module, ops).map_err(|e| FileError::Invariant(e.to_string()))
}

pub fn load_algebra(path: &Path) -> Result<CurvedAInftyAlgebra, FileError> {
    parse_algebra(&read(path)?)
}

pub fn load_module(path: &Path) -> Result<FGModule, FileError> {
    parse_module(&read(path)?)
}

fn read(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|source| FileError::Io { path: path.display().to_string(), source })
}

fn ratio(c: &Q) -> String {
    format!("{}, {}", c.numer(), c.denom())
}

fn row_block(out: &mut String, rows: &[String], indent: &str) {
    if rows.is_empty() {
        out.push_str("[]");
        return;
    }
    out.push_str("[\n");
    for (i, r) in rows.iter().enumerate() {
        let sep = if i + 1 < rows.len() { "," } else { "" };
        let _ = writeln!(out, "{indent}  {r}{sep}");
    }
    let _ = write!(out, "{indent}]");
}

/// The canonical text of an algebra: one record per line, operations in
/// increasing arity, coefficients in lowest terms.
pub fn render_algebra(a: &CurvedAInftyAlgebra) -> String {
    let m = &a.module;
    let mut out = String::from("{\n  \"basis\": ");
    let basis: Vec<String> = m
        .atoms()
        .iter()
        .map(|x| format!("{{\"id\": {}, \"degree\": {}, \"weight\": {}}}", Value::String(x.id.clone()), x.degree, x.weight))
        .collect();
    row_block(&mut out, &basis, "  ");
    out.push_str(",\n  \"predifferential\": ");
    let d: Vec<String> = m.d_entries().iter().map(|(to, from, c)| format!("[{to}, {from}, {}]", ratio(c))).collect();
    row_block(&mut out, &d, "  ");
    out.push_str(",\n  \"operations\": {");
    let arities: Vec<_> = a.ops.iter().collect();
    for (k, (n, entries)) in arities.iter().enumerate() {
        let _ = write!(out, "\n    \"{n}\": ");
        let rs: Vec<String> = entries
            .iter()
            .map(|e| {
                let idx: Vec<String> = std::iter::once(e.out).chain(e.ins.iter().copied()).map(|i| i.to_string()).collect();
                format!("[{}, {}]", idx.join(", "), ratio(&e.coeff))
            })
            .collect();
        row_block(&mut out, &rs, "    ");
        if k + 1 < arities.len() {
            out.push(',');
        }
    }
    if !arities.is_empty() {
        out.push_str("\n  ");
    }
    out.push_str("}\n}\n");
    out
}

pub fn save_algebra(path: &Path, a: &CurvedAInftyAlgebra) -> Result<(), FileError> {
    std::fs::write(path, render_algebra(a)).map_err(|source| FileError::Io { path: path.display().to_string(), source })
}
