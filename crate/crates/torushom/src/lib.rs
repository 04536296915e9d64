//! Rendering and parsing for the command-line front end: homology tables
//! in the grid layout of the reference figures (rows `q` descending,
//! columns `t` ascending), JSON with a fixed schema, and CSV.
//!
//! The JSON schema for a bigraded group is
//!
//! ```text
//! { "q_cap": int, "entries": [ { "t": int, "q": int, "free": int,
//!                                "torsion": [int, ...] }, ... ] }
//! ```
//!
//! entries sorted by `(t, q)` ascending, torsion as a divisibility chain
//! of invariant factors. Metadata keys (knot, k, N, m, window) ride along
//! at the top level and are ignored by the parser.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use torushom_core::complexes::CubeComplex;
use torushom_core::grassmannian::{GeodesicComponent, LoopHomology};
use torushom_core::homology::{BigradedAbelianGroup, GradedAbelianGroup, GroupSummand};
use torushom_core::nilhecke::{RelationReport, RelationStatus};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    Table,
    Json,
    Csv,
}

fn torsion_u64(s: &GroupSummand) -> Vec<u64> {
    s.torsion
        .iter()
        .map(|d| u64::try_from(d).expect("invariant factor exceeds u64"))
        .collect()
}

/// Cell text for one summand: `Z`, `Z^2`, `Z_2`, `Z^2+Z_2+Z_4`, ...
pub fn summand_label(s: &GroupSummand) -> String {
    let mut parts = Vec::new();
    match s.free {
        0 => {}
        1 => parts.push("Z".to_string()),
        r => parts.push(format!("Z^{}", r)),
    }
    for d in &s.torsion {
        parts.push(format!("Z_{}", d));
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join("+")
    }
}

#[derive(Serialize, Deserialize)]
struct EntryJson {
    t: i64,
    q: i64,
    free: usize,
    torsion: Vec<u64>,
}

/// Serializes a bigraded group with its exactness cap and metadata.
pub fn bigraded_to_json(g: &BigradedAbelianGroup, q_cap: i64, meta: &[(&str, Value)]) -> Value {
    let entries: Vec<Value> = g
        .entries()
        .map(|(&(t, q), s)| json!({ "t": t, "q": q, "free": s.free, "torsion": torsion_u64(s) }))
        .collect();
    let mut obj = serde_json::Map::new();
    for (k, v) in meta {
        obj.insert((*k).to_string(), v.clone());
    }
    obj.insert("q_cap".to_string(), json!(q_cap));
    obj.insert("entries".to_string(), json!(entries));
    Value::Object(obj)
}

/// Reads back a bigraded group (and its cap) from the JSON schema.
pub fn bigraded_from_json(text: &str) -> Result<(BigradedAbelianGroup, i64), String> {
    let v: Value = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let q_cap = v
        .get("q_cap")
        .and_then(Value::as_i64)
        .ok_or("missing q_cap")?;
    let raw = v
        .get("entries")
        .and_then(Value::as_array)
        .ok_or("missing entries")?;
    let mut g = BigradedAbelianGroup::new();
    for e in raw {
        let e: EntryJson = serde_json::from_value(e.clone()).map_err(|err| err.to_string())?;
        g.insert(
            e.t,
            e.q,
            GroupSummand {
                free: e.free,
                torsion: e.torsion.iter().map(|&d| d.into()).collect(),
            },
        );
    }
    Ok((g, q_cap))
}

/// CSV with header `t,q,free,torsion`; torsion rendered `[2;4]`.
pub fn bigraded_to_csv(g: &BigradedAbelianGroup) -> String {
    let mut out = String::from("t,q,free,torsion\n");
    for (&(t, q), s) in g.entries() {
        let tor = torsion_u64(s)
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(";");
        let _ = writeln!(out, "{},{},{},[{}]", t, q, s.free, tor);
    }
    out
}

/// Grid in the layout of the reference tables: rows `q` descending on the
/// left, columns `t` ascending, axis labels in the last row.
pub fn bigraded_to_table(g: &BigradedAbelianGroup) -> String {
    if g.is_empty() {
        return String::from("(trivial)\n");
    }
    let (mut t_min, mut t_max) = (i64::MAX, i64::MIN);
    let (mut q_min, mut q_max) = (i64::MAX, i64::MIN);
    for (&(t, q), _) in g.entries() {
        t_min = t_min.min(t);
        t_max = t_max.max(t);
        q_min = q_min.min(q);
        q_max = q_max.max(q);
    }
    let ts: Vec<i64> = (t_min..=t_max).collect();
    let q_step = if g.entries().all(|(&(_, q), _)| (q - q_min) % 2 == 0) {
        2
    } else {
        1
    };
    let mut qs = Vec::new();
    let mut q = q_max;
    while q >= q_min {
        qs.push(q);
        q -= q_step;
    }
    let label_w = qs
        .iter()
        .map(|q| q.to_string().len())
        .max()
        .unwrap_or(1)
        .max(3);
    let mut col_w: Vec<usize> = ts.iter().map(|t| t.to_string().len()).collect();
    for (&(t, _), s) in g.entries() {
        let idx = (t - t_min) as usize;
        col_w[idx] = col_w[idx].max(summand_label(s).len());
    }
    let mut out = String::new();
    for &q in &qs {
        let _ = write!(out, "{:>label_w$} |", q);
        for (idx, &t) in ts.iter().enumerate() {
            let cell = match g.get(t, q) {
                Some(s) => summand_label(s),
                None => String::new(),
            };
            let _ = write!(out, " {:>w$}", cell, w = col_w[idx]);
        }
        out.push('\n');
    }
    let _ = write!(out, "{:>label_w$} +", "");
    for (idx, _) in ts.iter().enumerate() {
        let _ = write!(out, "-{:-<w$}", "", w = col_w[idx]);
    }
    out.push('\n');
    let _ = write!(out, "{:>label_w$}  ", "q/t");
    for (idx, &t) in ts.iter().enumerate() {
        let _ = write!(out, " {:>w$}", t, w = col_w[idx]);
    }
    out.push('\n');
    out
}

pub fn render_bigraded(
    g: &BigradedAbelianGroup,
    q_cap: i64,
    meta: &[(&str, Value)],
    format: OutputFormat,
) -> String {
    match format {
        OutputFormat::Table => bigraded_to_table(g),
        OutputFormat::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&bigraded_to_json(g, q_cap, meta)).unwrap()
        ),
        OutputFormat::Csv => bigraded_to_csv(g),
    }
}

/// One line per degree, descending, for singly graded groups.
pub fn graded_to_table(g: &GradedAbelianGroup) -> String {
    let mut out = String::new();
    let mut rows: Vec<(i64, &GroupSummand)> = g.entries().map(|(&d, s)| (d, s)).collect();
    rows.reverse();
    for (d, s) in rows {
        let _ = writeln!(out, "{:>4} : {}", d, summand_label(s));
    }
    out
}

pub fn graded_to_json_entries(g: &GradedAbelianGroup) -> Vec<Value> {
    g.entries()
        .map(|(&d, s)| json!({ "degree": d, "free": s.free, "torsion": torsion_u64(s) }))
        .collect()
}

pub fn render_loop_homology(lh: &LoopHomology, k: usize, n: usize, format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "loop homology, degrees complete in [{}, {}]:",
                lh.complete_from, lh.complete_through
            );
            out.push_str(&graded_to_table(&lh.group));
            out
        }
        OutputFormat::Json => {
            let v = json!({
                "k": k,
                "N": n,
                "complete_from": lh.complete_from,
                "complete_through": lh.complete_through,
                "components": lh.components.iter().map(|c| format!("{}", c.lambda)).collect::<Vec<_>>(),
                "entries": graded_to_json_entries(&lh.group),
            });
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
        OutputFormat::Csv => {
            let mut out = String::from("degree,free,torsion\n");
            for (&d, s) in lh.group.entries() {
                let tor = torsion_u64(s)
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(";");
                let _ = writeln!(out, "{},{},[{}]", d, s.free, tor);
            }
            out
        }
    }
}

fn lambda_compact(c: &GeodesicComponent) -> String {
    let inner = c
        .lambda
        .parts()
        .iter()
        .map(u32::to_string)
        .collect::<Vec<_>>()
        .join(";");
    format!("({})", inner)
}

fn blocks_compact(c: &GeodesicComponent) -> String {
    let inner = c
        .blocks
        .groups
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(";");
    format!("[{}]", inner)
}

pub fn render_geodesics(rows: &[GeodesicComponent], format: OutputFormat) -> String {
    match format {
        OutputFormat::Table => {
            let mut out =
                String::from("lambda       |lam|  |lam|_2^2  mu    nu    dim   shift  blocks\n");
            for c in rows {
                let _ = writeln!(
                    out,
                    "{:<12} {:<6} {:<10} {:<5} {:<5} {:<5} {:<6} {}",
                    format!("{}", c.lambda),
                    c.lambda.weight(),
                    c.sq_norm,
                    c.mu,
                    c.nu,
                    c.nu,
                    c.shift,
                    blocks_compact(c)
                );
            }
            out
        }
        OutputFormat::Json => {
            let v: Vec<Value> = rows
                .iter()
                .map(|c| {
                    json!({
                        "lambda": c.lambda.parts(),
                        "size": c.lambda.weight(),
                        "sq_length": c.sq_norm,
                        "mu": c.mu,
                        "nu": c.nu,
                        "dim": c.nu,
                        "shift": c.shift,
                        "blocks": c.blocks.groups,
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&v).unwrap())
        }
        OutputFormat::Csv => {
            let mut out = String::from("lambda,size,sq_length,mu,nu,dim,shift,blocks\n");
            for c in rows {
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    lambda_compact(c),
                    c.lambda.weight(),
                    c.sq_norm,
                    c.mu,
                    c.nu,
                    c.nu,
                    c.shift,
                    blocks_compact(c)
                );
            }
            out
        }
    }
}

/// JSON report of the relation self-test: one object per relation.
pub fn relation_reports_to_json(reports: &[RelationReport]) -> Value {
    let rows: Vec<Value> = reports
        .iter()
        .map(|rep| {
            let mut obj = serde_json::Map::new();
            obj.insert("relation".into(), json!(rep.relation));
            obj.insert("r".into(), json!(rep.r));
            obj.insert("samples".into(), json!(rep.samples));
            match &rep.status {
                RelationStatus::Pass => {
                    obj.insert("status".into(), json!("PASS"));
                }
                RelationStatus::Fail { vertex, witness } => {
                    obj.insert("status".into(), json!("FAIL"));
                    obj.insert("vertex".into(), json!(vertex));
                    obj.insert("witness".into(), json!(witness));
                }
            }
            Value::Object(obj)
        })
        .collect();
    Value::Array(rows)
}

/// Per-partition assembly of the finite invariant, fanned out with rayon
/// and merged in enumeration order; agrees with the sequential assembly.
pub fn colored_homology_par(
    k: usize,
    n: usize,
    m: u32,
    q_cap: Option<i64>,
) -> Result<BigradedAbelianGroup, torushom_core::Error> {
    use rayon::prelude::*;
    use torushom_core::grassmannian::enumerate_partitions;
    use torushom_core::knotinv::{summand_shift, tor_summand};
    torushom_core::knotinv::InvariantRequest::colored(k, n, m, q_cap)?;
    let prefactor = (k * (n - k)) as i64 * (2 * m as i64 - 1);
    let lambdas = enumerate_partitions(k.min(n - k), m);
    let parts: Vec<BigradedAbelianGroup> = lambdas
        .par_iter()
        .map(|lambda| {
            let (dt, dq) = summand_shift(lambda);
            tor_summand(lambda, k, n)
                .expect("enumerated partition is valid")
                .shifted(dt, dq + prefactor)
        })
        .collect();
    let mut total = BigradedAbelianGroup::new();
    for g in &parts {
        total = total.direct_sum(g);
    }
    if let Some(cap) = q_cap {
        total = total.restrict_window(i64::MIN, cap);
    }
    Ok(total)
}

/// Parallel assembly of the stable invariant on a window.
pub fn stable_homology_par(
    k: usize,
    n: usize,
    window: torushom_core::knotinv::Window,
) -> Result<BigradedAbelianGroup, torushom_core::Error> {
    use rayon::prelude::*;
    use torushom_core::knotinv::{stable_window_partitions, summand_shift, tor_summand};
    torushom_core::knotinv::InvariantRequest::stable(k, n, window.q_max, window.t_min)?;
    let lambdas = stable_window_partitions(k, n, window);
    let parts: Vec<BigradedAbelianGroup> = lambdas
        .par_iter()
        .map(|lambda| {
            let (dt, dq) = summand_shift(lambda);
            tor_summand(lambda, k, n)
                .expect("enumerated partition is valid")
                .shifted(dt, dq)
        })
        .collect();
    let mut total = BigradedAbelianGroup::new();
    for g in &parts {
        total = total.direct_sum(g);
    }
    Ok(total.restrict_window(window.t_min, window.q_max))
}

/// Diagnostic dump of a cube complex: vertices with gradings and symmetry
/// blocks, edges with operator-word strings.
pub fn complex_to_json(cx: &CubeComplex) -> Value {
    let alpha = cx.alphabet();
    let vertices: Vec<Value> = cx
        .vertices()
        .iter()
        .map(|v| {
            json!({
                "vertex": format!("{}", v),
                "t": v.t_degree(),
                "q_shift": v.q_shift(),
                "symmetry": cx.young_blocks(v),
            })
        })
        .collect();
    let edges: Vec<Value> = cx
        .edges()
        .iter()
        .map(|e| {
            json!({
                "source": format!("{}", e.source),
                "slot": e.slot,
                "target": format!("{}", e.target),
                "word": format!("{}", e.word.display(alpha)),
            })
        })
        .collect();
    json!({ "r": cx.r(), "vertices": vertices, "edges": edges })
}
