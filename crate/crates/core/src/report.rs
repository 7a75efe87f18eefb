//! CSV, JSON and DOT renderings of analysis results.
//!
//! Every writer is deterministic: rows follow radius order, witnesses follow
//! canonical-key order, and no wall-clock data is emitted.

use std::collections::BTreeSet;
use std::io::Write;

use serde::Serialize;
use serde_json::{json, Value};

use crate::ball::BallTable;
use crate::depth::DeadEndCensus;
use crate::error::{AnalysisError, Result};
use crate::theorem::{RelatorSpan, TheoremReport};
use crate::topology::{induced_components, EndsProfile, Explorer, RadiusSearch, SphereScan};

pub const DOT_VERTEX_LIMIT: usize = 20_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub key: String,
    pub element: String,
    pub length: u32,
}

pub fn witness(ball: &BallTable, v: u32) -> Witness {
    Witness {
        key: hex::encode(ball.key(v)),
        element: ball.model().display(ball.element(v)).to_string(),
        length: ball.length(v),
    }
}

fn csv_string<F>(header: &[&str], fill: F) -> Result<String>
where
    F: FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>,
{
    let mut w = csv::Writer::from_writer(Vec::new());
    let run = || -> csv::Result<Vec<u8>> {
        w.write_record(header)?;
        fill(&mut w)?;
        w.into_inner().map_err(|e| e.into_error().into())
    };
    let bytes = run().map_err(|e| AnalysisError::Io(std::io::Error::other(e)))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn ball_csv(ball: &BallTable) -> Result<String> {
    csv_string(&["n", "sphere_size", "ball_size"], |w| {
        let mut total = 0;
        for (n, size) in ball.sphere_sizes().into_iter().enumerate() {
            total += size;
            w.write_record([n.to_string(), size.to_string(), total.to_string()])?;
        }
        Ok(())
    })
}

pub fn ball_json(ball: &BallTable) -> Value {
    json!({
        "model": ball.model().spec(),
        "ball_radius": ball.radius(),
        "vertices": ball.len(),
        "sphere_sizes": ball.sphere_sizes(),
    })
}

pub fn sphere_scan_csv(scan: &SphereScan) -> Result<String> {
    csv_string(
        &["n", "r", "component_count", "infinite_part_size", "flags"],
        |w| {
            for row in &scan.rows {
                w.write_record([
                    row.n.to_string(),
                    row.r.to_string(),
                    row.component_count.to_string(),
                    row.infinite_part_size.to_string(),
                    row.flags.join(";"),
                ])?;
            }
            Ok(())
        },
    )
}

fn scan_rows_json(ball: &BallTable, scan: &SphereScan) -> Value {
    let rows: Vec<Value> = scan
        .rows
        .iter()
        .map(|row| {
            let witnesses: Vec<Witness> = row
                .witnesses(ball)
                .into_iter()
                .map(|v| witness(ball, v))
                .collect();
            json!({
                "n": row.n,
                "r": row.r,
                "component_count": row.component_count,
                "infinite_part_size": row.infinite_part_size,
                "horizon_components": row.horizon_components,
                "enclosed_components": row.enclosed_components,
                "flags": row.flags,
                "witnesses": witnesses,
            })
        })
        .collect();
    Value::Array(rows)
}

pub fn sphere_scan_json(ex: &Explorer, scan: &SphereScan) -> Value {
    let ball = ex.ball();
    json!({
        "model": ball.model().spec(),
        "ball_radius": ball.radius(),
        "guard": ex.guard().width(scan.r),
        "r": scan.r,
        "connected": scan.connected(),
        "rows": scan_rows_json(ball, scan),
    })
}

pub fn ends_profile_json(ex: &Explorer, profile: &EndsProfile) -> Value {
    let ball = ex.ball();
    json!({
        "model": ball.model().spec(),
        "ball_radius": ball.radius(),
        "guard": ex.guard().width(profile.scan.r),
        "r": profile.scan.r,
        "counts": profile.scan.counts(),
        "verdict": profile.verdict.to_string(),
        "ends": profile.ends.map(|e| e.to_string()),
        "model_hint": ball.model().ends_hint().to_string(),
        "rows": scan_rows_json(ball, &profile.scan),
    })
}

pub fn radius_search_csv(search: &RadiusSearch) -> Result<String> {
    csv_string(&["r", "n", "component_count"], |w| {
        for (r, counts) in &search.tried {
            for (n, c) in counts.iter().enumerate() {
                w.write_record([r.to_string(), n.to_string(), c.to_string()])?;
            }
        }
        Ok(())
    })
}

pub fn radius_search_json(ex: &Explorer, search: &RadiusSearch, n_max: u32, r_cap: u32) -> Value {
    json!({
        "model": ex.ball().model().spec(),
        "ball_radius": ex.ball().radius(),
        "n_max": n_max,
        "r_cap": r_cap,
        "radius": search.radius,
        "found": search.radius.is_some(),
        "tried": search.tried.iter().map(|(r, c)| json!({"r": r, "counts": c})).collect::<Vec<_>>(),
    })
}

pub fn census_csv(ball: &BallTable, census: &DeadEndCensus) -> Result<String> {
    csv_string(
        &[
            "n",
            "dead_end_count",
            "max_depth",
            "max_retreat_depth",
            "witness_key",
        ],
        |w| {
            for row in &census.rows {
                w.write_record([
                    row.n.to_string(),
                    row.dead_end_count.to_string(),
                    row.max_depth.to_string(),
                    row.max_retreat_depth.to_string(),
                    hex::encode(ball.key(row.depth_witness)),
                ])?;
            }
            Ok(())
        },
    )
}

pub fn census_json(ex: &Explorer, census: &DeadEndCensus) -> Value {
    let ball = ex.ball();
    let rows: Vec<Value> = census
        .rows
        .iter()
        .map(|row| {
            json!({
                "n": row.n,
                "elements": row.elements,
                "dead_end_count": row.dead_end_count,
                "max_depth": row.max_depth,
                "max_retreat_depth": row.max_retreat_depth,
                "witness_key": hex::encode(ball.key(row.depth_witness)),
                "dead_end_witness": row.dead_end_witness.map(|v| witness(ball, v)),
                "depth_witness": witness(ball, row.depth_witness),
                "retreat_witness": witness(ball, row.retreat_witness),
                "horizon_limited": row.horizon_limited,
            })
        })
        .collect();
    json!({
        "model": ball.model().spec(),
        "ball_radius": ball.radius(),
        "guard": ex.guard().width(0),
        "total_dead_ends": census.total_dead_ends(),
        "rows": rows,
    })
}

pub fn relator_spans_csv(spans: &[RelatorSpan]) -> Result<String> {
    csv_string(
        &[
            "relator",
            "length",
            "bound",
            "base_radius",
            "base_points",
            "exhaustive",
            "max_span",
            "violations",
        ],
        |w| {
            for s in spans {
                w.write_record([
                    s.relator.clone(),
                    s.length.to_string(),
                    s.bound.to_string(),
                    s.base_radius.to_string(),
                    s.base_points.to_string(),
                    s.exhaustive.to_string(),
                    s.max_span.to_string(),
                    s.violations.to_string(),
                ])?;
            }
            Ok(())
        },
    )
}

pub fn theorem_json(report: &TheoremReport) -> Value {
    serde_json::to_value(report).expect("report serializes")
}

/// Human-readable summary of a theorem check.
pub fn theorem_summary(report: &TheoremReport) -> String {
    let mut s = String::new();
    s.push_str(&format!("presentation: {}\n", report.presentation));
    s.push_str(&format!(
        "model: {} (N = {}, guard {})\n",
        report.model, report.ball_radius, report.guard
    ));
    s.push_str(&format!("r = {}, n = 0..={}\n", report.r, report.n_max));
    s.push_str(&format!("thick-sphere counts: {:?}\n", report.counts));
    for span in &report.spans {
        s.push_str(&format!(
            "relator {}: max span {} (bound {}) over {} base points{}, {} violations\n",
            span.relator,
            span.max_span,
            span.bound,
            span.base_points,
            if span.exhaustive { "" } else { " (sampled)" },
            span.violations
        ));
    }
    s.push_str(&format!(
        "verdict: {}\n",
        match report.verdict {
            crate::theorem::Verdict::Pass => "pass",
            crate::theorem::Verdict::Fail => "fail",
        }
    ));
    s
}

/// Writes the annulus `B_{n+r} \ B_n` as an undirected DOT graph; vertices
/// carry their word length and annulus component id.
pub fn export_annulus_dot<W: Write>(ex: &Explorer, n: u32, r: u32, out: &mut W) -> Result<()> {
    let ball = ex.ball();
    ball.check_radius(n + r)?;
    let start = ball.ball_range(n).end as u32;
    let end = ball.ball_range(n + r).end as u32;
    let members: Vec<u32> = (start..end).collect();
    if members.len() > DOT_VERTEX_LIMIT {
        return Err(AnalysisError::AnnulusTooLarge {
            size: members.len(),
            limit: DOT_VERTEX_LIMIT,
        });
    }
    let components = induced_components(ball, ex.adjacency(), &members);
    let mut comp_of = vec![0usize; members.len()];
    for (id, comp) in components.iter().enumerate() {
        for &v in comp {
            comp_of[(v - start) as usize] = id;
        }
    }
    writeln!(out, "graph annulus {{")?;
    writeln!(
        out,
        "  // model {} n={} r={} vertices={} components={}",
        ball.model().spec(),
        n,
        r,
        members.len(),
        components.len()
    )?;
    for &v in &members {
        writeln!(
            out,
            "  \"{}\" [label=\"{}\\nlen={} comp={}\", length={}, component={}];",
            hex::encode(ball.key(v)),
            ball.model().display(ball.element(v)),
            ball.length(v),
            comp_of[(v - start) as usize],
            ball.length(v),
            comp_of[(v - start) as usize],
        )?;
    }
    let mut edges = BTreeSet::new();
    for &v in &members {
        for u in ex.adjacency().neighbors(v) {
            if u >= start && u < end && u != v {
                edges.insert((v.min(u), v.max(u)));
            }
        }
    }
    for (a, b) in edges {
        writeln!(
            out,
            "  \"{}\" -- \"{}\";",
            hex::encode(ball.key(a)),
            hex::encode(ball.key(b))
        )?;
    }
    writeln!(out, "}}")?;
    Ok(())
}
