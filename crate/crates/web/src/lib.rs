//! Browser bindings: grid overlay, remap and swap-polygon census as JSON.

use quadremap::classify::case_census;
use quadremap::fields::DensityKind;
use quadremap::harness::{grid_pair, run_case, Family, HarnessError, RunConfig};
use quadremap::mesh::validate_assumptions;
use quadremap::swap::{census_check, sweep_swap_regions};
use quadremap::{Method, Point2, StructuredQuadMesh};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

/// Largest grid the page will build.
pub const MAX_NX: usize = 41;

fn config(family: &str, nx: usize, seed: u64) -> Result<RunConfig, HarnessError> {
    if !(3..=MAX_NX).contains(&nx) {
        return Err(HarnessError::InvalidValue {
            key: "nx".into(),
            value: format!("{nx} (allowed 3..={MAX_NX})"),
        });
    }
    let family: Family = family.parse().map_err(|_| HarnessError::InvalidValue {
        key: "family".into(),
        value: family.into(),
    })?;
    Ok(RunConfig {
        family,
        nx,
        seed,
        ..RunConfig::default()
    })
}

fn points(p: &[Point2]) -> Value {
    p.iter().map(|q| json!([q.x, q.y])).collect()
}

fn mesh_json(g: &StructuredQuadMesh) -> Value {
    json!({ "m": g.m(), "n": g.n(), "vertices": points(g.vertices()) })
}

/// Old and new grids plus the admissibility summary.
pub fn overlay(family: &str, nx: usize, seed: u64) -> Result<Value, HarnessError> {
    let pair = grid_pair(&config(family, nx, seed)?, nx)?;
    let r = validate_assumptions(&pair.old, &pair.new)?;
    Ok(json!({
        "old": mesh_json(&pair.old),
        "new": mesh_json(&pair.new),
        "seed": pair.seed,
        "reseeds": pair.reseeds,
        "a1_violations": r.a1_violations.len(),
        "a2_violations": r.a2_violations.len(),
        "a3_violations": r.a3_violations.len(),
        "count_formula_applicable": r.count_formula_applicable(),
    }))
}

/// Remapped densities on the new grid with error norms.
pub fn remap(family: &str, nx: usize, seed: u64, function: &str, method: &str) -> Result<Value, HarnessError> {
    let mut cfg = config(family, nx, seed)?;
    cfg.function = function
        .parse::<DensityKind>()
        .map_err(|e| HarnessError::InvalidValue {
            key: "function".into(),
            value: e.0,
        })?;
    cfg.method = method.parse::<Method>().map_err(|_| HarnessError::InvalidValue {
        key: "method".into(),
        value: method.into(),
    })?;
    let c = run_case(&cfg, nx)?;
    let new = &c.pair.new;
    let cells: Vec<Value> = new
        .cells()
        .map(|cell| json!({ "quad": points(&new.cell_quad(cell)), "density": c.result.densities[new.cell_id(cell)] }))
        .collect();
    Ok(json!({
        "cells": cells,
        "conservation_residual": c.result.conservation_residual,
        "linf_density": c.norms.linf_density,
        "linf_mass": c.norms.linf_mass,
        "polygon_count": c.result.polygon_count,
        "wall_time_ms": c.result.wall_time_ms,
    }))
}

/// Swap polygons, the count formula and the edge-label tally.
pub fn census(family: &str, nx: usize, seed: u64) -> Result<Value, HarnessError> {
    let pair = grid_pair(&config(family, nx, seed)?, nx)?;
    let sweep = sweep_swap_regions(&pair.old, &pair.new)?;
    let report = census_check(&pair.old, &pair.new).ok();
    let labels = case_census(&pair.old, &pair.new).labels;
    let polygons: Vec<Value> = sweep.polygons.iter().map(|p| points(&p.polygon.vertices)).collect();
    Ok(json!({
        "old": mesh_json(&pair.old),
        "new": mesh_json(&pair.new),
        "polygons": polygons,
        "polygon_count": sweep.polygons.len(),
        "expected": report.as_ref().and_then(|r| r.expected),
        "strips_match": report.as_ref().filter(|r| r.applicable).map(|r| r.strips_match()),
        "labels": labels,
    }))
}

fn to_js(v: Result<Value, HarnessError>) -> Result<String, JsError> {
    v.map(|v| v.to_string()).map_err(|e| JsError::new(&e.line()))
}

#[wasm_bindgen]
pub fn overlay_json(family: &str, nx: usize, seed: u64) -> Result<String, JsError> {
    to_js(overlay(family, nx, seed))
}

#[wasm_bindgen]
pub fn remap_json(family: &str, nx: usize, seed: u64, function: &str, method: &str) -> Result<String, JsError> {
    to_js(remap(family, nx, seed, function, method))
}

#[wasm_bindgen]
pub fn census_json(family: &str, nx: usize, seed: u64) -> Result<String, JsError> {
    to_js(census(family, nx, seed))
}
