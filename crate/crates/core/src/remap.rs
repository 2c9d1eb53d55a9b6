//! Shared remap result type and method dispatch.

use crate::geom::{exact_sum, GeomError};
use crate::mesh::{CellIndex, EdgeIndex, MeshError, StructuredQuadMesh};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Face-based: signed swept regions of every face.
    Fb,
    /// Cell-intersection-based: explicit swap polygons.
    Cib,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Fb => "fb",
            Method::Cib => "cib",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fb" => Ok(Method::Fb),
            "cib" => Ok(Method::Cib),
            other => Err(format!("unknown method `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RemapError {
    #[error("old and new meshes differ in size")]
    DimensionMismatch,
    #[error("expected {expected} cell masses, got {got}")]
    MissingDensity { expected: usize, got: usize },
    #[error("mass of cell {0} is not finite")]
    NonFiniteMass(CellIndex),
    #[error("assumption violated at {edge}: {detail}")]
    AssumptionViolated { edge: EdgeIndex, detail: String },
    #[error("curves {0} overlap along a segment")]
    CollinearCurves(String),
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Mesh(#[from] MeshError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemapResult {
    pub method: Method,
    /// New-mesh masses, row-major cell order.
    pub masses: Vec<f64>,
    pub densities: Vec<f64>,
    /// Shoelace areas of the new cells.
    pub areas: Vec<f64>,
    pub old_total: f64,
    pub new_total: f64,
    /// `|Σ new − Σ old| / Σ old`; `None` when the meshes cover different
    /// domains.
    pub conservation_residual: Option<f64>,
    pub polygon_count: Option<usize>,
    pub ns_xx: Option<usize>,
    pub ns_yy: Option<usize>,
    pub degeneracy_events: usize,
    pub wall_time_ms: f64,
}

impl RemapResult {
    pub(crate) fn assemble(
        method: Method,
        new: &StructuredQuadMesh,
        old_masses: &[f64],
        masses: Vec<f64>,
        conserving: bool,
    ) -> RemapResult {
        let areas: Vec<f64> = new.cells().map(|c| new.cell_area(c)).collect();
        let densities = masses.iter().zip(&areas).map(|(m, a)| m / a).collect();
        let old_total = exact_sum(old_masses.iter().copied());
        let new_total = exact_sum(masses.iter().copied());
        let diff = (new_total - old_total).abs();
        let residual = if old_total != 0.0 { diff / old_total.abs() } else { diff };
        RemapResult {
            method,
            masses,
            densities,
            areas,
            old_total,
            new_total,
            conservation_residual: conserving.then_some(residual),
            polygon_count: None,
            ns_xx: None,
            ns_yy: None,
            degeneracy_events: 0,
            wall_time_ms: 0.0,
        }
    }
}

pub(crate) fn check_inputs(
    old: &StructuredQuadMesh,
    new: &StructuredQuadMesh,
    old_masses: &[f64],
) -> Result<(), RemapError> {
    if (old.m(), old.n()) != (new.m(), new.n()) {
        return Err(RemapError::DimensionMismatch);
    }
    if old_masses.len() != old.num_cells() {
        return Err(RemapError::MissingDensity {
            expected: old.num_cells(),
            got: old_masses.len(),
        });
    }
    if let Some(c) = old.cells().find(|&c| !old_masses[old.cell_id(c)].is_finite()) {
        return Err(RemapError::NonFiniteMass(c));
    }
    Ok(())
}

/// Piecewise-constant densities of the old mesh.
pub(crate) fn old_densities(old: &StructuredQuadMesh, old_masses: &[f64]) -> Vec<f64> {
    old.cells()
        .map(|c| old_masses[old.cell_id(c)] / old.cell_area(c))
        .collect()
}

/// Remap `old_masses` with the chosen method and record wall time.
pub fn remap(
    old: &StructuredQuadMesh,
    new: &StructuredQuadMesh,
    old_masses: &[f64],
    method: Method,
) -> Result<RemapResult, RemapError> {
    let (r, ms) = timed(|| match method {
        Method::Fb => crate::swept::remap_fb(old, new, old_masses),
        Method::Cib => crate::swap::remap_cib(old, new, old_masses),
    });
    let mut r = r?;
    r.wall_time_ms = ms;
    Ok(r)
}

/// Result of `f` and its wall time in milliseconds; the time is zero where
/// the target has no clock.
fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    #[cfg(not(all(target_arch = "wasm32", target_os = "unknown")))]
    {
        let start = std::time::Instant::now();
        let out = f();
        (out, start.elapsed().as_secs_f64() * 1e3)
    }
    #[cfg(all(target_arch = "wasm32", target_os = "unknown"))]
    {
        (f(), 0.0)
    }
}
