//! Test densities, initial cell masses and error norms.

use crate::geom::{exact_sum, OrientedPolygon, Point2};
use crate::mesh::StructuredQuadMesh;
use crate::remap::RemapResult;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown density `{0}`")]
pub struct UnknownKind(pub String);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DensityKind {
    Franke,
    Tanh,
    Peak,
    Uniform,
}

impl DensityKind {
    pub const ALL: [DensityKind; 4] = [
        DensityKind::Uniform,
        DensityKind::Franke,
        DensityKind::Tanh,
        DensityKind::Peak,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DensityKind::Franke => "franke",
            DensityKind::Tanh => "tanh",
            DensityKind::Peak => "peak",
            DensityKind::Uniform => "uniform",
        }
    }

    pub fn eval(self, x: f64, y: f64) -> f64 {
        eval_density(self, x, y)
    }
}

impl std::fmt::Display for DensityKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for DensityKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "franke" => Ok(DensityKind::Franke),
            "tanh" => Ok(DensityKind::Tanh),
            "peak" => Ok(DensityKind::Peak),
            "uniform" => Ok(DensityKind::Uniform),
            _ => Err(UnknownKind(s.to_string())),
        }
    }
}

pub fn franke(x: f64, y: f64) -> f64 {
    let (a, b) = (9.0 * x, 9.0 * y);
    0.75 * (-((a - 2.0).powi(2) + (b - 2.0).powi(2)) / 4.0).exp()
        + 0.75 * (-(a + 1.0).powi(2) / 49.0 - (b + 1.0) / 10.0).exp()
        + 0.5 * (-((a - 7.0).powi(2) + (b - 3.0).powi(2)) / 4.0).exp()
        - 0.2 * (-(a - 4.0).powi(2) - (b - 7.0).powi(2)).exp()
}

pub fn eval_density(kind: DensityKind, x: f64, y: f64) -> f64 {
    match kind {
        DensityKind::Franke => franke(x, y),
        DensityKind::Tanh => (y - 15.0 * x + 6.0).tanh() + 1.2,
        DensityKind::Peak => {
            let r = (x - 0.5).hypot(y - 0.5);
            if r > 0.25 {
                0.0
            } else {
                (4.0 * (0.25 - r)).max(0.001)
            }
        }
        DensityKind::Uniform => 1.0,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CellMassField {
    pub masses: Vec<f64>,
    pub areas: Vec<f64>,
    pub densities: Vec<f64>,
}

const GAUSS5: [(f64, f64); 5] = [
    (-0.906_179_845_938_664, 0.236_926_885_056_189_08),
    (-0.538_469_310_105_683_1, 0.478_628_670_499_366_47),
    (0.0, 128.0 / 225.0),
    (0.538_469_310_105_683_1, 0.478_628_670_499_366_47),
    (0.906_179_845_938_664, 0.236_926_885_056_189_08),
];

/// 5x5 Gauss–Legendre weights `w_i w_j det J` and image points on the
/// bilinear map of the reference square onto `q` (counterclockwise).
fn gauss_points(q: [Point2; 4]) -> impl Iterator<Item = (f64, Point2)> {
    GAUSS5.into_iter().flat_map(move |(s, ws)| {
        GAUSS5.into_iter().map(move |(t, wt)| {
            let n = [
                (1.0 - s) * (1.0 - t) / 4.0,
                (1.0 + s) * (1.0 - t) / 4.0,
                (1.0 + s) * (1.0 + t) / 4.0,
                (1.0 - s) * (1.0 + t) / 4.0,
            ];
            let ds = [-(1.0 - t) / 4.0, (1.0 - t) / 4.0, (1.0 + t) / 4.0, -(1.0 + t) / 4.0];
            let dt = [-(1.0 - s) / 4.0, -(1.0 + s) / 4.0, (1.0 + s) / 4.0, (1.0 - s) / 4.0];
            let comb = |w: &[f64; 4]| {
                w.iter().zip(&q).fold(Point2::new(0.0, 0.0), |acc, (c, p)| {
                    Point2::new(acc.x + c * p.x, acc.y + c * p.y)
                })
            };
            let (xs, xt) = (comb(&ds), comb(&dt));
            (ws * wt * (xs.x * xt.y - xt.x * xs.y), comb(&n))
        })
    })
}

/// Integral of `f` over the bilinear cell on `q`, written as the quadrature
/// mean of `f` times the shoelace area so that constants integrate to the
/// exact polygon area.
pub fn integrate_bilinear(q: [Point2; 4], f: impl Fn(f64, f64) -> f64) -> f64 {
    let (weights, values): (Vec<f64>, Vec<f64>) = gauss_points(q).map(|(w, p)| (w, w * f(p.x, p.y))).unzip();
    let area = OrientedPolygon::new(q.to_vec()).signed_area();
    area * (exact_sum(values) / exact_sum(weights))
}

/// Cell masses of an arbitrary density by 5x5 Gauss–Legendre quadrature.
pub fn init_masses_with(mesh: &StructuredQuadMesh, f: impl Fn(f64, f64) -> f64) -> CellMassField {
    let masses: Vec<f64> = mesh
        .cells()
        .map(|c| integrate_bilinear(mesh.cell_quad(c), &f))
        .collect();
    let areas: Vec<f64> = mesh.cells().map(|c| mesh.cell_area(c)).collect();
    let densities = masses.iter().zip(&areas).map(|(m, a)| m / a).collect();
    CellMassField {
        masses,
        areas,
        densities,
    }
}

pub fn init_cell_masses(mesh: &StructuredQuadMesh, kind: DensityKind) -> CellMassField {
    init_masses_with(mesh, |x, y| eval_density(kind, x, y))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    pub linf_density: f64,
    pub linf_mass: f64,
}

/// Maximum density and mass errors against the exact density at each new
/// cell's vertex average, using new cell areas.
pub fn error_norms(result: &RemapResult, kind: DensityKind, new: &StructuredQuadMesh) -> ErrorNorms {
    let mut norms = ErrorNorms {
        linf_density: 0.0,
        linf_mass: 0.0,
    };
    for c in new.cells() {
        let k = new.cell_id(c);
        let centre = new.cell_polygon(c).vertex_mean();
        let err = result.densities[k] - eval_density(kind, centre.x, centre.y);
        norms.linf_density = norms.linf_density.max(err.abs());
        norms.linf_mass = norms.linf_mass.max((err * result.areas[k]).abs());
    }
    norms
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_values() {
        assert_eq!(eval_density(DensityKind::Peak, 0.5, 0.5), 1.0);
        assert_eq!(eval_density(DensityKind::Peak, 0.0, 0.0), 0.0);
        assert_eq!(eval_density(DensityKind::Peak, 0.5, 0.7499), 0.001);
        assert!((eval_density(DensityKind::Tanh, 0.4, 0.0) - 1.2).abs() < 1e-15);
        assert!((eval_density(DensityKind::Franke, 0.0, 0.0) - 0.766_419).abs() < 1e-5);
        assert_eq!("Peak".parse::<DensityKind>().unwrap(), DensityKind::Peak);
        assert!("gauss".parse::<DensityKind>().is_err());
    }

    #[test]
    fn quadrature_exactness() {
        let m = StructuredQuadMesh::unit_square(2, 2).unwrap();
        let f = init_masses_with(&m, |x, _| x);
        assert!((f.masses[0] - 0.5).abs() < 1e-15);
        let dyadic = StructuredQuadMesh::unit_square(9, 9).unwrap();
        let u = init_cell_masses(&dyadic, DensityKind::Uniform);
        assert!(u.masses.iter().all(|&mm| mm == 1.0 / 64.0));
        // decimal spacing: the stored coordinates are rounded, the mass is
        // still the exact area of the stored cell
        let g = StructuredQuadMesh::unit_square(11, 11).unwrap();
        let u = init_cell_masses(&g, DensityKind::Uniform);
        assert_eq!(u.masses, u.areas);
        assert!(u.densities.iter().all(|&d| d == 1.0));
    }
}
