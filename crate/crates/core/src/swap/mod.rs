//! Cell-intersection-based remap: the swap polygons where a new cell
//! overlaps an old cell other than its own counterpart.
//!
//! The vertical sweep walks each interior grid column `i` and, for every new
//! row, builds the arrangement of the old and new edges around the new
//! vertical edge. Faces lying in a new cell of column `i-1` or `i` and in an
//! old cell of the other column are swap polygons. The horizontal sweep runs
//! the same code on transposed meshes and keeps only polygons whose new and
//! old cells share a column, so corner pieces are emitted once.

mod arrangement;
mod census;

pub use census::{
    census_check, count_singular_points, polygon_count_formula, CensusReport, SingularPointCensus, StripCount,
};

use crate::geom::{exact_sum, OrientedPolygon, Point2, Segment};
use crate::mesh::{CellIndex, EdgeIndex, StructuredQuadMesh};
use crate::remap::{check_inputs, old_densities, Method, RemapError, RemapResult};
use arrangement::arrangement_faces;
use std::collections::BTreeMap;

/// Tolerance for the per-cell area identity checked after each sweep.
const AREA_IDENTITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Invading,
    Occupied,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Invading => "invading",
            Kind::Occupied => "occupied",
        }
    }
}

/// `T^b(owner_new) ∩ T^a(owner_old)` for two different cells. The polygon is
/// invading for `owner_new` and occupied for `owner_old`.
#[derive(Debug, Clone, PartialEq)]
pub struct SwapPolygon {
    pub polygon: OrientedPolygon,
    pub owner_old: CellIndex,
    pub owner_new: CellIndex,
    pub area: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SwapSweep {
    pub polygons: Vec<SwapPolygon>,
    /// Zero-area cycles met while tracing faces.
    pub degeneracy_events: usize,
}

fn segments_for(old: &StructuredQuadMesh, new: &StructuredQuadMesh, i: usize, r: usize) -> Vec<Segment> {
    let mut segs = vec![new.edge_segment(EdgeIndex::Vertical { i, j: r })];
    let rows = |lo: usize, hi: usize, limit: usize| r.saturating_sub(lo)..=(r + hi).min(limit);
    for s in rows(2, 2, old.n() - 2) {
        segs.push(old.edge_segment(EdgeIndex::Vertical { i, j: s }));
    }
    for j in [r, r + 1] {
        segs.push(new.edge_segment(EdgeIndex::Horizontal { i: i - 1, j }));
        segs.push(new.edge_segment(EdgeIndex::Horizontal { i, j }));
    }
    for s in rows(2, 3, old.n() - 1) {
        segs.push(old.edge_segment(EdgeIndex::Horizontal { i: i - 1, j: s }));
        segs.push(old.edge_segment(EdgeIndex::Horizontal { i, j: s }));
    }
    segs
}

fn sweep_columns(
    old: &StructuredQuadMesh,
    new: &StructuredQuadMesh,
    columns: std::ops::Range<usize>,
    keep: impl Fn(CellIndex, CellIndex) -> bool,
) -> Result<SwapSweep, RemapError> {
    let mut out = SwapSweep::default();
    for i in columns {
        for r in 0..old.n() - 1 {
            let new_cells: Vec<(CellIndex, OrientedPolygon)> = [i - 1, i]
                .into_iter()
                .map(|c| CellIndex::new(c, r))
                .map(|c| (c, new.cell_polygon(c)))
                .collect();
            let old_cells: Vec<(CellIndex, OrientedPolygon)> = (r.saturating_sub(3)..=(r + 3).min(old.n() - 2))
                .flat_map(|s| [CellIndex::new(i - 1, s), CellIndex::new(i, s)])
                .map(|c| (c, old.cell_polygon(c)))
                .collect();

            let faces = arrangement_faces(&segments_for(old, new, i, r))?;
            out.degeneracy_events += faces.degenerate;
            for face in faces.faces {
                let Some(p) = face.interior_point() else {
                    out.degeneracy_events += 1;
                    continue;
                };
                let Some(&(cn, _)) = new_cells.iter().find(|(_, poly)| poly.winding_number(p) != 0) else {
                    continue;
                };
                let Some(&(co, _)) = old_cells.iter().find(|(_, poly)| poly.winding_number(p) != 0) else {
                    continue;
                };
                if cn.i != co.i && keep(cn, co) {
                    let area = face.signed_area();
                    out.polygons.push(SwapPolygon {
                        polygon: face,
                        owner_old: co,
                        owner_new: cn,
                        area,
                    });
                }
            }
        }
    }
    Ok(out)
}

fn transpose_cell(c: CellIndex) -> CellIndex {
    CellIndex::new(c.j, c.i)
}

/// Enumerate all swap polygons by alternating-direction sweeps.
pub fn sweep_swap_regions(old: &StructuredQuadMesh, new: &StructuredQuadMesh) -> Result<SwapSweep, RemapError> {
    if (old.m(), old.n()) != (new.m(), new.n()) {
        return Err(RemapError::DimensionMismatch);
    }
    if !old.same_domain(new) {
        return Err(RemapError::Inapplicable(
            "boundaries differ, the meshes cover different domains".to_string(),
        ));
    }
    let mut sweep = sweep_columns(old, new, 1..old.m() - 1, |_, _| true)?;
    let (old_t, new_t) = (old.transposed(), new.transposed());
    let across = sweep_columns(&old_t, &new_t, 1..old_t.m() - 1, |cn, co| cn.j == co.j)?;
    sweep.degeneracy_events += across.degeneracy_events;
    for p in across.polygons {
        sweep.polygons.push(SwapPolygon {
            polygon: p.polygon.swapped().reversed(),
            owner_old: transpose_cell(p.owner_old),
            owner_new: transpose_cell(p.owner_new),
            area: p.area,
        });
    }
    Ok(sweep)
}

/// Polygons emitted by the vertical sweep along grid column `i`.
pub(crate) fn strip_polygons(
    old: &StructuredQuadMesh,
    new: &StructuredQuadMesh,
    i: usize,
) -> Result<Vec<SwapPolygon>, RemapError> {
    Ok(sweep_columns(old, new, i..i + 1, |_, _| true)?.polygons)
}

/// Invading and occupied areas of one cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct InvadingOccupied {
    /// Area of the new cell outside its old counterpart.
    pub invading: f64,
    /// Area of the old cell covered by other new cells.
    pub occupied: f64,
    /// Invading area split by the old cell it lies in.
    pub invading_by_old: BTreeMap<CellIndex, f64>,
    /// Occupied area split by the new cell covering it.
    pub occupied_by_new: BTreeMap<CellIndex, f64>,
}

pub fn invading_occupied(c: CellIndex, polygons: &[SwapPolygon]) -> InvadingOccupied {
    let mut inv: BTreeMap<CellIndex, Vec<f64>> = BTreeMap::new();
    let mut occ: BTreeMap<CellIndex, Vec<f64>> = BTreeMap::new();
    for p in polygons {
        if p.owner_new == c {
            inv.entry(p.owner_old).or_default().push(p.area);
        }
        if p.owner_old == c {
            occ.entry(p.owner_new).or_default().push(p.area);
        }
    }
    let invading_by_old: BTreeMap<CellIndex, f64> = inv.into_iter().map(|(k, v)| (k, exact_sum(v))).collect();
    let occupied_by_new: BTreeMap<CellIndex, f64> = occ.into_iter().map(|(k, v)| (k, exact_sum(v))).collect();
    InvadingOccupied {
        invading: exact_sum(invading_by_old.values().copied()),
        occupied: exact_sum(occupied_by_new.values().copied()),
        invading_by_old,
        occupied_by_new,
    }
}

/// Net area exchanged between new cell `c` and each neighbour `k`:
/// `μ(T^b_c ∩ T^a_k) − μ(T^a_c ∩ T^b_k)`.
pub fn generalized_flux(c: CellIndex, polygons: &[SwapPolygon]) -> BTreeMap<CellIndex, f64> {
    let mut terms: BTreeMap<CellIndex, Vec<f64>> = BTreeMap::new();
    for p in polygons {
        if p.owner_new == c {
            terms.entry(p.owner_old).or_default().push(p.area);
        }
        if p.owner_old == c {
            terms.entry(p.owner_new).or_default().push(-p.area);
        }
    }
    terms.into_iter().map(|(k, v)| (k, exact_sum(v))).collect()
}

/// Cell-intersection-based remap.
pub fn remap_cib(
    old: &StructuredQuadMesh,
    new: &StructuredQuadMesh,
    old_masses: &[f64],
) -> Result<RemapResult, RemapError> {
    check_inputs(old, new, old_masses)?;
    let sweep = sweep_swap_regions(old, new)?;
    let densities = old_densities(old, old_masses);

    let mut terms: Vec<Vec<f64>> = old_masses.iter().map(|&m| vec![m]).collect();
    let mut area_terms: Vec<Vec<f64>> = old.cells().map(|c| vec![old.cell_area(c)]).collect();
    for p in &sweep.polygons {
        let (kn, ko) = (old.cell_id(p.owner_new), old.cell_id(p.owner_old));
        let mass = p.area * densities[ko];
        terms[kn].push(mass);
        terms[ko].push(-mass);
        area_terms[kn].push(p.area);
        area_terms[ko].push(-p.area);
    }
    for c in old.cells() {
        let k = old.cell_id(c);
        let area = exact_sum(area_terms[k].iter().copied());
        if (area - new.cell_area(c)).abs() > AREA_IDENTITY_TOL {
            return Err(RemapError::AssumptionViolated {
                edge: EdgeIndex::Vertical { i: c.i, j: c.j },
                detail: format!("swap polygons of cell {c} do not reproduce its new area"),
            });
        }
    }
    let masses = terms.into_iter().map(exact_sum).collect();
    let mut r = RemapResult::assemble(Method::Cib, new, old_masses, masses, true);
    r.polygon_count = Some(sweep.polygons.len());
    r.degeneracy_events = sweep.degeneracy_events;
    if let Ok(s) = count_singular_points(old, new) {
        r.ns_xx = Some(s.ns_xx);
        r.ns_yy = Some(s.ns_yy);
    }
    Ok(r)
}

/// Vertex list as a quoted WKT-style polygon string.
pub fn polygon_wkt(p: &OrientedPolygon) -> String {
    let mut pts: Vec<Point2> = p.vertices.clone();
    if let Some(&first) = pts.first() {
        pts.push(first);
    }
    let body: Vec<String> = pts.iter().map(|q| format!("{:.16e} {:.16e}", q.x, q.y)).collect();
    format!("\"POLYGON (({}))\"", body.join(", "))
}

/// CSV dump with one invading and one occupied row per polygon, 1-based
/// indices.
pub fn polygons_csv(polygons: &[SwapPolygon]) -> String {
    let mut out = String::from("i_new,j_new,i_old,j_old,kind,area,vertices\n");
    for p in polygons {
        for kind in [Kind::Invading, Kind::Occupied] {
            out.push_str(&format!(
                "{},{},{},{},{},{:.16e},{}\n",
                p.owner_new.i + 1,
                p.owner_new.j + 1,
                p.owner_old.i + 1,
                p.owner_old.j + 1,
                kind.as_str(),
                p.area,
                polygon_wkt(&p.polygon)
            ));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::clip_convex;

    type VertexMove = ((usize, usize), (f64, f64));

    fn moved(mesh: &StructuredQuadMesh, moves: &[VertexMove]) -> StructuredQuadMesh {
        let mut v = mesh.vertices().to_vec();
        for &((i, j), (dx, dy)) in moves {
            let k = j * mesh.m() + i;
            v[k] = Point2::new(v[k].x + dx, v[k].y + dy);
        }
        StructuredQuadMesh::new(mesh.m(), mesh.n(), v).unwrap()
    }

    #[test]
    fn identical_meshes_have_no_polygons() {
        let m = StructuredQuadMesh::unit_square(5, 5).unwrap();
        let s = sweep_swap_regions(&m, &m).unwrap();
        assert!(s.polygons.is_empty());
        let io = invading_occupied(CellIndex::new(1, 1), &s.polygons);
        assert_eq!((io.invading, io.occupied), (0.0, 0.0));
        let masses: Vec<f64> = (0..16).map(|k| 0.5 + k as f64).collect();
        assert_eq!(remap_cib(&m, &m, &masses).unwrap().masses, masses);
    }

    #[test]
    fn one_vertex_shift_matches_clipping() {
        let old = StructuredQuadMesh::unit_square(4, 4).unwrap();
        let new = moved(&old, &[((1, 1), (0.05, 0.02))]);
        let s = sweep_swap_regions(&old, &new).unwrap();
        for p in &s.polygons {
            let oracle = clip_convex(&new.cell_polygon(p.owner_new), &old.cell_polygon(p.owner_old)).unwrap();
            assert!((oracle.signed_area() - p.area).abs() <= 1e-13);
        }
        // every nonempty off-diagonal overlap is present
        for cn in new.cells() {
            for co in old.cells() {
                if cn == co {
                    continue;
                }
                let a = clip_convex(&new.cell_polygon(cn), &old.cell_polygon(co))
                    .unwrap()
                    .signed_area();
                let got: f64 = s
                    .polygons
                    .iter()
                    .filter(|p| p.owner_new == cn && p.owner_old == co)
                    .map(|p| p.area)
                    .sum();
                assert!((a - got).abs() <= 1e-13, "{cn} {co} {a} {got}");
            }
        }
        for c in old.cells() {
            let io = invading_occupied(c, &s.polygons);
            let d = new.cell_area(c) - old.cell_area(c);
            assert!((io.invading - io.occupied - d).abs() <= 1e-13);
            let fa = generalized_flux(c, &s.polygons);
            assert!(fa.len() <= 9);
            assert!((exact_sum(fa.values().copied()) - d).abs() <= 1e-13);
        }
    }

    #[test]
    fn cib_conserves_uniform_density() {
        let old = StructuredQuadMesh::unit_square(5, 5).unwrap();
        let new = moved(
            &old,
            &[((1, 1), (0.05, 0.02)), ((2, 3), (-0.04, 0.06)), ((3, 2), (0.03, -0.05))],
        );
        let masses: Vec<f64> = old.cells().map(|c| old.cell_area(c)).collect();
        let r = remap_cib(&old, &new, &masses).unwrap();
        for c in new.cells() {
            assert!((r.masses[new.cell_id(c)] - new.cell_area(c)).abs() < 1e-15);
        }
        assert!(r.conservation_residual.unwrap() < 1e-14);
    }

    #[test]
    fn sliding_boundary_vertices_match_fb() {
        let old = StructuredQuadMesh::unit_square(4, 4).unwrap();
        let new = moved(
            &old,
            &[((1, 0), (0.05, 0.0)), ((3, 2), (0.0, -0.04)), ((1, 1), (0.03, 0.02))],
        );
        let masses: Vec<f64> = old.cells().map(|c| 1.0 + c.i as f64 + 2.0 * c.j as f64).collect();
        let cib = remap_cib(&old, &new, &masses).unwrap();
        let fb = crate::swept::remap_fb(&old, &new, &masses).unwrap();
        for (a, b) in cib.masses.iter().zip(&fb.masses) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(cib.conservation_residual.unwrap() < 1e-15);
    }

    #[test]
    fn differing_boundaries_are_rejected() {
        let old = StructuredQuadMesh::unit_square(3, 3).unwrap();
        let new = moved(&old, &[((1, 0), (0.1, 0.05))]);
        assert!(matches!(
            sweep_swap_regions(&old, &new),
            Err(RemapError::Inapplicable(_))
        ));
    }

    #[test]
    fn csv_has_two_rows_per_polygon() {
        let old = StructuredQuadMesh::unit_square(3, 3).unwrap();
        let new = moved(&old, &[((1, 1), (0.05, 0.02))]);
        let s = sweep_swap_regions(&old, &new).unwrap();
        let csv = polygons_csv(&s.polygons);
        assert_eq!(csv.lines().count(), 1 + 2 * s.polygons.len());
        assert!(csv.contains("invading") && csv.contains("occupied"));
    }
}
