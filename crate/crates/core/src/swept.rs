//! Face-based remap: signed swept regions between each old face and its new
//! position.
//!
//! The swept loop of a face running from vertex `a` to vertex `b` is
//! `Q_a Q_b P_b P_a`. Faces are stored in canonical direction (upwards for
//! vertical faces, rightwards for horizontal ones); the cell that traverses a
//! face in canonical direction counterclockwise gains the flux and the other
//! cell loses it.

use crate::geom::{clip_to_triangle, exact_sum, triangulate_quad, OrientedPolygon, EPS_AREA};
use crate::mesh::{CellIndex, EdgeIndex, StructuredQuadMesh};
use crate::remap::{check_inputs, old_densities, Method, RemapError, RemapResult};

/// Absolute slack when matching the piece sum against the loop area.
const PIECE_SUM_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq)]
pub struct SweptRegion {
    pub edge: EdgeIndex,
    /// `Q_a Q_b P_b P_a` for the canonical direction of the face.
    pub outline: OrientedPolygon,
    /// Signed parts of the outline inside individual old cells.
    pub pieces: Vec<(OrientedPolygon, CellIndex)>,
    pub signed_area: f64,
    /// Pieces dropped because their area was below [`EPS_AREA`].
    pub degenerate_pieces: usize,
}

/// Cells gaining and losing the flux of a canonical face.
pub fn face_cells(mesh: &StructuredQuadMesh, e: EdgeIndex) -> (Option<CellIndex>, Option<CellIndex>) {
    let cell = |i: Option<usize>, j: Option<usize>| {
        let c = CellIndex::new(i?, j?);
        mesh.contains_cell(c).then_some(c)
    };
    match e {
        EdgeIndex::Vertical { i, j } => (cell(i.checked_sub(1), Some(j)), cell(Some(i), Some(j))),
        EdgeIndex::Horizontal { i, j } => (cell(Some(i), Some(j)), cell(Some(i), j.checked_sub(1))),
    }
}

fn neighbourhood(mesh: &StructuredQuadMesh, e: EdgeIndex, reach: usize) -> Vec<CellIndex> {
    let (i, j) = e.ij();
    let (cols, rows) = match e {
        EdgeIndex::Vertical { .. } => (
            (i.saturating_sub(reach)..=i + reach - 1),
            (j.saturating_sub(reach)..=j + reach),
        ),
        EdgeIndex::Horizontal { .. } => (
            (i.saturating_sub(reach)..=i + reach),
            (j.saturating_sub(reach)..=j + reach - 1),
        ),
    };
    rows.flat_map(|cj| cols.clone().map(move |ci| CellIndex::new(ci, cj)))
        .filter(|&c| mesh.contains_cell(c))
        .collect()
}

pub fn swept_outline(old: &StructuredQuadMesh, new: &StructuredQuadMesh, e: EdgeIndex) -> OrientedPolygon {
    let [(ia, ja), (ib, jb)] = e.vertices();
    OrientedPolygon::new(vec![
        new.vertex(ia, ja),
        new.vertex(ib, jb),
        old.vertex(ib, jb),
        old.vertex(ia, ja),
    ])
}

fn split_by_cells(
    old: &StructuredQuadMesh,
    outline: &OrientedPolygon,
    cells: &[CellIndex],
) -> (Vec<(OrientedPolygon, CellIndex)>, usize) {
    let mut pieces = Vec::new();
    let mut dropped = 0;
    for &c in cells {
        for tri in triangulate_quad(old.cell_quad(c)) {
            let piece = clip_to_triangle(outline, tri);
            if piece.len() < 3 {
                continue;
            }
            if piece.signed_area().abs() <= EPS_AREA {
                dropped += 1;
                continue;
            }
            pieces.push((piece, c));
        }
    }
    (pieces, dropped)
}

fn piece_sum_matches(pieces: &[(OrientedPolygon, CellIndex)], total: f64) -> bool {
    let sum = exact_sum(pieces.iter().map(|(p, _)| p.signed_area()));
    let scale: f64 = pieces.iter().map(|(p, _)| p.signed_area().abs()).sum();
    (sum - total).abs() <= PIECE_SUM_TOL + 8.0 * f64::EPSILON * scale
}

/// Build the swept region of face `e` and split it by the old cells.
///
/// Pieces come from clipping the outline against each old cell around the
/// face; clipping preserves the winding integral, so self-intersecting
/// outlines split into lobes of opposite sign. Interior faces whose pieces do
/// not add up to the outline area fail with `AssumptionViolated`.
pub fn swept_region(
    e: EdgeIndex,
    old: &StructuredQuadMesh,
    new: &StructuredQuadMesh,
) -> Result<SweptRegion, RemapError> {
    let outline = swept_outline(old, new, e);
    let signed_area = outline.signed_area();
    let [(ia, ja), (ib, jb)] = e.vertices();
    if new.vertex(ia, ja) == old.vertex(ia, ja) && new.vertex(ib, jb) == old.vertex(ib, jb) {
        return Ok(SweptRegion {
            edge: e,
            outline,
            pieces: Vec::new(),
            signed_area,
            degenerate_pieces: 0,
        });
    }
    let boundary = old.is_boundary_edge(e);
    let mut result = None;
    for reach in [1, 2] {
        let (pieces, dropped) = split_by_cells(old, &outline, &neighbourhood(old, e, reach));
        if boundary || piece_sum_matches(&pieces, signed_area) {
            result = Some((pieces, dropped));
            break;
        }
    }
    let (pieces, degenerate_pieces) = result.ok_or_else(|| RemapError::AssumptionViolated {
        edge: e,
        detail: "swept region leaves the old cells around the face".to_string(),
    })?;
    Ok(SweptRegion {
        edge: e,
        outline,
        pieces,
        signed_area,
        degenerate_pieces,
    })
}

/// Signed mass of a swept region for per-old-cell densities (row-major).
pub fn swept_mass(region: &SweptRegion, old: &StructuredQuadMesh, densities: &[f64]) -> Result<f64, RemapError> {
    if densities.len() != old.num_cells() {
        return Err(RemapError::MissingDensity {
            expected: old.num_cells(),
            got: densities.len(),
        });
    }
    Ok(exact_sum(
        region
            .pieces
            .iter()
            .map(|(p, c)| p.signed_area() * densities[old.cell_id(*c)]),
    ))
}

fn cell_faces(c: CellIndex) -> [(EdgeIndex, f64); 4] {
    let (i, j) = (c.i, c.j);
    [
        (EdgeIndex::Horizontal { i, j }, 1.0),
        (EdgeIndex::Vertical { i: i + 1, j }, 1.0),
        (EdgeIndex::Horizontal { i, j: j + 1 }, -1.0),
        (EdgeIndex::Vertical { i, j }, -1.0),
    ]
}

/// Old cell area plus the signed swept areas of its four faces.
pub fn cell_area_fb(c: CellIndex, old: &StructuredQuadMesh, new: &StructuredQuadMesh) -> Result<f64, RemapError> {
    if (old.m(), old.n()) != (new.m(), new.n()) {
        return Err(RemapError::DimensionMismatch);
    }
    if !old.contains_cell(c) {
        return Err(crate::mesh::MeshError::OutOfBounds(format!("cell {c}")).into());
    }
    let mut terms = vec![old.cell_area(c)];
    for (e, sign) in cell_faces(c) {
        terms.push(sign * swept_outline(old, new, e).signed_area());
    }
    Ok(exact_sum(terms))
}

/// Face-based remap.
///
/// Boundary faces are skipped when they coincide in both meshes. If the
/// meshes cover different domains the remap still runs over all faces but
/// the conservation residual is reported as `None`.
pub fn remap_fb(
    old: &StructuredQuadMesh,
    new: &StructuredQuadMesh,
    old_masses: &[f64],
) -> Result<RemapResult, RemapError> {
    check_inputs(old, new, old_masses)?;
    let densities = old_densities(old, old_masses);
    let mut terms: Vec<Vec<f64>> = old_masses.iter().map(|&m| vec![m]).collect();
    let mut degeneracy_events = 0;

    for e in old.edges() {
        let region = swept_region(e, old, new)?;
        degeneracy_events += region.degenerate_pieces;
        if region.pieces.is_empty() {
            continue;
        }
        let mass = swept_mass(&region, old, &densities)?;
        let (gain, lose) = face_cells(old, e);
        if let Some(c) = gain {
            terms[old.cell_id(c)].push(mass);
        }
        if let Some(c) = lose {
            terms[old.cell_id(c)].push(-mass);
        }
    }
    let masses = terms.into_iter().map(exact_sum).collect();
    let mut r = RemapResult::assemble(Method::Fb, new, old_masses, masses, old.same_domain(new));
    r.degeneracy_events = degeneracy_events;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::Point2;

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
    fn identical_meshes_have_no_pieces() {
        let m = StructuredQuadMesh::unit_square(4, 4).unwrap();
        for e in m.edges() {
            let r = swept_region(e, &m, &m).unwrap();
            assert_eq!(r.signed_area, 0.0);
            assert!(r.pieces.is_empty());
        }
    }

    #[test]
    fn west_face_moved_in() {
        let old = StructuredQuadMesh::unit_square(2, 2).unwrap();
        // the west face of the single cell, traversed top to bottom
        let pts = [(0.1, 1.0), (0.1, 0.0), (0.0, 0.0), (0.0, 1.0)];
        let outline = OrientedPolygon::new(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect());
        assert!((outline.signed_area() + 0.1).abs() < 1e-15);
        // the same region through the canonical face with the cell losing it
        let new = StructuredQuadMesh::new(
            2,
            2,
            vec![
                Point2::new(0.1, 0.0),
                Point2::new(1.0, 0.0),
                Point2::new(0.1, 1.0),
                Point2::new(1.0, 1.0),
            ],
        )
        .unwrap();
        let e = EdgeIndex::Vertical { i: 0, j: 0 };
        let (gain, lose) = face_cells(&old, e);
        assert_eq!((gain, lose), (None, Some(CellIndex::new(0, 0))));
        assert!((swept_outline(&old, &new, e).signed_area() - 0.1).abs() < 1e-15);
        let a = cell_area_fb(CellIndex::new(0, 0), &old, &new).unwrap();
        assert!((a - 0.9).abs() < 1e-15);
    }

    #[test]
    fn east_face_moved_out() {
        let old = StructuredQuadMesh::unit_square(2, 2).unwrap();
        let new = StructuredQuadMesh::new(
            2,
            2,
            vec![
                Point2::new(0.0, 0.0),
                Point2::new(1.1, 0.0),
                Point2::new(0.0, 1.0),
                Point2::new(1.1, 1.0),
            ],
        )
        .unwrap();
        let e = EdgeIndex::Vertical { i: 1, j: 0 };
        assert!((swept_outline(&old, &new, e).signed_area() - 0.1).abs() < 1e-15);
        assert_eq!(face_cells(&old, e).0, Some(CellIndex::new(0, 0)));
        let a = cell_area_fb(CellIndex::new(0, 0), &old, &new).unwrap();
        assert!((a - 1.1).abs() < 1e-15);
    }

    #[test]
    fn one_vertex_shift_area_identity() {
        let old = StructuredQuadMesh::unit_square(4, 4).unwrap();
        let new = moved(&old, &[((1, 1), (0.05, 0.02))]);
        for c in old.cells() {
            let fb = cell_area_fb(c, &old, &new).unwrap();
            assert!((fb - new.cell_area(c)).abs() <= 1e-14, "{c}");
        }
    }

    #[test]
    fn uniform_density_gives_new_areas() {
        let old = StructuredQuadMesh::unit_square(5, 5).unwrap();
        let new = moved(
            &old,
            &[((1, 1), (0.05, 0.02)), ((2, 3), (-0.04, 0.06)), ((3, 2), (0.03, -0.05))],
        );
        let masses: Vec<f64> = old.cells().map(|c| old.cell_area(c)).collect();
        let r = remap_fb(&old, &new, &masses).unwrap();
        for c in new.cells() {
            assert!((r.masses[new.cell_id(c)] - new.cell_area(c)).abs() < 1e-15);
        }
        assert!(r.conservation_residual.unwrap() < 1e-14);
    }

    #[test]
    fn identical_meshes_keep_masses() {
        let m = StructuredQuadMesh::unit_square(4, 4).unwrap();
        let masses: Vec<f64> = (0..9).map(|k| k as f64 * 0.1 + 0.3).collect();
        let r = remap_fb(&m, &m, &masses).unwrap();
        assert_eq!(r.masses, masses);
    }

    #[test]
    fn straddling_region_weights_pieces() {
        // face V(1,1) pushed right so its region straddles rows 0 and 1
        let old = StructuredQuadMesh::unit_square(3, 3).unwrap();
        let new = moved(&old, &[((1, 1), (0.2, 0.1))]);
        let e = EdgeIndex::Vertical { i: 1, j: 0 };
        let r = swept_region(e, &old, &new).unwrap();
        let ones = vec![1.0; 4];
        let m1 = swept_mass(&r, &old, &ones).unwrap();
        assert!((m1 - r.signed_area).abs() < 1e-15);
        let dens = vec![1.0, 2.0, 1.0, 2.0];
        let m2 = swept_mass(&r, &old, &dens).unwrap();
        let right: f64 = r
            .pieces
            .iter()
            .filter(|(_, c)| c.i == 1)
            .map(|(p, _)| p.signed_area())
            .sum();
        assert!((m2 - (r.signed_area + right)).abs() < 1e-15);
        assert!(swept_mass(&r, &old, &[1.0]).is_err());
    }
}
