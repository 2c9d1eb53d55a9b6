use super::{orient2d, point_segment_distance, GeomError, Point2, EPS_GEOM};
use crate::mesh::{CellIndex, StructuredQuadMesh};

/// Position of a point relative to an old vertex `P_{i,j}`: which of the four
/// cells meeting there contains it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Quadrant {
    /// `C_{i+1/2, j+1/2}`
    RU,
    /// `C_{i-1/2, j+1/2}`
    LU,
    /// `C_{i-1/2, j-1/2}`
    LD,
    /// `C_{i+1/2, j-1/2}`
    RD,
}

impl Quadrant {
    /// Tie-break order: Right before Left, Up before Down.
    pub const PRIORITY: [Quadrant; 4] = [Quadrant::RU, Quadrant::RD, Quadrant::LU, Quadrant::LD];

    pub fn is_right(self) -> bool {
        matches!(self, Quadrant::RU | Quadrant::RD)
    }

    pub fn is_up(self) -> bool {
        matches!(self, Quadrant::RU | Quadrant::LU)
    }

    /// Region number 1..=4 (RU, LU, LD, RD) used for the A/B endpoint regions.
    pub fn region_number(self) -> u8 {
        match self {
            Quadrant::RU => 1,
            Quadrant::LU => 2,
            Quadrant::LD => 3,
            Quadrant::RD => 4,
        }
    }

    pub fn mirrored(self) -> Quadrant {
        match self {
            Quadrant::RU => Quadrant::LU,
            Quadrant::LU => Quadrant::RU,
            Quadrant::LD => Quadrant::RD,
            Quadrant::RD => Quadrant::LD,
        }
    }

    /// The cell around vertex `(i, j)` this quadrant names, if it exists.
    pub fn cell(self, mesh: &StructuredQuadMesh, i: usize, j: usize) -> Option<CellIndex> {
        let ci = if self.is_right() { Some(i) } else { i.checked_sub(1) }?;
        let cj = if self.is_up() { Some(j) } else { j.checked_sub(1) }?;
        (ci + 1 < mesh.m() && cj + 1 < mesh.n()).then_some(CellIndex::new(ci, cj))
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Quadrant::RU => "RU",
            Quadrant::LU => "LU",
            Quadrant::LD => "LD",
            Quadrant::RD => "RD",
        }
    }
}

impl std::fmt::Display for Quadrant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Assignment {
    pub quadrant: Quadrant,
    pub cell: CellIndex,
    /// The point lies on one of the four half-edges leaving the vertex.
    pub on_boundary: bool,
}

/// Closed wedge swept counterclockwise from ray `p→a` to ray `p→b`.
fn in_wedge(p: Point2, a: Point2, b: Point2, q: Point2) -> bool {
    let ab = orient2d(p, a, b);
    let aq = orient2d(p, a, q);
    let qb = orient2d(p, q, b);
    if ab >= 0.0 {
        aq >= 0.0 && qb >= 0.0
    } else {
        aq >= 0.0 || qb >= 0.0
    }
}

/// Assign `q` to one of the old cells around vertex `(i, j)`.
///
/// Interior vertices use signed triangle areas against the four half-edges
/// leaving the vertex. The winning wedge is confirmed by a point-in-cell test;
/// non-convex cells and boundary vertices fall back to testing every existing
/// cell in tie-break order.
pub fn assign_vertex(q: Point2, mesh: &StructuredQuadMesh, vertex: (usize, usize)) -> Result<Assignment, GeomError> {
    if !q.is_finite() {
        return Err(GeomError::NonFinite);
    }
    let (i, j) = vertex;
    let p = mesh.vertex(i, j);
    let interior = i > 0 && j > 0 && i + 1 < mesh.m() && j + 1 < mesh.n();

    let mut on_boundary = false;
    let neighbours = [(i + 1, j), (i, j + 1), (i.wrapping_sub(1), j), (i, j.wrapping_sub(1))];
    for (a, b) in neighbours {
        if a < mesh.m() && b < mesh.n() && point_segment_distance(q, p, mesh.vertex(a, b)) <= EPS_GEOM {
            on_boundary = true;
        }
    }

    if interior {
        let right = mesh.vertex(i + 1, j);
        let up = mesh.vertex(i, j + 1);
        let left = mesh.vertex(i - 1, j);
        let down = mesh.vertex(i, j - 1);
        for quadrant in Quadrant::PRIORITY {
            let (a, b) = match quadrant {
                Quadrant::RU => (right, up),
                Quadrant::LU => (up, left),
                Quadrant::LD => (left, down),
                Quadrant::RD => (down, right),
            };
            if in_wedge(p, a, b, q) {
                let cell = quadrant.cell(mesh, i, j).expect("interior vertex has four cells");
                if mesh.cell_polygon(cell).contains_closed(q) {
                    return Ok(Assignment {
                        quadrant,
                        cell,
                        on_boundary,
                    });
                }
                break;
            }
        }
    }

    for quadrant in Quadrant::PRIORITY {
        if let Some(cell) = quadrant.cell(mesh, i, j) {
            if mesh.cell_polygon(cell).contains_closed(q) {
                return Ok(Assignment {
                    quadrant,
                    cell,
                    on_boundary,
                });
            }
        }
    }
    Err(GeomError::OutsidePatch { x: q.x, y: q.y, i, j })
}
