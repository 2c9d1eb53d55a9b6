//! Structured quadrilateral meshes and their local neighbourhoods.
//!
//! Indices are 0-based in the API: vertex `(i, j)` sits at column `i`, row
//! `j`; cell `(i, j)` has lower-left vertex `(i, j)`. Reports and file formats
//! print 1-based indices.

mod io;
mod validate;

pub use io::{read_mesh, write_mesh};
pub use validate::{validate_assumptions, A2Violation, A3Violation, AssumptionReport, Curve};

use crate::geom::{
    orient2d, point_segment_distance, segment_intersection, GeomError, OrientedPolygon, Point2, Segment, EPS_GEOM,
};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MeshError {
    #[error("mesh needs at least 2x2 vertices, got {m}x{n}")]
    TooSmall { m: usize, n: usize },
    #[error("expected {expected} points, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("cell {0} is not a simple positively oriented quadrilateral")]
    NonSimpleCell(CellIndex),
    #[error("index out of bounds: {0}")]
    OutOfBounds(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for MeshError {
    fn from(e: std::io::Error) -> Self {
        MeshError::Io(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellIndex {
    pub i: usize,
    pub j: usize,
}

impl CellIndex {
    pub const fn new(i: usize, j: usize) -> Self {
        CellIndex { i, j }
    }
}

impl std::fmt::Display for CellIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{})", self.i + 1, self.j + 1)
    }
}

/// A mesh edge. `Vertical { i, j }` joins vertices `(i, j)` and `(i, j+1)`;
/// `Horizontal { i, j }` joins `(i, j)` and `(i+1, j)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeIndex {
    Vertical { i: usize, j: usize },
    Horizontal { i: usize, j: usize },
}

impl EdgeIndex {
    pub fn is_vertical(self) -> bool {
        matches!(self, EdgeIndex::Vertical { .. })
    }

    pub fn ij(self) -> (usize, usize) {
        match self {
            EdgeIndex::Vertical { i, j } | EdgeIndex::Horizontal { i, j } => (i, j),
        }
    }

    /// The same edge in the transposed mesh.
    pub fn transposed(self) -> EdgeIndex {
        match self {
            EdgeIndex::Vertical { i, j } => EdgeIndex::Horizontal { i: j, j: i },
            EdgeIndex::Horizontal { i, j } => EdgeIndex::Vertical { i: j, j: i },
        }
    }

    /// Endpoint vertex indices, start first.
    pub fn vertices(self) -> [(usize, usize); 2] {
        match self {
            EdgeIndex::Vertical { i, j } => [(i, j), (i, j + 1)],
            EdgeIndex::Horizontal { i, j } => [(i, j), (i + 1, j)],
        }
    }
}

impl std::fmt::Display for EdgeIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            EdgeIndex::Vertical { i, j } => write!(f, "V({},{})", i + 1, j + 1),
            EdgeIndex::Horizontal { i, j } => write!(f, "H({},{})", i + 1, j + 1),
        }
    }
}

/// A cell and its existing logical neighbours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalPatch {
    pub center: CellIndex,
    pub members: Vec<CellIndex>,
}

/// The edges surrounding one edge. For a vertical centre the horizontal
/// members are the four edges leaving its endpoints sideways and the vertical
/// members are the centre and the edges directly above and below it; a
/// horizontal centre is the transpose.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalFrame {
    pub center: EdgeIndex,
    pub horizontal: Vec<EdgeIndex>,
    pub vertical: Vec<EdgeIndex>,
}

impl LocalFrame {
    pub fn len(&self) -> usize {
        self.horizontal.len() + self.vertical.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn members(&self) -> impl Iterator<Item = EdgeIndex> + '_ {
        self.horizontal.iter().chain(&self.vertical).copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StructuredQuadMesh {
    m: usize,
    n: usize,
    vertices: Vec<Point2>,
}

/// Construct and check a mesh from `m * n` row-major points.
pub fn build_mesh(m: usize, n: usize, points: Vec<Point2>) -> Result<StructuredQuadMesh, MeshError> {
    StructuredQuadMesh::new(m, n, points)
}

fn quad_is_simple_ccw(q: [Point2; 4]) -> Result<bool, GeomError> {
    let poly = OrientedPolygon::new(q.to_vec());
    if poly.signed_area() <= 0.0 {
        return Ok(false);
    }
    // a self-intersecting quad has one diagonal splitting it into two
    // triangles of opposite orientation on both diagonals
    let d02 = (orient2d(q[0], q[1], q[2]), orient2d(q[0], q[2], q[3]));
    let d13 = (orient2d(q[1], q[2], q[3]), orient2d(q[1], q[3], q[0]));
    if (d02.0 < 0.0 && d02.1 < 0.0) || (d13.0 < 0.0 && d13.1 < 0.0) {
        return Ok(false);
    }
    for (a, b) in [(0, 2), (1, 3)] {
        let s1 = Segment::new(q[a], q[a + 1]);
        let s2 = Segment::new(q[b], q[(b + 1) % 4]);
        if !segment_intersection(s1, s2)?.is_empty() {
            return Ok(false);
        }
    }
    Ok(true)
}

impl StructuredQuadMesh {
    pub fn new(m: usize, n: usize, vertices: Vec<Point2>) -> Result<Self, MeshError> {
        if m < 2 || n < 2 {
            return Err(MeshError::TooSmall { m, n });
        }
        if vertices.len() != m * n {
            return Err(MeshError::DimensionMismatch {
                expected: m * n,
                got: vertices.len(),
            });
        }
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(GeomError::NonFinite.into());
        }
        let mesh = StructuredQuadMesh { m, n, vertices };
        for c in mesh.cells() {
            if !quad_is_simple_ccw(mesh.cell_quad(c))? {
                return Err(MeshError::NonSimpleCell(c));
            }
        }
        Ok(mesh)
    }

    /// Uniform tensor mesh of the unit square.
    pub fn unit_square(m: usize, n: usize) -> Result<Self, MeshError> {
        let pts = (0..n)
            .flat_map(|j| (0..m).map(move |i| Point2::new(i as f64 / (m - 1) as f64, j as f64 / (n - 1) as f64)))
            .collect();
        Self::new(m, n, pts)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_cells(&self) -> usize {
        (self.m - 1) * (self.n - 1)
    }

    pub fn vertices(&self) -> &[Point2] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize, j: usize) -> Point2 {
        self.vertices[j * self.m + i]
    }

    pub fn is_boundary_vertex(&self, i: usize, j: usize) -> bool {
        i == 0 || j == 0 || i + 1 == self.m || j + 1 == self.n
    }

    pub fn contains_cell(&self, c: CellIndex) -> bool {
        c.i < self.m - 1 && c.j < self.n - 1
    }

    pub fn contains_edge(&self, e: EdgeIndex) -> bool {
        match e {
            EdgeIndex::Vertical { i, j } => i < self.m && j < self.n - 1,
            EdgeIndex::Horizontal { i, j } => i < self.m - 1 && j < self.n,
        }
    }

    /// Boundary vertices counterclockwise from `(0, 0)`.
    pub fn boundary_ring(&self) -> Vec<(usize, usize)> {
        let (m, n) = (self.m, self.n);
        let bottom = (0..m - 1).map(|i| (i, 0));
        let right = (0..n - 1).map(move |j| (m - 1, j));
        let top = (1..m).rev().map(move |i| (i, n - 1));
        let left = (1..n).rev().map(|j| (0, j));
        bottom.chain(right).chain(top).chain(left).collect()
    }

    /// Distance from `p` to the boundary polyline.
    pub fn boundary_distance(&self, p: Point2) -> f64 {
        let ring = self.boundary_ring();
        (0..ring.len())
            .map(|k| {
                let ((ai, aj), (bi, bj)) = (ring[k], ring[(k + 1) % ring.len()]);
                point_segment_distance(p, self.vertex(ai, aj), self.vertex(bi, bj))
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Both meshes cover the same region: corners coincide and every
    /// boundary vertex of either mesh lies on the other's boundary.
    pub fn same_domain(&self, other: &StructuredQuadMesh) -> bool {
        if (self.m, self.n) != (other.m, other.n) {
            return false;
        }
        let corners = [(0, 0), (self.m - 1, 0), (self.m - 1, self.n - 1), (0, self.n - 1)];
        corners
            .iter()
            .all(|&(i, j)| self.vertex(i, j).dist(other.vertex(i, j)) <= EPS_GEOM)
            && self.boundary_ring().into_iter().all(|(i, j)| {
                other.boundary_distance(self.vertex(i, j)) <= EPS_GEOM
                    && self.boundary_distance(other.vertex(i, j)) <= EPS_GEOM
            })
    }

    pub fn is_boundary_edge(&self, e: EdgeIndex) -> bool {
        match e {
            EdgeIndex::Vertical { i, .. } => i == 0 || i + 1 == self.m,
            EdgeIndex::Horizontal { j, .. } => j == 0 || j + 1 == self.n,
        }
    }

    /// Row-major cell order, `i` fastest.
    pub fn cells(&self) -> impl Iterator<Item = CellIndex> + '_ {
        (0..self.n - 1).flat_map(move |j| (0..self.m - 1).map(move |i| CellIndex::new(i, j)))
    }

    pub fn cell_id(&self, c: CellIndex) -> usize {
        c.j * (self.m - 1) + c.i
    }

    pub fn vertical_edges(&self) -> impl Iterator<Item = EdgeIndex> + '_ {
        (0..self.n - 1).flat_map(move |j| (0..self.m).map(move |i| EdgeIndex::Vertical { i, j }))
    }

    pub fn horizontal_edges(&self) -> impl Iterator<Item = EdgeIndex> + '_ {
        (0..self.n).flat_map(move |j| (0..self.m - 1).map(move |i| EdgeIndex::Horizontal { i, j }))
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeIndex> + '_ {
        self.vertical_edges().chain(self.horizontal_edges())
    }

    /// Counterclockwise corners `P_{i,j} P_{i+1,j} P_{i+1,j+1} P_{i,j+1}`.
    pub fn cell_quad(&self, c: CellIndex) -> [Point2; 4] {
        [
            self.vertex(c.i, c.j),
            self.vertex(c.i + 1, c.j),
            self.vertex(c.i + 1, c.j + 1),
            self.vertex(c.i, c.j + 1),
        ]
    }

    pub fn cell_polygon(&self, c: CellIndex) -> OrientedPolygon {
        OrientedPolygon::new(self.cell_quad(c).to_vec())
    }

    pub fn cell_area(&self, c: CellIndex) -> f64 {
        self.cell_polygon(c).signed_area()
    }

    pub fn edge_segment(&self, e: EdgeIndex) -> Segment {
        let [(ia, ja), (ib, jb)] = e.vertices();
        Segment::new(self.vertex(ia, ja), self.vertex(ib, jb))
    }

    /// Mesh with `x`/`y` and `i`/`j` exchanged. Cell orientation is preserved.
    pub fn transposed(&self) -> StructuredQuadMesh {
        let (m, n) = (self.n, self.m);
        let vertices = (0..n)
            .flat_map(|j| (0..m).map(move |i| (i, j)))
            .map(|(i, j)| self.vertex(j, i).swapped())
            .collect();
        StructuredQuadMesh { m, n, vertices }
    }

    pub fn local_patch(&self, c: CellIndex) -> Result<LocalPatch, MeshError> {
        if !self.contains_cell(c) {
            return Err(MeshError::OutOfBounds(format!("cell {c}")));
        }
        let members = (c.j.saturating_sub(1)..=c.j + 1)
            .flat_map(|j| (c.i.saturating_sub(1)..=c.i + 1).map(move |i| CellIndex::new(i, j)))
            .filter(|&k| self.contains_cell(k))
            .collect();
        Ok(LocalPatch { center: c, members })
    }

    pub fn local_frame(&self, e: EdgeIndex) -> Result<LocalFrame, MeshError> {
        if !self.contains_edge(e) {
            return Err(MeshError::OutOfBounds(format!("edge {e}")));
        }
        let frame = match e {
            EdgeIndex::Vertical { i, j } => {
                let side: Vec<EdgeIndex> = [(i.wrapping_sub(1), j), (i, j), (i.wrapping_sub(1), j + 1), (i, j + 1)]
                    .into_iter()
                    .map(|(i, j)| EdgeIndex::Horizontal { i, j })
                    .filter(|&f| self.contains_edge(f))
                    .collect();
                let along: Vec<EdgeIndex> = [j.wrapping_sub(1), j, j + 1]
                    .into_iter()
                    .map(|j| EdgeIndex::Vertical { i, j })
                    .filter(|&f| self.contains_edge(f))
                    .collect();
                LocalFrame {
                    center: e,
                    horizontal: side,
                    vertical: along,
                }
            }
            EdgeIndex::Horizontal { i, j } => {
                let side: Vec<EdgeIndex> = [(i, j.wrapping_sub(1)), (i + 1, j.wrapping_sub(1)), (i, j), (i + 1, j)]
                    .into_iter()
                    .map(|(i, j)| EdgeIndex::Vertical { i, j })
                    .filter(|&f| self.contains_edge(f))
                    .collect();
                let along: Vec<EdgeIndex> = [i.wrapping_sub(1), i, i + 1]
                    .into_iter()
                    .map(|i| EdgeIndex::Horizontal { i, j })
                    .filter(|&f| self.contains_edge(f))
                    .collect();
                LocalFrame {
                    center: e,
                    horizontal: along,
                    vertical: side,
                }
            }
        };
        Ok(frame)
    }
}
