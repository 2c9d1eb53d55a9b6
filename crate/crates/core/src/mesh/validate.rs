use super::{EdgeIndex, MeshError, StructuredQuadMesh};
use crate::geom::{
    point_segment_distance, segment_intersection, Intersection, OrientedPolygon, Point2, SegmentIndex, EPS_GEOM,
};
use std::collections::BTreeMap;

/// A grid curve: `X(i)` is the polyline through column `i`, `Y(j)` through
/// row `j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Curve {
    X(usize),
    Y(usize),
}

impl std::fmt::Display for Curve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Curve::X(i) => write!(f, "x_{}", i + 1),
            Curve::Y(j) => write!(f, "y_{}", j + 1),
        }
    }
}

/// A new-mesh curve meeting an old-mesh curve of the other family more than
/// once, or along a segment.
#[derive(Debug, Clone, PartialEq)]
pub struct A2Violation {
    pub new_curve: Curve,
    pub old_curve: Curve,
    pub crossings: usize,
    pub overlap: bool,
}

/// A new edge touching an old edge at an endpoint of either, or sharing a
/// piece of it.
#[derive(Debug, Clone, PartialEq)]
pub struct A3Violation {
    pub new_edge: EdgeIndex,
    pub old_edge: EdgeIndex,
    pub point: Point2,
    pub overlap: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct AssumptionReport {
    /// Interior vertices whose new position leaves the four old cells around
    /// the old position.
    pub a1_violations: Vec<(usize, usize)>,
    /// Boundary vertices of the new mesh off the old domain boundary.
    pub boundary_mismatch: Vec<(usize, usize)>,
    /// Boundary vertices that moved along the common domain boundary.
    pub boundary_slides: Vec<(usize, usize)>,
    pub a2_violations: Vec<A2Violation>,
    pub a3_violations: Vec<A3Violation>,
    /// Number of new/old edge pairs sharing a segment of positive length,
    /// domain boundary excluded.
    pub common_edges: usize,
}

impl AssumptionReport {
    pub fn a1_holds(&self) -> bool {
        self.a1_violations.is_empty() && self.boundary_mismatch.is_empty()
    }

    pub fn a2_holds(&self) -> bool {
        self.a2_violations.is_empty()
    }

    pub fn a3_holds(&self) -> bool {
        self.a3_violations.is_empty()
    }

    /// All preconditions of the polygon-count formula hold.
    pub fn count_formula_applicable(&self) -> bool {
        self.a1_holds()
            && self.boundary_slides.is_empty()
            && self.a2_holds()
            && self.a3_holds()
            && self.common_edges == 0
    }
}

fn vertex_ring(mesh: &StructuredQuadMesh, i: usize, j: usize) -> OrientedPolygon {
    let ring = [
        (i - 1, j - 1),
        (i, j - 1),
        (i + 1, j - 1),
        (i + 1, j),
        (i + 1, j + 1),
        (i, j + 1),
        (i - 1, j + 1),
        (i - 1, j),
    ];
    OrientedPolygon::new(ring.iter().map(|&(a, b)| mesh.vertex(a, b)).collect())
}

fn strictly_inside(poly: &OrientedPolygon, p: Point2) -> bool {
    poly.winding_number(p) != 0 && poly.edges().all(|e| point_segment_distance(p, e.a, e.b) > EPS_GEOM)
}

fn count_distinct(points: &mut [Point2]) -> usize {
    points.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    let mut distinct: Vec<Point2> = Vec::new();
    for p in points.iter() {
        if !distinct.iter().any(|d| d.dist(*p) <= EPS_GEOM) {
            distinct.push(*p);
        }
    }
    distinct.len()
}

/// Check the admissibility assumptions between an old and a new mesh.
pub fn validate_assumptions(old: &StructuredQuadMesh, new: &StructuredQuadMesh) -> Result<AssumptionReport, MeshError> {
    if (old.m(), old.n()) != (new.m(), new.n()) {
        return Err(MeshError::DimensionMismatch {
            expected: old.m() * old.n(),
            got: new.m() * new.n(),
        });
    }
    let (m, n) = (old.m(), old.n());
    let mut report = AssumptionReport::default();

    for j in 0..n {
        for i in 0..m {
            let q = new.vertex(i, j);
            if old.is_boundary_vertex(i, j) {
                if old.boundary_distance(q) > EPS_GEOM {
                    report.boundary_mismatch.push((i, j));
                } else if q.dist(old.vertex(i, j)) > EPS_GEOM {
                    report.boundary_slides.push((i, j));
                }
            } else if !strictly_inside(&vertex_ring(old, i, j), q) {
                report.a1_violations.push((i, j));
            }
        }
    }

    let old_edges: Vec<EdgeIndex> = old.edges().collect();
    let index = SegmentIndex::new(old_edges.iter().map(|&e| old.edge_segment(e)).collect());
    let mut curve_hits: BTreeMap<(Curve, Curve), (Vec<Point2>, bool)> = BTreeMap::new();

    for e in new.edges() {
        let seg = new.edge_segment(e);
        let e_boundary = new.is_boundary_edge(e);
        for id in index.candidates(seg) {
            let f = old_edges[id];
            if e_boundary && old.is_boundary_edge(f) {
                continue;
            }
            let hit = segment_intersection(seg, index.segment(id))?;
            let key = match (e, f) {
                (EdgeIndex::Vertical { i, .. }, EdgeIndex::Horizontal { j, .. }) => Some((Curve::X(i), Curve::Y(j))),
                (EdgeIndex::Horizontal { j, .. }, EdgeIndex::Vertical { i, .. }) => Some((Curve::Y(j), Curve::X(i))),
                _ => None,
            };
            match hit {
                Intersection::Empty => {}
                Intersection::Point { point, endpoints, .. } => {
                    if let Some(key) = key {
                        curve_hits.entry(key).or_default().0.push(point);
                    }
                    if endpoints.any() {
                        let [ea, eb] = e.vertices();
                        let [fa, fb] = f.vertices();
                        let at_shared_boundary = (endpoints.first_start && new.is_boundary_vertex(ea.0, ea.1))
                            || (endpoints.first_end && new.is_boundary_vertex(eb.0, eb.1))
                            || (endpoints.second_start && old.is_boundary_vertex(fa.0, fa.1))
                            || (endpoints.second_end && old.is_boundary_vertex(fb.0, fb.1));
                        if !at_shared_boundary {
                            report.a3_violations.push(A3Violation {
                                new_edge: e,
                                old_edge: f,
                                point,
                                overlap: false,
                            });
                        }
                    }
                }
                Intersection::Overlap(s) => {
                    if let Some(key) = key {
                        curve_hits.entry(key).or_default().1 = true;
                    }
                    report.common_edges += 1;
                    report.a3_violations.push(A3Violation {
                        new_edge: e,
                        old_edge: f,
                        point: s.a,
                        overlap: true,
                    });
                }
            }
        }
    }

    for ((new_curve, old_curve), (mut pts, overlap)) in curve_hits {
        let crossings = count_distinct(&mut pts);
        if crossings > 1 || overlap {
            report.a2_violations.push(A2Violation {
                new_curve,
                old_curve,
                crossings,
                overlap,
            });
        }
    }
    Ok(report)
}
