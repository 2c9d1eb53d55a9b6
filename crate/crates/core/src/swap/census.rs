use super::{strip_polygons, sweep_swap_regions};
use crate::geom::{segment_intersection, Intersection, Point2, Segment, EPS_GEOM};
use crate::mesh::{validate_assumptions, Curve, EdgeIndex, StructuredQuadMesh};
use crate::remap::RemapError;

/// Crossings of corresponding grid curves of the two meshes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SingularPointCensus {
    pub ns_xx: usize,
    pub ns_yy: usize,
    pub points: Vec<(Curve, Point2)>,
}

fn curve_crossings(
    old_seg: impl Fn(usize) -> Segment,
    new_seg: impl Fn(usize) -> Segment,
    len: usize,
    ends: [Point2; 2],
    curve: Curve,
) -> Result<Vec<Point2>, RemapError> {
    let mut found: Vec<Point2> = Vec::new();
    for s in 0..len {
        for r in s.saturating_sub(2)..(s + 3).min(len) {
            match segment_intersection(old_seg(s), new_seg(r))? {
                Intersection::Empty => {}
                Intersection::Overlap(_) => return Err(RemapError::CollinearCurves(curve.to_string())),
                Intersection::Point { point, .. } => {
                    let shared_end = ends.iter().any(|e| e.dist(point) <= EPS_GEOM);
                    if !shared_end && !found.iter().any(|f| f.dist(point) <= EPS_GEOM) {
                        found.push(point);
                    }
                }
            }
        }
    }
    Ok(found)
}

/// Count crossings between `x_i` of the old and new meshes (`ns_xx`) and
/// between `y_j` curves (`ns_yy`), interior curves only, shared endpoints on
/// the domain boundary excluded.
pub fn count_singular_points(
    old: &StructuredQuadMesh,
    new: &StructuredQuadMesh,
) -> Result<SingularPointCensus, RemapError> {
    if (old.m(), old.n()) != (new.m(), new.n()) {
        return Err(RemapError::DimensionMismatch);
    }
    let (m, n) = (old.m(), old.n());
    let mut census = SingularPointCensus::default();
    for i in 1..m - 1 {
        let v = |mesh: &StructuredQuadMesh, j: usize| mesh.edge_segment(EdgeIndex::Vertical { i, j });
        let pts = curve_crossings(
            |j| v(old, j),
            |j| v(new, j),
            n - 1,
            [old.vertex(i, 0), old.vertex(i, n - 1)],
            Curve::X(i),
        )?;
        census.ns_xx += pts.len();
        census.points.extend(pts.into_iter().map(|p| (Curve::X(i), p)));
    }
    for j in 1..n - 1 {
        let h = |mesh: &StructuredQuadMesh, i: usize| mesh.edge_segment(EdgeIndex::Horizontal { i, j });
        let pts = curve_crossings(
            |i| h(old, i),
            |i| h(new, i),
            m - 1,
            [old.vertex(0, j), old.vertex(m - 1, j)],
            Curve::Y(j),
        )?;
        census.ns_yy += pts.len();
        census.points.extend(pts.into_iter().map(|p| (Curve::Y(j), p)));
    }
    Ok(census)
}

fn bounding_box(pts: &[Point2]) -> (Point2, Point2) {
    pts.iter().fold(
        (
            Point2::new(f64::INFINITY, f64::INFINITY),
            Point2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
        ),
        |(lo, hi), p| {
            (
                Point2::new(lo.x.min(p.x), lo.y.min(p.y)),
                Point2::new(hi.x.max(p.x), hi.y.max(p.y)),
            )
        },
    )
}

fn in_box((lo, hi): (Point2, Point2), p: Point2) -> bool {
    p.x >= lo.x - EPS_GEOM && p.x <= hi.x + EPS_GEOM && p.y >= lo.y - EPS_GEOM && p.y <= hi.y + EPS_GEOM
}

/// Number of swap polygons predicted for an `m x n`-vertex mesh pair.
pub fn polygon_count_formula(m: usize, n: usize, ns_xx: usize, ns_yy: usize) -> i64 {
    let (m1, n1) = (m as i64 - 1, n as i64 - 1);
    3 * n1 * m1 - 2 * (m1 + n1) + 1 + ns_xx as i64 + ns_yy as i64
}

/// Polygons of one vertical strip against the per-strip law.
#[derive(Debug, Clone, PartialEq)]
pub struct StripCount {
    pub i: usize,
    pub count: usize,
    pub expected: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    /// The validator confirmed every hypothesis of the count formula.
    pub applicable: bool,
    pub polygon_count: usize,
    pub expected: Option<i64>,
    pub singular: Option<SingularPointCensus>,
    pub strips: Vec<StripCount>,
    pub degeneracy_events: usize,
}

impl CensusReport {
    pub fn count_matches(&self) -> bool {
        self.expected == Some(self.polygon_count as i64)
    }

    pub fn strips_match(&self) -> bool {
        self.strips.iter().all(|s| s.count == s.expected)
    }
}

/// Compare the enumerated swap polygons with the count formula and the
/// per-strip law.
pub fn census_check(old: &StructuredQuadMesh, new: &StructuredQuadMesh) -> Result<CensusReport, RemapError> {
    let report = validate_assumptions(old, new)?;
    let sweep = sweep_swap_regions(old, new)?;
    let singular = count_singular_points(old, new).ok();
    let applicable = report.count_formula_applicable() && singular.is_some();

    let mut strips = Vec::new();
    if let Some(s) = singular.as_ref().filter(|_| applicable) {
        for i in 1..old.m() - 1 {
            let polys = strip_polygons(old, new, i)?;
            let on_curve = s.points.iter().filter(|(c, _)| *c == Curve::X(i)).count();
            let boxes: Vec<(Point2, Point2)> = polys.iter().map(|q| bounding_box(&q.polygon.vertices)).collect();
            let inside = s
                .points
                .iter()
                .filter(|(c, p)| {
                    matches!(c, Curve::Y(_))
                        && polys
                            .iter()
                            .zip(&boxes)
                            .any(|(q, b)| in_box(*b, *p) && q.polygon.contains_closed(*p))
                })
                .count();
            strips.push(StripCount {
                i,
                count: polys.len(),
                expected: 2 * (old.n() - 1) - 1 + on_curve + inside,
            });
        }
    }
    Ok(CensusReport {
        applicable,
        polygon_count: sweep.polygons.len(),
        expected: singular
            .as_ref()
            .filter(|_| applicable)
            .map(|s| polygon_count_formula(old.m(), old.n(), s.ns_xx, s.ns_yy)),
        singular,
        strips,
        degeneracy_events: sweep.degeneracy_events,
    })
}
