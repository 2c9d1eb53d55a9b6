use crate::geom::{
    segment_intersection, GeomError, Intersection, OrientedPolygon, Point2, Segment, EPS_AREA, EPS_GEOM,
};
use std::collections::BTreeSet;

/// Bounded faces of the planar arrangement of a small set of segments.
#[derive(Debug, Default)]
pub(crate) struct Faces {
    /// Counterclockwise faces with area above [`EPS_AREA`].
    pub faces: Vec<OrientedPolygon>,
    /// Traced cycles with area at most [`EPS_AREA`] in magnitude.
    pub degenerate: usize,
}

struct Vertices {
    points: Vec<Point2>,
}

impl Vertices {
    fn id(&mut self, p: Point2) -> usize {
        if let Some(k) = self.points.iter().position(|q| q.dist(p) <= EPS_GEOM) {
            return k;
        }
        self.points.push(p);
        self.points.len() - 1
    }
}

fn project(s: Segment, p: Point2) -> f64 {
    let d = s.b - s.a;
    (p - s.a).dot(d)
}

pub(crate) fn arrangement_faces(segments: &[Segment]) -> Result<Faces, GeomError> {
    let segments: Vec<Segment> = segments.iter().copied().filter(|s| s.length() > EPS_GEOM).collect();
    let mut splits: Vec<Vec<Point2>> = segments.iter().map(|s| vec![s.a, s.b]).collect();
    for a in 0..segments.len() {
        for b in a + 1..segments.len() {
            match segment_intersection(segments[a], segments[b])? {
                Intersection::Empty => {}
                Intersection::Point { point, .. } => {
                    splits[a].push(point);
                    splits[b].push(point);
                }
                Intersection::Overlap(o) => {
                    splits[a].extend([o.a, o.b]);
                    splits[b].extend([o.a, o.b]);
                }
            }
        }
    }

    let mut verts = Vertices { points: Vec::new() };
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for (s, pts) in segments.iter().zip(&mut splits) {
        pts.sort_by(|p, q| project(*s, *p).total_cmp(&project(*s, *q)));
        let ids: Vec<usize> = pts.iter().map(|&p| verts.id(p)).collect();
        for w in ids.windows(2) {
            if w[0] != w[1] {
                edges.insert((w[0].min(w[1]), w[0].max(w[1])));
            }
        }
    }

    let points = verts.points;
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); points.len()];
    for &(u, v) in &edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    for (u, list) in adj.iter_mut().enumerate() {
        let o = points[u];
        list.sort_by(|&a, &b| {
            let pa = points[a] - o;
            let pb = points[b] - o;
            pa.y.atan2(pa.x).total_cmp(&pb.y.atan2(pb.x))
        });
    }

    let mut visited: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut out = Faces::default();
    for &(a, b) in &edges {
        for start in [(a, b), (b, a)] {
            if visited.contains(&start) {
                continue;
            }
            let mut cycle = Vec::new();
            let (mut u, mut v) = start;
            loop {
                visited.insert((u, v));
                cycle.push(points[u]);
                let list = &adj[v];
                let k = list.iter().position(|&w| w == u).expect("adjacency is symmetric");
                let next = list[(k + list.len() - 1) % list.len()];
                u = v;
                v = next;
                if (u, v) == start {
                    break;
                }
            }
            let poly = OrientedPolygon::new(cycle);
            let area = poly.signed_area();
            if area.abs() <= EPS_AREA {
                out.degenerate += 1;
            } else if area > 0.0 {
                out.faces.push(poly);
            }
        }
    }
    Ok(out)
}
