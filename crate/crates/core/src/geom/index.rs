use super::{Point2, Segment, EPS_GEOM};

/// Uniform-grid bucket index over a set of segments. Queries return the ids
/// of all stored segments whose padded bounding box meets the query box.
#[derive(Debug, Clone)]
pub struct SegmentIndex {
    segments: Vec<Segment>,
    origin: Point2,
    cell: f64,
    nx: usize,
    ny: usize,
    buckets: Vec<Vec<usize>>,
}

impl SegmentIndex {
    pub fn new(segments: Vec<Segment>) -> Self {
        let pad = EPS_GEOM;
        let (mut lo, mut hi) = (Point2::new(f64::MAX, f64::MAX), Point2::new(f64::MIN, f64::MIN));
        let mut total_len = 0.0;
        for s in &segments {
            lo.x = lo.x.min(s.a.x.min(s.b.x));
            lo.y = lo.y.min(s.a.y.min(s.b.y));
            hi.x = hi.x.max(s.a.x.max(s.b.x));
            hi.y = hi.y.max(s.a.y.max(s.b.y));
            total_len += s.length();
        }
        if segments.is_empty() {
            lo = Point2::new(0.0, 0.0);
            hi = Point2::new(1.0, 1.0);
        }
        lo = Point2::new(lo.x - pad, lo.y - pad);
        hi = Point2::new(hi.x + pad, hi.y + pad);

        let mean_len = if segments.is_empty() {
            1.0
        } else {
            total_len / segments.len() as f64
        };
        let span = (hi.x - lo.x).max(hi.y - lo.y);
        let cell = mean_len.max(span / 4096.0).max(f64::MIN_POSITIVE);
        let nx = (((hi.x - lo.x) / cell).ceil() as usize).max(1);
        let ny = (((hi.y - lo.y) / cell).ceil() as usize).max(1);

        let mut index = SegmentIndex {
            segments: Vec::new(),
            origin: lo,
            cell,
            nx,
            ny,
            buckets: vec![Vec::new(); nx * ny],
        };
        for (id, s) in segments.iter().enumerate() {
            let (x0, x1, y0, y1) = index.range(*s);
            for by in y0..=y1 {
                for bx in x0..=x1 {
                    index.buckets[by * nx + bx].push(id);
                }
            }
        }
        index.segments = segments;
        index
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn segment(&self, id: usize) -> Segment {
        self.segments[id]
    }

    fn bucket_coord(&self, v: f64, origin: f64, n: usize) -> usize {
        let k = ((v - origin) / self.cell).floor();
        if k <= 0.0 {
            0
        } else {
            (k as usize).min(n - 1)
        }
    }

    fn range(&self, s: Segment) -> (usize, usize, usize, usize) {
        let pad = EPS_GEOM;
        let x0 = self.bucket_coord(s.a.x.min(s.b.x) - pad, self.origin.x, self.nx);
        let x1 = self.bucket_coord(s.a.x.max(s.b.x) + pad, self.origin.x, self.nx);
        let y0 = self.bucket_coord(s.a.y.min(s.b.y) - pad, self.origin.y, self.ny);
        let y1 = self.bucket_coord(s.a.y.max(s.b.y) + pad, self.origin.y, self.ny);
        (x0, x1, y0, y1)
    }

    /// Ids of stored segments that may touch `s`, sorted and deduplicated.
    pub fn candidates(&self, s: Segment) -> Vec<usize> {
        let (x0, x1, y0, y1) = self.range(s);
        let mut out: Vec<usize> = (y0..=y1)
            .flat_map(|by| (x0..=x1).map(move |bx| by * self.nx + bx))
            .flat_map(|b| self.buckets[b].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_crossing_segments_only_nearby() {
        let segs: Vec<Segment> = (0..20)
            .map(|k| {
                let x = k as f64;
                Segment::new(Point2::new(x, 0.0), Point2::new(x, 1.0))
            })
            .collect();
        let idx = SegmentIndex::new(segs);
        let q = Segment::new(Point2::new(4.5, 0.5), Point2::new(6.5, 0.5));
        let c = idx.candidates(q);
        assert!(c.contains(&5) && c.contains(&6));
        assert!(!c.contains(&15));
    }

    #[test]
    fn empty_index() {
        let idx = SegmentIndex::new(Vec::new());
        assert!(idx.is_empty());
        let q = Segment::new(Point2::new(0.0, 0.0), Point2::new(1.0, 1.0));
        assert!(idx.candidates(q).is_empty());
    }
}
