#![allow(dead_code)]

use quadremap::{OrientedPolygon, Point2, StructuredQuadMesh};

pub fn mesh(m: usize, n: usize, f: impl Fn(usize, usize) -> (f64, f64)) -> StructuredQuadMesh {
    let v = (0..n)
        .flat_map(|j| (0..m).map(move |i| (i, j)))
        .map(|(i, j)| {
            let (x, y) = f(i, j);
            Point2::new(x, y)
        })
        .collect();
    StructuredQuadMesh::new(m, n, v).unwrap()
}

pub type VertexMove = ((usize, usize), (f64, f64));

pub fn moved(base: &StructuredQuadMesh, moves: &[VertexMove]) -> StructuredQuadMesh {
    let mut v = base.vertices().to_vec();
    for &((i, j), (dx, dy)) in moves {
        let k = j * base.m() + i;
        v[k] = Point2::new(v[k].x + dx, v[k].y + dy);
    }
    StructuredQuadMesh::new(base.m(), base.n(), v).unwrap()
}

/// Reflect across `x = 1/2`, reversing the logical `i` order.
pub fn mirror_x(g: &StructuredQuadMesh) -> StructuredQuadMesh {
    let m = g.m();
    mesh(m, g.n(), |i, j| {
        let p = g.vertex(m - 1 - i, j);
        (1.0 - p.x, p.y)
    })
}

/// Reflect across `y = 1/2`, reversing the logical `j` order.
pub fn mirror_y(g: &StructuredQuadMesh) -> StructuredQuadMesh {
    let n = g.n();
    mesh(g.m(), n, |i, j| {
        let p = g.vertex(i, n - 1 - j);
        (p.x, 1.0 - p.y)
    })
}

/// Even-odd ray casting, written independently of the library.
pub fn pip(poly: &[Point2], p: Point2) -> bool {
    let mut inside = false;
    let n = poly.len();
    for k in 0..n {
        let (a, b) = (poly[k], poly[(k + 1) % n]);
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if p.x < x {
                inside = !inside;
            }
        }
    }
    inside
}

/// Area of the region where `inside` holds, sampled at cell centres of a
/// `res` grid over the box `lo..hi`.
pub fn raster_area(lo: Point2, hi: Point2, res: f64, inside: impl Fn(Point2) -> bool) -> f64 {
    let nx = ((hi.x - lo.x) / res).ceil() as usize;
    let ny = ((hi.y - lo.y) / res).ceil() as usize;
    let (dx, dy) = ((hi.x - lo.x) / nx as f64, (hi.y - lo.y) / ny as f64);
    let mut hits = 0usize;
    for a in 0..nx {
        for b in 0..ny {
            let p = Point2::new(lo.x + (a as f64 + 0.5) * dx, lo.y + (b as f64 + 0.5) * dy);
            if inside(p) {
                hits += 1;
            }
        }
    }
    hits as f64 * dx * dy
}

pub fn poly(pts: &[(f64, f64)]) -> OrientedPolygon {
    OrientedPolygon::new(pts.iter().map(|&(x, y)| Point2::new(x, y)).collect())
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_abs(a: &[f64]) -> f64 {
    a.iter().map(|x| x.abs()).fold(0.0, f64::max)
}

/// Scanline integral of a density that depends on `y` only over the
/// interior of `poly` (even-odd rule), rows of height `dy` from `lo` to
/// `hi`.
pub fn scanline_integral(poly: &[Point2], lo: f64, hi: f64, dy: f64, rho: impl Fn(f64) -> f64) -> f64 {
    let rows = ((hi - lo) / dy).round() as usize;
    let mut total = 0.0;
    for r in 0..rows {
        let y = lo + (r as f64 + 0.5) * dy;
        let mut xs: Vec<f64> = Vec::new();
        for k in 0..poly.len() {
            let (a, b) = (poly[k], poly[(k + 1) % poly.len()]);
            if (a.y > y) != (b.y > y) {
                xs.push(a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        xs.sort_by(f64::total_cmp);
        let len: f64 = xs.chunks(2).filter(|c| c.len() == 2).map(|c| c[1] - c[0]).sum();
        total += len * dy * rho(y);
    }
    total
}
