//! Library results against independently coded reference computations.

mod common;

use common::{max_abs_diff, mesh, moved, pip, poly, raster_area, scanline_integral};
use quadremap::fields::{eval_density, init_cell_masses, init_masses_with, DensityKind};
use quadremap::geom::{assign_vertex, clip_convex};
use quadremap::gridgen::{random_pair, tensor_grid, tensor_pair};
use quadremap::swap::{count_singular_points, invading_occupied, sweep_swap_regions};
use quadremap::swept::{cell_area_fb, swept_mass, swept_region};
use quadremap::{CellIndex, EdgeIndex, Point2, StructuredQuadMesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cell_pts(m: &StructuredQuadMesh, c: CellIndex) -> Vec<Point2> {
    m.cell_polygon(c).vertices
}

fn near_any_edge(m: &StructuredQuadMesh, cells: &[CellIndex], p: Point2) -> bool {
    cells.iter().any(|&c| {
        m.cell_polygon(c)
            .edges()
            .any(|s| quadremap::geom::point_segment_distance(p, s.a, s.b) <= 1e-9)
    })
}

fn check_assign(mesh: &StructuredQuadMesh, queries: usize, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0;
    while checked < queries {
        let i = rng.gen_range(1..mesh.m() - 1);
        let j = rng.gen_range(1..mesh.n() - 1);
        let cells = [
            CellIndex::new(i - 1, j - 1),
            CellIndex::new(i, j - 1),
            CellIndex::new(i - 1, j),
            CellIndex::new(i, j),
        ];
        let pts: Vec<Point2> = cells.iter().flat_map(|&c| cell_pts(mesh, c)).collect();
        let (lo, hi) = pts.iter().fold(
            (Point2::new(f64::MAX, f64::MAX), Point2::new(f64::MIN, f64::MIN)),
            |(lo, hi), p| {
                (
                    Point2::new(lo.x.min(p.x), lo.y.min(p.y)),
                    Point2::new(hi.x.max(p.x), hi.y.max(p.y)),
                )
            },
        );
        let q = Point2::new(rng.gen_range(lo.x..hi.x), rng.gen_range(lo.y..hi.y));
        let owners: Vec<CellIndex> = cells.iter().copied().filter(|&c| pip(&cell_pts(mesh, c), q)).collect();
        if owners.len() != 1 || near_any_edge(mesh, &cells, q) {
            continue;
        }
        let a = assign_vertex(q, mesh, (i, j)).unwrap();
        assert_eq!(a.cell, owners[0], "vertex ({i},{j}) query {q:?}");
        assert!(!a.on_boundary);
        checked += 1;
    }
    checked
}

#[test]
fn assign_vertex_matches_ray_casting_on_random_grids() {
    let (old, _) = random_pair(11, 3).unwrap();
    assert_eq!(check_assign(&old, 100_000, 1), 100_000);
}

#[test]
fn assign_vertex_matches_ray_casting_on_tensor_grids() {
    let g = tensor_grid(21, 21, 1.0 / 341.0, true).unwrap();
    assert_eq!(check_assign(&g, 100_000, 2), 100_000);
}

#[test]
fn assign_vertex_on_shared_edge_uses_tie_break() {
    let g = StructuredQuadMesh::unit_square(3, 3).unwrap();
    let a = assign_vertex(Point2::new(0.5, 0.7), &g, (1, 1)).unwrap();
    assert!(a.on_boundary);
    assert_eq!(a.cell, CellIndex::new(1, 1));
}

#[test]
fn clip_square_by_triangle_matches_raster() {
    let sq = poly(&[(0., 0.), (1., 0.), (1., 1.), (0., 1.)]);
    let tri = poly(&[(0., 0.), (2., 0.), (0., 2.)]);
    let clipped = clip_convex(&sq, &tri).unwrap().area();
    let raster = raster_area(Point2::new(0., 0.), Point2::new(2., 2.), 1e-3, |p| {
        pip(&sq.vertices, p) && pip(&tri.vertices, p)
    });
    assert!((clipped - 1.0).abs() < 1e-15);
    assert!((raster - 1.0).abs() < 1e-2);
}

#[test]
fn clip_convex_matches_raster_on_random_quads() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let mut jitter = |x: f64, y: f64| (x + rng.gen_range(-0.15..0.15), y + rng.gen_range(-0.15..0.15));
        let p = poly(&[jitter(0.2, 0.2), jitter(0.8, 0.2), jitter(0.8, 0.8), jitter(0.2, 0.8)]);
        let q = poly(&[jitter(0.4, 0.1), jitter(0.9, 0.4), jitter(0.6, 0.9), jitter(0.1, 0.6)]);
        if !p.is_convex_ccw() || !q.is_convex_ccw() {
            continue;
        }
        let clipped = clip_convex(&p, &q).unwrap().area();
        let raster = raster_area(Point2::new(-0.1, -0.1), Point2::new(1.1, 1.1), 2e-3, |x| {
            pip(&p.vertices, x) && pip(&q.vertices, x)
        });
        assert!((clipped - raster).abs() < 1e-3, "{clipped} vs {raster}");
    }
}

#[test]
fn straddling_swept_mass_matches_raster() {
    let old = StructuredQuadMesh::unit_square(3, 3).unwrap();
    let new = moved(&old, &[((1, 1), (0.05, 0.05))]);
    let e = EdgeIndex::Vertical { i: 1, j: 0 };
    let region = swept_region(e, &old, &new).unwrap();
    let owners: Vec<CellIndex> = region.pieces.iter().map(|p| p.1).collect();
    assert!(owners.contains(&CellIndex::new(1, 0)) && owners.contains(&CellIndex::new(1, 1)));
    // density 1 in row 0, 2 in row 1
    let densities: Vec<f64> = old.cells().map(|c| 1.0 + c.j as f64).collect();
    let mass = swept_mass(&region, &old, &densities).unwrap();
    let sign = region.signed_area.signum();
    let rho = |y: f64| if y < 0.5 { 1.0 } else { 2.0 };
    let raster_mass = sign * scanline_integral(&region.outline.vertices, 0.0, 1.0, 1e-3, rho);
    assert!(
        (mass - raster_mass).abs() <= 1e-5 * mass.abs(),
        "{mass} vs {raster_mass}"
    );
}

#[test]
fn one_vertex_cell_area_fb_is_shoelace() {
    let old = StructuredQuadMesh::unit_square(4, 4).unwrap();
    let new = moved(&old, &[((1, 1), (0.05, 0.02))]);
    for c in [(0, 0), (1, 0), (0, 1), (1, 1)].map(|(i, j)| CellIndex::new(i, j)) {
        let fb = cell_area_fb(c, &old, &new).unwrap();
        let pts = cell_pts(&new, c);
        let shoelace: f64 = (0..4)
            .map(|k| pts[k].x * pts[(k + 1) % 4].y - pts[(k + 1) % 4].x * pts[k].y)
            .sum::<f64>()
            / 2.0;
        assert!((fb - shoelace).abs() <= 1e-14);
    }
}

#[test]
fn random_grid_cell_area_fb_is_shoelace() {
    let (old, new) = random_pair(11, 5).unwrap();
    let worst = new
        .cells()
        .map(|c| (cell_area_fb(c, &old, &new).unwrap() - new.cell_area(c)).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-13, "{worst}");
}

fn gauss2_on_bilinear(q: [Point2; 4], f: &impl Fn(f64, f64) -> f64, k: usize) -> f64 {
    // k x k subcells of the reference square, 2x2 Gauss points each
    let g = 0.5 / 3f64.sqrt();
    let mut total = 0.0;
    let h = 1.0 / k as f64;
    for a in 0..k {
        for b in 0..k {
            for (s, t) in [(-g, -g), (g, -g), (-g, g), (g, g)] {
                let u = (a as f64 + 0.5 + s) * h;
                let v = (b as f64 + 0.5 + t) * h;
                let x = (1. - u) * (1. - v) * q[0].x + u * (1. - v) * q[1].x + u * v * q[2].x + (1. - u) * v * q[3].x;
                let y = (1. - u) * (1. - v) * q[0].y + u * (1. - v) * q[1].y + u * v * q[2].y + (1. - u) * v * q[3].y;
                let xu = -(1. - v) * q[0].x + (1. - v) * q[1].x + v * q[2].x - v * q[3].x;
                let yu = -(1. - v) * q[0].y + (1. - v) * q[1].y + v * q[2].y - v * q[3].y;
                let xv = -(1. - u) * q[0].x - u * q[1].x + u * q[2].x + (1. - u) * q[3].x;
                let yv = -(1. - u) * q[0].y - u * q[1].y + u * q[2].y + (1. - u) * q[3].y;
                total += f(x, y) * (xu * yv - xv * yu) * h * h / 4.0;
            }
        }
    }
    total
}

fn refinement_total(g: &StructuredQuadMesh, f: &impl Fn(f64, f64) -> f64) -> f64 {
    let total = |k: usize| g.cells().map(|c| gauss2_on_bilinear(g.cell_quad(c), f, k)).sum::<f64>();
    let mut k = 1;
    let mut prev = total(k);
    loop {
        k *= 2;
        let next = total(k);
        if (next - prev).abs() < 1e-10 {
            return next;
        }
        prev = next;
    }
}

#[test]
fn franke_total_mass_matches_refinement_oracle() {
    let f = |x: f64, y: f64| eval_density(DensityKind::Franke, x, y);
    let uniform = StructuredQuadMesh::unit_square(11, 11).unwrap();
    let total: f64 = init_cell_masses(&uniform, DensityKind::Franke).masses.iter().sum();
    let oracle = refinement_total(&uniform, &f);
    assert!((total - oracle).abs() <= 1e-8, "{total} vs {oracle}");

    let g = tensor_grid(11, 11, 1.0 / 331.0, true).unwrap();
    let total: f64 = init_cell_masses(&g, DensityKind::Franke).masses.iter().sum();
    let oracle = refinement_total(&g, &f);
    assert!((oracle - uniform_exact()).abs() <= 1e-9);
    assert!((total - oracle).abs() <= 1e-8, "{total} vs {oracle}");
}

/// Integral of the Franke function over the unit square from an independent
/// adaptive cubature.
fn uniform_exact() -> f64 {
    0.406_969_589_491_556_15
}

#[test]
fn cubic_densities_are_exact_on_parallelograms() {
    let g = mesh(4, 4, |i, j| {
        (0.3 * i as f64 + 0.1 * j as f64, 0.05 * i as f64 + 0.25 * j as f64)
    });
    let f = |x: f64, y: f64| 1.0 + 2.0 * x - y + 3.0 * x * y + x * x * x - 2.0 * x * y * y + 0.5 * y * y * y;
    let got = init_masses_with(&g, f);
    for c in g.cells() {
        let exact = gauss2_on_bilinear(g.cell_quad(c), &f, 1);
        let m = got.masses[g.cell_id(c)];
        assert!((m - exact).abs() <= 1e-14 * exact.abs(), "{m} vs {exact}");
    }
}

#[test]
fn densities_match_reassociated_formulas() {
    // same terms, summed in the opposite order
    let franke2 = |x: f64, y: f64| {
        let (a, b) = (9.0 * x, 9.0 * y);
        let sq = |v: f64| v * v;
        let t1 = 0.75 * f64::exp(-(sq(b - 2.0) + sq(a - 2.0)) / 4.0);
        let t2 = 0.75 * f64::exp(-sq(a + 1.0) / 49.0 - (b + 1.0) / 10.0);
        let t3 = 0.5 * f64::exp(-(sq(b - 3.0) + sq(a - 7.0)) / 4.0);
        let t4 = -0.2 * f64::exp(-sq(a - 4.0) - sq(b - 7.0));
        (t4.abs() + t3 + t2 + t1, (t4 + t3) + (t2 + t1))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..10_000 {
        let (x, y) = (rng.gen::<f64>(), rng.gen::<f64>());
        let a = eval_density(DensityKind::Franke, x, y);
        let (magnitude, b) = franke2(x, y);
        assert!((a - b).abs() <= 4.0 * f64::EPSILON * magnitude, "{x} {y}: {a} vs {b}");
        let t = eval_density(DensityKind::Tanh, x, y);
        assert!((t - (1.2 + (y - 15.0 * x + 6.0).tanh())).abs() <= 4.0 * f64::EPSILON * t.abs());
        let r = ((x - 0.5).powi(2) + (y - 0.5).powi(2)).sqrt();
        let p = if r > 0.25 { 0.0 } else { f64::max(0.001, 1.0 - 4.0 * r) };
        assert!((eval_density(DensityKind::Peak, x, y) - p).abs() <= 4.0 * f64::EPSILON);
    }
    assert_eq!(
        eval_density(DensityKind::Franke, 0.3, 0.7),
        eval_density(DensityKind::Franke, 0.3, 0.7)
    );
}

/// Sign changes of `new(s) − old(s)` sampled densely along a monotone curve.
fn sampled_crossings(old: &[Point2], new: &[Point2], along_y: bool, samples: usize) -> usize {
    let coord = |p: Point2| if along_y { (p.y, p.x) } else { (p.x, p.y) };
    let eval = |curve: &[Point2], s: f64| {
        for w in curve.windows(2) {
            let (s0, v0) = coord(w[0]);
            let (s1, v1) = coord(w[1]);
            if s >= s0.min(s1) && s <= s0.max(s1) {
                return v0 + (v1 - v0) * (s - s0) / (s1 - s0);
            }
        }
        f64::NAN
    };
    let (lo, hi) = (coord(old[0]).0, coord(old[old.len() - 1]).0);
    let mut prev = 0.0f64;
    let mut count = 0;
    for k in 1..samples {
        let s = lo + (hi - lo) * k as f64 / samples as f64;
        let d = eval(new, s) - eval(old, s);
        if d.is_nan() || d.abs() < 1e-13 {
            continue;
        }
        if prev != 0.0 && d.signum() != prev.signum() {
            count += 1;
        }
        prev = d;
    }
    count
}

fn dense_census(old: &StructuredQuadMesh, new: &StructuredQuadMesh) -> (usize, usize) {
    let (m, n) = (old.m(), old.n());
    let xs = (1..m - 1)
        .map(|i| {
            let o: Vec<Point2> = (0..n).map(|j| old.vertex(i, j)).collect();
            let w: Vec<Point2> = (0..n).map(|j| new.vertex(i, j)).collect();
            sampled_crossings(&o, &w, true, 20_000)
        })
        .sum();
    let ys = (1..n - 1)
        .map(|j| {
            let o: Vec<Point2> = (0..m).map(|i| old.vertex(i, j)).collect();
            let w: Vec<Point2> = (0..m).map(|i| new.vertex(i, j)).collect();
            sampled_crossings(&o, &w, false, 20_000)
        })
        .sum();
    (xs, ys)
}

#[test]
fn singular_points_match_dense_sampling() {
    for seed in [1u64, 2, 3] {
        let (old, new) = random_pair(11, seed).unwrap();
        let s = count_singular_points(&old, &new).unwrap();
        assert_eq!((s.ns_xx, s.ns_yy), dense_census(&old, &new), "seed {seed}");
    }
    let (old, new) = tensor_pair(11, 11, false).unwrap();
    let s = count_singular_points(&old, &new).unwrap();
    assert_eq!((s.ns_xx, s.ns_yy), (0, 0));
    assert_eq!(dense_census(&old, &new), (0, 0));
}

#[test]
fn swap_polygons_are_pairwise_disjoint() {
    let (old, new) = random_pair(11, 8).unwrap();
    let polys = sweep_swap_regions(&old, &new).unwrap().polygons;
    let bbox = |p: &quadremap::OrientedPolygon| {
        p.vertices
            .iter()
            .fold((f64::MAX, f64::MAX, f64::MIN, f64::MIN), |b, v| {
                (b.0.min(v.x), b.1.min(v.y), b.2.max(v.x), b.3.max(v.y))
            })
    };
    let boxes: Vec<_> = polys.iter().map(|p| bbox(&p.polygon)).collect();
    let mut pairs = 0;
    for a in 0..polys.len() {
        for b in a + 1..polys.len() {
            let (p, q) = (boxes[a], boxes[b]);
            if p.2 < q.0 || q.2 < p.0 || p.3 < q.1 || q.3 < p.1 {
                continue;
            }
            let overlap = clip_convex(&polys[a].polygon, &polys[b].polygon).unwrap().area();
            assert!(overlap <= 1e-13, "{a} {b}: {overlap}");
            pairs += 1;
        }
    }
    assert!(pairs > 100);
}

#[test]
fn swap_pieces_match_convex_clipping() {
    let (old, new) = random_pair(11, 4).unwrap();
    let polys = sweep_swap_regions(&old, &new).unwrap().polygons;
    for p in &polys {
        let oracle = clip_convex(&new.cell_polygon(p.owner_new), &old.cell_polygon(p.owner_old))
            .unwrap()
            .area();
        assert!((p.area - oracle).abs() <= 1e-13);
    }
    // swap area per new cell = cell area minus overlap with its own old cell
    let invading: Vec<f64> = new.cells().map(|c| invading_occupied(c, &polys).invading).collect();
    let oracle: Vec<f64> = new
        .cells()
        .map(|c| new.cell_area(c) - clip_convex(&new.cell_polygon(c), &old.cell_polygon(c)).unwrap().area())
        .collect();
    assert!(max_abs_diff(&invading, &oracle) <= 1e-13);
}
