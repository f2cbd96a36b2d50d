//! Independent reference implementations and instance builders for tests.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use udgmcp_core::geometry::{intersects, ConvexPolygon, Point};
use udgmcp_core::harness::{generate_instance, InstanceSpec};
use udgmcp_core::uncross::part_hull;
use udgmcp_core::{CliquePartition, PointSet};

pub fn uniform(n: usize, w: f64, h: f64, seed: u64) -> PointSet {
    generate_instance(&InstanceSpec::uniform(n, w, h, seed)).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn close(a: Point, b: Point) -> bool {
    let (dx, dy) = (a.x - b.x, a.y - b.y);
    dx * dx + dy * dy <= 1.0
}

/// Minimum clique partition size by plain set-partition search: each vertex
/// joins an existing compatible block or opens a new one.
pub fn naive_mcp_count(ps: &PointSet) -> usize {
    fn go(pts: &[Point], v: usize, blocks: &mut Vec<Vec<usize>>, best: &mut usize) {
        if blocks.len() >= *best {
            return;
        }
        if v == pts.len() {
            *best = blocks.len();
            return;
        }
        for b in 0..blocks.len() {
            if blocks[b].iter().all(|&u| close(pts[u], pts[v])) {
                blocks[b].push(v);
                go(pts, v + 1, blocks, best);
                blocks[b].pop();
            }
        }
        blocks.push(vec![v]);
        go(pts, v + 1, blocks, best);
        blocks.pop();
    }
    let mut best = ps.len() + 1;
    go(ps.points(), 0, &mut Vec::new(), &mut best);
    best.min(ps.len())
}

/// Every clique partition with exactly `target` blocks.
pub fn partitions_with_count(ps: &PointSet, target: usize) -> Vec<CliquePartition> {
    fn go(
        pts: &[Point],
        v: usize,
        target: usize,
        blocks: &mut Vec<Vec<usize>>,
        out: &mut Vec<CliquePartition>,
    ) {
        if blocks.len() > target {
            return;
        }
        if v == pts.len() {
            if blocks.len() == target {
                out.push(CliquePartition::new(blocks.clone()));
            }
            return;
        }
        for b in 0..blocks.len() {
            if blocks[b].iter().all(|&u| close(pts[u], pts[v])) {
                blocks[b].push(v);
                go(pts, v + 1, target, blocks, out);
                blocks[b].pop();
            }
        }
        blocks.push(vec![v]);
        go(pts, v + 1, target, blocks, out);
        blocks.pop();
    }
    let mut out = Vec::new();
    go(ps.points(), 0, target, &mut Vec::new(), &mut out);
    out
}

pub fn hulls(ps: &PointSet, cp: &CliquePartition) -> Vec<ConvexPolygon> {
    cp.parts.iter().map(|p| part_hull(ps, p)).collect()
}

pub fn pairwise_disjoint_hulls(ps: &PointSet, cp: &CliquePartition) -> bool {
    let h = hulls(ps, cp);
    (0..h.len()).all(|i| (i + 1..h.len()).all(|j| !intersects(&h[i], &h[j])))
}

/// Random greedy clique partition: points in random order, each joining a
/// random compatible part or opening a new one. Tends to interleave hulls.
pub fn scrambled_partition(ps: &PointSet, seed: u64) -> CliquePartition {
    let mut r = rng(seed);
    let mut order: Vec<usize> = (0..ps.len()).collect();
    order.shuffle(&mut r);
    let mut parts: Vec<Vec<usize>> = Vec::new();
    for v in order {
        let fits: Vec<usize> = (0..parts.len())
            .filter(|&b| parts[b].iter().all(|&u| close(ps.get(u), ps.get(v))))
            .collect();
        if fits.is_empty() || r.random_bool(0.15) && parts.len() < 3 {
            parts.push(vec![v]);
        } else {
            let b = fits[r.random_range(0..fits.len())];
            parts[b].push(v);
        }
    }
    CliquePartition::new(parts)
}

/// Hull perimeter by gift wrapping, independent of the library's hull code.
pub fn wrap_perimeter(pts: &[Point]) -> f64 {
    let mut uniq: Vec<Point> = Vec::new();
    for &p in pts {
        if !uniq.contains(&p) {
            uniq.push(p);
        }
    }
    match uniq.len() {
        0 | 1 => return 0.0,
        2 => return 2.0 * uniq[0].dist(uniq[1]),
        _ => {}
    }
    let cross =
        |o: Point, a: Point, b: Point| (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
    let start = (0..uniq.len())
        .min_by(|&a, &b| {
            uniq[a]
                .x
                .total_cmp(&uniq[b].x)
                .then(uniq[a].y.total_cmp(&uniq[b].y))
        })
        .unwrap();
    let mut hull = vec![start];
    let mut cur = start;
    loop {
        let mut next = (cur + 1) % uniq.len();
        for c in 0..uniq.len() {
            if c == cur {
                continue;
            }
            let o = cross(uniq[cur], uniq[next], uniq[c]);
            // take the most clockwise candidate; on ties the farther one
            if o < 0.0 || (o == 0.0 && uniq[cur].dist2(uniq[c]) > uniq[cur].dist2(uniq[next])) {
                next = c;
            }
        }
        if next == start {
            break;
        }
        hull.push(next);
        cur = next;
        if hull.len() > uniq.len() {
            break;
        }
    }
    let m = hull.len();
    (0..m)
        .map(|i| uniq[hull[i]].dist(uniq[hull[(i + 1) % m]]))
        .sum()
}

/// Random convex polygon: hull of `m` points in a disk of radius `r` around `c`.
pub fn random_convex(r: &mut ChaCha8Rng, c: Point, radius: f64, m: usize) -> ConvexPolygon {
    let pts: Vec<Point> = (0..m)
        .map(|_| {
            let t = r.random_range(0.0..std::f64::consts::TAU);
            let s = radius * r.random_range(0.3f64..1.0).sqrt();
            Point::new(c.x + s * t.cos(), c.y + s * t.sin())
        })
        .collect();
    udgmcp_core::convex_hull(&pts).unwrap()
}
