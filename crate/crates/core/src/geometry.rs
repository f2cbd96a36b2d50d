//! Planar primitives on `f64` coordinates.
//!
//! Predicates are plain floating-point orientation tests. Inputs are expected
//! to be in general position; the petal machinery detects tangential contact
//! and reports it instead of guessing.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Intersections with area at or below this are treated as empty.
pub const AREA_TOL: f64 = 1e-12;

/// Relative tolerance used to flag tangential boundary contact.
const CONTACT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("convex hull of an empty point set")]
    EmptyInput,
    #[error("polygons share at least one point")]
    NotDisjoint,
    #[error("polygons do not overlap")]
    NotOverlapping,
    #[error("one polygon contains the other")]
    Containment,
    #[error("degenerate boundary contact: {0}")]
    Degenerate(&'static str),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist2(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist2(other).sqrt()
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(
            self.x + t * (other.x - self.x),
            self.y + t * (other.y - self.y),
        )
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::new(x, y)
    }
}

/// Twice the signed area of the triangle `abc`; positive when `c` is left of `a -> b`.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Counterclockwise vertex cycle without repeated or collinear-interior vertices.
///
/// One vertex is a point, two vertices a segment; the boundary of a segment is
/// traversed in both directions, so its perimeter is twice its length.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexPolygon {
    vertices: Vec<Point>,
}

impl ConvexPolygon {
    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Affine dimension: 0 for a point, 1 for a segment, 2 otherwise.
    pub fn dimension(&self) -> usize {
        self.vertices.len().min(3) - 1
    }

    /// Directed boundary edges `(i, v_i, v_{i+1})`. A point has a single zero-length edge.
    pub fn edges(&self) -> impl Iterator<Item = (usize, Point, Point)> + '_ {
        let n = self.vertices.len();
        (0..n).map(move |i| (i, self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn perimeter(&self) -> f64 {
        if self.vertices.len() < 2 {
            return 0.0;
        }
        self.edges().map(|(_, a, b)| a.dist(b)).sum()
    }

    pub fn area(&self) -> f64 {
        if self.vertices.len() < 3 {
            return 0.0;
        }
        let twice: f64 = self.edges().map(|(_, a, b)| a.x * b.y - a.y * b.x).sum();
        0.5 * twice
    }

    /// Closed containment. Lower-dimensional polygons contain only points on themselves.
    pub fn contains(&self, p: Point) -> bool {
        match self.vertices.len() {
            1 => self.vertices[0] == p,
            2 => on_segment(self.vertices[0], self.vertices[1], p),
            _ => self.edges().all(|(_, a, b)| orient(a, b, p) >= 0.0),
        }
    }

    /// Signed distance-like margin: positive inside, negative outside (2-D polygons only).
    fn margin(&self, p: Point) -> f64 {
        self.edges()
            .map(|(_, a, b)| orient(a, b, p) / a.dist(b))
            .fold(f64::INFINITY, f64::min)
    }

    fn scale(&self) -> f64 {
        self.perimeter().max(1.0)
    }
}

/// Monotone-chain hull over arbitrary items. Returns the hull in CCW order,
/// dropping duplicates and collinear boundary points.
fn monotone_chain<T: Copy>(mut items: Vec<T>, pos: impl Fn(&T) -> Point) -> Vec<T> {
    items.sort_by(|a, b| {
        let (pa, pb) = (pos(a), pos(b));
        pa.x.total_cmp(&pb.x).then(pa.y.total_cmp(&pb.y))
    });
    items.dedup_by(|a, b| pos(a) == pos(b));
    if items.len() <= 2 {
        return items;
    }
    let mut lower: Vec<T> = Vec::with_capacity(items.len());
    for &it in &items {
        while lower.len() >= 2
            && orient(
                pos(&lower[lower.len() - 2]),
                pos(&lower[lower.len() - 1]),
                pos(&it),
            ) <= 0.0
        {
            lower.pop();
        }
        lower.push(it);
    }
    let mut upper: Vec<T> = Vec::with_capacity(items.len());
    for &it in items.iter().rev() {
        while upper.len() >= 2
            && orient(
                pos(&upper[upper.len() - 2]),
                pos(&upper[upper.len() - 1]),
                pos(&it),
            ) <= 0.0
        {
            upper.pop();
        }
        upper.push(it);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

pub fn convex_hull(points: &[Point]) -> Result<ConvexPolygon, GeometryError> {
    if points.is_empty() {
        return Err(GeometryError::EmptyInput);
    }
    Ok(ConvexPolygon {
        vertices: monotone_chain(points.to_vec(), |p| *p),
    })
}

/// Hull of `points[subset]`, returned as CCW indices into `points`.
pub fn hull_indices(points: &[Point], subset: &[usize]) -> Vec<usize> {
    monotone_chain(subset.to_vec(), |&i| points[i])
}

/// Polygon whose vertices are `points[idx]` in the given (CCW hull) order.
pub fn polygon_from_indices(points: &[Point], idx: &[usize]) -> ConvexPolygon {
    ConvexPolygon {
        vertices: idx.iter().map(|&i| points[i]).collect(),
    }
}

pub fn perimeter(poly: &ConvexPolygon) -> f64 {
    poly.perimeter()
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    orient(a, b, p) == 0.0
        && p.x >= a.x.min(b.x)
        && p.x <= a.x.max(b.x)
        && p.y >= a.y.min(b.y)
        && p.y <= a.y.max(b.y)
}

/// Closed segment intersection, collinear overlaps included.
fn segments_touch(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if ((o1 > 0.0 && o2 < 0.0) || (o1 < 0.0 && o2 > 0.0))
        && ((o3 > 0.0 && o4 < 0.0) || (o3 < 0.0 && o4 > 0.0))
    {
        return true;
    }
    on_segment(a, b, c) || on_segment(a, b, d) || on_segment(c, d, a) || on_segment(c, d, b)
}

/// True when the closed polygons share at least one point.
pub fn intersects(p: &ConvexPolygon, q: &ConvexPolygon) -> bool {
    if p.vertices.iter().any(|&v| q.contains(v)) || q.vertices.iter().any(|&v| p.contains(v)) {
        return true;
    }
    p.edges()
        .any(|(_, a, b)| q.edges().any(|(_, c, d)| segments_touch(a, b, c, d)))
}

/// Sutherland-Hodgman clip. `None` when the closed polygons share nothing, or
/// when both inputs are lower-dimensional.
pub fn convex_intersection(p: &ConvexPolygon, q: &ConvexPolygon) -> Option<ConvexPolygon> {
    let (subject, clip) = if q.len() >= 3 {
        (p, q)
    } else if p.len() >= 3 {
        (q, p)
    } else {
        return None;
    };
    let mut out = subject.vertices.clone();
    for (_, a, b) in clip.edges() {
        if out.is_empty() {
            break;
        }
        let input = std::mem::take(&mut out);
        let m = input.len();
        for i in 0..m {
            let cur = input[i];
            let prev = input[(i + m - 1) % m];
            let oc = orient(a, b, cur);
            let op = orient(a, b, prev);
            if oc >= 0.0 {
                if op < 0.0 {
                    out.push(prev.lerp(cur, op / (op - oc)));
                }
                out.push(cur);
            } else if op >= 0.0 {
                out.push(prev.lerp(cur, op / (op - oc)));
            }
        }
    }
    if out.is_empty() {
        None
    } else {
        convex_hull(&out).ok()
    }
}

/// True when no line has `p` weakly on one side and `q` weakly on the other:
/// a positive-area intersection of two polygons, or a point or segment that
/// crosses or lies inside the other hull.
pub fn overlaps(p: &ConvexPolygon, q: &ConvexPolygon) -> bool {
    if p.len() >= 3 && q.len() >= 3 {
        return convex_intersection(p, q).is_some_and(|i| i.area() > AREA_TOL);
    }
    if p.len() <= 1 && q.len() <= 1 || !intersects(p, q) {
        return false;
    }
    find_separator(p, q).is_none()
}

/// Which polygon a separator endpoint came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexRef {
    P(usize),
    Q(usize),
}

/// A pair of vertices of `V(p) ∪ V(q)` whose line has `p` weakly on one side and
/// `q` weakly on the other. Polygons that only touch are accepted.
pub fn separating_vertex_pair(
    p: &ConvexPolygon,
    q: &ConvexPolygon,
) -> Result<(VertexRef, VertexRef), GeometryError> {
    if overlaps(p, q) {
        return Err(GeometryError::NotDisjoint);
    }
    // disjoint convex polygons always admit such a pair; reaching this means
    // floating-point noise on nearly touching polygons
    find_separator(p, q).ok_or(GeometryError::NotDisjoint)
}

fn find_separator(p: &ConvexPolygon, q: &ConvexPolygon) -> Option<(VertexRef, VertexRef)> {
    let candidates: Vec<(VertexRef, Point)> = p
        .vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (VertexRef::P(i), v))
        .chain(
            q.vertices
                .iter()
                .enumerate()
                .map(|(i, &v)| (VertexRef::Q(i), v)),
        )
        .collect();
    for (i, &(ru, u)) in candidates.iter().enumerate() {
        for &(rv, v) in &candidates[i + 1..] {
            if u != v && separates(u, v, &p.vertices, &q.vertices) {
                return Some((ru, rv));
            }
        }
    }
    None
}

/// `true` iff the line `u v` has all of `ps` weakly on one side and all of `qs` weakly on the other.
pub fn separates(u: Point, v: Point, ps: &[Point], qs: &[Point]) -> bool {
    let side = |pts: &[Point]| {
        let mut lo = 0.0f64;
        let mut hi = 0.0f64;
        for &w in pts {
            let o = orient(u, v, w);
            lo = lo.min(o);
            hi = hi.max(o);
        }
        (lo, hi)
    };
    let (plo, phi) = side(ps);
    let (qlo, qhi) = side(qs);
    (plo >= 0.0 && qhi <= 0.0) || (phi <= 0.0 && qlo >= 0.0)
}

pub fn separating_line(
    p: &ConvexPolygon,
    q: &ConvexPolygon,
) -> Result<(Point, Point), GeometryError> {
    let (a, b) = separating_vertex_pair(p, q)?;
    let pick = |r: VertexRef| match r {
        VertexRef::P(i) => p.vertices[i],
        VertexRef::Q(i) => q.vertices[i],
    };
    Ok((pick(a), pick(b)))
}

/// Boundary crossing of two transversally overlapping polygons.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crossing {
    pub point: Point,
    pub p_edge: usize,
    pub q_edge: usize,
    p_param: f64,
    q_param: f64,
}

/// Petals of two overlapping convex polygons.
///
/// Crossings `c_0 .. c_{2k-1}` are listed counterclockwise along both
/// boundaries. The arc between `c_{2i}` and `c_{2i+1}` bounds petal `X_i` of
/// `P`, the arc between `c_{2i+1}` and `c_{2i+2}` bounds petal `Y_i` of `Q`, so
/// the petals interleave as `X_0, Y_0, X_1, Y_1, ...`.
///
/// Each petal is stored as the convex cap cut off by its chord; the petal region
/// itself is the part of that cap outside the other polygon.
#[derive(Clone, Debug)]
pub struct PetalDecomposition {
    pub petals_p: Vec<ConvexPolygon>,
    pub petals_q: Vec<ConvexPolygon>,
    pub crossings: Vec<Crossing>,
    pub intersection: ConvexPolygon,
    p: ConvexPolygon,
    q: ConvexPolygon,
}

impl PetalDecomposition {
    /// Petals per polygon.
    pub fn k(&self) -> usize {
        self.petals_p.len()
    }

    pub fn crossing_points(&self) -> Vec<Point> {
        self.crossings.iter().map(|c| c.point).collect()
    }

    /// Index of the petal of `P` containing `x`, if `x` lies strictly outside `Q`.
    pub fn petal_of_p(&self, x: Point) -> Option<usize> {
        if self.q.margin(x) >= 0.0 {
            return None;
        }
        self.petals_p.iter().position(|cap| cap.contains_loose(x))
    }

    /// Index of the petal of `Q` containing `y`, if `y` lies strictly outside `P`.
    pub fn petal_of_q(&self, y: Point) -> Option<usize> {
        if self.p.margin(y) >= 0.0 {
            return None;
        }
        self.petals_q.iter().position(|cap| cap.contains_loose(y))
    }

    /// Chord `c_m -> c_{m+k}` of the intersection; every such chord realizes a
    /// halving line of the interleaved petal cycle.
    pub fn halving_chord(&self, m: usize) -> (Point, Point) {
        let n = self.crossings.len();
        (
            self.crossings[m % n].point,
            self.crossings[(m + self.k()) % n].point,
        )
    }

    pub fn p(&self) -> &ConvexPolygon {
        &self.p
    }

    pub fn q(&self) -> &ConvexPolygon {
        &self.q
    }
}

impl ConvexPolygon {
    /// Containment with a tolerance scaled to the polygon size; used for
    /// cap membership where vertices sit on the cap boundary.
    fn contains_loose(&self, x: Point) -> bool {
        if self.len() < 3 {
            return self.contains(x);
        }
        let tol = CONTACT_TOL * self.scale();
        self.margin(x) >= -tol
    }
}

/// Strict containment of every vertex of `inner` in closed `outer`.
fn contains_polygon(outer: &ConvexPolygon, inner: &ConvexPolygon) -> bool {
    inner.vertices.iter().all(|&v| outer.contains(v))
}

pub fn petal_decomposition(
    p: &ConvexPolygon,
    q: &ConvexPolygon,
) -> Result<PetalDecomposition, GeometryError> {
    if !overlaps(p, q) {
        return Err(GeometryError::NotOverlapping);
    }
    if p.len() < 3 || q.len() < 3 {
        return Err(GeometryError::Degenerate("lower-dimensional hull"));
    }
    if contains_polygon(p, q) || contains_polygon(q, p) {
        return Err(GeometryError::Containment);
    }
    let scale = p.scale().max(q.scale());
    let tol = CONTACT_TOL * scale;

    let mut crossings = Vec::new();
    for (i, a, b) in p.edges() {
        let lab = a.dist(b);
        for (j, c, d) in q.edges() {
            let lcd = c.dist(d);
            // orientations normalised to signed distances
            let o1 = orient(a, b, c) / lab;
            let o2 = orient(a, b, d) / lab;
            let o3 = orient(c, d, a) / lcd;
            let o4 = orient(c, d, b) / lcd;
            let near = o1.abs() <= tol || o2.abs() <= tol || o3.abs() <= tol || o4.abs() <= tol;
            let straddle_ab = o1 * o2 <= 0.0 || o1.abs() <= tol || o2.abs() <= tol;
            let straddle_cd = o3 * o4 <= 0.0 || o3.abs() <= tol || o4.abs() <= tol;
            if near && straddle_ab && straddle_cd {
                // touching within tolerance without a clean transversal crossing
                let (lo, hi) = (
                    a.x.min(b.x).max(c.x.min(d.x)) - tol,
                    a.x.max(b.x).min(c.x.max(d.x)) + tol,
                );
                let (ylo, yhi) = (
                    a.y.min(b.y).max(c.y.min(d.y)) - tol,
                    a.y.max(b.y).min(c.y.max(d.y)) + tol,
                );
                if lo <= hi && ylo <= yhi {
                    return Err(GeometryError::Degenerate("boundary contact at a vertex"));
                }
            }
            if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
                let t = o3 / (o3 - o4);
                let s = o1 / (o1 - o2);
                crossings.push(Crossing {
                    point: a.lerp(b, t),
                    p_edge: i,
                    q_edge: j,
                    p_param: t,
                    q_param: s,
                });
            }
        }
    }
    if crossings.len() < 2 || crossings.len() % 2 != 0 {
        return Err(GeometryError::Degenerate(
            "odd or missing boundary crossings",
        ));
    }
    crossings.sort_by(|u, v| {
        u.p_edge
            .cmp(&v.p_edge)
            .then(u.p_param.total_cmp(&v.p_param))
    });

    let n = crossings.len();
    let mut outside = Vec::with_capacity(n);
    for m in 0..n {
        let probe = arc_probe(p, &crossings, m, |c| (c.p_edge, c.p_param));
        let margin = q.margin(probe);
        if margin.abs() <= tol {
            return Err(GeometryError::Degenerate(
                "boundary arc touches the other polygon",
            ));
        }
        outside.push(margin < 0.0);
    }
    if (0..n).any(|m| outside[m] == outside[(m + 1) % n]) {
        return Err(GeometryError::Degenerate("boundary arcs do not alternate"));
    }
    let start = if outside[0] { 0 } else { 1 };
    crossings.rotate_left(start);

    let k = n / 2;
    let mut petals_p = Vec::with_capacity(k);
    let mut petals_q = Vec::with_capacity(k);
    for m in 0..n {
        let from = &crossings[m];
        let to = &crossings[(m + 1) % n];
        if m % 2 == 0 {
            petals_p.push(cap(p, from, to, |c| (c.p_edge, c.p_param))?);
        } else {
            let probe = arc_probe_pair(q, from, to, |c| (c.q_edge, c.q_param));
            if p.margin(probe) >= -tol {
                return Err(GeometryError::Degenerate("boundary orders disagree"));
            }
            petals_q.push(cap(q, from, to, |c| (c.q_edge, c.q_param))?);
        }
    }
    let intersection =
        convex_intersection(p, q).ok_or(GeometryError::Degenerate("empty intersection"))?;
    Ok(PetalDecomposition {
        petals_p,
        petals_q,
        crossings,
        intersection,
        p: p.clone(),
        q: q.clone(),
    })
}

fn arc_probe(
    poly: &ConvexPolygon,
    crossings: &[Crossing],
    m: usize,
    key: impl Fn(&Crossing) -> (usize, f64),
) -> Point {
    let n = crossings.len();
    arc_probe_pair(poly, &crossings[m], &crossings[(m + 1) % n], key)
}

/// A boundary point of `poly` strictly between two crossings (walking CCW).
fn arc_probe_pair(
    poly: &ConvexPolygon,
    from: &Crossing,
    to: &Crossing,
    key: impl Fn(&Crossing) -> (usize, f64),
) -> Point {
    let (e0, t0) = key(from);
    let (e1, t1) = key(to);
    if e0 == e1 && t1 > t0 {
        from.point.lerp(to.point, 0.5)
    } else {
        poly.vertices[(e0 + 1) % poly.len()]
    }
}

/// Convex region of `poly` cut off by the chord `from -> to`, on the side of the
/// boundary arc walked counterclockwise from `from` to `to`.
fn cap(
    poly: &ConvexPolygon,
    from: &Crossing,
    to: &Crossing,
    key: impl Fn(&Crossing) -> (usize, f64),
) -> Result<ConvexPolygon, GeometryError> {
    let (e0, t0) = key(from);
    let (e1, t1) = key(to);
    let len = poly.len();
    let mut verts = vec![from.point];
    if !(e0 == e1 && t1 > t0) {
        let mut v = (e0 + 1) % len;
        loop {
            verts.push(poly.vertices[v]);
            if v == e1 {
                break;
            }
            v = (v + 1) % len;
        }
    }
    verts.push(to.point);
    convex_hull(&verts)
}

/// Perimeter of `P ∪ Q`, traced as the boundary of each polygon lying outside the other.
pub fn union_perimeter(p: &ConvexPolygon, q: &ConvexPolygon) -> Result<f64, GeometryError> {
    if !overlaps(p, q) {
        return Err(GeometryError::NotOverlapping);
    }
    // shared collinear boundary is counted once, from q
    Ok(outside_length(p, q, true) + outside_length(q, p, false))
}

/// Length of the boundary of `poly` not inside `other` (Cyrus-Beck per edge).
/// `closed` decides whether an edge running along the boundary of `other` is inside.
fn outside_length(poly: &ConvexPolygon, other: &ConvexPolygon, closed: bool) -> f64 {
    let mut total = 0.0;
    for (_, a, b) in poly.edges() {
        let len = a.dist(b);
        let (mut t0, mut t1) = (0.0f64, 1.0f64);
        for (_, c, d) in other.edges() {
            // inside half-plane: orient(c, d, a + t (b - a)) >= 0
            let fa = orient(c, d, a);
            let fb = orient(c, d, b);
            let slope = fb - fa;
            if slope == 0.0 {
                if fa < 0.0 || (fa == 0.0 && !closed) {
                    t0 = 1.0;
                    t1 = 0.0;
                }
                continue;
            }
            let t = -fa / slope;
            if slope > 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
        let inside = (t1 - t0).max(0.0);
        total += len * (1.0 - inside);
    }
    total
}
