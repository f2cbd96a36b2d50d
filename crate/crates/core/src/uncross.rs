//! Local improvement that removes overlapping convex hulls from a clique partition.
//!
//! The potential `Ψ` is the sum of hull perimeters. For an overlapping pair
//! `C, D` with hulls `P, Q`, the petals of `P \ Q` and `Q \ P` form the vertices
//! of a bipartite incompatibility graph `H`. If some petal is isolated in `H`
//! its points can join the other clique. Otherwise `H` is a perfect matching of
//! pairwise crossing edges with `k` odd, and a chord of `P ∩ Q` joining two
//! opposite crossings splits `C ∪ D` into two cliques. Both moves decrease `Ψ`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{
    hull_indices, orient, overlaps, petal_decomposition, polygon_from_indices, ConvexPolygon,
    GeometryError, PetalDecomposition, Point,
};
use crate::graph::{build_graph, is_clique_points, validate_partition, CliquePartition, PointSet};

/// Moves must lower `Ψ` by more than this.
pub const DESCENT_TOL: f64 = 1e-12;

/// Points this close to a cutting line count as lying on it.
const LINE_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UncrossError {
    #[error("input is not a valid clique partition: {0}")]
    InvalidPartition(String),
    #[error("parts {0} and {1}: {2}")]
    Geometry(usize, usize, GeometryError),
    #[error("halving precondition violated: {0}")]
    HalvingPrecondition(String),
    #[error("no chord among {k} rotations splits the pair into two cliques with descent")]
    NoValidChord { k: usize },
    #[error("no improving move for overlapping parts {0} and {1}")]
    Stuck(usize, usize),
    #[error("iteration cap {0} exceeded")]
    CapExceeded(usize),
}

pub fn part_hull(ps: &PointSet, part: &[usize]) -> ConvexPolygon {
    polygon_from_indices(ps.points(), &hull_indices(ps.points(), part))
}

fn hull_perimeter(ps: &PointSet, part: &[usize]) -> f64 {
    if part.is_empty() {
        return 0.0;
    }
    part_hull(ps, part).perimeter()
}

pub fn psi(cp: &CliquePartition, ps: &PointSet) -> f64 {
    cp.parts.iter().map(|p| hull_perimeter(ps, p)).sum()
}

/// First pair `i < j` whose hulls overlap.
pub fn find_overlapping_pair(cp: &CliquePartition, ps: &PointSet) -> Option<(usize, usize)> {
    let hulls: Vec<ConvexPolygon> = cp.parts.iter().map(|p| part_hull(ps, p)).collect();
    for i in 0..hulls.len() {
        for j in i + 1..hulls.len() {
            if overlaps(&hulls[i], &hulls[j]) {
                return Some((i, j));
            }
        }
    }
    None
}

/// A vertex of `H`: a petal of `P` (blue) or of `Q` (red).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Petal {
    Blue(usize),
    Red(usize),
}

impl Petal {
    /// Position on the circle of `2k` alternating vertices.
    pub fn position(self) -> usize {
        match self {
            Petal::Blue(i) => 2 * i,
            Petal::Red(j) => 2 * j + 1,
        }
    }
}

/// Relative placement of two edges of `H` on the circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgePair {
    SharedEndpoint,
    Crossing,
    /// Non-crossing, endpoints read blue, red, red, blue around the circle.
    Parallel,
    /// Non-crossing, endpoints alternate blue, red, blue, red around the circle.
    AntiParallel,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IncompatibilityGraph {
    pub k: usize,
    /// Edges `(i, j)` joining blue `b_i` and red `r_j`.
    pub edges: Vec<(usize, usize)>,
    /// Points of `C` in each petal of `P`.
    pub blue_points: Vec<Vec<usize>>,
    /// Points of `D` in each petal of `Q`.
    pub red_points: Vec<Vec<usize>>,
}

impl IncompatibilityGraph {
    pub fn blue_degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e.0 == i).count()
    }

    pub fn red_degree(&self, j: usize) -> usize {
        self.edges.iter().filter(|e| e.1 == j).count()
    }

    pub fn isolated(&self) -> Vec<Petal> {
        let mut out = Vec::new();
        for i in 0..self.k {
            if self.blue_degree(i) == 0 {
                out.push(Petal::Blue(i));
            }
            if self.red_degree(i) == 0 {
                out.push(Petal::Red(i));
            }
        }
        out
    }

    pub fn points_of(&self, petal: Petal) -> &[usize] {
        match petal {
            Petal::Blue(i) => &self.blue_points[i],
            Petal::Red(j) => &self.red_points[j],
        }
    }

    /// `k` odd and the edge set is exactly `{ b_i r_{i + ⌊k/2⌋} }`.
    pub fn is_antipodal_matching(&self) -> bool {
        let k = self.k;
        if k.is_multiple_of(2) || self.edges.len() != k {
            return false;
        }
        let mut e = self.edges.clone();
        e.sort_unstable();
        e.iter()
            .enumerate()
            .all(|(i, &(b, r))| b == i && r == (i + k / 2) % k)
    }

    pub fn classify(&self, e: (usize, usize), f: (usize, usize)) -> EdgePair {
        if e.0 == f.0 || e.1 == f.1 {
            return EdgePair::SharedEndpoint;
        }
        let n = 2 * self.k;
        let (a, b) = (Petal::Blue(e.0).position(), Petal::Red(e.1).position());
        // walk counterclockwise from a to b
        let inside = |x: usize| {
            let (dx, db) = ((x + n - a) % n, (b + n - a) % n);
            dx > 0 && dx < db
        };
        let (c, d) = (Petal::Blue(f.0).position(), Petal::Red(f.1).position());
        if inside(c) != inside(d) {
            return EdgePair::Crossing;
        }
        // both on the arc a -> b or both on the arc b -> a; order the pair along the walk from a
        let (dc, dd) = ((c + n - a) % n, (d + n - a) % n);
        let red_first = dd < dc;
        // from a (blue): arc a->b ends at red b, so the order is a, [f], b or a, b, [f]
        let alternating = if inside(c) {
            // a, (c|d in order), b : B ? ? R -> alternating when red comes first
            red_first
        } else {
            // a, b, (c|d in order) : B R ? ? -> alternating when blue comes first
            !red_first
        };
        if alternating {
            EdgePair::AntiParallel
        } else {
            EdgePair::Parallel
        }
    }

    pub fn anti_parallel_pairs(&self) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for (a, &e) in self.edges.iter().enumerate() {
            for &f in &self.edges[a + 1..] {
                if self.classify(e, f) == EdgePair::AntiParallel {
                    out.push((e, f));
                }
            }
        }
        out
    }
}

/// Edge `(i, j)` iff some `x ∈ C` in petal `X_i` and `y ∈ D` in petal `Y_j` are
/// more than 1 apart.
pub fn build_incompatibility_graph(
    c: &[usize],
    d: &[usize],
    ps: &PointSet,
    dec: &PetalDecomposition,
) -> IncompatibilityGraph {
    let k = dec.k();
    let mut blue_points = vec![Vec::new(); k];
    let mut red_points = vec![Vec::new(); k];
    for &x in c {
        if let Some(i) = dec.petal_of_p(ps.get(x)) {
            blue_points[i].push(x);
        }
    }
    for &y in d {
        if let Some(j) = dec.petal_of_q(ps.get(y)) {
            red_points[j].push(y);
        }
    }
    let mut edges = Vec::new();
    for (i, blue) in blue_points.iter().enumerate() {
        for (j, red) in red_points.iter().enumerate() {
            let far = blue
                .iter()
                .any(|&x| red.iter().any(|&y| ps.get(x).dist2(ps.get(y)) > 1.0));
            if far {
                edges.push((i, j));
            }
        }
    }
    IncompatibilityGraph {
        k,
        edges,
        blue_points,
        red_points,
    }
}

fn descends(ps: &PointSet, before: (&[usize], &[usize]), after: (&[usize], &[usize])) -> bool {
    let old = hull_perimeter(ps, before.0) + hull_perimeter(ps, before.1);
    let new = hull_perimeter(ps, after.0) + hull_perimeter(ps, after.1);
    new < old - DESCENT_TOL
}

/// Move the points of an isolated, nonempty petal to the other clique. Tries
/// isolated petals in order and returns the first move that keeps both parts
/// nonempty cliques and lowers `Ψ`.
pub fn isolated_petal_move(
    c: &[usize],
    d: &[usize],
    ps: &PointSet,
    graph: &IncompatibilityGraph,
) -> Option<(Petal, Vec<usize>, Vec<usize>)> {
    let pts = ps.points();
    for petal in graph.isolated() {
        let moving = graph.points_of(petal);
        if moving.is_empty() {
            continue;
        }
        let (from, to) = match petal {
            Petal::Blue(_) => (c, d),
            Petal::Red(_) => (d, c),
        };
        let rest: Vec<usize> = from
            .iter()
            .copied()
            .filter(|v| !moving.contains(v))
            .collect();
        if rest.is_empty() {
            continue;
        }
        let mut grown = to.to_vec();
        grown.extend_from_slice(moving);
        grown.sort_unstable();
        if !is_clique_points(pts, &grown) {
            continue;
        }
        let (c2, d2) = match petal {
            Petal::Blue(_) => (rest, grown),
            Petal::Red(_) => (grown, rest),
        };
        if descends(ps, (c, d), (&c2, &d2)) {
            return Some((petal, c2, d2));
        }
    }
    None
}

/// Split `C ∪ D` by the line through a chord `c_m c_{m+k}` of `P ∩ Q`. Points
/// on the line go left. The canonical chord `m = 0` separates `b_0` from
/// `r_{⌊k/2⌋}`; the remaining rotations are tried after it. When a chord runs
/// along a polygon edge, the vertices of that edge sit on the line; for those
/// chords the opposite tie rule is tried as well.
pub fn halving_cut_move(
    c: &[usize],
    d: &[usize],
    ps: &PointSet,
    graph: &IncompatibilityGraph,
    dec: &PetalDecomposition,
) -> Result<(usize, Vec<usize>, Vec<usize>), UncrossError> {
    if !graph.isolated().is_empty() {
        return Err(UncrossError::HalvingPrecondition(format!(
            "isolated petals {:?}",
            graph.isolated()
        )));
    }
    if !graph.is_antipodal_matching() {
        return Err(UncrossError::HalvingPrecondition(format!(
            "k = {}, edges {:?} are not the antipodal matching",
            graph.k, graph.edges
        )));
    }
    let pts = ps.points();
    let mut union: Vec<usize> = c.iter().chain(d).copied().collect();
    union.sort_unstable();
    for m in 0..graph.k {
        let (s, t) = dec.halving_chord(m);
        let len = s.dist(t);
        let dist = |v: usize| orient(s, t, pts[v]) / len;
        let on_line = union.iter().any(|&v| dist(v).abs() <= LINE_TOL);
        let ties: &[bool] = if on_line { &[true, false] } else { &[true] };
        for &tie_left in ties {
            let (left, right): (Vec<usize>, Vec<usize>) = union.iter().partition(|&&v| {
                let x = dist(v);
                x > LINE_TOL || (x.abs() <= LINE_TOL && tie_left)
            });
            if left.is_empty() || right.is_empty() {
                continue;
            }
            if is_clique_points(pts, &left)
                && is_clique_points(pts, &right)
                && descends(ps, (c, d), (&left, &right))
            {
                return Ok((m, left, right));
            }
        }
    }
    Err(UncrossError::NoValidChord { k: graph.k })
}

/// When `C ∪ D` is a clique: an extreme vertex of the union alone, the rest together.
pub fn merge_split_move(
    c: &[usize],
    d: &[usize],
    ps: &PointSet,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let pts = ps.points();
    let mut union: Vec<usize> = c.iter().chain(d).copied().collect();
    union.sort_unstable();
    if union.len() < 2 || !is_clique_points(pts, &union) {
        return None;
    }
    let key = |&v: &usize| (pts[v].x, pts[v].y, v);
    let v = *union
        .iter()
        .min_by(|a, b| {
            let (ka, kb) = (key(a), key(b));
            ka.0.total_cmp(&kb.0)
                .then(ka.1.total_cmp(&kb.1))
                .then(ka.2.cmp(&kb.2))
        })
        .expect("nonempty union");
    let rest: Vec<usize> = union.iter().copied().filter(|&u| u != v).collect();
    let single = vec![v];
    descends(ps, (c, d), (&rest, &single)).then_some((rest, single))
}

/// Best split of `C ∪ D` by a line into two nonempty cliques that lowers `Ψ`.
/// Candidate lines pass through two points of the union; points on the line
/// are split at every position along it, in both directions.
pub fn separable_split_move(
    c: &[usize],
    d: &[usize],
    ps: &PointSet,
) -> Option<(Vec<usize>, Vec<usize>)> {
    let pts = ps.points();
    let mut union: Vec<usize> = c.iter().chain(d).copied().collect();
    union.sort_unstable();
    let old = hull_perimeter(ps, c) + hull_perimeter(ps, d);
    let mut best: Option<(f64, Vec<usize>, Vec<usize>)> = None;
    for (a, &u) in union.iter().enumerate() {
        for &v in &union[a + 1..] {
            let (s, t) = (pts[u], pts[v]);
            if s == t {
                continue;
            }
            let (mut left, mut right, mut on) = (Vec::new(), Vec::new(), Vec::new());
            for &w in &union {
                let o = orient(s, t, pts[w]);
                if o > 0.0 {
                    left.push(w);
                } else if o < 0.0 {
                    right.push(w);
                } else {
                    on.push(w);
                }
            }
            let along = |w: usize| (pts[w].x - s.x) * (t.x - s.x) + (pts[w].y - s.y) * (t.y - s.y);
            on.sort_by(|&x, &y| along(x).total_cmp(&along(y)));
            for cut in 0..=on.len() {
                for flip in [false, true] {
                    let (head, tail) = on.split_at(cut);
                    let (to_left, to_right) = if flip { (tail, head) } else { (head, tail) };
                    let mut l: Vec<usize> = left.iter().chain(to_left).copied().collect();
                    let mut r: Vec<usize> = right.iter().chain(to_right).copied().collect();
                    if l.is_empty() || r.is_empty() {
                        continue;
                    }
                    if !is_clique_points(pts, &l) || !is_clique_points(pts, &r) {
                        continue;
                    }
                    let new = hull_perimeter(ps, &l) + hull_perimeter(ps, &r);
                    if new < old - DESCENT_TOL && best.as_ref().is_none_or(|b| new < b.0) {
                        l.sort_unstable();
                        r.sort_unstable();
                        best = Some((new, l, r));
                    }
                }
            }
        }
    }
    best.map(|(_, l, r)| (l, r))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Move {
    IsolatedPetal {
        parts: (usize, usize),
        petal: Petal,
    },
    HalvingCut {
        parts: (usize, usize),
        rotation: usize,
    },
    MergeSplit {
        parts: (usize, usize),
    },
    SeparableSplit {
        parts: (usize, usize),
    },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::IsolatedPetal { parts, petal } => {
                write!(f, "petal {petal:?} of parts {parts:?}")
            }
            Move::HalvingCut { parts, rotation } => {
                write!(f, "halving cut {rotation} on parts {parts:?}")
            }
            Move::MergeSplit { parts } => write!(f, "merge-split on parts {parts:?}"),
            Move::SeparableSplit { parts } => write!(f, "separable split on parts {parts:?}"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct UncrossOutcome {
    pub partition: CliquePartition,
    /// `Ψ` before the first move and after each move.
    pub psi_trace: Vec<f64>,
    pub moves: Vec<Move>,
}

/// One improving move for overlapping parts `i` and `j`.
pub fn improve_pair(
    cp: &CliquePartition,
    ps: &PointSet,
    i: usize,
    j: usize,
) -> Result<(Move, Vec<usize>, Vec<usize>), UncrossError> {
    let (c, d) = (&cp.parts[i], &cp.parts[j]);
    let parts = (i, j);
    let fallback = |e: UncrossError| {
        if let Some((c2, d2)) = merge_split_move(c, d, ps) {
            Ok((Move::MergeSplit { parts }, c2, d2))
        } else if let Some((c2, d2)) = separable_split_move(c, d, ps) {
            Ok((Move::SeparableSplit { parts }, c2, d2))
        } else {
            Err(e)
        }
    };
    let dec = match petal_decomposition(&part_hull(ps, c), &part_hull(ps, d)) {
        Ok(dec) => dec,
        Err(GeometryError::Containment) => return fallback(UncrossError::Stuck(i, j)),
        Err(e) => return fallback(UncrossError::Geometry(i, j, e)),
    };
    let graph = build_incompatibility_graph(c, d, ps, &dec);
    if let Some((petal, c2, d2)) = isolated_petal_move(c, d, ps, &graph) {
        return Ok((Move::IsolatedPetal { parts, petal }, c2, d2));
    }
    if !graph.isolated().is_empty() {
        // isolated petal whose move would empty a part; the union is then a clique
        return fallback(UncrossError::Stuck(i, j));
    }
    match halving_cut_move(c, d, ps, &graph, &dec) {
        Ok((rotation, c2, d2)) => Ok((Move::HalvingCut { parts, rotation }, c2, d2)),
        Err(e) => fallback(e),
    }
}

pub fn uncross_partition(
    cp: &CliquePartition,
    ps: &PointSet,
) -> Result<UncrossOutcome, UncrossError> {
    let violations = validate_partition(&build_graph(ps), cp);
    if let Some(v) = violations.first() {
        return Err(UncrossError::InvalidPartition(v.to_string()));
    }
    let cap = (10 * cp.len() * cp.len() * ps.len()).max(1);
    let mut cur = cp.clone();
    let mut psi_now = psi(&cur, ps);
    let mut psi_trace = vec![psi_now];
    let mut moves = Vec::new();
    while let Some((i, j)) = find_overlapping_pair(&cur, ps) {
        if moves.len() >= cap {
            return Err(UncrossError::CapExceeded(cap));
        }
        let (mv, c2, d2) = improve_pair(&cur, ps, i, j)?;
        cur.parts[i] = c2;
        cur.parts[j] = d2;
        let next = psi(&cur, ps);
        if next >= psi_now - DESCENT_TOL {
            return Err(UncrossError::Stuck(i, j));
        }
        psi_now = next;
        psi_trace.push(next);
        moves.push(mv);
    }
    Ok(UncrossOutcome {
        partition: cur,
        psi_trace,
        moves,
    })
}

/// Hull of `part` as points; convenience for callers that inspect geometry.
pub fn hull_points(ps: &PointSet, part: &[usize]) -> Vec<Point> {
    part_hull(ps, part).vertices().to_vec()
}
