//! Unit disk graphs over indexed point sets, and clique partitions of them.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::Point;

/// Rows are kept as bitsets up to this many vertices.
const BITSET_LIMIT: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex index {index} out of range for {n} vertices")]
    OutOfRange { index: usize, n: usize },
    #[error("point {index} has a non-finite coordinate")]
    NonFinite { index: usize },
}

/// Points indexed `0..n`; a point's id is its position.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self, GraphError> {
        if let Some(index) = points.iter().position(|p| !p.is_finite()) {
            return Err(GraphError::NonFinite { index });
        }
        Ok(PointSet { points })
    }

    pub fn from_xy(coords: &[(f64, f64)]) -> Result<Self, GraphError> {
        Self::new(coords.iter().map(|&c| c.into()).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn subset(&self, idx: &[usize]) -> PointSet {
        PointSet {
            points: idx.iter().map(|&i| self.points[i]).collect(),
        }
    }

    /// `(min_x, min_y, max_x, max_y)`, or `None` for an empty set.
    pub fn bounding_box(&self) -> Option<(f64, f64, f64, f64)> {
        let first = self.points.first()?;
        Some(
            self.points
                .iter()
                .fold((first.x, first.y, first.x, first.y), |(a, b, c, d), p| {
                    (a.min(p.x), b.min(p.y), c.max(p.x), d.max(p.y))
                }),
        )
    }
}

/// Adjacent iff squared distance `<= 1`, boundary inclusive, no slack.
#[inline]
pub fn adjacent_points(a: Point, b: Point) -> bool {
    a.dist2(b) <= 1.0
}

#[derive(Clone, Debug)]
pub struct UnitDiskGraph {
    n: usize,
    neighbors: Vec<Vec<usize>>,
    rows: Option<Vec<Vec<u64>>>,
}

impl UnitDiskGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted neighbor list of `v` (no self loop).
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        match &self.rows {
            Some(rows) => rows[u][v / 64] >> (v % 64) & 1 == 1,
            None => self.neighbors[u].binary_search(&v).is_ok(),
        }
    }

    /// Neighborhood of `v` restricted to vertices `< 64` as a mask; used by the exact oracle.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        match &self.rows {
            Some(rows) => rows[v][0],
            None => self.neighbors[v]
                .iter()
                .take_while(|&&u| u < 64)
                .fold(0u64, |m, &u| m | 1 << u),
        }
    }
}

/// Unit disk graph of `ps`, built with a unit bucket grid.
pub fn build_graph(ps: &PointSet) -> UnitDiskGraph {
    let n = ps.len();
    let pts = ps.points();
    let cell = |p: Point| (p.x.floor() as i64, p.y.floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &p) in pts.iter().enumerate() {
        buckets.entry(cell(p)).or_default().push(i);
    }
    let mut neighbors = vec![Vec::new(); n];
    for (i, &p) in pts.iter().enumerate() {
        let (cx, cy) = cell(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(b) = buckets.get(&(cx + dx, cy + dy)) {
                    for &j in b {
                        if j != i && adjacent_points(p, pts[j]) {
                            neighbors[i].push(j);
                        }
                    }
                }
            }
        }
        neighbors[i].sort_unstable();
    }
    let rows = (n <= BITSET_LIMIT).then(|| {
        let words = n.div_ceil(64).max(1);
        neighbors
            .iter()
            .map(|nb| {
                let mut row = vec![0u64; words];
                for &j in nb {
                    row[j / 64] |= 1 << (j % 64);
                }
                row
            })
            .collect()
    });
    UnitDiskGraph { n, neighbors, rows }
}

pub fn is_clique(g: &UnitDiskGraph, part: &[usize]) -> Result<bool, GraphError> {
    if let Some(&index) = part.iter().find(|&&i| i >= g.n()) {
        return Err(GraphError::OutOfRange { index, n: g.n() });
    }
    Ok(first_non_adjacent(g, part).is_none())
}

pub(crate) fn first_non_adjacent(g: &UnitDiskGraph, part: &[usize]) -> Option<(usize, usize)> {
    for (a, &u) in part.iter().enumerate() {
        for &v in &part[a + 1..] {
            if u != v && !g.adjacent(u, v) {
                return Some((u, v));
            }
        }
    }
    None
}

/// Pairwise-distance clique test straight from coordinates.
pub fn is_clique_points(points: &[Point], part: &[usize]) -> bool {
    part.iter().enumerate().all(|(a, &u)| {
        part[a + 1..]
            .iter()
            .all(|&v| adjacent_points(points[u], points[v]))
    })
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliquePartition {
    pub parts: Vec<Vec<usize>>,
}

impl CliquePartition {
    pub fn new(parts: Vec<Vec<usize>>) -> Self {
        CliquePartition { parts }
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Sorts each part and orders parts by their smallest element.
    pub fn canonicalize(&mut self) {
        for p in &mut self.parts {
            p.sort_unstable();
        }
        self.parts.sort();
    }

    pub fn canonical(mut self) -> Self {
        self.canonicalize();
        self
    }

    /// Part index of each vertex, for a partition of `0..n`.
    pub fn labels(&self, n: usize) -> Vec<Option<usize>> {
        let mut out = vec![None; n];
        for (k, part) in self.parts.iter().enumerate() {
            for &v in part {
                if v < n {
                    out[v] = Some(k);
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    OutOfRange {
        part: usize,
        vertex: usize,
    },
    EmptyPart {
        part: usize,
    },
    DuplicateVertex {
        vertex: usize,
        parts: (usize, usize),
    },
    Uncovered {
        vertex: usize,
    },
    NonClique {
        part: usize,
        pair: (usize, usize),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::OutOfRange { part, vertex } => {
                write!(f, "part {part}: vertex {vertex} out of range")
            }
            Violation::EmptyPart { part } => write!(f, "part {part} is empty"),
            Violation::DuplicateVertex { vertex, parts } => {
                write!(
                    f,
                    "duplicate vertex {vertex} in parts {} and {}",
                    parts.0, parts.1
                )
            }
            Violation::Uncovered { vertex } => write!(f, "vertex {vertex} is not covered"),
            Violation::NonClique { part, pair } => write!(
                f,
                "non-clique part {part}: vertices {} and {} are not adjacent",
                pair.0, pair.1
            ),
        }
    }
}

/// Every violation of the partition invariants; empty iff `cp` is a valid clique partition of `g`.
pub fn validate_partition(g: &UnitDiskGraph, cp: &CliquePartition) -> Vec<Violation> {
    let n = g.n();
    let mut out = Vec::new();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    for (k, part) in cp.parts.iter().enumerate() {
        if part.is_empty() {
            out.push(Violation::EmptyPart { part: k });
        }
        let mut in_range = Vec::with_capacity(part.len());
        for &v in part {
            if v >= n {
                out.push(Violation::OutOfRange { part: k, vertex: v });
                continue;
            }
            match owner[v] {
                Some(prev) => out.push(Violation::DuplicateVertex {
                    vertex: v,
                    parts: (prev, k),
                }),
                None => owner[v] = Some(k),
            }
            in_range.push(v);
        }
        if let Some(pair) = first_non_adjacent(g, &in_range) {
            out.push(Violation::NonClique { part: k, pair });
        }
    }
    out.extend(
        owner
            .iter()
            .enumerate()
            .filter(|(_, o)| o.is_none())
            .map(|(vertex, _)| Violation::Uncovered { vertex }),
    );
    out
}
