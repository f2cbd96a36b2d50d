//! Shifted-grid approximation scheme.
//!
//! Each round draws a uniform shift for a grid of `k x k` cells, solves every
//! nonempty cell exactly and unions the parts. Two cell solvers are available:
//! the subset DP oracle, and the guess-and-verify enumeration over
//! representatives, proximity graph and separating lines. The enumeration is
//! exponential in the part count and only runs at toy sizes.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::exact::{exact_mcp_with_limit, DEFAULT_MAX_N};
use crate::geometry::{
    hull_indices, orient, overlaps, polygon_from_indices, separating_vertex_pair, Point, VertexRef,
};
use crate::graph::{adjacent_points, build_graph, CliquePartition, PointSet};
use crate::rng;

/// Largest cell the enumerative solver accepts.
pub const ENUM_MAX_POINTS: usize = 12;
/// Largest part count the enumerative solver will try.
pub const ENUM_MAX_Q: usize = 4;
/// Degree bound of the proximity graph of an optimal cell partition.
pub const MAX_PROXIMITY_DEGREE: usize = 79;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GridError {
    #[error("eps must lie in (0, 1), got {0}")]
    EpsOutOfRange(f64),
    #[error("delta must lie in (0, 1), got {0}")]
    DeltaOutOfRange(f64),
    #[error("cell side k must be at least 1")]
    BadK,
    #[error("cell {cell:?} holds {points} points, {solver} solver capacity is {capacity}")]
    CellCapacity {
        cell: (i64, i64),
        points: usize,
        solver: &'static str,
        capacity: usize,
    },
    #[error("enumeration capacity exceeded: {points} points, q limit {q_limit}")]
    EnumCapacity { points: usize, q_limit: usize },
    #[error("no valid guess with at most {q_limit} parts in cell {cell:?}")]
    EnumerationExhausted { cell: (i64, i64), q_limit: usize },
    #[error("index set is not a clique: {} and {} are more than 1 apart", .0.0, .0.1)]
    NotAClique((usize, usize)),
    #[error("parts {0} and {1} have overlapping hulls; no separating line exists")]
    HullsNotDisjoint(usize, usize),
    #[error("trial count must be positive")]
    NoTrials,
}

/// Cell side `ceil(16 / eps)`.
pub fn ptas_k(eps: f64) -> Result<u32, GridError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(GridError::EpsOutOfRange(eps));
    }
    Ok((16.0 / eps).ceil() as u32)
}

/// Upper bound `2k^2 + 3k` on the optimum inside one `k x k` cell.
pub fn cell_qmax(k: u64) -> u64 {
    2 * k * k + 3 * k
}

/// Independent rounds for failure probability `delta`: `ceil(log2(1/delta))`.
pub fn ptas_rounds(delta: f64) -> Result<usize, GridError> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(GridError::DeltaOutOfRange(delta));
    }
    Ok(((1.0 / delta).log2().ceil() as usize).max(1))
}

/// Half-open `k x k` cells offset by `shift`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSystem {
    k: f64,
    shift: (f64, f64),
}

impl GridSystem {
    pub fn new(k: u32, shift: (f64, f64)) -> Result<Self, GridError> {
        if k == 0 {
            return Err(GridError::BadK);
        }
        let k = k as f64;
        let ok = |s: f64| (0.0..k).contains(&s);
        assert!(ok(shift.0) && ok(shift.1), "grid shift outside [0, k)^2");
        Ok(GridSystem { k, shift })
    }

    pub fn random(k: u32, seed: u64, round: usize) -> Result<Self, GridError> {
        let mut r = rng::stream(seed, round as u64);
        let side = k.max(1) as f64;
        let sx = r.random_range(0.0..side);
        let sy = r.random_range(0.0..side);
        Self::new(k, (sx, sy))
    }

    fn axis(&self, v: f64, s: f64) -> i64 {
        let mut m = ((v - s) / self.k).floor() as i64;
        let base = |m: i64| s + m as f64 * self.k;
        if v < base(m) {
            m -= 1;
        } else if v >= base(m + 1) {
            m += 1;
        }
        m
    }

    pub fn cell_of(&self, p: Point) -> (i64, i64) {
        (self.axis(p.x, self.shift.0), self.axis(p.y, self.shift.1))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CellSolver {
    Oracle,
    Enumerative,
}

#[derive(Clone, Debug)]
pub struct PtasConfig {
    pub eps: f64,
    pub delta: f64,
    pub seed: u64,
    pub k_override: Option<u32>,
    pub cell_solver: CellSolver,
    pub rounds: Option<usize>,
    pub oracle_limit: usize,
    pub enum_q_limit: usize,
}

impl PtasConfig {
    pub fn new(eps: f64, delta: f64, seed: u64) -> Self {
        PtasConfig {
            eps,
            delta,
            seed,
            k_override: None,
            cell_solver: CellSolver::Oracle,
            rounds: None,
            oracle_limit: DEFAULT_MAX_N,
            enum_q_limit: 3,
        }
    }
}

#[derive(Clone, Debug)]
pub struct PtasOutcome {
    pub partition: CliquePartition,
    pub k: u32,
    pub rounds: usize,
    pub best_round: usize,
    pub round_counts: Vec<usize>,
}

pub fn ptas_solve(ps: &PointSet, cfg: &PtasConfig) -> Result<PtasOutcome, GridError> {
    let k = match cfg.k_override {
        Some(0) => return Err(GridError::BadK),
        Some(k) => k,
        None => ptas_k(cfg.eps)?,
    };
    if !(cfg.eps > 0.0 && cfg.eps < 1.0) {
        return Err(GridError::EpsOutOfRange(cfg.eps));
    }
    let rounds = match cfg.rounds {
        Some(r) => r.max(1),
        None => ptas_rounds(cfg.delta)?,
    };
    let results: Vec<Result<CliquePartition, GridError>> = (0..rounds)
        .into_par_iter()
        .map(|r| {
            let grid = GridSystem::random(k, cfg.seed, r)?;
            grid_round(ps, &grid, cfg)
        })
        .collect();
    let mut best: Option<(usize, CliquePartition)> = None;
    let mut round_counts = Vec::with_capacity(rounds);
    for (r, res) in results.into_iter().enumerate() {
        let cp = res?;
        round_counts.push(cp.len());
        if best.as_ref().is_none_or(|(_, b)| cp.len() < b.len()) {
            best = Some((r, cp));
        }
    }
    let (best_round, partition) = best.expect("at least one round");
    Ok(PtasOutcome {
        partition,
        k,
        rounds,
        best_round,
        round_counts,
    })
}

/// One round: exact solution of every nonempty cell, unioned.
pub fn grid_round(
    ps: &PointSet,
    grid: &GridSystem,
    cfg: &PtasConfig,
) -> Result<CliquePartition, GridError> {
    let mut cells: BTreeMap<(i64, i64), Vec<usize>> = BTreeMap::new();
    for (i, &p) in ps.points().iter().enumerate() {
        cells.entry(grid.cell_of(p)).or_default().push(i);
    }
    let mut parts = Vec::new();
    for (cell, idx) in cells {
        let local = ps.subset(&idx);
        let cp = match cfg.cell_solver {
            CellSolver::Oracle => {
                if idx.len() > cfg.oracle_limit {
                    return Err(GridError::CellCapacity {
                        cell,
                        points: idx.len(),
                        solver: "oracle",
                        capacity: cfg.oracle_limit,
                    });
                }
                exact_mcp_with_limit(&build_graph(&local), cfg.oracle_limit).map_err(|_| {
                    GridError::CellCapacity {
                        cell,
                        points: idx.len(),
                        solver: "oracle",
                        capacity: cfg.oracle_limit,
                    }
                })?
            }
            CellSolver::Enumerative => {
                if idx.len() > ENUM_MAX_POINTS {
                    return Err(GridError::CellCapacity {
                        cell,
                        points: idx.len(),
                        solver: "enumerative",
                        capacity: ENUM_MAX_POINTS,
                    });
                }
                enumerative_cell_solve(&local, cfg.enum_q_limit)?.ok_or(
                    GridError::EnumerationExhausted {
                        cell,
                        q_limit: cfg.enum_q_limit,
                    },
                )?
            }
        };
        parts.extend(
            cp.parts
                .into_iter()
                .map(|part| part.into_iter().map(|v| idx[v]).collect::<Vec<_>>()),
        );
    }
    Ok(CliquePartition::new(parts))
}

/// A guessed cell solution: representatives `r_i`, proximity edges `(a, b)` with
/// `a < b` indexing into the representatives, and one separator per edge.
///
/// Separator `(s, t)` for edge `(a, b)` is oriented so that part `a` lies weakly
/// left of the directed line `s -> t` and part `b` weakly right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellGuess {
    pub representatives: Vec<usize>,
    pub proximity_edges: Vec<(usize, usize)>,
    pub separators: Vec<(usize, usize)>,
}

impl CellGuess {
    pub fn q(&self) -> usize {
        self.representatives.len()
    }

    pub fn max_degree(&self) -> usize {
        let mut deg = vec![0usize; self.q()];
        for &(a, b) in &self.proximity_edges {
            deg[a] += 1;
            deg[b] += 1;
        }
        deg.into_iter().max().unwrap_or(0)
    }
}

/// Pairs of representatives at distance at most 2.
pub fn proximity_edges(points: &[Point], reps: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for a in 0..reps.len() {
        for b in a + 1..reps.len() {
            if points[reps[a]].dist2(points[reps[b]]) <= 4.0 {
                out.push((a, b));
            }
        }
    }
    out
}

/// Verify a guess. Every point within distance 1 of `r_i` and on `r_i`'s side of
/// the separators of edges at `r_i` is a candidate for part `i`. For a
/// non-edge `(i, j)` the unit disks around `r_i` and `r_j` are disjoint, so no
/// point is a candidate for both. The guess is valid when every point has a
/// candidate and the candidates can be assigned so that each part is a clique;
/// only points lying on a separator line have a choice.
pub fn check_guess(cell: &PointSet, guess: &CellGuess) -> Option<CliquePartition> {
    let pts = cell.points();
    let q = guess.q();
    if guess.separators.len() != guess.proximity_edges.len()
        || guess.representatives.iter().any(|&r| r >= pts.len())
    {
        return None;
    }
    let mut incident: Vec<Vec<(usize, bool)>> = vec![Vec::new(); q];
    for (e, &(a, b)) in guess.proximity_edges.iter().enumerate() {
        if a >= q || b >= q || a == b {
            return None;
        }
        incident[a].push((e, true));
        incident[b].push((e, false));
    }
    let candidate = |v: usize, i: usize| -> bool {
        let p = pts[v];
        if !adjacent_points(p, pts[guess.representatives[i]]) {
            return false;
        }
        incident[i].iter().all(|&(e, left)| {
            let (s, t) = guess.separators[e];
            let o = orient(pts[s], pts[t], p);
            if left {
                o >= 0.0
            } else {
                o <= 0.0
            }
        })
    };

    let mut owner: Vec<Option<usize>> = vec![None; pts.len()];
    for (i, &r) in guess.representatives.iter().enumerate() {
        if owner[r].is_some() || !candidate(r, i) {
            return None;
        }
        owner[r] = Some(i);
    }
    let mut ambiguous: Vec<(usize, Vec<usize>)> = Vec::new();
    for (v, slot) in owner.iter_mut().enumerate() {
        if slot.is_some() {
            continue;
        }
        let cands: Vec<usize> = (0..q).filter(|&i| candidate(v, i)).collect();
        match cands.len() {
            0 => return None,
            1 => *slot = Some(cands[0]),
            _ => ambiguous.push((v, cands)),
        }
    }
    let mut parts: Vec<Vec<usize>> = vec![Vec::new(); q];
    for (v, o) in owner.iter().enumerate() {
        if let Some(i) = *o {
            parts[i].push(v);
        }
    }
    let clique = |part: &[usize]| {
        part.iter().enumerate().all(|(a, &u)| {
            part[a + 1..]
                .iter()
                .all(|&w| adjacent_points(pts[u], pts[w]))
        })
    };
    if !parts.iter().all(|p| clique(p)) {
        return None;
    }
    if !assign(pts, &ambiguous, 0, &mut parts) {
        return None;
    }
    for p in &mut parts {
        p.sort_unstable();
    }
    Some(CliquePartition::new(parts))
}

fn assign(
    pts: &[Point],
    ambiguous: &[(usize, Vec<usize>)],
    at: usize,
    parts: &mut [Vec<usize>],
) -> bool {
    let Some((v, cands)) = ambiguous.get(at) else {
        return true;
    };
    for &i in cands {
        if parts[i].iter().all(|&u| adjacent_points(pts[u], pts[*v])) {
            parts[i].push(*v);
            if assign(pts, ambiguous, at + 1, parts) {
                return true;
            }
            parts[i].pop();
        }
    }
    false
}

/// Try `q = 1, 2, ...` in order; for each, representative tuples in
/// lexicographic order, then separator assignments in lexicographic order. The
/// first valid guess wins. `Ok(None)` when nothing up to `q_limit` verifies.
pub fn enumerative_cell_solve(
    cell: &PointSet,
    q_limit: usize,
) -> Result<Option<CliquePartition>, GridError> {
    let n = cell.len();
    if n > ENUM_MAX_POINTS || q_limit > ENUM_MAX_Q {
        return Err(GridError::EnumCapacity { points: n, q_limit });
    }
    if n == 0 {
        return Ok(Some(CliquePartition::default()));
    }
    for q in 1..=q_limit.min(n) {
        let mut reps: Vec<usize> = (0..q).collect();
        loop {
            if let Some(cp) = search_separators(cell, &reps) {
                return Ok(Some(cp));
            }
            if !next_combination(&mut reps, n) {
                break;
            }
        }
    }
    Ok(None)
}

fn search_separators(cell: &PointSet, reps: &[usize]) -> Option<CliquePartition> {
    let pts = cell.points();
    let n = pts.len();
    // every point must be within unit distance of some representative
    if !(0..n).all(|v| reps.iter().any(|&r| adjacent_points(pts[v], pts[r]))) {
        return None;
    }
    let edges = proximity_edges(pts, reps);
    let mut options: Vec<Vec<(usize, usize)>> = Vec::with_capacity(edges.len());
    for &(a, b) in &edges {
        let (ra, rb) = (pts[reps[a]], pts[reps[b]]);
        let mut opts = Vec::new();
        for s in 0..n {
            for t in s + 1..n {
                if pts[s] == pts[t] {
                    continue;
                }
                let (oa, ob) = (orient(pts[s], pts[t], ra), orient(pts[s], pts[t], rb));
                if oa >= 0.0 && ob <= 0.0 {
                    opts.push((s, t));
                } else if oa <= 0.0 && ob >= 0.0 {
                    opts.push((t, s));
                }
            }
        }
        if opts.is_empty() {
            return None;
        }
        options.push(opts);
    }
    let mut pick = vec![0usize; edges.len()];
    loop {
        let guess = CellGuess {
            representatives: reps.to_vec(),
            proximity_edges: edges.clone(),
            separators: pick.iter().zip(&options).map(|(&i, o)| o[i]).collect(),
        };
        if let Some(cp) = check_guess(cell, &guess) {
            return Some(cp);
        }
        // odometer, last edge fastest
        let mut e = edges.len();
        loop {
            if e == 0 {
                return None;
            }
            e -= 1;
            pick[e] += 1;
            if pick[e] < options[e].len() {
                break;
            }
            pick[e] = 0;
        }
    }
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let q = c.len();
    let mut i = q;
    while i > 0 {
        i -= 1;
        if c[i] < n - q + i {
            c[i] += 1;
            for j in i + 1..q {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Build the guess that describes a partition with pairwise non-overlapping hulls:
/// the smallest index of each part as representative and separators from
/// pairs of hull vertices.
pub fn guess_from_partition(
    cell: &PointSet,
    partition: &CliquePartition,
) -> Result<CellGuess, GridError> {
    let pts = cell.points();
    let reps: Vec<usize> = partition
        .parts
        .iter()
        .map(|p| *p.iter().min().expect("nonempty part"))
        .collect();
    let hulls: Vec<Vec<usize>> = partition
        .parts
        .iter()
        .map(|p| hull_indices(pts, p))
        .collect();
    let edges = proximity_edges(pts, &reps);
    let mut separators = Vec::with_capacity(edges.len());
    for &(a, b) in &edges {
        let pa = polygon_from_indices(pts, &hulls[a]);
        let pb = polygon_from_indices(pts, &hulls[b]);
        if overlaps(&pa, &pb) {
            return Err(GridError::HullsNotDisjoint(a, b));
        }
        let (u, v) =
            separating_vertex_pair(&pa, &pb).map_err(|_| GridError::HullsNotDisjoint(a, b))?;
        let index = |r: VertexRef| match r {
            VertexRef::P(i) => hulls[a][i],
            VertexRef::Q(i) => hulls[b][i],
        };
        let (s, t) = (index(u), index(v));
        let side = |part: usize, sign: f64| {
            partition.parts[part]
                .iter()
                .all(|&w| sign * orient(pts[s], pts[t], pts[w]) >= 0.0)
        };
        separators.push(if side(a, 1.0) && side(b, -1.0) {
            (s, t)
        } else {
            (t, s)
        });
    }
    Ok(CellGuess {
        representatives: reps,
        proximity_edges: edges,
        separators,
    })
}

/// Frequencies with which a random shift of a `k x k` grid splits a clique.
#[derive(Clone, Debug, PartialEq)]
pub struct CutStats {
    pub trials: u64,
    /// Split across more than one cell.
    pub cut: u64,
    /// Crossed by a vertical grid line.
    pub vertical: u64,
    /// Crossed by a horizontal grid line.
    pub horizontal: u64,
    /// Crossed by both.
    pub both: u64,
}

impl CutStats {
    pub fn cut_probability(&self) -> f64 {
        self.cut as f64 / self.trials as f64
    }

    pub fn both_probability(&self) -> f64 {
        self.both as f64 / self.trials as f64
    }

    /// Binomial standard error of a frequency.
    pub fn std_err(&self, count: u64) -> f64 {
        let p = count as f64 / self.trials as f64;
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

pub fn clique_cut_probability(
    ps: &PointSet,
    clique: &[usize],
    k: u32,
    trials: u64,
    seed: u64,
) -> Result<CutStats, GridError> {
    if k == 0 {
        return Err(GridError::BadK);
    }
    if trials == 0 {
        return Err(GridError::NoTrials);
    }
    for (a, &u) in clique.iter().enumerate() {
        if let Some(&v) = clique[a + 1..]
            .iter()
            .find(|&&v| !adjacent_points(ps.get(u), ps.get(v)))
        {
            return Err(GridError::NotAClique((u, v)));
        }
    }
    let pts: Vec<Point> = clique.iter().map(|&i| ps.get(i)).collect();
    let side = k as f64;
    let mut r = rng::stream(seed, 0);
    let mut stats = CutStats {
        trials,
        cut: 0,
        vertical: 0,
        horizontal: 0,
        both: 0,
    };
    for _ in 0..trials {
        let grid = GridSystem::new(k, (r.random_range(0.0..side), r.random_range(0.0..side)))?;
        let mut cols = (i64::MAX, i64::MIN);
        let mut rows = (i64::MAX, i64::MIN);
        for &p in &pts {
            let (c, w) = grid.cell_of(p);
            cols = (cols.0.min(c), cols.1.max(c));
            rows = (rows.0.min(w), rows.1.max(w));
        }
        let v = cols.0 != cols.1;
        let h = rows.0 != rows.1;
        stats.vertical += v as u64;
        stats.horizontal += h as u64;
        stats.both += (v && h) as u64;
        stats.cut += (v || h) as u64;
    }
    Ok(stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::exact_mcp_count;

    fn ps(c: &[(f64, f64)]) -> PointSet {
        PointSet::from_xy(c).unwrap()
    }

    #[test]
    fn parameters() {
        assert_eq!(ptas_k(0.5).unwrap(), 32);
        assert_eq!(cell_qmax(6), 90);
        assert_eq!(cell_qmax(1), 5);
        assert_eq!(ptas_rounds(0.1).unwrap(), 4);
        assert!(ptas_rounds(1.0).is_err());
    }

    #[test]
    fn single_clique_cell() {
        let cell = ps(&[(0.0, 0.0), (0.3, 0.2), (0.1, 0.5)]);
        let cp = enumerative_cell_solve(&cell, 3).unwrap().unwrap();
        assert_eq!(cp.len(), 1);
    }

    #[test]
    fn far_apart_cliques_need_no_separators() {
        let cell = ps(&[(0.0, 0.0), (0.2, 0.1), (3.0, 0.0), (3.1, 0.3)]);
        let cp = enumerative_cell_solve(&cell, 3)
            .unwrap()
            .unwrap()
            .canonical();
        assert_eq!(cp.parts, vec![vec![0, 1], vec![2, 3]]);
        let guess = guess_from_partition(&cell, &cp).unwrap();
        assert!(guess.proximity_edges.is_empty());
        assert_eq!(check_guess(&cell, &guess).unwrap().canonical(), cp);
    }

    #[test]
    fn wrong_side_separator_is_invalid() {
        let cell = ps(&[(0.0, 0.0), (0.0, 0.5), (1.2, 0.0), (1.2, 0.5)]);
        let good = CellGuess {
            representatives: vec![0, 2],
            proximity_edges: vec![(0, 1)],
            separators: vec![(0, 1)],
        };
        // line x = 0 directed upward: part 0 lies on it, part 1 to its right
        assert!(check_guess(&cell, &good).is_some());
        let bad = CellGuess {
            separators: vec![(3, 2)],
            ..good.clone()
        };
        // line x = 1.2 directed downward has representative 0 on its right
        assert!(check_guess(&cell, &bad).is_none());
    }

    #[test]
    fn enumeration_matches_oracle_on_a_path() {
        let cell = ps(&[(0.0, 0.0), (0.9, 0.0), (1.8, 0.1), (2.7, 0.0)]);
        let z = exact_mcp_count(&build_graph(&cell)).unwrap();
        let cp = enumerative_cell_solve(&cell, 3).unwrap().unwrap();
        assert_eq!(cp.len(), z);
    }

    #[test]
    fn capacity_is_reported() {
        let coords: Vec<(f64, f64)> = (0..13).map(|i| (i as f64, 0.0)).collect();
        assert!(matches!(
            enumerative_cell_solve(&ps(&coords), 2),
            Err(GridError::EnumCapacity { .. })
        ));
    }

    #[test]
    fn single_cell_round_equals_oracle() {
        let inst = ps(&[(0.1, 0.1), (0.9, 0.2), (1.7, 0.3), (0.5, 1.1), (1.5, 1.4)]);
        let mut cfg = PtasConfig::new(0.5, 0.5, 1);
        cfg.k_override = Some(64);
        let grid = GridSystem::new(64, (32.0, 32.0)).unwrap();
        let cp = grid_round(&inst, &grid, &cfg).unwrap();
        assert_eq!(cp.len(), exact_mcp_count(&build_graph(&inst)).unwrap());
    }

    #[test]
    fn single_point_is_never_cut() {
        let inst = ps(&[(0.3, 0.4)]);
        let s = clique_cut_probability(&inst, &[0], 4, 1000, 9).unwrap();
        assert_eq!(s.cut, 0);
    }
}
