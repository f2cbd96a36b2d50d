//! Exact clique partition of points confined to a horizontal strip of width at most √3/2.
//!
//! Sort by x and orient every non-adjacent pair from left to right. Inside such a
//! strip two non-adjacent points are more than 1/2 apart in x, so the orientation
//! is transitive; the non-adjacency graph is a comparability graph and its
//! minimum coloring is given by longest-chain labels. Each label class is an
//! antichain, i.e. a clique of the unit disk graph.

use thiserror::Error;

use crate::geometry::Point;
use crate::graph::{adjacent_points, CliquePartition, PointSet};

/// The double nearest √3/2.
pub const SQRT3_HALF: f64 = 0.866_025_403_784_438_6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StripError {
    #[error("strip width {width} exceeds sqrt(3)/2")]
    WidthExceeded { width: f64 },
    #[error("strip width must be positive and finite, got {width}")]
    BadWidth { width: f64 },
    #[error("point {label} (y = {y}) lies outside the strip [{lo}, {hi})")]
    PointOutsideStrip {
        label: usize,
        y: f64,
        lo: f64,
        hi: f64,
    },
    #[error("label class {class} is not a clique: {} and {} are not adjacent", .pair.0, .pair.1)]
    NonCliqueClass { class: usize, pair: (usize, usize) },
}

/// Points of one strip `[y_base, y_base + width)`, each tagged with an external label.
#[derive(Clone, Debug)]
pub struct StripInstance {
    points: Vec<Point>,
    labels: Vec<usize>,
    y_base: f64,
    y_top: f64,
    width: f64,
}

impl StripInstance {
    pub fn new(ps: &PointSet, y_base: f64, width: f64) -> Result<Self, StripError> {
        let idx: Vec<usize> = (0..ps.len()).collect();
        Self::from_subset(ps, &idx, y_base, width)
    }

    /// Strip over `ps[idx]`; output parts are expressed in the indices `idx`.
    pub fn from_subset(
        ps: &PointSet,
        idx: &[usize],
        y_base: f64,
        width: f64,
    ) -> Result<Self, StripError> {
        Self::bounded(ps, idx, y_base, y_base + width, width)
    }

    /// Strip `[y_base, y_top)` of nominal width `width`; for strip systems whose
    /// boundaries are computed independently of one another.
    pub(crate) fn bounded(
        ps: &PointSet,
        idx: &[usize],
        y_base: f64,
        y_top: f64,
        width: f64,
    ) -> Result<Self, StripError> {
        if !(width > 0.0 && width.is_finite()) {
            return Err(StripError::BadWidth { width });
        }
        let inst = StripInstance {
            points: idx.iter().map(|&i| ps.get(i)).collect(),
            labels: idx.to_vec(),
            y_base,
            y_top,
            width,
        };
        inst.check_membership()?;
        Ok(inst)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn y_base(&self) -> f64 {
        self.y_base
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn check_membership(&self) -> Result<(), StripError> {
        let hi = self.y_top;
        for (p, &label) in self.points.iter().zip(&self.labels) {
            if !(p.y >= self.y_base && p.y < hi) {
                return Err(StripError::PointOutsideStrip {
                    label,
                    y: p.y,
                    lo: self.y_base,
                    hi,
                });
            }
        }
        Ok(())
    }

    /// Positions sorted by (x, y, label).
    fn sweep_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.points.len()).collect();
        order.sort_by(|&a, &b| {
            let (pa, pb) = (self.points[a], self.points[b]);
            pa.x.total_cmp(&pb.x)
                .then(pa.y.total_cmp(&pb.y))
                .then(self.labels[a].cmp(&self.labels[b]))
        });
        order
    }
}

/// Minimum clique partition of a strip instance of width `<= √3/2`.
pub fn solve_strip(inst: &StripInstance) -> Result<CliquePartition, StripError> {
    if inst.width > SQRT3_HALF {
        return Err(StripError::WidthExceeded { width: inst.width });
    }
    chain_partition(inst)
}

/// Longest-chain labelling without the width precondition. Label classes are
/// always verified; above √3/2 the result is a valid partition but possibly not
/// a minimum one.
pub fn chain_partition(inst: &StripInstance) -> Result<CliquePartition, StripError> {
    let order = inst.sweep_order();
    let pts: Vec<Point> = order.iter().map(|&i| inst.points[i]).collect();
    let mut level = vec![0usize; pts.len()];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for j in 0..pts.len() {
        let mut l = 0;
        for i in 0..j {
            if !adjacent_points(pts[i], pts[j]) {
                l = l.max(level[i]);
            }
        }
        level[j] = l + 1;
        if classes.len() < level[j] {
            classes.push(Vec::new());
        }
        classes[l].push(j);
    }
    let mut parts = Vec::with_capacity(classes.len());
    for (class, members) in classes.iter().enumerate() {
        for (a, &u) in members.iter().enumerate() {
            if let Some(&v) = members[a + 1..]
                .iter()
                .find(|&&v| !adjacent_points(pts[u], pts[v]))
            {
                return Err(StripError::NonCliqueClass {
                    class,
                    pair: (inst.labels[order[u]], inst.labels[order[v]]),
                });
            }
        }
        parts.push(members.iter().map(|&m| inst.labels[order[m]]).collect());
    }
    Ok(CliquePartition::new(parts))
}

/// Whether the left-to-right orientation of non-adjacent pairs is transitive.
pub fn check_transitive(inst: &StripInstance) -> bool {
    let order = inst.sweep_order();
    let pts: Vec<Point> = order.iter().map(|&i| inst.points[i]).collect();
    let n = pts.len();
    let before = |i: usize, j: usize| i < j && !adjacent_points(pts[i], pts[j]);
    for i in 0..n {
        for j in i + 1..n {
            if !before(i, j) {
                continue;
            }
            for k in j + 1..n {
                if before(j, k) && !before(i, k) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn inst(c: &[(f64, f64)], width: f64) -> StripInstance {
        StripInstance::new(&PointSet::from_xy(c).unwrap(), 0.0, width).unwrap()
    }

    #[test]
    fn constant_matches_sqrt() {
        assert_eq!(SQRT3_HALF, 3f64.sqrt() / 2.0);
    }

    #[test]
    fn collinear_chain_needs_two_parts() {
        let cp = solve_strip(&inst(&[(0.0, 0.0), (0.6, 0.0), (1.2, 0.0)], 0.8)).unwrap();
        assert_eq!(cp.len(), 2);
    }

    #[test]
    fn close_pair_is_one_part() {
        let cp = solve_strip(&inst(&[(0.0, 0.0), (0.5, 0.5)], 0.8)).unwrap();
        assert_eq!(cp.len(), 1);
    }

    #[test]
    fn rejects_wide_strips_and_outside_points() {
        let wide = inst(&[(0.0, 0.0)], 0.9);
        assert_eq!(
            solve_strip(&wide),
            Err(StripError::WidthExceeded { width: 0.9 })
        );
        assert!(chain_partition(&wide).is_ok());
        let ps = PointSet::from_xy(&[(0.0, 0.8)]).unwrap();
        assert!(matches!(
            StripInstance::new(&ps, 0.0, 0.8),
            Err(StripError::PointOutsideStrip { label: 0, .. })
        ));
    }

    #[test]
    fn empty_and_singleton_are_transitive() {
        assert!(check_transitive(&inst(&[], 0.5)));
        assert!(check_transitive(&inst(&[(0.0, 0.1)], 0.5)));
        assert_eq!(solve_strip(&inst(&[], 0.5)).unwrap().len(), 0);
    }

    #[test]
    fn unit_width_breaks_transitivity() {
        let bad = inst(&[(0.0, 0.0), (0.3, 0.99), (0.6, 0.0)], 1.0);
        assert!(!check_transitive(&bad));
    }

    #[test]
    fn labels_are_preserved_for_subsets() {
        let ps = PointSet::from_xy(&[(0.0, 5.0), (0.0, 0.1), (2.0, 0.2), (9.0, 9.0)]).unwrap();
        let s = StripInstance::from_subset(&ps, &[1, 2], 0.0, 0.5).unwrap();
        let cp = solve_strip(&s).unwrap().canonical();
        assert_eq!(cp.parts, vec![vec![1], vec![2]]);
    }
}
