//! Exact minimum clique partition by subset dynamic programming.
//!
//! `f(∅) = 0` and `f(S) = 1 + min f(S \ T)` over cliques `T ⊆ S` containing the
//! lowest-index vertex of `S`. Because `f` is monotone under taking subsets, only
//! cliques maximal inside `S` need to be tried; they are enumerated with
//! Bron-Kerbosch on adjacency masks.

use thiserror::Error;

use crate::graph::{CliquePartition, UnitDiskGraph};

pub const DEFAULT_MAX_N: usize = 18;
/// Memo tables are dense over all `2^n` subsets.
pub const HARD_MAX_N: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("instance has {n} vertices, exact solver limit is {limit}")]
    TooLarge { n: usize, limit: usize },
}

pub fn exact_mcp(g: &UnitDiskGraph) -> Result<CliquePartition, ExactError> {
    exact_mcp_with_limit(g, DEFAULT_MAX_N)
}

pub fn exact_mcp_count(g: &UnitDiskGraph) -> Result<usize, ExactError> {
    exact_mcp(g).map(|cp| cp.len())
}

pub fn exact_mcp_with_limit(
    g: &UnitDiskGraph,
    limit: usize,
) -> Result<CliquePartition, ExactError> {
    let n = g.n();
    let limit = limit.min(HARD_MAX_N);
    if n > limit {
        return Err(ExactError::TooLarge { n, limit });
    }
    if n == 0 {
        return Ok(CliquePartition::default());
    }
    let adj: Vec<u32> = (0..n).map(|v| g.neighbor_mask(v) as u32).collect();
    let mut dp = SubsetDp {
        adj,
        best: vec![u8::MAX; 1 << n],
        choice: vec![0; 1 << n],
    };
    dp.best[0] = 0;
    let full = ((1u64 << n) - 1) as u32;
    dp.solve(full);

    let mut parts = Vec::new();
    let mut rest = full;
    while rest != 0 {
        let t = dp.choice[rest as usize];
        parts.push(bits(t));
        rest &= !t;
    }
    Ok(CliquePartition::new(parts))
}

struct SubsetDp {
    adj: Vec<u32>,
    best: Vec<u8>,
    choice: Vec<u32>,
}

impl SubsetDp {
    fn solve(&mut self, set: u32) -> u8 {
        let cached = self.best[set as usize];
        if cached != u8::MAX {
            return cached;
        }
        let v = set.trailing_zeros() as usize;
        let mut cliques = Vec::new();
        maximal_cliques(&self.adj, 1 << v, set & self.adj[v], 0, &mut cliques);
        let mut best = u8::MAX;
        let mut pick = 0;
        for t in cliques {
            let sub = self.solve(set & !t);
            if sub + 1 < best {
                best = sub + 1;
                pick = t;
            }
        }
        self.best[set as usize] = best;
        self.choice[set as usize] = pick;
        best
    }
}

/// Bron-Kerbosch with pivoting over `u32` masks.
fn maximal_cliques(adj: &[u32], r: u32, mut p: u32, mut x: u32, out: &mut Vec<u32>) {
    if p == 0 {
        if x == 0 {
            out.push(r);
        }
        return;
    }
    let px = p | x;
    let pivot = bits(px)
        .into_iter()
        .max_by_key(|&u| (p & adj[u]).count_ones())
        .expect("p is nonempty");
    let mut cand = p & !adj[pivot];
    while cand != 0 {
        let u = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        maximal_cliques(adj, r | 1 << u, p & adj[u], x & adj[u], out);
        p &= !(1 << u);
        x |= 1 << u;
    }
}

fn bits(mut m: u32) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        out.push(m.trailing_zeros() as usize);
        m &= m - 1;
    }
    out
}
