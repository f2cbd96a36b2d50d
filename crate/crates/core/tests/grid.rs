mod common;

use rand::Rng;

use udgmcp_core::grid::{
    cell_qmax, check_guess, proximity_edges, ptas_k, ptas_rounds, CellGuess, PtasConfig,
};
use udgmcp_core::*;

fn z(ps: &PointSet) -> usize {
    exact_mcp_count(&build_graph(ps)).unwrap()
}

/// Every ordered pair of distinct point indices, the candidate separators.
fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|s| (0..n).filter(move |&t| t != s).map(move |t| (s, t)))
        .collect()
}

#[test]
fn guesses_with_shared_representatives_never_beat_the_optimum() {
    let mut checked = 0;
    for seed in 0..40u64 {
        let ps = common::uniform(5, 1.6, 1.6, 500 + seed);
        let g = build_graph(&ps);
        let opt = exact_mcp(&g).unwrap();
        let zz = opt.len();
        let part_of = opt.labels(ps.len());
        let pairs = ordered_pairs(ps.len());
        let mut r = common::rng(seed);
        for q in 2..=3usize.min(ps.len()) {
            let mut reps: Vec<usize> = (0..q).collect();
            loop {
                let shared =
                    (0..q).any(|a| (a + 1..q).any(|b| part_of[reps[a]] == part_of[reps[b]]));
                if shared {
                    let edges = proximity_edges(ps.points(), &reps);
                    let assignments: Vec<Vec<(usize, usize)>> = if edges.len() <= 1 {
                        if edges.is_empty() {
                            vec![vec![]]
                        } else {
                            pairs.iter().map(|&p| vec![p]).collect()
                        }
                    } else {
                        (0..300)
                            .map(|_| {
                                edges
                                    .iter()
                                    .map(|_| pairs[r.random_range(0..pairs.len())])
                                    .collect()
                            })
                            .collect()
                    };
                    for separators in assignments {
                        let guess = CellGuess {
                            representatives: reps.clone(),
                            proximity_edges: edges.clone(),
                            separators,
                        };
                        if let Some(cp) = check_guess(&ps, &guess) {
                            assert!(validate_partition(&g, &cp).is_empty());
                            assert!(cp.len() >= zz);
                            checked += 1;
                        }
                    }
                }
                // next combination in lexicographic order
                let Some(i) = (0..q).rev().find(|&i| reps[i] < ps.len() - q + i) else {
                    break;
                };
                reps[i] += 1;
                for k in i + 1..q {
                    reps[k] = reps[k - 1] + 1;
                }
            }
        }
    }
    assert!(checked > 0);
}

#[test]
fn parameters_follow_their_formulas() {
    assert_eq!(ptas_k(0.5).unwrap(), 32);
    assert_eq!(ptas_k(1.0 / 3.0).unwrap(), 48);
    assert_eq!(cell_qmax(4), 44);
    assert_eq!(ptas_rounds(0.1).unwrap(), 4);
    assert_eq!(ptas_rounds(0.5).unwrap(), 1);
    assert!(ptas_k(0.0).is_err());
    assert!(ptas_rounds(1.0).is_err());
}

#[test]
fn cells_never_need_more_than_qmax_cliques() {
    let mut r = common::rng(77);
    for _ in 0..100 {
        let k = 2u32;
        let n = r.random_range(1..=14);
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|_| (r.random_range(0.0..k as f64), r.random_range(0.0..k as f64)))
            .collect();
        let ps = PointSet::from_xy(&pts).unwrap();
        assert!(z(&ps) as u64 <= cell_qmax(k as u64));
    }
}

#[test]
fn enumerative_and_oracle_cells_agree_on_whole_runs() {
    let mut compared = 0;
    for seed in 0..10u64 {
        let ps = common::uniform(12, 2.5, 2.5, 40 + seed);
        let mut oracle = PtasConfig::new(0.5, 0.5, seed);
        oracle.k_override = Some(1);
        let mut enumerative = oracle.clone();
        enumerative.cell_solver = CellSolver::Enumerative;
        enumerative.enum_q_limit = 4;
        let a = ptas_solve(&ps, &oracle).unwrap();
        match ptas_solve(&ps, &enumerative) {
            Ok(b) => {
                assert_eq!(a.round_counts, b.round_counts, "seed {seed}");
                assert!(validate_partition(&build_graph(&ps), &b.partition).is_empty());
                compared += 1;
            }
            Err(GridError::CellCapacity { .. }) | Err(GridError::EnumerationExhausted { .. }) => {}
            Err(e) => panic!("seed {seed}: {e}"),
        }
    }
    assert!(
        compared >= 5,
        "only {compared} runs fit the enumerative limits"
    );
}
