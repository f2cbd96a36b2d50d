mod common;

use udgmcp_core::strips::{one_round, round_shift, RoundPlan, StripSystem};
use udgmcp_core::width::select_width;
use udgmcp_core::*;

fn z(ps: &PointSet) -> usize {
    exact_mcp_count(&build_graph(ps)).unwrap()
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn rational_width_meets_its_expectation_bound() {
    let w = select_width(0.3).unwrap();
    let width = StripWidth::Rational(w.clone());
    for inst in 0..8u64 {
        let ps = common::uniform(14, 2.5, 2.5, 300 + inst);
        let zz = z(&ps) as f64;
        let counts: Vec<f64> = (0..2000)
            .map(|r| {
                let sys =
                    StripSystem::new(width.clone(), round_shift(inst, r, width.value())).unwrap();
                one_round(&ps, &sys).unwrap().len() as f64
            })
            .collect();
        let (mean, se) = mean_and_se(&counts);
        let bound = w.ratio_f64() * zz;
        assert!(
            mean <= bound + 3.0 * se,
            "instance {inst}: {mean} > {bound} + 3 * {se}"
        );
    }
}

#[test]
fn best_of_j_failure_rate_decays() {
    let eps = 0.05;
    let ps = common::uniform(14, 3.0, 3.0, 4242);
    let zz = z(&ps) as f64;
    let threshold = (XI + eps) * zz;
    let trials = 1500u64;
    let mut last = f64::INFINITY;
    for j in 1..=4usize {
        let failures = (0..trials)
            .filter(|&seed| {
                let mut cfg = RandomizedConfig::new(eps, 0.5, seed, Variant::Irrational);
                cfg.rounds = Some(j);
                randomized_solve(&ps, &cfg).unwrap().partition.len() as f64 >= threshold
            })
            .count() as f64;
        let freq = failures / trials as f64;
        let plan = RoundPlan {
            j,
            ..RoundPlan::new(eps, 0.5, Variant::Irrational).unwrap()
        };
        let bound = plan.failure_bound();
        let se = (bound * (1.0 - bound) / trials as f64).sqrt();
        assert!(freq <= bound + 3.0 * se, "j = {j}: {freq} > {bound}");
        // rounds are shared prefixes, so more rounds never fail more often
        assert!(freq <= last);
        last = freq;
    }
}

#[test]
fn every_round_is_valid_and_best_round_is_first_minimum() {
    for seed in 0..30u64 {
        let ps = common::uniform(80, 6.0, 6.0, seed);
        let cfg = RandomizedConfig::new(0.3, 0.1, seed, Variant::Rational);
        let out = randomized_solve(&ps, &cfg).unwrap();
        assert_eq!(out.round_counts.len(), out.rounds);
        let min = *out.round_counts.iter().min().unwrap();
        assert_eq!(out.partition.len(), min);
        assert_eq!(
            out.round_counts.iter().position(|&c| c == min),
            Some(out.best_round)
        );
        for r in 0..out.rounds {
            let sys = StripSystem::new(out.width.clone(), round_shift(seed, r, out.width.value()))
                .unwrap();
            let cp = one_round(&ps, &sys).unwrap();
            assert!(validate_partition(&build_graph(&ps), &cp).is_empty());
            assert_eq!(cp.len(), out.round_counts[r]);
        }
    }
}

#[test]
fn deterministic_solver_is_within_three_of_optimum() {
    for seed in 0..60u64 {
        let ps = common::uniform(12, 2.0 + (seed % 3) as f64, 2.0, 900 + seed);
        let cp = deterministic_3approx(&ps).unwrap();
        assert!(validate_partition(&build_graph(&ps), &cp).is_empty());
        assert!(cp.len() <= 3 * z(&ps));
    }
}
