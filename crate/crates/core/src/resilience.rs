//! Cascading fronthaul failure simulation.
//!
//! A "main" failure takes out an AP's fronthaul link. Every AP whose path
//! to its group's leading AP passes through a failed AP (or whose leading
//! AP itself failed) is lost as a cascaded failure. Serial stripes lose the
//! whole downstream tail; trees lose the failed node's subtree, which is
//! why the hierarchical scheme is more resilient on average.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::seed::derive_seed;
use crate::stats::{mean, std_pop};
use crate::topology::{DeploymentScenario, Scheme};

/// Outcome of one failure draw on one scenario.
#[derive(Debug, Clone, Serialize)]
pub struct FailureScenario {
    pub p: f64,
    pub seed: u64,
    /// APs with main (direct) failures, sorted.
    pub main_failed: Vec<usize>,
    /// APs lost by cascading only, sorted, disjoint from `main_failed`.
    pub cascaded: Vec<usize>,
}

impl FailureScenario {
    pub fn total_failed(&self) -> usize {
        self.main_failed.len() + self.cascaded.len()
    }

    pub fn total_fraction(&self, l: usize) -> f64 {
        self.total_failed() as f64 / l as f64
    }
}

/// One Monte Carlo run's failure fraction.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FailureRun {
    pub scheme: Scheme,
    pub p: f64,
    pub run: usize,
    pub fraction: f64,
}

/// Mean and population std of the failure fraction per (scheme, p).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FailureAggregate {
    pub scheme: Scheme,
    pub p: f64,
    pub mean: f64,
    pub std: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FailureReport {
    pub runs: Vec<FailureRun>,
    pub aggregates: Vec<FailureAggregate>,
}

/// Draws round(p*l) distinct AP indices uniformly (partial Fisher-Yates),
/// returned sorted. Half counts round up.
pub fn draw_main_failures(l: usize, p: f64, seed: u64) -> Vec<usize> {
    assert!((0.0..=1.0).contains(&p));
    let k = ((p * l as f64).round() as usize).min(l);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<usize> = (0..l).collect();
    for i in 0..k {
        let j = rng.gen_range(i..l);
        pool.swap(i, j);
    }
    let mut picked = pool[..k].to_vec();
    picked.sort_unstable();
    picked
}

/// Propagates a set of main failures through every group's topology.
pub fn propagate_failures(
    scenario: &DeploymentScenario,
    main_failed: &[usize],
    p: f64,
    seed: u64,
) -> FailureScenario {
    let failed: std::collections::HashSet<usize> = main_failed.iter().copied().collect();
    let mut cascaded = Vec::new();

    for topo in &scenario.topologies {
        let mut adj: HashMap<usize, Vec<usize>> = HashMap::new();
        for &(a, b, _) in &topo.edges {
            adj.entry(a).or_default().push(b);
            adj.entry(b).or_default().push(a);
        }
        // DFS away from the leading AP, carrying whether any upstream AP
        // (including the leading AP) has failed.
        let root = topo.leading_ap;
        let mut stack = vec![(root, usize::MAX, failed.contains(&root))];
        while let Some((node, parent, upstream_failed)) = stack.pop() {
            if node != root && upstream_failed && !failed.contains(&node) {
                cascaded.push(node);
            }
            let downstream_failed = upstream_failed || failed.contains(&node);
            if let Some(neighbors) = adj.get(&node) {
                for &next in neighbors {
                    if next != parent {
                        stack.push((next, node, downstream_failed));
                    }
                }
            }
        }
    }
    cascaded.sort_unstable();
    FailureScenario {
        p,
        seed,
        main_failed: main_failed.to_vec(),
        cascaded,
    }
}

/// Paired Monte Carlo failure sweep: for every (p, run) the same main
/// failure set is applied to both scenarios, which must share the same AP
/// field and grouping.
pub fn resilience_sweep(
    rs: &DeploymentScenario,
    hs: &DeploymentScenario,
    p_values: &[f64],
    runs: usize,
    seed: u64,
) -> FailureReport {
    assert_eq!(rs.field.aps.len(), hs.field.aps.len());
    let l = rs.field.aps.len();
    let mut run_rows = Vec::with_capacity(p_values.len() * runs * 2);
    let mut aggregates = Vec::new();

    for (pi, &p) in p_values.iter().enumerate() {
        let mut fractions = [Vec::with_capacity(runs), Vec::with_capacity(runs)];
        for run in 0..runs {
            let draw_seed = derive_seed(seed, &[pi as u64, run as u64]);
            let k_m = draw_main_failures(l, p, draw_seed);
            for (si, scenario) in [rs, hs].into_iter().enumerate() {
                let f = propagate_failures(scenario, &k_m, p, draw_seed).total_fraction(l);
                fractions[si].push(f);
                run_rows.push(FailureRun {
                    scheme: scenario.scheme,
                    p,
                    run,
                    fraction: f,
                });
            }
        }
        for (si, scenario) in [rs, hs].into_iter().enumerate() {
            aggregates.push(FailureAggregate {
                scheme: scenario.scheme,
                p,
                mean: mean(&fractions[si]),
                std: std_pop(&fractions[si]),
            });
        }
    }
    FailureReport {
        runs: run_rows,
        aggregates,
    }
}
