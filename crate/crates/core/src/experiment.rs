//! Seeded Monte Carlo harness: sweeps (realization, W, G, FS, scheme)
//! cells, runs the optimizer and all benchmarks on each, aggregates, and
//! emits CSV/JSON artifacts. Identical config and seed produce
//! byte-identical outputs; cells run in parallel but records are sorted by
//! a total key before emission.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::cost::{tier1_cost, Cents, CostBreakdown};
use crate::demand::{build_demand, DemandMode, TrafficField};
use crate::error::Result;
use crate::linkbudget::{build_link_budgets, LinkBudget, Tech};
use crate::planner::{
    benchmark_all_fiber, benchmark_all_mmw, benchmark_heuristic, build_ilp, solve_ilp,
    surplus_capacity, Method, PlanSolution, TechAvailability,
};
use crate::resilience::{resilience_sweep, FailureReport};
use crate::seed::derive_seed;
use crate::stats::{five_number_summary, mean, std_pop};
use crate::topology::{generate_ap_field, nofac, DeploymentScenario, Scheme};

// Seed-stream tags. Streams shared across compared variants (both schemes,
// all FS modes, all methods) omit the distinguishing coordinate.
const SEED_FIELD: u64 = 1; // (tag, realization)
const SEED_NOFAC: u64 = 2; // (tag, realization, w, g)
const SEED_BUDGET: u64 = 3; // (tag, realization, w, g)
const SEED_TRAFFIC: u64 = 4; // (tag, realization)
const SEED_RESILIENCE: u64 = 5; // (tag, g)

/// One (cell, method) outcome.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentRecord {
    pub realization: usize,
    pub scheme: Scheme,
    pub w: usize,
    pub g: usize,
    pub fs: DemandMode,
    pub method: Method,
    pub total_cents: Cents,
    /// Total divided by AP count, rounded to the cent.
    pub per_ap_cents: Cents,
    pub tier1_cents: Cents,
    pub tier2_link_cents: Cents,
    pub du_side_cents: Cents,
    pub du_pool_cents: Cents,
    pub surplus_bps: i64,
    pub n_fiber: usize,
    pub n_mmw: usize,
    pub n_fso: usize,
    /// Leading APs no technology could serve (optimizer only).
    pub n_excluded: usize,
    pub n_groups: usize,
    pub feasible: bool,
    /// Empty on success; error text when the cell failed.
    pub note: String,
}

/// Builds the deployment, budgets, and demand for one sweep cell and runs
/// all four methods.
#[allow(clippy::too_many_arguments)]
fn run_cell(
    config: &RunConfig,
    realization: usize,
    w: usize,
    g: usize,
) -> Vec<ExperimentRecord> {
    let master = config.master_seed;
    let mut top_cfg = config.topology.clone();
    top_cfg.w = w;
    top_cfg.g_initial = g;
    let field_seed = derive_seed(master, &[SEED_FIELD, realization as u64]);
    let field = generate_ap_field(&top_cfg, config.region_side_m, field_seed);
    let tr = &config.demand.traffic;
    let traffic = TrafficField::generate(
        tr.n_hotspots,
        config.region_side_m,
        tr.amp_min_bps,
        tr.amp_max_bps,
        tr.amplitude_scale,
        tr.sigma_m,
        tr.baseline_bps,
        tr.cap_bps,
        derive_seed(master, &[SEED_TRAFFIC, realization as u64]),
    );
    let avail = TechAvailability::from_configs(&config.fiber, &config.mmw, &config.fso);
    let coords = [realization as u64, w as u64, g as u64];

    let mut records = Vec::new();
    for &scheme in &config.sweep.schemes {
        let mut scheme_cfg = top_cfg.clone();
        scheme_cfg.scheme = scheme;
        let scenario = nofac(
            &scheme_cfg,
            &field,
            derive_seed(master, &[SEED_NOFAC, coords[0], coords[1], coords[2]]),
        );
        let budgets = match build_link_budgets(
            &scenario,
            &config.fiber,
            &config.mmw,
            &config.fso,
            derive_seed(master, &[SEED_BUDGET, coords[0], coords[1], coords[2]]),
        ) {
            Ok(b) => b,
            Err(e) => {
                for &fs in &config.sweep.fs_list {
                    records.push(error_record(config, realization, scheme, w, g, fs, &e.to_string()));
                }
                continue;
            }
        };
        let tier1 = tier1_cost(&scenario, &config.costs);
        for &fs in &config.sweep.fs_list {
            let demand = match build_demand(
                &scenario,
                fs,
                &config.ofdm,
                Some(&traffic),
                config.demand.cp_overhead,
            ) {
                Ok(d) => d,
                Err(e) => {
                    records.push(error_record(config, realization, scheme, w, g, fs, &e.to_string()));
                    continue;
                }
            };
            let instance = build_ilp(&scenario, &budgets, &demand, &config.costs, avail);
            let solutions = [
                solve_ilp(&instance),
                benchmark_all_fiber(&scenario, &budgets, &demand, &config.costs, avail),
                benchmark_all_mmw(&scenario, &budgets, &demand, &config.costs, avail),
                benchmark_heuristic(&scenario, &budgets, &demand, &config.costs, avail),
            ];
            for sol in solutions {
                records.push(make_record(
                    config, realization, &scenario, w, g, fs, tier1, &sol,
                ));
            }
        }
    }
    records
}

#[allow(clippy::too_many_arguments)]
fn make_record(
    config: &RunConfig,
    realization: usize,
    scenario: &DeploymentScenario,
    w: usize,
    g: usize,
    fs: DemandMode,
    tier1: Cents,
    sol: &PlanSolution,
) -> ExperimentRecord {
    let pool = config.costs.du_pool_cents(w);
    let breakdown = CostBreakdown::assemble(
        tier1,
        sol.tier2_link_cents,
        sol.du_side_cents,
        pool,
        config.costs.include_du_pool,
    );
    let l = scenario.field.aps.len();
    ExperimentRecord {
        realization,
        scheme: scenario.scheme,
        w,
        g,
        fs,
        method: sol.method,
        total_cents: breakdown.total_cents,
        per_ap_cents: (breakdown.total_cents as f64 / l as f64).round() as Cents,
        tier1_cents: breakdown.tier1_cents,
        tier2_link_cents: breakdown.tier2_link_cents,
        du_side_cents: breakdown.du_side_cents,
        du_pool_cents: breakdown.du_pool_cents,
        surplus_bps: surplus_capacity(sol).round() as i64,
        n_fiber: sol.tech_count(Tech::Fiber),
        n_mmw: sol.tech_count(Tech::MmWave),
        n_fso: sol.tech_count(Tech::Fso),
        n_excluded: sol.excluded.len(),
        n_groups: scenario.groups.len(),
        feasible: sol.feasible,
        note: String::new(),
    }
}

fn error_record(
    config: &RunConfig,
    realization: usize,
    scheme: Scheme,
    w: usize,
    g: usize,
    fs: DemandMode,
    note: &str,
) -> ExperimentRecord {
    let _ = config;
    ExperimentRecord {
        realization,
        scheme,
        w,
        g,
        fs,
        method: Method::Optimized,
        total_cents: 0,
        per_ap_cents: 0,
        tier1_cents: 0,
        tier2_link_cents: 0,
        du_side_cents: 0,
        du_pool_cents: 0,
        surplus_bps: 0,
        n_fiber: 0,
        n_mmw: 0,
        n_fso: 0,
        n_excluded: 0,
        n_groups: 0,
        feasible: false,
        note: note.to_string(),
    }
}

/// Runs the full sweep. Cells execute in parallel; the result is sorted by
/// (realization, w, g, fs, scheme, method) so ordering is independent of
/// scheduling.
pub fn run_experiment(config: &RunConfig) -> Vec<ExperimentRecord> {
    let mut cells = Vec::new();
    for r in 0..config.realizations {
        for &w in &config.sweep.w_list {
            for &g in &config.sweep.g_list {
                cells.push((r, w, g));
            }
        }
    }
    let mut records: Vec<ExperimentRecord> = cells
        .par_iter()
        .flat_map_iter(|&(r, w, g)| run_cell(config, r, w, g))
        .collect();
    records.sort_by(|a, b| {
        (a.realization, a.w, a.g, a.fs.label(), a.scheme.label(), a.method.label()).cmp(&(
            b.realization,
            b.w,
            b.g,
            b.fs.label(),
            b.scheme.label(),
            b.method.label(),
        ))
    });
    records
}

/// Runs the paired RS/HS resilience sweep for every (w, g) cell, using
/// realization 0's AP field.
pub fn run_resilience(config: &RunConfig) -> FailureReport {
    let master = config.master_seed;
    let mut runs = Vec::new();
    let mut aggregates = Vec::new();
    for &w in &config.sweep.w_list {
        for &g in &config.sweep.g_list {
            let mut top_cfg = config.topology.clone();
            top_cfg.w = w;
            top_cfg.g_initial = g;
            let field = generate_ap_field(
                &top_cfg,
                config.region_side_m,
                derive_seed(master, &[SEED_FIELD, 0]),
            );
            let nofac_seed = derive_seed(master, &[SEED_NOFAC, 0, w as u64, g as u64]);
            let mut rs_cfg = top_cfg.clone();
            rs_cfg.scheme = Scheme::RadioStripe;
            let rs = nofac(&rs_cfg, &field, nofac_seed);
            let mut hs_cfg = top_cfg.clone();
            hs_cfg.scheme = Scheme::Hierarchical;
            let hs = nofac(&hs_cfg, &field, nofac_seed);
            let report = resilience_sweep(
                &rs,
                &hs,
                &config.sweep.p_list,
                config.resilience_runs,
                derive_seed(master, &[SEED_RESILIENCE, g as u64]),
            );
            runs.extend(report.runs);
            aggregates.extend(report.aggregates);
        }
    }
    FailureReport { runs, aggregates }
}

/// Aggregated statistics of one (scheme, w, g, fs, method) group.
#[derive(Debug, Clone, Serialize)]
pub struct SummaryRow {
    pub scheme: Scheme,
    pub w: usize,
    pub g: usize,
    pub fs: DemandMode,
    pub method: Method,
    pub n: usize,
    pub mean_total_cents: f64,
    pub std_total_cents: f64,
    pub mean_per_ap_cents: f64,
    pub std_per_ap_cents: f64,
    pub min_per_ap_cents: f64,
    pub q1_per_ap_cents: f64,
    pub median_per_ap_cents: f64,
    pub q3_per_ap_cents: f64,
    pub max_per_ap_cents: f64,
    pub mean_surplus_bps: f64,
    /// Mean technology shares over assigned Tier-2 links, percent.
    pub fiber_share_pct: f64,
    pub mmw_share_pct: f64,
    pub fso_share_pct: f64,
    pub feasible_fraction: f64,
}

/// Groups records by (scheme, w, g, fs, method) and computes summary
/// statistics. Error records (nonempty note) are skipped.
pub fn summarize(records: &[ExperimentRecord]) -> Vec<SummaryRow> {
    let mut groups: BTreeMap<(&str, usize, usize, &str, &str), Vec<&ExperimentRecord>> =
        BTreeMap::new();
    for r in records.iter().filter(|r| r.note.is_empty()) {
        groups
            .entry((r.scheme.label(), r.w, r.g, r.fs.label(), r.method.label()))
            .or_default()
            .push(r);
    }
    groups
        .into_values()
        .map(|rs| {
            let first = rs[0];
            let totals: Vec<f64> = rs.iter().map(|r| r.total_cents as f64).collect();
            let per_ap: Vec<f64> = rs.iter().map(|r| r.per_ap_cents as f64).collect();
            let surplus: Vec<f64> = rs.iter().map(|r| r.surplus_bps as f64).collect();
            let share = |f: fn(&ExperimentRecord) -> usize| {
                let shares: Vec<f64> = rs
                    .iter()
                    .map(|r| {
                        let assigned = r.n_fiber + r.n_mmw + r.n_fso;
                        if assigned == 0 {
                            0.0
                        } else {
                            100.0 * f(r) as f64 / assigned as f64
                        }
                    })
                    .collect();
                mean(&shares)
            };
            let (min, q1, median, q3, max) = five_number_summary(&per_ap);
            SummaryRow {
                scheme: first.scheme,
                w: first.w,
                g: first.g,
                fs: first.fs,
                method: first.method,
                n: rs.len(),
                mean_total_cents: mean(&totals),
                std_total_cents: std_pop(&totals),
                mean_per_ap_cents: mean(&per_ap),
                std_per_ap_cents: std_pop(&per_ap),
                min_per_ap_cents: min,
                q1_per_ap_cents: q1,
                median_per_ap_cents: median,
                q3_per_ap_cents: q3,
                max_per_ap_cents: max,
                mean_surplus_bps: mean(&surplus),
                fiber_share_pct: share(|r| r.n_fiber),
                mmw_share_pct: share(|r| r.n_mmw),
                fso_share_pct: share(|r| r.n_fso),
                feasible_fraction: rs.iter().filter(|r| r.feasible).count() as f64
                    / rs.len() as f64,
            }
        })
        .collect()
}

fn csv_escape(field: &str) -> String {
    if field.contains([',', '"', '\n']) {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Serializes records as RFC-4180 CSV (stable byte-for-byte).
pub fn records_csv(records: &[ExperimentRecord]) -> String {
    let mut out = String::from(
        "realization,scheme,w,g,fs,method,total_cents,per_ap_cents,tier1_cents,\
         tier2_link_cents,du_side_cents,du_pool_cents,surplus_bps,n_fiber,n_mmw,\
         n_fso,n_excluded,n_groups,feasible,note\n",
    );
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.realization,
            r.scheme.label(),
            r.w,
            r.g,
            r.fs.label(),
            r.method.label(),
            r.total_cents,
            r.per_ap_cents,
            r.tier1_cents,
            r.tier2_link_cents,
            r.du_side_cents,
            r.du_pool_cents,
            r.surplus_bps,
            r.n_fiber,
            r.n_mmw,
            r.n_fso,
            r.n_excluded,
            r.n_groups,
            r.feasible,
            csv_escape(&r.note),
        );
    }
    out
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from(
        "scheme,w,g,fs,method,n,mean_total_cents,std_total_cents,mean_per_ap_cents,\
         std_per_ap_cents,min_per_ap_cents,q1_per_ap_cents,median_per_ap_cents,\
         q3_per_ap_cents,max_per_ap_cents,mean_surplus_bps,fiber_share_pct,\
         mmw_share_pct,fso_share_pct,feasible_fraction\n",
    );
    for s in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.3},{:.6}",
            s.scheme.label(),
            s.w,
            s.g,
            s.fs.label(),
            s.method.label(),
            s.n,
            s.mean_total_cents,
            s.std_total_cents,
            s.mean_per_ap_cents,
            s.std_per_ap_cents,
            s.min_per_ap_cents,
            s.q1_per_ap_cents,
            s.median_per_ap_cents,
            s.q3_per_ap_cents,
            s.max_per_ap_cents,
            s.mean_surplus_bps,
            s.fiber_share_pct,
            s.mmw_share_pct,
            s.fso_share_pct,
            s.feasible_fraction,
        );
    }
    out
}

/// Per-link candidate rates, one row per leading AP.
pub fn budgets_csv(budgets: &[LinkBudget]) -> String {
    let mut out = String::from("du,ap,d_m,rate_fiber_bps,rate_mmw_bps,rate_fso_bps\n");
    for b in budgets {
        let _ = writeln!(
            out,
            "{},{},{:.3},{},{},{}",
            b.du,
            b.ap,
            b.distance_m,
            b.fiber_bps.round() as i64,
            b.mmw_bps.round() as i64,
            b.fso_bps.round() as i64,
        );
    }
    out
}

/// Planned assignment, one row per leading AP.
pub fn solution_csv(solution: &PlanSolution) -> String {
    let mut out = String::from("ap,du,tech,d_m,rate_bps,threshold_bps,link_cost_cents\n");
    let mut rows: Vec<_> = solution.assignments.iter().collect();
    rows.sort_by_key(|a| (a.ap, a.du));
    for a in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.3},{},{},{}",
            a.ap,
            a.du,
            a.tech.label(),
            a.distance_m,
            a.rate_bps.round() as i64,
            a.threshold_bps.round() as i64,
            a.link_cost_cents,
        );
    }
    out
}

pub fn failure_runs_csv(report: &FailureReport) -> String {
    let mut out = String::from("scheme,p,run,failure_fraction\n");
    for r in &report.runs {
        let _ = writeln!(out, "{},{:.6},{},{:.6}", r.scheme.label(), r.p, r.run, r.fraction);
    }
    out
}

pub fn failure_aggregates_csv(report: &FailureReport) -> String {
    let mut out = String::from("scheme,p,mean,std\n");
    for a in &report.aggregates {
        let _ = writeln!(
            out,
            "{},{:.6},{:.6},{:.6}",
            a.scheme.label(),
            a.p,
            a.mean,
            a.std
        );
    }
    out
}

fn plot_tco_vs_g(rows: &[SummaryRow]) -> String {
    let mut out = String::from("scheme,w,fs,method,g,mean_per_ap_cents\n");
    for s in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.3}",
            s.scheme.label(),
            s.w,
            s.fs.label(),
            s.method.label(),
            s.g,
            s.mean_per_ap_cents
        );
    }
    out
}

fn plot_surplus_vs_g(rows: &[SummaryRow]) -> String {
    let mut out = String::from("scheme,w,fs,method,g,mean_surplus_bps\n");
    for s in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.3}",
            s.scheme.label(),
            s.w,
            s.fs.label(),
            s.method.label(),
            s.g,
            s.mean_surplus_bps
        );
    }
    out
}

fn plot_tech_share_vs_w(rows: &[SummaryRow]) -> String {
    let mut out = String::from("scheme,g,fs,method,w,fiber_share_pct,mmw_share_pct,fso_share_pct\n");
    for s in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.3},{:.3},{:.3}",
            s.scheme.label(),
            s.g,
            s.fs.label(),
            s.method.label(),
            s.w,
            s.fiber_share_pct,
            s.mmw_share_pct,
            s.fso_share_pct
        );
    }
    out
}

fn plot_boxplot(rows: &[SummaryRow]) -> String {
    let mut out =
        String::from("scheme,w,g,fs,method,min,q1,median,q3,max\n");
    for s in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.3},{:.3},{:.3},{:.3},{:.3}",
            s.scheme.label(),
            s.w,
            s.g,
            s.fs.label(),
            s.method.label(),
            s.min_per_ap_cents,
            s.q1_per_ap_cents,
            s.median_per_ap_cents,
            s.q3_per_ap_cents,
            s.max_per_ap_cents
        );
    }
    out
}

/// Writes all artifacts under `out_dir`: records.csv, summary.csv,
/// plotdata/*.csv, and run_meta.json.
pub fn emit(
    records: &[ExperimentRecord],
    summaries: &[SummaryRow],
    failure: Option<&FailureReport>,
    config: &RunConfig,
    out_dir: &Path,
) -> Result<()> {
    let plotdir = out_dir.join("plotdata");
    std::fs::create_dir_all(&plotdir)?;
    std::fs::write(out_dir.join("records.csv"), records_csv(records))?;
    std::fs::write(out_dir.join("summary.csv"), summary_csv(summaries))?;
    std::fs::write(plotdir.join("tco_vs_g.csv"), plot_tco_vs_g(summaries))?;
    std::fs::write(plotdir.join("surplus_vs_g.csv"), plot_surplus_vs_g(summaries))?;
    std::fs::write(
        plotdir.join("tech_share_vs_w.csv"),
        plot_tech_share_vs_w(summaries),
    )?;
    std::fs::write(
        plotdir.join("boxplot_tco_per_ap.csv"),
        plot_boxplot(summaries),
    )?;
    if let Some(report) = failure {
        std::fs::write(plotdir.join("failure_vs_p.csv"), failure_aggregates_csv(report))?;
        std::fs::write(out_dir.join("failure_runs.csv"), failure_runs_csv(report))?;
    }

    #[derive(Serialize)]
    struct Meta<'a> {
        config: &'a RunConfig,
        master_seed: u64,
        seed_scheme: &'static str,
        schema: BTreeMap<&'static str, &'static str>,
        version: &'static str,
    }
    let mut schema = BTreeMap::new();
    schema.insert(
        "records.csv",
        "realization,scheme,w,g,fs,method,total_cents,per_ap_cents,tier1_cents,tier2_link_cents,du_side_cents,du_pool_cents,surplus_bps,n_fiber,n_mmw,n_fso,n_excluded,n_groups,feasible,note",
    );
    schema.insert(
        "summary.csv",
        "scheme,w,g,fs,method,n,mean_total_cents,std_total_cents,mean_per_ap_cents,std_per_ap_cents,min_per_ap_cents,q1_per_ap_cents,median_per_ap_cents,q3_per_ap_cents,max_per_ap_cents,mean_surplus_bps,fiber_share_pct,mmw_share_pct,fso_share_pct,feasible_fraction",
    );
    schema.insert("plotdata/tco_vs_g.csv", "scheme,w,fs,method,g,mean_per_ap_cents");
    schema.insert("plotdata/surplus_vs_g.csv", "scheme,w,fs,method,g,mean_surplus_bps");
    schema.insert(
        "plotdata/tech_share_vs_w.csv",
        "scheme,g,fs,method,w,fiber_share_pct,mmw_share_pct,fso_share_pct",
    );
    schema.insert(
        "plotdata/boxplot_tco_per_ap.csv",
        "scheme,w,g,fs,method,min,q1,median,q3,max",
    );
    schema.insert("plotdata/failure_vs_p.csv", "scheme,p,mean,std");
    schema.insert("failure_runs.csv", "scheme,p,run,failure_fraction");
    let meta = Meta {
        config,
        master_seed: config.master_seed,
        seed_scheme:
            "child = splitmix64 chain over (master_seed, stream tag, coordinates); streams: \
             1=ap_field(realization), 2=nofac(realization,w,g), 3=link_budgets(realization,w,g), \
             4=traffic_field(realization), 5=resilience(g); per-link budget draws derive from \
             (stream 3, du, ap); per-run failure draws from (stream 5, p index, run)",
        schema,
        version: env!("CARGO_PKG_VERSION"),
    };
    std::fs::write(
        out_dir.join("run_meta.json"),
        serde_json::to_string_pretty(&meta).map_err(|e| crate::error::Error::Parse(e.to_string()))?,
    )?;
    Ok(())
}
