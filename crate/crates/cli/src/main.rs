//! Command-line driver: single-scenario planning, Monte Carlo sweeps,
//! resilience simulation, and standalone calculators.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use fhplan_core::config::{parse_config, RunConfig};
use fhplan_core::cost::tier1_cost;
use fhplan_core::demand::{build_demand, sample_traffic_field, DemandMode, TrafficField};
use fhplan_core::experiment::{
    budgets_csv, emit, failure_aggregates_csv, failure_runs_csv, run_experiment, run_resilience,
    solution_csv, summarize,
};
use fhplan_core::geometry::Point2D;
use fhplan_core::linkbudget::{build_link_budgets, fiber_rate, fso_rate, mmw_rate};
use fhplan_core::planner::{
    benchmark_all_fiber, benchmark_all_mmw, benchmark_heuristic, build_ilp, solve_ilp,
    surplus_capacity, TechAvailability,
};
use fhplan_core::seed::derive_seed;
use fhplan_core::topology::{generate_ap_field, nofac, Scheme};

#[derive(Parser)]
#[command(name = "fhplan", version, about = "Fronthaul planning toolkit for cell-free massive MIMO deployments")]
struct Cli {
    /// JSON config file; omitted means all defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed override.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory override.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum SchemeArg {
    Rs,
    Hs,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum FsArg {
    #[value(name = "7.2x")]
    Fs72x,
    #[value(name = "8")]
    Fs8,
    Both,
}

#[derive(Subcommand)]
enum Command {
    /// Plan a single scenario and export budgets and the optimized plan.
    Plan {
        #[arg(long, value_enum, default_value = "rs")]
        scheme: SchemeArg,
        #[arg(long, value_enum, default_value = "7.2x")]
        fs: FsArg,
    },
    /// Run the full Monte Carlo sweep and emit records, summaries, and
    /// plot data.
    Sweep {
        #[arg(long)]
        realizations: Option<usize>,
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        #[arg(long, value_enum)]
        fs: Option<FsArg>,
    },
    /// Paired RS/HS cascading-failure simulation over the p grid.
    Resilience {
        /// Monte Carlo runs per p value.
        #[arg(long)]
        runs: Option<usize>,
    },
    /// Print candidate link rates for given DU-to-AP distances.
    Linkbudget {
        /// Distances in meters.
        #[arg(long, required = true, num_args = 1.., value_delimiter = ',')]
        distance: Vec<f64>,
    },
    /// Sample the traffic field on a grid and export it as CSV.
    TrafficField {
        /// Grid step in meters.
        #[arg(long, default_value_t = 100.0)]
        step: f64,
    },
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => parse_config(path).with_context(|| format!("reading {}", path.display()))?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.master_seed = seed;
    }
    if let Some(out) = &cli.out {
        config.output_dir = out.display().to_string();
    }
    Ok(config)
}

fn schemes_of(arg: SchemeArg) -> Vec<Scheme> {
    match arg {
        SchemeArg::Rs => vec![Scheme::RadioStripe],
        SchemeArg::Hs => vec![Scheme::Hierarchical],
        SchemeArg::Both => vec![Scheme::RadioStripe, Scheme::Hierarchical],
    }
}

fn modes_of(arg: FsArg) -> Vec<DemandMode> {
    match arg {
        FsArg::Fs72x => vec![DemandMode::HomogeneousFs72x],
        FsArg::Fs8 => vec![DemandMode::HomogeneousFs8],
        FsArg::Both => vec![DemandMode::HomogeneousFs72x, DemandMode::HomogeneousFs8],
    }
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("configuring worker pool")?;
    }
    let config = load_config(&cli)?;
    let out_dir = PathBuf::from(&config.output_dir);

    match &cli.command {
        Command::Plan { scheme, fs } => plan(&config, *scheme, *fs, &out_dir),
        Command::Sweep {
            realizations,
            scheme,
            fs,
        } => {
            let mut config = config;
            if let Some(r) = realizations {
                config.realizations = *r;
            }
            if let Some(s) = scheme {
                config.sweep.schemes = schemes_of(*s);
            }
            if let Some(f) = fs {
                config.sweep.fs_list = modes_of(*f);
            }
            config.validate().map_err(|e| anyhow::anyhow!("{e}"))?;
            let records = run_experiment(&config);
            let summaries = summarize(&records);
            emit(&records, &summaries, None, &config, &out_dir)?;
            println!(
                "wrote {} records over {} summary cells to {}",
                records.len(),
                summaries.len(),
                out_dir.display()
            );
            Ok(())
        }
        Command::Resilience { runs } => {
            let mut config = config;
            if let Some(r) = runs {
                config.resilience_runs = *r;
            }
            let report = run_resilience(&config);
            std::fs::create_dir_all(&out_dir)?;
            std::fs::write(out_dir.join("failure_runs.csv"), failure_runs_csv(&report))?;
            std::fs::write(
                out_dir.join("failure_aggregates.csv"),
                failure_aggregates_csv(&report),
            )?;
            for a in &report.aggregates {
                println!(
                    "scheme={} p={:.3} mean={:.4} std={:.4}",
                    a.scheme.label(),
                    a.p,
                    a.mean,
                    a.std
                );
            }
            Ok(())
        }
        Command::Linkbudget { distance } => {
            println!("d_m,rate_fiber_bps,rate_mmw_bps,rate_fso_bps");
            for (i, &d) in distance.iter().enumerate() {
                if d <= 0.0 {
                    bail!("distance must be positive, got {d}");
                }
                let mmw = mmw_rate(d, &config.mmw, derive_seed(config.master_seed, &[i as u64]));
                let fso = fso_rate(d, &config.fso)?;
                println!(
                    "{:.3},{},{},{}",
                    d,
                    fiber_rate(&config.fiber).round() as i64,
                    mmw.round() as i64,
                    fso.round() as i64
                );
            }
            Ok(())
        }
        Command::TrafficField { step } => {
            if *step <= 0.0 {
                bail!("step must be positive");
            }
            let tr = &config.demand.traffic;
            let field = TrafficField::generate(
                tr.n_hotspots,
                config.region_side_m,
                tr.amp_min_bps,
                tr.amp_max_bps,
                tr.amplitude_scale,
                tr.sigma_m,
                tr.baseline_bps,
                tr.cap_bps,
                derive_seed(config.master_seed, &[4, 0]),
            );
            std::fs::create_dir_all(&out_dir)?;
            let mut csv = String::from("x_m,y_m,demand_bps\n");
            let n = (config.region_side_m / step).floor() as usize;
            for i in 0..=n {
                for j in 0..=n {
                    let p = Point2D::new(i as f64 * step, j as f64 * step);
                    csv.push_str(&format!(
                        "{:.3},{:.3},{}\n",
                        p.x,
                        p.y,
                        sample_traffic_field(&field, &p).round() as i64
                    ));
                }
            }
            let path = out_dir.join("traffic_field.csv");
            std::fs::write(&path, csv)?;
            println!("wrote {}", path.display());
            Ok(())
        }
    }
}

fn plan(config: &RunConfig, scheme: SchemeArg, fs: FsArg, out_dir: &Path) -> Result<()> {
    let schemes = schemes_of(scheme);
    let modes = modes_of(fs);
    std::fs::create_dir_all(out_dir)?;
    let master = config.master_seed;
    let w = config.sweep.w_list[0];
    let g = config.sweep.g_list[0];
    let mut top_cfg = config.topology.clone();
    top_cfg.w = w;
    top_cfg.g_initial = g;
    let field = generate_ap_field(&top_cfg, config.region_side_m, derive_seed(master, &[1, 0]));
    let avail = TechAvailability::from_configs(&config.fiber, &config.mmw, &config.fso);

    for s in schemes {
        let mut cfg_s = top_cfg.clone();
        cfg_s.scheme = s;
        let scenario = nofac(
            &cfg_s,
            &field,
            derive_seed(master, &[2, 0, w as u64, g as u64]),
        );
        let budgets = build_link_budgets(
            &scenario,
            &config.fiber,
            &config.mmw,
            &config.fso,
            derive_seed(master, &[3, 0, w as u64, g as u64]),
        )?;
        std::fs::write(
            out_dir.join(format!("budgets_{}.csv", s.label())),
            budgets_csv(&budgets),
        )?;
        let tier1 = tier1_cost(&scenario, &config.costs);
        for &mode in &modes {
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
                derive_seed(master, &[4, 0]),
            );
            let demand = build_demand(
                &scenario,
                mode,
                &config.ofdm,
                Some(&traffic),
                config.demand.cp_overhead,
            )?;
            let instance = build_ilp(&scenario, &budgets, &demand, &config.costs, avail);
            let optimized = solve_ilp(&instance);
            let stem = format!("{}_{}", s.label(), mode.label());
            std::fs::write(
                out_dir.join(format!("solution_{stem}.csv")),
                solution_csv(&optimized),
            )?;
            std::fs::write(
                out_dir.join(format!("solution_{stem}.json")),
                serde_json::to_string_pretty(&optimized)?,
            )?;
            let fiber = benchmark_all_fiber(&scenario, &budgets, &demand, &config.costs, avail);
            let mmw = benchmark_all_mmw(&scenario, &budgets, &demand, &config.costs, avail);
            let heur = benchmark_heuristic(&scenario, &budgets, &demand, &config.costs, avail);
            println!("scheme={} fs={} groups={}", s.label(), mode.label(), scenario.groups.len());
            for sol in [&optimized, &fiber, &mmw, &heur] {
                println!(
                    "  {:<10} total=${:.2} surplus={:.2} Gbps feasible={}",
                    sol.method.label(),
                    (tier1 + sol.cost_cents()) as f64 / 100.0,
                    surplus_capacity(sol) / 1e9,
                    sol.feasible
                );
            }
        }
    }
    Ok(())
}
