//! Tier-2 technology selection.
//!
//! Every leading AP must be connected to its DU by exactly one of fiber,
//! mmWave, or FSO. The objective minimizes link costs plus DU-side
//! equipment (fiber equipment sets sized by a ceiling constraint, one
//! mmWave transmitter per DU that uses mmWave), subject to per-link
//! capacity thresholds and a per-DU mean availability SLA. The problem
//! separates by DU, so each DU subproblem is solved exactly by
//! branch-and-bound and the results are concatenated.

use serde::Serialize;

use crate::cost::{Cents, CostParams};
use crate::demand::DemandProfile;
use crate::linkbudget::{FiberConfig, FsoConfig, LinkBudget, MmWaveConfig, Tech};
use crate::topology::DeploymentScenario;

/// Slack applied to the availability comparison so that exactly-binding
/// sums are not rejected by floating-point noise.
pub const AVAILABILITY_TOL: f64 = 1e-9;

/// Long-run availability of each technology.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TechAvailability {
    pub fiber: f64,
    pub mmw: f64,
    pub fso: f64,
}

impl TechAvailability {
    pub fn from_configs(fiber: &FiberConfig, mmw: &MmWaveConfig, fso: &FsoConfig) -> Self {
        TechAvailability {
            fiber: fiber.availability,
            mmw: mmw.availability,
            fso: fso.availability,
        }
    }

    pub fn get(&self, tech: Tech) -> f64 {
        match tech {
            Tech::Fiber => self.fiber,
            Tech::MmWave => self.mmw,
            Tech::Fso => self.fso,
        }
    }
}

/// One admissible technology choice for a link (capacity already checked).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LinkOption {
    pub tech: Tech,
    pub cost_cents: Cents,
    pub rate_bps: f64,
    pub availability: f64,
}

/// One leading-AP link with its admissible options, cheapest first.
#[derive(Debug, Clone, Serialize)]
pub struct IlpLink {
    pub du: usize,
    pub ap: usize,
    pub distance_m: f64,
    pub threshold_bps: f64,
    pub options: Vec<LinkOption>,
}

/// All links of one DU. Subproblems are independent.
#[derive(Debug, Clone, Serialize)]
pub struct DuSubproblem {
    pub du: usize,
    pub links: Vec<IlpLink>,
}

/// A leading AP no technology can serve at its threshold. Excluded from
/// the solve and surfaced as a capacity violation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct InfeasibleLink {
    pub du: usize,
    pub ap: usize,
    pub threshold_bps: f64,
    pub best_rate_bps: f64,
}

/// The full Tier-2 problem after capacity pre-pruning.
#[derive(Debug, Clone, Serialize)]
pub struct IlpInstance {
    pub n_dus: usize,
    pub subproblems: Vec<DuSubproblem>,
    pub excluded: Vec<InfeasibleLink>,
    /// Fiber links served per DU-side fiber equipment set.
    pub theta: usize,
    pub fiber_unit_cents: Cents,
    pub mmw_du_cents: Cents,
    pub zeta_sla: f64,
}

/// Planning method that produced a solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Optimized,
    AllFiber,
    AllMmw,
    Heuristic,
}

impl Method {
    pub fn label(&self) -> &'static str {
        match self {
            Method::Optimized => "optimized",
            Method::AllFiber => "all_fiber",
            Method::AllMmw => "all_mmw",
            Method::Heuristic => "heuristic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstraintId {
    Capacity,
    Availability,
}

impl ConstraintId {
    pub fn label(&self) -> &'static str {
        match self {
            ConstraintId::Capacity => "capacity",
            ConstraintId::Availability => "availability",
        }
    }
}

/// A violated constraint, identified by DU and (for capacity) AP.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Violation {
    pub constraint: ConstraintId,
    pub du: usize,
    pub ap: Option<usize>,
    pub magnitude: f64,
}

/// Technology assigned to one leading-AP link.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Assignment {
    pub du: usize,
    pub ap: usize,
    pub tech: Tech,
    pub distance_m: f64,
    pub rate_bps: f64,
    pub threshold_bps: f64,
    pub link_cost_cents: Cents,
}

/// A complete Tier-2 plan with its cost components and diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct PlanSolution {
    pub method: Method,
    /// Sorted by (du, ap).
    pub assignments: Vec<Assignment>,
    /// Fiber equipment sets per DU: ceil(n_fiber / theta).
    pub kappa: Vec<usize>,
    /// Whether each DU carries a mmWave transmitter.
    pub mmw_active: Vec<bool>,
    pub tier2_link_cents: Cents,
    pub du_side_cents: Cents,
    pub feasible: bool,
    /// Set only on solutions proved optimal for a fully feasible instance.
    pub optimal: bool,
    pub violations: Vec<Violation>,
    pub excluded: Vec<InfeasibleLink>,
}

impl PlanSolution {
    /// Tier-2 cost: selected links plus DU-side equipment.
    pub fn cost_cents(&self) -> Cents {
        self.tier2_link_cents + self.du_side_cents
    }

    pub fn tech_count(&self, tech: Tech) -> usize {
        self.assignments.iter().filter(|a| a.tech == tech).count()
    }
}

/// Provided minus required rate, summed over assigned leading links.
/// Negative terms (deficiency) are included.
pub fn surplus_capacity(solution: &PlanSolution) -> f64 {
    solution
        .assignments
        .iter()
        .map(|a| a.rate_bps - a.threshold_bps)
        .sum()
}

/// Builds the Tier-2 instance: one link per leading AP, options pruned by
/// the capacity threshold. Links no technology can serve are excluded and
/// reported rather than aborting the build.
pub fn build_ilp(
    scenario: &DeploymentScenario,
    budgets: &[LinkBudget],
    demand: &DemandProfile,
    params: &CostParams,
    avail: TechAvailability,
) -> IlpInstance {
    let n_dus = scenario.dus.positions.len();
    let mut subproblems: Vec<DuSubproblem> = (0..n_dus)
        .map(|du| DuSubproblem {
            du,
            links: Vec::new(),
        })
        .collect();
    let mut excluded = Vec::new();

    for b in budgets {
        let threshold = demand.threshold(b.ap);
        let mut options: Vec<LinkOption> = [Tech::Fiber, Tech::MmWave, Tech::Fso]
            .into_iter()
            .filter(|&t| b.rate(t) >= threshold)
            .map(|t| LinkOption {
                tech: t,
                cost_cents: params.link_cost(t, b.distance_m),
                rate_bps: b.rate(t),
                availability: avail.get(t),
            })
            .collect();
        if options.is_empty() {
            let best = b
                .fiber_bps
                .max(b.mmw_bps)
                .max(b.fso_bps);
            excluded.push(InfeasibleLink {
                du: b.du,
                ap: b.ap,
                threshold_bps: threshold,
                best_rate_bps: best,
            });
            continue;
        }
        options.sort_by(|a, b| a.cost_cents.cmp(&b.cost_cents).then(a.tech.cmp(&b.tech)));
        subproblems[b.du].links.push(IlpLink {
            du: b.du,
            ap: b.ap,
            distance_m: b.distance_m,
            threshold_bps: threshold,
            options,
        });
    }
    subproblems.retain(|s| !s.links.is_empty());

    IlpInstance {
        n_dus,
        subproblems,
        excluded,
        theta: params.theta,
        fiber_unit_cents: params.fiber_du_unit_cents(),
        mmw_du_cents: crate::cost::dollars_to_cents(params.mmw_du_usd),
        zeta_sla: params.zeta_sla,
    }
}

struct DuSolve {
    /// Option index per link, in the subproblem's link order.
    picks: Vec<usize>,
    /// Availability SLA satisfied.
    feasible: bool,
    /// SLA deficit when infeasible (sum shortfall).
    violation: f64,
}

/// Solves the full instance exactly by per-DU branch-and-bound.
///
/// Each DU is solved in two phases: first with the availability SLA
/// enforced; if no assignment satisfies it, the cost-minimal assignment
/// ignoring the SLA is returned and the solution is marked infeasible with
/// the deficit recorded.
pub fn solve_ilp(instance: &IlpInstance) -> PlanSolution {
    let mut assignments = Vec::new();
    let mut kappa = vec![0usize; instance.n_dus];
    let mut mmw_active = vec![false; instance.n_dus];
    let mut violations: Vec<Violation> = instance
        .excluded
        .iter()
        .map(|e| Violation {
            constraint: ConstraintId::Capacity,
            du: e.du,
            ap: Some(e.ap),
            magnitude: e.threshold_bps - e.best_rate_bps,
        })
        .collect();

    for sub in &instance.subproblems {
        let solved = solve_du(sub, instance);
        let mut n_fiber = 0usize;
        let mut n_mmw = 0usize;
        for (link, &pick) in sub.links.iter().zip(&solved.picks) {
            let opt = link.options[pick];
            match opt.tech {
                Tech::Fiber => n_fiber += 1,
                Tech::MmWave => n_mmw += 1,
                Tech::Fso => {}
            }
            assignments.push(Assignment {
                du: link.du,
                ap: link.ap,
                tech: opt.tech,
                distance_m: link.distance_m,
                rate_bps: opt.rate_bps,
                threshold_bps: link.threshold_bps,
                link_cost_cents: opt.cost_cents,
            });
        }
        kappa[sub.du] = n_fiber.div_ceil(instance.theta);
        mmw_active[sub.du] = n_mmw > 0;
        if !solved.feasible {
            violations.push(Violation {
                constraint: ConstraintId::Availability,
                du: sub.du,
                ap: None,
                magnitude: solved.violation,
            });
        }
    }

    assignments.sort_by_key(|a| (a.du, a.ap));
    let tier2_link_cents = assignments.iter().map(|a| a.link_cost_cents).sum();
    let du_side_cents = du_side_total(&kappa, &mmw_active, instance);
    let feasible = violations.is_empty();
    PlanSolution {
        method: Method::Optimized,
        assignments,
        kappa,
        mmw_active,
        tier2_link_cents,
        du_side_cents,
        feasible,
        optimal: feasible,
        violations,
        excluded: instance.excluded.clone(),
    }
}

fn du_side_total(kappa: &[usize], mmw_active: &[bool], instance: &IlpInstance) -> Cents {
    kappa
        .iter()
        .zip(mmw_active)
        .map(|(&k, &v)| {
            k as Cents * instance.fiber_unit_cents + if v { instance.mmw_du_cents } else { 0 }
        })
        .sum()
}

fn solve_du(sub: &DuSubproblem, instance: &IlpInstance) -> DuSolve {
    // Fail-first branch order: largest spread between the two cheapest
    // options first; single-option links are effectively fixed variables.
    let mut order: Vec<usize> = (0..sub.links.len()).collect();
    let spread = |i: usize| -> Cents {
        let o = &sub.links[i].options;
        if o.len() < 2 {
            Cents::MAX
        } else {
            o[1].cost_cents - o[0].cost_cents
        }
    };
    order.sort_by(|&a, &b| spread(b).cmp(&spread(a)).then(a.cmp(&b)));

    let n = order.len();
    let mut suffix_min_cost = vec![0 as Cents; n + 1];
    let mut suffix_max_avail = vec![0.0f64; n + 1];
    for i in (0..n).rev() {
        let link = &sub.links[order[i]];
        suffix_min_cost[i] = suffix_min_cost[i + 1] + link.options[0].cost_cents;
        suffix_max_avail[i] = suffix_max_avail[i + 1]
            + link
                .options
                .iter()
                .map(|o| o.availability)
                .fold(f64::NEG_INFINITY, f64::max);
    }
    let required = sub.links.len() as f64 * instance.zeta_sla;

    if let Some(best) = branch(
        sub,
        instance,
        &order,
        &suffix_min_cost,
        &suffix_max_avail,
        Some(required),
    ) {
        return DuSolve {
            picks: best.picks,
            feasible: true,
            violation: 0.0,
        };
    }
    // SLA unsatisfiable for this DU: report the cost-minimal plan anyway.
    let best = branch(
        sub,
        instance,
        &order,
        &suffix_min_cost,
        &suffix_max_avail,
        None,
    )
    .expect("every link has at least one option");
    let achieved: f64 = sub
        .links
        .iter()
        .zip(&best.picks)
        .map(|(l, &p)| l.options[p].availability)
        .sum();
    DuSolve {
        picks: best.picks,
        feasible: false,
        violation: required - achieved,
    }
}

struct BranchBest {
    cost: Cents,
    /// Option index per link in the subproblem's own order.
    picks: Vec<usize>,
}

fn branch(
    sub: &DuSubproblem,
    instance: &IlpInstance,
    order: &[usize],
    suffix_min_cost: &[Cents],
    suffix_max_avail: &[f64],
    required_avail: Option<f64>,
) -> Option<BranchBest> {
    struct Ctx<'a> {
        sub: &'a DuSubproblem,
        theta: usize,
        fiber_unit: Cents,
        mmw_du: Cents,
        order: &'a [usize],
        suffix_min_cost: &'a [Cents],
        suffix_max_avail: &'a [f64],
        required: Option<f64>,
        best: Option<BranchBest>,
        picks: Vec<usize>,
    }

    fn recurse(
        ctx: &mut Ctx,
        depth: usize,
        n_fiber: usize,
        n_mmw: usize,
        avail: f64,
        committed: Cents,
    ) {
        let du_side_lb = n_fiber.div_ceil(ctx.theta) as Cents * ctx.fiber_unit
            + if n_mmw > 0 { ctx.mmw_du } else { 0 };
        let lower = committed + ctx.suffix_min_cost[depth] + du_side_lb;
        if let Some(best) = &ctx.best {
            if lower >= best.cost {
                return;
            }
        }
        if let Some(required) = ctx.required {
            if avail + ctx.suffix_max_avail[depth] < required - AVAILABILITY_TOL {
                return;
            }
        }
        if depth == ctx.order.len() {
            let total = committed + du_side_lb;
            if ctx.best.as_ref().map_or(true, |b| total < b.cost) {
                ctx.best = Some(BranchBest {
                    cost: total,
                    picks: ctx.picks.clone(),
                });
            }
            return;
        }
        let link_idx = ctx.order[depth];
        let n_options = ctx.sub.links[link_idx].options.len();
        for oi in 0..n_options {
            let opt = ctx.sub.links[link_idx].options[oi];
            ctx.picks[link_idx] = oi;
            recurse(
                ctx,
                depth + 1,
                n_fiber + usize::from(opt.tech == Tech::Fiber),
                n_mmw + usize::from(opt.tech == Tech::MmWave),
                avail + opt.availability,
                committed + opt.cost_cents,
            );
        }
    }

    let mut ctx = Ctx {
        sub,
        theta: instance.theta,
        fiber_unit: instance.fiber_unit_cents,
        mmw_du: instance.mmw_du_cents,
        order,
        suffix_min_cost,
        suffix_max_avail,
        required: required_avail,
        best: None,
        picks: vec![0; sub.links.len()],
    };
    recurse(&mut ctx, 0, 0, 0, 0.0, 0);
    ctx.best
}

/// Builds a benchmark plan with a fixed per-link technology rule and
/// records every violated capacity or availability constraint.
fn benchmark_plan(
    method: Method,
    scenario: &DeploymentScenario,
    budgets: &[LinkBudget],
    demand: &DemandProfile,
    params: &CostParams,
    avail: TechAvailability,
    pick: impl Fn(&LinkBudget, f64) -> Tech,
) -> PlanSolution {
    let n_dus = scenario.dus.positions.len();
    let mut assignments = Vec::with_capacity(budgets.len());
    let mut n_fiber = vec![0usize; n_dus];
    let mut n_mmw = vec![0usize; n_dus];
    let mut avail_sum = vec![0.0f64; n_dus];
    let mut n_links = vec![0usize; n_dus];
    let mut violations = Vec::new();

    for b in budgets {
        let threshold = demand.threshold(b.ap);
        let tech = pick(b, threshold);
        let rate = b.rate(tech);
        if rate < threshold {
            violations.push(Violation {
                constraint: ConstraintId::Capacity,
                du: b.du,
                ap: Some(b.ap),
                magnitude: threshold - rate,
            });
        }
        match tech {
            Tech::Fiber => n_fiber[b.du] += 1,
            Tech::MmWave => n_mmw[b.du] += 1,
            Tech::Fso => {}
        }
        avail_sum[b.du] += avail.get(tech);
        n_links[b.du] += 1;
        assignments.push(Assignment {
            du: b.du,
            ap: b.ap,
            tech,
            distance_m: b.distance_m,
            rate_bps: rate,
            threshold_bps: threshold,
            link_cost_cents: params.link_cost(tech, b.distance_m),
        });
    }

    let kappa: Vec<usize> = n_fiber.iter().map(|&f| f.div_ceil(params.theta)).collect();
    let mmw_active: Vec<bool> = n_mmw.iter().map(|&m| m > 0).collect();
    for du in 0..n_dus {
        let required = n_links[du] as f64 * params.zeta_sla;
        if avail_sum[du] < required - AVAILABILITY_TOL {
            violations.push(Violation {
                constraint: ConstraintId::Availability,
                du,
                ap: None,
                magnitude: required - avail_sum[du],
            });
        }
    }

    assignments.sort_by_key(|a| (a.du, a.ap));
    let tier2_link_cents = assignments.iter().map(|a| a.link_cost_cents).sum();
    let du_side_cents: Cents = kappa
        .iter()
        .zip(&mmw_active)
        .map(|(&k, &v)| params.du_side_cost(k, v))
        .sum();
    let feasible = violations.is_empty();
    PlanSolution {
        method,
        assignments,
        kappa,
        mmw_active,
        tier2_link_cents,
        du_side_cents,
        feasible,
        optimal: false,
        violations,
        excluded: Vec::new(),
    }
}

/// Fiber on every leading link.
pub fn benchmark_all_fiber(
    scenario: &DeploymentScenario,
    budgets: &[LinkBudget],
    demand: &DemandProfile,
    params: &CostParams,
    avail: TechAvailability,
) -> PlanSolution {
    benchmark_plan(
        Method::AllFiber,
        scenario,
        budgets,
        demand,
        params,
        avail,
        |_, _| Tech::Fiber,
    )
}

/// mmWave on every leading link, capacity violations recorded.
pub fn benchmark_all_mmw(
    scenario: &DeploymentScenario,
    budgets: &[LinkBudget],
    demand: &DemandProfile,
    params: &CostParams,
    avail: TechAvailability,
) -> PlanSolution {
    benchmark_plan(
        Method::AllMmw,
        scenario,
        budgets,
        demand,
        params,
        avail,
        |_, _| Tech::MmWave,
    )
}

/// mmWave where it meets the threshold, fiber otherwise.
pub fn benchmark_heuristic(
    scenario: &DeploymentScenario,
    budgets: &[LinkBudget],
    demand: &DemandProfile,
    params: &CostParams,
    avail: TechAvailability,
) -> PlanSolution {
    benchmark_plan(
        Method::Heuristic,
        scenario,
        budgets,
        demand,
        params,
        avail,
        |b, threshold| {
            if b.mmw_bps >= threshold {
                Tech::MmWave
            } else {
                Tech::Fiber
            }
        },
    )
}
