//! Total cost of ownership. All monetary arithmetic is in integer cents so
//! that optimizer objectives compare exactly and outputs are reproducible
//! byte for byte.

use serde::{Deserialize, Serialize};

use crate::linkbudget::Tech;
use crate::topology::DeploymentScenario;

/// Monetary amount in cents.
pub type Cents = i64;

/// Converts a dollar amount to cents with half-up rounding.
pub fn dollars_to_cents(usd: f64) -> Cents {
    (usd * 100.0).round() as Cents
}

/// Unit costs and planning-horizon parameters. Dollar figures are converted
/// to cents at the point of use.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CostParams {
    /// Trenched fiber, dollars per meter.
    pub fiber_usd_per_m: f64,
    /// Optical network unit at an AP.
    pub onu_usd: f64,
    /// DU-side optical transport node.
    pub otn_usd: f64,
    /// DU-side optical line terminal.
    pub olt_usd: f64,
    /// Remaining DU-side fiber equipment.
    pub other_fiber_du_usd: f64,
    /// Fiber operation and maintenance, dollars per link per period.
    pub fiber_om_usd: f64,
    /// DU-side mmWave transmitter (shared across mmWave links of a DU).
    pub mmw_du_usd: f64,
    /// AP-side mmWave receiver.
    pub mmw_rx_usd: f64,
    /// mmWave operation and maintenance, dollars per link per period.
    pub mmw_om_usd: f64,
    /// FSO transceiver bundle (both ends of one link).
    pub fso_bundle_usd: f64,
    /// FSO operation and maintenance, dollars per link per period.
    pub fso_om_usd: f64,
    /// Baseband processing pool per DU. Reported separately; excluded from
    /// the optimized total unless `include_du_pool` is set.
    pub du_pool_usd: f64,
    /// Fiber links served per DU-side fiber equipment set.
    pub theta: usize,
    /// Operation and maintenance periods in the planning horizon.
    pub n_periods: u32,
    /// Minimum mean link availability per DU.
    pub zeta_sla: f64,
    pub include_du_pool: bool,
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams {
            fiber_usd_per_m: 26.0,
            onu_usd: 6502.0,
            otn_usd: 61_727.0,
            olt_usd: 20_100.0,
            other_fiber_du_usd: 0.0,
            fiber_om_usd: 2285.0,
            mmw_du_usd: 34_500.0,
            mmw_rx_usd: 6000.0,
            mmw_om_usd: 13_000.0,
            fso_bundle_usd: 15_000.0,
            fso_om_usd: 13_000.0,
            du_pool_usd: 91_035.0,
            theta: 16,
            n_periods: 1,
            zeta_sla: 0.9999,
            include_du_pool: false,
        }
    }
}

impl CostParams {
    /// One DU-side fiber equipment set (serves up to `theta` fiber links).
    pub fn fiber_du_unit_cents(&self) -> Cents {
        dollars_to_cents(self.otn_usd + self.olt_usd + self.other_fiber_du_usd)
    }

    /// Cost of one fiber link of length `d_m`: AP-side ONU, trenching, and
    /// operation and maintenance over the horizon.
    pub fn fiber_link_cost(&self, d_m: f64) -> Cents {
        dollars_to_cents(self.onu_usd)
            + self.n_periods as Cents * dollars_to_cents(self.fiber_om_usd)
            + (self.fiber_usd_per_m * 100.0 * d_m).round() as Cents
    }

    /// Cost of one mmWave link (distance-independent; the DU-side
    /// transmitter is charged once per DU, not here).
    pub fn mmw_link_cost(&self) -> Cents {
        dollars_to_cents(self.mmw_rx_usd) + self.n_periods as Cents * dollars_to_cents(self.mmw_om_usd)
    }

    /// Cost of one FSO link (distance-independent, self-contained).
    pub fn fso_link_cost(&self) -> Cents {
        dollars_to_cents(self.fso_bundle_usd)
            + self.n_periods as Cents * dollars_to_cents(self.fso_om_usd)
    }

    pub fn link_cost(&self, tech: Tech, d_m: f64) -> Cents {
        match tech {
            Tech::Fiber => self.fiber_link_cost(d_m),
            Tech::MmWave => self.mmw_link_cost(),
            Tech::Fso => self.fso_link_cost(),
        }
    }

    /// DU-side equipment for `kappa` fiber equipment sets and, when
    /// `mmw_active`, one mmWave transmitter.
    pub fn du_side_cost(&self, kappa: usize, mmw_active: bool) -> Cents {
        kappa as Cents * self.fiber_du_unit_cents()
            + if mmw_active {
                dollars_to_cents(self.mmw_du_usd)
            } else {
                0
            }
    }

    pub fn du_pool_cents(&self, n_dus: usize) -> Cents {
        n_dus as Cents * dollars_to_cents(self.du_pool_usd)
    }
}

/// Tier-1 (intra-group) cost: an ONU at every non-leading AP plus trenched
/// fiber along every intra-group edge.
pub fn tier1_cost(scenario: &DeploymentScenario, params: &CostParams) -> Cents {
    let n_nonleading: usize = scenario.dus.nonleading_sets.iter().map(Vec::len).sum();
    let onus = n_nonleading as Cents * dollars_to_cents(params.onu_usd);
    let trench: Cents = scenario
        .topologies
        .iter()
        .map(|t| (params.fiber_usd_per_m * 100.0 * t.total_length).round() as Cents)
        .sum();
    onus + trench
}

/// Cost decomposition of a planned deployment.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CostBreakdown {
    pub tier1_cents: Cents,
    /// Sum of selected tier-2 link costs.
    pub tier2_link_cents: Cents,
    /// DU-side fiber equipment sets and mmWave transmitters.
    pub du_side_cents: Cents,
    /// Baseband pools, reported but only counted when configured to be.
    pub du_pool_cents: Cents,
    pub total_cents: Cents,
}

impl CostBreakdown {
    pub fn assemble(
        tier1_cents: Cents,
        tier2_link_cents: Cents,
        du_side_cents: Cents,
        du_pool_cents: Cents,
        include_du_pool: bool,
    ) -> CostBreakdown {
        let total_cents = tier1_cents
            + tier2_link_cents
            + du_side_cents
            + if include_du_pool { du_pool_cents } else { 0 };
        CostBreakdown {
            tier1_cents,
            tier2_link_cents,
            du_side_cents,
            du_pool_cents,
            total_cents,
        }
    }
}
