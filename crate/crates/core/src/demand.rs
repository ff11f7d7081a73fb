//! Per-AP minimum fronthaul rate thresholds.
//!
//! Homogeneous thresholds come from the functional-split rate formulas
//! (FS8 ships time-domain I/Q, FS7.2x ships only used subcarriers); the
//! non-homogeneous mode samples a hotspot-based Gaussian-mixture traffic
//! field at each leading AP location.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Point2D;
use crate::topology::DeploymentScenario;

/// OFDM numerology parameters fixing the functional-split rates.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OfdmConfig {
    /// Bandwidth B, Hz.
    pub bandwidth_hz: f64,
    /// Sampling frequency f_s, Hz.
    pub sampling_freq_hz: f64,
    /// Subcarrier spacing, Hz.
    pub subcarrier_spacing_hz: f64,
    /// OFDM symbol duration, seconds. Defaults to the exact 1/15000 s;
    /// set to 66.67e-6 to reproduce the rounded tabulated value.
    pub t_symbol_s: f64,
    pub n_dft: u32,
    pub n_used: u32,
    /// Quantization bits per I or Q component.
    pub n_bits: u32,
    /// Access-channel antennas per AP.
    pub n_ap_access: u32,
}

impl Default for OfdmConfig {
    fn default() -> Self {
        OfdmConfig {
            bandwidth_hz: 20e6,
            sampling_freq_hz: 30.72e6,
            subcarrier_spacing_hz: 15e3,
            t_symbol_s: 1.0 / 15_000.0,
            n_dft: 2048,
            n_used: 1200,
            n_bits: 12,
            n_ap_access: 4,
        }
    }
}

/// Demand threshold mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DemandMode {
    #[serde(rename = "fs8")]
    HomogeneousFs8,
    #[serde(rename = "fs7_2x")]
    HomogeneousFs72x,
    #[serde(rename = "traffic_field")]
    TrafficField,
}

impl DemandMode {
    pub fn label(&self) -> &'static str {
        match self {
            DemandMode::HomogeneousFs8 => "fs8",
            DemandMode::HomogeneousFs72x => "fs7_2x",
            DemandMode::TrafficField => "traffic_field",
        }
    }
}

/// One Gaussian traffic hotspot.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Hotspot {
    pub center: Point2D,
    /// Peak demand contribution, bits/second.
    pub amplitude_bps: f64,
    /// Spatial spread, meters.
    pub sigma_m: f64,
}

/// Hotspot-based Gaussian mixture traffic field.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TrafficField {
    pub hotspots: Vec<Hotspot>,
    pub baseline_bps: f64,
    /// Peak demand cap, bits/second.
    pub cap_bps: f64,
}

impl TrafficField {
    /// Draws `n_hotspots` hotspots uniformly over the region with
    /// amplitudes uniform in `[amp_min, amp_max] * amplitude_scale`.
    #[allow(clippy::too_many_arguments)]
    pub fn generate(
        n_hotspots: usize,
        region_side: f64,
        amp_min_bps: f64,
        amp_max_bps: f64,
        amplitude_scale: f64,
        sigma_m: f64,
        baseline_bps: f64,
        cap_bps: f64,
        seed: u64,
    ) -> TrafficField {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hotspots = (0..n_hotspots)
            .map(|_| Hotspot {
                center: Point2D::new(
                    rng.gen::<f64>() * region_side,
                    rng.gen::<f64>() * region_side,
                ),
                amplitude_bps: (amp_min_bps + rng.gen::<f64>() * (amp_max_bps - amp_min_bps))
                    * amplitude_scale,
                sigma_m,
            })
            .collect();
        TrafficField {
            hotspots,
            baseline_bps,
            cap_bps,
        }
    }
}

/// Per-leading-AP minimum fronthaul rate thresholds.
#[derive(Debug, Clone, Serialize)]
pub struct DemandProfile {
    pub mode: DemandMode,
    /// Leading AP index -> threshold, bits/second.
    pub thresholds: BTreeMap<usize, f64>,
    /// Control-plane overhead fraction already applied to the thresholds.
    pub cp_overhead: f64,
}

impl DemandProfile {
    pub fn threshold(&self, ap: usize) -> f64 {
        self.thresholds[&ap]
    }
}

/// FS8 rate: 2 * N_bits * f_s * N_AP^ac (raw time-domain I/Q samples).
pub fn fs8_rate(cfg: &OfdmConfig) -> f64 {
    2.0 * cfg.n_bits as f64 * cfg.sampling_freq_hz * cfg.n_ap_access as f64
}

/// FS7.2x rate: 2 * N_bits * N_used * N_AP^ac / T_symbol.
pub fn fs72x_rate(cfg: &OfdmConfig) -> f64 {
    2.0 * cfg.n_bits as f64 * cfg.n_used as f64 * cfg.n_ap_access as f64 / cfg.t_symbol_s
}

/// Inflates a user-plane rate by the control-plane overhead fraction.
pub fn apply_cp_overhead(rate_bps: f64, alpha: f64) -> f64 {
    debug_assert!((0.0..=1.0).contains(&alpha));
    (1.0 + alpha) * rate_bps
}

/// Evaluates the traffic field at a point: baseline plus Gaussian hotspot
/// contributions, clipped at the cap.
pub fn sample_traffic_field(field: &TrafficField, p: &Point2D) -> f64 {
    let sum: f64 = field
        .hotspots
        .iter()
        .map(|h| {
            let d = p.distance(&h.center);
            h.amplitude_bps * (-d * d / (2.0 * h.sigma_m * h.sigma_m)).exp()
        })
        .sum();
    (field.baseline_bps + sum).min(field.cap_bps)
}

/// Builds the demand profile over the scenario's leading APs.
pub fn build_demand(
    scenario: &DeploymentScenario,
    mode: DemandMode,
    cfg: &OfdmConfig,
    field: Option<&TrafficField>,
    alpha: f64,
) -> Result<DemandProfile> {
    let mut thresholds = BTreeMap::new();
    for (_, ap) in scenario.leading_links() {
        let value = match mode {
            DemandMode::HomogeneousFs8 => apply_cp_overhead(fs8_rate(cfg), alpha),
            DemandMode::HomogeneousFs72x => apply_cp_overhead(fs72x_rate(cfg), alpha),
            DemandMode::TrafficField => {
                let f = field.ok_or(Error::MissingTrafficField)?;
                sample_traffic_field(f, &scenario.field.aps[ap])
            }
        };
        thresholds.insert(ap, value);
    }
    Ok(DemandProfile {
        mode,
        thresholds,
        cp_overhead: alpha,
    })
}
