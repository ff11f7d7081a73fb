//! Run configuration: JSON-backed, defaulting every field to the reference
//! parameter set so an empty config file is a valid full experiment.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::cost::CostParams;
use crate::demand::{DemandMode, OfdmConfig};
use crate::error::{Error, Result};
use crate::linkbudget::{FiberConfig, FsoConfig, MmWaveConfig};
use crate::topology::{Scheme, TopologyConfig};

/// Gaussian-hotspot traffic field generation parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrafficFieldConfig {
    pub n_hotspots: usize,
    pub sigma_m: f64,
    pub baseline_bps: f64,
    pub amp_min_bps: f64,
    pub amp_max_bps: f64,
    /// Multiplier on drawn amplitudes; swept in stress experiments.
    pub amplitude_scale: f64,
    pub cap_bps: f64,
}

impl Default for TrafficFieldConfig {
    fn default() -> Self {
        TrafficFieldConfig {
            n_hotspots: 5,
            sigma_m: 250.0,
            baseline_bps: 1e9,
            amp_min_bps: 1e9,
            amp_max_bps: 8e9,
            amplitude_scale: 1.0,
            cap_bps: 9.5e9,
        }
    }
}

/// Demand threshold configuration shared by all sweep cells.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DemandConfig {
    /// Control-plane overhead fraction applied to homogeneous thresholds.
    pub cp_overhead: f64,
    pub traffic: TrafficFieldConfig,
}

impl Default for DemandConfig {
    fn default() -> Self {
        DemandConfig {
            cp_overhead: 0.0,
            traffic: TrafficFieldConfig::default(),
        }
    }
}

/// Monte Carlo sweep axes.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// DU counts.
    pub w_list: Vec<usize>,
    /// Initial group counts.
    pub g_list: Vec<usize>,
    /// Main-failure fractions for resilience sweeps.
    pub p_list: Vec<f64>,
    /// Demand modes.
    pub fs_list: Vec<DemandMode>,
    pub schemes: Vec<Scheme>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            w_list: vec![4],
            g_list: vec![150],
            p_list: vec![0.02, 0.04, 0.06, 0.08, 0.1],
            fs_list: vec![DemandMode::HomogeneousFs72x, DemandMode::HomogeneousFs8],
            schemes: vec![Scheme::RadioStripe, Scheme::Hierarchical],
        }
    }
}

/// Full experiment configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub topology: TopologyConfig,
    pub ofdm: OfdmConfig,
    pub fiber: FiberConfig,
    pub mmw: MmWaveConfig,
    pub fso: FsoConfig,
    pub costs: CostParams,
    pub demand: DemandConfig,
    pub sweep: SweepConfig,
    /// Square region side, meters.
    pub region_side_m: f64,
    pub realizations: usize,
    pub master_seed: u64,
    pub output_dir: String,
    /// Resilience Monte Carlo runs per p value.
    pub resilience_runs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            topology: TopologyConfig::default(),
            ofdm: OfdmConfig::default(),
            fiber: FiberConfig::default(),
            mmw: MmWaveConfig::default(),
            fso: FsoConfig::default(),
            costs: CostParams::default(),
            demand: DemandConfig::default(),
            sweep: SweepConfig::default(),
            region_side_m: 2000.0,
            realizations: 1,
            master_seed: 42,
            output_dir: "out".to_string(),
            resilience_runs: 500,
        }
    }
}

impl RunConfig {
    /// Checks every invariant, returning all violations at once.
    pub fn validate(&self) -> Result<()> {
        let mut errs: Vec<String> = Vec::new();
        let t = &self.topology;
        if t.g_m >= t.g_s {
            errs.push(format!("topology.g_m ({}) must be < topology.g_s ({})", t.g_m, t.g_s));
        }
        if t.l == 0 {
            errs.push("topology.l must be >= 1".into());
        }
        if t.epsilon <= 0.0 {
            errs.push("topology.epsilon must be positive".into());
        }
        if self.realizations == 0 {
            errs.push("realizations must be >= 1".into());
        }
        if self.region_side_m <= 0.0 {
            errs.push("region_side_m must be positive".into());
        }
        let s = &self.sweep;
        for (name, empty) in [
            ("sweep.w_list", s.w_list.is_empty()),
            ("sweep.g_list", s.g_list.is_empty()),
            ("sweep.p_list", s.p_list.is_empty()),
            ("sweep.fs_list", s.fs_list.is_empty()),
            ("sweep.schemes", s.schemes.is_empty()),
        ] {
            if empty {
                errs.push(format!("{name} must be nonempty"));
            }
        }
        if s.w_list.iter().any(|&w| w == 0) {
            errs.push("sweep.w_list entries must be >= 1".into());
        }
        if s.g_list.iter().any(|&g| g == 0 || g > t.l) {
            errs.push("sweep.g_list entries must be in 1..=topology.l".into());
        }
        if s.p_list.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
            errs.push("sweep.p_list entries must lie in [0, 1]".into());
        }
        let tr = &self.demand.traffic;
        if tr.amp_min_bps > tr.amp_max_bps {
            errs.push("demand.traffic.amp_min_bps must be <= amp_max_bps".into());
        }
        if tr.amplitude_scale < 0.0 {
            errs.push("demand.traffic.amplitude_scale must be nonnegative".into());
        }
        if !(0.0..=1.0).contains(&self.demand.cp_overhead) {
            errs.push("demand.cp_overhead must lie in [0, 1]".into());
        }
        if self.fiber.rate_bps <= 0.0 {
            errs.push("fiber.rate_bps must be positive".into());
        }
        if self.mmw.rate_draws == 0 {
            errs.push("mmw.rate_draws must be >= 1".into());
        }
        if self.mmw.rate_cap_bps <= 0.0 || self.fso.rate_cap_bps <= 0.0 {
            errs.push("rate_cap_bps must be positive".into());
        }
        // Photon energy must match h*c/lambda at the configured wavelength
        // within 0.5% — catches a wavelength/energy mismatch.
        let hc = 6.626_070_15e-34 * 2.997_924_58e8;
        let expected_ep = hc / (self.fso.lambda_nm * 1e-9);
        if (self.fso.photon_energy_j / expected_ep - 1.0).abs() > 5e-3 {
            errs.push(format!(
                "fso.photon_energy_j ({:.4e}) inconsistent with lambda_nm ({}): expected {:.4e}",
                self.fso.photon_energy_j, self.fso.lambda_nm, expected_ep
            ));
        }
        if errs.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(errs.join("; ")))
        }
    }
}

/// Parses and validates a JSON config file. An empty (or whitespace-only)
/// file yields the full default configuration.
pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    let config: RunConfig = if text.trim().is_empty() {
        RunConfig::default()
    } else {
        serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?
    };
    config.validate()?;
    Ok(config)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_yields_defaults() {
        let dir = std::env::temp_dir().join("fhplan-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("empty.json");
        std::fs::write(&path, "\n").unwrap();
        let cfg = parse_config(&path).unwrap();
        assert_eq!(cfg.topology.l, 1000);
        assert_eq!(cfg.topology.g_s, 15);
        assert_eq!(cfg.costs.theta, 16);
        assert_eq!(cfg.master_seed, 42);
        assert_eq!(cfg.mmw.n_du, 256);
    }

    #[test]
    fn validation_collects_all_violations() {
        let mut cfg = RunConfig::default();
        cfg.topology.g_m = 20;
        cfg.topology.g_s = 15;
        cfg.realizations = 0;
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("g_m"), "{err}");
        assert!(err.contains("realizations"), "{err}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let dir = std::env::temp_dir().join("fhplan-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("unknown.json");
        std::fs::write(&path, r#"{"not_a_field": 1}"#).unwrap();
        assert!(matches!(parse_config(&path), Err(Error::Parse(_))));
    }

    #[test]
    fn partial_override_keeps_other_defaults() {
        let dir = std::env::temp_dir().join("fhplan-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("partial.json");
        std::fs::write(
            &path,
            r#"{"realizations": 7, "sweep": {"w_list": [2, 4]}}"#,
        )
        .unwrap();
        let cfg = parse_config(&path).unwrap();
        assert_eq!(cfg.realizations, 7);
        assert_eq!(cfg.sweep.w_list, vec![2, 4]);
        assert_eq!(cfg.sweep.g_list, vec![150]);
        assert_eq!(cfg.topology.l, 1000);
    }

    #[test]
    fn photon_energy_consistency_enforced() {
        let mut cfg = RunConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.fso.photon_energy_j = 2e-19;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn config_roundtrips_through_json() {
        let cfg = RunConfig::default();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        let back: RunConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(
            serde_json::to_string(&cfg).unwrap(),
            serde_json::to_string(&back).unwrap()
        );
    }
}
