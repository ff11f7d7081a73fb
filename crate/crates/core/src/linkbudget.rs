//! Per-link achievable rates for the three candidate technologies.
//!
//! Fiber is a fixed-rate transport. The mmWave model is an urban-microcell
//! pathloss pair (LoS + NLoS scatter paths) with analog beamforming over a
//! uniformly quantized phase codebook; the reported rate is the Shannon
//! rate averaged over seeded channel draws. The FSO model is a link-budget
//! calculation over scattering, rain, fog, and scintillation losses.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::derive_seed;
use crate::topology::DeploymentScenario;

/// Candidate fronthaul technology for a DU-to-leading-AP link.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tech {
    #[serde(rename = "fiber")]
    Fiber,
    #[serde(rename = "mmw")]
    MmWave,
    #[serde(rename = "fso")]
    Fso,
}

impl Tech {
    pub fn label(&self) -> &'static str {
        match self {
            Tech::Fiber => "fiber",
            Tech::MmWave => "mmw",
            Tech::Fso => "fso",
        }
    }
}

/// Fixed-rate fiber transport.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FiberConfig {
    pub rate_bps: f64,
    pub availability: f64,
}

impl Default for FiberConfig {
    fn default() -> Self {
        FiberConfig {
            rate_bps: 10e9,
            availability: 1.0,
        }
    }
}

/// mmWave point-to-point link parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MmWaveConfig {
    /// DU-side ULA elements.
    pub n_du: usize,
    /// Phase shifter resolution bits; codebook phases are k*pi/2^q.
    pub q: u32,
    pub bandwidth_hz: f64,
    /// Transmit power, watts.
    pub p_t_w: f64,
    pub carrier_ghz: f64,
    pub noise_figure_db: f64,
    /// Lognormal shadowing standard deviations, dB.
    pub shadow_std_los_db: f64,
    pub shadow_std_nlos_db: f64,
    /// Maximum number of NLoS scatter paths (drawn uniformly in 1..=max).
    pub max_nlos_paths: usize,
    /// Channel realizations averaged per reported rate.
    pub rate_draws: usize,
    pub availability: f64,
    /// Deliverable per-link rate limit imposed by the wired interface at
    /// the DU/AP ports, bits/second.
    pub rate_cap_bps: f64,
}

impl Default for MmWaveConfig {
    fn default() -> Self {
        MmWaveConfig {
            n_du: 256,
            q: 6,
            bandwidth_hz: 2.5e9,
            p_t_w: 120.0,
            carrier_ghz: 80.0,
            noise_figure_db: 10.0,
            shadow_std_los_db: 4.0,
            shadow_std_nlos_db: 7.82,
            max_nlos_paths: 6,
            rate_draws: 32,
            availability: 0.99999,
            rate_cap_bps: 10e9,
        }
    }
}

/// Free-space-optics link parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FsoConfig {
    pub lambda_nm: f64,
    /// Atmospheric visibility, km. Must be below 6 km for the scattering
    /// size-distribution coefficient to apply.
    pub visibility_km: f64,
    /// Receiver aperture radius, meters.
    pub receiver_radius_m: f64,
    /// Full transmit divergence angle, radians.
    pub divergence_rad: f64,
    pub p_t_w: f64,
    pub eta_t: f64,
    pub eta_r: f64,
    /// Refractive index structure parameter, m^(-2/3).
    pub c_n2: f64,
    /// Photons required per detected bit.
    pub photons_per_bit: f64,
    /// Photon energy at the operating wavelength, joules.
    pub photon_energy_j: f64,
    pub rain_loss_db: f64,
    pub fog_db_per_km: f64,
    pub availability: f64,
    /// Deliverable per-link rate limit imposed by the wired interface at
    /// the DU/AP ports, bits/second.
    pub rate_cap_bps: f64,
}

impl Default for FsoConfig {
    fn default() -> Self {
        FsoConfig {
            lambda_nm: 1550.0,
            visibility_km: 0.4,
            receiver_radius_m: 0.05,
            divergence_rad: 0.01,
            p_t_w: 0.5,
            eta_t: 0.5,
            eta_r: 0.5,
            c_n2: 1e-15,
            photons_per_bit: 100.0,
            photon_energy_j: 1.2823e-19,
            rain_loss_db: 10.0,
            fog_db_per_km: 20.99,
            availability: 0.9975,
            rate_cap_bps: 10e9,
        }
    }
}

/// Achievable rate of the fiber transport (distance-independent).
pub fn fiber_rate(cfg: &FiberConfig) -> f64 {
    cfg.rate_bps
}

/// Urban-microcell pathloss in dB. `shadowing_db` is added as-is.
pub fn mmw_pathloss(d_m: f64, carrier_ghz: f64, shadowing_db: f64, los: bool) -> f64 {
    let slope = if los { 21.0 } else { 31.9 };
    32.4 + slope * d_m.log10() + 20.0 * carrier_ghz.log10() + shadowing_db
}

/// Draws one narrowband channel toward a ULA of `cfg.n_du` elements: a LoS
/// ray at `aod_rad` plus a uniformly drawn number of NLoS scatter paths with
/// random departure angles and phases. Element spacing is half a wavelength.
pub fn mmw_channel(
    d_m: f64,
    aod_rad: f64,
    cfg: &MmWaveConfig,
    rng: &mut ChaCha8Rng,
) -> Vec<Complex64> {
    let d = d_m.max(1.0);
    let los_shadow = Normal::new(0.0, cfg.shadow_std_los_db)
        .unwrap()
        .sample(rng);
    let nlos_shadow = Normal::new(0.0, cfg.shadow_std_nlos_db)
        .unwrap()
        .sample(rng);
    let a_los = 10f64.powf(-mmw_pathloss(d, cfg.carrier_ghz, los_shadow, true) / 20.0);
    let a_nlos = 10f64.powf(-mmw_pathloss(d, cfg.carrier_ghz, nlos_shadow, false) / 20.0);

    let mut h = steering(cfg.n_du, aod_rad)
        .into_iter()
        .map(|s| s * a_los)
        .collect::<Vec<_>>();
    let n_paths = rng.gen_range(1..=cfg.max_nlos_paths);
    let per_path = a_nlos / (n_paths as f64).sqrt();
    for _ in 0..n_paths {
        let theta = (rng.gen::<f64>() - 0.5) * std::f64::consts::PI;
        let phase = rng.gen::<f64>() * std::f64::consts::TAU;
        let gain = Complex64::from_polar(per_path, phase);
        for (hi, s) in h.iter_mut().zip(steering(cfg.n_du, theta)) {
            *hi += gain * s;
        }
    }
    h
}

fn steering(n: usize, theta: f64) -> Vec<Complex64> {
    let step = std::f64::consts::PI * theta.sin();
    (0..n)
        .map(|k| Complex64::from_polar(1.0, step * k as f64))
        .collect()
}

/// Selects the codebook beamformer maximizing |h^T f| exactly.
///
/// Each element's phase is restricted to the grid {k*pi/2^q, k < 2^q} and
/// the beamformer is scaled by 1/n. The grid spans only half a turn, so
/// per-element conjugate quantization is not optimal in general. Instead,
/// observe that the optimum is element-wise optimal against the rotation
/// omega = arg(h^T f*): each element independently picks the level whose
/// effective angle arg(h_i) + k*pi/2^q is circularly nearest to omega. The
/// element-wise choice is piecewise constant in omega with n*2^q
/// breakpoints (level bisectors), so sweeping the breakpoints in angular
/// order while updating the sum incrementally visits every candidate.
///
/// Returns the per-element levels and the achieved |h^T f|.
pub fn mmw_beamform(h: &[Complex64], q: u32) -> (Vec<u32>, f64) {
    let n = h.len();
    assert!(n >= 1);
    let levels = 1u32 << q;
    let delta = std::f64::consts::PI / levels as f64;
    let span = (levels - 1) as f64 * delta;
    let gap = std::f64::consts::TAU - span;
    let scale = 1.0 / n as f64;

    // grid[k] = e^{j k delta}; term of element i at level k is h_i*grid[k]/n.
    let grid: Vec<Complex64> = (0..levels)
        .map(|k| Complex64::from_polar(1.0, k as f64 * delta))
        .collect();
    let theta: Vec<f64> = h.iter().map(|c| c.arg()).collect();

    let nearest_level = |i: usize, omega: f64| -> u32 {
        let x = (omega - theta[i]).rem_euclid(std::f64::consts::TAU);
        if x <= span {
            ((x / delta).round() as u32).min(levels - 1)
        } else if x - span < gap / 2.0 {
            levels - 1
        } else {
            0
        }
    };

    let mut assign: Vec<u32> = (0..n).map(|i| nearest_level(i, 0.0)).collect();
    let mut sum: Complex64 = h
        .iter()
        .zip(&assign)
        .map(|(hi, &k)| hi * grid[k as usize] * scale)
        .sum();

    if levels == 1 {
        return (assign, sum.norm());
    }

    // Breakpoints where some element switches level as omega increases:
    // the bisector between consecutive levels k and k+1, plus the wrap
    // bisector where the top level gives way to level 0.
    struct Event {
        omega: f64,
        elem: usize,
        to_level: u32,
    }
    let mut events: Vec<Event> = Vec::with_capacity(n * levels as usize);
    for i in 0..n {
        for k in 0..levels - 1 {
            events.push(Event {
                omega: (theta[i] + (k as f64 + 0.5) * delta).rem_euclid(std::f64::consts::TAU),
                elem: i,
                to_level: k + 1,
            });
        }
        events.push(Event {
            omega: (theta[i] + span + gap / 2.0).rem_euclid(std::f64::consts::TAU),
            elem: i,
            to_level: 0,
        });
    }
    events.sort_by(|a, b| a.omega.total_cmp(&b.omega).then(a.elem.cmp(&b.elem)));

    let mut best = sum.norm();
    let mut best_idx = usize::MAX; // MAX = keep the omega=0 assignment
    let start = assign.clone();
    let mut work = assign.clone();
    for (idx, ev) in events.iter().enumerate() {
        let old = work[ev.elem];
        sum += h[ev.elem] * (grid[ev.to_level as usize] - grid[old as usize]) * scale;
        work[ev.elem] = ev.to_level;
        let g = sum.norm();
        if g > best {
            best = g;
            best_idx = idx;
        }
    }

    if best_idx != usize::MAX {
        assign = start;
        for ev in &events[..=best_idx] {
            assign[ev.elem] = ev.to_level;
        }
    }
    (assign, best)
}

/// Receiver noise power in watts: thermal floor plus noise figure over the
/// configured bandwidth.
pub fn mmw_noise_power(cfg: &MmWaveConfig) -> f64 {
    10f64.powf((-174.0 + cfg.noise_figure_db) / 10.0) * 1e-3 * cfg.bandwidth_hz
}

/// Shannon rate of one channel realization under the optimal codebook beam.
pub fn mmw_capacity(h: &[Complex64], cfg: &MmWaveConfig) -> f64 {
    let (_, gain) = mmw_beamform(h, cfg.q);
    let snr = cfg.p_t_w * gain * gain / mmw_noise_power(cfg);
    cfg.bandwidth_hz * (1.0 + snr).log2()
}

/// Mean achievable mmWave rate over `cfg.rate_draws` seeded channel draws.
/// Departure angles are drawn uniformly per realization.
pub fn mmw_rate(d_m: f64, cfg: &MmWaveConfig, seed: u64) -> f64 {
    let total: f64 = (0..cfg.rate_draws)
        .map(|draw| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, &[draw as u64]));
            let aod = (rng.gen::<f64>() - 0.5) * std::f64::consts::PI;
            let h = mmw_channel(d_m, aod, cfg, &mut rng);
            mmw_capacity(&h, cfg)
        })
        .sum();
    total / cfg.rate_draws as f64
}

/// Decomposed FSO attenuation, all in dB.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct FsoLosses {
    pub scattering_db: f64,
    pub rain_db: f64,
    pub fog_db: f64,
    pub scintillation_db: f64,
}

impl FsoLosses {
    pub fn total_db(&self) -> f64 {
        self.scattering_db + self.rain_db + self.fog_db + self.scintillation_db
    }
}

/// Atmospheric losses of an FSO hop of length `d_m`.
pub fn fso_losses(d_m: f64, cfg: &FsoConfig) -> Result<FsoLosses> {
    if d_m <= 0.0 {
        return Err(Error::NonPositiveDistance(d_m));
    }
    let v = cfg.visibility_km;
    if !(v > 0.0 && v < 6.0) {
        return Err(Error::VisibilityOutOfRange(v));
    }
    let d_km = d_m / 1000.0;
    // Size-distribution exponent for low-visibility haze.
    let delta = 0.585 * v.cbrt();
    let scattering_db = 4.34 * (3.91 / v) * (cfg.lambda_nm / 550.0).powf(-delta) * d_km;
    let fog_db = cfg.fog_db_per_km * d_km;
    let wavenumber = std::f64::consts::TAU / (cfg.lambda_nm * 1e-9);
    let scintillation_db =
        2.0 * (23.17 * wavenumber.powf(7.0 / 6.0) * cfg.c_n2 * d_m.powf(11.0 / 6.0)).sqrt();
    Ok(FsoLosses {
        scattering_db,
        rain_db: cfg.rain_loss_db,
        fog_db,
        scintillation_db,
    })
}

/// Achievable FSO rate: received photon flux within the beam footprint
/// divided by the photon budget per bit.
pub fn fso_rate(d_m: f64, cfg: &FsoConfig) -> Result<f64> {
    let d = d_m.max(1.0);
    let losses = fso_losses(d, cfg)?;
    let spot_radius = cfg.divergence_rad * d / 2.0;
    let numerator = cfg.p_t_w * cfg.eta_t * cfg.eta_r * cfg.receiver_radius_m.powi(2);
    let denominator = 10f64.powf(losses.total_db() / 10.0)
        * cfg.photon_energy_j
        * cfg.photons_per_bit
        * spot_radius.powi(2);
    Ok(numerator / denominator)
}

/// Achievable rates of one candidate DU-to-leading-AP link.
#[derive(Debug, Clone, Serialize)]
pub struct LinkBudget {
    pub du: usize,
    pub ap: usize,
    pub distance_m: f64,
    pub fiber_bps: f64,
    pub mmw_bps: f64,
    pub fso_bps: f64,
}

impl LinkBudget {
    pub fn rate(&self, tech: Tech) -> f64 {
        match tech {
            Tech::Fiber => self.fiber_bps,
            Tech::MmWave => self.mmw_bps,
            Tech::Fso => self.fso_bps,
        }
    }
}

/// Computes all three candidate rates for every leading link of a scenario.
/// Wireless models clamp the distance to at least one meter, and deliverable
/// wireless rates are clipped at the configured interface caps (the model
/// rate can exceed what the wired ports at either end can carry). Each
/// link's channel draws are seeded from `(seed, du, ap)` so results do not
/// depend on evaluation order.
pub fn build_link_budgets(
    scenario: &DeploymentScenario,
    fiber: &FiberConfig,
    mmw: &MmWaveConfig,
    fso: &FsoConfig,
    seed: u64,
) -> Result<Vec<LinkBudget>> {
    scenario
        .leading_links()
        .into_iter()
        .map(|(w, ap)| {
            let d = scenario.dus.positions[w].distance(&scenario.field.aps[ap]);
            let link_seed = derive_seed(seed, &[w as u64, ap as u64]);
            Ok(LinkBudget {
                du: w,
                ap,
                distance_m: d,
                fiber_bps: fiber_rate(fiber),
                mmw_bps: mmw_rate(d, mmw, link_seed).min(mmw.rate_cap_bps),
                fso_bps: fso_rate(d, fso)?.min(fso.rate_cap_bps),
            })
        })
        .collect()
}
