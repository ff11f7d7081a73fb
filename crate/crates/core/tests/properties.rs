//! Property-based invariant checks over randomized inputs.

use proptest::prelude::*;

use fhplan_core::cost::{dollars_to_cents, CostBreakdown};
use fhplan_core::demand::{fs8_rate, sample_traffic_field, Hotspot, OfdmConfig, TrafficField};
use fhplan_core::geometry::Point2D;
use fhplan_core::linkbudget::mmw_beamform;
use fhplan_core::resilience::draw_main_failures;
use fhplan_core::topology::{
    build_mst, build_radio_stripe, split_merge_refine, APField, Group,
};
use num_complex::Complex64;

fn points_strategy(min: usize, max: usize) -> impl Strategy<Value = Vec<Point2D>> {
    prop::collection::vec((0.0f64..500.0, 0.0f64..500.0), min..=max)
        .prop_map(|v| v.into_iter().map(|(x, y)| Point2D::new(x, y)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Split-merge refinement never loses or duplicates an AP, and never
    /// leaves an oversized group.
    #[test]
    fn split_merge_preserves_partition(
        points in points_strategy(2, 60),
        cut in 1usize..59,
    ) {
        let n = points.len();
        let field = APField { region_side: 500.0, aps: points.clone(), seed: 0 };
        let cut = cut.min(n - 1);
        let groups = vec![
            Group::new(0, (0..cut).collect(), &points),
            Group::new(1, (cut..n).collect(), &points),
        ];
        let refined = split_merge_refine(&groups, &field, 15, 3);
        let mut seen = vec![0usize; n];
        for g in &refined {
            prop_assert!(g.members.len() <= 15);
            for &m in &g.members {
                seen[m] += 1;
            }
        }
        prop_assert!(seen.iter().all(|&c| c == 1));
    }

    /// The spanning tree is never longer than the serial stripe over the
    /// same members (a path is one particular spanning tree).
    #[test]
    fn tree_no_longer_than_stripe(points in points_strategy(2, 12)) {
        let field = APField { region_side: 500.0, aps: points.clone(), seed: 0 };
        let g = Group::new(0, (0..points.len()).collect(), &points);
        let stripe = build_radio_stripe(&g, &field, 9);
        let tree = build_mst(&g, &field);
        prop_assert!(tree.total_length <= stripe.total_length + 1e-9);
    }

    /// Traffic samples stay within [min(baseline, cap), cap].
    #[test]
    fn traffic_sample_bounded(
        centers in prop::collection::vec((0.0f64..2000.0, 0.0f64..2000.0, 0.0f64..20e9), 0..8),
        baseline in 0.0f64..5e9,
        cap in 0.1e9f64..15e9,
        x in 0.0f64..2000.0,
        y in 0.0f64..2000.0,
    ) {
        let field = TrafficField {
            hotspots: centers
                .into_iter()
                .map(|(cx, cy, a)| Hotspot {
                    center: Point2D::new(cx, cy),
                    amplitude_bps: a,
                    sigma_m: 250.0,
                })
                .collect(),
            baseline_bps: baseline,
            cap_bps: cap,
        };
        let v = sample_traffic_field(&field, &Point2D::new(x, y));
        prop_assert!(v <= cap);
        prop_assert!(v >= baseline.min(cap) - 1e-6);
    }

    /// FS8 demand is linear in the sampling rate.
    #[test]
    fn fs8_linear_in_sampling_rate(k in 1u32..8) {
        let base = OfdmConfig::default();
        let scaled = OfdmConfig {
            sampling_freq_hz: base.sampling_freq_hz * k as f64,
            ..base.clone()
        };
        let ratio = fs8_rate(&scaled) / fs8_rate(&base);
        prop_assert!((ratio - k as f64).abs() < 1e-12);
    }

    /// Cent conversion never rounds by more than half a cent.
    #[test]
    fn cents_within_half_cent(usd in -1e7f64..1e7) {
        let c = dollars_to_cents(usd);
        prop_assert!((c as f64 - usd * 100.0).abs() <= 0.5 + 1e-6);
    }

    /// Cost breakdown totals reassemble from their parts.
    #[test]
    fn breakdown_reassembles(
        t1 in 0i64..1_000_000_000,
        t2 in 0i64..1_000_000_000,
        du in 0i64..1_000_000_000,
        pool in 0i64..1_000_000_000,
        include in any::<bool>(),
    ) {
        let b = CostBreakdown::assemble(t1, t2, du, pool, include);
        let expected = t1 + t2 + du + if include { pool } else { 0 };
        prop_assert_eq!(b.total_cents, expected);
        prop_assert_eq!(b.du_pool_cents, pool);
    }

    /// Beamforming gain is bounded by the unquantized upper bound and
    /// scales linearly with the channel magnitude.
    #[test]
    fn beamform_gain_bounded_and_homogeneous(
        h in prop::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..8),
        q in 0u32..5,
        scale in 0.1f64..10.0,
    ) {
        let h: Vec<Complex64> = h.into_iter().map(|(re, im)| Complex64::new(re, im)).collect();
        let n = h.len() as f64;
        let (_, gain) = mmw_beamform(&h, q);
        let upper: f64 = h.iter().map(|c| c.norm()).sum::<f64>() / n;
        prop_assert!(gain <= upper + 1e-9);
        let scaled: Vec<Complex64> = h.iter().map(|c| c * scale).collect();
        let (_, gain2) = mmw_beamform(&scaled, q);
        prop_assert!((gain2 - gain * scale).abs() <= 1e-9 * gain2.max(1.0));
    }

    /// Main failure draws have the exact rounded count, sorted and unique.
    #[test]
    fn failure_draw_counts(l in 1usize..2000, p in 0.0f64..1.0, seed in any::<u64>()) {
        let drawn = draw_main_failures(l, p, seed);
        let expected = ((p * l as f64).round() as usize).min(l);
        prop_assert_eq!(drawn.len(), expected);
        prop_assert!(drawn.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(drawn.iter().all(|&i| i < l));
    }
}
