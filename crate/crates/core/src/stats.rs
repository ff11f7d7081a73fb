//! Summary statistics for Monte Carlo aggregation.

/// Arithmetic mean. Returns 0 for an empty slice.
pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    values.iter().sum::<f64>() / values.len() as f64
}

/// Population standard deviation (divides by n). Returns 0 for fewer than
/// two values.
pub fn std_pop(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let m = mean(values);
    (values.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / values.len() as f64).sqrt()
}

/// Quantile with linear interpolation between order statistics.
/// `q` must lie in [0, 1]; the slice must be nonempty.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty() && (0.0..=1.0).contains(&q));
    debug_assert!(sorted.windows(2).all(|w| w[0] <= w[1]));
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// Sorts a copy of the data and returns (min, q1, median, q3, max).
pub fn five_number_summary(values: &[f64]) -> (f64, f64, f64, f64, f64) {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    (
        quantile(&sorted, 0.0),
        quantile(&sorted, 0.25),
        quantile(&sorted, 0.5),
        quantile(&sorted, 0.75),
        quantile(&sorted, 1.0),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mean_and_std_reference() {
        assert_eq!(mean(&[10.0, 20.0]), 15.0);
        assert_eq!(std_pop(&[10.0, 20.0]), 5.0);
        assert_eq!(mean(&[7.0]), 7.0);
        assert_eq!(std_pop(&[7.0]), 0.0);
        assert_eq!(mean(&[]), 0.0);
    }

    #[test]
    fn quantiles_interpolate_linearly() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.0), 1.0);
        assert_eq!(quantile(&v, 1.0), 4.0);
        assert_eq!(quantile(&v, 0.5), 2.5);
        assert_eq!(quantile(&v, 0.25), 1.75);
    }

    #[test]
    fn five_numbers_on_unsorted_input() {
        let (min, q1, med, q3, max) = five_number_summary(&[5.0, 1.0, 3.0, 2.0, 4.0]);
        assert_eq!((min, q1, med, q3, max), (1.0, 2.0, 3.0, 4.0, 5.0));
    }
}
