//! Shape statistics for correlation curves.

/// Value at the last grid time.
pub fn plateau(curve: &[(f64, f64)]) -> f64 {
    curve.last().map_or(f64::NAN, |p| p.1)
}

/// Earliest grid time after which every sample stays within `frac` of the
/// final value.
pub fn time_to_plateau(curve: &[(f64, f64)], frac: f64) -> f64 {
    let end = plateau(curve);
    let band = frac * end.abs();
    let mut t = curve.last().map_or(f64::NAN, |p| p.0);
    for &(ti, v) in curve.iter().rev() {
        if (v - end).abs() > band {
            break;
        }
        t = ti;
    }
    t
}

/// Largest drop between consecutive samples; zero for a nondecreasing curve.
pub fn max_drop(curve: &[(f64, f64)]) -> f64 {
    curve.windows(2).map(|w| w[0].1 - w[1].1).fold(0.0, f64::max)
}

/// Largest relative deviation from the final value over samples with `t ≥ from`.
pub fn flatness_after(curve: &[(f64, f64)], from: f64) -> f64 {
    let end = plateau(curve);
    curve
        .iter()
        .filter(|p| p.0 >= from)
        .map(|p| (p.1 - end).abs() / end.abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

/// Largest `next − previous` across a sequence that should strictly decrease.
/// Negative means strictly decreasing.
pub fn worst_increase(values: &[f64]) -> f64 {
    values.windows(2).map(|w| w[1] - w[0]).fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn saturating_curve() {
        let curve: Vec<(f64, f64)> = (0..=100)
            .map(|i| {
                let t = i as f64 * 0.05;
                (t, 1.0 - (-2.0 * t).exp())
            })
            .collect();
        assert_eq!(max_drop(&curve), 0.0);
        // 1 − e^{−2t} is within 1% of its end value once e^{−2t} − e^{−10} ≤ 0.01·(1 − e^{−10})
        let exact = -((0.01 * (1.0 - (-10.0f64).exp()) + (-10.0f64).exp()).ln()) / 2.0;
        let t = time_to_plateau(&curve, 0.01);
        assert!(t >= exact && t - exact <= 0.05 + 1e-12, "{t} vs {exact}");
        assert!(flatness_after(&curve, 2.5) < 0.01);
        assert_eq!(plateau(&curve), curve[100].1);
    }

    #[test]
    fn sequences() {
        assert!(worst_increase(&[3.0, 2.0, 1.5]) < 0.0);
        assert_eq!(worst_increase(&[3.0, 3.0]), 0.0);
        assert_eq!(max_drop(&[(0.0, 1.0), (1.0, 0.7), (2.0, 0.9)]), 0.30000000000000004);
        assert!(plateau(&[]).is_nan());
    }
}
