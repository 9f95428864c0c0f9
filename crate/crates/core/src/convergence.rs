//! Observed order of accuracy from errors on a refinement sequence.

/// Pairwise orders `ln(e_i/e_{i+1}) / ln(h_i/h_{i+1})`.
pub fn pairwise_orders(steps: &[f64], errors: &[f64]) -> Vec<f64> {
    assert_eq!(steps.len(), errors.len(), "one error per step size");
    steps
        .windows(2)
        .zip(errors.windows(2))
        .map(|(h, e)| (e[0] / e[1]).ln() / (h[0] / h[1]).ln())
        .collect()
}

/// Least-squares slope of `ln e` against `ln h`.
pub fn fitted_order(steps: &[f64], errors: &[f64]) -> f64 {
    assert_eq!(steps.len(), errors.len(), "one error per step size");
    let n = steps.len() as f64;
    let xs: Vec<f64> = steps.iter().map(|h| h.ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Worst distance of any pairwise order from `expected`; NaN orders count as infinite.
pub fn order_deviation(steps: &[f64], errors: &[f64], expected: f64) -> f64 {
    pairwise_orders(steps, errors)
        .into_iter()
        .map(|p| if p.is_finite() { (p - expected).abs() } else { f64::INFINITY })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_power_laws() {
        let h = [0.1, 0.05, 0.025];
        let e: Vec<f64> = h.iter().map(|h| 3.0 * h * h).collect();
        for p in pairwise_orders(&h, &e) {
            assert!((p - 2.0).abs() < 1e-12);
        }
        assert!((fitted_order(&h, &e) - 2.0).abs() < 1e-12);
        assert!(order_deviation(&h, &e, 2.0) < 1e-12);
    }

    #[test]
    fn zero_errors_have_no_order() {
        let h = [0.1, 0.05];
        assert_eq!(order_deviation(&h, &[0.0, 0.0], 2.0), f64::INFINITY);
    }
}
