use super::NumericsError;

/// Kolmogorov–Smirnov distance between the empirical CDF of `sorted` and `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> Result<f64, NumericsError> {
    if sorted.is_empty() {
        return Err(NumericsError::EmptyInput);
    }
    if sorted.windows(2).any(|w| w[1] < w[0]) {
        return Err(NumericsError::NotSorted);
    }
    let n = sorted.len() as f64;
    let d = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            let above = (i + 1) as f64 / n - f;
            let below = f - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max);
    Ok(d)
}

/// Sorts a copy of `samples` and returns the KS distance against `cdf`.
pub fn ks_statistic_unsorted<F: Fn(f64) -> f64>(
    samples: &[f64],
    cdf: F,
) -> Result<f64, NumericsError> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    ks_statistic(&sorted, cdf)
}
