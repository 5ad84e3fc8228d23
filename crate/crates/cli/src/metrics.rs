pub fn mse(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "mse over unequal lengths");
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>() / a.len() as f64
}

pub fn variance(a: &[f64]) -> f64 {
    let n = a.len() as f64;
    let mean = a.iter().sum::<f64>() / n;
    a.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n
}

/// Coefficient of determination of `pred` against `reference`.
pub fn r_squared(pred: &[f64], reference: &[f64]) -> f64 {
    1.0 - mse(pred, reference) / variance(reference)
}
