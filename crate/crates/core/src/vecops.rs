//! Small dense-vector helpers on `&[f64]`.

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn scale(a: &[f64], s: f64) -> Vec<f64> {
    a.iter().map(|x| x * s).collect()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `‖a − b‖_p` for `p ≥ 1`.
pub fn lp_dist(a: &[f64], b: &[f64], p: f64) -> f64 {
    if p == 2.0 {
        return dist2(a, b);
    }
    if p == 1.0 {
        return a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum();
    }
    let m = a
        .iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max);
    if m == 0.0 {
        return 0.0;
    }
    // Scale by the max entry to avoid overflow for large p.
    m * a
        .iter()
        .zip(b)
        .map(|(x, y)| ((x - y).abs() / m).powf(p))
        .sum::<f64>()
        .powf(1.0 / p)
}
