//! Deterministic inputs shared by the benchmarks.

/// Low-discrepancy offsets in `[0, 1)`.
fn weyl(k: usize) -> f64 {
    (k as f64 * 0.618_033_988_749_895).fract()
}

/// `count` position/momentum pairs for `n` particles, positions at least one unit apart.
pub fn points(n: usize, count: usize) -> Vec<(Vec<f64>, Vec<f64>)> {
    (0..count)
        .map(|s| {
            let x = (0..n).map(|i| 1.5 * i as f64 - 0.75 * n as f64 + 0.4 * weyl(s * n + i)).collect();
            let p = (0..n).map(|i| 0.8 * i as f64 - 1.0 + 0.3 * weyl(s * n + i + 7)).collect();
            (x, p)
        })
        .collect()
}
