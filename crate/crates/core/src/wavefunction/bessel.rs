//! Riccati-Bessel functions `z j_n(z)` for integer order and real argument.

use std::f64::consts::FRAC_PI_2;

/// Coefficient `(n+k)! / (2^k k! (n-k)!)` of the finite trigonometric form.
fn hankel_coefficient(n: u32, k: u32) -> f64 {
    let mut v = 1.0;
    // (n+k)!/(n-k)! = prod_{i=n-k+1}^{n+k} i
    for i in (n - k + 1)..=(n + k) {
        v *= i as f64;
    }
    for i in 1..=k {
        v /= 2.0 * i as f64;
    }
    v
}

/// Power series `sum_k (-1)^k z^{2k+n+1} / (2^k k! (2n+2k+1)!!)`.
fn series(n: u32, z: f64) -> f64 {
    let mut lead = z;
    for i in 1..=n {
        lead *= z / (2 * i + 1) as f64;
    }
    let z2 = z * z;
    let mut term = lead;
    let mut sum = term;
    for k in 1..200u32 {
        term *= -z2 / (2.0 * k as f64 * (2 * n + 2 * k + 1) as f64);
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Closed form `sin(z - n pi/2) P_n(1/z) + cos(z - n pi/2) Q_n(1/z)`.
fn trigonometric(n: u32, z: f64) -> f64 {
    let phase = z - n as f64 * FRAC_PI_2;
    let (s, c) = phase.sin_cos();
    let inv = 1.0 / z;
    let (mut p, mut q) = (0.0, 0.0);
    let mut power = 1.0;
    for k in 0..=n {
        let term = hankel_coefficient(n, k) * power;
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        power *= inv;
    }
    s * p + c * q
}

/// `z j_n(z)`; exact zero at `z = 0`.
///
/// The trigonometric form cancels badly for `|z|` below the order, where the
/// series converges fast instead.
pub fn riccati_bessel(n: u32, z: f64) -> f64 {
    if z == 0.0 {
        return 0.0;
    }
    if z.abs() < (n as f64 + 2.0).max(8.0) {
        series(n, z)
    } else {
        trigonometric(n, z)
    }
}

/// Spherical Bessel function `j_n(z)`.
pub fn spherical_bessel_j(n: u32, z: f64) -> f64 {
    if z == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }
    riccati_bessel(n, z) / z
}
