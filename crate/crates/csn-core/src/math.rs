//! Float math routed through `libm` so the crate builds without `std` and
//! produces bit-identical results on every platform.

pub use libm::{atan, cos, exp, fabs, hypot, log, round, sin, tan};

pub const DEG_PER_RAD: f64 = 180.0 / core::f64::consts::PI;

/// Log-sum-exp with max-subtraction; safe for arguments up to ~|700|.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !m.is_finite() {
        return m;
    }
    let s: f64 = xs.iter().map(|&x| exp(x - m)).sum();
    m + log(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_sum_exp_matches_naive_in_safe_range() {
        let xs = [0.3, -1.2, 2.5, 0.0];
        let naive = xs.iter().map(|&x| exp(x)).sum::<f64>();
        assert!((log_sum_exp(&xs) - log(naive)).abs() < 1e-14);
    }

    #[test]
    fn log_sum_exp_survives_large_magnitudes() {
        assert!((log_sum_exp(&[700.0, 700.0]) - (700.0 + log(2.0))).abs() < 1e-12);
        assert!((log_sum_exp(&[-700.0, -700.0]) - (-700.0 + log(2.0))).abs() < 1e-12);
    }
}
