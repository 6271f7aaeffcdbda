//! Distribution of the cascaded scatterer gain product.
//!
//! With both hop gains standard complex Gaussian, the squared magnitude of
//! their product `x = |g h|^2` has density `2 K0(2 sqrt(x))` and distribution
//! function `1 - 2 sqrt(x) K1(2 sqrt(x))`.

use super::special::{bessel_k0, bessel_k1};

/// Density of `|g h|^2` at `x > 0`.
pub fn product_channel_pdf(x: f64) -> f64 {
    assert!(x > 0.0, "pdf defined for positive x, got {x}");
    2.0 * bessel_k0(2.0 * x.sqrt())
}

/// Distribution function of `|g h|^2` at `x >= 0`.
pub fn product_channel_cdf(x: f64) -> f64 {
    assert!(x >= 0.0, "cdf defined for nonnegative x, got {x}");
    if x == 0.0 {
        return 0.0;
    }
    let s = 2.0 * x.sqrt();
    1.0 - s * bessel_k1(s)
}
