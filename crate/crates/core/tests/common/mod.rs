//! Shared oracle helpers for the integration suites: quadrature routines
//! that stay independent of the reduced-form evaluations in the crate.

use ris_dssm::analysis::{bessel_k0, q_function};

/// Recursive adaptive Simpson; tolerance is absolute. `min_depth` forces
/// early subdivisions so sharply-peaked integrands are not mistaken for zero
/// at the top level.
pub fn adaptive_simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
    depth: u32,
    min_depth: u32,
) -> f64 {
    fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b))
    }
    let mid = 0.5 * (a + b);
    if min_depth > 0 {
        return adaptive_simpson(f, a, mid, tol / 2.0, depth - 1, min_depth - 1)
            + adaptive_simpson(f, mid, b, tol / 2.0, depth - 1, min_depth - 1);
    }
    let whole = simpson(f, a, b);
    let left = simpson(f, a, mid);
    let right = simpson(f, mid, b);
    if depth == 0 || (left + right - whole).abs() < 15.0 * tol {
        left + right + (left + right - whole) / 15.0
    } else {
        adaptive_simpson(f, a, mid, tol / 2.0, depth - 1, 0)
            + adaptive_simpson(f, mid, b, tol / 2.0, depth - 1, 0)
    }
}

/// Direct quadrature of the beam-correct averaging integral
/// `int_0^inf Q(sqrt(X x / 2)) 2 K0(2 sqrt(x)) dx`, substituted `x = u^2`
/// to tame the logarithmic endpoint.
pub fn correct_case_primitive(rho: f64, l: usize, eta: f64) -> f64 {
    let x_scale = rho * (l * l) as f64 * eta;
    let a = (x_scale / 2.0).sqrt();
    let f = move |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        4.0 * u * q_function(a * u) * bessel_k0(2.0 * u)
    };
    // The Q factor kills the integrand beyond u = 14/a (Q(14) ~ 5e-45), and
    // the Bessel factor beyond u = 38 regardless.
    let upper = (14.0 / a).min(38.0);
    adaptive_simpson(&f, 0.0, upper, 1e-15 * upper, 52, 10)
}

/// Direct quadrature of the beam-wrong averaging integral
/// `int_0^inf K0(2 sqrt(x)) exp(-alpha x) dx` with the same substitution.
pub fn wrong_case_primitive(rho: f64, l: usize, sym_energy: f64) -> f64 {
    let alpha = rho * (l * l) as f64 * sym_energy / 2.0;
    let f = move |u: f64| {
        if u == 0.0 {
            return 0.0;
        }
        2.0 * u * bessel_k0(2.0 * u) * (-alpha * u * u).exp()
    };
    // Support ends where the exponential dies: u ~ 16/sqrt(alpha).
    let upper = (16.0 / alpha.sqrt()).min(38.0);
    adaptive_simpson(&f, 0.0, upper, 1e-16 * upper, 52, 10)
}
