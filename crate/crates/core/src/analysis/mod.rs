//! Analytical error-probability machinery: special functions, the cascaded
//! channel distribution, pairwise error probabilities in four interchangeable
//! evaluations per beam case, the bit-weighted union bound, diversity-order
//! fitting and the minimum-element crossover.

pub mod bound;
pub mod distribution;
pub mod quadrature;
pub mod special;
pub mod upep;

pub use bound::{
    abep_union_bound, abep_union_bound_with_modem, crossover_lhs_correct, crossover_lhs_wrong,
    crossover_min_l, diversity_order, ssm_upep_asymptotic, ssm_upep_wrong_exact, CrossoverReport,
    CROSSOVER_SCAN_LIMIT,
};
pub use distribution::{product_channel_cdf, product_channel_pdf};
pub use quadrature::GaussLegendre;
pub use special::{
    bessel_k0, bessel_k1, digamma, double_factorial_ratio, exp_integral_e1, q_function,
    whittaker_w_mhalf_0, EULER_GAMMA,
};
pub use upep::{
    cpep_correct, cpep_wrong, eta_bar, upep, upep_correct_asymptotic, upep_correct_integral,
    upep_correct_series, upep_correct_series_partial, upep_correct_upper_bound,
    upep_wrong_asymptotic, upep_wrong_integral, upep_wrong_series, upep_wrong_series_partial,
    AnalysisError, BeamCase, SeriesParams, UpepInputs, UpepMethod, UpepValue,
};
