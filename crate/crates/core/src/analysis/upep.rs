//! Pairwise error probabilities, conditional and channel-averaged.
//!
//! A pairwise error is classified by whether the receive-side beam decision
//! is correct. With the beam correct, the decision statistic is Gaussian and
//! the conditional probability is a Q-function of the cascaded gain; with the
//! beam wrong it is an exponential in the interfering hypothesis energy.
//! Averaging over the product-channel density gives four interchangeable
//! evaluations per case: a reduced single integral, a series, a closed upper
//! bound, and the leading-order asymptote.

use num_complex::Complex64;
use thiserror::Error;

use super::quadrature::{GAUSS_128, GAUSS_256};
use super::special::{digamma, q_function, whittaker_w_mhalf_0, EULER_GAMMA};

/// Beam-decision case of a hypothesis pair, with the scalar that drives it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BeamCase {
    /// Receive-side beam decided correctly; carries the averaged symbol
    /// separation (see [`eta_bar`]).
    Correct { eta_bar: f64 },
    /// Receive-side beam decided wrongly; carries the energy of the decided
    /// symbol.
    Wrong { sym_energy: f64 },
}

/// Inputs of one channel-averaged pairwise error evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpepInputs {
    /// Linear average SNR (transmit power over noise level).
    pub rho: f64,
    /// Number of reflecting surface elements.
    pub ris_elements: usize,
    pub case: BeamCase,
}

/// Evaluation route of a [`UpepValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UpepMethod {
    Integral,
    Series,
    UpperBound,
    Asymptotic,
}

impl std::fmt::Display for UpepMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            UpepMethod::Integral => write!(f, "integral"),
            UpepMethod::Series => write!(f, "series"),
            UpepMethod::UpperBound => write!(f, "upper_bound"),
            UpepMethod::Asymptotic => write!(f, "asymptotic"),
        }
    }
}

/// A channel-averaged pairwise error probability.
///
/// Values are stored unclamped: at very low SNR the series and bound forms
/// may exceed 1 while still being valid union-bound ingredients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpepValue {
    pub value: f64,
    pub method: UpepMethod,
}

impl UpepValue {
    /// The value clipped to the probability range.
    pub fn clamped(&self) -> f64 {
        self.value.clamp(0.0, 1.0)
    }
}

/// Failures of the analytical evaluations.
#[derive(Debug, Error, PartialEq)]
pub enum AnalysisError {
    #[error("quadrature did not converge: order doubling moved the result by {rel_change:e}")]
    QuadratureNotConverged { rel_change: f64 },
    #[error("series did not converge within {vmax} terms (argument {argument:e})")]
    SeriesNotConverged { vmax: u32, argument: f64 },
}

/// Averaged symbol separation of a beam-correct pair.
///
/// `|s_k - s_khat|^2` when the transmit-side scatterer is the same,
/// `|s_k|^2 + |s_khat|^2` otherwise.
pub fn eta_bar(s_k: Complex64, s_khat: Complex64, same_tx_scatterer: bool) -> f64 {
    if same_tx_scatterer {
        (s_k - s_khat).norm_sqr()
    } else {
        s_k.norm_sqr() + s_khat.norm_sqr()
    }
}

/// Conditional pairwise error probability, beam-correct case:
/// `Q( sqrt( rho |L h (g s - ghat shat)|^2 / 2 ) )`.
pub fn cpep_correct(
    rho: f64,
    ris_elements: usize,
    h_m: Complex64,
    g_n: Complex64,
    g_nhat: Complex64,
    s_k: Complex64,
    s_khat: Complex64,
) -> f64 {
    let diff = g_n * s_k - g_nhat * s_khat;
    assert!(
        diff.norm_sqr() > 0.0 || (g_n != g_nhat || s_k != s_khat),
        "pairwise error needs two distinct hypotheses"
    );
    let magnitude = (ris_elements as f64 * h_m * diff).norm_sqr();
    q_function((rho * magnitude / 2.0).sqrt())
}

/// Conditional pairwise error probability, beam-wrong case:
/// `exp(-rho L^2 |h g|^2 |s|^2 / 2) / 2`.
pub fn cpep_wrong(
    rho: f64,
    ris_elements: usize,
    h_mhat: Complex64,
    g_nhat: Complex64,
    s_khat: Complex64,
) -> f64 {
    let l2 = (ris_elements * ris_elements) as f64;
    let gain = (h_mhat * g_nhat).norm_sqr();
    0.5 * (-rho * l2 * gain * s_khat.norm_sqr() / 2.0).exp()
}

fn scale_correct(rho: f64, ris_elements: usize, eta: f64) -> f64 {
    rho * (ris_elements * ris_elements) as f64 * eta
}

/// Beam-correct averaged pairwise error by the reduced single integral:
/// `2/(pi L sqrt(rho eta)) int_0^{pi/2} exp(2 sin^2 t / X) W(4 sin^2 t / X) sin t dt`
/// with `X = rho L^2 eta`.
///
/// Order-128 Gauss-Legendre, verified by order doubling.
pub fn upep_correct_integral(
    rho: f64,
    ris_elements: usize,
    eta_bar: f64,
) -> Result<UpepValue, AnalysisError> {
    assert!(rho > 0.0 && eta_bar > 0.0, "rho and eta must be positive");
    let x = scale_correct(rho, ris_elements, eta_bar);
    let integrand = |theta: f64| {
        let s2 = theta.sin().powi(2);
        if s2 == 0.0 {
            return 0.0; // sqrt(z) log(z) limit at the endpoint
        }
        (2.0 * s2 / x).exp() * whittaker_w_mhalf_0(4.0 * s2 / x) * theta.sin()
    };
    let prefactor = 2.0 / (std::f64::consts::PI * ris_elements as f64 * (rho * eta_bar).sqrt());
    let coarse = GAUSS_128.integrate(0.0, std::f64::consts::FRAC_PI_2, integrand);
    let fine = GAUSS_256.integrate(0.0, std::f64::consts::FRAC_PI_2, integrand);
    let rel_change = (fine - coarse).abs() / fine.abs().max(f64::MIN_POSITIVE);
    if rel_change > 1e-7 {
        return Err(AnalysisError::QuadratureNotConverged { rel_change });
    }
    Ok(UpepValue {
        value: prefactor * coarse,
        method: UpepMethod::Integral,
    })
}

/// Closed upper bound of the beam-correct case: the integrand of
/// [`upep_correct_integral`] frozen at its endpoint maximum.
pub fn upep_correct_upper_bound(rho: f64, ris_elements: usize, eta_bar: f64) -> UpepValue {
    assert!(rho > 0.0 && eta_bar > 0.0, "rho and eta must be positive");
    let x = scale_correct(rho, ris_elements, eta_bar);
    let value = 2.0 / (std::f64::consts::PI * ris_elements as f64 * (rho * eta_bar).sqrt())
        * (2.0 / x).exp()
        * whittaker_w_mhalf_0(4.0 / x);
    UpepValue {
        value,
        method: UpepMethod::UpperBound,
    }
}

/// Controls for the series evaluations.
#[derive(Debug, Clone, Copy)]
pub struct SeriesParams {
    /// Hard cap on the number of terms.
    pub vmax: u32,
    /// Relative term threshold that ends the summation.
    pub tol: f64,
}

impl Default for SeriesParams {
    fn default() -> Self {
        SeriesParams {
            vmax: 40,
            tol: 1e-12,
        }
    }
}

/// Beam-correct averaged pairwise error by the series
/// `sum_{v>=1} beta^v (2v-1)!!/((2v)!! 2 (v-1)!) [ -ln beta - psi(v+1/2) + 1/v + 2 psi(v) ]`
/// with `beta = 4 / (rho L^2 eta)`.
///
/// The series is a small-argument expansion; the guard reports failure when
/// `beta > 1` keeps the terms from decaying within the cap.
pub fn upep_correct_series(
    rho: f64,
    ris_elements: usize,
    eta_bar: f64,
    params: SeriesParams,
) -> Result<UpepValue, AnalysisError> {
    assert!(rho > 0.0 && eta_bar > 0.0, "rho and eta must be positive");
    let beta = 4.0 / scale_correct(rho, ris_elements, eta_bar);
    let minus_log_beta = -beta.ln();
    let mut coeff = 0.5 * beta; // beta^v / (2 (v-1)!)
    let mut ratio = 0.5; // (2v-1)!! / (2v)!!
    let mut psi_half = digamma(1.5); // psi(v + 1/2)
    let mut psi_int = -EULER_GAMMA; // psi(v)
    let mut sum = 0.0;
    for v in 1..=params.vmax {
        let vf = v as f64;
        let bracket = minus_log_beta - psi_half + 1.0 / vf + 2.0 * psi_int;
        let term = coeff * ratio * bracket;
        sum += term;
        if v >= 2 && term.abs() < params.tol * sum.abs().max(f64::MIN_POSITIVE) {
            return Ok(UpepValue {
                value: sum,
                method: UpepMethod::Series,
            });
        }
        coeff *= beta / vf;
        ratio *= (2.0 * vf + 1.0) / (2.0 * vf + 2.0);
        psi_half += 1.0 / (vf + 0.5);
        psi_int += 1.0 / vf;
    }
    Err(AnalysisError::SeriesNotConverged {
        vmax: params.vmax,
        argument: beta,
    })
}

/// Partial sum of the beam-correct series truncated after `terms` terms.
pub fn upep_correct_series_partial(rho: f64, ris_elements: usize, eta_bar: f64, terms: u32) -> f64 {
    assert!(terms >= 1, "need at least one term");
    let beta = 4.0 / scale_correct(rho, ris_elements, eta_bar);
    let minus_log_beta = -beta.ln();
    let mut coeff = 0.5 * beta;
    let mut ratio = 0.5;
    let mut psi_half = digamma(1.5);
    let mut psi_int = -EULER_GAMMA;
    let mut sum = 0.0;
    for v in 1..=terms {
        let vf = v as f64;
        sum += coeff * ratio * (minus_log_beta - psi_half + 1.0 / vf + 2.0 * psi_int);
        coeff *= beta / vf;
        ratio *= (2.0 * vf + 1.0) / (2.0 * vf + 2.0);
        psi_half += 1.0 / (vf + 0.5);
        psi_int += 1.0 / vf;
    }
    sum
}

/// Leading term of the beam-correct series:
/// `[ln(X/4) - psi(3/2) + 1 + 2 psi(1)] / X` with `X = rho L^2 eta`.
pub fn upep_correct_asymptotic(rho: f64, ris_elements: usize, eta_bar: f64) -> UpepValue {
    assert!(rho > 0.0 && eta_bar > 0.0, "rho and eta must be positive");
    let x = scale_correct(rho, ris_elements, eta_bar);
    let value = ((x / 4.0).ln() - digamma(1.5) + 1.0 + 2.0 * digamma(1.0)) / x;
    UpepValue {
        value,
        method: UpepMethod::Asymptotic,
    }
}

fn alpha_wrong(rho: f64, ris_elements: usize, sym_energy: f64) -> f64 {
    rho * (ris_elements * ris_elements) as f64 * sym_energy / 2.0
}

/// Beam-wrong averaged pairwise error in closed form:
/// `exp(1/(2 alpha)) / (2 sqrt(alpha)) * W(1/alpha)` with
/// `alpha = rho L^2 |s|^2 / 2`.
pub fn upep_wrong_integral(rho: f64, ris_elements: usize, sym_energy: f64) -> UpepValue {
    assert!(
        rho > 0.0 && sym_energy > 0.0,
        "rho and |s|^2 must be positive"
    );
    let alpha = alpha_wrong(rho, ris_elements, sym_energy);
    let value = (0.5 / alpha).exp() / (2.0 * alpha.sqrt()) * whittaker_w_mhalf_0(1.0 / alpha);
    UpepValue {
        value,
        method: UpepMethod::Integral,
    }
}

/// Beam-wrong averaged pairwise error by the series
/// `1/2 sum_{v>=0} beta^{v+1}/v! [ ln(1/beta) + psi(v+1) ]` with
/// `beta = 2 / (rho L^2 |s|^2)`.
pub fn upep_wrong_series(
    rho: f64,
    ris_elements: usize,
    sym_energy: f64,
    params: SeriesParams,
) -> Result<UpepValue, AnalysisError> {
    assert!(
        rho > 0.0 && sym_energy > 0.0,
        "rho and |s|^2 must be positive"
    );
    let beta = 1.0 / alpha_wrong(rho, ris_elements, sym_energy);
    let log_inv_beta = -beta.ln();
    let mut coeff = 0.5 * beta; // beta^{v+1} / (2 v!)
    let mut psi = -EULER_GAMMA; // psi(v+1)
    let mut sum = 0.0;
    for v in 0..=params.vmax {
        let term = coeff * (log_inv_beta + psi);
        sum += term;
        if v >= 1 && term.abs() < params.tol * sum.abs().max(f64::MIN_POSITIVE) {
            return Ok(UpepValue {
                value: sum,
                method: UpepMethod::Series,
            });
        }
        let vf = (v + 1) as f64;
        coeff *= beta / vf;
        psi += 1.0 / vf;
    }
    Err(AnalysisError::SeriesNotConverged {
        vmax: params.vmax,
        argument: beta,
    })
}

/// Partial sum of the beam-wrong series truncated after `terms` terms
/// (the first term is `v = 0`).
pub fn upep_wrong_series_partial(
    rho: f64,
    ris_elements: usize,
    sym_energy: f64,
    terms: u32,
) -> f64 {
    assert!(terms >= 1, "need at least one term");
    let beta = 1.0 / alpha_wrong(rho, ris_elements, sym_energy);
    let log_inv_beta = -beta.ln();
    let mut coeff = 0.5 * beta;
    let mut psi = -EULER_GAMMA;
    let mut sum = 0.0;
    for v in 0..terms {
        sum += coeff * (log_inv_beta + psi);
        let vf = (v + 1) as f64;
        coeff *= beta / vf;
        psi += 1.0 / vf;
    }
    sum
}

/// Leading term of the beam-wrong series:
/// `[ln(alpha) + psi(1)] / (2 alpha)` with `alpha = rho L^2 |s|^2 / 2`.
pub fn upep_wrong_asymptotic(rho: f64, ris_elements: usize, sym_energy: f64) -> UpepValue {
    assert!(
        rho > 0.0 && sym_energy > 0.0,
        "rho and |s|^2 must be positive"
    );
    let scale = rho * (ris_elements * ris_elements) as f64 * sym_energy;
    let value = ((scale / 2.0).ln() + digamma(1.0)) / scale;
    UpepValue {
        value,
        method: UpepMethod::Asymptotic,
    }
}

/// Evaluate a pairwise error probability by the requested route.
pub fn upep(inputs: UpepInputs, method: UpepMethod) -> Result<UpepValue, AnalysisError> {
    let UpepInputs {
        rho,
        ris_elements,
        case,
    } = inputs;
    match (case, method) {
        (BeamCase::Correct { eta_bar }, UpepMethod::Integral) => {
            upep_correct_integral(rho, ris_elements, eta_bar)
        }
        (BeamCase::Correct { eta_bar }, UpepMethod::Series) => {
            upep_correct_series(rho, ris_elements, eta_bar, SeriesParams::default())
        }
        (BeamCase::Correct { eta_bar }, UpepMethod::UpperBound) => {
            Ok(upep_correct_upper_bound(rho, ris_elements, eta_bar))
        }
        (BeamCase::Correct { eta_bar }, UpepMethod::Asymptotic) => {
            Ok(upep_correct_asymptotic(rho, ris_elements, eta_bar))
        }
        (BeamCase::Wrong { sym_energy }, UpepMethod::Integral | UpepMethod::UpperBound) => {
            // The closed form is exact; it serves as its own bound.
            Ok(upep_wrong_integral(rho, ris_elements, sym_energy))
        }
        (BeamCase::Wrong { sym_energy }, UpepMethod::Series) => {
            upep_wrong_series(rho, ris_elements, sym_energy, SeriesParams::default())
        }
        (BeamCase::Wrong { sym_energy }, UpepMethod::Asymptotic) => {
            Ok(upep_wrong_asymptotic(rho, ris_elements, sym_energy))
        }
    }
}
