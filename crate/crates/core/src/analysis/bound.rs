//! Union bound on the average bit error probability, diversity-order
//! estimation, the single-hop baseline asymptotics and the minimum-element
//! crossover solver.

use std::collections::HashMap;

use crate::config::SystemConfig;
use crate::modem::{build_constellation, Modem, TxTriple};

use super::special::{digamma, EULER_GAMMA};
use super::upep::{eta_bar, upep, AnalysisError, BeamCase, UpepInputs, UpepMethod};

/// Union upper bound on the average bit error probability at linear SNR
/// `rho`: the bit-weighted sum of pairwise error probabilities over every
/// ordered hypothesis pair, divided by `N M K log2(N M K)`.
///
/// Pairs sharing the receive-side scatterer route to the beam-correct
/// evaluation with the matching averaged symbol separation; all other pairs
/// route to the beam-wrong evaluation with the decided symbol energy.
/// The result is not clamped; see [`super::upep::UpepValue`].
pub fn abep_union_bound(
    config: &SystemConfig,
    rho: f64,
    method: UpepMethod,
) -> Result<f64, AnalysisError> {
    let constellation =
        build_constellation(config.modulation_kind, config.symbol_order).expect("validated order");
    let modem = Modem::new(
        config.num_tx_scatterers,
        config.num_rx_scatterers,
        constellation,
    )
    .expect("validated field sizes");
    abep_union_bound_with_modem(&modem, config.ris_elements, rho, method)
}

/// [`abep_union_bound`] against a prebuilt modem (constellation reuse).
pub fn abep_union_bound_with_modem(
    modem: &Modem,
    ris_elements: usize,
    rho: f64,
    method: UpepMethod,
) -> Result<f64, AnalysisError> {
    let n = modem.num_tx_scatterers();
    let m = modem.num_rx_scatterers();
    let k = modem.constellation.order();
    let rate = modem.bits_per_use() as f64;

    // Pairwise values depend only on the case scalar; memoize on its bits.
    let mut cache: HashMap<(bool, u64), f64> = HashMap::new();
    let mut lookup = |case: BeamCase| -> Result<f64, AnalysisError> {
        let (correct, scalar) = match case {
            BeamCase::Correct { eta_bar } => (true, eta_bar),
            BeamCase::Wrong { sym_energy } => (false, sym_energy),
        };
        if let Some(&v) = cache.get(&(correct, scalar.to_bits())) {
            return Ok(v);
        }
        let value = upep(
            UpepInputs {
                rho,
                ris_elements,
                case,
            },
            method,
        )?
        .value;
        cache.insert((correct, scalar.to_bits()), value);
        Ok(value)
    };

    let mut weighted = 0.0;
    for tn in 0..n {
        for tm in 0..m {
            for tk in 0..k {
                let truth = TxTriple {
                    n: tn,
                    m: tm,
                    k: tk,
                };
                for dn in 0..n {
                    for dm in 0..m {
                        for dk in 0..k {
                            let decision = TxTriple {
                                n: dn,
                                m: dm,
                                k: dk,
                            };
                            if decision == truth {
                                continue;
                            }
                            let case = if dm == tm {
                                BeamCase::Correct {
                                    eta_bar: eta_bar(
                                        modem.constellation.points[tk],
                                        modem.constellation.points[dk],
                                        dn == tn,
                                    ),
                                }
                            } else {
                                BeamCase::Wrong {
                                    sym_energy: modem.constellation.points[dk].norm_sqr(),
                                }
                            };
                            let bits = modem.bit_errors(truth, decision).expect("in range");
                            weighted += bits as f64 * lookup(case)?;
                        }
                    }
                }
            }
        }
    }
    Ok(weighted / ((n * m * k) as f64 * rate))
}

/// Fitted high-SNR slope of a pairwise error expression on log-log axes:
/// `-(log2 P(hi) - log2 P(lo)) / (log2 rho_hi - log2 rho_lo)`.
pub fn diversity_order<F: Fn(f64) -> f64>(pep: F, rho_lo_db: f64, rho_hi_db: f64) -> f64 {
    assert!(rho_hi_db > rho_lo_db, "need an increasing SNR span");
    let rho_lo = 10f64.powf(rho_lo_db / 10.0);
    let rho_hi = 10f64.powf(rho_hi_db / 10.0);
    let p_lo = pep(rho_lo);
    let p_hi = pep(rho_hi);
    assert!(p_lo > 0.0 && p_hi > 0.0, "pep must be positive on the span");
    -(p_hi.log2() - p_lo.log2()) / (rho_hi.log2() - rho_lo.log2())
}

/// High-SNR pairwise error of the single-hop baseline:
/// `24/(13 rho eta)` with the beam correct, `1/(rho |s|^2)` otherwise.
pub fn ssm_upep_asymptotic(rho: f64, case: BeamCase) -> f64 {
    match case {
        BeamCase::Correct { eta_bar } => 24.0 / (13.0 * rho * eta_bar),
        BeamCase::Wrong { sym_energy } => 1.0 / (rho * sym_energy),
    }
}

/// Exact channel-averaged beam-wrong pairwise error of the single-hop
/// baseline: `1 / (rho |s|^2 + 2)`.
pub fn ssm_upep_wrong_exact(rho: f64, sym_energy: f64) -> f64 {
    1.0 / (rho * sym_energy + 2.0)
}

/// Left-hand side of the beam-correct crossover condition:
/// `L^2 - 13/24 ln(rho L^2 eta / 4) + 13/24 [psi(3/2) - 1 - 2 psi(1)]`.
pub fn crossover_lhs_correct(rho: f64, ris_elements: usize, eta_bar: f64) -> f64 {
    let l2 = (ris_elements * ris_elements) as f64;
    l2 - 13.0 / 24.0 * (rho * l2 * eta_bar / 4.0).ln()
        + 13.0 / 24.0 * (digamma(1.5) - 1.0 + 2.0 * EULER_GAMMA)
}

/// Left-hand side of the beam-wrong crossover condition:
/// `L^2 - ln(rho L^2 |s|^2 / 2) - psi(1)`.
pub fn crossover_lhs_wrong(rho: f64, ris_elements: usize, sym_energy: f64) -> f64 {
    let l2 = (ris_elements * ris_elements) as f64;
    l2 - (rho * l2 * sym_energy / 2.0).ln() + EULER_GAMMA
}

/// Default integer scan ceiling for [`crossover_min_l`]. Both left-hand
/// sides grow like `L^2` against a logarithm, so any satisfying set is a
/// short prefix; the ceiling only guards against pathological inputs.
pub const CROSSOVER_SCAN_LIMIT: usize = 10_000;

/// Smallest element counts satisfying each crossover condition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CrossoverReport {
    /// Smallest `L` with the beam-correct left-hand side nonpositive, if any
    /// exists at or below the scan limit.
    pub min_l_correct: Option<usize>,
    /// Same for the beam-wrong condition.
    pub min_l_wrong: Option<usize>,
    pub scan_limit: usize,
}

/// Scan `L = 1, 2, ...` up to `scan_limit` for the smallest integers
/// satisfying the two crossover conditions.
pub fn crossover_min_l(
    rho: f64,
    eta_bar: f64,
    sym_energy: f64,
    scan_limit: usize,
) -> CrossoverReport {
    assert!(
        rho > 0.0 && eta_bar > 0.0 && sym_energy > 0.0 && scan_limit >= 1,
        "crossover scan needs positive inputs"
    );
    let mut min_l_correct = None;
    let mut min_l_wrong = None;
    for l in 1..=scan_limit {
        if min_l_correct.is_none() && crossover_lhs_correct(rho, l, eta_bar) <= 0.0 {
            min_l_correct = Some(l);
        }
        if min_l_wrong.is_none() && crossover_lhs_wrong(rho, l, sym_energy) <= 0.0 {
            min_l_wrong = Some(l);
        }
        if min_l_correct.is_some() && min_l_wrong.is_some() {
            break;
        }
    }
    CrossoverReport {
        min_l_correct,
        min_l_wrong,
        scan_limit,
    }
}
