//! Joint index/symbol detectors with instrumented operation counts.
//!
//! Both detectors search every `(n, m, k)` hypothesis. The suboptimal rule
//! scores a hypothesis against its own branch only; the optimal rule scores
//! the full branch vector, penalizing hypotheses that leave received energy
//! unexplained. Real multiplication/addition counters follow the convention
//! that a complex product costs 4 multiplications and 2 additions and a
//! squared magnitude costs 2 multiplications and 1 addition.

use num_complex::Complex64;

use crate::channel::ChannelRealization;
use crate::modem::{Constellation, TxTriple};

/// Which detection rule to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectorKind {
    Suboptimal,
    Optimal,
}

impl std::fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            DetectorKind::Suboptimal => write!(f, "suboptimal"),
            DetectorKind::Optimal => write!(f, "optimal"),
        }
    }
}

/// Decision plus the real-operation counts incurred to reach it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionResult {
    pub triple: TxTriple,
    /// Winning decision metric.
    pub metric: f64,
    pub real_mults: u64,
    pub real_adds: u64,
}

/// Running tally of costed real operations.
#[derive(Debug, Default, Clone, Copy)]
struct OpCounter {
    mults: u64,
    adds: u64,
}

impl OpCounter {
    fn complex_mul(&mut self, a: Complex64, b: Complex64) -> Complex64 {
        self.mults += 4;
        self.adds += 2;
        a * b
    }

    fn real_mul(&mut self, a: f64, b: f64) -> f64 {
        self.mults += 1;
        a * b
    }

    fn real_complex_mul(&mut self, r: f64, a: Complex64) -> Complex64 {
        self.mults += 2;
        r * a
    }

    fn complex_sub(&mut self, a: Complex64, b: Complex64) -> Complex64 {
        self.adds += 2;
        a - b
    }

    fn norm_sqr(&mut self, a: Complex64) -> f64 {
        self.mults += 2;
        self.adds += 1;
        a.norm_sqr()
    }
}

/// Closed-form operation counts for a detector over an `(M, N, K)` scenario.
///
/// Suboptimal: `13*M*N*K + 2*M` multiplications, `7*M*N*K + M` additions.
/// Optimal: `13*M^2*N*K` multiplications, `7*M^2*N*K` additions.
pub fn complexity_counts(m: usize, n: usize, k: usize, kind: DetectorKind) -> (u64, u64) {
    let (m, n, k) = (m as u64, n as u64, k as u64);
    match kind {
        DetectorKind::Suboptimal => (13 * m * n * k + 2 * m, 7 * m * n * k + m),
        DetectorKind::Optimal => (13 * m * m * n * k, 7 * m * m * n * k),
    }
}

/// Reference signal `sqrt(P_s)*L*h*g*s`, built through the counter.
///
/// Cost per call: 11 multiplications and 4 additions; subtraction and the
/// squared residual bring the per-hypothesis budget to 13 and 7.
fn costed_reference(
    c: &mut OpCounter,
    amp_sqrt_power: f64,
    ris_elements: f64,
    h: Complex64,
    g: Complex64,
    s: Complex64,
) -> Complex64 {
    let hg = c.complex_mul(h, g);
    let hgs = c.complex_mul(hg, s);
    let scale = c.real_mul(amp_sqrt_power, ris_elements);
    c.real_complex_mul(scale, hgs)
}

/// Per-branch maximum-power scan; counted, the joint search owns the decision.
fn beam_energy_scan(c: &mut OpCounter, outputs: &[Complex64]) -> usize {
    let mut best = 0usize;
    let mut best_energy = f64::NEG_INFINITY;
    for (idx, y) in outputs.iter().enumerate() {
        let e = c.norm_sqr(*y);
        if e > best_energy {
            best_energy = e;
            best = idx;
        }
    }
    best
}

/// Suboptimal detector: joint argmin over `(n, m, k)` of the single-branch
/// residual `|y[m] - sqrt(P_s)*L*h_m*g_n*s_k|^2`.
///
/// Ties break toward the lexicographically smallest `(m, n, k)`.
#[allow(clippy::needless_range_loop)] // m is a hypothesis index, not a cursor
pub fn detect_suboptimal(
    outputs: &[Complex64],
    realization: &ChannelRealization,
    constellation: &Constellation,
    ris_elements: usize,
    transmit_power: f64,
) -> DetectionResult {
    assert_eq!(
        outputs.len(),
        realization.ris_rx.len(),
        "one output per receive-side scatterer"
    );
    let mut counter = OpCounter::default();
    let sqrt_power = transmit_power.sqrt();
    let l = ris_elements as f64;

    // Beam-strength stage: scan every branch power. The joint search below
    // revisits all branches, so the scan result is informational only.
    let _strongest = beam_energy_scan(&mut counter, outputs);

    let mut best = TxTriple { n: 0, m: 0, k: 0 };
    let mut best_metric = f64::INFINITY;
    for m in 0..realization.ris_rx.len() {
        for n in 0..realization.tx_ris.len() {
            for k in 0..constellation.points.len() {
                let reference = costed_reference(
                    &mut counter,
                    sqrt_power,
                    l,
                    realization.ris_rx[m],
                    realization.tx_ris[n],
                    constellation.points[k],
                );
                let residual = counter.complex_sub(outputs[m], reference);
                let metric = counter.norm_sqr(residual);
                if metric < best_metric {
                    best_metric = metric;
                    best = TxTriple { n, m, k };
                }
            }
        }
    }

    DetectionResult {
        triple: best,
        metric: best_metric,
        real_mults: counter.mults,
        real_adds: counter.adds,
    }
}

/// Optimal detector: argmin over `(n, m, k)` of the full-vector residual
/// `sum_{m'} |y[m'] - x_{m'}|^2` with `x_{m'}` nonzero only at `m' = m`.
///
/// The reference product is rebuilt per branch so the counters equal
/// [`complexity_counts`] exactly. Same tie-break rule as the suboptimal.
#[allow(clippy::needless_range_loop)] // m is a hypothesis index, not a cursor
pub fn detect_optimal(
    outputs: &[Complex64],
    realization: &ChannelRealization,
    constellation: &Constellation,
    ris_elements: usize,
    transmit_power: f64,
) -> DetectionResult {
    assert_eq!(
        outputs.len(),
        realization.ris_rx.len(),
        "one output per receive-side scatterer"
    );
    let mut counter = OpCounter::default();
    let sqrt_power = transmit_power.sqrt();
    let l = ris_elements as f64;
    let branches = realization.ris_rx.len();

    let mut best = TxTriple { n: 0, m: 0, k: 0 };
    let mut best_metric = f64::INFINITY;
    for m in 0..branches {
        for n in 0..realization.tx_ris.len() {
            for k in 0..constellation.points.len() {
                let mut metric = 0.0;
                for branch in 0..branches {
                    let scaled = costed_reference(
                        &mut counter,
                        sqrt_power,
                        l,
                        realization.ris_rx[m],
                        realization.tx_ris[n],
                        constellation.points[k],
                    );
                    let reference = if branch == m {
                        scaled
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                    let residual = counter.complex_sub(outputs[branch], reference);
                    metric += counter.norm_sqr(residual);
                }
                if metric < best_metric {
                    best_metric = metric;
                    best = TxTriple { n, m, k };
                }
            }
        }
    }

    DetectionResult {
        triple: best,
        metric: best_metric,
        real_mults: counter.mults,
        real_adds: counter.adds,
    }
}

/// Run the requested detector.
pub fn detect(
    kind: DetectorKind,
    outputs: &[Complex64],
    realization: &ChannelRealization,
    constellation: &Constellation,
    ris_elements: usize,
    transmit_power: f64,
) -> DetectionResult {
    match kind {
        DetectorKind::Suboptimal => detect_suboptimal(
            outputs,
            realization,
            constellation,
            ris_elements,
            transmit_power,
        ),
        DetectorKind::Optimal => detect_optimal(
            outputs,
            realization,
            constellation,
            ris_elements,
            transmit_power,
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{branch_outputs, draw_realization};
    use crate::config::ModulationKind;
    use crate::modem::build_constellation;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn setup(
        n: usize,
        m: usize,
        k: usize,
        seed: u64,
    ) -> (ChannelRealization, Constellation, ChaCha8Rng) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cr = draw_realization(n, m, &mut rng);
        let c = build_constellation(ModulationKind::Psk, k).unwrap();
        (cr, c, rng)
    }

    #[test]
    fn noiseless_inputs_detected_exactly() {
        for seed in 0..20 {
            let (cr, c, mut rng) = setup(2, 2, 4, seed);
            let tx = TxTriple {
                n: (seed % 2) as usize,
                m: ((seed / 2) % 2) as usize,
                k: (seed % 4) as usize,
            };
            let y = branch_outputs(&cr, tx, c.points[tx.k], 32, 1.0, 0.0, &mut rng);
            let sub = detect_suboptimal(&y, &cr, &c, 32, 1.0);
            let opt = detect_optimal(&y, &cr, &c, 32, 1.0);
            assert_eq!(sub.triple, tx, "seed {seed}");
            assert_eq!(opt.triple, tx, "seed {seed}");
            assert!(sub.metric < 1e-18);
            assert!(opt.metric < 1e-18);
        }
    }

    #[test]
    fn closed_form_counts_at_2_2_2() {
        assert_eq!(
            complexity_counts(2, 2, 2, DetectorKind::Suboptimal),
            (108, 58)
        );
        assert_eq!(
            complexity_counts(2, 2, 2, DetectorKind::Optimal),
            (208, 112)
        );
    }

    #[test]
    fn instrumented_counters_match_closed_form() {
        for &m in &[2usize, 4] {
            for &n in &[2usize, 4] {
                for &k in &[2usize, 4, 16] {
                    let (cr, c, mut rng) = setup(n, m, k, (m * 100 + n * 10 + k) as u64);
                    let tx = TxTriple { n: 0, m: 0, k: 0 };
                    let y = branch_outputs(&cr, tx, c.points[0], 16, 1.0, 0.2, &mut rng);
                    let sub = detect_suboptimal(&y, &cr, &c, 16, 1.0);
                    let (sm, sa) = complexity_counts(m, n, k, DetectorKind::Suboptimal);
                    assert_eq!(
                        (sub.real_mults, sub.real_adds),
                        (sm, sa),
                        "subopt {m}/{n}/{k}"
                    );
                    let opt = detect_optimal(&y, &cr, &c, 16, 1.0);
                    let (om, oa) = complexity_counts(m, n, k, DetectorKind::Optimal);
                    assert_eq!((opt.real_mults, opt.real_adds), (om, oa), "opt {m}/{n}/{k}");
                }
            }
        }
    }

    #[test]
    fn mult_ratio_tends_to_m() {
        for &m in &[2usize, 4, 8] {
            let (sm, _) = complexity_counts(m, 64, 64, DetectorKind::Suboptimal);
            let (om, _) = complexity_counts(m, 64, 64, DetectorKind::Optimal);
            let ratio = om as f64 / sm as f64;
            assert!(
                (ratio - m as f64).abs() / (m as f64) < 0.01,
                "M={m}: ratio {ratio}"
            );
        }
    }

    /// Independent scorers for cross-checking the detectors.
    #[allow(clippy::needless_range_loop)]
    fn brute_force_suboptimal(
        y: &[Complex64],
        cr: &ChannelRealization,
        c: &Constellation,
        l: usize,
    ) -> (TxTriple, f64) {
        let mut best = (TxTriple { n: 0, m: 0, k: 0 }, f64::INFINITY);
        for m in 0..cr.ris_rx.len() {
            for n in 0..cr.tx_ris.len() {
                for k in 0..c.points.len() {
                    let reference = l as f64 * cr.ris_rx[m] * cr.tx_ris[n] * c.points[k];
                    let metric = (y[m] - reference).norm_sqr();
                    if metric < best.1 {
                        best = (TxTriple { n, m, k }, metric);
                    }
                }
            }
        }
        best
    }

    fn full_vector_metric(
        y: &[Complex64],
        cr: &ChannelRealization,
        c: &Constellation,
        l: usize,
        hyp: TxTriple,
    ) -> f64 {
        let reference = l as f64 * cr.ris_rx[hyp.m] * cr.tx_ris[hyp.n] * c.points[hyp.k];
        y.iter()
            .enumerate()
            .map(|(branch, v)| {
                if branch == hyp.m {
                    (v - reference).norm_sqr()
                } else {
                    v.norm_sqr()
                }
            })
            .sum()
    }

    #[test]
    fn agrees_with_brute_force_on_noisy_instances() {
        let c = build_constellation(ModulationKind::Psk, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for trial in 0..1000 {
            let cr = draw_realization(2, 2, &mut rng);
            let tx = TxTriple {
                n: trial % 2,
                m: (trial / 2) % 2,
                k: trial % 4,
            };
            let y = branch_outputs(&cr, tx, c.points[tx.k], 16, 1.0, 2.0, &mut rng);
            let sub = detect_suboptimal(&y, &cr, &c, 16, 1.0);
            let (bf_triple, bf_metric) = brute_force_suboptimal(&y, &cr, &c, 16);
            assert_eq!(sub.triple, bf_triple, "trial {trial}");
            assert!((sub.metric - bf_metric).abs() <= 1e-12 * bf_metric.max(1.0));

            // ML optimality under the whitened model: the optimal decision's
            // full-vector metric never exceeds the full-vector metric of the
            // suboptimal decision.
            let opt = detect_optimal(&y, &cr, &c, 16, 1.0);
            let opt_metric = full_vector_metric(&y, &cr, &c, 16, opt.triple);
            let sub_full = full_vector_metric(&y, &cr, &c, 16, sub.triple);
            assert!(opt_metric <= sub_full + 1e-9, "trial {trial}");
        }
    }

    #[test]
    fn permutation_equivariance() {
        // Swapping the two receive-side gains (and the matching outputs)
        // swaps the detected m; same for the transmit side and n.
        let c = build_constellation(ModulationKind::Psk, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..200 {
            let cr = draw_realization(2, 2, &mut rng);
            let tx = TxTriple { n: 0, m: 0, k: 1 };
            let y = branch_outputs(&cr, tx, c.points[tx.k], 8, 1.0, 1.0, &mut rng);

            let swapped_cr = ChannelRealization {
                tx_ris: cr.tx_ris.clone(),
                ris_rx: vec![cr.ris_rx[1], cr.ris_rx[0]],
            };
            let swapped_y = vec![y[1], y[0]];
            for kind in [DetectorKind::Suboptimal, DetectorKind::Optimal] {
                let d = detect(kind, &y, &cr, &c, 8, 1.0);
                let ds = detect(kind, &swapped_y, &swapped_cr, &c, 8, 1.0);
                assert_eq!(ds.triple.m, 1 - d.triple.m);
                assert_eq!(ds.triple.n, d.triple.n);
                assert_eq!(ds.triple.k, d.triple.k);
            }
        }
    }
}
