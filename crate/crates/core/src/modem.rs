//! Bit mapping between the information stream and the index triple.
//!
//! The transmitted word carries three fields: one scatterer index per hop and
//! one constellation symbol. Scatterer indices use reflected-Gray bit labels,
//! constellations carry Gray labels on the ring (PSK) or per axis (QAM), so
//! nearest-neighbour decision errors cost a single bit.

use num_complex::Complex64;
use thiserror::Error;

use crate::config::ModulationKind;

/// Errors raised by the bit/triple mapping layer.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModemError {
    #[error("constellation order {0} is invalid for {1}")]
    InvalidOrder(usize, ModulationKind),
    #[error("field size {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("expected {expected} bits, got {got}")]
    WrongBitCount { expected: u32, got: usize },
    #[error("index {index} out of range for field size {size}")]
    IndexOutOfRange { index: usize, size: usize },
}

/// Binary-reflected Gray code of `n`.
pub fn gray_encode(n: usize) -> usize {
    n ^ (n >> 1)
}

/// Inverse of [`gray_encode`].
pub fn gray_decode(g: usize) -> usize {
    let mut n = g;
    let mut shift = g >> 1;
    while shift != 0 {
        n ^= shift;
        shift >>= 1;
    }
    n
}

/// The transmitted (or detected) index triple.
///
/// `n` selects the scatterer on the transmitter-side hop, `m` the scatterer
/// on the receiver-side hop, `k` the constellation symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TxTriple {
    pub n: usize,
    pub m: usize,
    pub k: usize,
}

/// A unit-average-energy constellation with Gray bit labels.
#[derive(Debug, Clone)]
pub struct Constellation {
    /// Complex symbol values, indexed by symbol index `k`.
    pub points: Vec<Complex64>,
    /// Bit label of each symbol index (`bits_per_symbol` wide).
    pub labels: Vec<usize>,
    /// Symbol index for each bit label; inverse of `labels`.
    label_to_index: Vec<usize>,
    /// Width of each label in bits.
    pub bits_per_symbol: u32,
    pub kind: ModulationKind,
}

/// Build a Gray-labelled PSK or QAM constellation of order `k`.
///
/// PSK points are `exp(j*2*pi*i/k)` in ring order; QAM points are the square
/// grid scaled to unit average energy, real axis carrying the first label
/// half and imaginary axis the second.
pub fn build_constellation(kind: ModulationKind, k: usize) -> Result<Constellation, ModemError> {
    if k < 2 || !k.is_power_of_two() {
        return Err(ModemError::InvalidOrder(k, kind));
    }
    let bits_per_symbol = k.trailing_zeros();
    let (points, labels) = match kind {
        ModulationKind::Psk => {
            let points = (0..k)
                .map(|i| {
                    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / k as f64)
                })
                .collect::<Vec<_>>();
            let labels = (0..k).map(gray_encode).collect::<Vec<_>>();
            (points, labels)
        }
        ModulationKind::Qam => {
            if !bits_per_symbol.is_multiple_of(2) {
                return Err(ModemError::InvalidOrder(k, kind));
            }
            let side = 1usize << (bits_per_symbol / 2);
            let scale = (3.0 / (2.0 * (k as f64 - 1.0))).sqrt();
            let half = bits_per_symbol / 2;
            let mut points = Vec::with_capacity(k);
            let mut labels = Vec::with_capacity(k);
            for i_idx in 0..side {
                for q_idx in 0..side {
                    let re = scale * (2.0 * i_idx as f64 - (side as f64 - 1.0));
                    let im = scale * (2.0 * q_idx as f64 - (side as f64 - 1.0));
                    points.push(Complex64::new(re, im));
                    labels.push((gray_encode(i_idx) << half) | gray_encode(q_idx));
                }
            }
            (points, labels)
        }
    };

    let mut label_to_index = vec![usize::MAX; k];
    for (idx, &label) in labels.iter().enumerate() {
        label_to_index[label] = idx;
    }
    debug_assert!(label_to_index.iter().all(|&i| i != usize::MAX));

    Ok(Constellation {
        points,
        labels,
        label_to_index,
        bits_per_symbol,
        kind,
    })
}

impl Constellation {
    pub fn order(&self) -> usize {
        self.points.len()
    }

    /// Symbol index whose label equals the given bits (MSB first).
    pub fn index_for_bits(&self, bits: &[bool]) -> Result<usize, ModemError> {
        if bits.len() != self.bits_per_symbol as usize {
            return Err(ModemError::WrongBitCount {
                expected: self.bits_per_symbol,
                got: bits.len(),
            });
        }
        Ok(self.label_to_index[bits_to_nat(bits)])
    }

    /// Average symbol energy; 1 by construction up to rounding.
    pub fn average_energy(&self) -> f64 {
        self.points.iter().map(|p| p.norm_sqr()).sum::<f64>() / self.points.len() as f64
    }
}

fn bits_to_nat(bits: &[bool]) -> usize {
    bits.iter().fold(0usize, |acc, &b| (acc << 1) | b as usize)
}

fn nat_to_bits(value: usize, width: u32) -> Vec<bool> {
    (0..width).rev().map(|i| (value >> i) & 1 == 1).collect()
}

/// Maps bit words to index triples and back for one scenario.
#[derive(Debug, Clone)]
pub struct Modem {
    pub constellation: Constellation,
    num_tx_scatterers: usize,
    num_rx_scatterers: usize,
    n_bits: u32,
    m_bits: u32,
}

impl Modem {
    /// `num_tx_scatterers` / `num_rx_scatterers` must be powers of two.
    /// A field of size 1 carries zero bits.
    pub fn new(
        num_tx_scatterers: usize,
        num_rx_scatterers: usize,
        constellation: Constellation,
    ) -> Result<Modem, ModemError> {
        for v in [num_tx_scatterers, num_rx_scatterers] {
            if v == 0 || !v.is_power_of_two() {
                return Err(ModemError::NotPowerOfTwo(v));
            }
        }
        Ok(Modem {
            n_bits: num_tx_scatterers.trailing_zeros(),
            m_bits: num_rx_scatterers.trailing_zeros(),
            num_tx_scatterers,
            num_rx_scatterers,
            constellation,
        })
    }

    /// Bits consumed per channel use.
    pub fn bits_per_use(&self) -> u32 {
        self.n_bits + self.m_bits + self.constellation.bits_per_symbol
    }

    /// Map a bit word (MSB first) onto the index triple.
    ///
    /// The first `log2(N)` bits select `n`, the next `log2(M)` bits select
    /// `m` (both through the Gray labelling), the rest select the symbol by
    /// its constellation label.
    pub fn map_bits(&self, bits: &[bool]) -> Result<TxTriple, ModemError> {
        let expected = self.bits_per_use();
        if bits.len() != expected as usize {
            return Err(ModemError::WrongBitCount {
                expected,
                got: bits.len(),
            });
        }
        let (n_part, rest) = bits.split_at(self.n_bits as usize);
        let (m_part, k_part) = rest.split_at(self.m_bits as usize);
        Ok(TxTriple {
            n: gray_decode(bits_to_nat(n_part)),
            m: gray_decode(bits_to_nat(m_part)),
            k: self.constellation.index_for_bits(k_part)?,
        })
    }

    /// Exact inverse of [`Modem::map_bits`].
    pub fn demap_triple(&self, triple: TxTriple) -> Result<Vec<bool>, ModemError> {
        self.check_range(triple)?;
        let mut bits = Vec::with_capacity(self.bits_per_use() as usize);
        bits.extend(nat_to_bits(gray_encode(triple.n), self.n_bits));
        bits.extend(nat_to_bits(gray_encode(triple.m), self.m_bits));
        bits.extend(nat_to_bits(
            self.constellation.labels[triple.k],
            self.constellation.bits_per_symbol,
        ));
        Ok(bits)
    }

    /// Hamming distance between the bit words of two triples.
    pub fn bit_errors(&self, a: TxTriple, b: TxTriple) -> Result<u32, ModemError> {
        self.check_range(a)?;
        self.check_range(b)?;
        let spatial = (gray_encode(a.n) ^ gray_encode(b.n)).count_ones()
            + (gray_encode(a.m) ^ gray_encode(b.m)).count_ones();
        let symbol = (self.constellation.labels[a.k] ^ self.constellation.labels[b.k]).count_ones();
        Ok(spatial + symbol)
    }

    pub fn num_tx_scatterers(&self) -> usize {
        self.num_tx_scatterers
    }

    pub fn num_rx_scatterers(&self) -> usize {
        self.num_rx_scatterers
    }

    fn check_range(&self, t: TxTriple) -> Result<(), ModemError> {
        for (index, size) in [
            (t.n, self.num_tx_scatterers),
            (t.m, self.num_rx_scatterers),
            (t.k, self.constellation.order()),
        ] {
            if index >= size {
                return Err(ModemError::IndexOutOfRange { index, size });
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ModulationKind::{Psk, Qam};

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn bpsk_is_plus_minus_one() {
        let c = build_constellation(Psk, 2).unwrap();
        assert!((c.points[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((c.points[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn psk_unit_modulus_and_energy() {
        for k in [2usize, 4, 8, 16, 64] {
            let c = build_constellation(Psk, k).unwrap();
            for p in &c.points {
                assert!((p.norm() - 1.0).abs() < 1e-12);
            }
            assert!((c.average_energy() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn qam_energy_extremes() {
        let c = build_constellation(Qam, 16).unwrap();
        assert!((c.average_energy() - 1.0).abs() < 1e-12);
        let min = c
            .points
            .iter()
            .map(|p| p.norm_sqr())
            .fold(f64::MAX, f64::min);
        let max = c.points.iter().map(|p| p.norm_sqr()).fold(0.0, f64::max);
        assert!((min - 0.2).abs() < 1e-12, "min energy {min}");
        assert!((max - 1.8).abs() < 1e-12, "max energy {max}");
    }

    #[test]
    fn four_qam_matches_qpsk_up_to_rotation() {
        let qam = build_constellation(Qam, 4).unwrap();
        let psk = build_constellation(Psk, 4).unwrap();
        // Rotating 4-QAM by 45 degrees yields the QPSK point set.
        let rot = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
        for p in &qam.points {
            let rotated = p * rot;
            let matched = psk.points.iter().any(|q| (q - rotated).norm() < 1e-12);
            assert!(matched, "{rotated} not in QPSK set");
        }
    }

    #[test]
    fn gray_property_psk_ring() {
        for k in [4usize, 8, 16] {
            let c = build_constellation(Psk, k).unwrap();
            for i in 0..k {
                let j = (i + 1) % k;
                let diff = c.labels[i] ^ c.labels[j];
                assert_eq!(diff.count_ones(), 1, "order {k}, ring pair ({i},{j})");
            }
        }
    }

    #[test]
    fn gray_property_qam_grid() {
        for k in [4usize, 16, 64] {
            let c = build_constellation(Qam, k).unwrap();
            let side = (k as f64).sqrt() as usize;
            let idx = |i: usize, q: usize| i * side + q;
            for i in 0..side {
                for q in 0..side {
                    if i + 1 < side {
                        let d = c.labels[idx(i, q)] ^ c.labels[idx(i + 1, q)];
                        assert_eq!(d.count_ones(), 1);
                    }
                    if q + 1 < side {
                        let d = c.labels[idx(i, q)] ^ c.labels[idx(i, q + 1)];
                        assert_eq!(d.count_ones(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_orders_rejected() {
        assert!(build_constellation(Psk, 3).is_err());
        assert!(build_constellation(Qam, 8).is_err());
        assert!(build_constellation(Qam, 32).is_err());
        assert!(build_constellation(Psk, 1).is_err());
    }

    #[test]
    fn map_bits_endpoints() {
        let modem = Modem::new(2, 2, build_constellation(Psk, 2).unwrap()).unwrap();
        assert_eq!(
            modem.map_bits(&bits("000")).unwrap(),
            TxTriple { n: 0, m: 0, k: 0 }
        );
        assert_eq!(
            modem.map_bits(&bits("111")).unwrap(),
            TxTriple { n: 1, m: 1, k: 1 }
        );
        assert!(modem.map_bits(&bits("00")).is_err());
    }

    #[test]
    fn map_demap_roundtrip_exhaustive() {
        // All 2^R words for a 4-bit scenario.
        let modem = Modem::new(2, 2, build_constellation(Psk, 4).unwrap()).unwrap();
        assert_eq!(modem.bits_per_use(), 4);
        for word in 0..16usize {
            let b = nat_to_bits(word, 4);
            let triple = modem.map_bits(&b).unwrap();
            assert_eq!(modem.demap_triple(triple).unwrap(), b);
        }
    }

    #[test]
    fn map_bits_is_bijective() {
        for (n, m, kind, k) in [(2, 4, Psk, 8), (4, 2, Qam, 4), (2, 2, Qam, 16)] {
            let modem = Modem::new(n, m, build_constellation(kind, k).unwrap()).unwrap();
            let r = modem.bits_per_use();
            let mut seen = std::collections::HashSet::new();
            for word in 0..(1usize << r) {
                let triple = modem.map_bits(&nat_to_bits(word, r)).unwrap();
                assert!(seen.insert(triple), "duplicate triple for word {word}");
            }
            assert_eq!(seen.len(), 1 << r);
        }
    }

    #[test]
    fn bit_errors_basics() {
        let modem = Modem::new(2, 2, build_constellation(Psk, 2).unwrap()).unwrap();
        let a = TxTriple { n: 0, m: 0, k: 0 };
        let b = TxTriple { n: 1, m: 1, k: 1 };
        assert_eq!(modem.bit_errors(a, a).unwrap(), 0);
        assert_eq!(modem.bit_errors(a, b).unwrap(), 3);
        assert!(modem.bit_errors(a, TxTriple { n: 2, m: 0, k: 0 }).is_err());
    }

    #[test]
    fn bit_errors_total_over_ordered_pairs() {
        // Exhaustive enumeration for N=M=K=2: every one of the R=3 bit
        // positions differs in exactly half of the 8x8 ordered pairs, so the
        // total Hamming weight over ordered pairs is 3 * 64 / 2 = 96.
        let modem = Modem::new(2, 2, build_constellation(Psk, 2).unwrap()).unwrap();
        let triples: Vec<TxTriple> = (0..8usize)
            .map(|w| modem.map_bits(&nat_to_bits(w, 3)).unwrap())
            .collect();
        let mut total = 0u32;
        for &a in &triples {
            for &b in &triples {
                total += modem.bit_errors(a, b).unwrap();
            }
        }
        assert_eq!(total, 96);
    }

    #[test]
    fn bit_errors_is_a_metric() {
        let modem = Modem::new(2, 2, build_constellation(Psk, 4).unwrap()).unwrap();
        let mut triples = Vec::new();
        for n in 0..2 {
            for m in 0..2 {
                for k in 0..4 {
                    triples.push(TxTriple { n, m, k });
                }
            }
        }
        for &a in &triples {
            for &b in &triples {
                let dab = modem.bit_errors(a, b).unwrap();
                let dba = modem.bit_errors(b, a).unwrap();
                assert_eq!(dab, dba);
                assert_eq!(dab == 0, a == b);
                for &c in &triples {
                    let dac = modem.bit_errors(a, c).unwrap();
                    let dcb = modem.bit_errors(c, b).unwrap();
                    assert!(dab <= dac + dcb);
                }
            }
        }
    }

    #[test]
    fn gray_roundtrip() {
        for n in 0..512 {
            assert_eq!(gray_decode(gray_encode(n)), n);
        }
    }
}
