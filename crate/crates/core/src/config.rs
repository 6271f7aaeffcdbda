//! Scenario configuration: system dimensions, SNR sweep, trial budget.
//!
//! Every other module consumes a validated [`SystemConfig`]. Configurations
//! are read from flat `key=value` files (one key per line, lists
//! comma-separated) and checked by [`SystemConfig::validate`].

use std::fmt;

use thiserror::Error;

/// Symbol-domain modulation family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModulationKind {
    Psk,
    Qam,
}

impl fmt::Display for ModulationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModulationKind::Psk => write!(f, "PSK"),
            ModulationKind::Qam => write!(f, "QAM"),
        }
    }
}

/// Errors raised while parsing or validating a configuration.
#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("{field}: {message}")]
    Invalid {
        field: &'static str,
        message: String,
    },
    #[error("unknown key `{0}`")]
    UnknownKey(String),
    #[error("missing key `{0}`")]
    MissingKey(&'static str),
    #[error("line {line}: expected key=value, got `{text}`")]
    Malformed { line: usize, text: String },
    #[error("{field}: cannot parse `{value}`")]
    Parse { field: &'static str, value: String },
}

/// All scenario parameters for one point-to-point link.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemConfig {
    /// Number of candidate scatterers on the transmitter-to-surface hop (N).
    pub num_tx_scatterers: usize,
    /// Number of candidate scatterers on the surface-to-receiver hop (M).
    pub num_rx_scatterers: usize,
    /// Symbol constellation order (K).
    pub symbol_order: usize,
    /// Number of reflecting elements on the surface (L).
    pub ris_elements: usize,
    /// Transmit ULA size.
    pub tx_antennas: usize,
    /// Receive ULA size.
    pub rx_antennas: usize,
    /// Symbol-domain modulation family.
    pub modulation_kind: ModulationKind,
    /// SNR sweep in dB, strictly increasing.
    pub snr_grid_db: Vec<f64>,
    /// Monte Carlo trials per SNR point.
    pub trials_per_snr: u64,
    /// Master seed for the per-trial substreams.
    pub rng_seed: u64,
    /// Average transmit power; fixed to 1, the sweep varies the noise level.
    pub transmit_power: f64,
}

impl Default for SystemConfig {
    fn default() -> Self {
        SystemConfig {
            num_tx_scatterers: 2,
            num_rx_scatterers: 2,
            symbol_order: 2,
            ris_elements: 100,
            tx_antennas: 32,
            rx_antennas: 32,
            modulation_kind: ModulationKind::Psk,
            snr_grid_db: vec![-10.0, -5.0, 0.0, 5.0, 10.0],
            trials_per_snr: 100_000,
            rng_seed: 0,
            transmit_power: 1.0,
        }
    }
}

fn is_pow2(v: usize) -> bool {
    v.is_power_of_two()
}

impl SystemConfig {
    /// Check every invariant and return the configuration unchanged.
    ///
    /// The first violated invariant is reported with its field name.
    pub fn validate(self) -> Result<SystemConfig, ConfigError> {
        fn bad(field: &'static str, message: impl Into<String>) -> ConfigError {
            ConfigError::Invalid {
                field,
                message: message.into(),
            }
        }
        if self.num_tx_scatterers < 2 || !is_pow2(self.num_tx_scatterers) {
            return Err(bad(
                "num_tx_scatterers",
                format!("{} is not a power of two >= 2", self.num_tx_scatterers),
            ));
        }
        if self.num_rx_scatterers < 2 || !is_pow2(self.num_rx_scatterers) {
            return Err(bad(
                "num_rx_scatterers",
                format!("{} is not a power of two >= 2", self.num_rx_scatterers),
            ));
        }
        if self.symbol_order < 2 || !is_pow2(self.symbol_order) {
            return Err(bad(
                "symbol_order",
                format!("{} is not a power of two >= 2", self.symbol_order),
            ));
        }
        if self.modulation_kind == ModulationKind::Qam
            && !self.symbol_order.trailing_zeros().is_multiple_of(2)
        {
            return Err(bad(
                "symbol_order",
                format!(
                    "square QAM requires an even power of two, got {}",
                    self.symbol_order
                ),
            ));
        }
        if self.ris_elements == 0 {
            return Err(bad("ris_elements", "must be positive"));
        }
        if self.tx_antennas == 0 {
            return Err(bad("tx_antennas", "must be positive"));
        }
        if self.rx_antennas == 0 {
            return Err(bad("rx_antennas", "must be positive"));
        }
        if self.snr_grid_db.is_empty() {
            return Err(bad("snr_grid_db", "must contain at least one point"));
        }
        if !self.snr_grid_db.iter().all(|v| v.is_finite()) {
            return Err(bad("snr_grid_db", "entries must be finite"));
        }
        if self.snr_grid_db.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("snr_grid_db", "must be strictly increasing"));
        }
        if self.trials_per_snr == 0 {
            return Err(bad("trials_per_snr", "must be positive"));
        }
        if self.transmit_power != 1.0 {
            return Err(bad(
                "transmit_power",
                format!(
                    "fixed to 1 (the SNR sweep varies the noise level), got {}",
                    self.transmit_power
                ),
            ));
        }
        Ok(self)
    }

    /// Bits per channel use carried by this configuration.
    pub fn spectral_efficiency_bits(&self) -> Result<u32, ConfigError> {
        spectral_efficiency(
            self.num_tx_scatterers,
            self.num_rx_scatterers,
            self.symbol_order,
        )
    }

    /// Linear noise level for a given SNR point, with the transmit power at 1.
    pub fn noise_level(&self, snr_db: f64) -> f64 {
        self.transmit_power / 10f64.powf(snr_db / 10.0)
    }

    /// Parse a flat `key=value` configuration.
    ///
    /// Blank lines and lines starting with `#` are skipped; unknown keys are
    /// an error. `tx_antennas`, `rx_antennas` and `transmit_power` may be
    /// omitted and take their defaults (32, 32 and 1).
    pub fn from_key_values(text: &str) -> Result<SystemConfig, ConfigError> {
        let mut cfg = SystemConfig::default();
        let mut seen = std::collections::HashSet::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or(ConfigError::Malformed {
                line: idx + 1,
                text: line.to_string(),
            })?;
            let key = key.trim();
            let value = value.trim();
            match key {
                "num_tx_scatterers" => cfg.num_tx_scatterers = parse("num_tx_scatterers", value)?,
                "num_rx_scatterers" => cfg.num_rx_scatterers = parse("num_rx_scatterers", value)?,
                "symbol_order" => cfg.symbol_order = parse("symbol_order", value)?,
                "ris_elements" => cfg.ris_elements = parse("ris_elements", value)?,
                "tx_antennas" => cfg.tx_antennas = parse("tx_antennas", value)?,
                "rx_antennas" => cfg.rx_antennas = parse("rx_antennas", value)?,
                "modulation_kind" => {
                    cfg.modulation_kind = match value.to_ascii_uppercase().as_str() {
                        "PSK" => ModulationKind::Psk,
                        "QAM" => ModulationKind::Qam,
                        _ => {
                            return Err(ConfigError::Parse {
                                field: "modulation_kind",
                                value: value.to_string(),
                            })
                        }
                    }
                }
                "snr_grid_db" => {
                    cfg.snr_grid_db = value
                        .split(',')
                        .map(|v| {
                            v.trim().parse::<f64>().map_err(|_| ConfigError::Parse {
                                field: "snr_grid_db",
                                value: v.trim().to_string(),
                            })
                        })
                        .collect::<Result<_, _>>()?;
                }
                "trials_per_snr" => cfg.trials_per_snr = parse("trials_per_snr", value)?,
                "rng_seed" => cfg.rng_seed = parse("rng_seed", value)?,
                "transmit_power" => {
                    cfg.transmit_power = value.parse::<f64>().map_err(|_| ConfigError::Parse {
                        field: "transmit_power",
                        value: value.to_string(),
                    })?;
                }
                other => return Err(ConfigError::UnknownKey(other.to_string())),
            }
            seen.insert(key.to_string());
        }

        const REQUIRED: [&str; 8] = [
            "num_tx_scatterers",
            "num_rx_scatterers",
            "symbol_order",
            "ris_elements",
            "modulation_kind",
            "snr_grid_db",
            "trials_per_snr",
            "rng_seed",
        ];
        for required in REQUIRED {
            if !seen.contains(required) {
                return Err(ConfigError::MissingKey(required));
            }
        }

        cfg.validate()
    }
}

fn parse<T: std::str::FromStr>(field: &'static str, value: &str) -> Result<T, ConfigError> {
    value.parse::<T>().map_err(|_| ConfigError::Parse {
        field,
        value: value.to_string(),
    })
}

/// Bits per channel use: `log2(N) + log2(M) + log2(K)`.
///
/// All arguments must be powers of two at least 2.
pub fn spectral_efficiency(n: usize, m: usize, k: usize) -> Result<u32, ConfigError> {
    for (name, v) in [
        ("num_tx_scatterers", n),
        ("num_rx_scatterers", m),
        ("symbol_order", k),
    ] {
        if v < 2 || !is_pow2(v) {
            return Err(ConfigError::Invalid {
                field: name,
                message: format!("{v} is not a power of two >= 2"),
            });
        }
    }
    Ok(n.trailing_zeros() + m.trailing_zeros() + k.trailing_zeros())
}
