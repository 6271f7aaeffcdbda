//! Output row shapes and their CSV/JSON rendering.
//!
//! Numbers are rendered with `.` decimals and full round-trip precision;
//! probabilities in scientific notation. Empty CSV cells stand for values a
//! row does not carry (JSON uses `null`).

use std::fmt::Write as _;

use serde::Serialize;

/// One output row of the curve commands.
#[derive(Debug, Clone, Serialize)]
pub struct CurveRecord {
    pub scenario: String,
    pub system: String,
    pub detector: String,
    pub snr_db: f64,
    pub abep_sim: Option<f64>,
    pub errors: Option<u64>,
    pub trials: Option<u64>,
    pub abep_bound_integral: Option<f64>,
    pub abep_bound_series: Option<f64>,
    pub abep_asymptotic: Option<f64>,
    /// Simulated rows: fewer than 100 bit errors. Analytical rows: the
    /// series evaluation hit its divergence guard and was left empty.
    pub low_confidence: bool,
}

fn sci(v: f64) -> String {
    format!("{v:e}")
}

fn opt_sci(v: Option<f64>) -> String {
    v.map(sci).unwrap_or_default()
}

fn opt_int(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl CurveRecord {
    pub const CSV_HEADER: &'static str = "scenario,system,detector,snr_db,abep_sim,errors,trials,abep_bound_integral,abep_bound_series,abep_asymptotic,low_confidence";

    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.scenario,
            self.system,
            self.detector,
            self.snr_db,
            opt_sci(self.abep_sim),
            opt_int(self.errors),
            opt_int(self.trials),
            opt_sci(self.abep_bound_integral),
            opt_sci(self.abep_bound_series),
            opt_sci(self.abep_asymptotic),
            self.low_confidence,
        )
    }
}

/// One row of the crossover report.
#[derive(Debug, Clone, Serialize)]
pub struct CrossoverRow {
    pub rho_db: f64,
    pub eta_bar: f64,
    pub sym_energy: f64,
    pub min_l_correct: Option<usize>,
    pub lhs_correct_at_min: Option<f64>,
    pub min_l_wrong: Option<usize>,
    pub lhs_wrong_at_min: Option<f64>,
    pub scan_limit: usize,
}

pub fn render_crossover(rows: &[CrossoverRow], json: bool) -> String {
    if json {
        return serde_json::to_string_pretty(rows).expect("serializable") + "\n";
    }
    let mut out = String::from(
        "rho_db,eta_bar,sym_energy,min_l_correct,lhs_correct_at_min,min_l_wrong,lhs_wrong_at_min,scan_limit\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.rho_db,
            r.eta_bar,
            r.sym_energy,
            r.min_l_correct
                .map(|l| l.to_string())
                .unwrap_or_else(|| "none".to_string()),
            opt_sci(r.lhs_correct_at_min),
            r.min_l_wrong
                .map(|l| l.to_string())
                .unwrap_or_else(|| "none".to_string()),
            opt_sci(r.lhs_wrong_at_min),
            r.scan_limit,
        );
    }
    out
}

/// One row of the complexity table.
#[derive(Debug, Clone, Serialize)]
pub struct ComplexityRow {
    pub m: usize,
    pub n: usize,
    pub k: usize,
    pub suboptimal_mults: u64,
    pub suboptimal_adds: u64,
    pub optimal_mults: u64,
    pub optimal_adds: u64,
    pub mult_ratio: f64,
}

pub fn render_complexity(rows: &[ComplexityRow], json: bool) -> String {
    if json {
        return serde_json::to_string_pretty(rows).expect("serializable") + "\n";
    }
    let mut out = String::from(
        "m,n,k,suboptimal_mults,suboptimal_adds,optimal_mults,optimal_adds,mult_ratio\n",
    );
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.m,
            r.n,
            r.k,
            r.suboptimal_mults,
            r.suboptimal_adds,
            r.optimal_mults,
            r.optimal_adds,
            r.mult_ratio,
        );
    }
    out
}
