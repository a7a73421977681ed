//! Deterministic rendering of run outputs: CSV tables and run metadata.
//!
//! Output contract: LF line endings, `.` as the decimal separator, floats
//! printed with 17 significant digits (`{:.16e}`) so every value round-trips
//! to the identical bit pattern, and `nan`/`inf`/`-inf` spelled lowercase.
//! Rendering never reorders rows, so runs that produce equal records produce
//! byte-identical files — the reproducibility contract leans on this.

use std::fmt::Write as _;

use ndarray::Array2;
use serde::Serialize;

use crate::bounds::{BoundSet, SizeConditions};
use crate::error::Result;
use crate::experiments::{AggregateRecord, TrialRecord, UniformConvergenceResult};
use crate::sampling::{LatentSample, PRNG_ALGORITHM};
use crate::spectra::SpectralSummary;

pub const TRIALS_HEADER: &str = "n,trial,seed,max_deg_gap,max_mu_gap,mu2_gap,d_bar_max,\
                                 diff_norm_adj,deg_assumption,chernoff_violations,weyl_ok";
pub const AGGREGATE_HEADER: &str = "n,freq_a,freq_b,freq_c,freq_e,wilson_a_hi,wilson_b_hi,\
                                    wilson_c_hi,wilson_e_hi,trials,deg_assumption_trials,\
                                    eigen_failures,median_max_mu_gap,deg_lb_success_freq,\
                                    deg_lb_threshold,prob_lb_lemma2";
pub const BOUNDS_HEADER: &str = "n,nu,gamma,phi,b_n,deg_threshold,gamma_old,phi_old";
pub const SPECTRUM_HEADER: &str = "i,deg_sorted,deg_bar_sorted,mu,mu_bar";
pub const UNIFORM_HEADER: &str = "n,sup_error,bound";
pub const SIZE_CONDITIONS_HEADER: &str =
    "n,nu,b_n,min_cell_width,cond_i,lhs_ii,max_degree,cond_ii,nu_in_guarantee_range";

/// Formats one float for machine-readable output: 17 significant digits,
/// which is always enough to reproduce the exact bit pattern on parse.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        return "nan".to_owned();
    }
    if v.is_infinite() {
        return if v > 0.0 {
            "inf".to_owned()
        } else {
            "-inf".to_owned()
        };
    }
    format!("{v:.16e}")
}

pub fn render_trials_csv(records: &[TrialRecord]) -> String {
    let mut out = String::with_capacity(64 + records.len() * 160);
    out.push_str(TRIALS_HEADER);
    out.push('\n');
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.trial,
            r.seed,
            fmt_float(r.max_deg_gap),
            fmt_float(r.max_mu_gap),
            fmt_float(r.mu2_gap),
            fmt_float(r.d_bar_max),
            fmt_float(r.diff_norm_adj),
            r.deg_assumption,
            r.chernoff_violations,
            r.weyl_ok,
        );
    }
    out
}

pub fn render_aggregate_csv(rows: &[AggregateRecord]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * 280);
    out.push_str(AGGREGATE_HEADER);
    out.push('\n');
    for a in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            a.n,
            fmt_float(a.freq_a),
            fmt_float(a.freq_b),
            fmt_float(a.freq_c),
            fmt_float(a.freq_e),
            fmt_float(a.wilson_a_hi),
            fmt_float(a.wilson_b_hi),
            fmt_float(a.wilson_c_hi),
            fmt_float(a.wilson_e_hi),
            a.trials,
            a.deg_assumption_trials,
            a.eigen_failures,
            fmt_float(a.median_max_mu_gap),
            fmt_float(a.deg_lb_success_freq),
            fmt_float(a.deg_lb_threshold),
            fmt_float(a.prob_lb_lemma2),
        );
    }
    out
}

/// Absent comparison bounds (no kernel infimum supplied) render as `nan`.
pub fn render_bounds_csv(rows: &[BoundSet<f64>]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * 140);
    out.push_str(BOUNDS_HEADER);
    out.push('\n');
    for b in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            b.n,
            fmt_float(b.nu),
            fmt_float(b.gamma),
            fmt_float(b.phi),
            fmt_float(b.b_n),
            fmt_float(b.deg_threshold),
            fmt_float(b.gamma_old.unwrap_or(f64::NAN)),
            fmt_float(b.phi_old.unwrap_or(f64::NAN)),
        );
    }
    out
}

/// Per-index table of sorted degrees and normalized spectra for one pair.
pub fn render_spectrum_csv(s: &SpectralSummary<f64>) -> String {
    let n = s.mu.len();
    let mut out = String::with_capacity(64 + n * 100);
    out.push_str(SPECTRUM_HEADER);
    out.push('\n');
    for i in 0..n {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            i,
            fmt_float(s.deg_sorted[i]),
            fmt_float(s.deg_bar_sorted[i]),
            fmt_float(s.mu[i]),
            fmt_float(s.mu_bar[i]),
        );
    }
    out
}

pub fn render_uniform_csv(result: &UniformConvergenceResult) -> String {
    let mut out = String::with_capacity(64 + result.points.len() * 60);
    out.push_str(UNIFORM_HEADER);
    out.push('\n');
    for p in &result.points {
        let _ = writeln!(
            out,
            "{},{},{}",
            p.n,
            fmt_float(p.sup_error),
            fmt_float(p.bound)
        );
    }
    out
}

pub fn render_size_conditions_csv(rows: &[(usize, f64, SizeConditions<f64>)]) -> String {
    let mut out = String::with_capacity(64 + rows.len() * 140);
    out.push_str(SIZE_CONDITIONS_HEADER);
    out.push('\n');
    for (n, nu, c) in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            n,
            fmt_float(*nu),
            fmt_float(c.b_n),
            fmt_float(c.min_cell_width),
            c.cond_i,
            fmt_float(c.lhs_ii),
            fmt_float(c.max_degree),
            c.cond_ii,
            c.nu_in_guarantee_range,
        );
    }
    out
}

/// Latent positions, one row per node.
pub fn render_latent_csv(latent: &LatentSample<f64>) -> String {
    let mut out = String::with_capacity(16 + latent.values.len() * 30);
    out.push_str("i,x\n");
    for (i, x) in latent.values.iter().enumerate() {
        let _ = writeln!(out, "{},{}", i, fmt_float(*x));
    }
    out
}

/// Raw numeric matrix, one CSV row per matrix row, no header.
pub fn render_matrix_csv(m: &Array2<f64>) -> String {
    let (rows, cols) = m.dim();
    let mut out = String::with_capacity(rows * cols * 25);
    for i in 0..rows {
        for j in 0..cols {
            if j > 0 {
                out.push(',');
            }
            out.push_str(&fmt_float(m[[i, j]]));
        }
        out.push('\n');
    }
    out
}

/// Provenance sidecar written next to every output set. Field order is part
/// of the format: subcommand, config echo, PRNG identifier, crate version.
#[derive(Debug, Serialize)]
struct RunMeta<'a> {
    subcommand: &'a str,
    config: &'a serde_json::Value,
    prng: &'a str,
    version: &'a str,
}

pub fn render_run_meta(subcommand: &str, config: &serde_json::Value) -> Result<String> {
    let meta = RunMeta {
        subcommand,
        config,
        prng: PRNG_ALGORITHM,
        version: env!("CARGO_PKG_VERSION"),
    };
    let mut text = serde_json::to_string_pretty(&meta)?;
    text.push('\n');
    Ok(text)
}
