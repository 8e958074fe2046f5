//! CSV and JSON serialization of experiment reports.
//!
//! Reals are written with 17 significant digits so they parse back to the
//! same `f64`. CSV uses LF line endings and leaves absent values empty.

use std::io::Write;

use serde_json::json;

use crate::error::Result;
use crate::experiment::{DiophReport, VerifyReport, WalkReport};

pub const VERIFY_HEADER: [&str; 8] = [
    "k",
    "d_exact",
    "su_lower",
    "et_upper",
    "et_M",
    "paper_M",
    "c1_envelope",
    "c2_envelope",
];

pub const WALK_HEADER: [&str; 2] = ["position", "weight"];

pub const DIOPH_HEADER: [&str; 8] = [
    "beta_hat",
    "beta_argmin",
    "n_max",
    "b_hat",
    "q_max",
    "per_q_cap",
    "dm_threshold",
    "dm_verdict",
];

/// `x` with 17 significant digits.
pub fn fmt_real(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_real).unwrap_or_default()
}

fn csv_writer<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

pub fn write_verify_csv<W: Write>(report: &VerifyReport, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(VERIFY_HEADER)?;
    for r in &report.rows {
        w.write_record([
            r.k.to_string(),
            fmt_opt(r.d_exact),
            fmt_real(r.su_lower),
            fmt_real(r.et_upper),
            r.et_m.to_string(),
            r.analytic_m.map(|m| m.to_string()).unwrap_or_default(),
            fmt_opt(r.c1_envelope),
            fmt_opt(r.c2_envelope),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_verify_json<W: Write>(report: &VerifyReport, mut out: W) -> Result<()> {
    let a = &report.approximation;
    let doc = json!({
        "meta": {
            "alpha_spec": report.alpha.spec(),
            "alpha": report.alpha.entries(),
            "d": report.alpha.dim(),
            "mode": report.mode,
            "seed": report.seed,
            "n_samples": report.n_samples,
            "beta_hat": a.beta_hat,
            "beta_argmin": a.beta_argmin,
            "n_max": a.n_max,
            "b_hat": a.b_hat,
            "q_max": a.q_max,
            "q_max_requested": a.q_max_requested,
            "per_q_cap": a.per_q_cap,
            "c1": report.c1,
            "c2": report.c2,
            "m_cap": report.m_cap,
            "su_terms": report.su_terms,
            "support_cap": report.support_cap,
            "slope": report.slope,
            "slope_window": [report.slope_window.0, report.slope_window.1],
            "dm_verdict": report.dm_verdict,
            "montecarlo_error_budget": report.montecarlo_error_budget,
            "caveats": report.caveats,
        },
        "rows": report.rows,
    });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_walk_csv<W: Write>(report: &WalkReport, out: W) -> Result<()> {
    let mut w = csv_writer(out);
    w.write_record(WALK_HEADER)?;
    for a in report.measure.atoms() {
        w.write_record([fmt_real(a.position), fmt_real(a.weight)])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_walk_json<W: Write>(report: &WalkReport, mut out: W) -> Result<()> {
    let doc = json!({
        "meta": {
            "alpha_spec": report.alpha.spec(),
            "alpha": report.alpha.entries(),
            "d": report.alpha.dim(),
            "k": report.k,
            "mode": report.mode,
            "seed": report.seed,
            "n_samples": report.n_samples,
            "discrepancy": report.discrepancy,
            "atoms": report.measure.len(),
        },
        "rows": report.measure.atoms(),
    });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    Ok(())
}

pub fn write_dioph_csv<W: Write>(report: &DiophReport, out: W) -> Result<()> {
    let c = &report.constants;
    let mut w = csv_writer(out);
    w.write_record(DIOPH_HEADER)?;
    w.write_record([
        fmt_real(c.beta_hat),
        c.beta_argmin.to_string(),
        c.n_max.to_string(),
        fmt_real(c.b_hat),
        c.q_max.to_string(),
        c.per_q_cap.to_string(),
        fmt_opt(report.dm_threshold),
        report
            .dm_verdict
            .map(|v| match v {
                crate::diophantine::DmVerdict::Ok => "OK".to_string(),
                crate::diophantine::DmVerdict::ExceedsDm => "EXCEEDS_DM".to_string(),
            })
            .unwrap_or_default(),
    ])?;
    w.flush()?;
    Ok(())
}

pub fn write_dioph_json<W: Write>(report: &DiophReport, mut out: W) -> Result<()> {
    let doc = json!({
        "meta": {
            "alpha_spec": report.alpha.spec(),
            "alpha": report.alpha.entries(),
            "d": report.alpha.dim(),
            "caveats": report.caveats,
        },
        "constants": report.constants,
        "dm_threshold": report.dm_threshold,
        "dm_verdict": report.dm_verdict,
    });
    serde_json::to_writer_pretty(&mut out, &doc)?;
    writeln!(out)?;
    Ok(())
}
