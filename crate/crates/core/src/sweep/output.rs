//! CSV and gnuplot script emission.

use std::fs;
use std::io::Write;
use std::path::Path;

use super::run::SweepOutput;
use crate::error::{Error, Result};

/// Shortest decimal that parses back to the same `f64`.
pub fn format_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn csv_header(out: &SweepOutput) -> Vec<String> {
    let mut h = vec!["z".to_string(), "gamma_z".to_string()];
    h.extend(out.columns.iter().map(|c| c.name()));
    if out.oracle {
        h.push("norm_drift".into());
        h.push("truncation_deficit".into());
    }
    h
}

pub fn write_csv<W: Write>(out: &SweepOutput, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{}", csv_header(out).join(","))?;
    for row in &out.rows {
        let mut fields = vec![format_f64(row.z), format_f64(row.gamma_z)];
        fields.extend(row.values.iter().map(|&v| format_f64(v)));
        if out.oracle {
            fields.push(format_f64(row.norm_drift.unwrap_or(0.0)));
            fields.push(format_f64(row.truncation_deficit.unwrap_or(0.0)));
        }
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

pub fn csv_string(out: &SweepOutput) -> String {
    let mut buf = Vec::new();
    write_csv(out, &mut buf).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is ASCII")
}

fn non_empty(out: &SweepOutput) -> Result<()> {
    if out.rows.is_empty() {
        return Err(Error::InvalidParams("sweep produced no rows".into()));
    }
    Ok(())
}

pub fn emit_csv(out: &SweepOutput, path: &Path) -> Result<()> {
    non_empty(out)?;
    fs::write(path, csv_string(out))?;
    Ok(())
}

/// Gnuplot script plotting every witness column against `gamma_z` with a
/// zero baseline.
pub fn plot_script(out: &SweepOutput, csv_path: &str) -> String {
    let mut s = String::new();
    s.push_str("set datafile separator \",\"\n");
    s.push_str("set key autotitle columnhead outside right\n");
    s.push_str("set xlabel \"Gamma z\"\n");
    s.push_str("set ylabel \"witness\"\n");
    s.push_str("set grid\n");
    let esc = csv_path.replace('\\', "\\\\").replace('"', "\\\"");
    let mut terms = Vec::new();
    for (i, c) in out.columns.iter().enumerate() {
        let style = match c.engine {
            super::Engine::Analytic => "lines",
            super::Engine::Oracle => "points pt 6",
        };
        terms.push(format!("\"{esc}\" using 2:{} with {style}", i + 3));
    }
    terms.push("0 with lines lc rgb \"black\" dt 2 notitle".into());
    s.push_str("plot ");
    s.push_str(&terms.join(", \\\n     "));
    s.push('\n');
    s
}

pub fn emit_plotscript(out: &SweepOutput, csv_path: &str, path: &Path) -> Result<()> {
    non_empty(out)?;
    fs::write(path, plot_script(out, csv_path))?;
    Ok(())
}
