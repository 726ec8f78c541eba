//! Machine-readable artifacts: `report.json` plus per-series CSVs.
//!
//! All floating-point values are printed with 17 significant digits
//! (`{:.16e}`) in the CSVs; the JSON payload uses shortest-round-trip
//! formatting, which is likewise lossless. Reports carry no timestamps, so
//! reruns with identical parameters are byte-identical.

use crate::harness::ExperimentReport;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

/// 17-significant-digit scientific formatting.
pub fn fmt_g17(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else {
        format!("{x:.16e}")
    }
}

pub fn write_report(report: &ExperimentReport, dir: &Path) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let file = fs::File::create(dir.join("report.json"))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, report)?;
    w.write_all(b"\n")?;
    w.flush()?;

    for series in &report.series {
        write_series_csv(series, dir)?;
        if !series.states.is_empty() {
            write_state_csv(series, dir)?;
            write_density_csv(series, dir)?;
        }
    }
    if let Some(dist) = &report.distance {
        let file = fs::File::create(dir.join("distance.csv"))?;
        let mut w = BufWriter::new(file);
        writeln!(w, "t,l2,l3,l4,linf,bound")?;
        for i in 0..dist.times.len() {
            writeln!(
                w,
                "{},{},{},{},{},{}",
                fmt_g17(dist.times[i]),
                fmt_g17(dist.l2[i]),
                fmt_g17(dist.l3[i]),
                fmt_g17(dist.l4[i]),
                fmt_g17(dist.linf[i]),
                fmt_g17(dist.theory_bound[i]),
            )?;
        }
    }
    if !report.table.is_empty() {
        write_table_csv(report, dir)?;
    }
    Ok(())
}

/// Per-sample summary: `t,norm_l2,norm_linf,E,newton_iters`. `E` is the
/// series' first conserved functional (nan when none is monitored).
fn write_series_csv(series: &crate::harness::NamedSeries, dir: &Path) -> std::io::Result<()> {
    let ts = &series.series;
    let file = fs::File::create(dir.join(format!("{}_series.csv", series.name)))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "t,norm_l2,norm_linf,E,newton_iters")?;
    let l2 = ts.norm_series(alnls_core::lattice::NormKind::l2());
    let l2w = ts.norm_series(alnls_core::lattice::NormKind::l2_weighted());
    let linf = ts.norm_series(alnls_core::lattice::NormKind::sup());
    for i in 0..ts.times.len() {
        let n2 = l2.or(l2w).map(|s| s[i]).unwrap_or(f64::NAN);
        let ni = linf.map(|s| s[i]).unwrap_or(f64::NAN);
        let e = ts.conserved.first().map(|s| s[i]).unwrap_or(f64::NAN);
        writeln!(
            w,
            "{},{},{},{},{}",
            fmt_g17(ts.times[i]),
            fmt_g17(n2),
            fmt_g17(ni),
            fmt_g17(e),
            ts.diagnostics[i].newton_iterations,
        )?;
    }
    Ok(())
}

/// Full-state dump: `t,re_0..re_{N-1},im_0..im_{N-1}` per sampled state.
fn write_state_csv(series: &crate::harness::NamedSeries, dir: &Path) -> std::io::Result<()> {
    let n = series.states.first().map(|(_, s)| s.len()).unwrap_or(0);
    let file = fs::File::create(dir.join(format!("{}_state.csv", series.name)))?;
    let mut w = BufWriter::new(file);
    let mut header = String::from("t");
    for i in 0..n {
        header.push_str(&format!(",re_{i}"));
    }
    for i in 0..n {
        header.push_str(&format!(",im_{i}"));
    }
    writeln!(w, "{header}")?;
    for (t, state) in &series.states {
        let mut line = fmt_g17(*t);
        for z in state {
            line.push(',');
            line.push_str(&fmt_g17(z.re));
        }
        for z in state {
            line.push(',');
            line.push_str(&fmt_g17(z.im));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Density grid `|u_n|²` for heat-map rendering by external tools.
fn write_density_csv(series: &crate::harness::NamedSeries, dir: &Path) -> std::io::Result<()> {
    let n = series.states.first().map(|(_, s)| s.len()).unwrap_or(0);
    let file = fs::File::create(dir.join(format!("{}_density.csv", series.name)))?;
    let mut w = BufWriter::new(file);
    let mut header = String::from("t");
    for i in 0..n {
        header.push_str(&format!(",d_{i}"));
    }
    writeln!(w, "{header}")?;
    for (t, state) in &series.states {
        let mut line = fmt_g17(*t);
        for z in state {
            line.push(',');
            line.push_str(&fmt_g17(z.norm_sqr()));
        }
        writeln!(w, "{line}")?;
    }
    Ok(())
}

/// Parameter-scan table with one row per point; columns are the union of
/// the parameter and value keys, sorted.
fn write_table_csv(report: &ExperimentReport, dir: &Path) -> std::io::Result<()> {
    let mut param_keys: Vec<String> = vec![];
    let mut value_keys: Vec<String> = vec![];
    for row in &report.table {
        for k in row.params.keys() {
            if !param_keys.contains(k) {
                param_keys.push(k.clone());
            }
        }
        for k in row.values.keys() {
            if !value_keys.contains(k) {
                value_keys.push(k.clone());
            }
        }
    }
    param_keys.sort();
    value_keys.sort();

    let file = fs::File::create(dir.join("table.csv"))?;
    let mut w = BufWriter::new(file);
    let header: Vec<&str> = param_keys
        .iter()
        .map(|s| s.as_str())
        .chain(value_keys.iter().map(|s| s.as_str()))
        .collect();
    writeln!(w, "{}", header.join(","))?;
    for row in &report.table {
        let cells: Vec<String> = param_keys
            .iter()
            .map(|k| row.params.get(k).copied().map(fmt_g17).unwrap_or_else(|| "nan".into()))
            .chain(
                value_keys
                    .iter()
                    .map(|k| row.values.get(k).copied().map(fmt_g17).unwrap_or_else(|| "nan".into())),
            )
            .collect();
        writeln!(w, "{}", cells.join(","))?;
    }
    Ok(())
}

/// One-line run summary for standard output.
pub fn summary_line(report: &ExperimentReport, dir: &Path) -> String {
    let mut line = format!(
        "experiment={} status=ok output={}",
        report.name,
        dir.display()
    );
    for key in ["blowup_t", "blowup_t_gal", "blowup_t_gdnls"] {
        if let Some(v) = report.derived.get(key) {
            line.push_str(&format!(" {key}={}", fmt_g17(*v)));
        }
    }
    for (k, v) in &report.derived {
        if k.starts_with("blowup_t[") {
            line.push_str(&format!(" {k}={}", fmt_g17(*v)));
        }
    }
    if !report.flags.is_empty() {
        line.push_str(&format!(" flags={}", report.flags.join(";")));
    }
    line
}
