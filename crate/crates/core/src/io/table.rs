use std::io::Write;
use std::path::Path;

use super::{create, finish, fmt_f64};
use crate::error::{Error, Result};
use crate::estimation::DensityTable;
use crate::harness::SweepRow;

pub const SUMMARY_HEADER: &str =
    "k,lambda,repetition,seed,entropy,proximity,hausdorff,alpha,phase,status";

/// `unit_index,x,y[,z],p_hat,rho_hat,log10_p,log10_rho`; coordinates beyond
/// the third are named `c3, c4, ...`.
pub fn density_table_header(dim: usize) -> String {
    let mut cols = vec!["unit_index".to_string()];
    for d in 0..dim {
        cols.push(match d {
            0 => "x".into(),
            1 => "y".into(),
            2 => "z".into(),
            _ => format!("c{d}"),
        });
    }
    cols.extend(["p_hat", "rho_hat", "log10_p", "log10_rho"].map(String::from));
    cols.join(",")
}

pub fn write_density_table(table: &DensityTable, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    write_density_table_to(&mut w, table).map_err(|e| Error::io(path, e))?;
    finish(path, w)
}

pub fn write_density_table_to(w: &mut impl Write, table: &DensityTable) -> std::io::Result<()> {
    writeln!(w, "{}", density_table_header(table.dim))?;
    for row in &table.rows {
        let mut fields = vec![row.unit.to_string()];
        fields.extend(row.position.iter().map(|&c| fmt_f64(c)));
        fields.extend([row.p_hat, row.rho_hat, row.log10_p(), row.log10_rho()].map(fmt_f64));
        writeln!(w, "{}", fields.join(","))?;
    }
    Ok(())
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

pub fn write_summary(rows: &[SweepRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    write_summary_to(&mut w, rows).map_err(|e| Error::io(path, e))?;
    finish(path, w)
}

pub fn write_summary_to(w: &mut impl Write, rows: &[SweepRow]) -> std::io::Result<()> {
    writeln!(w, "{SUMMARY_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            r.k,
            r.lambda,
            r.repetition,
            r.seed,
            opt(r.entropy),
            opt(r.proximity),
            opt(r.hausdorff),
            opt(r.alpha),
            r.phase.map(|p| p.as_str()).unwrap_or(""),
            r.status
        )?;
    }
    Ok(())
}

pub fn read_summary(path: impl AsRef<Path>) -> Result<Vec<SweepRow>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == SUMMARY_HEADER => {}
        _ => return Err(err(1, format!("expected header {SUMMARY_HEADER:?}"))),
    }
    let mut rows = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 10 {
            return Err(err(
                line_no,
                format!("expected 10 fields, found {}", f.len()),
            ));
        }
        let num = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                s.parse()
                    .map(Some)
                    .map_err(|_| err(line_no, format!("invalid number {s:?}")))
            }
        };
        let int = |s: &str| -> Result<u64> {
            s.parse()
                .map_err(|_| err(line_no, format!("invalid integer {s:?}")))
        };
        rows.push(SweepRow {
            k: int(f[0])? as usize,
            lambda: num(f[1])?.ok_or_else(|| err(line_no, "missing lambda".into()))?,
            repetition: int(f[2])? as usize,
            seed: int(f[3])?,
            entropy: num(f[4])?,
            proximity: num(f[5])?,
            hausdorff: num(f[6])?,
            alpha: num(f[7])?,
            phase: if f[8].is_empty() {
                None
            } else {
                Some(
                    f[8].parse()
                        .map_err(|_| err(line_no, format!("invalid phase {:?}", f[8])))?,
                )
            },
            status: f[9].to_string(),
        });
    }
    Ok(rows)
}
