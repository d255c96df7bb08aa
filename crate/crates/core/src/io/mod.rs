//! File formats: ASCII XYZ and PLY point clouds, density-table and sweep
//! summary CSVs, and JSON run reports.
//!
//! Every writer is deterministic byte-for-byte: floats are printed in
//! scientific notation with 17 significant digits, which round-trips exactly.

mod cloud;
mod report;
mod table;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

pub use cloud::{parse_cloud, read_cloud, write_cloud, write_cloud_to, CloudFormat};
pub use report::{read_json, read_report, write_json, write_report};
pub use table::{
    density_table_header, read_summary, write_density_table, write_density_table_to, write_summary,
    write_summary_to, SUMMARY_HEADER,
};

use crate::error::{Error, Result};

pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::io(path, e))
}

pub(crate) fn finish(path: &Path, mut w: impl Write) -> Result<()> {
    w.flush().map_err(|e| Error::io(path, e))
}
