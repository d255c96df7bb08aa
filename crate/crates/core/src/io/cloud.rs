use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{create, finish, fmt_f64};
use crate::cloud::PointCloud;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CloudFormat {
    Xyz,
    Ply,
}

impl CloudFormat {
    /// Guesses the format from a file extension, defaulting to XYZ.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("ply") => CloudFormat::Ply,
            _ => CloudFormat::Xyz,
        }
    }
}

impl FromStr for CloudFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "xyz" => Ok(CloudFormat::Xyz),
            "ply" => Ok(CloudFormat::Ply),
            other => Err(Error::invalid(format!("unknown cloud format {other:?}"))),
        }
    }
}

/// Reads an ASCII XYZ or PLY file; the format is detected from the content.
pub fn read_cloud(path: impl AsRef<Path>, expected_dim: Option<usize>) -> Result<PointCloud> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_cloud(&text, path, expected_dim)
}

/// Parses cloud text; `path` only labels diagnostics.
pub fn parse_cloud(text: &str, path: &Path, expected_dim: Option<usize>) -> Result<PointCloud> {
    let cloud = if text.trim_start().starts_with("ply") {
        parse_ply(text, path)?
    } else {
        parse_xyz(text, path)?
    };
    if let Some(dim) = expected_dim {
        crate::error::check_dim(dim, cloud.dim())?;
    }
    Ok(cloud)
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: message.into(),
    }
}

fn parse_coord(tok: &str, path: &Path, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(path, line, format!("invalid number {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(
            path,
            line,
            format!("non-finite coordinate {tok:?}"),
        ));
    }
    Ok(v)
}

fn parse_xyz(text: &str, path: &Path) -> Result<PointCloud> {
    let mut dim = None;
    let mut coords = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let before = coords.len();
        for tok in line.split_whitespace() {
            coords.push(parse_coord(tok, path, line_no)?);
        }
        let cols = coords.len() - before;
        match dim {
            None => dim = Some(cols),
            Some(d) if d != cols => {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("expected {d} columns, found {cols}"),
                ))
            }
            _ => {}
        }
    }
    let dim = dim.ok_or_else(|| parse_err(path, 0, "file contains no points"))?;
    PointCloud::new(dim, coords)
}

struct PlyElement {
    name: String,
    count: usize,
    props: Vec<String>,
    has_list: bool,
}

fn parse_ply(text: &str, path: &Path) -> Result<PointCloud> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let mut elements: Vec<PlyElement> = Vec::new();
    let mut saw_format = false;
    let mut body_start = None;
    for (line_no, line) in lines.by_ref() {
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("ply") | Some("comment") | Some("obj_info") | None => {}
            Some("format") => {
                let fmt = toks.next().unwrap_or("");
                if fmt != "ascii" {
                    return Err(parse_err(
                        path,
                        line_no,
                        format!("unsupported PLY format {fmt:?}"),
                    ));
                }
                saw_format = true;
            }
            Some("element") => {
                let name = toks.next().unwrap_or("").to_string();
                let count = toks
                    .next()
                    .and_then(|c| c.parse().ok())
                    .ok_or_else(|| parse_err(path, line_no, "element without a valid count"))?;
                elements.push(PlyElement {
                    name,
                    count,
                    props: Vec::new(),
                    has_list: false,
                });
            }
            Some("property") => {
                let el = elements
                    .last_mut()
                    .ok_or_else(|| parse_err(path, line_no, "property before any element"))?;
                let rest: Vec<&str> = toks.collect();
                if rest.first() == Some(&"list") {
                    el.has_list = true;
                }
                el.props
                    .push(rest.last().copied().unwrap_or("").to_string());
            }
            Some("end_header") => {
                body_start = Some(line_no);
                break;
            }
            Some(other) => {
                return Err(parse_err(
                    path,
                    line_no,
                    format!("unexpected header keyword {other:?}"),
                ))
            }
        }
    }
    if body_start.is_none() {
        return Err(parse_err(path, 0, "missing end_header"));
    }
    if !saw_format {
        return Err(parse_err(path, 0, "missing format line"));
    }
    let vertex_pos = elements
        .iter()
        .position(|e| e.name == "vertex")
        .ok_or_else(|| parse_err(path, 0, "no vertex element"))?;
    let vertex = &elements[vertex_pos];
    if vertex.has_list {
        return Err(parse_err(
            path,
            0,
            "list properties on vertices are not supported",
        ));
    }
    let col = |name: &str| vertex.props.iter().position(|p| p == name);
    let mut cols = vec![
        col("x").ok_or_else(|| parse_err(path, 0, "vertex element has no x property"))?,
        col("y").ok_or_else(|| parse_err(path, 0, "vertex element has no y property"))?,
    ];
    if let Some(z) = col("z") {
        cols.push(z);
    }
    let skip: usize = elements[..vertex_pos].iter().map(|e| e.count).sum();

    let mut body = lines.filter(|(_, l)| !l.is_empty());
    for _ in 0..skip {
        body.next()
            .ok_or_else(|| parse_err(path, 0, "file ends before the vertex element"))?;
    }
    let mut cloud = PointCloud::with_capacity(cols.len(), vertex.count);
    let mut buf = vec![0.0; cols.len()];
    for _ in 0..vertex.count {
        let (line_no, line) = body
            .next()
            .ok_or_else(|| parse_err(path, 0, "file ends inside the vertex element"))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != vertex.props.len() {
            return Err(parse_err(
                path,
                line_no,
                format!(
                    "expected {} vertex values, found {}",
                    vertex.props.len(),
                    toks.len()
                ),
            ));
        }
        for (b, &c) in buf.iter_mut().zip(&cols) {
            *b = parse_coord(toks[c], path, line_no)?;
        }
        cloud.push(&buf);
    }
    Ok(cloud)
}

pub fn write_cloud(cloud: &PointCloud, path: impl AsRef<Path>, format: CloudFormat) -> Result<()> {
    let path = path.as_ref();
    if cloud.is_empty() {
        return Err(Error::invalid("refusing to write an empty cloud"));
    }
    let mut w = create(path)?;
    write_cloud_to(&mut w, cloud, format, &[]).map_err(|e| Error::io(path, e))?;
    finish(path, w)
}

/// Writes a cloud to any sink, with optional `#` comment lines (XYZ) or
/// `comment` header lines (PLY).
pub fn write_cloud_to(
    w: &mut impl Write,
    cloud: &PointCloud,
    format: CloudFormat,
    comments: &[&str],
) -> std::io::Result<()> {
    const AXES: [&str; 3] = ["x", "y", "z"];
    match format {
        CloudFormat::Xyz => {
            for c in comments {
                writeln!(w, "# {c}")?;
            }
        }
        CloudFormat::Ply => {
            writeln!(w, "ply")?;
            writeln!(w, "format ascii 1.0")?;
            for c in comments {
                writeln!(w, "comment {c}")?;
            }
            writeln!(w, "element vertex {}", cloud.len())?;
            for d in 0..cloud.dim() {
                let name = AXES
                    .get(d)
                    .map(|s| s.to_string())
                    .unwrap_or(format!("c{d}"));
                writeln!(w, "property double {name}")?;
            }
            writeln!(w, "end_header")?;
        }
    }
    for p in cloud.points() {
        let row: Vec<String> = p.iter().map(|&c| fmt_f64(c)).collect();
        writeln!(w, "{}", row.join(" "))?;
    }
    Ok(())
}
