//! On-disk formats.
//!
//! **Snapshots** are two files sharing a stem:
//!
//! - `<stem>.bin`: raw little-endian `f64` physical values. Each component is
//!   an `n x n` row-major block (`x` index slowest); for vector fields the
//!   `u` block is followed by the `v` block. No header.
//! - `<stem>.meta`: `key = value` lines with `layout_version`, `n`, `form`,
//!   `components`, `lambda`, `epsilon`, `kind`, `t`, `dt`.
//!
//! **Error tables** are CSV with header
//! `epsilon,err_linf_l2,err_linf_linf,err_l2_h2`, one row per calming
//! parameter, values printed in shortest round-trip form.
//!
//! **Norm series** are CSV with header `t,l2,linf,h2`.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::calming::CalmingKind;
use crate::error::{Error, Result};
use crate::field::{Field, Shape};
use crate::timestepper::NormSample;

pub const LAYOUT_VERSION: u32 = 1;

/// Sidecar metadata of a snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct SnapshotMeta {
    pub n: usize,
    pub shape: Shape,
    pub lambda: f64,
    pub epsilon: f64,
    pub kind: CalmingKind,
    pub t: f64,
    pub dt: f64,
}

impl SnapshotMeta {
    pub fn payload_len(&self) -> Result<usize> {
        self.n
            .checked_mul(self.n)
            .and_then(|v| v.checked_mul(self.shape.components()))
            .and_then(|v| v.checked_mul(8))
            .ok_or_else(|| Error::Snapshot(format!("n = {} is too large", self.n)))
    }

    pub fn to_text(&self) -> String {
        format!(
            "layout_version = {LAYOUT_VERSION}\nn = {}\nform = {}\ncomponents = {}\n\
             lambda = {:?}\nepsilon = {:?}\nkind = {}\nt = {:?}\ndt = {:?}\n",
            self.n,
            self.shape,
            self.shape.components(),
            self.lambda,
            self.epsilon,
            self.kind,
            self.t,
            self.dt,
        )
    }

    pub fn parse(text: &str) -> Result<Self> {
        let map = super::config::parse_key_value_map(text)?;
        let get = |key: &str| {
            map.get(key)
                .map(String::as_str)
                .ok_or_else(|| Error::Snapshot(format!("metadata is missing '{key}'")))
        };
        let num = |key: &str| -> Result<f64> {
            let v = get(key)?;
            v.parse()
                .map_err(|_| Error::Snapshot(format!("{key}: '{v}' is not a number")))
        };
        let version: u32 = get("layout_version")?
            .parse()
            .map_err(|_| Error::Snapshot("layout_version is not an integer".into()))?;
        if version != LAYOUT_VERSION {
            return Err(Error::Snapshot(format!(
                "unsupported layout_version {version} (expected {LAYOUT_VERSION})"
            )));
        }
        let n: usize = get("n")?
            .parse()
            .map_err(|_| Error::Snapshot("n is not a positive integer".into()))?;
        if n == 0 {
            return Err(Error::Snapshot("n must be positive".into()));
        }
        let shape: Shape = get("form")?.parse().map_err(|e: Error| Error::Snapshot(e.to_string()))?;
        if let Some(c) = map.get("components") {
            if c.parse::<usize>().ok() != Some(shape.components()) {
                return Err(Error::Snapshot(format!(
                    "components = {c} contradicts form = {shape}"
                )));
            }
        }
        Ok(SnapshotMeta {
            n,
            shape,
            lambda: num("lambda")?,
            epsilon: num("epsilon")?,
            kind: get("kind")?.parse().map_err(|e: Error| Error::Snapshot(e.to_string()))?,
            t: num("t")?,
            dt: num("dt")?,
        })
    }
}

pub fn encode_payload(field: &Field) -> Vec<u8> {
    let mut out = Vec::with_capacity(field.n() * field.n() * field.components().len() * 8);
    for c in field.components() {
        for v in c.iter() {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

/// Decodes a snapshot payload, checking its size against the metadata.
pub fn decode_payload(meta: &SnapshotMeta, bytes: &[u8]) -> Result<Field> {
    let expected = meta.payload_len()?;
    if bytes.len() != expected {
        return Err(Error::Snapshot(format!(
            "payload has {} bytes, metadata (n = {}, {}) implies {expected}",
            bytes.len(),
            meta.n,
            meta.shape
        )));
    }
    let n = meta.n;
    let block = n * n * 8;
    let comps = bytes
        .chunks_exact(block)
        .map(|chunk| {
            let values = chunk
                .chunks_exact(8)
                .map(|b| f64::from_le_bytes(b.try_into().expect("chunk of 8")))
                .collect();
            Array2::from_shape_vec((n, n), values).expect("block holds n*n values")
        })
        .collect();
    Field::new(comps)
}

fn sibling(path: &Path, ext: &str) -> PathBuf {
    path.with_extension(ext)
}

/// Writes `<dir>/<stem>.bin` and `<dir>/<stem>.meta`; returns the payload path.
pub fn write_snapshot(dir: &Path, stem: &str, field: &Field, meta: &SnapshotMeta) -> Result<PathBuf> {
    if field.n() != meta.n || field.shape() != meta.shape {
        return Err(Error::Snapshot(format!(
            "field is {} {}x{} but metadata says {} {}x{}",
            field.shape(),
            field.n(),
            field.n(),
            meta.shape,
            meta.n,
            meta.n
        )));
    }
    let bin = dir.join(format!("{stem}.bin"));
    let meta_path = sibling(&bin, "meta");
    fs::write(&bin, encode_payload(field)).map_err(|e| Error::io(&bin, e))?;
    fs::write(&meta_path, meta.to_text()).map_err(|e| Error::io(&meta_path, e))?;
    Ok(bin)
}

/// Loads a snapshot given the path of either file of the pair.
pub fn load_snapshot(path: &Path) -> Result<(Field, SnapshotMeta)> {
    let bin = sibling(path, "bin");
    let meta_path = sibling(path, "meta");
    let text = fs::read_to_string(&meta_path).map_err(|e| Error::io(&meta_path, e))?;
    let meta = SnapshotMeta::parse(&text)?;
    let mut bytes = Vec::new();
    fs::File::open(&bin)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| Error::io(&bin, e))?;
    let field = decode_payload(&meta, &bytes)?;
    Ok((field, meta))
}

/// Error norms of `u_eps - u` for one calming parameter: max over steps of
/// the L2 and L-infinity norms, and the time-L2 norm of the H2 norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ErrorSeries {
    pub epsilon: f64,
    pub err_linf_l2: f64,
    pub err_linf_linf: f64,
    pub err_l2_h2: f64,
}

pub fn write_error_series<W: Write>(writer: W, rows: &[ErrorSeries]) -> std::result::Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_error_series<R: Read>(reader: R) -> std::result::Result<Vec<ErrorSeries>, csv::Error> {
    let mut r = csv::Reader::from_reader(reader);
    {
        let headers = r.headers()?;
        let expected = ["epsilon", "err_linf_l2", "err_linf_linf", "err_l2_h2"];
        if headers.iter().ne(expected) {
            return Err(csv::Error::from(std::io::Error::new(
                std::io::ErrorKind::InvalidData,
                format!("unexpected header: {}", headers.iter().collect::<Vec<_>>().join(",")),
            )));
        }
    }
    r.deserialize().collect()
}

pub fn write_error_csv(path: &Path, rows: &[ErrorSeries]) -> Result<()> {
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_error_series(file, rows).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_error_csv(path: &Path) -> Result<Vec<ErrorSeries>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_error_series(file).map_err(|source| Error::Csv {
        path: path.to_path_buf(),
        source,
    })
}

#[derive(Serialize)]
struct NormRow {
    t: f64,
    l2: f64,
    linf: f64,
    h2: f64,
}

pub fn write_norm_csv(path: &Path, samples: &[NormSample]) -> Result<()> {
    let wrap = |source| Error::Csv {
        path: path.to_path_buf(),
        source,
    };
    let mut w = csv::Writer::from_path(path).map_err(wrap)?;
    for s in samples {
        w.serialize(NormRow {
            t: s.t,
            l2: s.l2,
            linf: s.linf,
            h2: s.h2,
        })
        .map_err(wrap)?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
