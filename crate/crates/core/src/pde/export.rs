//! CSV and binary field export.
//!
//! Binary layout: the 8-byte magic `HPFIELD1`, a little-endian `u32` header
//! length, the JSON header, then `r` nodes, `s` nodes and the row-major
//! values as little-endian `f64`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{FarField, GridSpec, HalfPlaneField, PdeError, ProfileTag};

const MAGIC: &[u8; 8] = b"HPFIELD1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldHeader {
    pub label: String,
    pub tag: Option<ProfileTag>,
    pub n: i64,
    pub grid: GridSpec,
    pub n_r: usize,
    pub n_s: usize,
    pub far_field: Option<FarField>,
    pub boundary: Vec<String>,
    pub tolerance: f64,
    pub relative_residual: f64,
}

impl FieldHeader {
    pub fn of(field: &HalfPlaneField) -> Self {
        FieldHeader {
            label: field.label().to_string(),
            tag: field.tag(),
            n: field.n(),
            grid: *field.grid().spec(),
            n_r: field.grid().n_r(),
            n_s: field.grid().n_s(),
            far_field: field.far_field(),
            boundary: field.boundary().to_vec(),
            tolerance: field.stats().tolerance,
            relative_residual: field.stats().relative_residual,
        }
    }
}

/// Field contents as read back from the binary format.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldData {
    pub header: FieldHeader,
    pub r: Vec<f64>,
    pub s: Vec<f64>,
    pub values: Vec<f64>,
}

pub fn write_csv<W: Write>(field: &HalfPlaneField, mut out: W) -> Result<(), PdeError> {
    let h = FieldHeader::of(field);
    writeln!(
        out,
        "# label={} n={} n_r={} n_s={} radius={} stretch={}",
        h.label, h.n, h.n_r, h.n_s, h.grid.radius, h.grid.stretch
    )?;
    writeln!(out, "r,s,value")?;
    let g = field.grid();
    for (i, &r) in g.r().iter().enumerate() {
        for (j, &s) in g.s().iter().enumerate() {
            writeln!(out, "{r:e},{s:e},{:e}", field.value(i, j))?;
        }
    }
    Ok(())
}

pub fn write_binary<W: Write>(field: &HalfPlaneField, mut out: W) -> Result<(), PdeError> {
    let header = serde_json::to_vec(&FieldHeader::of(field)).map_err(|e| PdeError::Format(e.to_string()))?;
    out.write_all(MAGIC)?;
    out.write_all(&(header.len() as u32).to_le_bytes())?;
    out.write_all(&header)?;
    let g = field.grid();
    for x in g.r().iter().chain(g.s()).chain(field.values()) {
        out.write_all(&x.to_le_bytes())?;
    }
    Ok(())
}

fn read_f64s<R: Read>(input: &mut R, count: usize) -> Result<Vec<f64>, PdeError> {
    let mut buf = vec![0u8; count * 8];
    input.read_exact(&mut buf).map_err(|e| PdeError::Format(format!("truncated data: {e}")))?;
    Ok(buf.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes"))).collect())
}

pub fn read_binary<R: Read>(mut input: R) -> Result<FieldData, PdeError> {
    let mut magic = [0u8; 8];
    input.read_exact(&mut magic).map_err(|e| PdeError::Format(format!("missing magic: {e}")))?;
    if &magic != MAGIC {
        return Err(PdeError::Format("bad magic".into()));
    }
    let mut len = [0u8; 4];
    input.read_exact(&mut len).map_err(|e| PdeError::Format(e.to_string()))?;
    let mut header = vec![0u8; u32::from_le_bytes(len) as usize];
    input.read_exact(&mut header).map_err(|e| PdeError::Format(e.to_string()))?;
    let header: FieldHeader = serde_json::from_slice(&header).map_err(|e| PdeError::Format(e.to_string()))?;
    let r = read_f64s(&mut input, header.n_r)?;
    let s = read_f64s(&mut input, header.n_s)?;
    let values = read_f64s(&mut input, header.n_r * header.n_s)?;
    Ok(FieldData { header, r, s, values })
}
