//! `NWV1` field dumps: little-endian, magic `NWV1`, `u32 D`, three `u32`
//! axis sizes, `f64 L`, `f64 t`, then `D·n³` values of `u` followed by
//! `D·n³` values of `∂ₜu`, first coordinate fastest.

use std::io::{Read, Write};

use super::{Grid3, GridError};

pub const MAGIC: &[u8; 4] = b"NWV1";

#[derive(Debug, Clone, PartialEq)]
pub struct FieldDump {
    pub grid: Grid3,
    pub t: f64,
    /// One field per family.
    pub u: Vec<Vec<f64>>,
    pub ut: Vec<Vec<f64>>,
}

fn io(e: std::io::Error) -> GridError {
    GridError::Io(e.to_string())
}

pub fn write_dump<W: Write>(mut w: W, dump: &FieldDump) -> Result<(), GridError> {
    let d = dump.u.len();
    if dump.ut.len() != d {
        return Err(GridError::Shape("u and ut family counts differ".into()));
    }
    let n = dump.grid.n as u32;
    let mut buf = Vec::with_capacity(32 + 16 * d * dump.grid.len());
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&(d as u32).to_le_bytes());
    for _ in 0..3 {
        buf.extend_from_slice(&n.to_le_bytes());
    }
    buf.extend_from_slice(&dump.grid.l.to_le_bytes());
    buf.extend_from_slice(&dump.t.to_le_bytes());
    for field in dump.u.iter().chain(&dump.ut) {
        if field.len() != dump.grid.len() {
            return Err(GridError::Shape("field size does not match grid".into()));
        }
        for v in field {
            buf.extend_from_slice(&v.to_le_bytes());
        }
    }
    w.write_all(&buf).map_err(io)
}

pub fn read_dump<R: Read>(mut r: R) -> Result<FieldDump, GridError> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(io)?;
    if bytes.len() < 36 || &bytes[..4] != MAGIC {
        return Err(GridError::BadDump("missing NWV1 header".into()));
    }
    let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().expect("4 bytes"));
    let f64_at = |o: usize| f64::from_le_bytes(bytes[o..o + 8].try_into().expect("8 bytes"));
    let d = u32_at(4) as usize;
    let dims = [u32_at(8), u32_at(12), u32_at(16)];
    if dims[0] != dims[1] || dims[1] != dims[2] {
        return Err(GridError::BadDump(format!("non-cubic grid {dims:?}")));
    }
    let grid = Grid3::new(f64_at(20), dims[0] as usize)?;
    let t = f64_at(28);
    let len = grid.len();
    let expected = 36 + 16 * d * len;
    if bytes.len() != expected {
        return Err(GridError::BadDump(format!(
            "expected {expected} bytes, found {}",
            bytes.len()
        )));
    }
    let mut fields: Vec<Vec<f64>> = (0..2 * d)
        .map(|f| (0..len).map(|i| f64_at(36 + 8 * (f * len + i))).collect())
        .collect();
    let ut = fields.split_off(d);
    Ok(FieldDump { grid, t, u: fields, ut })
}
