use std::io::{Read, Write};

use super::{Field, Grid};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const SNAPSHOT_MAGIC: &[u8; 4] = b"CRKF";
const VERSION: u32 = 1;

/// Writes a 32-byte header (magic, version, n, N, channels, padding as
/// little-endian `u32`, then `L` as `f64`) followed by the values as
/// little-endian `f64`, channel-major.
pub fn write_snapshot<F: Real>(u: &Field<F>, mut w: impl Write) -> Result<()> {
    let g = u.grid();
    let mut header = Vec::with_capacity(32);
    header.extend_from_slice(SNAPSHOT_MAGIC);
    for v in [VERSION, g.n() as u32, g.size() as u32, u.channels() as u32, 0] {
        header.extend_from_slice(&v.to_le_bytes());
    }
    header.extend_from_slice(&g.length().to_f64().unwrap_or(f64::NAN).to_le_bytes());
    w.write_all(&header)?;
    let mut buf = Vec::with_capacity(8 * u.values().len());
    for v in u.values() {
        buf.extend_from_slice(&v.to_f64().unwrap_or(f64::NAN).to_le_bytes());
    }
    w.write_all(&buf)?;
    Ok(())
}

pub fn read_snapshot<F: Real>(mut r: impl Read) -> Result<Field<F>> {
    let mut header = [0u8; 32];
    r.read_exact(&mut header)
        .map_err(|e| Error::Snapshot(format!("truncated header: {e}")))?;
    if &header[..4] != SNAPSHOT_MAGIC {
        return Err(Error::Snapshot("bad magic".into()));
    }
    let word = |i: usize| u32::from_le_bytes(header[4 + 4 * i..8 + 4 * i].try_into().expect("4 bytes"));
    if word(0) != VERSION {
        return Err(Error::Snapshot(format!("unsupported version {}", word(0))));
    }
    let (n, size, channels) = (word(1) as usize, word(2) as usize, word(3) as usize);
    let length = f64::from_le_bytes(header[24..32].try_into().expect("8 bytes"));
    let grid = Grid::with_length(n, size, F::of(length)).map_err(|e| Error::Snapshot(e.to_string()))?;
    let count = channels * grid.num_points();
    let mut data = vec![0u8; 8 * count];
    r.read_exact(&mut data)
        .map_err(|e| Error::Snapshot(format!("truncated data: {e}")))?;
    let values = data
        .chunks_exact(8)
        .map(|c| F::of(f64::from_le_bytes(c.try_into().expect("8 bytes"))))
        .collect();
    Field::new(grid, channels, values).map_err(|e| Error::Snapshot(e.to_string()))
}

/// CSV of a 1-D or 2-D slice along `axes`, other coordinates fixed at the box
/// center. Columns: one per slice axis (`x0`, `x1`, …), then `c0`, `c1`, ….
pub fn write_csv_slice<F: Real>(u: &Field<F>, axes: &[usize], mut w: impl Write) -> Result<()> {
    let g = u.grid();
    if axes.is_empty() || axes.len() > 2 || axes.iter().any(|&a| a >= g.n()) || (axes.len() == 2 && axes[0] == axes[1]) {
        return Err(Error::InvalidConfig(format!(
            "slice axes {axes:?} invalid for a {}-dimensional grid",
            g.n()
        )));
    }
    let mut head: Vec<String> = axes.iter().map(|a| format!("x{a}")).collect();
    head.extend((0..u.channels()).map(|c| format!("c{c}")));
    writeln!(w, "{}", head.join(","))?;
    let h = g.spacing();
    let mut idx = g.center_index();
    let count = g.size().pow(axes.len() as u32);
    for flat in 0..count {
        let mut rest = flat;
        for &a in axes.iter().rev() {
            idx[a] = rest % g.size();
            rest /= g.size();
        }
        let p = g.flatten(&idx);
        let mut row: Vec<String> = axes.iter().map(|&a| format!("{}", F::of(idx[a] as f64) * h)).collect();
        row.extend(u.at(p).iter().map(|v| format!("{v}")));
        writeln!(w, "{}", row.join(","))?;
    }
    Ok(())
}
