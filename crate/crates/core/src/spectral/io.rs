use std::fs;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::field::Field;
use super::grid::Grid;
use crate::error::{Error, Result};

/// Two-column CSV: coordinate, value.
pub fn write_csv(field: &Field, path: &Path) -> Result<()> {
    let mut w = BufWriter::new(fs::File::create(path)?);
    writeln!(w, "coordinate,value")?;
    for (x, v) in field.grid().points().iter().zip(field.values()) {
        writeln!(w, "{x:.17e},{v:.17e}")?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a two-column CSV written by [`write_csv`]; the grid is inferred from the coordinates.
pub fn read_csv(path: &Path) -> Result<Field> {
    let text = fs::read_to_string(path)?;
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (lineno == 0 && line.starts_with("coordinate")) {
            continue;
        }
        let mut parts = line.split(',');
        let parse = |s: Option<&str>| -> Result<f64> {
            s.ok_or_else(|| Error::Format(format!("line {}: missing column", lineno + 1)))?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::Format(format!("line {}: {e}", lineno + 1)))
        };
        xs.push(parse(parts.next())?);
        vs.push(parse(parts.next())?);
    }
    if xs.len() < 2 {
        return Err(Error::Format("too few rows".into()));
    }
    let h = xs[1] - xs[0];
    let grid = Grid::new(xs.len(), h * xs.len() as f64, xs[0])?;
    Field::from_values(grid, vs)
}

/// Little-endian binary: `n: u64`, `length: f64`, `origin: f64`, then `n` samples.
pub fn to_bytes(field: &Field) -> Vec<u8> {
    let g = field.grid();
    let mut out = Vec::with_capacity(24 + 8 * g.n());
    out.extend_from_slice(&(g.n() as u64).to_le_bytes());
    out.extend_from_slice(&g.length().to_le_bytes());
    out.extend_from_slice(&g.origin().to_le_bytes());
    for v in field.values() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn from_bytes(bytes: &[u8]) -> Result<Field> {
    if bytes.len() < 24 {
        return Err(Error::Format("binary field shorter than its header".into()));
    }
    let word = |i: usize| -> [u8; 8] { bytes[8 * i..8 * i + 8].try_into().unwrap() };
    let n = u64::from_le_bytes(word(0)) as usize;
    let length = f64::from_le_bytes(word(1));
    let origin = f64::from_le_bytes(word(2));
    if bytes.len() != 24 + 8 * n {
        return Err(Error::Format(format!("expected {} bytes, found {}", 24 + 8 * n, bytes.len())));
    }
    let grid = Grid::new(n, length, origin)?;
    let values = (0..n).map(|j| f64::from_le_bytes(word(3 + j))).collect();
    Field::from_values(grid, values)
}

pub fn write_binary(field: &Field, path: &Path) -> Result<()> {
    fs::write(path, to_bytes(field))?;
    Ok(())
}

pub fn read_binary(path: &Path) -> Result<Field> {
    let mut buf = Vec::new();
    fs::File::open(path)?.read_to_end(&mut buf)?;
    from_bytes(&buf)
}
