//! Minimal .npy (version 1.0) reader/writer for little-endian f64 arrays.
//! Enough for the clip cache and checkpoint sidecars to interoperate with
//! numpy without pulling a dependency.

use std::io::{Read, Write};
use std::path::Path;

use crate::{Error, Result};

const MAGIC: &[u8; 6] = b"\x93NUMPY";

pub fn write_npy_f64(path: &Path, shape: &[usize], data: &[f64]) -> Result<()> {
    let n: usize = shape.iter().product();
    if n != data.len() {
        return Err(Error::ShapeMismatch(format!(
            "npy write: shape {shape:?} has {n} elements, data has {}",
            data.len()
        )));
    }
    let shape_str = match shape.len() {
        1 => format!("({},)", shape[0]),
        _ => format!(
            "({})",
            shape
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    };
    let mut header = format!(
        "{{'descr': '<f8', 'fortran_order': False, 'shape': {shape_str}, }}"
    );
    // Pad so that magic(6) + version(2) + len(2) + header is 64-aligned.
    let unpadded = 10 + header.len() + 1;
    let pad = (64 - unpadded % 64) % 64;
    header.push_str(&" ".repeat(pad));
    header.push('\n');

    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path.display(), e))?;
    let mut buf = Vec::with_capacity(10 + header.len() + data.len() * 8);
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&[1u8, 0u8]);
    buf.extend_from_slice(&(header.len() as u16).to_le_bytes());
    buf.extend_from_slice(header.as_bytes());
    for v in data {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    f.write_all(&buf).map_err(|e| Error::io(path.display(), e))
}

pub fn read_npy_f64(path: &Path) -> Result<(Vec<usize>, Vec<f64>)> {
    let mut f = std::fs::File::open(path).map_err(|e| Error::io(path.display(), e))?;
    let mut raw = Vec::new();
    f.read_to_end(&mut raw).map_err(|e| Error::io(path.display(), e))?;
    let bad = |msg: &str| Error::Checkpoint(format!("{}: {msg}", path.display()));

    if raw.len() < 10 || &raw[..6] != MAGIC {
        return Err(bad("not an npy file"));
    }
    if raw[6] != 1 {
        return Err(bad("unsupported npy version"));
    }
    let header_len = u16::from_le_bytes([raw[8], raw[9]]) as usize;
    let header = std::str::from_utf8(&raw[10..10 + header_len]).map_err(|_| bad("bad header"))?;
    if !header.contains("'<f8'") {
        return Err(bad("expected little-endian f64 data"));
    }
    if header.contains("'fortran_order': True") {
        return Err(bad("fortran order unsupported"));
    }
    let shape_start = header.find("'shape': (").ok_or_else(|| bad("missing shape"))? + 10;
    let shape_end = header[shape_start..]
        .find(')')
        .ok_or_else(|| bad("missing shape end"))?
        + shape_start;
    let shape: Vec<usize> = header[shape_start..shape_end]
        .split(',')
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse().map_err(|_| bad("bad shape value")))
        .collect::<Result<_>>()?;

    let body = &raw[10 + header_len..];
    let n: usize = shape.iter().product();
    if body.len() != n * 8 {
        return Err(bad("data length does not match shape"));
    }
    let data = body
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((shape, data))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.npy");
        let data: Vec<f64> = (0..24).map(|i| i as f64 * 0.3 - 1.7).collect();
        write_npy_f64(&path, &[2, 3, 4], &data).unwrap();
        let (shape, back) = read_npy_f64(&path).unwrap();
        assert_eq!(shape, vec![2, 3, 4]);
        assert_eq!(back, data);
    }

    #[test]
    fn one_dimensional_shape() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.npy");
        write_npy_f64(&path, &[5], &[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        let (shape, back) = read_npy_f64(&path).unwrap();
        assert_eq!(shape, vec![5]);
        assert_eq!(back.len(), 5);
    }

    #[test]
    fn shape_mismatch_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.npy");
        assert!(write_npy_f64(&path, &[3, 3], &[0.0; 8]).is_err());
    }
}
