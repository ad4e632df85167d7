//! Spacetime serialization.
//!
//! CSV: one line per generation, comma-separated signed integers.
//!
//! Binary: the 5-byte magic `SYMB1`, `u32` width, `u32` generation count,
//! then width x generations `i32` values, all little-endian, row-major.

use std::io::{BufRead, Read, Write};

use crate::core1d::Spacetime;
use crate::error::{Result, SymbaError};

pub const SPACETIME_MAGIC: &[u8; 5] = b"SYMB1";

pub fn write_spacetime_csv<W: Write>(st: &Spacetime, mut out: W) -> Result<()> {
    let mut line = String::new();
    for row in st.rows() {
        line.clear();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&v.to_string());
        }
        line.push('\n');
        out.write_all(line.as_bytes())?;
    }
    Ok(())
}

pub fn read_spacetime_csv<R: BufRead>(input: R) -> Result<Spacetime> {
    let mut width = None;
    let mut data = Vec::new();
    for (lineno, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let before = data.len();
        for field in line.split(',') {
            let v: i32 = field
                .trim()
                .parse()
                .map_err(|_| SymbaError::Format(format!("line {}: `{field}` is not an integer", lineno + 1)))?;
            data.push(v);
        }
        let w = data.len() - before;
        match width {
            None => width = Some(w),
            Some(expected) if expected != w => {
                return Err(SymbaError::Format(format!("line {}: expected {expected} values, found {w}", lineno + 1)))
            }
            _ => {}
        }
    }
    let width = width.ok_or_else(|| SymbaError::Format("empty spacetime".into()))?;
    Spacetime::from_rows(width, data)
}

pub fn write_spacetime_bin<W: Write>(st: &Spacetime, mut out: W) -> Result<()> {
    let width = u32::try_from(st.width()).map_err(|_| SymbaError::Format("width exceeds u32".into()))?;
    let gens =
        u32::try_from(st.generations()).map_err(|_| SymbaError::Format("generation count exceeds u32".into()))?;
    let mut buf = Vec::with_capacity(13 + 4 * st.data().len());
    buf.extend_from_slice(SPACETIME_MAGIC);
    buf.extend_from_slice(&width.to_le_bytes());
    buf.extend_from_slice(&gens.to_le_bytes());
    for v in st.data() {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    out.write_all(&buf)?;
    Ok(())
}

pub fn read_spacetime_bin<R: Read>(mut input: R) -> Result<Spacetime> {
    let mut bytes = Vec::new();
    input.read_to_end(&mut bytes)?;
    if bytes.len() < 13 || &bytes[..5] != SPACETIME_MAGIC {
        return Err(SymbaError::Format("missing SYMB1 header".into()));
    }
    let width = u32::from_le_bytes(bytes[5..9].try_into().unwrap()) as usize;
    let gens = u32::from_le_bytes(bytes[9..13].try_into().unwrap()) as usize;
    let body = &bytes[13..];
    if width == 0 || body.len() != 4 * width * gens {
        return Err(SymbaError::Format(format!(
            "payload of {} bytes does not match {width} x {gens} values",
            body.len()
        )));
    }
    let data = body.chunks_exact(4).map(|c| i32::from_le_bytes(c.try_into().unwrap())).collect();
    Spacetime::from_rows(width, data)
}
