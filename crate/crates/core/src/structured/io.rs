//! Versioned JSON and binary encodings of [`BandedBlockBanded`].

use super::BandedBlockBanded;
use crate::basis::Ordering;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

const VERSION: u32 = 1;
const MAGIC: &[u8; 4] = b"BBB1";

#[derive(Serialize, Deserialize)]
struct Packed {
    version: u32,
    ordering: Ordering,
    row_sizes: Vec<usize>,
    col_sizes: Vec<usize>,
    block_bandwidths: (usize, usize),
    sub_block_bandwidths: (usize, usize),
    data: Vec<f64>,
}

pub fn write_json(m: &BandedBlockBanded) -> Result<String> {
    let p = Packed {
        version: VERSION,
        ordering: m.ordering(),
        row_sizes: m.row_sizes().to_vec(),
        col_sizes: m.col_sizes().to_vec(),
        block_bandwidths: m.block_bandwidths(),
        sub_block_bandwidths: m.sub_block_bandwidths(),
        data: m.raw_data().to_vec(),
    };
    serde_json::to_string(&p).map_err(|e| Error::Format(e.to_string()))
}

pub fn read_json(s: &str) -> Result<BandedBlockBanded> {
    let p: Packed = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
    if p.version != VERSION {
        return Err(Error::Format(format!("unsupported version {}", p.version)));
    }
    BandedBlockBanded::from_raw(
        p.row_sizes,
        p.col_sizes,
        p.block_bandwidths,
        p.sub_block_bandwidths,
        p.ordering,
        p.data,
    )
}

/// Little-endian layout: magic, version, ordering, four bandwidths, block
/// counts, sizes, data length, data.
pub fn write_binary(m: &BandedBlockBanded) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.push(match m.ordering() {
        Ordering::DegreeMajor => 0,
        Ordering::FourierMajor => 1,
    });
    let (l, u) = m.block_bandwidths();
    let (lam, mu) = m.sub_block_bandwidths();
    for v in [l, u, lam, mu, m.row_sizes().len(), m.col_sizes().len()] {
        out.extend_from_slice(&(v as u64).to_le_bytes());
    }
    for s in m.row_sizes().iter().chain(m.col_sizes()) {
        out.extend_from_slice(&(*s as u64).to_le_bytes());
    }
    out.extend_from_slice(&(m.raw_data().len() as u64).to_le_bytes());
    for v in m.raw_data() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn read_binary(bytes: &[u8]) -> Result<BandedBlockBanded> {
    let mut cur = Cursor { bytes, pos: 0 };
    if cur.take(4)? != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let version = u32::from_le_bytes(cur.take(4)?.try_into().unwrap());
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let ordering = match cur.take(1)?[0] {
        0 => Ordering::DegreeMajor,
        1 => Ordering::FourierMajor,
        t => return Err(Error::Format(format!("bad ordering tag {t}"))),
    };
    let l = cur.u64()?;
    let u = cur.u64()?;
    let lam = cur.u64()?;
    let mu = cur.u64()?;
    let nr = cur.u64()?;
    let nc = cur.u64()?;
    let row_sizes = (0..nr).map(|_| cur.u64()).collect::<Result<Vec<_>>>()?;
    let col_sizes = (0..nc).map(|_| cur.u64()).collect::<Result<Vec<_>>>()?;
    let len = cur.u64()?;
    let data = (0..len)
        .map(|_| cur.take(8).map(|b| f64::from_le_bytes(b.try_into().unwrap())))
        .collect::<Result<Vec<_>>>()?;
    BandedBlockBanded::from_raw(row_sizes, col_sizes, (l, u), (lam, mu), ordering, data)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos + n;
        if end > self.bytes.len() {
            return Err(Error::Format("truncated input".into()));
        }
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u64(&mut self) -> Result<usize> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()) as usize)
    }
}
