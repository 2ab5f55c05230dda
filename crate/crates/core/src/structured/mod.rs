//! Banded-block-banded storage and the linear solves built on it.

mod banded;
mod io;
mod solve;

pub use banded::{BandedLu, BandedMatrix};
pub use io::{read_binary, read_json, write_binary, write_json};
pub use solve::{partition_by_mode, solve, solve_coupled, FourierBlockSystem, SolveOutcome};

use crate::basis::Ordering;
use crate::error::{Error, Result};

/// Block matrix with block-bandwidths `(L, U)` whose blocks are banded with
/// sub-block-bandwidths `(λ, μ)` in local (row, column) indices.
///
/// Blocks within the block band are stored densely in band form, one after
/// another in block-row order. Reads outside the mask return zero and writes
/// outside it are rejected.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedBlockBanded {
    row_sizes: Vec<usize>,
    col_sizes: Vec<usize>,
    l: usize,
    u: usize,
    lambda: usize,
    mu: usize,
    ordering: Ordering,
    row_offsets: Vec<usize>,
    col_offsets: Vec<usize>,
    block_starts: Vec<usize>,
    data: Vec<f64>,
}

const ABSENT: usize = usize::MAX;

fn offsets(sizes: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(sizes.len() + 1);
    let mut acc = 0;
    out.push(0);
    for s in sizes {
        acc += s;
        out.push(acc);
    }
    out
}

/// Block containing global index `g`; skips empty blocks.
fn locate(offs: &[usize], g: usize) -> Option<(usize, usize)> {
    if g >= *offs.last()? {
        return None;
    }
    let b = offs.partition_point(|&o| o <= g) - 1;
    Some((b, g - offs[b]))
}

impl BandedBlockBanded {
    pub fn zeros(
        row_sizes: Vec<usize>,
        col_sizes: Vec<usize>,
        block_bandwidths: (usize, usize),
        sub_block_bandwidths: (usize, usize),
        ordering: Ordering,
    ) -> Self {
        let (l, u) = block_bandwidths;
        let (lambda, mu) = sub_block_bandwidths;
        let nbr = row_sizes.len();
        let nbc = col_sizes.len();
        let l = l.min(nbr.saturating_sub(1));
        let u = u.min(nbc.saturating_sub(1));
        let w = lambda + mu + 1;
        let nb = l + u + 1;
        let mut block_starts = vec![ABSENT; nbr * nb];
        let mut total = 0;
        for bi in 0..nbr {
            for d in 0..nb {
                let bj = bi as isize + d as isize - l as isize;
                if bj >= 0 && (bj as usize) < nbc {
                    block_starts[bi * nb + d] = total;
                    total += row_sizes[bi] * w;
                }
            }
        }
        BandedBlockBanded {
            row_offsets: offsets(&row_sizes),
            col_offsets: offsets(&col_sizes),
            row_sizes,
            col_sizes,
            l,
            u,
            lambda,
            mu,
            ordering,
            block_starts,
            data: vec![0.0; total],
        }
    }

    pub fn identity(sizes: Vec<usize>, ordering: Ordering) -> Self {
        let mut m = Self::zeros(sizes.clone(), sizes.clone(), (0, 0), (0, 0), ordering);
        for (b, s) in sizes.iter().enumerate() {
            for r in 0..*s {
                m.block_set(b, b, r, r, 1.0).expect("diagonal is in mask");
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        *self.row_offsets.last().unwrap()
    }

    pub fn ncols(&self) -> usize {
        *self.col_offsets.last().unwrap()
    }

    pub fn row_sizes(&self) -> &[usize] {
        &self.row_sizes
    }

    pub fn col_sizes(&self) -> &[usize] {
        &self.col_sizes
    }

    pub fn block_bandwidths(&self) -> (usize, usize) {
        (self.l, self.u)
    }

    pub fn sub_block_bandwidths(&self) -> (usize, usize) {
        (self.lambda, self.mu)
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    pub fn row_offset(&self, b: usize) -> usize {
        self.row_offsets[b]
    }

    pub fn col_offset(&self, b: usize) -> usize {
        self.col_offsets[b]
    }

    pub(crate) fn raw_data(&self) -> &[f64] {
        &self.data
    }

    fn width(&self) -> usize {
        self.lambda + self.mu + 1
    }

    fn block_start(&self, bi: usize, bj: usize) -> Option<usize> {
        let d = bj as isize - bi as isize + self.l as isize;
        if d < 0 || d as usize > self.l + self.u || bi >= self.row_sizes.len() || bj >= self.col_sizes.len() {
            return None;
        }
        let s = self.block_starts[bi * (self.l + self.u + 1) + d as usize];
        (s != ABSENT).then_some(s)
    }

    fn slot(&self, bi: usize, bj: usize, r: usize, c: usize) -> Option<usize> {
        let start = self.block_start(bi, bj)?;
        if r >= self.row_sizes[bi] || c >= self.col_sizes[bj] {
            return None;
        }
        let d = c as isize - r as isize;
        if d < -(self.lambda as isize) || d > self.mu as isize {
            return None;
        }
        Some(start + r * self.width() + (d + self.lambda as isize) as usize)
    }

    pub fn in_mask(&self, bi: usize, bj: usize, r: usize, c: usize) -> bool {
        self.slot(bi, bj, r, c).is_some()
    }

    pub fn block_get(&self, bi: usize, bj: usize, r: usize, c: usize) -> f64 {
        self.slot(bi, bj, r, c).map_or(0.0, |s| self.data[s])
    }

    pub fn block_set(&mut self, bi: usize, bj: usize, r: usize, c: usize, v: f64) -> Result<()> {
        match self.slot(bi, bj, r, c) {
            Some(s) => {
                self.data[s] = v;
                Ok(())
            }
            None if v == 0.0 => Ok(()),
            None => Err(Error::OutsideMask {
                row: self.row_offsets.get(bi).copied().unwrap_or(usize::MAX).saturating_add(r),
                col: self.col_offsets.get(bj).copied().unwrap_or(usize::MAX).saturating_add(c),
            }),
        }
    }

    pub fn block_add(&mut self, bi: usize, bj: usize, r: usize, c: usize, v: f64) -> Result<()> {
        if v == 0.0 {
            return Ok(());
        }
        match self.slot(bi, bj, r, c) {
            Some(s) => {
                self.data[s] += v;
                Ok(())
            }
            None => Err(Error::OutsideMask {
                row: self.row_offsets[bi] + r,
                col: self.col_offsets[bj] + c,
            }),
        }
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        match (locate(&self.row_offsets, row), locate(&self.col_offsets, col)) {
            (Some((bi, r)), Some((bj, c))) => self.block_get(bi, bj, r, c),
            _ => 0.0,
        }
    }

    pub fn set(&mut self, row: usize, col: usize, v: f64) -> Result<()> {
        match (locate(&self.row_offsets, row), locate(&self.col_offsets, col)) {
            (Some((bi, r)), Some((bj, c))) => self.block_set(bi, bj, r, c, v),
            _ => Err(Error::OutsideMask { row, col }),
        }
    }

    /// Column range of the band of local row `r` inside block `(bi, bj)`.
    fn band_cols(&self, bj: usize, r: usize) -> std::ops::Range<usize> {
        let lo = r.saturating_sub(self.lambda);
        let hi = (r + self.mu + 1).min(self.col_sizes[bj]);
        lo..hi.max(lo)
    }

    fn block_cols(&self, bi: usize) -> std::ops::Range<usize> {
        let lo = bi.saturating_sub(self.l);
        let hi = (bi + self.u + 1).min(self.col_sizes.len());
        lo..hi.max(lo)
    }

    /// Visit every stored slot (including stored zeros) as
    /// `(block_row, block_col, r, c, value)`.
    pub fn for_each_stored(&self, mut f: impl FnMut(usize, usize, usize, usize, f64)) {
        let w = self.width();
        for bi in 0..self.row_sizes.len() {
            for bj in self.block_cols(bi) {
                let start = match self.block_start(bi, bj) {
                    Some(s) => s,
                    None => continue,
                };
                for r in 0..self.row_sizes[bi] {
                    for c in self.band_cols(bj, r) {
                        let v = self.data[start + r * w + c + self.lambda - r];
                        f(bi, bj, r, c, v);
                    }
                }
            }
        }
    }

    /// Nonzero entries as global `(row, col, value)` triples in row-block order.
    pub fn entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        self.for_each_stored(|bi, bj, r, c, v| {
            if v != 0.0 {
                out.push((self.row_offsets[bi] + r, self.col_offsets[bj] + c, v));
            }
        });
        out
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.ncols()]; self.nrows()];
        for (r, c, v) in self.entries() {
            d[r][c] = v;
        }
        d
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "matvec with {} columns against vector of length {}",
                self.ncols(),
                v.len()
            )));
        }
        let mut y = vec![0.0; self.nrows()];
        let w = self.width();
        for bi in 0..self.row_sizes.len() {
            let ro = self.row_offsets[bi];
            for bj in self.block_cols(bi) {
                let start = match self.block_start(bi, bj) {
                    Some(s) => s,
                    None => continue,
                };
                let co = self.col_offsets[bj];
                for r in 0..self.row_sizes[bi] {
                    let mut acc = 0.0;
                    for c in self.band_cols(bj, r) {
                        acc += self.data[start + r * w + c + self.lambda - r] * v[co + c];
                    }
                    y[ro + r] += acc;
                }
            }
        }
        Ok(y)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(
            self.col_sizes.clone(),
            self.row_sizes.clone(),
            (self.u, self.l),
            (self.mu, self.lambda),
            self.ordering,
        );
        self.for_each_stored(|bi, bj, r, c, v| {
            if v != 0.0 {
                t.block_set(bj, bi, c, r, v).expect("transposed mask");
            }
        });
        t
    }

    pub fn scale(&mut self, s: f64) {
        for v in &mut self.data {
            *v *= s;
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        let mut m = self.clone();
        m.scale(s);
        m
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.row_sizes != other.row_sizes || self.col_sizes != other.col_sizes {
            return Err(Error::DimensionMismatch("block structures differ".into()));
        }
        if self.ordering != other.ordering {
            return Err(Error::OrderingMismatch {
                expected: format!("{:?}", self.ordering),
                found: format!("{:?}", other.ordering),
            });
        }
        Ok(())
    }

    /// `self + s·other` with the union of both masks.
    pub fn add_scaled(&self, s: f64, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let mut out = Self::zeros(
            self.row_sizes.clone(),
            self.col_sizes.clone(),
            (self.l.max(other.l), self.u.max(other.u)),
            (self.lambda.max(other.lambda), self.mu.max(other.mu)),
            self.ordering,
        );
        self.for_each_stored(|bi, bj, r, c, v| {
            if v != 0.0 {
                out.block_add(bi, bj, r, c, v).expect("union mask");
            }
        });
        other.for_each_stored(|bi, bj, r, c, v| {
            if v != 0.0 {
                out.block_add(bi, bj, r, c, s * v).expect("union mask");
            }
        });
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.add_scaled(1.0, other)
    }

    /// `self · other`; bandwidths add.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.col_sizes != other.row_sizes {
            return Err(Error::DimensionMismatch("inner block structures differ".into()));
        }
        if self.ordering != other.ordering {
            return Err(Error::OrderingMismatch {
                expected: format!("{:?}", self.ordering),
                found: format!("{:?}", other.ordering),
            });
        }
        let mut out = Self::zeros(
            self.row_sizes.clone(),
            other.col_sizes.clone(),
            (self.l + other.l, self.u + other.u),
            (self.lambda + other.lambda, self.mu + other.mu),
            self.ordering,
        );
        let wa = self.width();
        let wb = other.width();
        for bi in 0..self.row_sizes.len() {
            for bk in self.block_cols(bi) {
                let sa = match self.block_start(bi, bk) {
                    Some(s) => s,
                    None => continue,
                };
                for bj in other.block_cols(bk) {
                    let sb = match other.block_start(bk, bj) {
                        Some(s) => s,
                        None => continue,
                    };
                    let so = out.block_start(bi, bj).expect("product mask");
                    let wo = out.width();
                    for r in 0..self.row_sizes[bi] {
                        for s in self.band_cols(bk, r) {
                            let a = self.data[sa + r * wa + s + self.lambda - r];
                            if a == 0.0 {
                                continue;
                            }
                            for c in other.band_cols(bj, s) {
                                let b = other.data[sb + s * wb + c + other.lambda - s];
                                out.data[so + r * wo + c + out.lambda - r] += a * b;
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Keep the leading `row_sizes[b]` rows and `col_sizes[b]` columns of each
    /// retained block.
    pub fn truncate(&self, row_sizes: &[usize], col_sizes: &[usize]) -> Result<Self> {
        if row_sizes.len() > self.row_sizes.len()
            || col_sizes.len() > self.col_sizes.len()
            || row_sizes.iter().zip(&self.row_sizes).any(|(a, b)| a > b)
            || col_sizes.iter().zip(&self.col_sizes).any(|(a, b)| a > b)
        {
            return Err(Error::DimensionMismatch("truncation larger than source".into()));
        }
        let mut out = Self::zeros(
            row_sizes.to_vec(),
            col_sizes.to_vec(),
            (self.l, self.u),
            (self.lambda, self.mu),
            self.ordering,
        );
        self.for_each_stored(|bi, bj, r, c, v| {
            if v != 0.0 && bi < row_sizes.len() && bj < col_sizes.len() && r < row_sizes[bi] && c < col_sizes[bj] {
                out.block_set(bi, bj, r, c, v).expect("same mask");
            }
        });
        Ok(out)
    }

    /// Zero every stored entry with magnitude `≤ tol`.
    pub fn drop_below(&mut self, tol: f64) {
        for v in &mut self.data {
            if v.abs() <= tol {
                *v = 0.0;
            }
        }
    }

    /// Smallest `(L, U, λ, μ)` covering every entry above `tol`.
    pub fn observed_bandwidths(&self, tol: f64) -> (usize, usize, usize, usize) {
        let (mut l, mut u, mut lam, mut mu) = (0, 0, 0, 0);
        self.for_each_stored(|bi, bj, r, c, v| {
            if v.abs() > tol {
                if bi > bj {
                    l = l.max(bi - bj);
                } else {
                    u = u.max(bj - bi);
                }
                if r > c {
                    lam = lam.max(r - c);
                } else {
                    mu = mu.max(c - r);
                }
            }
        });
        (l, u, lam, mu)
    }

    /// Largest magnitude among entries outside the mask `(L, U, λ, μ)`.
    pub fn max_outside(&self, mask: (usize, usize, usize, usize)) -> f64 {
        let (l, u, lam, mu) = mask;
        let mut worst: f64 = 0.0;
        self.for_each_stored(|bi, bj, r, c, v| {
            let inside = bi <= bj + l && bj <= bi + u && r <= c + lam && c <= r + mu;
            if !inside {
                worst = worst.max(v.abs());
            }
        });
        worst
    }

    /// Largest magnitude in any off-diagonal block.
    pub fn max_off_diagonal_block(&self) -> f64 {
        let mut worst: f64 = 0.0;
        self.for_each_stored(|bi, bj, _, _, v| {
            if bi != bj {
                worst = worst.max(v.abs());
            }
        });
        worst
    }

    /// Relabel rows and columns (`perm[old] = new`) into a new block structure,
    /// sizing the bandwidths to fit the nonzeros exactly.
    pub fn permute(
        &self,
        row_perm: &[usize],
        col_perm: &[usize],
        row_sizes: Vec<usize>,
        col_sizes: Vec<usize>,
        ordering: Ordering,
    ) -> Result<Self> {
        if row_perm.len() != self.nrows() || col_perm.len() != self.ncols() {
            return Err(Error::DimensionMismatch("permutation length".into()));
        }
        let ro = offsets(&row_sizes);
        let co = offsets(&col_sizes);
        let mut moved = Vec::new();
        let (mut l, mut u, mut lam, mut mu) = (0usize, 0usize, 0usize, 0usize);
        for (r, c, v) in self.entries() {
            let (bi, lr) = locate(&ro, row_perm[r]).ok_or_else(|| Error::DimensionMismatch("row perm".into()))?;
            let (bj, lc) = locate(&co, col_perm[c]).ok_or_else(|| Error::DimensionMismatch("col perm".into()))?;
            if bi > bj {
                l = l.max(bi - bj);
            } else {
                u = u.max(bj - bi);
            }
            if lr > lc {
                lam = lam.max(lr - lc);
            } else {
                mu = mu.max(lc - lr);
            }
            moved.push((bi, bj, lr, lc, v));
        }
        let mut out = Self::zeros(row_sizes, col_sizes, (l, u), (lam, mu), ordering);
        for (bi, bj, r, c, v) in moved {
            out.block_set(bi, bj, r, c, v)?;
        }
        Ok(out)
    }

    pub fn with_ordering(mut self, ordering: Ordering) -> Self {
        self.ordering = ordering;
        self
    }

    pub(crate) fn from_raw(
        row_sizes: Vec<usize>,
        col_sizes: Vec<usize>,
        block_bandwidths: (usize, usize),
        sub_block_bandwidths: (usize, usize),
        ordering: Ordering,
        data: Vec<f64>,
    ) -> Result<Self> {
        let mut m = Self::zeros(row_sizes, col_sizes, block_bandwidths, sub_block_bandwidths, ordering);
        if m.block_bandwidths() != block_bandwidths || data.len() != m.data.len() {
            return Err(Error::Format("packed data does not match header".into()));
        }
        m.data = data;
        Ok(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng, sizes: Vec<usize>, bw: (usize, usize), sbw: (usize, usize)) -> BandedBlockBanded {
        let mut m = BandedBlockBanded::zeros(sizes.clone(), sizes, bw, sbw, Ordering::FourierMajor);
        let mut slots = vec![];
        m.for_each_stored(|bi, bj, r, c, _| slots.push((bi, bj, r, c)));
        for (bi, bj, r, c) in slots {
            m.block_set(bi, bj, r, c, rng.gen_range(-1.0..1.0)).unwrap();
        }
        m
    }

    fn dense_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let n = a.len();
        let m = b[0].len();
        let mut c = vec![vec![0.0; m]; n];
        for i in 0..n {
            for k in 0..b.len() {
                for j in 0..m {
                    c[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        c
    }

    #[test]
    fn mask_discipline() {
        let mut m = BandedBlockBanded::zeros(vec![3, 4], vec![3, 4], (0, 1), (1, 0), Ordering::DegreeMajor);
        assert!(m.block_set(0, 0, 0, 1, 1.0).is_err());
        assert!(m.block_set(1, 0, 0, 0, 1.0).is_err());
        m.block_set(0, 1, 2, 1, 2.0).unwrap();
        assert_eq!(m.get(2, 4), 2.0);
        assert_eq!(m.get(3, 0), 0.0);
    }

    #[test]
    fn matvec_and_matmul_match_dense() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let sizes: Vec<usize> = (0..=8).map(|n| 2 * n + 1).collect();
        let a = random(&mut rng, sizes.clone(), (1, 1), (2, 3));
        let b = random(&mut rng, sizes.clone(), (1, 2), (1, 1));
        let x: Vec<f64> = (0..a.ncols()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let da = a.to_dense();
        let y = a.matvec(&x).unwrap();
        for (i, row) in da.iter().enumerate() {
            let e: f64 = row.iter().zip(&x).map(|(p, q)| p * q).sum();
            assert!((e - y[i]).abs() < 1e-13);
        }
        let c = a.matmul(&b).unwrap().to_dense();
        let e = dense_mul(&da, &b.to_dense());
        for i in 0..c.len() {
            for j in 0..c.len() {
                assert!((c[i][j] - e[i][j]).abs() < 1e-13);
            }
        }
        let t = a.transpose().to_dense();
        for i in 0..c.len() {
            for j in 0..c.len() {
                assert_eq!(t[i][j], da[j][i]);
            }
        }
    }

    #[test]
    fn identity_matvec() {
        let m = BandedBlockBanded::identity(vec![1, 3, 5], Ordering::DegreeMajor);
        let v: Vec<f64> = (0..9).map(|i| i as f64).collect();
        assert_eq!(m.matvec(&v).unwrap(), v);
    }
}
