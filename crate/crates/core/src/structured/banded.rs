use crate::error::{Error, Result};

/// Square banded matrix with room for the fill created by partial pivoting.
///
/// Row `i` stores columns `i − kl ..= i + ku + kl`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        BandedMatrix {
            n,
            kl,
            ku,
            data: vec![0.0; n * (2 * kl + ku + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    fn width(&self) -> usize {
        2 * self.kl + self.ku + 1
    }

    fn idx(&self, i: usize, j: usize) -> Option<usize> {
        if i >= self.n || j >= self.n || j + self.kl < i || j > i + self.ku + self.kl {
            return None;
        }
        Some(i * self.width() + j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if j > i + self.ku {
            return 0.0;
        }
        self.idx(i, j).map_or(0.0, |k| self.data[k])
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        if j > i + self.ku {
            return if v == 0.0 { Ok(()) } else { Err(Error::OutsideMask { row: i, col: j }) };
        }
        match self.idx(i, j) {
            Some(k) => {
                self.data[k] = v;
                Ok(())
            }
            None if v == 0.0 => Ok(()),
            None => Err(Error::OutsideMask { row: i, col: j }),
        }
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) -> Result<()> {
        let cur = self.get(i, j);
        self.set(i, j, cur + v)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (i, yi) in y.iter_mut().enumerate() {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku + 1).min(self.n);
            for j in lo..hi {
                *yi += self.data[i * self.width() + j + self.kl - i] * x[j];
            }
        }
        y
    }

    /// LU factorization with row partial pivoting restricted to the band.
    pub fn lu(mut self) -> Result<BandedLu> {
        let n = self.n;
        let w = self.width();
        let kl = self.kl;
        let mut piv = vec![0usize; n];
        for j in 0..n {
            let last = (j + kl).min(n.saturating_sub(1));
            let mut p = j;
            let mut best = self.data[j * w + kl].abs();
            for i in j + 1..=last {
                let v = self.data[i * w + j + kl - i].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if best == 0.0 || !best.is_finite() {
                return Err(Error::SingularSystem { mode: None, pivot: j });
            }
            piv[j] = p;
            let right = (j + self.ku + kl).min(n - 1);
            if p != j {
                for c in j..=right {
                    let a = j * w + c + kl - j;
                    let b = p * w + c + kl - p;
                    self.data.swap(a, b);
                }
            }
            let d = self.data[j * w + kl];
            for i in j + 1..=last {
                let li = i * w + j + kl - i;
                let m = self.data[li] / d;
                self.data[li] = m;
                if m != 0.0 {
                    for c in j + 1..=right {
                        let src = self.data[j * w + c + kl - j];
                        self.data[i * w + c + kl - i] -= m * src;
                    }
                }
            }
        }
        Ok(BandedLu { m: self, piv })
    }
}

#[derive(Debug, Clone)]
pub struct BandedLu {
    m: BandedMatrix,
    piv: Vec<usize>,
}

impl BandedLu {
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let n = self.m.n;
        let kl = self.m.kl;
        let w = self.m.width();
        let d = &self.m.data;
        for j in 0..n {
            let p = self.piv[j];
            if p != j {
                b.swap(j, p);
            }
            let bj = b[j];
            if bj != 0.0 {
                for i in j + 1..=(j + kl).min(n - 1) {
                    b[i] -= d[i * w + j + kl - i] * bj;
                }
            }
        }
        let reach = self.m.ku + kl;
        for i in (0..n).rev() {
            let mut acc = b[i];
            for c in i + 1..=(i + reach).min(n - 1) {
                acc -= d[i * w + c + kl - i] * b[c];
            }
            b[i] = acc / d[i * w + kl];
        }
    }
}
