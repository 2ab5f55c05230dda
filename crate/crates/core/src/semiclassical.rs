//! Univariate orthonormal polynomials `R_n^{(a,b)}` on `[α, 1]` with weight
//! `(x − α)^a (1 − x²)^{b/2}`.
//!
//! Normalization is against the ω-normalized inner product, so `R_0 ≡ 1` and
//! the recurrence reads `x R_n = β_n R_{n+1} + α_n R_n + β_{n−1} R_{n−1}`.
//!
//! Recurrence tables for `b = 0` come from the closed-form Jacobi coefficients
//! under the affine map `[−1, 1] → [α, 1]`. Even `b = 2k` is reached by applying
//! the factors `(1 − x)` and `(1 + x)` one at a time as Christoffel
//! transformations (Cholesky of the shifted Jacobi matrix). The Cholesky
//! factors double as exact connection coefficients between neighbouring
//! families, which the operator module reuses.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightParams {
    pub alpha: f64,
    pub a: f64,
    pub b: u32,
}

impl WeightParams {
    pub fn new(alpha: f64, a: f64, b: u32) -> Result<Self> {
        let p = WeightParams { alpha, a, b };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > -1.0 && self.alpha < 1.0) {
            return Err(Error::ParameterDomain(format!(
                "alpha = {} must lie in (-1, 1)",
                self.alpha
            )));
        }
        if !(self.a >= 0.0) || !self.a.is_finite() {
            return Err(Error::ParameterDomain(format!("a = {} must be >= 0", self.a)));
        }
        if self.b % 2 != 0 {
            return Err(Error::ParameterDomain(format!("b = {} must be even", self.b)));
        }
        Ok(())
    }

    pub fn weight(&self, x: f64) -> f64 {
        let s = (x - self.alpha).max(0.0);
        let r2 = (1.0 - x * x).max(0.0);
        pow_or_one(s, self.a) * r2.powi((self.b / 2) as i32)
    }
}

fn pow_or_one(x: f64, p: f64) -> f64 {
    if p == 0.0 {
        1.0
    } else if p.fract() == 0.0 && p <= i32::MAX as f64 {
        x.powi(p as i32)
    } else {
        x.powf(p)
    }
}

/// `ω = ∫_α^1 (x − α)^a (1 − x²)^{b/2} dx`, in closed form for even `b`.
pub fn normalization(params: &WeightParams) -> Result<f64> {
    params.validate()?;
    let h = params.b as usize / 2;
    let l = 1.0 - params.alpha;
    let c = 1.0 + params.alpha;
    // x = α + l t: l^{a+1+h} ∫_0^1 t^a (1 − t)^h (c + l t)^h dt
    let mut total = 0.0;
    for j in 0..=h {
        let coef = binom(h, j) * c.powi((h - j) as i32) * l.powi(j as i32);
        total += coef * beta_int(params.a + j as f64 + 1.0, h);
    }
    Ok(total * l.powf(params.a + 1.0 + h as f64))
}

fn binom(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

/// `B(x, h+1) = h! / (x (x+1) ... (x+h))` for integer `h`.
fn beta_int(x: f64, h: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..=h {
        r /= x + i as f64;
    }
    for i in 1..=h {
        r *= i as f64;
    }
    r
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceTable {
    pub params: WeightParams,
    pub alphas: Vec<f64>,
    pub betas: Vec<f64>,
    pub omega: f64,
}

impl RecurrenceTable {
    /// Highest `n` with both `α_n` and `β_n` available.
    pub fn n_max(&self) -> usize {
        self.alphas.len() - 1
    }

    pub fn truncated(&self, n_max: usize) -> Result<RecurrenceTable> {
        if n_max > self.n_max() {
            return Err(Error::TableExtent {
                requested: n_max,
                available: self.n_max(),
            });
        }
        Ok(RecurrenceTable {
            params: self.params,
            alphas: self.alphas[..=n_max].to_vec(),
            betas: self.betas[..=n_max].to_vec(),
            omega: self.omega,
        })
    }

    /// `R_0 .. R_n` at `x`.
    pub fn eval_upto(&self, n: usize, x: f64, out: &mut [f64]) -> Result<()> {
        self.check_extent(n)?;
        let out = &mut out[..=n];
        out[0] = 1.0;
        if n == 0 {
            return Ok(());
        }
        out[1] = (x - self.alphas[0]) / self.betas[0];
        for j in 1..n {
            out[j + 1] = ((x - self.alphas[j]) * out[j] - self.betas[j - 1] * out[j - 1]) / self.betas[j];
        }
        Ok(())
    }

    /// Values together with first and second derivatives, from differentiating the
    /// recurrence.
    pub fn eval_upto_derivs(
        &self,
        n: usize,
        x: f64,
        p: &mut [f64],
        dp: &mut [f64],
        d2p: &mut [f64],
    ) -> Result<()> {
        self.check_extent(n)?;
        p[0] = 1.0;
        dp[0] = 0.0;
        d2p[0] = 0.0;
        for j in 0..n {
            let (pm, dpm, d2pm, bm) = if j > 0 {
                (p[j - 1], dp[j - 1], d2p[j - 1], self.betas[j - 1])
            } else {
                (0.0, 0.0, 0.0, 0.0)
            };
            let t = x - self.alphas[j];
            let bj = self.betas[j];
            p[j + 1] = (t * p[j] - bm * pm) / bj;
            dp[j + 1] = (p[j] + t * dp[j] - bm * dpm) / bj;
            d2p[j + 1] = (2.0 * dp[j] + t * d2p[j] - bm * d2pm) / bj;
        }
        Ok(())
    }

    pub fn eval(&self, n: usize, x: f64, deriv_order: u8) -> Result<f64> {
        self.check_extent(n)?;
        let mut p = vec![0.0; n + 1];
        match deriv_order {
            0 => {
                self.eval_upto(n, x, &mut p)?;
                Ok(p[n])
            }
            1 | 2 => {
                let mut dp = vec![0.0; n + 1];
                let mut d2p = vec![0.0; n + 1];
                self.eval_upto_derivs(n, x, &mut p, &mut dp, &mut d2p)?;
                Ok(if deriv_order == 1 { dp[n] } else { d2p[n] })
            }
            d => Err(Error::ParameterDomain(format!("derivative order {d} not supported"))),
        }
    }

    /// Leading coefficient of `R_n`, `1/∏_{j<n} β_j`.
    pub fn leading_coefficient(&self, n: usize) -> f64 {
        self.betas[..n].iter().fold(1.0, |acc, b| acc / b)
    }

    fn check_extent(&self, n: usize) -> Result<()> {
        // R_{n} needs α_0..α_{n−1}, β_0..β_{n−1}
        if n > self.n_max() + 1 {
            return Err(Error::TableExtent {
                requested: n,
                available: self.n_max() + 1,
            });
        }
        Ok(())
    }
}

/// Orthonormal Jacobi recurrence on `[−1, 1]` for weight `(1 − t)^p (1 + t)^q`.
pub fn jacobi_recurrence(p: f64, q: f64, n_max: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = Vec::with_capacity(n_max + 1);
    let mut b = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let s = 2.0 * n as f64 + p + q;
        if n == 0 {
            a.push((q - p) / (p + q + 2.0));
        } else {
            a.push((q * q - p * p) / (s * (s + 2.0)));
        }
        let m = (n + 1) as f64;
        let s = 2.0 * m + p + q;
        b.push((4.0 * m * (m + p) * (m + q) * (m + p + q) / (s * s * (s + 1.0) * (s - 1.0))).sqrt());
    }
    (a, b)
}

fn base_table(alpha: f64, a: f64, n_max: usize) -> RecurrenceTable {
    let (ja, jb) = jacobi_recurrence(0.0, a, n_max);
    let half = (1.0 - alpha) / 2.0;
    RecurrenceTable {
        params: WeightParams { alpha, a, b: 0 },
        alphas: ja.iter().map(|t| alpha + half * (1.0 + t)).collect(),
        betas: jb.iter().map(|t| half * t).collect(),
        omega: (1.0 - alpha).powf(a + 1.0) / (a + 1.0),
    }
}

/// Cholesky factors of `s (J − c I) = L Lᵀ` where `L` has diagonal `l` and
/// subdiagonal `e`, plus the ratio `r = sqrt(ω / ω̃)` between the old and the
/// new normalizations.
///
/// With `p` the old and `p̃` the new orthonormal family (weight multiplied by
/// `s (x − c)`):
/// `p_n = r (l_n p̃_n + e_{n−1} p̃_{n−1})` and
/// `s (x − c) p̃_n = (l_n p_n + e_n p_{n+1}) / r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChristoffelStep {
    pub l: Vec<f64>,
    pub e: Vec<f64>,
    pub r: f64,
    pub shift: f64,
    pub sign: f64,
}

/// Multiply the weight by `sign·(x − shift)`, which must be positive on `(α, 1)`.
/// The new table is one entry shorter.
pub fn christoffel(table: &RecurrenceTable, shift: f64, sign: f64, new_params: WeightParams) -> Result<(RecurrenceTable, ChristoffelStep)> {
    let n = table.alphas.len();
    if n < 2 {
        return Err(Error::TableExtent { requested: 1, available: 0 });
    }
    let mut l = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in 0..n {
        let prev = if i > 0 { e[i - 1] * e[i - 1] } else { 0.0 };
        let d = sign * (table.alphas[i] - shift) - prev;
        if !(d > 0.0) || !d.is_finite() {
            return Err(Error::AccuracyLoss(format!(
                "non-positive pivot {d:e} at index {i} (alpha = {}, a = {}, b = {})",
                table.params.alpha, table.params.a, table.params.b
            )));
        }
        l[i] = d.sqrt();
        e[i] = sign * table.betas[i] / l[i];
    }
    let alphas: Vec<f64> = (0..n - 1).map(|i| shift + sign * (l[i] * l[i] + e[i] * e[i])).collect();
    let betas: Vec<f64> = (0..n - 1).map(|i| sign * l[i + 1] * e[i]).collect();
    if let Some(i) = betas.iter().position(|b| !(*b > 0.0)) {
        return Err(Error::AccuracyLoss(format!("non-positive beta at index {i}")));
    }
    let omega = sign * table.omega * (table.alphas[0] - shift);
    let r = (table.omega / omega).sqrt();
    Ok((
        RecurrenceTable {
            params: new_params,
            alphas,
            betas,
            omega,
        },
        ChristoffelStep { l, e, r, shift, sign },
    ))
}

/// The families `(a, 2k)` for `k = 0..=k_max` at fixed `(α, a)`, with the
/// Christoffel steps linking `(a, 2k)` to `(a, 2k + 2)`.
#[derive(Debug, Clone)]
pub struct FamilyLadder {
    pub alpha: f64,
    pub a: f64,
    pub families: Vec<RecurrenceTable>,
    /// `steps[k]` holds the `(1 − x)` then `(1 + x)` steps from `(a, 2k)`.
    pub steps: Vec<(ChristoffelStep, ChristoffelStep)>,
}

impl FamilyLadder {
    /// Every family `k` is built with `n_max ≥ min_len(k)`.
    pub fn new(alpha: f64, a: f64, k_max: usize, min_len: impl Fn(usize) -> usize) -> Result<Self> {
        WeightParams::new(alpha, a, 0)?;
        let n0 = (0..=k_max).map(|k| min_len(k) + 2 * k).max().unwrap_or(0) + 2;
        let mut families = Vec::with_capacity(k_max + 1);
        let mut steps = Vec::with_capacity(k_max);
        let mut cur = base_table(alpha, a, n0);
        for k in 0..=k_max {
            if k < k_max {
                let mid = WeightParams { alpha, a, b: 2 * k as u32 + 1 };
                let (t1, s1) = christoffel(&cur, 1.0, -1.0, mid)?;
                let (t2, s2) = christoffel(&t1, -1.0, 1.0, WeightParams { alpha, a, b: 2 * k as u32 + 2 })?;
                families.push(cur);
                steps.push((s1, s2));
                cur = t2;
            } else {
                families.push(cur.clone());
            }
        }
        Ok(FamilyLadder { alpha, a, families, steps })
    }

    pub fn family(&self, k: usize) -> &RecurrenceTable {
        &self.families[k]
    }

    pub fn k_max(&self) -> usize {
        self.families.len() - 1
    }
}

pub fn recurrence_table(params: &WeightParams, n_max: usize) -> Result<RecurrenceTable> {
    params.validate()?;
    let k = params.b as usize / 2;
    if k == 0 {
        return Ok(base_table(params.alpha, params.a, n_max));
    }
    let ladder = FamilyLadder::new(params.alpha, params.a, k, |j| if j == k { n_max } else { 0 })?;
    ladder.families[k].truncated(n_max)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule1D {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule1D {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

pub fn gauss_rule(params: &WeightParams, m: usize) -> Result<GaussRule1D> {
    if m == 0 {
        return Err(Error::ParameterDomain("gauss rule needs m >= 1".into()));
    }
    let table = recurrence_table(params, m - 1)?;
    gauss_from_table(&table, m)
}

/// Golub–Welsch on the leading `m × m` Jacobi matrix of `table`.
pub fn gauss_from_table(table: &RecurrenceTable, m: usize) -> Result<GaussRule1D> {
    if m == 0 {
        return Err(Error::ParameterDomain("gauss rule needs m >= 1".into()));
    }
    if m > table.alphas.len() {
        return Err(Error::TableExtent {
            requested: m - 1,
            available: table.n_max(),
        });
    }
    let mut d = table.alphas[..m].to_vec();
    let mut e = vec![0.0; m];
    e[..m - 1].copy_from_slice(&table.betas[..m - 1]);
    let mut z = vec![0.0; m];
    z[0] = 1.0;
    tridiagonal_ql(&mut d, &mut e, &mut z)?;
    let mut idx: Vec<usize> = (0..m).collect();
    idx.sort_by(|&i, &j| d[i].total_cmp(&d[j]));
    Ok(GaussRule1D {
        nodes: idx.iter().map(|&i| d[i]).collect(),
        weights: idx.iter().map(|&i| table.omega * z[i] * z[i]).collect(),
    })
}

/// Implicit QL for a symmetric tridiagonal matrix (`d` diagonal, `e[i]` couples
/// `i` and `i + 1`), tracking only the first row of the eigenvector matrix.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::AccuracyLoss("tridiagonal eigensolver did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let fz = z[i + 1];
                z[i + 1] = s * z[i] + c * fz;
                z[i] = c * z[i] - s * fz;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn normalization_closed_forms() {
        let p = WeightParams::new(0.2, 0.0, 0).unwrap();
        assert_relative_eq!(normalization(&p).unwrap(), 0.8, max_relative = 1e-14);
        let p = WeightParams::new(0.2, 1.0, 0).unwrap();
        assert_relative_eq!(normalization(&p).unwrap(), 0.32, max_relative = 1e-14);
        let p = WeightParams::new(0.2, 0.0, 2).unwrap();
        let expect = 0.8 - (1.0 - 0.2f64.powi(3)) / 3.0;
        assert_relative_eq!(normalization(&p).unwrap(), expect, max_relative = 1e-14);
        assert_relative_eq!(expect, 0.469_333_333_333_333_3, max_relative = 1e-15);
    }

    #[test]
    fn ladder_normalization_matches_closed_form() {
        for &alpha in &[-0.5, 0.2, 0.8] {
            for a in 0..3 {
                let ladder = FamilyLadder::new(alpha, a as f64, 6, |_| 4).unwrap();
                for k in 0..=6 {
                    let p = WeightParams::new(alpha, a as f64, 2 * k as u32).unwrap();
                    assert_relative_eq!(ladder.family(k).omega, normalization(&p).unwrap(), max_relative = 1e-13);
                }
            }
        }
    }

    #[test]
    fn shifted_legendre_midpoint() {
        let t = recurrence_table(&WeightParams::new(0.2, 0.0, 0).unwrap(), 3).unwrap();
        for a in &t.alphas {
            assert_relative_eq!(*a, 0.6, epsilon = 1e-15);
        }
    }

    #[test]
    fn one_point_rule() {
        let g = gauss_rule(&WeightParams::new(0.2, 0.0, 0).unwrap(), 1).unwrap();
        assert_relative_eq!(g.nodes[0], 0.6, epsilon = 1e-15);
        assert_relative_eq!(g.weights[0], 0.8, epsilon = 1e-15);
    }

    #[test]
    fn degree_one_value() {
        let p = WeightParams::new(0.2, 0.0, 0).unwrap();
        let t = recurrence_table(&p, 2).unwrap();
        let x = 0.37;
        assert_relative_eq!(t.eval(1, x, 0).unwrap(), (x - 0.6) / t.betas[0], epsilon = 1e-15);
        assert_eq!(t.eval(0, x, 0).unwrap(), 1.0);
    }

    #[test]
    fn extent_error() {
        let t = recurrence_table(&WeightParams::new(0.2, 1.0, 2).unwrap(), 3).unwrap();
        assert!(matches!(t.eval(9, 0.5, 0), Err(Error::TableExtent { .. })));
    }

    #[test]
    fn invalid_params() {
        assert!(WeightParams::new(1.0, 0.0, 0).is_err());
        assert!(WeightParams::new(0.2, -1.0, 0).is_err());
        assert!(WeightParams::new(0.2, 0.0, 3).is_err());
    }

    #[test]
    fn step_connection_identity() {
        let ladder = FamilyLadder::new(0.3, 1.0, 2, |_| 10).unwrap();
        let (s1, _) = &ladder.steps[0];
        let old = ladder.family(0);
        let mid = christoffel(old, 1.0, -1.0, WeightParams { alpha: 0.3, a: 1.0, b: 1 }).unwrap().0;
        let x = 0.55;
        let mut p = vec![0.0; 10];
        let mut q = vec![0.0; 10];
        old.eval_upto(9, x, &mut p).unwrap();
        mid.eval_upto(9, x, &mut q).unwrap();
        for n in 1..9 {
            let lhs = p[n];
            let rhs = s1.r * (s1.l[n] * q[n] + s1.e[n - 1] * q[n - 1]);
            assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
            let lhs = (1.0 - x) * q[n];
            let rhs = (s1.l[n] * p[n] + s1.e[n] * p[n + 1]) / s1.r;
            assert_relative_eq!(lhs, rhs, epsilon = 1e-12);
        }
    }
}
