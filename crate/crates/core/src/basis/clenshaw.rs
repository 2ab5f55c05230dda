use super::{local_index, Axis, BasisSpec, CapBasis, CapPoint, CoefficientVector, Ordering};
use crate::circular::Y0;
use crate::error::{Error, Result};
use crate::structured::BandedBlockBanded;

#[derive(Debug, Clone, PartialEq)]
pub struct SparseBlock {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SparseBlock {
    fn new(rows: usize, cols: usize) -> Self {
        SparseBlock {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.cols]; self.rows];
        for &(r, c, v) in &self.entries {
            d[r][c] += v;
        }
        d
    }

    /// `self · other` as a dense matrix.
    pub fn mul_dense(&self, other: &SparseBlock) -> Vec<Vec<f64>> {
        let b = other.to_dense();
        let mut out = vec![vec![0.0; other.cols]; self.rows];
        for &(r, s, v) in &self.entries {
            for c in 0..other.cols {
                out[r][c] += v * b[s][c];
            }
        }
        out
    }
}

/// Per-degree `A_n`, `B_n`, `C_n` (x, y, z blocks stacked) and the left
/// inverse `Dᵀ_n` of `A_n`.
#[derive(Debug, Clone)]
pub struct ClenshawMatrices {
    pub degree: usize,
    pub a: Vec<SparseBlock>,
    pub b: Vec<SparseBlock>,
    /// `c[0]` is empty.
    pub c: Vec<SparseBlock>,
    pub dt: Vec<SparseBlock>,
}

impl ClenshawMatrices {
    pub fn new(basis: &CapBasis, degree: usize) -> Result<Self> {
        let jx = basis.jacobi_matrix_sized(Axis::X, degree, degree + 1)?;
        let jy = basis.jacobi_matrix_sized(Axis::Y, degree, degree + 1)?;
        let jz = basis.jacobi_matrix_sized(Axis::Z, degree, degree + 1)?;
        let mut a = Vec::with_capacity(degree + 1);
        let mut b = Vec::with_capacity(degree + 1);
        let mut c = Vec::with_capacity(degree + 1);
        for n in 0..=degree {
            let rows = 3 * (2 * n + 1);
            let mut an = SparseBlock::new(rows, 2 * n + 3);
            let mut bn = SparseBlock::new(rows, 2 * n + 1);
            let mut cn = SparseBlock::new(rows, (2 * n).saturating_sub(1));
            for (s, j) in [&jx, &jy, &jz].into_iter().enumerate() {
                let shift = s * (2 * n + 1);
                for r in 0..2 * n + 1 {
                    for col in 0..2 * n + 3 {
                        let v = j.block_get(n, n + 1, r, col);
                        if v != 0.0 {
                            an.entries.push((shift + r, col, v));
                        }
                        if col < 2 * n + 1 {
                            let v = j.block_get(n, n, r, col);
                            if v != 0.0 {
                                bn.entries.push((shift + r, col, v));
                            }
                        }
                        if n > 0 && col + 1 < 2 * n {
                            let v = j.block_get(n, n - 1, r, col);
                            if v != 0.0 {
                                cn.entries.push((shift + r, col, v));
                            }
                        }
                    }
                }
            }
            a.push(an);
            b.push(bn);
            c.push(cn);
        }
        let dt = (0..=degree).map(|n| left_inverse(basis, n)).collect::<Result<Vec<_>>>()?;
        Ok(ClenshawMatrices { degree, a, b, c, dt })
    }
}

fn nonzero(v: f64, what: &str) -> Result<f64> {
    if v == 0.0 || !v.is_finite() {
        return Err(Error::AccuracyLoss(format!("degenerate recurrence coefficient {what}")));
    }
    Ok(v)
}

/// Explicit sparse `Dᵀ_n` with `Dᵀ_n A_n = I`.
fn left_inverse(basis: &CapBasis, n: usize) -> Result<SparseBlock> {
    let m = 2 * n + 1;
    let mut d = SparseBlock::new(2 * n + 3, 3 * m);
    let gamma3 = |k: usize| basis.family(k).betas[n - k];
    if n == 0 {
        let a6 = basis.jacobi_coefficient(Axis::X, (0, 0, 0), (1, 1, 0));
        let b6 = basis.jacobi_coefficient(Axis::Y, (0, 0, 0), (1, 1, 1));
        d.entries.push((0, 2, 1.0 / nonzero(gamma3(0), "gamma")?));
        d.entries.push((1, 0, 1.0 / nonzero(a6, "alpha_6")?));
        d.entries.push((2, 1, 1.0 / nonzero(b6, "beta_6")?));
        return Ok(d);
    }
    for k in 0..=n {
        let g = 1.0 / nonzero(gamma3(k), "gamma")?;
        for i in 0..2 {
            if k == 0 && i == 1 {
                continue;
            }
            let l = local_index(k, i);
            d.entries.push((l, 2 * m + l, g));
        }
    }
    let g_prev = nonzero(gamma3(n - 1), "gamma")?;
    let b6 = nonzero(basis.jacobi_coefficient(Axis::Y, (n, n, 1), (n + 1, n + 1, 0)), "beta_6")?;
    let b5 = basis.jacobi_coefficient(Axis::Y, (n, n, 1), (n + 1, n - 1, 0));
    d.entries.push((2 * n + 1, m + local_index(n, 1), 1.0 / b6));
    d.entries.push((2 * n + 1, 2 * m + local_index(n - 1, 0), -b5 / (b6 * g_prev)));
    let a6 = nonzero(basis.jacobi_coefficient(Axis::X, (n, n, 1), (n + 1, n + 1, 1)), "alpha_6")?;
    d.entries.push((2 * n + 2, local_index(n, 1), 1.0 / a6));
    if n > 1 {
        let a5 = basis.jacobi_coefficient(Axis::X, (n, n, 1), (n + 1, n - 1, 1));
        d.entries.push((2 * n + 2, 2 * m + local_index(n - 1, 1), -a5 / (a6 * g_prev)));
    }
    Ok(d)
}

/// Scalar-like algebra the Clenshaw recurrence runs over: numbers for point
/// evaluation, matrices for operator-valued evaluation.
pub trait ClenshawAlgebra {
    type Elem: Clone;
    fn zero(&self) -> Self::Elem;
    fn scaled_identity(&self, c: f64) -> Self::Elem;
    /// `y += a·x`
    fn axpy(&self, a: f64, x: &Self::Elem, y: &mut Self::Elem);
    /// `x · coord`
    fn mul_coord(&self, x: &Self::Elem, axis: Axis) -> Result<Self::Elem>;
}

pub struct PointAlgebra {
    pub p: CapPoint,
}

impl ClenshawAlgebra for PointAlgebra {
    type Elem = f64;

    fn zero(&self) -> f64 {
        0.0
    }

    fn scaled_identity(&self, c: f64) -> f64 {
        c
    }

    fn axpy(&self, a: f64, x: &f64, y: &mut f64) {
        *y += a * x;
    }

    fn mul_coord(&self, x: &f64, axis: Axis) -> Result<f64> {
        Ok(x * match axis {
            Axis::X => self.p.x,
            Axis::Y => self.p.y,
            Axis::Z => self.p.z,
        })
    }
}

/// Matrices `X`, `Y`, `Z` substituted for the coordinates.
pub struct OperatorAlgebra {
    pub x: BandedBlockBanded,
    pub y: BandedBlockBanded,
    pub z: BandedBlockBanded,
}

impl ClenshawAlgebra for OperatorAlgebra {
    type Elem = BandedBlockBanded;

    fn zero(&self) -> BandedBlockBanded {
        BandedBlockBanded::zeros(
            self.z.row_sizes().to_vec(),
            self.z.col_sizes().to_vec(),
            (0, 0),
            (0, 0),
            self.z.ordering(),
        )
    }

    fn scaled_identity(&self, c: f64) -> BandedBlockBanded {
        BandedBlockBanded::identity(self.z.row_sizes().to_vec(), self.z.ordering()).scaled(c)
    }

    fn axpy(&self, a: f64, x: &BandedBlockBanded, y: &mut BandedBlockBanded) {
        if a != 0.0 {
            *y = y.add_scaled(a, x).expect("same structure");
        }
    }

    fn mul_coord(&self, x: &BandedBlockBanded, axis: Axis) -> Result<BandedBlockBanded> {
        x.matmul(match axis {
            Axis::X => &self.x,
            Axis::Y => &self.y,
            Axis::Z => &self.z,
        })
    }
}

/// `Σ f_{n,k,i} Q_{n,k,i}` over an algebra, for DegreeMajor `coeffs` up to
/// degree `mats.degree`.
pub fn clenshaw<A: ClenshawAlgebra>(alg: &A, mats: &ClenshawMatrices, coeffs: &[f64]) -> Result<A::Elem> {
    let top = mats.degree;
    if coeffs.len() != (top + 1) * (top + 1) {
        return Err(Error::DimensionMismatch(format!(
            "{} coefficients for Clenshaw matrices of degree {top}",
            coeffs.len()
        )));
    }
    let mut next: Vec<A::Elem> = Vec::new();
    let mut next2: Vec<A::Elem> = Vec::new();
    for n in (0..=top).rev() {
        let size = 2 * n + 1;
        let f = &coeffs[n * n..n * n + size];
        let mut xi: Vec<A::Elem> = f.iter().map(|c| alg.scaled_identity(*c)).collect();
        if n < top {
            let u = times_sparse(alg, &next, &mats.dt[n]);
            for j in 0..size {
                for (s, axis) in [Axis::X, Axis::Y, Axis::Z].into_iter().enumerate() {
                    let t = alg.mul_coord(&u[s * size + j], axis)?;
                    alg.axpy(1.0, &t, &mut xi[j]);
                }
            }
            for &(r, c, v) in &mats.b[n].entries {
                alg.axpy(-v, &u[r], &mut xi[c]);
            }
        }
        if n + 1 < top {
            let w = times_sparse(alg, &next2, &mats.dt[n + 1]);
            for &(r, c, v) in &mats.c[n + 1].entries {
                alg.axpy(-v, &w[r], &mut xi[c]);
            }
        }
        next2 = std::mem::replace(&mut next, xi);
    }
    let mut out = alg.zero();
    alg.axpy(Y0, &next[0], &mut out);
    Ok(out)
}

/// Row vector `ξᵀ D` for sparse `D`.
fn times_sparse<A: ClenshawAlgebra>(alg: &A, xi: &[A::Elem], d: &SparseBlock) -> Vec<A::Elem> {
    let mut out = vec![alg.zero(); d.cols];
    for &(r, c, v) in &d.entries {
        alg.axpy(v, &xi[r], &mut out[c]);
    }
    out
}

/// Point evaluation of a coefficient vector; weighted vectors pick up the
/// factor `(z − α)^a`.
pub fn evaluate(coeffs: &CoefficientVector, p: &CapPoint) -> Result<f64> {
    let basis = CapBasis::new(coeffs.spec)?;
    let mats = ClenshawMatrices::new(&basis, coeffs.spec.degree)?;
    evaluate_with(&mats, coeffs, p)
}

/// Repeated point evaluation of one coefficient vector.
#[derive(Debug, Clone)]
pub struct Evaluator {
    mats: ClenshawMatrices,
    coeffs: CoefficientVector,
}

impl Evaluator {
    pub fn new(coeffs: &CoefficientVector) -> Result<Self> {
        let basis = CapBasis::new(coeffs.spec)?;
        Ok(Evaluator {
            mats: ClenshawMatrices::new(&basis, coeffs.spec.degree)?,
            coeffs: coeffs.reorder(Ordering::DegreeMajor),
        })
    }

    pub fn eval(&self, p: &CapPoint) -> Result<f64> {
        evaluate_with(&self.mats, &self.coeffs, p)
    }
}

pub(crate) fn evaluate_with(mats: &ClenshawMatrices, coeffs: &CoefficientVector, p: &CapPoint) -> Result<f64> {
    let dm;
    let values = if coeffs.ordering == Ordering::DegreeMajor {
        &coeffs.values
    } else {
        dm = coeffs.reorder(Ordering::DegreeMajor);
        &dm.values
    };
    let v = clenshaw(&PointAlgebra { p: *p }, mats, values)?;
    Ok(if coeffs.weighted { v * weight_factor(&coeffs.spec, p.z) } else { v })
}

pub fn weight_factor(spec: &BasisSpec, z: f64) -> f64 {
    (z - spec.alpha).powi(spec.a as i32)
}
