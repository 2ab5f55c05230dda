//! Multiplication operators `f ↦ v f` in coefficient space.
//!
//! A general `v` goes through the operator-valued Clenshaw recurrence with the
//! transposed Jacobi matrices in place of `(x, y, z)`. A `v` depending on `z`
//! alone decouples across Fourier modes and reduces to a 1D matrix function of
//! each mode's three-term recurrence.

use super::{algebraic::weight_chain, composite::truncate_to, from_modes, ladder, per_mode, ModeEntries, OperatorKind, OperatorSpec};
use crate::basis::{
    block_sizes, clenshaw, permutation, Axis, BasisSpec, CapBasis, CapPoint, ClenshawMatrices, CoefficientVector,
    OperatorAlgebra, Ordering,
};
use crate::circular::Y0;
use crate::error::{Error, Result};
use crate::semiclassical::{recurrence_table, RecurrenceTable, WeightParams};
use crate::structured::BandedBlockBanded;
use crate::transforms::expand;

/// Relative size below which trailing coefficient blocks are dropped.
pub const CHOP_TOL: f64 = 1e-14;

#[derive(Debug, Clone)]
pub enum Multiplication {
    /// `v(z) = Σ_n c_n R^{(a,0)}_n(z)`.
    Zonal { alpha: f64, a: usize, coeffs: Vec<f64> },
    General(CoefficientVector),
}

impl Multiplication {
    /// Expand `v` in `Q^{(0)}`, at the lowest degree that resolves it, and
    /// detect rotational invariance from the coefficients.
    pub fn from_function(v: impl Fn(&CapPoint) -> f64 + Sync, alpha: f64, max_degree: usize) -> Result<Self> {
        let c = expand_adaptive(v, &BasisSpec::new(alpha, 0, 0)?, CHOP_TOL, max_degree)?;
        Ok(Self::from_coefficients(c))
    }

    pub fn from_coefficients(c: CoefficientVector) -> Self {
        match zonal_coefficients(&c, CHOP_TOL) {
            Some(coeffs) => Multiplication::Zonal {
                alpha: c.spec.alpha,
                a: c.spec.a,
                coeffs,
            },
            None => Multiplication::General(c),
        }
    }

    /// A `z`-only function given directly.
    pub fn zonal(v: impl Fn(f64) -> f64 + Sync, alpha: f64, max_degree: usize) -> Result<Self> {
        Self::from_function(|p: &CapPoint| v(p.z), alpha, max_degree)
    }

    pub fn is_zonal(&self) -> bool {
        matches!(self, Multiplication::Zonal { .. })
    }

    /// Polynomial degree `N_v` of the expansion.
    pub fn degree(&self) -> usize {
        match self {
            Multiplication::Zonal { coeffs, .. } => coeffs.len() - 1,
            Multiplication::General(c) => c.spec.degree,
        }
    }

    /// Multiplication on `Q^{(spec.a)}` coefficients, FourierMajor, truncated
    /// to degree `spec.degree`.
    pub fn operator(&self, spec: &BasisSpec) -> Result<BandedBlockBanded> {
        if self.degree() > spec.degree {
            return Err(Error::Degree(format!(
                "coefficient degree {} exceeds operator degree {}",
                self.degree(),
                spec.degree
            )));
        }
        match self {
            Multiplication::General(c) => variable_coefficient(c, spec),
            Multiplication::Zonal { a, coeffs, .. } => {
                let table = recurrence_table(&WeightParams::new(spec.alpha, *a as f64, 0)?, coeffs.len() + 1)?;
                let nv = coeffs.len() - 1;
                let lad = ladder(spec.alpha, spec.a, spec.degree, nv + 4)?;
                let n = spec.degree;
                let modes = per_mode(n, |k| {
                    let len = n - k + 1;
                    let v = zonal_block(lad.family(k), &table, coeffs, len);
                    Ok(v.entries(len))
                })?;
                from_modes(n, (nv, nv), modes)
            }
        }
    }

    /// `T^{(0)→(1)} V T_W^{(1)→(0)}` with `V` on the `a = 0` family: maps
    /// `W^{(1)}` coefficients to `Q^{(1)}` coefficients.
    pub fn weighted_mass(&self, alpha: f64, degree: usize) -> Result<BandedBlockBanded> {
        match self {
            Multiplication::Zonal { a, coeffs, .. } => {
                let table = recurrence_table(&WeightParams::new(alpha, *a as f64, 0)?, coeffs.len() + 1)?;
                let nv = coeffs.len() - 1;
                let lad = ladder(alpha, 0, degree, nv + 5)?;
                let modes = per_mode(degree, |k| {
                    let len = degree - k + 1;
                    let fam = lad.family(k);
                    let v = zonal_block(fam, &table, coeffs, len + 1);
                    let step = &weight_chain(fam, 1)?[0];
                    Ok(conjugate(&v, &step.l, &step.e, len, nv + 1))
                })?;
                from_modes(degree, (nv + 1, nv + 1), modes)
            }
            Multiplication::General(_) => {
                let np = degree + 2;
                let spec = BasisSpec::new(alpha, 0, np)?;
                let v = self.operator(&spec)?;
                let t = super::assemble(&OperatorSpec::new(OperatorKind::ConvertUp, alpha, 0, 1, np)?)?;
                let tw = super::assemble(&OperatorSpec::new(OperatorKind::ConvertDown, alpha, 1, 1, np)?)?;
                let prod = t.matmul(&v)?.matmul(&tw)?;
                truncate_to(&prod, degree)
            }
        }
    }
}

/// Zonal part of `c`, as coefficients of `R^{(a,0)}_n`, when every `k ≥ 1`
/// coefficient is below `tol` relative to the largest.
pub fn zonal_coefficients(c: &CoefficientVector, tol: f64) -> Option<Vec<f64>> {
    let scale = c.max_abs();
    let dm = c.reorder(Ordering::DegreeMajor);
    let mut out = Vec::with_capacity(c.spec.degree + 1);
    for n in 0..=c.spec.degree {
        for l in 1..2 * n + 1 {
            if dm.values[n * n + l].abs() > tol * scale {
                return None;
            }
        }
        out.push(Y0 * dm.values[n * n]);
    }
    Some(out)
}

/// Expand `f` in `Q^{(spec.a)}` at doubling degrees until the last two blocks
/// fall below `tol`, then drop trailing negligible blocks.
pub fn expand_adaptive(
    f: impl Fn(&CapPoint) -> f64 + Sync,
    spec: &BasisSpec,
    tol: f64,
    max_degree: usize,
) -> Result<CoefficientVector> {
    let mut d = 8.min(max_degree);
    loop {
        let c = expand(&f, &spec.with_degree(d))?;
        let norms = c.block_norms();
        let scale = norms.iter().cloned().fold(0.0, f64::max);
        let tail = norms.iter().rev().take(2).cloned().fold(0.0, f64::max);
        if tail <= tol * scale || scale == 0.0 {
            let keep = norms.iter().rposition(|v| *v > tol * scale).unwrap_or(0);
            return Ok(c.resized(keep));
        }
        if d >= max_degree {
            return Err(Error::Degree(format!(
                "function not resolved by degree {max_degree}: tail {:e} relative",
                tail / scale
            )));
        }
        d = (2 * d).min(max_degree);
    }
}

/// Multiplication by `v` on `Q^{(spec.a)}` coefficients through operator
/// Clenshaw in DegreeMajor, reordered to FourierMajor.
pub fn variable_coefficient(v: &CoefficientVector, spec: &BasisSpec) -> Result<BandedBlockBanded> {
    let nv = v.spec.degree;
    if nv > spec.degree {
        return Err(Error::Degree(format!(
            "coefficient degree {nv} exceeds operator degree {}",
            spec.degree
        )));
    }
    let big = spec.degree + nv;
    let basis = CapBasis::new(spec.with_degree(big))?;
    let alg = OperatorAlgebra {
        x: basis.jacobi_matrix(Axis::X)?.transpose(),
        y: basis.jacobi_matrix(Axis::Y)?.transpose(),
        z: basis.jacobi_matrix(Axis::Z)?.transpose(),
    };
    let mats = ClenshawMatrices::new(&CapBasis::new(v.spec)?, nv)?;
    let dm = v.reorder(Ordering::DegreeMajor);
    let full = clenshaw(&alg, &mats, &dm.values)?;
    let sizes = block_sizes(spec.degree, Ordering::DegreeMajor);
    let small = full.truncate(&sizes, &sizes)?;
    let perm = permutation(spec.degree, Ordering::DegreeMajor, Ordering::FourierMajor);
    let fm = block_sizes(spec.degree, Ordering::FourierMajor);
    small.permute(&perm, &perm, fm.clone(), fm, Ordering::FourierMajor)
}

/// Square band matrix with half-bandwidth `w`.
struct Band {
    m: usize,
    w: usize,
    data: Vec<f64>,
}

impl Band {
    fn new(m: usize, w: usize) -> Self {
        Band {
            m,
            w,
            data: vec![0.0; m * (2 * w + 1)],
        }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        if i.abs_diff(j) > self.w || i >= self.m || j >= self.m {
            0.0
        } else {
            self.data[i * (2 * self.w + 1) + j + self.w - i]
        }
    }

    fn entries(&self, len: usize) -> ModeEntries {
        let mut out = ModeEntries::new();
        for i in 0..len {
            for j in i.saturating_sub(self.w)..(i + self.w + 1).min(len) {
                let v = self.get(i, j);
                if v != 0.0 {
                    out.push((i, j, v));
                }
            }
        }
        out
    }
}

/// Leading `len × len` block of `Σ c_n R_n(J)`, `J` the Jacobi matrix of
/// `family`, `R` orthonormal for `table`.
fn zonal_block(family: &RecurrenceTable, table: &RecurrenceTable, coeffs: &[f64], len: usize) -> Band {
    let nv = coeffs.len() - 1;
    let m = len + nv;
    let w = nv;
    let width = 2 * w + 1;
    let mut b1 = Band::new(m, w);
    let mut b2 = Band::new(m, w);
    for n in (0..=nv).rev() {
        let mut b = Band::new(m, w);
        for i in 0..m {
            b.data[i * width + w] = coeffs[n];
        }
        if n < nv {
            let (an, bn) = (table.alphas[n], table.betas[n]);
            let c = if n + 1 < nv { bn / table.betas[n + 1] } else { 0.0 };
            for i in 0..m {
                for j in i.saturating_sub(w)..(i + w + 1).min(m) {
                    // (J − α_n) b₁ at (i, j)
                    let mut jb = (family.alphas[i] - an) * b1.get(i, j);
                    if i > 0 {
                        jb += family.betas[i - 1] * b1.get(i - 1, j);
                    }
                    if i + 1 < m {
                        jb += family.betas[i] * b1.get(i + 1, j);
                    }
                    b.data[i * width + j + w - i] += jb / bn - c * b2.get(i, j);
                }
            }
        }
        b2 = std::mem::replace(&mut b1, b);
    }
    b1
}

/// `Lᵀ V L` truncated to `len × len`, `L` lower bidiagonal `(l, e)`.
fn conjugate(v: &Band, l: &[f64], e: &[f64], len: usize, w: usize) -> ModeEntries {
    let mut out = ModeEntries::new();
    for q in 0..len {
        for p in q.saturating_sub(w)..(q + w + 1).min(len) {
            let mut s = 0.0;
            for (sr, ls) in [(q, l[q]), (q + 1, e[q])] {
                for (tc, lt) in [(p, l[p]), (p + 1, e[p])] {
                    s += ls * v.get(sr, tc) * lt;
                }
            }
            if s != 0.0 {
                out.push((q, p, s));
            }
        }
    }
    out
}
