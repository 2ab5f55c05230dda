//! Cap quadrature and coefficient expansion.
//!
//! Nodes pair a Gauss rule in `z` for the weight `(z − α)^a` with
//! Chebyshev–Gauss nodes `s_l = cos θ_l` on the upper half circle; every node
//! `(x, y, z)` implicitly carries its antipodal partner `(−x, −y, z)`.

use crate::basis::{mode_offset, BasisSpec, CapBasis, CapPoint, CoefficientVector, Ordering};
use crate::circular::Y0;
use crate::error::Result;
use crate::semiclassical::{gauss_rule, WeightParams};
use rayon::prelude::*;
use std::f64::consts::PI;

#[derive(Debug, Clone)]
pub struct CapQuadrature {
    pub alpha: f64,
    pub a: usize,
    /// `z` nodes and weights.
    pub t: Vec<f64>,
    pub wt: Vec<f64>,
    /// Half-circle angles `θ_l = (2l − 1)π / (2 M₂)`.
    pub theta: Vec<f64>,
    pub ws: f64,
    /// Node `j·M₂ + l` sits at `(ρ(t_j) cos θ_l, ρ(t_j) sin θ_l, t_j)`.
    pub nodes: Vec<CapPoint>,
    pub weights: Vec<f64>,
}

impl CapQuadrature {
    pub fn new(alpha: f64, a: usize, m1: usize, m2: usize) -> Result<Self> {
        let g = gauss_rule(&WeightParams::new(alpha, a as f64, 0)?, m1)?;
        let theta: Vec<f64> = (1..=m2).map(|l| (2 * l - 1) as f64 * PI / (2 * m2) as f64).collect();
        let ws = PI / m2 as f64;
        let mut nodes = Vec::with_capacity(m1 * m2);
        let mut weights = Vec::with_capacity(m1 * m2);
        for (t, w) in g.nodes.iter().zip(&g.weights) {
            for th in &theta {
                nodes.push(CapPoint::from_z_theta(*t, *th));
                weights.push(w * ws);
            }
        }
        Ok(CapQuadrature {
            alpha,
            a,
            t: g.nodes,
            wt: g.weights,
            theta,
            ws,
            nodes,
            weights,
        })
    }

    pub fn m1(&self) -> usize {
        self.t.len()
    }

    pub fn m2(&self) -> usize {
        self.theta.len()
    }

    /// `∫_Ω f (z − α)^a dA`, summing node then antipode, in node order.
    pub fn integrate(&self, f: impl Fn(&CapPoint) -> f64 + Sync) -> f64 {
        let vals: Vec<f64> = self
            .nodes
            .par_iter()
            .map(|p| f(p) + f(&antipode(p)))
            .collect();
        vals.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// Sample `f` at every node and antipode: `values[2j]` at node `j`,
    /// `values[2j + 1]` at its antipode.
    pub fn sample(&self, f: impl Fn(&CapPoint) -> f64 + Sync) -> Vec<f64> {
        let pairs: Vec<(f64, f64)> = self.nodes.par_iter().map(|p| (f(p), f(&antipode(p)))).collect();
        pairs.into_iter().flat_map(|(a, b)| [a, b]).collect()
    }
}

pub fn antipode(p: &CapPoint) -> CapPoint {
    CapPoint { x: -p.x, y: -p.y, z: p.z }
}

/// Rule exact for polynomials of total degree `≤ degree` against `(z − α)^a`.
pub fn cap_quadrature(spec: &BasisSpec, degree: usize) -> Result<CapQuadrature> {
    CapQuadrature::new(spec.alpha, spec.a, (degree + 1).div_ceil(2), degree + 1)
}

/// Grid used by [`expand`]: exact for products of two degree-`N` polynomials.
pub fn expansion_grid(spec: &BasisSpec) -> Result<CapQuadrature> {
    CapQuadrature::new(spec.alpha, spec.a, spec.degree + 1, spec.degree + 1)
}

/// Coefficients of `f` in `Q^{(a)}` up to degree `N`, FourierMajor.
pub fn expand(f: impl Fn(&CapPoint) -> f64 + Sync, spec: &BasisSpec) -> Result<CoefficientVector> {
    let grid = expansion_grid(spec)?;
    let values = grid.sample(f);
    expand_values(spec, &grid, &values)
}

/// As [`expand`] from values sampled in [`CapQuadrature::sample`] order.
pub fn expand_values(spec: &BasisSpec, grid: &CapQuadrature, values: &[f64]) -> Result<CoefficientVector> {
    let basis = CapBasis::new(*spec)?;
    expand_values_with(&basis, grid, values)
}

pub(crate) fn expand_values_with(basis: &CapBasis, grid: &CapQuadrature, values: &[f64]) -> Result<CoefficientVector> {
    let spec = basis.spec;
    let n = spec.degree;
    let m1 = grid.m1();
    let m2 = grid.m2();
    assert_eq!(values.len(), 2 * m1 * m2, "sample count");
    // Fourier stage: F[j][k][i] = Σ_l w_s [f(θ_l) Y(θ_l) + f(θ_l + π) Y(θ_l + π)]
    let fourier: Vec<Vec<[f64; 2]>> = (0..m1)
        .into_par_iter()
        .map(|j| {
            let mut out = vec![[0.0; 2]; n + 1];
            for l in 0..m2 {
                let f0 = values[2 * (j * m2 + l)];
                let f1 = values[2 * (j * m2 + l) + 1];
                let th = grid.theta[l];
                let even = f0 + f1;
                let odd = f0 - f1;
                out[0][0] += grid.ws * even * Y0;
                for (k, o) in out.iter_mut().enumerate().skip(1) {
                    let g = if k % 2 == 0 { even } else { odd };
                    let (s, c) = (k as f64 * th).sin_cos();
                    o[0] += grid.ws * g * c;
                    o[1] += grid.ws * g * s;
                }
            }
            out
        })
        .collect();
    // z stage per mode
    let modes: Vec<Vec<f64>> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let table = basis.family(k);
            let len = n - k + 1;
            let scale = 1.0 / (PI * table.omega);
            let mut acc = vec![[0.0; 2]; len];
            let mut r = vec![0.0; len];
            for j in 0..m1 {
                let t = grid.t[j];
                table.eval_upto(len - 1, t, &mut r).expect("table extent");
                let rho_k = (1.0 - t * t).max(0.0).sqrt().powi(k as i32);
                let w = grid.wt[j] * rho_k;
                let fj = fourier[j][k];
                for (a, rv) in acc.iter_mut().zip(&r) {
                    a[0] += w * rv * fj[0];
                    a[1] += w * rv * fj[1];
                }
            }
            if k == 0 {
                acc.iter().map(|a| a[0] * scale).collect()
            } else {
                acc.iter().flat_map(|a| [a[0] * scale, a[1] * scale]).collect()
            }
        })
        .collect();
    let mut out = CoefficientVector::zeros(spec, Ordering::FourierMajor, false);
    for (k, m) in modes.into_iter().enumerate() {
        let off = mode_offset(n, k);
        out.values[off..off + m.len()].copy_from_slice(&m);
    }
    Ok(out)
}
