use super::{AngleFn, PdeProblem, ProblemKind};
use crate::basis::CapPoint;
use crate::error::{Error, Result};
use std::f64::consts::PI;
use std::sync::Arc;

/// Tail of the boundary Fourier series beyond degree `N` tolerated by
/// [`lift_boundary`].
pub const BOUNDARY_TAIL_TOL: f64 = 1e-10;

/// Fourier data of `c(θ) = a₀ + Σ_n a_n cos nθ + b_n sin nθ`, `n ≤ N`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryLift {
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl BoundaryLift {
    pub fn value(&self, theta: f64) -> f64 {
        (0..self.cos.len())
            .map(|n| {
                let (s, c) = (n as f64 * theta).sin_cos();
                self.cos[n] * c + self.sin[n] * s
            })
            .sum()
    }

    /// `(1/ρ²) ∂²_θ c` at `p`.
    pub fn laplacian(&self, p: &CapPoint) -> f64 {
        let theta = p.theta();
        let rho2 = 1.0 - p.z * p.z;
        let s: f64 = (1..self.cos.len())
            .map(|n| {
                let (sn, cn) = (n as f64 * theta).sin_cos();
                (n * n) as f64 * (self.cos[n] * cn + self.sin[n] * sn)
            })
            .sum();
        -s / rho2
    }
}

/// Trapezoid Fourier coefficients of `c` up to degree `N`; fails when
/// degrees `N + 1 ..= 2N + 1` carry more than [`BOUNDARY_TAIL_TOL`].
pub fn boundary_fourier(c: &dyn Fn(f64) -> f64, degree: usize) -> Result<BoundaryLift> {
    let top = 2 * degree + 1;
    let m = 2 * top + 2;
    let vals: Vec<f64> = (0..m).map(|j| c(2.0 * PI * j as f64 / m as f64)).collect();
    let mut cos = vec![0.0; top + 1];
    let mut sin = vec![0.0; top + 1];
    for n in 0..=top {
        let (mut a, mut b) = (0.0, 0.0);
        for (j, v) in vals.iter().enumerate() {
            let (s, co) = (2.0 * PI * (n * j) as f64 / m as f64).sin_cos();
            a += v * co;
            b += v * s;
        }
        let scale = if n == 0 { 1.0 } else { 2.0 } / m as f64;
        cos[n] = a * scale;
        sin[n] = b * scale;
    }
    let tail = (degree + 1..=top).map(|n| cos[n].abs().max(sin[n].abs())).fold(0.0, f64::max);
    if tail > BOUNDARY_TAIL_TOL {
        return Err(Error::BoundaryResolution { degree, tail });
    }
    cos.truncate(degree + 1);
    sin.truncate(degree + 1);
    Ok(BoundaryLift { cos, sin })
}

/// Replace `u = c(θ)` on `z = α` by zero data: with `u = ũ + c`, `ũ` solves
/// the same equation with right-hand side `f − k² v c − Δc`, where `c` is
/// extended into the cap independently of `z`.
pub fn lift_boundary(problem: &PdeProblem) -> Result<PdeProblem> {
    if problem.kind == ProblemKind::Biharmonic {
        return Err(Error::ParameterDomain("boundary lifting applies to Poisson and Helmholtz problems".into()));
    }
    let c: AngleFn = match &problem.boundary {
        Some(c) => c.clone(),
        None => return Ok(problem.clone()),
    };
    let lift = boundary_fourier(&*c, problem.degree)?;
    let f = problem.f.clone();
    let k2 = problem.k_wave.unwrap_or(0.0).powi(2);
    let v = problem.v.clone();
    let g = Arc::new(move |p: &CapPoint| {
        let mut g = f(p) - lift.laplacian(p);
        if let Some(v) = &v {
            if k2 != 0.0 {
                g -= k2 * v(p) * c(p.theta());
            }
        }
        g
    });
    Ok(PdeProblem {
        f: g,
        boundary: None,
        ..problem.clone()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fourier_of_trig_polynomial() {
        let l = boundary_fourier(&|t: f64| 1.0 + 2.0 * (3.0 * t).cos() - (2.0 * t).sin(), 4).unwrap();
        assert!((l.cos[0] - 1.0).abs() < 1e-14);
        assert!((l.cos[3] - 2.0).abs() < 1e-14);
        assert!((l.sin[2] + 1.0).abs() < 1e-14);
        assert!((l.value(0.7) - (1.0 + 2.0 * 2.1f64.cos() - 1.4f64.sin())).abs() < 1e-13);
    }

    #[test]
    fn unresolved_boundary() {
        let err = boundary_fourier(&|t: f64| (5.0 * t).cos(), 3).unwrap_err();
        assert!(matches!(err, Error::BoundaryResolution { .. }));
    }
}
