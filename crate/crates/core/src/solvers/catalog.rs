//! Built-in right-hand sides, coefficients and exact solutions.

use super::PointFn;
use crate::basis::CapPoint;
use std::sync::Arc;

/// Centre `(x₀, y₀, z₀)` with `(x₀, z₀) = (0.7, 0.2)` on the unit sphere.
pub fn centre() -> [f64; 3] {
    let (x0, z0) = (0.7, 0.2);
    [x0, (1.0f64 - x0 * x0 - z0 * z0).sqrt(), z0]
}

/// `Δ[(z − α) y eˣ]`.
pub fn poisson_manufactured_rhs(alpha: f64) -> PointFn {
    Arc::new(move |p: &CapPoint| {
        let (x, y, z) = (p.x, p.y, p.z);
        let ex = x.exp();
        -2.0 * ex * y * z * (2.0 + x) + (z - alpha) * ex * (y * y * y + z * z * y - 4.0 * x * y - 2.0 * y)
    })
}

pub fn poisson_manufactured_solution(alpha: f64) -> PointFn {
    Arc::new(move |p: &CapPoint| (p.z - alpha) * p.y * p.x.exp())
}

/// Distance to the point `(ε + 1/√3)(1, 1, 1)` just off the sphere.
pub fn poisson_distance_rhs(eps: f64) -> PointFn {
    let c = eps + 1.0 / 3f64.sqrt();
    Arc::new(move |p: &CapPoint| ((p.x - c).powi(2) + (p.y - c).powi(2) + (p.z - c).powi(2)).sqrt())
}

/// `y eˣ (z − α)`.
pub fn helmholtz_rhs(alpha: f64) -> PointFn {
    Arc::new(move |p: &CapPoint| p.y * p.x.exp() * (p.z - alpha))
}

/// `1 − (3(x − x₀)² + 5(y − y₀)² + 2(z − z₀)²)`.
pub fn helmholtz_coefficient() -> PointFn {
    let [x0, y0, z0] = centre();
    Arc::new(move |p: &CapPoint| 1.0 - (3.0 * (p.x - x0).powi(2) + 5.0 * (p.y - y0).powi(2) + 2.0 * (p.z - z0).powi(2)))
}

/// `(1 + erf(5(1 − 10((x − 0.5)² + y²)))) ρ²`.
pub fn biharmonic_rhs() -> PointFn {
    Arc::new(|p: &CapPoint| {
        let r = (p.x - 0.5).powi(2) + p.y * p.y;
        (1.0 + libm::erf(5.0 * (1.0 - 10.0 * r))) * (1.0 - p.z * p.z)
    })
}

/// `exp(−ε |p − p₀|²)` about [`centre`].
pub fn biharmonic_gaussian_rhs(eps: f64) -> PointFn {
    let [x0, y0, z0] = centre();
    Arc::new(move |p: &CapPoint| (-eps * ((p.x - x0).powi(2) + (p.y - y0).powi(2) + (p.z - z0).powi(2))).exp())
}

pub fn constant(c: f64) -> PointFn {
    Arc::new(move |_: &CapPoint| c)
}
