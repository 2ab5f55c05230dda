//! Operators built as products of the basic ones. Factors are assembled two
//! degrees higher and the product truncated, so the retained entries equal
//! those of the exact (untruncated) product.

use super::{assemble, variable::Multiplication, OperatorKind, OperatorSpec};
use crate::basis::{block_sizes, Ordering};
use crate::error::Result;
use crate::structured::BandedBlockBanded;

const PAD: usize = 2;

fn op(kind: OperatorKind, alpha: f64, a: usize, atilde: usize, degree: usize) -> Result<BandedBlockBanded> {
    assemble(&OperatorSpec::new(kind, alpha, a, atilde, degree)?)
}

pub(crate) fn truncate_to(m: &BandedBlockBanded, degree: usize) -> Result<BandedBlockBanded> {
    let sizes = block_sizes(degree, Ordering::FourierMajor);
    m.truncate(&sizes, &sizes)
}

/// `ρ² Δ : W^{(1)} → Q^{(1)}` as `D_φ^{(0)} W_φ^{(1)} + T^{(0)→(1)} T_W^{(1)→(0)} D_θ²`.
pub fn rho2_laplacian(alpha: f64, degree: usize) -> Result<BandedBlockBanded> {
    use OperatorKind::*;
    let np = degree + PAD;
    let dphi = op(Dphi, alpha, 0, 0, np)?;
    let wphi = op(Wphi, alpha, 1, 0, np)?;
    let t = op(ConvertUp, alpha, 0, 1, np)?;
    let tw = op(ConvertDown, alpha, 1, 1, np)?;
    let dt = op(Dtheta, alpha, 1, 0, np)?;
    let first = dphi.matmul(&wphi)?;
    let second = t.matmul(&tw)?.matmul(&dt.matmul(&dt)?)?;
    truncate_to(&first.add(&second)?, degree)
}

/// `Δ² : W^{(2)} → Q^{(2)}` as `𝓛^{(0)→(2)} 𝓛_W^{(2)→(0)}`.
pub fn biharmonic(alpha: f64, degree: usize) -> Result<BandedBlockBanded> {
    use OperatorKind::*;
    let np = degree + PAD;
    let l = op(Laplacian, alpha, 0, 2, np)?;
    let lw = op(WeightedLaplacian, alpha, 2, 2, np)?;
    truncate_to(&l.matmul(&lw)?, degree)
}

/// `Δ_W^{(1)} + κ² T^{(0)→(1)} V T_W^{(1)→(0)} : W^{(1)} → Q^{(1)}`.
pub fn helmholtz(alpha: f64, degree: usize, kappa: f64, v: &Multiplication) -> Result<BandedBlockBanded> {
    use OperatorKind::*;
    let lap = op(WeightedLaplacianA1, alpha, 1, 0, degree)?;
    if kappa == 0.0 {
        return Ok(lap);
    }
    let mass = v.weighted_mass(alpha, degree)?;
    lap.add_scaled(kappa * kappa, &mass)
}
