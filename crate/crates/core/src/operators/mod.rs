//! Sparse differential, conversion and multiplication operators in the cap
//! basis. All assembled operators use the FourierMajor ordering, so every
//! operator except multiplication is block diagonal.

mod algebraic;
mod composite;
mod quadrature;
mod variable;

pub use composite::{biharmonic, helmholtz, rho2_laplacian};
pub use quadrature::assemble_by_quadrature;
pub use variable::{expand_adaptive, variable_coefficient, zonal_coefficients, Multiplication};

use crate::basis::{block_sizes, BasisSpec, Ordering};
use crate::error::{Error, Result};
use crate::semiclassical::FamilyLadder;
use crate::structured::BandedBlockBanded;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorKind {
    /// `∂_θ`, any `a`, weighted or not.
    Dtheta,
    /// `ρ ∂_φ : Q^{(a)} → Q^{(a+1)}`.
    Dphi,
    /// `ρ ∂_φ : W^{(a)} → W^{(a−1)}`.
    Wphi,
    /// `Δ : Q^{(a)} → Q^{(a+ã)}`.
    Laplacian,
    /// `Δ : W^{(a)} → W^{(a−ã)}`, `a ≥ 2`.
    WeightedLaplacian,
    /// `Δ : W^{(1)} → Q^{(1)}`.
    WeightedLaplacianA1,
    /// `Q^{(a)} → Q^{(a+ã)}`.
    ConvertUp,
    /// `W^{(a)} → W^{(a−ã)}`.
    ConvertDown,
    /// `ρ² Δ : W^{(1)} → Q^{(1)}`.
    Rho2Laplacian,
    /// `Δ² : W^{(2)} → Q^{(2)}`.
    Biharmonic,
    /// Multiplication by a function, `Q^{(a)} → Q^{(a)}`.
    VariableCoefficient,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub kind: OperatorKind,
    pub alpha: f64,
    pub a_in: usize,
    pub a_out: usize,
    pub weighted_in: bool,
    pub weighted_out: bool,
    /// Total degree `N` of input and output.
    pub degree: usize,
}

impl OperatorSpec {
    /// `atilde` is the parameter shift for `Laplacian`, `WeightedLaplacian`,
    /// `ConvertUp` and `ConvertDown`, and is ignored otherwise.
    pub fn new(kind: OperatorKind, alpha: f64, a: usize, atilde: usize, degree: usize) -> Result<Self> {
        BasisSpec::new(alpha, a, degree)?;
        use OperatorKind::*;
        let bad = |msg: String| Err(Error::ParameterDomain(msg));
        let (a_in, a_out, wi, wo) = match kind {
            Dtheta => (a, a, false, false),
            Dphi => (a, a + 1, false, false),
            Wphi => {
                if a < 1 {
                    return bad("weighted ρ∂_φ needs a ≥ 1".into());
                }
                (a, a - 1, true, true)
            }
            Laplacian => {
                if atilde < 2 {
                    return bad(format!("Laplacian shift {atilde} must be at least 2"));
                }
                (a, a + atilde, false, false)
            }
            WeightedLaplacian => {
                if a < 2 || atilde < 2 || atilde > a {
                    return bad(format!("weighted Laplacian needs 2 ≤ ã ≤ a, got a = {a}, ã = {atilde}"));
                }
                (a, a - atilde, true, true)
            }
            WeightedLaplacianA1 | Rho2Laplacian => (1, 1, true, false),
            Biharmonic => (2, 2, true, false),
            ConvertUp => {
                if atilde < 1 {
                    return bad("conversion shift must be at least 1".into());
                }
                (a, a + atilde, false, false)
            }
            ConvertDown => {
                if atilde < 1 || atilde > a {
                    return bad(format!("weighted conversion needs 1 ≤ ã ≤ a, got a = {a}, ã = {atilde}"));
                }
                (a, a - atilde, true, true)
            }
            VariableCoefficient => (a, a, false, false),
        };
        Ok(OperatorSpec {
            kind,
            alpha,
            a_in,
            a_out,
            weighted_in: wi,
            weighted_out: wo,
            degree,
        })
    }

    pub fn atilde(&self) -> usize {
        self.a_in.abs_diff(self.a_out)
    }

    pub fn input_spec(&self) -> BasisSpec {
        BasisSpec {
            alpha: self.alpha,
            a: self.a_in,
            degree: self.degree,
        }
    }

    pub fn output_spec(&self) -> BasisSpec {
        BasisSpec {
            alpha: self.alpha,
            a: self.a_out,
            degree: self.degree,
        }
    }

    /// Sub-block bandwidths `(λ, μ)` of the FourierMajor operator.
    /// Multiplication is not block diagonal and reports `(0, 0)` here.
    pub fn sub_block_bandwidths(&self) -> (usize, usize) {
        use OperatorKind::*;
        let t = self.atilde();
        match self.kind {
            Dtheta => (1, 1),
            Dphi => (2, 4),
            Wphi => (4, 2),
            Laplacian | ConvertUp => (0, 2 * t),
            WeightedLaplacian | ConvertDown => (2 * t, 0),
            WeightedLaplacianA1 => (2, 2),
            Rho2Laplacian => (6, 6),
            Biharmonic => (4, 4),
            VariableCoefficient => (0, 0),
        }
    }

    pub fn block_sizes(&self) -> Vec<usize> {
        block_sizes(self.degree, Ordering::FourierMajor)
    }
}

/// Build the operator described by `spec`.
pub fn assemble(spec: &OperatorSpec) -> Result<BandedBlockBanded> {
    use OperatorKind::*;
    match spec.kind {
        Dtheta => Ok(algebraic::dtheta(spec.degree)),
        ConvertUp => algebraic::convert_up(spec),
        ConvertDown => algebraic::convert_down(spec),
        WeightedLaplacianA1 => algebraic::weighted_laplacian_a1(spec),
        Dphi | Wphi | Laplacian | WeightedLaplacian => assemble_by_quadrature(spec, 0),
        Rho2Laplacian => rho2_laplacian(spec.alpha, spec.degree),
        Biharmonic => biharmonic(spec.alpha, spec.degree),
        VariableCoefficient => Err(Error::ParameterDomain(
            "multiplication operators need a coefficient function; use variable_coefficient".into(),
        )),
    }
}

/// Ladder of families `(a, 2k)` for `k ≤ N + 1` long enough for index
/// `N − k + extra`.
pub(crate) fn ladder(alpha: f64, a: usize, degree: usize, extra: usize) -> Result<FamilyLadder> {
    FamilyLadder::new(alpha, a as f64, degree + 1, |k| (degree + extra).saturating_sub(k))
}

/// Entries `(q, p, value)` of one Fourier mode in the `z`-index, applied to
/// both `i = 0, 1`.
pub(crate) type ModeEntries = Vec<(usize, usize, f64)>;

/// Interleave per-mode `z` matrices into a FourierMajor operator whose `z`
/// bandwidths are `(lower, upper)`.
pub(crate) fn from_modes(degree: usize, zband: (usize, usize), modes: Vec<ModeEntries>) -> Result<BandedBlockBanded> {
    let sizes = block_sizes(degree, Ordering::FourierMajor);
    let mut m = BandedBlockBanded::zeros(sizes.clone(), sizes, (0, 0), (2 * zband.0, 2 * zband.1), Ordering::FourierMajor);
    for (k, entries) in modes.into_iter().enumerate() {
        for (q, p, v) in entries {
            if k == 0 {
                m.block_set(0, 0, q, p, v)?;
            } else {
                m.block_set(k, k, 2 * q, 2 * p, v)?;
                m.block_set(k, k, 2 * q + 1, 2 * p + 1, v)?;
            }
        }
    }
    Ok(m)
}

/// Evaluate `f(k)` for every mode in parallel, in order.
pub(crate) fn per_mode<F>(degree: usize, f: F) -> Result<Vec<ModeEntries>>
where
    F: Fn(usize) -> Result<ModeEntries> + Sync,
{
    (0..=degree).into_par_iter().map(|k| f(k)).collect()
}

/// Row, column and value of every nonzero, for sparsity plots.
pub fn spy(m: &BandedBlockBanded, tol: f64) -> Vec<(usize, usize, f64)> {
    m.entries().into_iter().filter(|e| e.2.abs() > tol).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_validation() {
        assert!(OperatorSpec::new(OperatorKind::Wphi, 0.2, 0, 0, 5).is_err());
        assert!(OperatorSpec::new(OperatorKind::WeightedLaplacian, 0.2, 1, 2, 5).is_err());
        assert!(OperatorSpec::new(OperatorKind::Laplacian, 0.2, 0, 1, 5).is_err());
        let s = OperatorSpec::new(OperatorKind::ConvertDown, 0.2, 3, 2, 5).unwrap();
        assert_eq!((s.a_out, s.weighted_out), (1, true));
        assert_eq!(s.sub_block_bandwidths(), (4, 0));
    }
}
