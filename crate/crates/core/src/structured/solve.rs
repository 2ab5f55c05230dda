use super::{BandedBlockBanded, BandedMatrix};
use crate::basis::{CoefficientVector, Ordering};
use crate::error::{Error, Result};
use rayon::prelude::*;

/// Cross-mode entries at or below this magnitude count as decoupled.
pub const DECOUPLING_TOL: f64 = 1e-13;

/// One banded system per Fourier mode.
#[derive(Debug, Clone)]
pub struct FourierBlockSystem {
    pub blocks: Vec<BandedMatrix>,
    pub rhs: Vec<Vec<f64>>,
}

impl FourierBlockSystem {
    /// Solve every mode independently; the concatenation is the FourierMajor
    /// solution.
    pub fn solve(&self) -> Result<Vec<f64>> {
        let parts: Vec<Result<Vec<f64>>> = self
            .blocks
            .par_iter()
            .zip(self.rhs.par_iter())
            .enumerate()
            .map(|(k, (a, b))| {
                let lu = a.clone().lu().map_err(|e| match e {
                    Error::SingularSystem { pivot, .. } => Error::SingularSystem { mode: Some(k), pivot },
                    e => e,
                })?;
                let mut x = b.clone();
                lu.solve_in_place(&mut x);
                Ok(x)
            })
            .collect();
        let mut out = Vec::new();
        for p in parts {
            out.extend(p?);
        }
        Ok(out)
    }
}

fn check_square(a: &BandedBlockBanded, rhs: &CoefficientVector) -> Result<()> {
    if a.ordering() != Ordering::FourierMajor || rhs.ordering != Ordering::FourierMajor {
        return Err(Error::OrderingMismatch {
            expected: "FourierMajor".into(),
            found: format!("{:?} / {:?}", a.ordering(), rhs.ordering),
        });
    }
    if a.row_sizes() != a.col_sizes() || a.nrows() != rhs.values.len() {
        return Err(Error::DimensionMismatch(format!(
            "operator {}x{} against right-hand side of length {}",
            a.nrows(),
            a.ncols(),
            rhs.values.len()
        )));
    }
    Ok(())
}

pub fn partition_by_mode(a: &BandedBlockBanded, rhs: &CoefficientVector) -> Result<FourierBlockSystem> {
    check_square(a, rhs)?;
    let coupling = a.max_off_diagonal_block();
    if coupling > DECOUPLING_TOL {
        return Err(Error::NotDecoupled { max_entry: coupling });
    }
    let (lam, mu) = a.sub_block_bandwidths();
    let mut blocks: Vec<BandedMatrix> = a.row_sizes().iter().map(|&s| BandedMatrix::zeros(s, lam, mu)).collect();
    let mut err = None;
    a.for_each_stored(|bi, bj, r, c, v| {
        if bi == bj && v != 0.0 {
            if let Err(e) = blocks[bi].set(r, c, v) {
                err = Some(e);
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    let rhs = a
        .row_sizes()
        .iter()
        .enumerate()
        .map(|(b, &s)| rhs.values[a.row_offset(b)..a.row_offset(b) + s].to_vec())
        .collect();
    Ok(FourierBlockSystem { blocks, rhs })
}

/// Flatten to one scalar band and factor globally.
pub fn solve_coupled(a: &BandedBlockBanded, rhs: &CoefficientVector) -> Result<Vec<f64>> {
    check_square(a, rhs)?;
    let entries = a.entries();
    let (mut kl, mut ku) = (0usize, 0usize);
    for &(r, c, _) in &entries {
        if r > c {
            kl = kl.max(r - c);
        } else {
            ku = ku.max(c - r);
        }
    }
    let mut m = BandedMatrix::zeros(a.nrows(), kl, ku);
    for (r, c, v) in entries {
        m.set(r, c, v)?;
    }
    let lu = m.lu()?;
    let mut x = rhs.values.clone();
    lu.solve_in_place(&mut x);
    Ok(x)
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub solution: CoefficientVector,
    /// `‖A x − rhs‖_∞`.
    pub residual: f64,
    pub decoupled: bool,
}

/// Per-mode solve when the operator decouples, global banded solve otherwise.
pub fn solve(a: &BandedBlockBanded, rhs: &CoefficientVector) -> Result<SolveOutcome> {
    let (values, decoupled) = match partition_by_mode(a, rhs) {
        Ok(sys) => (sys.solve()?, true),
        Err(Error::NotDecoupled { .. }) => (solve_coupled(a, rhs)?, false),
        Err(e) => return Err(e),
    };
    let ax = a.matvec(&values)?;
    let residual = ax.iter().zip(&rhs.values).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
    let mut solution = rhs.clone();
    solution.values = values;
    Ok(SolveOutcome {
        solution,
        residual,
        decoupled,
    })
}
