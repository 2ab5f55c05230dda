//! The cap basis `Q^{(a)}_{n,k,i}`, coefficient orderings, Jacobi matrices and
//! Clenshaw evaluation.

mod cap;
mod clenshaw;

pub use cap::{Axis, CapBasis};
pub use clenshaw::{
    clenshaw, evaluate, weight_factor, ClenshawAlgebra, Evaluator, ClenshawMatrices, OperatorAlgebra, PointAlgebra, SparseBlock,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Tolerance for `x² + y² + z² = 1`.
pub const SPHERE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CapPoint {
    /// A point on the unit sphere (no cap check).
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let r = x * x + y * y + z * z;
        if !((r - 1.0).abs() < SPHERE_TOL) {
            return Err(Error::InvalidPoint(format!(
                "({x}, {y}, {z}) has |p|² − 1 = {:e}",
                r - 1.0
            )));
        }
        Ok(CapPoint { x, y, z })
    }

    pub fn on_cap(x: f64, y: f64, z: f64, alpha: f64) -> Result<Self> {
        let p = Self::new(x, y, z)?;
        if z < alpha || z > 1.0 {
            return Err(Error::InvalidPoint(format!("z = {z} outside [{alpha}, 1]")));
        }
        Ok(p)
    }

    pub fn from_z_theta(z: f64, theta: f64) -> Self {
        let rho = (1.0 - z * z).max(0.0).sqrt();
        CapPoint {
            x: rho * theta.cos(),
            y: rho * theta.sin(),
            z,
        }
    }

    pub fn rho(&self) -> f64 {
        (1.0 - self.z * self.z).max(0.0).sqrt()
    }

    pub fn theta(&self) -> f64 {
        self.y.atan2(self.x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Ordering {
    DegreeMajor,
    FourierMajor,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisSpec {
    pub alpha: f64,
    pub a: usize,
    /// Maximum total degree `N`.
    pub degree: usize,
}

impl BasisSpec {
    pub fn new(alpha: f64, a: usize, degree: usize) -> Result<Self> {
        if !(alpha > -1.0 && alpha < 1.0) {
            return Err(Error::ParameterDomain(format!("alpha = {alpha} must lie in (-1, 1)")));
        }
        Ok(BasisSpec { alpha, a, degree })
    }

    pub fn dim(&self) -> usize {
        (self.degree + 1) * (self.degree + 1)
    }

    pub fn with_a(&self, a: usize) -> Self {
        BasisSpec { a, ..*self }
    }

    pub fn with_degree(&self, degree: usize) -> Self {
        BasisSpec { degree, ..*self }
    }

    pub fn block_sizes(&self, ordering: Ordering) -> Vec<usize> {
        block_sizes(self.degree, ordering)
    }
}

pub fn block_sizes(n_max: usize, ordering: Ordering) -> Vec<usize> {
    (0..=n_max)
        .map(|b| match ordering {
            Ordering::DegreeMajor => 2 * b + 1,
            Ordering::FourierMajor => mode_size(n_max, b),
        })
        .collect()
}

/// Position of `(k, i)` inside the degree-`n` block.
pub fn local_index(k: usize, i: usize) -> usize {
    if k == 0 {
        0
    } else {
        2 * k - 1 + i
    }
}

pub fn local_to_ki(l: usize) -> (usize, usize) {
    if l == 0 {
        (0, 0)
    } else {
        ((l + 1) / 2, (l + 1) % 2)
    }
}

pub fn degree_major_index(n: usize, k: usize, i: usize) -> usize {
    n * n + local_index(k, i)
}

pub fn mode_size(n_max: usize, k: usize) -> usize {
    if k == 0 {
        n_max + 1
    } else {
        2 * (n_max - k + 1)
    }
}

pub fn mode_offset(n_max: usize, k: usize) -> usize {
    if k == 0 {
        0
    } else {
        (n_max + 1) * (2 * k - 1) - k * (k - 1)
    }
}

/// Position of `(n, i)` inside the mode-`k` block.
pub fn mode_local_index(k: usize, n: usize, i: usize) -> usize {
    if k == 0 {
        n
    } else {
        2 * (n - k) + i
    }
}

pub fn mode_local_to_ni(k: usize, l: usize) -> (usize, usize) {
    if k == 0 {
        (l, 0)
    } else {
        (k + l / 2, l % 2)
    }
}

pub fn fourier_major_index(n_max: usize, n: usize, k: usize, i: usize) -> usize {
    mode_offset(n_max, k) + mode_local_index(k, n, i)
}

pub fn index_of(n_max: usize, ordering: Ordering, n: usize, k: usize, i: usize) -> usize {
    match ordering {
        Ordering::DegreeMajor => degree_major_index(n, k, i),
        Ordering::FourierMajor => fourier_major_index(n_max, n, k, i),
    }
}

/// All `(n, k, i)` in the given ordering.
pub fn indices(n_max: usize, ordering: Ordering) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::with_capacity((n_max + 1) * (n_max + 1));
    match ordering {
        Ordering::DegreeMajor => {
            for n in 0..=n_max {
                for l in 0..2 * n + 1 {
                    let (k, i) = local_to_ki(l);
                    out.push((n, k, i));
                }
            }
        }
        Ordering::FourierMajor => {
            for k in 0..=n_max {
                for l in 0..mode_size(n_max, k) {
                    let (n, i) = mode_local_to_ni(k, l);
                    out.push((n, k, i));
                }
            }
        }
    }
    out
}

/// `perm[p] = q` where position `p` in `from` holds the entry stored at `q`
/// in `to`.
pub fn permutation(n_max: usize, from: Ordering, to: Ordering) -> Vec<usize> {
    indices(n_max, from)
        .into_iter()
        .map(|(n, k, i)| index_of(n_max, to, n, k, i))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientVector {
    pub values: Vec<f64>,
    pub ordering: Ordering,
    pub spec: BasisSpec,
    /// Coefficients against `w^{(a,0)}(z) Q^{(a)}` rather than `Q^{(a)}`.
    pub weighted: bool,
}

impl CoefficientVector {
    pub fn zeros(spec: BasisSpec, ordering: Ordering, weighted: bool) -> Self {
        CoefficientVector {
            values: vec![0.0; spec.dim()],
            ordering,
            spec,
            weighted,
        }
    }

    pub fn from_values(values: Vec<f64>, spec: BasisSpec, ordering: Ordering, weighted: bool) -> Result<Self> {
        if values.len() != spec.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for degree {} (expected {})",
                values.len(),
                spec.degree,
                spec.dim()
            )));
        }
        Ok(CoefficientVector {
            values,
            ordering,
            spec,
            weighted,
        })
    }

    fn position(&self, n: usize, k: usize, i: usize) -> Result<usize> {
        if k > n || n > self.spec.degree || i > 1 || (k == 0 && i == 1) {
            return Err(Error::IndexOutOfRange(format!(
                "(n={n}, k={k}, i={i}) for degree {}",
                self.spec.degree
            )));
        }
        Ok(index_of(self.spec.degree, self.ordering, n, k, i))
    }

    pub fn get(&self, n: usize, k: usize, i: usize) -> Result<f64> {
        Ok(self.values[self.position(n, k, i)?])
    }

    pub fn set(&mut self, n: usize, k: usize, i: usize, v: f64) -> Result<()> {
        let p = self.position(n, k, i)?;
        self.values[p] = v;
        Ok(())
    }

    pub fn reorder(&self, target: Ordering) -> CoefficientVector {
        if target == self.ordering {
            return self.clone();
        }
        let perm = permutation(self.spec.degree, self.ordering, target);
        let mut values = vec![0.0; self.values.len()];
        for (p, q) in perm.iter().enumerate() {
            values[*q] = self.values[p];
        }
        CoefficientVector {
            values,
            ordering: target,
            spec: self.spec,
            weighted: self.weighted,
        }
    }

    /// 2-norm of each total-degree block.
    pub fn block_norms(&self) -> Vec<f64> {
        let mut sq = vec![0.0; self.spec.degree + 1];
        for ((n, _, _), v) in indices(self.spec.degree, self.ordering).into_iter().zip(&self.values) {
            sq[n] += v * v;
        }
        sq.into_iter().map(f64::sqrt).collect()
    }

    /// Zero-pad or truncate to a new degree, keeping the ordering.
    pub fn resized(&self, degree: usize) -> CoefficientVector {
        let spec = self.spec.with_degree(degree);
        let mut out = CoefficientVector::zeros(spec, self.ordering, self.weighted);
        for ((n, k, i), v) in indices(self.spec.degree, self.ordering).into_iter().zip(&self.values) {
            if n <= degree {
                out.values[index_of(degree, self.ordering, n, k, i)] = *v;
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Flat JSON `{alpha, a, N, ordering, weighted, values}`.
    pub fn to_json(&self) -> Result<String> {
        let file = CoefficientFile {
            alpha: self.spec.alpha,
            a: self.spec.a,
            degree: self.spec.degree,
            ordering: self.ordering,
            weighted: self.weighted,
            values: self.values.clone(),
        };
        serde_json::to_string_pretty(&file).map_err(|e| Error::Format(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: CoefficientFile = serde_json::from_str(s).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_values(f.values, BasisSpec::new(f.alpha, f.a, f.degree)?, f.ordering, f.weighted)
    }
}

#[derive(Serialize, Deserialize)]
struct CoefficientFile {
    alpha: f64,
    a: usize,
    #[serde(rename = "N")]
    degree: usize,
    ordering: Ordering,
    weighted: bool,
    values: Vec<f64>,
}
