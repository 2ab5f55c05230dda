use super::{
    block_sizes, degree_major_index, local_index, local_to_ki, BasisSpec, CapPoint, Ordering,
};
use crate::circular::{product_integral, Factor, HarmonicIndex, Y0};
use crate::error::{Error, Result};
use crate::semiclassical::{FamilyLadder, RecurrenceTable};
use crate::structured::BandedBlockBanded;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Recurrence data for every `R^{(a,2k)}` needed up to total degree `N + 1`.
#[derive(Debug, Clone)]
pub struct CapBasis {
    pub spec: BasisSpec,
    ladder: FamilyLadder,
}

impl CapBasis {
    pub fn new(spec: BasisSpec) -> Result<Self> {
        Self::with_headroom(spec, 0)
    }

    /// Tables reach total degree `N + 1 + extra`.
    pub fn with_headroom(spec: BasisSpec, extra: usize) -> Result<Self> {
        let top = spec.degree + 1 + extra;
        let ladder = FamilyLadder::new(spec.alpha, spec.a as f64, top + 1, |k| (top + 3).saturating_sub(k))?;
        Ok(CapBasis { spec, ladder })
    }

    pub fn ladder(&self) -> &FamilyLadder {
        &self.ladder
    }

    pub fn family(&self, k: usize) -> &RecurrenceTable {
        self.ladder.family(k)
    }

    /// `ω^{(a,2k)}`, so that `‖Q_{n,k,i}‖² = π ω^{(a,2k)}`.
    pub fn omega(&self, k: usize) -> f64 {
        self.ladder.family(k).omega
    }

    /// Highest total degree the tables support.
    pub fn max_degree(&self) -> usize {
        self.ladder.k_max() - 1
    }

    pub fn eval_q(&self, n: usize, k: usize, i: usize, p: &CapPoint) -> Result<f64> {
        HarmonicIndex::new(k, i)?;
        if k > n || n > self.max_degree() {
            return Err(Error::IndexOutOfRange(format!("(n={n}, k={k}, i={i})")));
        }
        let r = self.family(k).eval(n - k, p.z, 0)?;
        Ok(r * rho_k_y(k, i, p.x, p.y))
    }

    /// All `Q_{n,k,i}(p)` with `n ≤ degree`, in DegreeMajor order.
    pub fn eval_all(&self, p: &CapPoint, degree: usize) -> Vec<f64> {
        let mut out = vec![0.0; (degree + 1) * (degree + 1)];
        let mut r = vec![0.0; degree + 1];
        let (mut c, mut s) = (1.0, 0.0);
        for k in 0..=degree {
            self.family(k).eval_upto(degree - k, p.z, &mut r).expect("table extent");
            for m in 0..=degree - k {
                let n = m + k;
                if k == 0 {
                    out[degree_major_index(n, 0, 0)] = r[m] * Y0;
                } else {
                    out[degree_major_index(n, k, 0)] = r[m] * c;
                    out[degree_major_index(n, k, 1)] = r[m] * s;
                }
            }
            let (cn, sn) = (p.x * c - p.y * s, p.x * s + p.y * c);
            c = cn;
            s = sn;
        }
        out
    }

    /// Coefficient of `R^{(a,2k+2)}_q` in `R^{(a,2k)}_p`; nonzero for `p − 2 ≤ q ≤ p`.
    pub fn rho_conversion(&self, k: usize, q: usize, p: usize) -> f64 {
        let (s1, s2) = &self.ladder.steps[k];
        let r = s1.r * s2.r;
        if q == p {
            r * s2.l[p] * s1.l[p]
        } else if q + 1 == p {
            r * (s2.e[p - 1] * s1.l[p] + s2.l[p - 1] * s1.e[p - 1])
        } else if q + 2 == p {
            r * s2.e[p - 2] * s1.e[p - 1]
        } else {
            0.0
        }
    }

    /// Coefficient of `Q_{m,j,h}` in `coord · Q_{n,k,i}`.
    pub fn jacobi_coefficient(&self, axis: Axis, row: (usize, usize, usize), col: (usize, usize, usize)) -> f64 {
        let (n, k, i) = row;
        let (m, j, h) = col;
        if j > m || k > n || HarmonicIndex::new(j, h).is_err() || HarmonicIndex::new(k, i).is_err() {
            return 0.0;
        }
        match axis {
            Axis::Z => {
                if j != k || h != i {
                    return 0.0;
                }
                let t = self.family(k);
                let p = n - k;
                if m == n + 1 {
                    t.betas[p]
                } else if m == n {
                    t.alphas[p]
                } else if m + 1 == n && p > 0 {
                    t.betas[p - 1]
                } else {
                    0.0
                }
            }
            Axis::X | Axis::Y => {
                let factor = if axis == Axis::X { Factor::Cos } else { Factor::Sin };
                let theta = product_integral(HarmonicIndex { k, i }, HarmonicIndex { k: j, i: h }, factor) / PI;
                if theta == 0.0 {
                    return 0.0;
                }
                let p = n - k;
                let z = if j == k + 1 {
                    let q = m as isize - k as isize - 1;
                    if q < 0 {
                        0.0
                    } else {
                        self.rho_conversion(k, q as usize, p)
                    }
                } else if j + 1 == k {
                    let q = m + 1 - k;
                    self.omega(k) / self.omega(k - 1) * self.rho_conversion(k - 1, p, q)
                } else {
                    0.0
                };
                theta * z
            }
        }
    }

    /// `J_axis` with rows up to degree `row_degree` and columns up to
    /// `col_degree`, DegreeMajor.
    pub fn jacobi_matrix_sized(&self, axis: Axis, row_degree: usize, col_degree: usize) -> Result<BandedBlockBanded> {
        if row_degree.max(col_degree) > self.max_degree() {
            return Err(Error::TableExtent {
                requested: row_degree.max(col_degree),
                available: self.max_degree(),
            });
        }
        let sbw = match axis {
            Axis::X => (2, 2),
            Axis::Y => (3, 3),
            Axis::Z => (0, 0),
        };
        let mut m = BandedBlockBanded::zeros(
            block_sizes(row_degree, Ordering::DegreeMajor),
            block_sizes(col_degree, Ordering::DegreeMajor),
            (1, 1),
            sbw,
            Ordering::DegreeMajor,
        );
        for n in 0..=row_degree {
            for l in 0..2 * n + 1 {
                let (k, i) = local_to_ki(l);
                for mdeg in n.saturating_sub(1)..=(n + 1).min(col_degree) {
                    let (js, hs): (Vec<usize>, Vec<usize>) = match axis {
                        Axis::Z => (vec![k], vec![i]),
                        Axis::X => (vec![k.wrapping_sub(1), k + 1], vec![i, i]),
                        Axis::Y => (vec![k.wrapping_sub(1), k + 1], vec![1 - i, 1 - i]),
                    };
                    for (&j, &h) in js.iter().zip(&hs) {
                        if j > mdeg || HarmonicIndex::new(j, h).is_err() {
                            continue;
                        }
                        let v = self.jacobi_coefficient(axis, (n, k, i), (mdeg, j, h));
                        if v != 0.0 {
                            m.block_set(n, mdeg, l, local_index(j, h), v)?;
                        }
                    }
                }
            }
        }
        Ok(m)
    }

    pub fn jacobi_matrix(&self, axis: Axis) -> Result<BandedBlockBanded> {
        self.jacobi_matrix_sized(axis, self.spec.degree, self.spec.degree)
    }
}

/// `ρ^k Y_{k,i}` as a polynomial in `(x, y)`.
pub fn rho_k_y(k: usize, i: usize, x: f64, y: f64) -> f64 {
    if k == 0 {
        return Y0;
    }
    let (mut c, mut s) = (1.0, 0.0);
    for _ in 0..k {
        let cn = x * c - y * s;
        s = x * s + y * c;
        c = cn;
    }
    if i == 0 {
        c
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_point(rng: &mut ChaCha8Rng, alpha: f64) -> CapPoint {
        CapPoint::from_z_theta(rng.gen_range(alpha..1.0), rng.gen_range(0.0..2.0 * PI))
    }

    #[test]
    fn simple_values() {
        let b = CapBasis::new(BasisSpec::new(0.2, 1, 4).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = random_point(&mut rng, 0.2);
            assert_abs_diff_eq!(b.eval_q(0, 0, 0, &p).unwrap(), Y0, epsilon = 1e-15);
            assert_abs_diff_eq!(b.eval_q(1, 1, 0, &p).unwrap(), p.x, epsilon = 1e-14);
            let r1 = b.family(1).eval(1, p.z, 0).unwrap();
            assert_abs_diff_eq!(b.eval_q(2, 1, 1, &p).unwrap(), r1 * p.y, epsilon = 1e-14);
        }
        let pole = CapPoint::new(0.0, 0.0, 1.0).unwrap();
        assert_eq!(b.eval_q(3, 2, 0, &pole).unwrap(), 0.0);
    }

    #[test]
    fn jacobi_action() {
        let n = 10;
        let basis = CapBasis::new(BasisSpec::new(0.3, 1, n).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for axis in [Axis::X, Axis::Y, Axis::Z] {
            let j = basis.jacobi_matrix_sized(axis, n, n + 1).unwrap();
            for _ in 0..20 {
                let p = random_point(&mut rng, 0.3);
                let q = basis.eval_all(&p, n + 1);
                let jq = j.matvec(&q).unwrap();
                let c = match axis {
                    Axis::X => p.x,
                    Axis::Y => p.y,
                    Axis::Z => p.z,
                };
                for r in 0..(n + 1) * (n + 1) {
                    assert_abs_diff_eq!(jq[r], c * q[r], epsilon = 1e-10);
                }
            }
        }
    }

    #[test]
    fn mirror_symmetry() {
        let basis = CapBasis::new(BasisSpec::new(0.2, 0, 6).unwrap()).unwrap();
        for n in 0..=5usize {
            for k in 0..=n {
                for i in 0..2 {
                    if k == 0 && i == 1 {
                        continue;
                    }
                    for m in n.saturating_sub(1)..=n + 1 {
                        for j in [k.wrapping_sub(1), k + 1] {
                            if j > m {
                                continue;
                            }
                            let ax = basis.jacobi_coefficient(Axis::X, (n, k, i), (m, j, i));
                            if j == 0 && i == 1 {
                                continue;
                            }
                            let h = 1 - i;
                            if j == 0 && h == 1 {
                                continue;
                            }
                            let by = basis.jacobi_coefficient(Axis::Y, (n, k, i), (m, j, h));
                            assert_abs_diff_eq!(ax.abs(), by.abs(), epsilon = 1e-14);
                        }
                    }
                }
            }
        }
    }
}
