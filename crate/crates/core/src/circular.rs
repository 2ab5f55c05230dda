//! Orthonormal circular harmonics `Y_{k,i}` and their trigonometric product
//! integrals.

use crate::error::{Error, Result};
use std::f64::consts::{FRAC_1_SQRT_2, PI};

pub const Y0: f64 = FRAC_1_SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HarmonicIndex {
    pub k: usize,
    pub i: usize,
}

impl HarmonicIndex {
    pub fn new(k: usize, i: usize) -> Result<Self> {
        if i > 1 || (k == 0 && i == 1) {
            return Err(Error::InvalidHarmonicIndex { k, i });
        }
        Ok(HarmonicIndex { k, i })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Factor {
    One,
    Cos,
    Sin,
}

pub fn eval_y(index: HarmonicIndex, theta: f64) -> f64 {
    match (index.k, index.i) {
        (0, _) => Y0,
        (k, 0) => (k as f64 * theta).cos(),
        (k, _) => (k as f64 * theta).sin(),
    }
}

pub fn eval_y_checked(k: usize, i: usize, theta: f64) -> Result<f64> {
    Ok(eval_y(HarmonicIndex::new(k, i)?, theta))
}

/// `∫_0^{2π} Y_A Y_B f(θ) dθ` for `f ∈ {1, cos θ, sin θ}`.
pub fn product_integral(ya: HarmonicIndex, yb: HarmonicIndex, factor: Factor) -> f64 {
    // Y_{k,i} as a combination of e^{±ikθ}-free pieces: write each harmonic as
    // amplitude × (cos or sin) and use product-to-sum rules.
    let amp = |h: HarmonicIndex| if h.k == 0 { Y0 } else { 1.0 };
    let a = amp(ya) * amp(yb);
    let (k, j) = (ya.k as i64, yb.k as i64);
    let (i, h) = (ya.i, yb.i);
    match factor {
        Factor::One => {
            if k == j && i == h {
                if k == 0 {
                    2.0 * PI * a
                } else {
                    PI
                }
            } else {
                0.0
            }
        }
        Factor::Cos => {
            // trig(kθ) trig(jθ) cos θ
            a * triple(k, i, j, h, 1, 0)
        }
        Factor::Sin => a * triple(k, i, j, h, 1, 1),
    }
}

/// `∫_0^{2π} t_i(kθ) t_h(jθ) t_g(mθ) dθ` with `t_0 = cos`, `t_1 = sin`.
fn triple(k: i64, i: usize, j: i64, h: usize, m: i64, g: usize) -> f64 {
    // Each factor is a sum of exponentials; integrate term by term.
    let mut total = 0.0;
    for (s1, c1) in terms(i) {
        for (s2, c2) in terms(h) {
            for (s3, c3) in terms(g) {
                if s1 * k + s2 * j + s3 * m == 0 {
                    // product of complex coefficients; real part suffices
                    let (re, im) = cmul(cmul(c1, c2), c3);
                    let _ = im;
                    total += re;
                }
            }
        }
    }
    2.0 * PI * total
}

/// `cos x = (e^{ix} + e^{−ix})/2`, `sin x = (e^{ix} − e^{−ix})/(2i)`.
fn terms(kind: usize) -> [(i64, (f64, f64)); 2] {
    if kind == 0 {
        [(1, (0.5, 0.0)), (-1, (0.5, 0.0))]
    } else {
        [(1, (0.0, -0.5)), (-1, (0.0, 0.5))]
    }
}

fn cmul(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn idx(k: usize, i: usize) -> HarmonicIndex {
        HarmonicIndex::new(k, i).unwrap()
    }

    #[test]
    fn values() {
        assert_eq!(eval_y(idx(0, 0), 1.3), 0.7071067811865476);
        assert_eq!(eval_y(idx(1, 0), 0.0), 1.0);
        assert_abs_diff_eq!(eval_y(idx(2, 1), PI / 4.0), 1.0, epsilon = 1e-15);
        assert!(eval_y_checked(0, 1, 0.0).is_err());
    }

    #[test]
    fn product_integral_values() {
        assert_abs_diff_eq!(product_integral(idx(1, 0), idx(1, 0), Factor::One), PI, epsilon = 1e-14);
        assert_abs_diff_eq!(product_integral(idx(2, 0), idx(1, 0), Factor::Cos), PI / 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(product_integral(idx(0, 0), idx(1, 0), Factor::Cos), Y0 * PI, epsilon = 1e-14);
    }

    #[test]
    fn against_trapezoid() {
        let m = 2048;
        let nodes: Vec<f64> = (0..m).map(|l| 2.0 * PI * l as f64 / m as f64).collect();
        let w = 2.0 * PI / m as f64;
        let mut all = vec![];
        for k in 0..=12 {
            for i in 0..2 {
                if let Ok(h) = HarmonicIndex::new(k, i) {
                    all.push(h);
                }
            }
        }
        for &a in &all {
            for &b in &all {
                for (f, fac) in [(0, Factor::One), (1, Factor::Cos), (2, Factor::Sin)] {
                    let q: f64 = nodes
                        .iter()
                        .map(|t| {
                            let g = match f {
                                0 => 1.0,
                                1 => t.cos(),
                                _ => t.sin(),
                            };
                            w * eval_y(a, *t) * eval_y(b, *t) * g
                        })
                        .sum();
                    assert_abs_diff_eq!(product_integral(a, b, fac), q, epsilon = 1e-12);
                }
            }
        }
    }
}
