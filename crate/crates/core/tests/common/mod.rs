//! Shared oracles: truncated Taylor jets in spherical angles and a dense
//! Galerkin assembly by 3D cap quadrature.
#![allow(dead_code)]

use spherical_cap::basis::{index_of, indices, CapBasis};
use spherical_cap::transforms::{antipode, CapQuadrature};
use spherical_cap::{BasisSpec, CapPoint, Ordering};

pub mod exact;

const D: usize = 5;

/// Taylor coefficients of `s^i t^j` with `i + j ≤ 4`, around `(φ₀, θ₀)`,
/// `φ` the polar angle (`z = cos φ`).
#[derive(Clone, Copy, Debug)]
pub struct Jet {
    c: [[f64; D]; D],
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [[0.0; D]; D];
        c[0][0] = v;
        Jet { c }
    }

    fn s_series(v: [f64; D]) -> Self {
        let mut c = [[0.0; D]; D];
        for i in 0..D {
            c[i][0] = v[i];
        }
        Jet { c }
    }

    fn t_series(v: [f64; D]) -> Self {
        let mut c = [[0.0; D]; D];
        c[0] = v;
        Jet { c }
    }

    pub fn value(&self) -> f64 {
        self.c[0][0]
    }

    pub fn add(&self, o: &Jet) -> Jet {
        let mut r = *self;
        for i in 0..D {
            for j in 0..D - i {
                r.c[i][j] += o.c[i][j];
            }
        }
        r
    }

    pub fn scale(&self, a: f64) -> Jet {
        let mut r = *self;
        for row in r.c.iter_mut() {
            for v in row.iter_mut() {
                *v *= a;
            }
        }
        r
    }

    pub fn mul(&self, o: &Jet) -> Jet {
        let mut r = [[0.0; D]; D];
        for i1 in 0..D {
            for j1 in 0..D - i1 {
                let a = self.c[i1][j1];
                if a == 0.0 {
                    continue;
                }
                for i2 in 0..D - i1 - j1 {
                    for j2 in 0..D - i1 - i2 - j1 {
                        r[i1 + i2][j1 + j2] += a * o.c[i2][j2];
                    }
                }
            }
        }
        Jet { c: r }
    }

    pub fn ds(&self) -> Jet {
        let mut r = [[0.0; D]; D];
        for i in 0..D - 1 {
            for j in 0..D - 1 - i {
                r[i][j] = (i + 1) as f64 * self.c[i + 1][j];
            }
        }
        Jet { c: r }
    }

    pub fn dt(&self) -> Jet {
        let mut r = [[0.0; D]; D];
        for i in 0..D - 1 {
            for j in 0..D - 1 - i {
                r[i][j] = (j + 1) as f64 * self.c[i][j + 1];
            }
        }
        Jet { c: r }
    }

    /// Reciprocal of a jet in `s` alone.
    pub fn recip_s(&self) -> Jet {
        let a: Vec<f64> = (0..D).map(|i| self.c[i][0]).collect();
        let mut b = [0.0; D];
        b[0] = 1.0 / a[0];
        for n in 1..D {
            let s: f64 = (1..=n).map(|j| a[j] * b[n - j]).sum();
            b[n] = -s / a[0];
        }
        Jet::s_series(b)
    }
}

fn trig_series(x0: f64, sine: bool) -> [f64; D] {
    // derivatives of sin/cos at x0 divided by n!
    let (s, c) = x0.sin_cos();
    let d = if sine { [s, c, -s, -c] } else { [c, -s, -c, s] };
    let mut out = [0.0; D];
    let mut f = 1.0;
    for n in 0..D {
        if n > 0 {
            f *= n as f64;
        }
        out[n] = d[n % 4] / f;
    }
    out
}

pub struct Frame {
    pub phi: f64,
    pub theta: f64,
    pub x: Jet,
    pub y: Jet,
    pub z: Jet,
    pub rho: Jet,
    cot: Jet,
    csc2: Jet,
}

impl Frame {
    pub fn at(p: &CapPoint) -> Frame {
        let phi = p.z.clamp(-1.0, 1.0).acos();
        let theta = p.y.atan2(p.x);
        let rho = Jet::s_series(trig_series(phi, true));
        let z = Jet::s_series(trig_series(phi, false));
        let ct = Jet::t_series(trig_series(theta, false));
        let st = Jet::t_series(trig_series(theta, true));
        let inv = rho.recip_s();
        Frame {
            phi,
            theta,
            x: rho.mul(&ct),
            y: rho.mul(&st),
            cot: z.mul(&inv),
            csc2: inv.mul(&inv),
            z,
            rho,
        }
    }

    /// Laplace–Beltrami operator in `(φ, θ)`.
    pub fn laplacian(&self, u: &Jet) -> Jet {
        let us = u.ds();
        us.ds().add(&self.cot.mul(&us)).add(&self.csc2.mul(&u.dt().dt()))
    }

    pub fn rho_dphi(&self, u: &Jet) -> Jet {
        self.rho.mul(&u.ds())
    }
}

/// Jets of `Q_{n,k,i}` (times `(z − α)^w` when `w > 0`) for all
/// `(n, k, i)` up to `basis.spec.degree`, in FourierMajor order.
pub fn basis_jets(basis: &CapBasis, f: &Frame, w: usize) -> Vec<Jet> {
    let n_max = basis.spec.degree;
    let alpha = basis.spec.alpha;
    let shifted = f.z.add(&Jet::constant(-alpha));
    let mut weight = Jet::constant(1.0);
    for _ in 0..w {
        weight = weight.mul(&shifted);
    }
    let mut out = vec![Jet::constant(0.0); (n_max + 1) * (n_max + 1)];
    let mut c = Jet::constant(1.0);
    let mut s = Jet::constant(0.0);
    for k in 0..=n_max {
        let t = basis.family(k);
        let mut r = vec![Jet::constant(1.0)];
        for m in 0..n_max - k {
            let a = f.z.add(&Jet::constant(-t.alphas[m]));
            let mut next = a.mul(&r[m]);
            if m > 0 {
                next = next.add(&r[m - 1].scale(-t.betas[m - 1]));
            }
            r.push(next.scale(1.0 / t.betas[m]));
        }
        for (m, rm) in r.iter().enumerate() {
            let base = weight.mul(rm);
            let n = m + k;
            if k == 0 {
                out[index_of(n_max, Ordering::FourierMajor, n, 0, 0)] = base.scale(std::f64::consts::FRAC_1_SQRT_2);
            } else {
                out[index_of(n_max, Ordering::FourierMajor, n, k, 0)] = base.mul(&c);
                out[index_of(n_max, Ordering::FourierMajor, n, k, 1)] = base.mul(&s);
            }
        }
        let cn = f.x.mul(&c).add(&f.y.mul(&s).scale(-1.0));
        s = f.x.mul(&s).add(&f.y.mul(&c));
        c = cn;
    }
    out
}

/// Galerkin matrix `G[row][col]`, FourierMajor, of `op` mapping
/// `Q^{(a_in)}` (or `w^{(a_in)} Q^{(a_in)}`) to coefficients in
/// `Q^{(a_out)}` (or `w^{(a_out)} Q^{(a_out)}`).
pub fn galerkin(
    alpha: f64,
    n: usize,
    a_in: usize,
    weighted_in: bool,
    a_out: usize,
    weighted_out: bool,
    op: impl Fn(&Frame, &Jet) -> f64,
) -> Vec<Vec<f64>> {
    let bin = CapBasis::new(BasisSpec::new(alpha, a_in, n).unwrap()).unwrap();
    let bout = CapBasis::new(BasisSpec::new(alpha, a_out, n).unwrap()).unwrap();
    let deg = 2 * n + a_in + a_out + 6;
    let quad = CapQuadrature::new(alpha, 0, deg / 2 + 2, deg + 2).unwrap();
    let dim = (n + 1) * (n + 1);
    let mut g = vec![vec![0.0; dim]; dim];
    let idx = indices(n, Ordering::FourierMajor);
    for (node, w) in quad.nodes.iter().zip(&quad.weights) {
        for p in [*node, antipode(node)] {
            let fr = Frame::at(&p);
            let jets = basis_jets(&bin, &fr, if weighted_in { a_in } else { 0 });
            let vals: Vec<f64> = jets.iter().map(|j| op(&fr, j)).collect();
            let ow = if weighted_out { 1.0 } else { (p.z - alpha).powi(a_out as i32) };
            for (r, &(nr, kr, ir)) in idx.iter().enumerate() {
                let q = bout.eval_q(nr, kr, ir, &p).unwrap() * ow * w;
                if q == 0.0 {
                    continue;
                }
                for (c, v) in vals.iter().enumerate() {
                    g[r][c] += v * q;
                }
            }
        }
    }
    for (r, &(_, kr, _)) in idx.iter().enumerate() {
        let norm = std::f64::consts::PI * bout.omega(kr);
        for v in g[r].iter_mut() {
            *v /= norm;
        }
    }
    g
}

pub fn max_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(x, y)| x.iter().zip(y).map(|(p, q)| (p - q).abs()))
        .fold(0.0, f64::max)
}
