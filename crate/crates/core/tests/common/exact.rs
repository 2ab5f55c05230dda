//! Exact per-mode operator entries for rational `α`, computed in the prime
//! field of order `2⁶¹ − 1`.
//!
//! Each entry is proportional to `∫_α^1 G_p S_q (z − α)^b (1 − z²)^k dz` with
//! monic input and output families. Every quantity is rational, so an entry
//! that is zero in the field is zero exactly up to a divisibility accident of
//! probability about `2⁻⁶¹`, and a nonzero residue proves a nonzero entry.

const P: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp(u64);

impl Fp {
    pub const ZERO: Fp = Fp(0);
    pub const ONE: Fp = Fp(1);

    pub fn int(v: i64) -> Fp {
        let r = v.rem_euclid(P as i64) as u64;
        Fp(r)
    }

    pub fn ratio(num: i64, den: i64) -> Fp {
        Fp::int(num).mul(Fp::int(den).inv())
    }

    pub fn add(self, o: Fp) -> Fp {
        let s = self.0 + o.0;
        Fp(if s >= P { s - P } else { s })
    }

    pub fn sub(self, o: Fp) -> Fp {
        self.add(Fp(P - o.0).reduce())
    }

    fn reduce(self) -> Fp {
        Fp(if self.0 >= P { self.0 - P } else { self.0 })
    }

    pub fn mul(self, o: Fp) -> Fp {
        let w = self.0 as u128 * o.0 as u128;
        let lo = (w as u64) & P;
        let hi = (w >> 61) as u64;
        Fp(lo + hi).reduce().reduce()
    }

    pub fn pow(self, mut e: u64) -> Fp {
        let (mut b, mut r) = (self, Fp::ONE);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(b);
            }
            b = b.mul(b);
            e >>= 1;
        }
        r
    }

    pub fn inv(self) -> Fp {
        assert!(self != Fp::ZERO, "division by a multiple of the field order");
        self.pow(P - 2)
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// Coefficients in increasing powers of `z`.
pub type Poly = Vec<Fp>;

fn padd(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Fp::ZERO; a.len().max(b.len())];
    for (i, v) in a.iter().enumerate() {
        out[i] = out[i].add(*v);
    }
    for (i, v) in b.iter().enumerate() {
        out[i] = out[i].add(*v);
    }
    out
}

fn pscale(a: &Poly, c: Fp) -> Poly {
    a.iter().map(|v| v.mul(c)).collect()
}

fn pmul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![Fp::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(x.mul(*y));
        }
    }
    out
}

fn pderiv(a: &Poly) -> Poly {
    if a.len() <= 1 {
        return vec![Fp::ZERO];
    }
    (1..a.len()).map(|i| a[i].mul(Fp::int(i as i64))).collect()
}

fn ppow(a: &Poly, e: usize) -> Poly {
    (0..e).fold(vec![Fp::ONE], |acc, _| pmul(&acc, a))
}

/// Exact setting: `α = num/den`.
pub struct Field {
    alpha: Fp,
    s: Poly,
    rho2: Poly,
    z: Poly,
}

impl Field {
    pub fn new(num: i64, den: i64) -> Self {
        let alpha = Fp::ratio(num, den);
        Field {
            alpha,
            s: vec![Fp::ZERO.sub(alpha), Fp::ONE],
            rho2: vec![Fp::ONE, Fp::ZERO, Fp::int(-1)],
            z: vec![Fp::ZERO, Fp::ONE],
        }
    }

    /// `μ_j = ∫_α^1 z^j (z − α)^b (1 − z²)^k dz` for `j < count`.
    fn moments(&self, b: usize, k: usize, count: usize) -> Vec<Fp> {
        let w = pmul(&ppow(&self.s, b), &ppow(&self.rho2, k));
        (0..count)
            .map(|j| {
                w.iter().enumerate().fold(Fp::ZERO, |acc, (i, c)| {
                    let e = (i + j + 1) as u64;
                    let diff = Fp::ONE.sub(self.alpha.pow(e));
                    acc.add(c.mul(diff).mul(Fp::int(e as i64).inv()))
                })
            })
            .collect()
    }

    fn inner(mu: &[Fp], f: &Poly, g: &Poly) -> Fp {
        let mut acc = Fp::ZERO;
        for (i, x) in f.iter().enumerate() {
            for (j, y) in g.iter().enumerate() {
                acc = acc.add(x.mul(*y).mul(mu[i + j]));
            }
        }
        acc
    }

    /// Monic orthogonal polynomials of degree `< len` for `(z − α)^a (1 − z²)^k`.
    pub fn monic_family(&self, a: usize, k: usize, len: usize) -> Vec<Poly> {
        let mu = self.moments(a, k, 2 * len + 2);
        let mut out: Vec<Poly> = vec![vec![Fp::ONE]];
        let mut norms = vec![Self::inner(&mu, &out[0], &out[0])];
        while out.len() < len {
            let n = out.len() - 1;
            let zp = pmul(&self.z, &out[n]);
            let an = Self::inner(&mu, &zp, &out[n]).mul(norms[n].inv());
            let mut next = padd(&zp, &pscale(&out[n], Fp::ZERO.sub(an)));
            if n > 0 {
                let bn = norms[n].mul(norms[n - 1].inv());
                next = padd(&next, &pscale(&out[n - 1], Fp::ZERO.sub(bn)));
            }
            norms.push(Self::inner(&mu, &next, &next));
            out.push(next);
        }
        out
    }

    /// `L_k h = ρ² h'' − 2(k + 1) z h' − k(k + 1) h`.
    fn lk(&self, k: usize, h: &Poly) -> Poly {
        let d = pderiv(h);
        let kf = k as i64;
        let t1 = pmul(&self.rho2, &pderiv(&d));
        let t2 = pscale(&pmul(&self.z, &d), Fp::int(-2 * (kf + 1)));
        let t3 = pscale(h, Fp::int(-kf * (kf + 1)));
        padd(&padd(&t1, &t2), &t3)
    }

    /// `z`-profile of an operator applied to `ρ^k p(z) Y_{k,i}`.
    pub fn profile(&self, kind: Profile, k: usize, a: usize, p: &Poly) -> Poly {
        let kz = pscale(&self.z, Fp::int(k as i64));
        match kind {
            Profile::Dphi => padd(&pmul(&kz, p), &pscale(&pmul(&self.rho2, &pderiv(p)), Fp::int(-1))),
            Profile::Wphi => {
                let inner = padd(&pscale(p, Fp::int(a as i64)), &pmul(&self.s, &pderiv(p)));
                padd(&pmul(&pmul(&kz, &self.s), p), &pscale(&pmul(&self.rho2, &inner), Fp::int(-1)))
            }
            Profile::Laplacian => self.lk(k, p),
            Profile::WeightedLaplacian => self.lk(k, &pmul(&ppow(&self.s, a), p)),
            Profile::Identity => p.clone(),
        }
    }

    /// Exact `z`-matrix `E[q][p]` of one Fourier mode, up to row scaling.
    pub fn mode_matrix(&self, kind: Profile, k: usize, a_in: usize, a_out: usize, b: usize, len: usize) -> Vec<Vec<Fp>> {
        let pin = self.monic_family(a_in, k, len);
        let sout = self.monic_family(a_out, k, len);
        let g: Vec<Poly> = pin.iter().map(|p| self.profile(kind, k, a_in, p)).collect();
        let gdeg = g.iter().map(|v| v.len()).max().unwrap_or(1);
        let mu = self.moments(b, k, len + gdeg + 1);
        sout.iter()
            .map(|s| {
                let m: Vec<Fp> = (0..gdeg)
                    .map(|j| s.iter().enumerate().fold(Fp::ZERO, |acc, (i, c)| acc.add(c.mul(mu[i + j]))))
                    .collect();
                g.iter()
                    .map(|gp| gp.iter().enumerate().fold(Fp::ZERO, |acc, (j, c)| acc.add(c.mul(m[j]))))
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Dphi,
    Wphi,
    Laplacian,
    WeightedLaplacian,
    Identity,
}

/// Smallest `(lower, upper)` such that `E[q][p] = 0` whenever
/// `q > p + lower` or `p > q + upper`.
pub fn exact_band(e: &[Vec<Fp>]) -> (usize, usize) {
    let (mut lo, mut up) = (0, 0);
    for (q, row) in e.iter().enumerate() {
        for (p, v) in row.iter().enumerate() {
            if !v.is_zero() {
                if q > p {
                    lo = lo.max(q - p);
                } else {
                    up = up.max(p - q);
                }
            }
        }
    }
    (lo, up)
}
