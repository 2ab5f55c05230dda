//! Operators whose entries follow directly from recurrence data: conversions
//! are products of Christoffel connection coefficients, and `Δ_W^{(1)}` is a
//! symmetric tridiagonal form per mode.

use super::{from_modes, ladder, per_mode, ModeEntries, OperatorSpec};
use crate::basis::{block_sizes, Ordering};
use crate::error::Result;
use crate::semiclassical::{christoffel, ChristoffelStep, RecurrenceTable, WeightParams};
use crate::structured::BandedBlockBanded;

pub(crate) fn dtheta(degree: usize) -> BandedBlockBanded {
    let sizes = block_sizes(degree, Ordering::FourierMajor);
    let mut m = BandedBlockBanded::zeros(sizes.clone(), sizes, (0, 0), (1, 1), Ordering::FourierMajor);
    for k in 1..=degree {
        let kf = k as f64;
        for p in 0..=degree - k {
            m.block_set(k, k, 2 * p + 1, 2 * p, -kf).expect("band");
            m.block_set(k, k, 2 * p, 2 * p + 1, kf).expect("band");
        }
    }
    m
}

/// `steps` successive `(z − α)` Christoffel steps starting from `table`.
pub(crate) fn weight_chain(table: &RecurrenceTable, steps: usize) -> Result<Vec<ChristoffelStep>> {
    let mut cur = table.clone();
    let mut out = Vec::with_capacity(steps);
    for _ in 0..steps {
        let params = WeightParams {
            a: cur.params.a + 1.0,
            ..cur.params
        };
        let (next, step) = christoffel(&cur, cur.params.alpha, 1.0, params)?;
        out.push(step);
        cur = next;
    }
    Ok(out)
}

/// Coefficients in the lower family of `(z − α)^{steps} · P_p` where `P` is
/// the top family of `chain`, truncated to length `len`.
fn lower_weighted(chain: &[ChristoffelStep], p: usize, len: usize) -> Vec<f64> {
    let mut c = vec![0.0; len];
    c[p] = 1.0;
    for s in chain.iter().rev() {
        let mut d = vec![0.0; len];
        for q in 0..len {
            let mut v = s.l[q] * c[q];
            if q > 0 {
                v += s.e[q - 1] * c[q - 1];
            }
            d[q] = v / s.r;
        }
        c = d;
    }
    c
}

/// Coefficients in the top family of `chain` of the bottom family's `P_p`.
fn raise(chain: &[ChristoffelStep], p: usize, len: usize) -> Vec<f64> {
    let mut c = vec![0.0; len];
    c[p] = 1.0;
    for s in chain {
        let mut d = vec![0.0; len];
        for q in 0..len {
            let next = if q + 1 < len { c[q + 1] } else { 0.0 };
            d[q] = s.r * (s.l[q] * c[q] + s.e[q] * next);
        }
        c = d;
    }
    c
}

pub(crate) fn convert_up(spec: &OperatorSpec) -> Result<BandedBlockBanded> {
    let t = spec.atilde();
    let n = spec.degree;
    let lad = ladder(spec.alpha, spec.a_in, n, t + 3)?;
    let modes = per_mode(n, |k| {
        let len = n - k + 1;
        let chain = weight_chain(lad.family(k), t)?;
        let mut out = ModeEntries::new();
        for p in 0..len {
            let c = raise(&chain, p, len);
            for q in p.saturating_sub(t)..=p {
                out.push((q, p, c[q]));
            }
        }
        Ok(out)
    })?;
    from_modes(n, (0, t), modes)
}

pub(crate) fn convert_down(spec: &OperatorSpec) -> Result<BandedBlockBanded> {
    let t = spec.atilde();
    let n = spec.degree;
    let lad = ladder(spec.alpha, spec.a_out, n, t + 3)?;
    let modes = per_mode(n, |k| {
        let len = n - k + 1;
        let chain = weight_chain(lad.family(k), t)?;
        let mut out = ModeEntries::new();
        for p in 0..len {
            let c = lower_weighted(&chain, p, len);
            for q in p..(p + t + 1).min(len) {
                out.push((q, p, c[q]));
            }
        }
        Ok(out)
    })?;
    from_modes(n, (t, 0), modes)
}

/// Mode-`k` block of `Δ_W^{(1)}`: with `h_p = (z − α) P_p`,
/// entry `(q, p)` is `−(1/ω_P) ∫ [ρ^{2k+2} h_p' h_q' + k(k+1) ρ^{2k} h_p h_q]`.
/// `h_p` expands in `R^{(0,2k)}` through one Christoffel step and `h_p'` in
/// `R^{(0,2k+2)}` with two terms fixed by leading coefficients.
pub(crate) fn weighted_laplacian_a1_mode(
    q0: &RecurrenceTable,
    s: &RecurrenceTable,
    p: &RecurrenceTable,
    k: usize,
    len: usize,
) -> Result<ModeEntries> {
    let step = &weight_chain(q0, 1)?[0];
    let (l, e) = (&step.l, &step.e);
    let kk = (k * (k + 1)) as f64;
    let ws_wp = s.omega / p.omega;
    let wp_ws = p.omega / s.omega;
    // d_diag[j] = D[j, j], d_up[j] = D[j − 1, j]
    let mut d_diag = vec![0.0; len];
    let mut d_up = vec![0.0; len];
    let mut ratio = 1.0;
    for j in 0..len {
        if j > 0 {
            d_up[j] = wp_ws * (j + 2 * k + 1) as f64 * p.betas[j - 1] / ratio;
            ratio *= s.betas[j - 1] / p.betas[j - 1];
        }
        d_diag[j] = (j + 1) as f64 * ratio;
    }
    let mut out = ModeEntries::new();
    for j in 0..len {
        let dd = d_diag[j] * d_diag[j] + d_up[j] * d_up[j];
        let tt = l[j] * l[j] + e[j] * e[j];
        out.push((j, j, -(ws_wp * dd + kk * tt)));
        if j + 1 < len {
            let dd = d_diag[j] * d_up[j + 1];
            let tt = e[j] * l[j + 1];
            let v = -(ws_wp * dd + kk * tt);
            out.push((j, j + 1, v));
            out.push((j + 1, j, v));
        }
    }
    Ok(out)
}

pub(crate) fn weighted_laplacian_a1(spec: &OperatorSpec) -> Result<BandedBlockBanded> {
    let n = spec.degree;
    let l0 = ladder(spec.alpha, 0, n, 4)?;
    let l1 = ladder(spec.alpha, 1, n, 4)?;
    let modes = per_mode(n, |k| weighted_laplacian_a1_mode(l0.family(k), l0.family(k + 1), l1.family(k), k, n - k + 1))?;
    from_modes(n, (1, 1), modes)
}
