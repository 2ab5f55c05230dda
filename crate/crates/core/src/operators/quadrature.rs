//! Operator entries as normalized 1D integrals, evaluated per Fourier mode
//! with a Gauss rule exact for the integrand.
//!
//! Every entry has the form `(1/ω_S) ∫ G_p(z) S_q(z) (z − α)^b ρ^{2k} dz`,
//! where `P` is the input family, `S` the output family and `G_p` the
//! `z`-profile of the operator applied to `ρ^k P_p Y_{k,i}` (with any output
//! weight factored out).

use super::{algebraic, from_modes, ladder, per_mode, ModeEntries, OperatorKind, OperatorSpec};
use crate::error::{Error, Result};
use crate::semiclassical::{gauss_from_table, FamilyLadder, RecurrenceTable};
use crate::structured::BandedBlockBanded;

/// Assemble by quadrature over the theoretical `z`-band widened by `margin`
/// on both sides. A positive margin exposes entries the theory says vanish.
pub fn assemble_by_quadrature(spec: &OperatorSpec, margin: usize) -> Result<BandedBlockBanded> {
    use OperatorKind::*;
    let t = spec.atilde();
    let a = spec.a_in;
    let (zband, b) = match spec.kind {
        Dtheta => return Ok(algebraic::dtheta(spec.degree)),
        Dphi => ((1, 2), a + 1),
        Wphi => ((2, 1), a - 1),
        Laplacian | ConvertUp => ((0, t), a + t),
        WeightedLaplacian => ((t, 0), 0),
        ConvertDown => ((t, 0), a),
        WeightedLaplacianA1 => ((1, 1), 1),
        Rho2Laplacian | Biharmonic | VariableCoefficient => {
            return Err(Error::ParameterDomain(format!(
                "{:?} is a composite and has no single quadrature form",
                spec.kind
            )))
        }
    };
    let zband = (zband.0 + margin, zband.1 + margin);
    let n = spec.degree;
    // integrand degree ≤ 2(N − k) + a + 2; 8 extra nodes of headroom
    let extra = a / 2 + 10;
    let make = |a: usize| ladder(spec.alpha, a, n, extra + 2);
    let lin = make(spec.a_in)?;
    let lout = if spec.a_out == spec.a_in { None } else { Some(make(spec.a_out)?) };
    let lrule = if b == spec.a_in || b == spec.a_out { None } else { Some(make(b)?) };
    let lout_ref = lout.as_ref().unwrap_or(&lin);
    let lrule_ref: &FamilyLadder = match &lrule {
        Some(l) => l,
        None if b == spec.a_in => &lin,
        None => lout_ref,
    };
    let modes = per_mode(n, |k| {
        mode_entries(spec, k, zband, lin.family(k), lout_ref.family(k), lrule_ref.family(k), extra)
    })?;
    from_modes(n, zband, modes)
}

fn mode_entries(
    spec: &OperatorSpec,
    k: usize,
    zband: (usize, usize),
    pin: &RecurrenceTable,
    sout: &RecurrenceTable,
    rule_table: &RecurrenceTable,
    extra: usize,
) -> Result<ModeEntries> {
    let len = spec.degree - k + 1;
    let m = len + extra;
    let rule = gauss_from_table(rule_table, m)?;
    let mut acc = vec![0.0; len * (zband.0 + zband.1 + 1)];
    let mut p = vec![0.0; len];
    let mut dp = vec![0.0; len];
    let mut d2p = vec![0.0; len];
    let mut s = vec![0.0; len];
    let mut g = vec![0.0; len];
    for (z, w) in rule.nodes.iter().zip(&rule.weights) {
        pin.eval_upto_derivs(len - 1, *z, &mut p, &mut dp, &mut d2p)?;
        sout.eval_upto(len - 1, *z, &mut s)?;
        for j in 0..len {
            g[j] = profile(spec, k, *z, p[j], dp[j], d2p[j]);
        }
        for col in 0..len {
            let gw = g[col] * w;
            let lo = col.saturating_sub(zband.1);
            let hi = (col + zband.0).min(len - 1);
            for row in lo..=hi {
                acc[col * (zband.0 + zband.1 + 1) + row + zband.1 - col] += gw * s[row];
            }
        }
    }
    let mut out = ModeEntries::new();
    for col in 0..len {
        let lo = col.saturating_sub(zband.1);
        let hi = (col + zband.0).min(len - 1);
        for row in lo..=hi {
            out.push((row, col, acc[col * (zband.0 + zband.1 + 1) + row + zband.1 - col] / sout.omega));
        }
    }
    Ok(out)
}

/// `L_k h = ρ² h'' − 2(k + 1) z h' − k(k + 1) h`, the `z` part of `Δ` acting on
/// `ρ^k h(z) Y_{k,i}`.
fn lk(k: usize, z: f64, h: f64, dh: f64, d2h: f64) -> f64 {
    let kf = k as f64;
    (1.0 - z * z) * d2h - 2.0 * (kf + 1.0) * z * dh - kf * (kf + 1.0) * h
}

fn profile(spec: &OperatorSpec, k: usize, z: f64, p: f64, dp: f64, d2p: f64) -> f64 {
    use OperatorKind::*;
    let kf = k as f64;
    let rho2 = 1.0 - z * z;
    let s = z - spec.alpha;
    match spec.kind {
        Dphi => kf * z * p - rho2 * dp,
        Wphi => kf * z * s * p - rho2 * (spec.a_in as f64 * p + s * dp),
        Laplacian => lk(k, z, p, dp, d2p),
        WeightedLaplacian | WeightedLaplacianA1 => {
            let a = spec.a_in as i32;
            let af = a as f64;
            let u = s.powi(a) * p;
            let du = af * s.powi(a - 1) * p + s.powi(a) * dp;
            let mut d2u = 2.0 * af * s.powi(a - 1) * dp + s.powi(a) * d2p;
            if a >= 2 {
                d2u += af * (af - 1.0) * s.powi(a - 2) * p;
            }
            lk(k, z, u, du, d2u)
        }
        _ => p,
    }
}
