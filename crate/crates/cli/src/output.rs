use anyhow::{bail, Context, Result};
use spherical_cap::{CapPoint, CoefficientVector};
use std::fs;
use std::path::Path;

/// 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv(path: &Path, header: &str, rows: impl IntoIterator<Item = String>) -> Result<()> {
    let mut s = String::from(header);
    s.push('\n');
    for r in rows {
        s.push_str(&r);
        s.push('\n');
    }
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

pub fn write_coefficients(path: &Path, c: &CoefficientVector) -> Result<()> {
    let mut s = c.to_json()?;
    s.push('\n');
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

pub fn read_coefficients(path: &Path) -> Result<CoefficientVector> {
    let s = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    CoefficientVector::from_json(&s).with_context(|| format!("parsing {}", path.display()))
}

/// Points from a CSV of `x,y,z` rows; a non-numeric first line is a header.
pub fn read_points(path: &Path, alpha: f64) -> Result<Vec<CapPoint>> {
    let s = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = Vec::new();
    for (line_no, line) in s.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
        let row = line_no + 1;
        let v = match parsed {
            Ok(v) => v,
            Err(_) if line_no == 0 => continue,
            Err(e) => bail!("{}: row {row}: {e}", path.display()),
        };
        if v.len() != 3 {
            bail!("{}: row {row}: expected x,y,z", path.display());
        }
        let p = CapPoint::on_cap(v[0], v[1], v[2], alpha).with_context(|| format!("{}: row {row}", path.display()))?;
        out.push(p);
    }
    Ok(out)
}

/// Least-squares slope of `ln t` against `ln N`.
pub fn loglog_slope(rows: &[(usize, f64)]) -> Option<f64> {
    if rows.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = rows.iter().map(|&(n, t)| ((n as f64).ln(), t.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx)
}
