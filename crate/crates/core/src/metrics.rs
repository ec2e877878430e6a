//! Figures of merit and the fits built on them.
//!
//! Hardness is `D_{MIS-1} / (|MIS| * D_MIS)`, evaluated from exact counts.
//! `R99 = ln(0.01) / ln(1 - p)` is the number of independent runs needed to
//! see an optimum with 99% confidence; `TTS99 = tau * R99`.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-instance census row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardnessRecord {
    pub instance_id: String,
    pub n: usize,
    pub mis_size: usize,
    #[serde(with = "crate::metrics::big_string")]
    pub d_mis: BigUint,
    #[serde(with = "crate::metrics::big_string")]
    pub d_mis_m1: BigUint,
    pub hardness: f64,
}

impl HardnessRecord {
    pub fn new(instance_id: impl Into<String>, n: usize, mis_size: usize, d_mis: BigUint, d_mis_m1: BigUint) -> Result<Self> {
        let hardness = hardness(mis_size, &d_mis, &d_mis_m1)?;
        Ok(HardnessRecord { instance_id: instance_id.into(), n, mis_size, d_mis, d_mis_m1, hardness })
    }
}

pub(crate) mod big_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Converts a big integer to `f64` along with a base-2 exponent so huge
/// counts keep their leading bits.
fn to_scaled(x: &BigUint) -> (f64, i64) {
    let bits = x.bits() as i64;
    if bits <= 1000 {
        (x.to_f64().unwrap_or(f64::INFINITY), 0)
    } else {
        let shift = bits - 64;
        ((x >> shift as usize).to_f64().unwrap_or(f64::INFINITY), shift)
    }
}

pub fn hardness(mis_size: usize, d_mis: &BigUint, d_mis_m1: &BigUint) -> Result<f64> {
    if mis_size == 0 || d_mis.is_zero() {
        return Err(Error::UndefinedHardness);
    }
    let (num, ea) = to_scaled(d_mis_m1);
    let (den, eb) = to_scaled(d_mis);
    Ok(num / (den * mis_size as f64) * 2f64.powi((ea - eb) as i32))
}

/// Repetitions for 99% confidence at single-run success probability `p`.
pub fn r99(p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return Err(Error::Censored);
    }
    if p > 1.0 || p.is_nan() {
        return Err(Error::InvalidInput(format!("probability {p} out of range")));
    }
    if p >= 0.99 {
        // a single run already meets the confidence target
        return Ok(1.0);
    }
    Ok((0.01f64).ln() / (-p).ln_1p())
}

pub fn tts99(tau: f64, p: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::InvalidInput(format!("tau must be positive, got {tau}")));
    }
    Ok(tau * r99(p)?)
}

/// TTS99 from a success count. Zero successes give a lower bound computed
/// with `p = 1 / (shots + 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tts99 {
    pub value: f64,
    pub censored: bool,
}

pub fn tts99_from_counts(tau: f64, successes: usize, shots: usize) -> Result<Tts99> {
    if shots == 0 || successes > shots {
        return Err(Error::InvalidInput(format!("{successes} successes in {shots} shots")));
    }
    if successes == 0 {
        let p = 1.0 / (shots as f64 + 1.0);
        return Ok(Tts99 { value: tts99(tau, p)?, censored: true });
    }
    Ok(Tts99 { value: tts99(tau, successes as f64 / shots as f64)?, censored: false })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FitKind {
    Loglinear,
    Powerlaw,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub kind: FitKind,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    pub points_used: usize,
    /// Points dropped as saturated (`p` of 0 or 1) or below threshold.
    pub excluded: usize,
}

/// Ordinary least squares `y = slope * x + intercept`.
pub fn least_squares(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let k = x.len();
    if k != y.len() {
        return Err(Error::Fit("x and y differ in length".into()));
    }
    if k < 2 {
        return Err(Error::Fit(format!("need at least 2 points, got {k}")));
    }
    let mx = x.iter().sum::<f64>() / k as f64;
    let my = y.iter().sum::<f64>() / k as f64;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("x has zero variance".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy <= f64::EPSILON * my.abs().max(1.0) * k as f64 {
        1.0
    } else {
        let ss_res: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    Ok((slope, intercept, r2))
}

/// Inclusive linear-interpolation quantile of sorted data.
fn quantile_sorted(v: &[f64], q: f64) -> f64 {
    let pos = q * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

/// Within each size group keeps the points with `tts` at or above the
/// `1 - percentile` quantile, then fits `log10(tts) = slope * n + intercept`.
pub fn fit_loglinear_top(points: &[(usize, f64)], percentile: f64) -> Result<FitResult> {
    if !(percentile > 0.0 && percentile <= 1.0) {
        return Err(Error::InvalidInput(format!("percentile {percentile} not in (0, 1]")));
    }
    if points.iter().any(|&(_, t)| !(t > 0.0)) {
        return Err(Error::InvalidInput("tts values must be positive".into()));
    }
    let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for &(n, t) in points {
        groups.entry(n).or_default().push(t);
    }
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for (n, mut ts) in groups {
        ts.sort_by(f64::total_cmp);
        let cut = quantile_sorted(&ts, 1.0 - percentile);
        for t in ts.into_iter().filter(|&t| t >= cut) {
            xs.push(n as f64);
            ys.push(t.log10());
        }
    }
    let (slope, intercept, r_squared) = least_squares(&xs, &ys)?;
    Ok(FitResult {
        kind: FitKind::Loglinear,
        slope,
        intercept,
        r_squared,
        alpha: None,
        c: None,
        points_used: xs.len(),
        excluded: points.len() - xs.len(),
    })
}

/// Fits `p = 1 - exp(-C * H^-alpha)` via `ln(-ln(1 - p)) = ln C - alpha ln H`.
pub fn fit_pmis_powerlaw(points: &[(f64, f64)]) -> Result<FitResult> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(h, p)| h > 0.0 && p > 0.0 && p < 1.0)
        .collect();
    let excluded = points.len() - usable.len();
    if usable.len() < 2 {
        return Err(Error::Fit(format!(
            "{} usable points ({excluded} excluded as saturated or non-positive)",
            usable.len()
        )));
    }
    let x: Vec<f64> = usable.iter().map(|&(h, _)| h.ln()).collect();
    let y: Vec<f64> = usable.iter().map(|&(_, p)| (-(-p).ln_1p()).ln()).collect();
    let (slope, intercept, r_squared) = least_squares(&x, &y)?;
    Ok(FitResult {
        kind: FitKind::Powerlaw,
        slope,
        intercept,
        r_squared,
        alpha: Some(-slope),
        c: Some(intercept.exp()),
        points_used: usable.len(),
        excluded,
    })
}

pub const DEFAULT_HARDNESS_THRESHOLD: f64 = 10.0;

/// Fits `ln TTS99 = alpha ln H + b` over points with `H >= threshold`.
pub fn tts_hardness_scaling(points: &[(f64, f64)], threshold: f64) -> Result<FitResult> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .copied()
        .filter(|&(h, t)| h >= threshold && h > 0.0 && t > 0.0)
        .collect();
    let excluded = points.len() - usable.len();
    let x: Vec<f64> = usable.iter().map(|&(h, _)| h.ln()).collect();
    let y: Vec<f64> = usable.iter().map(|&(_, t)| t.ln()).collect();
    let (slope, intercept, r_squared) = least_squares(&x, &y)?;
    Ok(FitResult {
        kind: FitKind::Powerlaw,
        slope,
        intercept,
        r_squared,
        alpha: Some(slope),
        c: Some(intercept.exp()),
        points_used: usable.len(),
        excluded,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    pub pearson: f64,
    pub partial: Option<f64>,
    /// Residuals after removing the control had zero variance.
    pub degenerate: bool,
}

fn pearson(x: &[f64], y: &[f64]) -> Option<f64> {
    let k = x.len() as f64;
    let mx = x.iter().sum::<f64>() / k;
    let my = y.iter().sum::<f64>() / k;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let tiny = |s: f64, m: f64| s <= 1e-24 * (1.0 + m * m) * k;
    if tiny(sxx, mx) || tiny(syy, my) {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

fn residuals(v: &[f64], control: &[f64]) -> Result<Vec<f64>> {
    let (s, b, _) = least_squares(control, v)?;
    Ok(v.iter().zip(control).map(|(y, c)| y - s * c - b).collect())
}

/// Pearson correlation of `x` and `y`, and optionally their partial
/// correlation after regressing both on `control`.
pub fn correlations(x: &[f64], y: &[f64], control: Option<&[f64]>) -> Result<Correlation> {
    if x.len() != y.len() || control.is_some_and(|c| c.len() != x.len()) {
        return Err(Error::InvalidInput("inputs differ in length".into()));
    }
    if x.len() < 3 {
        return Err(Error::InvalidInput("need at least 3 points".into()));
    }
    let r = pearson(x, y).ok_or_else(|| Error::UndefinedCorrelation("zero variance".into()))?;
    let (partial, degenerate) = match control {
        None => (None, false),
        Some(c) => {
            let rx = residuals(x, c).map_err(|_| Error::UndefinedCorrelation("control has zero variance".into()))?;
            let ry = residuals(y, c).map_err(|_| Error::UndefinedCorrelation("control has zero variance".into()))?;
            match pearson(&rx, &ry) {
                Some(p) => (Some(p), false),
                None => (Some(0.0), true),
            }
        }
    };
    Ok(Correlation { pearson: r, partial, degenerate })
}

/// Percentiles of `log10` values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileSummary {
    pub p2: f64,
    pub p16: f64,
    pub p50: f64,
    pub p84: f64,
    pub p98: f64,
}

pub fn quantile_summary(values: &[f64]) -> Result<QuantileSummary> {
    if values.is_empty() {
        return Err(Error::InvalidInput("no values".into()));
    }
    if values.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidInput("values must be positive".into()));
    }
    let mut logs: Vec<f64> = values.iter().map(|v| v.log10()).collect();
    logs.sort_by(f64::total_cmp);
    let q = |p| quantile_sorted(&logs, p);
    Ok(QuantileSummary { p2: q(0.02), p16: q(0.16), p50: q(0.5), p84: q(0.84), p98: q(0.98) })
}

/// Median of positive or arbitrary reals (inclusive convention).
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    Some(quantile_sorted(&v, 0.5))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hardness_examples() {
        let b = |x: u32| BigUint::from(x);
        assert_eq!(hardness(2, &b(1), &b(3)).unwrap(), 1.5);
        assert_eq!(hardness(1, &b(4), &b(1)).unwrap(), 0.25);
        assert_eq!(hardness(1, &b(1), &b(1)).unwrap(), 1.0);
        assert_eq!(hardness(0, &b(1), &b(0)), Err(Error::UndefinedHardness));
        assert_eq!(hardness(1, &b(0), &b(1)), Err(Error::UndefinedHardness));
    }

    #[test]
    fn hardness_of_huge_counts() {
        let d = BigUint::from(3u32).pow(2000);
        let d1 = &d * BigUint::from(1000u32);
        assert!(close(hardness(10, &d, &d1).unwrap(), 100.0, 1e-9));
    }

    #[test]
    fn r99_examples() {
        assert_eq!(r99(0.99).unwrap(), 1.0);
        assert_eq!(r99(1.0).unwrap(), 1.0);
        assert!(close(r99(0.5).unwrap(), 6.6439, 1e-4));
        assert!(close(r99(0.01).unwrap(), 458.21, 0.01));
        for p in [1e-2, 1e-3, 1e-4] {
            assert!(((r99(p).unwrap() * p - 4.6052) / 4.6052).abs() < 0.02);
        }
        assert_eq!(r99(0.0), Err(Error::Censored));
        assert_eq!(r99(-0.1), Err(Error::Censored));
    }

    #[test]
    fn r99_decreases_in_p() {
        let ps: Vec<f64> = (1..99).map(|i| i as f64 / 100.0).collect();
        let rs: Vec<f64> = ps.iter().map(|&p| r99(p).unwrap()).collect();
        assert!(rs.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn tts99_examples() {
        assert!(close(tts99(2.0, 0.5).unwrap(), 13.2877, 1e-3));
        assert_eq!(tts99(3.5, 0.99).unwrap(), 3.5);
        assert_eq!(tts99(1.0, 0.0), Err(Error::Censored));
        let c = tts99_from_counts(1.0, 0, 99).unwrap();
        assert!(c.censored);
        assert!(close(c.value, r99(0.01).unwrap(), 1e-12));
        assert!(!tts99_from_counts(1.0, 50, 100).unwrap().censored);
    }

    #[test]
    fn loglinear_examples() {
        let pts: Vec<(usize, f64)> = (10..20).map(|n| (n, 10f64.powf(0.1 * n as f64 + 1.0))).collect();
        let f = fit_loglinear_top(&pts, 1.0).unwrap();
        assert!(close(f.slope, 0.1, 1e-12) && close(f.intercept, 1.0, 1e-10));
        assert!(close(f.r_squared, 1.0, 1e-12));
        let flat: Vec<(usize, f64)> = (10..20).map(|n| (n, 5.0)).collect();
        assert!(close(fit_loglinear_top(&flat, 1.0).unwrap().slope, 0.0, 1e-12));
        assert!(fit_loglinear_top(&[(3, 1.0)], 1.0).is_err());
    }

    #[test]
    fn loglinear_top_filters_per_group() {
        let mut pts = Vec::new();
        for n in [10usize, 20] {
            for i in 1..=100 {
                pts.push((n, i as f64 * if n == 20 { 10.0 } else { 1.0 }));
            }
        }
        let f = fit_loglinear_top(&pts, 0.02).unwrap();
        // two survivors per group: the 99 and 100 entries
        assert_eq!(f.points_used, 4);
        let mut rev = pts.clone();
        rev.reverse();
        assert_eq!(fit_loglinear_top(&rev, 0.02).unwrap(), f);
    }

    #[test]
    fn powerlaw_recovers_parameters() {
        let pts: Vec<(f64, f64)> = [1.0, 3.0, 10.0, 30.0, 100.0, 1e3]
            .iter()
            .map(|&h: &f64| (h, 1.0 - (-10.0 * h.powf(-0.66)).exp()))
            .filter(|&(_, p)| p < 1.0)
            .collect();
        let f = fit_pmis_powerlaw(&pts).unwrap();
        assert!(close(f.alpha.unwrap(), 0.66, 1e-6));
        assert!(close(f.c.unwrap(), 10.0, 1e-6));
        assert!(fit_pmis_powerlaw(&[(2.0, 0.5)]).is_err());
        let e = fit_pmis_powerlaw(&[(2.0, 1.0), (3.0, 1.0), (4.0, 0.0)]).unwrap_err();
        assert!(matches!(e, Error::Fit(m) if m.contains("3 excluded")));
    }

    #[test]
    fn tts_hardness_examples() {
        let pts: Vec<(f64, f64)> = (1..=20).map(|i| (10.0 * i as f64, (10.0 * i as f64).powf(0.7))).collect();
        let f = tts_hardness_scaling(&pts, 10.0).unwrap();
        assert!(close(f.slope, 0.7, 1e-12) && close(f.r_squared, 1.0, 1e-12));
        let flat: Vec<(f64, f64)> = (1..=20).map(|i| (10.0 * i as f64, 3.0)).collect();
        assert!(close(tts_hardness_scaling(&flat, 10.0).unwrap().slope, 0.0, 1e-12));
    }

    #[test]
    fn tts_hardness_analytic_pipeline() {
        let pts: Vec<(f64, f64)> = (0..=30)
            .map(|i| {
                let h = 10f64.powf(3.0 + i as f64 * 0.1);
                let p = -(-h.powf(-0.5)).exp_m1();
                (h, tts99(1.0, p).unwrap())
            })
            .collect();
        let f = tts_hardness_scaling(&pts, DEFAULT_HARDNESS_THRESHOLD).unwrap();
        assert!((f.slope - 0.5).abs() < 0.02);
    }

    #[test]
    fn correlation_examples() {
        let c = correlations(&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0], None).unwrap();
        assert!(close(c.pearson, 1.0, 1e-12));
        let c = correlations(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0], None).unwrap();
        assert!(close(c.pearson, -1.0, 1e-12));
        assert!(matches!(correlations(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], None), Err(Error::UndefinedCorrelation(_))));

        let control: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let noise = [0.3, -0.1, 0.2, -0.4, 0.1, 0.0, -0.2, 0.3, -0.3, 0.1, 0.2, -0.1, 0.0, 0.4, -0.2, 0.1, -0.3, 0.2, 0.0, -0.1];
        let y: Vec<f64> = control.iter().zip(noise).map(|(c, e)| 2.0 * c + e).collect();
        let c = correlations(&control, &y, Some(&control)).unwrap();
        assert!(c.degenerate);
        assert_eq!(c.partial, Some(0.0));
    }

    #[test]
    fn quantile_examples() {
        let v: Vec<f64> = (0..100).map(|i| 10f64.powi(i)).collect();
        assert!(close(quantile_summary(&v).unwrap().p50, 49.5, 1e-9));
        let s = quantile_summary(&[100.0]).unwrap();
        assert_eq!([s.p2, s.p16, s.p50, s.p84, s.p98], [2.0; 5]);
        assert!(close(quantile_summary(&[1.0, 10.0, 100.0]).unwrap().p50, 1.0, 1e-12));
        assert!(quantile_summary(&[]).is_err());
        assert!(quantile_summary(&[1.0, 0.0]).is_err());
    }
}
