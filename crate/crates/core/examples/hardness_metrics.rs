//! Hardness, R99/TTS99, percentile summaries and the power-law fit on
//! synthetic success probabilities.

use num_bigint::BigUint;
use udmis::metrics::{
    correlations, fit_pmis_powerlaw, hardness, quantile_summary, r99, tts99, tts_hardness_scaling,
    DEFAULT_HARDNESS_THRESHOLD,
};

fn main() -> udmis::Result<()> {
    // P3: one maximum set {0, 2}, three sets of size one
    println!("hardness(P3) = {}", hardness(2, &BigUint::from(1u32), &BigUint::from(3u32))?);
    for p in [0.99, 0.5, 0.01, 0.001] {
        println!("R99({p}) = {:.4}   R99*p = {:.4}", r99(p)?, r99(p)? * p);
    }
    println!("TTS99(2s, 0.5) = {:.3}s", tts99(2.0, 0.5)?);
    println!("R99(0) -> {:?}", r99(0.0).unwrap_err());

    let (c, alpha) = (10.0, 0.66);
    let hs: Vec<f64> = (0..40).map(|i| 10f64.powf(0.25 * i as f64)).collect();
    let pts: Vec<(f64, f64)> = hs.iter().map(|&h| (h, -(-c * h.powf(-alpha)).exp_m1())).collect();
    let fit = fit_pmis_powerlaw(&pts)?;
    println!(
        "power law: alpha={:.6} C={:.6} r2={:.4} ({} used, {} saturated)",
        fit.alpha.unwrap(),
        fit.c.unwrap(),
        fit.r_squared,
        fit.points_used,
        fit.excluded
    );

    let tts: Vec<(f64, f64)> = pts.iter().map(|&(h, p)| (h, tts99(1.0, p).unwrap_or(1.0))).collect();
    let scaling = tts_hardness_scaling(&tts, DEFAULT_HARDNESS_THRESHOLD)?;
    println!("TTS99 ~ H^{:.3} above H={DEFAULT_HARDNESS_THRESHOLD}", scaling.slope);

    let q = quantile_summary(&tts.iter().map(|t| t.1).collect::<Vec<_>>())?;
    println!("log10 TTS99 percentiles: {q:?}");

    let x: Vec<f64> = hs.iter().map(|h| h.ln()).collect();
    let y: Vec<f64> = tts.iter().map(|t| t.1.ln()).collect();
    println!("pearson(ln H, ln TTS99) = {:.3}", correlations(&x, &y, None)?.pearson);
    Ok(())
}
