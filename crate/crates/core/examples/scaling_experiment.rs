//! A small size-scaling grid on four workers, written as CSV with its
//! manifest, then fitted.
//!
//!     cargo run --release --example scaling_experiment -- /tmp/scaling.csv

use std::path::PathBuf;

use udmis::bench::{fit_command, run_experiment, ExperimentConfig, ExperimentKind, FitCommandKind, FitParams};
use udmis::clock::ClockKind;
use udmis::metrics::median;

fn main() -> udmis::Result<()> {
    let out: PathBuf = std::env::args().nth(1).unwrap_or_else(|| "scaling.csv".into()).into();
    let mut cfg = ExperimentConfig::preset(ExperimentKind::Scaling);
    cfg.l_list = vec![7, 9, 11, 13];
    cfg.seeds_per_point = 20;
    cfg.shots = 50;
    cfg.workers = 4;
    let res = run_experiment(&cfg, ClockKind::Wall, false)?;
    res.write(&out)?;
    println!("{} rows -> {}", res.rows.len(), out.display());

    for solver in ["sla", "bnb", "sa"] {
        print!("{solver:>4} median TTS:");
        for l in &cfg.l_list {
            let t: Vec<f64> = res.rows.iter().filter(|r| r.solver == solver && r.l == Some(*l)).filter_map(|r| r.tts_s).collect();
            print!("  L={l} {:.2e}", median(&t).unwrap_or(f64::NAN));
        }
        println!();
    }

    let text = std::fs::read_to_string(&out)?;
    for solver in ["bnb", "sa"] {
        let params = FitParams { solver: Some(solver.into()), percentile: 0.1, ..Default::default() };
        let f = fit_command(&text, FitCommandKind::Loglinear, &params)?.fit;
        println!("{solver}: top-10% log10 TTS = {:.4} N + {:.2} (r2 {:.2}, base 2^{:.4}N)", f.slope, f.intercept, f.r_squared, f.slope * 10f64.log2());
    }
    Ok(())
}
