//! Simulated annealing over independent sets and its success probability.
//!
//!     cargo run --release --example annealing

use udmis::graph::{generate_ud_lattice, LatticeSpec};
use udmis::mcmc::{estimate_pmis, sa_run, Bias, SaConfig, SaSchedule};
use udmis::metrics::tts99_from_counts;
use udmis::sla::{sla_solve, SlaConfig};

fn main() -> udmis::Result<()> {
    let g = generate_ud_lattice(&LatticeSpec::new(13, 800, 2, 4))?;
    let opt = sla_solve(&g, &SlaConfig::size_only())?.mis_size;
    println!("n={} |MIS|={opt}", g.n());

    let cfg = SaConfig { num_restarts: 4, seed: 1, ..Default::default() };
    let r = sa_run(&g, &cfg, Some(opt))?;
    println!("4 restarts: best {} per restart {:?} ({} proposals)", r.best_size, r.per_restart_best, r.proposals);

    println!("\ndepth  P_MIS   TTS99");
    for depth in [2, 8, 32, 128] {
        let cfg = SaConfig { schedule: SaSchedule { depth, ..Default::default() }, seed: 2, ..Default::default() };
        let est = estimate_pmis(&g, &cfg, 200, opt)?;
        let tts = tts99_from_counts(est.mean_run_time, est.successes, est.shots)?;
        let mark = if tts.censored { " (lower bound)" } else { "" };
        println!("{depth:>5}  {:.3}  {:.2e}s{mark}", est.p_point, tts.value);
    }

    // proposals that only add and remove
    let cfg = SaConfig { bias: Bias { add: 1.0, swap: 0.0, remove: 1.0 }, seed: 3, ..Default::default() };
    println!("\nno swaps: P_MIS {:.3}", estimate_pmis(&g, &cfg, 200, opt)?.p_point);
    Ok(())
}
