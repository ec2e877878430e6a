//! Parallel tempering on a hard radius, compared with annealing at the same
//! number of proposals.

use udmis::graph::{generate_ud_lattice, LatticeSpec};
use udmis::mcmc::{exchange_probability, pt_run, sa_run, PtConfig, SaConfig, SaSchedule};
use udmis::sla::{sla_solve, SlaConfig};

fn main() -> udmis::Result<()> {
    let g = generate_ud_lattice(&LatticeSpec::new(16, 800, 4, 9))?;
    let opt = sla_solve(&g, &SlaConfig::size_only())?.mis_size;
    let ladder = vec![1.5, 0.8, 0.45, 0.25, 0.12];
    let sweeps = 12;

    let mut pt_hits = 0;
    let mut sa_hits = 0;
    for seed in 0..20 {
        let pt = pt_run(&g, &PtConfig::new(ladder.clone(), sweeps, 1, seed))?;
        // same total proposals as the whole ladder
        let sa = SaConfig {
            schedule: SaSchedule { depth: sweeps * ladder.len(), ..Default::default() },
            seed,
            ..Default::default()
        };
        let sa = sa_run(&g, &sa, Some(opt))?;
        pt_hits += (pt.best_size == opt) as u32;
        sa_hits += (sa.best_size == opt) as u32;
    }
    println!("n={} |MIS|={opt}: tempering found it {pt_hits}/20, annealing {sa_hits}/20", g.n());

    println!("swap acceptance, sizes differing by one:");
    for w in ladder.windows(2) {
        println!("  T {:.2} <-> {:.2}: {:.3}", w[0], w[1], exchange_probability(w[0], w[1], 10, 11));
    }
    Ok(())
}
