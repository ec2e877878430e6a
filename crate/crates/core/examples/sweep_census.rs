//! Exact |MIS| and degeneracy counts with the sweeping-line program, checked
//! against exhaustive enumeration on a small instance.
//!
//!     cargo run --release --example sweep_census

use udmis::graph::{brute_force_census, full_lattice, generate_ud_lattice, LatticeSpec};
use udmis::metrics::hardness;
use udmis::sla::{fib_bound, sla_solve, SlaConfig};

fn main() -> udmis::Result<()> {
    let small = generate_ud_lattice(&LatticeSpec::new(5, 800, 2, 3))?;
    let sweep = sla_solve(&small, &SlaConfig::census())?.census().expect("census mode");
    let brute = brute_force_census(&small)?;
    assert_eq!(sweep, brute);
    println!(
        "L=5: |MIS|={} D_MIS={} D_MIS-1={} (matches enumeration)",
        sweep.mis_size, sweep.d_mis, sweep.d_mis_m1
    );

    println!("\n  L     n  |MIS|       D_MIS   hardness  peak  Fib(L+1)");
    for l in [9u32, 13, 17] {
        let g = generate_ud_lattice(&LatticeSpec::new(l, 800, 2, 1))?;
        let c = sla_solve(&g, &SlaConfig::census())?;
        let size = sla_solve(&g, &SlaConfig::size_only())?;
        let (d, d1) = (c.d_mis.unwrap(), c.d_mis_m1.unwrap());
        println!(
            "{l:>3} {:>5} {:>6} {:>11} {:>10.3} {:>5} {:>9}",
            g.n(),
            c.mis_size,
            d,
            hardness(c.mis_size, &d, &d1)?,
            size.variants_peak,
            fib_bound(l)
        );
    }

    // a fully filled lattice has a checkerboard-like optimum of ceil(L/2)^2
    let full = full_lattice(16, 2)?;
    let r = sla_solve(&full, &SlaConfig::size_only())?;
    println!("\nfull L=16: |MIS|={} witness of {} nodes in {:.4}s", r.mis_size, r.witness.unwrap().len(), r.wall_time);
    Ok(())
}
