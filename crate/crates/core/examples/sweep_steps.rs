//! Drives the sweep one node at a time and prints the variant table.

use udmis::graph::{generate_ud_lattice, LatticeSpec};
use udmis::sla::{sweep_order, SlaConfig, SweepState};

fn main() -> udmis::Result<()> {
    let g = generate_ud_lattice(&LatticeSpec::new(4, 800, 2, 2))?;
    let order = sweep_order(&g)?;
    let mut state = SweepState::new(&g, &order, &SlaConfig::census())?;
    while !state.is_done() {
        let v = order[state.processed_count()];
        state.advance()?;
        println!(
            "after node {v:>2} {:?}: frontier {:?}, {} variants",
            g.coords().unwrap()[v],
            state.frontier(),
            state.variant_count()
        );
        if state.processed_count() == 6 {
            for var in state.variants() {
                println!("    blocked {:?} -> best {} counts {:?}", var.blocked, var.best, var.counts);
            }
        }
    }
    let r = state.finish()?;
    println!("|MIS|={} D_MIS={:?} peak={}", r.mis_size, r.d_mis, r.variants_peak);
    Ok(())
}
