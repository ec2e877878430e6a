//! Branch and bound with incumbent tracing: time-to-solution vs
//! time-to-optimality, and the effect of a known target.
//!
//!     cargo run --release --example branch_and_bound

use udmis::bnb::{bnb_solve, reduce, BnbConfig};
use udmis::graph::{generate_ud_lattice, rewired_instance, LatticeSpec};
use udmis::sla::{sla_solve, SlaConfig};

fn main() -> udmis::Result<()> {
    let spec = LatticeSpec::new(14, 800, 4, 11);
    let g = generate_ud_lattice(&spec)?;
    let red = reduce(&g);
    println!("n={} |E|={}; preprocessing fixes {} nodes", g.n(), g.edge_count(), red.offset);

    let full = bnb_solve(&g, &BnbConfig::default())?;
    println!("status {} |MIS|={} nodes {}", full.status.as_str(), full.mis_size, full.nodes_explored);
    for e in &full.incumbents {
        println!("  t={:>9.6}s size {}", e.time, e.size);
    }
    println!("TTS={:.6}s TTO={:.6}s", full.tts.unwrap(), full.tto.unwrap());

    let opt = sla_solve(&g, &SlaConfig::size_only())?.mis_size;
    assert_eq!(opt, full.mis_size);
    let targeted = bnb_solve(&g, &BnbConfig { target: Some(opt), ..Default::default() })?;
    println!("with target {opt}: {} after {} nodes", targeted.status.as_str(), targeted.nodes_explored);

    let plain = bnb_solve(&g, &BnbConfig { dominance: false, ..Default::default() })?;
    println!("without dominance: {} nodes", plain.nodes_explored);

    let lattice = rewired_instance(&LatticeSpec::new(13, 800, 2, 5), 0)?;
    let random = rewired_instance(&LatticeSpec::new(13, 800, 2, 5), 1000)?;
    for (name, inst) in [("lattice", lattice), ("fully rewired", random)] {
        let r = bnb_solve(&inst.graph, &BnbConfig::default())?;
        println!("{name:>14}: |MIS|={} nodes {:>6} TTS {:.6}s", r.mis_size, r.nodes_explored, r.tts.unwrap());
    }
    Ok(())
}
