//! Writes the integer program of an instance in LP format, ready for an
//! external MIP solver.
//!
//!     cargo run --example export_ilp -- model.lp

use udmis::bnb::export_ilp;
use udmis::graph::{generate_ud_lattice, Graph, LatticeSpec};

fn main() -> udmis::Result<()> {
    print!("{}", export_ilp(&Graph::path(3)));

    let g = generate_ud_lattice(&LatticeSpec::new(10, 800, 2, 1))?;
    let lp = export_ilp(&g);
    match std::env::args().nth(1) {
        Some(path) => {
            std::fs::write(&path, &lp)?;
            println!("wrote {} constraints to {path}", g.edge_count());
        }
        None => println!("L=10 model: {} lines, {} bytes", lp.lines().count(), lp.len()),
    }
    Ok(())
}
