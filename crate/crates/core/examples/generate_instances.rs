//! Draws a few instance families and prints their basic statistics.
//!
//!     cargo run --example generate_instances

use udmis::graph::{
    edge_count_bounds, er_instance, graph_density, rewired_instance, ud_lattice_instance, LatticeSpec,
};

fn main() -> udmis::Result<()> {
    let spec = LatticeSpec::new(12, 800, 2, 7);
    let ud = ud_lattice_instance(&spec)?;
    let g = &ud.graph;
    let (max_edges, expected) = edge_count_bounds(spec.l, spec.rho_ppt as f64 / 1000.0);
    println!(
        "union-jack L={} rho=0.8: n={} |E|={} (max {max_edges}, expected {expected:.1}) d_max={} density={:.4} draws={}",
        spec.l,
        g.n(),
        g.edge_count(),
        g.max_degree(),
        graph_density(g)?,
        ud.resample_attempts
    );

    for r2 in [1, 2, 4, 9] {
        let g = ud_lattice_instance(&LatticeSpec::new(12, 800, r2, 7))?.graph;
        println!("r2={r2:<2} |E|={:<5} d_max={}", g.edge_count(), g.max_degree());
    }

    // same node and edge count, no geometry
    let er = er_instance(g.n(), g.edge_count(), 7)?;
    println!("G(n, m): n={} |E|={} d_max={}", er.graph.n(), er.graph.edge_count(), er.graph.max_degree());

    for eps in [0, 250, 500, 1000] {
        let r = rewired_instance(&spec, eps)?;
        let kept = r.graph.edges().iter().filter(|&&(i, j)| g.has_edge(i, j)).count();
        println!("epsilon={:.2}: {kept} of {} lattice edges kept", eps as f64 / 1000.0, g.edge_count());
    }

    let text = ud.to_json();
    println!("instance file is {} bytes, starts {}", text.len(), &text[..60]);
    Ok(())
}
