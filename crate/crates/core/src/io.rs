//! Instance file format (JSON, `format_version` 1).
//!
//! Field order, edge orientation (`i < j`) and edge order (lexicographic)
//! are canonical so files diff cleanly and hash stably.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Coord, Graph, Instance, InstanceKind};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct Meta {
    resample_attempts: u32,
}

#[derive(Debug, Serialize, Deserialize)]
struct InstanceFile {
    format_version: u32,
    kind: InstanceKind,
    #[serde(rename = "L")]
    l: Option<u32>,
    rho_ppt: Option<u32>,
    r2: Option<u32>,
    seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    epsilon_ppt: Option<u32>,
    n: usize,
    coords: Option<Vec<[i32; 2]>>,
    edges: Vec<[usize; 2]>,
    meta: Meta,
}

impl Instance {
    /// Canonical JSON text, newline terminated.
    pub fn to_json(&self) -> String {
        let file = InstanceFile {
            format_version: FORMAT_VERSION,
            kind: self.kind,
            l: self.l,
            rho_ppt: self.rho_ppt,
            r2: self.r2,
            seed: self.seed,
            epsilon_ppt: if self.kind == InstanceKind::Rewired { self.epsilon_ppt } else { None },
            n: self.graph.n(),
            coords: self.graph.coords().map(|c| c.iter().map(|&(x, y)| [x, y]).collect()),
            edges: self.graph.edges().iter().map(|&(i, j)| [i, j]).collect(),
            meta: Meta { resample_attempts: self.resample_attempts },
        };
        let mut s = serde_json::to_string(&file).expect("instance serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: InstanceFile = serde_json::from_str(text)?;
        if f.format_version != FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported format_version {}",
                f.format_version
            )));
        }
        let coords: Option<Vec<Coord>> = f.coords.map(|c| c.into_iter().map(|[x, y]| (x, y)).collect());
        let graph = Graph::from_edges(f.n, f.edges.into_iter().map(|[i, j]| (i, j)), coords)?;
        Ok(Instance {
            kind: f.kind,
            l: f.l,
            rho_ppt: f.rho_ppt,
            r2: f.r2,
            seed: f.seed,
            epsilon_ppt: f.epsilon_ppt,
            graph,
            resample_attempts: f.meta.resample_attempts,
        })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    /// Wraps a bare graph (no generator provenance) as an instance.
    pub fn from_graph(graph: Graph) -> Self {
        Instance {
            kind: InstanceKind::ErGnm,
            l: None,
            rho_ppt: None,
            r2: None,
            seed: 0,
            epsilon_ppt: None,
            graph,
            resample_attempts: 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{rewired_instance, ud_lattice_instance, LatticeSpec};

    #[test]
    fn instance_roundtrip_is_byte_stable() {
        let spec = LatticeSpec::new(7, 800, 2, 42);
        let inst = ud_lattice_instance(&spec).unwrap();
        let text = inst.to_json();
        let back = Instance::from_json(&text).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.to_json(), text);
        assert_eq!(ud_lattice_instance(&spec).unwrap().to_json(), text);
        assert!(text.contains("\"kind\":\"ud_lattice\""));
        assert!(text.contains("\"L\":7"));
        assert!(!text.contains("epsilon_ppt"));
    }

    #[test]
    fn rewired_instance_records_epsilon() {
        let inst = rewired_instance(&LatticeSpec::new(5, 800, 2, 3), 500).unwrap();
        let text = inst.to_json();
        assert!(text.contains("\"epsilon_ppt\":500"));
        assert_eq!(Instance::from_json(&text).unwrap(), inst);
    }

    #[test]
    fn rejects_unknown_version() {
        let text = Instance::from_graph(Graph::path(3)).to_json().replace("\"format_version\":1", "\"format_version\":2");
        assert!(Instance::from_json(&text).is_err());
    }
}
