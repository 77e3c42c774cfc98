//! Bundled example networks and synthetic generators.

use crate::bigraph::{AttendanceRow, BipartiteGraph};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct Dataset {
    pub name: &'static str,
    pub description: &'static str,
    pub csv: &'static str,
}

pub const DATASETS: &[Dataset] = &[
    Dataset {
        name: "dg1",
        description: "Davis Southern Women: 18 women, 14 social events (attendance only)",
        csv: include_str!("../data/dg1.csv"),
    },
    Dataset {
        name: "dg2",
        description: "Five women (A-E) and five events drawn from the Southern Women data",
        csv: include_str!("../data/dg2.csv"),
    },
    Dataset {
        name: "kite-a",
        description: "Kite: triangle of pairwise events i-j, j-k, i-k, pendant k-l",
        csv: include_str!("../data/kite-a.csv"),
    },
    Dataset {
        name: "kite-b",
        description: "Kite: one event attended by i, j, k, pendant k-l",
        csv: include_str!("../data/kite-b.csv"),
    },
    Dataset {
        name: "kite-c",
        description: "Kite: pairwise events i-j, j-k, two i-k events, pendant k-l",
        csv: include_str!("../data/kite-c.csv"),
    },
    Dataset {
        name: "kite-d",
        description: "Kite: three events attended by i, j, k, pendant k-l",
        csv: include_str!("../data/kite-d.csv"),
    },
];

pub fn find(name: &str) -> Option<&'static Dataset> {
    DATASETS.iter().find(|d| d.name.eq_ignore_ascii_case(name))
}

pub fn load(name: &str) -> Result<BipartiteGraph> {
    let d = find(name).ok_or_else(|| Error::InvalidArgument(format!("no bundled dataset `{name}`")))?;
    BipartiteGraph::read_csv(d.csv.as_bytes()).map(|(g, _)| g)
}

/// The complete bipartite graph K_{n,m}: actors `a1..an`, each attending all
/// events `e1..em`.
pub fn biclique(n: usize, m: usize) -> BipartiteGraph {
    let actors: Vec<String> = (1..=n).map(|i| format!("a{i}")).collect();
    let rows = (1..=m).flat_map(|e| actors.iter().map(move |a| AttendanceRow::new(a.clone(), format!("e{e}"))));
    BipartiteGraph::with_actors(&actors, rows).expect("distinct generated ids")
}
