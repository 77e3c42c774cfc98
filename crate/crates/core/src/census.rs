//! Triad classification and the full, structural, and simple censuses.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::bigraph::{ActorIx, BipartiteGraph, PairWeights, Projection};
use crate::error::{Error, Result};
use crate::partition::{binomial, index_partition};
use crate::triads::fold_connected;

/// The isomorphism class of a triad: exclusive-event counts per actor pair
/// (sorted descending) and the number of events shared by all three.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriadClass {
    pub mu: [u32; 3],
    pub w: u32,
}

impl TriadClass {
    pub fn new(mu: [u32; 3], w: u32) -> Result<Self> {
        if mu[0] >= mu[1] && mu[1] >= mu[2] {
            Ok(TriadClass { mu, w })
        } else {
            Err(Error::InvalidPartition(mu))
        }
    }

    pub fn from_weights(pw: &PairWeights) -> Self {
        let w = pw.w_pqr;
        let mut mu = [pw.w_pq - w, pw.w_qr - w, pw.w_pr - w];
        mu.sort_unstable_by(|a, b| b.cmp(a));
        TriadClass { mu, w }
    }

    /// Number of actor pairs with at least one exclusive event.
    pub fn exclusive_pairs(&self) -> usize {
        self.mu.iter().filter(|&&m| m > 0).count()
    }

    /// Edge count of the triad's projection.
    pub fn projection_edges(&self) -> usize {
        if self.w > 0 {
            3
        } else {
            self.exclusive_pairs()
        }
    }

    /// Position in export order: partition index, then inclusive count.
    pub fn export_key(&self) -> (u64, u32) {
        (index_partition(self.mu).unwrap_or(u64::MAX), self.w)
    }

    /// The `mu1.mu2.mu3-w` key used in JSON exports.
    pub fn key(&self) -> String {
        format!("{}.{}.{}-{}", self.mu[0], self.mu[1], self.mu[2], self.w)
    }

    /// The smallest affiliation network in this class: actors `p, q, r`,
    /// `mu1` events on `{p,q}`, `mu2` on `{q,r}`, `mu3` on `{p,r}`, and `w`
    /// on `{p,q,r}`.
    pub fn representative(&self) -> BipartiteGraph {
        let mut events: Vec<(String, Vec<&str>)> = Vec::new();
        let groups: [(&str, Vec<&str>, u32); 4] = [
            ("pq", vec!["p", "q"], self.mu[0]),
            ("qr", vec!["q", "r"], self.mu[1]),
            ("pr", vec!["p", "r"], self.mu[2]),
            ("pqr", vec!["p", "q", "r"], self.w),
        ];
        for (name, actors, count) in groups {
            for n in 0..count {
                events.push((format!("{name}{n}"), actors.clone()));
            }
        }
        let rows = events.iter().flat_map(|(e, actors)| {
            actors
                .iter()
                .map(move |a| crate::bigraph::AttendanceRow::new(*a, e.clone()))
        });
        BipartiteGraph::with_actors(&["p", "q", "r"], rows).expect("representative is well formed")
    }
}

impl fmt::Display for TriadClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Tr(({},{},{}),{})",
            self.mu[0], self.mu[1], self.mu[2], self.w
        )
    }
}

/// Class of the triad on three distinct actors.
pub fn classify_triad(g: &BipartiteGraph, i: ActorIx, j: ActorIx, k: ActorIx) -> Result<TriadClass> {
    Ok(TriadClass::from_weights(&g.pair_weights(i, j, k)?))
}

/// Tallies of triads by class; classes with no triads are absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FullCensus {
    tallies: BTreeMap<TriadClass, u64>,
    n_actors: usize,
}

impl FullCensus {
    pub fn from_tallies(n_actors: usize, tallies: impl IntoIterator<Item = (TriadClass, u64)>) -> Self {
        let mut map = BTreeMap::new();
        for (c, n) in tallies {
            if n > 0 {
                *map.entry(c).or_insert(0) += n;
            }
        }
        FullCensus {
            tallies: map,
            n_actors,
        }
    }

    pub fn n_actors(&self) -> usize {
        self.n_actors
    }

    pub fn get(&self, c: &TriadClass) -> u64 {
        self.tallies.get(c).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.tallies.values().sum()
    }

    /// Nonzero tallies in export order (partition index, then `w`).
    pub fn entries(&self) -> Vec<(TriadClass, u64)> {
        let mut v: Vec<_> = self.tallies.iter().map(|(c, n)| (*c, *n)).collect();
        v.sort_by_key(|(c, _)| c.export_key());
        v
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TriadClass, &u64)> {
        self.tallies.iter()
    }

    /// Matrix layout: one row per partition in index order up to the largest
    /// part seen, one column per inclusive count `0..=max w`.
    pub fn to_matrix(&self) -> CensusMatrix {
        let max_part = self.tallies.keys().map(|c| c.mu[0]).max().unwrap_or(0);
        let max_w = self.tallies.keys().map(|c| c.w).max().unwrap_or(0);
        let rows = binomial(u64::from(max_part) + 3, 3) as usize;
        let mut partitions = Vec::with_capacity(rows);
        for idx in 1..=rows as u64 {
            partitions.push(crate::partition::unindex_partition(idx, max_part).expect("in range"));
        }
        let counts = partitions
            .iter()
            .map(|&mu| {
                (0..=max_w)
                    .map(|w| self.get(&TriadClass { mu, w }))
                    .collect()
            })
            .collect();
        CensusMatrix {
            partitions,
            max_w,
            counts,
        }
    }
}

impl Serialize for FullCensus {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let entries = self.entries();
        let mut m = s.serialize_map(Some(entries.len()))?;
        for (c, n) in entries {
            m.serialize_entry(&c.key(), &n)?;
        }
        m.end()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusMatrix {
    pub partitions: Vec<[u32; 3]>,
    pub max_w: u32,
    pub counts: Vec<Vec<u64>>,
}

impl CensusMatrix {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("mu");
        for w in 0..=self.max_w {
            out.push_str(&format!(",w{w}"));
        }
        out.push('\n');
        for (mu, row) in self.partitions.iter().zip(&self.counts) {
            out.push_str(&format!("{}.{}.{}", mu[0], mu[1], mu[2]));
            for n in row {
                out.push_str(&format!(",{n}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Counts of triads by `x` = number of pairs with an exclusive event and
/// `y` = whether any inclusive event exists. Indexed `t[x][y]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct StructuralCensus {
    pub t: [[u64; 2]; 4],
}

impl StructuralCensus {
    pub fn get(&self, x: usize, y: usize) -> u64 {
        self.t[x][y]
    }

    pub fn total(&self) -> u64 {
        self.t.iter().flatten().sum()
    }
}

/// Projection triad counts by edge number, `(s0, s1, s2, s3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct SimpleCensus {
    pub s: [u64; 4],
}

impl SimpleCensus {
    pub fn total(&self) -> u64 {
        self.s.iter().sum()
    }
}

impl fmt::Display for SimpleCensus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{},{}", self.s[0], self.s[1], self.s[2], self.s[3])
    }
}

/// The full triad census.
///
/// Triads with two or more projection edges are enumerated from the
/// projection; one-edge triads are counted per edge and empty triads are
/// the remainder of `C(n, 3)`.
pub fn full_census(g: &BipartiteGraph) -> Result<FullCensus> {
    let n = g.n_actors();
    if n < 3 {
        return Err(Error::TooFewActors(n));
    }
    let proj = Projection::new(g);
    let mut tallies: HashMap<TriadClass, u64> = fold_connected(
        g,
        &proj,
        HashMap::new,
        |acc, t, w| {
            let pw = PairWeights {
                w_pq: t.w_ij,
                w_qr: t.w_jk,
                w_pr: t.w_ik,
                w_pqr: w,
            };
            *acc.entry(TriadClass::from_weights(&pw)).or_insert(0) += 1;
        },
        |mut a, b| {
            for (c, m) in b {
                *a.entry(c).or_insert(0) += m;
            }
            a
        },
    );

    for (p, q, w) in proj.edges() {
        let common = common_neighbors(&proj, p, q);
        let union = proj.degree(p) + proj.degree(q) - common;
        let isolated = (n - union) as u64;
        if isolated > 0 {
            *tallies
                .entry(TriadClass {
                    mu: [w, 0, 0],
                    w: 0,
                })
                .or_insert(0) += isolated;
        }
    }

    let seen: u64 = tallies.values().sum();
    let all = binomial(n as u64, 3);
    tallies.insert(TriadClass { mu: [0; 3], w: 0 }, all - seen);
    Ok(FullCensus::from_tallies(n, tallies))
}

fn common_neighbors(proj: &Projection, p: ActorIx, q: ActorIx) -> usize {
    let a: Vec<ActorIx> = proj.neighbors(p).map(|x| x.0).collect();
    let b: Vec<ActorIx> = proj.neighbors(q).map(|x| x.0).collect();
    crate::bigraph::intersect_count(&a, &b) as usize
}

pub fn structural_census(c: &FullCensus) -> StructuralCensus {
    let mut t = [[0u64; 2]; 4];
    for (class, &n) in c.iter() {
        t[class.exclusive_pairs()][usize::from(class.w > 0)] += n;
    }
    StructuralCensus { t }
}

pub fn simple_census(c: &FullCensus) -> SimpleCensus {
    let mut s = [0u64; 4];
    for (class, &n) in c.iter() {
        s[class.projection_edges()] += n;
    }
    SimpleCensus { s }
}
