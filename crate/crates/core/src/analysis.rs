//! Strong triadic closure profiles and walk-based centrality.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bigraph::{BipartiteGraph, Projection};
use crate::error::{Error, Result};
use crate::fraction::Fraction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct StcTally {
    triples: u64,
    weak: u64,
    shared: u64,
}

/// Tallies of centered triples by wedge strength, including strength 0.
fn stc_tallies(g: &BipartiteGraph) -> BTreeMap<u64, StcTally> {
    let n = g.n_actors() as u64;
    let mut out = BTreeMap::new();
    if n < 3 {
        return out;
    }
    let proj = Projection::new(g);
    let partial: Vec<BTreeMap<u64, StcTally>> = (0..g.n_actors())
        .into_par_iter()
        .map(|j| {
            let mut m: BTreeMap<u64, StcTally> = BTreeMap::new();
            let nbrs: Vec<(usize, u32)> = proj.neighbors(j).collect();
            for &(i, w_ij) in &nbrs {
                for &(k, w_jk) in &nbrs {
                    if i == k {
                        continue;
                    }
                    let w_ik = proj.weight(i, k);
                    let w = if w_ik > 0 { g.shared_events3(i, j, k) } else { 0 };
                    let s = u64::from(w_ij - w) * u64::from(w_jk - w);
                    if s == 0 {
                        continue;
                    }
                    let t = m.entry(s).or_default();
                    t.triples += 1;
                    t.weak += u64::from(w_ik > 0);
                    t.shared += u64::from(w_ik);
                }
            }
            m
        })
        .collect();
    for m in partial {
        for (s, t) in m {
            let slot: &mut StcTally = out.entry(s).or_default();
            slot.triples += t.triples;
            slot.weak += t.weak;
            slot.shared += t.shared;
        }
    }
    // Strength-0 triples are the remainder of all ordered triples.
    let mut zero = StcTally {
        triples: n * (n - 1) * (n - 2),
        weak: 0,
        shared: 0,
    };
    for (_, _, w) in proj.edges() {
        zero.weak += 2 * (n - 2);
        zero.shared += 2 * u64::from(w) * (n - 2);
    }
    for t in out.values() {
        zero.triples -= t.triples;
        zero.weak -= t.weak;
        zero.shared -= t.shared;
    }
    if zero.triples > 0 {
        out.insert(0, zero);
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StcRow {
    pub triples: u64,
    pub weak_ties: u64,
    pub probability: Fraction,
}

/// Probability of a weak tie `w_ik > 0` given the wedge strength of the
/// centered triple `(i, j, k)`, for strengths up to `max_s`.
pub fn stc_profile(g: &BipartiteGraph, max_s: u64) -> BTreeMap<u64, StcRow> {
    stc_tallies(g)
        .into_iter()
        .filter(|(s, _)| *s <= max_s)
        .map(|(s, t)| {
            let probability = Fraction::new(t.weak, t.triples, "").expect("nonempty strength bin");
            (
                s,
                StcRow {
                    triples: t.triples,
                    weak_ties: t.weak,
                    probability,
                },
            )
        })
        .collect()
}

/// Mean number of events shared by the ends of a centered triple, by wedge
/// strength.
pub fn expected_shared_events(g: &BipartiteGraph, max_s: u64) -> BTreeMap<u64, f64> {
    stc_tallies(g)
        .into_iter()
        .filter(|(s, _)| *s <= max_s)
        .map(|(s, t)| (s, t.shared as f64 / t.triples as f64))
        .collect()
}

/// Which graph the walks run in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WalkMode {
    /// Actors and events; an actor's 1-walk count is its number of events.
    #[default]
    Bipartite,
    /// The weighted actor projection.
    Projection,
}

impl fmt::Display for WalkMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WalkMode::Bipartite => "bipartite",
            WalkMode::Projection => "projection",
        })
    }
}

impl FromStr for WalkMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "bipartite" => Ok(WalkMode::Bipartite),
            "projection" => Ok(WalkMode::Projection),
            other => Err(Error::InvalidArgument(format!("unknown walk mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CentralityVector {
    pub actors: Vec<String>,
    pub scores: Vec<f64>,
}

impl CentralityVector {
    pub fn get(&self, actor: &str) -> Option<f64> {
        self.actors.iter().position(|a| a == actor).map(|i| self.scores[i])
    }

    pub fn norm(&self) -> f64 {
        norm(&self.scores)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("actor,score\n");
        for (a, x) in self.actors.iter().zip(&self.scores) {
            s.push_str(&format!("{a},{x}\n"));
        }
        s
    }
}

/// Sparse symmetric adjacency with weights, rows in a fixed order.
struct Operator {
    rows: Vec<Vec<(usize, f64)>>,
    n_actors: usize,
}

impl Operator {
    fn new(g: &BipartiteGraph, mode: WalkMode) -> Self {
        let na = g.n_actors();
        let rows = match mode {
            WalkMode::Bipartite => {
                let mut rows: Vec<Vec<(usize, f64)>> = (0..na)
                    .map(|a| g.events_of(a).iter().map(|&e| (na + e, 1.0)).collect())
                    .collect();
                rows.extend((0..g.n_events()).map(|e| g.actors_of(e).iter().map(|&a| (a, 1.0)).collect()));
                rows
            }
            WalkMode::Projection => {
                let p = Projection::new(g);
                (0..na)
                    .map(|a| p.neighbors(a).map(|(b, w)| (b, f64::from(w))).collect())
                    .collect()
            }
        };
        Operator { rows, n_actors: na }
    }

    /// `(A + shift I) x`.
    fn apply(&self, x: &[f64], shift: f64) -> Vec<f64> {
        self.rows
            .par_iter()
            .enumerate()
            .map(|(r, row)| row.iter().fold(shift * x[r], |acc, &(c, w)| acc + w * x[c]))
            .collect()
    }
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

fn normalized(g: &BipartiteGraph, mut scores: Vec<f64>, what: &str) -> Result<CentralityVector> {
    let n = norm(&scores);
    if n == 0.0 || !n.is_finite() {
        return Err(Error::undefined(what));
    }
    for s in &mut scores {
        *s /= n;
    }
    Ok(CentralityVector {
        actors: g.actor_ids().to_vec(),
        scores,
    })
}

/// Unit-normalized counts of walks of length `1..=ell` starting at each actor.
pub fn walk_centrality(g: &BipartiteGraph, ell: u32, mode: WalkMode) -> Result<CentralityVector> {
    if ell == 0 {
        return Err(Error::InvalidArgument("walk length must be positive".into()));
    }
    let op = Operator::new(g, mode);
    let mut x = vec![1.0; op.rows.len()];
    let mut total = vec![0.0; op.n_actors];
    for _ in 0..ell {
        x = op.apply(&x, 0.0);
        for (t, v) in total.iter_mut().zip(&x) {
            *t += v;
        }
    }
    normalized(g, total, "no walks in the network")
}

pub const EIGEN_TOLERANCE: f64 = 1e-12;
pub const EIGEN_MAX_ITERATIONS: usize = 100_000;

/// Principal eigenvector scores restricted to actors, by power iteration on
/// the adjacency shifted by the identity (a bipartite adjacency alone has a
/// symmetric spectrum, on which plain power iteration oscillates).
pub fn eigen_centrality(g: &BipartiteGraph, mode: WalkMode) -> Result<CentralityVector> {
    let op = Operator::new(g, mode);
    if op.rows.iter().all(Vec::is_empty) {
        return Err(Error::undefined("the network has no edges"));
    }
    let n = op.rows.len();
    let mut x = vec![1.0 / (n as f64).sqrt(); n];
    for _ in 0..EIGEN_MAX_ITERATIONS {
        let mut y = op.apply(&x, 1.0);
        let ny = norm(&y);
        for v in &mut y {
            *v /= ny;
        }
        let delta = x.iter().zip(&y).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
        x = y;
        if delta < EIGEN_TOLERANCE {
            x.truncate(op.n_actors);
            return normalized(g, x, "no actor attends any event");
        }
    }
    Err(Error::NoConvergence {
        iterations: EIGEN_MAX_ITERATIONS,
    })
}

/// `c_inf - c_ell`; positive where influence runs beyond short walks.
pub fn corrected_centrality(g: &BipartiteGraph, ell: u32, mode: WalkMode) -> Result<CentralityVector> {
    let short = walk_centrality(g, ell, mode)?;
    let long = eigen_centrality(g, mode)?;
    Ok(CentralityVector {
        actors: long.actors,
        scores: long.scores.iter().zip(&short.scores).map(|(a, b)| a - b).collect(),
    })
}
