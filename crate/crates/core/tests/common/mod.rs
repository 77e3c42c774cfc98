//! Independent oracles and random inputs shared by the integration tests.
//!
//! Nothing here uses the library's counting code: wedges and alcoves are
//! enumerated as explicit maps of the 4-path and 6-cycle into the network,
//! and censuses are tallied triple by triple from raw attendance.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use triadic::wedges::{Category, Congruence, Formulation, WedgeScheme};
use triadic::{AttendanceRow, BipartiteGraph};

pub const CATEGORIES: [Category; 3] = [Category::All, Category::Injective, Category::Induced];
pub const CONGRUENCES: [Congruence; 3] = [Congruence::None, Congruence::Structural, Congruence::Actor];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub wedges: u64,
    pub closed: u64,
    pub alcoves: u64,
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        self.wedges += o.wedges;
        self.closed += o.closed;
        self.alcoves += o.alcoves;
    }
}

impl Counts {
    /// `(numerator, denominator)` of the statistic; `None` when 0/0.
    pub fn value(&self, f: Formulation) -> Option<(u64, u64)> {
        let n = match f {
            Formulation::ClosureRate => self.closed,
            Formulation::AlcoveRatio => self.alcoves,
        };
        (self.wedges > 0).then_some((n, self.wedges))
    }
}

fn events_with(g: &BipartiteGraph, a: usize, b: usize) -> Vec<usize> {
    (0..g.n_events()).filter(|&e| g.attends(a, e) && g.attends(b, e)).collect()
}

/// Attendance pattern of event `e` among the triple, as a bitmask.
fn pattern(g: &BipartiteGraph, e: usize, t: [usize; 3]) -> u8 {
    t.iter()
        .enumerate()
        .fold(0, |m, (bit, &x)| m | (u8::from(g.attends(x, e)) << bit))
}

/// Whether a map of the 4-path `i-a-j-b-k` is admitted by `cat`.
fn wedge_ok(g: &BipartiteGraph, cat: Category, i: usize, k: usize, a: usize, b: usize) -> bool {
    match cat {
        Category::All => true,
        Category::Injective => a != b,
        // The image must be induced: i and b, k and a are not adjacent.
        Category::Induced => a != b && !g.attends(k, a) && !g.attends(i, b),
    }
}

/// Whether a map of the 6-cycle `i-a-j-b-k-c-i` is admitted by `cat`.
fn alcove_ok(g: &BipartiteGraph, cat: Category, t: [usize; 3], a: usize, b: usize, c: usize) -> bool {
    let [i, j, k] = t;
    match cat {
        Category::All => true,
        Category::Injective => a != b && b != c && a != c,
        Category::Induced => {
            a != b && b != c && a != c && !g.attends(k, a) && !g.attends(i, b) && !g.attends(j, c)
        }
    }
}

fn key(g: &BipartiteGraph, con: Congruence, t: [usize; 3], events: &[usize]) -> Vec<usize> {
    match con {
        Congruence::None => events.to_vec(),
        Congruence::Structural => events.iter().map(|&e| pattern(g, e, t) as usize).collect(),
        Congruence::Actor => Vec::new(),
    }
}

/// Counts at the ordered triple `(i, j, k)` for every category and
/// congruence, by enumerating maps and quotienting.
pub fn triple_oracle(g: &BipartiteGraph, i: usize, j: usize, k: usize) -> HashMap<(Category, Congruence), Counts> {
    let t = [i, j, k];
    let (ij, jk, ik) = (events_with(g, i, j), events_with(g, j, k), events_with(g, i, k));
    let mut out = HashMap::new();
    for cat in CATEGORIES {
        for con in CONGRUENCES {
            let mut wedges = HashSet::new();
            let mut closed = HashSet::new();
            let mut alcoves = HashSet::new();
            for &a in &ij {
                for &b in &jk {
                    if !wedge_ok(g, cat, i, k, a, b) {
                        continue;
                    }
                    let wk = key(g, con, t, &[a, b]);
                    wedges.insert(wk.clone());
                    for &c in &ik {
                        if alcove_ok(g, cat, t, a, b, c) {
                            closed.insert(wk.clone());
                            alcoves.insert(key(g, con, t, &[a, b, c]));
                        }
                    }
                }
            }
            out.insert(
                (cat, con),
                Counts {
                    wedges: wedges.len() as u64,
                    closed: closed.len() as u64,
                    alcoves: alcoves.len() as u64,
                },
            );
        }
    }
    out
}

/// Per-center oracle counts for every category and congruence.
pub fn center_oracle(g: &BipartiteGraph) -> HashMap<(Category, Congruence), Vec<Counts>> {
    let n = g.n_actors();
    let mut out: HashMap<_, Vec<Counts>> = HashMap::new();
    for cat in CATEGORIES {
        for con in CONGRUENCES {
            out.insert((cat, con), vec![Counts::default(); n]);
        }
    }
    for j in 0..n {
        for i in 0..n {
            for k in 0..n {
                if i == j || j == k || i == k {
                    continue;
                }
                for (cc, c) in triple_oracle(g, i, j, k) {
                    out.get_mut(&cc).unwrap()[j] += c;
                }
            }
        }
    }
    out
}

pub fn sum(v: &[Counts]) -> Counts {
    let mut t = Counts::default();
    for c in v {
        t += *c;
    }
    t
}

/// Full census by direct tally: `(mu, w) -> count`.
pub fn census_oracle(g: &BipartiteGraph) -> BTreeMap<([u32; 3], u32), u64> {
    let n = g.n_actors();
    let mut out = BTreeMap::new();
    for p in 0..n {
        for q in p + 1..n {
            for r in q + 1..n {
                let mut by = [0u32; 8];
                for e in 0..g.n_events() {
                    by[pattern(g, e, [p, q, r]) as usize] += 1;
                }
                // bits: p=1, q=2, r=4
                let mut mu = [by[0b011], by[0b110], by[0b101]];
                mu.sort_unstable_by(|a, b| b.cmp(a));
                *out.entry((mu, by[0b111])).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Boolean projection adjacency.
pub fn adjacency(g: &BipartiteGraph) -> Vec<Vec<bool>> {
    let n = g.n_actors();
    let mut m = vec![vec![false; n]; n];
    for e in 0..g.n_events() {
        let a = g.actors_of(e);
        for &x in a {
            for &y in a {
                if x != y {
                    m[x][y] = true;
                }
            }
        }
    }
    m
}

/// The clustering coefficient of the projection: closed ordered 2-paths
/// over ordered 2-paths.
pub fn projection_cc(g: &BipartiteGraph) -> Option<(u64, u64)> {
    let m = adjacency(g);
    let n = m.len();
    let (mut closed, mut paths) = (0, 0);
    for j in 0..n {
        for i in 0..n {
            for k in 0..n {
                if i != k && m[i][j] && m[j][k] {
                    paths += 1;
                    closed += u64::from(m[i][k]);
                }
            }
        }
    }
    (paths > 0).then_some((closed, paths))
}

/// Projection triads by edge count.
pub fn simple_census_oracle(g: &BipartiteGraph) -> [u64; 4] {
    let m = adjacency(g);
    let n = m.len();
    let mut s = [0; 4];
    for p in 0..n {
        for q in p + 1..n {
            for r in q + 1..n {
                s[usize::from(m[p][q]) + usize::from(m[q][r]) + usize::from(m[p][r])] += 1;
            }
        }
    }
    s
}

pub fn same_ratio(x: (u64, u64), numer: u64, denom: u64) -> bool {
    u128::from(x.0) * u128::from(denom) == u128::from(numer) * u128::from(x.1)
}

/// A random network with `actors` actors (all kept, even if isolated),
/// `events` events, and independent attendance with probability `p`.
pub fn random_graph(rng: &mut impl Rng, actors: usize, events: usize, p: f64) -> BipartiteGraph {
    let ids: Vec<String> = (0..actors).map(|a| format!("a{a}")).collect();
    let mut rows = Vec::new();
    for e in 0..events {
        for id in &ids {
            if rng.gen_bool(p) {
                rows.push(AttendanceRow::new(id.clone(), format!("e{e}")));
            }
        }
    }
    BipartiteGraph::with_actors(&ids, rows).unwrap()
}

/// The acceptance-suite distribution: at most 10 actors and 10 events,
/// density between 0.1 and 0.5.
pub fn small_random_graph(rng: &mut impl Rng) -> BipartiteGraph {
    let actors = rng.gen_range(3..=10);
    let events = rng.gen_range(1..=10);
    let p = rng.gen_range(0.1..=0.5);
    random_graph(rng, actors, events, p)
}

pub fn seeded(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Rebuilds `g` with actors and events listed in a different order.
pub fn permuted(g: &BipartiteGraph, actor_order: &[usize], event_order: &[usize]) -> BipartiteGraph {
    let ids: Vec<&str> = actor_order.iter().map(|&a| g.actor_id(a)).collect();
    let mut rows = Vec::new();
    for &e in event_order {
        for &a in actor_order {
            if g.attends(a, e) {
                rows.push(AttendanceRow::new(g.actor_id(a), g.event_id(e)));
            }
        }
    }
    BipartiteGraph::with_actors(&ids, rows).unwrap()
}

/// Copy of `g` with event `e` attended twice (a fresh event with the same
/// attendees).
pub fn with_duplicate(g: &BipartiteGraph, e: usize) -> BipartiteGraph {
    let attendees: Vec<&str> = g.actors_of(e).iter().map(|&a| g.actor_id(a)).collect();
    let name = format!("{}-copy", g.event_id(e));
    g.with_extra_events(&[(name.as_str(), &attendees[..], None)]).unwrap()
}

/// Every scheme, paired with its oracle counts key.
pub fn schemes() -> Vec<WedgeScheme> {
    WedgeScheme::grid()
}
