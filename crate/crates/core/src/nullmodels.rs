//! Degree-preserving randomization by checkerboard swaps, and the expected
//! clustering coefficient over the resulting ensemble.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bigraph::{ActorIx, BipartiteGraph, EventIx};
use crate::error::{Error, Result};
use crate::wedges::{global_cc, WedgeScheme};

/// Actor and event degrees, in graph order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSequencePair {
    pub actor_degrees: Vec<usize>,
    pub event_degrees: Vec<usize>,
}

impl DegreeSequencePair {
    pub fn of(g: &BipartiteGraph) -> Self {
        DegreeSequencePair {
            actor_degrees: (0..g.n_actors()).map(|a| g.events_of(a).len()).collect(),
            event_degrees: (0..g.n_events()).map(|e| g.actors_of(e).len()).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct SwapStats {
    pub attempted: u64,
    pub accepted: u64,
}

/// Default number of swap attempts per sample: ten per attendance edge.
pub fn default_burn_in(g: &BipartiteGraph) -> u64 {
    10 * g.attendance_count() as u64
}

fn swap_chain(g: &BipartiteGraph, swaps: u64, rng: &mut ChaCha8Rng) -> (BipartiteGraph, SwapStats) {
    let mut edges: Vec<(ActorIx, EventIx)> = g.attendance().collect();
    let mut present: HashSet<(ActorIx, EventIx)> = edges.iter().copied().collect();
    let mut stats = SwapStats::default();
    if edges.len() < 2 {
        stats.attempted = swaps;
        return (g.clone(), stats);
    }
    for _ in 0..swaps {
        stats.attempted += 1;
        let x = rng.gen_range(0..edges.len());
        let y = rng.gen_range(0..edges.len());
        let ((i, a), (j, b)) = (edges[x], edges[y]);
        if i == j || a == b || present.contains(&(i, b)) || present.contains(&(j, a)) {
            continue;
        }
        present.remove(&(i, a));
        present.remove(&(j, b));
        present.insert((i, b));
        present.insert((j, a));
        edges[x] = (i, b);
        edges[y] = (j, a);
        stats.accepted += 1;
    }
    (g.with_attendance(&edges), stats)
}

fn sample_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Attempts `swaps` checkerboard swaps `(i,a),(j,b) -> (i,b),(j,a)` starting
/// from `g`; moves that would duplicate an attendance are skipped.
pub fn randomize(g: &BipartiteGraph, swaps: u64, seed: u64) -> (BipartiteGraph, SwapStats) {
    swap_chain(g, swaps, &mut sample_rng(seed, 0))
}

/// The `index`-th ensemble member: an independent chain of `burn_in` swaps
/// from `g` on its own stream of the seeded generator.
pub fn sample(g: &BipartiteGraph, burn_in: u64, seed: u64, index: u64) -> (BipartiteGraph, SwapStats) {
    swap_chain(g, burn_in, &mut sample_rng(seed, index))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NullSummary {
    pub mean: f64,
    /// Population standard deviation over defined draws.
    pub std: f64,
    pub undefined_draws: u64,
}

/// Mean and spread of `global_cc` over `samples` degree-preserving draws.
pub fn c_rand(
    g: &BipartiteGraph,
    scheme: WedgeScheme,
    samples: u64,
    burn_in: u64,
    seed: u64,
) -> Result<NullSummary> {
    if samples == 0 {
        return Err(Error::InvalidArgument("at least one sample is required".into()));
    }
    let draws: Vec<Option<f64>> = (0..samples)
        .into_par_iter()
        .map(|s| {
            let (h, _) = sample(g, burn_in, seed, s);
            match global_cc(&h, scheme) {
                Ok(v) => Ok(Some(v.to_f64())),
                Err(e) if e.is_undefined() => Ok(None),
                Err(e) => Err(e),
            }
        })
        .collect::<Result<_>>()?;
    let values: Vec<f64> = draws.iter().flatten().copied().collect();
    let undefined_draws = samples - values.len() as u64;
    if values.is_empty() {
        return Err(Error::undefined("every sampled network lacks wedges"));
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    Ok(NullSummary {
        mean,
        std: var.sqrt(),
        undefined_draws,
    })
}
