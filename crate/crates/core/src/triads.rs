//! Enumeration of actor triads with at least two projection edges.
//!
//! Every wedge, closure, and dynamic-closure count lives in such triads, and
//! they are reachable from the projection: an open triad from its unique
//! center, a triangle from its smallest actor.

use rayon::prelude::*;

use crate::bigraph::{ActorIx, BipartiteGraph, Projection};

/// A triad reached from center `j` with ends `i < k`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct ConnectedTriad {
    pub i: ActorIx,
    pub j: ActorIx,
    pub k: ActorIx,
    pub w_ij: u32,
    pub w_jk: u32,
    /// Zero when `i` and `k` are not adjacent.
    pub w_ik: u32,
}

impl ConnectedTriad {
    pub fn is_triangle(&self) -> bool {
        self.w_ik > 0
    }
}

/// Folds over each triad with two or more edges exactly once, in parallel
/// over centers. `reduce` must be associative.
pub(crate) fn fold_connected<T, F, R>(
    g: &BipartiteGraph,
    proj: &Projection,
    identity: impl Fn() -> T + Sync + Send,
    fold: F,
    reduce: R,
) -> T
where
    T: Send,
    F: Fn(&mut T, ConnectedTriad, u32) + Sync + Send,
    R: Fn(T, T) -> T + Sync + Send,
{
    (0..proj.n_nodes())
        .into_par_iter()
        .fold(&identity, |mut acc, j| {
            let nbrs = proj.neighbor_slice(j);
            for (x, &(i, w_ij, _)) in nbrs.iter().enumerate() {
                for &(k, w_jk, _) in &nbrs[x + 1..] {
                    let w_ik = proj.weight(i, k);
                    if w_ik > 0 && j > i {
                        // Triangle; counted from its smallest actor.
                        continue;
                    }
                    let t = ConnectedTriad {
                        i,
                        j,
                        k,
                        w_ij,
                        w_jk,
                        w_ik,
                    };
                    let w = if t.is_triangle() {
                        g.shared_events3(i, j, k)
                    } else {
                        0
                    };
                    fold(&mut acc, t, w);
                }
            }
            acc
        })
        .reduce(&identity, reduce)
}
