//! Dynamic triadic closure.
//!
//! Each projection edge is labelled by the earliest event its two actors
//! attend together. A triad whose sorted edge times are `t1 <= t2 <= t3`
//! (absent edges at infinity) once showed an open 2-path if it has exactly two
//! edges, or three with `t3 > t2`; it later closed in the second case.

use serde::Serialize;

use crate::bigraph::{BipartiteGraph, Projection, Timestamp};
use crate::error::{Error, Result};
use crate::fraction::Fraction;
use crate::triads::fold_connected;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ClosureTally {
    /// Triads that at some time had an open 2-path.
    pub opened: u64,
    /// Those that later became triangles.
    pub closed: u64,
}

/// Every event attended by two or more actors must carry a time.
fn check_times(g: &BipartiteGraph) -> Result<()> {
    for e in 0..g.n_events() {
        if g.actors_of(e).len() >= 2 && g.event_time(e).is_none() {
            return Err(Error::MissingTime(g.event_id(e).to_string()));
        }
    }
    Ok(())
}

pub fn closure_tally(g: &BipartiteGraph) -> Result<ClosureTally> {
    check_times(g)?;
    let proj = Projection::new(g);
    let time = |a, b| -> Timestamp { proj.first_time(a, b).expect("checked above") };
    Ok(fold_connected(
        g,
        &proj,
        ClosureTally::default,
        |acc, t, _| {
            if !t.is_triangle() {
                acc.opened += 1;
                return;
            }
            let mut ts = [time(t.i, t.j), time(t.j, t.k), time(t.i, t.k)];
            ts.sort_unstable();
            if ts[2] > ts[1] {
                acc.opened += 1;
                acc.closed += 1;
            }
        },
        |a, b| ClosureTally {
            opened: a.opened + b.opened,
            closed: a.closed + b.closed,
        },
    ))
}

/// Share of once-open triads that later close.
pub fn dynamic_closure(g: &BipartiteGraph) -> Result<Fraction> {
    let t = closure_tally(g)?;
    Fraction::new(t.closed, t.opened, "no triad ever had an open 2-path")
}
