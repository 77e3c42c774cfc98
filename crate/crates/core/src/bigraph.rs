//! The affiliation-network model: actors, events, and who attended what.
//!
//! Ids are opaque strings at the boundary and dense indices inside. Both
//! directions of the incidence relation are kept as sorted index lists so
//! that shared-event counts are sorted-list intersections.

use std::collections::hash_map::Entry;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Read;

use chrono::{Datelike, NaiveDate};
use serde::Serialize;

use crate::error::{Error, Result};

/// Dense actor index into a [`BipartiteGraph`].
pub type ActorIx = usize;
/// Dense event index into a [`BipartiteGraph`].
pub type EventIx = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeKind {
    Integer,
    Date,
}

/// A totally ordered event time. Dates are stored as days from the common era.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Timestamp(i64);

impl Timestamp {
    pub fn new(value: i64) -> Self {
        Timestamp(value)
    }

    pub fn value(self) -> i64 {
        self.0
    }

    /// Parses an integer or an ISO-8601 calendar date (`YYYY-MM-DD`).
    pub fn parse(s: &str) -> Option<(TimeKind, Timestamp)> {
        let s = s.trim();
        if let Ok(v) = s.parse::<i64>() {
            return Some((TimeKind::Integer, Timestamp(v)));
        }
        NaiveDate::parse_from_str(s, "%Y-%m-%d")
            .ok()
            .map(|d| (TimeKind::Date, Timestamp(i64::from(d.num_days_from_ce()))))
    }
}


/// One attendance record: `actor` attended `event`, optionally at `time`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttendanceRow {
    pub actor: String,
    pub event: String,
    pub time: Option<Timestamp>,
}

impl AttendanceRow {
    pub fn new(actor: impl Into<String>, event: impl Into<String>) -> Self {
        AttendanceRow {
            actor: actor.into(),
            event: event.into(),
            time: None,
        }
    }

    pub fn timed(actor: impl Into<String>, event: impl Into<String>, time: i64) -> Self {
        AttendanceRow {
            actor: actor.into(),
            event: event.into(),
            time: Some(Timestamp(time)),
        }
    }
}

/// What ingestion did besides building the graph.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestReport {
    pub rows: u64,
    pub duplicates_collapsed: u64,
    pub time_kind: Option<TimeKind>,
}

/// A simple bipartite graph of actors and events. Immutable once built.
#[derive(Clone)]
pub struct BipartiteGraph {
    actor_ids: Vec<String>,
    event_ids: Vec<String>,
    actor_lookup: HashMap<String, ActorIx>,
    event_lookup: HashMap<String, EventIx>,
    actor_events: Vec<Vec<EventIx>>,
    event_actors: Vec<Vec<ActorIx>>,
    event_time: Vec<Option<Timestamp>>,
}

impl fmt::Debug for BipartiteGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BipartiteGraph")
            .field("actors", &self.actor_ids.len())
            .field("events", &self.event_ids.len())
            .field("attendance", &self.attendance_count())
            .finish()
    }
}

impl BipartiteGraph {
    /// Builds a graph from attendance rows. Duplicate rows collapse; actors
    /// and events appear in first-seen order.
    pub fn from_edge_list<I>(rows: I) -> Result<Self>
    where
        I: IntoIterator<Item = AttendanceRow>,
    {
        Self::from_edge_list_with_report(rows).map(|(g, _)| g)
    }

    pub fn from_edge_list_with_report<I>(rows: I) -> Result<(Self, IngestReport)>
    where
        I: IntoIterator<Item = AttendanceRow>,
    {
        let mut builder = Builder::default();
        for (n, row) in rows.into_iter().enumerate() {
            builder.push(n as u64 + 1, row, None)?;
        }
        Ok(builder.finish())
    }

    /// Like [`Self::from_edge_list`], but declares `actors` first so that
    /// actors without attendance are kept and ordering is fixed.
    pub fn with_actors<S, I>(actors: &[S], rows: I) -> Result<Self>
    where
        S: AsRef<str>,
        I: IntoIterator<Item = AttendanceRow>,
    {
        let mut builder = Builder::default();
        for a in actors {
            builder.intern_actor(a.as_ref());
        }
        for (n, row) in rows.into_iter().enumerate() {
            builder.push(n as u64 + 1, row, None)?;
        }
        Ok(builder.finish().0)
    }

    /// Convenience constructor: each entry is an event and the actors attending it.
    pub fn from_events<S: AsRef<str>>(events: &[(&str, &[S])]) -> Result<Self> {
        let rows = events.iter().flat_map(|(e, actors)| {
            actors
                .iter()
                .map(move |a| AttendanceRow::new(a.as_ref(), *e))
        });
        Self::from_edge_list(rows)
    }

    /// Reads `actor,event[,time]` CSV (or TSV when the header contains a tab).
    pub fn read_csv<R: Read>(mut reader: R) -> Result<(Self, IngestReport)> {
        let mut text = String::new();
        reader.read_to_string(&mut text)?;
        let header_line = text.lines().next().unwrap_or("");
        let delimiter = if header_line.contains('\t') { b'\t' } else { b',' };

        let mut rdr = csv::ReaderBuilder::new()
            .delimiter(delimiter)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers = rdr.headers()?.clone();
        let column = |name: &str| {
            headers
                .iter()
                .position(|h| h.trim_start_matches('\u{feff}').eq_ignore_ascii_case(name))
        };
        let (actor_col, event_col) = match (column("actor"), column("event")) {
            (Some(a), Some(e)) => (a, e),
            _ => {
                return Err(Error::BadRow {
                    row: 1,
                    message: "header must name `actor` and `event` columns".into(),
                })
            }
        };
        let time_col = column("time");

        let mut builder = Builder::default();
        for record in rdr.records() {
            let record = record?;
            let line = record.position().map(|p| p.line()).unwrap_or(0);
            let field = |i: usize| record.get(i).unwrap_or("").to_string();
            let (actor, event) = (field(actor_col), field(event_col));
            if actor.is_empty() || event.is_empty() {
                return Err(Error::BadRow {
                    row: line,
                    message: "empty actor or event".into(),
                });
            }
            let mut kind = None;
            let time = match time_col.map(field).filter(|t| !t.is_empty()) {
                None => None,
                Some(raw) => match Timestamp::parse(&raw) {
                    Some((k, t)) => {
                        kind = Some(k);
                        Some(t)
                    }
                    None => {
                        return Err(Error::BadRow {
                            row: line,
                            message: format!("unparseable time `{raw}`"),
                        })
                    }
                },
            };
            builder.push(line, AttendanceRow { actor, event, time }, kind)?;
        }
        Ok(builder.finish())
    }

    pub fn n_actors(&self) -> usize {
        self.actor_ids.len()
    }

    pub fn n_events(&self) -> usize {
        self.event_ids.len()
    }

    pub fn attendance_count(&self) -> usize {
        self.actor_events.iter().map(Vec::len).sum()
    }

    pub fn actor_ids(&self) -> &[String] {
        &self.actor_ids
    }

    pub fn event_ids(&self) -> &[String] {
        &self.event_ids
    }

    pub fn actor_id(&self, a: ActorIx) -> &str {
        &self.actor_ids[a]
    }

    pub fn event_id(&self, e: EventIx) -> &str {
        &self.event_ids[e]
    }

    pub fn actor(&self, id: &str) -> Result<ActorIx> {
        self.actor_lookup
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownActor(id.to_string()))
    }

    pub fn event(&self, id: &str) -> Option<EventIx> {
        self.event_lookup.get(id).copied()
    }

    /// Sorted events attended by `a`.
    pub fn events_of(&self, a: ActorIx) -> &[EventIx] {
        &self.actor_events[a]
    }

    /// Sorted actors attending `e`.
    pub fn actors_of(&self, e: EventIx) -> &[ActorIx] {
        &self.event_actors[e]
    }

    pub fn attends(&self, a: ActorIx, e: EventIx) -> bool {
        self.actor_events[a].binary_search(&e).is_ok()
    }

    pub fn event_time(&self, e: EventIx) -> Option<Timestamp> {
        self.event_time[e]
    }

    /// True when every event carries a time.
    pub fn is_timed(&self) -> bool {
        self.event_time.iter().all(Option::is_some)
    }

    /// All attendance pairs, ordered by actor then event.
    pub fn attendance(&self) -> impl Iterator<Item = (ActorIx, EventIx)> + '_ {
        self.actor_events
            .iter()
            .enumerate()
            .flat_map(|(a, evs)| evs.iter().map(move |&e| (a, e)))
    }

    /// Number of events attended by both actors.
    pub fn shared_events(&self, a: ActorIx, b: ActorIx) -> u32 {
        intersect_count(&self.actor_events[a], &self.actor_events[b])
    }

    /// Number of events attended by all three actors.
    pub fn shared_events3(&self, a: ActorIx, b: ActorIx, c: ActorIx) -> u32 {
        intersect3_count(
            &self.actor_events[a],
            &self.actor_events[b],
            &self.actor_events[c],
        )
    }

    /// Shared-event counts of three distinct actors `(p, q, r)`.
    pub fn pair_weights(&self, p: ActorIx, q: ActorIx, r: ActorIx) -> Result<PairWeights> {
        self.check_triple(p, q, r)?;
        Ok(PairWeights {
            w_pq: self.shared_events(p, q),
            w_qr: self.shared_events(q, r),
            w_pr: self.shared_events(p, r),
            w_pqr: self.shared_events3(p, q, r),
        })
    }

    pub(crate) fn check_triple(&self, p: ActorIx, q: ActorIx, r: ActorIx) -> Result<()> {
        for x in [p, q, r] {
            if x >= self.n_actors() {
                return Err(Error::UnknownActor(format!("#{x}")));
            }
        }
        if p == q || q == r || p == r {
            return Err(Error::NonDistinctActors);
        }
        Ok(())
    }

    /// The subgraph scheduled by `actors`: those actors plus every event
    /// attended by at least two of them, with attendance restricted to them.
    pub fn scheduled_subgraph<S: AsRef<str>>(&self, actors: &[S]) -> Result<BipartiteGraph> {
        let mut keep = vec![false; self.n_actors()];
        for id in actors {
            keep[self.actor(id.as_ref())?] = true;
        }
        let mut b = Builder::default();
        // Actors first, in graph order, so isolated members of W survive.
        for a in (0..self.n_actors()).filter(|&a| keep[a]) {
            b.intern_actor(&self.actor_ids[a]);
        }
        let mut row = 0;
        for (e, attendees) in self.event_actors.iter().enumerate() {
            let inside: Vec<ActorIx> = attendees.iter().copied().filter(|&a| keep[a]).collect();
            if inside.len() < 2 {
                continue;
            }
            for a in inside {
                row += 1;
                let r = AttendanceRow {
                    actor: self.actor_ids[a].clone(),
                    event: self.event_ids[e].clone(),
                    time: self.event_time[e],
                };
                b.push(row, r, None)?;
            }
        }
        Ok(b.finish().0)
    }

    /// Same actors, events and times, different attendance.
    pub(crate) fn with_attendance(&self, pairs: &[(ActorIx, EventIx)]) -> BipartiteGraph {
        let mut actor_events = vec![Vec::new(); self.n_actors()];
        let mut event_actors = vec![Vec::new(); self.n_events()];
        for &(a, e) in pairs {
            actor_events[a].push(e);
            event_actors[e].push(a);
        }
        for v in actor_events.iter_mut().chain(event_actors.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        BipartiteGraph {
            actor_ids: self.actor_ids.clone(),
            event_ids: self.event_ids.clone(),
            actor_lookup: self.actor_lookup.clone(),
            event_lookup: self.event_lookup.clone(),
            actor_events,
            event_actors,
            event_time: self.event_time.clone(),
        }
    }

    /// Appends events; used to build variants of a graph in tests and tools.
    pub fn with_extra_events<S: AsRef<str>>(
        &self,
        events: &[(&str, &[S], Option<i64>)],
    ) -> Result<BipartiteGraph> {
        let mut rows: Vec<AttendanceRow> = self
            .attendance()
            .map(|(a, e)| AttendanceRow {
                actor: self.actor_ids[a].clone(),
                event: self.event_ids[e].clone(),
                time: self.event_time[e],
            })
            .collect();
        for (e, actors, t) in events {
            for a in actors.iter() {
                rows.push(AttendanceRow {
                    actor: a.as_ref().to_string(),
                    event: e.to_string(),
                    time: t.map(Timestamp),
                });
            }
        }
        let mut b = Builder::default();
        for id in &self.actor_ids {
            b.intern_actor(id);
        }
        for (n, r) in rows.into_iter().enumerate() {
            b.push(n as u64 + 1, r, None)?;
        }
        Ok(b.finish().0)
    }

    /// Writes the graph back out as `actor,event[,time]` CSV.
    pub fn to_csv(&self) -> String {
        let timed = self.event_time.iter().any(Option::is_some);
        let mut out = String::from(if timed { "actor,event,time\n" } else { "actor,event\n" });
        for (e, attendees) in self.event_actors.iter().enumerate() {
            for &a in attendees {
                out.push_str(&csv_field(&self.actor_ids[a]));
                out.push(',');
                out.push_str(&csv_field(&self.event_ids[e]));
                if timed {
                    out.push(',');
                    if let Some(t) = self.event_time[e] {
                        out.push_str(&t.0.to_string());
                    }
                }
                out.push('\n');
            }
        }
        out
    }

    pub fn summary(&self) -> GraphSummary {
        let actor_degrees: Vec<usize> = self.actor_events.iter().map(Vec::len).collect();
        let event_degrees: Vec<usize> = self.event_actors.iter().map(Vec::len).collect();
        GraphSummary {
            actors: self.n_actors(),
            events: self.n_events(),
            attendance: self.attendance_count(),
            timed: self.is_timed() && self.n_events() > 0,
            actor_degrees: self
                .actor_ids
                .iter()
                .cloned()
                .zip(actor_degrees)
                .collect(),
            event_degrees: self
                .event_ids
                .iter()
                .cloned()
                .zip(event_degrees)
                .collect(),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Counts and degree sequences, in input order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSummary {
    pub actors: usize,
    pub events: usize,
    pub attendance: usize,
    pub timed: bool,
    pub actor_degrees: Vec<(String, usize)>,
    pub event_degrees: Vec<(String, usize)>,
}

#[derive(Default)]
struct Builder {
    actor_ids: Vec<String>,
    event_ids: Vec<String>,
    actor_lookup: HashMap<String, ActorIx>,
    event_lookup: HashMap<String, EventIx>,
    pairs: HashSet<(ActorIx, EventIx)>,
    order: Vec<(ActorIx, EventIx)>,
    event_time: Vec<Option<Timestamp>>,
    // Row that first fixed each event's time (or lack of one).
    time_row: Vec<u64>,
    time_kind: Option<TimeKind>,
    rows: u64,
    duplicates: u64,
}

impl Builder {
    fn intern_actor(&mut self, id: &str) -> ActorIx {
        if let Some(&a) = self.actor_lookup.get(id) {
            return a;
        }
        let a = self.actor_ids.len();
        self.actor_ids.push(id.to_string());
        self.actor_lookup.insert(id.to_string(), a);
        a
    }

    fn push(&mut self, row: u64, r: AttendanceRow, kind: Option<TimeKind>) -> Result<()> {
        self.rows += 1;
        if r.actor == r.event
            || self.event_lookup.contains_key(&r.actor)
            || self.actor_lookup.contains_key(&r.event)
        {
            let id = if r.actor == r.event || self.event_lookup.contains_key(&r.actor) {
                r.actor
            } else {
                r.event
            };
            return Err(Error::IdCollision { id, row });
        }
        if let Some(k) = kind {
            match self.time_kind {
                None => self.time_kind = Some(k),
                Some(prev) if prev != k => {
                    return Err(Error::BadRow {
                        row,
                        message: "mixes integer times and dates".into(),
                    })
                }
                _ => {}
            }
        }
        let a = self.intern_actor(&r.actor);
        let e = match self.event_lookup.entry(r.event.clone()) {
            Entry::Occupied(o) => {
                let e = *o.get();
                if self.event_time[e] != r.time {
                    return Err(Error::InconsistentTime {
                        event: r.event,
                        first_row: self.time_row[e],
                        row,
                    });
                }
                e
            }
            Entry::Vacant(v) => {
                let e = self.event_ids.len();
                v.insert(e);
                self.event_ids.push(r.event);
                self.event_time.push(r.time);
                self.time_row.push(row);
                e
            }
        };
        if self.pairs.insert((a, e)) {
            self.order.push((a, e));
        } else {
            self.duplicates += 1;
        }
        Ok(())
    }

    fn finish(self) -> (BipartiteGraph, IngestReport) {
        let mut actor_events = vec![Vec::new(); self.actor_ids.len()];
        let mut event_actors = vec![Vec::new(); self.event_ids.len()];
        for &(a, e) in &self.order {
            actor_events[a].push(e);
            event_actors[e].push(a);
        }
        for v in actor_events.iter_mut().chain(event_actors.iter_mut()) {
            v.sort_unstable();
        }
        let report = IngestReport {
            rows: self.rows,
            duplicates_collapsed: self.duplicates,
            time_kind: self.time_kind,
        };
        let g = BipartiteGraph {
            actor_ids: self.actor_ids,
            event_ids: self.event_ids,
            actor_lookup: self.actor_lookup,
            event_lookup: self.event_lookup,
            actor_events,
            event_actors,
            event_time: self.event_time,
        };
        (g, report)
    }
}

/// Shared-event counts among three actors `p, q, r`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct PairWeights {
    pub w_pq: u32,
    pub w_qr: u32,
    pub w_pr: u32,
    pub w_pqr: u32,
}

pub(crate) fn intersect_count(a: &[usize], b: &[usize]) -> u32 {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

pub(crate) fn intersect3_count(a: &[usize], b: &[usize], c: &[usize]) -> u32 {
    let (mut i, mut j, mut k, mut n) = (0, 0, 0, 0);
    while i < a.len() && j < b.len() && k < c.len() {
        let m = a[i].max(b[j]).max(c[k]);
        if a[i] == m && b[j] == m && c[k] == m {
            n += 1;
            i += 1;
            j += 1;
            k += 1;
            continue;
        }
        if a[i] < m {
            i += 1;
        }
        if b[j] < m {
            j += 1;
        }
        if c[k] < m {
            k += 1;
        }
    }
    n
}

/// The one-mode actor graph: an edge per coattending pair, weighted by the
/// number of shared events, and labelled by the earliest shared event time.
#[derive(Debug, Clone)]
pub struct Projection {
    // Per actor, sorted by neighbor: (neighbor, weight, earliest shared time).
    adjacency: Vec<Vec<(ActorIx, u32, Option<Timestamp>)>>,
}

impl Projection {
    pub fn new(g: &BipartiteGraph) -> Self {
        let mut adjacency: Vec<Vec<(ActorIx, u32, Option<Timestamp>)>> =
            vec![Vec::new(); g.n_actors()];
        let mut scratch: HashMap<ActorIx, (u32, Option<Timestamp>)> = HashMap::new();
        for (a, adj) in adjacency.iter_mut().enumerate() {
            scratch.clear();
            for &e in g.events_of(a) {
                let t = g.event_time(e);
                for &b in g.actors_of(e) {
                    if b == a {
                        continue;
                    }
                    let slot = scratch.entry(b).or_insert((0, t));
                    slot.0 += 1;
                    slot.1 = match (slot.1, t) {
                        (Some(x), Some(y)) => Some(x.min(y)),
                        _ => None,
                    };
                }
            }
            adj.extend(scratch.iter().map(|(&b, &(w, t))| (b, w, t)));
            adj.sort_unstable_by_key(|x| x.0);
        }
        Projection { adjacency }
    }

    pub fn n_nodes(&self) -> usize {
        self.adjacency.len()
    }

    pub fn degree(&self, a: ActorIx) -> usize {
        self.adjacency[a].len()
    }

    /// Sorted neighbors of `a` with edge weights.
    pub fn neighbors(&self, a: ActorIx) -> impl Iterator<Item = (ActorIx, u32)> + '_ {
        self.adjacency[a].iter().map(|&(b, w, _)| (b, w))
    }

    pub(crate) fn neighbor_slice(&self, a: ActorIx) -> &[(ActorIx, u32, Option<Timestamp>)] {
        &self.adjacency[a]
    }

    pub fn weight(&self, a: ActorIx, b: ActorIx) -> u32 {
        self.entry(a, b).map_or(0, |x| x.1)
    }

    pub fn has_edge(&self, a: ActorIx, b: ActorIx) -> bool {
        self.entry(a, b).is_some()
    }

    /// Earliest time of an event shared by `a` and `b`, when they share one
    /// and all shared events are timed.
    pub fn first_time(&self, a: ActorIx, b: ActorIx) -> Option<Timestamp> {
        self.entry(a, b).and_then(|x| x.2)
    }

    fn entry(&self, a: ActorIx, b: ActorIx) -> Option<&(ActorIx, u32, Option<Timestamp>)> {
        let adj = &self.adjacency[a];
        adj.binary_search_by_key(&b, |x| x.0).ok().map(|i| &adj[i])
    }

    /// Edges `(a, b, weight)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (ActorIx, ActorIx, u32)> + '_ {
        self.adjacency.iter().enumerate().flat_map(|(a, adj)| {
            adj.iter()
                .filter(move |x| x.0 > a)
                .map(move |&(b, w, _)| (a, b, w))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

pub fn projection(g: &BipartiteGraph) -> Projection {
    Projection::new(g)
}
