//! The clustering-coefficient family over affiliation networks.
//!
//! A wedge at the ordered actor triple `(i, j, k)` is a map of the 4-path
//! `i - a - j - b - k` into the network (events `a ∋ {i, j}`, `b ∋ {j, k}`),
//! and an alcove is a map of the 6-cycle `i - a - j - b - k - c - i`. A
//! [`WedgeScheme`] picks which maps count (all maps, injective maps, or
//! induced injections), which of them are identified (none, those sending
//! events to structurally equivalent events of the triad, or all maps that
//! agree on actors), and whether the statistic is the share of wedges that
//! close or the ratio of alcoves to wedges.
//!
//! Within one triple, events fall into four types by which of `i, j, k`
//! attend them, so every count is a closed form in the four type sizes.
//! Events attended by at most one of the three actors never matter.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bigraph::{ActorIx, BipartiteGraph, Projection};
use crate::census::{FullCensus, StructuralCensus, TriadClass};
use crate::error::{Error, Result};
use crate::fraction::Fraction;

/// Which maps of the wedge and alcove into the network are admitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    /// Any edge-preserving map sending actors to distinct actors.
    All,
    /// Maps that are also injective on events.
    Injective,
    /// Injective maps whose image is an induced subgraph, i.e. every event
    /// used is exclusive to its pair within the triad.
    Induced,
}

/// Which maps at the same actor triple are identified.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Congruence {
    /// Every map counts separately.
    None,
    /// Maps whose event images have the same attendance within the triad.
    Structural,
    /// All maps that agree on actors.
    Actor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formulation {
    /// Closed wedges over wedges.
    ClosureRate,
    /// Alcoves over wedges; may exceed one.
    AlcoveRatio,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WedgeScheme {
    pub category: Category,
    pub congruence: Congruence,
    pub formulation: Formulation,
}

impl WedgeScheme {
    pub const fn new(category: Category, congruence: Congruence, formulation: Formulation) -> Self {
        WedgeScheme {
            category,
            congruence,
            formulation,
        }
    }

    /// The clustering coefficient of the projection.
    pub const fn classical() -> Self {
        Self::new(Category::All, Congruence::Actor, Formulation::ClosureRate)
    }

    /// Share of closed 4-paths among injective 4-paths.
    pub const fn opsahl() -> Self {
        Self::new(Category::Injective, Congruence::None, Formulation::ClosureRate)
    }

    /// Closure through pairwise-exclusive events only.
    pub const fn exclusive() -> Self {
        Self::new(Category::Induced, Congruence::Structural, Formulation::ClosureRate)
    }

    pub const fn with_formulation(self, formulation: Formulation) -> Self {
        Self::new(self.category, self.congruence, formulation)
    }

    /// All 18 schemes in the grid.
    pub fn grid() -> Vec<WedgeScheme> {
        let mut v = Vec::with_capacity(18);
        for category in [Category::All, Category::Injective, Category::Induced] {
            for congruence in [Congruence::None, Congruence::Structural, Congruence::Actor] {
                for formulation in [Formulation::ClosureRate, Formulation::AlcoveRatio] {
                    v.push(Self::new(category, congruence, formulation));
                }
            }
        }
        v
    }
}

impl fmt::Display for WedgeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.category, self.congruence, self.formulation)
    }
}

macro_rules! keyword_enum {
    ($ty:ty { $($name:literal => $variant:expr),+ $(,)? }) => {
        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let s = match self {
                    $(x if *x == $variant => $name,)+
                    _ => unreachable!(),
                };
                f.write_str(s)
            }
        }

        impl FromStr for $ty {
            type Err = Error;

            fn from_str(s: &str) -> Result<Self> {
                match s.to_ascii_lowercase().as_str() {
                    $($name => Ok($variant),)+
                    other => Err(Error::InvalidArgument(format!(
                        "unknown {} `{other}`",
                        stringify!($ty).to_ascii_lowercase()
                    ))),
                }
            }
        }
    };
}

keyword_enum!(Category {
    "all" => Category::All,
    "injective" => Category::Injective,
    "induced" => Category::Induced,
});

keyword_enum!(Congruence {
    "none" => Congruence::None,
    "structural" => Congruence::Structural,
    "actor" => Congruence::Actor,
});

keyword_enum!(Formulation {
    "rate" => Formulation::ClosureRate,
    "ratio" => Formulation::AlcoveRatio,
});

/// Numbers of events of each attendance type within an ordered triple
/// `(i, j, k)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct EventTypes {
    /// Attended by `i` and `j` but not `k`.
    pub left: u64,
    /// Attended by `j` and `k` but not `i`.
    pub right: u64,
    /// Attended by `i` and `k` but not `j`.
    pub across: u64,
    /// Attended by all three.
    pub shared: u64,
}

impl EventTypes {
    pub fn reversed(self) -> Self {
        EventTypes {
            left: self.right,
            right: self.left,
            ..self
        }
    }
}

/// Wedge and closure counts at one center or triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct WedgeCount {
    pub total: u64,
    pub closed: u64,
}

impl WedgeCount {
    pub fn open(&self) -> u64 {
        self.total - self.closed
    }
}

/// Wedges, closed wedges, and alcoves at one ordered triple (or summed).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct TripleCounts {
    pub wedges: u64,
    pub closed: u64,
    pub alcoves: u64,
}

impl std::ops::Add for TripleCounts {
    type Output = TripleCounts;

    fn add(self, o: TripleCounts) -> TripleCounts {
        TripleCounts {
            wedges: self.wedges + o.wedges,
            closed: self.closed + o.closed,
            alcoves: self.alcoves + o.alcoves,
        }
    }
}

impl std::ops::AddAssign for TripleCounts {
    fn add_assign(&mut self, o: TripleCounts) {
        *self = *self + o;
    }
}

impl TripleCounts {
    pub fn wedge_count(&self) -> WedgeCount {
        WedgeCount {
            total: self.wedges,
            closed: self.closed,
        }
    }

    /// The statistic under `formulation`, undefined without wedges.
    pub fn ratio(&self, formulation: Formulation, what: &str) -> Result<Fraction> {
        let numer = match formulation {
            Formulation::ClosureRate => self.closed,
            Formulation::AlcoveRatio => self.alcoves,
        };
        Fraction::new(numer, self.wedges, what)
    }
}

fn ind(b: bool) -> u64 {
    u64::from(b)
}

/// Counts at one ordered triple from its event types.
pub fn triple_counts(t: EventTypes, category: Category, congruence: Congruence) -> TripleCounts {
    let EventTypes {
        left: a,
        right: b,
        across: c,
        shared: w,
    } = t;
    match category {
        Category::All => {
            let (ij, jk, ik) = (a + w, b + w, c + w);
            match congruence {
                Congruence::None => {
                    let wedges = ij * jk;
                    TripleCounts {
                        wedges,
                        closed: wedges * ind(ik > 0),
                        alcoves: wedges * ik,
                    }
                }
                Congruence::Structural => {
                    // Classes are (type of a, type of b): exclusive or shared.
                    let kinds = |x: u64| ind(x > 0) + ind(w > 0);
                    let wedges = kinds(a) * kinds(b);
                    TripleCounts {
                        wedges,
                        closed: wedges * ind(ik > 0),
                        alcoves: wedges * kinds(c),
                    }
                }
                Congruence::Actor => {
                    let wedges = ind(ij > 0 && jk > 0);
                    let alcoves = wedges * ind(ik > 0);
                    TripleCounts {
                        wedges,
                        closed: alcoves,
                        alcoves,
                    }
                }
            }
        }
        Category::Injective => {
            // A closing event must differ from every shared event used by
            // the wedge.
            let closes = |used_shared: u64| ind(c + w > used_shared);
            match congruence {
                Congruence::None => {
                    let wedges = (a + w) * (b + w) - w;
                    let closed = a * b * closes(0)
                        + (a * w + w * b) * closes(1)
                        + w * w.saturating_sub(1) * closes(2);
                    let ff1 = w;
                    let ff2 = w * w.saturating_sub(1);
                    let ff3 = ff2 * w.saturating_sub(2);
                    let alcoves =
                        a * b * c + ff1 * (b * c + a * c + a * b) + ff2 * (a + b + c) + ff3;
                    TripleCounts {
                        wedges,
                        closed,
                        alcoves,
                    }
                }
                Congruence::Structural => {
                    let (ea, eb, ec) = (ind(a > 0), ind(b > 0), ind(c > 0));
                    let (w1, w2, w3) = (ind(w >= 1), ind(w >= 2), ind(w >= 3));
                    let wedges = ea * eb + ea * w1 + w1 * eb + w2;
                    let closed = ea * eb * closes(0) + (ea * w1 + w1 * eb) * closes(1) + w2 * closes(2);
                    let alcoves =
                        ea * eb * ec + w1 * (eb * ec + ea * ec + ea * eb) + w2 * (ea + eb + ec) + w3;
                    TripleCounts {
                        wedges,
                        closed,
                        alcoves,
                    }
                }
                Congruence::Actor => {
                    let wedges = ind((a + w) * (b + w) > w);
                    let full = triple_counts(t, Category::Injective, Congruence::Structural);
                    let alcoves = ind(full.alcoves > 0);
                    TripleCounts {
                        wedges,
                        closed: alcoves,
                        alcoves,
                    }
                }
            }
        }
        Category::Induced => match congruence {
            Congruence::None => {
                let wedges = a * b;
                TripleCounts {
                    wedges,
                    closed: wedges * ind(c > 0),
                    alcoves: wedges * c,
                }
            }
            // Every induced wedge at a triple uses exclusive events, which
            // are structurally equivalent, so both congruences coincide.
            Congruence::Structural | Congruence::Actor => {
                let wedges = ind(a > 0 && b > 0);
                let alcoves = wedges * ind(c > 0);
                TripleCounts {
                    wedges,
                    closed: alcoves,
                    alcoves,
                }
            }
        },
    }
}

/// Event types of the ordered triple `(i, j, k)` from its shared-event counts.
pub(crate) fn event_types(w_ij: u32, w_jk: u32, w_ik: u32, w_ijk: u32) -> EventTypes {
    EventTypes {
        left: u64::from(w_ij - w_ijk),
        right: u64::from(w_jk - w_ijk),
        across: u64::from(w_ik - w_ijk),
        shared: u64::from(w_ijk),
    }
}

fn types_at(g: &BipartiteGraph, i: ActorIx, j: ActorIx, k: ActorIx) -> EventTypes {
    event_types(
        g.shared_events(i, j),
        g.shared_events(j, k),
        g.shared_events(i, k),
        g.shared_events3(i, j, k),
    )
}

/// Wedges centered at `j` with ends `i` and `k`, in that order.
pub fn wedge_count_at(
    g: &BipartiteGraph,
    i: ActorIx,
    j: ActorIx,
    k: ActorIx,
    scheme: WedgeScheme,
) -> Result<WedgeCount> {
    g.check_triple(i, j, k)?;
    Ok(triple_counts(types_at(g, i, j, k), scheme.category, scheme.congruence).wedge_count())
}

/// Wedges, closed wedges, and alcoves at the ordered triple `(i, j, k)`.
pub fn counts_at(
    g: &BipartiteGraph,
    i: ActorIx,
    j: ActorIx,
    k: ActorIx,
    scheme: WedgeScheme,
) -> Result<TripleCounts> {
    g.check_triple(i, j, k)?;
    Ok(triple_counts(types_at(g, i, j, k), scheme.category, scheme.congruence))
}

/// Per-center sums; `by_end[x]` holds closed wedges at the center whose first
/// end is `x` when requested.
fn center_counts(
    g: &BipartiteGraph,
    proj: &Projection,
    j: ActorIx,
    scheme: WedgeScheme,
    mut by_end: Option<&mut HashMap<ActorIx, u64>>,
) -> TripleCounts {
    let nbrs = proj.neighbor_slice(j);
    let mut sum = TripleCounts::default();
    for (x, &(i, w_ij, _)) in nbrs.iter().enumerate() {
        for &(k, w_jk, _) in &nbrs[x + 1..] {
            let w_ik = proj.weight(i, k);
            let w_ijk = if w_ik > 0 { g.shared_events3(i, j, k) } else { 0 };
            let forward = event_types(w_ij, w_jk, w_ik, w_ijk);
            let there = triple_counts(forward, scheme.category, scheme.congruence);
            let back = triple_counts(forward.reversed(), scheme.category, scheme.congruence);
            if let Some(map) = by_end.as_deref_mut() {
                *map.entry(i).or_insert(0) += there.closed;
                *map.entry(k).or_insert(0) += back.closed;
            }
            sum += there;
            sum += back;
        }
    }
    sum
}

/// Wedge, closure, and alcove counts centered at every actor.
pub fn center_totals(g: &BipartiteGraph, scheme: WedgeScheme) -> Vec<TripleCounts> {
    let proj = Projection::new(g);
    (0..g.n_actors())
        .into_par_iter()
        .map(|j| center_counts(g, &proj, j, scheme, None))
        .collect()
}

/// Wedge, closure, and alcove counts summed over the whole network.
pub fn global_counts(g: &BipartiteGraph, scheme: WedgeScheme) -> TripleCounts {
    center_totals(g, scheme)
        .into_iter()
        .fold(TripleCounts::default(), |a, b| a + b)
}

pub fn global_cc(g: &BipartiteGraph, scheme: WedgeScheme) -> Result<Fraction> {
    global_counts(g, scheme).ratio(scheme.formulation, "no wedges in the network")
}

pub fn local_cc(g: &BipartiteGraph, j: ActorIx, scheme: WedgeScheme) -> Result<Fraction> {
    if j >= g.n_actors() {
        return Err(Error::UnknownActor(format!("#{j}")));
    }
    let proj = Projection::new(g);
    center_counts(g, &proj, j, scheme, None).ratio(scheme.formulation, "no wedges at actor")
}

/// Local values for every actor, in actor order.
pub fn local_ccs(g: &BipartiteGraph, scheme: WedgeScheme) -> Vec<Result<Fraction>> {
    center_totals(g, scheme)
        .into_iter()
        .map(|c| c.ratio(scheme.formulation, "no wedges at actor"))
        .collect()
}

/// Mean local value among actors centering exactly `ell` wedges.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WedgeDependentValue {
    pub mean: f64,
    pub count: usize,
}

/// Local values averaged by wedge count; actors without wedges are skipped.
pub fn wedge_dependent_cc(g: &BipartiteGraph, scheme: WedgeScheme) -> BTreeMap<u64, WedgeDependentValue> {
    let mut groups: BTreeMap<u64, (f64, usize)> = BTreeMap::new();
    for c in center_totals(g, scheme) {
        if let Ok(v) = c.ratio(scheme.formulation, "") {
            let slot = groups.entry(c.wedges).or_insert((0.0, 0));
            slot.0 += v.to_f64();
            slot.1 += 1;
        }
    }
    groups
        .into_iter()
        .map(|(ell, (sum, count))| {
            (
                ell,
                WedgeDependentValue {
                    mean: sum / count as f64,
                    count,
                },
            )
        })
        .collect()
}

/// Share of wedges at `i` that are closed and have `j` as their first end.
/// Summed over `j` this is the local closure rate at `i`.
pub fn constraint(g: &BipartiteGraph, i: ActorIx, j: ActorIx, scheme: WedgeScheme) -> Result<Fraction> {
    for x in [i, j] {
        if x >= g.n_actors() {
            return Err(Error::UnknownActor(format!("#{x}")));
        }
    }
    if i == j {
        return Err(Error::NonDistinctActors);
    }
    let proj = Projection::new(g);
    let mut by_end = HashMap::new();
    let total = center_counts(g, &proj, i, scheme, Some(&mut by_end));
    Fraction::new(
        by_end.get(&j).copied().unwrap_or(0),
        total.wedges,
        "no wedges at actor",
    )
}

/// Open and closed wedges (and alcoves) summed over the six ordered triples
/// of a triad class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassWedgeProfile {
    pub open: u64,
    pub closed: u64,
    pub alcoves: u64,
}

pub fn class_wedge_profile(c: &TriadClass, scheme: WedgeScheme) -> ClassWedgeProfile {
    let g = c.representative();
    let mut sum = TripleCounts::default();
    for (i, j, k) in [(0, 1, 2), (2, 1, 0), (1, 0, 2), (2, 0, 1), (0, 2, 1), (1, 2, 0)] {
        sum += counts_at(&g, i, j, k, scheme).expect("three distinct actors");
    }
    ClassWedgeProfile {
        open: sum.wedges - sum.closed,
        closed: sum.closed,
        alcoves: sum.alcoves,
    }
}

/// The closure rate from a full census and per-class wedge profiles.
pub fn census_cc(census: &FullCensus, scheme: WedgeScheme) -> Result<Fraction> {
    if scheme.formulation != Formulation::ClosureRate {
        return Err(Error::InvalidArgument(
            "the census formulation applies to closure rates only".into(),
        ));
    }
    let (mut numer, mut denom) = (0u128, 0u128);
    for (class, &n) in census.iter() {
        let p = class_wedge_profile(class, scheme);
        numer += u128::from(n) * u128::from(p.closed);
        denom += u128::from(n) * u128::from(p.open + p.closed);
    }
    Fraction::from_u128(numer, denom, "no wedges in the census")
}

/// The exclusive coefficient from the structural census:
/// `3 (t30 + t31) / (t20 + t21 + 3 (t30 + t31))`.
pub fn binned_cc(t: &StructuralCensus) -> Result<Fraction> {
    let closed = 3 * (t.get(3, 0) + t.get(3, 1));
    Fraction::new(closed, t.get(2, 0) + t.get(2, 1) + closed, "no wedges in the census")
}
