//! Triad censuses, clustering coefficients, and related statistics for
//! affiliation networks (actors attending events).

pub mod analysis;
pub mod bigraph;
pub mod census;
pub mod datasets;
pub mod dynamics;
mod error;
mod fraction;
pub mod instrument;
pub mod nullmodels;
pub mod partition;
mod triads;
pub mod wedges;

pub use bigraph::{ActorIx, AttendanceRow, BipartiteGraph, EventIx, Projection, Timestamp};
pub use census::{full_census, simple_census, structural_census, FullCensus, SimpleCensus, StructuralCensus, TriadClass};
pub use error::{Error, Result};
pub use fraction::Fraction;
pub use partition::{index_partition, unindex_partition};
pub use wedges::{Category, Congruence, Formulation, WedgeScheme};
