//! Finite balls of Cayley graphs and the connectivity of their thick spheres.
//!
//! The crate builds `B_N` for a catalog of concrete groups, decomposes the
//! complements of smaller balls into components, and measures thick-sphere
//! connectivity, ends profiles, dead ends and their depths. It also checks
//! the relator-length bound `r > max|w|/2` for connected spheres of finitely
//! presented one-ended groups, together with the relator-loop span
//! inequality behind it.

pub mod ball;
pub mod depth;
pub mod error;
pub mod groups;
pub mod presentation;
pub mod report;
pub mod theorem;
pub mod topology;

pub use ball::{build_ball, Adjacency, BallTable};
pub use depth::{CensusRow, DeadEndCensus, DepthRecord};
pub use error::{AnalysisError, ModelError, PresentationError};
pub use groups::{relator_holds, Element, EndsHint, GroupModel, LetterMap};
pub use presentation::{parse_presentation, reduce, theorem_radius, Letter, Presentation, Word};
pub use theorem::{relator_loop_span, SpanSampling, TheoremReport, Verdict};
pub use topology::{
    ComponentClass, ComponentMap, EndsProfile, Explorer, Guard, RadiusSearch, Region, SphereScan,
    TailVerdict, ThickSphere,
};
