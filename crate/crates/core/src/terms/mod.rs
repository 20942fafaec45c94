//! Free cubical algebras over a presentation, extended by glue and ext nodes.

pub mod enumerate;
pub mod normalize;
pub mod partial;
pub mod presentation;
pub mod term;

pub use enumerate::{enumerate, SortKind};
pub use normalize::{factors, Config, Normalizer, Strategy};
pub use partial::{PartialElement, Payload, Unit};
pub use presentation::{library, HomGen, Presentation, Rule, Theory};
pub use term::{Ext, Glue, GluePiece, Node, Sort, Term};
