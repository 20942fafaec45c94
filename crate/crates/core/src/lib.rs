//! Cof-fibrant replacement of category and set presentations over the
//! cartesian cube category: a cofibration solver, a normalizer for the free
//! algebra with glue and ext nodes, derived Kan operations with checkable
//! certificates, and bounded checks of the resulting completion.

pub mod cat;
pub mod cli;
pub mod cert;
pub mod cofib;
pub mod completion;
pub mod cube;
pub mod error;
pub mod kan;
pub mod report;
pub mod sample;
pub mod syntax;
pub mod terms;
pub mod tower;

pub use cert::Certificate;
pub use cofib::{dnf, entails, Cof, Dnf, Face};
pub use cube::{name, DimCtx, IntervalExpr, Name, Substitution};
pub use error::{Error, Result};
pub use report::{Obligation, Report, Status};
pub use terms::{Normalizer, PartialElement, Presentation, Term, Theory};
