//! Finite involutory quandles (keis) and the free Burnside keis `Q̄(k, n)`.
//!
//! * [`quandle`]: tables, axiom checks and structural analyses.
//! * [`presentation`]: presentations and their completion into tables.
//! * [`models`]: dihedral keis, cores of groups, the twisted extension.

pub mod error;
pub mod links;
pub mod models;
pub mod opgroup;
pub mod presentation;
pub mod quandle;
mod syntax;
pub mod word;

pub use error::{Error, ParseError, Result};
pub use presentation::QuandlePresentation;
pub use quandle::FiniteQuandle;
pub use word::KeiWord;
