//! Exact arithmetic for order-`p^2` torsion in the Nottingham group over `F_p`.
pub mod acceptance;
pub mod characters;
pub mod equivalence;
pub mod error;
pub mod parse;
pub mod prime;
pub mod reduction;
pub mod search;
pub mod series;

pub use characters::{Character, ReducedForm, StandardExpansion, TypeLM};
pub use equivalence::{BoundB, ClassReport, CountMethod};
pub use error::{Error, Result};
pub use prime::Prime;
pub use reduction::{verify_witness, Witness, WitnessCheck};
pub use search::{Relation, SearchConfig, Strategy};
pub use series::{ExponentVector, NottinghamElt, UnitSeries};
