//! Finite monoids, word identities, isoterms and equational deduction.
//!
//! The crate is organised bottom-up: [`words`] is the free-monoid layer,
//! [`monoids`] holds finite Cayley tables, [`equations`] evaluates identities
//! in them, [`deduction`] works purely syntactically and [`lattice`] carries
//! variety diagrams as poset data. [`manifest`] runs batches of checks.

pub mod deduction;
pub mod equations;
pub mod error;
pub mod lattice;
pub mod manifest;
pub mod monoids;
pub mod words;

pub use deduction::{CanonicalWord, DerivationScript, DerivationStep, LambdaIdentity, SigmaClass};
pub use equations::{IsotermVerdict, MemberVerdict, RelFree, SatisfactionResult};
pub use error::{Error, Result};
pub use lattice::{Poset, VarietyNode};
pub use monoids::{FiniteMonoid, Presentation};
pub use words::{parse_identity, parse_word, Identity, Substitution, Variable, Word};
