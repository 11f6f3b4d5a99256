//! Construction and exact analysis of binary Goppa codes.
//!
//! The crate builds Goppa codes over F_{2^m} from an explicit support and
//! Goppa polynomial, computes their exact weight distributions by exhaustive
//! message enumeration, checks MacWilliams consistency, and regenerates
//! related codes through standard transformations (puncturing, shortening,
//! extension, lengthening, and a two-code gluing construction).  A built-in
//! catalog records the expected parameters and distributions so the whole
//! pipeline can be re-verified end to end.
//!
//! Layering, bottom up:
//!
//! * [`field`]: F_{2^m} arithmetic via log/antilog tables.
//! * [`poly`]: dense polynomials over a field, including irreducibility
//!   testing and an expression parser.
//! * [`gf2`]: bit-packed GF(2) matrices, reduced row echelon form, nullspace.
//! * [`goppa`]: parity-check construction of Goppa codes.
//! * [`code`]: linear codes, weight enumeration, MacWilliams transform.
//! * [`derive`]: code transformations behind a runtime strategy registry.
//! * [`catalog`]: the shipped table of expected codes and its verifier.

pub mod catalog;
pub mod code;
pub mod derive;
pub mod field;
pub mod gf2;
pub mod goppa;
pub mod poly;

pub use catalog::{Catalog, CatalogEntry, CheckStatus, EntryReport, VerificationReport};
pub use code::{CodeRecord, EnumOptions, LinearCode, WeightDistribution};
pub use derive::{Derivation, DerivationRegistry, DerivationStep, TraceEntry};
pub use field::{FieldElement, FieldSpec};
pub use gf2::{BitMatrix, BitVec};
pub use goppa::GoppaSpec;
pub use poly::Polynomial;
