//! List-source codes over finite fields.
//!
//! A length-`n` block over GF(q) is encoded to its syndrome under a parity
//! check matrix `H` with `n - k` rows. The decoder returns the whole coset,
//! a list of `q^k` candidates. Choosing `H` from an MDS code spreads the
//! uncertainty evenly over the symbols, which is what the secrecy analyzer
//! measures.

pub mod codes;
pub mod container;
pub mod error;
pub mod gf;
pub mod linalg;
pub mod lsc;
pub mod scheme;
pub mod secrecy;

#[cfg(feature = "cli")]
pub mod cli;

pub use codes::CodeSpec;
pub use container::{Container, PayloadKind};
pub use error::{Error, Result};
pub use gf::{FieldElement, FieldKind, FieldSpec};
pub use linalg::Matrix;
pub use lsc::{decode_list, encode, DecodedList, ListSourceCode, Syndrome, TrivialScheme};
pub use scheme::{two_phase_decrypt, two_phase_encrypt, CipherKind, InnerCipher, TwoPhaseBundle};
pub use secrecy::{LeakageAnalyzer, SecrecyReport, SourceModel, SubsetQuery};
