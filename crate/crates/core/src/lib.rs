//! Exact third-order recurrence sequences, the structured matrices built on
//! them, their norms and norm bounds, and a brute-force verification harness
//! that classifies each closed form and bound into an errata ledger.

pub mod error;
pub mod exact;
pub mod norms;
pub mod recurrence;
pub mod structmat;
pub mod theorems;
pub mod verify;

pub use error::{Error, Result};
pub use norms::{NormSummary, SpectralEstimate, SpectralOptions};
pub use recurrence::{
    Family, IdentityId, IdentityValue, RecurrenceSpec, SeqKind, SequenceWindow, Variant,
};
pub use structmat::{MatrixKind, StructuredMatrix};
pub use theorems::{BoundCheck, TheoremId, Verdict};
pub use verify::{ErrataLedger, GridPreset, LedgerStatus, VerificationRecord};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
