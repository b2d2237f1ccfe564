//! Left orders given by sign oracles, positive cones, and certificates that
//! refute them.

pub mod action;
pub mod certificate;
pub mod cone;
pub mod greedy;
pub mod heisenberg;
pub mod line;
pub mod oracle;
pub mod realization;
pub mod session;
pub mod witte;

pub use certificate::{
    CertificateError, Factor, Normalization, TranscriptEntry, Violation, ViolationCertificate,
};
pub use cone::{check_cone_axioms, cone_from_order, order_from_cone, ConeCheck, PositiveCone};
pub use greedy::GreedyOracle;
pub use heisenberg::{
    heisenberg_contradiction, HeisenbergOutcome, HeisenbergTriple, ObstructionWitness,
};
pub use line::PlLineMap;
pub use oracle::{OracleError, OrderOracle, Sign};
pub use session::{OracleSession, QueryError};
pub use witte::{witte_pipeline, WitteOutcome, WitteReport, WitteSystem};
