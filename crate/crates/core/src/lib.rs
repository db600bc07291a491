//! Laplacian diagonalizability of graphs over small integer alphabets.
//!
//! A graph is S-diagonalizable when its Laplacian `L = D - A` has an
//! invertible diagonalizing matrix `P` with entries in `S`; its S-bandwidth is
//! the least bandwidth of `P^T P` over all such `P`. The crate computes both
//! exactly for `S = {-1,0,1}` and `S = {-1,1}` (and any other finite integer
//! set), along with the balanced-vector machinery that characterizes complete
//! multipartite graphs.

mod bits;
mod gray;

pub mod balanced;
pub mod constructions;
pub mod exact;
pub mod graphs;
pub mod sdiag;
pub mod spectra;
pub mod survey;

pub use balanced::{BVec, BalancedCertificate, BalancedError};
pub use constructions::{ConstructionError, WitnessKind, WitnessMatrix, WitnessSearch};
pub use exact::{Matrix, MatrixError, RankTracker, Rational};
pub use graphs::{Graph, GraphError, PartitionSpec};
pub use sdiag::{
    Alphabet, AlphabetError, Bandwidth, BandwidthResult, DiagOutcome, DiagWitness, SearchBudget,
    SearchOptions, VerificationError,
};
pub use spectra::{Eigenpair, Spectrum};
pub use survey::{OutputFormat, ScanOptions, ScanRecord, ScanSummary, SurveyError};
