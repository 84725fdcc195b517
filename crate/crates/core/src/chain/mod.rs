//! In-memory L1 chain, validity contract and arbiter contract.

mod arbiter;
pub mod merkle;
mod types;
mod validity;

pub use arbiter::{
    ArbiterPolicy, ArbiterState, ChallengeId, OpenChallenge, Outcome, Resolution, SlashReason,
};
pub use merkle::{Digest, MerkleProof};
pub use types::{
    blob_commit, blob_prove, blob_verify, AccountId, Batch, BatchHeader, BatchSubmission, Block,
    BuilderId, Proposal, SyncedBatch, ValidityToken,
};
pub use validity::{default_quorum, HiddenStateSource, ValidityContract};

#[cfg(test)]
mod tests;
