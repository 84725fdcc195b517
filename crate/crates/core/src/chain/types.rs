use serde::Serialize;

use super::merkle::{merkle_prove, merkle_root, Digest, MerkleProof};
use crate::algebra::{Field, GroupElement, PairingBackend};
use crate::error::Result;
use crate::hash::sha256;
use crate::luck::Nonce;
use crate::pod::HiddenState;

pub type BuilderId = u32;
pub type AccountId = u32;

/// A proposer's selection of transactions for the next batch, by hash.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proposal<F: Field> {
    pub proposer: u32,
    pub tx_hashes: Vec<F>,
    pub epoch: u64,
}

impl<F: Field> Proposal<F> {
    /// `u32 proposer | u64 epoch | u32 count | hashes`, little-endian.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(16 + self.tx_hashes.len() * F::ENCODED_LEN);
        out.extend_from_slice(&self.proposer.to_le_bytes());
        out.extend_from_slice(&self.epoch.to_le_bytes());
        out.extend_from_slice(&(self.tx_hashes.len() as u32).to_le_bytes());
        for h in &self.tx_hashes {
            out.extend_from_slice(&h.to_bytes());
        }
        out
    }
}

/// Stand-in for the batch validity proof: set only when the builder really
/// ran the honest build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ValidityToken {
    pub valid: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BatchHeader<B: PairingBackend> {
    pub batch_index: u64,
    pub hidden_state: HiddenState<B>,
    pub nonce: Nonce,
    pub proposer: u32,
    pub builder: BuilderId,
    pub luck: f64,
    pub payload_digest: Digest,
    pub prev_batch_digest: Digest,
}

impl<B: PairingBackend> BatchHeader<B> {
    /// Everything the nonce is searched against.
    pub fn preimage(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&self.batch_index.to_le_bytes());
        out.extend_from_slice(&self.hidden_state.0.to_bytes());
        out.extend_from_slice(&self.proposer.to_le_bytes());
        out.extend_from_slice(&self.builder.to_le_bytes());
        out.extend_from_slice(&self.luck.to_le_bytes());
        out.extend_from_slice(&self.payload_digest);
        out.extend_from_slice(&self.prev_batch_digest);
        out
    }

    pub fn digest(&self) -> Digest {
        sha256(&[&self.preimage(), &self.nonce])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Batch<B: PairingBackend> {
    pub header: BatchHeader<B>,
    pub payload: Vec<u8>,
}

impl<B: PairingBackend> Batch<B> {
    pub fn payload_matches(&self) -> bool {
        sha256(&[&self.payload]) == self.header.payload_digest
    }
}

/// What a builder hands the validity contract.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchSubmission<B: PairingBackend> {
    pub batch: Batch<B>,
    pub proposal: Proposal<B::Scalar>,
    pub membership: MerkleProof,
    pub validity: ValidityToken,
}

/// Summary of an accepted batch written into the L1 block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SyncedBatch<B: PairingBackend> {
    pub batch_index: u64,
    pub batch_digest: Digest,
    pub hidden_state: HiddenState<B>,
    pub builder: BuilderId,
    pub proposer: u32,
    pub proposal_height: u64,
    pub validity: ValidityToken,
    pub membership: MerkleProof,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block<B: PairingBackend> {
    pub height: u64,
    pub parent: Digest,
    pub blob: Vec<Proposal<B::Scalar>>,
    pub blob_root: Digest,
    pub synced: Option<SyncedBatch<B>>,
}

impl<B: PairingBackend> Block<B> {
    pub fn new(height: u64, parent: Digest, blob: Vec<Proposal<B::Scalar>>, synced: Option<SyncedBatch<B>>) -> Self {
        let blob_root = blob_commit(&blob);
        Self {
            height,
            parent,
            blob,
            blob_root,
            synced,
        }
    }

    /// `u64 height | parent | blob_root | synced batch digest or zeros`.
    pub fn header(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(8 + 3 * 32);
        out.extend_from_slice(&self.height.to_le_bytes());
        out.extend_from_slice(&self.parent);
        out.extend_from_slice(&self.blob_root);
        out.extend_from_slice(&self.synced.as_ref().map_or([0; 32], |s| s.batch_digest));
        out
    }

    pub fn digest(&self) -> Digest {
        sha256(&[&self.header()])
    }
}

pub fn blob_commit<F: Field>(proposals: &[Proposal<F>]) -> Digest {
    let enc: Vec<Vec<u8>> = proposals.iter().map(Proposal::encode).collect();
    merkle_root(&enc)
}

pub fn blob_prove<F: Field>(proposals: &[Proposal<F>], index: usize) -> Result<MerkleProof> {
    let enc: Vec<Vec<u8>> = proposals.iter().map(Proposal::encode).collect();
    merkle_prove(&enc, index)
}

pub fn blob_verify<F: Field>(root: &Digest, proposal: &Proposal<F>, proof: &MerkleProof) -> bool {
    super::merkle::merkle_verify(root, &proposal.encode(), proof)
}
