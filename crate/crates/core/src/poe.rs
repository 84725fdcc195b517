//! Proof of existence: a challenged builder answers with an evaluation
//! witness for its stored part plus a relation proof bound to the challenge.

use std::fmt::Debug;
use std::sync::Arc;

use rand::RngCore;
use sha2::{Digest, Sha512};

use crate::algebra::{Field, GroupElement, PairingBackend};
use crate::error::Result;
use crate::hash::HashSuite;
use crate::kzg::{Reader, Srs};
use crate::pod::HiddenState;

/// Public inputs of the preimage relation `v = H1(m)`, `r = H2(c, m)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Statement<F: Field> {
    pub part_index: u32,
    pub challenge: F,
    pub value: F,
    pub binding: F,
}

impl<F: Field> Statement<F> {
    /// `u32 j | c | v | r`, scalars in their canonical encoding.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(4 + 3 * F::ENCODED_LEN);
        out.extend_from_slice(&self.part_index.to_le_bytes());
        out.extend_from_slice(&self.challenge.to_bytes());
        out.extend_from_slice(&self.value.to_bytes());
        out.extend_from_slice(&self.binding.to_bytes());
        out
    }
}

/// Pluggable proof system for the preimage relation.
pub trait RelationProofSystem<F: Field>: Clone + Send + Sync {
    type ProvingKey: Clone + Debug + PartialEq + Send + Sync;
    type VerifyingKey: Clone + Debug + PartialEq + Send + Sync;

    fn setup(&self) -> Result<(Self::ProvingKey, Self::VerifyingKey)>;
    fn prove(&self, pk: &Self::ProvingKey, statement: &Statement<F>, witness: &[u8]) -> Result<Vec<u8>>;
    fn verify(&self, vk: &Self::VerifyingKey, statement: &Statement<F>, proof: &[u8]) -> bool;
}

/// Empty key token of the reveal backend.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct NoKey;

/// Reference backend whose proof is the witness itself. Sound and complete,
/// but neither succinct nor zero-knowledge.
#[derive(Clone, Debug, Default)]
pub struct RevealBackend<H> {
    hash: H,
}

impl<H> RevealBackend<H> {
    pub fn new(hash: H) -> Self {
        Self { hash }
    }
}

impl<F: Field, H: HashSuite<F>> RelationProofSystem<F> for RevealBackend<H> {
    type ProvingKey = NoKey;
    type VerifyingKey = NoKey;

    fn setup(&self) -> Result<(NoKey, NoKey)> {
        Ok((NoKey, NoKey))
    }

    fn prove(&self, _: &NoKey, _: &Statement<F>, witness: &[u8]) -> Result<Vec<u8>> {
        Ok(witness.to_vec())
    }

    fn verify(&self, _: &NoKey, st: &Statement<F>, proof: &[u8]) -> bool {
        self.hash.h1(st.part_index, proof) == st.value && self.hash.h2(&st.challenge, proof) == st.binding
    }
}

pub const STUB_PROOF_LEN: usize = 192;

pub type StatementOracle<F> = Arc<dyn Fn(&Statement<F>) -> bool + Send + Sync>;

/// Cost-model stand-in for a succinct backend: proofs are always
/// [`STUB_PROOF_LEN`] bytes and verification defers to an external oracle.
/// Without an oracle nothing verifies. Not a proof system.
#[derive(Clone)]
pub struct ConstantSizeStub<F: Field> {
    oracle: Option<StatementOracle<F>>,
}

impl<F: Field> ConstantSizeStub<F> {
    pub fn new() -> Self {
        Self { oracle: None }
    }

    pub fn with_oracle(oracle: StatementOracle<F>) -> Self {
        Self { oracle: Some(oracle) }
    }

    fn filler(statement: &Statement<F>) -> Vec<u8> {
        let seed: [u8; 64] = Sha512::digest(statement.encode()).into();
        seed.iter().copied().cycle().take(STUB_PROOF_LEN).collect()
    }
}

impl<F: Field> Default for ConstantSizeStub<F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<F: Field> Debug for ConstantSizeStub<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConstantSizeStub")
            .field("oracle", &self.oracle.is_some())
            .finish()
    }
}

impl<F: Field> RelationProofSystem<F> for ConstantSizeStub<F> {
    type ProvingKey = NoKey;
    type VerifyingKey = NoKey;

    fn setup(&self) -> Result<(NoKey, NoKey)> {
        Ok((NoKey, NoKey))
    }

    fn prove(&self, _: &NoKey, statement: &Statement<F>, _: &[u8]) -> Result<Vec<u8>> {
        Ok(Self::filler(statement))
    }

    fn verify(&self, _: &NoKey, statement: &Statement<F>, proof: &[u8]) -> bool {
        proof.len() == STUB_PROOF_LEN
            && proof == Self::filler(statement)
            && self.oracle.as_ref().is_some_and(|o| o(statement))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChallengeRequest<F: Field> {
    pub batch_index: u64,
    pub challenge: F,
}

/// What a builder keeps for one batch: its part and the witness opening the
/// digest polynomial at that part's node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StorageTuple<B: PairingBackend> {
    pub part_index: u32,
    pub part: Vec<u8>,
    pub witness: B::G1,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoeProof<B: PairingBackend> {
    pub part_index: u32,
    pub value: B::Scalar,
    pub witness: B::G1,
    pub binding: B::Scalar,
    pub relation_proof: Vec<u8>,
}

impl<B: PairingBackend> PoeProof<B> {
    pub fn statement(&self, challenge: B::Scalar) -> Statement<B::Scalar> {
        Statement {
            part_index: self.part_index,
            challenge,
            value: self.value,
            binding: self.binding,
        }
    }

    /// `u32 j | v | G1 | r | u32 len | proof`, integers little-endian.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(&self.part_index.to_le_bytes());
        out.extend_from_slice(&self.value.to_bytes());
        out.extend_from_slice(&self.witness.to_bytes());
        out.extend_from_slice(&self.binding.to_bytes());
        out.extend_from_slice(&(self.relation_proof.len() as u32).to_le_bytes());
        out.extend_from_slice(&self.relation_proof);
        out
    }

    pub fn encoded_len(&self) -> usize {
        4 + 2 * B::Scalar::ENCODED_LEN + B::G1::ENCODED_LEN + 4 + self.relation_proof.len()
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        let part_index = r.u32()?;
        let value = r.scalar()?;
        let witness = r.element()?;
        let binding = r.scalar()?;
        let len = r.u32()? as usize;
        let relation_proof = r.take(len)?.to_vec();
        r.finish()?;
        Ok(Self {
            part_index,
            value,
            witness,
            binding,
            relation_proof,
        })
    }
}

#[derive(Clone, Debug)]
pub struct PoeKeys<B: PairingBackend, R: RelationProofSystem<B::Scalar>> {
    pub relation_pk: R::ProvingKey,
    pub relation_vk: R::VerifyingKey,
    pub srs: Srs<B>,
}

impl<B: PairingBackend, R: RelationProofSystem<B::Scalar>> PartialEq for PoeKeys<B, R> {
    fn eq(&self, other: &Self) -> bool {
        self.relation_pk == other.relation_pk
            && self.relation_vk == other.relation_vk
            && self.srs == other.srs
    }
}

/// Challenge, response and verification under one deployment's keys.
#[derive(Clone, Debug)]
pub struct Poe<B: PairingBackend, H, R: RelationProofSystem<B::Scalar>> {
    keys: PoeKeys<B, R>,
    hash: H,
    relation: R,
}

impl<B, H, R> Poe<B, H, R>
where
    B: PairingBackend,
    H: HashSuite<B::Scalar>,
    R: RelationProofSystem<B::Scalar>,
{
    pub fn setup(srs: Srs<B>, hash: H, relation: R) -> Result<Self> {
        let (relation_pk, relation_vk) = relation.setup()?;
        Ok(Self {
            keys: PoeKeys {
                relation_pk,
                relation_vk,
                srs,
            },
            hash,
            relation,
        })
    }

    pub fn keys(&self) -> &PoeKeys<B, R> {
        &self.keys
    }

    pub fn challenge<G: RngCore + ?Sized>(batch_index: u64, rng: &mut G) -> ChallengeRequest<B::Scalar> {
        ChallengeRequest {
            batch_index,
            challenge: B::Scalar::random(rng),
        }
    }

    pub fn respond(&self, req: &ChallengeRequest<B::Scalar>, tuple: &StorageTuple<B>) -> Result<PoeProof<B>> {
        let value = self.hash.h1(tuple.part_index, &tuple.part);
        let binding = self.hash.h2(&req.challenge, &tuple.part);
        let statement = Statement {
            part_index: tuple.part_index,
            challenge: req.challenge,
            value,
            binding,
        };
        let relation_proof = self.relation.prove(&self.keys.relation_pk, &statement, &tuple.part)?;
        Ok(PoeProof {
            part_index: tuple.part_index,
            value,
            witness: tuple.witness,
            binding,
            relation_proof,
        })
    }

    /// `hidden_state` must commit to the challenged batch's digests.
    pub fn verify(
        &self,
        req: &ChallengeRequest<B::Scalar>,
        proof: &PoeProof<B>,
        hidden_state: &HiddenState<B>,
    ) -> bool {
        let node = B::Scalar::from_u64(proof.part_index as u64);
        self.keys
            .srs
            .verify_eval(hidden_state, node, proof.value, &proof.witness)
            && self.relation.verify(
                &self.keys.relation_vk,
                &proof.statement(req.challenge),
                &proof.relation_proof,
            )
    }
}
