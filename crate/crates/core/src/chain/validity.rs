use std::collections::{BTreeMap, BTreeSet};

use super::types::{blob_verify, BatchSubmission, Block, BuilderId};
use crate::algebra::PairingBackend;
use crate::pod::HiddenState;

/// Lookup of the hidden state carried by an accepted batch.
pub trait HiddenStateSource<B: PairingBackend> {
    fn hidden_state(&self, batch_index: u64) -> Option<HiddenState<B>>;
}

/// `floor(n / 2) + 1`.
pub fn default_quorum(n_builders: usize) -> usize {
    n_builders / 2 + 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidityContract<B: PairingBackend> {
    proposers: BTreeSet<u32>,
    builders: BTreeSet<BuilderId>,
    quorum: usize,
    hidden_states: BTreeMap<u64, HiddenState<B>>,
}

impl<B: PairingBackend> ValidityContract<B> {
    pub fn new(proposers: impl IntoIterator<Item = u32>, builders: impl IntoIterator<Item = BuilderId>, quorum: usize) -> Self {
        Self {
            proposers: proposers.into_iter().collect(),
            builders: builders.into_iter().collect(),
            quorum,
            hidden_states: BTreeMap::new(),
        }
    }

    pub fn quorum(&self) -> usize {
        self.quorum
    }

    pub fn is_registered_proposer(&self, id: u32) -> bool {
        self.proposers.contains(&id)
    }

    /// Index the next accepted batch will get.
    pub fn next_batch_index(&self) -> u64 {
        self.hidden_states.len() as u64
    }

    /// `proposal_block` is the block whose blob the proposal must come from.
    /// Notes from unknown builders are ignored.
    pub fn record_batch(
        &mut self,
        proposal_block: &Block<B>,
        submission: &BatchSubmission<B>,
        notes: &BTreeSet<BuilderId>,
    ) -> bool {
        let header = &submission.batch.header;
        let valid_notes = notes.iter().filter(|b| self.builders.contains(b)).count();
        let accepted = header.batch_index == self.next_batch_index()
            && submission.proposal.epoch == proposal_block.height
            && blob_verify(&proposal_block.blob_root, &submission.proposal, &submission.membership)
            && self.proposers.contains(&submission.proposal.proposer)
            && header.proposer == submission.proposal.proposer
            && submission.batch.payload_matches()
            && submission.validity.valid
            && valid_notes >= self.quorum;
        if accepted {
            self.hidden_states.insert(header.batch_index, header.hidden_state);
        }
        accepted
    }
}

impl<B: PairingBackend> HiddenStateSource<B> for ValidityContract<B> {
    fn hidden_state(&self, batch_index: u64) -> Option<HiddenState<B>> {
        self.hidden_states.get(&batch_index).copied()
    }
}

impl<B: PairingBackend> HiddenStateSource<B> for BTreeMap<u64, HiddenState<B>> {
    fn hidden_state(&self, batch_index: u64) -> Option<HiddenState<B>> {
        self.get(&batch_index).copied()
    }
}
