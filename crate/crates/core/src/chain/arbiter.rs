use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::types::{AccountId, BuilderId};
use super::validity::HiddenStateSource;
use crate::algebra::{Field, PairingBackend};
use crate::error::{Error, Result};
use crate::hash::HashSuite;
use crate::poe::{ChallengeRequest, Poe, PoeProof, RelationProofSystem};

pub type ChallengeId = u64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SlashReason {
    InvalidProof,
    Timeout,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Outcome {
    Accepted,
    Slashed(SlashReason),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArbiterPolicy {
    /// Whether a slashed builder may deposit again and rebuild.
    pub allow_redeposit: bool,
    /// Escrowed from the challenger; refunded on a slash, paid to the
    /// builder when the response is accepted.
    pub challenger_bond: u64,
    /// Distance between the data batch and the hidden state committing it.
    pub lag: u64,
}

impl Default for ArbiterPolicy {
    fn default() -> Self {
        Self {
            allow_redeposit: true,
            challenger_bond: 0,
            lag: 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenChallenge<F: Field> {
    pub request: ChallengeRequest<F>,
    pub builder: BuilderId,
    pub challenger: AccountId,
    pub opened_at: u64,
    pub deadline: u64,
    pub bond: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Resolution {
    pub id: ChallengeId,
    pub builder: BuilderId,
    pub challenger: AccountId,
    pub outcome: Outcome,
    pub amount_moved: u64,
    pub height: u64,
}

/// Deposits, challenger balances, open challenges and their resolutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArbiterState<B: PairingBackend> {
    policy: ArbiterPolicy,
    deposits: BTreeMap<BuilderId, u64>,
    credits: BTreeMap<AccountId, u64>,
    ejected: BTreeSet<BuilderId>,
    open: BTreeMap<ChallengeId, OpenChallenge<B::Scalar>>,
    resolved: Vec<Resolution>,
    next_id: ChallengeId,
    total_in: u64,
}

impl<B: PairingBackend> ArbiterState<B> {
    pub fn new(policy: ArbiterPolicy) -> Self {
        Self {
            policy,
            deposits: BTreeMap::new(),
            credits: BTreeMap::new(),
            ejected: BTreeSet::new(),
            open: BTreeMap::new(),
            resolved: Vec::new(),
            next_id: 0,
            total_in: 0,
        }
    }

    pub fn policy(&self) -> &ArbiterPolicy {
        &self.policy
    }

    pub fn deposit(&mut self, builder: BuilderId, amount: u64) -> Result<()> {
        if amount == 0 {
            return Err(Error::ZeroAmount);
        }
        if self.ejected.contains(&builder) {
            if !self.policy.allow_redeposit {
                return Err(Error::RedepositForbidden(builder));
            }
            self.ejected.remove(&builder);
        }
        *self.deposits.entry(builder).or_default() += amount;
        self.total_in += amount;
        Ok(())
    }

    /// Credits a challenger account, e.g. so it can post bonds.
    pub fn fund(&mut self, account: AccountId, amount: u64) {
        *self.credits.entry(account).or_default() += amount;
        self.total_in += amount;
    }

    pub fn deposit_of(&self, builder: BuilderId) -> u64 {
        self.deposits.get(&builder).copied().unwrap_or(0)
    }

    pub fn credit_of(&self, account: AccountId) -> u64 {
        self.credits.get(&account).copied().unwrap_or(0)
    }

    pub fn deposits(&self) -> &BTreeMap<BuilderId, u64> {
        &self.deposits
    }

    pub fn credits(&self) -> &BTreeMap<AccountId, u64> {
        &self.credits
    }

    pub fn is_eligible(&self, builder: BuilderId) -> bool {
        !self.ejected.contains(&builder) && self.deposit_of(builder) > 0
    }

    pub fn is_ejected(&self, builder: BuilderId) -> bool {
        self.ejected.contains(&builder)
    }

    pub fn open_challenges(&self) -> &BTreeMap<ChallengeId, OpenChallenge<B::Scalar>> {
        &self.open
    }

    pub fn resolved(&self) -> &[Resolution] {
        &self.resolved
    }

    /// Sum of everything held: deposits, credits and escrowed bonds.
    pub fn total_balance(&self) -> u64 {
        self.deposits.values().sum::<u64>()
            + self.credits.values().sum::<u64>()
            + self.open.values().map(|c| c.bond).sum::<u64>()
    }

    /// Everything ever paid in. Equals [`Self::total_balance`] at all times.
    pub fn total_deposited(&self) -> u64 {
        self.total_in
    }

    pub fn open_challenge(
        &mut self,
        request: ChallengeRequest<B::Scalar>,
        builder: BuilderId,
        challenger: AccountId,
        now: u64,
        window: u64,
    ) -> Result<ChallengeId> {
        if window == 0 {
            return Err(Error::ZeroWindow);
        }
        if !self.is_eligible(builder) {
            return Err(Error::BuilderNotEligible(builder));
        }
        let bond = self.policy.challenger_bond;
        if bond > 0 {
            let balance = self.credits.entry(challenger).or_default();
            if *balance < bond {
                return Err(Error::InsufficientBond(challenger));
            }
            *balance -= bond;
        }
        let id = self.next_id;
        self.next_id += 1;
        self.open.insert(
            id,
            OpenChallenge {
                request,
                builder,
                challenger,
                opened_at: now,
                deadline: now + window,
                bond,
            },
        );
        Ok(id)
    }

    fn resolve(&mut self, id: ChallengeId, outcome: Outcome, now: u64) -> Resolution {
        let c = self.open.remove(&id).expect("resolving an open challenge");
        let amount_moved = match outcome {
            Outcome::Accepted => {
                if c.bond > 0 {
                    *self.deposits.entry(c.builder).or_default() += c.bond;
                }
                0
            }
            Outcome::Slashed(_) => {
                let seized = self.deposits.insert(c.builder, 0).unwrap_or(0);
                self.ejected.insert(c.builder);
                *self.credits.entry(c.challenger).or_default() += seized + c.bond;
                seized
            }
        };
        let r = Resolution {
            id,
            builder: c.builder,
            challenger: c.challenger,
            outcome,
            amount_moved,
            height: now,
        };
        self.resolved.push(r);
        r
    }

    /// Checks the response against the hidden state `lag` batches after the
    /// challenged one.
    pub fn respond<H, R, S>(
        &mut self,
        id: ChallengeId,
        proof: &PoeProof<B>,
        poe: &Poe<B, H, R>,
        source: &S,
        now: u64,
    ) -> Result<Outcome>
    where
        H: HashSuite<B::Scalar>,
        R: RelationProofSystem<B::Scalar>,
        S: HiddenStateSource<B>,
    {
        let c = self.open.get(&id).ok_or(Error::UnknownChallenge(id))?;
        if now > c.deadline {
            return Err(Error::PastDeadline {
                id,
                deadline: c.deadline,
                now,
            });
        }
        let committed = c.request.batch_index + self.policy.lag;
        let hidden_state = source
            .hidden_state(committed)
            .ok_or(Error::HiddenStateUnavailable(committed))?;
        let outcome = if poe.verify(&c.request, proof, &hidden_state) {
            Outcome::Accepted
        } else {
            Outcome::Slashed(SlashReason::InvalidProof)
        };
        Ok(self.resolve(id, outcome, now).outcome)
    }

    /// Slashes every challenge whose deadline is before `now`.
    pub fn timeout_sweep(&mut self, now: u64) -> Vec<Resolution> {
        let expired: Vec<ChallengeId> = self
            .open
            .iter()
            .filter(|(_, c)| c.deadline < now)
            .map(|(&id, _)| id)
            .collect();
        expired
            .into_iter()
            .map(|id| self.resolve(id, Outcome::Slashed(SlashReason::Timeout), now))
            .collect()
    }
}
