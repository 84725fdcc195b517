use std::collections::{BTreeMap, BTreeSet};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use super::config::{PartAssignment, SimConfig, Strategy};
use super::metrics::{BuilderMetrics, Metrics};
use crate::algebra::{GroupElement, PairingBackend};
use crate::chain::{
    blob_prove, AccountId, ArbiterPolicy, ArbiterState, Batch, BatchHeader, BatchSubmission, Block,
    BuilderId, ChallengeId, HiddenStateSource, Outcome, Proposal, Resolution, SyncedBatch,
    ValidityContract, ValidityToken,
};
use crate::error::Result;
use crate::hash::{sha256, HashSuite, Sha512Suite};
use crate::kzg::Commitment;
use crate::luck::{distance, lucky_number, search_nonce, DifficultyParams, ProposerId, Ratio};
use crate::pod::{partition, pod_setup, HiddenState, Pod};
use crate::poe::{Poe, RevealBackend, StorageTuple};

/// Account every simulated challenge is opened from.
pub const CHALLENGER: AccountId = u32::MAX;

pub type SimPoe<B> = Poe<B, Sha512Suite, RevealBackend<Sha512Suite>>;

#[derive(Clone, Debug)]
pub struct BuilderState<B: PairingBackend> {
    pub id: BuilderId,
    pub strategy: Strategy,
    /// Keyed by the index of the batch whose data the part belongs to.
    pub storage: BTreeMap<u64, StorageTuple<B>>,
    pub offline: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ChallengeReport {
    pub builder: Option<BuilderId>,
    pub batch_indices: Vec<u64>,
    pub challenge_ids: Vec<ChallengeId>,
    pub answered: usize,
}

struct Candidate<B: PairingBackend> {
    attempts: u64,
    priority: u64,
    builder: BuilderId,
    choice: usize,
    header: BatchHeader<B>,
    payload: Vec<u8>,
}

/// The whole simulated deployment: L1 chain, contracts, proposers and
/// builders, advanced one L1 block per [`World::tick`].
pub struct World<B: PairingBackend> {
    cfg: SimConfig,
    rng: ChaCha8Rng,
    hash: Sha512Suite,
    pod: Pod<B, Sha512Suite>,
    poe: SimPoe<B>,
    params: DifficultyParams,
    contract: ValidityContract<B>,
    arbiter: ArbiterState<B>,
    blocks: Vec<Block<B>>,
    batches: Vec<Batch<B>>,
    proposers: Vec<ProposerId>,
    payloads: BTreeMap<(u64, u32), Vec<u8>>,
    builders: Vec<BuilderState<B>>,
    metrics: Metrics,
    dump: Vec<String>,
}

impl<B: PairingBackend> World<B> {
    pub fn new(cfg: SimConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let hash = Sha512Suite {
            bind_index: cfg.bind_part_index,
        };
        let keys = pod_setup::<B, _>(cfg.max_degree, &mut rng)?;
        let poe = Poe::setup(keys.pk.clone(), hash, RevealBackend::new(hash))?;
        let pod = Pod::new(keys, hash);
        let ring = cfg.n_proposers as f64;
        let proposers = (0..cfg.n_proposers as u32)
            .map(|handle| ProposerId {
                handle,
                position: rng.gen_range(0.0..ring),
            })
            .collect();
        let contract = ValidityContract::new(
            0..cfg.n_proposers as u32,
            0..cfg.n_builders as BuilderId,
            cfg.quorum(),
        );
        let mut arbiter = ArbiterState::new(ArbiterPolicy {
            allow_redeposit: cfg.allow_redeposit,
            challenger_bond: cfg.challenger_bond,
            lag: cfg.lag,
        });
        let mut builders = Vec::with_capacity(cfg.n_builders);
        let mut builder_metrics = Vec::with_capacity(cfg.n_builders);
        for id in 0..cfg.n_builders as BuilderId {
            arbiter.deposit(id, cfg.deposit)?;
            let strategy = cfg.strategy(id as usize);
            builder_metrics.push(BuilderMetrics {
                id,
                strategy: strategy.label(),
                ..Default::default()
            });
            builders.push(BuilderState {
                id,
                strategy,
                storage: BTreeMap::new(),
                offline: false,
            });
        }
        Ok(Self {
            params: DifficultyParams::new(cfg.a, cfg.b),
            cfg,
            rng,
            hash,
            pod,
            poe,
            contract,
            arbiter,
            blocks: Vec::new(),
            batches: Vec::new(),
            proposers,
            payloads: BTreeMap::new(),
            builders,
            metrics: Metrics {
                conservation_ok: true,
                builders: builder_metrics,
                ..Default::default()
            },
            dump: Vec::new(),
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.cfg
    }

    pub fn pod(&self) -> &Pod<B, Sha512Suite> {
        &self.pod
    }

    pub fn poe(&self) -> &SimPoe<B> {
        &self.poe
    }

    pub fn contract(&self) -> &ValidityContract<B> {
        &self.contract
    }

    pub fn arbiter(&self) -> &ArbiterState<B> {
        &self.arbiter
    }

    pub fn blocks(&self) -> &[Block<B>] {
        &self.blocks
    }

    pub fn batches(&self) -> &[Batch<B>] {
        &self.batches
    }

    pub fn proposers(&self) -> &[ProposerId] {
        &self.proposers
    }

    pub fn builders(&self) -> &[BuilderState<B>] {
        &self.builders
    }

    pub fn metrics(&self) -> &Metrics {
        &self.metrics
    }

    pub fn height(&self) -> u64 {
        self.blocks.len() as u64
    }

    pub fn set_offline(&mut self, builder: BuilderId, offline: bool) {
        self.builders[builder as usize].offline = offline;
    }

    /// One JSON object per block.
    pub fn chain_dump(&self) -> String {
        let mut out = self.dump.join("\n");
        out.push('\n');
        out
    }

    pub fn run(&mut self, ticks: u64) -> Result<()> {
        for _ in 0..ticks {
            self.tick()?;
        }
        Ok(())
    }

    /// Ticks until `config().rounds` build rounds have run.
    pub fn run_rounds(&mut self) -> Result<()> {
        while self.metrics.build_rounds < self.cfg.rounds {
            self.tick()?;
        }
        Ok(())
    }

    fn is_proposing(&self, h: u64) -> bool {
        self.cfg.overlap || h % self.cfg.period_blocks < self.cfg.proposing_blocks
    }

    /// Block whose proposals and luck feed the build at height `h`, with the
    /// nonce budget for it.
    fn build_source(&self, h: u64) -> Option<(usize, u64)> {
        if self.cfg.overlap {
            (h >= 1).then(|| ((h - 1) as usize, self.cfg.max_attempts))
        } else {
            let (l, d) = (self.cfg.period_blocks, self.cfg.proposing_blocks);
            (h % l == l - 1).then(|| ((h + d - l) as usize, self.cfg.max_attempts * (l - d)))
        }
    }

    pub fn tick(&mut self) -> Result<()> {
        let h = self.height();
        self.metrics.ticks += 1;
        self.sweep(h);
        let blob = if self.is_proposing(h) {
            self.propose(h)
        } else {
            self.metrics.ignored_proposals += self.cfg.n_proposers as u64;
            Vec::new()
        };
        let synced = match self.build_source(h) {
            Some((src, budget)) => self.build(src, budget)?,
            None => None,
        };
        let parent = self.blocks.last().map_or([0; 32], Block::digest);
        let block = Block::new(h, parent, blob, synced);
        self.record(&block);
        self.blocks.push(block);
        let keep_from = h.saturating_sub(self.cfg.period_blocks + 1);
        self.payloads.retain(|&(height, _), _| height >= keep_from);
        Ok(())
    }

    fn propose(&mut self, h: u64) -> Vec<Proposal<B::Scalar>> {
        let mut blob = Vec::with_capacity(self.cfg.n_proposers);
        for proposer in 0..self.cfg.n_proposers as u32 {
            let mut payload = vec![0u8; self.cfg.payload_len()];
            self.rng.fill(&mut payload[..]);
            let tx_hashes = payload
                .chunks(self.cfg.tx_size)
                .map(|tx| HashSuite::<B::Scalar>::h3(&self.hash, tx))
                .collect();
            self.payloads.insert((h, proposer), payload);
            blob.push(Proposal {
                proposer,
                tx_hashes,
                epoch: h,
            });
        }
        blob
    }

    fn participating(&self, b: BuilderId) -> bool {
        self.arbiter.is_eligible(b) && !self.builders[b as usize].offline
    }

    fn build(&mut self, src_index: usize, budget: u64) -> Result<Option<SyncedBatch<B>>> {
        self.metrics.build_rounds += 1;
        let src = self.blocks[src_index].clone();
        if src.blob.is_empty() {
            self.metrics.empty_rounds += 1;
            return Ok(None);
        }
        let ring = self.cfg.n_proposers as f64;
        let luck = lucky_number::<B::Scalar, _>(&self.hash, &src.header(), ring);
        let index = self.contract.next_batch_index();
        let prior = (index >= self.cfg.lag).then(|| self.batches[(index - self.cfg.lag) as usize].payload.clone());
        let honest_state = match &prior {
            Some(p) => self.pod.prove(p, self.cfg.k)?,
            None => self.pod.genesis(),
        };
        let dists: Vec<f64> = src
            .blob
            .iter()
            .map(|p| distance(self.proposers[p.proposer as usize].position, luck, ring))
            .collect();
        let closest = argmin(&dists, 0..dists.len()).expect("blob is non-empty");
        let d_honest = dists[closest];
        let prev_digest = self.batches.last().map_or([0; 32], |b| b.header.digest());

        let mut candidates = Vec::new();
        for b in 0..self.cfg.n_builders as BuilderId {
            if !self.participating(b) {
                continue;
            }
            let strategy = self.builders[b as usize].strategy.clone();
            let choice = match &strategy {
                Strategy::Colluder { partners } => argmin(
                    &dists,
                    (0..src.blob.len()).filter(|&i| partners.contains(&src.blob[i].proposer)),
                )
                .unwrap_or(closest),
                _ => closest,
            };
            let d = dists[choice];
            let target = self.params.difficulty(d);
            let hidden_state = if strategy.downloads() {
                honest_state
            } else {
                Commitment(B::G1::random(&mut self.rng))
            };
            let proposer = src.blob[choice].proposer;
            let payload = self.payloads[&(src.height, proposer)].clone();
            let mut header = BatchHeader {
                batch_index: index,
                hidden_state,
                nonce: [0; 32],
                proposer,
                builder: b,
                luck,
                payload_digest: sha256(&[&payload]),
                prev_batch_digest: prev_digest,
            };
            let search = search_nonce(&header.preimage(), &target, budget, &mut self.rng);

            let p = target.probability();
            let m = &mut self.metrics.builders[b as usize];
            m.rounds_searched += 1;
            m.attempts += search.attempts;
            m.expected_successes += search.attempts as f64 * p;
            m.success_variance += search.attempts as f64 * p * (1.0 - p);
            match self.params.difficulty_ratio(d_honest, d) {
                Ratio::Infinite => m.infinite_ratio_rounds += 1,
                Ratio::Finite(r) => m.log_ratio_sum += r.ln(),
            }
            if let Some(nonce) = search.nonce {
                m.successes += 1;
                header.nonce = nonce;
                candidates.push(Candidate {
                    attempts: search.attempts,
                    priority: self.rng.gen(),
                    builder: b,
                    choice,
                    header,
                    payload,
                });
            }
        }
        candidates.sort_by_key(|c| (c.attempts, c.priority));

        for c in candidates {
            let downloads = self.builders[c.builder as usize].strategy.downloads();
            let state = c.header.hidden_state;
            let verifies = match &prior {
                Some(p) => self.pod.verify(&state, p, self.cfg.k)?,
                None => state == self.pod.genesis(),
            };
            let notes: BTreeSet<BuilderId> = if verifies {
                (0..self.cfg.n_builders as BuilderId)
                    .filter(|&b| self.participating(b) && self.builders[b as usize].strategy.downloads())
                    .collect()
            } else {
                BTreeSet::new()
            };
            let submission = BatchSubmission {
                batch: Batch {
                    header: c.header,
                    payload: c.payload,
                },
                proposal: src.blob[c.choice].clone(),
                membership: blob_prove(&src.blob, c.choice)?,
                validity: ValidityToken { valid: downloads },
            };
            if self.contract.record_batch(&src, &submission, &notes) {
                let synced = SyncedBatch {
                    batch_index: index,
                    batch_digest: submission.batch.header.digest(),
                    hidden_state: state,
                    builder: c.builder,
                    proposer: submission.proposal.proposer,
                    proposal_height: src.height,
                    validity: submission.validity,
                    membership: submission.membership,
                };
                self.batches.push(submission.batch);
                self.metrics.batches += 1;
                self.metrics.builders[c.builder as usize].wins += 1;
                self.store_parts(index)?;
                return Ok(Some(synced));
            }
        }
        self.metrics.empty_rounds += 1;
        Ok(None)
    }

    /// After batch `index` is accepted its hidden state commits to batch
    /// `index - lag`; every downloading builder keeps one part of that.
    fn store_parts(&mut self, index: u64) -> Result<()> {
        if index < self.cfg.lag {
            return Ok(());
        }
        let data_index = index - self.cfg.lag;
        let payload = self.batches[data_index as usize].payload.clone();
        let k = self.cfg.k;
        let phi = self.pod.digest_polynomial(&payload, k)?;
        let parts = partition(&payload, k)?;
        let mut witnesses = BTreeMap::new();
        for b in 0..self.builders.len() {
            if !self.participating(b as BuilderId) || !self.builders[b].strategy.downloads() {
                continue;
            }
            let j = match self.cfg.part_assignment {
                PartAssignment::Uniform => self.rng.gen_range(0..k as u32),
                PartAssignment::Fixed(j) => j,
            };
            if !self.builders[b].strategy.keeps(&mut self.rng) {
                continue;
            }
            if let std::collections::btree_map::Entry::Vacant(e) = witnesses.entry(j) {
                e.insert(self.pod.part_witness(&phi, j)?.witness);
            }
            self.builders[b].storage.insert(
                data_index,
                StorageTuple {
                    part_index: j,
                    part: parts[j as usize].to_vec(),
                    witness: witnesses[&j],
                },
            );
        }
        Ok(())
    }

    fn apply_resolution(&mut self, r: &Resolution) {
        if let Outcome::Slashed(_) = r.outcome {
            self.metrics.slashes += 1;
            self.metrics.builders[r.builder as usize].slashes += 1;
            if self.builders[r.builder as usize].strategy == Strategy::Honest {
                self.metrics.honest_slashes += 1;
            }
        } else {
            self.metrics.responses_accepted += 1;
        }
        self.check_conservation();
    }

    fn check_conservation(&mut self) {
        let ok = self.arbiter.total_balance() == self.arbiter.total_deposited();
        self.metrics.conservation_ok &= ok;
    }

    fn sweep(&mut self, now: u64) {
        for r in self.arbiter.timeout_sweep(now) {
            self.apply_resolution(&r);
        }
        self.check_conservation();
    }

    /// Batch indices whose committing hidden state is already on chain.
    pub fn challengeable(&self) -> u64 {
        self.contract.next_batch_index().saturating_sub(self.cfg.lag)
    }

    /// Opens `s` challenges on distinct random batches against one builder;
    /// the builder answers at once where it can. Unanswered challenges stay
    /// open until a later tick sweeps them.
    pub fn run_challenge_round(&mut self, s: usize) -> Result<ChallengeReport> {
        let available = self.challengeable() as usize;
        let eligible: Vec<BuilderId> = (0..self.cfg.n_builders as BuilderId)
            .filter(|&b| self.arbiter.is_eligible(b))
            .collect();
        let target = match self.cfg.challenge_target {
            Some(t) => eligible.contains(&t).then_some(t),
            None if eligible.is_empty() => None,
            None => Some(eligible[self.rng.gen_range(0..eligible.len())]),
        };
        let Some(builder) = target else {
            return Ok(ChallengeReport::default());
        };
        if available == 0 || s == 0 {
            return Ok(ChallengeReport {
                builder: Some(builder),
                ..Default::default()
            });
        }
        let now = self.height();
        let picks: Vec<u64> = sample(&mut self.rng, available, s.min(available))
            .into_iter()
            .map(|i| i as u64)
            .collect();
        let mut report = ChallengeReport {
            builder: Some(builder),
            batch_indices: picks.clone(),
            ..Default::default()
        };
        let mut opened = Vec::with_capacity(picks.len());
        for &batch in &picks {
            let req = SimPoe::<B>::challenge(batch, &mut self.rng);
            let id = self.arbiter.open_challenge(req, builder, CHALLENGER, now, self.cfg.window)?;
            self.metrics.challenges_opened += 1;
            report.challenge_ids.push(id);
            opened.push((id, req));
        }
        self.check_conservation();

        let state = &self.builders[builder as usize];
        if state.strategy == Strategy::Withholder || state.offline {
            return Ok(report);
        }
        for (id, req) in opened {
            let Some(tuple) = self.builders[builder as usize].storage.get(&req.batch_index) else {
                continue;
            };
            let proof = self.poe.respond(&req, tuple)?;
            let outcome = self.arbiter.respond(id, &proof, &self.poe, &self.contract, now)?;
            report.answered += 1;
            let r = *self.arbiter.resolved().last().expect("just resolved");
            debug_assert_eq!(r.outcome, outcome);
            self.apply_resolution(&r);
        }
        Ok(report)
    }

    /// Ticks until no challenge is open.
    pub fn finalize_challenges(&mut self) -> Result<u64> {
        let mut ticks = 0;
        while !self.arbiter.open_challenges().is_empty() {
            self.tick()?;
            ticks += 1;
        }
        Ok(ticks)
    }

    pub fn outcome_of(&self, id: ChallengeId) -> Option<Outcome> {
        self.arbiter.resolved().iter().find(|r| r.id == id).map(|r| r.outcome)
    }

    /// Whether any challenge of the report ended in a slash.
    pub fn detected(&self, report: &ChallengeReport) -> bool {
        report
            .challenge_ids
            .iter()
            .any(|&id| matches!(self.outcome_of(id), Some(Outcome::Slashed(_))))
    }

    /// Reassembles batch `data_index` from the parts held by live builders and
    /// checks it against the hidden state committing to it.
    pub fn recover_payload(&self, data_index: u64) -> Result<Option<Vec<u8>>> {
        let Some(state) = self.contract.hidden_state(data_index + self.cfg.lag) else {
            return Ok(None);
        };
        let mut parts: BTreeMap<u32, &[u8]> = BTreeMap::new();
        for b in &self.builders {
            if b.offline || self.arbiter.is_ejected(b.id) {
                continue;
            }
            if let Some(t) = b.storage.get(&data_index) {
                parts.entry(t.part_index).or_insert(&t.part);
            }
        }
        if parts.len() < self.cfg.k {
            return Ok(None);
        }
        let payload: Vec<u8> = parts.values().flat_map(|p| p.iter().copied()).collect();
        Ok(self.pod.verify(&state, &payload, self.cfg.k)?.then_some(payload))
    }

    /// Number of distinct parts of batch `data_index` held by live builders.
    pub fn coverage(&self, data_index: u64) -> usize {
        self.builders
            .iter()
            .filter(|b| !b.offline && !self.arbiter.is_ejected(b.id))
            .filter_map(|b| b.storage.get(&data_index).map(|t| t.part_index))
            .collect::<BTreeSet<_>>()
            .len()
    }

    fn record(&mut self, block: &Block<B>) {
        let synced = block.synced.as_ref().map(|s| {
            json!({
                "batch_index": s.batch_index,
                "batch_digest": hex::encode(s.batch_digest),
                "hidden_state": hex::encode(s.hidden_state.0.to_bytes()),
                "builder": s.builder,
                "proposer": s.proposer,
                "proposal_height": s.proposal_height,
                "payload": hex::encode(&self.batches[s.batch_index as usize].payload),
            })
        });
        let line = json!({
            "height": block.height,
            "parent": hex::encode(block.parent),
            "blob_root": hex::encode(block.blob_root),
            "proposals": block.blob.len(),
            "synced": synced,
            "deposits": self.arbiter.deposits(),
            "credits": self.arbiter.credits(),
            "open_challenges": self.arbiter.open_challenges().len(),
        });
        self.dump.push(line.to_string());
    }
}

fn argmin(values: &[f64], candidates: impl Iterator<Item = usize>) -> Option<usize> {
    candidates.min_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)))
}

/// Hidden state a lazy builder would have to match.
pub fn honest_hidden_state<B: PairingBackend>(world: &World<B>, index: u64) -> Result<HiddenState<B>> {
    let lag = world.config().lag;
    if index < lag {
        Ok(world.pod().genesis())
    } else {
        world.pod().prove(&world.batches()[(index - lag) as usize].payload, world.config().k)
    }
}
