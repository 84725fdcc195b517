use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use super::*;
use crate::algebra::{Toy7919, ToyScalar};
use crate::error::Error;
use crate::hash::{sha256, HashSuite, Sha512Suite};
use crate::kzg::Srs;
use crate::pod::{partition, HiddenState, Pod, PodKeys};
use crate::poe::{ChallengeRequest, Poe, PoeProof, RevealBackend, StorageTuple};

type B = Toy7919;
type S = ToyScalar<7919>;
type TestPoe = Poe<B, Sha512Suite, RevealBackend<Sha512Suite>>;

const PAYLOAD: &[u8] = b"transactions of the challenged batch, split four ways";
const K: usize = 4;

struct Fixture {
    pod: Pod<B, Sha512Suite>,
    poe: TestPoe,
    states: BTreeMap<u64, HiddenState<B>>,
}

fn fixture() -> Fixture {
    let srs = Srs::<B>::from_trapdoor(S::new(1234), 6).unwrap();
    let pod = Pod::new(PodKeys::from_srs(srs.clone()), Sha512Suite::new());
    let poe = Poe::setup(srs, Sha512Suite::new(), RevealBackend::new(Sha512Suite::new())).unwrap();
    // batch 0's data is committed by hidden state 2
    let states = BTreeMap::from([(2, pod.prove(PAYLOAD, K).unwrap())]);
    Fixture { pod, poe, states }
}

impl Fixture {
    fn tuple(&self, j: u32) -> StorageTuple<B> {
        let phi = self.pod.digest_polynomial(PAYLOAD, K).unwrap();
        StorageTuple {
            part_index: j,
            part: partition(PAYLOAD, K).unwrap()[j as usize].to_vec(),
            witness: self.pod.part_witness(&phi, j).unwrap().witness,
        }
    }

    fn honest(&self, req: &ChallengeRequest<S>) -> PoeProof<B> {
        self.poe.respond(req, &self.tuple(1)).unwrap()
    }
}

fn req(c: u64) -> ChallengeRequest<S> {
    ChallengeRequest {
        batch_index: 0,
        challenge: S::new(c),
    }
}

fn arbiter() -> ArbiterState<B> {
    let mut a = ArbiterState::new(ArbiterPolicy::default());
    a.deposit(1, 100).unwrap();
    a
}

const CHALLENGER: AccountId = 900;

#[test]
fn blob_single_and_four() {
    let p = |i: u32| Proposal::<S> {
        proposer: i,
        tx_hashes: vec![S::new(i as u64 + 1)],
        epoch: 3,
    };
    let one = vec![p(0)];
    let root = blob_commit(&one);
    assert_eq!(root, merkle::leaf_hash(&p(0).encode()));
    let proof = blob_prove(&one, 0).unwrap();
    assert!(proof.path.is_empty() && blob_verify(&root, &p(0), &proof));

    let four: Vec<_> = (0..4).map(p).collect();
    let root = blob_commit(&four);
    let proof = blob_prove(&four, 2).unwrap();
    assert_eq!(proof.path.len(), 2);
    assert!(blob_verify(&root, &four[2], &proof));
    let mut tampered = four[2].clone();
    tampered.epoch ^= 1;
    assert!(!blob_verify(&root, &tampered, &proof));
    assert_eq!(blob_prove(&four, 4), Err(Error::IndexOutOfRange { index: 4, len: 4 }));
}

#[test]
fn deposits() {
    let mut a = ArbiterState::<B>::new(ArbiterPolicy::default());
    assert!(!a.is_eligible(7));
    a.deposit(7, 100).unwrap();
    assert!(a.is_eligible(7));
    a.deposit(7, 50).unwrap();
    assert_eq!(a.deposit_of(7), 150);
    assert_eq!(a.deposit(7, 0), Err(Error::ZeroAmount));
}

#[test]
fn redeposit_policy() {
    for allow in [true, false] {
        let mut a = ArbiterState::<B>::new(ArbiterPolicy {
            allow_redeposit: allow,
            ..ArbiterPolicy::default()
        });
        a.deposit(1, 10).unwrap();
        a.open_challenge(req(5), 1, CHALLENGER, 0, 2).unwrap();
        a.timeout_sweep(3);
        assert!(!a.is_eligible(1));
        let again = a.deposit(1, 10);
        if allow {
            assert!(again.is_ok() && a.is_eligible(1));
        } else {
            assert_eq!(again, Err(Error::RedepositForbidden(1)));
        }
    }
}

#[test]
fn open_records_deadline_and_ids() {
    let mut a = arbiter();
    let id0 = a.open_challenge(req(5), 1, CHALLENGER, 10, 2).unwrap();
    let id1 = a.open_challenge(req(6), 1, CHALLENGER, 10, 2).unwrap();
    assert_ne!(id0, id1);
    assert_eq!(a.open_challenges()[&id0].deadline, 12);
    assert_eq!(a.open_challenge(req(5), 1, CHALLENGER, 10, 0), Err(Error::ZeroWindow));
    assert_eq!(a.open_challenge(req(5), 2, CHALLENGER, 10, 2), Err(Error::BuilderNotEligible(2)));
}

#[test]
fn honest_response_accepted() {
    let f = fixture();
    let mut a = arbiter();
    let id = a.open_challenge(req(77), 1, CHALLENGER, 0, 2).unwrap();
    let out = a.respond(id, &f.honest(&req(77)), &f.poe, &f.states, 2).unwrap();
    assert_eq!(out, Outcome::Accepted);
    assert_eq!(a.deposit_of(1), 100);
    assert!(a.open_challenges().is_empty());
}

#[test]
fn invalid_response_slashed() {
    let f = fixture();
    let mut a = arbiter();
    let id = a.open_challenge(req(77), 1, CHALLENGER, 0, 2).unwrap();
    let stale = f.honest(&req(78));
    let out = a.respond(id, &stale, &f.poe, &f.states, 1).unwrap();
    assert_eq!(out, Outcome::Slashed(SlashReason::InvalidProof));
    assert_eq!(a.deposit_of(1), 0);
    assert_eq!(a.credit_of(CHALLENGER), 100);
    assert!(!a.is_eligible(1));
}

#[test]
fn late_response_then_sweep() {
    let f = fixture();
    let mut a = arbiter();
    let id = a.open_challenge(req(77), 1, CHALLENGER, 0, 2).unwrap();
    assert_eq!(
        a.respond(id, &f.honest(&req(77)), &f.poe, &f.states, 3),
        Err(Error::PastDeadline { id, deadline: 2, now: 3 })
    );
    assert!(a.timeout_sweep(2).is_empty());
    let swept = a.timeout_sweep(3);
    assert_eq!(swept.len(), 1);
    assert_eq!(swept[0].outcome, Outcome::Slashed(SlashReason::Timeout));
    assert_eq!(a.credit_of(CHALLENGER), 100);
    let snapshot = a.clone();
    assert!(a.timeout_sweep(3).is_empty());
    assert!(a.timeout_sweep(50).is_empty());
    assert_eq!(a, snapshot);
}

#[test]
fn respond_errors() {
    let f = fixture();
    let mut a = arbiter();
    assert_eq!(
        a.respond(9, &f.honest(&req(1)), &f.poe, &f.states, 0),
        Err(Error::UnknownChallenge(9))
    );
    let mut later = req(1);
    later.batch_index = 5;
    let id = a.open_challenge(later, 1, CHALLENGER, 0, 2).unwrap();
    assert_eq!(
        a.respond(id, &f.honest(&later), &f.poe, &f.states, 0),
        Err(Error::HiddenStateUnavailable(7))
    );
}

#[test]
fn bond_escrow() {
    let f = fixture();
    let mut a = ArbiterState::<B>::new(ArbiterPolicy {
        challenger_bond: 5,
        ..ArbiterPolicy::default()
    });
    a.deposit(1, 100).unwrap();
    assert_eq!(a.open_challenge(req(2), 1, CHALLENGER, 0, 2), Err(Error::InsufficientBond(CHALLENGER)));
    a.fund(CHALLENGER, 8);
    let id = a.open_challenge(req(2), 1, CHALLENGER, 0, 2).unwrap();
    assert_eq!(a.total_balance(), a.total_deposited());
    a.respond(id, &f.honest(&req(2)), &f.poe, &f.states, 1).unwrap();
    assert_eq!((a.deposit_of(1), a.credit_of(CHALLENGER)), (105, 3));
    assert_eq!(a.total_balance(), a.total_deposited());
}

fn submission_fixture() -> (Block<B>, BatchSubmission<B>, ValidityContract<B>) {
    let f = fixture();
    let proposals: Vec<Proposal<S>> = (0..3)
        .map(|i| Proposal {
            proposer: i,
            tx_hashes: vec![Sha512Suite::new().h3(&[i as u8])],
            epoch: 4,
        })
        .collect();
    let block = Block::<B>::new(4, [0; 32], proposals.clone(), None);
    let payload = b"batch payload".to_vec();
    let header = BatchHeader {
        batch_index: 0,
        hidden_state: f.pod.genesis(),
        nonce: [0; 32],
        proposer: 1,
        builder: 0,
        luck: 0.5,
        payload_digest: sha256(&[&payload]),
        prev_batch_digest: [0; 32],
    };
    let sub = BatchSubmission {
        batch: Batch { header, payload },
        proposal: proposals[1].clone(),
        membership: blob_prove(&proposals, 1).unwrap(),
        validity: ValidityToken { valid: true },
    };
    let contract = ValidityContract::new(0..3, 0..5, default_quorum(5));
    (block, sub, contract)
}

#[test]
fn validity_accepts_honest_with_quorum() {
    let (block, sub, mut c) = submission_fixture();
    assert_eq!(c.quorum(), 3);
    let notes: BTreeSet<BuilderId> = [0, 1, 2].into();
    assert!(c.record_batch(&block, &sub, &notes));
    assert_eq!(c.hidden_state(0), Some(sub.batch.header.hidden_state));
    assert_eq!(c.next_batch_index(), 1);
}

#[test]
fn validity_rejects_wrong_block_short_quorum_and_bad_token() {
    let (block, sub, c) = submission_fixture();
    let notes: BTreeSet<BuilderId> = [0, 1, 2].into();

    let other = Block::<B>::new(5, [0; 32], vec![Proposal { epoch: 5, ..sub.proposal.clone() }], None);
    assert!(!c.clone().record_batch(&other, &sub, &notes));

    assert!(!c.clone().record_batch(&block, &sub, &[0, 1].into()));
    assert!(!c.clone().record_batch(&block, &sub, &[0, 1, 77].into()));

    let mut forged = sub.clone();
    forged.validity.valid = false;
    assert!(!c.clone().record_batch(&block, &forged, &notes));
}

#[derive(Clone, Debug)]
enum Op {
    Deposit(u32, u64),
    Fund(u32, u64),
    Open(u32, u64, u64),
    Respond(u64, bool, u64),
    Sweep(u64),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        (0u32..4, 0u64..50).prop_map(|(b, a)| Op::Deposit(b, a)),
        (900u32..902, 0u64..20).prop_map(|(c, a)| Op::Fund(c, a)),
        (0u32..4, 0u64..20, 0u64..4).prop_map(|(b, now, w)| Op::Open(b, now, w)),
        (0u64..12, any::<bool>(), 0u64..25).prop_map(|(id, ok, now)| Op::Respond(id, ok, now)),
        (0u64..30).prop_map(Op::Sweep),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn balances_are_conserved(ops in prop::collection::vec(op(), 1..40), bond in 0u64..3, redeposit in any::<bool>()) {
        let f = fixture();
        let mut a = ArbiterState::<B>::new(ArbiterPolicy { allow_redeposit: redeposit, challenger_bond: bond, lag: 2 });
        let mut slashes: BTreeMap<ChallengeId, usize> = BTreeMap::new();
        for op in ops {
            match op {
                Op::Deposit(b, amt) => { let _ = a.deposit(b, amt); }
                Op::Fund(c, amt) => a.fund(c, amt),
                Op::Open(b, now, w) => {
                    let c = 900 + (now % 2) as u32;
                    let _ = a.open_challenge(req(now + 1), b, c, now, w);
                }
                Op::Respond(id, ok, now) => {
                    if let Some(c) = a.open_challenges().get(&id) {
                        let r = c.request;
                        let proof = if ok { f.honest(&r) } else { f.honest(&req(r.challenge.value() + 1)) };
                        let before = a.deposit_of(c.builder);
                        if let Ok(Outcome::Accepted) = a.respond(id, &proof, &f.poe, &f.states, now) {
                            prop_assert!(a.deposit_of(a.resolved().last().unwrap().builder) >= before);
                        }
                    }
                }
                Op::Sweep(now) => { a.timeout_sweep(now); }
            }
            prop_assert_eq!(a.total_balance(), a.total_deposited());
            for c in a.open_challenges().values() {
                prop_assert!(c.deadline > c.opened_at);
            }
        }
        for r in a.resolved() {
            if matches!(r.outcome, Outcome::Slashed(_)) {
                *slashes.entry(r.id).or_default() += 1;
            } else {
                prop_assert_eq!(r.amount_moved, 0);
            }
        }
        prop_assert!(slashes.values().all(|&n| n == 1));
    }
}
