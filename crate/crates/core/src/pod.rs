//! Proof of download: a KZG commitment to the polynomial through the part
//! digests of a payload.

use rand::RngCore;

use crate::algebra::{interpolate_at_nodes, Field, PairingBackend, Polynomial};
use crate::error::{Error, Result};
use crate::hash::HashSuite;
use crate::kzg::{Commitment, EvalProof, Srs};

pub type HiddenState<B> = Commitment<B>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PodKeys<B: PairingBackend> {
    pub pk: Srs<B>,
    pub vk: Srs<B>,
}

impl<B: PairingBackend> PodKeys<B> {
    pub fn from_srs(srs: Srs<B>) -> Self {
        Self {
            pk: srs.clone(),
            vk: srs,
        }
    }

    /// Largest supported part count `D + 1`.
    pub fn max_parts(&self) -> usize {
        self.pk.max_degree() + 1
    }
}

/// Samples a reference string supporting up to `max_parts + 1` parts.
pub fn pod_setup<B: PairingBackend, R: RngCore + ?Sized>(
    max_parts: usize,
    rng: &mut R,
) -> Result<PodKeys<B>> {
    if max_parts < 2 {
        return Err(Error::MaxPartsTooSmall(max_parts));
    }
    Ok(PodKeys::from_srs(Srs::setup(max_parts, rng)?))
}

/// Ceiling split of `payload` into `k` contiguous parts.
///
/// Every part has `ceil(len / k)` bytes until the payload runs out, so the
/// tail can be short and, when `k` does not divide evenly enough, empty.
pub fn partition(payload: &[u8], k: usize) -> Result<Vec<&[u8]>> {
    if payload.is_empty() {
        return Err(Error::EmptyPayload);
    }
    if k == 0 || k > payload.len() {
        return Err(Error::KTooLarge {
            k,
            len: payload.len(),
        });
    }
    let chunk = payload.len().div_ceil(k);
    Ok((0..k)
        .map(|j| {
            let start = (j * chunk).min(payload.len());
            let end = ((j + 1) * chunk).min(payload.len());
            &payload[start..end]
        })
        .collect())
}

/// `u64` little-endian length prefix before each payload.
pub fn frame_payloads<P: AsRef<[u8]>>(payloads: &[P]) -> Vec<u8> {
    let total: usize = payloads.iter().map(|p| p.as_ref().len() + 8).sum();
    let mut out = Vec::with_capacity(total);
    for p in payloads {
        let p = p.as_ref();
        out.extend_from_slice(&(p.len() as u64).to_le_bytes());
        out.extend_from_slice(p);
    }
    out
}

/// Prover and verifier for hidden states under a fixed key pair and hash
/// suite.
#[derive(Clone, Debug)]
pub struct Pod<B: PairingBackend, H> {
    keys: PodKeys<B>,
    hash: H,
}

impl<B: PairingBackend, H: HashSuite<B::Scalar>> Pod<B, H> {
    pub fn new(keys: PodKeys<B>, hash: H) -> Self {
        Self { keys, hash }
    }

    pub fn keys(&self) -> &PodKeys<B> {
        &self.keys
    }

    pub fn hash(&self) -> &H {
        &self.hash
    }

    pub fn srs(&self) -> &Srs<B> {
        &self.keys.pk
    }

    fn check_k(&self, k: usize) -> Result<()> {
        let max = self.keys.max_parts();
        if k < 2 || k > max {
            return Err(Error::InvalidPartCount { k, min: 2, max });
        }
        Ok(())
    }

    /// `v_j = H1(part_j)` for every part.
    pub fn part_digests(&self, payload: &[u8], k: usize) -> Result<Vec<B::Scalar>> {
        self.check_k(k)?;
        Ok(partition(payload, k)?
            .iter()
            .enumerate()
            .map(|(j, part)| self.hash.h1(j as u32, part))
            .collect())
    }

    /// The polynomial through `(j, v_j)` for `j` in `0..k`.
    pub fn digest_polynomial(&self, payload: &[u8], k: usize) -> Result<Polynomial<B::Scalar>> {
        interpolate_at_nodes(&self.part_digests(payload, k)?)
    }

    pub fn prove(&self, payload: &[u8], k: usize) -> Result<HiddenState<B>> {
        self.keys.pk.commit(&self.digest_polynomial(payload, k)?)
    }

    /// Hidden state over several payloads. A single payload hashes exactly
    /// like [`Pod::prove`]; longer lists are length-framed first.
    pub fn prove_multi<P: AsRef<[u8]>>(&self, payloads: &[P], k: usize) -> Result<HiddenState<B>> {
        match payloads {
            [] => Err(Error::NoPayloads),
            [one] => self.prove(one.as_ref(), k),
            many => self.prove(&frame_payloads(many), k),
        }
    }

    pub fn verify(&self, hidden_state: &HiddenState<B>, payload: &[u8], k: usize) -> Result<bool> {
        let phi = self.digest_polynomial(payload, k)?;
        Ok(self.keys.vk.open(hidden_state, &phi))
    }

    /// Evaluation witness for part `j`, kept alongside the stored part.
    pub fn part_witness(&self, phi: &Polynomial<B::Scalar>, j: u32) -> Result<EvalProof<B>> {
        self.keys.pk.eval(phi, B::Scalar::from_u64(j as u64))
    }

    /// Commitment to the zero polynomial, used before any payload exists.
    pub fn genesis(&self) -> HiddenState<B> {
        self.keys.pk.commit(&Polynomial::zero()).expect("zero polynomial has no degree")
    }
}
