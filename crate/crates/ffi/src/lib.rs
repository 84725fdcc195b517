//! C ABI over the BLS12-381 deployment of `rollup-da`.
//!
//! Every function returns an [`RdaStatus`]. Outputs go through caller-owned
//! pointers; variable-length outputs use `(buf, cap, written)` and report
//! [`RdaStatus::BufferTooSmall`] with the required length in `written`.
//! Scalars are 32 bytes little-endian, G1 points 48 bytes compressed.

use std::ffi::c_char;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::slice;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use rollup_da::algebra::{Bls12Backend, Field, GroupElement, PairingBackend};
use rollup_da::hash::Sha512Suite;
use rollup_da::kzg::{Commitment, Srs};
use rollup_da::luck::{check_nonce, lucky_number, DifficultyParams, Ratio, Target};
use rollup_da::pod::{partition, pod_setup, Pod, PodKeys};
use rollup_da::poe::{ChallengeRequest, Poe, PoeProof, RevealBackend, StorageTuple};
use rollup_da::Error;

type Scalar = <Bls12Backend as PairingBackend>::Scalar;
type G1 = <Bls12Backend as PairingBackend>::G1;
type RevealPoe = Poe<Bls12Backend, Sha512Suite, RevealBackend<Sha512Suite>>;

pub const RDA_SCALAR_LEN: usize = 32;
pub const RDA_G1_LEN: usize = 48;
pub const RDA_TARGET_LEN: usize = 32;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RdaStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Decode = 3,
    BufferTooSmall = 4,
    Backend = 5,
    Panic = 255,
}

impl From<Error> for RdaStatus {
    fn from(e: Error) -> Self {
        match e {
            Error::Decode(_) => RdaStatus::Decode,
            Error::Backend(_) => RdaStatus::Backend,
            _ => RdaStatus::InvalidArgument,
        }
    }
}

/// Reference string plus the proof-of-download and proof-of-existence
/// contexts built on it.
pub struct RdaSrs {
    pod: Pod<Bls12Backend, Sha512Suite>,
    poe: RevealPoe,
}

impl RdaSrs {
    fn new(srs: Srs<Bls12Backend>) -> Result<Self, RdaStatus> {
        let hash = Sha512Suite::new();
        let poe = Poe::setup(srs.clone(), hash, RevealBackend::new(hash))?;
        Ok(Self {
            pod: Pod::new(PodKeys::from_srs(srs), hash),
            poe,
        })
    }
}

fn guard(f: impl FnOnce() -> Result<(), RdaStatus>) -> RdaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => RdaStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => RdaStatus::Panic,
    }
}

unsafe fn bytes<'a>(ptr: *const u8, len: usize) -> Result<&'a [u8], RdaStatus> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(RdaStatus::NullPointer);
    }
    Ok(slice::from_raw_parts(ptr, len))
}

unsafe fn out<'a, T>(ptr: *mut T) -> Result<&'a mut T, RdaStatus> {
    ptr.as_mut().ok_or(RdaStatus::NullPointer)
}

unsafe fn handle<'a>(ptr: *const RdaSrs) -> Result<&'a RdaSrs, RdaStatus> {
    ptr.as_ref().ok_or(RdaStatus::NullPointer)
}

unsafe fn scalar(ptr: *const u8) -> Result<Scalar, RdaStatus> {
    <Scalar as Field>::from_bytes(bytes(ptr, RDA_SCALAR_LEN)?).ok_or(RdaStatus::Decode)
}

unsafe fn point(ptr: *const u8) -> Result<G1, RdaStatus> {
    G1::from_bytes(bytes(ptr, RDA_G1_LEN)?).ok_or(RdaStatus::Decode)
}

unsafe fn write_fixed(dst: *mut u8, src: &[u8]) -> Result<(), RdaStatus> {
    if dst.is_null() {
        return Err(RdaStatus::NullPointer);
    }
    std::ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    Ok(())
}

unsafe fn write_var(buf: *mut u8, cap: usize, written: *mut usize, src: &[u8]) -> Result<(), RdaStatus> {
    *out(written)? = src.len();
    if cap < src.len() {
        return Err(RdaStatus::BufferTooSmall);
    }
    write_fixed(buf, src)
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn rda_status_message(status: RdaStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        RdaStatus::Ok => b"ok\0",
        RdaStatus::NullPointer => b"null pointer argument\0",
        RdaStatus::InvalidArgument => b"invalid argument\0",
        RdaStatus::Decode => b"malformed encoding\0",
        RdaStatus::BufferTooSmall => b"output buffer too small\0",
        RdaStatus::Backend => b"proof backend failure\0",
        RdaStatus::Panic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// Seeded setup supporting up to `max_parts` parts; free with [`rda_srs_free`].
///
/// # Safety
/// `out_srs` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rda_srs_setup(max_parts: usize, seed: u64, out_srs: *mut *mut RdaSrs) -> RdaStatus {
    guard(|| {
        let slot = out(out_srs)?;
        let keys = pod_setup::<Bls12Backend, _>(max_parts, &mut ChaCha8Rng::seed_from_u64(seed))?;
        *slot = Box::into_raw(Box::new(RdaSrs::new(keys.pk)?));
        Ok(())
    })
}

/// # Safety
/// `srs` must come from this library and not be used afterwards. Null is a no-op.
#[no_mangle]
pub unsafe extern "C" fn rda_srs_free(srs: *mut RdaSrs) {
    if !srs.is_null() {
        drop(Box::from_raw(srs));
    }
}

/// # Safety
/// `srs` must be a live handle; `out_max` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rda_srs_max_degree(srs: *const RdaSrs, out_max: *mut usize) -> RdaStatus {
    guard(|| {
        *out(out_max)? = handle(srs)?.pod.srs().max_degree();
        Ok(())
    })
}

/// # Safety
/// `buf` must hold `cap` bytes; `written` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rda_srs_serialize(
    srs: *const RdaSrs,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> RdaStatus {
    guard(|| write_var(buf, cap, written, &handle(srs)?.pod.srs().to_bytes()))
}

/// # Safety
/// `data` must hold `len` bytes; `out_srs` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rda_srs_deserialize(data: *const u8, len: usize, out_srs: *mut *mut RdaSrs) -> RdaStatus {
    guard(|| {
        let slot = out(out_srs)?;
        let srs = Srs::<Bls12Backend>::from_bytes(bytes(data, len)?)?;
        *slot = Box::into_raw(Box::new(RdaSrs::new(srs)?));
        Ok(())
    })
}

/// Hidden state of `payload` split into `k` parts, 48 bytes into `out_state`.
///
/// # Safety
/// `payload` must hold `len` bytes; `out_state` must hold 48 bytes.
#[no_mangle]
pub unsafe extern "C" fn rda_pod_prove(
    srs: *const RdaSrs,
    payload: *const u8,
    len: usize,
    k: usize,
    out_state: *mut u8,
) -> RdaStatus {
    guard(|| {
        let state = handle(srs)?.pod.prove(bytes(payload, len)?, k)?;
        write_fixed(out_state, &state.0.to_bytes())
    })
}

/// # Safety
/// `state` must hold 48 bytes, `payload` `len` bytes; `out_valid` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rda_pod_verify(
    srs: *const RdaSrs,
    state: *const u8,
    payload: *const u8,
    len: usize,
    k: usize,
    out_valid: *mut bool,
) -> RdaStatus {
    guard(|| {
        let valid = out(out_valid)?;
        let state = Commitment(point(state)?);
        *valid = handle(srs)?.pod.verify(&state, bytes(payload, len)?, k)?;
        Ok(())
    })
}

/// Evaluation witness of part `part_index`, 48 bytes into `out_witness`.
///
/// # Safety
/// `payload` must hold `len` bytes; `out_witness` must hold 48 bytes.
#[no_mangle]
pub unsafe extern "C" fn rda_part_witness(
    srs: *const RdaSrs,
    payload: *const u8,
    len: usize,
    k: usize,
    part_index: u32,
    out_witness: *mut u8,
) -> RdaStatus {
    guard(|| {
        let pod = &handle(srs)?.pod;
        let payload = bytes(payload, len)?;
        let parts = partition(payload, k)?;
        if part_index as usize >= parts.len() {
            return Err(RdaStatus::InvalidArgument);
        }
        let phi = pod.digest_polynomial(payload, k)?;
        write_fixed(out_witness, &pod.part_witness(&phi, part_index)?.witness.to_bytes())
    })
}

/// Uniform challenge scalar derived from `seed`, 32 bytes into `out_challenge`.
///
/// # Safety
/// `out_challenge` must hold 32 bytes.
#[no_mangle]
pub unsafe extern "C" fn rda_challenge_from_seed(seed: u64, out_challenge: *mut u8) -> RdaStatus {
    guard(|| {
        let req = RevealPoe::challenge(0, &mut ChaCha8Rng::seed_from_u64(seed));
        write_fixed(out_challenge, &req.challenge.to_bytes())
    })
}

/// Response to `challenge` from a stored part and its witness.
///
/// # Safety
/// `challenge` 32 bytes, `part` `part_len` bytes, `witness` 48 bytes,
/// `buf` `cap` bytes; `written` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rda_poe_respond(
    srs: *const RdaSrs,
    challenge: *const u8,
    part_index: u32,
    part: *const u8,
    part_len: usize,
    witness: *const u8,
    buf: *mut u8,
    cap: usize,
    written: *mut usize,
) -> RdaStatus {
    guard(|| {
        let req = ChallengeRequest {
            batch_index: 0,
            challenge: scalar(challenge)?,
        };
        let tuple = StorageTuple::<Bls12Backend> {
            part_index,
            part: bytes(part, part_len)?.to_vec(),
            witness: point(witness)?,
        };
        let proof = handle(srs)?.poe.respond(&req, &tuple)?;
        write_var(buf, cap, written, &proof.to_bytes())
    })
}

/// # Safety
/// `challenge` 32 bytes, `proof` `proof_len` bytes, `state` 48 bytes;
/// `out_valid` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rda_poe_verify(
    srs: *const RdaSrs,
    challenge: *const u8,
    proof: *const u8,
    proof_len: usize,
    state: *const u8,
    out_valid: *mut bool,
) -> RdaStatus {
    guard(|| {
        let valid = out(out_valid)?;
        let req = ChallengeRequest {
            batch_index: 0,
            challenge: scalar(challenge)?,
        };
        let proof = PoeProof::<Bls12Backend>::from_bytes(bytes(proof, proof_len)?)?;
        *valid = handle(srs)?.poe.verify(&req, &proof, &Commitment(point(state)?));
        Ok(())
    })
}

/// Lucky number of an L1 block header on a ring of circumference `ring`.
///
/// # Safety
/// `header` must hold `len` bytes; `out_luck` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rda_lucky_number(header: *const u8, len: usize, ring: f64, out_luck: *mut f64) -> RdaStatus {
    guard(|| {
        if !(ring > 0.0 && ring.is_finite()) {
            return Err(RdaStatus::InvalidArgument);
        }
        *out(out_luck)? = lucky_number::<Scalar, _>(&Sha512Suite::new(), bytes(header, len)?, ring);
        Ok(())
    })
}

fn params(a: f64, b: f64) -> Result<DifficultyParams, RdaStatus> {
    if !(a > 0.0 && a.is_finite() && b > 0.0 && b <= 1.0) {
        return Err(RdaStatus::InvalidArgument);
    }
    Ok(DifficultyParams::new(a, b))
}

/// Target for a proposal at `distance`: 32 bytes big-endian, or `*out_full`
/// set when the target is the whole range `2^256`.
///
/// # Safety
/// `out_target` must hold 32 bytes; `out_full` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rda_difficulty_target(
    a: f64,
    b: f64,
    distance: f64,
    out_target: *mut u8,
    out_full: *mut bool,
) -> RdaStatus {
    guard(|| {
        if !(distance >= 0.0 && distance.is_finite()) {
            return Err(RdaStatus::InvalidArgument);
        }
        let full = out(out_full)?;
        let t = params(a, b)?.difficulty(distance);
        *full = t.is_full();
        write_fixed(out_target, t.as_bytes().unwrap_or(&[0; 32]))
    })
}

/// Whether `SHA-256(header || nonce)` is below the target.
///
/// # Safety
/// `header` `len` bytes, `nonce` and `target` 32 bytes; `out_ok` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rda_check_nonce(
    header: *const u8,
    len: usize,
    nonce: *const u8,
    target: *const u8,
    full: bool,
    out_ok: *mut bool,
) -> RdaStatus {
    guard(|| {
        let ok = out(out_ok)?;
        let nonce: [u8; 32] = bytes(nonce, 32)?.try_into().expect("32 bytes");
        let target = if full {
            Target::FULL
        } else {
            Target::from_biguint(&num_bigint::BigUint::from_bytes_be(bytes(target, RDA_TARGET_LEN)?))
        };
        *ok = check_nonce(bytes(header, len)?, &nonce, &target);
        Ok(())
    })
}

/// Honest over colluding difficulty; `INFINITY` when the colluding target is zero.
///
/// # Safety
/// `out_ratio` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn rda_difficulty_ratio(
    a: f64,
    b: f64,
    d_honest: f64,
    d_colluder: f64,
    out_ratio: *mut f64,
) -> RdaStatus {
    guard(|| {
        if !(d_honest >= 0.0 && d_colluder >= d_honest && d_colluder.is_finite()) {
            return Err(RdaStatus::InvalidArgument);
        }
        *out(out_ratio)? = match params(a, b)?.difficulty_ratio(d_honest, d_colluder) {
            Ratio::Infinite => f64::INFINITY,
            Ratio::Finite(r) => r,
        };
        Ok(())
    })
}
