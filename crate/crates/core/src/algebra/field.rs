use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use ff::Field as _;
use rand::RngCore;

/// A prime-order scalar field.
///
/// Every operation returns a fully reduced element, so derived equality is
/// equality in the field.
pub trait Field:
    Copy
    + Debug
    + PartialEq
    + Eq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Width of the canonical little-endian encoding.
    const ENCODED_LEN: usize;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_u64(v: u64) -> Self;
    fn inverse(&self) -> Option<Self>;

    /// Reduces 64 uniformly random bytes into the field. The bias is at most
    /// `p / 2^512`.
    fn from_uniform_bytes(bytes: &[u8; 64]) -> Self;

    fn to_bytes(&self) -> Vec<u8>;
    fn from_bytes(bytes: &[u8]) -> Option<Self>;

    fn is_zero(&self) -> bool {
        *self == Self::zero()
    }

    fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        let mut wide = [0u8; 64];
        rng.fill_bytes(&mut wide);
        Self::from_uniform_bytes(&wide)
    }

    fn random_nonzero<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        loop {
            let s = Self::random(rng);
            if !s.is_zero() {
                return s;
            }
        }
    }

    fn pow(&self, mut exp: u64) -> Self {
        let mut base = *self;
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            exp >>= 1;
        }
        acc
    }
}

/// Integers modulo a small prime `Q`. Only meant for exhaustive tests.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ToyScalar<const Q: u64>(u64);

impl<const Q: u64> ToyScalar<Q> {
    pub const MODULUS: u64 = Q;

    pub fn new(v: u64) -> Self {
        Self(v % Q)
    }

    pub fn value(&self) -> u64 {
        self.0
    }
}

impl<const Q: u64> Debug for ToyScalar<Q> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const Q: u64> Add for ToyScalar<Q> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(((self.0 as u128 + rhs.0 as u128) % Q as u128) as u64)
    }
}

impl<const Q: u64> Sub for ToyScalar<Q> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(((self.0 as u128 + Q as u128 - rhs.0 as u128) % Q as u128) as u64)
    }
}

impl<const Q: u64> Mul for ToyScalar<Q> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self(((self.0 as u128 * rhs.0 as u128) % Q as u128) as u64)
    }
}

impl<const Q: u64> Neg for ToyScalar<Q> {
    type Output = Self;
    fn neg(self) -> Self {
        Self((Q - self.0) % Q)
    }
}

impl<const Q: u64> Field for ToyScalar<Q> {
    const ENCODED_LEN: usize = 8;

    fn zero() -> Self {
        Self(0)
    }

    fn one() -> Self {
        Self(1 % Q)
    }

    fn from_u64(v: u64) -> Self {
        Self::new(v)
    }

    fn inverse(&self) -> Option<Self> {
        // Fermat; Q must be prime.
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(Q - 2))
        }
    }

    fn from_uniform_bytes(bytes: &[u8; 64]) -> Self {
        let acc = bytes
            .iter()
            .fold(0u128, |acc, &b| (acc * 256 + b as u128) % Q as u128);
        Self(acc as u64)
    }

    fn to_bytes(&self) -> Vec<u8> {
        self.0.to_le_bytes().to_vec()
    }

    fn from_bytes(bytes: &[u8]) -> Option<Self> {
        let arr: [u8; 8] = bytes.try_into().ok()?;
        let v = u64::from_le_bytes(arr);
        (v < Q).then_some(Self(v))
    }
}

impl Field for bls12_381::Scalar {
    const ENCODED_LEN: usize = 32;

    fn zero() -> Self {
        bls12_381::Scalar::ZERO
    }

    fn one() -> Self {
        bls12_381::Scalar::ONE
    }

    fn from_u64(v: u64) -> Self {
        bls12_381::Scalar::from(v)
    }

    fn inverse(&self) -> Option<Self> {
        self.invert().into()
    }

    fn from_uniform_bytes(bytes: &[u8; 64]) -> Self {
        bls12_381::Scalar::from_bytes_wide(bytes)
    }

    fn to_bytes(&self) -> Vec<u8> {
        bls12_381::Scalar::to_bytes(self).to_vec()
    }

    fn from_bytes(bytes: &[u8]) -> Option<Self> {
        let arr: [u8; 32] = bytes.try_into().ok()?;
        bls12_381::Scalar::from_bytes(&arr).into()
    }
}
