use std::fmt::Debug;
use std::ops::{Add, Neg, Sub};

use bls12_381::{G1Affine, G1Projective, G2Affine, G2Projective, Gt};
use group::Group;
use rand::RngCore;

use super::field::{Field, ToyScalar};

/// Element of a prime-order group written additively.
pub trait GroupElement:
    Copy
    + Debug
    + PartialEq
    + Eq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
{
    type Scalar: Field;

    /// Width of the compressed encoding.
    const ENCODED_LEN: usize;

    fn identity() -> Self;
    fn generator() -> Self;
    fn mul(&self, s: &Self::Scalar) -> Self;
    fn to_bytes(&self) -> Vec<u8>;
    fn from_bytes(bytes: &[u8]) -> Option<Self>;

    fn random<R: RngCore + ?Sized>(rng: &mut R) -> Self {
        Self::generator().mul(&Self::Scalar::random(rng))
    }
}

/// A bilinear group `e: G1 x G2 -> Gt` of prime order `p`.
///
/// The toy backend uses `G1 = G2`; the production curve is asymmetric, which
/// is why the two source groups are kept apart.
pub trait PairingBackend: Copy + Debug + Default + PartialEq + Eq + Send + Sync + 'static {
    type Scalar: Field;
    type G1: GroupElement<Scalar = Self::Scalar>;
    type G2: GroupElement<Scalar = Self::Scalar>;
    type Gt: Debug + PartialEq + Eq + Send + Sync;

    const NAME: &'static str;

    /// Whether setup keeps the trapdoor around. Only the toy backend does.
    const RETAINS_TRAPDOOR: bool;

    fn pairing(a: &Self::G1, b: &Self::G2) -> Self::Gt;
}

/// INSECURE toy group: every element is stored as its discrete log modulo
/// `Q`, with the generator at log 1 and the pairing multiplying logs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ToyBackend<const Q: u64>;

/// `g^log` in the toy group.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct ToyGroup<const Q: u64>(ToyScalar<Q>);

/// Target-group element of the toy pairing, also kept as a log.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ToyGt<const Q: u64>(pub ToyScalar<Q>);

pub type Toy101 = ToyBackend<101>;
pub type Toy7919 = ToyBackend<7919>;

impl<const Q: u64> ToyGroup<Q> {
    pub fn from_log(log: ToyScalar<Q>) -> Self {
        Self(log)
    }

    pub fn log(&self) -> ToyScalar<Q> {
        self.0
    }
}

impl<const Q: u64> Debug for ToyGroup<Q> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "g^{:?}", self.0)
    }
}

impl<const Q: u64> Add for ToyGroup<Q> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl<const Q: u64> Sub for ToyGroup<Q> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl<const Q: u64> Neg for ToyGroup<Q> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl<const Q: u64> GroupElement for ToyGroup<Q> {
    type Scalar = ToyScalar<Q>;
    const ENCODED_LEN: usize = 8;

    fn identity() -> Self {
        Self(ToyScalar::zero())
    }

    fn generator() -> Self {
        Self(ToyScalar::one())
    }

    fn mul(&self, s: &ToyScalar<Q>) -> Self {
        Self(self.0 * *s)
    }

    fn to_bytes(&self) -> Vec<u8> {
        self.0.to_bytes()
    }

    fn from_bytes(bytes: &[u8]) -> Option<Self> {
        ToyScalar::from_bytes(bytes).map(Self)
    }
}

impl<const Q: u64> PairingBackend for ToyBackend<Q> {
    type Scalar = ToyScalar<Q>;
    type G1 = ToyGroup<Q>;
    type G2 = ToyGroup<Q>;
    type Gt = ToyGt<Q>;

    const NAME: &'static str = "toy";
    const RETAINS_TRAPDOOR: bool = true;

    fn pairing(a: &ToyGroup<Q>, b: &ToyGroup<Q>) -> ToyGt<Q> {
        ToyGt(a.0 * b.0)
    }
}

/// BLS12-381, scalar field order ~2^255.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Bls12Backend;

impl GroupElement for G1Projective {
    type Scalar = bls12_381::Scalar;
    const ENCODED_LEN: usize = 48;

    fn identity() -> Self {
        <G1Projective as Group>::identity()
    }

    fn generator() -> Self {
        <G1Projective as Group>::generator()
    }

    fn mul(&self, s: &bls12_381::Scalar) -> Self {
        self * s
    }

    fn to_bytes(&self) -> Vec<u8> {
        G1Affine::from(self).to_compressed().to_vec()
    }

    fn from_bytes(bytes: &[u8]) -> Option<Self> {
        let arr: [u8; 48] = bytes.try_into().ok()?;
        Option::<G1Affine>::from(G1Affine::from_compressed(&arr)).map(Into::into)
    }
}

impl GroupElement for G2Projective {
    type Scalar = bls12_381::Scalar;
    const ENCODED_LEN: usize = 96;

    fn identity() -> Self {
        <G2Projective as Group>::identity()
    }

    fn generator() -> Self {
        <G2Projective as Group>::generator()
    }

    fn mul(&self, s: &bls12_381::Scalar) -> Self {
        self * s
    }

    fn to_bytes(&self) -> Vec<u8> {
        G2Affine::from(self).to_compressed().to_vec()
    }

    fn from_bytes(bytes: &[u8]) -> Option<Self> {
        let arr: [u8; 96] = bytes.try_into().ok()?;
        Option::<G2Affine>::from(G2Affine::from_compressed(&arr)).map(Into::into)
    }
}

impl PairingBackend for Bls12Backend {
    type Scalar = bls12_381::Scalar;
    type G1 = G1Projective;
    type G2 = G2Projective;
    type Gt = Gt;

    const NAME: &'static str = "bls12-381";
    const RETAINS_TRAPDOOR: bool = false;

    fn pairing(a: &G1Projective, b: &G2Projective) -> Gt {
        bls12_381::pairing(&G1Affine::from(a), &G2Affine::from(b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn toy_bilinearity_exhaustive() {
        type B = Toy101;
        let g = ToyGroup::<101>::generator();
        let e_gg = B::pairing(&g, &g);
        for a in 0..101u64 {
            for b in 0..101u64 {
                let (sa, sb) = (ToyScalar::new(a), ToyScalar::new(b));
                let lhs = B::pairing(&g.mul(&sa), &g.mul(&sb));
                // e(g,g)^{ab}, computed in the target group's exponent
                let rhs = ToyGt(e_gg.0 * sa * sb);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn toy_group_laws() {
        let g = ToyGroup::<7919>::generator();
        let x = g.mul(&ToyScalar::new(1234));
        assert_eq!(ToyGroup::identity() + x, x);
        let (a, b) = (ToyScalar::new(17), ToyScalar::new(7000));
        assert_eq!(x.mul(&(a + b)), x.mul(&a) + x.mul(&b));
    }

    #[test]
    fn bls_bilinearity_spot_check() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..3 {
            let a = <bls12_381::Scalar as Field>::random(&mut rng);
            let b = <bls12_381::Scalar as Field>::random(&mut rng);
            let lhs = Bls12Backend::pairing(
                &<G1Projective as GroupElement>::generator().mul(&a),
                &<G2Projective as GroupElement>::generator().mul(&b),
            );
            let rhs = Bls12Backend::pairing(
                &<G1Projective as GroupElement>::generator().mul(&(a * b)),
                &<G2Projective as GroupElement>::generator(),
            );
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn bls_encoding_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let p = <G1Projective as GroupElement>::random(&mut rng);
        assert_eq!(<G1Projective as GroupElement>::from_bytes(&GroupElement::to_bytes(&p)), Some(p));
        let q = <G2Projective as GroupElement>::random(&mut rng);
        assert_eq!(<G2Projective as GroupElement>::from_bytes(&GroupElement::to_bytes(&q)), Some(q));
        assert_eq!(<G1Projective as GroupElement>::from_bytes(&[0u8; 47]), None);
    }
}
