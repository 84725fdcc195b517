//! KZG polynomial commitments over a [`PairingBackend`].
//!
//! Commitments and evaluation witnesses live in `G1`; the verifier side of
//! the reference string (`g2`, `g2^alpha`) lives in `G2`. Verification checks
//! `e(C - y*g1, g2) == e(pi, g2^alpha - i*g2)`, which needs no division.

use rand::RngCore;

use crate::algebra::{Field, GroupElement, PairingBackend, Polynomial};
use crate::error::{Error, Result};

/// Magic and version tag of the serialized reference string.
pub const SRS_MAGIC: [u8; 4] = *b"RKZ1";

/// Structured reference string `(g, g^a, .., g^{a^D})` plus `(h, h^a)` in G2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Srs<B: PairingBackend> {
    powers: Vec<B::G1>,
    g2: B::G2,
    g2_alpha: B::G2,
    trapdoor: Option<B::Scalar>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Commitment<B: PairingBackend>(pub B::G1);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalProof<B: PairingBackend> {
    pub index: B::Scalar,
    pub value: B::Scalar,
    pub witness: B::G1,
}

impl<B: PairingBackend> Srs<B> {
    /// Samples `alpha` uniformly from the nonzero scalars. The trapdoor is
    /// kept only when the backend is the insecure toy group.
    pub fn setup<R: RngCore + ?Sized>(max_degree: usize, rng: &mut R) -> Result<Self> {
        let alpha = B::Scalar::random_nonzero(rng);
        Self::from_trapdoor(alpha, max_degree)
    }

    /// Derives the reference string from a known `alpha`. Anyone holding
    /// `alpha` can forge openings; use only for tests and local experiments.
    pub fn from_trapdoor(alpha: B::Scalar, max_degree: usize) -> Result<Self> {
        if max_degree < 1 {
            return Err(Error::DegreeZero);
        }
        let g1 = B::G1::generator();
        let mut powers = Vec::with_capacity(max_degree + 1);
        let mut acc = B::Scalar::one();
        for _ in 0..=max_degree {
            powers.push(g1.mul(&acc));
            acc = acc * alpha;
        }
        let g2 = B::G2::generator();
        Ok(Self {
            powers,
            g2,
            g2_alpha: g2.mul(&alpha),
            trapdoor: B::RETAINS_TRAPDOOR.then_some(alpha),
        })
    }

    pub fn max_degree(&self) -> usize {
        self.powers.len() - 1
    }

    pub fn powers(&self) -> &[B::G1] {
        &self.powers
    }

    pub fn g2(&self) -> &B::G2 {
        &self.g2
    }

    pub fn g2_alpha(&self) -> &B::G2 {
        &self.g2_alpha
    }

    /// `Some(alpha)` on backends that retain it.
    pub fn trapdoor(&self) -> Option<B::Scalar> {
        self.trapdoor
    }

    fn check_degree(&self, phi: &Polynomial<B::Scalar>) -> Result<()> {
        match phi.degree() {
            Some(d) if d > self.max_degree() => Err(Error::DegreeTooLarge {
                degree: d,
                max: self.max_degree(),
            }),
            _ => Ok(()),
        }
    }

    fn msm(&self, coeffs: &[B::Scalar]) -> B::G1 {
        coeffs
            .iter()
            .zip(&self.powers)
            .filter(|(c, _)| !c.is_zero())
            .fold(B::G1::identity(), |acc, (c, p)| acc + p.mul(c))
    }

    /// `C = g^{phi(alpha)}`.
    pub fn commit(&self, phi: &Polynomial<B::Scalar>) -> Result<Commitment<B>> {
        self.check_degree(phi)?;
        Ok(Commitment(self.msm(phi.coeffs())))
    }

    /// Recomputes the commitment and compares. Oversized polynomials simply
    /// fail to open.
    pub fn open(&self, commitment: &Commitment<B>, phi: &Polynomial<B::Scalar>) -> bool {
        self.commit(phi).is_ok_and(|c| c == *commitment)
    }

    /// `(i, phi(i), g^{(phi(alpha) - phi(i)) / (alpha - i)})`.
    pub fn eval(&self, phi: &Polynomial<B::Scalar>, index: B::Scalar) -> Result<EvalProof<B>> {
        self.check_degree(phi)?;
        let quotient = phi.div_linear(index);
        Ok(EvalProof {
            index,
            value: phi.eval(index),
            witness: self.msm(quotient.coeffs()),
        })
    }

    pub fn verify_eval(
        &self,
        commitment: &Commitment<B>,
        index: B::Scalar,
        value: B::Scalar,
        witness: &B::G1,
    ) -> bool {
        let lhs_g1 = commitment.0 - B::G1::generator().mul(&value);
        let rhs_g2 = self.g2_alpha - self.g2.mul(&index);
        B::pairing(&lhs_g1, &self.g2) == B::pairing(witness, &rhs_g2)
    }

    /// `magic | u32 max_degree | u32 count | count * G1 | G2 | G2 | u8 flag [| scalar]`,
    /// integers little-endian, group elements compressed.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(&SRS_MAGIC);
        out.extend_from_slice(&(self.max_degree() as u32).to_le_bytes());
        out.extend_from_slice(&(self.powers.len() as u32).to_le_bytes());
        for p in &self.powers {
            out.extend_from_slice(&p.to_bytes());
        }
        out.extend_from_slice(&self.g2.to_bytes());
        out.extend_from_slice(&self.g2_alpha.to_bytes());
        match &self.trapdoor {
            Some(a) => {
                out.push(1);
                out.extend_from_slice(&a.to_bytes());
            }
            None => out.push(0),
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = Reader::new(bytes);
        if r.take(4)? != SRS_MAGIC {
            return Err(Error::Decode("bad SRS magic".into()));
        }
        let max_degree = r.u32()? as usize;
        let count = r.u32()? as usize;
        if max_degree < 1 || count != max_degree + 1 {
            return Err(Error::Decode("SRS length does not match degree".into()));
        }
        let mut powers = Vec::with_capacity(count);
        for _ in 0..count {
            powers.push(r.element::<B::G1>()?);
        }
        if powers[0] != B::G1::generator() {
            return Err(Error::Decode("first SRS power is not the generator".into()));
        }
        let g2 = r.element::<B::G2>()?;
        let g2_alpha = r.element::<B::G2>()?;
        let trapdoor = match r.take(1)?[0] {
            0 => None,
            1 => Some(
                B::Scalar::from_bytes(r.take(B::Scalar::ENCODED_LEN)?)
                    .ok_or_else(|| Error::Decode("bad trapdoor scalar".into()))?,
            ),
            _ => return Err(Error::Decode("bad trapdoor flag".into())),
        };
        r.finish()?;
        Ok(Self {
            powers,
            g2,
            g2_alpha,
            trapdoor,
        })
    }
}

pub(crate) struct Reader<'a> {
    buf: &'a [u8],
}

impl<'a> Reader<'a> {
    pub(crate) fn new(buf: &'a [u8]) -> Self {
        Self { buf }
    }

    pub(crate) fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() < n {
            return Err(Error::Decode("unexpected end of input".into()));
        }
        let (head, tail) = self.buf.split_at(n);
        self.buf = tail;
        Ok(head)
    }

    pub(crate) fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    pub(crate) fn element<G: GroupElement>(&mut self) -> Result<G> {
        G::from_bytes(self.take(G::ENCODED_LEN)?)
            .ok_or_else(|| Error::Decode("invalid group element".into()))
    }

    pub(crate) fn scalar<F: Field>(&mut self) -> Result<F> {
        F::from_bytes(self.take(F::ENCODED_LEN)?)
            .ok_or_else(|| Error::Decode("non-canonical scalar".into()))
    }

    pub(crate) fn finish(self) -> Result<()> {
        if self.buf.is_empty() {
            Ok(())
        } else {
            Err(Error::Decode("trailing bytes".into()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Bls12Backend, Toy101, ToyGroup, ToyScalar};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type S = ToyScalar<101>;

    fn s(v: u64) -> S {
        S::new(v)
    }

    fn toy_srs(degree: usize) -> Srs<Toy101> {
        Srs::from_trapdoor(s(5), degree).unwrap()
    }

    #[test]
    fn setup_hand_example() {
        let logs: Vec<u64> = toy_srs(3).powers().iter().map(|p| p.log().value()).collect();
        // 5^3 = 125 = 24 mod 101
        assert_eq!(logs, vec![1, 5, 25, 24]);
    }

    #[test]
    fn setup_minimal_and_errors() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let srs = Srs::<Bls12Backend>::setup(1, &mut rng).unwrap();
        assert_eq!(srs.powers().len(), 2);
        assert_eq!(srs.trapdoor(), None);
        assert_eq!(Srs::<Bls12Backend>::setup(0, &mut rng), Err(Error::DegreeZero));
    }

    #[test]
    fn setup_is_seeded() {
        let a = Srs::<Bls12Backend>::setup(4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = Srs::<Bls12Backend>::setup(4, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn commit_examples() {
        let srs = toy_srs(3);
        let c = srs.commit(&Polynomial::from_u64s(&[2, 3])).unwrap();
        assert_eq!(c.0.log(), s(17));
        assert_eq!(srs.commit(&Polynomial::from_u64s(&[42])).unwrap().0.log(), s(42));
        assert_eq!(srs.commit(&Polynomial::zero()).unwrap().0, ToyGroup::from_log(s(0)));
        assert_eq!(
            srs.commit(&Polynomial::from_u64s(&[1, 1, 1, 1, 1])),
            Err(Error::DegreeTooLarge { degree: 4, max: 3 })
        );
    }

    #[test]
    fn open_examples() {
        let srs = toy_srs(3);
        let phi = Polynomial::from_u64s(&[2, 3, 9]);
        let c = srs.commit(&phi).unwrap();
        assert!(srs.open(&c, &phi));
        assert!(!srs.open(&c, &Polynomial::from_u64s(&[2, 4, 9])));
        assert!(srs.open(&Commitment(ToyGroup::from_log(s(0))), &Polynomial::zero()));
    }

    #[test]
    fn eval_and_verify_hand_example() {
        let srs = toy_srs(3);
        let phi = Polynomial::from_u64s(&[2, 3]);
        let proof = srs.eval(&phi, s(2)).unwrap();
        assert_eq!((proof.index, proof.value, proof.witness.log()), (s(2), s(8), s(3)));

        let c = Commitment(ToyGroup::from_log(s(17)));
        let w = ToyGroup::from_log(s(3));
        // 17 - 8 = 3 * (5 - 2)
        assert!(srs.verify_eval(&c, s(2), s(8), &w));
        assert!(!srs.verify_eval(&c, s(2), s(9), &w));
    }

    #[test]
    fn eval_of_constant_has_identity_witness() {
        let srs = toy_srs(2);
        let p = srs.eval(&Polynomial::from_u64s(&[7]), s(33)).unwrap();
        assert_eq!(p.value, s(7));
        assert_eq!(p.witness, ToyGroup::from_log(s(0)));
    }

    #[test]
    fn bls_round_trip_and_tamper() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let srs = Srs::<Bls12Backend>::setup(4, &mut rng).unwrap();
        let phi = Polynomial::new((0..5).map(|_| <bls12_381::Scalar as Field>::random(&mut rng)).collect());
        let c = srs.commit(&phi).unwrap();
        let i = <bls12_381::Scalar as Field>::random(&mut rng);
        let p = srs.eval(&phi, i).unwrap();
        assert!(srs.verify_eval(&c, i, p.value, &p.witness));
        assert!(!srs.verify_eval(&c, i, p.value + <bls12_381::Scalar as Field>::one(), &p.witness));
    }

    #[test]
    fn serialization_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let srs = Srs::<Bls12Backend>::setup(3, &mut rng).unwrap();
        let bytes = srs.to_bytes();
        assert_eq!(&bytes[..4], b"RKZ1");
        assert_eq!(bytes.len(), 4 + 4 + 4 + 4 * 48 + 2 * 96 + 1);
        assert_eq!(Srs::<Bls12Backend>::from_bytes(&bytes).unwrap(), srs);

        let toy = toy_srs(3);
        assert_eq!(Srs::<Toy101>::from_bytes(&toy.to_bytes()).unwrap(), toy);

        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(Srs::<Bls12Backend>::from_bytes(&bad).is_err());
        assert!(Srs::<Bls12Backend>::from_bytes(&bytes[..bytes.len() - 1]).is_err());
    }
}
