//! Domain-separated hash functions into the scalar field.

use std::collections::HashMap;

use sha2::{Digest, Sha256, Sha512};

use crate::algebra::Field;

const TAG_H1: &[u8] = b"rollup-da/H1/part-digest";
const TAG_H2: &[u8] = b"rollup-da/H2/challenge-binding";
const TAG_H3: &[u8] = b"rollup-da/H3/tx-hash";
const TAG_H4: &[u8] = b"rollup-da/H4/lucky-number";

/// `H1..H4`. Multi-input calls hash the plain concatenation of their inputs;
/// every input except the last has a fixed width, so the split is unique.
pub trait HashSuite<F: Field>: Clone + Send + Sync {
    /// Part digest `v_j`. `index` is the part's interpolation node and is
    /// only absorbed by suites configured for index binding.
    fn h1(&self, index: u32, part: &[u8]) -> F;
    /// Challenge binding `r = H2(c, part)`.
    fn h2(&self, challenge: &F, part: &[u8]) -> F;
    /// Transaction hash carried in proposals.
    fn h3(&self, tx: &[u8]) -> F;
    /// Raw lucky-number digest of a block header.
    fn h4(&self, header: &[u8]) -> [u8; 64] {
        tagged_sha512(TAG_H4, &[header])
    }
}

fn tagged_sha512(tag: &[u8], inputs: &[&[u8]]) -> [u8; 64] {
    let mut h = Sha512::new();
    h.update((tag.len() as u8).to_le_bytes());
    h.update(tag);
    for i in inputs {
        h.update(i);
    }
    h.finalize().into()
}

/// SHA-256 of the concatenated inputs, for headers and Merkle nodes.
pub fn sha256(inputs: &[&[u8]]) -> [u8; 32] {
    let mut h = Sha256::new();
    for i in inputs {
        h.update(i);
    }
    h.finalize().into()
}

/// SHA-512 with a per-function tag, reduced into the field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Sha512Suite {
    pub bind_index: bool,
}

impl Sha512Suite {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_index_binding() -> Self {
        Self { bind_index: true }
    }
}

impl<F: Field> HashSuite<F> for Sha512Suite {
    fn h1(&self, index: u32, part: &[u8]) -> F {
        let digest = if self.bind_index {
            tagged_sha512(TAG_H1, &[&index.to_le_bytes(), part])
        } else {
            tagged_sha512(TAG_H1, &[part])
        };
        F::from_uniform_bytes(&digest)
    }

    fn h2(&self, challenge: &F, part: &[u8]) -> F {
        F::from_uniform_bytes(&tagged_sha512(TAG_H2, &[&challenge.to_bytes(), part]))
    }

    fn h3(&self, tx: &[u8]) -> F {
        F::from_uniform_bytes(&tagged_sha512(TAG_H3, &[tx]))
    }
}

/// Test double: returns programmed values for chosen inputs and falls back
/// to [`Sha512Suite`] for everything else.
#[derive(Clone, Debug, Default)]
pub struct MockHashSuite<F: Field> {
    h1: HashMap<Vec<u8>, F>,
    h2: HashMap<(Vec<u8>, Vec<u8>), F>,
    fallback: Sha512Suite,
}

impl<F: Field> MockHashSuite<F> {
    pub fn new() -> Self {
        Self {
            h1: HashMap::new(),
            h2: HashMap::new(),
            fallback: Sha512Suite::new(),
        }
    }

    pub fn with_h1(mut self, part: &[u8], value: F) -> Self {
        self.h1.insert(part.to_vec(), value);
        self
    }

    pub fn with_h2(mut self, challenge: &F, part: &[u8], value: F) -> Self {
        self.h2.insert((challenge.to_bytes(), part.to_vec()), value);
        self
    }
}

impl<F: Field> HashSuite<F> for MockHashSuite<F> {
    fn h1(&self, index: u32, part: &[u8]) -> F {
        self.h1
            .get(part)
            .copied()
            .unwrap_or_else(|| self.fallback.h1(index, part))
    }

    fn h2(&self, challenge: &F, part: &[u8]) -> F {
        self.h2
            .get(&(challenge.to_bytes(), part.to_vec()))
            .copied()
            .unwrap_or_else(|| self.fallback.h2(challenge, part))
    }

    fn h3(&self, tx: &[u8]) -> F {
        self.fallback.h3(tx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ToyScalar;

    type Fb = bls12_381::Scalar;

    #[test]
    fn functions_are_domain_separated() {
        let suite = Sha512Suite::new();
        let x = b"same input";
        let a: Fb = suite.h1(0, x);
        let c: Fb = suite.h3(x);
        assert_ne!(a, c);
        assert_ne!(HashSuite::<Fb>::h4(&suite, x)[..32], tagged_sha512(TAG_H1, &[x])[..32]);
    }

    #[test]
    fn index_binding_is_opt_in() {
        let plain = Sha512Suite::new();
        let bound = Sha512Suite::with_index_binding();
        let (a, b): (Fb, Fb) = (plain.h1(0, b"p"), plain.h1(5, b"p"));
        assert_eq!(a, b);
        let (a, b): (Fb, Fb) = (bound.h1(0, b"p"), bound.h1(5, b"p"));
        assert_ne!(a, b);
    }

    #[test]
    fn h2_depends_on_challenge() {
        let suite = Sha512Suite::new();
        let (c1, c2) = (Fb::from(1u64), Fb::from(2u64));
        assert_ne!(suite.h2(&c1, b"part"), suite.h2(&c2, b"part"));
    }

    #[test]
    fn mock_overrides_selected_inputs() {
        type T = ToyScalar<101>;
        let c = T::new(4);
        let m = MockHashSuite::new().with_h1(b"a", T::new(2)).with_h2(&c, b"a", T::new(9));
        assert_eq!(m.h1(0, b"a"), T::new(2));
        assert_eq!(m.h2(&c, b"a"), T::new(9));
        assert_eq!(m.h1(0, b"b"), Sha512Suite::new().h1(0, b"b"));
    }
}
