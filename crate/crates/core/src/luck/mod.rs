//! Proof of luck: the lucky number, the sigmoid difficulty and nonce search.

mod target;

pub use target::{sigmoid_target, Target};

use rand::RngCore;

use crate::algebra::Field;
use crate::hash::{sha256, HashSuite};

/// A registered proposer: a stable handle plus a position on the ID ring.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ProposerId {
    pub handle: u32,
    pub position: f64,
}

/// `H4(header)` mapped into `[0, ring)` using the top 53 bits of the digest.
pub fn lucky_number<F: Field, H: HashSuite<F>>(hash: &H, header: &[u8], ring: f64) -> f64 {
    let digest = hash.h4(header);
    let top = u64::from_be_bytes(digest[..8].try_into().unwrap()) >> 11;
    let unit = top as f64 / (1u64 << 53) as f64;
    (unit * ring).min(ring.next_down())
}

/// Circular distance on a ring of circumference `ring`.
pub fn distance(x: f64, y: f64, ring: f64) -> f64 {
    let d = (x - y).abs() % ring;
    d.min(ring - d)
}

#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DifficultyParams {
    pub a: f64,
    pub b: f64,
}

impl DifficultyParams {
    pub fn new(a: f64, b: f64) -> Self {
        assert!(a > 0.0, "a must be positive");
        assert!(b > 0.0 && b <= 1.0, "b must lie in (0, 1]");
        Self { a, b }
    }

    fn exponent(&self, d: f64) -> f64 {
        10.0 * d - self.a
    }

    /// `floor(b * 2^256 / (1 + e^(10 d - a)))`.
    pub fn difficulty(&self, d: f64) -> Target {
        sigmoid_target(self.b, self.exponent(d))
    }

    /// `ln(b) + 256 ln 2 - softplus(10 d - a)`, the log of the unfloored target.
    pub fn log_difficulty(&self, d: f64) -> f64 {
        self.b.ln() + 256.0 * std::f64::consts::LN_2 - softplus(self.exponent(d))
    }

    /// `ln(D(d_h) / D(d_m))` of the unfloored targets.
    pub fn log_difficulty_ratio(&self, d_honest: f64, d_malicious: f64) -> f64 {
        softplus(self.exponent(d_malicious)) - softplus(self.exponent(d_honest))
    }

    /// Honest over malicious difficulty, infinite when the malicious target
    /// floors to zero.
    pub fn difficulty_ratio(&self, d_honest: f64, d_malicious: f64) -> Ratio {
        if self.difficulty(d_malicious).is_zero() {
            Ratio::Infinite
        } else {
            Ratio::Finite(self.log_difficulty_ratio(d_honest, d_malicious).exp())
        }
    }
}

/// `ln(1 + e^x)` without overflow.
pub fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Ratio {
    Finite(f64),
    Infinite,
}

impl Ratio {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Ratio::Infinite)
    }

    pub fn value(&self) -> f64 {
        match self {
            Ratio::Finite(v) => *v,
            Ratio::Infinite => f64::INFINITY,
        }
    }
}

pub type Nonce = [u8; 32];

/// `SHA-256(header || nonce)` read big-endian is below the target.
pub fn check_nonce(header: &[u8], nonce: &Nonce, target: &Target) -> bool {
    target.admits(&sha256(&[header, nonce]))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NonceSearch {
    pub nonce: Option<Nonce>,
    pub attempts: u64,
}

fn increment(n: &mut Nonce) {
    for byte in n.iter_mut().rev() {
        let (v, carry) = byte.overflowing_add(1);
        *byte = v;
        if !carry {
            return;
        }
    }
}

/// Tries consecutive nonces from a random start.
pub fn search_nonce<R: RngCore + ?Sized>(
    header: &[u8],
    target: &Target,
    max_attempts: u64,
    rng: &mut R,
) -> NonceSearch {
    assert!(max_attempts >= 1, "need at least one attempt");
    let mut nonce = [0u8; 32];
    rng.fill_bytes(&mut nonce);
    if target.is_zero() {
        return NonceSearch {
            nonce: None,
            attempts: max_attempts,
        };
    }
    for attempt in 1..=max_attempts {
        if check_nonce(header, &nonce, target) {
            return NonceSearch {
                nonce: Some(nonce),
                attempts: attempt,
            };
        }
        increment(&mut nonce);
    }
    NonceSearch {
        nonce: None,
        attempts: max_attempts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hash::Sha512Suite;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Fb = bls12_381::Scalar;

    fn luck(header: &[u8], ring: f64) -> f64 {
        lucky_number::<Fb, _>(&Sha512Suite::new(), header, ring)
    }

    #[test]
    fn lucky_number_basics() {
        assert_eq!(luck(b"header", 1000.0), luck(b"header", 1000.0));
        let l = luck(b"x", 1.0);
        assert!((0.0..1.0).contains(&l));
    }

    #[test]
    fn lucky_number_is_uniform() {
        // Kolmogorov-Smirnov at alpha = 0.01: D < 1.628 / sqrt(n)
        let n = 10_000;
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let mut xs: Vec<f64> = (0..n)
            .map(|_| {
                let h: [u8; 32] = rng.gen();
                luck(&h, 50.0) / 50.0
            })
            .collect();
        xs.sort_by(f64::total_cmp);
        let d = xs
            .iter()
            .enumerate()
            .map(|(i, &x)| ((i + 1) as f64 / n as f64 - x).max(x - i as f64 / n as f64))
            .fold(0.0, f64::max);
        assert!(d < 1.628 / (n as f64).sqrt(), "KS statistic {d}");
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(3.0, 3.0, 10.0), 0.0);
        assert_eq!(distance(1.0, 9.0, 10.0), 2.0);
        assert_eq!(distance(9.0, 1.0, 10.0), 2.0);
        assert_eq!(distance(0.0, 5.0, 10.0), 5.0);
    }

    #[test]
    fn difficulty_limits_and_example() {
        let near_one = DifficultyParams::new(500.0, 1.0).difficulty(0.0);
        assert_eq!(near_one.to_biguint(), (num_bigint::BigUint::from(1u8) << 256) - 1u32);
        let p = DifficultyParams::new(1.5, 1.0);
        let expected = (1.0 + 8.5f64.exp()) / (1.0 + (-0.5f64).exp());
        let exact = p.difficulty(0.1).probability() / p.difficulty(1.0).probability();
        assert!((exact / expected - 1.0).abs() < 1e-12);
        assert!((expected - 3.06e3).abs() < 0.01e3);
        assert!(p.difficulty(30.0).is_zero());
    }

    #[test]
    fn ratio_examples() {
        let p = DifficultyParams::new(1.5, 1.0);
        assert_eq!(p.difficulty_ratio(0.4, 0.4), Ratio::Finite(1.0));
        let r = p.difficulty_ratio(0.1, 1.0).value();
        let expected = (1.0 + 8.5f64.exp()) / (1.0 + (-0.5f64).exp());
        assert!((r / expected - 1.0).abs() < 1e-12);
        assert!(p.difficulty_ratio(0.1, 20.0).is_infinite());
        // deep tail: both exponents far above zero
        let tail = p.log_difficulty_ratio(3.0, 7.5);
        assert!((tail / 45.0 - 1.0).abs() < 1e-6);
    }

    #[test]
    fn check_nonce_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let r: Nonce = rng.gen();
            assert!(check_nonce(b"hdr", &r, &Target::FULL));
            assert!(!check_nonce(b"hdr", &r, &Target::ZERO));
        }
    }

    #[test]
    fn check_nonce_frequency_within_three_sigma() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 10_000u32;
        for k in [255, 252, 248] {
            let t = Target::pow2(k);
            let hits = (0..n)
                .filter(|_| check_nonce(b"batch header", &rng.gen::<Nonce>(), &t))
                .count() as f64;
            let p = t.probability();
            let sigma = (n as f64 * p * (1.0 - p)).sqrt();
            assert!((hits - n as f64 * p).abs() <= 3.0 * sigma + 0.5, "k={k}: {hits}");
        }
    }

    #[test]
    fn search_nonce_edges() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = search_nonce(b"h", &Target::FULL, 10, &mut rng);
        assert_eq!(s.attempts, 1);
        assert!(s.nonce.is_some());
        let s = search_nonce(b"h", &Target::ZERO, 10, &mut rng);
        assert_eq!(s, NonceSearch { nonce: None, attempts: 10 });
        let found = search_nonce(b"h", &Target::pow2(250), 1 << 12, &mut rng).nonce.unwrap();
        assert!(check_nonce(b"h", &found, &Target::pow2(250)));
    }

    #[test]
    fn search_nonce_mean_attempts() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let t = Target::pow2(252);
        let total: u64 = (0..200)
            .map(|i| {
                let header = format!("header {i}");
                search_nonce(header.as_bytes(), &t, 10_000, &mut rng).attempts
            })
            .sum();
        let mean = total as f64 / 200.0;
        assert!((12.0..=21.0).contains(&mean), "mean {mean}");
    }

    #[test]
    fn increment_carries() {
        let mut n = [0xffu8; 32];
        n[0] = 0;
        increment(&mut n);
        assert_eq!(n[0], 1);
        assert!(n[1..].iter().all(|&b| b == 0));
    }

    proptest! {
        #[test]
        fn difficulty_is_monotone(a in 0.5f64..20.0, d in 0.0f64..30.0, step in 0.0f64..2.0) {
            let p = DifficultyParams::new(a, 1.0);
            prop_assert!(p.difficulty(d) >= p.difficulty(d + step));
        }

        #[test]
        fn log_ratio_is_additive(a in 0.5f64..20.0, x in 0.0f64..10.0, y in 0.0f64..10.0, z in 0.0f64..10.0) {
            let p = DifficultyParams::new(a, 1.0);
            let lhs = p.log_difficulty_ratio(x, y) + p.log_difficulty_ratio(y, z);
            let rhs = p.log_difficulty_ratio(x, z);
            prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
        }

        #[test]
        fn closest_proposal_has_largest_target(ps in prop::collection::vec(0.0f64..100.0, 1..20), l in 0.0f64..100.0, a in 1.0f64..15.0) {
            let p = DifficultyParams::new(a, 1.0);
            let dists: Vec<f64> = ps.iter().map(|&x| distance(x, l, 100.0)).collect();
            let best = dists.iter().copied().fold(f64::INFINITY, f64::min);
            let best_target = p.difficulty(best);
            prop_assert!(dists.iter().all(|&d| p.difficulty(d) <= best_target));
        }

        #[test]
        fn distance_symmetric_and_bounded(x in 0.0f64..10.0, y in 0.0f64..10.0) {
            prop_assert_eq!(distance(x, y, 10.0), distance(y, x, 10.0));
            prop_assert!(distance(x, y, 10.0) <= 5.0);
        }
    }
}
