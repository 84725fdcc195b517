//! Exact 256-bit difficulty targets `floor(b * 2^256 / (1 + e^x))`.
//!
//! `e^|x|` is bracketed by a fixed-point interval (Taylor series on
//! `|x| / 2^s`, then `s` squarings). When the floors of both ends agree the
//! result is exact; otherwise precision doubles and the bracket is redone.

use std::cmp::Ordering;

use num_bigint::BigUint;

/// A threshold in `[0, 2^256]`. `2^256` itself does not fit in 32 bytes and
/// is carried as a flag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Target {
    bytes: [u8; 32],
    full: bool,
}

impl Target {
    pub const ZERO: Target = Target {
        bytes: [0; 32],
        full: false,
    };
    pub const FULL: Target = Target {
        bytes: [0; 32],
        full: true,
    };

    /// `2^k` for `k <= 256`.
    pub fn pow2(k: u32) -> Target {
        assert!(k <= 256, "target exponent {k} exceeds 256");
        if k == 256 {
            return Target::FULL;
        }
        let mut bytes = [0u8; 32];
        bytes[31 - (k / 8) as usize] = 1 << (k % 8);
        Target { bytes, full: false }
    }

    /// Saturates at `2^256`.
    pub fn from_biguint(v: &BigUint) -> Target {
        if v.bits() > 256 {
            return Target::FULL;
        }
        let raw = v.to_bytes_be();
        let mut bytes = [0u8; 32];
        bytes[32 - raw.len()..].copy_from_slice(&raw);
        Target { bytes, full: false }
    }

    pub fn to_biguint(&self) -> BigUint {
        if self.full {
            BigUint::from(1u8) << 256
        } else {
            BigUint::from_bytes_be(&self.bytes)
        }
    }

    pub fn is_zero(&self) -> bool {
        !self.full && self.bytes == [0; 32]
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    /// Big-endian value when below `2^256`.
    pub fn as_bytes(&self) -> Option<&[u8; 32]> {
        (!self.full).then_some(&self.bytes)
    }

    /// Whether a 256-bit big-endian digest lies strictly below the target.
    pub fn admits(&self, digest: &[u8; 32]) -> bool {
        self.full || digest.as_slice().cmp(self.bytes.as_slice()) == Ordering::Less
    }

    /// `target / 2^256`, the chance that a uniform digest is admitted.
    pub fn probability(&self) -> f64 {
        if self.full {
            return 1.0;
        }
        self.bytes
            .iter()
            .fold(0.0f64, |acc, &b| acc * 256.0 + b as f64)
            / 2f64.powi(256)
    }
}

impl PartialOrd for Target {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Target {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.full, self.bytes).cmp(&(other.full, other.bytes))
    }
}

/// A finite positive `f64` as `mantissa * 2^exp`.
fn decompose(x: f64) -> (u64, i64) {
    debug_assert!(x.is_finite() && x > 0.0);
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    if exp == 0 {
        (frac, -1074)
    } else {
        (frac | (1u64 << 52), exp - 1075)
    }
}

/// `mant * 2^exp * 2^shift`, rounded down and up.
fn scaled_bounds(mant: u64, exp: i64, shift: i64) -> (BigUint, BigUint) {
    let e = exp + shift;
    let m = BigUint::from(mant);
    if e >= 0 {
        let v = m << e as u64;
        (v.clone(), v)
    } else {
        let lo = &m >> (-e) as u64;
        let exact = (&lo << (-e) as u64) == m;
        let hi = if exact { lo.clone() } else { &lo + 1u32 };
        (lo, hi)
    }
}

fn ceil_shr(v: &BigUint, s: u64) -> BigUint {
    let q = v >> s;
    if (&q << s) == *v {
        q
    } else {
        q + 1u32
    }
}

/// Interval `[lo, hi]` containing `e^t * 2^p` for `0 <= t`, where
/// `t = mant * 2^exp`.
fn exp_bracket(mant: u64, exp: i64, p: u64) -> (BigUint, BigUint) {
    // Halve t until it is below 1/2.
    let top = 64 - mant.leading_zeros() as i64 + exp;
    let squarings = (top + 1).max(0) as u64;
    let (t_lo, t_hi) = scaled_bounds(mant, exp - squarings as i64, p as i64);
    let one = BigUint::from(1u8) << p;

    let mut sum_lo = one.clone();
    let mut sum_hi = one.clone();
    let mut term_lo = one.clone();
    let mut term_hi = one.clone();
    let mut n = 1u64;
    loop {
        term_lo = (&term_lo * &t_lo >> p) / n;
        term_hi = ceil_shr(&(&term_hi * &t_hi), p);
        term_hi = (&term_hi + (n - 1)) / n;
        sum_lo += &term_lo;
        sum_hi += &term_hi;
        n += 1;
        if term_hi <= BigUint::from(1u8) {
            // remaining tail is below twice the next term since t < 1/2
            sum_hi += 2u32;
            break;
        }
    }

    for _ in 0..squarings {
        sum_lo = &sum_lo * &sum_lo >> p;
        sum_hi = ceil_shr(&(&sum_hi * &sum_hi), p);
    }
    (sum_lo, sum_hi)
}

/// `floor(b * 2^256 / (1 + e^x))`.
pub fn sigmoid_target(b: f64, x: f64) -> Target {
    assert!(b > 0.0 && b <= 1.0, "scale {b} outside (0, 1]");
    assert!(!x.is_nan(), "exponent is NaN");
    // b <= 1 and e^178 > 2^256, so the quotient is below one.
    if x >= 178.0 {
        return Target::ZERO;
    }
    let (b_mant, b_exp) = decompose(b);
    let b_num = BigUint::from(b_mant);
    // b * 2^256 = b_num * 2^(256 + b_exp); the exponent is >= 0 for b >= 2^-203.
    let scale_exp = 256 + b_exp;

    let scaled_b = |extra: u64| -> BigUint {
        let e = scale_exp + extra as i64;
        assert!(e >= 0, "scale {b} too small for exact targets");
        &b_num << e as u64
    };

    if x <= -800.0 {
        // e^x < 2^-1150 so the quotient sits strictly between
        // b*2^256 - 1 and b*2^256.
        let full = scaled_bounds(b_mant, b_exp, 256);
        let ceil = full.1;
        return Target::from_biguint(&(ceil - 1u32));
    }
    if x == 0.0 {
        return Target::from_biguint(&(scaled_b(0) >> 1u32));
    }

    let (mant, exp) = decompose(x.abs());
    let mut p = 384u64;
    loop {
        let (e_lo, e_hi) = exp_bracket(mant, exp, p);
        let one = BigUint::from(1u8) << p;
        let (t_lo, t_hi) = if x > 0.0 {
            // b 2^256 2^p / (2^p + E)
            let num = scaled_b(p);
            (&num / (&one + &e_hi), &num / (&one + &e_lo))
        } else {
            // b 2^256 E / (2^p + E), increasing in E
            let base = scaled_b(0);
            (
                &base * &e_lo / (&one + &e_lo),
                &base * &e_hi / (&one + &e_hi),
            )
        };
        if t_lo == t_hi {
            return Target::from_biguint(&t_lo);
        }
        p *= 2;
    }
}
