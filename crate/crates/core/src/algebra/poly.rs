use super::field::Field;
use crate::error::{Error, Result};

/// Dense univariate polynomial, `coeffs[i]` is the coefficient of `x^i`.
///
/// Trailing zero coefficients are always trimmed, so the zero polynomial has
/// no coefficients and structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial<F: Field> {
    coeffs: Vec<F>,
}

impl<F: Field> Polynomial<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::new(vec![c])
    }

    pub fn from_u64s(coeffs: &[u64]) -> Self {
        Self::new(coeffs.iter().map(|&c| F::from_u64(c)).collect())
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Horner evaluation.
    pub fn eval(&self, x: F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, &c| acc * x + c)
    }

    /// Quotient of `(self(x) - self(point)) / (x - point)`.
    ///
    /// Synthetic division; the remainder it drops is exactly `self(point)`.
    pub fn div_linear(&self, point: F) -> Self {
        let n = self.coeffs.len();
        if n <= 1 {
            return Self::zero();
        }
        let mut quotient = vec![F::zero(); n - 1];
        let mut carry = F::zero();
        for i in (1..n).rev() {
            carry = self.coeffs[i] + carry * point;
            quotient[i - 1] = carry;
        }
        Self::new(quotient)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len)
            .map(|i| {
                let a = self.coeffs.get(i).copied().unwrap_or_else(F::zero);
                let b = other.coeffs.get(i).copied().unwrap_or_else(F::zero);
                a + b
            })
            .collect();
        Self::new(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j] + a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: F) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }
}

/// Lagrange interpolation through `points`, O(n^2).
///
/// Builds `M(x) = prod (x - x_i)` once and peels each basis numerator off it
/// with a synthetic division.
pub fn interpolate<F: Field>(points: &[(F, F)]) -> Result<Polynomial<F>> {
    if points.is_empty() {
        return Err(Error::EmptyPoints);
    }
    for (i, (xi, _)) in points.iter().enumerate() {
        if points[..i].iter().any(|(xj, _)| xj == xi) {
            return Err(Error::DuplicateX);
        }
    }

    let mut master = Polynomial::constant(F::one());
    for &(x, _) in points {
        master = master.mul(&Polynomial::new(vec![-x, F::one()]));
    }

    let mut acc = vec![F::zero(); points.len()];
    for (i, &(xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        // M(x) / (x - xi): M(xi) = 0, so div_linear is exact.
        let basis = master.div_linear(xi);
        let denom = points
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(F::one(), |d, (_, &(xj, _))| d * (xi - xj));
        let scale = yi * denom.inverse().ok_or(Error::DuplicateX)?;
        for (slot, &c) in acc.iter_mut().zip(basis.coeffs()) {
            *slot = *slot + c * scale;
        }
    }
    Ok(Polynomial::new(acc))
}

/// Interpolates `values[j]` at the nodes `x = 0, 1, .., values.len()-1`.
pub fn interpolate_at_nodes<F: Field>(values: &[F]) -> Result<Polynomial<F>> {
    let points: Vec<(F, F)> = values
        .iter()
        .enumerate()
        .map(|(j, &v)| (F::from_u64(j as u64), v))
        .collect();
    interpolate(&points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::field::ToyScalar;
    use proptest::prelude::*;

    type F = ToyScalar<101>;
    type Fb = bls12_381::Scalar;

    fn f(v: u64) -> F {
        F::new(v)
    }

    #[test]
    fn interpolate_single_point_is_constant() {
        let p = interpolate(&[(f(0), f(2))]).unwrap();
        assert_eq!(p, Polynomial::from_u64s(&[2]));
    }

    #[test]
    fn interpolate_two_points_hand_example() {
        let p = interpolate(&[(f(0), f(2)), (f(1), f(5))]).unwrap();
        assert_eq!(p.coeffs(), &[f(2), f(3)]);
        assert_eq!(p.eval(f(0)), f(2));
        assert_eq!(p.eval(f(1)), f(5));
    }

    #[test]
    fn interpolate_three_nodes() {
        for (v0, v1, v2) in [(7, 99, 3), (0, 0, 0), (100, 1, 50)] {
            let p = interpolate_at_nodes(&[f(v0), f(v1), f(v2)]).unwrap();
            assert!(p.degree().map_or(true, |d| d <= 2));
            assert_eq!(p.eval(f(0)), f(v0));
            assert_eq!(p.eval(f(1)), f(v1));
            assert_eq!(p.eval(f(2)), f(v2));
        }
    }

    #[test]
    fn interpolate_errors() {
        assert_eq!(interpolate::<F>(&[]), Err(Error::EmptyPoints));
        assert_eq!(
            interpolate(&[(f(3), f(1)), (f(104), f(2))]),
            Err(Error::DuplicateX)
        );
    }

    #[test]
    fn eval_examples() {
        let p = Polynomial::from_u64s(&[2, 3]);
        assert_eq!(p.eval(f(0)), f(2));
        assert_eq!(p.eval(f(2)), f(8));
        assert_eq!(Polynomial::<F>::zero().eval(f(42)), f(0));
    }

    #[test]
    fn div_linear_hand_example() {
        // 3x + 2 = 3(x - 2) + 8
        let q = Polynomial::from_u64s(&[2, 3]).div_linear(f(2));
        assert_eq!(q, Polynomial::from_u64s(&[3]));
        assert!(Polynomial::from_u64s(&[77]).div_linear(f(5)).is_zero());
    }

    #[test]
    fn canonical_form_trims() {
        let p = Polynomial::<F>::from_u64s(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(p, Polynomial::from_u64s(&[1, 2]));
        assert_eq!(Polynomial::<F>::from_u64s(&[0, 0]), Polynomial::zero());
        assert_eq!(Polynomial::<F>::zero().degree(), None);
    }

    fn arb_bls() -> impl Strategy<Value = Fb> {
        any::<[u8; 32]>().prop_map(|b| {
            let mut wide = [0u8; 64];
            wide[..32].copy_from_slice(&b);
            <Fb as Field>::from_uniform_bytes(&wide)
        })
    }

    proptest! {
        // q(x)(x - i) + phi(i) == phi(x), checked through an independent
        // multiply-and-add.
        #[test]
        fn div_linear_recomposes(coeffs in prop::collection::vec(arb_bls(), 0..9), point in arb_bls()) {
            let phi = Polynomial::new(coeffs);
            let q = phi.div_linear(point);
            let linear = Polynomial::new(vec![-point, <Fb as Field>::one()]);
            let back = q.mul(&linear).add(&Polynomial::constant(phi.eval(point)));
            prop_assert_eq!(back, phi.clone());
            if let Some(d) = phi.degree() {
                if d >= 1 {
                    prop_assert_eq!(q.degree(), Some(d - 1));
                }
            }
        }

        #[test]
        fn interpolate_hits_every_node(ys in prop::collection::vec(arb_bls(), 1..12)) {
            let p = interpolate_at_nodes(&ys).unwrap();
            prop_assert!(p.degree().map_or(true, |d| d < ys.len()));
            for (j, y) in ys.iter().enumerate() {
                prop_assert_eq!(p.eval(<Fb as Field>::from_u64(j as u64)), *y);
            }
        }

        #[test]
        fn toy_degree_five_recomposes(c in prop::collection::vec(0u64..101, 6), i in 0u64..101) {
            let phi = Polynomial::<F>::from_u64s(&c);
            let q = phi.div_linear(f(i));
            let back = q.mul(&Polynomial::from_u64s(&[101 - i, 1])).add(&Polynomial::constant(phi.eval(f(i))));
            prop_assert_eq!(back, phi);
        }
    }
}
