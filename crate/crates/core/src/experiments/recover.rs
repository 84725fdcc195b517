use rand::Rng;

use super::{check_grid, check_trials, count_successes, std_error, ResultTable};
use crate::{Error, Result};

/// Chance that `n` builders, each alive with probability `1 - f` and holding
/// one uniform part out of `k`, cover all parts (inclusion-exclusion).
pub fn recovery_oracle(n: usize, k: usize, f: f64) -> f64 {
    let alive = 1.0 - f;
    let mut binom = 1.0;
    let mut total = 0.0;
    for i in 0..=k {
        if i > 0 {
            binom = binom * (k - i + 1) as f64 / i as f64;
        }
        let miss = (1.0 - i as f64 * alive / k as f64).max(0.0);
        let term = binom * miss.powi(n as i32);
        total += if i % 2 == 0 { term } else { -term };
    }
    total.clamp(0.0, 1.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoverParams {
    pub n: Vec<usize>,
    pub k: Vec<usize>,
    pub f: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
}

impl Default for RecoverParams {
    fn default() -> Self {
        Self {
            n: vec![10, 50, 100],
            k: vec![2, 5, 10],
            f: vec![0.0, 0.25, 0.5],
            trials: 2000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoverRow {
    pub n: usize,
    pub k: usize,
    pub f: f64,
    pub trials: u64,
    pub recovered: u64,
    pub estimate: f64,
    pub oracle: f64,
    pub std_error: f64,
}

pub fn exp_recover(params: &RecoverParams) -> Result<(Vec<RecoverRow>, ResultTable)> {
    check_grid("n", params.n.len())?;
    check_grid("k", params.k.len())?;
    check_grid("f", params.f.len())?;
    check_trials(params.trials)?;
    for &f in &params.f {
        if !(0.0..1.0).contains(&f) {
            return Err(Error::Config(format!("f = {f} outside [0, 1)")));
        }
    }
    for &k in &params.k {
        if k == 0 {
            return Err(Error::Config("k must be at least 1".into()));
        }
        if let Some(&n) = params.n.iter().find(|&&n| n < k) {
            return Err(Error::Config(format!("n = {n} is below k = {k}")));
        }
    }

    let mut rows = Vec::new();
    let mut cell = 0u64;
    for &n in &params.n {
        for &k in &params.k {
            for &f in &params.f {
                let recovered = count_successes(params.seed, cell, params.trials, |rng| {
                    let mut held = vec![false; k];
                    let mut covered = 0;
                    for _ in 0..n {
                        let alive = !rng.gen_bool(f);
                        let part = rng.gen_range(0..k);
                        if alive && !held[part] {
                            held[part] = true;
                            covered += 1;
                        }
                    }
                    covered == k
                });
                cell += 1;
                let oracle = recovery_oracle(n, k, f);
                rows.push(RecoverRow {
                    n,
                    k,
                    f,
                    trials: params.trials,
                    recovered,
                    estimate: recovered as f64 / params.trials as f64,
                    oracle,
                    std_error: std_error(oracle, params.trials),
                });
            }
        }
    }

    let mut table = ResultTable::new(&["n", "k", "f", "trials", "estimate", "oracle", "abs_diff", "std_error"]);
    for r in &rows {
        table.push(vec![
            r.n.into(),
            r.k.into(),
            r.f.into(),
            r.trials.into(),
            r.estimate.into(),
            r.oracle.into(),
            (r.estimate - r.oracle).abs().into(),
            r.std_error.into(),
        ]);
    }
    Ok((rows, table))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Markov chain on the number of distinct parts covered.
    fn chain_oracle(n: usize, k: usize, f: f64) -> f64 {
        let mut dist = vec![0.0; k + 1];
        dist[0] = 1.0;
        for _ in 0..n {
            let mut next = vec![0.0; k + 1];
            for (c, &mass) in dist.iter().enumerate() {
                let new_part = (1.0 - f) * (k - c) as f64 / k as f64;
                next[c] += mass * (1.0 - new_part);
                if c < k {
                    next[c + 1] += mass * new_part;
                }
            }
            dist = next;
        }
        dist[k]
    }

    #[test]
    fn exhaustive_two_by_two() {
        // (0,0) (0,1) (1,0) (1,1): two of four assignments cover both parts
        assert_eq!(recovery_oracle(2, 2, 0.0), 0.5);
    }

    #[test]
    fn published_claims() {
        let v = recovery_oracle(50, 5, 0.0);
        // 1 - 5 (4/5)^50 + 10 (3/5)^50 - ...
        assert!(v > 0.9999 && (v - 0.999929).abs() < 1e-6, "{v}");
        let v = recovery_oracle(100, 5, 0.5);
        assert!(v > 0.999 && (v - 0.99987).abs() < 1e-5, "{v}");
    }

    #[test]
    fn mc_n2_k2() {
        let params = RecoverParams {
            n: vec![2],
            k: vec![2],
            f: vec![0.0],
            trials: 5000,
            seed: 4,
        };
        let (rows, _) = exp_recover(&params).unwrap();
        assert!(super::super::within_three_sigma(rows[0].estimate, 0.5, 5000));
    }

    #[test]
    fn rejects_n_below_k() {
        let params = RecoverParams {
            n: vec![3],
            k: vec![5],
            ..Default::default()
        };
        assert!(exp_recover(&params).is_err());
    }

    proptest! {
        #[test]
        fn inclusion_exclusion_matches_chain(n in 1usize..120, k in 1usize..9, f in 0.0f64..0.95) {
            let a = recovery_oracle(n, k, f);
            let b = chain_oracle(n, k, f);
            prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
        }

        #[test]
        fn oracle_monotone(n in 1usize..100, k in 1usize..8, f in 0.0f64..0.9) {
            let base = recovery_oracle(n, k, f);
            prop_assert!(recovery_oracle(n + 1, k, f) >= base - 1e-12);
            prop_assert!(recovery_oracle(n, k + 1, f) <= base + 1e-12);
            prop_assert!(recovery_oracle(n, k, f + 0.05) <= base + 1e-12);
        }
    }
}
