use rand::seq::index::sample;

use super::{check_grid, check_trials, count_successes, std_error, ResultTable, Value};
use crate::sim::Strategy;
use crate::{Error, Result};

/// History length a challenged builder is assumed to hold.
pub const STORED_BATCHES: usize = 10_000;

const PUBLISHED_S: [usize; 4] = [6, 10, 30, 50];
const PUBLISHED_PERCENT: [u32; 6] = [5, 10, 15, 20, 25, 30];
const PUBLISHED_DETECT: [[f64; 6]; 4] = [
    [23.2, 41.3, 57.1, 68.6, 77.6, 83.7],
    [37.7, 67.6, 81.6, 88.2, 94.8, 97.5],
    [77.2, 96.1, 98.9, 99.9, 100.0, 100.0],
    [94.4, 99.5, 100.0, 100.0, 100.0, 100.0],
];

/// Published detection probability for a grid cell, as a fraction.
pub fn published_detect(s: usize, p: f64) -> Option<f64> {
    let row = PUBLISHED_S.iter().position(|&v| v == s)?;
    let pct = p * 100.0;
    let col = PUBLISHED_PERCENT
        .iter()
        .position(|&v| (v as f64 - pct).abs() < 1e-9)?;
    Some(PUBLISHED_DETECT[row][col] / 100.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectParams {
    pub s: Vec<usize>,
    pub p: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
}

impl Default for DetectParams {
    fn default() -> Self {
        Self {
            s: PUBLISHED_S.to_vec(),
            p: PUBLISHED_PERCENT.iter().map(|&v| v as f64 / 100.0).collect(),
            trials: 2000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DetectRow {
    pub s: usize,
    pub p: f64,
    pub trials: u64,
    pub detected: u64,
    pub estimate: f64,
    pub oracle: f64,
    pub std_error: f64,
    pub published: Option<f64>,
}

impl DetectRow {
    pub fn abs_diff(&self) -> f64 {
        (self.estimate - self.oracle).abs()
    }

    pub fn published_diff(&self) -> Option<f64> {
        self.published.map(|v| (self.estimate - v).abs())
    }
}

/// One trial: a `DeleteFraction(p)` builder is challenged on `s` distinct
/// batches out of its history; detection is any challenged part missing.
/// Retention of a batch is drawn the first time it is challenged, which has
/// the same law as drawing the whole history up front.
pub fn exp_detect(params: &DetectParams) -> Result<(Vec<DetectRow>, ResultTable)> {
    check_grid("s", params.s.len())?;
    check_grid("p", params.p.len())?;
    check_trials(params.trials)?;
    for &s in &params.s {
        if s == 0 || s > STORED_BATCHES {
            return Err(Error::Config(format!("s = {s} outside 1..={STORED_BATCHES}")));
        }
    }
    for &p in &params.p {
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::Config(format!("p = {p} outside (0, 1]")));
        }
    }

    let mut rows = Vec::new();
    for (si, &s) in params.s.iter().enumerate() {
        for (pi, &p) in params.p.iter().enumerate() {
            let cell = (si * params.p.len() + pi) as u64;
            let strategy = Strategy::DeleteFraction { p };
            let detected = count_successes(params.seed, cell, params.trials, |rng| {
                let picks = sample(rng, STORED_BATCHES, s);
                picks.iter().any(|_| !strategy.keeps(rng))
            });
            let oracle = 1.0 - (1.0 - p).powi(s as i32);
            rows.push(DetectRow {
                s,
                p,
                trials: params.trials,
                detected,
                estimate: detected as f64 / params.trials as f64,
                oracle,
                std_error: std_error(oracle, params.trials),
                published: published_detect(s, p),
            });
        }
    }

    let mut table = ResultTable::new(&[
        "s", "p", "trials", "estimate", "oracle", "abs_diff", "std_error", "published", "published_diff",
    ]);
    for r in &rows {
        table.push(vec![
            r.s.into(),
            r.p.into(),
            r.trials.into(),
            r.estimate.into(),
            r.oracle.into(),
            r.abs_diff().into(),
            r.std_error.into(),
            Value::from(r.published),
            Value::from(r.published_diff()),
        ]);
    }
    Ok((rows, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_cells() {
        let close = |v: Option<f64>, want: f64| (v.unwrap() - want).abs() < 1e-12;
        assert!(close(published_detect(10, 0.30), 0.975));
        assert!(close(published_detect(30, 0.25), 1.0));
        assert!(close(published_detect(6, 0.05), 0.232));
        assert_eq!(published_detect(7, 0.05), None);
        assert_eq!(published_detect(6, 0.07), None);
    }

    #[test]
    fn oracle_examples() {
        let params = DetectParams {
            s: vec![30, 10, 1],
            p: vec![0.25, 0.30, 1.0],
            trials: 10,
            seed: 1,
        };
        let (rows, _) = exp_detect(&params).unwrap();
        let get = |s, p: f64| rows.iter().find(|r| r.s == s && r.p == p).unwrap();
        assert!((get(30, 0.25).oracle - 0.99982).abs() < 5e-6);
        assert!((get(10, 0.30).oracle - 0.97175).abs() < 5e-6);
        assert_eq!(get(1, 1.0).oracle, 1.0);
        assert_eq!(get(1, 1.0).detected, 10);
    }

    #[test]
    fn small_grid_matches_oracle() {
        let params = DetectParams {
            s: vec![1, 6],
            p: vec![0.1, 0.5],
            trials: 4000,
            seed: 9,
        };
        let (rows, table) = exp_detect(&params).unwrap();
        assert_eq!(table.rows.len(), 4);
        for r in rows {
            assert!(super::super::within_three_sigma(r.estimate, r.oracle, r.trials), "{r:?}");
        }
    }

    #[test]
    fn rejects_bad_grids() {
        let bad = |f: fn(&mut DetectParams)| {
            let mut p = DetectParams::default();
            f(&mut p);
            exp_detect(&p).is_err()
        };
        assert!(bad(|p| p.s.clear()));
        assert!(bad(|p| p.p = vec![0.0]));
        assert!(bad(|p| p.s = vec![0]));
        assert!(bad(|p| p.trials = 0));
    }
}
