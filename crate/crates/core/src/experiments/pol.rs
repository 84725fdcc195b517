use rand::Rng;
use rayon::prelude::*;

use super::{check_grid, check_trials, trial_rng, ResultTable, Value};
use crate::luck::{distance, DifficultyParams, Ratio};
use crate::{Error, Result};

/// A published cell of the difficulty-ratio table.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PublishedCell {
    Infinite,
    AboutOne,
    Value(f64),
}

impl PublishedCell {
    pub fn label(&self) -> String {
        match self {
            PublishedCell::Infinite => "INF".into(),
            PublishedCell::AboutOne => "~1".into(),
            PublishedCell::Value(v) => super::format_sig(*v),
        }
    }
}

const PUBLISHED_A: [f64; 4] = [1.5, 2.5, 5.5, 10.5];
const PUBLISHED_PERCENT: [u32; 7] = [1, 2, 3, 5, 10, 20, 30];

pub fn published_pol(a: f64, fraction: f64) -> Option<PublishedCell> {
    use PublishedCell::{AboutOne as One, Infinite as Inf, Value as V};
    const TABLE: [[PublishedCell; 7]; 4] = [
        [Inf, Inf, V(4.1e65), V(6.9e36), V(1.5e15), V(1.8e4), V(5.1)],
        [Inf, Inf, V(2.0e61), V(2.7e32), V(2.7e6), V(1.8), V(1.0002)],
        [Inf, Inf, V(2.9e48), V(3.4e19), V(1.0062), One, One],
        [Inf, V(2.9e62), V(3.8e26), V(1.0069), One, One, One],
    ];
    let row = PUBLISHED_A.iter().position(|&v| v == a)?;
    let pct = fraction * 100.0;
    let col = PUBLISHED_PERCENT
        .iter()
        .position(|&v| (v as f64 - pct).abs() < 1e-9)?;
    Some(TABLE[row][col])
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolParams {
    pub a: Vec<f64>,
    pub fractions: Vec<f64>,
    pub n_proposers: usize,
    pub b: f64,
    pub trials: u64,
    pub seed: u64,
}

impl Default for PolParams {
    fn default() -> Self {
        Self {
            a: PUBLISHED_A.to_vec(),
            fractions: PUBLISHED_PERCENT.iter().map(|&v| v as f64 / 100.0).collect(),
            n_proposers: 1000,
            b: 1.0,
            trials: 2000,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolRow {
    pub a: f64,
    pub fraction: f64,
    pub colluders: usize,
    pub trials: u64,
    pub inf_trials: u64,
    /// `inf` as soon as one trial is in the INF regime.
    pub geo_mean: f64,
    /// Over the trials with a finite ratio; `None` when there are none.
    pub finite_geo_mean: Option<f64>,
    pub mean_honest_distance: f64,
    pub mean_colluder_distance: f64,
    pub published: Option<PublishedCell>,
}

impl PolRow {
    pub fn inf_fraction(&self) -> f64 {
        self.inf_trials as f64 / self.trials as f64
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolReport {
    pub rows: Vec<PolRow>,
    /// Per value of `a`: whether the geometric mean never rises as the
    /// colluding fraction grows.
    pub monotone: Vec<(f64, bool)>,
}

struct Draw {
    ratio: Ratio,
    log_ratio: f64,
    d_honest: f64,
    d_colluder: f64,
}

/// Fresh positions and luck; the first `m` proposers collude.
fn draw<R: Rng>(rng: &mut R, n: usize, m: usize, params: &DifficultyParams) -> Draw {
    let ring = n as f64;
    let luck = rng.gen_range(0.0..ring);
    let mut d_honest = f64::INFINITY;
    let mut d_colluder = f64::INFINITY;
    for i in 0..n {
        let d = distance(rng.gen_range(0.0..ring), luck, ring);
        d_honest = d_honest.min(d);
        if i < m {
            d_colluder = d_colluder.min(d);
        }
    }
    Draw {
        ratio: params.difficulty_ratio(d_honest, d_colluder),
        log_ratio: params.log_difficulty_ratio(d_honest, d_colluder),
        d_honest,
        d_colluder,
    }
}

fn non_increasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] || (w[0].is_infinite() && w[1].is_infinite()))
}

pub fn exp_pol(params: &PolParams) -> Result<(PolReport, ResultTable)> {
    check_grid("a", params.a.len())?;
    check_grid("fractions", params.fractions.len())?;
    check_trials(params.trials)?;
    if params.n_proposers < 10 {
        return Err(Error::Config("n_proposers must be at least 10".into()));
    }
    if !(params.b > 0.0 && params.b <= 1.0) {
        return Err(Error::Config(format!("b = {} outside (0, 1]", params.b)));
    }
    for &a in &params.a {
        if !(a > 0.0) {
            return Err(Error::Config(format!("a = {a} must be positive")));
        }
    }
    for &f in &params.fractions {
        if !(f > 0.0 && f < 1.0) {
            return Err(Error::Config(format!("fraction {f} outside (0, 1)")));
        }
    }

    let n = params.n_proposers;
    let mut rows = Vec::new();
    let mut monotone = Vec::new();
    for (ai, &a) in params.a.iter().enumerate() {
        let difficulty = DifficultyParams::new(a, params.b);
        let start = rows.len();
        for (fi, &fraction) in params.fractions.iter().enumerate() {
            let m = ((fraction * n as f64).round() as usize).clamp(1, n);
            let cell = (ai * params.fractions.len() + fi) as u64;
            let draws: Vec<Draw> = (0..params.trials)
                .into_par_iter()
                .map(|t| draw(&mut trial_rng(params.seed, cell, t), n, m, &difficulty))
                .collect();
            let inf_trials = draws.iter().filter(|d| d.ratio.is_infinite()).count() as u64;
            let finite: Vec<f64> = draws
                .iter()
                .filter(|d| !d.ratio.is_infinite())
                .map(|d| d.log_ratio)
                .collect();
            let finite_geo_mean =
                (!finite.is_empty()).then(|| (finite.iter().sum::<f64>() / finite.len() as f64).exp());
            let geo_mean = if inf_trials > 0 {
                f64::INFINITY
            } else {
                finite_geo_mean.expect("all trials finite")
            };
            let trials = params.trials as f64;
            rows.push(PolRow {
                a,
                fraction,
                colluders: m,
                trials: params.trials,
                inf_trials,
                geo_mean,
                finite_geo_mean,
                mean_honest_distance: draws.iter().map(|d| d.d_honest).sum::<f64>() / trials,
                mean_colluder_distance: draws.iter().map(|d| d.d_colluder).sum::<f64>() / trials,
                published: published_pol(a, fraction),
            });
        }
        let means: Vec<f64> = rows[start..].iter().map(|r| r.geo_mean).collect();
        monotone.push((a, non_increasing(&means)));
    }

    let mut table = ResultTable::new(&[
        "a",
        "fraction",
        "colluders",
        "trials",
        "inf_fraction",
        "geo_mean_ratio",
        "finite_geo_mean_ratio",
        "mean_honest_distance",
        "mean_colluder_distance",
        "published",
    ]);
    for r in &rows {
        table.push(vec![
            r.a.into(),
            r.fraction.into(),
            r.colluders.into(),
            r.trials.into(),
            r.inf_fraction().into(),
            r.geo_mean.into(),
            Value::from(r.finite_geo_mean),
            r.mean_honest_distance.into(),
            r.mean_colluder_distance.into(),
            Value::from(r.published.map(|p| p.label())),
        ]);
    }
    Ok((PolReport { rows, monotone }, table))
}
