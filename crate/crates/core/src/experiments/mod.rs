//! Monte Carlo experiments with analytic oracles, plus table output.

mod cost;
mod detect;
mod hidden;
mod pol;
mod recover;
mod table;

pub use cost::{exp_cost, CostReport, CostRow, DEFAULT_PART_SIZES};
pub use detect::{exp_detect, published_detect, DetectParams, DetectRow, STORED_BATCHES};
pub use hidden::{exp_hidden_state_size, HiddenStateRow};
pub use pol::{exp_pol, published_pol, PublishedCell, PolParams, PolReport, PolRow};
pub use recover::{exp_recover, recovery_oracle, RecoverParams, RecoverRow};
pub use table::{format_sig, ResultTable, Value};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// RNG for one trial: the master seed keys ChaCha, `(cell, trial)` picks the
/// stream, so results do not depend on how trials are scheduled.
pub fn trial_rng(seed: u64, cell: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((cell << 32) | trial);
    rng
}

/// Runs `trials` independent Bernoulli trials of one grid cell in parallel.
pub fn count_successes<F>(seed: u64, cell: u64, trials: u64, trial: F) -> u64
where
    F: Fn(&mut ChaCha8Rng) -> bool + Sync,
{
    assert!(trials <= u32::MAX as u64, "too many trials");
    (0..trials)
        .into_par_iter()
        .filter(|&t| trial(&mut trial_rng(seed, cell, t)))
        .count() as u64
}

/// Binomial standard error of a proportion `p` estimated from `trials`.
pub fn std_error(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

/// `|estimate - oracle|` within three standard errors, with a half-count
/// continuity allowance so that oracles at 0 or 1 are usable.
pub fn within_three_sigma(estimate: f64, oracle: f64, trials: u64) -> bool {
    (estimate - oracle).abs() <= 3.0 * std_error(oracle, trials) + 0.5 / trials as f64
}

fn check_grid(name: &str, len: usize) -> crate::Result<()> {
    if len == 0 {
        return Err(crate::Error::Config(format!("{name} grid is empty")));
    }
    Ok(())
}

fn check_trials(trials: u64) -> crate::Result<()> {
    if trials == 0 {
        return Err(crate::Error::Config("trials must be at least 1".into()));
    }
    if trials > u32::MAX as u64 {
        return Err(crate::Error::Config("trials exceed 2^32 - 1".into()));
    }
    Ok(())
}
