use serde::Serialize;

/// Per-builder counters. `expected_successes` and `success_variance` sum
/// `p` and `p (1 - p)` over every nonce attempt, where `p` is the chance the
/// attempt's target admits a uniform digest.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BuilderMetrics {
    pub id: u32,
    pub strategy: String,
    pub rounds_searched: u64,
    pub attempts: u64,
    pub successes: u64,
    pub expected_successes: f64,
    pub success_variance: f64,
    pub wins: u64,
    pub slashes: u64,
    /// Sum of honest-over-own log difficulty ratios across searched rounds.
    pub log_ratio_sum: f64,
    pub infinite_ratio_rounds: u64,
}

impl BuilderMetrics {
    pub fn success_rate(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.successes as f64 / self.attempts as f64
        }
    }

    pub fn expected_rate(&self) -> f64 {
        if self.attempts == 0 {
            0.0
        } else {
            self.expected_successes / self.attempts as f64
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Metrics {
    pub ticks: u64,
    pub build_rounds: u64,
    pub batches: u64,
    pub empty_rounds: u64,
    pub ignored_proposals: u64,
    pub challenges_opened: u64,
    pub responses_accepted: u64,
    pub slashes: u64,
    pub honest_slashes: u64,
    pub conservation_ok: bool,
    pub builders: Vec<BuilderMetrics>,
}
