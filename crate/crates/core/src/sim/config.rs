use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Builder behaviour.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Strategy {
    Honest,
    /// Never downloads, so it can only forge hidden states and stores nothing.
    LazyNoDownload,
    /// Drops each part it should store with probability `p`.
    DeleteFraction { p: f64 },
    /// Stores everything, answers nothing.
    Withholder,
    /// Builds on its partners' proposals instead of the closest one.
    Colluder { partners: Vec<u32> },
}

impl Strategy {
    pub fn downloads(&self) -> bool {
        !matches!(self, Strategy::LazyNoDownload)
    }

    /// Whether a part that should be stored is actually kept.
    pub fn keeps<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> bool {
        match self {
            Strategy::LazyNoDownload => false,
            Strategy::DeleteFraction { p } => !rng.gen_bool(*p),
            _ => true,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Strategy::Honest => "honest".into(),
            Strategy::LazyNoDownload => "lazy".into(),
            Strategy::DeleteFraction { p } => format!("delete({p})"),
            Strategy::Withholder => "withholder".into(),
            Strategy::Colluder { partners } => format!("colluder({})", partners.len()),
        }
    }
}

/// Which part a builder keeps of each stored batch.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartAssignment {
    #[default]
    Uniform,
    Fixed(u32),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    pub n_builders: usize,
    /// One per builder; empty means all honest.
    pub strategies: Vec<Strategy>,
    pub n_proposers: usize,
    pub k: usize,
    pub max_degree: usize,
    /// Defaults to `floor(n_builders / 2) + 1`.
    pub quorum: Option<usize>,
    pub window: u64,
    pub a: f64,
    pub b: f64,
    pub max_attempts: u64,
    pub lag: u64,
    pub overlap: bool,
    /// Split mode period length `l` in blocks.
    pub period_blocks: u64,
    /// Split mode proposing sub-period `d`, the first `d` blocks of a period.
    pub proposing_blocks: u64,
    pub txs_per_proposal: usize,
    pub tx_size: usize,
    pub deposit: u64,
    pub allow_redeposit: bool,
    pub challenger_bond: u64,
    /// Builder every challenge targets; a uniform eligible builder otherwise.
    pub challenge_target: Option<u32>,
    pub part_assignment: PartAssignment,
    pub bind_part_index: bool,
    pub seed: u64,
    pub rounds: u64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_builders: 8,
            strategies: Vec::new(),
            n_proposers: 16,
            k: 4,
            max_degree: 8,
            quorum: None,
            window: 2,
            a: 10.5,
            b: 1.0,
            max_attempts: 64,
            lag: 2,
            overlap: true,
            period_blocks: 2,
            proposing_blocks: 1,
            txs_per_proposal: 4,
            tx_size: 64,
            deposit: 100,
            allow_redeposit: true,
            challenger_bond: 0,
            challenge_target: None,
            part_assignment: PartAssignment::Uniform,
            bind_part_index: false,
            seed: 0,
            rounds: 100,
        }
    }
}

impl SimConfig {
    pub fn quorum(&self) -> usize {
        self.quorum.unwrap_or(self.n_builders / 2 + 1)
    }

    pub fn strategy(&self, builder: usize) -> Strategy {
        self.strategies.get(builder).cloned().unwrap_or(Strategy::Honest)
    }

    pub fn payload_len(&self) -> usize {
        self.txs_per_proposal * self.tx_size
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Config(m));
        if self.n_builders == 0 || self.n_proposers == 0 {
            return fail("need at least one builder and one proposer".into());
        }
        if !self.strategies.is_empty() && self.strategies.len() != self.n_builders {
            return fail(format!(
                "{} strategies for {} builders",
                self.strategies.len(),
                self.n_builders
            ));
        }
        if self.k < 2 || self.k > self.max_degree + 1 {
            return fail(format!("k = {} must lie in [2, {}]", self.k, self.max_degree + 1));
        }
        if self.payload_len() < self.k {
            return fail(format!("payload of {} bytes cannot hold {} parts", self.payload_len(), self.k));
        }
        if self.quorum() == 0 || self.quorum() > self.n_builders {
            return fail(format!("quorum {} outside [1, {}]", self.quorum(), self.n_builders));
        }
        if self.lag < 2 {
            return fail(format!("lag {} below 2", self.lag));
        }
        if self.window == 0 {
            return fail("response window must be positive".into());
        }
        if !(self.a > 0.0) || !(self.b > 0.0 && self.b <= 1.0) {
            return fail(format!("difficulty parameters a = {}, b = {} out of range", self.a, self.b));
        }
        if self.max_attempts == 0 {
            return fail("max_attempts must be positive".into());
        }
        if !self.overlap && (self.proposing_blocks == 0 || self.proposing_blocks >= self.period_blocks) {
            return fail(format!(
                "split mode needs 0 < d < l, got d = {}, l = {}",
                self.proposing_blocks, self.period_blocks
            ));
        }
        if self.deposit == 0 {
            return fail("deposit must be positive".into());
        }
        if let PartAssignment::Fixed(j) = self.part_assignment {
            if j as usize >= self.k {
                return fail(format!("fixed part {j} not below k = {}", self.k));
            }
        }
        for s in &self.strategies {
            match s {
                Strategy::DeleteFraction { p } if !(0.0..=1.0).contains(p) => {
                    return fail(format!("delete fraction {p} outside [0, 1]"));
                }
                Strategy::Colluder { partners } => {
                    if partners.is_empty() || partners.iter().any(|&p| p as usize >= self.n_proposers) {
                        return fail("colluder partners must be registered proposers".into());
                    }
                }
                _ => {}
            }
        }
        if let Some(t) = self.challenge_target {
            if t as usize >= self.n_builders {
                return fail(format!("challenge target {t} is not a builder"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let c = SimConfig::default();
        c.validate().unwrap();
        assert_eq!(c.quorum(), 5);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            SimConfig { k: 1, ..Default::default() },
            SimConfig { k: 10, ..Default::default() },
            SimConfig { lag: 1, ..Default::default() },
            SimConfig { quorum: Some(9), ..Default::default() },
            SimConfig { overlap: false, proposing_blocks: 2, period_blocks: 2, ..Default::default() },
            SimConfig { strategies: vec![Strategy::Honest], ..Default::default() },
            SimConfig {
                n_builders: 1,
                strategies: vec![Strategy::DeleteFraction { p: 1.5 }],
                quorum: Some(1),
                ..Default::default()
            },
        ];
        for c in bad {
            assert!(c.validate().is_err(), "{c:?}");
        }
    }

    #[test]
    fn json_round_trip_is_flat() {
        let c = SimConfig {
            n_builders: 2,
            strategies: vec![Strategy::Honest, Strategy::DeleteFraction { p: 0.3 }],
            ..Default::default()
        };
        let text = serde_json::to_string(&c).unwrap();
        assert!(text.contains("\"kind\":\"delete_fraction\""));
        assert_eq!(serde_json::from_str::<SimConfig>(&text).unwrap(), c);
        let partial: SimConfig = serde_json::from_str(r#"{"rounds": 7, "seed": 3}"#).unwrap();
        assert_eq!((partial.rounds, partial.seed, partial.k), (7, 3, 4));
        assert!(serde_json::from_str::<SimConfig>(r#"{"roundz": 7}"#).is_err());
    }
}
