use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_grid, ResultTable};
use crate::algebra::{Bls12Backend, PairingBackend};
use crate::hash::Sha512Suite;
use crate::pod::{partition, pod_setup, Pod};
use crate::poe::{ConstantSizeStub, Poe, RevealBackend, StorageTuple};
use crate::{Error, Result};

pub const DEFAULT_PART_SIZES: [usize; 10] = [1, 4, 16, 64, 256, 1024, 4096, 16384, 65536, 1 << 20];

#[derive(Clone, Debug, PartialEq)]
pub struct CostRow {
    pub part_size: usize,
    pub reveal_bytes: usize,
    pub stub_bytes: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CostReport {
    pub rows: Vec<CostRow>,
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub stub_flat: bool,
    /// Smallest part size whose stub response is shorter than the reveal one.
    pub crossover: Option<usize>,
    pub crossover_unique: bool,
}

struct Harness<B: PairingBackend> {
    pod: Pod<B, Sha512Suite>,
    reveal: Poe<B, Sha512Suite, RevealBackend<Sha512Suite>>,
    stub: Poe<B, Sha512Suite, ConstantSizeStub<B::Scalar>>,
    rng: ChaCha8Rng,
}

impl<B: PairingBackend> Harness<B> {
    fn new(seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let hash = Sha512Suite::new();
        let keys = pod_setup::<B, _>(2, &mut rng)?;
        let reveal = Poe::setup(keys.pk.clone(), hash, RevealBackend::new(hash))?;
        let stub = Poe::setup(keys.pk.clone(), hash, ConstantSizeStub::new())?;
        Ok(Self {
            pod: Pod::new(keys, hash),
            reveal,
            stub,
            rng,
        })
    }

    /// Response lengths for one stored part of `part_size` bytes.
    fn measure(&mut self, part_size: usize) -> Result<CostRow> {
        let mut payload = vec![0u8; 2 * part_size];
        self.rng.fill(&mut payload[..]);
        let hidden_state = self.pod.prove(&payload, 2)?;
        let phi = self.pod.digest_polynomial(&payload, 2)?;
        let tuple = StorageTuple::<B> {
            part_index: 0,
            part: partition(&payload, 2)?[0].to_vec(),
            witness: self.pod.part_witness(&phi, 0)?.witness,
        };
        let req = Poe::<B, Sha512Suite, RevealBackend<Sha512Suite>>::challenge(0, &mut self.rng);
        let reveal = self.reveal.respond(&req, &tuple)?;
        if !self.reveal.verify(&req, &reveal, &hidden_state) {
            return Err(Error::Backend("reveal response failed to verify".into()));
        }
        let stub = self.stub.respond(&req, &tuple)?;
        Ok(CostRow {
            part_size,
            reveal_bytes: reveal.to_bytes().len(),
            stub_bytes: stub.to_bytes().len(),
        })
    }
}

fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = if sxx == 0.0 { 0.0 } else { sxy / sxx };
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r2)
}

/// Response sizes on the production curve for each part size.
pub fn exp_cost(sizes: &[usize], seed: u64) -> Result<(CostReport, ResultTable)> {
    check_grid("size", sizes.len())?;
    if sizes.contains(&0) {
        return Err(Error::Config("part sizes must be at least 1 byte".into()));
    }
    let mut sizes = sizes.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    let mut harness = Harness::<Bls12Backend>::new(seed)?;
    let rows = sizes
        .iter()
        .map(|&s| harness.measure(s))
        .collect::<Result<Vec<_>>>()?;

    let xs: Vec<f64> = rows.iter().map(|r| r.part_size as f64).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.reveal_bytes as f64).collect();
    let (slope, intercept, r_squared) = least_squares(&xs, &ys);
    let stub_flat = rows.windows(2).all(|w| w[0].stub_bytes == w[1].stub_bytes);

    let mut crossover = None;
    if stub_flat && slope > 0.0 {
        let stub = rows[0].stub_bytes as f64;
        let guess = (((stub - intercept) / slope).floor() + 1.0).max(1.0) as usize;
        // confirm on real responses around the fitted intersection
        let at = harness.measure(guess)?;
        let before = (guess > 1).then(|| harness.measure(guess - 1)).transpose()?;
        if at.stub_bytes < at.reveal_bytes && before.is_none_or(|b| b.stub_bytes >= b.reveal_bytes) {
            crossover = Some(guess);
        }
    }
    let crossover_unique = crossover.is_some_and(|c| {
        rows.iter()
            .all(|r| (r.stub_bytes < r.reveal_bytes) == (r.part_size >= c))
    });

    let mut table = ResultTable::new(&["part_size", "reveal_bytes", "stub_bytes", "smaller"]);
    for r in &rows {
        let smaller = if r.stub_bytes < r.reveal_bytes { "stub" } else { "reveal" };
        table.push(vec![r.part_size.into(), r.reveal_bytes.into(), r.stub_bytes.into(), smaller.into()]);
    }
    Ok((
        CostReport {
            rows,
            slope,
            intercept,
            r_squared,
            stub_flat,
            crossover,
            crossover_unique,
        },
        table,
    ))
}
