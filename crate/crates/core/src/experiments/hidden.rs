use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{check_grid, ResultTable};
use crate::algebra::{Bls12Backend, GroupElement, PairingBackend};
use crate::hash::Sha512Suite;
use crate::pod::{pod_setup, Pod};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct HiddenStateRow {
    pub payload_bytes: usize,
    pub k: usize,
    pub hidden_state_bytes: usize,
}

/// Encoded hidden-state size for each payload size and part count.
pub fn exp_hidden_state_size(
    payload_sizes: &[usize],
    ks: &[usize],
    seed: u64,
) -> Result<(Vec<HiddenStateRow>, ResultTable)> {
    check_grid("payload size", payload_sizes.len())?;
    check_grid("k", ks.len())?;
    let max_k = *ks.iter().max().expect("non-empty");
    if ks.iter().any(|&k| k < 2) {
        return Err(Error::Config("k must be at least 2".into()));
    }
    if let Some(&s) = payload_sizes.iter().find(|&&s| s < max_k) {
        return Err(Error::Config(format!("payload of {s} bytes is shorter than k = {max_k}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pod = Pod::<Bls12Backend, _>::new(pod_setup(max_k - 1, &mut rng)?, Sha512Suite::new());
    let mut rows = Vec::new();
    let mut table = ResultTable::new(&["payload_bytes", "k", "hidden_state_bytes"]);
    for &size in payload_sizes {
        let mut payload = vec![0u8; size];
        rng.fill(&mut payload[..]);
        for &k in ks {
            let state = pod.prove(&payload, k)?;
            let row = HiddenStateRow {
                payload_bytes: size,
                k,
                hidden_state_bytes: state.0.to_bytes().len(),
            };
            table.push(vec![size.into(), k.into(), row.hidden_state_bytes.into()]);
            rows.push(row);
        }
    }
    debug_assert!(rows
        .iter()
        .all(|r| r.hidden_state_bytes == <<Bls12Backend as PairingBackend>::G1 as GroupElement>::ENCODED_LEN));
    Ok((rows, table))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_48_bytes() {
        let (rows, _) = exp_hidden_state_size(&[8, 4096, 100_000], &[2, 4, 8], 1).unwrap();
        assert_eq!(rows.len(), 9);
        assert!(rows.iter().all(|r| r.hidden_state_bytes == 48));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(exp_hidden_state_size(&[], &[2], 1).is_err());
        assert!(exp_hidden_state_size(&[10], &[1], 1).is_err());
        assert!(exp_hidden_state_size(&[3], &[4], 1).is_err());
    }
}
