//! Binary SHA-256 Merkle tree over the blob's proposal encodings.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hash::sha256;

pub type Digest = [u8; 32];

pub fn leaf_hash(data: &[u8]) -> Digest {
    sha256(&[&[0x00], data])
}

fn node_hash(left: &Digest, right: &Digest) -> Digest {
    sha256(&[&[0x01], left, right])
}

/// Filler for the padding leaves and the root of an empty blob.
pub fn empty_leaf() -> Digest {
    sha256(&[&[0x02]])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MerkleProof {
    pub index: usize,
    pub path: Vec<Digest>,
}

fn levels<L: AsRef<[u8]>>(leaves: &[L]) -> Vec<Vec<Digest>> {
    let width = leaves.len().max(1).next_power_of_two();
    let mut level: Vec<Digest> = leaves.iter().map(|l| leaf_hash(l.as_ref())).collect();
    level.resize(width, empty_leaf());
    let mut out = vec![level];
    while out.last().unwrap().len() > 1 {
        let next = out
            .last()
            .unwrap()
            .chunks(2)
            .map(|pair| node_hash(&pair[0], &pair[1]))
            .collect();
        out.push(next);
    }
    out
}

pub fn merkle_root<L: AsRef<[u8]>>(leaves: &[L]) -> Digest {
    if leaves.is_empty() {
        return empty_leaf();
    }
    levels(leaves).last().unwrap()[0]
}

pub fn merkle_prove<L: AsRef<[u8]>>(leaves: &[L], index: usize) -> Result<MerkleProof> {
    if index >= leaves.len() {
        return Err(Error::IndexOutOfRange {
            index,
            len: leaves.len(),
        });
    }
    let lv = levels(leaves);
    let mut i = index;
    let path = lv[..lv.len() - 1]
        .iter()
        .map(|level| {
            let sibling = level[i ^ 1];
            i /= 2;
            sibling
        })
        .collect();
    Ok(MerkleProof { index, path })
}

pub fn merkle_verify(root: &Digest, leaf: &[u8], proof: &MerkleProof) -> bool {
    if proof.path.len() >= usize::BITS as usize || proof.index >> proof.path.len() != 0 {
        return false;
    }
    let mut acc = leaf_hash(leaf);
    for (level, sibling) in proof.path.iter().enumerate() {
        acc = if (proof.index >> level) & 1 == 0 {
            node_hash(&acc, sibling)
        } else {
            node_hash(sibling, &acc)
        };
    }
    acc == *root
}
