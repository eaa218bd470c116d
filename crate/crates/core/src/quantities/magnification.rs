//! Exhaustive magnification ratio `R_B[A] = min_{∅≠Z⊆A} |B∘Z| / |Z|`.

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set::RSet;
use crate::setops::Operation;

/// Largest `|A|` for which all `2^|A| - 1` subsets are enumerated.
pub const DEFAULT_SUBSET_CAP: usize = 18;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MagnificationResult {
    pub ratio: Rational,
    pub minimizer: RSet,
    pub enumerated_subsets: u64,
}

/// Minimizes `|B∘Z|/|Z|` over nonempty `Z ⊆ A`. Ties go to the first subset in
/// mask order, so the result is deterministic.
pub fn magnification_ratio(
    a: &RSet,
    b: &RSet,
    op: Operation,
    cap: usize,
) -> Result<MagnificationResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("magnification ratio needs nonempty sets"));
    }
    if a.len() > cap {
        return Err(Error::resource(format!(
            "magnification over |A| = {} exceeds the subset cap {cap}",
            a.len()
        )));
    }

    // index every element of B∘A, then represent B∘{a} as a bitset per a
    let mut index: FxHashMap<Rational, usize> = FxHashMap::default();
    let mut members: Vec<Vec<usize>> = Vec::with_capacity(a.len());
    for x in a {
        let mut row = Vec::with_capacity(b.len());
        for y in b {
            let v = match op {
                Operation::Additive => y + x,
                Operation::Multiplicative => y * x,
            };
            let next = index.len();
            row.push(*index.entry(v).or_insert(next));
        }
        members.push(row);
    }
    let words = index.len().div_ceil(64);
    let bitsets: Vec<Vec<u64>> = members
        .iter()
        .map(|row| {
            let mut bits = vec![0u64; words];
            for &i in row {
                bits[i / 64] |= 1 << (i % 64);
            }
            bits
        })
        .collect();

    let n = a.len();
    let mut scratch = vec![0u64; words];
    let mut best: Option<(u64, u64, u64)> = None; // (|B∘Z|, |Z|, mask)
    for mask in 1u64..(1u64 << n) {
        scratch.iter_mut().for_each(|w| *w = 0);
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros() as usize;
            for (w, s) in scratch.iter_mut().zip(&bitsets[i]) {
                *w |= s;
            }
            m &= m - 1;
        }
        let image = scratch.iter().map(|w| w.count_ones() as u64).sum::<u64>();
        let size = mask.count_ones() as u64;
        let better = match best {
            None => true,
            Some((bi, bs, _)) => image * bs < bi * size,
        };
        if better {
            best = Some((image, size, mask));
        }
    }
    let (image, size, mask) = best.expect("at least one nonempty subset");
    Ok(MagnificationResult {
        ratio: Rational::new(image as i64, size as i64)?,
        minimizer: a.subset_by_mask(mask),
        enumerated_subsets: (1u64 << n) - 1,
    })
}
