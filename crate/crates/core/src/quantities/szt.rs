//! Level sets of the additive representation function `(A*B)(x)` against the
//! cubic decay `c(A)|B|²τ^{-3}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantities::doubling::{d_upper, CandidateFamily, DoublingWitness};
use crate::rational::Rational;
use crate::set::RSet;
use crate::setops::{convolution, Operation, Orientation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TauRow {
    pub tau: u64,
    pub level_set_size: usize,
    /// `size · τ³ / |B|²`.
    pub ratio: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SzTReport {
    pub alpha: u32,
    pub tau_rows: Vec<TauRow>,
    pub max_ratio: Rational,
    pub argmax_tau: u64,
    /// `|A| · d_upper(A)`; absent when `0 ∈ A`.
    pub c_theoretical: Option<Rational>,
    pub d_witness: Option<DoublingWitness>,
}

/// One row per `τ = 1..max r`, with the exact level-set size.
pub fn level_set_rows(a: &RSet, b: &RSet) -> Result<Vec<TauRow>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("level sets need nonempty sets"));
    }
    let r = convolution(a, b, Operation::Additive, Orientation::Sum)?;
    let b2 = (b.len() * b.len()) as i64;
    let mut sizes: Vec<usize> = vec![0; r.max_count() as usize + 1];
    for c in r.counts() {
        sizes[c as usize] += 1;
    }
    // cumulative from the top: |{x : r(x) ≥ τ}|
    let mut rows = Vec::with_capacity(sizes.len().saturating_sub(1));
    let mut acc = 0usize;
    for tau in (1..sizes.len()).rev() {
        acc += sizes[tau];
        let t = tau as i64;
        rows.push(TauRow {
            tau: tau as u64,
            level_set_size: acc,
            ratio: Rational::new(acc as i64 * t * t * t, b2)?,
        });
    }
    rows.reverse();
    Ok(rows)
}

pub fn szt_level_sets(a: &RSet, b: &RSet, family: &CandidateFamily) -> Result<SzTReport> {
    let tau_rows = level_set_rows(a, b)?;
    let (argmax_tau, max_ratio) = max_row(&tau_rows);
    let d_witness = if a.contains_zero() {
        None
    } else {
        Some(d_upper(a, family)?)
    };
    let c_theoretical = d_witness
        .as_ref()
        .map(|w| &Rational::from(a.len()) * &w.value);
    Ok(SzTReport {
        alpha: 2,
        tau_rows,
        max_ratio,
        argmax_tau,
        c_theoretical,
        d_witness,
    })
}

fn max_row(rows: &[TauRow]) -> (u64, Rational) {
    let mut best = (0, Rational::zero());
    for row in rows {
        if row.ratio > best.1 {
            best = (row.tau, row.ratio.clone());
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SzTConstantRow {
    pub set: String,
    pub size: usize,
    pub d_upper: Rational,
    pub c_theoretical: Rational,
    pub max_ratio: Rational,
    pub argmax_b: String,
    pub argmax_tau: u64,
    /// `max_ratio / c_theoretical`.
    pub normalized: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SzTConstantReport {
    pub family_tag: String,
    pub rows: Vec<SzTConstantRow>,
    /// The smallest constant with `max_ratio ≤ κ · |A| · d_upper(A)` on every row.
    pub kappa: Rational,
}

/// For every `A` in the corpus, the largest level-set ratio over all `B` in
/// the corpus and all `τ`, normalized by `|A| · d_upper(A)`.
pub fn szt_constant_report(
    corpus: &[(String, RSet)],
    family: &CandidateFamily,
) -> Result<SzTConstantReport> {
    let mut rows = Vec::with_capacity(corpus.len());
    for (tag, a) in corpus {
        let w = d_upper(a, family)?;
        let c = &Rational::from(a.len()) * &w.value;
        let mut best: Option<(Rational, String, u64)> = None;
        for (btag, b) in corpus {
            let (tau, ratio) = max_row(&level_set_rows(a, b)?);
            if best.as_ref().map_or(true, |(r, _, _)| ratio > *r) {
                best = Some((ratio, btag.clone(), tau));
            }
        }
        let (max_ratio, argmax_b, argmax_tau) =
            best.ok_or_else(|| Error::domain("empty corpus"))?;
        rows.push(SzTConstantRow {
            set: tag.clone(),
            size: a.len(),
            d_upper: w.value,
            normalized: &max_ratio / &c,
            c_theoretical: c,
            max_ratio,
            argmax_b,
            argmax_tau,
        });
    }
    let kappa = rows
        .iter()
        .map(|r| r.normalized.clone())
        .max()
        .unwrap_or_else(Rational::zero);
    Ok(SzTConstantReport {
        family_tag: family.tag(),
        rows,
        kappa,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> RSet {
        RSet::from_integers(v.iter().copied())
    }

    #[test]
    fn singleton_b() {
        let a = ints(&[1, 3, 4, 9]);
        let rows = level_set_rows(&a, &ints(&[0])).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].level_set_size, 4);
        assert_eq!(rows[0].ratio, Rational::from(4));
    }

    #[test]
    fn interval_rows_non_increasing() {
        let a = RSet::from_integers(1..=8);
        let rep = szt_level_sets(&a, &a, &CandidateFamily::default()).unwrap();
        assert_eq!(rep.tau_rows.len(), 8);
        for w in rep.tau_rows.windows(2) {
            assert!(w[0].level_set_size >= w[1].level_set_size);
        }
        // r(x) ≥ τ on 17 - 2τ points of [2,16]
        for row in &rep.tau_rows {
            assert_eq!(row.level_set_size, 17 - 2 * row.tau as usize);
        }
        assert!(rep.c_theoretical.is_some());
    }

    #[test]
    fn constant_report_is_reproducible() {
        let corpus = vec![
            ("ap".to_string(), RSet::from_integers(1..=6)),
            ("gp".to_string(), ints(&[1, 2, 4, 8, 16])),
        ];
        let fam = CandidateFamily::default();
        let r1 = szt_constant_report(&corpus, &fam).unwrap();
        let r2 = szt_constant_report(&corpus, &fam).unwrap();
        assert_eq!(
            serde_json::to_string(&r1).unwrap(),
            serde_json::to_string(&r2).unwrap()
        );
        for row in &r1.rows {
            assert!(row.max_ratio <= &r1.kappa * &row.c_theoretical);
        }
    }
}
