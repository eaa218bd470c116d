//! Slope chains: consecutive lines `y = q x` through `A×A`, and popular-ratio counts.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::ids;
use crate::rational::Rational;
use crate::record::{CheckRecord, Direction, Num};
use crate::set::RSet;
use crate::setops::{convolution, multiplicative_fibers, Operation, Orientation};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainMode {
    /// Points on a line are divided by `Δ(A)`.
    Ratio,
    /// Points on a line are multiplied by `Δ(A)`.
    Product,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeFilter {
    All,
    /// Keep slopes whose fiber has at least this many points.
    Popular(u64),
}

impl SlopeFilter {
    /// `⌈|A|² / (2|A:A|)⌉`, computed on the positive part of `A`.
    pub fn half_average(a: &RSet) -> Result<Self> {
        let pos = a.positive_part();
        if pos.is_empty() {
            return Ok(SlopeFilter::All);
        }
        let n = pos.len() as u64;
        let ratios = pos.over(&pos)?.len() as u64;
        Ok(SlopeFilter::Popular((n * n).div_ceil(2 * ratios)))
    }

    fn keeps(&self, fiber_size: usize) -> bool {
        match self {
            SlopeFilter::All => true,
            SlopeFilter::Popular(t) => fiber_size as u64 >= *t,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainOutcome {
    pub chain_sum: u128,
    pub target_sq: u128,
    pub slopes_used: usize,
    pub record: CheckRecord,
}

#[derive(Clone, Copy)]
enum Shape {
    Single,
    Pair,
}

/// `Σ |A_{q_i}| · |A_{q_{i+1}} ∘ A|` over consecutive kept slopes, against
/// `|A:A + A|²` (ratio) or `|AA + A|²` (product).
pub fn solymosi_chain(a: &RSet, mode: ChainMode, filter: SlopeFilter) -> Result<ChainOutcome> {
    chain(a, mode, filter, Shape::Single)
}

/// `Σ |A_{q_i} ∘ A| · |A_{q_{i+1}} ∘ A|` over consecutive kept slopes, against
/// `|A:A + A:A|²` (ratio) or `|AA + AA|²` (product).
pub fn solymosi_pair_chain(
    a: &RSet,
    mode: ChainMode,
    filter: SlopeFilter,
) -> Result<ChainOutcome> {
    chain(a, mode, filter, Shape::Pair)
}

fn chain(a: &RSet, mode: ChainMode, filter: SlopeFilter, shape: Shape) -> Result<ChainOutcome> {
    let pos = a.positive_part();
    let dropped = a.len() - pos.len();
    let image = |f: &RSet| -> Result<usize> {
        Ok(match mode {
            ChainMode::Ratio => f.over(&pos)?.len(),
            ChainMode::Product => pos.times(f).len(),
        })
    };

    let (chain_sum, slopes_used, target) = if pos.is_empty() {
        (0u128, 0usize, 0u128)
    } else {
        let fibers: Vec<(Rational, RSet)> = multiplicative_fibers(&pos)?
            .into_iter()
            .filter(|(_, f)| filter.keeps(f.len()))
            .collect();
        let mut sum = 0u128;
        for w in fibers.windows(2) {
            let (left, right) = (&w[0].1, &w[1].1);
            let term = match shape {
                Shape::Single => left.len() * image(right)?,
                Shape::Pair => image(left)? * image(right)?,
            };
            sum += term as u128;
        }
        let base = match mode {
            ChainMode::Ratio => pos.over(&pos)?,
            ChainMode::Product => pos.times(&pos),
        };
        let target = match shape {
            Shape::Single => base.plus(&pos).len(),
            Shape::Pair => base.plus(&base).len(),
        } as u128;
        (sum, fibers.len(), target)
    };
    let target_sq = target * target;

    let id = match (shape, mode) {
        (Shape::Single, ChainMode::Ratio) => ids::CHAIN_RATIO_PLUS_SET,
        (Shape::Single, ChainMode::Product) => ids::CHAIN_PRODUCT_PLUS_SET,
        (Shape::Pair, ChainMode::Ratio) => ids::CHAIN_RATIO_PLUS_RATIO,
        (Shape::Pair, ChainMode::Product) => ids::CHAIN_PRODUCT_PLUS_PRODUCT,
    };
    let mut record = CheckRecord::exact_upper(
        id,
        Rational::from(chain_sum as u64),
        Rational::from(target_sq as u64),
        &[a],
    )
    .with_detail("slopes_used", slopes_used)
    .with_detail("slope_filter", filter);
    if dropped > 0 {
        record = record.with_detail("filtered_nonpositive", dropped);
    }
    Ok(ChainOutcome {
        chain_sum,
        target_sq,
        slopes_used,
        record,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TauCount {
    pub count: usize,
    pub rhs_core: Rational,
    pub record: CheckRecord,
}

/// `|{x : |A ∩ xB| ≥ τ}|` against `|A+A||B+B|/τ²`.
pub fn tau_popularity_count(a: &RSet, b: &RSet, tau: u64) -> Result<TauCount> {
    if tau < 1 {
        return Err(Error::domain("τ must be at least 1"));
    }
    let r = convolution(a, b, Operation::Multiplicative, Orientation::Correlation)?;
    let count = r.level_set_size(tau);
    let t = tau as i64;
    let rhs_core = Rational::new((a.plus(a).len() * b.plus(b).len()) as i64, t * t)?;
    let record = CheckRecord::measured(
        ids::TAU_COUNT,
        Num::from(count),
        Num::exact(rhs_core.clone()),
        Direction::Upper,
        &[a, b],
    )
    .with_detail("tau", tau);
    Ok(TauCount {
        count,
        rhs_core,
        record,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::record::Verdict;

    fn ints(v: &[i64]) -> RSet {
        RSet::from_integers(v.iter().copied())
    }

    #[test]
    fn chain_example() {
        let out = solymosi_chain(&ints(&[1, 2, 4]), ChainMode::Ratio, SlopeFilter::All).unwrap();
        assert_eq!(out.chain_sum, 32);
        assert_eq!(out.target_sq, 144);
        assert_eq!(out.slopes_used, 5);
        assert_eq!(out.record.verdict, Verdict::Pass);
    }

    #[test]
    fn degenerate() {
        let out = solymosi_chain(&ints(&[3]), ChainMode::Product, SlopeFilter::All).unwrap();
        assert_eq!(out.chain_sum, 0);
        assert!(out.record.passed());
        let out = solymosi_pair_chain(&ints(&[-2, 0]), ChainMode::Ratio, SlopeFilter::All).unwrap();
        assert_eq!(out.chain_sum, 0);
        assert!(out.record.details.contains_key("filtered_nonpositive"));
    }

    #[test]
    fn pair_chain_small() {
        // slopes 1/2, 1, 2 with fibers {2}, {1,2}, {1}
        let a = ints(&[1, 2]);
        let out = solymosi_pair_chain(&a, ChainMode::Ratio, SlopeFilter::All).unwrap();
        assert_eq!(out.slopes_used, 3);
        // |{2}:A| = 2, |{1,2}:A| = 3, |{1}:A| = 2
        assert_eq!(out.chain_sum, 2 * 3 + 3 * 2);
        assert!(out.chain_sum <= out.target_sq);
        let out = solymosi_pair_chain(&ints(&[1, 2, 4]), ChainMode::Product, SlopeFilter::All)
            .unwrap();
        assert!(out.record.passed());
    }

    #[test]
    fn half_average_threshold() {
        // |A| = 3, |A:A| = 5, ⌈9/10⌉ = 1
        assert_eq!(
            SlopeFilter::half_average(&ints(&[1, 2, 4])).unwrap(),
            SlopeFilter::Popular(1)
        );
    }

    #[test]
    fn tau_examples() {
        let a = ints(&[1, 2, 4]);
        let t = tau_popularity_count(&a, &a, 2).unwrap();
        assert_eq!(t.count, 3);
        assert_eq!(t.rhs_core, Rational::from(9));
        let t1 = tau_popularity_count(&a, &a, 1).unwrap();
        assert_eq!(t1.count, a.over(&a).unwrap().len());
        assert_eq!(tau_popularity_count(&a, &a, 4).unwrap().count, 0);
        assert!(tau_popularity_count(&a, &a, 0).is_err());
    }
}
