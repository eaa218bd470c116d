//! Steepest-descent search for sets with small normalized growth.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::generators::{generate, neighbors, perturb, FamilySpec, NeighborRules, RNG_ALGORITHM};
use crate::rational::Rational;
use crate::set::RSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    #[serde(rename = "A+A")]
    SumSet,
    #[serde(rename = "AA+A")]
    ProductPlusSet,
    #[serde(rename = "A:A+A")]
    RatioPlusSet,
    #[serde(rename = "AA+AA")]
    ProductPlusProduct,
    #[serde(rename = "A:A+A:A")]
    RatioPlusRatio,
}

impl Quantity {
    pub const ALL: [Quantity; 5] = [
        Quantity::SumSet,
        Quantity::ProductPlusSet,
        Quantity::RatioPlusSet,
        Quantity::ProductPlusProduct,
        Quantity::RatioPlusRatio,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Quantity::SumSet => "A+A",
            Quantity::ProductPlusSet => "AA+A",
            Quantity::RatioPlusSet => "A:A+A",
            Quantity::ProductPlusProduct => "AA+AA",
            Quantity::RatioPlusRatio => "A:A+A:A",
        }
    }

    fn needs_zero_free(&self) -> bool {
        matches!(self, Quantity::RatioPlusSet | Quantity::RatioPlusRatio)
    }

    /// Exact cardinality of the quantity's set.
    pub fn evaluate(&self, a: &RSet) -> Result<usize> {
        if a.is_empty() {
            return Err(Error::domain("objective of the empty set"));
        }
        Ok(match self {
            Quantity::SumSet => a.plus(a).len(),
            Quantity::ProductPlusSet => a.times(a).plus(a).len(),
            Quantity::RatioPlusSet => a.over(a)?.plus(a).len(),
            Quantity::ProductPlusProduct => {
                let p = a.times(a);
                p.plus(&p).len()
            }
            Quantity::RatioPlusRatio => {
                let r = a.over(a)?;
                r.plus(&r).len()
            }
        })
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().replace(['|', ' '], "").to_ascii_lowercase();
        let q = match key.as_str() {
            "a+a" | "sumset" => Quantity::SumSet,
            "aa+a" | "product_plus_set" => Quantity::ProductPlusSet,
            "a:a+a" | "a/a+a" | "ratio_plus_set" => Quantity::RatioPlusSet,
            "aa+aa" | "product_plus_product" => Quantity::ProductPlusProduct,
            "a:a+a:a" | "a/a+a/a" | "ratio_plus_ratio" => Quantity::RatioPlusRatio,
            _ => return Err(Error::Parse(format!("unknown objective {s:?}"))),
        };
        Ok(q)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Minimize `quantity / |A|^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Objective {
    pub quantity: Quantity,
    pub exponent: Rational,
}

impl Objective {
    pub fn new(quantity: Quantity, exponent: Rational) -> Result<Self> {
        if !exponent.is_positive() {
            return Err(Error::Parse("objective exponent must be positive".into()));
        }
        Ok(Objective { quantity, exponent })
    }

    pub fn score(&self, a: &RSet) -> Result<Score> {
        Ok(Score {
            quantity: self.quantity.evaluate(a)? as u64,
            size: a.len() as u64,
            exponent: self.exponent.clone(),
        })
    }
}

/// `quantity / size^exponent`, compared exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Score {
    pub quantity: u64,
    pub size: u64,
    pub exponent: Rational,
}

impl Score {
    pub fn value(&self) -> f64 {
        self.quantity as f64 / (self.size as f64).powf(self.exponent.to_f64())
    }

    /// Compares `q1 / n1^(p/d)` with `q2 / n2^(p/d)` as
    /// `q1^d · n2^p` against `q2^d · n1^p`.
    pub fn cmp_exact(&self, other: &Score) -> Ordering {
        assert_eq!(self.exponent, other.exponent, "scores of different objectives");
        let p = self.exponent.numer().to_u32().expect("small exponent numerator");
        let d = self.exponent.denom().to_u32().expect("small exponent denominator");
        let pw = |b: u64, e: u32| {
            let mut acc = BigUint::one();
            let base = BigUint::from(b);
            for _ in 0..e {
                acc *= &base;
            }
            acc
        };
        let lhs = pw(self.quantity, d) * pw(other.size, p);
        let rhs = pw(other.quantity, d) * pw(self.size, p);
        lhs.cmp(&rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceEntry {
    pub restart: usize,
    pub step: usize,
    pub score: f64,
    pub set_size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub objective: Objective,
    pub init: FamilySpec,
    /// Accepted steps per restart, counting the initial set.
    pub budget: usize,
    pub restarts: usize,
    pub seed: u64,
    pub rules: NeighborRules,
    /// Random edits applied to the initial set for restarts after the first.
    pub restart_edits: usize,
}

impl SearchConfig {
    pub fn new(objective: Objective, init: FamilySpec, budget: usize, seed: u64) -> Self {
        SearchConfig {
            objective,
            init,
            budget,
            restarts: 1,
            seed,
            rules: NeighborRules::default(),
            restart_edits: 2,
        }
    }

    pub fn digest(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(&Sha256::digest(json.as_bytes())[..16])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_set: RSet,
    pub best_score: f64,
    pub best_quantity: u64,
    pub objective: Objective,
    pub best_restart: usize,
    pub trace: Vec<TraceEntry>,
    pub config_digest: String,
    pub rng: String,
    /// Smallest `|A:A+A| / |A|^{3/2}` over accepted zero-free sets.
    pub ratio_floor: Option<f64>,
}

struct RestartOutcome {
    best: RSet,
    score: Score,
    trace: Vec<TraceEntry>,
    floor: Option<f64>,
}

fn floor_value(a: &RSet) -> Option<f64> {
    if a.contains_zero() {
        return None;
    }
    let q = Quantity::RatioPlusSet.evaluate(a).ok()? as f64;
    Some(q / (a.len() as f64).powf(1.5))
}

fn admissible(a: &RSet, objective: &Objective) -> bool {
    !a.is_empty() && !(objective.quantity.needs_zero_free() && a.contains_zero())
}

/// Independent stream for restart `r`.
pub fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn descend(cfg: &SearchConfig, restart: usize, init: RSet) -> Result<RestartOutcome> {
    let obj = &cfg.objective;
    if !admissible(&init, obj) {
        return Err(Error::infeasible(format!(
            "initial set {init} is not admissible for {}",
            obj.quantity
        )));
    }
    let mut cur = init;
    let mut cur_score = obj.score(&cur)?;
    let mut visited: FxHashSet<RSet> = FxHashSet::default();
    visited.insert(cur.clone());
    let mut trace = vec![TraceEntry {
        restart,
        step: 0,
        score: cur_score.value(),
        set_size: cur.len(),
    }];
    let mut best = (cur.clone(), cur_score.clone());
    let mut floor = floor_value(&cur);

    while trace.len() < cfg.budget {
        let mut pick: Option<(RSet, Score)> = None;
        for nb in neighbors(&cur, &cfg.rules) {
            if visited.contains(&nb) || !admissible(&nb, obj) {
                continue;
            }
            let s = obj.score(&nb)?;
            // neighbors come sorted, so strict improvement keeps the smallest set on ties
            if pick.as_ref().map_or(true, |(_, ps)| s.cmp_exact(ps) == Ordering::Less) {
                pick = Some((nb, s));
            }
        }
        let Some((next, s)) = pick else { break };
        if s.cmp_exact(&cur_score) == Ordering::Greater {
            break;
        }
        visited.insert(next.clone());
        cur = next;
        cur_score = s;
        trace.push(TraceEntry {
            restart,
            step: trace.len(),
            score: cur_score.value(),
            set_size: cur.len(),
        });
        if let Some(v) = floor_value(&cur) {
            floor = Some(floor.map_or(v, |f: f64| f.min(v)));
        }
        if cur_score.cmp_exact(&best.1) == Ordering::Less {
            best = (cur.clone(), cur_score.clone());
        }
    }
    Ok(RestartOutcome {
        best: best.0,
        score: best.1,
        trace,
        floor,
    })
}

/// Runs `restarts` descents (the first from the initial set, the others from
/// seeded perturbations of it) and returns the best set found.
pub fn local_search(cfg: &SearchConfig) -> Result<SearchResult> {
    if cfg.budget == 0 {
        return Err(Error::Parse("search budget must be at least 1".into()));
    }
    if cfg.restarts == 0 {
        return Err(Error::Parse("at least one restart is required".into()));
    }
    let init = generate(&cfg.init)?;
    let outcomes: Vec<Result<RestartOutcome>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let start = if r == 0 {
                init.clone()
            } else {
                perturb(&init, cfg.restart_edits, &mut restart_rng(cfg.seed, r))
            };
            descend(cfg, r, start)
        })
        .collect();
    let outcomes: Vec<RestartOutcome> = outcomes.into_iter().collect::<Result<_>>()?;

    let mut best_idx = 0;
    for (i, o) in outcomes.iter().enumerate().skip(1) {
        let b = &outcomes[best_idx];
        let better = match o.score.cmp_exact(&b.score) {
            Ordering::Less => true,
            Ordering::Equal => o.best < b.best,
            Ordering::Greater => false,
        };
        if better {
            best_idx = i;
        }
    }
    let floor = outcomes
        .iter()
        .filter_map(|o| o.floor)
        .fold(None, |acc: Option<f64>, v| Some(acc.map_or(v, |a| a.min(v))));
    let best = &outcomes[best_idx];
    Ok(SearchResult {
        best_set: best.best.clone(),
        best_score: best.score.value(),
        best_quantity: best.score.quantity,
        objective: cfg.objective.clone(),
        best_restart: best_idx,
        trace: outcomes.iter().flat_map(|o| o.trace.iter().cloned()).collect(),
        config_digest: cfg.digest(),
        rng: RNG_ALGORITHM.to_string(),
        ratio_floor: floor,
    })
}

/// True when the elements are equally spaced.
pub fn is_arithmetic_progression(a: &RSet) -> bool {
    let v = a.as_slice();
    if v.len() < 3 {
        return true;
    }
    let d = &v[1] - &v[0];
    v.windows(2).all(|w| &w[1] - &w[0] == d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn obj(q: Quantity, num: i64, den: i64) -> Objective {
        Objective::new(q, Rational::new(num, den).unwrap()).unwrap()
    }

    #[test]
    fn scores() {
        let gp4 = RSet::from_integers([1, 2, 4, 8]);
        let o = obj(Quantity::ProductPlusSet, 3, 2);
        let s = o.score(&gp4).unwrap();
        assert_eq!(s.quantity as usize, gp4.times(&gp4).plus(&gp4).len());
        assert!((s.value() - s.quantity as f64 / 8.0).abs() < 1e-12);

        let ap4 = RSet::from_integers(1..=4);
        let s = obj(Quantity::SumSet, 1, 1).score(&ap4).unwrap();
        assert_eq!(s.value(), 7.0 / 4.0);

        let one = RSet::from_integers([5]);
        for q in Quantity::ALL {
            assert_eq!(obj(q, 3, 2).score(&one).unwrap().value(), 1.0);
        }
    }

    #[test]
    fn exact_comparison() {
        let a = Score { quantity: 7, size: 4, exponent: Rational::new(3, 2).unwrap() };
        let b = Score { quantity: 20, size: 9, exponent: Rational::new(3, 2).unwrap() };
        // 7/8 = 0.875 vs 20/27 ≈ 0.74
        assert_eq!(a.cmp_exact(&b), Ordering::Greater);
        assert_eq!(a.cmp_exact(&a), Ordering::Equal);
    }

    #[test]
    fn budget_contract() {
        let cfg = SearchConfig::new(obj(Quantity::SumSet, 1, 1), FamilySpec::gp(5, 1, 2), 1, 0);
        let r = local_search(&cfg).unwrap();
        assert_eq!(r.best_set, RSet::from_integers([1, 2, 4, 8, 16]));
        assert_eq!(r.trace.len(), 1);
        let zero = SearchConfig { budget: 0, ..cfg };
        assert!(local_search(&zero).is_err());
    }

    #[test]
    fn descent_is_monotone_and_reproducible() {
        let mut cfg = SearchConfig::new(
            obj(Quantity::ProductPlusSet, 3, 2),
            FamilySpec::gp(6, 1, 2),
            30,
            3,
        );
        cfg.restarts = 3;
        let r1 = local_search(&cfg).unwrap();
        let r2 = local_search(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&r1).unwrap(), serde_json::to_string(&r2).unwrap());
        for w in r1.trace.windows(2) {
            if w[0].restart == w[1].restart {
                assert!(w[1].score <= w[0].score + 1e-12);
            }
        }
        let start = obj(Quantity::ProductPlusSet, 3, 2)
            .score(&RSet::from_integers([1, 2, 4, 8, 16, 32]))
            .unwrap();
        assert!(r1.best_score <= start.value());
    }

    #[test]
    fn ap_detection() {
        assert!(is_arithmetic_progression(&RSet::from_integers([3, 5, 7, 9])));
        assert!(!is_arithmetic_progression(&RSet::from_integers([1, 2, 4])));
    }

    #[test]
    fn objective_parsing() {
        assert_eq!("|AA+A|".parse::<Quantity>().unwrap(), Quantity::ProductPlusSet);
        assert_eq!("A:A+A".parse::<Quantity>().unwrap(), Quantity::RatioPlusSet);
        assert!("A*A".parse::<Quantity>().is_err());
    }
}
