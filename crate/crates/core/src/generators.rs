//! Deterministic set families and search neighborhoods.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set::RSet;
use crate::setfile::read_set_file;

/// Name of the pseudo-random generator, recorded in reports.
pub const RNG_ALGORITHM: &str = "chacha8/rand_chacha-0.3/seed_from_u64";

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilySpec {
    Ap { n: usize, start: Rational, step: Rational },
    Gp { n: usize, start: Rational, ratio: Rational },
    Interval { lo: i64, hi: i64 },
    /// `n` distinct integers drawn uniformly from `[lo, hi]`.
    RandomInt { n: usize, lo: i64, hi: i64, seed: u64 },
    UnionApGp { n_ap: usize, n_gp: usize, ratio: Rational },
    FromFile { path: PathBuf },
    /// `edits` random single-element replacements applied to `base`.
    Perturb { base: Box<FamilySpec>, edits: usize, seed: u64 },
}

impl FamilySpec {
    pub fn ap(n: usize, start: i64, step: i64) -> Self {
        FamilySpec::Ap { n, start: start.into(), step: step.into() }
    }

    pub fn gp(n: usize, start: i64, ratio: i64) -> Self {
        FamilySpec::Gp { n, start: start.into(), ratio: ratio.into() }
    }

    pub fn random(n: usize, lo: i64, hi: i64, seed: u64) -> Self {
        FamilySpec::RandomInt { n, lo, hi, seed }
    }

    pub fn validate(&self) -> Result<()> {
        let need_n = |n: usize| {
            if n == 0 {
                Err(Error::Parse("family size must be at least 1".into()))
            } else {
                Ok(())
            }
        };
        match self {
            FamilySpec::Ap { n, step, .. } => {
                need_n(*n)?;
                if step.is_zero() && *n > 1 {
                    return Err(Error::Parse("AP step must be nonzero".into()));
                }
            }
            FamilySpec::Gp { n, start, ratio } => {
                need_n(*n)?;
                if start.is_zero() {
                    return Err(Error::Parse("GP start must be nonzero".into()));
                }
                if ratio.is_zero() || ratio.abs() == Rational::one() {
                    return Err(Error::Parse(format!("GP ratio {ratio} must avoid 0, 1, -1")));
                }
            }
            FamilySpec::Interval { lo, hi } => {
                if lo > hi {
                    return Err(Error::Parse("interval needs lo <= hi".into()));
                }
            }
            FamilySpec::RandomInt { n, lo, hi, .. } => {
                need_n(*n)?;
                if lo > hi {
                    return Err(Error::Parse("random range needs lo <= hi".into()));
                }
            }
            FamilySpec::UnionApGp { n_ap, n_gp, ratio } => {
                need_n(n_ap + n_gp)?;
                if ratio.is_zero() || ratio.abs() == Rational::one() {
                    return Err(Error::Parse(format!("GP ratio {ratio} must avoid 0, 1, -1")));
                }
            }
            FamilySpec::FromFile { .. } => {}
            FamilySpec::Perturb { base, .. } => base.validate()?,
        }
        Ok(())
    }
}

/// Builds the set described by `spec`.
pub fn generate(spec: &FamilySpec) -> Result<RSet> {
    spec.validate()?;
    Ok(match spec {
        FamilySpec::Ap { n, start, step } => {
            let mut out = Vec::with_capacity(*n);
            let mut x = start.clone();
            for _ in 0..*n {
                out.push(x.clone());
                x = &x + step;
            }
            RSet::from_values(out)
        }
        FamilySpec::Gp { n, start, ratio } => {
            let mut out = Vec::with_capacity(*n);
            let mut x = start.clone();
            for _ in 0..*n {
                out.push(x.clone());
                x = &x * ratio;
            }
            RSet::from_values(out)
        }
        FamilySpec::Interval { lo, hi } => RSet::from_integers(*lo..=*hi),
        FamilySpec::RandomInt { n, lo, hi, seed } => {
            let range = (*hi as i128 - *lo as i128 + 1) as u128;
            if range < *n as u128 {
                return Err(Error::infeasible(format!(
                    "cannot draw {n} distinct integers from [{lo}, {hi}]"
                )));
            }
            let mut rng = rng_from_seed(*seed);
            let mut seen = FxHashSet::default();
            while seen.len() < *n {
                seen.insert(rng.gen_range(*lo..=*hi));
            }
            RSet::from_integers(seen)
        }
        FamilySpec::UnionApGp { n_ap, n_gp, ratio } => {
            let ap = generate(&FamilySpec::ap(*n_ap, 1, 1))?;
            if *n_gp == 0 {
                ap
            } else {
                let gp = generate(&FamilySpec::Gp {
                    n: *n_gp,
                    start: Rational::one(),
                    ratio: ratio.clone(),
                })?;
                ap.union(&gp)
            }
        }
        FamilySpec::FromFile { path } => read_set_file(path)?,
        FamilySpec::Perturb { base, edits, seed } => {
            perturb(&generate(base)?, *edits, &mut rng_from_seed(*seed))
        }
    })
}

/// Applies `edits` replacements: a random element moves to a random unused
/// integer within the window `[min - |A|, max + |A|]` (positive when `A` is).
pub fn perturb(a: &RSet, edits: usize, rng: &mut ChaCha8Rng) -> RSet {
    let mut cur = a.clone();
    if cur.is_empty() {
        return cur;
    }
    let lo_bound = |s: &RSet| {
        let w = s.len() as i64;
        let lo = crate::rational::floor_big(s.min().expect("nonempty"));
        let lo = i64::try_from(lo).unwrap_or(i64::MIN / 4) - w;
        if s.iter().all(|x| x.is_positive()) {
            lo.max(1)
        } else {
            lo
        }
    };
    for _ in 0..edits {
        let lo = lo_bound(&cur);
        let hi = i64::try_from(crate::rational::floor_big(cur.as_slice().last().expect("nonempty")))
            .unwrap_or(i64::MAX / 4)
            + cur.len() as i64
            + 1;
        let victim = cur.as_slice().choose(rng).expect("nonempty").clone();
        for _ in 0..64 {
            let y = Rational::from(rng.gen_range(lo..=hi));
            if !cur.contains(&y) {
                cur = cur.without(&victim).with(y);
                break;
            }
        }
    }
    cur
}

fn parse_field<T: FromStr>(field: Option<&str>, what: &str) -> Result<T> {
    let f = field.ok_or_else(|| Error::Parse(format!("missing {what}")))?;
    f.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("cannot parse {what} from {f:?}")))
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// `ap,n,start,step` | `gp,n,start,ratio` | `interval,lo,hi` |
    /// `random,n,lo,hi,seed` | `union,n_ap,n_gp,ratio` | `file,PATH` |
    /// `perturb,edits,seed,<base spec>`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.splitn(2, ',');
        let kind = parts.next().unwrap_or("").trim().to_ascii_lowercase();
        let rest = parts.next().unwrap_or("");
        if kind == "file" || kind == "from_file" {
            return Ok(FamilySpec::FromFile { path: PathBuf::from(rest.trim()) });
        }
        if kind == "perturb" {
            let mut p = rest.splitn(3, ',');
            let edits = parse_field(p.next(), "edit count")?;
            let seed = parse_field(p.next(), "seed")?;
            let base: FamilySpec = p
                .next()
                .ok_or_else(|| Error::Parse("perturb needs a base family".into()))?
                .parse()?;
            let spec = FamilySpec::Perturb { base: Box::new(base), edits, seed };
            spec.validate()?;
            return Ok(spec);
        }
        let fields: Vec<&str> = if rest.is_empty() { vec![] } else { rest.split(',').collect() };
        let arity = |k: usize| {
            if fields.len() == k {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "family {kind:?} takes {k} parameters, got {}",
                    fields.len()
                )))
            }
        };
        let f = |i: usize| fields.get(i).copied();
        let spec = match kind.as_str() {
            "ap" => {
                arity(3)?;
                FamilySpec::Ap {
                    n: parse_field(f(0), "n")?,
                    start: parse_field(f(1), "start")?,
                    step: parse_field(f(2), "step")?,
                }
            }
            "gp" => {
                arity(3)?;
                FamilySpec::Gp {
                    n: parse_field(f(0), "n")?,
                    start: parse_field(f(1), "start")?,
                    ratio: parse_field(f(2), "ratio")?,
                }
            }
            "interval" => {
                arity(2)?;
                FamilySpec::Interval {
                    lo: parse_field(f(0), "lo")?,
                    hi: parse_field(f(1), "hi")?,
                }
            }
            "random" | "random_int" => {
                arity(4)?;
                FamilySpec::RandomInt {
                    n: parse_field(f(0), "n")?,
                    lo: parse_field(f(1), "lo")?,
                    hi: parse_field(f(2), "hi")?,
                    seed: parse_field(f(3), "seed")?,
                }
            }
            "union" | "union_ap_gp" => {
                arity(3)?;
                FamilySpec::UnionApGp {
                    n_ap: parse_field(f(0), "n_ap")?,
                    n_gp: parse_field(f(1), "n_gp")?,
                    ratio: parse_field(f(2), "ratio")?,
                }
            }
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Ap { n, start, step } => write!(f, "ap,{n},{start},{step}"),
            FamilySpec::Gp { n, start, ratio } => write!(f, "gp,{n},{start},{ratio}"),
            FamilySpec::Interval { lo, hi } => write!(f, "interval,{lo},{hi}"),
            FamilySpec::RandomInt { n, lo, hi, seed } => write!(f, "random,{n},{lo},{hi},{seed}"),
            FamilySpec::UnionApGp { n_ap, n_gp, ratio } => write!(f, "union,{n_ap},{n_gp},{ratio}"),
            FamilySpec::FromFile { path } => write!(f, "file,{}", path.display()),
            FamilySpec::Perturb { base, edits, seed } => write!(f, "perturb,{edits},{seed},{base}"),
        }
    }
}

/// Candidate pool for add/replace moves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidatePool {
    /// Integers within this distance of `[min A, max A]`.
    pub window: i64,
    /// Elements `m·a` for these `m`.
    pub multiples: Vec<i64>,
    /// Integer divisors `a/m` for these `m`.
    pub divisors: Vec<i64>,
    pub positive_only: bool,
}

impl Default for CandidatePool {
    fn default() -> Self {
        CandidatePool {
            window: 2,
            multiples: vec![2, 3],
            divisors: vec![2, 3],
            positive_only: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NeighborRules {
    pub remove: bool,
    pub add: bool,
    pub replace: bool,
    /// Keep only neighbors with `|A|` elements.
    pub cardinality_preserving: bool,
    pub pool: CandidatePool,
}

impl Default for NeighborRules {
    fn default() -> Self {
        NeighborRules {
            remove: false,
            add: false,
            replace: true,
            cardinality_preserving: true,
            pool: CandidatePool::default(),
        }
    }
}

impl NeighborRules {
    pub fn none() -> Self {
        NeighborRules {
            remove: false,
            add: false,
            replace: false,
            cardinality_preserving: false,
            pool: CandidatePool::default(),
        }
    }
}

fn pool_values(a: &RSet, pool: &CandidatePool) -> Vec<Rational> {
    let mut out: FxHashSet<Rational> = FxHashSet::default();
    if let (Some(lo), Some(hi)) = (a.min(), a.max()) {
        let lo = crate::rational::floor_big(lo);
        let hi = crate::rational::floor_big(hi) + 1;
        if let (Ok(lo), Ok(hi)) = (i64::try_from(lo), i64::try_from(hi)) {
            for x in lo.saturating_sub(pool.window)..=hi.saturating_add(pool.window) {
                out.insert(Rational::from(x));
            }
        }
    }
    for x in a {
        for &m in &pool.multiples {
            out.insert(x * &Rational::from(m));
        }
        for &m in &pool.divisors {
            if m != 0 {
                let q = x / &Rational::from(m);
                if q.is_integer() {
                    out.insert(q);
                }
            }
        }
    }
    let mut v: Vec<Rational> = out
        .into_iter()
        .filter(|x| !a.contains(x) && (!pool.positive_only || x.is_positive()))
        .collect();
    v.sort();
    v
}

/// All sets one move away from `A`, sorted and without duplicates.
pub fn neighbors(a: &RSet, rules: &NeighborRules) -> Vec<RSet> {
    let mut out: Vec<RSet> = Vec::new();
    let n = a.len();
    if rules.remove && n > 1 {
        out.extend(a.iter().map(|x| a.without(x)));
    }
    let pool = if rules.add || rules.replace {
        pool_values(a, &rules.pool)
    } else {
        Vec::new()
    };
    if rules.add {
        out.extend(pool.iter().map(|y| a.with(y.clone())));
    }
    if rules.replace {
        for x in a {
            let base = a.without(x);
            out.extend(pool.iter().map(|y| base.with(y.clone())));
        }
    }
    if rules.cardinality_preserving {
        out.retain(|s| s.len() == n);
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_examples() {
        assert_eq!(generate(&FamilySpec::ap(5, 1, 1)).unwrap(), RSet::from_integers(1..=5));
        assert_eq!(
            generate(&FamilySpec::gp(4, 1, 2)).unwrap(),
            RSet::from_integers([1, 2, 4, 8])
        );
        let r = FamilySpec::random(5, 1, 100, 7);
        let first = generate(&r).unwrap();
        assert_eq!(first.len(), 5);
        assert_eq!(first, generate(&r).unwrap());
        assert!(first.iter().all(|x| x.is_positive()));
    }

    #[test]
    fn infeasible_and_invalid() {
        assert!(matches!(
            generate(&FamilySpec::random(5, 1, 3, 0)),
            Err(Error::Infeasible(_))
        ));
        assert!("gp,4,1,1".parse::<FamilySpec>().is_err());
        assert!("gp,4,1,-1".parse::<FamilySpec>().is_err());
        assert!("ap,0,1,1".parse::<FamilySpec>().is_err());
        assert!("cube,3".parse::<FamilySpec>().is_err());
        assert!("ap,3,1".parse::<FamilySpec>().is_err());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for text in [
            "ap,10,1,3",
            "gp,6,3,1/2",
            "interval,-2,5",
            "random,8,1,1000,5",
            "union,4,4,3",
            "perturb,2,9,ap,8,1,1",
        ] {
            let spec: FamilySpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        let ap: FamilySpec = "ap,10,1,3".parse().unwrap();
        let set = generate(&ap).unwrap();
        assert_eq!(set.len(), 10);
        assert_eq!(set.as_slice().last(), Some(&Rational::from(28)));
    }

    #[test]
    fn perturb_keeps_size() {
        let spec: FamilySpec = "perturb,3,4,ap,8,1,1".parse().unwrap();
        let s = generate(&spec).unwrap();
        assert_eq!(s.len(), 8);
        assert_eq!(s, generate(&spec).unwrap());
    }

    #[test]
    fn neighbor_rules() {
        let a = RSet::from_integers([1, 2]);
        let rules = NeighborRules {
            remove: true,
            ..NeighborRules::none()
        };
        assert_eq!(
            neighbors(&a, &rules),
            vec![RSet::from_integers([1]), RSet::from_integers([2])]
        );
        assert!(neighbors(&a, &NeighborRules::none()).is_empty());
        let b = RSet::from_integers([1, 3, 7, 8]);
        let all = NeighborRules {
            remove: true,
            add: true,
            replace: true,
            cardinality_preserving: true,
            pool: CandidatePool::default(),
        };
        let ns = neighbors(&b, &all);
        assert!(!ns.is_empty());
        assert!(ns.iter().all(|s| s.len() == 4 && *s != b));
    }
}
