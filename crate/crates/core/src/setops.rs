//! Set algebra, representation functions, fibers and energies.
//!
//! Energies are computed from the self-correlation count map as
//! `sum_x r(x)^alpha` over the support of `r`. The fiber-sum formula is kept as
//! an independent oracle in [`energy_fiber_oracle`].

use num_bigint::BigUint;
use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};

use crate::decimal::Decimal;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set::{PlanarSet, RSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Operation {
    Additive,
    Multiplicative,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BinOp {
    Sum,
    Difference,
    Product,
    Ratio,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// `(A*B)(x) = #{(a,b) : a∘b = x}`
    Sum,
    /// `(A∘B)(x) = #{(a,b) : b∘x = a}`
    Correlation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlanarOp {
    Sum,
    Difference,
    CoordinateProduct,
}

fn apply(kind: BinOp, a: &Rational, b: &Rational) -> Rational {
    match kind {
        BinOp::Sum => a + b,
        BinOp::Difference => a - b,
        BinOp::Product => a * b,
        BinOp::Ratio => a / b,
    }
}

/// `{a ∘ b : a ∈ A, b ∈ B}`.
pub fn setop(a: &RSet, b: &RSet, kind: BinOp) -> Result<RSet> {
    if kind == BinOp::Ratio && b.contains_zero() {
        return Err(Error::domain("ratio set with 0 in the denominator set"));
    }
    let mut out = FxHashSet::default();
    out.reserve(a.len() * b.len());
    for x in a {
        for y in b {
            out.insert(apply(kind, x, y));
        }
    }
    Ok(RSet::from_hashset(out))
}

impl RSet {
    pub fn plus(&self, other: &RSet) -> RSet {
        setop(self, other, BinOp::Sum).expect("sumset is total")
    }

    pub fn minus(&self, other: &RSet) -> RSet {
        setop(self, other, BinOp::Difference).expect("difference set is total")
    }

    pub fn times(&self, other: &RSet) -> RSet {
        setop(self, other, BinOp::Product).expect("product set is total")
    }

    pub fn over(&self, other: &RSet) -> Result<RSet> {
        setop(self, other, BinOp::Ratio)
    }
}

/// `xA`.
pub fn dilate(a: &RSet, x: &Rational) -> Result<RSet> {
    if x.is_zero() {
        return Err(Error::domain("dilation by 0"));
    }
    Ok(RSet::from_values(a.iter().map(|y| y * x)))
}

/// `A + t`.
pub fn translate(a: &RSet, t: &Rational) -> RSet {
    RSet::from_values(a.iter().map(|y| y + t))
}

/// Representation function of `A` and `B` as a count map.
///
/// With [`Orientation::Correlation`] the value at `x` is `Σ_y A(y)B(y+x)`
/// additively and `|A ∩ xB|` multiplicatively.
pub fn convolution(
    a: &RSet,
    b: &RSet,
    op: Operation,
    orientation: Orientation,
) -> Result<crate::set::CountMap> {
    let kind = match (op, orientation) {
        (Operation::Additive, Orientation::Sum) => BinOp::Sum,
        (Operation::Additive, Orientation::Correlation) => BinOp::Difference,
        (Operation::Multiplicative, Orientation::Sum) => BinOp::Product,
        (Operation::Multiplicative, Orientation::Correlation) => {
            if b.contains_zero() {
                return Err(Error::domain("multiplicative correlation with 0 in B"));
            }
            BinOp::Ratio
        }
    };
    let mut counts: FxHashMap<Rational, u64> = FxHashMap::default();
    for x in a {
        for y in b {
            *counts.entry(apply(kind, x, y)).or_insert(0) += 1;
        }
    }
    Ok(crate::set::CountMap::from_hashmap(counts))
}

/// Self-correlation `r(x) = (A∘A)(x)`.
pub fn self_correlation(a: &RSet, op: Operation) -> Result<crate::set::CountMap> {
    convolution(a, a, op, Orientation::Correlation)
}

/// Fiber `A_s`: `A ∩ (A - s)` additively, `A ∩ A s^{-1}` multiplicatively.
pub fn fiber(a: &RSet, s: &Rational, op: Operation) -> Result<RSet> {
    match op {
        Operation::Additive => Ok(RSet::from_values(
            a.iter().filter(|x| a.contains(&(*x + s))).cloned(),
        )),
        Operation::Multiplicative => {
            if s.is_zero() {
                return Err(Error::domain("multiplicative fiber at 0"));
            }
            Ok(RSet::from_values(
                a.iter().filter(|x| a.contains(&(*x * s))).cloned(),
            ))
        }
    }
}

/// All nonempty multiplicative fibers `A_q` for `q ∈ A:A`, in increasing `q`.
///
/// Built in one pass over pairs: `b ∈ A_q` iff `bq ∈ A`, i.e. `q = a/b`.
pub fn multiplicative_fibers(a: &RSet) -> Result<Vec<(Rational, RSet)>> {
    if a.contains_zero() {
        return Err(Error::domain("multiplicative fibers need 0 ∉ A"));
    }
    let mut by_q: FxHashMap<Rational, Vec<Rational>> = FxHashMap::default();
    for x in a {
        for b in a {
            by_q.entry(x / b).or_default().push(b.clone());
        }
    }
    let mut out: Vec<(Rational, RSet)> = by_q
        .into_iter()
        .map(|(q, members)| (q, RSet::from_values(members)))
        .collect();
    out.sort_unstable_by(|x, y| x.0.cmp(&y.0));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnergySpec {
    pub operation: Operation,
    /// Exponent, at least 1.
    pub alpha: Rational,
    /// Decimal digits kept for non-integer exponents, at least 15.
    pub precision: u32,
}

pub const DEFAULT_ENERGY_DIGITS: u32 = 40;

impl EnergySpec {
    pub fn new(operation: Operation, alpha: Rational) -> Self {
        EnergySpec {
            operation,
            alpha,
            precision: DEFAULT_ENERGY_DIGITS,
        }
    }

    pub fn additive(alpha: i64) -> Self {
        Self::new(Operation::Additive, Rational::from(alpha))
    }

    pub fn multiplicative(alpha: i64) -> Self {
        Self::new(Operation::Multiplicative, Rational::from(alpha))
    }

    fn validate(&self) -> Result<()> {
        if self.alpha < Rational::one() {
            return Err(Error::domain("energy exponent must be at least 1"));
        }
        if self.precision < 15 {
            return Err(Error::domain("energy precision must be at least 15 digits"));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EnergyValue {
    Exact(BigUint),
    Approx(Decimal),
}

impl EnergyValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            EnergyValue::Exact(n) => num_traits::ToPrimitive::to_f64(n).unwrap_or(f64::INFINITY),
            EnergyValue::Approx(d) => d.to_f64(),
        }
    }

    pub fn exact(&self) -> Option<&BigUint> {
        match self {
            EnergyValue::Exact(n) => Some(n),
            EnergyValue::Approx(_) => None,
        }
    }
}

impl std::fmt::Display for EnergyValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            EnergyValue::Exact(n) => write!(f, "{n}"),
            EnergyValue::Approx(d) => write!(f, "{d}"),
        }
    }
}

/// `E_α(A) = Σ_x (A∘A)(x)^α`.
pub fn energy(a: &RSet, spec: &EnergySpec) -> Result<EnergyValue> {
    spec.validate()?;
    if a.is_empty() {
        return Err(Error::domain("energy of the empty set"));
    }
    let r = self_correlation(a, spec.operation)?;
    if let Some(k) = spec.alpha.to_i64() {
        let k = u32::try_from(k).map_err(|_| Error::domain("energy exponent too large"))?;
        let total: BigUint = r.counts().map(|c| BigUint::from(c).pow(k)).sum();
        return Ok(EnergyValue::Exact(total));
    }
    let terms: Result<Vec<Decimal>> = r
        .counts()
        .map(|c| Decimal::power(c, &spec.alpha, spec.precision))
        .collect();
    Ok(EnergyValue::Approx(terms?.into_iter().sum()))
}

/// Integer-exponent energy as a `u128`; panics only on overflow of astronomically large inputs.
pub fn energy_k(a: &RSet, k: u32, op: Operation) -> Result<u128> {
    if a.is_empty() {
        return Err(Error::domain("energy of the empty set"));
    }
    let r = self_correlation(a, op)?;
    Ok(r.counts().map(|c| (c as u128).pow(k)).sum())
}

pub const DEFAULT_ORACLE_BUDGET: u128 = 100_000_000;

/// `E_k(A) = Σ_{s_1..s_{k-1}} |A_s|^2` by direct enumeration of fibers.
///
/// Shifts range over `A - A` (or `A:A`), outside of which every fiber is empty.
pub fn energy_fiber_oracle(a: &RSet, k: u32, op: Operation, budget: u128) -> Result<u128> {
    if k < 2 {
        return Err(Error::domain("fiber oracle needs k >= 2"));
    }
    let cost = (a.len() as u128).saturating_pow(2 * (k - 1));
    if cost > budget {
        return Err(Error::resource(format!(
            "fiber oracle cost |A|^{} = {cost} exceeds budget {budget}",
            2 * (k - 1)
        )));
    }
    if op == Operation::Multiplicative && a.contains_zero() {
        return Err(Error::domain("multiplicative fibers need 0 ∉ A"));
    }
    let mut shifts: Vec<Rational> = Vec::new();
    for x in a {
        for y in a {
            shifts.push(match op {
                Operation::Additive => x - y,
                Operation::Multiplicative => x / y,
            });
        }
    }
    shifts.sort_unstable();
    shifts.dedup();

    let arity = (k - 1) as usize;
    let mut idx = vec![0usize; arity];
    let mut total: u128 = 0;
    loop {
        let size = a
            .iter()
            .filter(|x| {
                idx.iter().all(|&i| {
                    let moved = match op {
                        Operation::Additive => *x + &shifts[i],
                        Operation::Multiplicative => *x * &shifts[i],
                    };
                    a.contains(&moved)
                })
            })
            .count() as u128;
        total += size * size;
        // odometer increment
        let mut pos = 0;
        loop {
            if pos == arity {
                return Ok(total);
            }
            idx[pos] += 1;
            if idx[pos] < shifts.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// `E(A,B) = Σ_x (A∘A)(x)(B∘B)(x)`.
pub fn cross_energy(a: &RSet, b: &RSet, op: Operation) -> Result<u128> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::domain("cross energy of an empty set"));
    }
    let ra = self_correlation(a, op)?;
    let rb = self_correlation(b, op)?;
    Ok(ra
        .iter()
        .map(|(x, c)| c as u128 * rb.get(x) as u128)
        .sum())
}

/// `Σ_x (A∘A)(x)(B∘B)(x)(C∘C)(x)`.
pub fn triple_correlation(a: &RSet, b: &RSet, c: &RSet, op: Operation) -> Result<u128> {
    if a.is_empty() || b.is_empty() || c.is_empty() {
        return Err(Error::domain("triple correlation of an empty set"));
    }
    let ra = self_correlation(a, op)?;
    let rb = self_correlation(b, op)?;
    let rc = self_correlation(c, op)?;
    Ok(ra
        .iter()
        .map(|(x, n)| n as u128 * rb.get(x) as u128 * rc.get(x) as u128)
        .sum())
}

/// Coordinatewise `P ∘ Q`.
pub fn planar_setop(p: &PlanarSet, q: &PlanarSet, kind: PlanarOp) -> PlanarSet {
    let mut out = FxHashSet::default();
    out.reserve(p.len() * q.len());
    for (x1, y1) in p.iter() {
        for (x2, y2) in q.iter() {
            out.insert(match kind {
                PlanarOp::Sum => (x1 + x2, y1 + y2),
                PlanarOp::Difference => (x1 - x2, y1 - y2),
                PlanarOp::CoordinateProduct => (x1 * x2, y1 * y2),
            });
        }
    }
    PlanarSet::from_hashset(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{cartesian, diagonal};

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    fn ints(v: &[i64]) -> RSet {
        RSet::from_integers(v.iter().copied())
    }

    #[test]
    fn setop_examples() {
        let a = ints(&[1, 2, 3]);
        assert_eq!(setop(&a, &a, BinOp::Sum).unwrap(), ints(&[2, 3, 4, 5, 6]));
        let g = ints(&[1, 2, 4]);
        assert_eq!(setop(&g, &g, BinOp::Product).unwrap(), ints(&[1, 2, 4, 8, 16]));
        let h = ints(&[1, 2]);
        assert_eq!(
            setop(&h, &h, BinOp::Ratio).unwrap(),
            RSet::from_values([q("1/2"), q("1"), q("2")])
        );
        assert!(setop(&h, &ints(&[0, 1]), BinOp::Ratio).is_err());
    }

    #[test]
    fn dilate_translate() {
        assert_eq!(
            dilate(&ints(&[1, 2, 4]), &q("1/2")).unwrap(),
            RSet::from_values([q("1/2"), q("1"), q("2")])
        );
        assert_eq!(translate(&ints(&[1, 2]), &q("-1")), ints(&[0, 1]));
        assert!(dilate(&RSet::empty(), &q("3")).unwrap().is_empty());
        assert!(dilate(&ints(&[1]), &Rational::zero()).is_err());
    }

    #[test]
    fn correlation_values() {
        let a = ints(&[1, 2, 3]);
        let r = convolution(&a, &a, Operation::Additive, Orientation::Correlation).unwrap();
        assert_eq!(r.get(&q("0")), 3);
        assert_eq!(r.get(&q("1")), 2);
        let g = ints(&[1, 2, 4]);
        let r = convolution(&g, &g, Operation::Multiplicative, Orientation::Correlation).unwrap();
        assert_eq!(r.get(&q("2")), 2);
        assert!(convolution(&g, &ints(&[0]), Operation::Multiplicative, Orientation::Correlation)
            .is_err());
    }

    #[test]
    fn sum_convolution_mass() {
        let a = ints(&[0, 1, 5]);
        let b = ints(&[2, 3]);
        let r = convolution(&a, &b, Operation::Additive, Orientation::Sum).unwrap();
        assert_eq!(r.total_mass(), 6);
        assert_eq!(r.support(), a.plus(&b));
    }

    #[test]
    fn energy_examples() {
        let e = |v: &[i64], k| energy(&ints(v), &EnergySpec::additive(k)).unwrap();
        assert_eq!(e(&[1, 2, 3], 2), EnergyValue::Exact(BigUint::from(19u32)));
        assert_eq!(e(&[1, 2, 4], 2), EnergyValue::Exact(BigUint::from(15u32)));
        assert_eq!(e(&[1, 2, 3], 3), EnergyValue::Exact(BigUint::from(45u32)));
        assert!(energy(&RSet::empty(), &EnergySpec::additive(2)).is_err());
    }

    #[test]
    fn three_halves_energy() {
        // r = (3, 2, 2, 1, 1): 3^{1.5} + 2·2^{1.5} + 2 = 12.853...
        let v = energy(
            &ints(&[1, 2, 3]),
            &EnergySpec::new(Operation::Additive, q("3/2")),
        )
        .unwrap();
        let expected = 3f64.powf(1.5) + 2.0 * 2f64.powf(1.5) + 2.0;
        assert!((v.to_f64() - expected).abs() < 1e-12);
        match v {
            EnergyValue::Approx(d) => assert!(d.error_bound() <= 1e-30),
            EnergyValue::Exact(_) => panic!("expected an approximate value"),
        }
    }

    #[test]
    fn energy_spec_validation() {
        let a = ints(&[1, 2]);
        assert!(energy(&a, &EnergySpec::new(Operation::Additive, q("1/2"))).is_err());
        let mut spec = EnergySpec::additive(2);
        spec.precision = 10;
        assert!(energy(&a, &spec).is_err());
    }

    #[test]
    fn fiber_oracle_examples() {
        let b = DEFAULT_ORACLE_BUDGET;
        assert_eq!(energy_fiber_oracle(&ints(&[1, 2, 3]), 2, Operation::Additive, b).unwrap(), 19);
        assert_eq!(energy_fiber_oracle(&ints(&[0]), 2, Operation::Additive, b).unwrap(), 1);
        assert_eq!(energy_fiber_oracle(&ints(&[1, 2, 3]), 3, Operation::Additive, b).unwrap(), 45);
        assert!(matches!(
            energy_fiber_oracle(&ints(&[1, 2, 3, 4]), 3, Operation::Additive, 10),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn cross_and_triple() {
        let a = ints(&[1, 2, 3]);
        assert_eq!(cross_energy(&a, &a, Operation::Additive).unwrap(), 19);
        assert_eq!(triple_correlation(&a, &a, &a, Operation::Additive).unwrap(), 45);
        // r_A = {0:2, ±1:1}, r_B = {0:2, ±2:1}; only x = 0 is shared
        assert_eq!(
            cross_energy(&ints(&[0, 1]), &ints(&[0, 2]), Operation::Additive).unwrap(),
            4
        );
    }

    #[test]
    fn fiber_examples() {
        assert_eq!(
            fiber(&ints(&[1, 2, 3]), &q("1"), Operation::Additive).unwrap(),
            ints(&[1, 2])
        );
        assert_eq!(
            fiber(&ints(&[1, 2, 4]), &q("2"), Operation::Multiplicative).unwrap(),
            ints(&[1, 2])
        );
        assert!(fiber(&ints(&[1, 2, 4]), &q("7"), Operation::Additive)
            .unwrap()
            .is_empty());
        assert!(fiber(&ints(&[1]), &Rational::zero(), Operation::Multiplicative).is_err());
    }

    #[test]
    fn all_fibers_match_single_fibers() {
        let a = ints(&[1, 2, 3, 4, 6, 9]);
        for (s, f) in multiplicative_fibers(&a).unwrap() {
            assert_eq!(f, fiber(&a, &s, Operation::Multiplicative).unwrap());
        }
    }

    #[test]
    fn planar_examples() {
        let p = PlanarSet::from_points([(q("0"), q("0")), (q("1"), q("1"))]);
        let z = PlanarSet::from_points([(q("0"), q("0"))]);
        assert_eq!(planar_setop(&p, &z, PlanarOp::Difference), p);
        let b = ints(&[0, 1]);
        let d = planar_setop(&cartesian(&b, &b), &diagonal(&b), PlanarOp::Difference);
        assert_eq!(d.len(), 7);
        let prod = planar_setop(
            &PlanarSet::from_points([(q("1"), q("2"))]),
            &PlanarSet::from_points([(q("3"), q("5"))]),
            PlanarOp::CoordinateProduct,
        );
        assert_eq!(prod, PlanarSet::from_points([(q("3"), q("10"))]));
    }
}
