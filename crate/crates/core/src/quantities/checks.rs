//! Exact structural inequalities: Plünnecke-type magnification, the Ruzsa
//! triangle, Katz–Koester inclusions and the product-set doubling bound.

use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::ledger::ids;
use crate::quantities::magnification::{magnification_ratio, DEFAULT_SUBSET_CAP};
use crate::rational::Rational;
use crate::record::{CheckRecord, Kind, Verdict};
use crate::set::{cartesian, diagonal, RSet};
use crate::setops::{fiber, planar_setop, Operation, PlanarOp};

/// `|B+C+X| ≤ R_B[A] · |C+X|` with `X` the minimizer of the magnification ratio.
pub fn petridis_check(a: &RSet, b: &RSet, c: &RSet) -> Result<CheckRecord> {
    petridis_check_capped(a, b, c, DEFAULT_SUBSET_CAP)
}

pub fn petridis_check_capped(a: &RSet, b: &RSet, c: &RSet, cap: usize) -> Result<CheckRecord> {
    let m = magnification_ratio(a, b, Operation::Additive, cap)?;
    let cx = c.plus(&m.minimizer);
    let bcx = b.plus(&cx);
    let rhs = &m.ratio * &Rational::from(cx.len());
    Ok(CheckRecord::exact_upper(ids::PETRIDIS, Rational::from(bcx.len()), rhs, &[a, b, c])
        .with_detail("magnification_ratio", &m.ratio)
        .with_detail("minimizer", &m.minimizer)
        .with_detail("c_plus_x", cx.len()))
}

/// `|C||A−B| ≤ |A×B − Δ(C)| ≤ |A−C||B−C|`, both asserted.
pub fn ruzsa_triangle_check(a: &RSet, b: &RSet, c: &RSet) -> CheckRecord {
    let lower = c.len() * a.minus(b).len();
    let middle = planar_setop(&cartesian(a, b), &diagonal(c), PlanarOp::Difference).len();
    let upper = a.minus(c).len() * b.minus(c).len();
    CheckRecord::exact_upper(
        ids::RUZSA_TRIANGLE,
        Rational::from(lower),
        Rational::from(upper),
        &[a, b, c],
    )
    .with_detail("middle", middle)
    .require("lower_le_middle", lower <= middle)
    .require("middle_le_upper", middle <= upper)
}

/// Outcome of one Katz–Koester instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KatzKoesterOutcome {
    pub fiber_size: usize,
    /// `A·A_s ⊆ AA ∩ s^{-1}AA`.
    pub product_holds: bool,
    /// `A:A_s ⊆ A:A ∩ s(A:A)`.
    pub ratio_holds: bool,
    /// `A·A_s ⊆ AA ∩ s·AA`.
    pub printed_product_holds: bool,
    /// `A:A_s ⊆ A:A ∩ s^{-1}(A:A)`.
    pub printed_ratio_holds: bool,
    pub product_image: usize,
    pub product_target: usize,
}

struct KkContext {
    aa: FxHashSet<Rational>,
    ratios: FxHashSet<Rational>,
}

impl KkContext {
    fn new(a: &RSet) -> Result<Self> {
        if a.contains_zero() {
            return Err(Error::domain("Katz–Koester inclusion needs 0 ∉ A"));
        }
        let mut aa = FxHashSet::default();
        let mut ratios = FxHashSet::default();
        for x in a {
            for y in a {
                aa.insert(x * y);
                ratios.insert(x / y);
            }
        }
        Ok(KkContext { aa, ratios })
    }

    fn instance(&self, a: &RSet, s: &Rational) -> Result<KatzKoesterOutcome> {
        let f = fiber(a, s, Operation::Multiplicative)?;
        let prod = a.times(&f);
        let quot = a.over(&f)?;
        let in_aa = |x: &Rational| self.aa.contains(x);
        let in_ratios = |x: &Rational| self.ratios.contains(x);
        let product_target = self.aa.iter().filter(|x| in_aa(&(*x * s))).count();
        Ok(KatzKoesterOutcome {
            fiber_size: f.len(),
            product_holds: prod.iter().all(|x| in_aa(x) && in_aa(&(x * s))),
            ratio_holds: quot.iter().all(|x| in_ratios(x) && in_ratios(&(x / s))),
            printed_product_holds: prod.iter().all(|x| in_aa(x) && in_aa(&(x / s))),
            printed_ratio_holds: quot.iter().all(|x| in_ratios(x) && in_ratios(&(x * s))),
            product_image: prod.len(),
            product_target,
        })
    }
}

/// Katz–Koester inclusions for one `s`, asserted in the orientation that
/// holds for `A_s = A ∩ A s^{-1}`; the other orientation is reported.
pub fn katz_koester_check(a: &RSet, s: &Rational) -> Result<CheckRecord> {
    if s.is_zero() {
        return Err(Error::domain("Katz–Koester inclusion at s = 0"));
    }
    let ctx = KkContext::new(a)?;
    let o = ctx.instance(a, s)?;
    Ok(CheckRecord::exact_upper(
        ids::KATZ_KOESTER,
        Rational::from(o.product_image),
        Rational::from(o.product_target),
        &[a, &RSet::from_values([s.clone()])],
    )
    .with_detail("s", s)
    .with_detail("fiber_size", o.fiber_size)
    .with_detail("as_printed_product", o.printed_product_holds)
    .with_detail("as_printed_ratio", o.printed_ratio_holds)
    .require("product_inclusion", o.product_holds)
    .require("ratio_inclusion", o.ratio_holds))
}

/// Every `s ∈ A:A` at once: one record whose lhs counts failures of the
/// verified orientation (must be 0).
pub fn katz_koester_sweep(a: &RSet) -> Result<CheckRecord> {
    let ctx = KkContext::new(a)?;
    let mut slopes: Vec<&Rational> = ctx.ratios.iter().collect();
    slopes.sort();
    let (mut failures, mut printed_product, mut printed_ratio) = (0usize, 0usize, 0usize);
    for s in &slopes {
        let o = ctx.instance(a, s)?;
        if !(o.product_holds && o.ratio_holds) {
            failures += 1;
        }
        printed_product += o.printed_product_holds as usize;
        printed_ratio += o.printed_ratio_holds as usize;
    }
    Ok(
        CheckRecord::exact_upper(ids::KATZ_KOESTER, Rational::from(failures), Rational::zero(), &[a])
            .with_variant("sweep")
            .with_detail("s_checked", slopes.len())
            .with_detail("as_printed_product_true", printed_product)
            .with_detail("as_printed_ratio_true", printed_ratio),
    )
}

/// `|AAX|²/(|AA||X|) ≤ |AC|⁴/(|AA||C|³)`, where `X ⊆ C` minimizes `|AZ|/|Z|`.
/// The left side is `|AA·X|²/(|AA||X|)`, a witnessed bound for the doubling
/// functional of `AA`.
pub fn d_product_bound_check(a: &RSet, c: &RSet) -> Result<CheckRecord> {
    d_product_bound_check_capped(a, c, DEFAULT_SUBSET_CAP)
}

pub fn d_product_bound_check_capped(a: &RSet, c: &RSet, cap: usize) -> Result<CheckRecord> {
    if a.is_empty() || c.is_empty() {
        return Err(Error::domain("product-set doubling bound needs nonempty sets"));
    }
    if a.contains_zero() {
        return Err(Error::domain("product-set doubling bound needs 0 ∉ A"));
    }
    let m = magnification_ratio(c, a, Operation::Multiplicative, cap)?;
    let x = &m.minimizer;
    let aa = a.times(a);
    let ax = a.times(x).len();
    let aax = aa.times(x).len();
    let ac = a.times(c).len();
    let lhs = Rational::new((aax * aax) as i64, (aa.len() * x.len()) as i64)?;
    let rhs = Rational::from_bigints(
        num_bigint::BigInt::from(ac).pow(4),
        num_bigint::BigInt::from(aa.len()) * num_bigint::BigInt::from(c.len()).pow(3),
    )?;
    let step = Rational::from(aax) <= &m.ratio * &Rational::from(ax);
    Ok(CheckRecord::exact_upper(ids::D_PRODUCT_BOUND, lhs, rhs, &[a, c])
        .with_detail("magnification_ratio", &m.ratio)
        .with_detail("minimizer", x)
        .require("magnification_step", step))
}

/// True when no exact record failed.
pub fn all_exact_pass(records: &[CheckRecord]) -> bool {
    records
        .iter()
        .all(|r| r.kind != Kind::Exact || r.verdict == Verdict::Pass)
}
