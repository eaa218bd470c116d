//! Measured records for the asymptotic statements. Each record keeps the
//! right-hand side with its implied constant stripped and its log factor
//! (base 2) kept, so `ratio` estimates that constant.

use crate::error::{Error, Result};
use crate::ledger::ids;
use crate::quantities::doubling::{d_upper, CandidateFamily};
use crate::rational::Rational;
use crate::record::{CheckRecord, Direction, Num};
use crate::set::{cartesian, diagonal, RSet};
use crate::setops::{
    cross_energy, energy, energy_k, planar_setop, triple_correlation, EnergySpec, Operation,
    PlanarOp,
};

pub fn log2(n: usize) -> f64 {
    (n as f64).log2()
}

fn measured(
    id: &str,
    lhs: Num,
    rhs: f64,
    direction: Direction,
    inputs: &[&RSet],
) -> Result<CheckRecord> {
    if !(rhs.is_finite() && rhs > 0.0) {
        return Err(Error::domain(format!("{id}: degenerate right-hand side {rhs}")));
    }
    Ok(CheckRecord::measured(id, lhs, Num::approx(rhs), direction, inputs))
}

fn measured_exact(
    id: &str,
    lhs: Rational,
    rhs: Rational,
    direction: Direction,
    inputs: &[&RSet],
) -> Result<CheckRecord> {
    if !rhs.is_positive() {
        return Err(Error::domain(format!("{id}: degenerate right-hand side {rhs}")));
    }
    Ok(CheckRecord::measured(id, Num::exact(lhs), Num::exact(rhs), direction, inputs))
}

fn size(n: usize) -> Num {
    Num::from(n)
}

fn big(n: u128) -> Num {
    match u64::try_from(n) {
        Ok(v) => Num::exact(Rational::from(v)),
        Err(_) => Num::approx(n as f64),
    }
}

fn need_zero_free(a: &RSet, what: &str) -> Result<()> {
    if a.contains_zero() {
        Err(Error::domain(format!("{what} needs 0 ∉ A")))
    } else {
        Ok(())
    }
}

fn need_size(a: &RSet, n: usize, what: &str) -> Result<()> {
    if a.len() < n {
        Err(Error::domain(format!("{what} needs |A| >= {n}")))
    } else {
        Ok(())
    }
}

fn ratio_set(a: &RSet) -> Result<RSet> {
    a.over(a)
}

/// `|AC+A||BC+B| ≫ |A||B||C|` and `|AC+AD||BC+BD| ≫ |B/A||C||D|`.
pub fn check_balog_scalar(a: &RSet, b: &RSet, c: &RSet, d: &RSet) -> Result<Vec<CheckRecord>> {
    let first = a.times(c).plus(a).len() * b.times(c).plus(b).len();
    let mut out = vec![measured_exact(
        ids::BALOG_SCALAR,
        Rational::from(first),
        Rational::from(a.len() * b.len() * c.len()),
        Direction::Lower,
        &[a, b, c],
    )?];
    if !a.contains_zero() {
        let second = a.times(c).plus(&a.times(d)).len() * b.times(c).plus(&b.times(d)).len();
        out.push(measured_exact(
            ids::BALOG_SCALAR_SHIFTED,
            Rational::from(second),
            Rational::from(b.over(a)?.len() * c.len() * d.len()),
            Direction::Lower,
            &[a, b, c, d],
        )?);
    }
    Ok(out)
}

/// `|(A×B)·Δ(C) + A×B| ≫ |A||B||C|`.
pub fn check_balog_planar(a: &RSet, b: &RSet, c: &RSet) -> Result<CheckRecord> {
    need_zero_free(c, "planar Balog check on C")?;
    let ab = cartesian(a, b);
    let dilated = planar_setop(&ab, &diagonal(c), PlanarOp::CoordinateProduct);
    let lhs = planar_setop(&dilated, &ab, PlanarOp::Sum).len();
    measured_exact(
        ids::BALOG_PLANAR,
        Rational::from(lhs),
        Rational::from(a.len() * b.len() * c.len()),
        Direction::Lower,
        &[a, b, c],
    )
}

/// The five lower bounds for `|A:A+A|`, `|AA+A|`, `|A:A+A:A|`, `|AA+AA|`.
pub fn check_main_theorems(a: &RSet) -> Result<Vec<CheckRecord>> {
    need_zero_free(a, "growth bounds")?;
    need_size(a, 2, "growth bounds")?;
    let n = a.len() as f64;
    let l = log2(a.len());
    let aa = a.times(a);
    let rr = ratio_set(a)?;
    let (p, r) = (aa.len() as f64, rr.len() as f64);
    let e32 = energy(
        a,
        &EnergySpec::new(Operation::Multiplicative, Rational::new(3, 2)?),
    )?
    .to_f64();

    let rr_plus_a = rr.plus(a).len();
    let aa_plus_a = aa.plus(a).len();
    let rr_plus_rr = rr.plus(&rr).len();
    let aa_plus_aa = aa.plus(&aa).len();

    Ok(vec![
        measured(
            ids::RATIO_PLUS_SET,
            size(rr_plus_a),
            n.powf(1.5 + 1.0 / 82.0) * l.powf(-2.0 / 41.0),
            Direction::Lower,
            &[a],
        )?,
        measured(
            ids::PRODUCT_PLUS_SET,
            size(aa_plus_a),
            p.powf(11.0 / 41.0) * r.powf(-11.0 / 41.0) * n.powf(62.0 / 41.0) * l.powf(-2.0 / 41.0),
            Direction::Lower,
            &[a],
        )?
        .with_detail("ratio_over_product_set", Rational::new(rr.len() as i64, aa.len() as i64)?),
        measured(
            ids::PRODUCT_PLUS_SET_ENERGY,
            size(aa_plus_a),
            p.powf(11.0 / 41.0) * n.powf(-4.0 / 41.0) * e32.powf(22.0 / 41.0) * l.powf(-2.0 / 41.0),
            Direction::Lower,
            &[a],
        )?,
        measured(
            ids::RATIO_PLUS_RATIO,
            size(rr_plus_rr),
            r.powf(14.0 / 29.0) * n.powf(30.0 / 29.0) * l.powf(-2.0 / 29.0),
            Direction::Lower,
            &[a],
        )?,
        measured(
            ids::PRODUCT_PLUS_PRODUCT,
            size(aa_plus_aa),
            p.powf(19.0 / 29.0) * r.powf(-5.0 / 29.0) * n.powf(30.0 / 29.0) * l.powf(-2.0 / 29.0),
            Direction::Lower,
            &[a],
        )?,
    ])
}

/// `c(A) = |A| · d_upper(A)`.
pub fn szt_constant(a: &RSet, family: &CandidateFamily) -> Result<Rational> {
    Ok(&Rational::from(a.len()) * &d_upper(a, family)?.value)
}

/// Energy bounds for sets of Szemerédi–Trotter type with `α = 2`.
pub fn check_li_lemma(
    a: &RSet,
    b: &RSet,
    c: &RSet,
    family: &CandidateFamily,
) -> Result<Vec<CheckRecord>> {
    let ca = szt_constant(a, family)?;
    let n = a.len() as f64;
    let e2 = energy_k(a, 2, Operation::Additive)?;
    let e32 = energy(a, &EnergySpec::new(Operation::Additive, Rational::new(3, 2)?))?.to_f64();
    let mut out = vec![
        measured(
            ids::SZT_ENERGY_HOLDER,
            Num::approx((e2 as f64).powi(3)),
            e32 * e32 * ca.to_f64() * n * n,
            Direction::Upper,
            &[a],
        )?
        .with_detail("c", &ca),
        measured(
            ids::SZT_ENERGY,
            big(e2),
            ca.to_f64().sqrt() * n * n,
            Direction::Upper,
            &[a],
        )?
        .with_detail("c", &ca),
    ];
    let m = a.len().min(b.len()).min(c.len());
    if m >= 2 {
        let cb = szt_constant(b, family)?;
        let cc = szt_constant(c, family)?;
        let t = triple_correlation(a, b, c, Operation::Additive)?;
        let sizes = (a.len() * b.len() * c.len()) as f64;
        let cs = (ca.to_f64() * cb.to_f64() * cc.to_f64()).cbrt();
        out.push(measured(
            ids::SZT_TRIPLE,
            big(t),
            cs * sizes.powf(2.0 / 3.0) * log2(m),
            Direction::Upper,
            &[a, b, c],
        )?);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// `|A ± A*|` against the max/min expression in `d(A)`, `d(A*)`, with the
/// doubling functional replaced by its witnessed upper bound.
pub fn check_main_diff(
    a: &RSet,
    a_star: &RSet,
    sign: Sign,
    family: &CandidateFamily,
) -> Result<CheckRecord> {
    if a.len() < 2 || a_star.len() < 2 {
        return Err(Error::domain("sumset bound is degenerate for a singleton"));
    }
    let d = d_upper(a, family)?.value.to_f64();
    let ds = d_upper(a_star, family)?.value.to_f64();
    let (n, ns) = (a.len() as f64, a_star.len() as f64);
    let t1 = ds.powf(-1.0 / 3.0) * d.powf(-2.0 / 9.0) * ns.powf(8.0 / 9.0) * n.powf(2.0 / 3.0);
    let t2 = d.powf(-1.0 / 3.0) * ds.powf(-2.0 / 9.0) * n.powf(8.0 / 9.0) * ns.powf(2.0 / 3.0);
    let m1 = ds.powf(-2.0 / 27.0) * d.powf(-13.0 / 27.0) * ns.powf(14.0 / 9.0);
    let m2 = d.powf(-2.0 / 27.0) * ds.powf(-13.0 / 27.0) * n.powf(14.0 / 9.0);
    let core = t1.max(t2).max(m1.min(m2));
    let rhs = core * log2(a.len() * a_star.len()).powf(-2.0 / 9.0);
    let (lhs, variant) = match sign {
        Sign::Plus => (a.plus(a_star).len(), "plus"),
        Sign::Minus => (a.minus(a_star).len(), "minus"),
    };
    Ok(
        measured(ids::SZT_PAIR_SUMSET, size(lhs), rhs, Direction::Lower, &[a, a_star])?
            .with_variant(variant)
            .with_detail("d_upper", d)
            .with_detail("d_upper_star", ds),
    )
}

/// Fourth- and second-power bounds for `|AA+A|`, `|A:A+A|`, `|AA+AA|`,
/// `|A:A+A:A|`; eight records.
pub fn check_proposition1(a: &RSet) -> Result<Vec<CheckRecord>> {
    need_zero_free(a, "mixed energy bounds")?;
    need_size(a, 2, "mixed energy bounds")?;
    let n = a.len() as f64;
    let l = log2(a.len());
    let e3 = energy_k(a, 3, Operation::Additive)? as f64;
    let em32 = energy(
        a,
        &EnergySpec::new(Operation::Multiplicative, Rational::new(3, 2)?),
    )?
    .to_f64();
    let diff = a.minus(a).len() as f64;
    let aa = a.times(a);
    let rr = ratio_set(a)?;
    let r = rr.len() as f64;

    let rhs_fourth_energy = n.powi(-2) * em32 * em32 * e3 / l;
    let rhs_square_energy = e3 / l;
    let rhs_fourth_diff = n.powi(10) / (r * diff * diff);
    let rhs_square_diff = n.powi(6) / (diff * diff);

    let mut out = Vec::with_capacity(8);
    for (variant, base) in [("product", &aa), ("ratio", &rr)] {
        let single = base.plus(a).len() as f64;
        let pair = base.plus(base).len() as f64;
        out.push(
            measured(
                ids::MIXED_FOURTH_ENERGY,
                Num::approx(single.powi(4)),
                rhs_fourth_energy,
                Direction::Lower,
                &[a],
            )?
            .with_variant(variant),
        );
        out.push(
            measured(
                ids::MIXED_SQUARE_ENERGY,
                Num::approx(pair.powi(2)),
                rhs_square_energy,
                Direction::Lower,
                &[a],
            )?
            .with_variant(variant),
        );
        out.push(
            measured(
                ids::MIXED_FOURTH_DIFFERENCE,
                Num::approx(single.powi(4)),
                rhs_fourth_diff,
                Direction::Lower,
                &[a],
            )?
            .with_variant(variant),
        );
        out.push(
            measured(
                ids::MIXED_SQUARE_DIFFERENCE,
                Num::approx(pair.powi(2)),
                rhs_square_diff,
                Direction::Lower,
                &[a],
            )?
            .with_variant(variant),
        );
    }
    Ok(out)
}

/// `E⁺(A) ≪ |A||AA+AA|` and `E⁺(A)^{3/2} E^×_{3/2}(A) ≪ E⁺_{3/2}(A)|A||AA+A|²`.
pub fn check_remark_energy(a: &RSet) -> Result<Vec<CheckRecord>> {
    need_zero_free(a, "energy bounds")?;
    let aa = a.times(a);
    let e2 = energy_k(a, 2, Operation::Additive)?;
    let three_halves = Rational::new(3, 2)?;
    let ea32 = energy(a, &EnergySpec::new(Operation::Additive, three_halves.clone()))?.to_f64();
    let em32 = energy(a, &EnergySpec::new(Operation::Multiplicative, three_halves))?.to_f64();
    let n = a.len();
    let aa_plus_a = aa.plus(a).len() as f64;
    Ok(vec![
        measured_exact(
            ids::ENERGY_VS_PRODUCT_SUMSET,
            Rational::from(e2 as u64),
            Rational::from(n * aa.plus(&aa).len()),
            Direction::Upper,
            &[a],
        )?,
        measured(
            ids::ENERGY_THREE_HALVES,
            Num::approx((e2 as f64).powf(1.5) * em32),
            ea32 * n as f64 * aa_plus_a * aa_plus_a,
            Direction::Upper,
            &[a],
        )?,
    ])
}

/// Largest `|X∘Y|` pair count evaluated for the corollary's conditions.
pub const DEFAULT_CONDITION_BUDGET: u64 = 4_000_000;

fn condition_size(s: &RSet, budget: u64) -> Option<usize> {
    let p = s.times(s);
    if (p.len() as u64).pow(2) > budget {
        return None;
    }
    Some(p.plus(&p).len())
}

/// Reports the hypotheses and conclusions of the small-doubling corollary for
/// one set; nothing is asserted.
pub fn check_rnz_corollary(a: &RSet, budget: u64) -> Result<CheckRecord> {
    need_size(a, 2, "small-doubling corollary")?;
    let n = a.len();
    let nf = n as f64;
    let l = log2(n);
    let sum = a.plus(a);
    let diff = a.minus(a);
    let e2 = energy_k(a, 2, Operation::Additive)? as f64;
    let n2 = nf * nf;
    let mut rec = measured(
        ids::RNZ_COROLLARY,
        size(diff.len()),
        nf * l.powf(4.0 / 7.0),
        Direction::Upper,
        &[a],
    )?
    .with_detail("energy_condition_ratio", e2 * diff.len() as f64 / n2.powi(2))
    .with_detail("sum_conclusion_ratio", sum.len() as f64 / (nf * l))
    .with_detail("difference_conclusion_ratio", diff.len() as f64 / (nf * l));
    for (key, s) in [("sum_product_condition_ratio", &sum), ("difference_product_condition_ratio", &diff)] {
        rec = match condition_size(s, budget) {
            Some(v) => rec.with_detail(key, v as f64 / n2),
            None => rec.with_detail(key, "skipped: over budget"),
        };
    }
    Ok(rec)
}

/// `E^×(A,B) ≪ |A+A||B+B| log min(|A|,|B|)`.
pub fn check_solymosi_energy(a: &RSet, b: &RSet) -> Result<CheckRecord> {
    need_zero_free(a, "multiplicative energy bound")?;
    need_zero_free(b, "multiplicative energy bound")?;
    let m = a.len().min(b.len());
    let e = cross_energy(a, b, Operation::Multiplicative)?;
    measured(
        ids::SOLYMOSI_ENERGY,
        big(e),
        (a.plus(a).len() * b.plus(b).len()) as f64 * log2(m),
        Direction::Upper,
        &[a, b],
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> RSet {
        RSet::from_integers(v.iter().copied())
    }

    #[test]
    fn balog_examples() {
        let a = ints(&[1, 2, 4]);
        let recs = check_balog_scalar(&a, &a, &a, &a).unwrap();
        let acpa = a.times(&a).plus(&a).len();
        assert_eq!(recs[0].lhs.exact, Some(Rational::from(acpa * acpa)));
        assert_eq!(recs[0].rhs_core.exact, Some(Rational::from(27)));
        assert_eq!(recs.len(), 2);

        let b = ints(&[1, 2]);
        let r = check_balog_planar(&b, &b, &ints(&[1])).unwrap();
        assert_eq!(r.lhs.exact, Some(Rational::from(9)));
        assert_eq!(r.rhs_core.exact, Some(Rational::from(4)));

        let one = ints(&[1]);
        let r = check_balog_planar(&one, &one, &one).unwrap();
        assert_eq!(r.lhs.exact, Some(Rational::from(1)));
        assert_eq!(r.rhs_core.exact, Some(Rational::from(1)));
    }

    #[test]
    fn identity_dilation() {
        let a = ints(&[1, 3, 4]);
        let b = ints(&[2, 5]);
        let one = ints(&[1]);
        let recs = check_balog_scalar(&a, &b, &one, &one).unwrap();
        let expect = a.plus(&a).len() * b.plus(&b).len();
        assert_eq!(recs[0].lhs.exact, Some(Rational::from(expect)));
        assert_eq!(recs[0].rhs_core.exact, Some(Rational::from(6)));
    }

    #[test]
    fn main_theorem_records() {
        let a = RSet::from_integers(1..=16);
        let recs = check_main_theorems(&a).unwrap();
        assert_eq!(recs.len(), 5);
        assert!(recs.iter().all(|r| r.ratio.value > 0.0 && r.ratio.value.is_finite()));
        assert!(check_main_theorems(&ints(&[1, 2])).is_ok());
        assert!(check_main_theorems(&ints(&[3])).is_err());
    }

    #[test]
    fn proposition_and_remark() {
        let a = RSet::from_integers(1..=12);
        assert_eq!(check_proposition1(&a).unwrap().len(), 8);
        let tiny = ints(&[1, 2]);
        let r = check_remark_energy(&tiny).unwrap();
        // E+({1,2}) = 6, |AA+AA| = |{2,3,4,5,6,8}| = 6
        assert_eq!(r[0].lhs.exact, Some(Rational::from(6)));
        assert_eq!(r[0].rhs_core.exact, Some(Rational::from(12)));
    }

    #[test]
    fn pair_sumset_and_li() {
        let a = RSet::from_integers(1..=8);
        let fam = CandidateFamily::default();
        assert!(check_main_diff(&a, &a, Sign::Plus, &fam).is_ok());
        assert!(check_main_diff(&ints(&[2]), &a, Sign::Minus, &fam).is_err());
        let recs = check_li_lemma(&a, &a, &a, &fam).unwrap();
        assert_eq!(recs.len(), 3);
        // diagonal triple correlation is E_3
        assert_eq!(
            recs[2].lhs.exact,
            Some(Rational::from(energy_k(&a, 3, Operation::Additive).unwrap() as u64))
        );
    }

    #[test]
    fn solymosi_and_corollary() {
        let a = ints(&[1, 2]);
        let r = check_solymosi_energy(&a, &a).unwrap();
        // E×({1,2}) = 6, |A+A|² log 2 = 9
        assert_eq!(r.lhs.exact, Some(Rational::from(6)));
        assert_eq!(r.rhs_core.value, 9.0);
        let r = check_rnz_corollary(&RSet::from_integers(1..=12), DEFAULT_CONDITION_BUDGET).unwrap();
        assert!(r.details.contains_key("sum_product_condition_ratio"));
    }
}
