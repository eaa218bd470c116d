//! The check registry: every id, its formula, and the runner that emits it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ledger::checks::{self, Sign};
use crate::ledger::ids;
use crate::ledger::suite::SuiteConfig;
use crate::quantities::checks::{
    d_product_bound_check_capped as d_bound, petridis_check_capped as petridis,
};
use crate::quantities::{
    katz_koester_sweep, ruzsa_triangle_check, solymosi_chain, solymosi_pair_chain,
    tau_popularity_count, ChainMode, SlopeFilter,
};
use crate::quantities::szt::level_set_rows;
use crate::rational::Rational;
use crate::record::{CheckRecord, Direction, Kind};
use crate::set::RSet;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckEntry {
    pub id: &'static str,
    /// Plain-text statement of the inequality.
    pub formula: &'static str,
    pub kind: Kind,
    pub direction: Direction,
}

const fn exact(id: &'static str, formula: &'static str) -> CheckEntry {
    CheckEntry { id, formula, kind: Kind::Exact, direction: Direction::Upper }
}

const fn lower(id: &'static str, formula: &'static str) -> CheckEntry {
    CheckEntry { id, formula, kind: Kind::Measured, direction: Direction::Lower }
}

const fn upper(id: &'static str, formula: &'static str) -> CheckEntry {
    CheckEntry { id, formula, kind: Kind::Measured, direction: Direction::Upper }
}

pub const REGISTRY: &[CheckEntry] = &[
    lower(ids::BALOG_SCALAR, "|AC+A||BC+B| >> |A||B||C|"),
    lower(ids::BALOG_SCALAR_SHIFTED, "|AC+AD||BC+BD| >> |B/A||C||D|"),
    lower(ids::BALOG_PLANAR, "|(AxB)·Δ(C) + AxB| >> |A||B||C|"),
    lower(ids::RATIO_PLUS_SET, "|A:A+A| >> |A|^(3/2+1/82) log^(-2/41)|A|"),
    lower(
        ids::PRODUCT_PLUS_SET,
        "|AA+A| >> |AA|^(11/41) |A:A|^(-11/41) |A|^(62/41) log^(-2/41)|A|",
    ),
    lower(
        ids::PRODUCT_PLUS_SET_ENERGY,
        "|AA+A| >> |AA|^(11/41) |A|^(-4/41) E×_{3/2}(A)^(22/41) log^(-2/41)|A|",
    ),
    lower(ids::RATIO_PLUS_RATIO, "|A:A+A:A| >> |A:A|^(14/29) |A|^(30/29) log^(-2/29)|A|"),
    lower(
        ids::PRODUCT_PLUS_PRODUCT,
        "|AA+AA| >> |AA|^(19/29) |A:A|^(-5/29) |A|^(30/29) log^(-2/29)|A|",
    ),
    upper(ids::SZT_LEVEL_SETS, "|{x in A+B : (A*B)(x) >= τ}| << c(A) |B|^2 τ^(-3)"),
    upper(ids::SZT_ENERGY_HOLDER, "E(A)^3 << E_{3/2}(A)^2 c(A) |A|^2"),
    upper(ids::SZT_ENERGY, "E(A) << c(A)^(1/2) |A|^2"),
    upper(
        ids::SZT_TRIPLE,
        "Σ (A∘A)(B∘B)(C∘C) << (c(A)c(B)c(C))^(1/3) (|A||B||C|)^(2/3) log min(|A|,|B|,|C|)",
    ),
    lower(
        ids::SZT_PAIR_SUMSET,
        "|A ± A*| >> max{d(A*)^(-1/3) d(A)^(-2/9) |A*|^(8/9) |A|^(2/3), d(A)^(-1/3) d(A*)^(-2/9) |A|^(8/9) |A*|^(2/3), min{d(A*)^(-2/27) d(A)^(-13/27) |A*|^(14/9), d(A)^(-2/27) d(A*)^(-13/27) |A|^(14/9)}} log^(-2/9)(|A||A*|)",
    ),
    lower(
        ids::MIXED_FOURTH_ENERGY,
        "|AA+A|^4, |A:A+A|^4 >> |A|^(-2) E×_{3/2}(A)^2 E+_3(A) log^(-1)|A|",
    ),
    lower(ids::MIXED_SQUARE_ENERGY, "|AA+AA|^2, |A:A+A:A|^2 >> E+_3(A) log^(-1)|A|"),
    lower(ids::MIXED_FOURTH_DIFFERENCE, "|AA+A|^4, |A:A+A|^4 >> |A|^10 / (|A:A| |A-A|^2)"),
    lower(ids::MIXED_SQUARE_DIFFERENCE, "|AA+AA|^2, |A:A+A:A|^2 >> |A|^6 / |A-A|^2"),
    upper(ids::ENERGY_VS_PRODUCT_SUMSET, "E+(A) << |A| |AA+AA|"),
    upper(ids::ENERGY_THREE_HALVES, "E+(A)^(3/2) E×_{3/2}(A) << E+_{3/2}(A) |A| |AA+A|^2"),
    exact(ids::KATZ_KOESTER, "A·A_s ⊆ AA ∩ s^(-1)AA, A:A_s ⊆ A:A ∩ s(A:A)"),
    upper(
        ids::RNZ_COROLLARY,
        "|(A+A)(A+A)+(A+A)(A+A)| << |A|^2 and E+(A)|A-A| << |A|^4 imply |A-A| << |A| log^(4/7)|A| and |A±A| << |A| log|A|",
    ),
    upper(ids::TAU_COUNT, "|{x : |A ∩ xB| >= τ}| << |A+A||B+B| / τ^2"),
    upper(ids::SOLYMOSI_ENERGY, "E×(A,B) << |A+A||B+B| log min(|A|,|B|)"),
    exact(ids::PETRIDIS, "|B+C+X| <= R_B[A] |C+X|"),
    exact(ids::RUZSA_TRIANGLE, "|C||A-B| <= |AxB - Δ(C)| <= |A-C||B-C|"),
    exact(ids::CHAIN_RATIO_PLUS_SET, "Σ |A_{q_i}| |A_{q_(i+1)}:A| <= |A:A+A|^2"),
    exact(ids::CHAIN_PRODUCT_PLUS_SET, "Σ |A_{q_i}| |A·A_{q_(i+1)}| <= |AA+A|^2"),
    exact(ids::CHAIN_RATIO_PLUS_RATIO, "Σ |A_{q_i}:A| |A_{q_(i+1)}:A| <= |A:A+A:A|^2"),
    exact(ids::CHAIN_PRODUCT_PLUS_PRODUCT, "Σ |A·A_{q_i}| |A·A_{q_(i+1)}| <= |AA+AA|^2"),
    exact(ids::D_PRODUCT_BOUND, "|AAX|^2/(|AA||X|) <= |AC|^4 / (|AA||C|^3)"),
];

pub fn entry(id: &str) -> Option<&'static CheckEntry> {
    REGISTRY.iter().find(|e| e.id == id)
}

pub fn all_ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|e| e.id).collect()
}

/// Resolves a comma-separated filter. Each token is an id or an id prefix
/// ending in `.` (e.g. `growth.`); an empty filter selects everything.
pub fn resolve_filter(filter: &[String]) -> Result<Vec<&'static str>> {
    if filter.is_empty() {
        return Ok(all_ids());
    }
    let mut out = Vec::new();
    for token in filter.iter().flat_map(|f| f.split(',')).map(str::trim) {
        if token.is_empty() {
            continue;
        }
        let hits: Vec<&'static str> = REGISTRY
            .iter()
            .map(|e| e.id)
            .filter(|id| *id == token || (token.ends_with('.') && id.starts_with(token)))
            .collect();
        if hits.is_empty() {
            return Err(Error::Parse(format!("unknown check id {token:?}")));
        }
        out.extend(hits);
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub(crate) type RunFn = fn(&[RSet], &SuiteConfig) -> Result<Vec<CheckRecord>>;

/// A function producing records for one or more ids from a tuple of sets.
pub(crate) struct Runner {
    pub ids: &'static [&'static str],
    pub arity: usize,
    pub run: RunFn,
}

/// Drops 0 from a set used multiplicatively; reports whether it did.
fn zero_free(s: &RSet) -> Result<(RSet, bool)> {
    if !s.contains_zero() {
        return Ok((s.clone(), false));
    }
    let out = s.without(&Rational::zero());
    if out.is_empty() {
        return Err(Error::domain("set is {0}"));
    }
    Ok((out, true))
}

fn zero_free_all(sets: &[RSet]) -> Result<(Vec<RSet>, bool)> {
    let mut changed = false;
    let mut out = Vec::with_capacity(sets.len());
    for s in sets {
        let (t, c) = zero_free(s)?;
        changed |= c;
        out.push(t);
    }
    Ok((out, changed))
}

fn mark(records: Vec<CheckRecord>, removed_zero: bool) -> Vec<CheckRecord> {
    if !removed_zero {
        return records;
    }
    records
        .into_iter()
        .map(|r| r.with_detail("transform", "removed 0"))
        .collect()
}

fn run_balog_scalar(s: &[RSet], _: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    checks::check_balog_scalar(&s[0], &s[1], &s[2], &s[3])
}

fn run_balog_planar(s: &[RSet], cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let (c, z) = zero_free(&s[2])?;
    let grid = (s[0].len() * s[1].len()) as u64;
    let pairs = grid * grid * c.len() as u64;
    if pairs > cfg.condition_budget {
        return Err(Error::resource(format!(
            "planar sumset needs {pairs} point sums, budget {}",
            cfg.condition_budget
        )));
    }
    Ok(mark(vec![checks::check_balog_planar(&s[0], &s[1], &c)?], z))
}

fn run_main(s: &[RSet], _: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let (a, z) = zero_free(&s[0])?;
    Ok(mark(checks::check_main_theorems(&a)?, z))
}

fn run_szt_level(s: &[RSet], cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let (a, z) = zero_free(&s[0])?;
    let b = &s[1];
    let rows = level_set_rows(&a, b)?;
    let best = rows
        .iter()
        .max_by(|x, y| x.ratio.cmp(&y.ratio).then(y.tau.cmp(&x.tau)))
        .expect("nonempty rows");
    let c = checks::szt_constant(&a, &cfg.family)?;
    let b2 = Rational::from(b.len() * b.len());
    let lhs = &best.ratio * &b2;
    let rhs = &c * &b2;
    let rec = CheckRecord::measured(
        ids::SZT_LEVEL_SETS,
        lhs.into(),
        rhs.into(),
        Direction::Upper,
        &[&a, b],
    )
    .with_detail("argmax_tau", best.tau)
    .with_detail("level_set_size", best.level_set_size)
    .with_detail("c", &c);
    Ok(mark(vec![rec], z))
}

fn run_li(s: &[RSet], cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let (t, z) = zero_free_all(s)?;
    Ok(mark(checks::check_li_lemma(&t[0], &t[1], &t[2], &cfg.family)?, z))
}

fn run_pair_sumset(s: &[RSet], cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let (a, z) = zero_free(&s[0])?;
    let mut stars = vec![("self", a.clone())];
    let rr = a.over(&a)?;
    if rr.len() <= cfg.ratio_set_cap {
        stars.push(("ratio_set", rr));
    }
    let mut out = Vec::new();
    for (name, star) in &stars {
        for (sign, tag) in [(Sign::Plus, "plus"), (Sign::Minus, "minus")] {
            let r = checks::check_main_diff(&a, star, sign, &cfg.family)?;
            out.push(r.with_variant(format!("{tag}_{name}")));
        }
    }
    Ok(mark(out, z))
}

fn run_prop1(s: &[RSet], _: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let (a, z) = zero_free(&s[0])?;
    Ok(mark(checks::check_proposition1(&a)?, z))
}

fn run_remark(s: &[RSet], _: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let (a, z) = zero_free(&s[0])?;
    Ok(mark(checks::check_remark_energy(&a)?, z))
}

fn run_rnz(s: &[RSet], cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    Ok(vec![checks::check_rnz_corollary(&s[0], cfg.condition_budget)?])
}

fn run_tau(s: &[RSet], _: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let (b, z) = zero_free(&s[1])?;
    let m = s[0].len().min(b.len()) as u64;
    let mut out = Vec::new();
    let mut tau = 1u64;
    while tau <= m {
        let t = tau_popularity_count(&s[0], &b, tau)?;
        out.push(t.record.with_variant(format!("tau={tau}")));
        tau *= 2;
    }
    Ok(mark(out, z))
}

fn run_solymosi_energy(s: &[RSet], _: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let (t, z) = zero_free_all(s)?;
    Ok(mark(vec![checks::check_solymosi_energy(&t[0], &t[1])?], z))
}

fn run_petridis(s: &[RSet], cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    Ok(vec![petridis(&s[0], &s[1], &s[2], cfg.subset_cap)?])
}

fn run_ruzsa(s: &[RSet], _: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    Ok(vec![ruzsa_triangle_check(&s[0], &s[1], &s[2])])
}

fn run_katz_koester(s: &[RSet], _: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let (a, z) = zero_free(&s[0])?;
    Ok(mark(vec![katz_koester_sweep(&a)?], z))
}

fn run_chains(s: &[RSet], _: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let a = &s[0];
    let popular = SlopeFilter::half_average(a)?;
    let mut out = Vec::with_capacity(8);
    for mode in [ChainMode::Ratio, ChainMode::Product] {
        for (filter, tag) in [(SlopeFilter::All, "all"), (popular, "popular")] {
            out.push(solymosi_chain(a, mode, filter)?.record.with_variant(tag));
            out.push(solymosi_pair_chain(a, mode, filter)?.record.with_variant(tag));
        }
    }
    Ok(out)
}

fn run_d_bound(s: &[RSet], cfg: &SuiteConfig) -> Result<Vec<CheckRecord>> {
    let (a, z) = zero_free(&s[0])?;
    Ok(mark(vec![d_bound(&a, &s[1], cfg.subset_cap)?], z))
}

pub(crate) const RUNNERS: &[Runner] = &[
    Runner { ids: &[ids::BALOG_SCALAR, ids::BALOG_SCALAR_SHIFTED], arity: 4, run: run_balog_scalar },
    Runner { ids: &[ids::BALOG_PLANAR], arity: 3, run: run_balog_planar },
    Runner {
        ids: &[
            ids::RATIO_PLUS_SET,
            ids::PRODUCT_PLUS_SET,
            ids::PRODUCT_PLUS_SET_ENERGY,
            ids::RATIO_PLUS_RATIO,
            ids::PRODUCT_PLUS_PRODUCT,
        ],
        arity: 1,
        run: run_main,
    },
    Runner { ids: &[ids::SZT_LEVEL_SETS], arity: 2, run: run_szt_level },
    Runner { ids: &[ids::SZT_ENERGY_HOLDER, ids::SZT_ENERGY, ids::SZT_TRIPLE], arity: 3, run: run_li },
    Runner { ids: &[ids::SZT_PAIR_SUMSET], arity: 1, run: run_pair_sumset },
    Runner {
        ids: &[
            ids::MIXED_FOURTH_ENERGY,
            ids::MIXED_SQUARE_ENERGY,
            ids::MIXED_FOURTH_DIFFERENCE,
            ids::MIXED_SQUARE_DIFFERENCE,
        ],
        arity: 1,
        run: run_prop1,
    },
    Runner { ids: &[ids::ENERGY_VS_PRODUCT_SUMSET, ids::ENERGY_THREE_HALVES], arity: 1, run: run_remark },
    Runner { ids: &[ids::RNZ_COROLLARY], arity: 1, run: run_rnz },
    Runner { ids: &[ids::TAU_COUNT], arity: 2, run: run_tau },
    Runner { ids: &[ids::SOLYMOSI_ENERGY], arity: 2, run: run_solymosi_energy },
    Runner { ids: &[ids::PETRIDIS], arity: 3, run: run_petridis },
    Runner { ids: &[ids::RUZSA_TRIANGLE], arity: 3, run: run_ruzsa },
    Runner { ids: &[ids::KATZ_KOESTER], arity: 1, run: run_katz_koester },
    Runner {
        ids: &[
            ids::CHAIN_RATIO_PLUS_SET,
            ids::CHAIN_PRODUCT_PLUS_SET,
            ids::CHAIN_RATIO_PLUS_RATIO,
            ids::CHAIN_PRODUCT_PLUS_PRODUCT,
        ],
        arity: 1,
        run: run_chains,
    },
    Runner { ids: &[ids::D_PRODUCT_BOUND], arity: 2, run: run_d_bound },
];

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn ids_unique_and_covered_by_runners() {
        let ids: BTreeSet<&str> = REGISTRY.iter().map(|e| e.id).collect();
        assert_eq!(ids.len(), REGISTRY.len());
        let ran: Vec<&str> = RUNNERS.iter().flat_map(|r| r.ids.iter().copied()).collect();
        let ran_set: BTreeSet<&str> = ran.iter().copied().collect();
        assert_eq!(ran.len(), ran_set.len());
        assert_eq!(ids, ran_set);
    }

    #[test]
    fn filters() {
        assert_eq!(resolve_filter(&[]).unwrap().len(), REGISTRY.len());
        assert_eq!(
            resolve_filter(&["ruzsa_triangle".into()]).unwrap(),
            vec![ids::RUZSA_TRIANGLE]
        );
        assert_eq!(resolve_filter(&["growth.".into()]).unwrap().len(), 5);
        assert_eq!(resolve_filter(&["petridis,ruzsa_triangle".into()]).unwrap().len(), 2);
        assert!(resolve_filter(&["nope".into()]).is_err());
    }
}
