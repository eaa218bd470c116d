//! Runs the registry over a corpus of sets.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::{generate, FamilySpec};
use crate::ledger::checks::DEFAULT_CONDITION_BUDGET;
use crate::ledger::registry::RUNNERS;
use crate::quantities::doubling::CandidateFamily;
use crate::quantities::magnification::DEFAULT_SUBSET_CAP;
use crate::record::{inputs_digest, CheckRecord, Kind, Verdict};
use crate::set::RSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub family: CandidateFamily,
    /// Largest set enumerated by the magnification ratio.
    pub subset_cap: usize,
    /// `A* = A:A` is used in the pair-sumset bound only when `|A:A|` is at most this.
    pub ratio_set_cap: usize,
    pub condition_budget: u64,
    /// Worker threads; 0 lets the pool decide.
    #[serde(skip)]
    pub jobs: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            family: CandidateFamily::default(),
            subset_cap: DEFAULT_SUBSET_CAP,
            ratio_set_cap: 96,
            condition_budget: DEFAULT_CONDITION_BUDGET,
            jobs: 0,
        }
    }
}

/// A named member of the corpus.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub tag: String,
    pub set: RSet,
}

impl CorpusEntry {
    pub fn new(tag: impl Into<String>, set: RSet) -> Self {
        CorpusEntry { tag: tag.into(), set }
    }

    pub fn from_spec(spec: &FamilySpec) -> Result<Self> {
        Ok(CorpusEntry::new(spec.to_string(), generate(spec)?))
    }
}

/// APs, GPs and seeded random positive sets of size at most 24.
pub fn default_corpus_specs() -> Vec<FamilySpec> {
    let mut v = Vec::new();
    for n in [4, 8, 12, 16] {
        v.push(FamilySpec::ap(n, 1, 1));
    }
    for n in [4, 8, 12] {
        v.push(FamilySpec::gp(n, 1, 2));
    }
    v.push(FamilySpec::gp(6, 1, 3));
    for (i, n) in [6usize, 10, 14, 18, 24].into_iter().enumerate() {
        v.push(FamilySpec::random(n, 1, 60, 1000 + i as u64));
    }
    v
}

pub fn default_corpus() -> Result<Vec<CorpusEntry>> {
    default_corpus_specs().iter().map(CorpusEntry::from_spec).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub check_id: String,
    pub inputs_digest: String,
    pub reason: String,
}

/// An exact record that failed, with the sets needed to reproduce it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub check_id: String,
    pub variant: Option<String>,
    pub inputs_digest: String,
    pub sets: Vec<RSet>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub check_id: String,
    pub kind: Kind,
    pub count: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub median_ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub corpus_tag: String,
    pub registry: Vec<String>,
    pub records: Vec<CheckRecord>,
    pub skipped: Vec<Skipped>,
    pub failures: Vec<Failure>,
    pub summary: Vec<CheckSummary>,
}

impl SuiteResult {
    pub fn exact_failures(&self) -> usize {
        self.failures.len()
    }
}

/// Index tuples for a check of the given arity: the diagonal `(i, …, i)` and,
/// when the corpus has more than one member, cyclic runs `(i, i+1, …)`.
fn instances(m: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for i in 0..m {
        out.push(vec![i; arity]);
    }
    if arity > 1 && m > 1 {
        for i in 0..m {
            out.push((0..arity).map(|k| (i + k) % m).collect());
        }
    }
    out.sort();
    out.dedup();
    out
}

enum Outcome {
    Records(Vec<CheckRecord>, Vec<RSet>),
    Skip(Vec<Skipped>),
}

/// Runs every selected check on every instance. Exact failures are collected
/// with reproducers rather than stopping the run.
pub fn run_suite(
    corpus_tag: &str,
    corpus: &[CorpusEntry],
    registry: &[&str],
    config: &SuiteConfig,
) -> Result<SuiteResult> {
    let selected = |id: &str| registry.contains(&id);
    let mut jobs: Vec<(usize, Vec<usize>)> = Vec::new();
    for (r, runner) in RUNNERS.iter().enumerate() {
        if runner.ids.iter().any(|id| selected(id)) {
            for inst in instances(corpus.len(), runner.arity) {
                jobs.push((r, inst));
            }
        }
    }

    let work = || -> Vec<Outcome> {
        jobs.par_iter()
            .map(|(r, inst)| {
                let runner = &RUNNERS[*r];
                let sets: Vec<RSet> = inst.iter().map(|&i| corpus[i].set.clone()).collect();
                match (runner.run)(&sets, config) {
                    Ok(records) => Outcome::Records(
                        records.into_iter().filter(|x| selected(&x.check_id)).collect(),
                        sets,
                    ),
                    Err(e) => {
                        let refs: Vec<&RSet> = sets.iter().collect();
                        let digest = inputs_digest(&refs);
                        Outcome::Skip(
                            runner
                                .ids
                                .iter()
                                .filter(|id| selected(id))
                                .map(|id| Skipped {
                                    check_id: id.to_string(),
                                    inputs_digest: digest.clone(),
                                    reason: e.to_string(),
                                })
                                .collect(),
                        )
                    }
                }
            })
            .collect()
    };
    let outcomes = if config.jobs > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(config.jobs)
            .build()
            .map_err(|e| Error::resource(format!("thread pool: {e}")))?
            .install(work)
    } else {
        work()
    };

    let mut records = Vec::new();
    let mut skipped = Vec::new();
    let mut failures = Vec::new();
    for outcome in outcomes {
        match outcome {
            Outcome::Records(recs, sets) => {
                for rec in recs {
                    if rec.verdict == Verdict::Fail {
                        failures.push(Failure {
                            check_id: rec.check_id.clone(),
                            variant: rec.variant.clone(),
                            inputs_digest: rec.inputs_digest.clone(),
                            sets: sets.clone(),
                        });
                    }
                    records.push(rec);
                }
            }
            Outcome::Skip(s) => skipped.extend(s),
        }
    }
    let key = |r: &CheckRecord| (r.check_id.clone(), r.inputs_digest.clone(), r.variant.clone());
    records.sort_by_key(key);
    records.dedup_by(|a, b| key(a) == key(b));
    skipped.sort_by(|a, b| {
        (&a.check_id, &a.inputs_digest, &a.reason).cmp(&(&b.check_id, &b.inputs_digest, &b.reason))
    });
    skipped.dedup();
    failures.sort_by(|a, b| {
        (&a.check_id, &a.inputs_digest, &a.variant).cmp(&(&b.check_id, &b.inputs_digest, &b.variant))
    });
    failures.dedup();

    for id in registry {
        let seen = records.iter().any(|r| r.check_id == *id)
            || skipped.iter().any(|s| s.check_id == *id);
        if !seen {
            skipped.push(Skipped {
                check_id: id.to_string(),
                inputs_digest: String::new(),
                reason: "no applicable instance in the corpus".into(),
            });
        }
    }

    Ok(SuiteResult {
        corpus_tag: corpus_tag.to_string(),
        registry: registry.iter().map(|s| s.to_string()).collect(),
        summary: summarize(&records),
        records,
        skipped,
        failures,
    })
}

fn summarize(records: &[CheckRecord]) -> Vec<CheckSummary> {
    let mut by_id: BTreeMap<&str, (Kind, Vec<f64>)> = BTreeMap::new();
    for r in records {
        by_id
            .entry(&r.check_id)
            .or_insert_with(|| (r.kind, Vec::new()))
            .1
            .push(r.ratio.value);
    }
    by_id
        .into_iter()
        .map(|(id, (kind, mut v))| {
            v.sort_by(f64::total_cmp);
            CheckSummary {
                check_id: id.to_string(),
                kind,
                count: v.len(),
                min_ratio: v[0],
                max_ratio: v[v.len() - 1],
                median_ratio: v[(v.len() - 1) / 2],
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::registry::all_ids;

    #[test]
    fn instance_shapes() {
        assert_eq!(instances(3, 1).len(), 3);
        assert_eq!(instances(1, 3), vec![vec![0, 0, 0]]);
        assert_eq!(instances(3, 2).len(), 6);
    }

    #[test]
    fn empty_registry() {
        let corpus = vec![CorpusEntry::new("a", RSet::from_integers([1, 2]))];
        let r = run_suite("t", &corpus, &[], &SuiteConfig::default()).unwrap();
        assert!(r.records.is_empty() && r.skipped.is_empty());
    }

    #[test]
    fn small_corpus_full_registry() {
        let corpus = vec![
            CorpusEntry::new("ap", RSet::from_integers(1..=5)),
            CorpusEntry::new("gp", RSet::from_integers([1, 2, 4, 8])),
            CorpusEntry::new("zero", RSet::from_integers([0, 1, 3])),
        ];
        let ids = all_ids();
        let cfg = SuiteConfig { jobs: 2, ..SuiteConfig::default() };
        let r = run_suite("small", &corpus, &ids, &cfg).unwrap();
        assert_eq!(r.exact_failures(), 0, "{:?}", r.failures);
        for id in &ids {
            assert!(
                r.records.iter().any(|x| x.check_id == *id)
                    || r.skipped.iter().any(|x| x.check_id == *id),
                "{id} missing"
            );
        }
        assert!(r
            .records
            .iter()
            .any(|x| x.details.get("transform").is_some()));
        let again = run_suite("small", &corpus, &ids, &SuiteConfig::default()).unwrap();
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            serde_json::to_string(&again).unwrap()
        );
    }

    #[test]
    fn singleton_skips_with_reason() {
        let corpus = vec![CorpusEntry::new("one", RSet::from_integers([5]))];
        let r = run_suite("s", &corpus, &[crate::ledger::ids::SZT_PAIR_SUMSET], &SuiteConfig::default())
            .unwrap();
        assert!(r.records.is_empty());
        assert_eq!(r.skipped.len(), 1);
        assert!(r.skipped[0].reason.contains("singleton"));
    }
}
