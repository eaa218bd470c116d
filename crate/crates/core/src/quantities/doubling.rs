//! Witnessed upper bounds for the multiplicative doubling functional
//! `d(A) = min_C |AC|² / (|A||C|)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::set::RSet;
use crate::setops::multiplicative_fibers;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FiberChoice {
    None,
    All,
    /// The `k` largest fibers, ties broken by increasing `q`.
    Largest(usize),
}

/// Which candidate sets `C` are tried.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateFamily {
    pub include_self: bool,
    pub include_inverse: bool,
    pub fibers: FiberChoice,
    /// Subsets of `A` up to this size (0 disables).
    pub max_subset_size: usize,
    /// Add `C^{-1}` for every candidate `C`.
    pub inversion_closed: bool,
}

impl Default for CandidateFamily {
    fn default() -> Self {
        CandidateFamily {
            include_self: true,
            include_inverse: true,
            fibers: FiberChoice::All,
            max_subset_size: 2,
            inversion_closed: true,
        }
    }
}

impl CandidateFamily {
    /// Only `A` itself.
    pub fn self_only() -> Self {
        CandidateFamily {
            include_self: true,
            include_inverse: false,
            fibers: FiberChoice::None,
            max_subset_size: 0,
            inversion_closed: false,
        }
    }

    pub fn tag(&self) -> String {
        let mut parts = Vec::new();
        if self.include_self {
            parts.push("self".to_string());
        }
        if self.include_inverse {
            parts.push("inverse".to_string());
        }
        match self.fibers {
            FiberChoice::None => {}
            FiberChoice::All => parts.push("fibers".to_string()),
            FiberChoice::Largest(k) => parts.push(format!("fibers_top{k}")),
        }
        if self.max_subset_size > 0 {
            parts.push(format!("subsets_le{}", self.max_subset_size));
        }
        if self.inversion_closed {
            parts.push("inversion_closed".to_string());
        }
        parts.join("+")
    }

    fn candidates(&self, a: &RSet) -> Result<Vec<(String, RSet)>> {
        let mut out: Vec<(String, RSet)> = Vec::new();
        if self.include_self {
            out.push(("self".into(), a.clone()));
        }
        if self.include_inverse {
            out.push(("inverse".into(), a.inverse()?));
        }
        match self.fibers {
            FiberChoice::None => {}
            FiberChoice::All => {
                for (q, f) in multiplicative_fibers(a)? {
                    out.push((format!("fiber {q}"), f));
                }
            }
            FiberChoice::Largest(k) => {
                let mut fibers = multiplicative_fibers(a)?;
                fibers.sort_by(|x, y| y.1.len().cmp(&x.1.len()).then_with(|| x.0.cmp(&y.0)));
                for (q, f) in fibers.into_iter().take(k) {
                    out.push((format!("fiber {q}"), f));
                }
            }
        }
        let n = a.len();
        let k = self.max_subset_size.min(n);
        let mut idx: Vec<usize> = Vec::new();
        for size in 1..=k {
            idx.clear();
            idx.extend(0..size);
            loop {
                let subset = RSet::from_values(idx.iter().map(|&i| a.as_slice()[i].clone()));
                out.push((format!("subset {subset}"), subset));
                // next combination in lexicographic order
                let mut i = size;
                while i > 0 && idx[i - 1] == n - size + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                idx[i - 1] += 1;
                for j in i..size {
                    idx[j] = idx[j - 1] + 1;
                }
            }
        }
        if self.inversion_closed {
            let inverses: Result<Vec<(String, RSet)>> = out
                .iter()
                .map(|(src, c)| Ok((format!("inverse of {src}"), c.inverse()?)))
                .collect();
            out.extend(inverses?);
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|(_, c)| !c.is_empty() && seen.insert(c.clone()));
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoublingWitness {
    pub value: Rational,
    pub witness: RSet,
    pub witness_source: String,
    pub family_tag: String,
}

/// `|AC|² / (|A||C|)`.
pub fn doubling_quotient(a: &RSet, c: &RSet) -> Rational {
    let ac = a.times(c).len() as i64;
    Rational::new(ac * ac, (a.len() * c.len()) as i64).expect("nonempty sets")
}

/// Minimum of `|AC|²/(|A||C|)` over the candidate family, with its witness.
/// Ties keep the earliest candidate.
pub fn d_upper(a: &RSet, family: &CandidateFamily) -> Result<DoublingWitness> {
    if a.is_empty() {
        return Err(Error::domain("d(A) of the empty set"));
    }
    if a.contains_zero() {
        return Err(Error::domain("d(A) needs 0 ∉ A"));
    }
    let candidates = family.candidates(a)?;
    let mut best: Option<(Rational, usize)> = None;
    for (i, (_, c)) in candidates.iter().enumerate() {
        let v = doubling_quotient(a, c);
        if best.as_ref().map_or(true, |(b, _)| v < *b) {
            best = Some((v, i));
        }
    }
    let (value, i) = best.ok_or_else(|| Error::domain("empty candidate family"))?;
    let (source, witness) = candidates.into_iter().nth(i).expect("index in range");
    Ok(DoublingWitness {
        value,
        witness,
        witness_source: source,
        family_tag: family.tag(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> RSet {
        RSet::from_integers(v.iter().copied())
    }

    #[test]
    fn spec_examples() {
        let w = d_upper(&ints(&[1, 2, 4, 8]), &CandidateFamily::default()).unwrap();
        assert!(w.value <= Rational::new(49, 16).unwrap());
        let w = d_upper(&ints(&[1, 2, 4, 8]), &CandidateFamily::self_only()).unwrap();
        assert_eq!(w.value, Rational::new(49, 16).unwrap());
        let w = d_upper(&ints(&[1, 2, 3, 4]), &CandidateFamily::self_only()).unwrap();
        assert_eq!(w.value, Rational::new(81, 16).unwrap());
        let w = d_upper(&ints(&[1]), &CandidateFamily::default()).unwrap();
        assert_eq!(w.value, Rational::one());
    }

    #[test]
    fn errors() {
        assert!(d_upper(&RSet::empty(), &CandidateFamily::default()).is_err());
        assert!(d_upper(&ints(&[0, 1]), &CandidateFamily::default()).is_err());
        let none = CandidateFamily {
            include_self: false,
            include_inverse: false,
            fibers: FiberChoice::None,
            max_subset_size: 0,
            inversion_closed: true,
        };
        assert!(matches!(d_upper(&ints(&[1, 2]), &none), Err(Error::Domain(_))));
    }

    #[test]
    fn subsets_enumerated() {
        let fam = CandidateFamily {
            include_self: false,
            include_inverse: false,
            fibers: FiberChoice::None,
            max_subset_size: 2,
            inversion_closed: false,
        };
        assert_eq!(fam.candidates(&ints(&[1, 2, 3, 5])).unwrap().len(), 4 + 6);
    }

    #[test]
    fn singleton_candidate_gives_size() {
        // C = {c}: |AC| = |A| so the quotient is |A|
        let a = ints(&[1, 2, 3, 5, 7]);
        assert_eq!(doubling_quotient(&a, &ints(&[3])), Rational::from(5));
    }

    #[test]
    fn bounds() {
        let a = ints(&[2, 3, 5, 9, 10]);
        let w = d_upper(&a, &CandidateFamily::default()).unwrap();
        assert!(w.value >= Rational::one());
        let aa = a.times(&a).len() as i64;
        assert!(w.value <= Rational::new(aa * aa, 25).unwrap());
        assert_eq!(w.value, doubling_quotient(&a, &w.witness));
    }
}
