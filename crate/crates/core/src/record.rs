//! Check records: one verified or measured instance of an inequality.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::rational::Rational;
use crate::set::RSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// The inequality holds with no hidden constant and is asserted.
    Exact,
    /// The inequality hides an unspecified constant; the ratio is reported.
    Measured,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    /// `lhs >> rhs_core`: the ratio should stay bounded below.
    Lower,
    /// `lhs << rhs_core` (or `lhs <= rhs`): the ratio should stay bounded above.
    Upper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    ReportOnly,
}

/// A reported number: always a decimal, plus the exact rational when known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Num {
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact: Option<Rational>,
}

impl Num {
    pub fn approx(value: f64) -> Self {
        Num { value, exact: None }
    }

    pub fn exact(value: Rational) -> Self {
        Num {
            value: value.to_f64(),
            exact: Some(value),
        }
    }
}

impl From<Rational> for Num {
    fn from(r: Rational) -> Self {
        Num::exact(r)
    }
}

impl From<usize> for Num {
    fn from(n: usize) -> Self {
        Num::exact(Rational::from(n))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
    pub kind: Kind,
    pub lhs: Num,
    pub rhs_core: Num,
    pub ratio: Num,
    pub direction: Direction,
    pub verdict: Verdict,
    pub inputs_digest: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

impl CheckRecord {
    /// An asserted `lhs <= rhs` between exact quantities.
    pub fn exact_upper(id: &str, lhs: Rational, rhs: Rational, inputs: &[&RSet]) -> Self {
        let holds = lhs <= rhs;
        let ratio = if rhs.is_zero() {
            Num::approx(if lhs.is_zero() { 0.0 } else { f64::MAX })
        } else {
            Num::exact(&lhs / &rhs)
        };
        CheckRecord {
            check_id: id.to_string(),
            variant: None,
            kind: Kind::Exact,
            lhs: Num::exact(lhs),
            rhs_core: Num::exact(rhs),
            ratio,
            direction: Direction::Upper,
            verdict: if holds { Verdict::Pass } else { Verdict::Fail },
            inputs_digest: inputs_digest(inputs),
            details: BTreeMap::new(),
        }
    }

    /// A measured ratio `lhs / rhs_core`; `rhs_core` must be positive and finite.
    pub fn measured(
        id: &str,
        lhs: Num,
        rhs_core: Num,
        direction: Direction,
        inputs: &[&RSet],
    ) -> Self {
        let ratio = match (&lhs.exact, &rhs_core.exact) {
            (Some(l), Some(r)) if !r.is_zero() => Num::exact(l / r),
            _ => Num::approx(lhs.value / rhs_core.value),
        };
        CheckRecord {
            check_id: id.to_string(),
            variant: None,
            kind: Kind::Measured,
            lhs,
            rhs_core,
            ratio,
            direction,
            verdict: Verdict::ReportOnly,
            inputs_digest: inputs_digest(inputs),
            details: BTreeMap::new(),
        }
    }

    pub fn with_variant(mut self, variant: impl Into<String>) -> Self {
        self.variant = Some(variant.into());
        self
    }

    pub fn with_detail(mut self, key: &str, value: impl Serialize) -> Self {
        self.details.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
        self
    }

    /// Adds a further condition that must hold for an exact record to pass.
    pub fn require(mut self, key: &str, holds: bool) -> Self {
        self.details.insert(key.to_string(), Value::Bool(holds));
        if !holds && self.kind == Kind::Exact {
            self.verdict = Verdict::Fail;
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// Content hash of the ordered input sets (first 16 bytes of SHA-256, hex).
pub fn inputs_digest(inputs: &[&RSet]) -> String {
    let mut hasher = Sha256::new();
    for (i, set) in inputs.iter().enumerate() {
        if i > 0 {
            hasher.update(b"|");
        }
        for (j, x) in set.iter().enumerate() {
            if j > 0 {
                hasher.update(b",");
            }
            hasher.update(x.to_string().as_bytes());
        }
    }
    hex::encode(&hasher.finalize()[..16])
}
