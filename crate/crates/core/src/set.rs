//! Canonical finite containers: sets of rationals, sets of rational points,
//! and multiplicity maps.

use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A finite set of rationals, stored strictly increasing.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RSet(Vec<Rational>);

impl RSet {
    pub fn empty() -> Self {
        RSet(Vec::new())
    }

    pub fn from_values<I: IntoIterator<Item = Rational>>(values: I) -> Self {
        let mut v: Vec<Rational> = values.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        RSet(v)
    }

    pub fn from_integers<I: IntoIterator<Item = i64>>(values: I) -> Self {
        Self::from_values(values.into_iter().map(Rational::from))
    }

    pub(crate) fn from_hashset(values: FxHashSet<Rational>) -> Self {
        let mut v: Vec<Rational> = values.into_iter().collect();
        v.sort_unstable();
        RSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.0.binary_search(x).is_ok()
    }

    pub fn min(&self) -> Option<&Rational> {
        self.0.first()
    }

    pub fn max(&self) -> Option<&Rational> {
        self.0.last()
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(&Rational::zero())
    }

    pub fn is_subset(&self, other: &RSet) -> bool {
        self.len() <= other.len() && self.iter().all(|x| other.contains(x))
    }

    pub fn intersection(&self, other: &RSet) -> RSet {
        RSet(self.iter().filter(|x| other.contains(x)).cloned().collect())
    }

    pub fn union(&self, other: &RSet) -> RSet {
        RSet::from_values(self.iter().chain(other.iter()).cloned())
    }

    pub fn without(&self, x: &Rational) -> RSet {
        RSet(self.iter().filter(|y| *y != x).cloned().collect())
    }

    pub fn with(&self, x: Rational) -> RSet {
        let mut v = self.0.clone();
        if let Err(pos) = v.binary_search(&x) {
            v.insert(pos, x);
        }
        RSet(v)
    }

    /// Elementwise reciprocal `A^{-1}`.
    pub fn inverse(&self) -> Result<RSet> {
        if self.contains_zero() {
            return Err(Error::domain("cannot invert a set containing 0"));
        }
        let v: Result<Vec<_>> = self.iter().map(Rational::recip).collect();
        Ok(RSet::from_values(v?))
    }

    /// The strictly positive elements.
    pub fn positive_part(&self) -> RSet {
        RSet(self.iter().filter(|x| x.is_positive()).cloned().collect())
    }

    /// The subset selected by the bits of `mask` (bit i selects the i-th smallest element).
    pub fn subset_by_mask(&self, mask: u64) -> RSet {
        RSet(
            self.iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, x)| x.clone())
                .collect(),
        )
    }

    /// One element per line, in the set file format.
    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        for x in &self.0 {
            out.push_str(&x.to_string());
            out.push('\n');
        }
        out
    }
}

impl<'a> IntoIterator for &'a RSet {
    type Item = &'a Rational;
    type IntoIter = std::slice::Iter<'a, Rational>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl FromIterator<Rational> for RSet {
    fn from_iter<T: IntoIterator<Item = Rational>>(iter: T) -> Self {
        RSet::from_values(iter)
    }
}

impl fmt::Display for RSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for RSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for RSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<Rational>::deserialize(deserializer)?;
        Ok(RSet::from_values(v))
    }
}

pub type Point = (Rational, Rational);

/// A finite set of rational points in the plane, stored in lexicographic order.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug, Serialize, Deserialize)]
pub struct PlanarSet(Vec<Point>);

impl PlanarSet {
    pub fn from_points<I: IntoIterator<Item = Point>>(points: I) -> Self {
        let mut v: Vec<Point> = points.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        PlanarSet(v)
    }

    pub(crate) fn from_hashset(points: FxHashSet<Point>) -> Self {
        let mut v: Vec<Point> = points.into_iter().collect();
        v.sort_unstable();
        PlanarSet(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.0.iter()
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.0.binary_search(p).is_ok()
    }
}

/// `A × B`.
pub fn cartesian(a: &RSet, b: &RSet) -> PlanarSet {
    // lexicographic order is preserved by the nested loop
    PlanarSet(
        a.iter()
            .flat_map(|x| b.iter().map(move |y| (x.clone(), y.clone())))
            .collect(),
    )
}

/// `Δ(C) = {(c, c)}`.
pub fn diagonal(c: &RSet) -> PlanarSet {
    PlanarSet(c.iter().map(|x| (x.clone(), x.clone())).collect())
}

/// Multiplicities of a representation function, keyed in increasing order.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct CountMap(Vec<(Rational, u64)>);

impl CountMap {
    pub(crate) fn from_hashmap(counts: FxHashMap<Rational, u64>) -> Self {
        let mut v: Vec<(Rational, u64)> = counts.into_iter().filter(|(_, c)| *c > 0).collect();
        v.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        CountMap(v)
    }

    pub fn get(&self, x: &Rational) -> u64 {
        match self.0.binary_search_by(|(k, _)| k.cmp(x)) {
            Ok(i) => self.0[i].1,
            Err(_) => 0,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rational, u64)> {
        self.0.iter().map(|(k, c)| (k, *c))
    }

    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|(_, c)| *c)
    }

    /// Number of points in the support.
    pub fn support_len(&self) -> usize {
        self.0.len()
    }

    pub fn total_mass(&self) -> u64 {
        self.counts().sum()
    }

    pub fn max_count(&self) -> u64 {
        self.counts().max().unwrap_or(0)
    }

    pub fn support(&self) -> RSet {
        RSet(self.0.iter().map(|(k, _)| k.clone()).collect())
    }

    /// Size of the level set `{x : count(x) >= tau}`.
    pub fn level_set_size(&self, tau: u64) -> usize {
        self.counts().filter(|c| *c >= tau).count()
    }
}
