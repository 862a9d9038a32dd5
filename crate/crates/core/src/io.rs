//! JSON formats for points, candidate sets and vantage multisets.
//!
//! Point sets are `{"dim": d, "points": [[x, …], …]}` and multisets add
//! `"mult": [m, …]`. Coordinates are written as `"p/q"` strings and read
//! from strings or JSON numbers, always exactly.

use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::enumeration::Catalog;
use crate::geometry::{CandidateSet, Ordering, Point, VantageMultiset};
use crate::scalar::{format_rational, parse_rational, Rational};

pub fn ser_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn ser_rational_opt<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&format_rational(r)),
        None => s.serialize_none(),
    }
}

/// A coordinate as read from JSON: a string or a number, parsed exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactNumber(pub Rational);

impl<'de> Deserialize<'de> for ExactNumber {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match serde_json::Value::deserialize(d)? {
            serde_json::Value::String(s) => parse_rational(&s).map(ExactNumber).map_err(de::Error::custom),
            serde_json::Value::Number(n) => parse_rational(&n.to_string()).map(ExactNumber).map_err(de::Error::custom),
            other => Err(de::Error::custom(format!("expected a number, found {other}"))),
        }
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coords().iter().map(format_rational))
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<ExactNumber>::deserialize(d)?;
        if coords.is_empty() {
            return Err(de::Error::custom("a point needs at least one coordinate"));
        }
        Ok(Point::new(coords.into_iter().map(|c| c.0).collect()))
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PointSetFile {
    dim: usize,
    points: Vec<Point>,
    #[serde(default)]
    mult: Option<Vec<u64>>,
}

impl Serialize for CandidateSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CandidateSet", 2)?;
        st.serialize_field("dim", &self.dim())?;
        st.serialize_field("points", self.points())?;
        st.end()
    }
}

impl Serialize for VantageMultiset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("VantageMultiset", 3)?;
        st.serialize_field("dim", &self.dim())?;
        let points: Vec<&Point> = self.entries().iter().map(|(p, _)| p).collect();
        let mult: Vec<u64> = self.entries().iter().map(|(_, m)| *m).collect();
        st.serialize_field("points", &points)?;
        st.serialize_field("mult", &mult)?;
        st.end()
    }
}

fn read_file(text: &str) -> Result<PointSetFile> {
    let f: PointSetFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if let Some(p) = f.points.iter().find(|p| p.dim() != f.dim) {
        return Err(Error::Parse(format!("point {p} does not have dimension {}", f.dim)));
    }
    Ok(f)
}

pub fn parse_candidate_set(text: &str) -> Result<CandidateSet> {
    let f = read_file(text)?;
    if f.mult.is_some() {
        return Err(Error::Parse("a candidate set has no multiplicities".into()));
    }
    if f.points.is_empty() {
        return Err(Error::Parse("no points".into()));
    }
    CandidateSet::new(f.points)
}

/// A multiset file; `mult` defaults to all ones.
pub fn parse_multiset(text: &str) -> Result<VantageMultiset> {
    let f = read_file(text)?;
    if f.points.is_empty() {
        return Err(Error::Parse("no points".into()));
    }
    let mult = f.mult.unwrap_or_else(|| vec![1; f.points.len()]);
    if mult.len() != f.points.len() {
        return Err(Error::Parse(format!(
            "{} multiplicities for {} points",
            mult.len(),
            f.points.len()
        )));
    }
    VantageMultiset::new(f.points.into_iter().zip(mult).collect()).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("serialisable")
}

#[derive(Serialize)]
struct CatalogLine<'a, K, W> {
    ordering: &'a K,
    witness: &'a W,
}

/// One `{"ordering": …, "witness": …}` object per line.
pub fn catalog_jsonl<K: Ord + Serialize, W: Serialize>(catalog: &Catalog<K, W>) -> String {
    let mut out = String::new();
    for (ordering, witness) in &catalog.entries {
        out.push_str(&to_json(&CatalogLine { ordering, witness }));
        out.push('\n');
    }
    out
}

pub fn catalog_csv_summary<K: Ord, W>(catalog: &Catalog<K, W>) -> String {
    format!(
        "count,trials,ties_skipped,undecided_skipped\n{},{},{},{}\n",
        catalog.len(),
        catalog.trials,
        catalog.ties_skipped,
        catalog.undecided_skipped
    )
}

/// Reads back a catalog of plain orderings with multiset witnesses.
pub fn parse_catalog_jsonl(text: &str) -> Result<Vec<(Ordering, VantageMultiset)>> {
    #[derive(Deserialize)]
    struct Line {
        ordering: Ordering,
        witness: serde_json::Value,
    }
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let line: Line = serde_json::from_str(l).map_err(|e| Error::Parse(e.to_string()))?;
            Ok((line.ordering, parse_multiset(&line.witness.to_string())?))
        })
        .collect()
}
