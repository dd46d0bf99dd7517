//! JSON forms of complexes, chain maps, homotopies and bicomplexes.
//! Degrees are object keys written as decimal strings.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::complex::{Bicomplex, ChainComplex, ChainMap, GradedMap};
use super::matrix::{IntMatrix, JsonInt};
use super::ComplexError;

type Rows = Vec<Vec<JsonInt>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub window: [i64; 2],
    #[serde(default)]
    pub ranks: BTreeMap<String, usize>,
    #[serde(default)]
    pub differentials: BTreeMap<String, Rows>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexRef {
    Name(String),
    Inline(Box<ComplexDoc>),
}

pub trait ComplexResolver {
    fn complex(&self, name: &str) -> Option<ChainComplex>;
}

pub struct NoComplexes;

impl ComplexResolver for NoComplexes {
    fn complex(&self, _: &str) -> Option<ChainComplex> {
        None
    }
}

impl ComplexRef {
    pub fn resolve(&self, resolver: &dyn ComplexResolver) -> Result<ChainComplex, ComplexError> {
        match self {
            ComplexRef::Inline(doc) => ChainComplex::from_doc(doc),
            ComplexRef::Name(n) => resolver.complex(n).ok_or_else(|| ComplexError::Parse(format!("unknown complex `{n}`"))),
        }
    }
}

fn degree_keys<V>(map: &BTreeMap<String, V>) -> Result<Vec<(i64, &V)>, ComplexError> {
    map.iter()
        .map(|(k, v)| k.parse::<i64>().map(|n| (n, v)).map_err(|_| ComplexError::Parse(format!("`{k}` is not a degree"))))
        .collect()
}

fn read_matrix(rows: usize, cols: usize, data: &Rows, what: &str) -> Result<IntMatrix, ComplexError> {
    IntMatrix::from_json_rows(rows, cols, data).map_err(|e| ComplexError::DimensionMismatch(format!("{what}: {e}")))
}

fn components(
    source: &ChainComplex,
    map: &BTreeMap<String, Rows>,
    shape: impl Fn(i64) -> (usize, usize),
) -> Result<Vec<IntMatrix>, ComplexError> {
    let given: BTreeMap<i64, &Rows> = degree_keys(map)?.into_iter().collect();
    if let Some(n) = given.keys().find(|n| !source.degrees().contains(n)) {
        return Err(ComplexError::DimensionMismatch(format!("component at {n} lies outside the source window")));
    }
    source
        .degrees()
        .map(|n| {
            let (r, c) = shape(n);
            match given.get(&n) {
                Some(data) => read_matrix(r, c, data, &format!("component {n}")),
                None => Ok(IntMatrix::zeros(r, c)),
            }
        })
        .collect()
}

fn write_components(g: &GradedMap) -> BTreeMap<String, Rows> {
    g.source()
        .degrees()
        .map(|n| (n, g.at(n)))
        .filter(|(_, m)| m.rows() > 0 && m.cols() > 0)
        .map(|(n, m)| (n.to_string(), m.to_json_rows()))
        .collect()
}

impl ChainComplex {
    /// Missing ranks are zero; missing differentials are zero matrices.
    pub fn from_doc(doc: &ComplexDoc) -> Result<Self, ComplexError> {
        let [lo, hi] = doc.window;
        if hi < lo {
            return Err(ComplexError::UnboundedComplex(format!("window [{lo}, {hi}] is empty")));
        }
        let ranks: BTreeMap<i64, usize> = degree_keys(&doc.ranks)?.into_iter().map(|(n, r)| (n, *r)).collect();
        let diffs: BTreeMap<i64, &Rows> = degree_keys(&doc.differentials)?.into_iter().collect();
        if let Some(n) = ranks.keys().chain(diffs.keys()).find(|n| **n < lo || **n > hi) {
            return Err(ComplexError::UnboundedComplex(format!("degree {n} lies outside the window [{lo}, {hi}]")));
        }
        let rank = |n: i64| ranks.get(&n).copied().unwrap_or(0);
        let mut ds = Vec::new();
        for n in lo..=hi {
            let (r, c) = (if n == lo { 0 } else { rank(n - 1) }, rank(n));
            ds.push(match diffs.get(&n) {
                Some(data) => read_matrix(r, c, data, &format!("d_{n}"))?,
                None => IntMatrix::zeros(r, c),
            });
        }
        ChainComplex::new(lo, hi, (lo..=hi).map(rank).collect(), ds)
    }

    pub fn to_doc(&self) -> ComplexDoc {
        ComplexDoc {
            window: [self.lo(), self.hi()],
            ranks: self.degrees().filter(|n| self.rank(*n) > 0).map(|n| (n.to_string(), self.rank(n))).collect(),
            differentials: self
                .degrees()
                .filter(|n| self.rank(*n) > 0 && self.rank(n - 1) > 0)
                .map(|n| (n.to_string(), self.d(n).to_json_rows()))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChainMapDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<ComplexRef>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<ComplexRef>,
    #[serde(default)]
    pub components: BTreeMap<String, Rows>,
}

/// Components of a degree-`+1` map `H_n: A_n → B_{n+1}`.
pub type HomotopyDoc = ChainMapDoc;

fn endpoints(
    doc: &ChainMapDoc,
    resolver: &dyn ComplexResolver,
    default: Option<(&ChainComplex, &ChainComplex)>,
) -> Result<(ChainComplex, ChainComplex), ComplexError> {
    let pick = |r: &Option<ComplexRef>, d: Option<&ChainComplex>, what: &str| match (r, d) {
        (Some(r), _) => r.resolve(resolver),
        (None, Some(c)) => Ok(c.clone()),
        (None, None) => Err(ComplexError::Parse(format!("missing {what}"))),
    };
    Ok((pick(&doc.source, default.map(|d| d.0), "source")?, pick(&doc.target, default.map(|d| d.1), "target")?))
}

impl GradedMap {
    pub fn from_doc(
        doc: &ChainMapDoc,
        degree: i64,
        resolver: &dyn ComplexResolver,
        default: Option<(&ChainComplex, &ChainComplex)>,
    ) -> Result<Self, ComplexError> {
        let (a, b) = endpoints(doc, resolver, default)?;
        let comps = components(&a, &doc.components, |n| (b.rank(n + degree), a.rank(n)))?;
        GradedMap::new(a, b, degree, comps)
    }

    pub fn to_doc(&self, inline: bool) -> ChainMapDoc {
        ChainMapDoc {
            source: inline.then(|| ComplexRef::Inline(Box::new(self.source().to_doc()))),
            target: inline.then(|| ComplexRef::Inline(Box::new(self.target().to_doc()))),
            components: write_components(self),
        }
    }
}

impl ChainMap {
    pub fn from_doc(
        doc: &ChainMapDoc,
        resolver: &dyn ComplexResolver,
        default: Option<(&ChainComplex, &ChainComplex)>,
    ) -> Result<Self, ComplexError> {
        ChainMap::from_graded(GradedMap::from_doc(doc, 0, resolver, default)?)
    }

    pub fn to_doc(&self, inline: bool) -> ChainMapDoc {
        self.graded().to_doc(inline)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BicomplexDoc {
    pub terms: Vec<ComplexRef>,
    #[serde(default)]
    pub maps: Vec<ChainMapDoc>,
}

impl Bicomplex {
    /// A map without explicit endpoints connects consecutive terms.
    pub fn from_doc(doc: &BicomplexDoc, resolver: &dyn ComplexResolver) -> Result<Self, ComplexError> {
        let terms = doc.terms.iter().map(|t| t.resolve(resolver)).collect::<Result<Vec<_>, _>>()?;
        if doc.maps.len() + 1 != terms.len() {
            return Err(ComplexError::DimensionMismatch("a sequence of m+1 complexes needs m maps".into()));
        }
        let maps = doc
            .maps
            .iter()
            .enumerate()
            .map(|(i, m)| ChainMap::from_doc(m, resolver, Some((&terms[i], &terms[i + 1]))))
            .collect::<Result<Vec<_>, _>>()?;
        Bicomplex::new(terms, maps)
    }

    pub fn to_doc(&self) -> BicomplexDoc {
        BicomplexDoc {
            terms: self.terms().iter().map(|t| ComplexRef::Inline(Box::new(t.to_doc()))).collect(),
            maps: self.maps().iter().map(|m| m.to_doc(false)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        let doc: ComplexDoc = serde_json::from_str(r#"{"window":[-1,1],"ranks":{"0":1,"1":2},"differentials":{"1":[[2,"-4"]]}}"#).unwrap();
        let c = ChainComplex::from_doc(&doc).unwrap();
        assert_eq!(c.d(1), IntMatrix::from_rows(&[vec![2, -4]]));
        assert_eq!(ChainComplex::from_doc(&c.to_doc()).unwrap(), c);
    }

    #[test]
    fn complex_errors() {
        let bad: ComplexDoc = serde_json::from_str(r#"{"window":[0,1],"ranks":{"0":1,"1":1,"2":1}}"#).unwrap();
        assert!(matches!(ChainComplex::from_doc(&bad), Err(ComplexError::UnboundedComplex(_))));
        let bad: ComplexDoc = serde_json::from_str(r#"{"window":[0,1],"ranks":{"0":1,"1":1},"differentials":{"1":[[1,1]]}}"#).unwrap();
        assert!(matches!(ChainComplex::from_doc(&bad), Err(ComplexError::DimensionMismatch(_))));
    }

    #[test]
    fn chain_map_round_trip() {
        let c = ChainComplex::new(0, 1, vec![1, 1], vec![IntMatrix::zeros(0, 1), IntMatrix::from_rows(&[vec![2]])]).unwrap();
        let f = ChainMap::scalar(&c, 3);
        let back = ChainMap::from_doc(&f.to_doc(true), &NoComplexes, None).unwrap();
        assert_eq!(back, f);
        let mut doc = f.to_doc(true);
        doc.components.insert("0".into(), vec![vec![JsonInt::Small(1)]]);
        assert!(matches!(ChainMap::from_doc(&doc, &NoComplexes, None), Err(ComplexError::NotAChainMap { .. })));
    }
}
