//! The combinatorial Heegaard Floer chain complex over F2.
//!
//! A [`Complex`] is a finite set of generators (named by position tuples)
//! together with a list of arrows, each an empty embedded bigon or
//! rectangle. Complexes arise two ways: enumerated from a nice diagram
//! ([`enumerate::enumerate_generators`] / [`enumerate::enumerate_arrows`])
//! or loaded directly from an arrow-list document (the input path for
//! bundled chain data).

pub mod enumerate;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{F2Matrix, F2Solution, F2Vec};

/// Generator name in the position-tuple convention: the i-th entry is the
/// 1-based position of the chosen point along the i-th alpha curve.
pub type Tuple = Vec<u32>;

pub fn tuple_string(t: &[u32]) -> String {
    let inner: Vec<String> = t.iter().map(|c| c.to_string()).collect();
    format!("({})", inner.join(","))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    Bigon,
    Rectangle,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Shape::Bigon => write!(f, "bigon"),
            Shape::Rectangle => write!(f, "rectangle"),
        }
    }
}

/// A differential arrow: an empty embedded bigon or rectangle domain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub shape: Shape,
    /// Even weight annotation used by the spectral module, if present.
    pub jplus: Option<u32>,
    /// Region support (indices into the diagram's region list) when the
    /// arrow came out of a diagram enumeration; absent for loaded data.
    pub support: Option<Vec<usize>>,
}

#[derive(Debug, Error)]
pub enum FloerError {
    #[error("unknown generator {0}")]
    UnknownGenerator(String),
    #[error("duplicate generator {0}")]
    DuplicateGenerator(String),
    #[error("arrow {from} -> {to}: {shape} must move exactly {expected} coordinates, moves {got}")]
    BadCoordinateChange {
        from: String,
        to: String,
        shape: Shape,
        expected: usize,
        got: usize,
    },
    #[error("generator tuples must all have the same length")]
    MixedTupleLength,
    #[error("chain element {0} is not a generator of the complex")]
    ChainNotInComplex(String),
    #[error("target is not a cycle: its boundary is nonzero")]
    TargetNotCycle,
    #[error("diagram is not nice: {0}")]
    NotNice(String),
    #[error("diagram error: {0}")]
    Diagram(String),
    #[error("contact points missing from diagram")]
    MissingContactPoints,
}

/// A finite F2 chain complex of tuple-named generators.
#[derive(Clone, Debug)]
pub struct Complex {
    generators: Vec<Tuple>,
    index: BTreeMap<Tuple, usize>,
    arrows: Vec<Arrow>,
}

impl Complex {
    pub fn new(generators: Vec<Tuple>, arrows: Vec<Arrow>) -> Result<Self, FloerError> {
        if let Some(first) = generators.first() {
            if generators.iter().any(|t| t.len() != first.len()) {
                return Err(FloerError::MixedTupleLength);
            }
        }
        let mut index = BTreeMap::new();
        for (i, t) in generators.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(FloerError::DuplicateGenerator(tuple_string(t)));
            }
        }
        for a in &arrows {
            let from = &generators[a.from];
            let to = &generators[a.to];
            let moved = from.iter().zip(to).filter(|(x, y)| x != y).count();
            let expected = match a.shape {
                Shape::Bigon => 1,
                Shape::Rectangle => 2,
            };
            if moved != expected {
                return Err(FloerError::BadCoordinateChange {
                    from: tuple_string(from),
                    to: tuple_string(to),
                    shape: a.shape,
                    expected,
                    got: moved,
                });
            }
        }
        Ok(Complex {
            generators,
            index,
            arrows,
        })
    }

    pub fn generators(&self) -> &[Tuple] {
        &self.generators
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn index_of(&self, t: &[u32]) -> Result<usize, FloerError> {
        self.index
            .get(t)
            .copied()
            .ok_or_else(|| FloerError::UnknownGenerator(tuple_string(t)))
    }

    pub fn tuple(&self, i: usize) -> &Tuple {
        &self.generators[i]
    }

    /// Boundary matrix over F2: column x holds the mod-2 sum of arrows out
    /// of generator x.
    pub fn differential(&self) -> F2Matrix {
        let n = self.len();
        let mut m = F2Matrix::zero(n, n);
        for a in &self.arrows {
            m.flip(a.to, a.from);
        }
        m
    }

    /// Boundary of a chain by direct arrow summation. This is the
    /// verification path; it never touches the matrix solver.
    pub fn boundary_of(&self, chain: &ChainF2) -> ChainF2 {
        let mut out = BTreeSet::new();
        for a in &self.arrows {
            if chain.members.contains(&a.from) && !out.insert(a.to) {
                out.remove(&a.to);
            }
        }
        ChainF2 { members: out }
    }

    /// Check d(d(x)) = 0 for every generator; on failure reports the first
    /// (source, reachable-target) pair with an odd count of length-2 paths.
    pub fn d_squared_zero(&self) -> Result<(), (Tuple, Tuple)> {
        let n = self.len();
        // out[x] = dx as a bit vector
        let mut out = vec![F2Vec::zero(n); n];
        for a in &self.arrows {
            out[a.from].flip(a.to);
        }
        for x in 0..n {
            let mut acc = F2Vec::zero(n);
            let targets: Vec<usize> = out[x].ones().collect();
            for y in targets {
                acc.xor_assign(&out[y]);
            }
            let bad = acc.ones().next();
            if let Some(z) = bad {
                return Err((self.generators[x].clone(), self.generators[z].clone()));
            }
        }
        Ok(())
    }

    /// True iff the boundary of `b` equals `c`.
    pub fn verify_chain(&self, b: &ChainF2, c: &ChainF2) -> bool {
        self.boundary_of(b) == *c
    }

    /// Decide whether `[c] = 0`: either a witness chain `b` with `db = c`,
    /// or a cocycle certificate pairing to 1 with `c` and to 0 with every
    /// boundary.
    pub fn decide_vanishing(&self, c: &ChainF2) -> Result<Vanishing, FloerError> {
        let m = self.differential();
        let cv = c.to_vec(self.len());
        if !m.mul_vec(&cv).is_zero() {
            return Err(FloerError::TargetNotCycle);
        }
        match m.solve(&cv) {
            F2Solution::Solution(x) => Ok(Vanishing::Vanishes(ChainF2::from_vec(&x))),
            F2Solution::Inconsistent(y) => Ok(Vanishing::NonVanishing(ChainF2::from_vec(&y))),
        }
    }

    pub fn chain_from_tuples<'a, I>(&self, tuples: I) -> Result<ChainF2, FloerError>
    where
        I: IntoIterator<Item = &'a Tuple>,
    {
        let mut members = BTreeSet::new();
        for t in tuples {
            let i = self.index_of(t)?;
            if !members.insert(i) {
                members.remove(&i);
            }
        }
        Ok(ChainF2 { members })
    }

    pub fn chain_tuples(&self, chain: &ChainF2) -> Vec<Tuple> {
        chain
            .members
            .iter()
            .map(|&i| self.generators[i].clone())
            .collect()
    }
}

/// Set of generators with F2 (symmetric difference) semantics.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ChainF2 {
    members: BTreeSet<usize>,
}

impl ChainF2 {
    pub fn empty() -> Self {
        ChainF2::default()
    }

    pub fn singleton(i: usize) -> Self {
        ChainF2 {
            members: BTreeSet::from([i]),
        }
    }

    pub fn from_members(members: impl IntoIterator<Item = usize>) -> Self {
        let mut out = ChainF2::empty();
        for m in members {
            out.toggle(m);
        }
        out
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.contains(&i)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn toggle(&mut self, i: usize) {
        if !self.members.insert(i) {
            self.members.remove(&i);
        }
    }

    pub fn add(&mut self, other: &ChainF2) {
        for &m in &other.members {
            self.toggle(m);
        }
    }

    pub fn to_vec(&self, len: usize) -> F2Vec {
        F2Vec::from_indices(len, self.members.iter().copied())
    }

    pub fn from_vec(v: &F2Vec) -> Self {
        ChainF2 {
            members: v.ones().collect(),
        }
    }
}

/// Outcome of a vanishing decision.
#[derive(Clone, Debug)]
pub enum Vanishing {
    /// Witness chain b with db = c.
    Vanishes(ChainF2),
    /// Cocycle y with y.c = 1 and y.(db) = 0 for all b.
    NonVanishing(ChainF2),
}

// -------- serialization --------

#[derive(Serialize, Deserialize)]
pub struct ComplexDoc {
    pub schema: String,
    pub generators: Vec<Tuple>,
    pub arrows: Vec<ArrowDoc>,
}

#[derive(Serialize, Deserialize)]
pub struct ArrowDoc {
    pub from: Tuple,
    pub to: Tuple,
    pub shape: Shape,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub jplus: Option<u32>,
}

impl Complex {
    pub fn from_doc(doc: &ComplexDoc) -> Result<Self, FloerError> {
        let mut generators = doc.generators.clone();
        let mut seen: BTreeSet<&Tuple> = doc.generators.iter().collect();
        // tolerate arrow endpoints missing from the generator list
        for a in &doc.arrows {
            for t in [&a.from, &a.to] {
                if seen.insert(t) {
                    generators.push(t.clone());
                }
            }
        }
        let index: BTreeMap<Tuple, usize> = generators
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i))
            .collect();
        let arrows = doc
            .arrows
            .iter()
            .map(|a| Arrow {
                from: index[&a.from],
                to: index[&a.to],
                shape: a.shape,
                jplus: a.jplus,
                support: None,
            })
            .collect();
        Complex::new(generators, arrows)
    }

    pub fn to_doc(&self) -> ComplexDoc {
        ComplexDoc {
            schema: crate::SCHEMA.to_string(),
            generators: self.generators.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| ArrowDoc {
                    from: self.generators[a.from].clone(),
                    to: self.generators[a.to].clone(),
                    shape: a.shape,
                    jplus: a.jplus,
                })
                .collect(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self, FloerError> {
        let doc: ComplexDoc =
            serde_json::from_str(s).map_err(|e| FloerError::Diagram(e.to_string()))?;
        Complex::from_doc(&doc)
    }
}

/// A chain document: a set of generator tuples and an optional target.
#[derive(Serialize, Deserialize)]
pub struct ChainDoc {
    pub schema: String,
    pub chain: Vec<Tuple>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<Tuple>,
}
