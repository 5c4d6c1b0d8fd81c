//! Weighted differentials and spectral-order upper bounds.
//!
//! The differential of a filtered complex splits as `d = sum_i d_i`, where
//! an arrow of even weight annotation `J+ = 2i` contributes to `d_i`. A
//! bound `o <= k` is certified by chains `b_0, ..., b_k` solving the layer
//! equations
//!
//! ```text
//!     sum_i d_i b_{n+i} = c_n      for 0 <= n <= k,
//! ```
//!
//! with `c_0` the contact cycle and `c_n = 0` for `n >= 1`. The solver
//! assembles the block-triangular GF(2) system for ascending `k` and
//! returns the least feasible one; no heuristics, exact elimination only.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::floer::{tuple_string, ChainF2, Complex, Tuple};
use crate::linalg::{F2Matrix, F2Solution, F2Vec};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("arrow {from} -> {to} has odd J+ annotation {jplus}")]
    OddJPlus { from: String, to: String, jplus: u32 },
    #[error("arrow {from} -> {to} is missing its J+ annotation")]
    MissingJPlus { from: String, to: String },
    #[error("target is not a cycle of the total differential")]
    TargetNotCycle,
    #[error("floer error: {0}")]
    Floer(#[from] crate::floer::FloerError),
}

/// A complex whose arrows carry weights `i` with `J+ = 2i`.
#[derive(Clone, Debug)]
pub struct FilteredComplex {
    complex: Complex,
    weights: Vec<u32>,
    max_weight: u32,
}

impl FilteredComplex {
    /// Read weights off the complex's own `J+` annotations, validating
    /// evenness and coverage.
    pub fn attach_weights(complex: Complex) -> Result<Self, SpectralError> {
        let weights = complex
            .arrows()
            .iter()
            .map(|a| {
                let from = tuple_string(complex.tuple(a.from));
                let to = tuple_string(complex.tuple(a.to));
                match a.jplus {
                    None => Err(SpectralError::MissingJPlus { from, to }),
                    Some(j) if j % 2 != 0 => Err(SpectralError::OddJPlus { from, to, jplus: j }),
                    Some(j) => Ok(j / 2),
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        let max_weight = weights.iter().copied().max().unwrap_or(0);
        Ok(FilteredComplex {
            complex,
            weights,
            max_weight,
        })
    }

    /// Attach explicit annotations (one even `J+` per arrow, in arrow order).
    pub fn attach_annotations(
        complex: Complex,
        annotations: &[u32],
    ) -> Result<Self, SpectralError> {
        assert_eq!(annotations.len(), complex.arrows().len());
        let mut cx = complex;
        let arrows = cx
            .arrows()
            .iter()
            .zip(annotations)
            .map(|(a, &j)| {
                let mut a = a.clone();
                a.jplus = Some(j);
                a
            })
            .collect();
        cx = Complex::new(cx.generators().to_vec(), arrows)?;
        Self::attach_weights(cx)
    }

    pub fn complex(&self) -> &Complex {
        &self.complex
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn max_weight(&self) -> u32 {
        self.max_weight
    }

    /// Matrix of `d_i` (arrows of weight exactly `i`).
    pub fn layer_matrix(&self, i: u32) -> F2Matrix {
        let n = self.complex.len();
        let mut m = F2Matrix::zero(n, n);
        for (a, &w) in self.complex.arrows().iter().zip(&self.weights) {
            if w == i {
                m.flip(a.to, a.from);
            }
        }
        m
    }

    /// `d_i` applied to a chain, by direct arrow summation.
    pub fn layer_boundary(&self, i: u32, chain: &ChainF2) -> ChainF2 {
        let mut out = ChainF2::empty();
        for (a, &w) in self.complex.arrows().iter().zip(&self.weights) {
            if w == i && chain.contains(a.from) {
                out.toggle(a.to);
            }
        }
        out
    }

    /// Default search ceiling: distinct weights times generator count.
    pub fn default_kmax(&self) -> usize {
        let mut ws: Vec<u32> = self.weights.clone();
        ws.sort_unstable();
        ws.dedup();
        ws.len().max(1) * self.complex.len().max(1)
    }
}

/// Chains `b_0, ..., b_k` against a target cycle.
#[derive(Clone, Debug)]
pub struct FilteredWitness {
    pub target: ChainF2,
    pub layers: Vec<ChainF2>,
}

impl FilteredWitness {
    pub fn order(&self) -> usize {
        self.layers.len().saturating_sub(1)
    }
}

/// Per-layer residuals of a witness check; empty means the witness holds.
#[derive(Clone, Debug)]
pub struct LayerReport {
    pub failures: Vec<(usize, ChainF2)>,
}

impl LayerReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Check every layer equation of a witness by direct summation.
pub fn verify_filtered_witness(fc: &FilteredComplex, w: &FilteredWitness) -> LayerReport {
    let k = w.layers.len();
    let mut failures = Vec::new();
    for n in 0..k {
        let mut acc = ChainF2::empty();
        for (i, b) in w.layers[n..].iter().enumerate() {
            acc.add(&fc.layer_boundary(i as u32, b));
        }
        if n == 0 {
            acc.add(&w.target);
        }
        if !acc.is_empty() {
            failures.push((n, acc));
        }
    }
    LayerReport { failures }
}

/// Result of the feasibility search.
#[derive(Clone, Debug)]
pub enum OrderBound {
    /// Least `k` admitting a witness, with one such witness.
    Bounded { k: usize, witness: FilteredWitness },
    /// No witness with `k <= kmax`.
    NoBoundUpTo { kmax: usize },
}

/// Ascend `k = 0, 1, ..., kmax` and return the least `k` for which the
/// block-triangular layer system is solvable.
pub fn order_upper_bound(
    fc: &FilteredComplex,
    c: &ChainF2,
    kmax: Option<usize>,
) -> Result<OrderBound, SpectralError> {
    let g = fc.complex.len();
    let total = fc.complex.differential();
    if !total.mul_vec(&c.to_vec(g)).is_zero() {
        return Err(SpectralError::TargetNotCycle);
    }
    let kmax = kmax.unwrap_or_else(|| fc.default_kmax());
    let layer_mats: Vec<F2Matrix> = (0..=fc.max_weight).map(|i| fc.layer_matrix(i)).collect();

    for k in 0..=kmax {
        // unknowns: blocks x_0..x_k, equations: layers 0..k
        let dim = (k + 1) * g;
        let mut m = F2Matrix::zero(dim, dim);
        for n in 0..=k {
            for j in n..=k {
                let i = (j - n) as u32;
                if i > fc.max_weight {
                    continue;
                }
                let d = &layer_mats[i as usize];
                for r in 0..g {
                    for s in d.row(r).ones() {
                        // row block n, column block j
                        m.flip(n * g + r, j * g + s);
                    }
                }
            }
        }
        let mut rhs = F2Vec::zero(dim);
        for i in c.members() {
            rhs.set(i, true);
        }
        if let F2Solution::Solution(x) = m.solve(&rhs) {
            let layers = (0..=k)
                .map(|j| {
                    ChainF2::from_members((0..g).filter(|&s| x.get(j * g + s)))
                })
                .collect();
            return Ok(OrderBound::Bounded {
                k,
                witness: FilteredWitness {
                    target: c.clone(),
                    layers,
                },
            });
        }
    }
    Ok(OrderBound::NoBoundUpTo { kmax })
}

// -------- serialization --------

/// Witness document: target chain plus layer chains b_0, ..., b_k.
#[derive(Serialize, Deserialize)]
pub struct WitnessDoc {
    pub schema: String,
    pub target: Vec<Tuple>,
    pub layers: Vec<Vec<Tuple>>,
}

impl WitnessDoc {
    pub fn resolve(&self, complex: &Complex) -> Result<FilteredWitness, SpectralError> {
        let target = complex.chain_from_tuples(self.target.iter())?;
        let layers = self
            .layers
            .iter()
            .map(|l| complex.chain_from_tuples(l.iter()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FilteredWitness { target, layers })
    }

    pub fn from_witness(complex: &Complex, w: &FilteredWitness) -> Self {
        WitnessDoc {
            schema: crate::SCHEMA.to_string(),
            target: complex.chain_tuples(&w.target),
            layers: w.layers.iter().map(|l| complex.chain_tuples(l)).collect(),
        }
    }
}
