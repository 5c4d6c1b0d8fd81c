//! Heegaard diagrams: the abstract combinatorial type with validation,
//! niceness and first-homology presentations, plus construction from an
//! open book realized on a combinatorial page (doubling across the
//! binding).

pub mod build;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{smith_normal_form, SmithForm};

#[derive(Debug, Error)]
pub enum DiagramError {
    #[error("diagram fails validation: {0:?}")]
    Invalid(Vec<Failure>),
    #[error("tuple {0:?} out of range")]
    TupleOutOfRange(Vec<u32>),
    #[error("diagram has no anchors for tuple numbering")]
    NoAnchors,
    #[error("diagram has no contact points")]
    NoContactPoints,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Quadrant at an intersection point, oriented by the two curves through
/// it: E is along the alpha curve toward its next point, N along the beta
/// curve toward its next point.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Quadrant {
    NE,
    NW,
    SW,
    SE,
}

impl Quadrant {
    pub fn all() -> [Quadrant; 4] {
        [Quadrant::NE, Quadrant::NW, Quadrant::SW, Quadrant::SE]
    }
}

/// An intersection point of one alpha and one beta curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Point {
    pub alpha: usize,
    pub beta: usize,
    /// Orientation sign of the (alpha, beta) frame.
    pub sign: i8,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Corner {
    pub point: usize,
    pub quadrant: Quadrant,
}

/// A complementary region. `circuits` lists its boundary corner cycles
/// (one for a disk); `euler` is its Euler characteristic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub circuits: Vec<Vec<Corner>>,
    pub euler: i64,
    pub basepoint: bool,
}

impl Region {
    pub fn corner_count(&self) -> usize {
        self.circuits.iter().map(|c| c.len()).sum()
    }

    pub fn is_disk(&self) -> bool {
        self.euler == 1 && self.circuits.len() == 1
    }
}

/// Numbering anchor for one alpha curve: positions count 1, 2, ... from
/// `first`, walking the stored cyclic order forwards or backwards.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Anchor {
    pub first: usize,
    pub forwards: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeegaardDiagram {
    /// Genus of the closed Heegaard surface.
    pub genus: u32,
    pub points: Vec<Point>,
    /// Cyclic point sequences, one per alpha curve.
    pub alphas: Vec<Vec<usize>>,
    pub betas: Vec<Vec<usize>>,
    pub regions: Vec<Region>,
    pub contact_points: Option<Vec<usize>>,
    pub anchors: Option<Vec<Anchor>>,
}

/// One named validation failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub rule: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct ValidationReport {
    pub failures: Vec<Failure>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, rule: &str, detail: String) {
        self.failures.push(Failure {
            rule: rule.to_string(),
            detail,
        });
    }
}

/// Niceness certificate: indices of non-basepointed regions that are not
/// bigons or squares.
#[derive(Clone, Debug)]
pub struct NiceCertificate {
    pub violations: Vec<usize>,
}

impl NiceCertificate {
    pub fn is_nice(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Presentation of H1 of the underlying 3-manifold: the algebraic
/// alpha/beta intersection matrix and its invariant factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct H1Presentation {
    pub matrix: Vec<Vec<i128>>,
    pub smith: SmithForm,
}

impl H1Presentation {
    /// Human-readable group: Z/d summands then free rank.
    pub fn group_string(&self) -> String {
        let mut parts: Vec<String> = self
            .smith
            .torsion()
            .iter()
            .map(|d| format!("Z/{d}"))
            .collect();
        match self.smith.cokernel_rank() {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

impl HeegaardDiagram {
    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    /// Index of `point` within its alpha curve's stored cycle.
    fn pos_on_alpha(&self, point: usize) -> Option<(usize, usize)> {
        let a = self.points[point].alpha;
        self.alphas[a].iter().position(|&p| p == point).map(|i| (a, i))
    }

    fn pos_on_beta(&self, point: usize) -> Option<(usize, usize)> {
        let b = self.points[point].beta;
        self.betas[b].iter().position(|&p| p == point).map(|i| (b, i))
    }

    /// Next point along the alpha curve through `point` (the E side).
    pub fn alpha_next(&self, point: usize) -> usize {
        let (a, i) = self.pos_on_alpha(point).expect("point on its alpha");
        let cyc = &self.alphas[a];
        cyc[(i + 1) % cyc.len()]
    }

    pub fn alpha_prev(&self, point: usize) -> usize {
        let (a, i) = self.pos_on_alpha(point).expect("point on its alpha");
        let cyc = &self.alphas[a];
        cyc[(i + cyc.len() - 1) % cyc.len()]
    }

    pub fn beta_next(&self, point: usize) -> usize {
        let (b, i) = self.pos_on_beta(point).expect("point on its beta");
        let cyc = &self.betas[b];
        cyc[(i + 1) % cyc.len()]
    }

    pub fn beta_prev(&self, point: usize) -> usize {
        let (b, i) = self.pos_on_beta(point).expect("point on its beta");
        let cyc = &self.betas[b];
        cyc[(i + cyc.len() - 1) % cyc.len()]
    }

    /// Check every structural invariant; failures are reported, never
    /// thrown.
    pub fn validate(&self) -> ValidationReport {
        let mut rep = ValidationReport::default();
        let n = self.alphas.len();
        if n == 0 || self.betas.len() != n {
            rep.fail(
                "curve-count",
                format!("{} alpha vs {} beta curves", n, self.betas.len()),
            );
            return rep;
        }
        // each point sits on its declared curves, once each
        for (i, p) in self.points.iter().enumerate() {
            if p.alpha >= n || p.beta >= n {
                rep.fail("point-curve-range", format!("point {i}"));
                continue;
            }
            let ca = self.alphas[p.alpha].iter().filter(|&&q| q == i).count();
            let cb = self.betas[p.beta].iter().filter(|&&q| q == i).count();
            if ca != 1 || cb != 1 {
                rep.fail(
                    "point-on-curves",
                    format!("point {i} occurs {ca} times on alpha, {cb} on beta"),
                );
            }
        }
        for (a, cyc) in self.alphas.iter().enumerate() {
            for &p in cyc {
                if p >= self.points.len() || self.points[p].alpha != a {
                    rep.fail("alpha-cycle", format!("curve {a} lists point {p}"));
                }
            }
        }
        for (b, cyc) in self.betas.iter().enumerate() {
            for &p in cyc {
                if p >= self.points.len() || self.points[p].beta != b {
                    rep.fail("beta-cycle", format!("curve {b} lists point {p}"));
                }
            }
        }
        // quadrant coverage: every (point, quadrant) exactly once
        let mut seen: BTreeMap<(usize, Quadrant), usize> = BTreeMap::new();
        for (r, region) in self.regions.iter().enumerate() {
            for circuit in &region.circuits {
                for c in circuit {
                    if c.point >= self.points.len() {
                        rep.fail("corner-point-range", format!("region {r}"));
                        continue;
                    }
                    if seen.insert((c.point, c.quadrant), r).is_some() {
                        rep.fail(
                            "quadrant-coverage",
                            format!("({}, {:?}) claimed twice", c.point, c.quadrant),
                        );
                    }
                }
            }
        }
        for p in 0..self.points.len() {
            for q in Quadrant::all() {
                if !seen.contains_key(&(p, q)) {
                    rep.fail("quadrant-coverage", format!("({p}, {q:?}) unclaimed"));
                }
            }
        }
        // boundary alternation: consecutive corners joined by a shared
        // curve segment, alternating alpha / beta, with quadrants
        // consistent with the stored cyclic orders
        for (r, region) in self.regions.iter().enumerate() {
            for circuit in &region.circuits {
                if circuit.is_empty() {
                    rep.fail("empty-circuit", format!("region {r}"));
                    continue;
                }
                if circuit.len() % 2 != 0 {
                    rep.fail("alternation", format!("region {r} has odd circuit"));
                    continue;
                }
                for w in 0..circuit.len() {
                    let cur = &circuit[w];
                    let nxt = &circuit[(w + 1) % circuit.len()];
                    if self.segment_between(cur, nxt).is_none() {
                        rep.fail(
                            "corner-adjacency",
                            format!(
                                "region {r}: corner ({}, {:?}) to ({}, {:?})",
                                cur.point, cur.quadrant, nxt.point, nxt.quadrant
                            ),
                        );
                    }
                }
                // alternation is implied when every consecutive pair
                // shares exactly one curve and the parities alternate
                let mut kinds = Vec::new();
                for w in 0..circuit.len() {
                    let cur = &circuit[w];
                    let nxt = &circuit[(w + 1) % circuit.len()];
                    if let Some(kind) = self.segment_between(cur, nxt) {
                        kinds.push(kind);
                    }
                }
                if kinds.len() == circuit.len()
                    && kinds
                        .windows(2)
                        .any(|w| w[0] == w[1])
                {
                    rep.fail("alternation", format!("region {r}"));
                }
            }
        }
        // Euler count: V - E + sum chi(region) = 2 - 2g
        let v = self.points.len() as i64;
        let e: i64 = self
            .alphas
            .iter()
            .chain(self.betas.iter())
            .map(|cyc| cyc.len() as i64)
            .sum();
        let chi: i64 = self.regions.iter().map(|r| r.euler).sum();
        if v - e + chi != 2 - 2 * self.genus as i64 {
            rep.fail(
                "euler",
                format!(
                    "V - E + chi = {} - {} + {} != {}",
                    v,
                    e,
                    chi,
                    2 - 2 * self.genus as i64
                ),
            );
        }
        // contact points: one per curve index, alpha index = beta index
        if let Some(cps) = &self.contact_points {
            if cps.len() != n {
                rep.fail("contact-count", format!("{} flags for {} curves", cps.len(), n));
            }
            for (i, &p) in cps.iter().enumerate() {
                if p >= self.points.len()
                    || self.points[p].alpha != i
                    || self.points[p].beta != i
                {
                    rep.fail("contact-pairing", format!("flag {i} -> point {p}"));
                }
            }
        }
        rep
    }

    /// The boundary segment joining two consecutive corners of a circuit
    /// walked with the region on its left: `Some(true)` for an alpha
    /// segment, `Some(false)` for beta, `None` if incoherent.
    ///
    /// Quadrant labels are curve-intrinsic (E toward the next alpha
    /// point, N toward the next beta point), so which label sits on which
    /// geometric side of a segment depends on the crossing sign at each
    /// endpoint.
    fn segment_between(&self, cur: &Corner, nxt: &Corner) -> Option<bool> {
        use Quadrant::*;
        let p = cur.point;
        let q = nxt.point;
        if p >= self.points.len() || q >= self.points.len() {
            return None;
        }
        let pos = |x: usize| self.points[x].sign > 0;
        // alpha segment (p -> next), left-side labels
        let a_l_start = |x: usize| if pos(x) { NE } else { SE };
        let a_l_end = |x: usize| if pos(x) { NW } else { SW };
        let a_r_start = |x: usize| if pos(x) { SE } else { NE };
        let a_r_end = |x: usize| if pos(x) { SW } else { NW };
        // beta segment (p -> next), left-side labels
        let b_l_start = |x: usize| if pos(x) { NW } else { NE };
        let b_l_end = |x: usize| if pos(x) { SW } else { SE };
        let b_r_start = |x: usize| if pos(x) { NE } else { NW };
        let b_r_end = |x: usize| if pos(x) { SE } else { SW };

        let alpha_ok = self.points[p].alpha == self.points[q].alpha
            && ((self.alpha_next(p) == q
                && cur.quadrant == a_l_start(p)
                && nxt.quadrant == a_l_end(q))
                || (self.alpha_prev(p) == q
                    && cur.quadrant == a_r_end(p)
                    && nxt.quadrant == a_r_start(q)));
        let beta_ok = self.points[p].beta == self.points[q].beta
            && ((self.beta_next(p) == q
                && cur.quadrant == b_l_start(p)
                && nxt.quadrant == b_l_end(q))
                || (self.beta_prev(p) == q
                    && cur.quadrant == b_r_end(p)
                    && nxt.quadrant == b_r_start(q)));
        match (alpha_ok, beta_ok) {
            (true, false) => Some(true),
            (false, true) => Some(false),
            (true, true) => Some(true),
            _ => None,
        }
    }

    /// True iff every region without a basepoint is a bigon or a square.
    pub fn nice_certificate(&self) -> NiceCertificate {
        let violations = self
            .regions
            .iter()
            .enumerate()
            .filter(|(_, r)| {
                !r.basepoint && !(r.is_disk() && matches!(r.corner_count(), 2 | 4))
            })
            .map(|(i, _)| i)
            .collect();
        NiceCertificate { violations }
    }

    pub fn is_nice(&self) -> bool {
        self.nice_certificate().is_nice()
    }

    /// Algebraic intersection matrix M(i, j) = signed count of
    /// alpha_i cap beta_j, with its Smith normal form.
    pub fn h1_presentation(&self) -> H1Presentation {
        let n = self.n();
        let mut m = vec![vec![0i128; n]; n];
        for p in &self.points {
            m[p.alpha][p.beta] += p.sign as i128;
        }
        let smith = smith_normal_form(&m);
        H1Presentation { matrix: m, smith }
    }

    /// Tuple coordinates of a point selection, via the anchors.
    pub fn tuple_of(&self, points: &[usize]) -> Result<Vec<u32>, DiagramError> {
        let anchors = self.anchors.as_ref().ok_or(DiagramError::NoAnchors)?;
        let mut out = Vec::with_capacity(points.len());
        for (i, &p) in points.iter().enumerate() {
            out.push(self.position_of(p, &anchors[i], i)?);
        }
        Ok(out)
    }

    fn position_of(&self, point: usize, anchor: &Anchor, alpha: usize) -> Result<u32, DiagramError> {
        let cyc = &self.alphas[alpha];
        let start = cyc
            .iter()
            .position(|&p| p == anchor.first)
            .ok_or(DiagramError::NoAnchors)?;
        let here = cyc
            .iter()
            .position(|&p| p == point)
            .ok_or_else(|| DiagramError::TupleOutOfRange(vec![point as u32]))?;
        let len = cyc.len();
        let steps = if anchor.forwards {
            (here + len - start) % len
        } else {
            (start + len - here) % len
        };
        Ok(steps as u32 + 1)
    }

    /// Point on alpha_i at tuple position `pos` (1-based from the anchor).
    pub fn point_at(&self, alpha: usize, pos: u32) -> Result<usize, DiagramError> {
        let anchors = self.anchors.as_ref().ok_or(DiagramError::NoAnchors)?;
        let anchor = &anchors[alpha];
        let cyc = &self.alphas[alpha];
        if pos == 0 || pos as usize > cyc.len() {
            return Err(DiagramError::TupleOutOfRange(vec![pos]));
        }
        let start = cyc
            .iter()
            .position(|&p| p == anchor.first)
            .ok_or(DiagramError::NoAnchors)?;
        let len = cyc.len();
        let steps = (pos - 1) as usize;
        let idx = if anchor.forwards {
            (start + steps) % len
        } else {
            (start + len - steps % len) % len
        };
        Ok(cyc[idx])
    }

    /// Generator (one point per alpha) from its tuple.
    pub fn generator_of(&self, tuple: &[u32]) -> Result<Vec<usize>, DiagramError> {
        if tuple.len() != self.n() {
            return Err(DiagramError::TupleOutOfRange(tuple.to_vec()));
        }
        tuple
            .iter()
            .enumerate()
            .map(|(i, &pos)| self.point_at(i, pos))
            .collect()
    }

    /// The distinguished generator of the contact structure: the flagged
    /// pushoff point on each curve.
    pub fn contact_generator(&self) -> Result<Vec<usize>, DiagramError> {
        self.contact_points
            .clone()
            .ok_or(DiagramError::NoContactPoints)
    }

    pub fn basepoint_count(&self) -> usize {
        self.regions.iter().filter(|r| r.basepoint).count()
    }

    pub fn to_json(&self) -> String {
        let mut doc = serde_json::to_value(self).expect("diagram serializes");
        doc.as_object_mut()
            .unwrap()
            .insert("schema".into(), crate::SCHEMA.into());
        serde_json::to_string_pretty(&doc).expect("diagram serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, DiagramError> {
        serde_json::from_str(s).map_err(|e| DiagramError::Parse(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use crate::models::grid_diagram as grid;

    #[test]
    fn grid_validates_and_is_nice() {
        for n in 2..5 {
            let d = grid(n, &[(0, 0)]);
            let rep = d.validate();
            assert!(rep.ok(), "n = {n}: {:?}", rep.failures);
            assert!(d.is_nice());
            assert_eq!(d.basepoint_count(), 1);
        }
    }

    #[test]
    fn corrupted_region_is_reported() {
        let mut d = grid(2, &[]);
        d.regions[0].circuits[0].remove(3);
        let rep = d.validate();
        assert!(!rep.ok());
        assert!(rep
            .failures
            .iter()
            .any(|f| f.rule == "quadrant-coverage" || f.rule == "alternation"));
    }

    #[test]
    fn genus_mismatch_detected() {
        let mut d = grid(2, &[]);
        d.genus = 2;
        let rep = d.validate();
        assert!(rep.failures.iter().any(|f| f.rule == "euler"));
    }

    #[test]
    fn grid_h1_is_free_of_rank_n_minus_1() {
        for n in 2..5 {
            let d = grid(n, &[]);
            let h = d.h1_presentation();
            assert_eq!(h.smith.cokernel_rank(), n - 1);
            assert!(h.smith.torsion().is_empty());
        }
    }

    #[test]
    fn tuple_roundtrip() {
        let d = grid(3, &[]);
        for tuple in [vec![1u32, 1, 1], vec![2, 3, 1], vec![3, 3, 3]] {
            let gen = d.generator_of(&tuple).unwrap();
            assert_eq!(d.tuple_of(&gen).unwrap(), tuple);
        }
        assert!(d.generator_of(&[4, 1, 1]).is_err());
    }
}
