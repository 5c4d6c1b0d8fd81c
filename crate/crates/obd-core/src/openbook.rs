//! Symbolic algebra of abstract open books: pages, twist words, navels,
//! binding sums, stabilization and page bookkeeping.
//!
//! Everything here is declaration-level. Curves carry structural metadata
//! only (boundary-parallel to which boundary, interior, band core); their
//! realizations as embedded paths live in [`crate::page`]. Monodromy words
//! are never simplified: no isotopy reasoning, no cancellation of boundary
//! twists against navel twists. Word length and page arithmetic are exact
//! under this convention, and downstream homology computations do not
//! depend on word-level simplification.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type BoundaryId = String;
pub type CurveId = String;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OpenBookError {
    #[error("unknown boundary id {0}")]
    UnknownBoundary(BoundaryId),
    #[error("unknown curve id {0}")]
    UnknownCurve(CurveId),
    #[error("monodromy references undeclared curve {0}")]
    UndeclaredMonodromyCurve(CurveId),
    #[error("a page must have at least one boundary component")]
    NoBoundary,
    #[error("binding sum spec must contain at least one pair")]
    EmptySumSpec,
    #[error("boundary id {0} used more than once in a sum spec")]
    RepeatedBoundary(BoundaryId),
    #[error("curve {0} is not declared destabilizable")]
    NotDestabilizable(CurveId),
    #[error("curve {0} does not occur in the monodromy with sign +1")]
    NoPositiveOccurrence(CurveId),
    #[error("curve {0} still occurs in the monodromy after removing the band twist")]
    ResidualOccurrence(CurveId),
    #[error("boundary-parallel declaration for {curve} references missing boundary {boundary}")]
    DanglingBoundary { curve: CurveId, boundary: BoundaryId },
    #[error("page needs at least two boundary components, found {0}")]
    NeedTwoBoundaries(usize),
    #[error("duplicate boundary id {0}")]
    DuplicateBoundary(BoundaryId),
    #[error("duplicate curve id {0}")]
    DuplicateCurve(CurveId),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "1")]
    Positive,
    #[serde(rename = "-1")]
    Negative,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }
}

/// Abstract page: genus plus named boundary circles.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageDescriptor {
    pub genus: u32,
    pub boundary: Vec<BoundaryId>,
    #[serde(default)]
    pub label: String,
}

impl PageDescriptor {
    pub fn new(genus: u32, boundary: Vec<BoundaryId>, label: &str) -> Result<Self, OpenBookError> {
        if boundary.is_empty() {
            return Err(OpenBookError::NoBoundary);
        }
        let mut seen = std::collections::BTreeSet::new();
        for b in &boundary {
            if !seen.insert(b.clone()) {
                return Err(OpenBookError::DuplicateBoundary(b.clone()));
            }
        }
        Ok(PageDescriptor {
            genus,
            boundary,
            label: label.to_string(),
        })
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary.len() as i64
    }
}

/// How a band core changes the page when its positive twist is
/// destabilized.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BandPattern {
    /// Band attached along one boundary circle: the page gained the extra
    /// boundary id, which destabilization deletes again (declarations
    /// pointing at it are re-aimed at `merges_into`).
    Split {
        extra_boundary: BoundaryId,
        merges_into: BoundaryId,
    },
    /// Band joining two boundary circles into `merged`; destabilization
    /// restores the pair and drops the genus by one.
    Merge {
        merged: BoundaryId,
        joined: (BoundaryId, BoundaryId),
    },
}

/// Structural metadata for a declared curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CurveDecl {
    /// Parallel to a boundary circle; offset 0 hugs the boundary, larger
    /// offsets sit farther out (navel words use offsets 0 and 1).
    BoundaryParallel {
        boundary: BoundaryId,
        #[serde(default)]
        offset: u32,
    },
    /// Bounds a disc around a navel-core point; contractible until a
    /// binding sum turns the point into a connect-sum neck.
    NavelNeck { boundary: BoundaryId },
    Interior {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        note: Option<String>,
    },
    BandCore { pattern: BandPattern },
}

/// One letter of a twist word. `mult` compresses repeated adjacent
/// identical twists; word equality compares flattened forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistLetter {
    pub curve: CurveId,
    pub sign: Sign,
    pub mult: u32,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TwistWord(pub Vec<TwistLetter>);

impl TwistWord {
    pub fn identity() -> Self {
        TwistWord(Vec::new())
    }

    pub fn letter(curve: &str, sign: Sign, mult: u32) -> Self {
        TwistWord(vec![TwistLetter {
            curve: curve.to_string(),
            sign,
            mult,
        }])
    }

    /// Flattened length (multiplicities expanded).
    pub fn len(&self) -> usize {
        self.0.iter().map(|l| l.mult as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn concat(&self, other: &TwistWord) -> TwistWord {
        let mut letters = self.0.clone();
        letters.extend(other.0.iter().cloned());
        TwistWord(letters)
    }

    /// Expanded letters, one per twist.
    pub fn flattened(&self) -> Vec<(CurveId, Sign)> {
        self.0
            .iter()
            .flat_map(|l| std::iter::repeat_n((l.curve.clone(), l.sign), l.mult as usize))
            .collect()
    }

    pub fn same_word(&self, other: &TwistWord) -> bool {
        self.flattened() == other.flattened()
    }

    pub fn signs(&self) -> Vec<Sign> {
        self.flattened().into_iter().map(|(_, s)| s).collect()
    }
}

/// Record that a navel word was inserted at a boundary component. The
/// three twists are isotopic to the identity until a binding sum is
/// performed through that component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NavelMark {
    pub boundary: BoundaryId,
    pub curves: [CurveId; 3],
    pub isotopic_to_identity: bool,
}

/// Abstract open book: page, curve table, monodromy word, navel records.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenBook {
    pub page: PageDescriptor,
    pub curves: BTreeMap<CurveId, CurveDecl>,
    pub monodromy: TwistWord,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub navels: Vec<NavelMark>,
}

/// A binding-sum wiring: pairs (boundary of left summand, boundary of
/// right summand), pairwise disjoint within each side.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BindingSumSpec {
    pub pairs: Vec<(BoundaryId, BoundaryId)>,
}

/// Attachment data for a positive stabilization: the two feet of the
/// plumbed band, possibly on the same boundary circle.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StabilizeArc {
    pub feet: (BoundaryId, BoundaryId),
}

impl OpenBook {
    pub fn new(page: PageDescriptor) -> Self {
        OpenBook {
            page,
            curves: BTreeMap::new(),
            monodromy: TwistWord::identity(),
            navels: Vec::new(),
        }
    }

    /// The trivial disk open book.
    pub fn disk() -> Self {
        OpenBook::new(PageDescriptor::new(0, vec!["bd0".into()], "disk").unwrap())
    }

    /// The trivial annulus open book.
    pub fn annulus() -> Self {
        OpenBook::new(PageDescriptor::new(0, vec!["bd0".into(), "bd1".into()], "annulus").unwrap())
    }

    /// The annulus open book with `n` twists along the declared core.
    pub fn annulus_twisted(sign: Sign, n: u32) -> Self {
        let mut ob = OpenBook::annulus();
        ob.curves.insert(
            "core".into(),
            CurveDecl::Interior {
                note: Some("core".into()),
            },
        );
        if n > 0 {
            ob.monodromy = TwistWord::letter("core", sign, n);
        }
        ob
    }

    /// (Sigma_{g,2}, Id): genus-g page with two boundary circles.
    pub fn sigma_g2(genus: u32) -> Self {
        OpenBook::new(
            PageDescriptor::new(
                genus,
                vec!["bd0".into(), "bd1".into()],
                &format!("sigma_{genus},2"),
            )
            .unwrap(),
        )
    }

    pub fn validate(&self) -> Result<(), OpenBookError> {
        if self.page.boundary.is_empty() {
            return Err(OpenBookError::NoBoundary);
        }
        for (id, decl) in &self.curves {
            let bd = match decl {
                CurveDecl::BoundaryParallel { boundary, .. } => Some(boundary),
                CurveDecl::NavelNeck { boundary } => Some(boundary),
                _ => None,
            };
            if let Some(b) = bd {
                if !self.page.boundary.contains(b) {
                    return Err(OpenBookError::DanglingBoundary {
                        curve: id.clone(),
                        boundary: b.clone(),
                    });
                }
            }
        }
        for l in &self.monodromy.0 {
            if !self.curves.contains_key(&l.curve) {
                return Err(OpenBookError::UndeclaredMonodromyCurve(l.curve.clone()));
            }
        }
        Ok(())
    }

    fn declare(&mut self, id: &str, decl: CurveDecl) -> Result<(), OpenBookError> {
        if self.curves.insert(id.to_string(), decl).is_some() {
            return Err(OpenBookError::DuplicateCurve(id.to_string()));
        }
        Ok(())
    }

    /// Mark an existing positive-twist curve as a destabilizable band
    /// core. Example data uses this to record which navel twists play the
    /// role of stabilizations.
    pub fn declare_destabilizable(
        &self,
        curve: &str,
        pattern: BandPattern,
    ) -> Result<OpenBook, OpenBookError> {
        let mut out = self.clone();
        if !out.curves.contains_key(curve) {
            return Err(OpenBookError::UnknownCurve(curve.to_string()));
        }
        out.curves
            .insert(curve.to_string(), CurveDecl::BandCore { pattern });
        Ok(out)
    }

    /// Bookkeeping tuple: (genus, boundary count, Euler characteristic,
    /// flattened monodromy length).
    pub fn page_invariants(&self) -> (u32, usize, i64, usize) {
        (
            self.page.genus,
            self.page.boundary.len(),
            self.page.euler_characteristic(),
            self.monodromy.len(),
        )
    }
}

/// The three-twist navel word at boundary `k`: a negative twist around the
/// navel-core intersection point, a positive twist parallel to `k`, and a
/// negative twist parallel to `k` beyond the point. Fresh curves are
/// declared in the returned book; the word is flagged isotopic to the
/// identity until a sum is performed.
pub fn navel_word(ob: &OpenBook, k: &str) -> Result<(OpenBook, TwistWord), OpenBookError> {
    if !ob.page.boundary.iter().any(|b| b == k) {
        return Err(OpenBookError::UnknownBoundary(k.to_string()));
    }
    let mut out = ob.clone();
    let neck = format!("{k}.navel.neck");
    let par = format!("{k}.navel.par");
    let outer = format!("{k}.navel.outer");
    out.declare(
        &neck,
        CurveDecl::NavelNeck {
            boundary: k.to_string(),
        },
    )?;
    out.declare(
        &par,
        CurveDecl::BoundaryParallel {
            boundary: k.to_string(),
            offset: 0,
        },
    )?;
    out.declare(
        &outer,
        CurveDecl::BoundaryParallel {
            boundary: k.to_string(),
            offset: 1,
        },
    )?;
    let word = TwistWord(vec![
        TwistLetter {
            curve: neck.clone(),
            sign: Sign::Negative,
            mult: 1,
        },
        TwistLetter {
            curve: par.clone(),
            sign: Sign::Positive,
            mult: 1,
        },
        TwistLetter {
            curve: outer.clone(),
            sign: Sign::Negative,
            mult: 1,
        },
    ]);
    out.navels.push(NavelMark {
        boundary: k.to_string(),
        curves: [neck, par, outer],
        isotopic_to_identity: true,
    });
    Ok((out, word))
}

fn transport(ob: &OpenBook, prefix: &str) -> OpenBook {
    let rn = |s: &str| format!("{prefix}{s}");
    let rn_decl = |d: &CurveDecl| match d {
        CurveDecl::BoundaryParallel { boundary, offset } => CurveDecl::BoundaryParallel {
            boundary: rn(boundary),
            offset: *offset,
        },
        CurveDecl::NavelNeck { boundary } => CurveDecl::NavelNeck {
            boundary: rn(boundary),
        },
        CurveDecl::Interior { note } => CurveDecl::Interior { note: note.clone() },
        CurveDecl::BandCore { pattern } => CurveDecl::BandCore {
            pattern: match pattern {
                BandPattern::Split {
                    extra_boundary,
                    merges_into,
                } => BandPattern::Split {
                    extra_boundary: rn(extra_boundary),
                    merges_into: rn(merges_into),
                },
                BandPattern::Merge { merged, joined } => BandPattern::Merge {
                    merged: rn(merged),
                    joined: (rn(&joined.0), rn(&joined.1)),
                },
            },
        },
    };
    OpenBook {
        page: PageDescriptor {
            genus: ob.page.genus,
            boundary: ob.page.boundary.iter().map(|b| rn(b)).collect(),
            label: ob.page.label.clone(),
        },
        curves: ob
            .curves
            .iter()
            .map(|(id, d)| (rn(id), rn_decl(d)))
            .collect(),
        monodromy: TwistWord(
            ob.monodromy
                .0
                .iter()
                .map(|l| TwistLetter {
                    curve: rn(&l.curve),
                    sign: l.sign,
                    mult: l.mult,
                })
                .collect(),
        ),
        navels: ob
            .navels
            .iter()
            .map(|n| NavelMark {
                boundary: rn(&n.boundary),
                curves: [rn(&n.curves[0]), rn(&n.curves[1]), rn(&n.curves[2])],
                isotopic_to_identity: n.isotopic_to_identity,
            })
            .collect(),
    }
}

/// Binding sum of two open books along the paired boundary components.
///
/// For `p` pairs the new page is the `p`-fold connect sum of the pages:
/// genus `g1 + g2 + (p - 1)`, boundary count `b1 + b2` (summed boundary
/// circles stay on the page; the sum removes navel cores, not bindings).
/// The monodromy is `phi1` followed by the left navel words, then `phi2`
/// followed by the right navel words; all navel marks through a summed
/// component lose their isotopic-to-identity flag.
pub fn binding_sum(
    ob1: &OpenBook,
    ob2: &OpenBook,
    spec: &BindingSumSpec,
) -> Result<OpenBook, OpenBookError> {
    if spec.pairs.is_empty() {
        return Err(OpenBookError::EmptySumSpec);
    }
    for side in 0..2 {
        let mut seen = std::collections::BTreeSet::new();
        for pair in &spec.pairs {
            let id = if side == 0 { &pair.0 } else { &pair.1 };
            if !seen.insert(id.clone()) {
                return Err(OpenBookError::RepeatedBoundary(id.clone()));
            }
        }
    }
    for (k1, k2) in &spec.pairs {
        if !ob1.page.boundary.contains(k1) {
            return Err(OpenBookError::UnknownBoundary(k1.clone()));
        }
        if !ob2.page.boundary.contains(k2) {
            return Err(OpenBookError::UnknownBoundary(k2.clone()));
        }
    }

    let p = spec.pairs.len() as u32;
    let mut left = transport(ob1, "1:");
    let mut right = transport(ob2, "2:");

    let mut left_navels = TwistWord::identity();
    for (k1, _) in &spec.pairs {
        let (next, word) = navel_word(&left, &format!("1:{k1}"))?;
        left = next;
        left_navels = left_navels.concat(&word);
        left.navels.last_mut().unwrap().isotopic_to_identity = false;
    }
    let mut right_navels = TwistWord::identity();
    for (_, k2) in &spec.pairs {
        let (next, word) = navel_word(&right, &format!("2:{k2}"))?;
        right = next;
        right_navels = right_navels.concat(&word);
        right.navels.last_mut().unwrap().isotopic_to_identity = false;
    }

    let page = PageDescriptor::new(
        left.page.genus + right.page.genus + (p - 1),
        left.page
            .boundary
            .iter()
            .chain(right.page.boundary.iter())
            .cloned()
            .collect(),
        &format!("{}+{}", ob1.page.label, ob2.page.label),
    )?;

    let mut curves = left.curves;
    curves.extend(right.curves);
    let monodromy = left
        .monodromy
        .concat(&left_navels)
        .concat(&right.monodromy)
        .concat(&right_navels);
    let mut navels = left.navels;
    navels.extend(right.navels);

    let out = OpenBook {
        page,
        curves,
        monodromy,
        navels,
    };
    out.validate()?;
    Ok(out)
}

/// Plumb a positive Hopf band along `attach` and append the positive twist
/// about its core.
pub fn positive_stabilize(ob: &OpenBook, attach: &StabilizeArc) -> Result<OpenBook, OpenBookError> {
    let (f0, f1) = &attach.feet;
    for f in [f0, f1] {
        if !ob.page.boundary.contains(f) {
            return Err(OpenBookError::UnknownBoundary(f.clone()));
        }
    }
    let mut out = ob.clone();
    let n = ob
        .curves
        .values()
        .filter(|d| matches!(d, CurveDecl::BandCore { .. }))
        .count();
    let core = format!("stab{n}");
    if f0 == f1 {
        // band on one circle: the boundary splits, gaining a component
        let fresh = format!("{core}.bd");
        out.page.boundary.push(fresh.clone());
        out.declare(
            &core,
            CurveDecl::BandCore {
                pattern: BandPattern::Split {
                    extra_boundary: fresh,
                    merges_into: f0.clone(),
                },
            },
        )?;
    } else {
        // band joining two circles: they merge and the genus rises
        let fresh = format!("{core}.bd");
        out.page.boundary.retain(|b| b != f0 && b != f1);
        out.page.boundary.push(fresh.clone());
        out.page.genus += 1;
        out.declare(
            &core,
            CurveDecl::BandCore {
                pattern: BandPattern::Merge {
                    merged: fresh,
                    joined: (f0.clone(), f1.clone()),
                },
            },
        )?;
        // re-aim declarations that referenced the merged circles
        let renames: Vec<CurveId> = out
            .curves
            .iter()
            .filter_map(|(id, d)| match d {
                CurveDecl::BoundaryParallel { boundary, .. } | CurveDecl::NavelNeck { boundary }
                    if boundary == f0 || boundary == f1 =>
                {
                    Some(id.clone())
                }
                _ => None,
            })
            .collect();
        let merged = format!("{core}.bd");
        for id in renames {
            match out.curves.get_mut(&id).unwrap() {
                CurveDecl::BoundaryParallel { boundary, .. }
                | CurveDecl::NavelNeck { boundary } => *boundary = merged.clone(),
                _ => {}
            }
        }
    }
    out.monodromy = out
        .monodromy
        .concat(&TwistWord::letter(&core, Sign::Positive, 1));
    out.validate()?;
    Ok(out)
}

/// Inverse of [`positive_stabilize`] on a declared band: removes one
/// positive occurrence of the band twist and undoes the page change.
pub fn destabilize(ob: &OpenBook, curve: &str) -> Result<OpenBook, OpenBookError> {
    let decl = ob
        .curves
        .get(curve)
        .ok_or_else(|| OpenBookError::UnknownCurve(curve.to_string()))?;
    let CurveDecl::BandCore { pattern } = decl.clone() else {
        return Err(OpenBookError::NotDestabilizable(curve.to_string()));
    };
    let mut out = ob.clone();

    // drop exactly one positive occurrence
    let mut letters = Vec::new();
    let mut dropped = false;
    for l in &out.monodromy.0 {
        if !dropped && l.curve == curve && l.sign == Sign::Positive {
            dropped = true;
            if l.mult > 1 {
                letters.push(TwistLetter {
                    mult: l.mult - 1,
                    ..l.clone()
                });
            }
            continue;
        }
        letters.push(l.clone());
    }
    if !dropped {
        return Err(OpenBookError::NoPositiveOccurrence(curve.to_string()));
    }
    out.monodromy = TwistWord(letters);
    if out.monodromy.0.iter().any(|l| l.curve == curve) {
        return Err(OpenBookError::ResidualOccurrence(curve.to_string()));
    }
    out.curves.remove(curve);

    match pattern {
        BandPattern::Split {
            extra_boundary,
            merges_into,
        } => {
            if !out.page.boundary.contains(&extra_boundary) {
                return Err(OpenBookError::UnknownBoundary(extra_boundary));
            }
            out.page.boundary.retain(|b| b != &extra_boundary);
            for d in out.curves.values_mut() {
                match d {
                    CurveDecl::BoundaryParallel { boundary, .. }
                    | CurveDecl::NavelNeck { boundary }
                        if *boundary == extra_boundary =>
                    {
                        *boundary = merges_into.clone();
                    }
                    _ => {}
                }
            }
            for nm in out.navels.iter_mut() {
                if nm.boundary == extra_boundary {
                    nm.boundary = merges_into.clone();
                }
            }
        }
        BandPattern::Merge { merged, joined } => {
            if !out.page.boundary.contains(&merged) {
                return Err(OpenBookError::UnknownBoundary(merged));
            }
            out.page.boundary.retain(|b| b != &merged);
            out.page.boundary.push(joined.0.clone());
            out.page.boundary.push(joined.1.clone());
            out.page.genus -= 1;
            for d in out.curves.values_mut() {
                match d {
                    CurveDecl::BoundaryParallel { boundary, .. }
                    | CurveDecl::NavelNeck { boundary }
                        if *boundary == merged =>
                    {
                        *boundary = joined.0.clone();
                    }
                    _ => {}
                }
            }
        }
    }
    out.validate()?;
    Ok(out)
}

/// Binding sum of `ob` with two trivial annulus open books, one chained to
/// each of the first two boundary components: the standard presentation of
/// a neighbourhood with full torsion around those bindings.
pub fn giroux_torsion_presentation(ob: &OpenBook) -> Result<OpenBook, OpenBookError> {
    if ob.page.boundary.len() < 2 {
        return Err(OpenBookError::NeedTwoBoundaries(ob.page.boundary.len()));
    }
    let k1 = ob.page.boundary[0].clone();
    let k2 = ob.page.boundary[1].clone();
    let first = binding_sum(
        ob,
        &OpenBook::annulus(),
        &BindingSumSpec {
            pairs: vec![(k1, "bd0".into())],
        },
    )?;
    binding_sum(
        &first,
        &OpenBook::annulus(),
        &BindingSumSpec {
            pairs: vec![(format!("1:{k2}"), "bd0".into())],
        },
    )
}

/// Id-blind structural comparison: page shape, curve-kind census, word
/// signature and navel flags. Used to state commutativity and
/// inverse-pair laws without chasing fresh ids.
pub fn structurally_isomorphic(a: &OpenBook, b: &OpenBook) -> bool {
    fn census(ob: &OpenBook) -> (u32, usize, Vec<&'static str>, Vec<(i32, u32)>, Vec<bool>) {
        let mut kinds: Vec<&'static str> = ob
            .curves
            .values()
            .map(|d| match d {
                CurveDecl::BoundaryParallel { .. } => "bp",
                CurveDecl::NavelNeck { .. } => "neck",
                CurveDecl::Interior { .. } => "int",
                CurveDecl::BandCore { .. } => "band",
            })
            .collect();
        kinds.sort_unstable();
        let word: Vec<(i32, u32)> = ob
            .monodromy
            .0
            .iter()
            .map(|l| (l.sign.as_i32(), l.mult))
            .collect();
        let mut navels: Vec<bool> = ob.navels.iter().map(|n| n.isotopic_to_identity).collect();
        navels.sort_unstable();
        (
            ob.page.genus,
            ob.page.boundary.len(),
            kinds,
            word,
            navels,
        )
    }
    let (ga, ba, ka, wa, na) = census(a);
    let (gb, bb, kb, wb, nb) = census(b);
    // words must agree up to the sum-order permutation of letters; compare
    // the sorted sign/mult profile as well as length
    let mut wa_sorted = wa.clone();
    let mut wb_sorted = wb.clone();
    wa_sorted.sort_unstable();
    wb_sorted.sort_unstable();
    ga == gb && ba == bb && ka == kb && wa_sorted == wb_sorted && na == nb
}

// -------- serialization --------

/// On-disk form: the curve table keys a map, the monodromy is a list of
/// `[curve, sign, mult]` triples.
#[derive(Serialize, Deserialize)]
pub struct OpenBookDoc {
    pub schema: String,
    pub page: PageDescriptor,
    pub curves: BTreeMap<CurveId, CurveDecl>,
    pub monodromy: Vec<(CurveId, i32, u32)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub navels: Vec<NavelMark>,
}

impl OpenBook {
    pub fn to_doc(&self) -> OpenBookDoc {
        OpenBookDoc {
            schema: crate::SCHEMA.to_string(),
            page: self.page.clone(),
            curves: self.curves.clone(),
            monodromy: self
                .monodromy
                .0
                .iter()
                .map(|l| (l.curve.clone(), l.sign.as_i32(), l.mult))
                .collect(),
            navels: self.navels.clone(),
        }
    }

    pub fn from_doc(doc: OpenBookDoc) -> Result<Self, OpenBookError> {
        let monodromy = TwistWord(
            doc.monodromy
                .into_iter()
                .map(|(curve, sign, mult)| TwistLetter {
                    curve,
                    sign: if sign >= 0 {
                        Sign::Positive
                    } else {
                        Sign::Negative
                    },
                    mult,
                })
                .collect(),
        );
        let ob = OpenBook {
            page: doc.page,
            curves: doc.curves,
            monodromy,
            navels: doc.navels,
        };
        ob.validate()?;
        Ok(ob)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("openbook serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, OpenBookError> {
        let doc: OpenBookDoc = serde_json::from_str(s)
            .map_err(|e| OpenBookError::UnknownCurve(format!("parse error: {e}")))?;
        OpenBook::from_doc(doc)
    }
}
