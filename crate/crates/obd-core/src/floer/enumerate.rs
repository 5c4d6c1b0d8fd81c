//! Generators and differential arrows of a nice diagram.
//!
//! Arrows are found by solving boundary equations, never by scanning
//! region subsets: a candidate bigon or rectangle is a corner set plus a
//! route choice along each involved curve; the route determines the jump
//! of the region multiplicity across every curve segment, and integrating
//! those jumps from the basepointed regions (anchored at zero) either
//! produces the unique 0/1 positive domain or refutes the candidate. The
//! brute-force positive-domain oracle used by the test suite shares none
//! of this code.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::heegaard::{Anchor, HeegaardDiagram, Quadrant};

use super::{Arrow, Complex, FloerError, Shape, Tuple};

/// Effective numbering anchors: the stored ones, or first-point-forwards.
pub fn numbering(d: &HeegaardDiagram) -> Vec<Anchor> {
    d.anchors.clone().unwrap_or_else(|| {
        d.alphas
            .iter()
            .map(|cyc| Anchor {
                first: cyc[0],
                forwards: true,
            })
            .collect()
    })
}

fn tuple_of(d: &HeegaardDiagram, anchors: &[Anchor], points: &[usize]) -> Tuple {
    points
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let cyc = &d.alphas[i];
            let start = cyc.iter().position(|&q| q == anchors[i].first).unwrap();
            let here = cyc.iter().position(|&q| q == p).unwrap();
            let len = cyc.len();
            let steps = if anchors[i].forwards {
                (here + len - start) % len
            } else {
                (start + len - here) % len
            };
            steps as u32 + 1
        })
        .collect()
}

fn ensure_nice(d: &HeegaardDiagram) -> Result<(), FloerError> {
    let rep = d.validate();
    if !rep.ok() {
        return Err(FloerError::Diagram(format!(
            "{} validation failures, first: {:?}",
            rep.failures.len(),
            rep.failures.first()
        )));
    }
    let cert = d.nice_certificate();
    if !cert.is_nice() {
        return Err(FloerError::NotNice(format!(
            "regions {:?} are neither bigons nor squares",
            cert.violations
        )));
    }
    Ok(())
}

/// All bijective point selections, ordered lexicographically in tuple
/// notation.
pub fn enumerate_generators(d: &HeegaardDiagram) -> Result<Vec<Vec<usize>>, FloerError> {
    ensure_nice(d)?;
    let anchors = numbering(d);
    let n = d.n();
    // points on alpha_i sorted by tuple position
    let mut by_alpha: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, anchor) in anchors.iter().enumerate() {
        let cyc = &d.alphas[i];
        let start = cyc.iter().position(|&q| q == anchor.first).unwrap();
        let len = cyc.len();
        for k in 0..len {
            let idx = if anchor.forwards {
                (start + k) % len
            } else {
                (start + len - k) % len
            };
            by_alpha[i].push(cyc[idx]);
        }
    }
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    let mut used_beta = vec![false; n];
    fn rec(
        d: &HeegaardDiagram,
        by_alpha: &[Vec<usize>],
        i: usize,
        chosen: &mut Vec<usize>,
        used_beta: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == by_alpha.len() {
            out.push(chosen.clone());
            return;
        }
        for &p in &by_alpha[i] {
            let b = d.points[p].beta;
            if used_beta[b] {
                continue;
            }
            used_beta[b] = true;
            chosen.push(p);
            rec(d, by_alpha, i + 1, chosen, used_beta, out);
            chosen.pop();
            used_beta[b] = false;
        }
    }
    rec(d, &by_alpha, 0, &mut chosen, &mut used_beta, &mut out);
    Ok(out)
}

/// A reconstructed bigon or rectangle with its corner and support data,
/// independent of any particular generator.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AbstractDomain {
    /// Moving points of the source, sorted.
    pub from_points: Vec<usize>,
    /// Moving points of the target, sorted to match `from_points` by
    /// alpha curve.
    pub to_points: Vec<usize>,
    pub shape: Shape,
    /// Region indices of multiplicity one.
    pub support: Vec<usize>,
    /// Points whose four quadrants all lie in the support.
    pub interior: Vec<usize>,
}

struct SideTables {
    /// region owning each (point, quadrant)
    own: BTreeMap<(usize, Quadrant), usize>,
    nregions: usize,
    basepoints: Vec<usize>,
}

fn side_tables(d: &HeegaardDiagram) -> SideTables {
    let mut own = BTreeMap::new();
    for (r, region) in d.regions.iter().enumerate() {
        for circuit in &region.circuits {
            for c in circuit {
                own.insert((c.point, c.quadrant), r);
            }
        }
    }
    SideTables {
        own,
        nregions: d.regions.len(),
        basepoints: d
            .regions
            .iter()
            .enumerate()
            .filter(|(_, r)| r.basepoint)
            .map(|(i, _)| i)
            .collect(),
    }
}

/// A directed walk along one curve between two of its points.
struct Route {
    /// (segment base point, traversed forwards?) — the segment runs from
    /// `base` to the curve's next point.
    segments: Vec<(usize, bool)>,
}

fn alpha_route(d: &HeegaardDiagram, s: usize, t: usize, forwards: bool) -> Route {
    let mut segments = Vec::new();
    let mut p = s;
    loop {
        if forwards {
            segments.push((p, true));
            p = d.alpha_next(p);
        } else {
            p = d.alpha_prev(p);
            segments.push((p, false));
        }
        if p == t {
            break;
        }
    }
    Route { segments }
}

fn beta_route(d: &HeegaardDiagram, s: usize, t: usize, forwards: bool) -> Route {
    let mut segments = Vec::new();
    let mut p = s;
    loop {
        if forwards {
            segments.push((p, true));
            p = d.beta_next(p);
        } else {
            p = d.beta_prev(p);
            segments.push((p, false));
        }
        if p == t {
            break;
        }
    }
    Route { segments }
}

/// Solve for the 0/1 positive domain with the given boundary jumps.
/// `alpha_jumps` and `beta_jumps` map a segment's base point to its net
/// jump (left minus right of the stored direction). Returns the support
/// when one exists.
fn integrate(
    d: &HeegaardDiagram,
    tables: &SideTables,
    alpha_jumps: &BTreeMap<usize, i64>,
    beta_jumps: &BTreeMap<usize, i64>,
) -> Option<Vec<i64>> {
    let nr = tables.nregions;
    let mut m: Vec<Option<i64>> = vec![None; nr];
    let mut queue = VecDeque::new();
    let start = *tables.basepoints.first()?;
    m[start] = Some(0);
    queue.push_back(start);
    // constraints: for each segment p->next of either curve,
    // m[left] - m[right] = jump. Which quadrant label sits on which side
    // depends on the crossing sign at p.
    let mut constraints: Vec<(usize, usize, i64)> = Vec::new();
    for p in 0..d.points.len() {
        let pos = d.points[p].sign > 0;
        let (al, ar) = if pos {
            (Quadrant::NE, Quadrant::SE)
        } else {
            (Quadrant::SE, Quadrant::NE)
        };
        let ja = alpha_jumps.get(&p).copied().unwrap_or(0);
        constraints.push((tables.own[&(p, al)], tables.own[&(p, ar)], ja));
        let (bl, br) = if pos {
            (Quadrant::NW, Quadrant::NE)
        } else {
            (Quadrant::NE, Quadrant::NW)
        };
        let jb = beta_jumps.get(&p).copied().unwrap_or(0);
        constraints.push((tables.own[&(p, bl)], tables.own[&(p, br)], jb));
    }
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); nr];
    for &(hi, lo, j) in &constraints {
        // m[hi] - m[lo] = j
        adj[lo].push((hi, j));
        adj[hi].push((lo, -j));
    }
    while let Some(r) = queue.pop_front() {
        let base = m[r].unwrap();
        for &(s, dj) in &adj[r] {
            let v = base + dj;
            match m[s] {
                None => {
                    m[s] = Some(v);
                    queue.push_back(s);
                }
                Some(old) if old != v => return None,
                _ => {}
            }
        }
    }
    // verify every constraint and basepoint anchoring
    for &(hi, lo, j) in &constraints {
        match (m[hi], m[lo]) {
            (Some(a), Some(b)) if a - b == j => {}
            _ => return None,
        }
    }
    for &bp in &tables.basepoints {
        if m[bp] != Some(0) {
            return None;
        }
    }
    let vals: Vec<i64> = m.into_iter().map(|v| v.unwrap_or(0)).collect();
    if vals.iter().any(|&v| !(0..=1).contains(&v)) {
        return None;
    }
    if vals.iter().all(|&v| v == 0) {
        return None;
    }
    Some(vals)
}

/// Euler characteristic of a 0/1 support within the diagram's CW
/// structure.
fn support_euler(d: &HeegaardDiagram, tables: &SideTables, m: &[i64]) -> i64 {
    let faces: i64 = d
        .regions
        .iter()
        .enumerate()
        .filter(|(r, _)| m[*r] == 1)
        .map(|(_, reg)| reg.euler)
        .sum();
    let mut interior_edges = 0i64;
    let mut interior_points = 0i64;
    for p in 0..d.points.len() {
        let north = tables.own[&(p, Quadrant::NE)];
        let south = tables.own[&(p, Quadrant::SE)];
        if m[north] == 1 && m[south] == 1 {
            interior_edges += 1;
        }
        let west = tables.own[&(p, Quadrant::NW)];
        let east = tables.own[&(p, Quadrant::NE)];
        if m[west] == 1 && m[east] == 1 {
            interior_edges += 1;
        }
        if Quadrant::all()
            .iter()
            .all(|&q| m[tables.own[&(p, q)]] == 1)
        {
            interior_points += 1;
        }
    }
    faces - interior_edges + interior_points
}

fn corner_weight(tables: &SideTables, m: &[i64], p: usize) -> i64 {
    Quadrant::all()
        .iter()
        .map(|&q| m[tables.own[&(p, q)]])
        .sum()
}

/// Every empty embedded bigon and rectangle of the diagram, as
/// generator-independent corner/support data.
pub fn abstract_domains(d: &HeegaardDiagram) -> Result<Vec<AbstractDomain>, FloerError> {
    ensure_nice(d)?;
    let tables = side_tables(d);
    if tables.basepoints.is_empty() {
        return Err(FloerError::Diagram(
            "diagram has no basepointed region; domains are not anchored".into(),
        ));
    }
    let mut found: BTreeSet<AbstractDomain> = BTreeSet::new();

    let consider = |from_points: Vec<usize>,
                        to_points: Vec<usize>,
                        shape: Shape,
                        m: Vec<i64>,
                        found: &mut BTreeSet<AbstractDomain>| {
        // convex corners at every moving point
        for &p in from_points.iter().chain(&to_points) {
            if corner_weight(&tables, &m, p) != 1 {
                return;
            }
        }
        if support_euler(d, &tables, &m) != 1 {
            return;
        }
        let support: Vec<usize> = (0..m.len()).filter(|&r| m[r] == 1).collect();
        let interior: Vec<usize> = (0..d.points.len())
            .filter(|&p| {
                Quadrant::all()
                    .iter()
                    .all(|&q| m[tables.own[&(p, q)]] == 1)
            })
            .collect();
        found.insert(AbstractDomain {
            from_points,
            to_points,
            shape,
            support,
            interior,
        });
    };

    // bigons: ordered pairs on one alpha/beta pair
    let npts = d.points.len();
    for s in 0..npts {
        for t in 0..npts {
            if s == t
                || d.points[s].alpha != d.points[t].alpha
                || d.points[s].beta != d.points[t].beta
            {
                continue;
            }
            for a_fwd in [true, false] {
                for b_fwd in [true, false] {
                    let ra = alpha_route(d, s, t, a_fwd);
                    let rb = beta_route(d, t, s, b_fwd);
                    let mut aj: BTreeMap<usize, i64> = BTreeMap::new();
                    let mut bj: BTreeMap<usize, i64> = BTreeMap::new();
                    for (base, fwd) in &ra.segments {
                        *aj.entry(*base).or_insert(0) += if *fwd { 1 } else { -1 };
                    }
                    for (base, fwd) in &rb.segments {
                        *bj.entry(*base).or_insert(0) += if *fwd { 1 } else { -1 };
                    }
                    if let Some(m) = integrate(d, &tables, &aj, &bj) {
                        consider(vec![s], vec![t], Shape::Bigon, m, &mut found);
                    }
                }
            }
        }
    }

    // rectangles: corners s_i, s_k moving to t_i, t_k with the beta
    // curves swapped
    for si in 0..npts {
        for sk in si + 1..npts {
            let (pi, pk) = (&d.points[si], &d.points[sk]);
            if pi.alpha == pk.alpha || pi.beta == pk.beta {
                continue;
            }
            for ti in 0..npts {
                if d.points[ti].alpha != pi.alpha || d.points[ti].beta != pk.beta {
                    continue;
                }
                for tk in 0..npts {
                    if d.points[tk].alpha != pk.alpha || d.points[tk].beta != pi.beta {
                        continue;
                    }
                    for mask in 0..16u8 {
                        let ra = alpha_route(d, si, ti, mask & 1 != 0);
                        let rc = alpha_route(d, sk, tk, mask & 2 != 0);
                        // beta arcs close the circuit: t_i -> s_k on
                        // beta(s_k), t_k -> s_i on beta(s_i)
                        let rb1 = beta_route(d, ti, sk, mask & 4 != 0);
                        let rb2 = beta_route(d, tk, si, mask & 8 != 0);
                        let mut aj: BTreeMap<usize, i64> = BTreeMap::new();
                        let mut bj: BTreeMap<usize, i64> = BTreeMap::new();
                        for (base, fwd) in ra.segments.iter().chain(&rc.segments) {
                            *aj.entry(*base).or_insert(0) += if *fwd { 1 } else { -1 };
                        }
                        for (base, fwd) in rb1.segments.iter().chain(&rb2.segments) {
                            *bj.entry(*base).or_insert(0) += if *fwd { 1 } else { -1 };
                        }
                        if let Some(m) = integrate(d, &tables, &aj, &bj) {
                            consider(
                                vec![si, sk],
                                vec![ti, tk],
                                Shape::Rectangle,
                                m,
                                &mut found,
                            );
                        }
                    }
                }
            }
        }
    }

    Ok(found.into_iter().collect())
}

/// The full chain complex of a nice diagram: generators in lexicographic
/// tuple order, arrows instantiated from the abstract domains.
pub fn complex_from_diagram(d: &HeegaardDiagram) -> Result<Complex, FloerError> {
    let gens = enumerate_generators(d)?;
    let anchors = numbering(d);
    let tuples: Vec<Tuple> = gens.iter().map(|g| tuple_of(d, &anchors, g)).collect();
    let index: BTreeMap<Vec<usize>, usize> = gens
        .iter()
        .enumerate()
        .map(|(i, g)| (g.clone(), i))
        .collect();
    let domains = abstract_domains(d)?;
    let mut arrows = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        'dom: for dom in &domains {
            // source points must be selected by g
            for &s in &dom.from_points {
                if g[d.points[s].alpha] != s {
                    continue 'dom;
                }
            }
            // no other coordinate inside the domain
            for &p in g {
                if dom.interior.contains(&p) {
                    continue 'dom;
                }
            }
            let mut target = g.clone();
            for &t in &dom.to_points {
                target[d.points[t].alpha] = t;
            }
            let ti = index[&target];
            arrows.push(Arrow {
                from: gi,
                to: ti,
                shape: dom.shape,
                jplus: None,
                support: Some(dom.support.clone()),
            });
        }
    }
    Complex::new(tuples, arrows)
}

/// The contact generator of a diagram built from an open book: the
/// flagged pushoff points, one per curve.
pub fn contact_class(d: &HeegaardDiagram) -> Result<Vec<usize>, FloerError> {
    d.contact_points
        .clone()
        .ok_or(FloerError::MissingContactPoints)
}

/// One differential arrow in tuple notation, with its region support.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ArrowRecord {
    pub from: Tuple,
    pub to: Tuple,
    pub shape: Shape,
    pub support: Vec<usize>,
}

/// Every arrow of the diagram's complex, in deterministic order.
pub fn enumerate_arrows(d: &HeegaardDiagram) -> Result<Vec<ArrowRecord>, FloerError> {
    let cx = complex_from_diagram(d)?;
    let mut out: Vec<ArrowRecord> = cx
        .arrows()
        .iter()
        .map(|a| ArrowRecord {
            from: cx.tuple(a.from).clone(),
            to: cx.tuple(a.to).clone(),
            shape: a.shape,
            support: a.support.clone().unwrap_or_default(),
        })
        .collect();
    out.sort();
    Ok(out)
}
