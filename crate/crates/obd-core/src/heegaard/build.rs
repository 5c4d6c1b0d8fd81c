//! Heegaard diagrams from open books on combinatorial pages.
//!
//! The Heegaard surface is the double of the page: a mirrored copy of
//! every tile is glued along the former boundary edges (the sutures).
//! Alpha curves double the basis arcs; beta curves run through the
//! pushoffs on one page and their monodromy images on the other. Regions
//! are extracted from the exact chord arrangement: per-tile planar
//! subdivisions whose cells merge across every glued edge, sutures
//! included. Regions touching a suture are basepointed.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::openbook::TwistWord;
use crate::page::twist::apply_monodromy;
use crate::page::{
    point_of, CombPath, Crossing, CurveSystem, Gluing, PageComplex, PageError, Pos, Side,
};

use super::{Anchor, Corner, HeegaardDiagram, Point, Quadrant, Region};

#[derive(Debug, thiserror::Error)]
pub enum BuildError {
    #[error("page error: {0}")]
    Page(#[from] PageError),
    #[error("basis arcs must be pairwise disjoint; {0} and {1} cross")]
    ArcsCross(String, String),
    #[error("basis does not cut the page into a disk: {0} components with total euler {1}")]
    NotADisk(usize, i64),
    #[error("beta curves are not disjoint after twisting ({0} and {1} cross)")]
    BetaCollision(String, String),
    #[error("triple point in the chord arrangement (tile {0})")]
    TriplePoint(usize),
    #[error("alpha curves cross each other on the doubled surface")]
    AlphaCollision,
    #[error("arrangement has no basepointed region")]
    NoBasepoints,
}

fn reflect_side(s: Side) -> Side {
    match s {
        Side::N => Side::N,
        Side::S => Side::S,
        Side::E => Side::W,
        Side::W => Side::E,
    }
}

fn reflect_param(s: Side, p: &Pos) -> Pos {
    match s {
        Side::N | Side::S => BigRational::one() - p,
        Side::E | Side::W => p.clone(),
    }
}

fn reflect_crossing(c: &Crossing, shift: usize) -> Crossing {
    Crossing {
        tile: c.tile + shift,
        enter: (reflect_side(c.enter.0), reflect_param(c.enter.0, &c.enter.1)),
        exit: (reflect_side(c.exit.0), reflect_param(c.exit.0, &c.exit.1)),
    }
}

fn reverse_path(p: &CombPath) -> CombPath {
    CombPath {
        closed: p.closed,
        crossings: p
            .crossings
            .iter()
            .rev()
            .map(|c| Crossing {
                tile: c.tile,
                enter: c.exit.clone(),
                exit: c.enter.clone(),
            })
            .collect(),
    }
}

/// The double of a page: mirrored tiles appended after the originals,
/// interior gluings duplicated, boundary edges turned into suture
/// gluings. Returns the complex and the set of gluing indices that are
/// sutures.
pub fn double_page(page: &PageComplex) -> (PageComplex, Vec<usize>) {
    let t = page.tiles;
    let mut gluings = page.gluings.clone();
    for g in &page.gluings {
        // reflection flips the parameter on N/S sides only; the reversed
        // flag flips when exactly one of the two sides is N/S
        let ns = |s: Side| matches!(s, Side::N | Side::S);
        let flip = ns(g.a.1) != ns(g.b.1);
        gluings.push(Gluing {
            a: (g.a.0 + t, reflect_side(g.a.1)),
            b: (g.b.0 + t, reflect_side(g.b.1)),
            reversed: g.reversed != flip,
        });
    }
    let mut sutures = Vec::new();
    for slots in page.boundary.values() {
        for &(tile, side) in slots {
            sutures.push(gluings.len());
            gluings.push(Gluing {
                a: (tile, side),
                b: (tile + t, reflect_side(side)),
                reversed: matches!(side, Side::N | Side::S),
            });
        }
    }
    (
        PageComplex {
            tiles: 2 * t,
            gluings,
            boundary: BTreeMap::new(),
        },
        sutures,
    )
}

/// Close an arc-with-image pair into one curve on the double: the A-side
/// path followed by the reversed mirror of the B-side path.
fn closed_double(a_side: &CombPath, b_side: &CombPath, shift: usize) -> CombPath {
    let mirrored = CombPath {
        closed: false,
        crossings: b_side
            .crossings
            .iter()
            .map(|c| reflect_crossing(c, shift))
            .collect(),
    };
    let back = reverse_path(&mirrored);
    let mut crossings = a_side.crossings.clone();
    crossings.extend(back.crossings);
    CombPath {
        closed: true,
        crossings,
    }
}

// ---------------- exact per-tile arrangements ----------------

/// A chord instance: which curve, which crossing along it.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
struct ChordRef {
    curve: usize,
    index: usize,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
enum Vertex {
    /// Crossing of two chords inside a tile, keyed by the chord pair.
    Interior(usize, ChordRef, ChordRef),
    /// Chord meets a tile side: local slot and exact parameter.
    Edge(usize, Side, String),
    /// A corner of one tile (tile id, corner 0..4 as NE,NW,SW,SE).
    Corner(usize, usize),
}

#[derive(Clone, Debug)]
struct HalfEdge {
    from: usize,
    to: usize,
    /// Chord that carries this half-edge, if any (side half-edges carry
    /// none).
    chord: Option<ChordRef>,
    /// Geometric direction in the frame of `tile`.
    dir: (Pos, Pos),
    tile: usize,
    /// Side subsegment data: (canonical slot, low param, high param).
    seg: Option<((usize, Side), Pos, Pos)>,
    twin: usize,
}

fn pseudo_angle_class(d: &(Pos, Pos)) -> u8 {
    let (x, y) = d;
    // classes走 ccw starting при the positive x axis
    if x.is_positive() && !y.is_negative() {
        0
    } else if !x.is_positive() && y.is_positive() {
        1
    } else if x.is_negative() {
        2
    } else {
        3
    }
}


struct Arrangement {
    halfedges: Vec<HalfEdge>,
    /// cell id per halfedge
    face_of: Vec<usize>,
    ncells: usize,
    /// cells flagged as outer faces of their tile (not surface cells)
    outer: Vec<bool>,
    vertices: Vec<Vertex>,
}

/// Chords of each curve in each tile plus vertex bookkeeping, for one
/// (possibly doubled) complex.
struct Chart<'a> {
    page: &'a PageComplex,
    curves: Vec<(&'a str, &'a CombPath)>,
}

impl<'a> Chart<'a> {
    fn chord_points(&self, c: &ChordRef) -> ((Pos, Pos), (Pos, Pos)) {
        self.curves[c.curve].1.crossings[c.index].chord()
    }

    fn crossing(&self, c: &ChordRef) -> &Crossing {
        &self.curves[c.curve].1.crossings[c.index]
    }
}

fn pos_key(p: &Pos) -> String {
    format!("{}/{}", p.numer(), p.denom())
}

/// Build the global arrangement: vertices, half-edges with rotations, and
/// the per-tile face structure.
fn build_arrangement(chart: &Chart) -> Result<Arrangement, BuildError> {
    let page = chart.page;

    // chords per tile
    let mut per_tile: Vec<Vec<ChordRef>> = vec![Vec::new(); page.tiles];
    for (ci, (_, path)) in chart.curves.iter().enumerate() {
        for (k, cr) in path.crossings.iter().enumerate() {
            per_tile[cr.tile].push(ChordRef { curve: ci, index: k });
        }
    }

    let mut vertices: Vec<Vertex> = Vec::new();
    let mut vertex_id: BTreeMap<Vertex, usize> = BTreeMap::new();
    let vid = |v: Vertex, vertices: &mut Vec<Vertex>, map: &mut BTreeMap<Vertex, usize>| {
        if let Some(&i) = map.get(&v) {
            i
        } else {
            let i = vertices.len();
            vertices.push(v.clone());
            map.insert(v, i);
            i
        }
    };

    // interior crossing points per chord: (param along chord, vertex id)
    let mut on_chord: BTreeMap<ChordRef, Vec<(Pos, usize)>> = BTreeMap::new();
    for (t, chords) in per_tile.iter().enumerate() {
        let mut seen_points: BTreeMap<(String, String), (ChordRef, ChordRef)> = BTreeMap::new();
        for i in 0..chords.len() {
            for j in i + 1..chords.len() {
                let (a1, a2) = chart.chord_points(&chords[i]);
                let (b1, b2) = chart.chord_points(&chords[j]);
                let o1 = super::build::orient3(&a1, &a2, &b1);
                let o2 = super::build::orient3(&a1, &a2, &b2);
                let o3 = super::build::orient3(&b1, &b2, &a1);
                let o4 = super::build::orient3(&b1, &b2, &a2);
                if o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0 {
                    return Err(BuildError::TriplePoint(t));
                }
                if o1 != o2 && o3 != o4 {
                    let da = (&a2.0 - &a1.0, &a2.1 - &a1.1);
                    let db = (&b2.0 - &b1.0, &b2.1 - &b1.1);
                    let denom = &da.0 * &db.1 - &da.1 * &db.0;
                    let s = (&(&b1.0 - &a1.0) * &db.1 - &(&b1.1 - &a1.1) * &db.0) / &denom;
                    let u = (&(&b1.0 - &a1.0) * &da.1 - &(&b1.1 - &a1.1) * &da.0) / &denom;
                    let px = &a1.0 + &s * &da.0;
                    let py = &a1.1 + &s * &da.1;
                    if seen_points
                        .insert((pos_key(&px), pos_key(&py)), (chords[i], chords[j]))
                        .is_some()
                    {
                        return Err(BuildError::TriplePoint(t));
                    }
                    let v = vid(
                        Vertex::Interior(t, chords[i].min(chords[j]), chords[i].max(chords[j])),
                        &mut vertices,
                        &mut vertex_id,
                    );
                    on_chord.entry(chords[i]).or_default().push((s, v));
                    on_chord.entry(chords[j]).or_default().push((u, v));
                }
            }
        }
    }

    // edge vertices at chord endpoints
    let mut edge_items: BTreeMap<(usize, Side), Vec<(Pos, usize)>> = BTreeMap::new();
    let mut chord_ends: BTreeMap<ChordRef, (usize, usize)> = BTreeMap::new();
    for (ci, (_, path)) in chart.curves.iter().enumerate() {
        for (k, cr) in path.crossings.iter().enumerate() {
            let cref = ChordRef { curve: ci, index: k };
            let ve = vid(
                Vertex::Edge(cr.tile, cr.enter.0, pos_key(&cr.enter.1)),
                &mut vertices,
                &mut vertex_id,
            );
            let vx = vid(
                Vertex::Edge(cr.tile, cr.exit.0, pos_key(&cr.exit.1)),
                &mut vertices,
                &mut vertex_id,
            );
            chord_ends.insert(cref, (ve, vx));
            // register the edge passage on both local slots
            edge_items
                .entry((cr.tile, cr.enter.0))
                .or_default()
                .push((cr.enter.1.clone(), ve));
            edge_items
                .entry((cr.tile, cr.exit.0))
                .or_default()
                .push((cr.exit.1.clone(), vx));
        }
    }

    let mut halfedges: Vec<HalfEdge> = Vec::new();
    let pair = |a: HalfEdge, b: HalfEdge, halfedges: &mut Vec<HalfEdge>| -> (usize, usize) {
        let i = halfedges.len();
        let mut a = a;
        let mut b = b;
        a.twin = i + 1;
        b.twin = i;
        halfedges.push(a);
        halfedges.push(b);
        (i, i + 1)
    };

    // chord subsegments
    for (ci, (_, path)) in chart.curves.iter().enumerate() {
        for (k, cr) in path.crossings.iter().enumerate() {
            let cref = ChordRef { curve: ci, index: k };
            let (p_enter, p_exit) = cr.chord();
            let dir = (&p_exit.0 - &p_enter.0, &p_exit.1 - &p_enter.1);
            let mut stops: Vec<(Pos, usize)> = vec![(BigRational::zero(), chord_ends[&cref].0)];
            if let Some(mids) = on_chord.get(&cref) {
                let mut mids = mids.clone();
                mids.sort_by(|a, b| a.0.cmp(&b.0));
                stops.extend(mids);
            }
            stops.push((BigRational::one(), chord_ends[&cref].1));
            for w in stops.windows(2) {
                let (ref _t0, v0) = w[0];
                let (ref _t1, v1) = w[1];
                pair(
                    HalfEdge {
                        from: v0,
                        to: v1,
                        chord: Some(cref),
                        dir: dir.clone(),
                        tile: cr.tile,
                        seg: None,
                        twin: 0,
                    },
                    HalfEdge {
                        from: v1,
                        to: v0,
                        chord: Some(cref),
                        dir: (-dir.0.clone(), -dir.1.clone()),
                        tile: cr.tile,
                        seg: None,
                        twin: 0,
                    },
                    &mut halfedges,
                );
            }
        }
    }

    // side subsegments, one pair per canonical (glued or free) subinterval
    let side_tangent = |s: Side| -> (Pos, Pos) {
        match s {
            Side::N | Side::S => (BigRational::one(), BigRational::zero()),
            Side::E | Side::W => (BigRational::zero(), BigRational::one()),
        }
    };
    // corner vertex of a tile at the ends of a side: side param 0 / 1
    let corner_at = |tile: usize, side: Side, high: bool| -> Vertex {
        let k = match (side, high) {
            (Side::N, false) => 1, // NW
            (Side::N, true) => 0,  // NE
            (Side::E, false) => 3, // SE
            (Side::E, true) => 0,  // NE
            (Side::S, false) => 2, // SW
            (Side::S, true) => 3,  // SE
            (Side::W, false) => 2, // SW
            (Side::W, true) => 1,  // NW
        };
        Vertex::Corner(tile, k)
    };

    for tile in 0..page.tiles {
        for side in [Side::N, Side::E, Side::S, Side::W] {
            let slot = (tile, side);
            // items along this side in local coordinates
            let mut items: Vec<(Pos, usize)> = edge_items.get(&slot).cloned().unwrap_or_default();
            items.sort_by(|a, b| a.0.cmp(&b.0));
            let v_low = vid(corner_at(tile, side, false), &mut vertices, &mut vertex_id);
            let v_high = vid(corner_at(tile, side, true), &mut vertices, &mut vertex_id);
            let mut stops = vec![(BigRational::zero(), v_low)];
            stops.extend(items);
            stops.push((BigRational::one(), v_high));
            let tangent = side_tangent(side);
            for w in stops.windows(2) {
                let (ref lo, v0) = w[0];
                let (ref hi, v1) = w[1];
                let seg = Some(((tile, side), lo.clone(), hi.clone()));
                let (h_up, _) = pair(
                    HalfEdge {
                        from: v0,
                        to: v1,
                        chord: None,
                        dir: tangent.clone(),
                        tile,
                        seg: seg.clone(),
                        twin: 0,
                    },
                    HalfEdge {
                        from: v1,
                        to: v0,
                        chord: None,
                        dir: (-tangent.0.clone(), -tangent.1.clone()),
                        tile,
                        seg,
                        twin: 0,
                    },
                    &mut halfedges,
                );
                let _ = h_up;
            }
        }
    }

    // rotation system: outgoing half-edges per vertex, ccw; within a tile
    // this is the planar order, and a vertex belongs to exactly one tile's
    // interior or boundary so the tile-local order suffices for faces
    let nv = vertices.len();
    let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); nv];
    for (i, h) in halfedges.iter().enumerate() {
        out_of[h.from].push(i);
    }

    // Faces are walked per tile: next(h) = the cw-neighbour of twin(h)
    // among outgoing half-edges of the SAME tile at head(h).
    let next_in_tile = |h: usize, halfedges: &Vec<HalfEdge>, out_of: &Vec<Vec<usize>>| -> usize {
        let head = halfedges[h].to;
        let tile = halfedges[h].tile;
        let back = halfedges[h].twin;
        let candidates: Vec<usize> = out_of[head]
            .iter()
            .copied()
            .filter(|&k| halfedges[k].tile == tile)
            .collect();
        // cw-neighbour of `back`: the candidate maximizing ccw-angle less
        // than back, i.e. previous in ccw order
        let back_dir = &halfedges[back].dir;
        let mut best: Option<usize> = None;
        for &cand in &candidates {
            if cand == back && candidates.len() > 1 {
                continue;
            }
            match best {
                None => best = Some(cand),
                Some(b) => {
                    let cd = &halfedges[cand].dir;
                    let bd = &halfedges[b].dir;
                    // is cand "closer going cw from back_dir" than b?
                    let closer = cw_between(back_dir, cd, bd);
                    if closer {
                        best = Some(cand);
                    }
                }
            }
        }
        best.expect("vertex with outgoing half-edge")
    };

    let mut face_of = vec![usize::MAX; halfedges.len()];
    let mut ncells = 0usize;
    let mut outer = Vec::new();
    for start in 0..halfedges.len() {
        if face_of[start] != usize::MAX {
            continue;
        }
        let id = ncells;
        ncells += 1;
        let mut circuit = Vec::new();
        let mut h = start;
        loop {
            face_of[h] = id;
            circuit.push(h);
            h = next_in_tile(h, &halfedges, &out_of);
            if circuit.len() > halfedges.len() {
                let dump: Vec<String> = circuit
                    .iter()
                    .map(|&k| {
                        let e = &halfedges[k];
                        format!("{k}:{}->{} t{} ch{:?}", e.from, e.to, e.tile, e.chord)
                    })
                    .collect();
                panic!("runaway face walk: {dump:?}");
            }
            if h == start {
                break;
            }
        }
        // shoelace over the circuit's vertices in tile coordinates
        let mut area = BigRational::zero();
        for &h in &circuit {
            let he = &halfedges[h];
            let a = vertex_point(he, false, chart, &vertices);
            let b = vertex_point(he, true, chart, &vertices);
            area += &a.0 * &b.1 - &b.0 * &a.1;
        }
        outer.push(area.is_negative());
    }

    Ok(Arrangement {
        halfedges,
        face_of,
        ncells,
        outer,
        vertices,
    })
}

/// Exact coordinates of a half-edge endpoint in its tile frame.
fn vertex_point(
    he: &HalfEdge,
    head: bool,
    chart: &Chart,
    vertices: &[Vertex],
) -> (Pos, Pos) {
    let v = if head { he.to } else { he.from };
    match &vertices[v] {
        Vertex::Interior(_, c1, c2) => {
            let (a1, a2) = chart.chord_points(c1);
            let (b1, b2) = chart.chord_points(c2);
            let da = (&a2.0 - &a1.0, &a2.1 - &a1.1);
            let db = (&b2.0 - &b1.0, &b2.1 - &b1.1);
            let denom = &da.0 * &db.1 - &da.1 * &db.0;
            let s = (&(&b1.0 - &a1.0) * &db.1 - &(&b1.1 - &a1.1) * &db.0) / &denom;
            (&a1.0 + &s * &da.0, &a1.1 + &s * &da.1)
        }
        Vertex::Edge(..) | Vertex::Corner(..) => {
            // reconstruct from the half-edge's own geometry
            if let Some(((_, side), lo, hi)) = &he.seg {
                let p = if head {
                    if he.dir == side_dir_of(*side) {
                        hi
                    } else {
                        lo
                    }
                } else if he.dir == side_dir_of(*side) {
                    lo
                } else {
                    hi
                };
                point_of(*side, p)
            } else {
                // chord endpoint
                let c = chart.crossing(&he.chord.expect("chord half-edge"));
                let fwd = he.dir == chord_dir(c);
                let (e, x) = c.chord();
                if head == fwd {
                    x
                } else {
                    e
                }
            }
        }
    }
}

fn side_dir_of(s: Side) -> (Pos, Pos) {
    match s {
        Side::N | Side::S => (BigRational::one(), BigRational::zero()),
        Side::E | Side::W => (BigRational::zero(), BigRational::one()),
    }
}

fn chord_dir(c: &Crossing) -> (Pos, Pos) {
    let (a, b) = c.chord();
    (&b.0 - &a.0, &b.1 - &a.1)
}

/// Is `x` strictly cw-closer to `from` than `y` (rotating clockwise
/// starting just before `from`)?
fn cw_between(from: &(Pos, Pos), x: &(Pos, Pos), y: &(Pos, Pos)) -> bool {
    // cw order from `from`: larger ccw angle relative to from means
    // earlier cw; compare ccw angles of x and y measured from `from`
    let ang = |d: &(Pos, Pos)| -> (u8, (Pos, Pos)) { (pseudo_angle_class(d), d.clone()) };
    let _ = ang;
    // measure ccw(from -> d) in [0, 2pi): d is earlier in cw order when
    // ccw angle is larger
    ccw_angle_greater(from, x, y)
}

/// Is ccw-angle(from->x) > ccw-angle(from->y)?
fn ccw_angle_greater(from: &(Pos, Pos), x: &(Pos, Pos), y: &(Pos, Pos)) -> bool {
    let half = |d: &(Pos, Pos)| -> u8 {
        // 0 if strictly ccw in (0, pi], 1 if in (pi, 2pi)
        let c = &from.0 * &d.1 - &from.1 * &d.0;
        let dot = &from.0 * &d.0 + &from.1 * &d.1;
        if c.is_zero() {
            if dot.is_positive() {
                2 // same direction: angle 0, smallest
            } else {
                0 // opposite: angle pi, boundary of first half
            }
        } else if c.is_positive() {
            0
        } else {
            1
        }
    };
    let (hx, hy) = (half(x), half(y));
    if hx != hy {
        // class 2 (angle 0) is the smallest ccw angle; class 0 < class 1
        let rank = |h: u8| match h {
            2 => 0u8,
            0 => 1,
            _ => 2,
        };
        return rank(hx) > rank(hy);
    }
    if hx == 2 {
        return false;
    }
    // same half-plane: larger ccw angle means x is cw of y there:
    // cross(y, x) > 0 means x is ccw beyond y
    (&y.0 * &x.1 - &y.1 * &x.0).is_positive()
}

fn orient3(a: &(Pos, Pos), b: &(Pos, Pos), c: &(Pos, Pos)) -> i8 {
    let v = (&b.0 - &a.0) * (&c.1 - &a.1) - (&b.1 - &a.1) * (&c.0 - &a.0);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

fn corner_classes(page: &PageComplex) -> Vec<usize> {
    // union-find over (tile, corner 0..4), corners keyed NE=0,NW=1,SW=2,SE=3
    fn corners_of(side: Side) -> (usize, usize) {
        // (corner at param 0, corner at param 1)
        match side {
            Side::N => (1, 0),
            Side::E => (3, 0),
            Side::S => (2, 3),
            Side::W => (2, 1),
        }
    }
    let n = page.tiles * 4;
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for g in &page.gluings {
        let (a0, a1) = corners_of(g.a.1);
        let (b0, b1) = corners_of(g.b.1);
        let pairs = if g.reversed {
            [(a0, b1), (a1, b0)]
        } else {
            [(a0, b0), (a1, b1)]
        };
        for (ca, cb) in pairs {
            let x = find(&mut parent, g.a.0 * 4 + ca);
            let y = find(&mut parent, g.b.0 * 4 + cb);
            parent[x] = y;
        }
    }
    let mut root_ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut out = vec![0usize; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        let next = root_ids.len();
        let id = *root_ids.entry(r).or_insert(next);
        out[i] = id;
    }
    out
}

// ---------------- region extraction ----------------

struct Extraction {
    nregions: usize,
    /// per region: does it touch a suture edge class
    touches_suture: Vec<bool>,
    /// per region: euler characteristic
    euler: Vec<i64>,
    /// corner circuits per region as (interior-vertex, incoming dir,
    /// outgoing dir, chord pair) tuples resolved by the caller
    circuits: Vec<Vec<Vec<(usize, usize, usize)>>>,
}

/// Merge tile cells across side subsegments and walk region boundary
/// circuits. `suture_slots` lists the canonical slots of suture gluings.
fn extract_regions(
    arr: &Arrangement,
    chart: &Chart,
    suture_slots: &BTreeSet<(usize, Side)>,
) -> Extraction {
    let page = chart.page;
    let nh = arr.halfedges.len();

    // canonical key of a side subsegment, direction-free
    let seg_key = |h: &HalfEdge| -> Option<((usize, Side), String, String)> {
        let ((tile, side), lo, hi) = h.seg.as_ref()?;
        let (cslot, clo) = page.canonical((*tile, *side), lo);
        let (_, chi) = page.canonical((*tile, *side), hi);
        let (klo, khi) = if clo <= chi {
            (pos_key(&clo), pos_key(&chi))
        } else {
            (pos_key(&chi), pos_key(&clo))
        };
        Some((cslot, klo, khi))
    };
    // group the half-edges of each surface side subsegment: 2 on a free
    // boundary, 4 across a gluing
    let mut groups: BTreeMap<((usize, Side), String, String), Vec<usize>> = BTreeMap::new();
    for (i, h) in arr.halfedges.iter().enumerate() {
        if let Some(k) = seg_key(h) {
            groups.entry(k).or_default().push(i);
        }
    }
    // inner cell of a side half-edge within its own tile
    let inner_cell = |i: usize| -> usize {
        let f = arr.face_of[i];
        if arr.outer[f] {
            arr.face_of[arr.halfedges[i].twin]
        } else {
            f
        }
    };

    // union-find cells across glued subsegments
    let mut parent: Vec<usize> = (0..arr.ncells).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for members in groups.values() {
        if members.len() < 4 {
            continue;
        }
        debug_assert_eq!(members.len(), 4);
        let mut cells: Vec<usize> = members.iter().map(|&i| inner_cell(i)).collect();
        cells.dedup();
        for w in cells.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a] = b;
            }
        }
    }

    let mut region_ids: BTreeMap<usize, usize> = BTreeMap::new();
    let mut region_of_cell = vec![usize::MAX; arr.ncells];
    for cell in 0..arr.ncells {
        if arr.outer[cell] {
            continue;
        }
        let r = find(&mut parent, cell);
        let next = region_ids.len();
        let id = *region_ids.entry(r).or_insert(next);
        region_of_cell[cell] = id;
    }
    let nregions = region_ids.len();

    // suture contact and euler corrections per subsegment group
    let mut touches_suture = vec![false; nregions];
    let mut euler: Vec<i64> = (0..nregions)
        .map(|r| region_of_cell.iter().filter(|&&x| x == r).count() as i64)
        .collect();
    for (key, members) in &groups {
        let on_suture = suture_slots.contains(&key.0);
        for &i in members {
            let r = region_of_cell[inner_cell(i)];
            if on_suture {
                touches_suture[r] = true;
            }
        }
        if members.len() == 4 {
            // interior edge when the two tile-side cells merged
            let mut cells: BTreeSet<usize> =
                members.iter().map(|&i| region_of_cell[inner_cell(i)]).collect();
            if cells.len() == 1 {
                euler[cells.pop_first().unwrap()] -= 1;
            }
        }
    }

    // interior corner classes: every incident subsegment glued and every
    // incident cell in one region
    let classes = corner_classes(page);
    let mut class_members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (v, vert) in arr.vertices.iter().enumerate() {
        if let Vertex::Corner(tile, k) = vert {
            class_members
                .entry(classes[tile * 4 + k])
                .or_default()
                .push(v);
        }
    }
    for members_v in class_members.values() {
        let mut regions: BTreeSet<usize> = BTreeSet::new();
        let mut free = false;
        for (i, h) in arr.halfedges.iter().enumerate() {
            if !members_v.contains(&h.from) || h.seg.is_none() {
                continue;
            }
            match groups.get(&seg_key(h).unwrap()) {
                Some(members) if members.len() == 4 => {
                    regions.insert(region_of_cell[inner_cell(i)]);
                }
                _ => free = true,
            }
        }
        if !free && regions.len() == 1 {
            euler[*regions.iter().next().unwrap()] += 1;
        }
    }

    // directed partner of a glued side half-edge: the half-edge of the
    // other tile traversing the same canonical direction
    let canon_dir = |i: usize| -> bool {
        let h = &arr.halfedges[i];
        let ((tile, side), lo, hi) = h.seg.as_ref().unwrap();
        let up = h.dir == side_dir_of(*side);
        let (_, clo) = page.canonical((*tile, *side), lo);
        let (_, chi) = page.canonical((*tile, *side), hi);
        if clo <= chi {
            up
        } else {
            !up
        }
    };
    // the boundary-walk continuation of a glued side half-edge: the
    // member on the other slot traversing the surface edge oppositely
    // (that one's face is the inner cell across the edge)
    let slot_of = |i: usize| -> (usize, Side) {
        let ((tile, side), _, _) = arr.halfedges[i].seg.as_ref().unwrap();
        (*tile, *side)
    };
    let mut side_partner: Vec<Option<usize>> = vec![None; nh];
    for members in groups.values() {
        if members.len() < 4 {
            continue;
        }
        for &i in members {
            for &j in members {
                if slot_of(i) != slot_of(j) && canon_dir(i) != canon_dir(j) {
                    side_partner[i] = Some(j);
                }
            }
        }
    }

    // tile-local face-walk successor
    let mut next_he: Vec<usize> = vec![usize::MAX; nh];
    {
        let mut out_of: Vec<Vec<usize>> = vec![Vec::new(); arr.vertices.len()];
        for (i, h) in arr.halfedges.iter().enumerate() {
            out_of[h.from].push(i);
        }
        for h in 0..nh {
            let head = arr.halfedges[h].to;
            let tile = arr.halfedges[h].tile;
            let back = arr.halfedges[h].twin;
            let local: Vec<usize> = out_of[head]
                .iter()
                .copied()
                .filter(|&k| arr.halfedges[k].tile == tile)
                .collect();
            let mut best: Option<usize> = None;
            for &cand in &local {
                if cand == back && local.len() > 1 {
                    continue;
                }
                match best {
                    None => best = Some(cand),
                    Some(b) => {
                        if ccw_angle_greater(
                            &arr.halfedges[back].dir,
                            &arr.halfedges[cand].dir,
                            &arr.halfedges[b].dir,
                        ) {
                            best = Some(cand);
                        }
                    }
                }
            }
            next_he[h] = best.expect("next half-edge");
        }
    }

    // region boundary circuits: cell walks stitched across glued side
    // subsegments; corners recorded at direct chord-to-chord transitions
    let mut circuits: Vec<Vec<Vec<(usize, usize, usize)>>> = vec![Vec::new(); nregions];
    let mut visited = vec![false; nh];
    for start in 0..nh {
        if visited[start] || arr.halfedges[start].chord.is_none() {
            continue;
        }
        let cell = arr.face_of[start];
        if arr.outer[cell] || region_of_cell[cell] == usize::MAX {
            continue;
        }
        let region = region_of_cell[cell];
        let mut circuit: Vec<(usize, usize, usize)> = Vec::new();
        let mut h = start;
        loop {
            visited[h] = true;
            let mut nxt = next_he[h];
            let mut direct = true;
            let mut guard = 0usize;
            while arr.halfedges[nxt].chord.is_none() {
                direct = false;
                nxt = match side_partner[nxt] {
                    Some(p) => next_he[p],
                    None => next_he[nxt],
                };
                guard += 1;
                assert!(guard < 1_000_000, "runaway region walk");
            }
            if direct {
                let v = arr.halfedges[h].to;
                debug_assert_eq!(v, arr.halfedges[nxt].from);
                if matches!(arr.vertices[v], Vertex::Interior(..)) {
                    circuit.push((h, v, nxt));
                }
            }
            h = nxt;
            if h == start {
                break;
            }
        }
        circuits[region].push(circuit);
    }

    Extraction {
        nregions,
        touches_suture,
        euler,
        circuits,
    }
}

// ---------------- diagram assembly ----------------

/// Result of building a diagram: the diagram plus the doubled curve
/// system it was extracted from (alpha curves first, then betas).
pub struct BuiltDiagram {
    pub diagram: HeegaardDiagram,
    pub doubled: CurveSystem,
    pub alpha_names: Vec<String>,
    pub beta_names: Vec<String>,
}

/// Build the Heegaard diagram of an open book presented on a page.
///
/// `basis` names open embedded arcs already registered in `sys`; the
/// monodromy word's curves must carry twist regions. The basis must cut
/// the page into a single disk.
pub fn build_diagram(
    sys: &CurveSystem,
    basis: &[&str],
    word: &TwistWord,
) -> Result<BuiltDiagram, BuildError> {
    if basis.is_empty() {
        return Err(BuildError::NotADisk(0, 0));
    }
    // basis arcs: open, embedded, pairwise disjoint
    for (i, a) in basis.iter().enumerate() {
        let p = sys.path(a)?;
        if p.closed || !sys.is_embedded(a)? {
            return Err(BuildError::Page(PageError::BadArc(a.to_string())));
        }
        for b in &basis[i + 1..] {
            if !sys.intersections(a, b)?.is_empty() {
                return Err(BuildError::ArcsCross(a.to_string(), b.to_string()));
            }
        }
    }
    check_cuts_to_disk(sys, basis)?;

    // pushoffs and their monodromy images
    let mut work = sys.clone();
    let mut push_ids = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        let b_id = format!("push{i}");
        work = work.pushoff(a, &b_id)?;
        push_ids.push(b_id);
    }
    let twisted = {
        let targets: Vec<&str> = push_ids.iter().map(|s| s.as_str()).collect();
        apply_monodromy(&work, word, &targets)?
    };

    // doubled complex and curves
    let (doubled_page, suture_indices) = double_page(&sys.page);
    let shift = sys.page.tiles;
    let mut doubled = CurveSystem::new(doubled_page);
    let mut alpha_names = Vec::new();
    let mut beta_names = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        let arc = sys.path(a)?;
        let alpha = closed_double(arc, arc, shift);
        let name = format!("alpha{i}");
        doubled.paths.insert(name.clone(), alpha);
        alpha_names.push(name);
    }
    for (i, b_id) in push_ids.iter().enumerate() {
        let b = work.path(b_id)?;
        let phi_b = twisted.path(b_id)?;
        let beta = closed_double(b, phi_b, shift);
        let name = format!("beta{i}");
        doubled.paths.insert(name.clone(), beta);
        beta_names.push(name);
    }
    doubled.page.validate().map_err(BuildError::Page)?;
    for p in doubled.paths.values() {
        doubled.validate_path(p)?;
    }
    doubled.validate_general_position()?;

    // disjointness within each family
    let n = basis.len();
    for i in 0..n {
        for j in i + 1..n {
            if !doubled
                .intersections(&alpha_names[i], &alpha_names[j])?
                .is_empty()
            {
                return Err(BuildError::AlphaCollision);
            }
            if !doubled
                .intersections(&beta_names[i], &beta_names[j])?
                .is_empty()
            {
                return Err(BuildError::BetaCollision(
                    beta_names[i].clone(),
                    beta_names[j].clone(),
                ));
            }
        }
        if !doubled
            .intersections(&alpha_names[i], &alpha_names[i])?
            .is_empty()
            || !doubled
                .intersections(&beta_names[i], &beta_names[i])?
                .is_empty()
        {
            return Err(BuildError::AlphaCollision);
        }
    }

    // suture slots in canonical form
    let suture_slots: BTreeSet<(usize, Side)> = suture_indices
        .iter()
        .map(|&i| {
            let g = &doubled.page.gluings[i];
            g.a.min(g.b)
        })
        .collect();

    let diagram = assemble(
        &doubled,
        &alpha_names,
        &beta_names,
        &suture_slots,
        sys,
        basis,
        &work,
        &push_ids,
    )?;
    Ok(BuiltDiagram {
        diagram,
        doubled,
        alpha_names,
        beta_names,
    })
}

#[doc(hidden)]
pub fn debug_arrangement_doubled(
    sys: &CurveSystem,
    basis: &[&str],
    word: &TwistWord,
) -> Result<String, BuildError> {
    // replicate the curve-doubling part of build_diagram
    let mut work = sys.clone();
    let mut push_ids = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        let b_id = format!("push{i}");
        work = work.pushoff(a, &b_id)?;
        push_ids.push(b_id);
    }
    let twisted = {
        let targets: Vec<&str> = push_ids.iter().map(|s| s.as_str()).collect();
        apply_monodromy(&work, word, &targets)?
    };
    let (doubled_page, _) = double_page(&sys.page);
    let shift = sys.page.tiles;
    let mut doubled = CurveSystem::new(doubled_page);
    for (i, a) in basis.iter().enumerate() {
        let arc = sys.path(a)?;
        doubled
            .paths
            .insert(format!("alpha{i}"), closed_double(arc, arc, shift));
    }
    for (i, b_id) in push_ids.iter().enumerate() {
        let b = work.path(b_id)?;
        let phi_b = twisted.path(b_id)?;
        doubled
            .paths
            .insert(format!("beta{i}"), closed_double(b, phi_b, shift));
    }
    let mut s = String::new();
    use std::fmt::Write;
    for (k, p) in &doubled.paths {
        writeln!(s, "path {k} closed {}:", p.closed).unwrap();
        for c in &p.crossings {
            writeln!(
                s,
                "  tile {} enter {:?}@{} exit {:?}@{}",
                c.tile,
                c.enter.0,
                pos_key(&c.enter.1),
                c.exit.0,
                pos_key(&c.exit.1)
            )
            .unwrap();
        }
    }
    Ok(s)
}

#[doc(hidden)]
pub fn debug_arrangement(sys: &CurveSystem, arcs: &[&str]) -> Result<String, BuildError> {
    let curves: Vec<(&str, &CombPath)> = arcs
        .iter()
        .map(|&a| sys.path(a).map(|p| (a, p)))
        .collect::<Result<_, _>>()?;
    let chart = Chart {
        page: &sys.page,
        curves,
    };
    let arr = build_arrangement(&chart)?;
    let mut s = String::new();
    use std::fmt::Write;
    writeln!(s, "vertices:").unwrap();
    for (i, v) in arr.vertices.iter().enumerate() {
        writeln!(s, "  {i}: {v:?}").unwrap();
    }
    writeln!(s, "halfedges:").unwrap();
    for (i, h) in arr.halfedges.iter().enumerate() {
        writeln!(
            s,
            "  {i}: {}->{} tile {} chord {:?} seg {:?} face {} outer {}",
            h.from, h.to, h.tile, h.chord, h.seg.as_ref().map(|x| (x.0, pos_key(&x.1), pos_key(&x.2))), arr.face_of[i], arr.outer[arr.face_of[i]]
        )
        .unwrap();
    }
    writeln!(s, "ncells {} outer {:?}", arr.ncells, arr.outer).unwrap();
    Ok(s)
}

/// Component count and Euler characteristics of the page cut along the
/// given arcs; exposed for inspection and tests.
pub fn cut_profile(sys: &CurveSystem, arcs: &[&str]) -> Result<Vec<i64>, BuildError> {
    let curves: Vec<(&str, &CombPath)> = arcs
        .iter()
        .map(|&a| sys.path(a).map(|p| (a, p)))
        .collect::<Result<_, _>>()?;
    let chart = Chart {
        page: &sys.page,
        curves,
    };
    let arr = build_arrangement(&chart)?;
    let ext = extract_regions(&arr, &chart, &BTreeSet::new());
    Ok(ext.euler.clone())
}

/// First homology of the open book's manifold, computed directly from
/// the doubled curves: M(i, j) is the signed count of alpha_i with
/// beta_j. This path tolerates the residual crossing pairs the twist
/// machinery can leave between different beta curves (they cancel in
/// every algebraic count), so it works on multi-curve monodromies whose
/// full region structure `build_diagram` would refuse.
pub fn h1_of_open_book(
    sys: &CurveSystem,
    basis: &[&str],
    word: &TwistWord,
) -> Result<super::H1Presentation, BuildError> {
    check_cuts_to_disk(sys, basis)?;
    let mut work = sys.clone();
    let mut push_ids = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        let b_id = format!("push{i}");
        work = work.pushoff(a, &b_id)?;
        push_ids.push(b_id);
    }
    let twisted = {
        let targets: Vec<&str> = push_ids.iter().map(|s| s.as_str()).collect();
        apply_monodromy(&work, word, &targets)?
    };
    let (doubled_page, _) = double_page(&sys.page);
    let shift = sys.page.tiles;
    let mut doubled = CurveSystem::new(doubled_page);
    let n = basis.len();
    for (i, a) in basis.iter().enumerate() {
        let arc = sys.path(a)?;
        doubled
            .paths
            .insert(format!("alpha{i}"), closed_double(arc, arc, shift));
    }
    for (i, b_id) in push_ids.iter().enumerate() {
        let beta = closed_double(work.path(b_id)?, twisted.path(b_id)?, shift);
        doubled.paths.insert(format!("beta{i}"), beta);
    }
    doubled.validate_general_position()?;
    let mut m = vec![vec![0i128; n]; n];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let hits = doubled.intersections(&format!("alpha{i}"), &format!("beta{j}"))?;
            *entry = hits.iter().map(|h| h.sign as i128).sum();
        }
    }
    let smith = crate::linalg::smith_normal_form(&m);
    Ok(super::H1Presentation { matrix: m, smith })
}

/// The basis must cut the page into a single disk: one complement
/// component with Euler characteristic 1.
fn check_cuts_to_disk(sys: &CurveSystem, basis: &[&str]) -> Result<(), BuildError> {
    let curves: Vec<(&str, &CombPath)> = basis
        .iter()
        .map(|&a| sys.path(a).map(|p| (a, p)))
        .collect::<Result<_, _>>()?;
    let chart = Chart {
        page: &sys.page,
        curves,
    };
    let arr = build_arrangement(&chart)?;
    let ext = extract_regions(&arr, &chart, &BTreeSet::new());
    let total: i64 = ext.euler.iter().sum();
    if ext.nregions != 1 || total != 1 {
        return Err(BuildError::NotADisk(ext.nregions, total));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    doubled: &CurveSystem,
    alpha_names: &[String],
    beta_names: &[String],
    suture_slots: &BTreeSet<(usize, Side)>,
    base_sys: &CurveSystem,
    basis: &[&str],
    with_pushoffs: &CurveSystem,
    push_ids: &[String],
) -> Result<HeegaardDiagram, BuildError> {
    let n = alpha_names.len();
    let mut curve_list: Vec<(&str, &CombPath)> = Vec::new();
    for a in alpha_names {
        curve_list.push((a.as_str(), &doubled.paths[a]));
    }
    for b in beta_names {
        curve_list.push((b.as_str(), &doubled.paths[b]));
    }
    let chart = Chart {
        page: &doubled.page,
        curves: curve_list,
    };
    let arr = build_arrangement(&chart)?;
    let ext = extract_regions(&arr, &chart, suture_slots);

    // intersection points: interior vertices pairing an alpha chord with
    // a beta chord
    let is_alpha = |c: &ChordRef| c.curve < n;
    let mut point_ids: BTreeMap<usize, usize> = BTreeMap::new(); // vertex -> point
    let mut points: Vec<Point> = Vec::new();
    let mut point_vertex: Vec<usize> = Vec::new();
    for (v, vert) in arr.vertices.iter().enumerate() {
        if let Vertex::Interior(_, c1, c2) = vert {
            let (a, b) = if is_alpha(c1) { (c1, c2) } else { (c2, c1) };
            if !is_alpha(a) || is_alpha(b) {
                return Err(BuildError::AlphaCollision);
            }
            let da = chord_dir(chart.crossing(a));
            let db = chord_dir(chart.crossing(b));
            let s = &da.0 * &db.1 - &da.1 * &db.0;
            let sign = if s.is_positive() { 1 } else { -1 };
            point_ids.insert(v, points.len());
            point_vertex.push(v);
            points.push(Point {
                alpha: a.curve,
                beta: b.curve - n,
                sign,
            });
        }
    }

    // cyclic point order along each curve: traversal order of crossings,
    // points sorted by parameter along each chord
    let order_along = |curve_idx: usize| -> Vec<usize> {
        let path = chart.curves[curve_idx].1;
        let mut out = Vec::new();
        for (k, _) in path.crossings.iter().enumerate() {
            let this = ChordRef {
                curve: curve_idx,
                index: k,
            };
            let mut here: Vec<(Pos, usize)> = Vec::new();
            for (v, vert) in arr.vertices.iter().enumerate() {
                if let Vertex::Interior(_, c1, c2) = vert {
                    if *c1 == this || *c2 == this {
                        let other = if *c1 == this { c2 } else { c1 };
                        let (a1, a2) = chart.chord_points(&this);
                        let (b1, b2) = chart.chord_points(other);
                        let da = (&a2.0 - &a1.0, &a2.1 - &a1.1);
                        let db = (&b2.0 - &b1.0, &b2.1 - &b1.1);
                        let denom = &da.0 * &db.1 - &da.1 * &db.0;
                        let s =
                            (&(&b1.0 - &a1.0) * &db.1 - &(&b1.1 - &a1.1) * &db.0) / &denom;
                        here.push((s, point_ids[&v]));
                    }
                }
            }
            here.sort_by(|a, b| a.0.cmp(&b.0));
            out.extend(here.into_iter().map(|(_, p)| p));
        }
        out
    };
    let alphas: Vec<Vec<usize>> = (0..n).map(order_along).collect();
    let betas: Vec<Vec<usize>> = (n..2 * n).map(order_along).collect();

    // regions with corner circuits
    let mut regions = Vec::new();
    for r in 0..ext.nregions {
        let mut circuits = Vec::new();
        for walk in &ext.circuits[r] {
            let mut corners = Vec::new();
            for &(h_in, v, h_out) in walk {
                let p = point_ids[&v];
                // the region sector at v is bounded by the reversed
                // incoming direction and the outgoing direction
                let in_dir = &arr.halfedges[h_in].dir;
                let back = (-in_dir.0.clone(), -in_dir.1.clone());
                let out_dir = arr.halfedges[h_out].dir.clone();
                let quadrant = quadrant_of(&arr, &chart, v, &back, &out_dir, &points, p, n)?;
                corners.push(Corner { point: p, quadrant });
            }
            circuits.push(corners);
        }
        regions.push(Region {
            circuits,
            euler: ext.euler[r],
            basepoint: ext.touches_suture[r],
        });
    }
    if !regions.iter().any(|r| r.basepoint) {
        return Err(BuildError::NoBasepoints);
    }

    // contact points: the single pushoff crossing per basis arc, located
    // in the first tile of the arc
    let mut contact = Vec::new();
    for (i, a) in basis.iter().enumerate() {
        let hits = with_pushoffs.intersections(a, &push_ids[i])?;
        assert_eq!(hits.len(), 1);
        let (pa, pb) = (hits[0].on_p, hits[0].on_q);
        // alpha chord index pa on A-side = crossing pa of the doubled
        // alpha; beta chord index pb likewise (A-side chords come first)
        let want_a = ChordRef {
            curve: i,
            index: pa,
        };
        let want_b = ChordRef {
            curve: n + i,
            index: pb,
        };
        let v = arr
            .vertices
            .iter()
            .position(|vx| {
                matches!(vx, Vertex::Interior(_, c1, c2)
                    if (*c1 == want_a.min(want_b) && *c2 == want_a.max(want_b)))
            })
            .expect("pushoff crossing survives doubling");
        contact.push(point_ids[&v]);
    }

    let (genus_page, b_page) = base_sys.page.genus_boundary();
    let genus = (2 * genus_page + b_page as i64 - 1) as u32;

    let anchors = contact
        .iter()
        .map(|&p| Anchor {
            first: p,
            forwards: true,
        })
        .collect();

    let _ = point_vertex;
    Ok(HeegaardDiagram {
        genus,
        points,
        alphas,
        betas,
        regions,
        contact_points: Some(contact),
        anchors: Some(anchors),
    })
}

/// Quadrant of the region sector at an interior vertex bounded by the two
/// given rays, relative to (alpha direction = E, beta direction = N).
#[allow(clippy::too_many_arguments)]
fn quadrant_of(
    arr: &Arrangement,
    chart: &Chart,
    v: usize,
    ray1: &(Pos, Pos),
    ray2: &(Pos, Pos),
    _points: &[Point],
    _p: usize,
    n: usize,
) -> Result<Quadrant, BuildError> {
    let Vertex::Interior(_, c1, c2) = &arr.vertices[v] else {
        unreachable!()
    };
    let (a, b) = if c1.curve < n { (c1, c2) } else { (c2, c1) };
    let da = chord_dir(chart.crossing(a));
    let db = chord_dir(chart.crossing(b));
    // classify a ray as +alpha, -alpha, +beta or -beta
    let classify = |ray: &(Pos, Pos)| -> (bool, bool) {
        // (is_alpha, is_positive)
        let cross_a = &da.0 * &ray.1 - &da.1 * &ray.0;
        let cross_b = &db.0 * &ray.1 - &db.1 * &ray.0;
        if cross_a.is_zero() {
            let dot = &da.0 * &ray.0 + &da.1 * &ray.1;
            (true, dot.is_positive())
        } else {
            debug_assert!(cross_b.is_zero());
            let dot = &db.0 * &ray.0 + &db.1 * &ray.1;
            (false, dot.is_positive())
        }
    };
    let (a1, p1) = classify(ray1);
    let (a2, p2) = classify(ray2);
    let (alpha_pos, beta_pos) = match (a1, a2) {
        (true, false) => (p1, p2),
        (false, true) => (p2, p1),
        _ => return Err(BuildError::AlphaCollision),
    };
    Ok(match (alpha_pos, beta_pos) {
        (true, true) => Quadrant::NE,
        (false, true) => Quadrant::NW,
        (false, false) => Quadrant::SW,
        (true, false) => Quadrant::SE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::openbook::Sign;
    use crate::page::{rat, TwistRegion};

    fn annulus_sys(m: usize) -> CurveSystem {
        let mut sys = CurveSystem::new(PageComplex::annulus(m));
        sys.register(
            "a0",
            CombPath {
                closed: false,
                crossings: vec![Crossing {
                    tile: 0,
                    enter: (Side::N, rat(1, 2)),
                    exit: (Side::S, rat(1, 2)),
                }],
            },
        )
        .unwrap();
        let core = CombPath {
            closed: true,
            crossings: (0..m)
                .map(|i| Crossing {
                    tile: i,
                    enter: (Side::W, rat(1, 3)),
                    exit: (Side::E, rat(1, 3)),
                })
                .collect(),
        };
        sys.register("core", core).unwrap();
        sys.regions.insert(
            "core".into(),
            TwistRegion {
                tiles: (0..m).collect(),
            },
        );
        sys
    }

    #[test]
    fn double_of_annulus_is_torus() {
        let (doubled, sutures) = double_page(&PageComplex::annulus(1));
        doubled.validate().unwrap();
        assert_eq!(doubled.genus_boundary(), (1, 0));
        assert_eq!(sutures.len(), 2);
        let (doubled, _) = double_page(&PageComplex::annulus(3));
        doubled.validate().unwrap();
        assert_eq!(doubled.genus_boundary(), (1, 0));
    }

    #[test]
    fn annulus_identity_diagram() {
        let sys = annulus_sys(1);
        let built = build_diagram(&sys, &["a0"], &TwistWord::identity()).unwrap();
        let d = &built.diagram;
        assert_eq!(d.genus, 1);
        assert_eq!(d.n(), 1);
        // pushoff point on page A and its mirror crossing on page B
        assert_eq!(d.points.len(), 2);
        let rep = d.validate();
        assert!(rep.ok(), "{:?}", rep.failures);
        // every region touches the suture on this tiny diagram or not;
        // basepoints exist either way
        assert!(d.basepoint_count() >= 1);
        // H1 = Z for S1 x S2
        let h = d.h1_presentation();
        assert_eq!(h.smith.cokernel_rank(), 1);
        assert!(h.smith.torsion().is_empty());
    }

    #[test]
    fn annulus_twisted_diagrams() {
        for (sign, n, expect_pts) in [
            (Sign::Positive, 1u32, 1usize),
            (Sign::Positive, 2, 2),
            (Sign::Positive, 3, 3),
            (Sign::Negative, 1, 3),
            (Sign::Negative, 2, 4),
        ] {
            let sys = annulus_sys(1);
            let word = TwistWord::letter("core", sign, n);
            let built = build_diagram(&sys, &["a0"], &word).unwrap();
            let d = &built.diagram;
            let rep = d.validate();
            assert!(rep.ok(), "sign {sign:?} n {n}: {:?}", rep.failures);
            assert_eq!(
                d.points.len(),
                expect_pts,
                "points for sign {sign:?}, n = {n}"
            );
            // H1 = Z/n regardless of the twist direction
            let h = d.h1_presentation();
            assert_eq!(h.smith.cokernel_rank(), 0, "sign {sign:?} n {n}");
            let t = h.smith.torsion();
            if n == 1 {
                assert!(t.is_empty());
            } else {
                assert_eq!(t, vec![n as i128]);
            }
        }
    }

    #[test]
    fn disk_check_rejects_empty_and_bad_bases() {
        let sys = annulus_sys(2);
        assert!(matches!(
            build_diagram(&sys, &[], &TwistWord::identity()),
            Err(BuildError::NotADisk(0, 0))
        ));
    }
}
