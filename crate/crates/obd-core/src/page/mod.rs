//! Combinatorial surfaces: quadrilateral tiles with edge identifications,
//! carrying arcs and twist curves as chains of straight chords with exact
//! rational transverse positions.
//!
//! Every tile is the unit square with its standard orientation; side
//! parameters are `N: (p,1), E: (1,p), S: (p,0), W: (0,p)` with
//! `p` strictly between 0 and 1. Gluings identify side parameters either
//! directly or reversed, and are validated to be orientation-compatible,
//! so the glued complex is an oriented surface. General position is the
//! single global invariant: transverse positions on any edge class are
//! pairwise distinct across all registered paths.

pub mod twist;

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Pos = BigRational;
pub type TileId = usize;

pub fn rat(n: i64, d: i64) -> Pos {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn pos_string(p: &Pos) -> String {
    format!("{}/{}", p.numer(), p.denom())
}

pub fn parse_pos(s: &str) -> Option<Pos> {
    let (n, d) = s.split_once('/')?;
    let n: BigInt = n.trim().parse().ok()?;
    let d: BigInt = d.trim().parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(BigRational::new(n, d))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Side {
    N,
    E,
    S,
    W,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::N => 0,
            Side::E => 1,
            Side::S => 2,
            Side::W => 3,
        }
    }

    pub fn from_index(i: usize) -> Side {
        [Side::N, Side::E, Side::S, Side::W][i % 4]
    }

    /// Direction of the side parameter along the tile's ccw boundary:
    /// S and E run with the parameter, N and W against it.
    fn ccw_dir(self) -> i8 {
        match self {
            Side::S | Side::E => 1,
            Side::N | Side::W => -1,
        }
    }
}

/// Point of the unit square at parameter `p` of a side.
pub fn point_of(side: Side, p: &Pos) -> (Pos, Pos) {
    let one = BigRational::one();
    let zero = BigRational::zero();
    match side {
        Side::N => (p.clone(), one),
        Side::E => (one, p.clone()),
        Side::S => (p.clone(), zero),
        Side::W => (zero, p.clone()),
    }
}

fn cross(ax: &Pos, ay: &Pos, bx: &Pos, by: &Pos) -> Pos {
    ax * by - ay * bx
}

/// Orientation of c relative to the directed line a -> b: positive means
/// c lies to the left.
pub fn orient(a: &(Pos, Pos), b: &(Pos, Pos), c: &(Pos, Pos)) -> i8 {
    let v = cross(&(&b.0 - &a.0), &(&b.1 - &a.1), &(&c.0 - &a.0), &(&c.1 - &a.1));
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

#[derive(Debug, Error)]
pub enum PageError {
    #[error("side ({0}, {1:?}) appears in more than one gluing")]
    SlotReused(TileId, Side),
    #[error("gluing identifies a side with itself")]
    SelfGluing,
    #[error("gluing of ({0}, {1:?}) is not orientation-compatible")]
    NonOrientable(TileId, Side),
    #[error("tile id {0} out of range")]
    BadTile(TileId),
    #[error("glued complex is not connected")]
    Disconnected,
    #[error("boundary grouping does not match the glued complex")]
    BoundaryMismatch,
    #[error("unglued side ({0}, {1:?}) belongs to no declared boundary")]
    UnassignedBoundary(TileId, Side),
    #[error("path crossing {index} in tile {tile} is not compatible with the gluing that follows")]
    IncompatibleCrossing { index: usize, tile: TileId },
    #[error("crossing {index} in tile {tile} enters and exits through the same side")]
    UTurnCrossing { index: usize, tile: TileId },
    #[error("degenerate u-turn configuration while straightening a twisted path")]
    DegenerateUTurn,
    #[error("open path endpoint is not on a boundary edge")]
    EndpointNotOnBoundary,
    #[error("closed path does not close up")]
    DoesNotClose,
    #[error("transverse position {0} repeated on an edge (general position violated)")]
    PositionClash(String),
    #[error("position {0} out of the open interval (0,1)")]
    PositionRange(String),
    #[error("path {0} is not registered")]
    UnknownPath(String),
    #[error("curve {0} has no registered twist region")]
    NoTwistRegion(String),
    #[error("twist curve {0} is not embedded")]
    NotEmbedded(String),
    #[error("twist region for {curve}: {reason}")]
    BadRegion { curve: String, reason: String },
    #[error("paths share an edge position (not in general position)")]
    SharedEdgePosition,
    #[error("arc {0} must be open and embedded")]
    BadArc(String),
}

/// Identification of two tile sides. `reversed` maps parameter `p` to
/// `1 - p`; validation forces the orientation-compatible choice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gluing {
    pub a: (TileId, Side),
    pub b: (TileId, Side),
    pub reversed: bool,
}

/// The tiled surface: `tiles` unit squares plus gluings; unglued sides are
/// grouped into named boundary circles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PageComplex {
    pub tiles: usize,
    pub gluings: Vec<Gluing>,
    pub boundary: BTreeMap<String, Vec<(TileId, Side)>>,
}

/// Where a side slot ends up: glued to a partner or free on a named
/// boundary circle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SlotStatus {
    Glued { partner: (TileId, Side), reversed: bool },
    Boundary(String),
}

impl PageComplex {
    pub fn slot_status(&self, slot: (TileId, Side)) -> Option<SlotStatus> {
        for g in &self.gluings {
            if g.a == slot {
                return Some(SlotStatus::Glued {
                    partner: g.b,
                    reversed: g.reversed,
                });
            }
            if g.b == slot {
                return Some(SlotStatus::Glued {
                    partner: g.a,
                    reversed: g.reversed,
                });
            }
        }
        for (id, slots) in &self.boundary {
            if slots.contains(&slot) {
                return Some(SlotStatus::Boundary(id.clone()));
            }
        }
        None
    }

    pub fn is_boundary_slot(&self, slot: (TileId, Side)) -> bool {
        matches!(self.slot_status(slot), Some(SlotStatus::Boundary(_)))
    }

    /// Map a position through the gluing at `slot`, returning the partner
    /// slot and its local parameter. Identity on boundary slots.
    pub fn across(&self, slot: (TileId, Side), p: &Pos) -> Option<((TileId, Side), Pos)> {
        match self.slot_status(slot)? {
            SlotStatus::Glued { partner, reversed } => {
                let q = if reversed {
                    BigRational::one() - p
                } else {
                    p.clone()
                };
                Some((partner, q))
            }
            SlotStatus::Boundary(_) => None,
        }
    }

    /// Canonical (edge class, parameter) for a side point, so positions on
    /// the two sides of a gluing compare equal.
    pub fn canonical(&self, slot: (TileId, Side), p: &Pos) -> ((TileId, Side), Pos) {
        match self.slot_status(slot) {
            Some(SlotStatus::Glued { partner, reversed }) if partner < slot => {
                let q = if reversed {
                    BigRational::one() - p
                } else {
                    p.clone()
                };
                (partner, q)
            }
            _ => (slot, p.clone()),
        }
    }

    pub fn validate(&self) -> Result<(), PageError> {
        let mut used: BTreeSet<(TileId, Side)> = BTreeSet::new();
        for g in &self.gluings {
            if g.a == g.b {
                return Err(PageError::SelfGluing);
            }
            for slot in [g.a, g.b] {
                if slot.0 >= self.tiles {
                    return Err(PageError::BadTile(slot.0));
                }
                if !used.insert(slot) {
                    return Err(PageError::SlotReused(slot.0, slot.1));
                }
            }
            // orientation compatibility: sides traversed the same way along
            // the ccw boundary must be glued reversed, opposite ways direct
            let same_dir = g.a.1.ccw_dir() == g.b.1.ccw_dir();
            if g.reversed != same_dir {
                return Err(PageError::NonOrientable(g.a.0, g.a.1));
            }
        }
        // every unglued slot appears in exactly one boundary group
        let mut assigned: BTreeSet<(TileId, Side)> = BTreeSet::new();
        for slots in self.boundary.values() {
            for &slot in slots {
                if slot.0 >= self.tiles {
                    return Err(PageError::BadTile(slot.0));
                }
                if used.contains(&slot) || !assigned.insert(slot) {
                    return Err(PageError::BoundaryMismatch);
                }
            }
        }
        for t in 0..self.tiles {
            for side in [Side::N, Side::E, Side::S, Side::W] {
                if !used.contains(&(t, side)) && !assigned.contains(&(t, side)) {
                    return Err(PageError::UnassignedBoundary(t, side));
                }
            }
        }
        // connectivity over the tile adjacency graph
        if self.tiles > 0 {
            let mut seen = vec![false; self.tiles];
            let mut stack = vec![0usize];
            seen[0] = true;
            while let Some(t) = stack.pop() {
                for g in &self.gluings {
                    for (x, y) in [(g.a.0, g.b.0), (g.b.0, g.a.0)] {
                        if x == t && !seen[y] {
                            seen[y] = true;
                            stack.push(y);
                        }
                    }
                }
            }
            if seen.iter().any(|&s| !s) {
                return Err(PageError::Disconnected);
            }
        }
        // declared boundary groups must be unions of actual boundary cycles
        let cycles = self.boundary_cycles();
        let declared: Vec<BTreeSet<(TileId, Side)>> = self
            .boundary
            .values()
            .map(|v| v.iter().copied().collect())
            .collect();
        for cyc in &cycles {
            let set: BTreeSet<_> = cyc.iter().copied().collect();
            if !declared.contains(&set) {
                return Err(PageError::BoundaryMismatch);
            }
        }
        if declared.len() != cycles.len() {
            return Err(PageError::BoundaryMismatch);
        }
        Ok(())
    }

    /// Corner equivalence classes of the glued complex. Corners are
    /// numbered 0..4 per tile, corner k sitting between side k and side
    /// k+1 in N,E,S,W cyclic order (0 = NE, 1 = SE, 2 = SW, 3 = NW).
    fn corner_classes(&self) -> Vec<Vec<(TileId, usize)>> {
        // corner k of a side (side s has corners at params 1 and 0 ends)
        fn corners_of(side: Side) -> (usize, usize) {
            // (corner at param 0, corner at param 1)
            match side {
                Side::N => (3, 0), // NW at p=0, NE at p=1
                Side::E => (1, 0), // SE at p=0, NE at p=1
                Side::S => (2, 1), // SW at p=0, SE at p=1
                Side::W => (2, 3), // SW at p=0, NW at p=1
            }
        }
        let n = self.tiles * 4;
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for g in &self.gluings {
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
        let mut groups: BTreeMap<usize, Vec<(TileId, usize)>> = BTreeMap::new();
        for t in 0..self.tiles {
            for k in 0..4 {
                let r = find(&mut parent, t * 4 + k);
                groups.entry(r).or_default().push((t, k));
            }
        }
        groups.into_values().collect()
    }

    /// Boundary circles as cyclic lists of unglued side slots.
    pub fn boundary_cycles(&self) -> Vec<Vec<(TileId, Side)>> {
        let glued: BTreeSet<(TileId, Side)> = self
            .gluings
            .iter()
            .flat_map(|g| [g.a, g.b])
            .collect();
        let mut free: BTreeSet<(TileId, Side)> = (0..self.tiles)
            .flat_map(|t| {
                [Side::N, Side::E, Side::S, Side::W]
                    .into_iter()
                    .map(move |s| (t, s))
            })
            .filter(|slot| !glued.contains(slot))
            .collect();

        let classes = self.corner_classes();
        let class_of = |corner: (TileId, usize)| -> usize {
            classes
                .iter()
                .position(|c| c.contains(&corner))
                .expect("corner in some class")
        };
        // side -> its two corner classes
        fn side_corners(side: Side) -> (usize, usize) {
            match side {
                Side::N => (3, 0),
                Side::E => (1, 0),
                Side::S => (2, 1),
                Side::W => (2, 3),
            }
        }

        let mut cycles = Vec::new();
        while let Some(&start) = free.iter().next() {
            let mut cycle = vec![start];
            free.remove(&start);
            let (c0, c1) = side_corners(start.1);
            let mut reach = class_of((start.0, c1));
            let back = class_of((start.0, c0));
            loop {
                // next free side sharing the corner class `reach`
                let next = free.iter().copied().find(|&(t, s)| {
                    let (a, b) = side_corners(s);
                    class_of((t, a)) == reach || class_of((t, b)) == reach
                });
                let Some(slot) = next else { break };
                free.remove(&slot);
                let (a, b) = side_corners(slot.1);
                let (ca, cb) = (class_of((slot.0, a)), class_of((slot.0, b)));
                reach = if ca == reach { cb } else { ca };
                cycle.push(slot);
                if reach == back {
                    break;
                }
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// (genus, boundary circle count) from the Euler characteristic of the
    /// glued complex.
    pub fn genus_boundary(&self) -> (i64, usize) {
        let v = self.corner_classes().len() as i64;
        let glued_pairs = self.gluings.len() as i64;
        let total_sides = (self.tiles * 4) as i64;
        let e = glued_pairs + (total_sides - 2 * glued_pairs);
        let f = self.tiles as i64;
        let chi = v - e + f;
        let b = self.boundary_cycles().len() as i64;
        let genus = (2 - b - chi) / 2;
        (genus, b as usize)
    }

    /// Annulus as a cycle of `m` tiles glued E to W, boundary circles on
    /// the N and S sides.
    pub fn annulus(m: usize) -> PageComplex {
        assert!(m >= 1);
        let gluings = (0..m)
            .map(|i| Gluing {
                a: (i, Side::E),
                b: ((i + 1) % m, Side::W),
                reversed: false,
            })
            .collect();
        let boundary = BTreeMap::from([
            (
                "bd0".to_string(),
                (0..m).map(|i| (i, Side::N)).collect::<Vec<_>>(),
            ),
            (
                "bd1".to_string(),
                (0..m).map(|i| (i, Side::S)).collect::<Vec<_>>(),
            ),
        ]);
        PageComplex {
            tiles: m,
            gluings,
            boundary,
        }
    }
}

/// One directed pass through a tile.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub tile: TileId,
    pub enter: (Side, Pos),
    pub exit: (Side, Pos),
}

impl Crossing {
    pub fn chord(&self) -> ((Pos, Pos), (Pos, Pos)) {
        (
            point_of(self.enter.0, &self.enter.1),
            point_of(self.exit.0, &self.exit.1),
        )
    }
}

/// A path as a chain of tile crossings; open paths start and end on
/// boundary edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombPath {
    pub closed: bool,
    pub crossings: Vec<Crossing>,
}

impl CombPath {
    pub fn len(&self) -> usize {
        self.crossings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty()
    }
}

/// Declared annulus neighbourhood of a twist curve: the cyclic list of
/// tiles the curve passes through, in traversal order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistRegion {
    pub tiles: Vec<TileId>,
}

/// A page with its registered paths, twist regions and pushoff marks.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CurveSystem {
    pub page: PageComplex,
    pub paths: BTreeMap<String, CombPath>,
    pub regions: BTreeMap<String, TwistRegion>,
    /// pushoff id -> base arc id
    pub marks: BTreeMap<String, String>,
}

impl Default for PageComplex {
    fn default() -> Self {
        PageComplex {
            tiles: 0,
            gluings: Vec::new(),
            boundary: BTreeMap::new(),
        }
    }
}

/// A transverse intersection of two paths.
#[derive(Clone, Debug)]
pub struct PathCrossing {
    /// Index of the chord along the first path.
    pub on_p: usize,
    /// Index of the chord along the second path.
    pub on_q: usize,
    /// Orientation sign of the frame (dp, dq).
    pub sign: i8,
    /// Parameter of the intersection along p's chord, for ordering.
    pub along_p: Pos,
}

impl CurveSystem {
    pub fn new(page: PageComplex) -> Self {
        CurveSystem {
            page,
            paths: BTreeMap::new(),
            regions: BTreeMap::new(),
            marks: BTreeMap::new(),
        }
    }

    pub fn path(&self, id: &str) -> Result<&CombPath, PageError> {
        self.paths
            .get(id)
            .ok_or_else(|| PageError::UnknownPath(id.to_string()))
    }

    /// Validate one path against the page: position ranges, consecutive
    /// compatibility, endpoint/closure discipline.
    pub fn validate_path(&self, path: &CombPath) -> Result<(), PageError> {
        let one = BigRational::one();
        let zero = BigRational::zero();
        for (i, c) in path.crossings.iter().enumerate() {
            if c.tile >= self.page.tiles {
                return Err(PageError::BadTile(c.tile));
            }
            for (_, p) in [&c.enter, &c.exit] {
                if *p <= zero || *p >= one {
                    return Err(PageError::PositionRange(pos_string(p)));
                }
            }
            if c.enter.0 == c.exit.0 {
                return Err(PageError::UTurnCrossing {
                    index: i,
                    tile: c.tile,
                });
            }
        }
        let n = path.crossings.len();
        let pairs = if path.closed { n } else { n.saturating_sub(1) };
        for i in 0..pairs {
            let cur = &path.crossings[i];
            let nxt = &path.crossings[(i + 1) % n];
            match self.page.across((cur.tile, cur.exit.0), &cur.exit.1) {
                Some((slot, q)) if slot == (nxt.tile, nxt.enter.0) && q == nxt.enter.1 => {}
                _ => {
                    return Err(PageError::IncompatibleCrossing {
                        index: i,
                        tile: cur.tile,
                    })
                }
            }
        }
        if !path.closed && n > 0 {
            let first = &path.crossings[0];
            let last = &path.crossings[n - 1];
            if !self.page.is_boundary_slot((first.tile, first.enter.0))
                || !self.page.is_boundary_slot((last.tile, last.exit.0))
            {
                return Err(PageError::EndpointNotOnBoundary);
            }
        }
        Ok(())
    }

    /// Edge points of a path in canonical coordinates (each transverse
    /// edge intersection once).
    fn edge_points(&self, path: &CombPath) -> Vec<((TileId, Side), Pos)> {
        let mut pts = Vec::new();
        for c in &path.crossings {
            pts.push(self.page.canonical((c.tile, c.enter.0), &c.enter.1));
        }
        if !path.closed {
            if let Some(last) = path.crossings.last() {
                pts.push(self.page.canonical((last.tile, last.exit.0), &last.exit.1));
            }
        }
        pts
    }

    /// System-wide general position: all edge points distinct.
    pub fn validate_general_position(&self) -> Result<(), PageError> {
        let mut seen: BTreeSet<((TileId, Side), (BigInt, BigInt))> = BTreeSet::new();
        for path in self.paths.values() {
            for (slot, p) in self.edge_points(path) {
                let key = (slot, (p.numer().clone(), p.denom().clone()));
                if !seen.insert(key) {
                    return Err(PageError::PositionClash(pos_string(&p)));
                }
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), PageError> {
        self.page.validate()?;
        for path in self.paths.values() {
            self.validate_path(path)?;
        }
        self.validate_general_position()?;
        for (curve, region) in &self.regions {
            twist::validate_region(self, curve, region)?;
        }
        Ok(())
    }

    pub fn register(&mut self, id: &str, path: CombPath) -> Result<(), PageError> {
        self.validate_path(&path)?;
        self.paths.insert(id.to_string(), path);
        self.validate_general_position()
    }

    /// All transverse crossings of two registered paths, ordered along the
    /// first, with orientation signs.
    pub fn intersections(&self, p_id: &str, q_id: &str) -> Result<Vec<PathCrossing>, PageError> {
        let p = self.path(p_id)?;
        let q = self.path(q_id)?;
        self.intersections_of(p, q, p_id == q_id)
    }

    pub fn intersections_of(
        &self,
        p: &CombPath,
        q: &CombPath,
        same: bool,
    ) -> Result<Vec<PathCrossing>, PageError> {
        let mut out = Vec::new();
        for (i, cp) in p.crossings.iter().enumerate() {
            for (j, cq) in q.crossings.iter().enumerate() {
                if cp.tile != cq.tile || (same && i >= j) {
                    continue;
                }
                let (a1, a2) = cp.chord();
                let (b1, b2) = cq.chord();
                let o1 = orient(&a1, &a2, &b1);
                let o2 = orient(&a1, &a2, &b2);
                let o3 = orient(&b1, &b2, &a1);
                let o4 = orient(&b1, &b2, &a2);
                if o1 == 0 || o2 == 0 || o3 == 0 || o4 == 0 {
                    return Err(PageError::SharedEdgePosition);
                }
                if o1 != o2 && o3 != o4 {
                    // intersection parameter along p's chord
                    let da = (&a2.0 - &a1.0, &a2.1 - &a1.1);
                    let db = (&b2.0 - &b1.0, &b2.1 - &b1.1);
                    let denom = cross(&da.0, &da.1, &db.0, &db.1);
                    let t = cross(&(&b1.0 - &a1.0), &(&b1.1 - &a1.1), &db.0, &db.1) / &denom;
                    let sign = if denom.is_positive() { 1 } else { -1 };
                    out.push(PathCrossing {
                        on_p: i,
                        on_q: j,
                        sign,
                        along_p: t,
                    });
                }
            }
        }
        out.sort_by(|x, y| (x.on_p, &x.along_p).cmp(&(y.on_p, &y.along_p)));
        Ok(out)
    }

    /// Signed sum of crossings of two registered paths.
    pub fn algebraic_intersection(&self, p: &str, q: &str) -> Result<i64, PageError> {
        Ok(self
            .intersections(p, q)?
            .iter()
            .map(|c| c.sign as i64)
            .sum())
    }

    pub fn is_embedded(&self, id: &str) -> Result<bool, PageError> {
        Ok(self.intersections(id, id)?.is_empty())
    }

    /// Fresh position adjacent to `p` on edge `slot`, strictly on the
    /// given param side (+1 above, -1 below), with no registered point in
    /// between. `extra` holds positions allocated since the last
    /// registration.
    fn adjacent_position(
        &self,
        slot: (TileId, Side),
        p: &Pos,
        dir: i8,
        extra: &BTreeSet<((TileId, Side), (BigInt, BigInt))>,
    ) -> Pos {
        let (cslot, cp) = self.page.canonical(slot, p);
        // direction in canonical coordinates flips with the gluing
        let flipped = match self.page.slot_status(slot) {
            Some(SlotStatus::Glued { partner, reversed }) if partner < slot => reversed,
            _ => false,
        };
        let cdir = if flipped { -dir } else { dir };
        let mut lo = BigRational::zero();
        let mut hi = BigRational::one();
        let mut consider = |q: &Pos| {
            if q < &cp && *q > lo {
                lo = q.clone();
            }
            if q > &cp && *q < hi {
                hi = q.clone();
            }
        };
        for path in self.paths.values() {
            for (s, q) in self.edge_points(path) {
                if s == cslot {
                    consider(&q);
                }
            }
        }
        for (s, (n, d)) in extra {
            if *s == cslot {
                consider(&BigRational::new(n.clone(), d.clone()));
            }
        }
        let half = rat(1, 2);
        let cand = if cdir > 0 {
            (&cp + &hi) * &half
        } else {
            (&cp + &lo) * &half
        };
        // back to local coordinates
        if flipped {
            // canonical = 1 - local in the flipped case only when slot is
            // the non-canonical end; cand is canonical, convert back
            BigRational::one() - cand
        } else {
            cand
        }
    }

    /// Parallel copy of an open embedded arc, offset to one side, crossing
    /// the arc exactly once near its first endpoint. Returns the pushoff;
    /// the single crossing sits in the first tile of the arc.
    pub fn pushoff(&self, arc_id: &str, pushoff_id: &str) -> Result<CurveSystem, PageError> {
        let arc = self.path(arc_id)?.clone();
        if arc.closed || arc.is_empty() || !self.is_embedded(arc_id)? {
            return Err(PageError::BadArc(arc_id.to_string()));
        }
        let mut extra: BTreeSet<((TileId, Side), (BigInt, BigInt))> = BTreeSet::new();
        let mut alloc = |sys: &CurveSystem, slot: (TileId, Side), p: &Pos, dir: i8| -> Pos {
            let q = sys.adjacent_position(slot, p, dir, &extra);
            let (cslot, cq) = sys.page.canonical(slot, &q);
            extra.insert((cslot, (cq.numer().clone(), cq.denom().clone())));
            q
        };

        // offset side: to the right of the traversal at each edge point.
        // Right of the chord at its entry point means the side whose edge
        // parameter direction makes the orientation negative.
        let side_dir = |c: &Crossing, at_enter: bool| -> i8 {
            let (a, b) = c.chord();
            let (side, p) = if at_enter { &c.enter } else { &c.exit };
            // tangent probe: does +param move left or right of the chord?
            let probe = point_of(*side, &(p + rat(1, 1_000_000)));
            let o = orient(&a, &b, &probe);
            debug_assert!(o != 0);
            -o
        };

        let n = arc.crossings.len();
        let mut new_crossings = Vec::with_capacity(n);
        // enter positions: first one goes to the LEFT so the copies cross
        // once near the first endpoint; all others to the right.
        let mut enter_pos: Vec<Pos> = Vec::with_capacity(n);
        for (i, c) in arc.crossings.iter().enumerate() {
            if i == 0 {
                let d = side_dir(c, true);
                enter_pos.push(alloc(self, (c.tile, c.enter.0), &c.enter.1, -d));
            } else {
                // shared with previous exit through the gluing
                let prev = &arc.crossings[i - 1];
                let prev_exit_new = new_crossings
                    .last()
                    .map(|cr: &Crossing| cr.exit.1.clone())
                    .unwrap();
                let (slot, q) = self
                    .page
                    .across((prev.tile, prev.exit.0), &prev_exit_new)
                    .expect("interior edge");
                debug_assert_eq!(slot, (c.tile, c.enter.0));
                enter_pos.push(q);
            }
            let c = &arc.crossings[i];
            let exit_new = {
                let d = side_dir(c, false);
                alloc(self, (c.tile, c.exit.0), &c.exit.1, d)
            };
            new_crossings.push(Crossing {
                tile: c.tile,
                enter: (c.enter.0, enter_pos[i].clone()),
                exit: (c.exit.0, exit_new),
            });
        }
        let pushoff = CombPath {
            closed: false,
            crossings: new_crossings,
        };
        let mut out = self.clone();
        out.register(pushoff_id, pushoff)?;
        out.marks
            .insert(pushoff_id.to_string(), arc_id.to_string());
        // contract: exactly one transverse crossing with the base arc
        let hits = out.intersections(arc_id, pushoff_id)?;
        if hits.len() != 1 {
            return Err(PageError::BadArc(format!(
                "pushoff of {arc_id} crosses it {} times",
                hits.len()
            )));
        }
        Ok(out)
    }
}

// -------- serialization --------

#[derive(Serialize, Deserialize)]
pub struct CurveSystemDoc {
    pub schema: String,
    pub tiles: usize,
    pub gluings: Vec<((TileId, usize), (TileId, usize), bool)>,
    pub boundary: BTreeMap<String, Vec<(TileId, usize)>>,
    pub paths: BTreeMap<String, PathDoc>,
    #[serde(default)]
    pub twist_regions: BTreeMap<String, Vec<TileId>>,
    #[serde(default)]
    pub marks: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
pub struct PathDoc {
    pub closed: bool,
    pub crossings: Vec<(TileId, (usize, String), (usize, String))>,
}

impl CurveSystem {
    pub fn to_doc(&self) -> CurveSystemDoc {
        CurveSystemDoc {
            schema: crate::SCHEMA.to_string(),
            tiles: self.page.tiles,
            gluings: self
                .page
                .gluings
                .iter()
                .map(|g| {
                    (
                        (g.a.0, g.a.1.index()),
                        (g.b.0, g.b.1.index()),
                        g.reversed,
                    )
                })
                .collect(),
            boundary: self
                .page
                .boundary
                .iter()
                .map(|(k, v)| {
                    (
                        k.clone(),
                        v.iter().map(|(t, s)| (*t, s.index())).collect(),
                    )
                })
                .collect(),
            paths: self
                .paths
                .iter()
                .map(|(k, p)| {
                    (
                        k.clone(),
                        PathDoc {
                            closed: p.closed,
                            crossings: p
                                .crossings
                                .iter()
                                .map(|c| {
                                    (
                                        c.tile,
                                        (c.enter.0.index(), pos_string(&c.enter.1)),
                                        (c.exit.0.index(), pos_string(&c.exit.1)),
                                    )
                                })
                                .collect(),
                        },
                    )
                })
                .collect(),
            twist_regions: self
                .regions
                .iter()
                .map(|(k, r)| (k.clone(), r.tiles.clone()))
                .collect(),
            marks: self.marks.clone(),
        }
    }

    pub fn from_doc(doc: CurveSystemDoc) -> Result<Self, PageError> {
        let page = PageComplex {
            tiles: doc.tiles,
            gluings: doc
                .gluings
                .into_iter()
                .map(|(a, b, reversed)| Gluing {
                    a: (a.0, Side::from_index(a.1)),
                    b: (b.0, Side::from_index(b.1)),
                    reversed,
                })
                .collect(),
            boundary: doc
                .boundary
                .into_iter()
                .map(|(k, v)| {
                    (
                        k,
                        v.into_iter()
                            .map(|(t, s)| (t, Side::from_index(s)))
                            .collect(),
                    )
                })
                .collect(),
        };
        let mut paths = BTreeMap::new();
        for (k, p) in doc.paths {
            let crossings = p
                .crossings
                .into_iter()
                .map(|(tile, enter, exit)| {
                    let ep = parse_pos(&enter.1)
                        .ok_or_else(|| PageError::PositionRange(enter.1.clone()))?;
                    let xp = parse_pos(&exit.1)
                        .ok_or_else(|| PageError::PositionRange(exit.1.clone()))?;
                    Ok(Crossing {
                        tile,
                        enter: (Side::from_index(enter.0), ep),
                        exit: (Side::from_index(exit.0), xp),
                    })
                })
                .collect::<Result<Vec<_>, PageError>>()?;
            paths.insert(
                k,
                CombPath {
                    closed: p.closed,
                    crossings,
                },
            );
        }
        let sys = CurveSystem {
            page,
            paths,
            regions: doc
                .twist_regions
                .into_iter()
                .map(|(k, tiles)| (k, TwistRegion { tiles }))
                .collect(),
            marks: doc.marks,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("curve system serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, PageError> {
        let doc: CurveSystemDoc = serde_json::from_str(s)
            .map_err(|e| PageError::PositionRange(format!("parse error: {e}")))?;
        CurveSystem::from_doc(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn annulus_with_arc(m: usize) -> CurveSystem {
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
        sys
    }

    pub fn core_curve(sys: &CurveSystem) -> CombPath {
        let m = sys.page.tiles;
        CombPath {
            closed: true,
            crossings: (0..m)
                .map(|i| Crossing {
                    tile: i,
                    enter: (Side::W, rat(1, 2)),
                    exit: (Side::E, rat(1, 2)),
                })
                .collect(),
        }
    }

    #[test]
    fn annulus_page_validates() {
        for m in 1..4 {
            let page = PageComplex::annulus(m);
            page.validate().unwrap();
            assert_eq!(page.genus_boundary(), (0, 2));
        }
    }

    #[test]
    fn torus_genus() {
        // one tile, opposite sides glued
        let page = PageComplex {
            tiles: 1,
            gluings: vec![
                Gluing {
                    a: (0, Side::E),
                    b: (0, Side::W),
                    reversed: false,
                },
                Gluing {
                    a: (0, Side::N),
                    b: (0, Side::S),
                    reversed: false,
                },
            ],
            boundary: BTreeMap::new(),
        };
        page.validate().unwrap();
        assert_eq!(page.genus_boundary(), (1, 0));
    }

    #[test]
    fn orientation_check_rejects_mobius() {
        let page = PageComplex {
            tiles: 1,
            gluings: vec![Gluing {
                a: (0, Side::E),
                b: (0, Side::W),
                reversed: true,
            }],
            boundary: BTreeMap::from([(
                "bd".into(),
                vec![(0, Side::N), (0, Side::S)],
            )]),
        };
        assert!(matches!(
            page.validate(),
            Err(PageError::NonOrientable(..))
        ));
    }

    #[test]
    fn path_compatibility_enforced() {
        let sys = CurveSystem::new(PageComplex::annulus(2));
        // exit E of tile 0 at 1/3 must enter W of tile 1 at 1/3
        let bad = CombPath {
            closed: false,
            crossings: vec![
                Crossing {
                    tile: 0,
                    enter: (Side::N, rat(1, 2)),
                    exit: (Side::E, rat(1, 3)),
                },
                Crossing {
                    tile: 1,
                    enter: (Side::W, rat(2, 3)),
                    exit: (Side::S, rat(1, 2)),
                },
            ],
        };
        assert!(sys.validate_path(&bad).is_err());
        let good = CombPath {
            closed: false,
            crossings: vec![
                Crossing {
                    tile: 0,
                    enter: (Side::N, rat(1, 2)),
                    exit: (Side::E, rat(1, 3)),
                },
                Crossing {
                    tile: 1,
                    enter: (Side::W, rat(1, 3)),
                    exit: (Side::S, rat(1, 2)),
                },
            ],
        };
        sys.validate_path(&good).unwrap();
    }

    #[test]
    fn pushoff_crosses_once_and_is_disjoint_elsewhere() {
        for m in 1..4 {
            let sys = annulus_with_arc(m);
            let sys = sys.pushoff("a0", "b0").unwrap();
            let hits = sys.intersections("a0", "b0").unwrap();
            assert_eq!(hits.len(), 1, "m = {m}");
            assert_eq!(hits[0].on_p, 0);
            sys.validate().unwrap();
        }
    }

    #[test]
    fn pushoffs_of_disjoint_arcs_are_disjoint() {
        let mut sys = annulus_with_arc(2);
        sys.register(
            "a1",
            CombPath {
                closed: false,
                crossings: vec![Crossing {
                    tile: 1,
                    enter: (Side::N, rat(1, 2)),
                    exit: (Side::S, rat(1, 2)),
                }],
            },
        )
        .unwrap();
        let sys = sys.pushoff("a0", "b0").unwrap();
        let sys = sys.pushoff("a1", "b1").unwrap();
        assert!(sys.intersections("b0", "b1").unwrap().is_empty());
        assert!(sys.intersections("a0", "b1").unwrap().is_empty());
        assert!(sys.intersections("a1", "b0").unwrap().is_empty());
        assert_eq!(sys.marks.len(), 2);
    }

    #[test]
    fn intersection_signs_antisymmetric() {
        let sys = annulus_with_arc(1);
        let sys = sys.pushoff("a0", "b0").unwrap();
        let ab: i64 = sys.algebraic_intersection("a0", "b0").unwrap();
        let ba: i64 = sys.algebraic_intersection("b0", "a0").unwrap();
        assert_eq!(ab, -ba);
        assert_eq!(ab.abs(), 1);
    }

    #[test]
    fn core_is_embedded() {
        let mut sys = annulus_with_arc(3);
        sys.register("c", core_curve(&sys)).unwrap();
        assert!(sys.is_embedded("c").unwrap());
        assert_eq!(sys.algebraic_intersection("c", "a0").unwrap().abs(), 1);
    }

    #[test]
    fn json_roundtrip() {
        let mut sys = annulus_with_arc(2);
        sys.register("c", core_curve(&sys)).unwrap();
        sys.regions
            .insert("c".into(), TwistRegion { tiles: vec![0, 1] });
        let back = CurveSystem::from_json(&sys.to_json()).unwrap();
        assert_eq!(sys, back);
    }
}
