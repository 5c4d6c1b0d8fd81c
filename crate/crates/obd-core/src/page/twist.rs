//! Combinatorial Dehn twists. A twist curve must be closed, embedded, and
//! carry a declared annulus neighbourhood: the cyclic list of tiles it
//! passes through. Twisting reroutes every chord that crosses the curve
//! once around the annulus, on the side it came from, in the direction
//! determined by the twist sign and the crossing orientation; all inserted
//! positions are allocated in the corridor between the curve and its
//! nearest registered neighbours, so the output is a minimal-position
//! representative whenever the input was.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use super::{
    orient, point_of, CombPath, Crossing, CurveSystem, PageError, Pos, Side, TwistRegion,
};
use crate::openbook::{Sign, TwistWord};

/// Check a declared twist region: the curve is closed, embedded, passes
/// once through every listed tile in cyclic order, and the listed tiles
/// are pairwise distinct.
pub fn validate_region(
    sys: &CurveSystem,
    curve: &str,
    region: &TwistRegion,
) -> Result<(), PageError> {
    let c = sys.path(curve)?;
    let bad = |reason: &str| PageError::BadRegion {
        curve: curve.to_string(),
        reason: reason.to_string(),
    };
    if !c.closed {
        return Err(bad("twist curve must be closed"));
    }
    if !sys.is_embedded(curve)? {
        return Err(PageError::NotEmbedded(curve.to_string()));
    }
    if region.tiles.is_empty() || region.tiles.len() != c.crossings.len() {
        return Err(bad("region must list exactly the tiles the curve crosses"));
    }
    let distinct: BTreeSet<_> = region.tiles.iter().collect();
    if distinct.len() != region.tiles.len() {
        return Err(bad("region tiles must be pairwise distinct"));
    }
    for (i, cr) in c.crossings.iter().enumerate() {
        if cr.tile != region.tiles[i] {
            return Err(bad("curve does not traverse the region tiles in order"));
        }
    }
    Ok(())
}

/// Which side of the directed chord `of` the point `(side, p)` lies on,
/// in the chord's tile: +1 left, -1 right. The point must be off the
/// chord's line, which general position guarantees.
fn side_of_chord(of: &Crossing, side: Side, p: &Pos) -> i8 {
    let (a, b) = of.chord();
    let pt = point_of(side, p);
    let o = orient(&a, &b, &pt);
    assert!(o != 0, "edge point on a twist chord: general position broken");
    o
}

struct Allocator {
    extra: BTreeSet<((usize, Side), (BigInt, BigInt))>,
}

impl Allocator {
    fn new() -> Self {
        Allocator {
            extra: BTreeSet::new(),
        }
    }

    /// Fresh point on the edge at `slot`, adjacent to `at` on the side of
    /// the chord `rel` given by `side` (+1 left / -1 right).
    fn next_to(
        &mut self,
        sys: &CurveSystem,
        slot: (usize, Side),
        at: &Pos,
        rel: &Crossing,
        side: i8,
    ) -> Pos {
        // +param direction relative to the chord at this edge point
        let eps = super::rat(1, 1 << 20);
        let plus = side_of_chord(rel, slot.1, &(at + &eps));
        // pick param direction whose side matches; eps probe is exact: the
        // chord meets the edge line only at `at`
        let dir = if plus == side { 1 } else { -1 };
        let q = sys.adjacent_position_pub(slot, at, dir, &self.extra);
        let (cslot, cq) = sys.page.canonical(slot, &q);
        self.extra
            .insert((cslot, (cq.numer().clone(), cq.denom().clone())));
        q
    }
}

impl CurveSystem {
    pub(super) fn adjacent_position_pub(
        &self,
        slot: (usize, Side),
        p: &Pos,
        dir: i8,
        extra: &BTreeSet<((usize, Side), (BigInt, BigInt))>,
    ) -> Pos {
        self.adjacent_position(slot, p, dir, extra)
    }
}

/// Whether two chords in one tile cross transversally.
fn chords_cross(a: &Crossing, b: &Crossing) -> bool {
    let (a1, a2) = a.chord();
    let (b1, b2) = b.chord();
    let o1 = orient(&a1, &a2, &b1);
    let o2 = orient(&a1, &a2, &b2);
    let o3 = orient(&b1, &b2, &a1);
    let o4 = orient(&b1, &b2, &a2);
    o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0 && o1 != o2 && o3 != o4
}

/// Apply one Dehn twist along `curve_id` (which must carry a declared
/// region) to the named target paths, leaving everything else fixed.
///
/// Corridor positions mirror the twist homeomorphism's spiral: on every
/// edge of the region cycle, the strands sort by how far around the
/// annulus their crossing of the curve lies — the farther travelled, the
/// closer to the curve. This keeps the images of disjoint strands
/// disjoint.
pub fn dehn_twist(
    sys: &CurveSystem,
    curve_id: &str,
    sign: Sign,
    targets: &[&str],
) -> Result<CurveSystem, PageError> {
    let region = sys
        .regions
        .get(curve_id)
        .ok_or_else(|| PageError::NoTwistRegion(curve_id.to_string()))?
        .clone();
    validate_region(sys, curve_id, &region)?;
    let c = sys.path(curve_id)?.clone();
    let m = region.tiles.len();

    // crossing events of all targets with c, located along the cycle
    struct Event {
        target: usize,
        crossing: usize,
        idx: usize,
        along: Pos, // idx + parameter along c's chord, in [0, m)
        side: i8,
        forwards: bool,
    }
    let mut events: Vec<Event> = Vec::new();
    for (ti, &target) in targets.iter().enumerate() {
        let path = sys.path(target)?;
        for (k, chord) in path.crossings.iter().enumerate() {
            let Some(idx) = region
                .tiles
                .iter()
                .position(|&t| t == chord.tile)
                .filter(|&i| chords_cross(chord, &c.crossings[i]))
            else {
                continue;
            };
            let c_here = &c.crossings[idx];
            let entry_side = side_of_chord(c_here, chord.enter.0, &chord.enter.1);
            let forwards = (entry_side > 0) == (sign == Sign::Positive);
            // parameter of the crossing along c's chord
            let (a1, a2) = c_here.chord();
            let (b1, b2) = chord.chord();
            let da = (&a2.0 - &a1.0, &a2.1 - &a1.1);
            let db = (&b2.0 - &b1.0, &b2.1 - &b1.1);
            let denom = &da.0 * &db.1 - &da.1 * &db.0;
            let t = (&(&b1.0 - &a1.0) * &db.1 - &(&b1.1 - &a1.1) * &db.0) / &denom;
            events.push(Event {
                target: ti,
                crossing: k,
                idx,
                along: Pos::from_integer(idx.into()) + t,
                side: entry_side,
                forwards,
            });
        }
    }

    // per-event corridor positions at every cycle gluing, allocated in
    // ascending travel order so deeper strands sit closer to c.
    // gluing j joins the exit of tile j to the entry of tile j+1 and sits
    // at cycle coordinate j+1.
    let mut alloc = Allocator::new();
    let mut corridor: BTreeMap<(usize, usize), Pos> = BTreeMap::new(); // (event, gluing) -> exit-slot param
    let m_pos = Pos::from_integer((m as i64).into());
    for j in 0..m {
        let coord = Pos::from_integer((j as i64 + 1).into());
        let mut users: Vec<(Pos, usize)> = events
            .iter()
            .enumerate()
            .map(|(e, ev)| {
                let diff = if ev.forwards {
                    &coord - &ev.along
                } else {
                    &ev.along - &coord
                };
                let progress = if diff > Pos::from_integer(0.into()) {
                    diff
                } else {
                    diff + &m_pos
                };
                (progress, e)
            })
            .collect();
        users.sort();
        let cj = &c.crossings[j];
        let slot = (cj.tile, cj.exit.0);
        for (_, e) in users {
            let q = alloc.next_to(sys, slot, &cj.exit.1, cj, events[e].side);
            corridor.insert((e, j), q);
        }
    }

    let mut out = sys.clone();
    for (ti, &target) in targets.iter().enumerate() {
        let path = sys.path(target)?.clone();
        let mut rewritten: Vec<Crossing> = Vec::new();
        for (k, chord) in path.crossings.iter().enumerate() {
            let Some(e) = events
                .iter()
                .position(|ev| ev.target == ti && ev.crossing == k)
            else {
                rewritten.push(chord.clone());
                continue;
            };
            let ev = &events[e];
            let idx = ev.idx;
            let forwards = ev.forwards;
            // gluings crossed, in travel order: forwards idx, idx+1, ...;
            // backwards idx-1, idx-2, ...
            let gluings: Vec<usize> = (0..m)
                .map(|s| {
                    if forwards {
                        (idx + s) % m
                    } else {
                        (idx + m - 1 - s) % m
                    }
                })
                .collect();
            // local parameter at the step's exit slot: forwards exits
            // through gluing j's a-side (tile j exit); backwards exits
            // through gluing j's b-side (tile j+1 entry), reached across
            // the gluing from the allocated point.
            let exit_point = |j: usize, out: &CurveSystem| -> ((usize, Side), Pos) {
                let cj = &c.crossings[j];
                let q = corridor[&(e, j)].clone();
                if forwards {
                    ((cj.tile, cj.exit.0), q)
                } else {
                    let (slot, p) = out
                        .page
                        .across((cj.tile, cj.exit.0), &q)
                        .expect("region gluing is interior");
                    (slot, p)
                }
            };
            // first partial chord: original entry to the first corridor point
            let (slot0, q0) = exit_point(gluings[0], &out);
            debug_assert_eq!(slot0.0, chord.tile);
            rewritten.push(Crossing {
                tile: chord.tile,
                enter: chord.enter.clone(),
                exit: (slot0.1, q0),
            });
            // full corridor chords
            for s in 1..m {
                let j = gluings[s];
                let prev = gluings[s - 1];
                // entry comes through the previous gluing
                let (enter_slot, enter_p) = {
                    let (slot, q) = exit_point(prev, &out);
                    out.page.across(slot, &q).expect("region gluing is interior")
                };
                let (exit_slot, exit_p) = exit_point(j, &out);
                debug_assert_eq!(enter_slot.0, exit_slot.0);
                rewritten.push(Crossing {
                    tile: enter_slot.0,
                    enter: (enter_slot.1, enter_p),
                    exit: (exit_slot.1, exit_p),
                });
            }
            // final chord: back in the original tile, crossing c
            let (last_slot, last_q) = exit_point(gluings[m - 1], &out);
            let (enter_slot, enter_p) = out
                .page
                .across(last_slot, &last_q)
                .expect("region gluing is interior");
            debug_assert_eq!(enter_slot.0, chord.tile);
            rewritten.push(Crossing {
                tile: chord.tile,
                enter: (enter_slot.1, enter_p),
                exit: chord.exit.clone(),
            });
        }
        let new_path = straighten(CombPath {
            closed: path.closed,
            crossings: rewritten,
        })?;
        out.paths.insert(target.to_string(), new_path);
    }
    // post-hoc: everything still validates in general position
    for &target in targets {
        out.validate_path(&out.paths[target])?;
    }
    out.validate_general_position()?;
    Ok(out)
}

/// Remove u-turn crossings (same entry and exit side). A u-turn dips
/// across one gluing and comes straight back, so it is isotopic to the
/// single chord joining its neighbours' free ends in their common tile.
fn straighten(mut path: CombPath) -> Result<CombPath, PageError> {
    loop {
        let n = path.crossings.len();
        let Some(i) = path
            .crossings
            .iter()
            .position(|c| c.enter.0 == c.exit.0)
        else {
            return Ok(path);
        };
        if n < 3 {
            return Err(PageError::DegenerateUTurn);
        }
        let (prev, next) = if path.closed {
            ((i + n - 1) % n, (i + 1) % n)
        } else {
            // rewrites keep original endpoints, so a u-turn is never the
            // first or last crossing of an open path
            if i == 0 || i + 1 == n {
                return Err(PageError::DegenerateUTurn);
            }
            (i - 1, i + 1)
        };
        if prev == i || next == i || prev == next {
            return Err(PageError::DegenerateUTurn);
        }
        let merged = Crossing {
            tile: path.crossings[prev].tile,
            enter: path.crossings[prev].enter.clone(),
            exit: path.crossings[next].exit.clone(),
        };
        debug_assert_eq!(path.crossings[prev].tile, path.crossings[next].tile);
        let mut crossings = Vec::with_capacity(n - 2);
        for (k, c) in path.crossings.iter().enumerate() {
            if k == i || k == next {
                continue;
            }
            if k == prev {
                crossings.push(merged.clone());
            } else {
                crossings.push(c.clone());
            }
        }
        path.crossings = crossings;
    }
}

/// Apply a twist word right to left: the last letter acts first.
pub fn apply_monodromy(
    sys: &CurveSystem,
    word: &TwistWord,
    targets: &[&str],
) -> Result<CurveSystem, PageError> {
    let mut out = sys.clone();
    for (curve, sign) in word.flattened().into_iter().rev() {
        if !out.paths.contains_key(&curve) {
            return Err(PageError::UnknownPath(curve.clone()));
        }
        out = dehn_twist(&out, &curve, sign, targets)?;
    }
    Ok(out)
}

/// Signed crossing word of a registered path against the other registered
/// paths, freely reduced (adjacent mutually inverse letters cancel,
/// cyclically for closed paths). Twist-then-untwist detours reduce away,
/// so this is the comparison used by inverse-pair laws.
pub fn reduced_crossing_word(
    sys: &CurveSystem,
    path_id: &str,
) -> Result<Vec<(String, i8)>, PageError> {
    let p = sys.path(path_id)?;
    let mut letters: Vec<(usize, Pos, String, i8)> = Vec::new();
    for (q_id, _) in sys.paths.iter() {
        if q_id == path_id {
            continue;
        }
        for hit in sys.intersections(path_id, q_id)? {
            letters.push((hit.on_p, hit.along_p, q_id.clone(), hit.sign));
        }
    }
    letters.sort_by(|x, y| (x.0, &x.1).cmp(&(y.0, &y.1)));
    let mut word: Vec<(String, i8)> = letters.into_iter().map(|(_, _, c, s)| (c, s)).collect();
    // free reduction
    loop {
        let mut reduced = false;
        let mut i = 0;
        while i + 1 < word.len() {
            if word[i].0 == word[i + 1].0 && word[i].1 == -word[i + 1].1 {
                word.drain(i..=i + 1);
                reduced = true;
            } else {
                i += 1;
            }
        }
        if p.closed && word.len() >= 2 {
            let n = word.len();
            if word[0].0 == word[n - 1].0 && word[0].1 == -word[n - 1].1 {
                word.remove(n - 1);
                word.remove(0);
                reduced = true;
            }
        }
        if !reduced {
            break;
        }
    }
    Ok(word)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::page::{rat, PageComplex};

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
        sys.register("c", core).unwrap();
        sys.regions.insert(
            "c".into(),
            TwistRegion {
                tiles: (0..m).collect(),
            },
        );
        sys.validate().unwrap();
        sys
    }

    #[test]
    fn twist_of_disjoint_path_is_identity() {
        // a corner-hugging path above the core never meets its chord
        let mut sys = annulus_sys(2);
        sys.register(
            "d",
            CombPath {
                closed: false,
                crossings: vec![
                    Crossing {
                        tile: 0,
                        enter: (Side::N, rat(9, 10)),
                        exit: (Side::E, rat(9, 10)),
                    },
                    Crossing {
                        tile: 1,
                        enter: (Side::W, rat(9, 10)),
                        exit: (Side::N, rat(1, 10)),
                    },
                ],
            },
        )
        .unwrap();
        let before = sys.paths["d"].clone();
        let out = dehn_twist(&sys, "c", Sign::Positive, &["d"]).unwrap();
        assert_eq!(out.paths["d"], before);
    }

    #[test]
    fn picard_lefschetz_on_annulus() {
        for m in 1..4 {
            for sign in [Sign::Positive, Sign::Negative] {
                let sys = annulus_sys(m);
                let before = sys.algebraic_intersection("a0", "c").unwrap();
                assert_eq!(before.abs(), 1);
                let out = dehn_twist(&sys, "c", sign, &["a0"]).unwrap();
                // <tau_c(a), y> = <a, y> + sign <a, c><c, y> tested against
                // y = c itself: <tau a, c> = <a, c> (since <c,c> = 0)
                let after = out.algebraic_intersection("a0", "c").unwrap();
                assert_eq!(after, before, "m = {m}, sign = {sign:?}");
            }
        }
    }

    #[test]
    fn twist_preserves_endpoints_and_closure() {
        let sys = annulus_sys(2);
        let before = sys.paths["a0"].clone();
        let out = dehn_twist(&sys, "c", Sign::Positive, &["a0"]).unwrap();
        let after = &out.paths["a0"];
        assert!(!after.closed);
        assert_eq!(after.crossings[0].enter, before.crossings[0].enter);
        assert_eq!(
            after.crossings.last().unwrap().exit,
            before.crossings.last().unwrap().exit
        );
        // one crossing of c spawns m + 1 chords from 1
        assert_eq!(after.crossings.len(), before.crossings.len() + 2);
    }

    #[test]
    fn twist_untwist_reduces_to_original() {
        for m in 1..3 {
            let sys = annulus_sys(m);
            let w0 = reduced_crossing_word(&sys, "a0").unwrap();
            let t = dehn_twist(&sys, "c", Sign::Positive, &["a0"]).unwrap();
            let tt = dehn_twist(&t, "c", Sign::Negative, &["a0"]).unwrap();
            let w1 = reduced_crossing_word(&tt, "a0").unwrap();
            assert_eq!(w0, w1, "m = {m}");
            // endpoints intact
            assert_eq!(
                sys.paths["a0"].crossings[0].enter,
                tt.paths["a0"].crossings[0].enter
            );
        }
    }

    #[test]
    fn iterated_twist_crossing_counts() {
        // |a cap tau^n(a')| where a' is a parallel copy: the twisted copy
        // winds n times, so the geometric count grows linearly
        let sys = annulus_sys(1);
        let sys = sys.pushoff("a0", "b0").unwrap();
        let mut cur = sys.clone();
        for n in 1..5i64 {
            cur = dehn_twist(&cur, "c", Sign::Positive, &["b0"]).unwrap();
            let hits = cur.intersections("a0", "b0").unwrap();
            assert_eq!(hits.len() as i64, n - 1, "positive twists, n = {n}");
            let alg = cur.algebraic_intersection("a0", "b0").unwrap();
            assert_eq!(alg.abs(), n - 1);
        }
        let mut cur = sys.clone();
        for n in 1..5i64 {
            cur = dehn_twist(&cur, "c", Sign::Negative, &["b0"]).unwrap();
            let hits = cur.intersections("a0", "b0").unwrap();
            assert_eq!(hits.len() as i64, n + 1, "negative twists, n = {n}");
            let alg = cur.algebraic_intersection("a0", "b0").unwrap();
            assert_eq!(alg.abs(), n + 1);
        }
    }

    #[test]
    fn apply_monodromy_empty_word_is_identity() {
        let sys = annulus_sys(2);
        let out = apply_monodromy(&sys, &TwistWord::identity(), &["a0"]).unwrap();
        assert_eq!(out.paths["a0"], sys.paths["a0"]);
    }

    #[test]
    fn apply_monodromy_unregistered_curve() {
        let sys = annulus_sys(1);
        let word = TwistWord::letter("ghost", Sign::Positive, 1);
        assert!(matches!(
            apply_monodromy(&sys, &word, &["a0"]),
            Err(PageError::UnknownPath(_))
        ));
    }
}
