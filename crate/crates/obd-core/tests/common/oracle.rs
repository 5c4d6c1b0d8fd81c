//! Brute-force differential oracle: enumerate every 0/1 combination of
//! non-basepointed regions, test membership in pi_2(x, y) through the
//! boundary 1-chain condition, and select index-one domains by the
//! Lipshitz count (Euler measure plus average corner multiplicities of
//! source and target). Shares no enumeration code with the library: the
//! library reconstructs domains from corner routes; this oracle verifies
//! subsets.

use std::collections::BTreeMap;

use obd_core::heegaard::{HeegaardDiagram, Quadrant};

/// An arrow as point selections plus region support.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OracleArrow {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    pub support: Vec<usize>,
}

/// All bijective point selections, by straightforward recursion.
pub fn all_generators(d: &HeegaardDiagram) -> Vec<Vec<usize>> {
    let n = d.alphas.len();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    let mut used = vec![false; n];
    fn rec(
        d: &HeegaardDiagram,
        i: usize,
        chosen: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if i == d.alphas.len() {
            out.push(chosen.clone());
            return;
        }
        for &p in &d.alphas[i] {
            let b = d.points[p].beta;
            if used[b] {
                continue;
            }
            used[b] = true;
            chosen.push(p);
            rec(d, i + 1, chosen, used, out);
            chosen.pop();
            used[b] = false;
        }
    }
    rec(d, 0, &mut chosen, &mut used, &mut out);
    out
}

/// Moved (source, target) pairs of one curve family, or None when the
/// support's boundary along that family is not a disjoint union of arcs
/// and full circles.
fn curve_moves(
    d: &HeegaardDiagram,
    own: &BTreeMap<(usize, Quadrant), usize>,
    m: &[i64],
    alpha: bool,
) -> Option<Vec<(usize, usize)>> {
    let cycles = if alpha { &d.alphas } else { &d.betas };
    let mut moves = Vec::new();
    for cyc in cycles {
        let n = cyc.len();
        let jump = |k: usize| -> i64 {
            let p = cyc[k];
            let pos = d.points[p].sign > 0;
            let (l, r) = if alpha {
                if pos {
                    (Quadrant::NE, Quadrant::SE)
                } else {
                    (Quadrant::SE, Quadrant::NE)
                }
            } else if pos {
                (Quadrant::NW, Quadrant::NE)
            } else {
                (Quadrant::NE, Quadrant::NW)
            };
            m[own[&(p, l)]] - m[own[&(p, r)]]
        };
        let mut source = None;
        let mut target = None;
        for k in 0..n {
            let p = cyc[k];
            let c = jump((k + n - 1) % n) - jump(k);
            match c {
                0 => {}
                -1 => {
                    if source.replace(p).is_some() {
                        return None;
                    }
                }
                1 => {
                    if target.replace(p).is_some() {
                        return None;
                    }
                }
                _ => return None,
            }
        }
        match (source, target) {
            (None, None) => {}
            (Some(s), Some(t)) => moves.push((s, t)),
            _ => return None,
        }
    }
    Some(moves)
}

/// Every index-one empty positive domain with multiplicities at most one,
/// as arrows between generators.
pub fn oracle_arrows(d: &HeegaardDiagram) -> Vec<OracleArrow> {
    let nr = d.regions.len();
    let free: Vec<usize> = (0..nr)
        .filter(|&r| !d.regions[r].basepoint)
        .collect();
    assert!(
        free.len() <= 16,
        "oracle is exponential; diagram has {} free regions",
        free.len()
    );
    let mut own = BTreeMap::new();
    for (r, region) in d.regions.iter().enumerate() {
        for c in region.circuits.iter().flatten() {
            own.insert((c.point, c.quadrant), r);
        }
    }
    let gens = all_generators(d);
    let mut out = Vec::new();
    for mask in 1u64..(1 << free.len()) {
        let mut m = vec![0i64; nr];
        for (k, &r) in free.iter().enumerate() {
            if mask >> k & 1 == 1 {
                m[r] = 1;
            }
        }
        let Some(alpha_moves) = curve_moves(d, &own, &m, true) else {
            continue;
        };
        let Some(beta_moves) = curve_moves(d, &own, &m, false) else {
            continue;
        };
        let mut a_ends: Vec<usize> = alpha_moves
            .iter()
            .flat_map(|&(s, t)| [s, t])
            .collect();
        let mut b_ends: Vec<usize> = beta_moves
            .iter()
            .flat_map(|&(s, t)| [s, t])
            .collect();
        a_ends.sort_unstable();
        b_ends.sort_unstable();
        if a_ends != b_ends {
            continue;
        }
        // the boundary circuit keeps the domain on its left, so it runs
        // source -> target along alpha and target -> source along beta
        let mut a_src: Vec<usize> = alpha_moves.iter().map(|&(s, _)| s).collect();
        let mut b_tgt: Vec<usize> = beta_moves.iter().map(|&(_, t)| t).collect();
        a_src.sort_unstable();
        b_tgt.sort_unstable();
        if a_src != b_tgt {
            continue;
        }
        let support: Vec<usize> = free.iter().copied().filter(|&r| m[r] == 1).collect();
        for x in &gens {
            if !alpha_moves.iter().all(|&(s, _)| x[d.points[s].alpha] == s) {
                continue;
            }
            // empty interior: no source point fully enclosed
            if x.iter().any(|&p| {
                Quadrant::all()
                    .iter()
                    .all(|&q| m[own[&(p, q)]] == 1)
            }) {
                continue;
            }
            let mut y = x.clone();
            for &(_, t) in &alpha_moves {
                y[d.points[t].alpha] = t;
            }
            if y == *x {
                continue;
            }
            // Lipshitz index in quarter units: 4e(D) + 4n_x + 4n_y
            let mut mu4 = 0i64;
            for &r in &support {
                mu4 += 4 * d.regions[r].euler - d.regions[r].corner_count() as i64;
            }
            for p in x.iter().chain(y.iter()) {
                mu4 += Quadrant::all()
                    .iter()
                    .map(|&q| m[own[&(*p, q)]])
                    .sum::<i64>();
            }
            if mu4 != 4 {
                continue;
            }
            out.push(OracleArrow {
                from: x.clone(),
                to: y,
                support: support.clone(),
            });
        }
    }
    out.sort();
    out
}
