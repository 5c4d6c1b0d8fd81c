//! Standard page realizations: concrete curve systems for the open books
//! the examples use. The annulus model realizes any open book whose page
//! is an annulus; every essential curve there is parallel to the core, so
//! declarations map onto stacked parallel cores.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::openbook::{CurveDecl, OpenBook, OpenBookError, TwistWord};
use crate::page::{CombPath, Crossing, CurveSystem, PageComplex, PageError, Side, TwistRegion};

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("open book error: {0}")]
    OpenBook(#[from] OpenBookError),
    #[error("page error: {0}")]
    Page(#[from] PageError),
    #[error("open book page is not an annulus (genus {0}, {1} boundary components)")]
    NotAnnulus(u32, usize),
    #[error("curve {0} cannot be realized on the annulus")]
    Unrealizable(String),
}

fn height(k: usize, total: usize) -> BigRational {
    // heights strictly between 1/4 and 3/4, distinct per curve
    BigRational::new(BigInt::from(2 * k as i64 + 3), BigInt::from(4 * (total + 1) as i64))
        + BigRational::new(BigInt::from(1), BigInt::from(4))
}

/// Realize an annulus open book as a one-tile curve system: the spanning
/// arc `a0` plus one core-parallel closed curve (with twist region) per
/// monodromy curve. Returns the system and the realized word.
pub fn annulus_system(ob: &OpenBook) -> Result<(CurveSystem, TwistWord), ModelError> {
    ob.validate()?;
    if ob.page.genus != 0 || ob.page.boundary.len() != 2 {
        return Err(ModelError::NotAnnulus(
            ob.page.genus,
            ob.page.boundary.len(),
        ));
    }
    let mut sys = CurveSystem::new(PageComplex::annulus(1));
    sys.register(
        "a0",
        CombPath {
            closed: false,
            crossings: vec![Crossing {
                tile: 0,
                enter: (Side::N, BigRational::new(1.into(), 2.into())),
                exit: (Side::S, BigRational::new(1.into(), 2.into())),
            }],
        },
    )?;
    // curves appearing in the monodromy, in declaration order
    let used: Vec<String> = ob
        .curves
        .keys()
        .filter(|id| ob.monodromy.0.iter().any(|l| &l.curve == *id))
        .cloned()
        .collect();
    for (k, id) in used.iter().enumerate() {
        match &ob.curves[id] {
            CurveDecl::BoundaryParallel { .. }
            | CurveDecl::NavelNeck { .. }
            | CurveDecl::Interior { .. }
            | CurveDecl::BandCore { .. } => {
                let h = height(k, used.len());
                sys.register(
                    id,
                    CombPath {
                        closed: true,
                        crossings: vec![Crossing {
                            tile: 0,
                            enter: (Side::W, h.clone()),
                            exit: (Side::E, h),
                        }],
                    },
                )?;
                sys.regions.insert(id.clone(), TwistRegion { tiles: vec![0] });
            }
        }
    }
    sys.validate()?;
    Ok((sys, ob.monodromy.clone()))
}

/// The binding-sum page of two trivial annuli summed along both boundary
/// pairs, realized as a concrete curve system: a genus-1 surface with
/// four boundary circles built from two 2x4 annulus blocks joined by two
/// 2-tile tubes (the connect-sum necks). Registers the twelve navel
/// curves of the sum under the ids `binding_sum` produces, with their
/// twist regions, plus a 5-arc basis `a0..a4` cutting the page to a disk.
///
/// Tile ids: A1 low row 0..3, A1 high row 4..7 (the annulus with y from 1 to 2),
/// A2 low 8..11, A2 high 12..15 (y from 0 to 1), tube1 {16,17} through the
/// column-1 holes, tube2 {18,19} through the column-3 holes.
pub fn t3_system() -> CurveSystem {
    use crate::page::{Gluing, Side};
    let l = |c: usize| c; // A1 low
    let h = |c: usize| 4 + c; // A1 high
    let m = |c: usize| 8 + c; // A2 low
    let k = |c: usize| 12 + c; // A2 high

    let mut gluings = Vec::new();
    for row in [0usize, 4, 8, 12] {
        for c in 0..4 {
            gluings.push(Gluing {
                a: (row + c, Side::E),
                b: (row + (c + 1) % 4, Side::W),
                reversed: false,
            });
        }
    }
    // interior verticals at the block midlines; columns 1 and 3 stay open
    for c in [0usize, 2] {
        gluings.push(Gluing {
            a: (l(c), Side::N),
            b: (h(c), Side::S),
            reversed: false,
        });
        gluings.push(Gluing {
            a: (m(c), Side::N),
            b: (k(c), Side::S),
            reversed: false,
        });
    }
    // tubes: 2-tile annuli whose boundary circles fill the holes
    for (t0, t1, col) in [(16usize, 17usize, 1usize), (18, 19, 3)] {
        gluings.push(Gluing {
            a: (t0, Side::E),
            b: (t1, Side::W),
            reversed: false,
        });
        gluings.push(Gluing {
            a: (t1, Side::E),
            b: (t0, Side::W),
            reversed: false,
        });
        gluings.push(Gluing {
            a: (t0, Side::N),
            b: (h(col), Side::S),
            reversed: false,
        });
        gluings.push(Gluing {
            a: (t1, Side::N),
            b: (l(col), Side::N),
            reversed: true,
        });
        gluings.push(Gluing {
            a: (t0, Side::S),
            b: (m(col), Side::N),
            reversed: false,
        });
        gluings.push(Gluing {
            a: (t1, Side::S),
            b: (k(col), Side::S),
            reversed: true,
        });
    }
    let boundary = std::collections::BTreeMap::from([
        (
            "1:bd0".to_string(),
            (0..4).map(|c| (h(c), Side::N)).collect::<Vec<_>>(),
        ),
        (
            "1:bd1".to_string(),
            (0..4).map(|c| (l(c), Side::S)).collect::<Vec<_>>(),
        ),
        (
            "2:bd0".to_string(),
            (0..4).map(|c| (k(c), Side::N)).collect::<Vec<_>>(),
        ),
        (
            "2:bd1".to_string(),
            (0..4).map(|c| (m(c), Side::S)).collect::<Vec<_>>(),
        ),
    ]);
    let page = PageComplex {
        tiles: 20,
        gluings,
        boundary,
    };
    let mut sys = CurveSystem::new(page);

    // fresh parameter per use: odd numerators over 128
    let mut counter = 0i64;
    let mut p = move || {
        counter += 1;
        BigRational::new(BigInt::from(2 * counter + 1), BigInt::from(128))
    };

    let closed = |sys: &mut CurveSystem, id: &str, crossings: Vec<Crossing>| {
        let tiles: Vec<usize> = crossings.iter().map(|c| c.tile).collect();
        sys.register(
            id,
            CombPath {
                closed: true,
                crossings,
            },
        )
        .unwrap_or_else(|e| panic!("register {id}: {e}"));
        sys.regions.insert(id.to_string(), TwistRegion { tiles });
    };
    let cr = |tile: usize, ein: Side, pin: &BigRational, eout: Side, pout: &BigRational| Crossing {
        tile,
        enter: (ein, pin.clone()),
        exit: (eout, pout.clone()),
    };

    // horizontal circle through a row of four tiles
    let row_circle = |sys: &mut CurveSystem, id: &str, row: [usize; 4], height: &BigRational| {
        let crossings = row
            .iter()
            .map(|&t| cr(t, Side::W, height, Side::E, height))
            .collect();
        closed(sys, id, crossings);
    };

    // boundary-parallel twists (offset 0)
    let hp = p();
    row_circle(&mut sys, "1:bd0.navel.par", [h(0), h(1), h(2), h(3)], &hp);
    let lp = p();
    row_circle(&mut sys, "1:bd1.navel.par", [l(0), l(1), l(2), l(3)], &lp);
    let kp = p();
    row_circle(&mut sys, "2:bd0.navel.par", [k(0), k(1), k(2), k(3)], &kp);
    let mp = p();
    row_circle(&mut sys, "2:bd1.navel.par", [m(0), m(1), m(2), m(3)], &mp);

    // neck circles: a loop hugging the column-`hole` slit of a block with
    // rows (low, high); runs under the slit, up through column hole+1,
    // back over the slit, down through column hole-1
    let neck = |sys: &mut CurveSystem,
                    id: &str,
                    low: [usize; 4],
                    high: [usize; 4],
                    hole: usize,
                    under: BigRational,
                    over: BigRational,
                    xr: BigRational,
                    xl: BigRational| {
        let r = (hole + 1) % 4;
        let q = (hole + 3) % 4;
        let crossings = vec![
            cr(low[hole], Side::W, &under, Side::E, &under),
            cr(low[r], Side::W, &under, Side::N, &xr),
            cr(high[r], Side::S, &xr, Side::W, &over),
            cr(high[hole], Side::E, &over, Side::W, &over),
            cr(high[q], Side::E, &over, Side::S, &xl),
            cr(low[q], Side::N, &xl, Side::E, &under),
        ];
        closed(sys, id, crossings);
    };
    neck(
        &mut sys,
        "1:bd0.navel.neck",
        [l(0), l(1), l(2), l(3)],
        [h(0), h(1), h(2), h(3)],
        1,
        p(),
        p(),
        p(),
        p(),
    );
    neck(
        &mut sys,
        "1:bd1.navel.neck",
        [l(0), l(1), l(2), l(3)],
        [h(0), h(1), h(2), h(3)],
        3,
        p(),
        p(),
        p(),
        p(),
    );
    neck(
        &mut sys,
        "2:bd0.navel.neck",
        [m(0), m(1), m(2), m(3)],
        [k(0), k(1), k(2), k(3)],
        1,
        p(),
        p(),
        p(),
        p(),
    );
    neck(
        &mut sys,
        "2:bd1.navel.neck",
        [m(0), m(1), m(2), m(3)],
        [k(0), k(1), k(2), k(3)],
        3,
        p(),
        p(),
        p(),
        p(),
    );

    // outer curves: parallel to the boundary on the far side of the
    // block's hole nearest it. For the N-side boundary (high row): run
    // high except dive under the column-`hole` slit through the low row;
    // for the S-side boundary (low row): run low except rise over the
    // other hole.
    let outer_top = |sys: &mut CurveSystem,
                         id: &str,
                         low: [usize; 4],
                         high: [usize; 4],
                         hole: usize,
                         hi: BigRational,
                         lo: BigRational,
                         xdn: BigRational,
                         xup: BigRational| {
        // dive down in column hole-1 (glued), run under the slit, climb
        // in column hole+1
        let dn = (hole + 3) % 4;
        let up = (hole + 1) % 4;
        let far = (hole + 2) % 4;
        let crossings = vec![
            cr(high[up], Side::S, &xup, Side::E, &hi),
            cr(high[far], Side::W, &hi, Side::E, &hi),
            cr(high[dn], Side::W, &hi, Side::S, &xdn),
            cr(low[dn], Side::N, &xdn, Side::E, &lo),
            cr(low[hole], Side::W, &lo, Side::E, &lo),
            cr(low[up], Side::W, &lo, Side::N, &xup),
        ];
        closed(sys, id, crossings);
    };
    let outer_bot = |sys: &mut CurveSystem,
                         id: &str,
                         low: [usize; 4],
                         high: [usize; 4],
                         hole: usize,
                         hi: BigRational,
                         lo: BigRational,
                         xdn: BigRational,
                         xup: BigRational| {
        let up = (hole + 3) % 4;
        let dn = (hole + 1) % 4;
        let far = (hole + 2) % 4;
        let crossings = vec![
            cr(low[dn], Side::N, &xdn, Side::E, &lo),
            cr(low[far], Side::W, &lo, Side::E, &lo),
            cr(low[up], Side::W, &lo, Side::N, &xup),
            cr(high[up], Side::S, &xup, Side::E, &hi),
            cr(high[hole], Side::W, &hi, Side::E, &hi),
            cr(high[dn], Side::W, &hi, Side::S, &xdn),
        ];
        closed(sys, id, crossings);
    };
    outer_top(
        &mut sys,
        "1:bd0.navel.outer",
        [l(0), l(1), l(2), l(3)],
        [h(0), h(1), h(2), h(3)],
        1,
        p(),
        p(),
        p(),
        p(),
    );
    outer_bot(
        &mut sys,
        "1:bd1.navel.outer",
        [l(0), l(1), l(2), l(3)],
        [h(0), h(1), h(2), h(3)],
        3,
        p(),
        p(),
        p(),
        p(),
    );
    outer_top(
        &mut sys,
        "2:bd0.navel.outer",
        [m(0), m(1), m(2), m(3)],
        [k(0), k(1), k(2), k(3)],
        1,
        p(),
        p(),
        p(),
        p(),
    );
    outer_bot(
        &mut sys,
        "2:bd1.navel.outer",
        [m(0), m(1), m(2), m(3)],
        [k(0), k(1), k(2), k(3)],
        3,
        p(),
        p(),
        p(),
        p(),
    );

    // basis arcs
    let open = |sys: &mut CurveSystem, id: &str, crossings: Vec<Crossing>| {
        sys.register(
            id,
            CombPath {
                closed: false,
                crossings,
            },
        )
        .unwrap_or_else(|e| panic!("register {id}: {e}"));
    };
    let (p0, p1, p2) = (p(), p(), p());
    open(
        &mut sys,
        "a0",
        vec![
            cr(h(0), Side::N, &p0, Side::S, &p0),
            cr(l(0), Side::N, &p0, Side::S, &p0),
        ],
    );
    open(
        &mut sys,
        "a1",
        vec![
            cr(k(0), Side::N, &p1, Side::S, &p1),
            cr(m(0), Side::N, &p1, Side::S, &p1),
        ],
    );
    open(
        &mut sys,
        "a2",
        vec![
            cr(k(2), Side::N, &p2, Side::S, &p2),
            cr(m(2), Side::N, &p2, Side::S, &p2),
        ],
    );
    // through tube 1: 1:bd0 -> (16.N = h1.S) -> (16.S = m1.N) -> 2:bd1
    let (q0, q1, q2) = (p(), p(), p());
    open(
        &mut sys,
        "a3",
        vec![
            cr(h(1), Side::N, &q0, Side::S, &q1),
            cr(16, Side::N, &q1, Side::S, &q2),
            cr(m(1), Side::N, &q2, Side::S, &q0),
        ],
    );
    // through tube 2: 1:bd1 -> (19.N = l3.N, reversed) -> (19.S = k3.S,
    // reversed) -> 2:bd0
    let (r0, r1, r2) = (p(), p(), p());
    let one = BigRational::one();
    open(
        &mut sys,
        "a4",
        vec![
            cr(l(3), Side::S, &r0, Side::N, &r1),
            cr(19, Side::N, &(&one - &r1), Side::S, &r2),
            cr(k(3), Side::S, &(&one - &r2), Side::N, &r0),
        ],
    );

    sys.validate().unwrap_or_else(|e| panic!("t3 system: {e}"));
    sys
}

/// Toroidal grid diagram: `n` horizontal alpha circles and `n` vertical
/// beta circles on the torus, every region a square, with the listed
/// cells basepointed. All crossings are positive.
pub fn grid_diagram(n: usize, marks: &[(usize, usize)]) -> crate::heegaard::HeegaardDiagram {
    use crate::heegaard::{Anchor, Corner, HeegaardDiagram, Point, Quadrant, Region};
    assert!(n >= 2);
    let pt = |i: usize, j: usize| i * n + j;
    let mut points = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            points.push(Point {
                alpha: i,
                beta: j,
                sign: 1,
            });
        }
    }
    let alphas: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| pt(i, j)).collect()).collect();
    let betas: Vec<Vec<usize>> = (0..n).map(|j| (0..n).map(|i| pt(i, j)).collect()).collect();
    let mut regions = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (i1, j1) = ((i + 1) % n, (j + 1) % n);
            regions.push(Region {
                circuits: vec![vec![
                    Corner {
                        point: pt(i, j),
                        quadrant: Quadrant::NE,
                    },
                    Corner {
                        point: pt(i, j1),
                        quadrant: Quadrant::NW,
                    },
                    Corner {
                        point: pt(i1, j1),
                        quadrant: Quadrant::SW,
                    },
                    Corner {
                        point: pt(i1, j),
                        quadrant: Quadrant::SE,
                    },
                ]],
                euler: 1,
                basepoint: marks.contains(&(i, j)),
            });
        }
    }
    HeegaardDiagram {
        genus: 1,
        points,
        alphas,
        betas,
        regions,
        contact_points: None,
        anchors: Some(
            (0..n)
                .map(|i| Anchor {
                    first: pt(i, 0),
                    forwards: true,
                })
                .collect(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::openbook::Sign;

    #[test]
    fn twisted_annulus_realizes() {
        let ob = OpenBook::annulus_twisted(Sign::Positive, 3);
        let (sys, word) = annulus_system(&ob).unwrap();
        assert_eq!(word.len(), 3);
        assert!(sys.paths.contains_key("core"));
        assert!(sys.regions.contains_key("core"));
    }

    #[test]
    fn disk_rejected() {
        let err = annulus_system(&OpenBook::disk()).unwrap_err();
        assert!(matches!(err, ModelError::NotAnnulus(0, 1)));
    }

    #[test]
    fn t3_page_shape() {
        let sys = t3_system();
        assert_eq!(sys.page.genus_boundary(), (1, 4));
        assert_eq!(sys.page.boundary_cycles().len(), 4);
        // twelve twist curves, five arcs
        assert_eq!(sys.regions.len(), 12);
        assert_eq!(sys.paths.len(), 17);
        for id in sys.regions.keys() {
            assert!(sys.is_embedded(id).unwrap(), "{id} not embedded");
        }
    }

    #[test]
    fn t3_basis_cuts_to_disk() {
        let sys = t3_system();
        let euler =
            crate::heegaard::build::cut_profile(&sys, &["a0", "a1", "a2", "a3", "a4"]).unwrap();
        assert_eq!(euler, vec![1]);
    }
}
