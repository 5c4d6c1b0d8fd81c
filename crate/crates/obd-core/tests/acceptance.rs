//! Acceptance suite. One test per criterion; each prints a PASS line (or
//! SKIP for items gated on figure transcriptions that have not been
//! produced). Run with `cargo test --test acceptance -- --nocapture`.

mod common;

use std::time::Instant;

use common::oracle::{all_generators, oracle_arrows, OracleArrow};
use obd_core::data;
use obd_core::floer::enumerate::complex_from_diagram;
use obd_core::floer::{ChainDoc, Complex, Vanishing};
use obd_core::heegaard::build::build_diagram;
use obd_core::linalg::smith_normal_form;
use obd_core::models::annulus_system;
use obd_core::openbook::{destabilize, OpenBook, Sign};
use obd_core::page::twist::dehn_twist;
use obd_core::page::{rat, CombPath, Crossing, CurveSystem, PageComplex, Side, TwistRegion};
use obd_core::spectral::{
    order_upper_bound, verify_filtered_witness, FilteredComplex, OrderBound, WitnessDoc,
};
use rand::Rng;

fn table1() -> Complex {
    Complex::from_json(&data::read("table1").unwrap()).unwrap()
}

fn paper_chain(cx: &Complex) -> (obd_core::floer::ChainF2, obd_core::floer::ChainF2) {
    let doc: ChainDoc = serde_json::from_str(&data::read("paper_chain").unwrap()).unwrap();
    let chain = cx.chain_from_tuples(doc.chain.iter()).unwrap();
    let target = cx
        .chain_from_tuples([doc.target.as_ref().unwrap()])
        .unwrap();
    (chain, target)
}

#[test]
fn acceptance_1_table1_chain_verification() {
    let cx = table1();
    assert_eq!(cx.len(), 25);
    assert_eq!(cx.arrows().len(), 25);
    let (chain, target) = paper_chain(&cx);
    assert_eq!(chain.len(), 12);
    assert!(cx.verify_chain(&chain, &target));

    // every generator except the contact one appears an even number of
    // times among the arrows out of the chain
    let contact = cx.index_of(&vec![1, 1, 1, 1, 1]).unwrap();
    let mut counts = vec![0usize; cx.len()];
    for a in cx.arrows() {
        if chain.contains(a.from) {
            counts[a.to] += 1;
        }
    }
    for (g, &c) in counts.iter().enumerate() {
        if g == contact {
            assert_eq!(c % 2, 1, "contact generator must appear oddly");
        } else {
            assert_eq!(c % 2, 0, "generator {g} appears {c} times");
        }
    }
    println!("ACCEPTANCE 1 PASS: 12-chain bounds the contact generator on the 25-arrow complex");
}

#[test]
fn acceptance_2_order_bound_two_with_witnesses() {
    let cx = table1();
    let fc = FilteredComplex::attach_weights(cx).unwrap();
    // weight census: 20 arrows of weight 0, 5 of weight 1
    assert_eq!(fc.weights().iter().filter(|&&w| w == 0).count(), 20);
    assert_eq!(fc.weights().iter().filter(|&&w| w == 1).count(), 5);

    let c = fc
        .complex()
        .chain_from_tuples([&vec![1, 1, 1, 1, 1]])
        .unwrap();
    match order_upper_bound(&fc, &c, None).unwrap() {
        OrderBound::Bounded { k, witness } => {
            assert_eq!(k, 2);
            let rep = verify_filtered_witness(&fc, &witness);
            assert!(rep.ok(), "solver witness fails layers {:?}", rep.failures);
        }
        OrderBound::NoBoundUpTo { kmax } => panic!("no bound up to {kmax}"),
    }

    // the published witness verifies, including its layer identities
    let doc: WitnessDoc = serde_json::from_str(&data::read("witness_b012").unwrap()).unwrap();
    let w = doc.resolve(fc.complex()).unwrap();
    assert_eq!(w.layers.len(), 3);
    let rep = verify_filtered_witness(&fc, &w);
    assert!(rep.ok(), "published witness fails layers {:?}", rep.failures);
    // layer identities as stated: d0 b1 = d1 b2 and d0 b2 = 0
    let d0b1 = fc.layer_boundary(0, &w.layers[1]);
    let d1b2 = fc.layer_boundary(1, &w.layers[2]);
    assert_eq!(d0b1, d1b2);
    assert!(fc.layer_boundary(0, &w.layers[2]).is_empty());
    // dropping b2 breaks the witness at layer 1
    let mut truncated = w.clone();
    truncated.layers.pop();
    let rep = verify_filtered_witness(&fc, &truncated);
    assert!(!rep.ok());
    assert_eq!(rep.failures[0].0, 1);
    println!("ACCEPTANCE 2 PASS: order bound 2 with verifying witnesses");
}

#[test]
fn acceptance_3_order_one_infeasible() {
    let cx = table1();
    let fc = FilteredComplex::attach_weights(cx).unwrap();
    let c = fc
        .complex()
        .chain_from_tuples([&vec![1, 1, 1, 1, 1]])
        .unwrap();
    match order_upper_bound(&fc, &c, Some(1)).unwrap() {
        OrderBound::NoBoundUpTo { kmax } => assert_eq!(kmax, 1),
        OrderBound::Bounded { k, .. } => panic!("unexpected bound {k}"),
    }
    println!("ACCEPTANCE 3 PASS: no witness with k <= 1 exists");
}

#[test]
fn acceptance_4_d_squared_zero_suite() {
    let start = Instant::now();
    let mut rng = common::rng();
    let mut checked = 0usize;
    for _ in 0..1000 {
        let d = common::random_nice_diagram(&mut rng, 4);
        let cx = complex_from_diagram(&d).unwrap();
        if let Err((x, z)) = cx.d_squared_zero() {
            panic!("d^2 != 0: {x:?} reaches {z:?}");
        }
        checked += 1;
    }
    // bundled open books realized on the annulus
    for name in ["annulus_id", "annulus_tau1", "annulus_tau2", "annulus_tau3"] {
        let ob = OpenBook::from_json(&data::read(name).unwrap()).unwrap();
        let (sys, word) = annulus_system(&ob).unwrap();
        let built = build_diagram(&sys, &["a0"], &word).unwrap();
        let cx = complex_from_diagram(&built.diagram).unwrap();
        assert!(cx.d_squared_zero().is_ok(), "{name}");
        checked += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 60.0, "suite took {secs:.1}s");
    println!("ACCEPTANCE 4 PASS: d^2 = 0 on {checked} diagrams in {secs:.1}s");
}

#[test]
fn acceptance_5_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = common::rng();
    let mut compared = 0usize;
    for _ in 0..1000 {
        let d = common::random_nice_diagram(&mut rng, 3);
        if d.regions.len() > 12 {
            continue;
        }
        // implementation arrows, as point selections
        let cx = complex_from_diagram(&d).unwrap();
        let mut got: Vec<OracleArrow> = cx
            .arrows()
            .iter()
            .map(|a| OracleArrow {
                from: d.generator_of(cx.tuple(a.from)).unwrap(),
                to: d.generator_of(cx.tuple(a.to)).unwrap(),
                support: a.support.clone().unwrap(),
            })
            .collect();
        got.sort();
        let want = oracle_arrows(&d);
        assert_eq!(got, want, "arrow sets differ on a {}-region diagram", d.regions.len());
        compared += 1;
    }
    assert!(compared >= 300, "only {compared} diagrams qualified");
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 120.0, "suite took {secs:.1}s");
    println!(
        "ACCEPTANCE 5 PASS: direct enumeration matches the brute-force oracle on {compared} diagrams in {secs:.1}s"
    );
}

#[test]
fn acceptance_6_h1_suite() {
    // (annulus, Id) -> Z
    let (sys, word) = annulus_system(&OpenBook::annulus()).unwrap();
    let built = build_diagram(&sys, &["a0"], &word).unwrap();
    let h = built.diagram.h1_presentation();
    assert_eq!(h.smith.cokernel_rank(), 1);
    assert!(h.smith.torsion().is_empty());
    assert_eq!(h.group_string(), "Z");

    // (annulus, tau^n) -> Z/n, against the hand-built 1x1 matrix [n]
    for n in 1..=3u32 {
        for sign in [Sign::Positive, Sign::Negative] {
            let ob = OpenBook::annulus_twisted(sign, n);
            let (sys, word) = annulus_system(&ob).unwrap();
            let built = build_diagram(&sys, &["a0"], &word).unwrap();
            let h = built.diagram.h1_presentation();
            let oracle = smith_normal_form(&[vec![n as i128]]);
            assert_eq!(h.smith.factors, oracle.factors, "n = {n}, {sign:?}");
            assert_eq!(h.smith.cokernel_rank(), 0);
        }
    }

    // destabilized binding sum of two Hopf bands -> Z/2
    let sum = OpenBook::from_json(&data::read("example31_sum").unwrap()).unwrap();
    assert_eq!(sum.page_invariants(), (0, 4, -2, 8));
    let d1 = destabilize(&sum, "1:bd0.navel.par").unwrap();
    let d2 = destabilize(&d1, "2:bd0.navel.par").unwrap();
    assert_eq!(d2.page_invariants(), (0, 2, 0, 6));
    let signs: Vec<i32> = d2.monodromy.signs().iter().map(|s| s.as_i32()).collect();
    assert_eq!(signs, vec![1, -1, -1, 1, -1, -1]);
    let (sys, word) = annulus_system(&d2).unwrap();
    let built = build_diagram(&sys, &["a0"], &word).unwrap();
    let h = built.diagram.h1_presentation();
    assert_eq!(h.smith.torsion(), vec![2]);
    assert_eq!(h.smith.cokernel_rank(), 0);
    assert_eq!(h.group_string(), "Z/2");

    // the T3 page: its realized curve system ships as a dataset; the
    // intersection matrix comes straight off the doubled curves
    let sys = CurveSystem::from_json(&data::read("fig5_t3").unwrap()).unwrap();
    let ob = OpenBook::from_json(&data::read("t3_sum").unwrap()).unwrap();
    let h = obd_core::heegaard::build::h1_of_open_book(
        &sys,
        &["a0", "a1", "a2", "a3", "a4"],
        &ob.monodromy,
    )
    .unwrap();
    assert_eq!(h.smith.cokernel_rank(), 3);
    assert!(h.smith.torsion().is_empty());
    assert_eq!(h.group_string(), "Z^3");
    println!("ACCEPTANCE 6 PASS: H1 suite including the T3 page (Z^3)");
}

#[test]
fn acceptance_7_transcription_gated_diagrams() {
    let fig69 = data::find("fig6to9_torsion").unwrap();
    let fig10 = data::find("fig10_genus1").unwrap();
    if fig69.requires_transcription() || fig10.requires_transcription() {
        println!(
            "ACCEPTANCE 7 SKIP: figure transcriptions not produced \
             (fig6to9_torsion, fig10_genus1 are placeholder slots)"
        );
        return;
    }
    // (a) niceness, (b) contact class, (c) Table-1 rows, (d) vanishing,
    // (e) the corrected outgoing rectangles of (9,11,2,3,2)
    let d = obd_core::heegaard::HeegaardDiagram::from_json(&data::read("fig6to9_torsion").unwrap())
        .unwrap();
    assert!(d.validate().ok());
    assert!(d.is_nice());
    let contact = d.contact_generator().unwrap();
    assert_eq!(d.tuple_of(&contact).unwrap(), vec![1, 1, 1, 1, 1]);
    let cx = complex_from_diagram(&d).unwrap();
    let t1 = table1();
    let (chain, target) = paper_chain(&t1);
    let chain_tuples = t1.chain_tuples(&chain);
    let mut expect: Vec<(Vec<u32>, Vec<u32>)> = t1
        .arrows()
        .iter()
        .filter(|a| chain.contains(a.from))
        .map(|a| (t1.tuple(a.from).clone(), t1.tuple(a.to).clone()))
        .collect();
    expect.sort();
    let mut got: Vec<(Vec<u32>, Vec<u32>)> = cx
        .arrows()
        .iter()
        .filter(|a| chain_tuples.contains(cx.tuple(a.from)))
        .map(|a| (cx.tuple(a.from).clone(), cx.tuple(a.to).clone()))
        .collect();
    got.sort();
    assert_eq!(got, expect);
    let c = cx.chain_from_tuples([&vec![1u32, 1, 1, 1, 1]]).unwrap();
    match cx.decide_vanishing(&c).unwrap() {
        Vanishing::Vanishes(b) => assert!(cx.verify_chain(&b, &c)),
        Vanishing::NonVanishing(_) => panic!("contact class must vanish"),
    }
    let _ = target;
    let from = cx.index_of(&vec![9, 11, 2, 3, 2]).unwrap();
    let outs: Vec<Vec<u32>> = cx
        .arrows()
        .iter()
        .filter(|a| a.from == from)
        .map(|a| cx.tuple(a.to).clone())
        .collect();
    for t in [vec![9, 12, 2, 2, 2], vec![16, 4, 2, 3, 2], vec![3, 5, 2, 3, 2]] {
        assert!(outs.contains(&t), "missing rectangle to {t:?}");
    }
    println!("ACCEPTANCE 7 PASS");
}

#[test]
fn acceptance_8_picard_lefschetz_law() {
    let start = Instant::now();
    let mut rng = common::rng();
    let mut checked = 0usize;
    while checked < 500 {
        let m = rng.random_range(1..=3usize);
        let mut sys = CurveSystem::new(PageComplex::annulus(m));
        let mut denom_pool = 101u64;
        let mut fresh = |rng: &mut rand_chacha::ChaCha8Rng| {
            denom_pool += 2;
            rat(rng.random_range(1..denom_pool as i64), denom_pool as i64)
        };
        // twist curve: core at a random height
        let h = fresh(&mut rng);
        sys.register(
            "c",
            CombPath {
                closed: true,
                crossings: (0..m)
                    .map(|i| Crossing {
                        tile: i,
                        enter: (Side::W, h.clone()),
                        exit: (Side::E, h.clone()),
                    })
                    .collect(),
            },
        )
        .unwrap();
        sys.regions
            .insert("c".into(), TwistRegion { tiles: (0..m).collect() });
        // x: random staircase from the top boundary to the bottom
        let staircase = |rng: &mut rand_chacha::ChaCha8Rng,
                             fresh: &mut dyn FnMut(&mut rand_chacha::ChaCha8Rng) -> obd_core::page::Pos|
         -> CombPath {
            let mut crossings = Vec::new();
            let mut tile = rng.random_range(0..m);
            let mut enter = (Side::N, fresh(rng));
            loop {
                let exit_side = match rng.random_range(0..3u8) {
                    0 => Side::S,
                    1 => Side::E,
                    _ => Side::W,
                };
                let exit_side = if exit_side == enter.0 { Side::S } else { exit_side };
                let exit = (exit_side, fresh(rng));
                crossings.push(Crossing {
                    tile,
                    enter: enter.clone(),
                    exit: exit.clone(),
                });
                if exit_side == Side::S || crossings.len() > 6 {
                    break;
                }
                // continue through the gluing
                let (slot, q) = if exit_side == Side::E {
                    (((tile + 1) % m, Side::W), exit.1.clone())
                } else {
                    (((tile + m - 1) % m, Side::E), exit.1.clone())
                };
                tile = slot.0;
                enter = (slot.1, q);
            }
            if crossings.last().unwrap().exit.0 != Side::S {
                // force termination through the bottom
                let last = crossings.last_mut().unwrap();
                last.exit = (Side::S, last.exit.1.clone());
            }
            CombPath {
                closed: false,
                crossings,
            }
        };
        let x = staircase(&mut rng, &mut fresh);
        let y = staircase(&mut rng, &mut fresh);
        if sys.register("x", x).is_err() {
            continue;
        }
        if sys.register("y", y).is_err() {
            continue;
        }
        if sys.validate().is_err() {
            continue;
        }
        let sign = if rng.random_bool(0.5) {
            Sign::Positive
        } else {
            Sign::Negative
        };
        let xy = sys.algebraic_intersection("x", "y").unwrap();
        let xc = sys.algebraic_intersection("x", "c").unwrap();
        let cy = sys.algebraic_intersection("c", "y").unwrap();
        let out = dehn_twist(&sys, "c", sign, &["x"]).unwrap();
        let txy = out.algebraic_intersection("x", "y").unwrap();
        assert_eq!(
            txy,
            xy + sign.as_i32() as i64 * xc * cy,
            "P-L fails: m {m} sign {sign:?} xy {xy} xc {xc} cy {cy} txy {txy}"
        );
        checked += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 30.0, "suite took {secs:.1}s");
    println!("ACCEPTANCE 8 PASS: Picard-Lefschetz identity on {checked} triples in {secs:.1}s");
}

#[test]
fn bundled_datasets_validate() {
    for ds in data::bundled_datasets() {
        let Some(payload) = data::read(ds.name) else {
            assert!(ds.requires_transcription());
            continue;
        };
        match ds.kind {
            data::DatasetKind::OpenBook => {
                OpenBook::from_json(&payload).unwrap();
            }
            data::DatasetKind::Complex => {
                let cx = Complex::from_json(&payload).unwrap();
                assert!(cx.d_squared_zero().is_ok());
            }
            data::DatasetKind::Chain => {
                let doc: ChainDoc = serde_json::from_str(&payload).unwrap();
                assert_eq!(doc.schema, "obd/1");
                assert_eq!(doc.chain.len(), 12);
            }
            data::DatasetKind::Witness => {
                let doc: WitnessDoc = serde_json::from_str(&payload).unwrap();
                assert_eq!(doc.layers.len(), 3);
            }
            data::DatasetKind::PageArcs => {
                CurveSystem::from_json(&payload).unwrap();
            }
            data::DatasetKind::Diagram => {
                let d = obd_core::heegaard::HeegaardDiagram::from_json(&payload).unwrap();
                assert!(d.validate().ok());
            }
        }
    }
    // the generator census of the arrow table: 25 distinct (from, to) pairs
    let cx = table1();
    let mut pairs: Vec<(usize, usize)> = cx.arrows().iter().map(|a| (a.from, a.to)).collect();
    pairs.sort_unstable();
    pairs.dedup();
    assert_eq!(pairs.len(), 25);
    // independent generator count check on a bundled-style diagram
    let d = obd_core::models::grid_diagram(3, &[(0, 0)]);
    assert_eq!(all_generators(&d).len(), 6);
}
