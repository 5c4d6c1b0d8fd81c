//! Regenerates the constructor-derived bundled datasets. Run from the
//! workspace root: `cargo run -p obd-core --example gen_datasets`.

use obd_core::models::{annulus_system, t3_system};
use obd_core::openbook::{
    binding_sum, positive_stabilize, BandPattern, BindingSumSpec, OpenBook, Sign, StabilizeArc,
};

fn write(name: &str, contents: String) {
    let path = format!("data/{name}.json");
    std::fs::write(&path, contents + "\n").expect("write dataset");
    println!("wrote {path}");
}

fn main() {
    // Example 3.1 right-hand sum: two positive Hopf bands glued along one
    // binding pair, with the navel boundary twists declared as the bands
    // to destabilize.
    let hopf = positive_stabilize(
        &OpenBook::disk(),
        &StabilizeArc {
            feet: ("bd0".into(), "bd0".into()),
        },
    )
    .unwrap();
    let sum = binding_sum(
        &hopf,
        &hopf,
        &BindingSumSpec {
            pairs: vec![("bd0".into(), "bd0".into())],
        },
    )
    .unwrap();
    let sum = sum
        .declare_destabilizable(
            "1:bd0.navel.par",
            BandPattern::Split {
                extra_boundary: "1:bd0".into(),
                merges_into: "1:stab0.bd".into(),
            },
        )
        .unwrap()
        .declare_destabilizable(
            "2:bd0.navel.par",
            BandPattern::Split {
                extra_boundary: "2:bd0".into(),
                merges_into: "2:stab0.bd".into(),
            },
        )
        .unwrap();
    write("example31_sum", sum.to_json());

    // T3: two trivial annuli summed along both pairs.
    let t3 = binding_sum(
        &OpenBook::annulus(),
        &OpenBook::annulus(),
        &BindingSumSpec {
            pairs: vec![("bd0".into(), "bd0".into()), ("bd1".into(), "bd1".into())],
        },
    )
    .unwrap();
    write("t3_sum", t3.to_json());

    // The vanishing family: (Sigma_{g,2}, Id) summed with a trivial
    // annulus along both pairs.
    for g in [1u32, 2] {
        let ob = binding_sum(
            &OpenBook::sigma_g2(g),
            &OpenBook::annulus(),
            &BindingSumSpec {
                pairs: vec![("bd0".into(), "bd0".into()), ("bd1".into(), "bd1".into())],
            },
        )
        .unwrap();
        write(&format!("thm1_genus{g}"), ob.to_json());
    }

    // Annulus page with spanning arc, core curve and twist region.
    let (sys, _) = annulus_system(&OpenBook::annulus_twisted(Sign::Positive, 1)).unwrap();
    write("annulus_page", sys.to_json());

    // The T3 binding-sum page with its five-arc basis and the twelve
    // realized navel curves.
    write("fig5_t3", t3_system().to_json());
}
