//! Shared test infrastructure: the brute-force positive-domain oracle and
//! the randomized diagram generators used by the acceptance suite.
//!
//! Each test binary compiles its own copy, so items a given binary does
//! not exercise are expected.
#![allow(dead_code)]

pub mod oracle;

use obd_core::heegaard::build::build_diagram;
use obd_core::heegaard::HeegaardDiagram;
use obd_core::models::{annulus_system, grid_diagram};
use obd_core::openbook::{OpenBook, Sign};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed for the randomized suites; override with OBD_TEST_SEED.
pub fn seed() -> u64 {
    std::env::var("OBD_TEST_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(0x0bd_5eed)
}

pub fn rng() -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed())
}

/// A random toroidal grid diagram. Markings hit every row and every
/// column (a random permutation plus extras); otherwise a thin annulus
/// survives as an unblocked periodic domain and the differential does not
/// square to zero.
pub fn random_grid(rng: &mut ChaCha8Rng, max_n: usize) -> HeegaardDiagram {
    let n = rng.random_range(2..=max_n);
    let mut cols: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        cols.swap(i, rng.random_range(0..=i));
    }
    let mut marks: Vec<(usize, usize)> = cols.into_iter().enumerate().collect();
    for i in 0..n {
        for j in 0..n {
            if rng.random_bool(0.15) {
                marks.push((i, j));
            }
        }
    }
    grid_diagram(n, &marks)
}

/// A diagram built from a random twisted-annulus open book.
pub fn random_annulus_diagram(rng: &mut ChaCha8Rng) -> HeegaardDiagram {
    let sign = if rng.random_bool(0.5) {
        Sign::Positive
    } else {
        Sign::Negative
    };
    let n = rng.random_range(0..=4u32);
    let ob = OpenBook::annulus_twisted(sign, n);
    let (sys, word) = annulus_system(&ob).unwrap();
    let built = build_diagram(&sys, &["a0"], &word).unwrap();
    built.diagram
}

/// The mixed family the acceptance suite draws from. Every member is a
/// valid nice diagram.
pub fn random_nice_diagram(rng: &mut ChaCha8Rng, max_grid: usize) -> HeegaardDiagram {
    let d = if rng.random_bool(0.7) {
        random_grid(rng, max_grid)
    } else {
        random_annulus_diagram(rng)
    };
    let rep = d.validate();
    assert!(rep.ok(), "generator produced invalid diagram: {:?}", rep.failures);
    assert!(d.is_nice(), "generator produced non-nice diagram");
    d
}
