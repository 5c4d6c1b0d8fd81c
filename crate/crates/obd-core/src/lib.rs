//! Combinatorial workbench for contact 3-manifolds presented by open books.
//!
//! The pipeline runs in four stages:
//!
//! 1. [`openbook`] — symbolic open books: pages, twist words, navels,
//!    binding sums, stabilization.
//! 2. [`page`] — concrete surfaces as quadrilateral tilings carrying arcs
//!    and twist curves with exact rational crossing data; Dehn twists act
//!    combinatorially.
//! 3. [`heegaard`] — Heegaard diagrams built by doubling a page across its
//!    boundary, with region extraction, niceness checks and first-homology
//!    presentations.
//! 4. [`floer`] / [`spectral`] — the F2 chain complex of a nice diagram
//!    (empty bigons and rectangles), contact-class vanishing with witness
//!    chains, and weighted differentials yielding spectral-order upper
//!    bounds.
//!
//! [`data`] ships the bundled datasets used by the CLI and the test suite.

pub mod data;
pub mod floer;
pub mod heegaard;
pub mod linalg;
pub mod models;
pub mod openbook;
pub mod page;
pub mod spectral;

/// Version tag carried by every serialized document.
pub const SCHEMA: &str = "obd/1";
