//! Exact verification of multiple translative tilings of the plane by
//! centrally symmetric convex polygons.
//!
//! All arithmetic is on [`rational::Rat`], so every verdict is exact. The
//! usual path is:
//!
//! ```
//! use ktile::coverage::{verify_k_fold, Verdict};
//! use ktile::vertex::vertex_reports;
//!
//! let inst = ktile::io::load_fixture("d10_lemma4");
//! let report = verify_k_fold(&inst.polygon, &inst.multiset, 5).unwrap();
//! assert_eq!(report.verdict, Verdict::ExactKFold(5));
//! assert!(vertex_reports(&inst.polygon, &inst.multiset, 5).unwrap().iter().all(|r| r.passed()));
//! ```
//!
//! - [`geometry`]: points, orientation, centrally symmetric polygons.
//! - [`lattice`]: lattices, fundamental domains, translate enumeration.
//! - [`arrangement`]: cells of a segment arrangement in a parallelogram.
//! - [`coverage`]: point multiplicity and the k-fold check.
//! - [`vertex`]: wheels and invariants at the vertices of a tiling.
//! - [`bounds`]: lower bounds on the multiplicity.
//! - [`search`]: grid search over lattices.
//! - [`io`]: instance files, reports and SVG.

pub mod geometry;
pub mod lattice;
pub mod rational;
pub mod arrangement;
pub mod coverage;
pub mod vertex;
pub mod bounds;
pub mod search;
pub mod io;

pub use coverage::{verify_k_fold, CoverageReport, Verdict};
pub use geometry::{CsPolygon, Point};
pub use io::{load_fixture, parse_instance, Instance};
pub use lattice::{Lattice, TranslateMultiset};
pub use rational::Rat;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/instances.md")]
    mod instances {}
    #[doc = include_str!("../../../book/src/coverage.md")]
    mod coverage {}
    #[doc = include_str!("../../../book/src/vertices.md")]
    mod vertices {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/search.md")]
    mod search {}
    #[doc = include_str!("../../../book/src/rendering.md")]
    mod rendering {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
