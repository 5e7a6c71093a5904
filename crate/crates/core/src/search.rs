//! Grid search for k-fold lattice tilings of a fixed polygon.
//!
//! Every lattice with rational coordinates has a unique basis
//! `u1 = (p, 0)`, `u2 = (q, h)` with `p, h > 0` and `0 <= q < p`. Fixing
//! `det = r * area(P) / k` determines `h = det / p`, so candidates are the
//! pairs `(p, q)` on a rational grid. Each candidate is screened at a few
//! probe points and then verified exactly.

use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::coverage::{verify_k_fold, CoverageReport, MultiplicityCounter};
use crate::geometry::{CsPolygon, Point, Vec2};
use crate::lattice::{Lattice, TranslateMultiset};
use crate::rational::{self, int, rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("the search grid contains no candidate bases")]
    EmptySearchSpace,
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// Grid for the parameters `p` (length of `u1`) and `q` (shear of `u2`):
/// `p` runs over `step, 2*step, ..., <= max` and `q` over
/// `0, step, ..., < p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisGrid {
    pub step: Rat,
    pub max: Rat,
}

impl BasisGrid {
    pub fn new(step: Rat, max: Rat) -> Result<Self, SearchError> {
        if step <= Rat::zero() {
            return Err(SearchError::InvalidGrid("step must be positive".into()));
        }
        Ok(BasisGrid { step, max })
    }

    /// Parses `STEP:MAX`, for example `1/4:12`.
    pub fn parse(text: &str) -> Result<Self, SearchError> {
        let (s, m) = text
            .split_once(':')
            .ok_or_else(|| SearchError::InvalidGrid(format!("expected STEP:MAX, got {text:?}")))?;
        let step = rational::parse(s.trim()).map_err(|e| SearchError::InvalidGrid(e.to_string()))?;
        let max = rational::parse(m.trim()).map_err(|e| SearchError::InvalidGrid(e.to_string()))?;
        Self::new(step, max)
    }

    fn p_values(&self) -> Vec<Rat> {
        let mut out = Vec::new();
        let mut p = self.step.clone();
        while p <= self.max {
            out.push(p.clone());
            p += &self.step;
        }
        out
    }
}

impl std::fmt::Display for BasisGrid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}", rational::format(&self.step), rational::format(&self.max))
    }
}

#[derive(Debug, Clone)]
pub struct SearchSpec {
    pub polygon: CsPolygon,
    pub k: u32,
    pub grid: BasisGrid,
    /// Number of cosets `r`. For `r > 1` the extra offsets range over the
    /// points `(i/n) u1 + (j/n) u2` with `n = offset_denominator`.
    pub offsets: usize,
    pub offset_denominator: u32,
}

impl SearchSpec {
    pub fn lattice(polygon: CsPolygon, k: u32, grid: BasisGrid) -> Self {
        SearchSpec { polygon, k, grid, offsets: 1, offset_denominator: 2 }
    }

    /// The determinant every candidate must have.
    pub fn determinant(&self) -> Rat {
        int(self.offsets as i64) * self.polygon.area() / int(self.k as i64)
    }

    /// Candidate bases in search order: by `p`, then by `q`.
    pub fn bases(&self) -> Vec<Lattice> {
        let det = self.determinant();
        let mut out = Vec::new();
        for p in self.grid.p_values() {
            let h = &det / &p;
            let mut q = Rat::zero();
            while q < p {
                let u1 = Point::new(p.clone(), Rat::zero());
                let u2 = Point::new(q.clone(), h.clone());
                out.push(Lattice::new(u1, u2).expect("p and h are positive"));
                q += &self.grid.step;
            }
        }
        out
    }

    /// Offset sets for one lattice; always starts with the origin.
    fn offset_sets(&self, lattice: &Lattice) -> Vec<Vec<Vec2>> {
        if self.offsets <= 1 {
            return vec![vec![Point::origin()]];
        }
        let n = self.offset_denominator.max(1) as i64;
        let grid: Vec<Vec2> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| lattice.point(&rat(i, n), &rat(j, n)))
            .collect();
        let mut out = Vec::new();
        let mut idx = vec![0usize; self.offsets - 1];
        loop {
            let mut set = vec![Point::origin()];
            set.extend(idx.iter().map(|&i| grid[i].clone()));
            out.push(set);
            // Next non-decreasing index tuple.
            let mut pos = idx.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if idx[pos] + 1 < grid.len() {
                    let v = idx[pos] + 1;
                    for slot in idx[pos..].iter_mut() {
                        *slot = v;
                    }
                    break;
                }
            }
        }
    }

    pub fn candidates(&self) -> Vec<TranslateMultiset> {
        self.bases()
            .into_iter()
            .flat_map(|l| {
                self.offset_sets(&l)
                    .into_iter()
                    .map(move |o| TranslateMultiset::new(l.clone(), o).expect("offsets are non-empty"))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Progress {
    pub done: usize,
    pub total: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Found {
    pub multiset: TranslateMultiset,
    pub report: CoverageReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub candidates: usize,
    pub screened_out: usize,
    pub found: Vec<Found>,
}

/// Probe points in lattice coordinates. A k-fold tiling has
/// `open <= k <= closed` everywhere, so any probe violating that rules the
/// candidate out.
fn probe_coordinates() -> Vec<(Rat, Rat)> {
    [(1, 7, 2, 11), (3, 5, 1, 3), (5, 13, 7, 9), (1, 2, 1, 2), (0, 1, 0, 1), (9, 10, 3, 17)]
        .iter()
        .map(|&(a, b, c, d)| (rat(a, b), rat(c, d)))
        .collect()
}

fn passes_probes(polygon: &CsPolygon, x: &TranslateMultiset, k: u32) -> bool {
    let counter = MultiplicityCounter::new(polygon, x);
    probe_coordinates().iter().all(|(a, b)| {
        let m = counter.count(&x.lattice().point(a, b));
        m.open <= k && k <= m.closed
    })
}

pub fn search_lattice_k_tilings(spec: &SearchSpec) -> Result<SearchOutcome, SearchError> {
    search_with_progress(spec, |_| {})
}

/// Like [`search_lattice_k_tilings`], calling `progress` after each
/// candidate. Calls may come from several threads.
pub fn search_with_progress(
    spec: &SearchSpec,
    progress: impl Fn(Progress) + Sync,
) -> Result<SearchOutcome, SearchError> {
    if spec.k == 0 {
        return Err(SearchError::ZeroMultiplicity);
    }
    let candidates = spec.candidates();
    if candidates.is_empty() {
        return Err(SearchError::EmptySearchSpace);
    }
    let total = candidates.len();
    let done = AtomicUsize::new(0);
    let screened = AtomicUsize::new(0);
    let results: Vec<Option<Found>> = candidates
        .into_par_iter()
        .map(|x| {
            let hit = if passes_probes(&spec.polygon, &x, spec.k) {
                verify_k_fold(&spec.polygon, &x, spec.k)
                    .ok()
                    .filter(|r| r.is_tiling())
                    .map(|report| Found { multiset: x, report })
            } else {
                screened.fetch_add(1, Ordering::Relaxed);
                None
            };
            let d = done.fetch_add(1, Ordering::Relaxed) + 1;
            progress(Progress { done: d, total });
            hit
        })
        .collect();
    Ok(SearchOutcome {
        candidates: total,
        screened_out: screened.into_inner(),
        found: results.into_iter().flatten().collect(),
    })
}

/// The basis `(p, 0), (q, h)` with `p, h > 0` and `0 <= q < p` of a
/// lattice; two bases generate the same lattice exactly when these agree.
pub fn hermite_basis(l: &Lattice) -> Lattice {
    let (u1, u2) = (l.u1(), l.u2());
    let d = Rat::from_integer(rational::common_denominator([&u1.x, &u1.y, &u2.x, &u2.y]));
    let scaled = |v: &Point| -> (BigInt, BigInt) {
        let s = v * &d;
        (s.x.to_integer(), s.y.to_integer())
    };
    let ((x1, y1), (x2, y2)) = (scaled(u1), scaled(u2));
    let e = y1.extended_gcd(&y2);
    let g = e.gcd;
    // (s, t) with s*y1 + t*y2 = g gives a vector at height g.
    let (mut wx2, wy2) = (&e.x * &x1 + &e.y * &x2, g.clone());
    let mut wx1 = (&y2 * &x1 - &y1 * &x2) / &g;
    if wx1.is_negative() {
        wx1 = -wx1;
    }
    wx2 = wx2.mod_floor(&wx1);
    let p = Rat::from_integer(wx1) / &d;
    let q = Rat::from_integer(wx2) / &d;
    let h = Rat::from_integer(wy2) / &d;
    Lattice::new(Point::new(p, Rat::zero()), Point::new(q, h)).expect("same determinant as the input")
}

/// Whether `b` generates the same lattice as `a`.
pub fn same_lattice(a: &Lattice, b: &Lattice) -> bool {
    a.det() == b.det() && a.contains(b.u1()) && a.contains(b.u2())
}
