//! Covering multiplicity and k-fold tiling verification.
//!
//! A family `P + X` is a k-fold tiling when every point lies in at least `k`
//! closed translates and at most `k` open ones. The covering function is
//! constant on the 2-cells of the arrangement of all translate boundaries
//! and periodic under the lattice, so it suffices to read it once per cell of
//! one fundamental domain. On the edge graph between cells the closed and
//! open counts bracket the neighbouring cell values, which makes the cell
//! check equivalent to the definition.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::{build_arrangement, Arrangement};
use crate::geometry::{CsPolygon, Point, Segment};
use crate::lattice::{BBox, TranslateMultiset};
use crate::rational::{self, int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoverageError {
    #[error("area condition fails: r*area(P) = {got} but k*det = {expected}")]
    AreaMismatch { expected: Rat, got: Rat },
    #[error("covering density r*area(P)/det = {0} is not an integer")]
    NonIntegralDensity(Rat),
    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,
}

/// Number of translates containing a point in their interior (`open`) and in
/// their closure (`closed`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Multiplicity {
    pub open: u32,
    pub closed: u32,
}

impl Multiplicity {
    pub fn on_boundary(&self) -> bool {
        self.open != self.closed
    }
}

pub fn multiplicity_at(polygon: &CsPolygon, x: &TranslateMultiset, p: &Point) -> Multiplicity {
    MultiplicityCounter::new(polygon, x).count(p)
}

type Pair = [BigInt; 2];

fn cross(a: &Pair, b: &Pair) -> BigInt {
    &a[0] * &b[1] - &a[1] * &b[0]
}

/// Point multiplicity on integers. All coordinates of the polygon, lattice
/// and offsets are scaled by one common denominator, and each query point
/// by its own on top, so orientation tests are signs of integer cross
/// products.
#[derive(Debug, Clone)]
pub struct MultiplicityCounter {
    scale: BigInt,
    vertices: Vec<Pair>,
    edges: Vec<Pair>,
    lo: Pair,
    hi: Pair,
    u1: Pair,
    u2: Pair,
    det: BigInt,
    offsets: Vec<Pair>,
}

impl MultiplicityCounter {
    pub fn new(polygon: &CsPolygon, x: &TranslateMultiset) -> Self {
        let l = x.lattice();
        let pb = polygon.bbox();
        let all: Vec<&Point> = polygon.vertices().iter().chain([l.u1(), l.u2()]).chain(x.offsets()).collect();
        let scale = rational::common_denominator(all.iter().flat_map(|p| [&p.x, &p.y]));
        let sc = |r: &Rat| (r * Rat::from_integer(scale.clone())).to_integer();
        let pair = |p: &Point| [sc(&p.x), sc(&p.y)];
        let vertices: Vec<Pair> = polygon.vertices().iter().map(pair).collect();
        let n = vertices.len();
        let edges = (0..n)
            .map(|i| {
                let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
                [&b[0] - &a[0], &b[1] - &a[1]]
            })
            .collect();
        let (u1, u2) = (pair(l.u1()), pair(l.u2()));
        let det = cross(&u1, &u2);
        MultiplicityCounter {
            lo: [sc(&pb.xmin), sc(&pb.ymin)],
            hi: [sc(&pb.xmax), sc(&pb.ymax)],
            vertices,
            edges,
            u1,
            u2,
            det,
            offsets: x.offsets().iter().map(pair).collect(),
            scale,
        }
    }

    pub fn count(&self, p: &Point) -> Multiplicity {
        let d = p.x.denom().lcm(p.y.denom());
        let q = [
            p.x.numer() * (&d / p.x.denom()) * &self.scale,
            p.y.numer() * (&d / p.y.denom()) * &self.scale,
        ];
        let times_d = |a: &Pair| [&a[0] * &d, &a[1] * &d];
        let vertices: Vec<Pair> = self.vertices.iter().map(times_d).collect();
        let (u1, u2) = (times_d(&self.u1), times_d(&self.u2));
        let den = &self.det * &d;
        let mut m = Multiplicity { open: 0, closed: 0 };
        for o in &self.offsets {
            let o = times_d(o);
            // Lattice part of t ranges over q - o - [lo, hi] scaled by d.
            let corners: Vec<Pair> = [(&self.lo, &self.lo), (&self.lo, &self.hi), (&self.hi, &self.lo), (&self.hi, &self.hi)]
                .iter()
                .map(|(a, b)| [&q[0] - &o[0] - &a[0] * &d, &q[1] - &o[1] - &b[1] * &d])
                .collect();
            let coord = |f: &dyn Fn(&Pair) -> BigInt| -> (BigInt, BigInt) {
                let nums: Vec<BigInt> = corners.iter().map(f).collect();
                let lo = nums.iter().map(|n| n.div_ceil(&den)).min().expect("4 corners");
                let hi = nums.iter().map(|n| n.div_floor(&den)).max().expect("4 corners");
                (lo, hi)
            };
            let (lo1, hi1) = coord(&|c| cross(c, &self.u2));
            let (lo2, hi2) = coord(&|c| cross(&self.u1, c));
            let mut z1 = lo1;
            while z1 <= hi1 {
                let mut z2 = lo2.clone();
                while z2 <= hi2 {
                    let rel = [
                        &q[0] - &o[0] - &z1 * &u1[0] - &z2 * &u2[0],
                        &q[1] - &o[1] - &z1 * &u1[1] - &z2 * &u2[1],
                    ];
                    let mut boundary = false;
                    let mut outside = false;
                    for (v, e) in vertices.iter().zip(&self.edges) {
                        let s = cross(e, &[&rel[0] - &v[0], &rel[1] - &v[1]]);
                        if s.is_negative() {
                            outside = true;
                            break;
                        }
                        boundary |= s.is_zero();
                    }
                    if !outside {
                        m.closed += 1;
                        m.open += !boundary as u32;
                    }
                    z2 += 1;
                }
                z1 += 1;
            }
        }
        m
    }
}

/// The box that boundary segments are collected over: the bounding box of
/// the fundamental domain grown by the width plus height of `P`.
pub fn clipping_box(polygon: &CsPolygon, x: &TranslateMultiset) -> BBox {
    let pb = polygon.bbox();
    x.lattice().fundamental_domain().bbox().inflate(&(pb.width() + pb.height()))
}

/// Edges of every translate meeting the closed bounding box of the
/// fundamental domain, clipped to [`clipping_box`].
pub fn collect_boundary_segments(polygon: &CsPolygon, x: &TranslateMultiset) -> Vec<Segment> {
    let fd_box = x.lattice().fundamental_domain().bbox();
    let clip = clipping_box(polygon, x);
    x.enumerate(polygon, &fd_box)
        .iter()
        .flat_map(|t| polygon.edges().map(move |e| e.translate(&t.vector)))
        .filter_map(|e| crate::arrangement::clip_segment(&e, &clip))
        .collect()
}

/// Arrangement of all translate boundaries over the fundamental domain.
pub fn fundamental_arrangement(polygon: &CsPolygon, x: &TranslateMultiset) -> Arrangement {
    let segments = collect_boundary_segments(polygon, x);
    build_arrangement(&segments, &x.lattice().fundamental_domain())
}

/// A cell of the fundamental domain with its open-interior multiplicity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellReading {
    pub sample: Point,
    pub multiplicity: u32,
}

/// Open multiplicity at each cell sample, in cell order.
pub fn cell_multiplicities(polygon: &CsPolygon, x: &TranslateMultiset, arr: &Arrangement) -> Vec<CellReading> {
    let counter = MultiplicityCounter::new(polygon, x);
    let cells: Vec<&Point> = arr.cells().map(|f| &f.sample).collect();
    cells
        .par_iter()
        .map(|p| CellReading { sample: (*p).clone(), multiplicity: counter.count(p).open })
        .collect()
}

/// Essential minimum and maximum of the covering function.
pub fn multiplicity_range(polygon: &CsPolygon, x: &TranslateMultiset) -> (u32, u32) {
    let arr = fundamental_arrangement(polygon, x);
    let readings = cell_multiplicities(polygon, x, &arr);
    range_of(&readings)
}

fn range_of(readings: &[CellReading]) -> (u32, u32) {
    let lo = readings.iter().map(|r| r.multiplicity).min().unwrap_or(0);
    let hi = readings.iter().map(|r| r.multiplicity).max().unwrap_or(0);
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Verdict {
    ExactKFold(u32),
    NotTiling { witness: Point, multiplicity: u32 },
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::ExactKFold(k) => write!(f, "ExactKFold({k})"),
            Verdict::NotTiling { witness, multiplicity } => {
                write!(f, "NotTiling(witness {witness}, multiplicity {multiplicity})")
            }
        }
    }
}

/// `r * area(P)` against `k * det(L)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AreaCheck {
    #[serde(serialize_with = "ser_rat")]
    pub covered: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub expected: Rat,
    pub equal: bool,
}

pub(crate) fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&rational::format(r))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub k: u32,
    pub k_min: u32,
    pub k_max: u32,
    pub verdict: Verdict,
    pub cell_count: usize,
    pub translate_count: usize,
    pub segment_count: usize,
    /// Number of cells at each multiplicity.
    pub histogram: BTreeMap<u32, usize>,
    pub area_check: AreaCheck,
}

impl CoverageReport {
    pub fn is_tiling(&self) -> bool {
        matches!(self.verdict, Verdict::ExactKFold(_))
    }
}

pub fn area_check(polygon: &CsPolygon, x: &TranslateMultiset, k: u32) -> AreaCheck {
    let covered = int(x.coset_count() as i64) * polygon.area();
    let expected = int(k as i64) * x.lattice().det();
    let equal = covered == expected;
    AreaCheck { covered, expected, equal }
}

/// The multiplicity forced by the area condition, if it is an integer.
pub fn infer_k(polygon: &CsPolygon, x: &TranslateMultiset) -> Result<u32, CoverageError> {
    let density = x.density(polygon);
    rational::as_integer(&density)
        .and_then(|k| k.to_u32())
        .filter(|&k| k > 0)
        .ok_or(CoverageError::NonIntegralDensity(density))
}

/// Decides whether `P + X` is a k-fold tiling.
///
/// The area condition is checked first; a mismatch is an error and no
/// geometry is built.
pub fn verify_k_fold(polygon: &CsPolygon, x: &TranslateMultiset, k: u32) -> Result<CoverageReport, CoverageError> {
    if k == 0 {
        return Err(CoverageError::ZeroMultiplicity);
    }
    let area = area_check(polygon, x, k);
    if !area.equal {
        return Err(CoverageError::AreaMismatch { expected: area.expected, got: area.covered });
    }
    let translate_count = x.enumerate(polygon, &x.lattice().fundamental_domain().bbox()).len();
    let segments = collect_boundary_segments(polygon, x);
    let arr = build_arrangement(&segments, &x.lattice().fundamental_domain());
    let readings = cell_multiplicities(polygon, x, &arr);
    let (k_min, k_max) = range_of(&readings);
    let mut histogram = BTreeMap::new();
    for r in &readings {
        *histogram.entry(r.multiplicity).or_insert(0) += 1;
    }
    let verdict = match readings.iter().find(|r| r.multiplicity != k) {
        None => Verdict::ExactKFold(k),
        Some(r) => Verdict::NotTiling { witness: r.sample.clone(), multiplicity: r.multiplicity },
    };
    Ok(CoverageReport {
        k,
        k_min,
        k_max,
        verdict,
        cell_count: readings.len(),
        translate_count,
        segment_count: segments.len(),
        histogram,
        area_check: area,
    })
}

/// Uniform dyadic rational with 40 fractional bits in `[0, 1)`.
fn random_unit(rng: &mut ChaCha8Rng) -> Rat {
    const BITS: u32 = 40;
    let n: u64 = rng.gen_range(0..(1u64 << BITS));
    Rat::new(BigInt::from(n), BigInt::from(1u64 << BITS))
}

/// A uniformly random rational point of the fundamental domain that lies on
/// no translate boundary, with its multiplicity.
pub fn random_generic_point(polygon: &CsPolygon, x: &TranslateMultiset, rng: &mut ChaCha8Rng) -> (Point, u32) {
    let fd = x.lattice().fundamental_domain();
    let counter = MultiplicityCounter::new(polygon, x);
    loop {
        let p = fd.point_at(&random_unit(rng), &random_unit(rng));
        let m = counter.count(&p);
        if !m.on_boundary() {
            return (p, m.open);
        }
    }
}

/// Histogram of open multiplicity at `samples` random points of the
/// fundamental domain. Deterministic for a fixed seed.
pub fn monte_carlo_multiplicity(
    polygon: &CsPolygon,
    x: &TranslateMultiset,
    samples: usize,
    seed: u64,
) -> BTreeMap<u32, usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<Point> = (0..samples)
        .map(|_| {
            let fd = x.lattice().fundamental_domain();
            fd.point_at(&random_unit(&mut rng), &random_unit(&mut rng))
        })
        .collect();
    // Boundary hits are resampled from a second stream so the first pass
    // can run in parallel.
    let counter = MultiplicityCounter::new(polygon, x);
    let counts: Vec<Multiplicity> = points.par_iter().map(|p| counter.count(p)).collect();
    let mut extra = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut hist = BTreeMap::new();
    for m in counts {
        let open = if m.on_boundary() { random_generic_point(polygon, x, &mut extra).1 } else { m.open };
        *hist.entry(open).or_insert(0) += 1;
    }
    hist
}

/// Total area of the fundamental-domain cells at each multiplicity.
pub fn multiplicity_areas(polygon: &CsPolygon, x: &TranslateMultiset) -> BTreeMap<u32, Rat> {
    let arr = fundamental_arrangement(polygon, x);
    let readings = cell_multiplicities(polygon, x, &arr);
    let mut out: BTreeMap<u32, Rat> = BTreeMap::new();
    for (f, r) in arr.cells().zip(&readings) {
        *out.entry(r.multiplicity).or_insert_with(Rat::zero) += &f.area;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Lattice;
    use crate::rational::rat;

    fn square() -> CsPolygon {
        CsPolygon::from_ints(&[(0, 0), (1, 0), (1, 1), (0, 1)]).unwrap()
    }

    fn zz() -> TranslateMultiset {
        TranslateMultiset::lattice_only(Lattice::integer())
    }

    #[test]
    fn square_point_multiplicities() {
        assert_eq!(
            multiplicity_at(&square(), &zz(), &Point::new(rat(1, 2), rat(1, 2))),
            Multiplicity { open: 1, closed: 1 }
        );
        assert_eq!(multiplicity_at(&square(), &zz(), &Point::origin()), Multiplicity { open: 0, closed: 4 });
        assert_eq!(
            multiplicity_at(&square(), &zz(), &Point::new(rat(1, 2), int(0))),
            Multiplicity { open: 0, closed: 2 }
        );
    }

    #[test]
    fn square_grid_segments() {
        let segs = collect_boundary_segments(&square(), &zz());
        // 9 translates meet the unit square, 4 edges each, nothing clipped.
        assert_eq!(segs.len(), 36);
        let arr = fundamental_arrangement(&square(), &zz());
        assert_eq!(arr.cell_count(), 1);
    }

    #[test]
    fn area_mismatch_is_rejected() {
        assert_eq!(
            verify_k_fold(&square(), &zz(), 2),
            Err(CoverageError::AreaMismatch { expected: int(2), got: int(1) })
        );
        assert_eq!(verify_k_fold(&square(), &zz(), 0), Err(CoverageError::ZeroMultiplicity));
    }

    #[test]
    fn square_twofold() {
        let x = TranslateMultiset::lattice_only(Lattice::new(Point::int(1, 0), Point::new(int(0), rat(1, 2))).unwrap());
        let r = verify_k_fold(&square(), &x, 2).unwrap();
        assert_eq!(r.verdict, Verdict::ExactKFold(2));
        assert_eq!((r.k_min, r.k_max), (2, 2));
    }

    #[test]
    fn infer() {
        assert_eq!(infer_k(&square(), &zz()), Ok(1));
        let x = TranslateMultiset::lattice_only(Lattice::new(Point::int(2, 0), Point::int(0, 3)).unwrap());
        assert_eq!(infer_k(&square(), &x), Err(CoverageError::NonIntegralDensity(rat(1, 6))));
    }

    #[test]
    fn monte_carlo_square() {
        let h = monte_carlo_multiplicity(&square(), &zz(), 200, 7);
        assert_eq!(h, BTreeMap::from([(1, 200)]));
    }
}
