//! Lattices, fundamental domains and periodic translate multisets.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::geometry::{CsPolygon, Orientation, Point, Vec2};
use crate::rational::{self, int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("lattice basis {0} {1} is degenerate (determinant 0)")]
    DegenerateBasis(Point, Point),
    #[error("a translate multiset needs at least one offset")]
    NoOffsets,
}

/// Axis-aligned closed box.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BBox {
    pub xmin: Rat,
    pub xmax: Rat,
    pub ymin: Rat,
    pub ymax: Rat,
}

impl BBox {
    /// Panics if `xmin > xmax` or `ymin > ymax`.
    pub fn new(xmin: Rat, xmax: Rat, ymin: Rat, ymax: Rat) -> Self {
        assert!(xmin <= xmax && ymin <= ymax, "inverted bounding box");
        BBox { xmin, xmax, ymin, ymax }
    }

    /// The degenerate box holding one point.
    pub fn point(p: &Point) -> Self {
        BBox::new(p.x.clone(), p.x.clone(), p.y.clone(), p.y.clone())
    }

    pub fn around<'a>(points: impl IntoIterator<Item = &'a Point>) -> Option<Self> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut b = BBox::point(first);
        for p in it {
            if p.x < b.xmin {
                b.xmin = p.x.clone();
            }
            if p.x > b.xmax {
                b.xmax = p.x.clone();
            }
            if p.y < b.ymin {
                b.ymin = p.y.clone();
            }
            if p.y > b.ymax {
                b.ymax = p.y.clone();
            }
        }
        Some(b)
    }

    pub fn width(&self) -> Rat {
        &self.xmax - &self.xmin
    }

    pub fn height(&self) -> Rat {
        &self.ymax - &self.ymin
    }

    pub fn inflate(&self, margin: &Rat) -> BBox {
        BBox::new(
            &self.xmin - margin,
            &self.xmax + margin,
            &self.ymin - margin,
            &self.ymax + margin,
        )
    }

    /// Counterclockwise corners starting at the lower left.
    pub fn corners(&self) -> [Point; 4] {
        [
            Point::new(self.xmin.clone(), self.ymin.clone()),
            Point::new(self.xmax.clone(), self.ymin.clone()),
            Point::new(self.xmax.clone(), self.ymax.clone()),
            Point::new(self.xmin.clone(), self.ymax.clone()),
        ]
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.xmin <= p.x && p.x <= self.xmax && self.ymin <= p.y && p.y <= self.ymax
    }

    pub fn contains_box(&self, other: &BBox) -> bool {
        self.xmin <= other.xmin && other.xmax <= self.xmax && self.ymin <= other.ymin && other.ymax <= self.ymax
    }
}

/// A planar lattice `{ z1*u1 + z2*u2 : z1, z2 integers }` with rational basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Lattice {
    u1: Vec2,
    u2: Vec2,
    #[serde(serialize_with = "crate::coverage::ser_rat")]
    det: Rat,
}

impl Lattice {
    pub fn new(u1: Vec2, u2: Vec2) -> Result<Self, LatticeError> {
        let det = u1.cross(&u2);
        if det.is_zero() {
            return Err(LatticeError::DegenerateBasis(u1, u2));
        }
        Ok(Lattice { u1, u2, det })
    }

    /// The integer lattice.
    pub fn integer() -> Self {
        Lattice::new(Point::int(1, 0), Point::int(0, 1)).expect("unit basis")
    }

    pub fn u1(&self) -> &Vec2 {
        &self.u1
    }

    pub fn u2(&self) -> &Vec2 {
        &self.u2
    }

    /// Covolume `|u1 x u2|`.
    pub fn det(&self) -> Rat {
        self.det.abs()
    }

    /// Real coordinates `(a, b)` with `p = a*u1 + b*u2`.
    pub fn coords(&self, p: &Point) -> (Rat, Rat) {
        (p.cross(&self.u2) / &self.det, self.u1.cross(p) / &self.det)
    }

    pub fn point(&self, a: &Rat, b: &Rat) -> Point {
        &self.u1.scale(a) + &self.u2.scale(b)
    }

    pub fn lattice_point(&self, z1: &BigInt, z2: &BigInt) -> Point {
        self.point(&Rat::from_integer(z1.clone()), &Rat::from_integer(z2.clone()))
    }

    /// Representative of `p` modulo the lattice inside the half-open
    /// fundamental parallelogram.
    pub fn reduce(&self, p: &Point) -> Point {
        let (a, b) = self.coords(p);
        self.point(&rational::frac(&a), &rational::frac(&b))
    }

    pub fn contains(&self, p: &Point) -> bool {
        let (a, b) = self.coords(p);
        a.is_integer() && b.is_integer()
    }

    pub fn fundamental_domain(&self) -> Parallelogram {
        Parallelogram::new(Point::origin(), self.u1.clone(), self.u2.clone())
    }

    /// Integer coordinate window `[lo1, hi1] x [lo2, hi2]` covering every
    /// lattice point in the box.
    fn coordinate_window(&self, bbox: &BBox) -> (BigInt, BigInt, BigInt, BigInt) {
        let cs: Vec<(Rat, Rat)> = bbox.corners().iter().map(|c| self.coords(c)).collect();
        let min = |f: fn(&(Rat, Rat)) -> &Rat| cs.iter().map(f).min().expect("4 corners").clone();
        let max = |f: fn(&(Rat, Rat)) -> &Rat| cs.iter().map(f).max().expect("4 corners").clone();
        (
            rational::ceil(&min(|c| &c.0)),
            rational::floor(&max(|c| &c.0)),
            rational::ceil(&min(|c| &c.1)),
            rational::floor(&max(|c| &c.1)),
        )
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.u1, self.u2)
    }
}

/// A parallelogram `{ origin + a*u1 + b*u2 : 0 <= a, b <= 1 }`.
///
/// As a fundamental domain it is read half-open (`0 <= a, b < 1`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Parallelogram {
    pub origin: Point,
    pub u1: Vec2,
    pub u2: Vec2,
}

impl Parallelogram {
    pub fn new(origin: Point, u1: Vec2, u2: Vec2) -> Self {
        Parallelogram { origin, u1, u2 }
    }

    /// The rectangle of a bounding box.
    pub fn from_bbox(b: &BBox) -> Self {
        Parallelogram::new(
            Point::new(b.xmin.clone(), b.ymin.clone()),
            Point::new(b.width(), Rat::zero()),
            Point::new(Rat::zero(), b.height()),
        )
    }

    /// Corners in the order origin, origin+u1, origin+u1+u2, origin+u2.
    pub fn corners(&self) -> [Point; 4] {
        let a = self.origin.clone();
        let b = &a + &self.u1;
        let c = &b + &self.u2;
        let d = &a + &self.u2;
        [a, b, c, d]
    }

    pub fn area(&self) -> Rat {
        self.u1.cross(&self.u2).abs()
    }

    pub fn bbox(&self) -> BBox {
        BBox::around(self.corners().iter()).expect("4 corners")
    }

    fn params(&self, p: &Point) -> (Rat, Rat) {
        let det = self.u1.cross(&self.u2);
        let w = p - &self.origin;
        (w.cross(&self.u2) / &det, self.u1.cross(&w) / &det)
    }

    /// Strict interior test.
    pub fn contains_strictly(&self, p: &Point) -> bool {
        let (a, b) = self.params(p);
        let one = int(1);
        a.is_positive() && b.is_positive() && a < one && b < one
    }

    /// Half-open membership `0 <= a, b < 1`.
    pub fn contains_half_open(&self, p: &Point) -> bool {
        let (a, b) = self.params(p);
        let one = int(1);
        !a.is_negative() && !b.is_negative() && a < one && b < one
    }

    pub fn point_at(&self, a: &Rat, b: &Rat) -> Point {
        &(&self.origin + &self.u1.scale(a)) + &self.u2.scale(b)
    }
}

/// One lattice translate of the tile: `lattice_point(z1, z2) + offsets[offset]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Translate {
    pub z1: BigInt,
    pub z2: BigInt,
    pub offset: usize,
    pub vector: Vec2,
}

impl fmt::Display for Translate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.vector)
    }
}

/// The multiset `X = union over offsets o of (lattice + o)`.
///
/// Offsets are stored reduced modulo the lattice; repeats are kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TranslateMultiset {
    lattice: Lattice,
    offsets: Vec<Vec2>,
}

impl TranslateMultiset {
    pub fn new(lattice: Lattice, offsets: Vec<Vec2>) -> Result<Self, LatticeError> {
        if offsets.is_empty() {
            return Err(LatticeError::NoOffsets);
        }
        let offsets = offsets.iter().map(|o| lattice.reduce(o)).collect();
        Ok(TranslateMultiset { lattice, offsets })
    }

    /// The lattice itself (single offset at the origin).
    pub fn lattice_only(lattice: Lattice) -> Self {
        TranslateMultiset { lattice, offsets: vec![Point::origin()] }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn offsets(&self) -> &[Vec2] {
        &self.offsets
    }

    /// Number of cosets `r`.
    pub fn coset_count(&self) -> usize {
        self.offsets.len()
    }

    /// Shifts every translate by `w`.
    pub fn shifted(&self, w: &Vec2) -> Self {
        let offsets = self.offsets.iter().map(|o| o + w).collect();
        TranslateMultiset::new(self.lattice.clone(), offsets).expect("nonempty")
    }

    /// Average covering density `r * area(P) / det`.
    pub fn density(&self, polygon: &CsPolygon) -> Rat {
        int(self.coset_count() as i64) * polygon.area() / self.lattice.det()
    }

    /// Every translate `t` in the multiset with `(P + t)` meeting the closed
    /// box, ordered by lattice coordinates and then offset index.
    pub fn enumerate(&self, polygon: &CsPolygon, bbox: &BBox) -> Vec<Translate> {
        let pb = polygon.bbox();
        // P + t meets the box only if t lies in box - bbox(P).
        let window = BBox::new(
            &bbox.xmin - &pb.xmax,
            &bbox.xmax - &pb.xmin,
            &bbox.ymin - &pb.ymax,
            &bbox.ymax - &pb.ymin,
        );
        let shifted: Vec<BBox> = self
            .offsets
            .iter()
            .map(|o| {
                BBox::new(&window.xmin - &o.x, &window.xmax - &o.x, &window.ymin - &o.y, &window.ymax - &o.y)
            })
            .collect();
        let ranges: Vec<_> = shifted.iter().map(|b| self.lattice.coordinate_window(b)).collect();
        let lo1 = ranges.iter().map(|r| &r.0).min().expect("nonempty").clone();
        let hi1 = ranges.iter().map(|r| &r.1).max().expect("nonempty").clone();
        let lo2 = ranges.iter().map(|r| &r.2).min().expect("nonempty").clone();
        let hi2 = ranges.iter().map(|r| &r.3).max().expect("nonempty").clone();

        let mut out = Vec::new();
        let mut z1 = lo1;
        while z1 <= hi1 {
            let mut z2 = lo2.clone();
            while z2 <= hi2 {
                let base = self.lattice.lattice_point(&z1, &z2);
                for (k, o) in self.offsets.iter().enumerate() {
                    let (z1_ok, z2_ok) = (z1 >= ranges[k].0 && z1 <= ranges[k].1, z2 >= ranges[k].2 && z2 <= ranges[k].3);
                    if !(z1_ok && z2_ok) {
                        continue;
                    }
                    let t = &base + o;
                    if polygon_meets_box(polygon, &t, bbox) {
                        out.push(Translate { z1: z1.clone(), z2: z2.clone(), offset: k, vector: t });
                    }
                }
                z2 += 1;
            }
            z1 += 1;
        }
        out
    }

    /// Distinct points of `V + X` in the half-open fundamental domain,
    /// sorted lexicographically.
    pub fn vertex_orbit(&self, polygon: &CsPolygon) -> Vec<Point> {
        let mut pts: Vec<Point> = self
            .offsets
            .iter()
            .flat_map(|o| polygon.vertices().iter().map(move |v| self.lattice.reduce(&(v + o))))
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }
}

impl fmt::Display for TranslateMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "basis {} offsets", self.lattice)?;
        for o in &self.offsets {
            write!(f, " {o}")?;
        }
        Ok(())
    }
}

/// Exact closed intersection test between `P + t` and a box, by separating
/// axes (box axes and the polygon's edge normals).
pub fn polygon_meets_box(polygon: &CsPolygon, t: &Vec2, bbox: &BBox) -> bool {
    let pb = polygon.bbox();
    if &pb.xmax + &t.x < bbox.xmin
        || &pb.xmin + &t.x > bbox.xmax
        || &pb.ymax + &t.y < bbox.ymin
        || &pb.ymin + &t.y > bbox.ymax
    {
        return false;
    }
    let corners = bbox.corners();
    for e in polygon.edges() {
        let (a, b) = (&e.a + t, &e.b + t);
        if corners
            .iter()
            .all(|c| crate::geometry::orientation(&a, &b, c) == Orientation::Right)
        {
            return false;
        }
    }
    true
}
