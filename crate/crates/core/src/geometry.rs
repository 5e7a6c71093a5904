//! Exact planar kernel: points, orientation, segments and validated
//! centrally symmetric convex polygons.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::rational::{self, int, Rat};

/// A point (or vector) with exact rational coordinates.
///
/// Ordering is lexicographic on `(x, y)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

/// Displacements share the representation of points.
pub type Vec2 = Point;

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    /// Integer coordinates.
    pub fn int(x: i64, y: i64) -> Self {
        Point::new(int(x), int(y))
    }

    pub fn origin() -> Self {
        Point::int(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn cross(&self, other: &Point) -> Rat {
        &self.x * &other.y - &self.y * &other.x
    }

    pub fn dot(&self, other: &Point) -> Rat {
        &self.x * &other.x + &self.y * &other.y
    }

    pub fn scale(&self, s: &Rat) -> Point {
        Point::new(&self.x * s, &self.y * s)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point::new(
            rational::half(&(&self.x + &other.x)),
            rational::half(&(&self.y + &other.y)),
        )
    }

    /// True if both are nonzero and point the same way.
    pub fn same_direction(&self, other: &Point) -> bool {
        !self.is_zero()
            && !other.is_zero()
            && self.cross(other).is_zero()
            && self.dot(other).is_positive()
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", rational::format(&self.x), rational::format(&self.y))
    }
}

impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Add<&Point> for &Point {
    type Output = Point;
    fn add(self, rhs: &Point) -> Point {
        Point::new(&self.x + &rhs.x, &self.y + &rhs.y)
    }
}

impl Sub<&Point> for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point::new(&self.x - &rhs.x, &self.y - &rhs.y)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, rhs: Point) -> Point {
        &self + &rhs
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, rhs: Point) -> Point {
        &self - &rhs
    }
}

impl Neg for &Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-&self.x, -&self.y)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        -&self
    }
}

impl Mul<&Rat> for &Point {
    type Output = Point;
    fn mul(self, rhs: &Rat) -> Point {
        self.scale(rhs)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Left,
    Right,
    Collinear,
}

/// Sign of `(q - p) x (r - p)`.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Orientation {
    match (q - p).cross(&(r - p)).cmp(&Rat::zero()) {
        Ordering::Greater => Orientation::Left,
        Ordering::Less => Orientation::Right,
        Ordering::Equal => Orientation::Collinear,
    }
}

/// Upper (0) or lower (1) half plane of directions, with the positive x-axis
/// in the upper half and the negative x-axis in the lower one.
fn half_plane(v: &Vec2) -> u8 {
    if v.y.is_positive() || (v.y.is_zero() && v.x.is_positive()) {
        0
    } else {
        1
    }
}

/// Compares directions by their polar angle in `[0, 2pi)`.
pub fn cmp_direction(a: &Vec2, b: &Vec2) -> Ordering {
    half_plane(a).cmp(&half_plane(b)).then_with(|| {
        // Same half: a before b iff b is counterclockwise of a.
        Rat::zero().cmp(&a.cross(b))
    })
}

/// Compares `a` and `b` by counterclockwise angle measured from `base`,
/// with angles taken in `[0, 2pi)`.
pub fn cmp_direction_from(base: &Vec2, a: &Vec2, b: &Vec2) -> Ordering {
    let side = |v: &Vec2| -> u8 {
        let c = base.cross(v);
        if c.is_positive() || (c.is_zero() && base.dot(v).is_positive()) {
            0
        } else {
            1
        }
    };
    side(a)
        .cmp(&side(b))
        .then_with(|| Rat::zero().cmp(&a.cross(b)))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("degenerate segment: both endpoints are {0}")]
    DegenerateSegment(Point),
    #[error("a polygon needs an even number of vertices, got {0}")]
    OddVertexCount(usize),
    #[error("a polygon needs at least 4 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertices {0}, {1} and {2} are collinear")]
    CollinearVertices(Point, Point, Point),
    #[error("polygon is not convex at vertex {0}")]
    NotConvex(Point),
    #[error("polygon is not centrally symmetric: vertex {index} has no mirror image through {center}")]
    NotCentrallySymmetric { index: usize, center: Point },
}

/// A closed segment with distinct endpoints.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeometryError> {
        if a == b {
            return Err(GeometryError::DegenerateSegment(a));
        }
        Ok(Segment { a, b })
    }

    pub fn direction(&self) -> Vec2 {
        &self.b - &self.a
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(&self.b)
    }

    /// Point at parameter `t`, where `t = 0` is `a` and `t = 1` is `b`.
    pub fn at(&self, t: &Rat) -> Point {
        &self.a + &self.direction().scale(t)
    }

    pub fn translate(&self, t: &Vec2) -> Segment {
        Segment { a: &self.a + t, b: &self.b + t }
    }

    /// True if `p` lies on the closed segment.
    pub fn contains(&self, p: &Point) -> bool {
        let d = self.direction();
        let w = p - &self.a;
        if !d.cross(&w).is_zero() {
            return false;
        }
        let t = w.dot(&d);
        !t.is_negative() && t <= d.dot(&d)
    }
}

impl Serialize for Segment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// Where a point sits relative to a polygon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Interior,
    /// In the relative interior of edge `edge` (from vertex `edge` to
    /// vertex `edge + 1`), at parameter `t` in `(0, 1)`.
    OnEdge { edge: usize, t: Rat },
    AtVertex(usize),
    Exterior,
}

impl Location {
    pub fn on_boundary(&self) -> bool {
        matches!(self, Location::OnEdge { .. } | Location::AtVertex(_))
    }

    pub fn in_closure(&self) -> bool {
        !matches!(self, Location::Exterior)
    }
}

/// The inner angle of a polygon at a boundary point: the region swept
/// counterclockwise from ray `start` to ray `end`.
///
/// At a vertex the sweep is strictly less than a half turn; on the relative
/// interior of an edge it is exactly a half turn (`end == -start`).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sector {
    pub start: Vec2,
    pub end: Vec2,
}

impl Sector {
    pub fn is_flat(&self) -> bool {
        self.start.cross(&self.end).is_zero()
    }

    /// Whether direction `d` lies in the half-open sweep `[start, end)`.
    pub fn contains_direction(&self, d: &Vec2) -> bool {
        cmp_direction_from(&self.start, d, &self.end) == Ordering::Less
    }

    /// Whether direction `d` lies strictly inside the sweep.
    pub fn contains_direction_strictly(&self, d: &Vec2) -> bool {
        !self.start.same_direction(d) && self.contains_direction(d)
    }

    pub fn negate(&self) -> Sector {
        Sector { start: -&self.start, end: -&self.end }
    }
}

/// A strictly convex, centrally symmetric polygon with `2m` vertices stored
/// counterclockwise.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CsPolygon {
    vertices: Vec<Point>,
    center: Point,
}

impl CsPolygon {
    /// Validates `vertices` as a centrally symmetric convex polygon.
    ///
    /// Clockwise input is reversed (keeping the first vertex first).
    pub fn new(mut vertices: Vec<Point>) -> Result<Self, GeometryError> {
        let n = vertices.len();
        if n % 2 == 1 {
            return Err(GeometryError::OddVertexCount(n));
        }
        if n < 4 {
            return Err(GeometryError::TooFewVertices(n));
        }
        if signed_double_area(&vertices).is_negative() {
            vertices[1..].reverse();
        }
        for i in 0..n {
            let (a, b) = (&vertices[i], &vertices[(i + 1) % n]);
            for j in 0..n {
                if j == i || j == (i + 1) % n {
                    continue;
                }
                match orientation(a, b, &vertices[j]) {
                    Orientation::Left => {}
                    Orientation::Collinear => {
                        let c = &vertices[j];
                        return Err(GeometryError::CollinearVertices(a.clone(), b.clone(), c.clone()));
                    }
                    Orientation::Right => return Err(GeometryError::NotConvex(b.clone())),
                }
            }
        }
        let m = n / 2;
        let center = vertices[0].midpoint(&vertices[m]);
        let twice = center.scale(&int(2));
        for i in 0..m {
            if vertices[i + m] != &twice - &vertices[i] {
                return Err(GeometryError::NotCentrallySymmetric { index: i, center });
            }
        }
        Ok(CsPolygon { vertices, center })
    }

    /// Convenience constructor from integer pairs.
    pub fn from_ints(coords: &[(i64, i64)]) -> Result<Self, GeometryError> {
        Self::new(coords.iter().map(|&(x, y)| Point::int(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Point {
        &self.vertices[i % self.vertices.len()]
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    /// Half the number of vertices.
    pub fn m(&self) -> usize {
        self.vertices.len() / 2
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> Segment {
        Segment { a: self.vertex(i).clone(), b: self.vertex(i + 1).clone() }
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.len()).map(move |i| self.edge(i))
    }

    pub fn area(&self) -> Rat {
        rational::half(&signed_double_area(&self.vertices))
    }

    pub fn translate(&self, t: &Vec2) -> CsPolygon {
        CsPolygon {
            vertices: self.vertices.iter().map(|v| v + t).collect(),
            center: &self.center + t,
        }
    }

    /// The same polygon moved so that its center is the origin.
    pub fn centered(&self) -> CsPolygon {
        self.translate(&-&self.center)
    }

    pub fn bbox(&self) -> crate::lattice::BBox {
        crate::lattice::BBox::around(self.vertices.iter()).expect("polygon has vertices")
    }

    /// Exact classification of `p` using orientation tests only.
    pub fn locate(&self, p: &Point) -> Location {
        let n = self.len();
        let mut on_edge = None;
        for i in 0..n {
            match orientation(self.vertex(i), self.vertex(i + 1), p) {
                Orientation::Right => return Location::Exterior,
                Orientation::Left => {}
                Orientation::Collinear => {
                    if p == self.vertex(i) {
                        return Location::AtVertex(i);
                    }
                    if p == self.vertex(i + 1) {
                        return Location::AtVertex((i + 1) % n);
                    }
                    on_edge = Some(i);
                }
            }
        }
        match on_edge {
            None => Location::Interior,
            Some(edge) => {
                let e = self.edge(edge);
                let d = e.direction();
                let t = (p - &e.a).dot(&d) / d.dot(&d);
                Location::OnEdge { edge, t }
            }
        }
    }

    /// Inner angle at vertex `i`, swept counterclockwise from the outgoing
    /// edge direction to the direction back along the incoming edge.
    pub fn angle_sector(&self, i: usize) -> Sector {
        let n = self.len();
        let v = self.vertex(i);
        Sector {
            start: self.vertex(i + 1) - v,
            end: self.vertex(i + n - 1) - v,
        }
    }

    /// The half-turn sector at a relative interior point of edge `i`.
    pub fn edge_sector(&self, i: usize) -> Sector {
        let d = self.edge(i).direction();
        Sector { end: -&d, start: d }
    }
}

impl fmt::Display for CsPolygon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Twice the signed shoelace area.
pub fn signed_double_area(vertices: &[Point]) -> Rat {
    let n = vertices.len();
    (0..n).fold(Rat::zero(), |acc, i| acc + vertices[i].cross(&vertices[(i + 1) % n]))
}
