//! Planar arrangement of segments over a parallelogram domain.
//!
//! Construction:
//!
//! 1. clip every segment to the domain's bounding box and add the four
//!    domain edges;
//! 2. union overlapping collinear segments;
//! 3. compute all pairwise intersections exactly;
//! 4. cut the bounding box into vertical slabs at every event abscissa and
//!    split each slab into trapezoids between consecutive segments;
//! 5. glue trapezoids of neighbouring slabs that share a piece of wall not
//!    covered by a vertical segment; the glued classes are the faces.
//!
//! Every trapezoid carries an exact sample point strictly inside it, and a
//! face is either entirely inside or entirely outside the domain because the
//! domain edges are part of the arrangement.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::geometry::{Point, Segment};
use crate::lattice::{BBox, Parallelogram};
use crate::rational::{half, Rat};

/// `y = slope * x + intercept` for a non-vertical segment.
#[derive(Debug, Clone)]
struct LineFn {
    slope: Rat,
    intercept: Rat,
}

impl LineFn {
    fn of(s: &Segment) -> Option<LineFn> {
        let dx = &s.b.x - &s.a.x;
        if dx.is_zero() {
            return None;
        }
        let slope = (&s.b.y - &s.a.y) / dx;
        let intercept = &s.a.y - &slope * &s.a.x;
        Some(LineFn { slope, intercept })
    }

    fn y(&self, x: &Rat) -> Rat {
        &self.slope * x + &self.intercept
    }
}

/// A trapezoid of the vertical decomposition: the part of the slab
/// `x_left < x < x_right` strictly between two segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trapezoid {
    pub x_left: Rat,
    pub x_right: Rat,
    /// Index of the bounding segment below / above, into [`Arrangement::segments`].
    pub lower: usize,
    pub upper: usize,
    /// `(lower y, upper y)` on the left wall.
    pub left: (Rat, Rat),
    /// `(lower y, upper y)` on the right wall.
    pub right: (Rat, Rat),
    pub sample: Point,
    pub face: usize,
}

impl Trapezoid {
    pub fn area(&self) -> Rat {
        let hl = &self.left.1 - &self.left.0;
        let hr = &self.right.1 - &self.right.0;
        half(&((&self.x_right - &self.x_left) * (hl + hr)))
    }

    /// Corner list, counterclockwise, with repeated corners removed.
    pub fn corners(&self) -> Vec<Point> {
        let mut c = vec![
            Point::new(self.x_left.clone(), self.left.0.clone()),
            Point::new(self.x_right.clone(), self.right.0.clone()),
        ];
        if self.right.1 != self.right.0 {
            c.push(Point::new(self.x_right.clone(), self.right.1.clone()));
        }
        if self.left.1 != self.left.0 {
            c.push(Point::new(self.x_left.clone(), self.left.1.clone()));
        }
        c
    }

    /// The point at relative position `(s, t)` in `(0,1)^2`: `s` across the
    /// slab, `t` from the lower to the upper segment.
    pub fn interior_point(&self, s: &Rat, t: &Rat) -> Point {
        let x = &self.x_left + s * (&self.x_right - &self.x_left);
        let lo = &self.left.0 + s * (&self.right.0 - &self.left.0);
        let hi = &self.left.1 + s * (&self.right.1 - &self.left.1);
        let y = &lo + t * (hi - &lo);
        Point::new(x, y)
    }
}

/// A connected 2-cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Face {
    pub trapezoids: Vec<usize>,
    /// Sample of the first trapezoid; strictly inside the face.
    pub sample: Point,
    pub area: Rat,
    pub in_domain: bool,
}

#[derive(Debug, Clone)]
pub struct Arrangement {
    pub domain: Parallelogram,
    /// Input segments after clipping and collinear merging, plus the domain
    /// edges.
    pub segments: Vec<Segment>,
    pub vertices: Vec<Point>,
    /// Segments split at every crossing; they meet only at endpoints.
    pub edges: Vec<Segment>,
    pub trapezoids: Vec<Trapezoid>,
    pub faces: Vec<Face>,
}

impl Arrangement {
    /// Faces inside the domain, in construction order.
    pub fn cells(&self) -> impl Iterator<Item = &Face> + '_ {
        self.faces.iter().filter(|f| f.in_domain)
    }

    pub fn cell_count(&self) -> usize {
        self.cells().count()
    }

    /// All faces of the bounding box, including those outside the domain.
    pub fn box_face_count(&self) -> usize {
        self.faces.len()
    }
}

/// Clips a segment to a closed box (Liang-Barsky, exact).
pub fn clip_segment(s: &Segment, b: &BBox) -> Option<Segment> {
    let d = s.direction();
    let mut t0 = Rat::zero();
    let mut t1 = Rat::one();
    let checks = [
        (-&d.x, &s.a.x - &b.xmin),
        (d.x.clone(), &b.xmax - &s.a.x),
        (-&d.y, &s.a.y - &b.ymin),
        (d.y.clone(), &b.ymax - &s.a.y),
    ];
    for (p, q) in checks {
        if p.is_zero() {
            if q.is_negative() {
                return None;
            }
            continue;
        }
        let r = &q / &p;
        if p.is_negative() {
            if r > t1 {
                return None;
            }
            if r > t0 {
                t0 = r;
            }
        } else {
            if r < t0 {
                return None;
            }
            if r < t1 {
                t1 = r;
            }
        }
    }
    if t0 >= t1 {
        return None;
    }
    Segment::new(s.at(&t0), s.at(&t1)).ok()
}

/// Unions overlapping or touching collinear segments. Output order is
/// deterministic (by supporting line, then position along it).
pub fn merge_collinear(segments: &[Segment]) -> Vec<Segment> {
    // Key: direction scaled so its first nonzero coordinate is 1, plus the
    // offset of the line; parameter along the line is x (or y if vertical).
    let mut lines: BTreeMap<(Point, Rat), Vec<(Rat, Rat)>> = BTreeMap::new();
    for s in segments {
        let d = s.direction();
        let dir = if d.x.is_zero() {
            Point::new(Rat::zero(), Rat::one())
        } else {
            Point::new(Rat::one(), &d.y / &d.x)
        };
        let offset = dir.cross(&s.a);
        let (pa, pb) = if d.x.is_zero() {
            (s.a.y.clone(), s.b.y.clone())
        } else {
            (s.a.x.clone(), s.b.x.clone())
        };
        let iv = if pa <= pb { (pa, pb) } else { (pb, pa) };
        lines.entry((dir, offset)).or_default().push(iv);
    }
    let mut out = Vec::new();
    for ((dir, offset), mut ivs) in lines {
        ivs.sort();
        let mut merged: Vec<(Rat, Rat)> = Vec::new();
        for (lo, hi) in ivs {
            match merged.last_mut() {
                Some(last) if lo <= last.1 => {
                    if hi > last.1 {
                        last.1 = hi;
                    }
                }
                _ => merged.push((lo, hi)),
            }
        }
        // Reconstruct points: dir x p = offset.
        for (lo, hi) in merged {
            let at = |t: &Rat| -> Point {
                if dir.x.is_zero() {
                    // x = -offset for the vertical direction (0,1): (0,1) x (x,y) = -x.
                    Point::new(-&offset, t.clone())
                } else {
                    // (1,s) x (x,y) = y - s x = offset.
                    Point::new(t.clone(), &offset + &dir.y * t)
                }
            };
            out.push(Segment { a: at(&lo), b: at(&hi) });
        }
    }
    out
}

/// Intersection point of two non-parallel closed segments, if any.
pub fn segment_intersection(s: &Segment, t: &Segment) -> Option<Point> {
    let r = s.direction();
    let q = t.direction();
    let denom = r.cross(&q);
    if denom.is_zero() {
        return None;
    }
    let w = &t.a - &s.a;
    let u = w.cross(&q) / &denom;
    let v = w.cross(&r) / &denom;
    let unit = |x: &Rat| !x.is_negative() && *x <= Rat::one();
    (unit(&u) && unit(&v)).then(|| s.at(&u))
}

fn boxes_overlap(a: &BBox, b: &BBox) -> bool {
    a.xmin <= b.xmax && b.xmin <= a.xmax && a.ymin <= b.ymax && b.ymin <= a.ymax
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, mut i: usize) -> usize {
        while self.0[i] != i {
            self.0[i] = self.0[self.0[i]];
            i = self.0[i];
        }
        i
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller index is the root so component order follows
            // construction order.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Builds the arrangement of `segments` restricted to `domain`.
pub fn build_arrangement(segments: &[Segment], domain: &Parallelogram) -> Arrangement {
    let bbox = domain.bbox();
    let corners = domain.corners();
    let mut clipped: Vec<Segment> = segments.iter().filter_map(|s| clip_segment(s, &bbox)).collect();
    for i in 0..4 {
        clipped.push(Segment { a: corners[i].clone(), b: corners[(i + 1) % 4].clone() });
    }
    let segs = merge_collinear(&clipped);
    let n = segs.len();

    // Pairwise intersections.
    let boxes: Vec<BBox> = segs.iter().map(|s| BBox::around([&s.a, &s.b]).expect("2 points")).collect();
    let mut on_segment: Vec<Vec<Point>> = segs.iter().map(|s| vec![s.a.clone(), s.b.clone()]).collect();
    let mut xs: BTreeSet<Rat> = BTreeSet::new();
    for s in &segs {
        xs.insert(s.a.x.clone());
        xs.insert(s.b.x.clone());
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if !boxes_overlap(&boxes[i], &boxes[j]) {
                continue;
            }
            if let Some(p) = segment_intersection(&segs[i], &segs[j]) {
                xs.insert(p.x.clone());
                on_segment[i].push(p.clone());
                on_segment[j].push(p);
            }
        }
    }

    let mut vertex_set: BTreeSet<Point> = BTreeSet::new();
    let mut edges = Vec::new();
    for (s, pts) in segs.iter().zip(on_segment.iter_mut()) {
        let d = s.direction();
        pts.sort_by_key(|p| (p - &s.a).dot(&d));
        pts.dedup();
        for w in pts.windows(2) {
            edges.push(Segment { a: w[0].clone(), b: w[1].clone() });
        }
        vertex_set.extend(pts.iter().cloned());
    }

    // Slab decomposition.
    let xs: Vec<Rat> = xs.into_iter().filter(|x| *x >= bbox.xmin && *x <= bbox.xmax).collect();
    let lines: Vec<Option<LineFn>> = segs.iter().map(LineFn::of).collect();
    let xrange: Vec<(Rat, Rat)> = segs
        .iter()
        .map(|s| if s.a.x <= s.b.x { (s.a.x.clone(), s.b.x.clone()) } else { (s.b.x.clone(), s.a.x.clone()) })
        .collect();
    let mut by_start: Vec<usize> = (0..n).filter(|&i| lines[i].is_some()).collect();
    by_start.sort_by(|&a, &b| xrange[a].0.cmp(&xrange[b].0));

    let mut trapezoids: Vec<Trapezoid> = Vec::new();
    // Trapezoid index range per slab.
    let mut slab_ranges: Vec<(usize, usize)> = Vec::new();
    let mut active: Vec<usize> = Vec::new();
    let mut next = 0;
    for w in xs.windows(2) {
        let (xl, xr) = (&w[0], &w[1]);
        while next < by_start.len() && xrange[by_start[next]].0 <= *xl {
            active.push(by_start[next]);
            next += 1;
        }
        active.retain(|&i| xrange[i].1 >= *xr);
        let xm = half(&(xl + xr));
        let mut column: Vec<(Rat, usize)> = active
            .iter()
            .map(|&i| (lines[i].as_ref().expect("non-vertical").y(&xm), i))
            .collect();
        column.sort();
        debug_assert!(column.windows(2).all(|p| p[0].0 < p[1].0), "overlapping segments in a slab");
        let first = trapezoids.len();
        for pair in column.windows(2) {
            let (ylo, lo) = (&pair[0].0, pair[0].1);
            let (yhi, hi) = (&pair[1].0, pair[1].1);
            let (llo, lhi) = (lines[lo].as_ref().expect("line"), lines[hi].as_ref().expect("line"));
            let sample = Point::new(xm.clone(), half(&(ylo + yhi)));
            trapezoids.push(Trapezoid {
                x_left: xl.clone(),
                x_right: xr.clone(),
                lower: lo,
                upper: hi,
                left: (llo.y(xl), lhi.y(xl)),
                right: (llo.y(xr), lhi.y(xr)),
                sample,
                face: usize::MAX,
            });
        }
        slab_ranges.push((first, trapezoids.len()));
    }

    // Glue across walls.
    let mut walls: BTreeMap<Rat, Vec<(Rat, Rat)>> = BTreeMap::new();
    for (s, line) in segs.iter().zip(&lines) {
        if line.is_none() {
            let iv = if s.a.y <= s.b.y { (s.a.y.clone(), s.b.y.clone()) } else { (s.b.y.clone(), s.a.y.clone()) };
            walls.entry(s.a.x.clone()).or_default().push(iv);
        }
    }
    for ivs in walls.values_mut() {
        ivs.sort();
    }
    let mut uf = UnionFind::new(trapezoids.len());
    for k in 1..slab_ranges.len() {
        let x = &xs[k];
        let (l0, l1) = slab_ranges[k - 1];
        let (r0, r1) = slab_ranges[k];
        let wall = walls.get(x).map(Vec::as_slice).unwrap_or(&[]);
        let (mut i, mut j) = (l0, r0);
        while i < l1 && j < r1 {
            let (a_lo, a_hi) = &trapezoids[i].right;
            let (b_lo, b_hi) = &trapezoids[j].left;
            let lo = a_lo.max(b_lo);
            let hi = a_hi.min(b_hi);
            if lo < hi && !wall.iter().any(|(wl, wh)| wl <= lo && hi <= wh) {
                uf.union(i, j);
            }
            if a_hi <= b_hi {
                i += 1;
            } else {
                j += 1;
            }
        }
    }

    let mut face_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut faces: Vec<Face> = Vec::new();
    for t in 0..trapezoids.len() {
        let root = uf.find(t);
        let f = *face_of_root.entry(root).or_insert_with(|| {
            let s = trapezoids[t].sample.clone();
            let in_domain = domain.contains_strictly(&s);
            faces.push(Face { trapezoids: Vec::new(), sample: s, area: Rat::zero(), in_domain });
            faces.len() - 1
        });
        trapezoids[t].face = f;
        faces[f].trapezoids.push(t);
        faces[f].area += trapezoids[t].area();
    }

    Arrangement {
        domain: domain.clone(),
        segments: segs,
        vertices: vertex_set.into_iter().collect(),
        edges,
        trapezoids,
        faces,
    }
}

/// Total area of the in-domain cells; equals the domain area.
pub fn covered_area(arr: &Arrangement) -> Rat {
    arr.cells().fold(Rat::zero(), |acc, f| acc + &f.area)
}
