//! Independent oracles shared by the integration tests. None of them use
//! the library's point location, translate enumeration or arrangement.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ktile::geometry::{Point, Segment};
use ktile::io::Instance;
use ktile::rational::{int, Rat};
use num_traits::{Signed, Zero};

fn cross(o: &Point, a: &Point, b: &Point) -> Rat {
    (&a.x - &o.x) * (&b.y - &o.y) - (&a.y - &o.y) * (&b.x - &o.x)
}

/// Convex polygon test by edge signs; works for either orientation.
/// Returns (inside open, inside closed).
pub fn convex_contains(vertices: &[Point], p: &Point) -> (bool, bool) {
    let n = vertices.len();
    let mut pos = 0;
    let mut neg = 0;
    for i in 0..n {
        let c = cross(&vertices[i], &vertices[(i + 1) % n], p);
        if c.is_positive() {
            pos += 1;
        } else if c.is_negative() {
            neg += 1;
        }
    }
    (pos == n || neg == n, neg == 0 || pos == 0)
}

/// Multiplicity at `p` by brute force over lattice coordinates in
/// `[-radius, radius]^2`.
pub fn brute_multiplicity(inst: &Instance, p: &Point, radius: i64) -> (u32, u32) {
    let (u1, u2) = (&inst.config.basis.0, &inst.config.basis.1);
    let mut open = 0;
    let mut closed = 0;
    for z1 in -radius..=radius {
        for z2 in -radius..=radius {
            for o in &inst.config.offsets {
                let t = Point::new(
                    int(z1) * &u1.x + int(z2) * &u2.x + &o.x,
                    int(z1) * &u1.y + int(z2) * &u2.y + &o.y,
                );
                let shifted: Vec<Point> = inst.config.polygon.iter().map(|v| v + &t).collect();
                let (a, b) = convex_contains(&shifted, p);
                open += a as u32;
                closed += b as u32;
            }
        }
    }
    (open, closed)
}

/// Lattice radius large enough for points near the fundamental domain.
pub fn radius_for(inst: &Instance) -> i64 {
    let pts: Vec<&Point> = inst.config.polygon.iter().collect();
    let span: Rat = pts
        .iter()
        .flat_map(|a| pts.iter().map(move |b| (&a.x - &b.x).abs() + (&a.y - &b.y).abs()))
        .max()
        .unwrap();
    let l = inst.multiset.lattice();
    // |coord| <= (|d| * |u|) / det along either axis.
    let norm = |u: &Point| u.x.abs() + u.y.abs();
    let reach = (span + norm(l.u1()) + norm(l.u2())) * (norm(l.u1()).max(norm(l.u2()))) / l.det();
    ktile::rational::ceil(&reach).try_into().unwrap_or(50i64) + 2
}

fn param_on(s: &Segment, p: &Point) -> Option<Rat> {
    let d = &s.b - &s.a;
    if !cross(&s.a, &s.b, p).is_zero() {
        return None;
    }
    let t = (p - &s.a).dot(&d) / d.dot(&d);
    (t >= Rat::zero() && t <= int(1)).then_some(t)
}

fn clip_unit(a: &Point, b: &Point) -> Option<(Point, Point)> {
    // Liang-Barsky against [0,1]^2.
    let d = b - a;
    let mut lo = Rat::zero();
    let mut hi = int(1);
    for (p, q) in [
        (-d.x.clone(), a.x.clone()),
        (d.x.clone(), int(1) - &a.x),
        (-d.y.clone(), a.y.clone()),
        (d.y.clone(), int(1) - &a.y),
    ] {
        if p.is_zero() {
            if q.is_negative() {
                return None;
            }
        } else {
            let r = &q / &p;
            if p.is_negative() {
                if r > lo {
                    lo = r;
                }
            } else if r < hi {
                hi = r;
            }
        }
    }
    if lo >= hi {
        return None;
    }
    Some((a + &(&d * &lo), a + &(&d * &hi)))
}

/// Number of bounded faces of the arrangement of the translate boundaries
/// inside the fundamental parallelogram, from Euler's formula
/// `F = E - V + C`. Works in lattice coordinates, where the domain is the
/// unit square.
pub fn euler_cell_count(inst: &Instance, radius: i64) -> usize {
    let l = inst.multiset.lattice();
    let to_unit = |p: &Point| {
        let (a, b) = l.coords(p);
        Point::new(a, b)
    };
    let n = inst.config.polygon.len();
    let mut segs: Vec<(Point, Point)> = Vec::new();
    for z1 in -radius..=radius {
        for z2 in -radius..=radius {
            for o in inst.multiset.offsets() {
                let t = &l.lattice_point(&z1.into(), &z2.into()) + o;
                for i in 0..n {
                    let a = to_unit(&(&inst.config.polygon[i] + &t));
                    let b = to_unit(&(&inst.config.polygon[(i + 1) % n] + &t));
                    if let Some(s) = clip_unit(&a, &b) {
                        segs.push(s);
                    }
                }
            }
        }
    }
    let c = [Point::int(0, 0), Point::int(1, 0), Point::int(1, 1), Point::int(0, 1)];
    for i in 0..4 {
        segs.push((c[i].clone(), c[(i + 1) % 4].clone()));
    }
    let segs: Vec<Segment> = segs.into_iter().map(|(a, b)| Segment { a, b }).collect();

    let mut points: BTreeSet<Point> = BTreeSet::new();
    for s in &segs {
        points.insert(s.a.clone());
        points.insert(s.b.clone());
    }
    for i in 0..segs.len() {
        for j in (i + 1)..segs.len() {
            let (s, t) = (&segs[i], &segs[j]);
            let d1 = &s.b - &s.a;
            let d2 = &t.b - &t.a;
            let den = d1.cross(&d2);
            if den.is_zero() {
                continue;
            }
            let w = &t.a - &s.a;
            let u = w.cross(&d2) / &den;
            let v = w.cross(&d1) / &den;
            if u >= Rat::zero() && u <= int(1) && v >= Rat::zero() && v <= int(1) {
                points.insert(&s.a + &(&d1 * &u));
            }
        }
    }
    let points: Vec<Point> = points.into_iter().collect();
    let mut edges: BTreeSet<(Point, Point)> = BTreeSet::new();
    for s in &segs {
        let mut on: Vec<(Rat, &Point)> = points.iter().filter_map(|p| param_on(s, p).map(|t| (t, p))).collect();
        on.sort();
        for w in on.windows(2) {
            let (a, b) = (w[0].1.clone(), w[1].1.clone());
            edges.insert(if a < b { (a, b) } else { (b, a) });
        }
    }
    let mut index: BTreeMap<&Point, usize> = BTreeMap::new();
    for (a, b) in &edges {
        let k = index.len();
        index.entry(a).or_insert(k);
        let k = index.len();
        index.entry(b).or_insert(k);
    }
    let mut parent: Vec<usize> = (0..index.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (a, b) in &edges {
        let (ra, rb) = (find(&mut parent, index[a]), find(&mut parent, index[b]));
        parent[ra] = rb;
    }
    let v = index.len();
    let comps = (0..v).filter(|&i| find(&mut parent, i) == i).count();
    edges.len() + comps - v
}
