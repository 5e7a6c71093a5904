//! Local structure of a multiple tiling at the vertices of `V + X`.
//!
//! At a vertex `v` every translate whose boundary passes through `v`
//! contributes the inner angle of the tile there: a convex sector at a
//! vertex of the translate, a half-turn on the relative interior of one of
//! its edges. In a multiple tiling these sectors chain ray to ray into
//! closed cycles, the adjacent wheels, each sweeping a whole number of
//! turns. The total number of turns plus the number of translates holding
//! `v` in their interior is the tiling multiplicity.

use std::fmt;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::geometry::{cmp_direction_from, CsPolygon, Location, Point, Sector, Segment};
use crate::lattice::{BBox, Translate, TranslateMultiset};
use crate::rational::{self, int, Rat};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VertexError {
    #[error("{0} is not a vertex of any translate")]
    NotAVertex(Point),
    #[error("no sector continues the wheel at {v} from ray {ray}")]
    WheelChainingFailed { v: Point, ray: Point },
    #[error("edge {edge} does not end at {v}")]
    InvalidEdge { v: Point, edge: Segment },
    #[error("edge covering counts need m >= 4, polygon has m = {0}")]
    EdgeCoverNeedsOctagon(usize),
    #[error("(2*phi - ell)/(m - 1) = ({phi2} - {ell})/{den} is not a positive integer")]
    NoValidKappa { phi2: Rat, ell: u32, den: usize },
}

/// How `v` sits on the boundary of a translate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Incidence {
    AtVertex(usize),
    OnEdge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StarMember {
    pub translate: Translate,
    pub incidence: Incidence,
    pub sector: Sector,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Wheel {
    /// Indices into [`VertexStar::boundary`], in chaining order.
    pub members: Vec<usize>,
    /// Number of full turns swept by the chained sectors.
    pub winding: u32,
}

/// Everything the tiling looks like at one point `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexStar {
    pub v: Point,
    pub m: usize,
    /// Translates with `v` on their boundary, in enumeration order.
    pub boundary: Vec<StarMember>,
    /// Translates with `v` in their interior.
    pub interior: Vec<Translate>,
    pub wheels: Vec<Wheel>,
}

impl VertexStar {
    /// Total winding of all wheels.
    pub fn phi(&self) -> Rat {
        int(self.wheels.iter().map(|w| w.winding as i64).sum())
    }

    /// Number of translates holding `v` in their interior.
    pub fn varphi(&self) -> u32 {
        self.interior.len() as u32
    }

    /// Number of translate edges passing through `v` in their relative interior.
    pub fn ell(&self) -> u32 {
        self.boundary.iter().filter(|s| matches!(s.incidence, Incidence::OnEdge(_))).count() as u32
    }

    pub fn kappa(&self) -> Result<u32, VertexError> {
        kappa_from_winding(&self.phi(), self.m, self.ell())
    }
}

/// Collects the translates through `v`, without wheels.
pub fn translate_star(polygon: &CsPolygon, x: &TranslateMultiset, v: &Point) -> Result<VertexStar, VertexError> {
    let mut boundary = Vec::new();
    let mut interior = Vec::new();
    for t in x.enumerate(polygon, &BBox::point(v)) {
        match polygon.locate(&(v - &t.vector)) {
            Location::Interior => interior.push(t),
            Location::AtVertex(i) => {
                boundary.push(StarMember { sector: polygon.angle_sector(i), incidence: Incidence::AtVertex(i), translate: t })
            }
            Location::OnEdge { edge, .. } => boundary.push(StarMember {
                sector: polygon.edge_sector(edge),
                incidence: Incidence::OnEdge(edge),
                translate: t,
            }),
            Location::Exterior => {}
        }
    }
    if !boundary.iter().any(|s| matches!(s.incidence, Incidence::AtVertex(_))) {
        return Err(VertexError::NotAVertex(v.clone()));
    }
    Ok(VertexStar { v: v.clone(), m: polygon.m(), boundary, interior, wheels: Vec::new() })
}

/// Turns swept by a closed chain of sectors: the number of sectors whose
/// half-open sweep contains the positive x direction.
fn winding(sectors: &[&Sector]) -> u32 {
    let reference = Point::int(1, 0);
    sectors.iter().filter(|s| s.contains_direction(&reference)).count() as u32
}

/// Partitions the boundary members into wheels. When several unused sectors
/// open on the current ray, the narrowest one is taken.
pub fn wheel_partition(star: &VertexStar) -> Result<Vec<Wheel>, VertexError> {
    wheel_partition_with(star, |_| 0)
}

/// Like [`wheel_partition`] but lets `choose` pick among the candidate
/// continuations (given narrowest first) by returning an index into them.
/// The total winding does not depend on the choices made.
pub fn wheel_partition_with(
    star: &VertexStar,
    mut choose: impl FnMut(&[usize]) -> usize,
) -> Result<Vec<Wheel>, VertexError> {
    let n = star.boundary.len();
    let mut used = vec![false; n];
    let mut wheels = Vec::new();
    while let Some(first) = used.iter().position(|u| !u) {
        used[first] = true;
        let mut chain = vec![first];
        let start_ray = &star.boundary[first].sector.start;
        loop {
            let ray = &star.boundary[*chain.last().expect("nonempty")].sector.end;
            if ray.same_direction(start_ray) {
                break;
            }
            let mut candidates: Vec<usize> =
                (0..n).filter(|&j| !used[j] && star.boundary[j].sector.start.same_direction(ray)).collect();
            if candidates.is_empty() {
                return Err(VertexError::WheelChainingFailed { v: star.v.clone(), ray: ray.clone() });
            }
            candidates.sort_by(|&a, &b| {
                let (sa, sb) = (&star.boundary[a].sector, &star.boundary[b].sector);
                cmp_direction_from(ray, &sa.end, &sb.end).then(a.cmp(&b))
            });
            let next = candidates[choose(&candidates).min(candidates.len() - 1)];
            used[next] = true;
            chain.push(next);
        }
        let sectors: Vec<&Sector> = chain.iter().map(|&i| &star.boundary[i].sector).collect();
        wheels.push(Wheel { winding: winding(&sectors), members: chain });
    }
    Ok(wheels)
}

/// Full analysis at `v`: the star with its wheel partition.
pub fn analyze_vertex(polygon: &CsPolygon, x: &TranslateMultiset, v: &Point) -> Result<VertexStar, VertexError> {
    let mut star = translate_star(polygon, x, v)?;
    star.wheels = wheel_partition(&star)?;
    Ok(star)
}

/// The positive integer `kappa` with `phi = kappa*(m-1)/2 + ell/2`.
pub fn kappa_from_winding(phi: &Rat, m: usize, ell: u32) -> Result<u32, VertexError> {
    let phi2 = phi * int(2);
    let num = &phi2 - int(ell as i64);
    let den = m.saturating_sub(1).max(1);
    let q = &num / int(den as i64);
    let fail = || VertexError::NoValidKappa { phi2: phi2.clone(), ell, den };
    if m < 2 || !q.is_integer() || q <= Rat::zero() {
        return Err(fail());
    }
    q.to_integer().to_u32().ok_or_else(fail)
}

/// `ceil((m - 3) / 2)`, the least number of translates that must swallow
/// each edge leaving a vertex (for `m >= 4`).
pub fn required_edge_cover(m: usize) -> u32 {
    (m.saturating_sub(3) as u32).div_ceil(2)
}

/// The edges of `Gamma + X` having `v` as an endpoint, as segments from `v`.
pub fn incident_edges(polygon: &CsPolygon, star: &VertexStar) -> Vec<Segment> {
    let mut out: Vec<Segment> = Vec::new();
    for s in &star.boundary {
        if let Incidence::AtVertex(i) = s.incidence {
            for far in [polygon.vertex(i + 1), polygon.vertex(i + polygon.len() - 1)] {
                let seg = Segment { a: star.v.clone(), b: far + &s.translate.vector };
                if !out.contains(&seg) {
                    out.push(seg);
                }
            }
        }
    }
    out.sort();
    out
}

/// Counts the translates through `v` (on their boundary) that contain the
/// rest of edge `g` in their interior.
///
/// Containment of `g \ {v}` is decided by two exact tests: the far endpoint
/// lies in the closed translate and the midpoint of `g` lies in the open
/// one. By convexity this puts the relative interior of `g` in the open
/// translate.
pub fn edge_cover_count(polygon: &CsPolygon, star: &VertexStar, g: &Segment) -> Result<u32, VertexError> {
    let far = if g.a == star.v {
        &g.b
    } else if g.b == star.v {
        &g.a
    } else {
        return Err(VertexError::InvalidEdge { v: star.v.clone(), edge: g.clone() });
    };
    let mid = g.midpoint();
    Ok(star
        .boundary
        .iter()
        .filter(|s| {
            let t = &s.translate.vector;
            polygon.locate(&(far - t)).in_closure() && polygon.locate(&(&mid - t)) == Location::Interior
        })
        .count() as u32)
}

/// Edge covering count at `v` for an edge `g` ending at `v`, for polygons
/// with `m >= 4`.
pub fn edge_cover_at(polygon: &CsPolygon, x: &TranslateMultiset, v: &Point, g: &Segment) -> Result<u32, VertexError> {
    if polygon.m() < 4 {
        return Err(VertexError::EdgeCoverNeedsOctagon(polygon.m()));
    }
    let star = translate_star(polygon, x, v)?;
    edge_cover_count(polygon, &star, g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EdgeCover {
    pub edge: Segment,
    pub count: u32,
}

/// Checks at one vertex against a claimed multiplicity `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexReport {
    pub star: VertexStar,
    /// `phi + varphi`.
    pub multiplicity: Rat,
    pub multiplicity_ok: bool,
    /// `None` when `m < 4`.
    pub required_edge_cover: Option<u32>,
    pub edge_covers: Vec<EdgeCover>,
    pub kappa: Result<u32, VertexError>,
}

impl VertexReport {
    pub fn edge_cover_ok(&self) -> Option<bool> {
        self.required_edge_cover
            .map(|req| self.edge_covers.iter().all(|e| e.count >= req))
    }

    pub fn kappa_ok(&self) -> bool {
        self.kappa.is_ok()
    }

    pub fn passed(&self) -> bool {
        self.multiplicity_ok && self.edge_cover_ok().unwrap_or(true) && self.kappa_ok()
    }
}

impl fmt::Display for VertexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.star;
        write!(
            f,
            "{}: phi={} varphi={} ell={} wheels={}",
            s.v,
            rational::format(&s.phi()),
            s.varphi(),
            s.ell(),
            s.wheels.len()
        )
    }
}

/// Analyzes `v` and checks it against multiplicity `k`.
pub fn vertex_report(polygon: &CsPolygon, x: &TranslateMultiset, v: &Point, k: u32) -> Result<VertexReport, VertexError> {
    let star = analyze_vertex(polygon, x, v)?;
    let multiplicity = star.phi() + int(star.varphi() as i64);
    let multiplicity_ok = multiplicity == int(k as i64);
    let required = (polygon.m() >= 4).then(|| required_edge_cover(polygon.m()));
    let edge_covers = incident_edges(polygon, &star)
        .into_iter()
        .map(|edge| {
            let count = edge_cover_count(polygon, &star, &edge).expect("edge ends at v");
            EdgeCover { edge, count }
        })
        .collect();
    let kappa = star.kappa();
    Ok(VertexReport { star, multiplicity, multiplicity_ok, required_edge_cover: required, edge_covers, kappa })
}

/// Reports for every orbit representative of `V + X`, sorted by the
/// reduced vertex.
pub fn vertex_reports(polygon: &CsPolygon, x: &TranslateMultiset, k: u32) -> Result<Vec<VertexReport>, VertexError> {
    x.vertex_orbit(polygon).par_iter().map(|v| vertex_report(polygon, x, v, k)).collect()
}
