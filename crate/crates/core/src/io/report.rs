//! Report documents for the command line.
//!
//! Text reports are `key: value` lines in a fixed order; JSON reports carry
//! the same fields. Rationals are always written exactly (`p/q`). Timing is
//! only included on request, so reports for the same input are
//! byte-identical.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{best_known_bound, general_bound, polygon_bound, Bound, MultiplicityInterval};
use crate::coverage::{infer_k, ser_rat, verify_k_fold, CoverageReport, Verdict};
use crate::geometry::Point;
use crate::io::format::Instance;
use crate::rational::{self, Rat};
use crate::vertex::{vertex_report, EdgeCover};

pub const TOOL: &str = concat!("ktile ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InstanceEcho {
    pub polygon: Vec<Point>,
    pub basis: [Point; 2],
    pub offsets: Vec<Point>,
    pub k: Option<u32>,
    pub m: usize,
    #[serde(serialize_with = "ser_rat")]
    pub area: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub det: Rat,
}

/// Where the multiplicity being checked came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KSource {
    Flag,
    File,
    Area,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageSection {
    pub k: Option<u32>,
    pub k_source: Option<KSource>,
    pub report: Option<CoverageReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WheelSummary {
    pub size: usize,
    pub winding: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexAnalysis {
    #[serde(serialize_with = "ser_rat")]
    pub phi: Rat,
    pub varphi: u32,
    pub ell: u32,
    pub wheels: Vec<WheelSummary>,
    #[serde(serialize_with = "ser_rat")]
    pub multiplicity: Rat,
    pub multiplicity_ok: bool,
    pub kappa: Option<u32>,
    pub kappa_error: Option<String>,
    pub required_edge_cover: Option<u32>,
    pub edge_covers: Vec<EdgeCover>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexSummary {
    pub point: Point,
    pub analysis: Option<VertexAnalysis>,
    pub error: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VertexSection {
    pub k: u32,
    pub vertices: Vec<VertexSummary>,
}

impl VertexSection {
    pub fn passed(&self) -> bool {
        self.vertices.iter().all(|v| v.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsSummary {
    pub m: usize,
    pub general_formula: u32,
    pub best_known: Bound,
    pub by_polygon: u32,
    pub interval: MultiplicityInterval,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportDocument {
    pub tool: String,
    pub instance: InstanceEcho,
    pub coverage: Option<CoverageSection>,
    pub vertices: Option<VertexSection>,
    pub bounds: BoundsSummary,
    pub timing_us: Option<u64>,
}

/// The multiplicity to check: the explicit value, else the file's claim,
/// else the one forced by the area condition.
pub fn resolve_k(instance: &Instance, explicit: Option<u32>) -> Result<(u32, KSource), String> {
    if let Some(k) = explicit {
        return Ok((k, KSource::Flag));
    }
    if let Some(k) = instance.config.k {
        return Ok((k, KSource::File));
    }
    infer_k(&instance.polygon, &instance.multiset).map(|k| (k, KSource::Area)).map_err(|e| e.to_string())
}

impl ReportDocument {
    pub fn new(instance: &Instance) -> Self {
        let c = &instance.config;
        let m = instance.polygon.m();
        ReportDocument {
            tool: TOOL.to_string(),
            instance: InstanceEcho {
                polygon: c.polygon.clone(),
                basis: [c.basis.0.clone(), c.basis.1.clone()],
                offsets: c.offsets.clone(),
                k: c.k,
                m,
                area: instance.polygon.area(),
                det: instance.multiset.lattice().det(),
            },
            coverage: None,
            vertices: None,
            bounds: BoundsSummary {
                m,
                general_formula: general_bound(m),
                best_known: best_known_bound(m),
                by_polygon: polygon_bound(&instance.polygon),
                interval: MultiplicityInterval { lower: best_known_bound(m), upper: None },
            },
            timing_us: None,
        }
    }

    pub fn with_coverage(mut self, instance: &Instance, k: Option<u32>) -> Self {
        let section = match resolve_k(instance, k) {
            Err(e) => CoverageSection { k: None, k_source: None, report: None, error: Some(e) },
            Ok((k, source)) => match verify_k_fold(&instance.polygon, &instance.multiset, k) {
                Ok(r) => {
                    if r.is_tiling() {
                        self.bounds.interval.upper = Some(k);
                    }
                    CoverageSection { k: Some(k), k_source: Some(source), report: Some(r), error: None }
                }
                Err(e) => CoverageSection { k: Some(k), k_source: Some(source), report: None, error: Some(e.to_string()) },
            },
        };
        self.coverage = Some(section);
        self
    }

    pub fn with_vertices(mut self, instance: &Instance, k: u32) -> Self {
        let (p, x) = (&instance.polygon, &instance.multiset);
        let vertices = x
            .vertex_orbit(p)
            .par_iter()
            .map(|v| match vertex_report(p, x, v, k) {
                Ok(r) => {
                    let passed = r.passed();
                    let s = &r.star;
                    let analysis = VertexAnalysis {
                        phi: s.phi(),
                        varphi: s.varphi(),
                        ell: s.ell(),
                        wheels: s.wheels.iter().map(|w| WheelSummary { size: w.members.len(), winding: w.winding }).collect(),
                        multiplicity: r.multiplicity.clone(),
                        multiplicity_ok: r.multiplicity_ok,
                        kappa: r.kappa.as_ref().ok().copied(),
                        kappa_error: r.kappa.as_ref().err().map(|e| e.to_string()),
                        required_edge_cover: r.required_edge_cover,
                        edge_covers: r.edge_covers.clone(),
                    };
                    VertexSummary { point: v.clone(), analysis: Some(analysis), error: None, passed }
                }
                Err(e) => VertexSummary { point: v.clone(), analysis: None, error: Some(e.to_string()), passed: false },
            })
            .collect();
        self.vertices = Some(VertexSection { k, vertices });
        self
    }

    pub fn verified(&self) -> bool {
        self.coverage.as_ref().and_then(|c| c.report.as_ref()).is_some_and(CoverageReport::is_tiling)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let pts = |v: &[Point]| v.iter().map(Point::to_string).collect::<Vec<_>>().join(" ");
        let i = &self.instance;
        let _ = writeln!(out, "tool: {}", self.tool);
        let _ = writeln!(out, "instance.polygon: {}", pts(&i.polygon));
        let _ = writeln!(out, "instance.basis: {}", pts(&i.basis));
        let _ = writeln!(out, "instance.offsets: {}", pts(&i.offsets));
        if let Some(k) = i.k {
            let _ = writeln!(out, "instance.k: {k}");
        }
        let _ = writeln!(out, "instance.m: {}", i.m);
        let _ = writeln!(out, "instance.area: {}", rational::format(&i.area));
        let _ = writeln!(out, "instance.det: {}", rational::format(&i.det));

        if let Some(c) = &self.coverage {
            if let (Some(k), Some(src)) = (c.k, c.k_source) {
                let src = match src {
                    KSource::Flag => "flag",
                    KSource::File => "file",
                    KSource::Area => "area",
                };
                let _ = writeln!(out, "coverage.k: {k} ({src})");
            }
            if let Some(e) = &c.error {
                let _ = writeln!(out, "coverage.error: {e}");
            }
            if let Some(r) = &c.report {
                let _ = writeln!(out, "coverage.verdict: {}", r.verdict);
                if let Verdict::NotTiling { witness, multiplicity } = &r.verdict {
                    let _ = writeln!(out, "coverage.witness: {witness}");
                    let _ = writeln!(out, "coverage.witness_multiplicity: {multiplicity}");
                }
                let _ = writeln!(out, "coverage.k_min: {}", r.k_min);
                let _ = writeln!(out, "coverage.k_max: {}", r.k_max);
                let _ = writeln!(out, "coverage.cells: {}", r.cell_count);
                let _ = writeln!(out, "coverage.translates: {}", r.translate_count);
                let _ = writeln!(out, "coverage.segments: {}", r.segment_count);
                let hist: Vec<String> = r.histogram.iter().map(|(m, n)| format!("{m}:{n}")).collect();
                let _ = writeln!(out, "coverage.histogram: {}", hist.join(" "));
                let a = &r.area_check;
                let _ = writeln!(
                    out,
                    "coverage.area_check: {} {} {}",
                    rational::format(&a.covered),
                    if a.equal { "=" } else { "!=" },
                    rational::format(&a.expected)
                );
            }
        }

        if let Some(vs) = &self.vertices {
            let _ = writeln!(out, "vertices.k: {}", vs.k);
            let _ = writeln!(out, "vertices.count: {}", vs.vertices.len());
            for (n, v) in vs.vertices.iter().enumerate() {
                let _ = writeln!(out, "vertex[{n}].point: {}", v.point);
                if let Some(e) = &v.error {
                    let _ = writeln!(out, "vertex[{n}].error: {e}");
                }
                if let Some(a) = &v.analysis {
                    let _ = writeln!(out, "vertex[{n}].phi: {}", rational::format(&a.phi));
                    let _ = writeln!(out, "vertex[{n}].varphi: {}", a.varphi);
                    let _ = writeln!(out, "vertex[{n}].ell: {}", a.ell);
                    let wheels: Vec<String> = a.wheels.iter().map(|w| format!("{}x{}", w.size, w.winding)).collect();
                    let _ = writeln!(out, "vertex[{n}].wheels: {}", wheels.join(" "));
                    let _ = writeln!(
                        out,
                        "vertex[{n}].phi_plus_varphi: {} ({})",
                        rational::format(&a.multiplicity),
                        if a.multiplicity_ok { "ok" } else { "FAIL" }
                    );
                    match (&a.kappa, &a.kappa_error) {
                        (Some(k), _) => {
                            let _ = writeln!(out, "vertex[{n}].kappa: {k}");
                        }
                        (None, Some(e)) => {
                            let _ = writeln!(out, "vertex[{n}].kappa: FAIL {e}");
                        }
                        _ => {}
                    }
                    if let Some(req) = a.required_edge_cover {
                        let counts: Vec<String> = a.edge_covers.iter().map(|e| e.count.to_string()).collect();
                        let _ = writeln!(out, "vertex[{n}].edge_covers: {} (need {req})", counts.join(" "));
                    }
                }
                let _ = writeln!(out, "vertex[{n}].passed: {}", v.passed);
            }
        }

        let b = &self.bounds;
        let _ = writeln!(out, "bounds.general_formula: {}", b.general_formula);
        let _ = writeln!(out, "bounds.best_known: {}", b.best_known);
        let _ = writeln!(out, "bounds.by_polygon: {}", b.by_polygon);
        let _ = writeln!(out, "bounds.interval: {}", b.interval);
        if let Some(t) = self.timing_us {
            let _ = writeln!(out, "timing_us: {t}");
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::load_fixture;

    #[test]
    fn square_report_text() {
        let inst = load_fixture("unit_square");
        let doc = ReportDocument::new(&inst).with_coverage(&inst, None);
        let text = doc.to_text();
        assert!(text.contains("coverage.k: 1 (file)\n"));
        assert!(text.contains("coverage.verdict: ExactKFold(1)\n"));
        assert!(text.contains("bounds.interval: [1 (Fedorov), 1]\n"));
        assert!(doc.verified());
    }

    #[test]
    fn area_mismatch_is_reported() {
        let inst = load_fixture("unit_square");
        let doc = ReportDocument::new(&inst).with_coverage(&inst, Some(3));
        assert!(doc.to_text().contains("coverage.error: area condition fails"));
        assert!(!doc.verified());
    }

    #[test]
    fn json_has_exact_numbers() {
        let inst = load_fixture("square_twofold");
        let doc = ReportDocument::new(&inst).with_coverage(&inst, None).with_vertices(&inst, 2);
        let json = doc.to_json();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["instance"]["det"], "1/2");
        assert_eq!(v["coverage"]["report"]["verdict"]["ExactKFold"], 2);
        assert!(!json.replace(TOOL, "").contains('.'), "{json}");
    }
}
