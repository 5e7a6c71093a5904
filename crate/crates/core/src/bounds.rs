//! Lower bounds on the least tiling multiplicity of centrally symmetric
//! `2m`-gons.

use std::fmt;

use serde::Serialize;

use crate::geometry::CsPolygon;

/// Where a bound comes from.
///
/// The display labels are the tags used in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BoundSource {
    /// Parallelograms and centrally symmetric hexagons tile with multiplicity one.
    Classical,
    /// `m - 1` for even `m`, `m - 2` for odd `m`.
    GeneralFormula,
    Octagon,
    Decagon,
    Dodecagon,
    Tetradecagon,
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundSource::Classical => "Fedorov",
            BoundSource::GeneralFormula => "Theorem 1",
            BoundSource::Octagon => "Lemma 3",
            BoundSource::Decagon => "Lemma 4",
            BoundSource::Dodecagon => "Lemma 5",
            BoundSource::Tetradecagon => "Lemma 6",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Bound {
    pub value: u32,
    pub source: BoundSource,
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.value, self.source)
    }
}

/// `m - 1` for even `m`, `m - 2` for odd `m`; equivalently
/// `ceil((m-3)/2) + ceil((m-1)/2)`.
///
/// For `m < 4` the formula is below one and the bound is clamped to 1.
pub fn general_bound(m: usize) -> u32 {
    assert!(m >= 2, "a centrally symmetric polygon has m >= 2");
    let raw = if m % 2 == 0 { m - 1 } else { m - 2 };
    raw.max(1) as u32
}

/// The sharpest known lower bound for centrally symmetric `2m`-gons.
pub fn best_known_bound(m: usize) -> Bound {
    assert!(m >= 2, "a centrally symmetric polygon has m >= 2");
    let (value, source) = match m {
        2 | 3 => (1, BoundSource::Classical),
        4 => (5, BoundSource::Octagon),
        5 => (5, BoundSource::Decagon),
        6 => (6, BoundSource::Dodecagon),
        7 => (6, BoundSource::Tetradecagon),
        _ => (general_bound(m), BoundSource::GeneralFormula),
    };
    Bound { value, source }
}

/// 1 for parallelograms and hexagons, 5 for everything else.
pub fn polygon_bound(polygon: &CsPolygon) -> u32 {
    if polygon.m() <= 3 {
        1
    } else {
        5
    }
}

/// Bounds for `m = 2..=max_m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundTable {
    pub rows: Vec<(usize, Bound)>,
}

impl BoundTable {
    pub fn up_to(max_m: usize) -> Self {
        BoundTable { rows: (2..=max_m).map(|m| (m, best_known_bound(m))).collect() }
    }
}

impl fmt::Display for BoundTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (m, b) in &self.rows {
            writeln!(f, "m={m} (2m={}): {b}", 2 * m)?;
        }
        Ok(())
    }
}

/// Interval `[lower, upper]` known for the least multiplicity of a
/// particular polygon; `upper` comes from an explicit tiling, if any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MultiplicityInterval {
    pub lower: Bound,
    pub upper: Option<u32>,
}

impl fmt::Display for MultiplicityInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.upper {
            Some(u) => write!(f, "[{}, {u}]", self.lower),
            None => write!(f, "[{}, unknown]", self.lower),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn general_formula() {
        assert_eq!(general_bound(4), 3);
        assert_eq!(general_bound(5), 3);
        assert_eq!(general_bound(6), 5);
        assert_eq!(general_bound(7), 5);
        assert_eq!(general_bound(10), 9);
        assert_eq!(general_bound(11), 9);
        for m in 4..40usize {
            let by_ceils = (m - 3).div_ceil(2) + (m - 1).div_ceil(2);
            assert_eq!(general_bound(m) as usize, by_ceils);
        }
    }

    #[test]
    fn table() {
        assert_eq!(best_known_bound(4).to_string(), "5 (Lemma 3)");
        assert_eq!(best_known_bound(5).value, 5);
        assert_eq!(best_known_bound(6).to_string(), "6 (Lemma 5)");
        assert_eq!(best_known_bound(7).value, 6);
        assert_eq!(best_known_bound(10).to_string(), "9 (Theorem 1)");
        assert_eq!(best_known_bound(2).source, BoundSource::Classical);
        for m in 2..64 {
            assert!(best_known_bound(m).value >= general_bound(m));
        }
    }

    #[test]
    fn by_polygon() {
        let par = CsPolygon::from_ints(&[(0, 0), (2, 0), (3, 1), (1, 1)]).unwrap();
        assert_eq!(polygon_bound(&par), 1);
        let hex = CsPolygon::from_ints(&[(0, 0), (1, 0), (2, 1), (2, 2), (1, 2), (0, 1)]).unwrap();
        assert_eq!(polygon_bound(&hex), 1);
        let oct = CsPolygon::from_ints(&[(1, 0), (2, 0), (3, 1), (3, 2), (2, 3), (1, 3), (0, 2), (0, 1)]).unwrap();
        assert_eq!(polygon_bound(&oct), 5);
    }

    #[test]
    fn table_rows() {
        let t = BoundTable::up_to(8);
        assert_eq!(t.rows.len(), 7);
        assert_eq!(t.rows.last().unwrap().1.value, 7);
    }
}
