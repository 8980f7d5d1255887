//! Rotated surface-code geometry.
//!
//! A distance-`d` patch uses `2d^2 - 1` physical qubits: `d^2` data qubits on
//! the integer grid `1..=d` squared, and `d^2 - 1` measure (stabilizer)
//! qubits on the half-integer plaquette centers. X-type plaquettes terminate
//! on the top/bottom boundaries and Z-type plaquettes on the left/right
//! boundaries, so the logical Z operator runs along a horizontal data row.
//!
//! All coordinates are multiples of 0.5 and are stored internally in
//! half-units so they hash and compare exactly.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A lattice coordinate on the half-integer grid.
///
/// Data qubits sit at integer coordinates, measure qubits at odd multiples
/// of 0.5 in both axes.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    /// x in half-units (so `hx = 5` means x = 2.5).
    hx: i32,
    /// y in half-units.
    hy: i32,
}

impl Coord {
    /// Build from float coordinates; both must be multiples of 0.5.
    pub fn new(x: f64, y: f64) -> Result<Coord> {
        let hx = (x * 2.0).round();
        let hy = (y * 2.0).round();
        if (hx - x * 2.0).abs() > 1e-9 || (hy - y * 2.0).abs() > 1e-9 {
            return Err(Error::InvalidConfig(format!(
                "coordinate ({x}, {y}) is not on the half-integer grid"
            )));
        }
        Ok(Coord {
            hx: hx as i32,
            hy: hy as i32,
        })
    }

    pub(crate) fn from_half_units(hx: i32, hy: i32) -> Coord {
        Coord { hx, hy }
    }

    pub fn x(&self) -> f64 {
        f64::from(self.hx) / 2.0
    }

    pub fn y(&self) -> f64 {
        f64::from(self.hy) / 2.0
    }

    /// True when both components are integers (a data-qubit coordinate).
    pub fn is_data_type(&self) -> bool {
        self.hx % 2 == 0 && self.hy % 2 == 0
    }

    /// True when both components are odd multiples of 0.5.
    pub fn is_measure_type(&self) -> bool {
        self.hx % 2 != 0 && self.hy % 2 != 0
    }

    /// Offset by (dx, dy) given in ordinary (not half-unit) coordinates.
    pub fn offset(&self, dx: f64, dy: f64) -> Coord {
        Coord {
            hx: self.hx + (dx * 2.0).round() as i32,
            hy: self.hy + (dy * 2.0).round() as i32,
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x(), self.y())
    }
}

impl fmt::Debug for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coord({}, {})", self.x(), self.y())
    }
}

impl Serialize for Coord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serde::Serializer::serialize_struct(s, "Coord", 2)?;
        serde::ser::SerializeStruct::serialize_field(&mut st, "x", &self.x())?;
        serde::ser::SerializeStruct::serialize_field(&mut st, "y", &self.y())?;
        serde::ser::SerializeStruct::end(st)
    }
}

impl<'de> Deserialize<'de> for Coord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Coord, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            x: f64,
            y: f64,
        }
        let raw = Raw::deserialize(d)?;
        Coord::new(raw.x, raw.y).map_err(serde::de::Error::custom)
    }
}

/// Role of a physical qubit in the patch.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum QubitKind {
    Data,
    MeasureX,
    MeasureZ,
}

impl QubitKind {
    pub fn is_measure(&self) -> bool {
        matches!(self, QubitKind::MeasureX | QubitKind::MeasureZ)
    }

    fn name(&self) -> &'static str {
        match self {
            QubitKind::Data => "data",
            QubitKind::MeasureX => "measure-X",
            QubitKind::MeasureZ => "measure-Z",
        }
    }
}

/// One physical qubit: stable index, coordinate, and role.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Qubit {
    pub index: u32,
    pub coord: Coord,
    pub kind: QubitKind,
}

/// Geometry of a distance-`d` rotated surface code.
///
/// Immutable after construction; indices are assigned row-major over
/// `(y, x)` so serialization is stable across runs.
#[derive(Clone, Debug)]
pub struct Lattice {
    d: u32,
    qubits: Vec<Qubit>,
    index_of: HashMap<Coord, u32>,
}

/// Special placement keywords accepted wherever a coordinate is expected.
pub const LOCATION_KEYWORDS: [&str; 4] =
    ["center data", "center measure", "edge data", "edge measure"];

/// A qubit location given either by keyword or by explicit coordinate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocationSpec {
    Keyword(String),
    At(Coord),
}

impl LocationSpec {
    /// Parse `"center data"`-style keywords or `"x,y"` coordinates.
    pub fn parse(s: &str) -> Result<LocationSpec> {
        let t = s.trim();
        if LOCATION_KEYWORDS.contains(&t) {
            return Ok(LocationSpec::Keyword(t.to_string()));
        }
        if let Some((xs, ys)) = t.split_once(',') {
            let x: f64 = xs
                .trim()
                .parse()
                .map_err(|_| Error::UnknownKeyword(s.to_string()))?;
            let y: f64 = ys
                .trim()
                .parse()
                .map_err(|_| Error::UnknownKeyword(s.to_string()))?;
            return Ok(LocationSpec::At(Coord::new(x, y)?));
        }
        Err(Error::UnknownKeyword(s.to_string()))
    }
}

impl fmt::Display for LocationSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocationSpec::Keyword(k) => write!(f, "{k}"),
            LocationSpec::At(c) => write!(f, "{},{}", c.x(), c.y()),
        }
    }
}

/// Construct the distance-`d` lattice. `d` must be odd and at least 3.
pub fn build_lattice(d: u32) -> Result<Lattice> {
    Lattice::new(d)
}

impl Lattice {
    pub fn new(d: u32) -> Result<Lattice> {
        if d < 3 || d.is_multiple_of(2) {
            return Err(Error::InvalidDistance(d));
        }
        let di = d as i32;
        let mut coords: Vec<(Coord, QubitKind)> = Vec::new();
        for y in 1..=di {
            for x in 1..=di {
                coords.push((Coord::from_half_units(2 * x, 2 * y), QubitKind::Data));
            }
        }
        // Plaquette centers (i + 0.5, j + 0.5), i, j in 0..=d. The color
        // alternation plus the boundary filters put X-type checks on the
        // top/bottom boundaries and Z-type on the left/right boundaries.
        for j in 0..=di {
            for i in 0..=di {
                let kind = if (i + j) % 2 == 0 {
                    QubitKind::MeasureX
                } else {
                    QubitKind::MeasureZ
                };
                let on_lr = i == 0 || i == di;
                let on_tb = j == 0 || j == di;
                if on_lr && kind != QubitKind::MeasureZ {
                    continue;
                }
                if on_tb && kind != QubitKind::MeasureX {
                    continue;
                }
                if on_lr && on_tb {
                    continue;
                }
                coords.push((Coord::from_half_units(2 * i + 1, 2 * j + 1), kind));
            }
        }
        coords.sort_by_key(|(c, _)| (c.hy, c.hx));
        let qubits: Vec<Qubit> = coords
            .into_iter()
            .enumerate()
            .map(|(i, (coord, kind))| Qubit {
                index: i as u32,
                coord,
                kind,
            })
            .collect();
        let index_of = qubits.iter().map(|q| (q.coord, q.index)).collect();
        let lat = Lattice {
            d,
            qubits,
            index_of,
        };
        debug_assert_eq!(lat.num_qubits(), 2 * d * d - 1);
        Ok(lat)
    }

    pub fn distance(&self) -> u32 {
        self.d
    }

    pub fn num_qubits(&self) -> u32 {
        self.qubits.len() as u32
    }

    pub fn qubits(&self) -> &[Qubit] {
        &self.qubits
    }

    pub fn data_qubits(&self) -> impl Iterator<Item = &Qubit> {
        self.qubits.iter().filter(|q| q.kind == QubitKind::Data)
    }

    pub fn measure_qubits(&self) -> impl Iterator<Item = &Qubit> {
        self.qubits.iter().filter(|q| q.kind.is_measure())
    }

    /// Map a coordinate to its qubit index.
    pub fn coord_to_index(&self, coord: Coord) -> Result<u32> {
        self.index_of
            .get(&coord)
            .copied()
            .ok_or_else(|| Error::CoordNotOnLattice(coord.to_string(), self.d))
    }

    /// Map a qubit index back to its coordinate. Panics on out-of-range
    /// indices, which cannot be produced by this crate's own types.
    pub fn index_to_coord(&self, index: u32) -> Coord {
        self.qubits[index as usize].coord
    }

    pub fn kind_at(&self, coord: Coord) -> Option<QubitKind> {
        self.index_of.get(&coord).map(|&i| self.qubits[i as usize].kind)
    }

    /// Data-qubit neighbors of a measure qubit, in a fixed diagonal order
    /// (NE, NW, SE, SW with +y treated as north). Boundary checks have 2.
    pub fn stabilizer_support(&self, measure: Coord) -> Vec<Coord> {
        [(0.5, 0.5), (-0.5, 0.5), (0.5, -0.5), (-0.5, -0.5)]
            .iter()
            .map(|&(dx, dy)| measure.offset(dx, dy))
            .filter(|c| self.index_of.contains_key(c))
            .collect()
    }

    /// The data row carrying the logical Z observable (y = 1).
    pub fn logical_z_row(&self) -> Vec<Coord> {
        (1..=self.d as i32)
            .map(|x| Coord::from_half_units(2 * x, 2))
            .collect()
    }

    /// Resolve a keyword or explicit coordinate to a concrete qubit
    /// coordinate on this lattice.
    pub fn resolve_location(&self, spec: &LocationSpec) -> Result<Coord> {
        match spec {
            LocationSpec::At(c) => {
                self.coord_to_index(*c)?;
                Ok(*c)
            }
            LocationSpec::Keyword(k) => {
                let mid = (self.d as i32 + 1) / 2; // (d+1)/2, integer since d is odd
                let coord = match k.as_str() {
                    "center data" => Coord::from_half_units(2 * mid, 2 * mid),
                    "center measure" => Coord::from_half_units(2 * mid + 1, 2 * mid + 1),
                    "edge data" => Coord::from_half_units(2, 2 * mid),
                    "edge measure" => {
                        // Weight-2 Z check on the left boundary nearest the
                        // boundary midpoint; the centers there sit at odd j.
                        let j = if mid % 2 == 1 { mid } else { mid - 1 };
                        Coord::from_half_units(1, 2 * j + 1)
                    }
                    _ => return Err(Error::UnknownKeyword(k.clone())),
                };
                let kind = self
                    .kind_at(coord)
                    .ok_or_else(|| Error::CoordNotOnLattice(coord.to_string(), self.d))?;
                let want_measure = k.ends_with("measure");
                if want_measure != kind.is_measure() {
                    return Err(Error::ParityMismatch {
                        coord: coord.to_string(),
                        expected: if want_measure { "measure" } else { "data" },
                        actual: kind.name(),
                    });
                }
                Ok(coord)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_distance() {
        for d in [3u32, 5, 7, 9, 11, 13, 15, 17] {
            let lat = build_lattice(d).unwrap();
            let data = lat.data_qubits().count() as u32;
            let mx = lat
                .qubits()
                .iter()
                .filter(|q| q.kind == QubitKind::MeasureX)
                .count() as u32;
            let mz = lat
                .qubits()
                .iter()
                .filter(|q| q.kind == QubitKind::MeasureZ)
                .count() as u32;
            assert_eq!(lat.num_qubits(), 2 * d * d - 1);
            assert_eq!(data, d * d);
            assert_eq!(mx, (d * d - 1) / 2);
            assert_eq!(mz, (d * d - 1) / 2);
        }
    }

    #[test]
    fn rejects_bad_distance() {
        assert!(build_lattice(2).is_err());
        assert!(build_lattice(4).is_err());
        assert!(build_lattice(1).is_err());
        assert!(build_lattice(0).is_err());
    }

    #[test]
    fn d3_has_17_qubits_and_d5_49() {
        assert_eq!(build_lattice(3).unwrap().num_qubits(), 17);
        assert_eq!(build_lattice(5).unwrap().num_qubits(), 49);
        assert_eq!(build_lattice(17).unwrap().num_qubits(), 577);
    }

    #[test]
    fn coord_index_bijection() {
        for d in [3u32, 5, 7] {
            let lat = build_lattice(d).unwrap();
            for q in lat.qubits() {
                assert_eq!(lat.coord_to_index(q.coord).unwrap(), q.index);
                assert_eq!(lat.index_to_coord(q.index), q.coord);
            }
            assert!(lat.coord_to_index(Coord::new(0.5, 0.5).unwrap()).is_err());
        }
    }

    #[test]
    fn first_qubit_in_row_major_order_is_index_zero() {
        let lat = build_lattice(3).unwrap();
        let q0 = &lat.qubits()[0];
        assert_eq!(q0.index, 0);
        assert_eq!(q0.coord, Coord::new(2.5, 0.5).unwrap());
        assert_eq!(q0.kind, QubitKind::MeasureX);
    }

    #[test]
    fn supports_have_weight_2_or_4() {
        for d in [3u32, 5, 9] {
            let lat = build_lattice(d).unwrap();
            for m in lat.measure_qubits() {
                let w = lat.stabilizer_support(m.coord).len();
                assert!(w == 2 || w == 4, "weight {w} at {}", m.coord);
            }
        }
    }

    #[test]
    fn stabilizers_commute() {
        // Every X support overlaps every Z support on an even number of
        // data qubits.
        for d in [3u32, 5, 7] {
            let lat = build_lattice(d).unwrap();
            let xs: Vec<Vec<Coord>> = lat
                .qubits()
                .iter()
                .filter(|q| q.kind == QubitKind::MeasureX)
                .map(|q| lat.stabilizer_support(q.coord))
                .collect();
            let zs: Vec<Vec<Coord>> = lat
                .qubits()
                .iter()
                .filter(|q| q.kind == QubitKind::MeasureZ)
                .map(|q| lat.stabilizer_support(q.coord))
                .collect();
            for sx in &xs {
                for sz in &zs {
                    let overlap = sx.iter().filter(|c| sz.contains(c)).count();
                    assert_eq!(overlap % 2, 0);
                }
            }
        }
    }

    #[test]
    fn logical_z_row_commutes_with_x_checks() {
        for d in [3u32, 5, 7, 9] {
            let lat = build_lattice(d).unwrap();
            let row = lat.logical_z_row();
            assert_eq!(row.len(), d as usize);
            for q in lat.qubits().iter().filter(|q| q.kind == QubitKind::MeasureX) {
                let support = lat.stabilizer_support(q.coord);
                let overlap = support.iter().filter(|c| row.contains(c)).count();
                assert_eq!(overlap % 2, 0, "X check at {} overlaps row oddly", q.coord);
            }
        }
    }

    #[test]
    fn keyword_resolution() {
        let lat5 = build_lattice(5).unwrap();
        let c = |x, y| Coord::new(x, y).unwrap();
        let kw = |s: &str| LocationSpec::Keyword(s.to_string());
        assert_eq!(lat5.resolve_location(&kw("center data")).unwrap(), c(3.0, 3.0));
        assert_eq!(
            lat5.resolve_location(&kw("center measure")).unwrap(),
            c(3.5, 3.5)
        );
        assert_eq!(lat5.resolve_location(&kw("edge data")).unwrap(), c(1.0, 3.0));
        assert_eq!(
            lat5.resolve_location(&kw("edge measure")).unwrap(),
            c(0.5, 3.5)
        );

        let lat3 = build_lattice(3).unwrap();
        assert_eq!(lat3.resolve_location(&kw("center data")).unwrap(), c(2.0, 2.0));
        assert_eq!(
            lat3.resolve_location(&kw("center measure")).unwrap(),
            c(2.5, 2.5)
        );
        // (d+1)/2 = 2 is even at d=3, so the nearest left-boundary Z check
        // sits half a step below the midpoint.
        assert_eq!(
            lat3.resolve_location(&kw("edge measure")).unwrap(),
            c(0.5, 1.5)
        );

        assert!(lat3.resolve_location(&kw("middle data")).is_err());
        // Explicit coordinates pass through untouched.
        assert_eq!(
            lat3.resolve_location(&LocationSpec::At(c(1.0, 1.0))).unwrap(),
            c(1.0, 1.0)
        );
        assert!(lat3
            .resolve_location(&LocationSpec::At(c(0.5, 0.5)))
            .is_err());
    }

    #[test]
    fn keywords_resolve_on_every_distance() {
        for d in [3u32, 5, 7, 9, 11, 13, 15, 17] {
            let lat = build_lattice(d).unwrap();
            for k in LOCATION_KEYWORDS {
                let spec = LocationSpec::Keyword(k.to_string());
                let coord = lat.resolve_location(&spec).unwrap();
                let kind = lat.kind_at(coord).unwrap();
                assert_eq!(k.ends_with("measure"), kind.is_measure(), "{k} at d={d}");
                assert_eq!(k.ends_with("data"), kind == QubitKind::Data, "{k} at d={d}");
            }
        }
    }

    #[test]
    fn location_spec_parsing() {
        assert_eq!(
            LocationSpec::parse("center data").unwrap(),
            LocationSpec::Keyword("center data".into())
        );
        assert_eq!(
            LocationSpec::parse("2.5,0.5").unwrap(),
            LocationSpec::At(Coord::new(2.5, 0.5).unwrap())
        );
        assert!(LocationSpec::parse("corner data").is_err());
        assert!(LocationSpec::parse("1.3,2").is_err());
    }
}
