//! Product regions: ordered products of low-complexity blocks carrying
//! the one-block-at-a-time move relation at a complexity threshold `xi`.
//! Blocks at or below the threshold are coned: any two of their states
//! are one move apart.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{self, BallLimits, MetricGraph, UNIT_WEIGHT};
use crate::kernels::{
    annulus_distance, farey_distance, marking_distance, slope_intersection, Marking11, Slope,
    SurfaceKind,
};

fn err_validation(message: impl Into<String>) -> Error {
    Error::validation("regions", message)
}

/// The homeomorphism type of one block of a product region.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BlockKind {
    #[serde(rename = "TORUS1")]
    Torus1,
    #[serde(rename = "SPHERE4")]
    Sphere4,
    #[serde(rename = "ANNULUS")]
    Annulus,
    #[serde(rename = "PANTS")]
    Pants,
}

impl BlockKind {
    pub fn complexity(&self) -> i64 {
        match self {
            BlockKind::Torus1 | BlockKind::Sphere4 => 1,
            BlockKind::Annulus => -1,
            BlockKind::Pants => 0,
        }
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BlockKind::Torus1 => "TORUS1",
            BlockKind::Sphere4 => "SPHERE4",
            BlockKind::Annulus => "ANNULUS",
            BlockKind::Pants => "PANTS",
        };
        f.write_str(name)
    }
}

impl FromStr for BlockKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<BlockKind> {
        match s.trim() {
            "TORUS1" => Ok(BlockKind::Torus1),
            "SPHERE4" => Ok(BlockKind::Sphere4),
            "ANNULUS" => Ok(BlockKind::Annulus),
            "PANTS" => Ok(BlockKind::Pants),
            other => Err(err_validation(format!(
                "unknown block kind '{other}' (expected TORUS1, SPHERE4, ANNULUS or PANTS)"
            ))),
        }
    }
}

#[derive(Deserialize)]
struct RawRegion {
    blocks: Vec<BlockKind>,
    xi: i64,
}

/// An ordered product of blocks together with the ambient complexity
/// threshold `xi`. Blocks of complexity ≤ `xi` are coned.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawRegion")]
pub struct ProductRegion {
    blocks: Vec<BlockKind>,
    xi: i64,
}

impl TryFrom<RawRegion> for ProductRegion {
    type Error = Error;

    fn try_from(raw: RawRegion) -> Result<ProductRegion> {
        make_region(raw.blocks, raw.xi)
    }
}

/// Builds and validates a region. Annulus blocks only exist at the
/// marking level `xi = −2`; four-holed-sphere blocks are refused there
/// because no marking model is provided for them.
pub fn make_region(blocks: Vec<BlockKind>, xi: i64) -> Result<ProductRegion> {
    if blocks.is_empty() {
        return Err(err_validation("region needs at least one block"));
    }
    if xi < -2 {
        return Err(err_validation(format!("threshold {xi} below -2")));
    }
    for (i, kind) in blocks.iter().enumerate() {
        match kind {
            BlockKind::Annulus if xi != -2 => {
                return Err(err_validation(format!(
                    "block {i}: annulus blocks only exist at threshold -2, got {xi}"
                )));
            }
            BlockKind::Sphere4 if xi == -2 => {
                return Err(err_validation(format!(
                    "block {i}: four-holed-sphere blocks carry no marking model at threshold -2"
                )));
            }
            _ => {}
        }
    }
    Ok(ProductRegion { blocks, xi })
}

impl ProductRegion {
    pub fn blocks(&self) -> &[BlockKind] {
        &self.blocks
    }

    pub fn xi(&self) -> i64 {
        self.xi
    }

    /// Whether block `i` is coned: every pair of its states is then at
    /// distance one.
    pub fn coned(&self, i: usize) -> bool {
        self.blocks[i].complexity() <= self.xi
    }

    /// True when every block is coned or a pants block, so the whole
    /// region has finite (in fact ≤ number of blocks) diameter.
    pub fn is_bounded(&self) -> bool {
        self.blocks
            .iter()
            .enumerate()
            .all(|(i, b)| self.coned(i) || *b == BlockKind::Pants)
    }
}

/// One block coordinate of a region point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Coord {
    Slope(Slope),
    Marking(Marking11),
    Twist(i64),
    Unit,
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::Slope(s) => write!(f, "{s}"),
            Coord::Marking(m) => write!(f, "{m}"),
            Coord::Twist(t) => write!(f, "{t}"),
            Coord::Unit => f.write_str("*"),
        }
    }
}

/// The coordinate type a block carries at the region's threshold.
fn slot_kind(region: &ProductRegion, i: usize) -> &'static str {
    match (region.blocks[i], region.xi) {
        (BlockKind::Pants, _) => "unit",
        (BlockKind::Annulus, _) => "twist",
        (BlockKind::Torus1, -2) => "marking",
        (BlockKind::Torus1 | BlockKind::Sphere4, _) => "slope",
        // Sphere4 at -2 is rejected by make_region
    }
}

fn coord_kind(c: &Coord) -> &'static str {
    match c {
        Coord::Slope(_) => "slope",
        Coord::Marking(_) => "marking",
        Coord::Twist(_) => "twist",
        Coord::Unit => "unit",
    }
}

/// A point of a product region: one coordinate per block.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(into = "Vec<String>")]
pub struct RegionPoint {
    coords: Vec<Coord>,
}

impl From<RegionPoint> for Vec<String> {
    fn from(p: RegionPoint) -> Vec<String> {
        p.coords.iter().map(|c| c.to_string()).collect()
    }
}

impl RegionPoint {
    /// Validates arity and per-slot coordinate types against the region.
    pub fn new(region: &ProductRegion, coords: Vec<Coord>) -> Result<RegionPoint> {
        if coords.len() != region.blocks.len() {
            return Err(err_validation(format!(
                "point has {} coordinates, region has {} blocks",
                coords.len(),
                region.blocks.len()
            )));
        }
        for (i, c) in coords.iter().enumerate() {
            let want = slot_kind(region, i);
            let got = coord_kind(c);
            if want != got {
                return Err(err_validation(format!(
                    "block {i} expects a {want} coordinate, got {got}"
                )));
            }
        }
        Ok(RegionPoint { coords })
    }

    pub fn coords(&self) -> &[Coord] {
        &self.coords
    }

    /// The coordinate in one block slot.
    pub fn restrict(&self, i: usize) -> Result<Coord> {
        self.coords.get(i).copied().ok_or_else(|| {
            err_validation(format!(
                "block index {i} out of range for a {}-block point",
                self.coords.len()
            ))
        })
    }

    /// Compact canonical key, comma-separated block coordinates. No
    /// coordinate rendering contains a comma, so the key splits back.
    pub fn key(&self) -> String {
        self.coords
            .iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Parses a key produced by [`RegionPoint::key`] (or hand-written in
    /// the same shape) against the region's slot types.
    pub fn from_key(region: &ProductRegion, key: &str) -> Result<RegionPoint> {
        let tokens: Vec<&str> = key.split(',').collect();
        if tokens.len() != region.blocks.len() {
            return Err(err_validation(format!(
                "key '{key}' has {} coordinates, region has {} blocks",
                tokens.len(),
                region.blocks.len()
            )));
        }
        let mut coords = Vec::with_capacity(tokens.len());
        for (i, token) in tokens.iter().enumerate() {
            let token = token.trim();
            let coord = match slot_kind(region, i) {
                "unit" => {
                    if token != "*" {
                        return Err(err_validation(format!(
                            "block {i}: pants coordinate must be '*', got '{token}'"
                        )));
                    }
                    Coord::Unit
                }
                "twist" => Coord::Twist(token.parse().map_err(|_| {
                    err_validation(format!("block {i}: bad twist coordinate '{token}'"))
                })?),
                "marking" => Coord::Marking(token.parse()?),
                "slope" => Coord::Slope(token.parse()?),
                _ => unreachable!(),
            };
            coords.push(coord);
        }
        RegionPoint::new(region, coords)
    }
}

/// Candidate coordinate pools used to keep coned-block and slope-block
/// neighbor sets finite. Marking and pants blocks need no pool.
#[derive(Clone, Debug)]
pub struct RegionUniverse {
    pub slopes: Vec<Slope>,
    pub twists: Vec<i64>,
}

impl RegionUniverse {
    /// Slopes of height ≤ `max_slope` and twists in [−range, range].
    pub fn new(max_slope: u32, twist_range: i64) -> RegionUniverse {
        RegionUniverse {
            slopes: crate::kernels::slopes_within(max_slope),
            twists: (-twist_range..=twist_range).collect(),
        }
    }
}

fn block_surface(kind: BlockKind) -> SurfaceKind {
    match kind {
        BlockKind::Torus1 => SurfaceKind::Torus1,
        BlockKind::Sphere4 => SurfaceKind::Sphere4,
        _ => unreachable!("only slope blocks have a surface kind"),
    }
}

/// All neighbors of `pt` in the region's move graph, with scaled edge
/// weights. Each neighbor differs from `pt` in exactly one block:
///
/// * coned blocks jump to every other pooled value at one unit;
/// * slope blocks move to adjacent slopes in the pool at one unit;
/// * marking blocks make their three elementary moves at one unit;
/// * annulus blocks jump to every other pooled twist `t` at `1 + |Δ|`
///   units, the exact annular distance (unit steps would undercount it);
/// * pants blocks never move.
pub fn region_neighbors(
    region: &ProductRegion,
    pt: &RegionPoint,
    universe: &RegionUniverse,
) -> Result<Vec<(RegionPoint, u64)>> {
    if pt.coords.len() != region.blocks.len() {
        return Err(err_validation(format!(
            "point has {} coordinates, region has {} blocks",
            pt.coords.len(),
            region.blocks.len()
        )));
    }
    let mut out = Vec::new();
    let mut push = |i: usize, coord: Coord, weight: u64| {
        let mut coords = pt.coords.clone();
        coords[i] = coord;
        out.push((RegionPoint { coords }, weight));
    };
    for (i, &kind) in region.blocks.iter().enumerate() {
        let current = pt.restrict(i)?;
        match current {
            Coord::Unit => {}
            Coord::Slope(x) => {
                if region.coned(i) {
                    for &s in &universe.slopes {
                        if s != x {
                            push(i, Coord::Slope(s), UNIT_WEIGHT);
                        }
                    }
                } else {
                    let threshold = block_surface(kind).adjacency_threshold();
                    for &s in &universe.slopes {
                        if s != x && slope_intersection(block_surface(kind), x, s) == threshold {
                            push(i, Coord::Slope(s), UNIT_WEIGHT);
                        }
                    }
                }
            }
            Coord::Marking(m) => {
                for mv in m.moves() {
                    push(i, Coord::Marking(mv), UNIT_WEIGHT);
                }
            }
            Coord::Twist(t) => {
                for &u in &universe.twists {
                    if u != t {
                        push(i, Coord::Twist(u), UNIT_WEIGHT * (1 + t.abs_diff(u)));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Exact distance in units between two points, summed over blocks:
/// coned blocks contribute 0 or 1, slope blocks their curve-graph
/// distance, marking blocks their move distance, annulus blocks the
/// annular distance, pants blocks 0.
pub fn region_distance_closed_form(
    region: &ProductRegion,
    x: &RegionPoint,
    y: &RegionPoint,
) -> Result<u64> {
    if x.coords.len() != region.blocks.len() || y.coords.len() != region.blocks.len() {
        return Err(err_validation(
            "point arity does not match the region's block count",
        ));
    }
    let mut total = 0u64;
    for i in 0..region.blocks.len() {
        let (a, b) = (x.restrict(i)?, y.restrict(i)?);
        if coord_kind(&a) != coord_kind(&b) {
            return Err(err_validation(format!(
                "block {i}: cannot compare a {} with a {}",
                coord_kind(&a),
                coord_kind(&b)
            )));
        }
        if region.coned(i) {
            total += u64::from(a != b);
            continue;
        }
        total += match (a, b) {
            (Coord::Unit, Coord::Unit) => 0,
            (Coord::Slope(s), Coord::Slope(t)) => farey_distance(s, t),
            (Coord::Marking(m), Coord::Marking(n)) => marking_distance(m, n)?,
            (Coord::Twist(s), Coord::Twist(t)) => annulus_distance(s, t),
            _ => unreachable!("coordinate kinds already matched"),
        };
    }
    Ok(total)
}

/// Ball of the given unit radius around `center` in the region's move
/// graph, as the full induced subgraph with canonical string keys.
pub fn region_ball(
    region: &ProductRegion,
    center: &RegionPoint,
    radius_units: u64,
    universe: &RegionUniverse,
    limits: BallLimits,
) -> Result<MetricGraph> {
    RegionPoint::new(region, center.coords.clone())?;
    let mut failure: Option<Error> = None;
    let graph = graphcore::ball(
        center,
        radius_units,
        |pt| match region_neighbors(region, pt, universe) {
            Ok(neighbors) => neighbors,
            Err(e) => {
                failure.get_or_insert(e);
                Vec::new()
            }
        },
        |pt| pt.key(),
        limits,
    );
    match failure {
        Some(e) => Err(e),
        None => graph,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{farey_geodesic, farey_neighbors, slopes_within};

    fn slope(s: &str) -> Slope {
        s.parse().unwrap()
    }

    fn slope_point(region: &ProductRegion, slopes: &[&str]) -> RegionPoint {
        RegionPoint::new(
            region,
            slopes.iter().map(|s| Coord::Slope(slope(s))).collect(),
        )
        .unwrap()
    }

    #[test]
    fn region_construction_pins() {
        assert!(make_region(vec![BlockKind::Torus1, BlockKind::Torus1], 0).is_ok());
        assert!(make_region(vec![BlockKind::Torus1, BlockKind::Annulus], 0).is_err());
        assert!(make_region(vec![BlockKind::Pants], -1).is_ok());
        assert!(make_region(vec![], 0).is_err());
        assert!(make_region(vec![BlockKind::Torus1], -3).is_err());
        assert!(make_region(vec![BlockKind::Sphere4], -2).is_err());
        assert!(make_region(vec![BlockKind::Torus1, BlockKind::Annulus], -2).is_ok());
    }

    #[test]
    fn boundedness_reflects_coning() {
        assert!(make_region(vec![BlockKind::Torus1], 1).unwrap().is_bounded());
        assert!(!make_region(vec![BlockKind::Torus1], 0).unwrap().is_bounded());
        assert!(make_region(vec![BlockKind::Pants], -1).unwrap().is_bounded());
        let mixed = make_region(vec![BlockKind::Torus1, BlockKind::Pants], 1).unwrap();
        assert!(mixed.is_bounded());
    }

    #[test]
    fn points_are_type_checked_per_slot() {
        let region = make_region(vec![BlockKind::Torus1, BlockKind::Pants], 0).unwrap();
        assert!(RegionPoint::new(&region, vec![Coord::Slope(slope("0/1")), Coord::Unit]).is_ok());
        assert!(RegionPoint::new(&region, vec![Coord::Unit, Coord::Unit]).is_err());
        assert!(RegionPoint::new(&region, vec![Coord::Slope(slope("0/1"))]).is_err());
        let marking_region = make_region(vec![BlockKind::Torus1], -2).unwrap();
        assert!(RegionPoint::new(&marking_region, vec![Coord::Slope(slope("0/1"))]).is_err());
        assert!(RegionPoint::new(
            &marking_region,
            vec![Coord::Marking("(0/1; 1/0)".parse().unwrap())]
        )
        .is_ok());
    }

    #[test]
    fn restriction_is_tuple_projection() {
        let region = make_region(vec![BlockKind::Torus1, BlockKind::Sphere4], 0).unwrap();
        let pt = slope_point(&region, &["0/1", "3/5"]);
        assert_eq!(pt.restrict(1).unwrap(), Coord::Slope(slope("3/5")));
        assert!(pt.restrict(2).is_err());
        // assembling restrictions reproduces the point
        let coords: Vec<Coord> = (0..2).map(|i| pt.restrict(i).unwrap()).collect();
        assert_eq!(RegionPoint::new(&region, coords).unwrap(), pt);
        let pants = make_region(vec![BlockKind::Pants], 0).unwrap();
        let unit = RegionPoint::new(&pants, vec![Coord::Unit]).unwrap();
        assert_eq!(unit.restrict(0).unwrap(), Coord::Unit);
    }

    #[test]
    fn keys_round_trip_every_coordinate_kind() {
        let region = make_region(
            vec![BlockKind::Torus1, BlockKind::Annulus, BlockKind::Pants],
            -2,
        )
        .unwrap();
        let pt = RegionPoint::new(
            &region,
            vec![
                Coord::Marking("(0/1; 1/0)".parse().unwrap()),
                Coord::Twist(-5),
                Coord::Unit,
            ],
        )
        .unwrap();
        assert_eq!(pt.key(), "(0/1; 1/0),-5,*");
        assert_eq!(RegionPoint::from_key(&region, &pt.key()).unwrap(), pt);

        let slopes = make_region(vec![BlockKind::Torus1, BlockKind::Sphere4], 0).unwrap();
        let pt = slope_point(&slopes, &["0/1", "3/5"]);
        assert_eq!(pt.key(), "0/1,3/5");
        assert_eq!(RegionPoint::from_key(&slopes, "0/1,3/5").unwrap(), pt);
        assert!(RegionPoint::from_key(&slopes, "0/1").is_err());
        assert!(RegionPoint::from_key(&slopes, "0/1,*").is_err());
    }

    #[test]
    fn single_slope_block_moves_are_adjacent_slopes() {
        let region = make_region(vec![BlockKind::Torus1], -1).unwrap();
        let universe = RegionUniverse::new(6, 0);
        let pt = slope_point(&region, &["0/1"]);
        let got: Vec<Slope> = region_neighbors(&region, &pt, &universe)
            .unwrap()
            .into_iter()
            .map(|(p, w)| {
                assert_eq!(w, UNIT_WEIGHT);
                match p.restrict(0).unwrap() {
                    Coord::Slope(s) => s,
                    _ => unreachable!(),
                }
            })
            .collect();
        let want = farey_neighbors(slope("0/1"), &universe.slopes);
        assert_eq!(got, want);
        assert!(!got.is_empty());
    }

    #[test]
    fn neighbors_change_exactly_one_block_and_are_symmetric() {
        let region = make_region(vec![BlockKind::Torus1, BlockKind::Torus1], 0).unwrap();
        let universe = RegionUniverse::new(4, 0);
        let pt = slope_point(&region, &["0/1", "1/0"]);
        let neighbors = region_neighbors(&region, &pt, &universe).unwrap();
        assert!(!neighbors.is_empty());
        for (n, w) in &neighbors {
            let changed = (0..2)
                .filter(|&i| n.restrict(i).unwrap() != pt.restrict(i).unwrap())
                .count();
            assert_eq!(changed, 1);
            let back = region_neighbors(&region, n, &universe).unwrap();
            assert!(back.iter().any(|(p, v)| p == &pt && v == w));
        }
    }

    #[test]
    fn coned_blocks_jump_anywhere_in_the_pool() {
        let region = make_region(vec![BlockKind::Torus1], 1).unwrap();
        let universe = RegionUniverse::new(4, 0);
        let pt = slope_point(&region, &["0/1"]);
        let neighbors = region_neighbors(&region, &pt, &universe).unwrap();
        assert_eq!(neighbors.len(), universe.slopes.len() - 1);
        assert!(neighbors.iter().all(|(_, w)| *w == UNIT_WEIGHT));
    }

    #[test]
    fn marking_blocks_make_their_three_moves() {
        let region = make_region(vec![BlockKind::Torus1], -2).unwrap();
        let universe = RegionUniverse::new(2, 0);
        let m: Marking11 = "(0/1; 1/0)".parse().unwrap();
        let pt = RegionPoint::new(&region, vec![Coord::Marking(m)]).unwrap();
        let neighbors = region_neighbors(&region, &pt, &universe).unwrap();
        assert_eq!(neighbors.len(), 3);
        for ((n, w), mv) in neighbors.iter().zip(m.moves()) {
            assert_eq!(*w, UNIT_WEIGHT);
            assert_eq!(n.restrict(0).unwrap(), Coord::Marking(mv));
        }
    }

    #[test]
    fn annulus_blocks_jump_with_exact_weights() {
        let region = make_region(vec![BlockKind::Annulus], -2).unwrap();
        let universe = RegionUniverse::new(2, 3);
        let pt = RegionPoint::new(&region, vec![Coord::Twist(0)]).unwrap();
        let neighbors = region_neighbors(&region, &pt, &universe).unwrap();
        assert_eq!(neighbors.len(), 6);
        for (n, w) in neighbors {
            let Coord::Twist(t) = n.restrict(0).unwrap() else {
                unreachable!()
            };
            assert_eq!(w, UNIT_WEIGHT * annulus_distance(0, t));
        }
    }

    #[test]
    fn pants_blocks_never_move() {
        let region = make_region(vec![BlockKind::Pants], -1).unwrap();
        let universe = RegionUniverse::new(4, 4);
        let pt = RegionPoint::new(&region, vec![Coord::Unit]).unwrap();
        assert!(region_neighbors(&region, &pt, &universe).unwrap().is_empty());
    }

    #[test]
    fn closed_form_pins() {
        let two = make_region(vec![BlockKind::Torus1, BlockKind::Torus1], 0).unwrap();
        let x = slope_point(&two, &["0/1", "0/1"]);
        let y = slope_point(&two, &["1/1", "1/1"]);
        assert_eq!(region_distance_closed_form(&two, &x, &x).unwrap(), 0);
        assert_eq!(region_distance_closed_form(&two, &x, &y).unwrap(), 2);

        let coned = make_region(vec![BlockKind::Torus1], 1).unwrap();
        let a = slope_point(&coned, &["0/1"]);
        let b = slope_point(&coned, &["17/3"]);
        assert_eq!(region_distance_closed_form(&coned, &a, &b).unwrap(), 1);

        let markings = make_region(vec![BlockKind::Torus1], -2).unwrap();
        let m = RegionPoint::new(&markings, vec![Coord::Marking("(0/1; 1/0)".parse().unwrap())])
            .unwrap();
        let n = RegionPoint::new(&markings, vec![Coord::Marking("(0/1; 1/1)".parse().unwrap())])
            .unwrap();
        assert_eq!(region_distance_closed_form(&markings, &m, &n).unwrap(), 1);

        let annulus = make_region(vec![BlockKind::Annulus], -2).unwrap();
        let s = RegionPoint::new(&annulus, vec![Coord::Twist(0)]).unwrap();
        let t = RegionPoint::new(&annulus, vec![Coord::Twist(5)]).unwrap();
        assert_eq!(region_distance_closed_form(&annulus, &s, &t).unwrap(), 6);
    }

    #[test]
    fn raising_the_threshold_never_increases_distance() {
        let pairs = [
            (["0/1", "1/0"], ["3/5", "1/2"]),
            (["1/2", "2/3"], ["1/2", "5/2"]),
            (["0/1", "0/1"], ["0/1", "0/1"]),
        ];
        for (xs, ys) in pairs {
            let mut last = u64::MAX;
            for xi in [-1, 0, 1, 2] {
                let region =
                    make_region(vec![BlockKind::Torus1, BlockKind::Torus1], xi).unwrap();
                let x = slope_point(&region, &xs);
                let y = slope_point(&region, &ys);
                let d = region_distance_closed_form(&region, &x, &y).unwrap();
                assert!(d <= last, "xi={xi}: {d} > {last}");
                last = d;
            }
        }
    }

    #[test]
    fn ball_distances_match_the_closed_form_on_a_small_product() {
        // universe padded with witness paths so block geodesics exist
        // inside the pool
        let region = make_region(vec![BlockKind::Torus1, BlockKind::Torus1], 0).unwrap();
        let mut slopes = slopes_within(8);
        for &a in &["0/1", "1/0", "1/1", "1/2", "3/5", "2/1"] {
            for &b in &["0/1", "1/0", "1/1", "1/2", "3/5", "2/1"] {
                slopes.extend(farey_geodesic(slope(a), slope(b)));
            }
        }
        slopes.sort_unstable();
        slopes.dedup();
        let universe = RegionUniverse {
            slopes,
            twists: vec![],
        };
        let center = slope_point(&region, &["0/1", "1/0"]);
        let ball = region_ball(&region, &center, 3, &universe, BallLimits::default()).unwrap();
        let probes = [
            slope_point(&region, &["0/1", "1/0"]),
            slope_point(&region, &["1/1", "1/0"]),
            slope_point(&region, &["1/2", "2/1"]),
            slope_point(&region, &["3/5", "1/0"]),
            slope_point(&region, &["1/1", "0/1"]),
        ];
        for x in &probes {
            for y in &probes {
                let closed = region_distance_closed_form(&region, x, y).unwrap();
                let searched = ball.distance(&x.key(), &y.key()).unwrap();
                assert_eq!(searched, UNIT_WEIGHT * closed, "{} vs {}", x.key(), y.key());
            }
        }
    }

    #[test]
    fn region_json_round_trip() {
        let region = make_region(vec![BlockKind::Torus1, BlockKind::Torus1], 0).unwrap();
        let json = serde_json::to_string(&region).unwrap();
        assert_eq!(json, r#"{"blocks":["TORUS1","TORUS1"],"xi":0}"#);
        let back: ProductRegion = serde_json::from_str(&json).unwrap();
        assert_eq!(back, region);
        let bad: std::result::Result<ProductRegion, _> =
            serde_json::from_str(r#"{"blocks":["ANNULUS"],"xi":0}"#);
        assert!(bad.is_err());
        let point = slope_point(&region, &["0/1", "3/5"]);
        assert_eq!(serde_json::to_string(&point).unwrap(), r#"["0/1","3/5"]"#);
    }
}
