//! The thresholded distance formula over product regions, two-sided
//! quasi-isometry constant fitting, quasi-flat grids with exact bound
//! verification, and four-point hyperbolicity estimation.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graphcore::MetricGraph;
use crate::kernels::{
    annulus_distance, det2, farey_distance, marking_distance, twist_coordinate, Marking11, Slope,
};
use crate::regions::{
    region_distance_closed_form, BlockKind, Coord, ProductRegion, RegionPoint,
};

fn err_validation(message: impl Into<String>) -> Error {
    Error::validation("formula", message)
}

/// Cutoff for the thresholded sum: contributions of size ≤ K are dropped.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ThresholdParams {
    k: u64,
}

impl ThresholdParams {
    pub fn new(k: u64) -> Result<ThresholdParams> {
        if k < 1 {
            return Err(err_validation("threshold must be at least 1"));
        }
        Ok(ThresholdParams { k })
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    /// N if N > K, else 0.
    pub fn apply(&self, n: u64) -> u64 {
        if n > self.k {
            n
        } else {
            0
        }
    }
}

/// A subsurface of the model a projection can be taken to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Selector {
    /// The block's own coordinate graph.
    Block(usize),
    /// The curve graph of a whole marking block (bases compared, with a
    /// transversal fallback when the bases agree).
    WholeBlock(usize),
    /// The annulus around `axis` inside a marking block, measured by
    /// relative twisting.
    Annular { block: usize, axis: Slope },
}

fn marking_at(pt: &RegionPoint, i: usize) -> Result<Marking11> {
    match pt.restrict(i)? {
        Coord::Marking(m) => Ok(m),
        other => Err(err_validation(format!(
            "block {i} holds a {other}, expected a marking"
        ))),
    }
}

/// Distance between the projections of `x` and `y` to the selected
/// subsurface.
pub fn projection_distance(
    region: &ProductRegion,
    sel: &Selector,
    x: &RegionPoint,
    y: &RegionPoint,
) -> Result<u64> {
    let in_range = |i: usize| {
        if i >= region.blocks().len() {
            Err(err_validation(format!(
                "selector references block {i} of a {}-block region",
                region.blocks().len()
            )))
        } else {
            Ok(())
        }
    };
    match *sel {
        Selector::Block(i) => {
            in_range(i)?;
            match (x.restrict(i)?, y.restrict(i)?) {
                (Coord::Slope(a), Coord::Slope(b)) => Ok(farey_distance(a, b)),
                (Coord::Marking(a), Coord::Marking(b)) => marking_distance(a, b),
                (Coord::Twist(a), Coord::Twist(b)) => Ok(annulus_distance(a, b)),
                (Coord::Unit, Coord::Unit) => Ok(0),
                (a, b) => Err(err_validation(format!(
                    "block {i}: cannot compare {a} with {b}"
                ))),
            }
        }
        Selector::WholeBlock(i) => {
            in_range(i)?;
            let (a, b) = (marking_at(x, i)?, marking_at(y, i)?);
            if a.base() != b.base() {
                Ok(farey_distance(a.base(), b.base()))
            } else {
                Ok(farey_distance(a.transversal(), b.transversal()))
            }
        }
        Selector::Annular { block: i, axis } => {
            in_range(i)?;
            let (a, b) = (marking_at(x, i)?, marking_at(y, i)?);
            let relevant = |m: Marking11| {
                if m.base() != axis {
                    m.base()
                } else {
                    m.transversal()
                }
            };
            let ta = twist_coordinate(axis, relevant(a))?;
            let tb = twist_coordinate(axis, relevant(b))?;
            Ok(ta.abs_diff(tb))
        }
    }
}

/// The subsurfaces the distance formula sums over for a given pair:
/// every block of complexity above the region threshold. Marking blocks
/// split into their whole-block curve graph plus one annulus for each
/// base slope appearing in `x` or `y` there (using the raw block metric
/// would presuppose the distance being estimated).
pub fn selector_family(
    region: &ProductRegion,
    x: &RegionPoint,
    y: &RegionPoint,
) -> Result<Vec<Selector>> {
    RegionPoint::new(region, x.coords().to_vec())?;
    RegionPoint::new(region, y.coords().to_vec())?;
    let mut out = Vec::new();
    for (i, kind) in region.blocks().iter().enumerate() {
        if kind.complexity() <= region.xi() {
            continue;
        }
        let is_marking_slot = *kind == BlockKind::Torus1 && region.xi() == -2;
        if !is_marking_slot {
            out.push(Selector::Block(i));
            continue;
        }
        out.push(Selector::WholeBlock(i));
        let mut axes = vec![marking_at(x, i)?.base(), marking_at(y, i)?.base()];
        axes.sort_unstable();
        axes.dedup();
        for axis in axes {
            out.push(Selector::Annular { block: i, axis });
        }
    }
    Ok(out)
}

/// Thresholded sum of projection distances over the selector family.
pub fn distance_formula(
    region: &ProductRegion,
    params: ThresholdParams,
    x: &RegionPoint,
    y: &RegionPoint,
) -> Result<u64> {
    let mut total = 0u64;
    for sel in selector_family(region, x, y)? {
        total += params.apply(projection_distance(region, &sel, x, y)?);
    }
    Ok(total)
}

/// Multiplicative/additive constants relating two distance samples both
/// ways: d₁ ≤ a·d₂ + b and d₂ ≤ a·d₁ + b. `a` is kept in quarters for
/// exact arithmetic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QIFit {
    a_quarters: u64,
    b: u64,
}

impl QIFit {
    pub fn a_quarters(&self) -> u64 {
        self.a_quarters
    }

    pub fn a(&self) -> f64 {
        self.a_quarters as f64 / 4.0
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// Exact two-sided check of the fit invariant on a sample set.
    pub fn admits(&self, samples: &[(u64, u64)]) -> bool {
        samples.iter().all(|&(d1, d2)| {
            4 * d1 <= self.a_quarters * d2 + 4 * self.b
                && 4 * d2 <= self.a_quarters * d1 + 4 * self.b
        })
    }
}

impl fmt::Display for QIFit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a = {}, b = {})", self.a(), self.b)
    }
}

/// Smallest feasible `b` (integer) for a fixed `a`, or the statement
/// that every b works.
fn minimal_b(samples: &[(u64, u64)], a_quarters: u64) -> u64 {
    samples
        .iter()
        .map(|&(d1, d2)| {
            let gap = |hi: u64, lo: u64| (4 * hi).saturating_sub(a_quarters * lo).div_ceil(4);
            gap(d1, d2).max(gap(d2, d1))
        })
        .max()
        .unwrap_or(0)
}

/// Lexicographically minimal (a, b) on the grid (a in quarter steps
/// ≥ 1, b a nonnegative integer) admitting all samples both ways.
/// a = 1 with b = max gap is always feasible, so the scan terminates.
pub fn fit_qi_constants(samples: &[(u64, u64)]) -> Result<QIFit> {
    if samples.is_empty() {
        return Err(err_validation("cannot fit constants to zero samples"));
    }
    let fit = QIFit {
        a_quarters: 4,
        b: minimal_b(samples, 4),
    };
    debug_assert!(fit.admits(samples));
    Ok(fit)
}

/// Lexicographically least feasible fit inside the box a ≤ max_a,
/// b ≤ max_b, if the box contains one.
pub fn feasible_fit_within(
    samples: &[(u64, u64)],
    max_a_quarters: u64,
    max_b: u64,
) -> Option<QIFit> {
    for a_quarters in 4..=max_a_quarters {
        let b = minimal_b(samples, a_quarters);
        if b <= max_b {
            return Some(QIFit { a_quarters, b });
        }
    }
    None
}

/// A two-sided indexed slope sequence stepping through the curve graph
/// one edge per index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockRay {
    negative: Vec<Slope>,
    center: Slope,
    positive: Vec<Slope>,
}

impl BlockRay {
    /// Validates adjacency of consecutive entries and global
    /// distinctness. `negative[0]` sits at index −1, `positive[0]` at 1.
    pub fn new(negative: Vec<Slope>, center: Slope, positive: Vec<Slope>) -> Result<BlockRay> {
        let ray = BlockRay {
            negative,
            center,
            positive,
        };
        let (lo, hi) = ray.extent();
        let mut all = Vec::new();
        for k in lo..=hi {
            all.push(ray.at(k)?);
        }
        for pair in all.windows(2) {
            if det2(pair[0], pair[1]).abs() != 1 {
                return Err(err_validation(format!(
                    "ray entries {} and {} are not adjacent",
                    pair[0], pair[1]
                )));
            }
        }
        let mut dedup = all.clone();
        dedup.sort_unstable();
        dedup.dedup();
        if dedup.len() != all.len() {
            return Err(err_validation("ray entries must be pairwise distinct"));
        }
        Ok(ray)
    }

    /// Inclusive index range (−len(negative), len(positive)).
    pub fn extent(&self) -> (i64, i64) {
        (-(self.negative.len() as i64), self.positive.len() as i64)
    }

    pub fn at(&self, k: i64) -> Result<Slope> {
        let entry = match k {
            0 => Some(self.center),
            _ if k > 0 => self.positive.get(k as usize - 1).copied(),
            _ => self.negative.get((-k) as usize - 1).copied(),
        };
        entry.ok_or_else(|| {
            let (lo, hi) = self.extent();
            err_validation(format!("ray index {k} outside sampled range {lo}..={hi}"))
        })
    }
}

/// The ray of continued-fraction convergents with all partial quotients
/// 3, mirrored through 0/1: …, −3/10, −1/3, 0/1, 1/3, 3/10, 10/33, …
/// Each index step is one curve-graph edge and the sequence realizes
/// distance |i − j| between its entries (checked exhaustively in tests).
pub fn standard_ray(extent: u32) -> BlockRay {
    let mut positive = Vec::with_capacity(extent as usize);
    let (mut p0, mut q0, mut p1, mut q1) = (1i64, 0i64, 0i64, 1i64);
    for _ in 0..extent {
        let (p2, q2) = (3 * p1 + p0, 3 * q1 + q0);
        positive.push(Slope::new(p2, q2).expect("convergents are reduced"));
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
    }
    let negative = positive
        .iter()
        .map(|s| Slope::new(-s.p(), s.q()).expect("mirror of a reduced slope"))
        .collect();
    BlockRay::new(negative, Slope::new(0, 1).unwrap(), positive)
        .expect("the convergent ray is adjacent and distinct")
}

/// A grid of points inside a region: one indexed geodesic per flat
/// block, basepoint coordinates elsewhere.
#[derive(Clone, Debug)]
pub struct QuasiFlatSpec {
    region: ProductRegion,
    basepoint: RegionPoint,
    rays: BTreeMap<usize, BlockRay>,
}

/// Builds and validates a quasi-flat specification. Every block of
/// complexity exactly xi + 1 must carry a ray anchored at the basepoint
/// coordinate; rays on coned blocks are accepted but mark the spec
/// degenerate (the grid collapses, which verification reports).
pub fn quasiflat(
    region: ProductRegion,
    basepoint: RegionPoint,
    rays: BTreeMap<usize, BlockRay>,
) -> Result<QuasiFlatSpec> {
    RegionPoint::new(&region, basepoint.coords().to_vec())?;
    for (i, kind) in region.blocks().iter().enumerate() {
        let is_flat = kind.complexity() == region.xi() + 1;
        match (is_flat, rays.contains_key(&i)) {
            (true, false) => {
                return Err(err_validation(format!(
                    "block {i} has complexity {} = xi + 1 and needs a ray",
                    kind.complexity()
                )));
            }
            (false, true) if kind.complexity() > region.xi() + 1 => {
                return Err(err_validation(format!(
                    "block {i} is wider than xi + 1; no single geodesic spans it"
                )));
            }
            _ => {}
        }
    }
    for (&i, ray) in &rays {
        if i >= region.blocks().len() {
            return Err(err_validation(format!("ray block index {i} out of range")));
        }
        match basepoint.restrict(i)? {
            Coord::Slope(s) if s == ray.at(0)? => {}
            Coord::Slope(s) => {
                return Err(err_validation(format!(
                    "ray at block {i} starts at {}, basepoint has {s}",
                    ray.at(0)?
                )));
            }
            other => {
                return Err(err_validation(format!(
                    "block {i} holds {other}; rays only run through slope blocks"
                )));
            }
        }
    }
    Ok(QuasiFlatSpec {
        region,
        basepoint,
        rays,
    })
}

impl QuasiFlatSpec {
    pub fn region(&self) -> &ProductRegion {
        &self.region
    }

    pub fn basepoint(&self) -> &RegionPoint {
        &self.basepoint
    }

    /// Number of grid dimensions (rays).
    pub fn rank(&self) -> usize {
        self.rays.len()
    }

    /// Ray block indices in increasing order; grid vectors align with
    /// this order.
    pub fn ray_blocks(&self) -> Vec<usize> {
        self.rays.keys().copied().collect()
    }

    /// True when some ray runs through a coned block, collapsing the
    /// grid.
    pub fn degenerate(&self) -> bool {
        self.rays.keys().any(|&i| self.region.coned(i))
    }
}

/// The grid point with coordinates g_j(k_j) in ray blocks and the
/// basepoint elsewhere.
pub fn quasiflat_point(q: &QuasiFlatSpec, k: &[i64]) -> Result<RegionPoint> {
    if k.len() != q.rays.len() {
        return Err(err_validation(format!(
            "grid vector has {} entries, spec has {} rays",
            k.len(),
            q.rays.len()
        )));
    }
    let mut coords = q.basepoint.coords().to_vec();
    for ((&block, ray), &kj) in q.rays.iter().zip(k) {
        coords[block] = Coord::Slope(ray.at(kj)?);
    }
    RegionPoint::new(&q.region, coords)
}

/// One pair breaking a quasi-flat bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuasiFlatViolation {
    pub k: Vec<i64>,
    pub l: Vec<i64>,
    pub distance: u64,
    pub lower: u64,
    pub upper: u64,
}

/// Outcome of an exhaustive quasi-flat grid check.
#[derive(Clone, Debug, Serialize)]
pub struct QuasiFlatReport {
    pub extent: i64,
    pub pairs: u64,
    pub violation_count: u64,
    /// First few violating pairs in grid order.
    pub violations: Vec<QuasiFlatViolation>,
    /// Whether the upper bound Σ|Δk| held with equality on every pair.
    pub upper_bound_tight: bool,
    pub max_distance: u64,
    /// Rays through coned blocks: expected collapse instead of flatness.
    pub degenerate: bool,
}

impl fmt::Display for QuasiFlatReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degenerate {
            write!(
                f,
                "DEGENERATE: coned blocks collapse the grid (max distance {} over {} pairs)",
                self.max_distance, self.pairs
            )
        } else if self.violation_count == 0 && self.upper_bound_tight {
            write!(f, "OK: 0 violations, bounds tight")
        } else if self.violation_count == 0 {
            write!(f, "OK: 0 violations, upper bound slack somewhere")
        } else {
            write!(
                f,
                "FAIL: {} of {} pairs violate the flat bounds (first: {:?})",
                self.violation_count, self.pairs, self.violations.first()
            )
        }
    }
}

/// Checks max_j |Δk_j| ≤ d(Q(k), Q(l)) ≤ Σ_j |Δk_j| for every grid pair
/// in [−N, N]^rank, using the exact region metric.
pub fn verify_quasiflat(q: &QuasiFlatSpec, n: i64) -> Result<QuasiFlatReport> {
    if n < 0 {
        return Err(err_validation("grid extent must be nonnegative"));
    }
    for ray in q.rays.values() {
        let (lo, hi) = ray.extent();
        if -n < lo || n > hi {
            return Err(err_validation(format!(
                "grid extent {n} outside the sampled ray range {lo}..={hi}"
            )));
        }
    }
    let rank = q.rank();
    let grid: Vec<Vec<i64>> = (0..rank)
        .map(|_| -n..=n)
        .multi_cartesian_product()
        .collect();
    let points: Vec<RegionPoint> = grid
        .iter()
        .map(|k| quasiflat_point(q, k))
        .collect::<Result<_>>()?;

    struct Shard {
        pairs: u64,
        violation_count: u64,
        violations: Vec<QuasiFlatViolation>,
        upper_bound_tight: bool,
        max_distance: u64,
        error: Option<Error>,
    }

    let shards: Vec<Shard> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            let mut shard = Shard {
                pairs: 0,
                violation_count: 0,
                violations: Vec::new(),
                upper_bound_tight: true,
                max_distance: 0,
                error: None,
            };
            for j in i..grid.len() {
                let d = match region_distance_closed_form(&q.region, &points[i], &points[j]) {
                    Ok(d) => d,
                    Err(e) => {
                        shard.error.get_or_insert(e);
                        break;
                    }
                };
                let diffs: Vec<u64> = grid[i]
                    .iter()
                    .zip(&grid[j])
                    .map(|(a, b)| a.abs_diff(*b))
                    .collect();
                let lower = diffs.iter().copied().max().unwrap_or(0);
                let upper = diffs.iter().sum();
                shard.pairs += 1;
                shard.max_distance = shard.max_distance.max(d);
                if d != upper {
                    shard.upper_bound_tight = false;
                }
                if d < lower || d > upper {
                    shard.violation_count += 1;
                    if shard.violations.len() < 8 {
                        shard.violations.push(QuasiFlatViolation {
                            k: grid[i].clone(),
                            l: grid[j].clone(),
                            distance: d,
                            lower,
                            upper,
                        });
                    }
                }
            }
            shard
        })
        .collect();

    let mut report = QuasiFlatReport {
        extent: n,
        pairs: 0,
        violation_count: 0,
        violations: Vec::new(),
        upper_bound_tight: true,
        max_distance: 0,
        degenerate: q.degenerate(),
    };
    for shard in shards {
        if let Some(e) = shard.error {
            return Err(e);
        }
        report.pairs += shard.pairs;
        report.violation_count += shard.violation_count;
        report.upper_bound_tight &= shard.upper_bound_tight;
        report.max_distance = report.max_distance.max(shard.max_distance);
        for v in shard.violations {
            if report.violations.len() < 8 {
                report.violations.push(v);
            }
        }
    }
    Ok(report)
}

/// An exact rational with tiny denominator (hyperbolicity defects are
/// half-integers).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Rational {
    pub num: i64,
    pub den: i64,
}

impl Rational {
    fn half_of(doubled: i64) -> Rational {
        if doubled % 2 == 0 {
            Rational {
                num: doubled / 2,
                den: 1,
            }
        } else {
            Rational {
                num: doubled,
                den: 2,
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Worst four-point hyperbolicity defect over the graph: half the gap
/// between the largest and middle pairing sums, maximized over all
/// 4-point subsets, from exact all-pairs distances.
pub fn estimate_delta(g: &MetricGraph) -> Result<Rational> {
    if g.vertex_count() > 2000 {
        return Err(err_validation(format!(
            "four-point scan is quartic; {} vertices exceed the 2000 cap",
            g.vertex_count()
        )));
    }
    if g.vertex_count() == 0 {
        return Err(err_validation("cannot estimate an empty graph"));
    }
    let dist = g.all_pairs();
    let v = g.vertex_count();
    if dist[0].iter().any(Option::is_none) {
        return Err(Error::runtime("formula", "graph is disconnected"));
    }
    let d = |a: usize, b: usize| -> Result<i64> {
        dist[a][b]
            .map(|x| x as i64)
            .ok_or_else(|| Error::runtime("formula", "graph is disconnected"))
    };
    let worst = (0..v)
        .into_par_iter()
        .map(|w| -> Result<i64> {
            let mut local = 0i64;
            for x in (w + 1)..v {
                for y in (x + 1)..v {
                    for z in (y + 1)..v {
                        let s1 = d(w, x)? + d(y, z)?;
                        let s2 = d(w, y)? + d(x, z)?;
                        let s3 = d(w, z)? + d(x, y)?;
                        let mut sums = [s1, s2, s3];
                        sums.sort_unstable();
                        local = local.max(sums[2] - sums[1]);
                    }
                }
            }
            Ok(local)
        })
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))?;
    Ok(Rational::half_of(worst))
}
