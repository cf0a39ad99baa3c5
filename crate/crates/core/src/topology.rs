//! Surfaces of finite type, their decompositions along disjoint curve
//! systems (recorded as dual multigraphs), and the rank invariant.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Decomposition enumeration refuses surfaces above this complexity; the
/// search space grows super-exponentially past it.
pub const COMPLEXITY_CAP: i64 = 9;

fn err_validation(message: impl Into<String>) -> Error {
    Error::validation("topology", message)
}

fn err_runtime(message: impl Into<String>) -> Error {
    Error::runtime("topology", message)
}

/// Orientable surface of finite type: `genus` handles, `punctures` marked
/// points, empty boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(u32, u32)", into = "(u32, u32)")]
pub struct Surface {
    genus: u32,
    punctures: u32,
}

impl Surface {
    /// Rejects surfaces of complexity below −2 (the sphere with at most
    /// one puncture carries nothing of interest here).
    pub fn new(genus: u32, punctures: u32) -> Result<Surface> {
        let s = Surface { genus, punctures };
        if s.complexity() < -2 {
            return Err(err_validation(format!(
                "surface {s} has complexity {}, below -2",
                s.complexity()
            )));
        }
        Ok(s)
    }

    pub fn genus(&self) -> u32 {
        self.genus
    }

    pub fn punctures(&self) -> u32 {
        self.punctures
    }

    /// 3g − 3 + n, the number of curves in any pants decomposition.
    pub fn complexity(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.punctures as i64
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S_{{{},{}}}", self.genus, self.punctures)
    }
}

impl TryFrom<(u32, u32)> for Surface {
    type Error = Error;

    fn try_from((genus, punctures): (u32, u32)) -> Result<Surface> {
        Surface::new(genus, punctures)
    }
}

impl From<Surface> for (u32, u32) {
    fn from(s: Surface) -> (u32, u32) {
        (s.genus, s.punctures)
    }
}

/// One complementary piece of a decomposition. `boundary` counts the
/// circles created by cutting; `punctures` counts original marked points
/// that land on the piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(from = "(u32, u32, u32)", into = "(u32, u32, u32)")]
pub struct Piece {
    pub genus: u32,
    pub boundary: u32,
    pub punctures: u32,
}

impl Piece {
    pub fn new(genus: u32, boundary: u32, punctures: u32) -> Piece {
        Piece {
            genus,
            boundary,
            punctures,
        }
    }

    /// Complexity with boundary circles counted like punctures.
    pub fn complexity(&self) -> i64 {
        3 * self.genus as i64 - 3 + self.boundary as i64 + self.punctures as i64
    }

    /// A pair of pants: the minimal piece, complexity zero.
    pub fn is_pants(&self) -> bool {
        self.complexity() == 0
    }
}

impl From<(u32, u32, u32)> for Piece {
    fn from((genus, boundary, punctures): (u32, u32, u32)) -> Piece {
        Piece::new(genus, boundary, punctures)
    }
}

impl From<Piece> for (u32, u32, u32) {
    fn from(p: Piece) -> (u32, u32, u32) {
        (p.genus, p.boundary, p.punctures)
    }
}

/// A decomposition of a surface along a disjoint curve system, reduced to
/// its dual multigraph: vertices are pieces, edges are the cutting curves
/// (self-loops allowed when both sides of a curve meet the same piece).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DecompositionGraph {
    pub pieces: Vec<Piece>,
    pub curves: Vec<(usize, usize)>,
}

impl DecompositionGraph {
    pub fn curve_count(&self) -> usize {
        self.curves.len()
    }

    /// Checks every structural invariant against the ambient surface:
    /// boundary/degree matching, puncture and genus bookkeeping, the
    /// complexity budget, piece complexity ≥ 0, and connectivity.
    pub fn validate(&self, s: Surface) -> Result<()> {
        let k = self.pieces.len();
        if k == 0 {
            return Err(err_validation("decomposition needs at least one piece"));
        }
        let m = self.curves.len();
        let mut degree = vec![0u64; k];
        for &(u, v) in &self.curves {
            if u >= k || v >= k {
                return Err(err_validation(format!(
                    "curve ({u}, {v}) references a missing piece"
                )));
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        for (i, piece) in self.pieces.iter().enumerate() {
            if piece.complexity() < 0 {
                return Err(err_validation(format!(
                    "piece {i} has complexity {}, below zero",
                    piece.complexity()
                )));
            }
            if degree[i] != piece.boundary as u64 {
                return Err(err_validation(format!(
                    "piece {i} exposes {} boundary circles but {} curve ends attach",
                    piece.boundary, degree[i]
                )));
            }
        }
        let punctures: i64 = self.pieces.iter().map(|p| p.punctures as i64).sum();
        if punctures != s.punctures() as i64 {
            return Err(err_validation(format!(
                "pieces carry {punctures} punctures, surface has {}",
                s.punctures()
            )));
        }
        if !self.is_connected() {
            return Err(err_validation(
                "decomposition pieces do not assemble into a connected surface",
            ));
        }
        // connected, so the dual multigraph has first Betti number m − k + 1
        let betti = m as i64 - k as i64 + 1;
        let genus_sum: i64 = self.pieces.iter().map(|p| p.genus as i64).sum();
        if genus_sum + betti != s.genus() as i64 {
            return Err(err_validation(format!(
                "piece genera plus {betti} dual cycles give genus {}, expected {}",
                genus_sum + betti,
                s.genus()
            )));
        }
        let xi_sum: i64 = self.pieces.iter().map(|p| p.complexity()).sum();
        if xi_sum != s.complexity() - m as i64 {
            return Err(err_validation(format!(
                "piece complexities sum to {xi_sum}, expected {} minus {m} curves",
                s.complexity()
            )));
        }
        Ok(())
    }

    fn is_connected(&self) -> bool {
        let k = self.pieces.len();
        if k == 0 {
            return false;
        }
        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(a, b) in &self.curves {
                for (x, y) in [(a, b), (b, a)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    /// Canonically relabelled copy: two decompositions differing only by a
    /// permutation of piece indices map to identical values. Pieces come
    /// out sorted and the edge list is the least one over all relabelings
    /// compatible with an iterated neighborhood refinement.
    pub fn canonical(&self) -> DecompositionGraph {
        let mut triples = self.pieces.clone();
        triples.sort_unstable();
        triples.dedup();
        let colors: Vec<usize> = self
            .pieces
            .iter()
            .map(|p| triples.binary_search(p).unwrap())
            .collect();
        let mut best: Option<Vec<(usize, usize)>> = None;
        self.search_labelings(colors, &mut best);
        let mut pieces = self.pieces.clone();
        pieces.sort_unstable();
        DecompositionGraph {
            pieces,
            curves: best.expect("at least one labeling"),
        }
    }

    /// Refines `colors` by neighborhood signatures until stable. The new
    /// coloring always refines the old one order-preservingly.
    fn refine(&self, colors: &mut Vec<usize>) {
        let k = self.pieces.len();
        loop {
            let mut sigs: Vec<(usize, usize, Vec<usize>)> =
                colors.iter().map(|&c| (c, 0, Vec::new())).collect();
            for &(u, v) in &self.curves {
                if u == v {
                    sigs[u].1 += 1;
                } else {
                    sigs[u].2.push(colors[v]);
                    sigs[v].2.push(colors[u]);
                }
            }
            for sig in &mut sigs {
                sig.2.sort_unstable();
            }
            let mut sorted = sigs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            let next: Vec<usize> = sigs
                .iter()
                .map(|sig| sorted.binary_search(sig).unwrap())
                .collect();
            let old_count = {
                let mut c = colors.clone();
                c.sort_unstable();
                c.dedup();
                c.len()
            };
            *colors = next;
            if sorted.len() == old_count || sorted.len() == k {
                return;
            }
        }
    }

    /// Individualization-refinement search for the least edge list. Ties
    /// after refinement are broken by trying every vertex of the first
    /// non-singleton class, so the minimum is label-independent.
    fn search_labelings(&self, mut colors: Vec<usize>, best: &mut Option<Vec<(usize, usize)>>) {
        self.refine(&mut colors);
        let k = self.pieces.len();
        let distinct = {
            let mut c = colors.clone();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        if distinct == k {
            // discrete coloring: colors are exactly the positions 0..k
            let mut edges: Vec<(usize, usize)> = self
                .curves
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (colors[u], colors[v]);
                    (a.min(b), a.max(b))
                })
                .collect();
            edges.sort_unstable();
            if best.as_ref().map_or(true, |b| edges < *b) {
                *best = Some(edges);
            }
            return;
        }
        let target = (0..k)
            .map(|v| colors[v])
            .filter(|&c| colors.iter().filter(|&&d| d == c).count() > 1)
            .min()
            .expect("a non-singleton class exists");
        for v in (0..k).filter(|&v| colors[v] == target) {
            // move v to the front of its class without reordering classes
            let mut next: Vec<usize> = colors.iter().map(|&c| 2 * c + 1).collect();
            next[v] -= 1;
            self.search_labelings(next, best);
        }
    }
}

/// All isomorphism classes of decompositions of `s`, sorted, including the
/// trivial one-piece decomposition. Uses the default complexity cap.
pub fn enumerate_decompositions(s: Surface) -> Result<Vec<DecompositionGraph>> {
    enumerate_decompositions_with_cap(s, COMPLEXITY_CAP)
}

/// As [`enumerate_decompositions`], refusing surfaces above `cap`.
pub fn enumerate_decompositions_with_cap(
    s: Surface,
    cap: i64,
) -> Result<Vec<DecompositionGraph>> {
    let xi = s.complexity();
    if xi < 0 {
        return Err(err_validation(format!(
            "cannot decompose {s}: complexity {xi} is negative"
        )));
    }
    if xi > cap {
        return Err(err_validation(format!(
            "complexity {xi} of {s} exceeds the enumeration cap {cap}"
        )));
    }
    let g = s.genus() as i64;
    let n = s.punctures() as i64;
    let mut out: BTreeSet<DecompositionGraph> = BTreeSet::new();
    for m in 0..=xi {
        for k in 1..=(m as usize + 1) {
            let betti = m - k as i64 + 1;
            let genus_total = g - betti;
            if genus_total < 0 {
                continue;
            }
            let min_boundary = if k >= 2 { 1 } else { 0 };
            let lists = sorted_piece_lists(
                k,
                genus_total,
                2 * m,
                n,
                min_boundary,
                Piece::new(0, 0, 0),
            );
            for pieces in lists {
                let degrees: Vec<u32> = pieces.iter().map(|p| p.boundary).collect();
                for curves in multigraphs_with_degrees(&degrees) {
                    let d = DecompositionGraph {
                        pieces: pieces.clone(),
                        curves,
                    };
                    if !d.is_connected() {
                        continue;
                    }
                    debug_assert!(d.validate(s).is_ok());
                    out.insert(d.canonical());
                }
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Non-decreasing lists of `slots` pieces with the given genus, boundary
/// and puncture totals, every piece of complexity ≥ 0 and boundary at
/// least `min_boundary`.
fn sorted_piece_lists(
    slots: usize,
    genus_left: i64,
    boundary_left: i64,
    punctures_left: i64,
    min_boundary: i64,
    lower: Piece,
) -> Vec<Vec<Piece>> {
    let mut out = Vec::new();
    if slots == 1 {
        if boundary_left >= min_boundary && punctures_left >= 0 && genus_left >= 0 {
            let piece = Piece::new(
                genus_left as u32,
                boundary_left as u32,
                punctures_left as u32,
            );
            if piece >= lower && piece.complexity() >= 0 {
                out.push(vec![piece]);
            }
        }
        return out;
    }
    let rest = slots as i64 - 1;
    for g in 0..=genus_left {
        for b in min_boundary..=boundary_left {
            for n in 0..=punctures_left {
                let piece = Piece::new(g as u32, b as u32, n as u32);
                if piece < lower || piece.complexity() < 0 {
                    continue;
                }
                // every later piece needs complexity ≥ 0 (3g + b + n ≥ 3)
                // and boundary ≥ min_boundary
                let budget = 3 * (genus_left - g) + (boundary_left - b) + (punctures_left - n);
                if budget < 3 * rest || boundary_left - b < min_boundary * rest {
                    continue;
                }
                for mut tail in sorted_piece_lists(
                    slots - 1,
                    genus_left - g,
                    boundary_left - b,
                    punctures_left - n,
                    min_boundary,
                    piece,
                ) {
                    let mut list = Vec::with_capacity(slots);
                    list.push(piece);
                    list.append(&mut tail);
                    out.push(list);
                }
            }
        }
    }
    out
}

/// Every multigraph (loops allowed) realizing the degree sequence exactly,
/// with loops consuming two degree units. Each graph is produced once,
/// edges as sorted (low, high) pairs.
fn multigraphs_with_degrees(degrees: &[u32]) -> Vec<Vec<(usize, usize)>> {
    fn place(
        rem: &mut Vec<u32>,
        from: usize,
        edges: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        match (from..rem.len()).find(|&v| rem[v] > 0) {
            None => out.push(edges.clone()),
            Some(u) => pair_stubs(rem, u, u, edges, out),
        }
    }

    fn pair_stubs(
        rem: &mut Vec<u32>,
        u: usize,
        partner: usize,
        edges: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if rem[u] == 0 {
            place(rem, u + 1, edges, out);
            return;
        }
        if partner == rem.len() {
            return; // stubs left at u with nothing to attach to
        }
        let per_edge = if partner == u { 2 } else { 1 };
        let cap = if partner == u {
            rem[u] / 2
        } else {
            rem[u].min(rem[partner])
        };
        for t in 0..=cap {
            rem[u] -= per_edge * t;
            if partner != u {
                rem[partner] -= t;
            }
            for _ in 0..t {
                edges.push((u, partner));
            }
            pair_stubs(rem, u, partner + 1, edges, out);
            for _ in 0..t {
                edges.pop();
            }
            if partner != u {
                rem[partner] += t;
            }
            rem[u] += per_edge * t;
        }
    }

    let mut rem = degrees.to_vec();
    let mut edges = Vec::new();
    let mut out = Vec::new();
    place(&mut rem, 0, &mut edges, &mut out);
    out
}

/// Largest number of pieces of complexity exactly `xi + 1` over all
/// decompositions whose remaining pieces have complexity ≤ `xi`, with a
/// witnessing decomposition. At `xi = −2` the pieces degenerate to the
/// curves themselves: the count is the pants-curve number 3g − 3 + n and
/// the witness is a pants decomposition.
pub fn rank_at(s: Surface, xi: i64) -> Result<(u64, DecompositionGraph)> {
    let total = s.complexity();
    if total < 1 {
        return Err(err_validation(format!(
            "rank needs complexity at least 1, {s} has {total}"
        )));
    }
    if !(-2..=total - 1).contains(&xi) {
        return Err(err_validation(format!(
            "rank threshold {xi} outside -2..={} for {s}",
            total - 1
        )));
    }
    let all = enumerate_decompositions(s)?;
    if xi == -2 {
        let witness = all
            .iter()
            .find(|d| d.pieces.iter().all(Piece::is_pants))
            .cloned()
            .ok_or_else(|| err_runtime(format!("no pants decomposition found for {s}")))?;
        debug_assert_eq!(witness.curve_count() as i64, total);
        return Ok((total as u64, witness));
    }
    let mut best: Option<(u64, DecompositionGraph)> = None;
    for d in all {
        if d.pieces.iter().any(|p| p.complexity() > xi + 1) {
            continue;
        }
        let count = d.pieces.iter().filter(|p| p.complexity() == xi + 1).count() as u64;
        if best.as_ref().map_or(true, |(c, _)| count > *c) {
            best = Some((count, d));
        }
    }
    best.ok_or_else(|| err_runtime(format!("no qualifying decomposition for {s} at {xi}")))
}

/// The relaxed rank: largest number of pieces of complexity strictly
/// above `xi` over all decompositions. Agrees with [`rank_at`] for
/// `xi ≥ −1` because an oversized piece can always be cut further.
pub fn rank_by_excess(s: Surface, xi: i64) -> Result<u64> {
    let total = s.complexity();
    if total < 1 {
        return Err(err_validation(format!(
            "rank needs complexity at least 1, {s} has {total}"
        )));
    }
    let all = enumerate_decompositions(s)?;
    Ok(all
        .iter()
        .map(|d| d.pieces.iter().filter(|p| p.complexity() > xi).count() as u64)
        .max()
        .unwrap_or(0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn surface(g: u32, n: u32) -> Surface {
        Surface::new(g, n).unwrap()
    }

    #[test]
    fn complexity_pins() {
        assert_eq!(surface(1, 1).complexity(), 1);
        assert_eq!(surface(0, 3).complexity(), 0);
        assert_eq!(surface(2, 0).complexity(), 3);
        assert_eq!(surface(0, 1).complexity(), -2);
        assert_eq!(surface(1, 1).to_string(), "S_{1,1}");
    }

    #[test]
    fn rejects_surfaces_below_the_floor() {
        assert!(Surface::new(0, 0).is_err());
        assert!(Surface::new(0, 1).is_ok());
        assert!(Surface::new(0, 2).is_ok());
        let err = Surface::new(0, 0).unwrap_err();
        assert!(err.to_string().starts_with("topology: "));
    }

    #[test]
    fn smallest_surfaces_only_decompose_trivially() {
        for s in [surface(0, 3), surface(1, 0)] {
            let all = enumerate_decompositions(s).unwrap();
            assert_eq!(all.len(), 1);
            assert_eq!(all[0].pieces, vec![Piece::new(s.genus(), 0, s.punctures())]);
            assert!(all[0].curves.is_empty());
        }
    }

    #[test]
    fn one_holed_torus_has_exactly_two_classes() {
        let all = enumerate_decompositions(surface(1, 1)).unwrap();
        let trivial = DecompositionGraph {
            pieces: vec![Piece::new(1, 0, 1)],
            curves: vec![],
        };
        let cut = DecompositionGraph {
            pieces: vec![Piece::new(0, 2, 1)],
            curves: vec![(0, 0)],
        };
        assert_eq!(all, vec![cut, trivial]);
    }

    #[test]
    fn four_holed_sphere_has_exactly_two_classes() {
        let all = enumerate_decompositions(surface(0, 4)).unwrap();
        assert_eq!(all.len(), 2);
        let cut = DecompositionGraph {
            pieces: vec![Piece::new(0, 1, 2), Piece::new(0, 1, 2)],
            curves: vec![(0, 1)],
        };
        assert!(all.contains(&cut));
    }

    #[test]
    fn frozen_class_counts() {
        let counts = [
            ((1, 1), 2),
            ((0, 4), 2),
            ((0, 5), 3),
            ((1, 2), 5),
            ((2, 0), 7),
        ];
        for ((g, n), want) in counts {
            let all = enumerate_decompositions(surface(g, n)).unwrap();
            assert_eq!(all.len(), want, "S_{{{g},{n}}}");
        }
    }

    #[test]
    fn five_holed_sphere_contains_the_unbalanced_cut() {
        let all = enumerate_decompositions(surface(0, 5)).unwrap();
        let cut = DecompositionGraph {
            pieces: vec![Piece::new(0, 1, 2), Piece::new(0, 1, 3)],
            curves: vec![(0, 1)],
        };
        assert!(all.contains(&cut));
        assert_eq!(cut.pieces[1].complexity(), 1);
    }

    #[test]
    fn enumeration_output_is_sorted_valid_and_canonical() {
        for s in [surface(1, 1), surface(0, 5), surface(1, 2), surface(2, 0)] {
            let all = enumerate_decompositions(s).unwrap();
            assert!(all.windows(2).all(|w| w[0] < w[1]));
            for d in &all {
                d.validate(s).unwrap();
                assert_eq!(&d.canonical(), d);
            }
        }
    }

    #[test]
    fn canonical_form_ignores_piece_labels() {
        let mut rng = ChaCha8Rng::seed_from_u64(30);
        for s in [surface(1, 2), surface(2, 0)] {
            for d in enumerate_decompositions(s).unwrap() {
                let k = d.pieces.len();
                for _ in 0..6 {
                    let mut perm: Vec<usize> = (0..k).collect();
                    for i in (1..k).rev() {
                        perm.swap(i, rng.gen_range(0..=i));
                    }
                    let mut pieces = vec![Piece::new(0, 0, 0); k];
                    for (i, p) in d.pieces.iter().enumerate() {
                        pieces[perm[i]] = *p;
                    }
                    let mut curves: Vec<(usize, usize)> = d
                        .curves
                        .iter()
                        .map(|&(u, v)| {
                            if rng.gen_bool(0.5) {
                                (perm[u], perm[v])
                            } else {
                                (perm[v], perm[u])
                            }
                        })
                        .collect();
                    for i in (1..curves.len()).rev() {
                        curves.swap(i, rng.gen_range(0..=i));
                    }
                    let relabeled = DecompositionGraph { pieces, curves };
                    assert_eq!(relabeled.canonical(), d);
                }
            }
        }
    }

    #[test]
    fn validation_catches_each_broken_invariant() {
        let s12 = surface(1, 2);
        // boundary circles without matching curve ends
        let unglued = DecompositionGraph {
            pieces: vec![Piece::new(0, 2, 2)],
            curves: vec![],
        };
        assert!(unglued.validate(s12).is_err());
        // two closed-up pieces that never meet
        let split = DecompositionGraph {
            pieces: vec![Piece::new(0, 2, 1), Piece::new(0, 2, 1)],
            curves: vec![(0, 0), (1, 1)],
        };
        assert!(split.validate(s12).is_err());
        // an annulus piece
        let annulus = DecompositionGraph {
            pieces: vec![Piece::new(0, 2, 0)],
            curves: vec![(0, 0)],
        };
        assert!(annulus.validate(surface(1, 0)).is_err());
        // genus bookkeeping failure
        let wrong_genus = DecompositionGraph {
            pieces: vec![Piece::new(1, 0, 4)],
            curves: vec![],
        };
        assert!(wrong_genus.validate(surface(0, 4)).is_err());
        // puncture bookkeeping failure
        let wrong_punctures = DecompositionGraph {
            pieces: vec![Piece::new(1, 0, 1)],
            curves: vec![],
        };
        assert!(wrong_punctures.validate(surface(1, 2)).is_err());
        // out-of-range curve endpoint
        let dangling = DecompositionGraph {
            pieces: vec![Piece::new(0, 2, 1)],
            curves: vec![(0, 1)],
        };
        assert!(dangling.validate(surface(1, 1)).is_err());
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let cut = DecompositionGraph {
            pieces: vec![Piece::new(0, 2, 1)],
            curves: vec![(0, 0)],
        };
        let json = serde_json::to_string(&cut).unwrap();
        assert_eq!(json, r#"{"pieces":[[0,2,1]],"curves":[[0,0]]}"#);
        let back: DecompositionGraph = serde_json::from_str(&json).unwrap();
        assert_eq!(back, cut);
    }

    #[test]
    fn rank_pins() {
        let (count, witness) = rank_at(surface(0, 5), 0).unwrap();
        assert_eq!(count, 1);
        witness.validate(surface(0, 5)).unwrap();
        assert_eq!(
            witness.pieces.iter().filter(|p| p.complexity() == 1).count(),
            1
        );

        let (count, witness) = rank_at(surface(2, 0), -2).unwrap();
        assert_eq!(count, 3);
        assert_eq!(witness.curve_count(), 3);
        assert!(witness.pieces.iter().all(Piece::is_pants));
    }

    #[test]
    fn top_threshold_always_ranks_one() {
        for s in [surface(1, 1), surface(0, 4), surface(0, 5), surface(2, 0)] {
            let (count, witness) = rank_at(s, s.complexity() - 1).unwrap();
            assert_eq!(count, 1, "{s}");
            assert_eq!(witness.curve_count(), 0);
        }
    }

    #[test]
    fn pants_threshold_counts_pants() {
        // at xi = −1 only all-pants decompositions qualify, giving 2g−2+n
        for s in [surface(1, 1), surface(0, 4), surface(0, 5), surface(1, 2)] {
            let (count, witness) = rank_at(s, -1).unwrap();
            let pants = 2 * s.genus() as u64 + s.punctures() as u64 - 2;
            assert_eq!(count, pants, "{s}");
            assert!(witness.pieces.iter().all(Piece::is_pants));
        }
    }

    #[test]
    fn exact_and_excess_counts_agree_above_the_floor() {
        for s in [surface(1, 1), surface(0, 4), surface(0, 5), surface(1, 2), surface(2, 0)] {
            for xi in -1..s.complexity() {
                let (count, _) = rank_at(s, xi).unwrap();
                assert_eq!(count, rank_by_excess(s, xi).unwrap(), "{s} at {xi}");
            }
        }
    }

    #[test]
    fn rank_rejects_bad_inputs() {
        assert!(rank_at(surface(0, 3), -2).is_err());
        assert!(rank_at(surface(1, 1), 1).is_err());
        assert!(rank_at(surface(1, 1), -3).is_err());
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let big = surface(3, 4); // complexity 10
        let err = enumerate_decompositions(big).unwrap_err();
        assert!(err.to_string().contains("cap"));
        assert!(enumerate_decompositions_with_cap(big, 10).is_ok());
    }
}
