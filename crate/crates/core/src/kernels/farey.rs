//! Exact distances and geodesics in the Farey graph.
//!
//! The graph on slopes with determinant-one adjacency is vertex-transitive
//! under the integer unimodular group, so a general distance query reduces
//! to `d(1/0, p/q)` after a basis change. From `1/0` a shortest path must
//! first step to an integer, and the optimal integer is always the floor or
//! the ceiling of `p/q`; inverting the remainder turns that observation
//! into a recursion over continued-fraction expansions whose denominators
//! strictly decrease. Both branch values are explored, so the result is the
//! exact minimum, and the same recursion reconstructs a witness path.

use std::collections::HashMap;

use crate::error::Result;
use crate::kernels::slope::{adjacent, companion, det2, Slope, SurfaceKind};

fn to_i64(v: i128, what: &str) -> i64 {
    i64::try_from(v).unwrap_or_else(|_| panic!("{what} overflow"))
}

/// Coordinates of `b` in the canonical basis `[a | companion(a)]`, which
/// sends `a` itself to `1/0`.
fn inf_coords(a: Slope, b: Slope) -> (i64, i64) {
    let c = companion(a);
    let d = det2(a, c);
    debug_assert!(d == 1 || d == -1);
    let num = -det2(c, b) * d;
    let den = det2(a, b) * d;
    (to_i64(num, "farey basis change"), to_i64(den, "farey basis change"))
}

/// `d(1/0, p/q)` via the two-branch continued-fraction recursion.
fn dist_inf(p: i64, q: i64, memo: &mut HashMap<(i64, i64), u64>) -> u64 {
    let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
    if q == 0 {
        return 0;
    }
    if q == 1 {
        return 1;
    }
    if let Some(&d) = memo.get(&(p, q)) {
        return d;
    }
    // Stepping 1/0 -> a and renormalizing maps p/q to q/(p - a*q); the
    // denominator drops below q for both a = floor and a = ceiling.
    let r = p.rem_euclid(q);
    let d = 1 + dist_inf(q, r, memo).min(dist_inf(q, r - q, memo));
    memo.insert((p, q), d);
    d
}

/// Witness path from `1/0` to `p/q`, in basis coordinates.
fn path_inf(p: i64, q: i64, memo: &mut HashMap<(i64, i64), u64>) -> Vec<(i64, i64)> {
    let (p, q) = if q < 0 { (-p, -q) } else { (p, q) };
    if q == 0 {
        return vec![(1, 0)];
    }
    if q == 1 {
        return vec![(1, 0), (p, 1)];
    }
    let f = p.div_euclid(q);
    let r = p.rem_euclid(q);
    let (a, wp, wq) = if dist_inf(q, r, memo) <= dist_inf(q, r - q, memo) {
        (f, q, r)
    } else {
        (f + 1, q, r - q)
    };
    let sub = path_inf(wp, wq, memo);
    let mut out = Vec::with_capacity(sub.len() + 1);
    out.push((1, 0));
    // Undo the renormalization: v -> (a*v_p + v_q, v_p).
    out.extend(sub.into_iter().map(|(vp, vq)| {
        (
            to_i64(a as i128 * vp as i128 + vq as i128, "farey path"),
            vp,
        )
    }));
    out
}

/// Exact Farey-graph distance between two slopes.
pub fn farey_distance(a: Slope, b: Slope) -> u64 {
    let (p, q) = inf_coords(a, b);
    dist_inf(p, q, &mut HashMap::new())
}

/// A geodesic from `a` to `b` inclusive; consecutive entries are adjacent
/// and the length equals [`farey_distance`].
pub fn farey_geodesic(a: Slope, b: Slope) -> Vec<Slope> {
    if a == b {
        return vec![a];
    }
    let c = companion(a);
    let (p, q) = inf_coords(a, b);
    let path = path_inf(p, q, &mut HashMap::new());
    path.into_iter()
        .map(|(vp, vq)| {
            let sp = vp as i128 * a.p() as i128 + vq as i128 * c.p() as i128;
            let sq = vp as i128 * a.q() as i128 + vq as i128 * c.q() as i128;
            Slope::new(to_i64(sp, "farey path"), to_i64(sq, "farey path"))
                .expect("geodesic vertices are nonzero")
        })
        .collect()
}

/// The finite slope universe `F_n`: `1/0` together with every reduced `p/q`
/// with `|p| <= n` and `1 <= q <= n`, in canonical order.
pub fn slopes_within(n: u32) -> Vec<Slope> {
    let n = n as i64;
    let mut out = vec![Slope::infinity()];
    for q in 1..=n {
        for p in -n..=n {
            if let Ok(s) = Slope::new(p, q) {
                if s.q() == q {
                    out.push(s);
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Farey neighbors of `x` inside a caller-supplied universe.
pub fn farey_neighbors(x: Slope, universe: &[Slope]) -> Vec<Slope> {
    universe
        .iter()
        .copied()
        .filter(|&u| adjacent(SurfaceKind::Torus1, x, u))
        .collect()
}

/// Checks that a slope sequence is a genuine geodesic for its endpoints.
pub fn certify_geodesic(path: &[Slope]) -> Result<()> {
    use crate::error::Error;
    if path.is_empty() {
        return Err(Error::validation("kernels", "empty slope path"));
    }
    for w in path.windows(2) {
        if !adjacent(SurfaceKind::Torus1, w[0], w[1]) {
            return Err(Error::validation(
                "kernels",
                format!("slopes {} and {} are not adjacent", w[0], w[1]),
            ));
        }
    }
    let d = farey_distance(path[0], path[path.len() - 1]);
    if d != (path.len() - 1) as u64 {
        return Err(Error::validation(
            "kernels",
            format!(
                "path of length {} between slopes at distance {d}",
                path.len() - 1
            ),
        ));
    }
    Ok(())
}
