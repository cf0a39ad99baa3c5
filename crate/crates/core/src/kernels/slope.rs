//! Reduced rational slopes and the unimodular twist action on them.
//!
//! Slopes label the essential simple closed curves on the one-holed torus
//! and the four-holed sphere. On both surfaces two curves are adjacent in
//! the curve graph exactly when they realize the minimal possible
//! intersection number: 1 on the torus, 2 on the sphere, i.e. determinant
//! ±1 in slope coordinates either way.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

fn err(message: impl Into<String>) -> Error {
    Error::validation("kernels", message)
}

/// A reduced rational slope `p/q`. `1/0` denotes the slope at infinity.
///
/// Invariants: `q >= 0`, `gcd(|p|, q) == 1`, and `q == 0` forces `p == 1`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct Slope {
    p: i64,
    q: i64,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl Slope {
    /// Normalizes an arbitrary nonzero integer vector to a slope.
    pub fn new(p: i64, q: i64) -> Result<Slope> {
        if p == 0 && q == 0 {
            return Err(err("slope 0/0 is not defined"));
        }
        let g = gcd(p.unsigned_abs(), q.unsigned_abs()) as i64;
        let (mut p, mut q) = (p / g, q / g);
        if q < 0 || (q == 0 && p < 0) {
            p = -p;
            q = -q;
        }
        Ok(Slope { p, q })
    }

    pub const fn infinity() -> Slope {
        Slope { p: 1, q: 0 }
    }

    pub fn integer(n: i64) -> Slope {
        Slope { p: n, q: 1 }
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q == 0
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl fmt::Debug for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Slope {
    type Err = Error;

    /// Parses `p/q` (or a bare integer as shorthand for `n/1`).
    fn from_str(s: &str) -> Result<Slope> {
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((a, b)) => (
                a.trim()
                    .parse::<i64>()
                    .map_err(|_| err(format!("bad slope numerator in '{s}'")))?,
                b.trim()
                    .parse::<i64>()
                    .map_err(|_| err(format!("bad slope denominator in '{s}'")))?,
            ),
            None => (
                s.parse::<i64>()
                    .map_err(|_| err(format!("bad slope '{s}'")))?,
                1,
            ),
        };
        Slope::new(p, q)
    }
}

impl TryFrom<(i64, i64)> for Slope {
    type Error = Error;

    fn try_from(v: (i64, i64)) -> Result<Slope> {
        Slope::new(v.0, v.1)
    }
}

impl From<Slope> for (i64, i64) {
    fn from(s: Slope) -> (i64, i64) {
        (s.p, s.q)
    }
}

/// The two complexity-one surfaces carrying the slope model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceKind {
    /// One-holed torus: minimal intersection 1.
    Torus1,
    /// Four-holed sphere: minimal intersection 2.
    Sphere4,
}

impl SurfaceKind {
    /// Intersection number realized by adjacent curves.
    pub fn adjacency_threshold(self) -> u64 {
        match self {
            SurfaceKind::Torus1 => 1,
            SurfaceKind::Sphere4 => 2,
        }
    }
}

/// Determinant of the 2x2 matrix with columns `a`, `b`.
pub fn det2(a: Slope, b: Slope) -> i128 {
    a.p as i128 * b.q as i128 - a.q as i128 * b.p as i128
}

/// Geometric intersection number of the curves with slopes `a` and `b`.
pub fn slope_intersection(kind: SurfaceKind, a: Slope, b: Slope) -> u64 {
    let d = det2(a, b).unsigned_abs();
    let factor = match kind {
        SurfaceKind::Torus1 => 1,
        SurfaceKind::Sphere4 => 2,
    };
    u64::try_from(d * factor).expect("slope intersection overflow")
}

/// Curve-graph adjacency: distinct slopes realizing the minimal intersection.
pub fn adjacent(kind: SurfaceKind, a: Slope, b: Slope) -> bool {
    a != b && slope_intersection(kind, a, b) == kind.adjacency_threshold()
}

/// Canonical Farey neighbor completing `axis` to a basis of the integer
/// lattice: the neighbor with the smallest denominator, then the smallest
/// numerator in absolute value, preferring the nonnegative one.
///
/// `companion(1/0) = 0/1`, and integer axes get `1/0`.
pub fn companion(axis: Slope) -> Slope {
    if axis.q == 0 {
        return Slope { p: 0, q: 1 };
    }
    for q in 0..=axis.q {
        let mut best: Option<Slope> = None;
        for eps in [1i128, -1] {
            // p_a * q_s - q_a * p_s = eps  =>  p_s = (p_a * q_s - eps) / q_a
            let num = axis.p as i128 * q as i128 - eps;
            if num.rem_euclid(axis.q as i128) == 0 {
                let p = num / axis.q as i128;
                let p = i64::try_from(p).expect("companion overflow");
                let cand = Slope::new(p, q).expect("companion candidates are nonzero");
                let better = match best {
                    None => true,
                    Some(b) => {
                        (cand.p.abs(), cand.p < 0) < (b.p.abs(), b.p < 0)
                    }
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        if let Some(b) = best {
            return b;
        }
    }
    unreachable!("every reduced slope has a Farey neighbor with small denominator")
}

fn to_i64(v: i128, what: &str) -> i64 {
    i64::try_from(v).unwrap_or_else(|_| panic!("{what} overflow"))
}

/// `n`-fold Dehn twist along `axis` applied to `x`.
///
/// This is the transvection fixing `axis`, conjugated into the canonical
/// basis `[axis | companion(axis)]`; with `axis = 1/0` it sends `p/q` to
/// `(p + n*q)/q`.
pub fn dehn_twist(axis: Slope, power: i64, x: Slope) -> Slope {
    // In the canonical basis the twist is (u, v) -> (u + n*v, v), which in
    // ambient coordinates is x -> x + n * (det2(axis, x) / det) * axis where
    // det = det2(axis, companion(axis)) = ±1.
    let c = companion(axis);
    let d = det2(axis, c);
    debug_assert!(d == 1 || d == -1);
    let coef = power as i128 * det2(axis, x) * d;
    let p = to_i64(x.p as i128 + coef * axis.p as i128, "dehn twist");
    let q = to_i64(x.q as i128 + coef * axis.q as i128, "dehn twist");
    Slope::new(p, q).expect("twists preserve nonzero vectors")
}

/// Twisting coordinate of `x` around `axis`: the floor of the image of `x`
/// under the canonical basis change sending `axis` to `1/0`.
///
/// Satisfies `twist_coordinate(axis, dehn_twist(axis, n, x)) =
/// twist_coordinate(axis, x) + n` exactly. `x == axis` has an empty
/// projection and is a validation error.
pub fn twist_coordinate(axis: Slope, x: Slope) -> Result<i64> {
    if x == axis {
        return Err(err(format!(
            "empty projection: slope {x} does not cross the annulus around {axis}"
        )));
    }
    let c = companion(axis);
    let d = det2(axis, c);
    // Inverse basis change: M^{-1} x = (1/d) * (-det2(c, x), det2(axis, x)).
    let mut num = -det2(c, x) * d;
    let mut den = det2(axis, x) * d;
    debug_assert!(den != 0, "x != axis guarantees a nonzero denominator");
    if den < 0 {
        num = -num;
        den = -den;
    }
    Ok(to_i64(num.div_euclid(den), "twist coordinate"))
}
