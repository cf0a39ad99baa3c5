//! Complete markings of the one-holed torus and their elementary moves.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::kernels::slope::{dehn_twist, det2, Slope};

fn err(message: impl Into<String>) -> Error {
    Error::validation("kernels", message)
}

/// A base curve together with a transversal meeting it once.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Marking11 {
    base: Slope,
    transversal: Slope,
}

impl Marking11 {
    pub fn new(base: Slope, transversal: Slope) -> Result<Marking11> {
        if det2(base, transversal).abs() != 1 {
            return Err(err(format!(
                "marking ({base}; {transversal}) needs intersection one between base and transversal"
            )));
        }
        Ok(Marking11 { base, transversal })
    }

    pub fn base(&self) -> Slope {
        self.base
    }

    pub fn transversal(&self) -> Slope {
        self.transversal
    }

    /// The three elementary moves: twist the transversal once around the
    /// base in either direction, or exchange the two curves.
    pub fn moves(&self) -> [Marking11; 3] {
        let twist = |n: i64| Marking11 {
            base: self.base,
            transversal: dehn_twist(self.base, n, self.transversal),
        };
        let out = [
            twist(1),
            twist(-1),
            Marking11 {
                base: self.transversal,
                transversal: self.base,
            },
        ];
        debug_assert!(out
            .iter()
            .all(|m| det2(m.base, m.transversal).abs() == 1));
        out
    }
}

impl fmt::Display for Marking11 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; {})", self.base, self.transversal)
    }
}

impl fmt::Debug for Marking11 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Marking11 {
    type Err = Error;

    /// Parses `(p/q; r/s)` or the bare form `p/q;r/s`.
    fn from_str(s: &str) -> Result<Marking11> {
        let inner = s.trim();
        let inner = inner
            .strip_prefix('(')
            .and_then(|rest| rest.strip_suffix(')'))
            .unwrap_or(inner);
        let (b, t) = inner
            .split_once(';')
            .ok_or_else(|| err(format!("bad marking '{s}': expected 'base; transversal'")))?;
        Marking11::new(b.parse()?, t.parse()?)
    }
}

fn expand_level(
    dist_this: &mut HashMap<Marking11, u64>,
    dist_other: &HashMap<Marking11, u64>,
    frontier: &mut Vec<Marking11>,
    radius: &mut u64,
    best: &mut u64,
) {
    let mut next = Vec::new();
    for m in std::mem::take(frontier) {
        for n in m.moves() {
            if !dist_this.contains_key(&n) {
                dist_this.insert(n, *radius + 1);
                if let Some(&o) = dist_other.get(&n) {
                    *best = (*best).min(*radius + 1 + o);
                }
                next.push(n);
            }
        }
    }
    *frontier = next;
    *radius += 1;
}

/// Exact move distance between two markings, by bidirectional search.
pub fn marking_distance(x: Marking11, y: Marking11) -> Result<u64> {
    const CAP: usize = 4_000_000;
    if x == y {
        return Ok(0);
    }
    let mut dx = HashMap::from([(x, 0u64)]);
    let mut dy = HashMap::from([(y, 0u64)]);
    let mut fx = vec![x];
    let mut fy = vec![y];
    let (mut rx, mut ry) = (0u64, 0u64);
    let mut best = u64::MAX;
    while best > rx + ry + 1 {
        if fx.is_empty() && fy.is_empty() {
            break;
        }
        let expand_x = !fx.is_empty() && (fy.is_empty() || fx.len() <= fy.len());
        if expand_x {
            expand_level(&mut dx, &dy, &mut fx, &mut rx, &mut best);
        } else {
            expand_level(&mut dy, &dx, &mut fy, &mut ry, &mut best);
        }
        if dx.len() + dy.len() > CAP {
            return Err(Error::runtime(
                "kernels",
                "marking distance search exceeded its vertex cap",
            ));
        }
    }
    if best == u64::MAX {
        return Err(Error::runtime(
            "kernels",
            "markings are not connected by elementary moves",
        ));
    }
    Ok(best)
}
