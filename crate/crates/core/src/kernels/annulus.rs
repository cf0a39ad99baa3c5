//! Twist-coordinate metric on the annulus.

/// Distance between two arcs recorded by their integer twisting numbers:
/// zero when they agree, otherwise one more than the twisting gap.
pub fn annulus_distance(a: i64, b: i64) -> u64 {
    if a == b {
        0
    } else {
        1 + a.abs_diff(b)
    }
}
