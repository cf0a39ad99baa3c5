//! Exact distance kernels for the low-complexity pieces: slopes on the
//! one-holed torus and four-holed sphere, the Farey metric, complete
//! torus markings, and annular twist coordinates.

pub mod annulus;
pub mod farey;
pub mod marking;
pub mod slope;

pub use annulus::annulus_distance;
pub use farey::{
    certify_geodesic, farey_distance, farey_geodesic, farey_neighbors, slopes_within,
};
pub use marking::{marking_distance, Marking11};
pub use slope::{
    adjacent, companion, dehn_twist, det2, slope_intersection, twist_coordinate, Slope,
    SurfaceKind,
};
