//! Numerical integration of weighted test forms over cutoff regions.

pub mod boxes;
pub mod cutoff;
pub mod gauss;
pub mod polar;
pub mod sweep;

pub use cutoff::{
    integrate_band, integrate_boundary, integrate_cutoff, nested_product_integrate, pairing_factor, Carrier,
    QuadOpts, Weight, PAIRING_FACTOR,
};
pub use gauss::{adaptive, AdaptiveOpts, QuadResult};
pub use sweep::{sweep, CutoffSweep, EpsGrid, SweepMeta};
