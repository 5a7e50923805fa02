//! Packings of `c`-dimensional subspaces of `ℝ^d` or `ℂ^d`.
//!
//! - [`linalg`]: small dense complex matrix kernel (SVD values, QR, Kronecker)
//! - [`metrics`]: projections, cross-Gramians, principal angles, distances
//! - [`bounds`]: Welch, simplex, orthoplex and related packing bounds
//! - [`certify`]: tight / equi-chordal / equi-isoclinic certificates
//! - [`construct`]: simplices, orthoplexes, harmonic and tensor frames
//! - [`optimize`]: numerical search for good packings
//!
//! Pairwise loops and optimizer restarts run on rayon when the `parallel`
//! feature is enabled (the default) and sequentially otherwise; results are
//! identical either way.

pub mod bounds;
pub mod certify;
pub mod construct;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod optimize;
pub mod par;

pub use error::{Error, Result};
pub use linalg::{Field, Mat, C64, DEFAULT_TOL};
pub use metrics::{FusionFrame, PrincipalAngles, SubspaceBasis};
