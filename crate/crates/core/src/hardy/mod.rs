//! Truncated power-series model of H²(𝔻).

pub mod boundary;
pub mod convolution;
pub mod series;

pub use boundary::{boundary_samples, norm_via_boundary, BoundaryGrid, BoundaryNorm, BoundarySamples};
pub use convolution::FFT_THRESHOLD;
pub use series::TruncatedSeries;
