//! Samplers for Poisson point processes on an interval of the real line.
//!
//! The crate draws event times from homogeneous and non-homogeneous Poisson
//! point processes (NHPPs). Three general algorithms are implemented --
//! thinning (acceptance/rejection against a majorizing intensity), time
//! transformation through the cumulative intensity ("inversion"), and order
//! statistics -- together with closed-form samplers for piecewise-constant,
//! linear, and log-linear intensity functions, batch variants that draw many
//! independent series at once, and a statistical validation toolkit
//! (goodness-of-fit, Wasserstein-1 distance, bias summaries).
//!
//! All randomness flows through [`RngStream`], a seeded, splittable,
//! counter-based generator, so every sampler is reproducible and can be
//! parallelized over substreams without coordination.
//!
//! The crate is `no_std` compatible (it allocates but performs no IO); the
//! companion CLI crate adds file formats and a command-line front end.
//!
//! Interval convention: an event series on `(a, b]` contains strictly
//! increasing times `t` with `a < t <= b`. Sampling never emits `t == a`.
//! Whether the closed endpoint sits on the left or the right is immaterial
//! for a continuous law; the half-open-left form is used consistently here.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod batch;
pub mod dist;
mod error;
pub mod general;
pub mod homogeneous;
pub mod intensity;
pub mod majorizer;
pub mod numeric;
pub mod rng;
pub mod special;
mod types;
pub mod validation;

pub use error::{Error, Result};
pub use intensity::{CumulativeIntensity, IntensitySpec};
pub use majorizer::MajorizerSpec;
pub use rng::{RngStream, StreamFamily};
pub use types::{EventSeries, Interval, SamplerOptions};
