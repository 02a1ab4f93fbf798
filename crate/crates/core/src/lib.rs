//! The Kendall convolution algebra and the Kendall random walk.
//!
//! The analytic code is generic over the scalar type through [`Real`]; the
//! aliases below fix it to `f64` (the default for simulation and
//! verification) or `f32`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convolution;
pub mod error;
pub mod excursions;
pub mod measures;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod verify;
pub mod walk;
pub mod williamson;

pub use convolution::{
    convolve_point, example_cdf, kernel_cdf_h, stable_limit_cdf, transition_cdf,
    ConvolutionPowerLaw, ExampleFamily, PointConvolutionLaw,
};
pub use error::{Error, Result};
pub use excursions::{geometric_kendall_transform, tau_pgf, ExcursionLaw, GeometricKendall};
pub use measures::{Alpha, CdfTable, StepDistribution};
pub use quadrature::Quadrature;
pub use rng::RngStream;
pub use scalar::Real;
pub use walk::{first_passage, simulate_batch, Direction, WalkBatch, WalkConfig, WalkMode};
pub use williamson::{
    forward, g_of, inverse, psi, LawTransform, SampledTransform, StableTransform, TransformFn,
};

pub type Alpha64 = Alpha<f64>;
pub type Alpha32 = Alpha<f32>;
pub type StepDistribution64 = StepDistribution<f64>;
pub type StepDistribution32 = StepDistribution<f32>;
pub type CdfTable64 = CdfTable<f64>;
pub type CdfTable32 = CdfTable<f32>;
pub type LawTransform64 = LawTransform<f64>;
pub type LawTransform32 = LawTransform<f32>;
pub type SampledTransform64 = SampledTransform<f64>;
pub type PointConvolutionLaw64 = PointConvolutionLaw<f64>;
pub type PointConvolutionLaw32 = PointConvolutionLaw<f32>;
pub type ConvolutionPowerLaw64 = ConvolutionPowerLaw<f64>;
pub type ConvolutionPowerLaw32 = ConvolutionPowerLaw<f32>;
pub type ExcursionLaw64 = ExcursionLaw<f64>;
pub type ExcursionLaw32 = ExcursionLaw<f32>;
pub type GeometricKendall64 = GeometricKendall<f64>;
pub type WalkConfig64 = WalkConfig<f64>;
pub type WalkConfig32 = WalkConfig<f32>;
pub type WalkBatch64 = WalkBatch<f64>;
pub type WalkBatch32 = WalkBatch<f32>;
