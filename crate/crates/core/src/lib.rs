//! Motion-graph gesture synthesis engine.
//!
//! Builds a motion graph from skeletal clips, retrieves the graph walk that
//! best matches a query motion, samples query motions with a DDIM sampler
//! around a pluggable denoiser, stitches the walk into a motion track and
//! scores the result.
//!
//! All numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which the file formats and CLI use.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diffusion;
pub mod error;
pub mod graph;
pub mod io;
pub mod kinematics;
pub mod metrics;
pub mod retrieval;
mod scalar;
pub mod stitch;
pub mod synth;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Quat = kinematics::UnitQuaternion<f64>;
pub type Vector3 = kinematics::Vec3<f64>;
pub type Skeleton = kinematics::Skeleton<f64>;
pub type Pose = kinematics::Pose<f64>;
pub type PositionSet = kinematics::PositionSet<f64>;
pub type VelocitySet = kinematics::VelocitySet<f64>;
pub type MotionDocument = io::MotionDocument<f64>;
pub type FeatureDocument = io::FeatureDocument<f64>;
pub type GraphNode = graph::GraphNode<f64>;
pub type MotionGraph = graph::MotionGraph<f64>;
pub type GraphBuildConfig = graph::GraphBuildConfig<f64>;
pub type MetricWeights = retrieval::MetricWeights<f64>;
pub type RetrievedPath = retrieval::RetrievedPath<f64>;
pub type NoiseSchedule = diffusion::NoiseSchedule<f64>;
