//! Vector similarity measured through the surface normals of a convex cost
//! function.
//!
//! For a convex `f`, the graph at `x` has the unit normal
//! `[∇f(x), -1] / ‖[∇f(x), -1]‖`. The Bregman angle between two vectors is the
//! cosine of the angle between their normals. This crate provides:
//!
//! - [`convex`]: negative entropy, modified entropy, total variation and squared
//!   ℓ2 costs with their (sub)gradients and surface normals;
//! - [`similarity`]: the Bregman angle, the tangent (raw gradient) cosine,
//!   ordinary cosine, Euclidean distance and Bregman divergence behind one
//!   [`Measure`] type;
//! - [`classify`]: 1-nearest-neighbour prediction with leave-one-out and
//!   train/test protocols;
//! - [`synth`]: circle and line sample generators used to contrast the measures.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod classify;
pub mod convex;
mod error;
pub mod similarity;
pub mod synth;
mod vector;

pub use classify::{
    leave_one_out, loo_fold, predict_1nn, split_half_per_class, train_test_evaluate,
    EvaluationReport, LabeledDataset, Prediction, Protocol,
};
pub use convex::{
    grad_modified_entropy, grad_neg_entropy, grad_sq_l2, select_max_cosine_subgradient, subgrad_tv,
    surface_normal, ConvexCost, GradientVector, SurfaceNormal, TvOptions,
};
pub use error::{Error, Result};
pub use similarity::{
    bregman_angle, bregman_angle_entropy, bregman_angle_with, bregman_divergence,
    cosine_similarity, euclidean_distance, tangent_similarity, Direction, Measure, Proximity,
    SimilarityValue, SubgradientRule,
};
pub use synth::{gen_circle, gen_line, Shape, SyntheticSet, SyntheticSpec};
pub use vector::FeatureVector;
