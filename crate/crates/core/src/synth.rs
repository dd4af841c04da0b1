//! Two-dimensional sample layouts that separate the measures: points on a
//! circle (equal Euclidean distance to the centre) and points on a ray through
//! the origin (equal cosine to each other).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use libm::{cos, sin};

use crate::classify::LabeledDataset;
use crate::error::{Error, Result};
use crate::vector::FeatureVector;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "shape", rename_all = "kebab-case"))]
pub enum Shape {
    Circle { center: [f64; 2], radius: f64 },
    Line { direction: [f64; 2], step: f64 },
}

impl Shape {
    pub fn default_circle() -> Self {
        Shape::Circle {
            center: [2.0, 2.0],
            radius: 1.0,
        }
    }

    pub fn default_line() -> Self {
        Shape::Line {
            direction: [1.0, 1.0],
            step: 0.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SyntheticSpec {
    pub shape: Shape,
    pub count: usize,
    /// Anchor sample; `None` picks the centre for a circle and the first
    /// sample for a line.
    pub reference_index: Option<usize>,
}

impl SyntheticSpec {
    pub const DEFAULT_COUNT: usize = 16;

    pub fn circle() -> Self {
        SyntheticSpec {
            shape: Shape::default_circle(),
            count: Self::DEFAULT_COUNT,
            reference_index: None,
        }
    }

    pub fn line() -> Self {
        SyntheticSpec {
            shape: Shape::default_line(),
            count: Self::DEFAULT_COUNT,
            reference_index: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::Spec("count must be at least 2"));
        }
        match self.shape {
            Shape::Circle { center, radius } => {
                if !(radius > 0.0 && radius.is_finite()) {
                    return Err(Error::Spec("radius must be finite and > 0"));
                }
                if !center.iter().all(|c| c.is_finite()) {
                    return Err(Error::Spec("center must be finite"));
                }
            }
            Shape::Line { direction, step } => {
                if !direction.iter().all(|c| c.is_finite()) || direction == [0.0, 0.0] {
                    return Err(Error::Spec("direction must be finite and nonzero"));
                }
                if !(step > 0.0 && step.is_finite()) {
                    return Err(Error::Spec("step must be finite and > 0"));
                }
            }
        }
        Ok(())
    }
}

/// Generated samples. The first `count` rows are the layout; a circle appends
/// its centre as one more row.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SyntheticSet {
    pub data: LabeledDataset,
    pub count: usize,
    pub reference: usize,
}

impl SyntheticSet {
    pub fn reference_vector(&self) -> &FeatureVector {
        &self.data.vectors()[self.reference]
    }

    /// The layout samples, excluding an appended centre.
    pub fn samples(&self) -> &[FeatureVector] {
        &self.data.vectors()[..self.count]
    }
}

fn finish(
    spec: &SyntheticSpec,
    points: Vec<[f64; 2]>,
    labels: Vec<String>,
    default_ref: usize,
    name: &str,
) -> Result<SyntheticSet> {
    let reference = spec.reference_index.unwrap_or(default_ref);
    if reference >= points.len() {
        return Err(Error::Spec("reference_index out of range"));
    }
    let vectors = points
        .into_iter()
        .map(|p| FeatureVector::new(p.to_vec()))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::Spec("generated coordinates are not finite"))?;
    Ok(SyntheticSet {
        data: LabeledDataset::new(vectors, labels, name)?,
        count: spec.count,
        reference,
    })
}

/// `count` points evenly spaced in angle (starting at angle 0) on the circle,
/// followed by the centre, which is the default reference.
pub fn gen_circle(spec: &SyntheticSpec) -> Result<SyntheticSet> {
    spec.validate()?;
    let Shape::Circle { center, radius } = spec.shape else {
        return Err(Error::Spec("expected a circle"));
    };
    let mut points: Vec<[f64; 2]> = (0..spec.count)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / spec.count as f64;
            [
                center[0] + radius * cos(theta),
                center[1] + radius * sin(theta),
            ]
        })
        .collect();
    let mut labels: Vec<String> = (0..spec.count).map(|k| format!("{k}")).collect();
    points.push(center);
    labels.push("center".into());
    finish(spec, points, labels, spec.count, "circle")
}

/// Points `k · step · direction` for `k = 1..=count`; the first is the default
/// reference.
pub fn gen_line(spec: &SyntheticSpec) -> Result<SyntheticSet> {
    spec.validate()?;
    let Shape::Line { direction, step } = spec.shape else {
        return Err(Error::Spec("expected a line"));
    };
    let points: Vec<[f64; 2]> = (1..=spec.count)
        .map(|k| {
            let t = k as f64 * step;
            [t * direction[0], t * direction[1]]
        })
        .collect();
    let labels = (0..spec.count).map(|k| format!("{k}")).collect();
    finish(spec, points, labels, 0, "line")
}

pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticSet> {
    match spec.shape {
        Shape::Circle { .. } => gen_circle(spec),
        Shape::Line { .. } => gen_line(spec),
    }
}
