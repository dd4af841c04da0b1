//! Similarity and distance measures.

use libm::{log, sqrt};

use crate::convex::{select_max_cosine_subgradient, surface_normal, ConvexCost, GradientVector};
use crate::error::{Error, Result};
use crate::vector::{check_finite, check_same_dim, dot};

/// Which way a measure orders neighbours.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Direction {
    HigherIsCloser,
    LowerIsCloser,
}

impl Direction {
    /// Whether `candidate` is strictly closer than `incumbent`.
    pub fn is_closer(self, candidate: f64, incumbent: f64) -> bool {
        match self {
            Direction::HigherIsCloser => candidate > incumbent,
            Direction::LowerIsCloser => candidate < incumbent,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::HigherIsCloser => Direction::LowerIsCloser,
            Direction::LowerIsCloser => Direction::HigherIsCloser,
        }
    }
}

/// How the gradient is chosen where the cost is not differentiable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SubgradientRule {
    /// The cost's canonical subgradient (for TV, `s(0) = sign_zero`).
    #[default]
    Canonical,
    /// The subgradient whose normal is closest to the other vector's canonical
    /// normal. Both one-sided choices are evaluated and the larger cosine is
    /// kept, so the measure stays symmetric.
    MaxCosine,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SimilarityValue {
    pub value: f64,
    pub measure_name: &'static str,
}

/// Anything 1-NN can rank neighbours with.
pub trait Proximity {
    fn name(&self) -> &str;
    fn direction(&self) -> Direction;
    fn evaluate(&self, a: &[f64], b: &[f64]) -> Result<f64>;
}

/// The built-in measures.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "measure", rename_all = "kebab-case"))]
pub enum Measure {
    Cosine,
    Euclidean,
    /// Cosine between unit surface normals of `cost`.
    BregmanAngle {
        cost: ConvexCost,
        rule: SubgradientRule,
    },
    /// Cosine between raw gradients of `cost`.
    Tangent {
        cost: ConvexCost,
    },
    BregmanDivergence {
        cost: ConvexCost,
    },
}

impl Measure {
    pub fn bregman_angle(cost: ConvexCost) -> Self {
        Measure::BregmanAngle {
            cost,
            rule: SubgradientRule::Canonical,
        }
    }

    pub fn cost(&self) -> Option<&ConvexCost> {
        match self {
            Measure::Cosine | Measure::Euclidean => None,
            Measure::BregmanAngle { cost, .. }
            | Measure::Tangent { cost }
            | Measure::BregmanDivergence { cost } => Some(cost),
        }
    }

    pub fn name(&self) -> &'static str {
        use ConvexCost::*;
        match self {
            Measure::Cosine => "cosine",
            Measure::Euclidean => "euclidean",
            Measure::BregmanAngle { cost, .. } => match cost {
                NegativeEntropy => "bregman-angle-entropy",
                ModifiedEntropy => "bregman-angle-modentropy",
                TotalVariation(_) => "bregman-angle-tv",
                SquaredL2 => "bregman-angle-l2",
            },
            Measure::Tangent { cost } => match cost {
                NegativeEntropy => "tangent-entropy",
                ModifiedEntropy => "tangent-modentropy",
                TotalVariation(_) => "tangent-tv",
                SquaredL2 => "tangent-l2",
            },
            Measure::BregmanDivergence { cost } => match cost {
                NegativeEntropy => "bregman-divergence-entropy",
                ModifiedEntropy => "bregman-divergence-modentropy",
                TotalVariation(_) => "bregman-divergence-tv",
                SquaredL2 => "bregman-divergence-l2",
            },
        }
    }

    pub fn direction(&self) -> Direction {
        match self {
            Measure::Euclidean | Measure::BregmanDivergence { .. } => Direction::LowerIsCloser,
            _ => Direction::HigherIsCloser,
        }
    }

    /// True for the measures whose values are cosines in `[-1, 1]`.
    pub fn is_cosine_type(&self) -> bool {
        self.direction() == Direction::HigherIsCloser
    }

    pub fn compare(&self, x1: &[f64], x2: &[f64]) -> Result<SimilarityValue> {
        match self {
            Measure::Cosine => cosine_similarity(x1, x2),
            Measure::Euclidean => euclidean_distance(x1, x2),
            Measure::BregmanAngle { cost, rule } => bregman_angle_with(cost, x1, x2, *rule),
            Measure::Tangent { cost } => tangent_similarity(cost, x1, x2),
            Measure::BregmanDivergence { cost } => bregman_divergence(cost, x1, x2),
        }
    }
}

impl Proximity for Measure {
    fn name(&self) -> &str {
        Measure::name(self)
    }

    fn direction(&self) -> Direction {
        Measure::direction(self)
    }

    fn evaluate(&self, a: &[f64], b: &[f64]) -> Result<f64> {
        self.compare(a, b).map(|s| s.value)
    }
}

fn normal_cosine(g1: &GradientVector, g2: &GradientVector) -> f64 {
    (g1.dot(g2) + 1.0) / (sqrt(g1.norm_sq() + 1.0) * sqrt(g2.norm_sq() + 1.0))
}

/// Bregman angle with the canonical (sub)gradient.
pub fn bregman_angle(f: &ConvexCost, x1: &[f64], x2: &[f64]) -> Result<SimilarityValue> {
    bregman_angle_with(f, x1, x2, SubgradientRule::Canonical)
}

/// `(g₁·g₂ + 1) / (√(g₁·g₁ + 1) √(g₂·g₂ + 1))`, the cosine between the unit
/// surface normals of `f` at `x1` and `x2`.
pub fn bregman_angle_with(
    f: &ConvexCost,
    x1: &[f64],
    x2: &[f64],
    rule: SubgradientRule,
) -> Result<SimilarityValue> {
    check_same_dim(x1, x2)?;
    let g1 = f.gradient(x1)?;
    let g2 = f.gradient(x2)?;
    let mut value = normal_cosine(&g1, &g2);
    if rule == SubgradientRule::MaxCosine
        && !f.is_differentiable()
        && (g1.is_subgradient_choice() || g2.is_subgradient_choice())
    {
        if g1.is_subgradient_choice() {
            let h1 = select_max_cosine_subgradient(f, x1, &surface_normal(&g2))?;
            value = value.max(normal_cosine(&h1, &g2));
        }
        if g2.is_subgradient_choice() {
            let h2 = select_max_cosine_subgradient(f, x2, &surface_normal(&g1))?;
            value = value.max(normal_cosine(&g1, &h2));
        }
    }
    Ok(SimilarityValue {
        value,
        measure_name: Measure::BregmanAngle { cost: *f, rule }.name(),
    })
}

/// Closed form of the Bregman angle under negative entropy:
/// `(Σ (log x₁ + 1)(log x₂ + 1) + 1) / (√(Σ (log x₁ + 1)² + 1) √(Σ (log x₂ + 1)² + 1))`.
pub fn bregman_angle_entropy(x1: &[f64], x2: &[f64]) -> Result<SimilarityValue> {
    check_same_dim(x1, x2)?;
    ConvexCost::NegativeEntropy.check_domain(x1)?;
    ConvexCost::NegativeEntropy.check_domain(x2)?;
    let (mut cross, mut sq1, mut sq2) = (0.0, 0.0, 0.0);
    for (&a, &b) in x1.iter().zip(x2) {
        let (la, lb) = (log(a) + 1.0, log(b) + 1.0);
        cross += la * lb;
        sq1 += la * la;
        sq2 += lb * lb;
    }
    Ok(SimilarityValue {
        value: (cross + 1.0) / (sqrt(sq1 + 1.0) * sqrt(sq2 + 1.0)),
        measure_name: "bregman-angle-entropy",
    })
}

/// Smallest gradient norm for which the tangent angle is still defined.
const MIN_GRADIENT_NORM: f64 = 1e-300;

/// Plain cosine between the gradients of `f` at `x1` and `x2`.
pub fn tangent_similarity(f: &ConvexCost, x1: &[f64], x2: &[f64]) -> Result<SimilarityValue> {
    check_same_dim(x1, x2)?;
    let g1 = f.gradient(x1)?;
    let g2 = f.gradient(x2)?;
    let n1 = sqrt(g1.norm_sq());
    let n2 = sqrt(g2.norm_sq());
    for (norm, which) in [(n1, "first"), (n2, "second")] {
        if norm < MIN_GRADIENT_NORM {
            return Err(Error::ZeroGradient {
                cost: f.name(),
                which,
            });
        }
    }
    Ok(SimilarityValue {
        value: g1.dot(&g2) / (n1 * n2),
        measure_name: Measure::Tangent { cost: *f }.name(),
    })
}

/// `⟨x₁, x₂⟩ / (‖x₁‖ ‖x₂‖)`.
pub fn cosine_similarity(x1: &[f64], x2: &[f64]) -> Result<SimilarityValue> {
    check_same_dim(x1, x2)?;
    check_finite(x1)?;
    check_finite(x2)?;
    let n1 = sqrt(dot(x1, x1));
    let n2 = sqrt(dot(x2, x2));
    if n1 == 0.0 || n2 == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(SimilarityValue {
        value: dot(x1, x2) / (n1 * n2),
        measure_name: "cosine",
    })
}

/// `‖x₁ − x₂‖₂` (not squared).
pub fn euclidean_distance(x1: &[f64], x2: &[f64]) -> Result<SimilarityValue> {
    check_same_dim(x1, x2)?;
    check_finite(x1)?;
    check_finite(x2)?;
    let sq: f64 = x1.iter().zip(x2).map(|(a, b)| (a - b) * (a - b)).sum();
    Ok(SimilarityValue {
        value: sqrt(sq),
        measure_name: "euclidean",
    })
}

/// `f(x₁) − f(x₂) − ∇f(x₂)ᵀ(x₁ − x₂)`.
pub fn bregman_divergence(f: &ConvexCost, x1: &[f64], x2: &[f64]) -> Result<SimilarityValue> {
    check_same_dim(x1, x2)?;
    let f1 = f.value(x1)?;
    let f2 = f.value(x2)?;
    let g2 = f.gradient(x2)?;
    let linear: f64 = g2
        .components()
        .iter()
        .zip(x1.iter().zip(x2))
        .map(|(g, (a, b))| g * (a - b))
        .sum();
    Ok(SimilarityValue {
        value: f1 - f2 - linear,
        measure_name: Measure::BregmanDivergence { cost: *f }.name(),
    })
}
