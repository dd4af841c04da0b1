//! Convex cost functions, their (sub)gradients and the unit surface normals of
//! their graphs.

use alloc::vec::Vec;
use core::f64::consts::E;

use libm::{fabs, log, sqrt};

use crate::error::{Error, Result};
use crate::vector::{check_finite, check_same_dim, dot};

const INV_E: f64 = 1.0 / E;

/// Options for the total-variation subgradient.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TvOptions {
    /// Value taken by the sign function at zero, in `[-1, 1]`.
    pub sign_zero: f64,
    /// Emit `+s(x₂ − x₁)` as the first component instead of the true partial
    /// `−s(x₂ − x₁)`. This reproduces a published closed form; the resulting
    /// vector is generally *not* a subgradient.
    pub paper_literal: bool,
}

impl Default for TvOptions {
    fn default() -> Self {
        TvOptions {
            sign_zero: 0.0,
            paper_literal: false,
        }
    }
}

impl TvOptions {
    pub fn validate(&self) -> Result<()> {
        if !(-1.0..=1.0).contains(&self.sign_zero) {
            return Err(Error::Range {
                name: "sign_zero",
                value: self.sign_zero,
                expected: "[-1, 1]",
            });
        }
        Ok(())
    }
}

/// The convex costs a similarity can be measured against.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum ConvexCost {
    /// `Σ x log x`, defined for strictly positive components.
    NegativeEntropy,
    /// `Σ (|x| + 1/e) log(|x| + 1/e) + 1/e`, defined everywhere.
    ModifiedEntropy,
    /// `Σ |x_{i+1} − x_i|`, no wraparound; needs at least two components.
    TotalVariation(TvOptions),
    /// `‖x‖²`.
    SquaredL2,
}

impl ConvexCost {
    pub fn total_variation() -> Self {
        ConvexCost::TotalVariation(TvOptions::default())
    }

    pub fn name(&self) -> &'static str {
        match self {
            ConvexCost::NegativeEntropy => "negative-entropy",
            ConvexCost::ModifiedEntropy => "modified-entropy",
            ConvexCost::TotalVariation(_) => "total-variation",
            ConvexCost::SquaredL2 => "squared-l2",
        }
    }

    /// Short identifier used in measure names (`bregman-angle-<short>`).
    pub fn short_name(&self) -> &'static str {
        match self {
            ConvexCost::NegativeEntropy => "entropy",
            ConvexCost::ModifiedEntropy => "modentropy",
            ConvexCost::TotalVariation(_) => "tv",
            ConvexCost::SquaredL2 => "l2",
        }
    }

    pub fn is_differentiable(&self) -> bool {
        !matches!(self, ConvexCost::TotalVariation(_))
    }

    /// Checks that `x` is finite and inside the cost's domain.
    pub fn check_domain(&self, x: &[f64]) -> Result<()> {
        check_finite(x)?;
        match self {
            ConvexCost::NegativeEntropy => check_positive(x),
            ConvexCost::TotalVariation(opts) => {
                opts.validate()?;
                check_tv_len(x)
            }
            ConvexCost::ModifiedEntropy | ConvexCost::SquaredL2 => {
                if x.is_empty() {
                    return Err(Error::Dimension {
                        required: 1,
                        actual: 0,
                    });
                }
                Ok(())
            }
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        self.check_domain(x)?;
        Ok(match self {
            ConvexCost::NegativeEntropy => x.iter().map(|&v| v * log(v)).sum(),
            ConvexCost::ModifiedEntropy => x
                .iter()
                .map(|&v| {
                    let u = fabs(v) + INV_E;
                    u * log(u) + INV_E
                })
                .sum(),
            ConvexCost::TotalVariation(_) => x.windows(2).map(|w| fabs(w[1] - w[0])).sum(),
            ConvexCost::SquaredL2 => dot(x, x),
        })
    }

    /// Gradient, or the canonical subgradient for total variation.
    pub fn gradient(&self, x: &[f64]) -> Result<GradientVector> {
        match self {
            ConvexCost::NegativeEntropy => grad_neg_entropy(x),
            ConvexCost::ModifiedEntropy => grad_modified_entropy(x),
            ConvexCost::TotalVariation(opts) => subgrad_tv(x, *opts),
            ConvexCost::SquaredL2 => grad_sq_l2(x),
        }
    }
}

fn check_positive(x: &[f64]) -> Result<()> {
    if x.is_empty() {
        return Err(Error::Dimension {
            required: 1,
            actual: 0,
        });
    }
    match x.iter().position(|&v| v <= 0.0) {
        Some(component) => Err(Error::Domain {
            cost: "negative-entropy",
            component,
            value: x[component],
            requirement: "components must be > 0; use modified-entropy for signed data",
        }),
        None => Ok(()),
    }
}

fn check_tv_len(x: &[f64]) -> Result<()> {
    if x.len() < 2 {
        return Err(Error::Dimension {
            required: 2,
            actual: x.len(),
        });
    }
    Ok(())
}

/// A gradient or a selected subgradient.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientVector {
    components: Vec<f64>,
    subgradient_choice: bool,
}

impl GradientVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        check_finite(&components)?;
        Ok(GradientVector {
            components,
            subgradient_choice: false,
        })
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// True when the subdifferential at the point was not a singleton and one
    /// element of it was picked.
    pub fn is_subgradient_choice(&self) -> bool {
        self.subgradient_choice
    }

    pub fn norm_sq(&self) -> f64 {
        dot(&self.components, &self.components)
    }

    pub fn dot(&self, other: &GradientVector) -> f64 {
        dot(&self.components, &other.components)
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.components
    }
}

/// `∇f(x) = log(x) + 1`, componentwise. Requires every component `> 0`.
pub fn grad_neg_entropy(x: &[f64]) -> Result<GradientVector> {
    check_finite(x)?;
    check_positive(x)?;
    Ok(GradientVector {
        components: x.iter().map(|&v| log(v) + 1.0).collect(),
        subgradient_choice: false,
    })
}

/// `sign(x)·(log(|x| + 1/e) + 1)`, componentwise; zero at zero.
pub fn grad_modified_entropy(x: &[f64]) -> Result<GradientVector> {
    check_finite(x)?;
    let components = x
        .iter()
        .map(|&v| {
            if v == 0.0 {
                0.0
            } else {
                let mag = log(fabs(v) + INV_E) + 1.0;
                if v > 0.0 {
                    mag
                } else {
                    -mag
                }
            }
        })
        .collect();
    Ok(GradientVector {
        components,
        subgradient_choice: false,
    })
}

/// `2x`.
pub fn grad_sq_l2(x: &[f64]) -> Result<GradientVector> {
    check_finite(x)?;
    Ok(GradientVector {
        components: x.iter().map(|&v| 2.0 * v).collect(),
        subgradient_choice: false,
    })
}

fn sign_with(t: f64, sign_zero: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        sign_zero
    }
}

/// Per-difference signs `s_j = s(x_{j+1} − x_j)` for `j = 0..N-1`.
fn tv_signs(x: &[f64], sign_zero: f64) -> Vec<f64> {
    x.windows(2)
        .map(|w| sign_with(w[1] - w[0], sign_zero))
        .collect()
}

/// Maps difference signs onto the gradient: component `i` is `s_{i-1} − s_i`
/// with `s_{-1} = s_{N-1} = 0`.
fn tv_gradient_from_signs(signs: &[f64]) -> Vec<f64> {
    let n = signs.len() + 1;
    (0..n)
        .map(|i| {
            let left = if i > 0 { signs[i - 1] } else { 0.0 };
            let right = if i < n - 1 { signs[i] } else { 0.0 };
            left - right
        })
        .collect()
}

/// Subgradient of total variation.
///
/// Component 1 is `−s(x₂−x₁)`, interior components are
/// `s(x_i−x_{i−1}) − s(x_{i+1}−x_i)` and component N is `s(x_N−x_{N−1})`,
/// where `s(0) = opts.sign_zero`. With `opts.paper_literal` the first component
/// becomes `+s(x₂−x₁)`.
pub fn subgrad_tv(x: &[f64], opts: TvOptions) -> Result<GradientVector> {
    check_finite(x)?;
    check_tv_len(x)?;
    opts.validate()?;
    let signs = tv_signs(x, opts.sign_zero);
    let mut components = tv_gradient_from_signs(&signs);
    if opts.paper_literal {
        components[0] = signs[0];
    }
    let subgradient_choice = x.windows(2).any(|w| w[1] == w[0]);
    Ok(GradientVector {
        components,
        subgradient_choice,
    })
}

/// Unit normal to the graph of `f`: `[g, −1] / ‖[g, −1]‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceNormal(Vec<f64>);

impl SurfaceNormal {
    pub fn components(&self) -> &[f64] {
        &self.0
    }

    /// Dimension of the underlying feature space (one less than the normal).
    pub fn feature_dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn dot(&self, other: &SurfaceNormal) -> f64 {
        dot(&self.0, &other.0)
    }
}

pub fn surface_normal(g: &GradientVector) -> SurfaceNormal {
    let norm = sqrt(g.norm_sq() + 1.0);
    let mut components: Vec<f64> = g.components.iter().map(|v| v / norm).collect();
    components.push(-1.0 / norm);
    SurfaceNormal(components)
}

const ASCENT_TOL: f64 = 1e-9;
const ASCENT_MAX_SWEEPS: usize = 200;

/// Cosine between the normal induced by `g` and a unit `reference`.
fn normal_cosine(g: &[f64], reference: &[f64]) -> f64 {
    let n = g.len();
    (dot(g, &reference[..n]) - reference[n]) / sqrt(dot(g, g) + 1.0)
}

/// Picks the subgradient of total variation at `x_free` whose surface normal
/// makes the smallest angle with `reference_normal`.
///
/// Each zero difference `x_{j+1} = x_j` contributes a free sign `t_j ∈ [−1, 1]`.
/// The cosine is maximised by coordinate ascent over those parameters; each
/// coordinate step is solved exactly since the cosine restricted to one `t_j`
/// is `(α + βt)/√(γ + 2δt + 2t²)`, whose only critical point is
/// `t = (αδ − βγ)/(βδ − 2α)`. Ascent starts from `opts.sign_zero` and always
/// returns a true subgradient (the `paper_literal` flag is ignored).
pub fn select_max_cosine_subgradient(
    f: &ConvexCost,
    x_free: &[f64],
    reference_normal: &SurfaceNormal,
) -> Result<GradientVector> {
    let opts = match f {
        ConvexCost::TotalVariation(opts) => *opts,
        other => return Err(Error::UnsupportedCost(other.name())),
    };
    check_finite(x_free)?;
    check_tv_len(x_free)?;
    opts.validate()?;
    check_same_dim(
        x_free,
        &reference_normal.0[..reference_normal.feature_dim()],
    )?;

    let mut signs = tv_signs(x_free, opts.sign_zero);
    let free: Vec<usize> = x_free
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] == w[0])
        .map(|(j, _)| j)
        .collect();
    if free.is_empty() {
        return subgrad_tv(
            x_free,
            TvOptions {
                paper_literal: false,
                ..opts
            },
        );
    }

    let r = reference_normal.components();
    let n = x_free.len();
    let mut g = tv_gradient_from_signs(&signs);
    let mut best = normal_cosine(&g, r);

    for _ in 0..ASCENT_MAX_SWEEPS {
        let start = best;
        for &j in &free {
            // Remove t_j's contribution: it enters g[j] as −t and g[j+1] as +t.
            let t_old = signs[j];
            g[j] += t_old;
            g[j + 1] -= t_old;
            let alpha = dot(&g, &r[..n]) - r[n];
            let beta = r[j + 1] - r[j];
            let gamma = dot(&g, &g) + 1.0;
            let delta = g[j + 1] - g[j];
            let eval = |t: f64| (alpha + beta * t) / sqrt(gamma + 2.0 * delta * t + 2.0 * t * t);

            let mut t_best = t_old;
            let mut c_best = eval(t_old);
            let denom = beta * delta - 2.0 * alpha;
            let mut candidates = [-1.0, 1.0, f64::NAN];
            if denom != 0.0 {
                let t_star = (alpha * delta - beta * gamma) / denom;
                if t_star.is_finite() {
                    candidates[2] = t_star.clamp(-1.0, 1.0);
                }
            }
            for t in candidates.into_iter().filter(|t| !t.is_nan()) {
                let c = eval(t);
                if c > c_best {
                    c_best = c;
                    t_best = t;
                }
            }
            signs[j] = t_best;
            g[j] -= t_best;
            g[j + 1] += t_best;
            best = c_best;
        }
        if best - start < ASCENT_TOL {
            break;
        }
    }

    Ok(GradientVector {
        components: g,
        subgradient_choice: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        fabs(a - b) <= tol
    }

    #[test]
    fn neg_entropy_gradient_examples() {
        let g = grad_neg_entropy(&[1.0, 1.0, 1.0]).unwrap();
        assert_eq!(g.components(), &[1.0, 1.0, 1.0]);
        let g = grad_neg_entropy(&[INV_E]).unwrap();
        assert!(close(g.components()[0], 0.0, 1e-15));
        let g = grad_neg_entropy(&[2.0, 0.5]).unwrap();
        assert!(close(g.components()[0], 1.693147180559945, 1e-12));
        assert!(close(g.components()[1], 0.306852819440055, 1e-12));
    }

    #[test]
    fn neg_entropy_rejects_non_positive() {
        let err = grad_neg_entropy(&[1.0, 0.0, 2.0]).unwrap_err();
        assert!(matches!(err, Error::Domain { component: 1, .. }));
        assert!(grad_neg_entropy(&[-3.0]).is_err());
    }

    #[test]
    fn modified_entropy_examples() {
        let g = grad_modified_entropy(&[0.0, 0.0]).unwrap();
        assert_eq!(g.components(), &[0.0, 0.0]);
        // |x| + 1/e = e, so log(e) + 1 = 2.
        let x = E - INV_E;
        let g = grad_modified_entropy(&[x]).unwrap();
        assert!(close(g.components()[0], 2.0, 1e-12));
        let g = grad_modified_entropy(&[-x]).unwrap();
        assert!(close(g.components()[0], -2.0, 1e-12));
    }

    #[test]
    fn modified_entropy_continuous_at_zero() {
        let g = grad_modified_entropy(&[1e-8, -1e-8]).unwrap();
        assert!(fabs(g.components()[0]) < 1e-7);
        assert!(fabs(g.components()[1]) < 1e-7);
    }

    #[test]
    fn sq_l2_examples() {
        assert_eq!(grad_sq_l2(&[0.0, 0.0]).unwrap().components(), &[0.0, 0.0]);
        assert_eq!(
            grad_sq_l2(&[1.0, -2.0, 3.0]).unwrap().components(),
            &[2.0, -4.0, 6.0]
        );
    }

    #[test]
    fn tv_examples() {
        let opts = TvOptions::default();
        assert_eq!(
            subgrad_tv(&[1.0, 2.0, 3.0], opts).unwrap().components(),
            &[-1.0, 0.0, 1.0]
        );
        assert_eq!(
            subgrad_tv(&[3.0, 2.0, 1.0], opts).unwrap().components(),
            &[1.0, 0.0, -1.0]
        );
        let g = subgrad_tv(&[4.0; 5], opts).unwrap();
        assert_eq!(g.components(), &[0.0; 5]);
        assert!(g.is_subgradient_choice());
        assert!(!subgrad_tv(&[1.0, 2.0], opts)
            .unwrap()
            .is_subgradient_choice());
    }

    #[test]
    fn tv_literal_flips_first_component_only() {
        let opts = TvOptions {
            paper_literal: true,
            ..TvOptions::default()
        };
        assert_eq!(
            subgrad_tv(&[1.0, 2.0, 3.0], opts).unwrap().components(),
            &[1.0, 0.0, 1.0]
        );
    }

    #[test]
    fn tv_errors() {
        assert!(matches!(
            subgrad_tv(&[1.0], TvOptions::default()),
            Err(Error::Dimension { required: 2, .. })
        ));
        let bad = TvOptions {
            sign_zero: 1.5,
            paper_literal: false,
        };
        assert!(matches!(
            subgrad_tv(&[1.0, 2.0], bad),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn surface_normal_examples() {
        let n = surface_normal(&GradientVector::new(vec![0.0, 0.0]).unwrap());
        assert_eq!(n.components(), &[0.0, 0.0, -1.0]);
        let n = surface_normal(&GradientVector::new(vec![1.0]).unwrap());
        let h = core::f64::consts::FRAC_1_SQRT_2;
        assert!(close(n.components()[0], h, 1e-15));
        assert!(close(n.components()[1], -h, 1e-15));
    }

    #[test]
    fn values() {
        assert_eq!(ConvexCost::SquaredL2.value(&[1.0, 2.0]).unwrap(), 5.0);
        assert_eq!(
            ConvexCost::total_variation()
                .value(&[1.0, 3.0, 2.0])
                .unwrap(),
            3.0
        );
        assert!(close(
            ConvexCost::NegativeEntropy.value(&[E]).unwrap(),
            E,
            1e-15
        ));
        // Each zero component contributes (1/e) log(1/e) + 1/e = 0.
        assert!(close(
            ConvexCost::ModifiedEntropy.value(&[0.0, 0.0]).unwrap(),
            0.0,
            1e-15
        ));
    }

    #[test]
    fn selection_rejects_smooth_costs() {
        let r = surface_normal(&GradientVector::new(vec![0.0, 0.0]).unwrap());
        assert!(matches!(
            select_max_cosine_subgradient(&ConvexCost::SquaredL2, &[1.0, 1.0], &r),
            Err(Error::UnsupportedCost("squared-l2"))
        ));
    }

    #[test]
    fn selection_without_free_parameters_is_canonical() {
        let r = surface_normal(&subgrad_tv(&[3.0, 1.0, 2.0], TvOptions::default()).unwrap());
        let x = [1.0, 2.0, 4.0];
        let g = select_max_cosine_subgradient(&ConvexCost::total_variation(), &x, &r).unwrap();
        assert_eq!(g, subgrad_tv(&x, TvOptions::default()).unwrap());
    }

    #[test]
    fn selection_on_flat_pair_reaches_the_reference() {
        let r = surface_normal(&subgrad_tv(&[1.0, 2.0], TvOptions::default()).unwrap());
        let g =
            select_max_cosine_subgradient(&ConvexCost::total_variation(), &[5.0, 5.0], &r).unwrap();
        // Free parameter t gives g = (−t, t); t = 1 reproduces the reference.
        assert!(close(g.components()[0], -1.0, 1e-12));
        assert!(close(g.components()[1], 1.0, 1e-12));
        assert!(close(surface_normal(&g).dot(&r), 1.0, 1e-12));
    }
}
