use alloc::boxed::Box;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A component lies outside the cost function's domain.
    #[error("{cost}: component {component} = {value} is outside the domain ({requirement})")]
    Domain {
        cost: &'static str,
        component: usize,
        value: f64,
        requirement: &'static str,
    },
    #[error("component {component} is not finite ({value})")]
    NonFinite { component: usize, value: f64 },
    #[error("vector needs at least {required} components, got {actual}")]
    Dimension { required: usize, actual: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("{name} = {value} is out of range ({expected})")]
    Range {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("subgradient selection is not defined for the differentiable cost {0}")]
    UnsupportedCost(&'static str),
    #[error("gradient of {cost} vanishes at the {which} vector; tangent angle is undefined")]
    ZeroGradient {
        cost: &'static str,
        which: &'static str,
    },
    #[error("cosine similarity is undefined for a zero vector")]
    ZeroVector,
    #[error("invalid dataset: {0}")]
    Dataset(&'static str),
    #[error("invalid synthetic spec: {0}")]
    Spec(&'static str),
    /// A comparison failed while processing one dataset instance.
    #[error("instance {index}: {source}")]
    Instance { index: usize, source: Box<Error> },
}

impl Error {
    pub(crate) fn at_instance(self, index: usize) -> Error {
        Error::Instance {
            index,
            source: Box::new(self),
        }
    }
}
