//! 1-nearest-neighbour classification and its evaluation protocols.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::similarity::Proximity;
use crate::vector::FeatureVector;

/// Feature vectors with class labels.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct LabeledDataset {
    vectors: Vec<FeatureVector>,
    labels: Vec<String>,
    name: String,
    applied_scale: f64,
}

impl LabeledDataset {
    /// Requires at least one instance, one label per vector and a shared
    /// dimension.
    pub fn new(
        vectors: Vec<FeatureVector>,
        labels: Vec<String>,
        name: impl Into<String>,
    ) -> Result<Self> {
        if vectors.len() != labels.len() {
            return Err(Error::Dataset("vector and label counts differ"));
        }
        let Some(first) = vectors.first() else {
            return Err(Error::Dataset("dataset is empty"));
        };
        let dim = first.len();
        if let Some(bad) = vectors.iter().find(|v| v.len() != dim) {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: bad.len(),
            });
        }
        Ok(LabeledDataset {
            vectors,
            labels,
            name: name.into(),
            applied_scale: 1.0,
        })
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors[0].len()
    }

    pub fn vectors(&self) -> &[FeatureVector] {
        &self.vectors
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn applied_scale(&self) -> f64 {
        self.applied_scale
    }

    pub fn get(&self, index: usize) -> Option<(&FeatureVector, &str)> {
        Some((self.vectors.get(index)?, self.labels.get(index)?.as_str()))
    }

    /// Distinct labels in order of first appearance.
    pub fn classes(&self) -> Vec<&str> {
        let mut out: Vec<&str> = Vec::new();
        for l in &self.labels {
            if !out.contains(&l.as_str()) {
                out.push(l);
            }
        }
        out
    }

    /// Multiplies every feature by `factor` and records it in `applied_scale`.
    pub fn scale_features(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(Error::Range {
                name: "scale factor",
                value: factor,
                expected: "finite and > 0",
            });
        }
        let vectors = self
            .vectors
            .iter()
            .enumerate()
            .map(|(i, v)| v.scaled(factor).map_err(|e| e.at_instance(i)))
            .collect::<Result<Vec<_>>>()?;
        Ok(LabeledDataset {
            vectors,
            labels: self.labels.clone(),
            name: self.name.clone(),
            applied_scale: self.applied_scale * factor,
        })
    }

    /// Keeps the instances whose label satisfies `keep`, preserving order.
    pub fn filter_labels(&self, mut keep: impl FnMut(&str) -> bool) -> Result<Self> {
        let (vectors, labels): (Vec<_>, Vec<_>) = self
            .vectors
            .iter()
            .zip(&self.labels)
            .filter(|(_, l)| keep(l))
            .map(|(v, l)| (v.clone(), l.clone()))
            .unzip();
        let mut out = LabeledDataset::new(vectors, labels, self.name.clone())?;
        out.applied_scale = self.applied_scale;
        Ok(out)
    }

    /// Overrides the recorded scale, e.g. for data that was scaled elsewhere.
    pub fn with_applied_scale(mut self, scale: f64) -> Self {
        self.applied_scale = scale;
        self
    }

    fn require_classification_ready(&self) -> Result<()> {
        if self.len() < 2 {
            return Err(Error::Dataset("need at least two instances"));
        }
        if self.classes().len() < 2 {
            return Err(Error::Dataset("need at least two distinct labels"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum Protocol {
    LeaveOneOut,
    TrainTestSplit,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Prediction {
    pub index: usize,
    pub predicted: String,
    pub actual: String,
}

impl Prediction {
    pub fn is_correct(&self) -> bool {
        self.predicted == self.actual
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EvaluationReport {
    pub measure_name: String,
    pub protocol: Protocol,
    pub correct: usize,
    pub total: usize,
    pub accuracy: f64,
    /// Scale that had been applied to the evaluated features.
    pub applied_scale: f64,
    pub per_instance: Vec<Prediction>,
}

impl EvaluationReport {
    /// Builds a report from predictions listed in instance order.
    pub fn from_predictions(
        measure_name: &str,
        protocol: Protocol,
        applied_scale: f64,
        per_instance: Vec<Prediction>,
    ) -> Self {
        let correct = per_instance.iter().filter(|p| p.is_correct()).count();
        let total = per_instance.len();
        let accuracy = if total == 0 {
            0.0
        } else {
            correct as f64 / total as f64
        };
        EvaluationReport {
            measure_name: measure_name.into(),
            protocol,
            correct,
            total,
            accuracy,
            applied_scale,
            per_instance,
        }
    }
}

/// Index of the training instance closest to `query`, skipping `exclude`.
/// Ties go to the lowest index.
fn nearest<P: Proximity + ?Sized>(
    train: &LabeledDataset,
    query: &[f64],
    m: &P,
    exclude: Option<usize>,
) -> Result<usize> {
    if query.len() != train.dim() {
        return Err(Error::DimensionMismatch {
            left: train.dim(),
            right: query.len(),
        });
    }
    let direction = m.direction();
    let mut best: Option<(usize, f64)> = None;
    for (i, v) in train.vectors.iter().enumerate() {
        if Some(i) == exclude {
            continue;
        }
        let score = m.evaluate(query, v).map_err(|e| e.at_instance(i))?;
        match best {
            Some((_, b)) if !direction.is_closer(score, b) => {}
            _ => best = Some((i, score)),
        }
    }
    best.map(|(i, _)| i)
        .ok_or(Error::Dataset("no training instances to compare against"))
}

/// Label of the training instance that `m` ranks closest to `query`.
pub fn predict_1nn<'a, P: Proximity + ?Sized>(
    train: &'a LabeledDataset,
    query: &[f64],
    m: &P,
) -> Result<&'a str> {
    let i = nearest(train, query, m, None)?;
    Ok(&train.labels[i])
}

/// Classifies instance `index` against every other instance.
pub fn loo_fold<P: Proximity + ?Sized>(
    data: &LabeledDataset,
    index: usize,
    m: &P,
) -> Result<Prediction> {
    let (query, actual) = data
        .get(index)
        .ok_or(Error::Dataset("fold index out of range"))?;
    let nn = nearest(data, query, m, Some(index)).map_err(|e| match e {
        Error::Instance { .. } => e,
        other => other.at_instance(index),
    })?;
    Ok(Prediction {
        index,
        predicted: data.labels[nn].clone(),
        actual: actual.into(),
    })
}

/// Leave-one-out 1-NN evaluation, folds run in index order.
pub fn leave_one_out<P: Proximity + ?Sized>(
    data: &LabeledDataset,
    m: &P,
) -> Result<EvaluationReport> {
    data.require_classification_ready()?;
    let predictions = (0..data.len())
        .map(|i| loo_fold(data, i, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvaluationReport::from_predictions(
        m.name(),
        Protocol::LeaveOneOut,
        data.applied_scale,
        predictions,
    ))
}

/// Classifies test instance `index` against the full training set.
pub fn split_fold<P: Proximity + ?Sized>(
    train: &LabeledDataset,
    test: &LabeledDataset,
    index: usize,
    m: &P,
) -> Result<Prediction> {
    let (query, actual) = test
        .get(index)
        .ok_or(Error::Dataset("test index out of range"))?;
    let nn = nearest(train, query, m, None).map_err(|e| Error::Instance {
        index,
        source: alloc::boxed::Box::new(e),
    })?;
    Ok(Prediction {
        index,
        predicted: train.labels[nn].clone(),
        actual: actual.into(),
    })
}

/// 1-NN accuracy of `test` against `train`.
pub fn train_test_evaluate<P: Proximity + ?Sized>(
    train: &LabeledDataset,
    test: &LabeledDataset,
    m: &P,
) -> Result<EvaluationReport> {
    if train.dim() != test.dim() {
        return Err(Error::DimensionMismatch {
            left: train.dim(),
            right: test.dim(),
        });
    }
    let predictions = (0..test.len())
        .map(|i| split_fold(train, test, i, m))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvaluationReport::from_predictions(
        m.name(),
        Protocol::TrainTestSplit,
        test.applied_scale,
        predictions,
    ))
}

/// Splits each class in order: the first `ceil(n/2)` instances train, the rest
/// test.
pub fn split_half_per_class(data: &LabeledDataset) -> Result<(LabeledDataset, LabeledDataset)> {
    let mut seen: Vec<(&str, usize, usize)> = Vec::new();
    for l in &data.labels {
        match seen.iter_mut().find(|(c, _, _)| c == l) {
            Some(entry) => entry.1 += 1,
            None => seen.push((l, 1, 0)),
        }
    }
    let mut train = (Vec::new(), Vec::new());
    let mut test = (Vec::new(), Vec::new());
    for (v, l) in data.vectors.iter().zip(&data.labels) {
        let entry = seen.iter_mut().find(|(c, _, _)| c == l).unwrap();
        let side = if entry.2 < entry.1.div_ceil(2) {
            &mut train
        } else {
            &mut test
        };
        entry.2 += 1;
        side.0.push(v.clone());
        side.1.push(l.clone());
    }
    if test.0.is_empty() {
        return Err(Error::Dataset("too few instances to split"));
    }
    let name = &data.name;
    let train =
        LabeledDataset::new(train.0, train.1, name.clone())?.with_applied_scale(data.applied_scale);
    let test =
        LabeledDataset::new(test.0, test.1, name.clone())?.with_applied_scale(data.applied_scale);
    Ok((train, test))
}
