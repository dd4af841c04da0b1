//! Parallel drivers for the evaluation protocols.
//!
//! Folds run on a dedicated rayon pool; results are gathered by instance index
//! so the report does not depend on the number of threads.

use bregman_core::classify::split_fold;
use bregman_core::{
    loo_fold, Error, EvaluationReport, LabeledDataset, Prediction, Protocol, Proximity,
};
use rayon::prelude::*;

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("failed to start worker threads")
}

/// Keeps the error of the lowest failing index.
fn gather(results: Vec<Result<Prediction, Error>>) -> Result<Vec<Prediction>, Error> {
    results.into_iter().collect()
}

pub fn leave_one_out<P: Proximity + Sync + ?Sized>(
    data: &LabeledDataset,
    m: &P,
    jobs: usize,
) -> Result<EvaluationReport, Error> {
    if jobs <= 1 {
        return bregman_core::leave_one_out(data, m);
    }
    if data.len() < 2 || data.classes().len() < 2 {
        // Reuse the sequential validation message.
        return bregman_core::leave_one_out(data, m);
    }
    let results: Vec<_> = pool(jobs).install(|| {
        (0..data.len())
            .into_par_iter()
            .map(|i| loo_fold(data, i, m))
            .collect()
    });
    Ok(EvaluationReport::from_predictions(
        m.name(),
        Protocol::LeaveOneOut,
        data.applied_scale(),
        gather(results)?,
    ))
}

pub fn train_test<P: Proximity + Sync + ?Sized>(
    train: &LabeledDataset,
    test: &LabeledDataset,
    m: &P,
    jobs: usize,
) -> Result<EvaluationReport, Error> {
    if jobs <= 1 || train.dim() != test.dim() {
        return bregman_core::train_test_evaluate(train, test, m);
    }
    let results: Vec<_> = pool(jobs).install(|| {
        (0..test.len())
            .into_par_iter()
            .map(|i| split_fold(train, test, i, m))
            .collect()
    });
    Ok(EvaluationReport::from_predictions(
        m.name(),
        Protocol::TrainTestSplit,
        test.applied_scale(),
        gather(results)?,
    ))
}
