use thiserror::Error;

use super::data::{input_widths, lh_examples, lm_examples, utilities, Strategy, TrainingRecord};
use super::encode::EncodeError;
use super::intervals::{IntervalError, IntervalMap};
use super::model::{ModelFile, ModelKind};
use super::train::{train, TrainConfig, TrainError};
use crate::model::Domain;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("no training examples for {0:?}")]
    NoExamples(ModelKind),
    #[error(transparent)]
    Encode(#[from] EncodeError),
    #[error(transparent)]
    Intervals(#[from] IntervalError),
    #[error(transparent)]
    Train(#[from] TrainError),
}

/// Filters, encodes and trains on `records`, producing a model file for
/// `dom`. `k` is the number of utility intervals and only matters for LH.
pub fn fit_model(
    dom: &Domain,
    records: &[TrainingRecord],
    kind: ModelKind,
    k: usize,
    cfg: &TrainConfig,
) -> Result<ModelFile, FitError> {
    let (lm_width, lh_width) = input_widths(dom);
    let (examples, input, classes, intervals) = match kind {
        ModelKind::Lm1 | ModelKind::Lm2 => {
            let strategy = if kind == ModelKind::Lm1 {
                Strategy::SuccessOnly
            } else {
                Strategy::All
            };
            (
                lm_examples(dom, records, strategy)?,
                lm_width,
                dom.methods().len(),
                None,
            )
        }
        ModelKind::Lh => {
            let us = utilities(records);
            if us.is_empty() {
                return Err(FitError::NoExamples(kind));
            }
            let map = IntervalMap::fit(&us, k)?;
            (
                lh_examples(dom, records, &map)?,
                lh_width,
                map.k(),
                Some(map),
            )
        }
    };
    if examples.is_empty() {
        return Err(FitError::NoExamples(kind));
    }
    let (net, curves) = train(&examples, input, classes, cfg)?;
    Ok(ModelFile::new(
        dom,
        kind,
        net,
        intervals,
        cfg.clone(),
        curves,
    ))
}
