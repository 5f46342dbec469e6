//! Learning method choices (LM) and utility estimates (LH) from planner
//! decisions: one-hot encodings, a small MLP trained with SGD, and
//! equal-frequency utility intervals.

mod data;
mod encode;
mod intervals;
mod mlp;
mod model;
mod pipeline;
mod train;

pub use data::{
    collect_records, input_widths, lh_examples, lm_examples, read_records, records_from_run,
    utilities, write_records, RecordError, Strategy, TrainingRecord,
};
pub use encode::{decode_state_blocks, encode_lh, encode_lm, EncodeError, Encoding, Layout};
pub use intervals::{IntervalError, IntervalMap};
pub use mlp::{argmax, cross_entropy, softmax, Grads, Input, Mlp, MlpError};
pub use model::{LearnedHeuristic, LearnedPolicy, ModelError, ModelFile, ModelKind, MODEL_FORMAT};
pub use pipeline::{fit_model, FitError};
pub use train::{
    evaluate, lr_warning, split, train, EpochMetrics, Example, TrainConfig, TrainError, SANE_LR,
};
