use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::encode::{encode_lh, encode_lm, Layout};
use super::intervals::IntervalMap;
use super::mlp::{argmax, Input, Mlp};
use super::train::{EpochMetrics, TrainConfig};
use crate::engine::MethodPolicy;
use crate::model::{Domain, MethodId, State, Task};
use crate::planner::Heuristic;
use crate::utility::Utility;

pub const MODEL_FORMAT: &str = "rae-model/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Lm1,
    Lm2,
    Lh,
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Lm1 => "lm1",
            ModelKind::Lm2 => "lm2",
            ModelKind::Lh => "lh",
        }
    }

    pub fn is_method_model(self) -> bool {
        matches!(self, ModelKind::Lm1 | ModelKind::Lm2)
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("invalid model file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported model format {0:?}")]
    Format(String),
    #[error("model was trained for {found:?}, not {expected:?}")]
    Domain { expected: String, found: String },
    #[error("model fingerprint {found:016x} does not match domain fingerprint {expected:016x}")]
    Fingerprint { expected: u64, found: u64 },
    #[error("expected a {expected:?} model, found {found:?}")]
    Kind {
        expected: &'static str,
        found: ModelKind,
    },
    #[error("network shape does not match the encoding")]
    Shape,
}

/// Everything needed to run a trained network against its domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format: String,
    pub kind: ModelKind,
    pub domain: String,
    pub fingerprint: u64,
    pub vars: Vec<String>,
    pub block: usize,
    pub tasks: Vec<String>,
    pub methods: Vec<String>,
    pub intervals: Option<IntervalMap>,
    pub train: TrainConfig,
    pub curves: Vec<EpochMetrics>,
    pub network: Mlp,
}

impl ModelFile {
    pub fn new(
        dom: &Domain,
        kind: ModelKind,
        network: Mlp,
        intervals: Option<IntervalMap>,
        train: TrainConfig,
        curves: Vec<EpochMetrics>,
    ) -> Self {
        let layout = Layout::of(dom);
        ModelFile {
            format: MODEL_FORMAT.to_string(),
            kind,
            domain: dom.name().to_string(),
            fingerprint: dom.fingerprint(),
            vars: (0..dom.n_vars()).map(|s| dom.var_name(s)).collect(),
            block: layout.block,
            tasks: dom.tasks().iter().map(|t| t.name.clone()).collect(),
            methods: dom.methods().iter().map(|m| m.name.clone()).collect(),
            intervals,
            train,
            curves,
            network,
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let m: ModelFile = serde_json::from_str(text)?;
        if m.format != MODEL_FORMAT {
            return Err(ModelError::Format(m.format));
        }
        Ok(m)
    }

    /// Refuses a model whose declarations differ from `dom`.
    pub fn check(&self, dom: &Domain) -> Result<(), ModelError> {
        if self.domain != dom.name() {
            return Err(ModelError::Domain {
                expected: dom.name().to_string(),
                found: self.domain.clone(),
            });
        }
        if self.fingerprint != dom.fingerprint() {
            return Err(ModelError::Fingerprint {
                expected: dom.fingerprint(),
                found: self.fingerprint,
            });
        }
        let layout = Layout::of(dom);
        let (input, output) = match self.kind {
            ModelKind::Lh => (
                layout.lh_width(),
                self.intervals.as_ref().map_or(0, IntervalMap::k),
            ),
            _ => (layout.lm_width(), layout.methods),
        };
        let n = &self.network;
        if n.input != input
            || n.output != output
            || n.w1.len() != n.hidden * n.input
            || n.b1.len() != n.hidden
            || n.w2.len() != n.output * n.hidden
            || n.b2.len() != n.output
        {
            return Err(ModelError::Shape);
        }
        Ok(())
    }
}

/// Method-template predictor backed by an LM network.
pub struct LearnedPolicy {
    model: ModelFile,
}

impl LearnedPolicy {
    pub fn new(model: ModelFile, dom: &Domain) -> Result<Self, ModelError> {
        if !model.kind.is_method_model() {
            return Err(ModelError::Kind {
                expected: "lm1 or lm2",
                found: model.kind,
            });
        }
        model.check(dom)?;
        Ok(LearnedPolicy { model })
    }

    /// Highest-scoring template among those that refine `task`.
    pub fn predict(&self, dom: &Domain, s: &State, task: &Task) -> Option<MethodId> {
        let x = encode_lm(dom, s, task).ok()?;
        let logits = self.model.network.forward(Input::Hot(&x.hot)).ok()?;
        dom.methods_for(task.id).iter().copied().reduce(|best, m| {
            if logits[m.index()] > logits[best.index()] {
                m
            } else {
                best
            }
        })
    }
}

impl MethodPolicy for LearnedPolicy {
    fn choose_template(&self, dom: &Domain, s: &State, task: &Task) -> Option<MethodId> {
        self.predict(dom, s, task)
    }
}

/// Utility estimate backed by an LH network: the midpoint of the most
/// likely interval.
pub struct LearnedHeuristic {
    model: ModelFile,
    intervals: IntervalMap,
}

impl LearnedHeuristic {
    pub fn new(model: ModelFile, dom: &Domain) -> Result<Self, ModelError> {
        if model.kind != ModelKind::Lh {
            return Err(ModelError::Kind {
                expected: "lh",
                found: model.kind,
            });
        }
        model.check(dom)?;
        let intervals = model.intervals.clone().ok_or(ModelError::Shape)?;
        Ok(LearnedHeuristic { model, intervals })
    }

    pub fn predict(&self, dom: &Domain, s: &State, task: &Task, method: MethodId) -> Option<f64> {
        let x = encode_lh(dom, s, task, method).ok()?;
        let logits = self.model.network.forward(Input::Hot(&x.hot)).ok()?;
        Some(self.intervals.decode(argmax(&logits)))
    }
}

impl Heuristic for LearnedHeuristic {
    fn estimate(&self, dom: &Domain, s: &State, task: &Task, method: MethodId) -> Utility {
        match self.predict(dom, s, task, method) {
            Some(u) if u.is_finite() && u >= 0.0 => Utility::Finite(u),
            _ => Utility::FAILURE,
        }
    }
}
