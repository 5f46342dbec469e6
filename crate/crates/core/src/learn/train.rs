use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::mlp::{argmax, cross_entropy, Input, Mlp, MlpError};
use crate::sim::SimRng;

/// Learning rates outside this range get a warning, not a refusal.
pub const SANE_LR: (f64, f64) = (1e-3, 1e-1);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub hidden: usize,
    pub lr: f64,
    pub epochs: usize,
    pub batch: usize,
    pub val_fraction: f64,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            hidden: 64,
            lr: 0.05,
            epochs: 60,
            batch: 32,
            val_fraction: 0.2,
            seed: 0,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrainError {
    #[error("empty dataset")]
    Empty,
    #[error("invalid training configuration: {0}")]
    Config(String),
    #[error("loss became non-finite in epoch {epoch}")]
    NonFinite { epoch: usize },
    #[error(transparent)]
    Mlp(#[from] MlpError),
}

/// One training example: positions of ones in the input and the class label.
pub type Example = (Vec<usize>, usize);

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpochMetrics {
    pub epoch: usize,
    pub train_loss: f64,
    pub train_acc: f64,
    /// Absent when the dataset is too small to hold out anything.
    pub val_loss: Option<f64>,
    pub val_acc: Option<f64>,
}

pub fn lr_warning(lr: f64) -> Option<String> {
    if lr < SANE_LR.0 || lr > SANE_LR.1 {
        Some(format!(
            "learning rate {lr} is outside [{}, {}]; training may stall or diverge",
            SANE_LR.0, SANE_LR.1
        ))
    } else {
        None
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<(), TrainError> {
        let bad = |m: &str| Err(TrainError::Config(m.to_string()));
        if self.hidden == 0 {
            return bad("hidden width must be positive");
        }
        if self.batch == 0 {
            return bad("batch size must be positive");
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return bad("learning rate must be positive and finite");
        }
        if !(0.0..1.0).contains(&self.val_fraction) {
            return bad("validation fraction must lie in [0, 1)");
        }
        Ok(())
    }
}

/// Seeded shuffle split: the first `floor(n·val_fraction)` shuffled examples
/// are held out.
pub fn split(n: usize, val_fraction: f64, rng: &mut SimRng) -> (Vec<usize>, Vec<usize>) {
    let mut idx: Vec<usize> = (0..n).collect();
    shuffle(&mut idx, rng);
    let n_val = (n as f64 * val_fraction).floor() as usize;
    let train = idx.split_off(n_val);
    (train, idx)
}

fn shuffle(idx: &mut [usize], rng: &mut SimRng) {
    for i in (1..idx.len()).rev() {
        let j = rng.below(i + 1);
        idx.swap(i, j);
    }
}

/// Mean loss and accuracy of `net` on the selected examples.
pub fn evaluate(net: &Mlp, data: &[Example], which: &[usize]) -> Result<(f64, f64), MlpError> {
    let mut loss = 0.0;
    let mut hits = 0usize;
    for &i in which {
        let (x, y) = &data[i];
        let logits = net.forward(Input::Hot(x))?;
        loss += cross_entropy(&logits, *y);
        hits += usize::from(argmax(&logits) == *y);
    }
    let n = which.len().max(1) as f64;
    Ok((loss / n, hits as f64 / n))
}

/// Minibatch SGD on softmax cross-entropy.
pub fn train(
    data: &[Example],
    input: usize,
    classes: usize,
    cfg: &TrainConfig,
) -> Result<(Mlp, Vec<EpochMetrics>), TrainError> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(TrainError::Empty);
    }
    if let Some(w) = lr_warning(cfg.lr) {
        log::warn!("{w}");
    }
    let rng = SimRng::new(cfg.seed);
    let mut init_rng = rng.stream("init");
    let mut shuffle_rng = rng.stream("shuffle");
    let (mut train_idx, val_idx) = split(data.len(), cfg.val_fraction, &mut rng.stream("split"));
    let mut net = Mlp::new(input, cfg.hidden, classes, &mut init_rng);
    let mut curves = Vec::with_capacity(cfg.epochs);
    for epoch in 1..=cfg.epochs {
        shuffle(&mut train_idx, &mut shuffle_rng);
        for chunk in train_idx.chunks(cfg.batch) {
            let batch: Vec<(Input, usize)> = chunk
                .iter()
                .map(|&i| (Input::Hot(&data[i].0), data[i].1))
                .collect();
            let (g, loss) = net.grad(&batch)?;
            if !loss.is_finite() {
                return Err(TrainError::NonFinite { epoch });
            }
            net.step(&g, cfg.lr);
        }
        let (train_loss, train_acc) = evaluate(&net, data, &train_idx)?;
        if !train_loss.is_finite() {
            return Err(TrainError::NonFinite { epoch });
        }
        let (val_loss, val_acc) = if val_idx.is_empty() {
            (None, None)
        } else {
            let (l, a) = evaluate(&net, data, &val_idx)?;
            (Some(l), Some(a))
        };
        log::debug!("epoch {epoch}: train loss {train_loss:.4} acc {train_acc:.3}");
        curves.push(EpochMetrics {
            epoch,
            train_loss,
            train_acc,
            val_loss,
            val_acc,
        });
    }
    Ok((net, curves))
}
