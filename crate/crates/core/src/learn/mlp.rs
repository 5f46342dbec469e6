use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sim::SimRng;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MlpError {
    #[error("input has width {found}, network expects {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("label {label} outside 0..{classes}")]
    Label { label: usize, classes: usize },
}

/// Network input: a dense vector or the positions of ones in a binary one.
#[derive(Clone, Copy, Debug)]
pub enum Input<'a> {
    Hot(&'a [usize]),
    Dense(&'a [f64]),
}

/// `linear → ReLU → linear`, producing unnormalized class scores.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Mlp {
    pub input: usize,
    pub hidden: usize,
    pub output: usize,
    /// Row-major `hidden × input`.
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    /// Row-major `output × hidden`.
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

/// Gradients in the same layout as the parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Grads {
    pub w1: Vec<f64>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: Vec<f64>,
}

impl Grads {
    fn zeros(m: &Mlp) -> Self {
        Grads {
            w1: vec![0.0; m.w1.len()],
            b1: vec![0.0; m.b1.len()],
            w2: vec![0.0; m.w2.len()],
            b2: vec![0.0; m.b2.len()],
        }
    }

    /// `[w1, b1, w2, b2]` flattened, matching [`Mlp::param`].
    pub fn flat(&self) -> Vec<f64> {
        [&self.w1[..], &self.b1, &self.w2, &self.b2].concat()
    }
}

struct Pass {
    z1: Vec<f64>,
    a1: Vec<f64>,
    logits: Vec<f64>,
}

impl Mlp {
    /// Weights uniform in `±1/sqrt(fan_in)`, biases zero.
    pub fn new(input: usize, hidden: usize, output: usize, rng: &mut SimRng) -> Self {
        let mut uniform = |n: usize, fan_in: usize| -> Vec<f64> {
            let r = 1.0 / (fan_in.max(1) as f64).sqrt();
            (0..n).map(|_| (2.0 * rng.next_f64() - 1.0) * r).collect()
        };
        let w1 = uniform(hidden * input, input);
        let w2 = uniform(output * hidden, hidden);
        Mlp {
            input,
            hidden,
            output,
            w1,
            b1: vec![0.0; hidden],
            w2,
            b2: vec![0.0; output],
        }
    }

    pub fn zeros(input: usize, hidden: usize, output: usize) -> Self {
        Mlp {
            input,
            hidden,
            output,
            w1: vec![0.0; hidden * input],
            b1: vec![0.0; hidden],
            w2: vec![0.0; output * hidden],
            b2: vec![0.0; output],
        }
    }

    pub fn n_params(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len()
    }

    fn slot(&mut self, k: usize) -> &mut f64 {
        let (a, b, c) = (self.w1.len(), self.b1.len(), self.w2.len());
        if k < a {
            &mut self.w1[k]
        } else if k < a + b {
            &mut self.b1[k - a]
        } else if k < a + b + c {
            &mut self.w2[k - a - b]
        } else {
            &mut self.b2[k - a - b - c]
        }
    }

    pub fn param(&self, k: usize) -> f64 {
        *self.clone().slot(k)
    }

    pub fn set_param(&mut self, k: usize, v: f64) {
        *self.slot(k) = v;
    }

    fn check(&self, x: Input) -> Result<(), MlpError> {
        match x {
            Input::Dense(v) if v.len() != self.input => Err(MlpError::Dimension {
                expected: self.input,
                found: v.len(),
            }),
            Input::Hot(h) => match h.iter().find(|&&i| i >= self.input) {
                Some(&i) => Err(MlpError::Dimension {
                    expected: self.input,
                    found: i + 1,
                }),
                None => Ok(()),
            },
            _ => Ok(()),
        }
    }

    fn pass(&self, x: Input) -> Pass {
        let mut z1 = self.b1.clone();
        for (h, z) in z1.iter_mut().enumerate() {
            let row = &self.w1[h * self.input..(h + 1) * self.input];
            *z += match x {
                Input::Hot(hot) => hot.iter().map(|&i| row[i]).sum::<f64>(),
                Input::Dense(v) => row.iter().zip(v).map(|(w, x)| w * x).sum::<f64>(),
            };
        }
        let a1: Vec<f64> = z1.iter().map(|z| z.max(0.0)).collect();
        let mut logits = self.b2.clone();
        for (o, l) in logits.iter_mut().enumerate() {
            let row = &self.w2[o * self.hidden..(o + 1) * self.hidden];
            *l += row.iter().zip(&a1).map(|(w, a)| w * a).sum::<f64>();
        }
        Pass { z1, a1, logits }
    }

    pub fn forward(&self, x: Input) -> Result<Vec<f64>, MlpError> {
        self.check(x)?;
        Ok(self.pass(x).logits)
    }

    /// Hidden activations after the ReLU.
    pub fn hidden_activations(&self, x: Input) -> Result<Vec<f64>, MlpError> {
        self.check(x)?;
        Ok(self.pass(x).a1)
    }

    /// Cross-entropy of the softmax of the logits against `label`.
    pub fn loss(&self, x: Input, label: usize) -> Result<f64, MlpError> {
        let logits = self.forward(x)?;
        self.check_label(label)?;
        Ok(cross_entropy(&logits, label))
    }

    fn check_label(&self, label: usize) -> Result<(), MlpError> {
        if label >= self.output {
            Err(MlpError::Label {
                label,
                classes: self.output,
            })
        } else {
            Ok(())
        }
    }

    /// Mean loss over `batch` and its exact gradient.
    #[allow(clippy::needless_range_loop)]
    pub fn grad(&self, batch: &[(Input, usize)]) -> Result<(Grads, f64), MlpError> {
        let mut g = Grads::zeros(self);
        let mut total = 0.0;
        let scale = 1.0 / batch.len().max(1) as f64;
        for &(x, y) in batch {
            self.check(x)?;
            self.check_label(y)?;
            let p = self.pass(x);
            total += cross_entropy(&p.logits, y);
            let mut dl = softmax(&p.logits);
            dl[y] -= 1.0;
            let mut da = vec![0.0; self.hidden];
            for (o, d) in dl.iter().enumerate() {
                let d = d * scale;
                g.b2[o] += d;
                let row = o * self.hidden;
                for h in 0..self.hidden {
                    g.w2[row + h] += d * p.a1[h];
                    da[h] += self.w2[row + h] * d;
                }
            }
            for h in 0..self.hidden {
                if p.z1[h] <= 0.0 {
                    continue;
                }
                let dz = da[h];
                g.b1[h] += dz;
                let row = h * self.input;
                match x {
                    Input::Hot(hot) => {
                        for &i in hot {
                            g.w1[row + i] += dz;
                        }
                    }
                    Input::Dense(v) => {
                        for (i, xi) in v.iter().enumerate() {
                            g.w1[row + i] += dz * xi;
                        }
                    }
                }
            }
        }
        Ok((g, total * scale))
    }

    pub fn step(&mut self, g: &Grads, lr: f64) {
        for (p, d) in self.w1.iter_mut().zip(&g.w1) {
            *p -= lr * d;
        }
        for (p, d) in self.b1.iter_mut().zip(&g.b1) {
            *p -= lr * d;
        }
        for (p, d) in self.w2.iter_mut().zip(&g.w2) {
            *p -= lr * d;
        }
        for (p, d) in self.b2.iter_mut().zip(&g.b2) {
            *p -= lr * d;
        }
    }

    /// Index of the largest logit, lowest index on ties.
    pub fn predict(&self, x: Input) -> Result<usize, MlpError> {
        Ok(argmax(&self.forward(x)?))
    }
}

pub fn argmax(xs: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in xs.iter().enumerate() {
        if *x > xs[best] {
            best = i;
        }
    }
    best
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = logits.iter().map(|l| (l - m).exp()).collect();
    let z: f64 = e.iter().sum();
    e.into_iter().map(|v| v / z).collect()
}

pub fn cross_entropy(logits: &[f64], label: usize) -> f64 {
    let m = logits.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lse = m + logits.iter().map(|l| (l - m).exp()).sum::<f64>().ln();
    lse - logits[label]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_network_is_uniform() {
        let m = Mlp::zeros(4, 3, 5);
        let x = [1.0, 0.0, 1.0, 0.0];
        let l = m.loss(Input::Dense(&x), 2).unwrap();
        assert!((l - 5f64.ln()).abs() < 1e-12);
        let p = softmax(&m.forward(Input::Dense(&x)).unwrap());
        assert!(p.iter().all(|v| (v - 0.2).abs() < 1e-12));
    }

    #[test]
    fn relu_zeroes_negative_preactivations() {
        let mut m = Mlp::zeros(2, 2, 1);
        m.w1 = vec![1.0, 0.0, -1.0, 0.0];
        let a = m.hidden_activations(Input::Dense(&[2.0, 0.0])).unwrap();
        assert_eq!(a, vec![2.0, 0.0]);
    }

    #[test]
    fn hot_and_dense_agree() {
        let mut rng = SimRng::new(4);
        let m = Mlp::new(6, 5, 3, &mut rng);
        let hot = [1, 4];
        let dense = [0.0, 1.0, 0.0, 0.0, 1.0, 0.0];
        let a = m.forward(Input::Hot(&hot)).unwrap();
        let b = m.forward(Input::Dense(&dense)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
        let (ga, _) = m.grad(&[(Input::Hot(&hot), 2)]).unwrap();
        let (gb, _) = m.grad(&[(Input::Dense(&dense), 2)]).unwrap();
        for (x, y) in ga.flat().iter().zip(gb.flat()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_and_label_errors() {
        let m = Mlp::zeros(3, 2, 2);
        assert!(m.forward(Input::Dense(&[1.0])).is_err());
        assert!(m.forward(Input::Hot(&[3])).is_err());
        assert!(m.loss(Input::Hot(&[0]), 2).is_err());
    }

    #[test]
    fn argmax_takes_lowest_index_on_ties() {
        assert_eq!(argmax(&[0.5, 0.9, 0.9]), 1);
    }
}
