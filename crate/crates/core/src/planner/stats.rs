use std::collections::HashMap;

use crate::model::{Digest, MethodInstance};

/// Visit counts and mean utilities of one decision node `(s, σ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct NodeStats {
    pub candidates: Vec<MethodInstance>,
    pub n_tau: u64,
    pub n: Vec<u64>,
    pub q: Vec<f64>,
}

impl NodeStats {
    pub fn new(candidates: Vec<MethodInstance>) -> Self {
        let k = candidates.len();
        NodeStats {
            candidates,
            n_tau: 0,
            n: vec![0; k],
            q: vec![0.0; k],
        }
    }

    /// Indices with no visit yet, in candidate order.
    pub fn untried(&self) -> Vec<usize> {
        (0..self.n.len()).filter(|&i| self.n[i] == 0).collect()
    }

    pub fn max_q(&self) -> f64 {
        self.q.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// First candidate with the highest `Q`.
    pub fn best(&self) -> Option<usize> {
        argmax(self.q.iter().copied())
    }

    pub fn index_of(&self, m: &MethodInstance) -> Option<usize> {
        self.candidates.iter().position(|c| c == m)
    }
}

/// Folds `λ` into the running mean of candidate `i`.
pub fn q_update(stats: &mut NodeStats, i: usize, lambda: f64) {
    let n = stats.n[i] as f64;
    stats.q[i] = (n * stats.q[i] + lambda) / (n + 1.0);
    stats.n[i] += 1;
    stats.n_tau += 1;
}

/// `argmax_m Q(m) + C·sqrt(ln N(τ) / N(m))`, first index on ties. Every
/// candidate must have been visited.
pub fn ucb_choose(stats: &NodeStats, c: f64) -> usize {
    assert!(!stats.candidates.is_empty(), "ucb_choose on an empty node");
    debug_assert!(stats.n.iter().all(|&n| n > 0));
    let log_n = (stats.n_tau as f64).ln();
    argmax(
        stats
            .q
            .iter()
            .zip(&stats.n)
            .map(|(q, n)| q + c * (log_n / *n as f64).sqrt()),
    )
    .expect("non-empty")
}

fn argmax(xs: impl Iterator<Item = f64>) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, x) in xs.enumerate() {
        if best.is_none_or(|(_, b)| x > b) {
            best = Some((i, x));
        }
    }
    best.map(|(i, _)| i)
}

/// Node statistics of one `select_method` call, keyed by `(s, σ)` digest.
#[derive(Clone, Debug, Default)]
pub struct StatsTable {
    index: HashMap<Digest, usize>,
    nodes: Vec<NodeStats>,
}

impl StatsTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &Digest) -> Option<&NodeStats> {
        self.index.get(key).map(|&i| &self.nodes[i])
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub(crate) fn lookup(&self, key: &Digest) -> Option<usize> {
        self.index.get(key).copied()
    }

    pub(crate) fn insert(&mut self, key: Digest, stats: NodeStats) -> usize {
        let i = self.nodes.len();
        self.nodes.push(stats);
        self.index.insert(key, i);
        i
    }

    pub(crate) fn node(&self, i: usize) -> &NodeStats {
        &self.nodes[i]
    }

    pub(crate) fn node_mut(&mut self, i: usize) -> &mut NodeStats {
        &mut self.nodes[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Digest, &NodeStats)> {
        self.index.iter().map(|(k, &i)| (k, &self.nodes[i]))
    }
}
