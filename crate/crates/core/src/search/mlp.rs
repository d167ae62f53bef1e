//! Small fully connected policy network: rectifier hidden layers and a masked softmax head.

use rand::Rng;

/// One dense layer, weights stored input-major (`w[k * outputs + o]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Layer {
    pub inputs: usize,
    pub outputs: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Layer {
    /// Glorot-uniform weights, zero bias.
    fn init(inputs: usize, outputs: usize, rng: &mut impl Rng) -> Self {
        let limit = (6.0 / (inputs + outputs) as f64).sqrt();
        let weights = (0..inputs * outputs).map(|_| rng.gen_range(-limit..limit)).collect();
        Self { inputs, outputs, weights, bias: vec![0.0; outputs] }
    }

    fn forward(&self, x: &[f64], out: &mut Vec<f64>) {
        out.clear();
        out.extend_from_slice(&self.bias);
        for (k, &xk) in x.iter().enumerate() {
            if xk == 0.0 {
                continue;
            }
            let row = &self.weights[k * self.outputs..(k + 1) * self.outputs];
            for (o, w) in out.iter_mut().zip(row) {
                *o += xk * w;
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Policy {
    layers: Vec<Layer>,
}

/// Parameter gradients, shaped like the policy's layers.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub weights: Vec<Vec<f64>>,
    pub bias: Vec<Vec<f64>>,
}

/// One supervised example: input vector, chosen action, and the legal-action mask (None = all legal).
#[derive(Debug, Clone, Copy)]
pub struct Sample<'a> {
    pub input: &'a [f64],
    pub action: usize,
    pub mask: Option<&'a [bool]>,
}

impl Policy {
    pub fn new(inputs: usize, hidden: &[usize], outputs: usize, rng: &mut impl Rng) -> Self {
        let mut sizes = vec![inputs];
        sizes.extend_from_slice(hidden);
        sizes.push(outputs);
        let layers = sizes.windows(2).map(|w| Layer::init(w[0], w[1], rng)).collect();
        Self { layers }
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    pub fn layers_mut(&mut self) -> &mut [Layer] {
        &mut self.layers
    }

    pub fn input_len(&self) -> usize {
        self.layers[0].inputs
    }

    pub fn output_len(&self) -> usize {
        self.layers.last().expect("at least one layer").outputs
    }

    /// Activations of every layer; the last entry holds the logits.
    fn activations(&self, input: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = Vec::with_capacity(self.layers.len() + 1);
        acts.push(input.to_vec());
        let last = self.layers.len() - 1;
        for (l, layer) in self.layers.iter().enumerate() {
            let mut out = Vec::with_capacity(layer.outputs);
            layer.forward(acts.last().expect("input pushed"), &mut out);
            if l < last {
                for v in out.iter_mut() {
                    *v = v.max(0.0);
                }
            }
            acts.push(out);
        }
        acts
    }

    pub fn logits(&self, input: &[f64]) -> Vec<f64> {
        self.activations(input).pop().expect("output layer")
    }

    /// Action probabilities; masked-out actions get exactly zero.
    pub fn probabilities(&self, input: &[f64], mask: Option<&[bool]>) -> Vec<f64> {
        masked_softmax(&self.logits(input), mask)
    }

    /// Mean cross-entropy `-ln p(action | input)` over `batch` and its gradient.
    pub fn loss_and_gradients(&self, batch: &[Sample<'_>]) -> (f64, Gradients) {
        let mut grads = Gradients {
            weights: self.layers.iter().map(|l| vec![0.0; l.weights.len()]).collect(),
            bias: self.layers.iter().map(|l| vec![0.0; l.bias.len()]).collect(),
        };
        let mut loss = 0.0;
        let scale = 1.0 / batch.len().max(1) as f64;
        for sample in batch {
            let acts = self.activations(sample.input);
            let probs = masked_softmax(acts.last().expect("output layer"), sample.mask);
            loss -= probs[sample.action].max(f64::MIN_POSITIVE).ln() * scale;
            // dL/dlogits = p - onehot
            let mut delta: Vec<f64> = probs.iter().map(|p| p * scale).collect();
            delta[sample.action] -= scale;
            for l in (0..self.layers.len()).rev() {
                let layer = &self.layers[l];
                let x = &acts[l];
                let gw = &mut grads.weights[l];
                for (gb, d) in grads.bias[l].iter_mut().zip(&delta) {
                    *gb += d;
                }
                for (k, &xk) in x.iter().enumerate() {
                    if xk == 0.0 {
                        continue;
                    }
                    let row = &mut gw[k * layer.outputs..(k + 1) * layer.outputs];
                    for (g, d) in row.iter_mut().zip(&delta) {
                        *g += xk * d;
                    }
                }
                if l == 0 {
                    break;
                }
                // back through the weights and the rectifier of the previous layer
                delta = (0..layer.inputs)
                    .map(|k| {
                        if x[k] <= 0.0 {
                            return 0.0;
                        }
                        let row = &layer.weights[k * layer.outputs..(k + 1) * layer.outputs];
                        row.iter().zip(&delta).map(|(w, d)| w * d).sum()
                    })
                    .collect();
            }
        }
        (loss, grads)
    }

    pub fn loss(&self, batch: &[Sample<'_>]) -> f64 {
        let scale = 1.0 / batch.len().max(1) as f64;
        batch
            .iter()
            .map(|s| -self.probabilities(s.input, s.mask)[s.action].max(f64::MIN_POSITIVE).ln() * scale)
            .sum()
    }

    /// Plain gradient descent step.
    pub fn apply(&mut self, grads: &Gradients, learning_rate: f64) {
        for (l, layer) in self.layers.iter_mut().enumerate() {
            for (w, g) in layer.weights.iter_mut().zip(&grads.weights[l]) {
                *w -= learning_rate * g;
            }
            for (b, g) in layer.bias.iter_mut().zip(&grads.bias[l]) {
                *b -= learning_rate * g;
            }
        }
    }
}

pub fn masked_softmax(logits: &[f64], mask: Option<&[bool]>) -> Vec<f64> {
    let allowed = |i: usize| mask.is_none_or(|m| m[i]);
    let max = logits
        .iter()
        .enumerate()
        .filter(|&(i, _)| allowed(i))
        .map(|(_, &z)| z)
        .fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = logits
        .iter()
        .enumerate()
        .map(|(i, &z)| if allowed(i) { (z - max).exp() } else { 0.0 })
        .collect();
    let total: f64 = out.iter().sum();
    for p in out.iter_mut() {
        *p /= total;
    }
    out
}
