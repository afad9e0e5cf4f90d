//! Small feedforward classifiers: inference, input gradients, and training.
//!
//! Models are plain dense layers with ReLU hidden activations and a softmax
//! over the final logits. The loss everywhere is cross-entropy of the softmax
//! against the truth label, so the input gradient the attacks consume is
//! `g(x) = ∇ₓ L(x, label)` computed by exact backpropagation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numcore::{matvec, matvec_t, Matrix, Rng, Vector};

/// One classifier input: feature vector in `[0,1]ᵈ` plus its truth label.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Sample {
    pub x0: Vector,
    pub label: usize,
}

impl Sample {
    pub fn new(x0: Vector, label: usize) -> Self {
        Sample { x0, label }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    None,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Layer {
    pub weights: Matrix,
    pub bias: Vector,
    pub activation: Activation,
}

/// Feedforward classifier. The final layer's width is the class count; its
/// logits go through softmax in [`forward`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NeuralModel {
    pub model_id: String,
    pub class_count: usize,
    pub layers: Vec<Layer>,
}

/// Serialization version for the on-disk model document.
pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    version: u32,
    #[serde(flatten)]
    model: NeuralModel,
}

impl NeuralModel {
    pub fn input_dim(&self) -> usize {
        self.layers.first().map(|l| l.weights.cols).unwrap_or(0)
    }

    /// Check the structural invariants: layer dimensions chain, the final
    /// layer width equals `class_count`, and every value is finite.
    pub fn validate(&self) -> Result<()> {
        if self.layers.is_empty() {
            return Err(Error::EmptyData("model has no layers"));
        }
        let mut width = self.layers[0].weights.cols;
        for layer in &self.layers {
            if !layer.weights.shape_valid() {
                return Err(Error::InvalidConfig(format!(
                    "model '{}': weight storage does not match declared shape",
                    self.model_id
                )));
            }
            if layer.weights.cols != width {
                return Err(Error::DimensionMismatch {
                    context: "layer chaining",
                    expected: width,
                    got: layer.weights.cols,
                });
            }
            if layer.bias.len() != layer.weights.rows {
                return Err(Error::DimensionMismatch {
                    context: "layer bias",
                    expected: layer.weights.rows,
                    got: layer.bias.len(),
                });
            }
            if !layer.weights.is_finite() || !layer.bias.is_finite() {
                return Err(Error::InvalidConfig(format!(
                    "model '{}' contains non-finite parameters",
                    self.model_id
                )));
            }
            width = layer.weights.rows;
        }
        if width != self.class_count {
            return Err(Error::DimensionMismatch {
                context: "final layer width vs class_count",
                expected: self.class_count,
                got: width,
            });
        }
        Ok(())
    }

    /// Serialize to the versioned JSON document. serde_json renders floats
    /// with the shortest digits that round-trip bit-exactly.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&ModelFile {
            version: MODEL_FORMAT_VERSION,
            model: self.clone(),
        })
        .expect("model serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<NeuralModel> {
        let file: ModelFile = serde_json::from_str(text)?;
        if file.version != MODEL_FORMAT_VERSION {
            return Err(Error::InvalidConfig(format!(
                "unsupported model format version {}",
                file.version
            )));
        }
        file.model.validate()?;
        Ok(file.model)
    }
}

/// Input gradient of the cross-entropy loss, with the loss value itself.
#[derive(Debug, Clone)]
pub struct GradientResult {
    pub g: Vector,
    pub loss: f64,
}

fn softmax(logits: &Vector) -> Vector {
    let max = logits.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let exps: Vec<f64> = logits.iter().map(|&z| (z - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    Vector(exps.into_iter().map(|e| e / sum).collect())
}

fn apply_activation(z: &Vector, act: Activation) -> Vector {
    match act {
        Activation::Relu => Vector(z.iter().map(|&v| v.max(0.0)).collect()),
        Activation::None => z.clone(),
    }
}

/// Final-layer logits (pre-softmax), with the post-activation value of every
/// layer kept for backprop.
fn forward_trace(model: &NeuralModel, x: &Vector) -> Result<(Vec<Vector>, Vec<Vector>)> {
    if x.len() != model.input_dim() {
        return Err(Error::DimensionMismatch {
            context: "forward input",
            expected: model.input_dim(),
            got: x.len(),
        });
    }
    let mut activations = vec![x.clone()];
    let mut pre_acts = Vec::with_capacity(model.layers.len());
    for layer in &model.layers {
        let z = matvec(&layer.weights, activations.last().unwrap())?
            .add_scaled(&layer.bias, 1.0);
        let a = apply_activation(&z, layer.activation);
        pre_acts.push(z);
        activations.push(a);
    }
    Ok((activations, pre_acts))
}

/// Raw final-layer logits.
pub fn logits(model: &NeuralModel, x: &Vector) -> Result<Vector> {
    let (activations, _) = forward_trace(model, x)?;
    Ok(activations.last().unwrap().clone())
}

/// Class probabilities: softmax of the final logits.
pub fn forward(model: &NeuralModel, x: &Vector) -> Result<Vector> {
    Ok(softmax(&logits(model, x)?))
}

/// Argmax class of `forward`, ties broken by lowest index.
pub fn predict_class(model: &NeuralModel, x: &Vector) -> Result<usize> {
    Ok(forward(model, x)?.argmax())
}

/// Backpropagate a gradient seed at the final logits down to the input.
/// Returns `(input_gradient, per_layer_weight_grads, per_layer_bias_grads)`;
/// the parameter gradients are only materialized when `want_params` is set.
fn backprop(
    model: &NeuralModel,
    activations: &[Vector],
    pre_acts: &[Vector],
    logit_seed: Vector,
    want_params: bool,
) -> Result<(Vector, Vec<Matrix>, Vec<Vector>)> {
    let mut weight_grads = Vec::new();
    let mut bias_grads = Vec::new();
    let mut delta = logit_seed; // dL/dz at the current layer
    for (i, layer) in model.layers.iter().enumerate().rev() {
        if want_params {
            let input = &activations[i];
            let mut wg = Matrix::zeros(layer.weights.rows, layer.weights.cols);
            for r in 0..wg.rows {
                let d = delta[r];
                for c in 0..wg.cols {
                    wg.values[r * wg.cols + c] = d * input[c];
                }
            }
            weight_grads.push(wg);
            bias_grads.push(delta.clone());
        }
        let mut upstream = matvec_t(&layer.weights, &delta)?;
        if i > 0 {
            // Gate by the previous layer's activation derivative.
            if model.layers[i - 1].activation == Activation::Relu {
                let z = &pre_acts[i - 1];
                for (u, zv) in upstream.0.iter_mut().zip(z.iter()) {
                    if *zv <= 0.0 {
                        *u = 0.0;
                    }
                }
            }
        }
        delta = upstream;
    }
    weight_grads.reverse();
    bias_grads.reverse();
    Ok((delta, weight_grads, bias_grads))
}

/// Gradient seed at the logits for cross-entropy-of-softmax: `p − onehot(y)`.
/// Honors a non-identity activation tag on the final layer if present.
fn loss_seed(model: &NeuralModel, pre_acts: &[Vector], probs: &Vector, label: usize) -> Vector {
    let mut seed = probs.clone();
    seed[label] -= 1.0;
    if model.layers.last().unwrap().activation == Activation::Relu {
        let z = pre_acts.last().unwrap();
        for (s, zv) in seed.0.iter_mut().zip(z.iter()) {
            if *zv <= 0.0 {
                *s = 0.0;
            }
        }
    }
    seed
}

/// `∇ₓ L(x₀, label)` for cross-entropy loss, by exact backprop.
pub fn input_gradient(model: &NeuralModel, sample: &Sample) -> Result<GradientResult> {
    if sample.label >= model.class_count {
        return Err(Error::InvalidConfig(format!(
            "label {} out of range for {} classes",
            sample.label, model.class_count
        )));
    }
    let (activations, pre_acts) = forward_trace(model, &sample.x0)?;
    let probs = softmax(activations.last().unwrap());
    let loss = -probs[sample.label].max(f64::MIN_POSITIVE).ln();
    let seed = loss_seed(model, &pre_acts, &probs, sample.label);
    let (g, _, _) = backprop(model, &activations, &pre_acts, seed, false)?;
    Ok(GradientResult { g, loss })
}

/// Logits plus the input gradient of every logit (one backward pass per
/// class). This is what DeepFool's local linearization consumes.
pub fn logit_input_gradients(model: &NeuralModel, x: &Vector) -> Result<(Vector, Vec<Vector>)> {
    let (activations, pre_acts) = forward_trace(model, x)?;
    let logit_values = activations.last().unwrap().clone();
    let mut grads = Vec::with_capacity(model.class_count);
    for k in 0..model.class_count {
        let mut seed = Vector::zeros(model.class_count);
        seed[k] = 1.0;
        if model.layers.last().unwrap().activation == Activation::Relu {
            let z = pre_acts.last().unwrap();
            if z[k] <= 0.0 {
                seed[k] = 0.0;
            }
        }
        let (g, _, _) = backprop(model, &activations, &pre_acts, seed, false)?;
        grads.push(g);
    }
    Ok((logit_values, grads))
}

/// Minibatch SGD settings. Defaults are the campaign ones.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainParams {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
}

impl Default for TrainParams {
    fn default() -> Self {
        TrainParams {
            epochs: 50,
            learning_rate: 0.05,
            batch_size: 32,
        }
    }
}

fn glorot_init(rows: usize, cols: usize, rng: &mut Rng) -> Matrix {
    let bound = (6.0 / (rows + cols) as f64).sqrt();
    Matrix {
        rows,
        cols,
        values: (0..rows * cols)
            .map(|_| (rng.next_f64() * 2.0 - 1.0) * bound)
            .collect(),
    }
}

/// Train a fresh model with the given hidden-layer widths by minibatch SGD
/// on cross-entropy. Bit-reproducible for a fixed RNG seed: sample order,
/// init, and accumulation order are all deterministic.
pub fn train(
    model_id: &str,
    hidden: &[usize],
    class_count: usize,
    data: &[Sample],
    params: &TrainParams,
    rng: &mut Rng,
) -> Result<NeuralModel> {
    if data.is_empty() {
        return Err(Error::EmptyData("training data"));
    }
    let input_dim = data[0].x0.len();
    for s in data {
        if s.x0.len() != input_dim {
            return Err(Error::DimensionMismatch {
                context: "training sample width",
                expected: input_dim,
                got: s.x0.len(),
            });
        }
        if s.label >= class_count {
            return Err(Error::InvalidConfig(format!(
                "training label {} out of range for {} classes",
                s.label, class_count
            )));
        }
    }

    let mut widths = vec![input_dim];
    widths.extend_from_slice(hidden);
    widths.push(class_count);
    let layers = (0..widths.len() - 1)
        .map(|i| Layer {
            weights: glorot_init(widths[i + 1], widths[i], rng),
            bias: Vector::zeros(widths[i + 1]),
            activation: if i + 2 == widths.len() {
                Activation::None
            } else {
                Activation::Relu
            },
        })
        .collect();
    let mut model = NeuralModel {
        model_id: model_id.to_string(),
        class_count,
        layers,
    };

    let mut order: Vec<usize> = (0..data.len()).collect();
    for _ in 0..params.epochs {
        rng.shuffle(&mut order);
        for batch in order.chunks(params.batch_size) {
            let mut w_acc: Vec<Matrix> = model
                .layers
                .iter()
                .map(|l| Matrix::zeros(l.weights.rows, l.weights.cols))
                .collect();
            let mut b_acc: Vec<Vector> = model
                .layers
                .iter()
                .map(|l| Vector::zeros(l.bias.len()))
                .collect();
            let mut batch_loss = 0.0;
            for &idx in batch {
                let sample = &data[idx];
                let (activations, pre_acts) = forward_trace(&model, &sample.x0)?;
                let probs = softmax(activations.last().unwrap());
                batch_loss += -probs[sample.label].max(f64::MIN_POSITIVE).ln();
                let seed = loss_seed(&model, &pre_acts, &probs, sample.label);
                let (_, wg, bg) = backprop(&model, &activations, &pre_acts, seed, true)?;
                for (acc, g) in w_acc.iter_mut().zip(wg) {
                    for (a, v) in acc.values.iter_mut().zip(g.values) {
                        *a += v;
                    }
                }
                for (acc, g) in b_acc.iter_mut().zip(bg) {
                    for (a, v) in acc.0.iter_mut().zip(g.0) {
                        *a += v;
                    }
                }
            }
            if !batch_loss.is_finite() {
                return Err(Error::TrainingDiverged {
                    model_id: model_id.to_string(),
                });
            }
            let step = params.learning_rate / batch.len() as f64;
            for (layer, (wg, bg)) in model.layers.iter_mut().zip(w_acc.iter().zip(&b_acc)) {
                for (w, g) in layer.weights.values.iter_mut().zip(&wg.values) {
                    *w -= step * g;
                }
                for (b, g) in layer.bias.0.iter_mut().zip(&bg.0) {
                    *b -= step * g;
                }
            }
        }
    }
    model.validate()?;
    Ok(model)
}

/// Fraction of samples whose predicted class matches the truth label.
pub fn accuracy(model: &NeuralModel, data: &[Sample]) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::EmptyData("accuracy data"));
    }
    let mut correct = 0usize;
    for s in data {
        if predict_class(model, &s.x0)? == s.label {
            correct += 1;
        }
    }
    Ok(correct as f64 / data.len() as f64)
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;

    /// Central finite-difference gradient of the cross-entropy loss. Used as
    /// the independent oracle for `input_gradient`; goes through `forward`
    /// only, never through backprop.
    pub fn fd_gradient(model: &NeuralModel, sample: &Sample, h: f64) -> Vector {
        let loss_at = |x: &Vector| -> f64 {
            let p = forward(model, x).unwrap();
            -p[sample.label].max(f64::MIN_POSITIVE).ln()
        };
        let mut g = Vector::zeros(sample.x0.len());
        for i in 0..sample.x0.len() {
            let mut plus = sample.x0.clone();
            plus[i] += h;
            let mut minus = sample.x0.clone();
            minus[i] -= h;
            g[i] = (loss_at(&plus) - loss_at(&minus)) / (2.0 * h);
        }
        g
    }

    pub fn grad_close(a: &Vector, b: &Vector, rel: f64, abs: f64) -> bool {
        a.iter().zip(b.iter()).all(|(x, y)| {
            let diff = (x - y).abs();
            diff <= abs || diff <= rel * x.abs().max(y.abs())
        })
    }

    /// Two Gaussian blobs in 2-D, linearly separable, clamped to [0,1].
    pub fn two_blob_data(n: usize, seed: u64) -> Vec<Sample> {
        let mut rng = Rng::new(seed);
        (0..n)
            .map(|i| {
                let label = i % 2;
                let center = if label == 0 { 0.3 } else { 0.7 };
                let x = Vector(vec![
                    (center + 0.07 * rng.next_gaussian()).clamp(0.0, 1.0),
                    (center + 0.07 * rng.next_gaussian()).clamp(0.0, 1.0),
                ]);
                Sample::new(x, label)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::test_support::*;
    use super::*;

    fn linear_model(w: Matrix, b: Vector, class_count: usize) -> NeuralModel {
        NeuralModel {
            model_id: "linear".into(),
            class_count,
            layers: vec![Layer {
                weights: w,
                bias: b,
                activation: Activation::None,
            }],
        }
    }

    #[test]
    fn forward_all_zero_weights_is_uniform() {
        let model = linear_model(Matrix::zeros(4, 3), Vector::zeros(4), 4);
        let p = forward(&model, &Vector(vec![0.3, 0.8, 0.1])).unwrap();
        for &v in p.iter() {
            assert!((v - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn forward_closed_form_softmax() {
        // Identity weights, x = (10, 0): p0 = e^10 / (e^10 + 1)
        let model = linear_model(Matrix::identity(2), Vector::zeros(2), 2);
        let p = forward(&model, &Vector(vec![10.0, 0.0])).unwrap();
        let expected0 = (10.0_f64).exp() / ((10.0_f64).exp() + 1.0);
        assert!((p[0] - expected0).abs() < 1e-12);
        assert!((p[0] - 0.99995).abs() < 1e-4);
        assert!((p[1] - 0.00005).abs() < 1e-4);
    }

    #[test]
    fn forward_shift_invariant() {
        let mut rng = Rng::new(11);
        let w = Matrix {
            rows: 3,
            cols: 2,
            values: (0..6).map(|_| rng.next_gaussian()).collect(),
        };
        let x = Vector(vec![0.2, 0.9]);
        let base = forward(&linear_model(w.clone(), Vector::zeros(3), 3), &x).unwrap();
        // Adding a constant to every logit via the bias must not change softmax.
        let shifted = forward(
            &linear_model(w, Vector(vec![7.5, 7.5, 7.5]), 3),
            &x,
        )
        .unwrap();
        for (a, b) in base.iter().zip(shifted.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn forward_sums_to_one() {
        let mut rng = Rng::new(3);
        let model = train(
            "m",
            &[8],
            3,
            &test_support::two_blob_data(60, 1)
                .into_iter()
                .map(|mut s| {
                    s.label = s.label.min(2);
                    s
                })
                .collect::<Vec<_>>(),
            &TrainParams {
                epochs: 5,
                ..TrainParams::default()
            },
            &mut rng,
        )
        .unwrap();
        for seed in 0..20 {
            let mut r = Rng::new(seed);
            let x = Vector(vec![r.next_f64(), r.next_f64()]);
            let p = forward(&model, &x).unwrap();
            let sum: f64 = p.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
            assert!(p.iter().all(|&v| v > 0.0 && v < 1.0 && v.is_finite()));
        }
    }

    #[test]
    fn forward_dimension_mismatch() {
        let model = linear_model(Matrix::identity(2), Vector::zeros(2), 2);
        assert!(forward(&model, &Vector(vec![1.0, 2.0, 3.0])).is_err());
    }

    #[test]
    fn input_gradient_linear_closed_form() {
        // For a linear softmax model, g = Wᵀ(p − onehot(label)).
        let mut rng = Rng::new(21);
        let w = Matrix {
            rows: 3,
            cols: 4,
            values: (0..12).map(|_| rng.next_gaussian()).collect(),
        };
        let model = linear_model(w.clone(), Vector(vec![0.1, -0.2, 0.3]), 3);
        let x = Vector(vec![0.1, 0.4, 0.6, 0.9]);
        let sample = Sample::new(x.clone(), 1);

        let p = forward(&model, &x).unwrap();
        let mut seed = p.clone();
        seed[1] -= 1.0;
        let expected = matvec_t(&w, &seed).unwrap();

        let got = input_gradient(&model, &sample).unwrap();
        assert!(grad_close(&got.g, &expected, 1e-12, 1e-12));
        assert!(got.loss >= 0.0);
    }

    #[test]
    fn input_gradient_matches_finite_differences() {
        let data = two_blob_data(80, 2);
        let mut rng = Rng::new(5);
        let model = train("fd", &[8, 6], 2, &data, &TrainParams::default(), &mut rng).unwrap();
        for (i, sample) in data.iter().take(10).enumerate() {
            let got = input_gradient(&model, sample).unwrap();
            let fd = fd_gradient(&model, sample, 1e-5);
            assert!(
                grad_close(&got.g, &fd, 1e-4, 1e-7),
                "sample {i}: backprop {:?} vs fd {:?}",
                got.g,
                fd
            );
        }
    }

    #[test]
    fn input_gradient_saturated_prediction_vanishes() {
        // Huge margin: p_label → 1, so the loss gradient → 0.
        let model = linear_model(
            Matrix::from_rows(&[&[100.0], &[-100.0]]),
            Vector::zeros(2),
            2,
        );
        let sample = Sample::new(Vector(vec![1.0]), 0);
        let g = input_gradient(&model, &sample).unwrap();
        assert!(crate::numcore::norm(&g.g, crate::numcore::NormOrder::L2) < 1e-12);
    }

    #[test]
    fn logit_gradients_linear_are_weight_rows() {
        let w = Matrix::from_rows(&[&[1.0, 2.0], &[-0.5, 0.25], &[0.0, 3.0]]);
        let model = linear_model(w.clone(), Vector::zeros(3), 3);
        let (f, grads) = logit_input_gradients(&model, &Vector(vec![0.5, 0.5])).unwrap();
        assert_eq!(f.len(), 3);
        for (k, g) in grads.iter().enumerate() {
            assert_eq!(g.as_slice(), w.row(k));
        }
    }

    #[test]
    fn train_two_blobs_reaches_95_percent() {
        let data = two_blob_data(200, 7);
        let mut rng = Rng::new(13);
        let model = train("blobs", &[16], 2, &data, &TrainParams::default(), &mut rng).unwrap();
        assert!(accuracy(&model, &data).unwrap() >= 0.95);
    }

    #[test]
    fn train_same_seed_bit_identical() {
        let data = two_blob_data(100, 9);
        let params = TrainParams {
            epochs: 8,
            ..TrainParams::default()
        };
        let a = train("t", &[8], 2, &data, &params, &mut Rng::new(77)).unwrap();
        let b = train("t", &[8], 2, &data, &params, &mut Rng::new(77)).unwrap();
        for (la, lb) in a.layers.iter().zip(&b.layers) {
            let bits_a: Vec<u64> = la.weights.values.iter().map(|v| v.to_bits()).collect();
            let bits_b: Vec<u64> = lb.weights.values.iter().map(|v| v.to_bits()).collect();
            assert_eq!(bits_a, bits_b);
        }
    }

    #[test]
    fn train_single_class_predicts_it() {
        let data: Vec<Sample> = two_blob_data(60, 4)
            .into_iter()
            .map(|mut s| {
                s.label = 1;
                s
            })
            .collect();
        let mut rng = Rng::new(2);
        let model = train("one", &[4], 2, &data, &TrainParams::default(), &mut rng).unwrap();
        for s in &data {
            assert_eq!(predict_class(&model, &s.x0).unwrap(), 1);
        }
    }

    #[test]
    fn train_empty_data_errors() {
        let mut rng = Rng::new(1);
        assert!(matches!(
            train("e", &[4], 2, &[], &TrainParams::default(), &mut rng),
            Err(Error::EmptyData(_))
        ));
    }

    #[test]
    fn predict_class_tie_breaks_low_index() {
        let model = linear_model(Matrix::zeros(3, 2), Vector::zeros(3), 3);
        // Uniform output → class 0.
        assert_eq!(predict_class(&model, &Vector(vec![0.5, 0.5])).unwrap(), 0);
    }

    #[test]
    fn predict_class_matches_forward_argmax() {
        let data = two_blob_data(80, 31);
        let mut rng = Rng::new(15);
        let model = train("pc", &[8], 2, &data, &TrainParams::default(), &mut rng).unwrap();
        let mut r = Rng::new(99);
        for _ in 0..1000 {
            let x = Vector(vec![r.next_f64(), r.next_f64()]);
            let p = forward(&model, &x).unwrap();
            assert_eq!(predict_class(&model, &x).unwrap(), p.argmax());
        }
    }

    #[test]
    fn model_json_round_trip_bit_exact() {
        let data = two_blob_data(40, 8);
        let mut rng = Rng::new(3);
        let model = train(
            "rt",
            &[5],
            2,
            &data,
            &TrainParams {
                epochs: 3,
                ..TrainParams::default()
            },
            &mut rng,
        )
        .unwrap();
        let text = model.to_json();
        let back = NeuralModel::from_json(&text).unwrap();
        assert_eq!(back.model_id, model.model_id);
        for (la, lb) in model.layers.iter().zip(&back.layers) {
            for (x, y) in la.weights.values.iter().zip(&lb.weights.values) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
            for (x, y) in la.bias.iter().zip(lb.bias.iter()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
            assert_eq!(la.activation, lb.activation);
        }
        // Awkward values survive too.
        let mut odd = model.clone();
        odd.layers[0].weights.values[0] = 0.1 + 0.2; // 0.30000000000000004
        odd.layers[0].weights.values[1] = 1.0e-300;
        let back = NeuralModel::from_json(&odd.to_json()).unwrap();
        assert_eq!(
            back.layers[0].weights.values[0].to_bits(),
            odd.layers[0].weights.values[0].to_bits()
        );
        assert_eq!(
            back.layers[0].weights.values[1].to_bits(),
            odd.layers[0].weights.values[1].to_bits()
        );
    }

    #[test]
    fn model_json_rejects_bad_version_and_shape() {
        let model = linear_model(Matrix::identity(2), Vector::zeros(2), 2);
        let mut text = model.to_json();
        text = text.replace("\"version\":1", "\"version\":99");
        assert!(NeuralModel::from_json(&text).is_err());

        let mut broken = model.clone();
        broken.layers[0].weights.rows = 3; // storage no longer matches
        assert!(NeuralModel::from_json(&broken.to_json()).is_err());
    }
}
