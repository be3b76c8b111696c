use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::{Rng, RngExt};
use rgi_automata::Alphabet;

use crate::mat::Mat;
use crate::train::TrainConfig;
use crate::RnnError;

/// All learned tensors, named by role. Input width equals the alphabet size
/// (tokens are one-hot encoded).
#[derive(Debug, Clone, PartialEq)]
pub struct RnnParams {
    pub alphabet: Alphabet,
    /// hidden-to-hidden, hidden x hidden
    pub recur_weights: Mat,
    /// input-to-hidden, hidden x input
    pub input_weights: Mat,
    /// hidden bias
    pub state_bias: Vec<f64>,
    /// hidden-to-head, head x hidden
    pub head_weights: Mat,
    /// head bias
    pub head_bias: Vec<f64>,
    /// head-to-output row
    pub output_weights: Vec<f64>,
    /// output bias
    pub output_bias: f64,
}

impl RnnParams {
    pub fn hidden_width(&self) -> usize {
        self.recur_weights.rows()
    }

    pub fn head_width(&self) -> usize {
        self.head_weights.rows()
    }

    pub fn input_width(&self) -> usize {
        self.input_weights.cols()
    }

    /// All parameter values in one fixed order. Pairs with
    /// [`Gradients::values`](crate::Gradients::values); the ordering is pinned
    /// by the finite-difference tests.
    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.recur_weights
            .data()
            .iter()
            .chain(self.input_weights.data())
            .chain(self.state_bias.iter())
            .chain(self.head_weights.data())
            .chain(self.head_bias.iter())
            .chain(self.output_weights.iter())
            .copied()
            .chain(std::iter::once(self.output_bias))
    }

    pub fn values_mut(&mut self) -> impl Iterator<Item = &mut f64> + '_ {
        self.recur_weights
            .data_mut()
            .iter_mut()
            .chain(self.input_weights.data_mut())
            .chain(self.state_bias.iter_mut())
            .chain(self.head_weights.data_mut())
            .chain(self.head_bias.iter_mut())
            .chain(self.output_weights.iter_mut())
            .chain(std::iter::once(&mut self.output_bias))
    }

    pub fn value_count(&self) -> usize {
        let h = self.hidden_width();
        let d = self.input_width();
        let m = self.head_width();
        h * h + h * d + h + m * h + m + m + 1
    }
}

/// Glorot-uniform initialization: each weight matrix is drawn uniformly from
/// [-r, r] with r = sqrt(6 / (fan_in + fan_out)); biases start at zero.
pub fn init_params<R: Rng>(alphabet: &Alphabet, config: &TrainConfig, rng: &mut R) -> RnnParams {
    let h = config.hidden_width;
    let m = config.head_width;
    let d = alphabet.len();
    let uniform = |fan_in: usize, fan_out: usize| {
        let r = (6.0 / (fan_in + fan_out) as f64).sqrt();
        move |rng: &mut R| rng.random_range(-r..=r)
    };
    let draw = uniform(h, h);
    let recur_weights = Mat::from_fn(h, h, |_, _| draw(rng));
    let draw = uniform(d, h);
    let input_weights = Mat::from_fn(h, d, |_, _| draw(rng));
    let draw = uniform(h, m);
    let head_weights = Mat::from_fn(m, h, |_, _| draw(rng));
    let draw = uniform(m, 1);
    let output_weights: Vec<f64> = (0..m).map(|_| draw(rng)).collect();
    RnnParams {
        alphabet: alphabet.clone(),
        recur_weights,
        input_weights,
        state_bias: vec![0.0; h],
        head_weights,
        head_bias: vec![0.0; m],
        output_weights,
        output_bias: 0.0,
    }
}

/// Write parameters in the versioned text format: a header
/// `rnn-params v1 H=.. D=.. M=.. alphabet=..`, then one line per tensor with
/// its name, dimensions and row-major values at 17 significant digits
/// (round-trip exact for f64).
pub fn save_params(params: &RnnParams, path: &Path) -> Result<(), RnnError> {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "rnn-params v1 H={} D={} M={} alphabet={}",
        params.hidden_width(),
        params.input_width(),
        params.head_width(),
        params.alphabet.tokens().join(" ")
    );
    let mut tensor =
        |name: &str, rows: usize, cols: usize, values: &mut dyn Iterator<Item = f64>| {
            let _ = write!(out, "{name} {rows} {cols}");
            for v in values {
                let _ = write!(out, " {v:.16e}");
            }
            out.push('\n');
        };
    let h = params.hidden_width();
    let d = params.input_width();
    let m = params.head_width();
    tensor("W", h, h, &mut params.recur_weights.data().iter().copied());
    tensor("U", h, d, &mut params.input_weights.data().iter().copied());
    tensor("v", h, 1, &mut params.state_bias.iter().copied());
    tensor("B", m, h, &mut params.head_weights.data().iter().copied());
    tensor("c", m, 1, &mut params.head_bias.iter().copied());
    tensor("A", 1, m, &mut params.output_weights.iter().copied());
    tensor("d", 1, 1, &mut std::iter::once(params.output_bias));
    fs::write(path, out)?;
    Ok(())
}

/// Read parameters written by [`save_params`].
pub fn load_params(path: &Path) -> Result<RnnParams, RnnError> {
    let display = path.display().to_string();
    let malformed = |line: usize, message: &str| RnnError::MalformedParams {
        path: display.clone(),
        line,
        message: message.to_string(),
    };
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate();

    let (_, header) = lines.next().ok_or_else(|| malformed(1, "empty file"))?;
    let rest = header
        .strip_prefix("rnn-params v1 ")
        .ok_or_else(|| malformed(1, "expected `rnn-params v1` header"))?;
    let alphabet_at = rest
        .find("alphabet=")
        .ok_or_else(|| malformed(1, "missing alphabet field"))?;
    let mut dims = rest[..alphabet_at].split_whitespace();
    let mut dim = |prefix: &str| -> Result<usize, RnnError> {
        dims.next()
            .and_then(|f| f.strip_prefix(prefix))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| malformed(1, &format!("bad {prefix} field")))
    };
    let h = dim("H=")?;
    let d = dim("D=")?;
    let m = dim("M=")?;
    let alphabet = Alphabet::new(rest[alphabet_at + "alphabet=".len()..].split_whitespace())
        .map_err(|e| malformed(1, &e.to_string()))?;
    if alphabet.len() != d {
        return Err(malformed(1, "alphabet size disagrees with D"));
    }

    let mut read_tensor = |expect_name: &str,
                           expect_rows: usize,
                           expect_cols: usize|
     -> Result<Vec<f64>, RnnError> {
        let (idx, line) = lines
            .next()
            .ok_or_else(|| malformed(0, &format!("missing tensor {expect_name}")))?;
        let line_no = idx + 1;
        let mut fields = line.split_whitespace();
        let name = fields
            .next()
            .ok_or_else(|| malformed(line_no, "empty tensor line"))?;
        if name != expect_name {
            return Err(malformed(
                line_no,
                &format!("expected tensor {expect_name}, got {name}"),
            ));
        }
        let rows: usize = fields
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| malformed(line_no, "bad row count"))?;
        let cols: usize = fields
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| malformed(line_no, "bad column count"))?;
        if rows != expect_rows || cols != expect_cols {
            return Err(malformed(
                line_no,
                &format!("tensor {name} is {rows}x{cols}, expected {expect_rows}x{expect_cols}"),
            ));
        }
        let values: Result<Vec<f64>, _> = fields.map(|f| f.parse::<f64>()).collect();
        let values = values.map_err(|_| malformed(line_no, "bad float"))?;
        if values.len() != rows * cols {
            return Err(malformed(line_no, "value count disagrees with dimensions"));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(malformed(line_no, "non-finite value"));
        }
        Ok(values)
    };

    let recur_weights = Mat::from_rows(h, h, read_tensor("W", h, h)?);
    let input_weights = Mat::from_rows(h, d, read_tensor("U", h, d)?);
    let state_bias = read_tensor("v", h, 1)?;
    let head_weights = Mat::from_rows(m, h, read_tensor("B", m, h)?);
    let head_bias = read_tensor("c", m, 1)?;
    let output_weights = read_tensor("A", 1, m)?;
    let output_bias = read_tensor("d", 1, 1)?[0];

    Ok(RnnParams {
        alphabet,
        recur_weights,
        input_weights,
        state_bias,
        head_weights,
        head_bias,
        output_weights,
        output_bias,
    })
}
