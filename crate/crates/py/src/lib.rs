//! Python bindings for the `cc4` crate.
//!
//! Bit vectors cross the boundary as `'0'`/`'1'` strings, leftmost
//! character most significant.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use cc4_core::pattern::{self, Engine, SampleSize, Sampling};
use cc4_core::{
    BitVector, CC4Network, Error, ExperimentConfig, GridPattern, Scheme, SpreadUnaryCodec,
    TieBreaker, TiePolicy, TrainingMask, TrainingSample, UnaryCodec,
};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io(e) => PyIOError::new_err(e.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

fn bits(text: &str) -> PyResult<BitVector> {
    text.parse().map_err(to_py)
}

fn policy(name: &str, seed: Option<u64>) -> PyResult<TiePolicy> {
    match (name, seed) {
        ("zero", _) => Ok(TiePolicy::Zero),
        ("one", _) => Ok(TiePolicy::One),
        ("random" | "seeded_random", Some(seed)) => Ok(TiePolicy::SeededRandom(seed)),
        ("random" | "seeded_random", None) => {
            Err(PyValueError::new_err("random tie policy requires a seed"))
        }
        (other, _) => Err(PyValueError::new_err(format!(
            "unknown tie policy {other:?}; expected zero, one or random"
        ))),
    }
}

fn scheme(name: &str, width: Option<usize>, k: usize) -> PyResult<Scheme> {
    match name {
        "unary" => Ok(Scheme::Unary {
            width: width.unwrap_or(16),
        }),
        "spread" => Ok(Scheme::Spread {
            k,
            width: width.unwrap_or(16 + k.saturating_sub(1)),
        }),
        other => Err(PyValueError::new_err(format!(
            "unknown scheme {other:?}; expected unary or spread"
        ))),
    }
}

fn samples(pairs: Vec<(String, String)>) -> PyResult<Vec<TrainingSample>> {
    pairs
        .iter()
        .map(|(i, o)| Ok(TrainingSample::new(bits(i)?, bits(o)?)))
        .collect()
}

#[pyfunction]
fn encode_unary(n: usize, width: usize) -> PyResult<String> {
    let codec = UnaryCodec::new(width).map_err(to_py)?;
    Ok(codec.encode(n).map_err(to_py)?.to_string())
}

/// Decodes a unary code; the width is the length of `code`.
#[pyfunction]
fn decode_unary(code: &str) -> PyResult<usize> {
    let code = bits(code)?;
    UnaryCodec::new(code.len())
        .and_then(|c| c.decode(&code))
        .map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, k, width=None, max_value=None))]
fn encode_spread(
    n: usize,
    k: usize,
    width: Option<usize>,
    max_value: Option<usize>,
) -> PyResult<String> {
    let codec = spread_codec(k, width, max_value)?;
    Ok(codec.encode(n).map_err(to_py)?.to_string())
}

#[pyfunction]
#[pyo3(signature = (code, k, max_value=None))]
fn decode_spread(code: &str, k: usize, max_value: Option<usize>) -> PyResult<usize> {
    let code = bits(code)?;
    spread_codec(k, Some(code.len()), max_value)?
        .decode(&code)
        .map_err(to_py)
}

fn spread_codec(
    k: usize,
    width: Option<usize>,
    max_value: Option<usize>,
) -> PyResult<SpreadUnaryCodec> {
    match (width, max_value) {
        (Some(w), m) => SpreadUnaryCodec::with_width(k, m.unwrap_or((w + 1).saturating_sub(k)), w),
        (None, Some(m)) => SpreadUnaryCodec::new(k, m),
        (None, None) => Err(Error::Argument("give width or max_value".into())),
    }
    .map_err(to_py)
}

#[pyfunction]
fn hamming(a: &str, b: &str) -> PyResult<usize> {
    cc4_core::hamming(&bits(a)?, &bits(b)?).map_err(to_py)
}

/// Row code followed by column code; coordinates are 1-based.
#[pyfunction]
#[pyo3(signature = (row, col, scheme="unary", width=None, k=3))]
fn encode_point(
    row: usize,
    col: usize,
    scheme: &str,
    width: Option<usize>,
    k: usize,
) -> PyResult<String> {
    let s = self::scheme(scheme, width, k)?;
    Ok(cc4_core::encode_point(row, col, &s)
        .map_err(to_py)?
        .to_string())
}

#[pyfunction]
#[pyo3(signature = (samples, radius, input, tie_policy="zero", seed=None))]
fn oracle_classify(
    samples: Vec<(String, String)>,
    radius: u32,
    input: &str,
    tie_policy: &str,
    seed: Option<u64>,
) -> PyResult<String> {
    let samples = self::samples(samples)?;
    let mut ties = TieBreaker::new(policy(tie_policy, seed)?);
    let out =
        cc4_core::oracle_classify(&samples, radius, &bits(input)?, &mut ties).map_err(to_py)?;
    Ok(out.to_string())
}

#[pyfunction]
fn spiral_pattern() -> &'static str {
    pattern::SPIRAL_11X16
}

#[pyfunction]
fn spiral_mask() -> &'static str {
    pattern::SPIRAL_MASK_SEED42_N58
}

/// A trained CC4 network.
#[pyclass(name = "Network", module = "cc4")]
struct PyNetwork {
    inner: CC4Network,
}

#[pymethods]
impl PyNetwork {
    /// Trains on `(input, output)` bit-string pairs.
    #[staticmethod]
    #[pyo3(signature = (samples, radius, tie_policy="zero", seed=None))]
    fn train(
        samples: Vec<(String, String)>,
        radius: u32,
        tie_policy: &str,
        seed: Option<u64>,
    ) -> PyResult<Self> {
        let samples = self::samples(samples)?;
        let inner =
            CC4Network::train(&samples, radius, policy(tie_policy, seed)?).map_err(to_py)?;
        Ok(PyNetwork { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(PyNetwork {
            inner: CC4Network::from_json(text).map_err(to_py)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    fn classify(&self, input: &str) -> PyResult<String> {
        Ok(self
            .inner
            .classify(&bits(input)?)
            .map_err(to_py)?
            .to_string())
    }

    fn hidden_net_input(&self, unit: usize, input: &str) -> PyResult<i64> {
        self.unit(unit)?.net_input(&bits(input)?).map_err(to_py)
    }

    fn hidden_fires(&self, unit: usize, input: &str) -> PyResult<bool> {
        self.unit(unit)?.fires(&bits(input)?).map_err(to_py)
    }

    /// `(input_weights, bias_weight, output_weights, ones_count)` of one
    /// hidden unit; weights are indexed by bit position, 0 = rightmost.
    fn hidden_unit(&self, unit: usize) -> PyResult<(Vec<i32>, i32, Vec<i32>, u32)> {
        let u = self.unit(unit)?;
        Ok((
            u.input_weights.clone(),
            u.bias_weight,
            u.output_weights.clone(),
            u.ones_count,
        ))
    }

    fn reset_tie_stream(&self) {
        self.inner.reset_tie_stream();
    }

    #[getter]
    fn input_width(&self) -> usize {
        self.inner.input_width()
    }

    #[getter]
    fn output_width(&self) -> usize {
        self.inner.output_width()
    }

    #[getter]
    fn radius(&self) -> u32 {
        self.inner.radius()
    }

    #[getter]
    fn tie_policy(&self) -> &'static str {
        self.inner.tie_policy().name()
    }

    #[getter]
    fn hidden_unit_count(&self) -> usize {
        self.inner.hidden_units().len()
    }

    fn __len__(&self) -> usize {
        self.inner.hidden_units().len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Network(input_width={}, output_width={}, radius={}, hidden_units={}, tie_policy={})",
            self.inner.input_width(),
            self.inner.output_width(),
            self.inner.radius(),
            self.inner.hidden_units().len(),
            self.inner.tie_policy()
        )
    }
}

impl PyNetwork {
    fn unit(&self, index: usize) -> PyResult<&cc4_core::HiddenUnit> {
        self.inner.hidden_units().get(index).ok_or_else(|| {
            PyValueError::new_err(format!(
                "hidden unit {index} out of range (network has {})",
                self.inner.hidden_units().len()
            ))
        })
    }
}

#[pyclass(name = "ExperimentResult", module = "cc4", frozen)]
struct PyExperimentResult {
    inner: cc4_core::ExperimentResult,
}

#[pymethods]
impl PyExperimentResult {
    /// `(radius, classified, misclassified)` per radius, ascending.
    fn counts(&self) -> Vec<(u32, usize, usize)> {
        self.inner
            .runs
            .iter()
            .map(|r| (r.radius, r.classified, r.misclassified))
            .collect()
    }

    /// Predicted map for `radius` as `#`/`o` rows.
    fn map(&self, radius: u32) -> PyResult<String> {
        self.inner
            .run(radius)
            .map(|r| r.predicted.render())
            .ok_or_else(|| PyValueError::new_err(format!("radius {radius} was not run")))
    }

    fn stability_metric(&self, radii: Vec<u32>) -> PyResult<usize> {
        cc4_core::stability_metric(&self.inner, &radii).map_err(to_py)
    }

    #[getter]
    fn stability(&self) -> Option<usize> {
        self.inner.stability.as_ref().map(|s| s.value)
    }

    #[getter]
    fn mask(&self) -> String {
        self.inner.mask.render()
    }

    fn to_csv(&self) -> String {
        self.inner.to_csv()
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }
}

/// Radius sweep over a pattern. Without `pattern` the bundled spiral is
/// used; give either `mask` or `sample_count` with `seed`.
#[pyfunction]
#[pyo3(signature = (
    radii,
    pattern=None,
    mask=None,
    sample_count=None,
    seed=None,
    scheme="unary",
    width=None,
    k=3,
    tie_policy="zero",
    oracle=false,
))]
#[allow(clippy::too_many_arguments)]
fn run_experiment(
    radii: Vec<u32>,
    pattern: Option<&str>,
    mask: Option<&str>,
    sample_count: Option<usize>,
    seed: Option<u64>,
    scheme: &str,
    width: Option<usize>,
    k: usize,
    tie_policy: &str,
    oracle: bool,
) -> PyResult<PyExperimentResult> {
    let pattern = match pattern {
        Some(text) => GridPattern::parse(text).map_err(to_py)?,
        None => GridPattern::spiral(),
    };
    let sampling = match (mask, sample_count, seed) {
        (Some(text), _, _) => Sampling::Mask(TrainingMask::parse(text).map_err(to_py)?),
        (None, Some(n), Some(seed)) => Sampling::Random {
            size: SampleSize::Count(n),
            seed,
        },
        _ => {
            return Err(PyValueError::new_err(
                "give a mask, or sample_count together with seed",
            ))
        }
    };
    let config = ExperimentConfig {
        pattern,
        scheme: self::scheme(scheme, width, k)?,
        radii,
        sampling,
        tie_policy: policy(tie_policy, seed)?,
    };
    let engine = if oracle {
        Engine::Oracle
    } else {
        Engine::Network
    };
    let inner = pattern::run_experiment_with(&config, engine).map_err(to_py)?;
    Ok(PyExperimentResult { inner })
}

#[pymodule]
#[pyo3(name = "cc4")]
fn cc4(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(encode_unary, m)?)?;
    m.add_function(wrap_pyfunction!(decode_unary, m)?)?;
    m.add_function(wrap_pyfunction!(encode_spread, m)?)?;
    m.add_function(wrap_pyfunction!(decode_spread, m)?)?;
    m.add_function(wrap_pyfunction!(hamming, m)?)?;
    m.add_function(wrap_pyfunction!(encode_point, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_classify, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(spiral_pattern, m)?)?;
    m.add_function(wrap_pyfunction!(spiral_mask, m)?)?;
    m.add_class::<PyNetwork>()?;
    m.add_class::<PyExperimentResult>()?;
    Ok(())
}
