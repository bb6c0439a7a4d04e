//! CC4 corner-classification network.
//!
//! Training is a single pass of direct weight assignment: every training
//! sample becomes one hidden unit whose input weights are `+1` where the
//! sample bit is 1 and `-1` where it is 0, whose bias weight is
//! `radius - ones + 1`, and whose output weights are `+1`/`-1` according
//! to the desired output bits. Hidden and output neurons use a strict step
//! (fire iff the net input is positive), so a unit fires exactly when the
//! query lies within Hamming distance `radius` of its stored sample.

use std::fmt;
use std::str::FromStr;
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::encoding::BitVector;
use crate::error::{Error, Result};

/// An input vector paired with its desired output.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrainingSample {
    pub input: BitVector,
    pub output: BitVector,
}

impl TrainingSample {
    pub fn new(input: BitVector, output: BitVector) -> Self {
        TrainingSample { input, output }
    }
}

/// Decides an output bit when affirming and negating votes cancel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TiePolicy {
    #[default]
    Zero,
    One,
    SeededRandom(u64),
}

impl TiePolicy {
    pub fn name(&self) -> &'static str {
        match self {
            TiePolicy::Zero => "zero",
            TiePolicy::One => "one",
            TiePolicy::SeededRandom(_) => "seeded_random",
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            TiePolicy::SeededRandom(seed) => Some(*seed),
            _ => None,
        }
    }

    pub fn is_deterministic(&self) -> bool {
        !matches!(self, TiePolicy::SeededRandom(_))
    }

    pub(crate) fn from_parts(name: &str, seed: Option<u64>) -> Result<Self> {
        match (name, seed) {
            ("zero", None) => Ok(TiePolicy::Zero),
            ("one", None) => Ok(TiePolicy::One),
            ("seeded_random" | "random", Some(seed)) => Ok(TiePolicy::SeededRandom(seed)),
            ("seeded_random" | "random", None) => Err(Error::Argument(
                "tie policy seeded_random requires a seed".into(),
            )),
            ("zero" | "one", Some(_)) => {
                Err(Error::Argument(format!("tie policy {name} takes no seed")))
            }
            (other, _) => Err(Error::Argument(format!("unknown tie policy {other:?}"))),
        }
    }
}

impl fmt::Display for TiePolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TiePolicy::SeededRandom(seed) => write!(f, "seeded_random({seed})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Stream of tie decisions for one policy. Random policies draw one bit per
/// tied output, in ascending output position, from a ChaCha8 stream seeded
/// with the policy seed.
#[derive(Debug, Clone)]
pub struct TieBreaker {
    policy: TiePolicy,
    rng: Option<ChaCha8Rng>,
}

impl TieBreaker {
    pub fn new(policy: TiePolicy) -> Self {
        let rng = policy.seed().map(ChaCha8Rng::seed_from_u64);
        TieBreaker { policy, rng }
    }

    pub fn policy(&self) -> TiePolicy {
        self.policy
    }

    pub fn resolve(&mut self) -> bool {
        match (&self.policy, self.rng.as_mut()) {
            (TiePolicy::Zero, _) => false,
            (TiePolicy::One, _) => true,
            (TiePolicy::SeededRandom(_), Some(rng)) => rng.random::<bool>(),
            (TiePolicy::SeededRandom(_), None) => unreachable!("seeded policy without stream"),
        }
    }

    /// Maps a vote sum to an output bit, consulting the stream on ties.
    pub fn decide(&mut self, votes: i64) -> bool {
        match votes.signum() {
            1 => true,
            -1 => false,
            _ => self.resolve(),
        }
    }
}

/// One hidden neuron, created from one training sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HiddenUnit {
    /// `+1`/`-1` per input bit, indexed by bit position (0 = rightmost).
    pub input_weights: Vec<i32>,
    /// Weight on the constant bias input: `radius - ones_count + 1`.
    pub bias_weight: i32,
    /// `+1`/`-1` per output bit, indexed by bit position.
    pub output_weights: Vec<i32>,
    /// Number of ones in the originating sample's input.
    pub ones_count: u32,
}

impl HiddenUnit {
    fn from_sample(sample: &TrainingSample, radius: u32) -> Self {
        let sign = |bit: bool| if bit { 1 } else { -1 };
        let ones_count = sample.input.count_ones() as u32;
        HiddenUnit {
            input_weights: sample.input.iter().map(sign).collect(),
            bias_weight: radius as i32 - ones_count as i32 + 1,
            output_weights: sample.output.iter().map(sign).collect(),
            ones_count,
        }
    }

    pub fn input_width(&self) -> usize {
        self.input_weights.len()
    }

    /// Weighted input sum including the bias input, which is fixed at 1.
    pub fn net_input(&self, input: &BitVector) -> Result<i64> {
        if input.len() != self.input_weights.len() {
            return Err(Error::shape(
                format!("{} input bits", self.input_weights.len()),
                format!("{} input bits", input.len()),
            ));
        }
        let weighted: i64 = self
            .input_weights
            .iter()
            .zip(input.iter())
            .filter(|(_, bit)| *bit)
            .map(|(&w, _)| w as i64)
            .sum();
        Ok(weighted + self.bias_weight as i64)
    }

    pub fn fires(&self, input: &BitVector) -> Result<bool> {
        Ok(self.net_input(input)? > 0)
    }
}

/// A trained CC4 network.
///
/// Under [`TiePolicy::SeededRandom`] the network owns the draw stream, so
/// [`CC4Network::classify`] results depend on call order. Calls are
/// serialized internally; use [`CC4Network::reset_tie_stream`] to replay.
pub struct CC4Network {
    input_width: usize,
    output_width: usize,
    radius: u32,
    tie_policy: TiePolicy,
    hidden_units: Vec<HiddenUnit>,
    ties: Mutex<TieBreaker>,
}

impl CC4Network {
    /// Assigns all weights in one pass over `samples`.
    pub fn train(samples: &[TrainingSample], radius: u32, tie_policy: TiePolicy) -> Result<Self> {
        let first = samples
            .first()
            .ok_or_else(|| Error::Argument("training set is empty".into()))?;
        let (input_width, output_width) = (first.input.len(), first.output.len());
        if input_width == 0 || output_width == 0 {
            return Err(Error::shape(
                "non-empty input and output",
                format!("{input_width} input bits, {output_width} output bits"),
            ));
        }
        let hidden_units = samples
            .iter()
            .enumerate()
            .map(|(i, sample)| {
                if sample.input.len() != input_width || sample.output.len() != output_width {
                    return Err(Error::shape(
                        format!("sample {i} with {input_width}→{output_width} bits"),
                        format!("{}→{} bits", sample.input.len(), sample.output.len()),
                    ));
                }
                Ok(HiddenUnit::from_sample(sample, radius))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_parts(
            input_width,
            output_width,
            radius,
            tie_policy,
            hidden_units,
        ))
    }

    fn from_parts(
        input_width: usize,
        output_width: usize,
        radius: u32,
        tie_policy: TiePolicy,
        hidden_units: Vec<HiddenUnit>,
    ) -> Self {
        CC4Network {
            input_width,
            output_width,
            radius,
            tie_policy,
            hidden_units,
            ties: Mutex::new(TieBreaker::new(tie_policy)),
        }
    }

    pub fn input_width(&self) -> usize {
        self.input_width
    }

    pub fn output_width(&self) -> usize {
        self.output_width
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn tie_policy(&self) -> TiePolicy {
        self.tie_policy
    }

    pub fn hidden_units(&self) -> &[HiddenUnit] {
        &self.hidden_units
    }

    /// Restarts the seeded tie stream from its initial state.
    pub fn reset_tie_stream(&self) {
        *self.ties.lock().unwrap() = TieBreaker::new(self.tie_policy);
    }

    pub fn classify(&self, input: &BitVector) -> Result<BitVector> {
        let mut ties = self.ties.lock().unwrap();
        self.classify_with(input, &mut ties)
    }

    /// Classifies with an externally owned tie stream.
    pub fn classify_with(&self, input: &BitVector, ties: &mut TieBreaker) -> Result<BitVector> {
        if input.len() != self.input_width {
            return Err(Error::shape(
                format!("{} input bits", self.input_width),
                format!("{} input bits", input.len()),
            ));
        }
        let mut votes = vec![0i64; self.output_width];
        for unit in &self.hidden_units {
            if unit.fires(input)? {
                for (v, &w) in votes.iter_mut().zip(&unit.output_weights) {
                    *v += w as i64;
                }
            }
        }
        Ok(BitVector::from_lsb_bits(
            votes.into_iter().map(|v| ties.decide(v)),
        ))
    }

    pub fn to_document(&self) -> ModelDocument {
        ModelDocument {
            input_width: self.input_width,
            output_width: self.output_width,
            radius: self.radius,
            tie_policy: self.tie_policy.name().to_string(),
            seed: self.tie_policy.seed(),
            hidden_units: self.hidden_units.clone(),
        }
    }

    /// Canonical JSON model text, newline-terminated.
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_document())
            .expect("model document always serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ModelDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        Self::from_document(doc)
    }

    pub fn from_document(doc: ModelDocument) -> Result<Self> {
        let tie_policy = TiePolicy::from_parts(&doc.tie_policy, doc.seed)?;
        if doc.input_width == 0 || doc.output_width == 0 {
            return Err(Error::Argument("model widths must be positive".into()));
        }
        if doc.hidden_units.is_empty() {
            return Err(Error::Argument("model has no hidden units".into()));
        }
        let is_sign = |w: &i32| *w == 1 || *w == -1;
        for (i, unit) in doc.hidden_units.iter().enumerate() {
            if unit.input_weights.len() != doc.input_width
                || unit.output_weights.len() != doc.output_width
            {
                return Err(Error::shape(
                    format!(
                        "hidden unit {i} with {}→{} weights",
                        doc.input_width, doc.output_width
                    ),
                    format!("{}→{}", unit.input_weights.len(), unit.output_weights.len()),
                ));
            }
            if !unit.input_weights.iter().all(is_sign) || !unit.output_weights.iter().all(is_sign) {
                return Err(Error::Argument(format!(
                    "hidden unit {i} has a weight outside {{+1, -1}}"
                )));
            }
        }
        Ok(Self::from_parts(
            doc.input_width,
            doc.output_width,
            doc.radius,
            tie_policy,
            doc.hidden_units,
        ))
    }
}

impl Clone for CC4Network {
    /// The clone starts a fresh tie stream.
    fn clone(&self) -> Self {
        Self::from_parts(
            self.input_width,
            self.output_width,
            self.radius,
            self.tie_policy,
            self.hidden_units.clone(),
        )
    }
}

impl PartialEq for CC4Network {
    fn eq(&self, other: &Self) -> bool {
        self.input_width == other.input_width
            && self.output_width == other.output_width
            && self.radius == other.radius
            && self.tie_policy == other.tie_policy
            && self.hidden_units == other.hidden_units
    }
}

impl Eq for CC4Network {}

impl fmt::Debug for CC4Network {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CC4Network")
            .field("input_width", &self.input_width)
            .field("output_width", &self.output_width)
            .field("radius", &self.radius)
            .field("tie_policy", &self.tie_policy)
            .field("hidden_units", &self.hidden_units.len())
            .finish()
    }
}

impl FromStr for CC4Network {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::from_json(s)
    }
}

/// On-disk model layout. Field order is the canonical serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub input_width: usize,
    pub output_width: usize,
    pub radius: u32,
    pub tie_policy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub hidden_units: Vec<HiddenUnit>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    fn sample(input: &str, output: &str) -> TrainingSample {
        TrainingSample::new(bv(input), bv(output))
    }

    #[test]
    fn single_sample_weights() {
        let net = CC4Network::train(&[sample("101", "1")], 1, TiePolicy::Zero).unwrap();
        let unit = &net.hidden_units()[0];
        // positions 0..3 of "101" are 1, 0, 1
        assert_eq!(unit.input_weights, vec![1, -1, 1]);
        assert_eq!(unit.ones_count, 2);
        assert_eq!(unit.bias_weight, 0);
        assert_eq!(unit.output_weights, vec![1]);

        let net = CC4Network::train(&[sample("0000", "0")], 2, TiePolicy::Zero).unwrap();
        let unit = &net.hidden_units()[0];
        assert_eq!(unit.input_weights, vec![-1; 4]);
        assert_eq!(unit.bias_weight, 3);
        assert_eq!(unit.output_weights, vec![-1]);
    }

    #[test]
    fn two_sample_weights() {
        let net =
            CC4Network::train(&[sample("11", "1"), sample("00", "0")], 1, TiePolicy::Zero).unwrap();
        let [a, b] = net.hidden_units() else {
            panic!("expected two units")
        };
        assert_eq!((a.input_weights.clone(), a.bias_weight), (vec![1, 1], 0));
        assert_eq!(a.output_weights, vec![1]);
        assert_eq!((b.input_weights.clone(), b.bias_weight), (vec![-1, -1], 2));
        assert_eq!(b.output_weights, vec![-1]);
    }

    #[test]
    fn net_input_and_firing() {
        let net = CC4Network::train(&[sample("101", "1")], 1, TiePolicy::Zero).unwrap();
        let unit = &net.hidden_units()[0];
        assert_eq!(unit.net_input(&bv("101")).unwrap(), 2);
        assert_eq!(unit.net_input(&bv("111")).unwrap(), 1);
        assert_eq!(unit.net_input(&bv("010")).unwrap(), -1);
        assert!(unit.fires(&bv("101")).unwrap());
        // distance r + 1 = 2 gives net input 0, which does not fire
        assert_eq!(unit.net_input(&bv("011")).unwrap(), 0);
        assert!(!unit.fires(&bv("011")).unwrap());
        assert!(matches!(
            unit.net_input(&bv("10")),
            Err(Error::Shape { .. })
        ));

        let net = CC4Network::train(&[sample("1100", "1")], 2, TiePolicy::Zero).unwrap();
        assert!(net.hidden_units()[0].fires(&bv("1010")).unwrap());
    }

    #[test]
    fn classify_examples() {
        let net = CC4Network::train(&[sample("101", "1")], 1, TiePolicy::Zero).unwrap();
        assert_eq!(net.classify(&bv("101")).unwrap(), bv("1"));
        assert_eq!(net.classify(&bv("010")).unwrap(), bv("0"));
        assert!(matches!(
            net.classify(&bv("1010")),
            Err(Error::Shape { .. })
        ));

        let samples = [sample("11", "1"), sample("00", "0")];
        let zero = CC4Network::train(&samples, 1, TiePolicy::Zero).unwrap();
        let one = CC4Network::train(&samples, 1, TiePolicy::One).unwrap();
        assert_eq!(zero.classify(&bv("10")).unwrap(), bv("0"));
        assert_eq!(one.classify(&bv("10")).unwrap(), bv("1"));
        assert_eq!(one.classify(&bv("11")).unwrap(), bv("1"));
        assert_eq!(one.classify(&bv("00")).unwrap(), bv("0"));
    }

    #[test]
    fn seeded_ties_replay() {
        let samples = [sample("11", "1"), sample("00", "0")];
        let net = CC4Network::train(&samples, 1, TiePolicy::SeededRandom(7)).unwrap();
        let first: Vec<_> = (0..64).map(|_| net.classify(&bv("10")).unwrap()).collect();
        net.reset_tie_stream();
        let again: Vec<_> = (0..64).map(|_| net.classify(&bv("10")).unwrap()).collect();
        assert_eq!(first, again);
        assert!(first.contains(&bv("0")) && first.contains(&bv("1")));

        let mut external = TieBreaker::new(TiePolicy::SeededRandom(7));
        let via_external: Vec<_> = (0..64)
            .map(|_| net.classify_with(&bv("10"), &mut external).unwrap())
            .collect();
        assert_eq!(first, via_external);
    }

    #[test]
    fn training_errors() {
        assert!(matches!(
            CC4Network::train(&[], 1, TiePolicy::Zero),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            CC4Network::train(&[sample("10", "1"), sample("101", "1")], 1, TiePolicy::Zero),
            Err(Error::Shape { .. })
        ));
        assert!(matches!(
            CC4Network::train(&[sample("10", "1"), sample("10", "11")], 1, TiePolicy::Zero),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn conflicting_duplicates_cancel() {
        let net =
            CC4Network::train(&[sample("10", "1"), sample("10", "0")], 0, TiePolicy::Zero).unwrap();
        assert_eq!(net.hidden_units().len(), 2);
        assert_eq!(net.classify(&bv("10")).unwrap(), bv("0"));
    }

    #[test]
    fn json_round_trip() {
        let samples = [
            sample("0110", "10"),
            sample("1001", "01"),
            sample("1111", "11"),
        ];
        for policy in [TiePolicy::Zero, TiePolicy::One, TiePolicy::SeededRandom(99)] {
            let net = CC4Network::train(&samples, 2, policy).unwrap();
            let text = net.to_json();
            let restored = CC4Network::from_json(&text).unwrap();
            assert_eq!(restored, net);
            assert_eq!(restored.to_json(), text);
        }
        let text = CC4Network::train(&samples, 2, TiePolicy::Zero)
            .unwrap()
            .to_json();
        assert!(!text.contains("seed"));
        let keys: Vec<_> = [
            "input_width",
            "output_width",
            "radius",
            "tie_policy",
            "hidden_units",
        ]
        .iter()
        .map(|k| text.find(&format!("\"{k}\"")).unwrap())
        .collect();
        assert!(keys.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn json_errors() {
        let text = CC4Network::train(&[sample("01", "1")], 1, TiePolicy::Zero)
            .unwrap()
            .to_json();
        let truncated = &text[..text.len() / 2];
        assert!(matches!(
            CC4Network::from_json(truncated),
            Err(Error::Parse { .. })
        ));
        let bad_weight = text.replacen("-1", "-2", 1);
        assert!(CC4Network::from_json(&bad_weight).is_err());
        let no_seed = text.replace("\"zero\"", "\"seeded_random\"");
        assert!(matches!(
            CC4Network::from_json(&no_seed),
            Err(Error::Argument(_))
        ));
    }
}
