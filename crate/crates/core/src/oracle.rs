//! Brute-force reference classifier.
//!
//! Counts, per output bit, the stored samples within Hamming distance
//! `radius` of the query that say 1 against those that say 0. Nothing here
//! touches weights, so it serves as an independent check on
//! [`crate::network`].

use crate::encoding::{hamming, BitVector};
use crate::error::{Error, Result};
use crate::network::{TieBreaker, TrainingSample};

pub fn oracle_classify(
    samples: &[TrainingSample],
    radius: u32,
    input: &BitVector,
    ties: &mut TieBreaker,
) -> Result<BitVector> {
    let first = samples
        .first()
        .ok_or_else(|| Error::Argument("training set is empty".into()))?;
    let output_width = first.output.len();
    if input.len() != first.input.len() {
        return Err(Error::shape(
            format!("{} input bits", first.input.len()),
            format!("{} input bits", input.len()),
        ));
    }

    let mut within = Vec::with_capacity(samples.len());
    for sample in samples {
        if sample.output.len() != output_width {
            return Err(Error::shape(
                format!("{output_width} output bits"),
                format!("{} output bits", sample.output.len()),
            ));
        }
        if hamming(input, &sample.input)? <= radius as usize {
            within.push(sample);
        }
    }

    let bits = (0..output_width).map(|m| {
        let positive = within.iter().filter(|s| s.output.get(m)).count() as i64;
        let negative = within.len() as i64 - positive;
        ties.decide(positive - negative)
    });
    Ok(BitVector::from_lsb_bits(bits.collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::TiePolicy;

    fn sample(input: &str, output: &str) -> TrainingSample {
        TrainingSample::new(input.parse().unwrap(), output.parse().unwrap())
    }

    fn classify(samples: &[TrainingSample], r: u32, input: &str, policy: TiePolicy) -> String {
        let mut ties = TieBreaker::new(policy);
        oracle_classify(samples, r, &input.parse().unwrap(), &mut ties)
            .unwrap()
            .to_string()
    }

    #[test]
    fn exact_recall() {
        let samples = [
            sample("0011", "01"),
            sample("1100", "10"),
            sample("0101", "11"),
        ];
        for s in &samples {
            assert_eq!(
                classify(&samples, 0, &s.input.to_string(), TiePolicy::Zero),
                s.output.to_string()
            );
        }
    }

    #[test]
    fn nothing_in_range() {
        let samples = [sample("0000", "11")];
        assert_eq!(classify(&samples, 1, "1111", TiePolicy::Zero), "00");
        assert_eq!(classify(&samples, 1, "1111", TiePolicy::One), "11");
    }

    #[test]
    fn midpoint_tie() {
        let samples = [sample("11", "1"), sample("00", "0")];
        assert_eq!(classify(&samples, 1, "10", TiePolicy::Zero), "0");
        assert_eq!(classify(&samples, 1, "10", TiePolicy::One), "1");
    }

    #[test]
    fn shape_errors() {
        let samples = [sample("11", "1")];
        let mut ties = TieBreaker::new(TiePolicy::Zero);
        assert!(oracle_classify(&samples, 1, &"111".parse().unwrap(), &mut ties).is_err());
        assert!(oracle_classify(&[], 1, &"11".parse().unwrap(), &mut ties).is_err());
        let ragged = [sample("11", "1"), sample("10", "10")];
        assert!(oracle_classify(&ragged, 1, &"11".parse().unwrap(), &mut ties).is_err());
    }
}
