//! Unary and spread-unary codes over fixed-width bit vectors.
//!
//! Bit position 0 is the least significant bit, i.e. the rightmost
//! character of the textual form. `"0000000111"` has ones at positions
//! 0, 1 and 2.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Fixed-length sequence of binary symbols.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    // bits[0] is the rightmost printed character
    bits: Vec<bool>,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector {
            bits: vec![false; len],
        }
    }

    /// Builds a vector from bits listed least significant first.
    pub fn from_lsb_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        BitVector {
            bits: bits.into_iter().collect(),
        }
    }

    /// Builds a vector whose low `len` bits are those of `value`.
    pub fn from_u64(value: u64, len: usize) -> Self {
        BitVector {
            bits: (0..len).map(|j| j < 64 && (value >> j) & 1 == 1).collect(),
        }
    }

    /// Concatenates vectors in printed order: `parts[0]` ends up leftmost
    /// (most significant).
    pub fn concat(parts: &[&BitVector]) -> Self {
        let mut bits = Vec::with_capacity(parts.iter().map(|p| p.len()).sum());
        for part in parts.iter().rev() {
            bits.extend_from_slice(&part.bits);
        }
        BitVector { bits }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn get(&self, position: usize) -> bool {
        self.bits[position]
    }

    pub fn set(&mut self, position: usize, value: bool) {
        self.bits[position] = value;
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Bits least significant first.
    pub fn iter(&self) -> impl DoubleEndedIterator<Item = bool> + ExactSizeIterator + '_ {
        self.bits.iter().copied()
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    /// Maximal runs of ones as `(lowest position, length)`, lowest first.
    fn runs(&self) -> Vec<(usize, usize)> {
        let mut runs = Vec::new();
        let mut j = 0;
        while j < self.bits.len() {
            if self.bits[j] {
                let start = j;
                while j < self.bits.len() && self.bits[j] {
                    j += 1;
                }
                runs.push((start, j - start));
            } else {
                j += 1;
            }
        }
        runs
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.bits.iter().rev() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl FromStr for BitVector {
    type Err = Error;

    /// Parses the printed form, leftmost character most significant.
    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "empty bit string".into(),
            });
        }
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::Parse {
                        line: 1,
                        column: i + 1,
                        message: format!("unexpected character {other:?} in bit string"),
                    })
                }
            }
        }
        bits.reverse();
        Ok(BitVector { bits })
    }
}

/// Number of positions where `a` and `b` differ.
pub fn hamming(a: &BitVector, b: &BitVector) -> Result<usize> {
    if a.len() != b.len() {
        return Err(Error::shape(
            format!("{} bits", a.len()),
            format!("{} bits", b.len()),
        ));
    }
    Ok(a.bits.iter().zip(&b.bits).filter(|(x, y)| x != y).count())
}

fn check_range(n: usize, max: usize) -> Result<()> {
    if n > max {
        return Err(Error::Range {
            value: n as i64,
            min: 0,
            max: max as i64,
        });
    }
    Ok(())
}

/// Standard unary (thermometer) code: `n` right-aligned ones in `width` bits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnaryCodec {
    width: usize,
}

impl UnaryCodec {
    pub fn new(width: usize) -> Result<Self> {
        if width == 0 {
            return Err(Error::Argument("unary width must be positive".into()));
        }
        Ok(UnaryCodec { width })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Largest encodable value; equal to the width.
    pub fn max_value(&self) -> usize {
        self.width
    }

    pub fn encode(&self, n: usize) -> Result<BitVector> {
        check_range(n, self.width)?;
        Ok(BitVector::from_lsb_bits((0..self.width).map(|j| j < n)))
    }

    pub fn decode(&self, code: &BitVector) -> Result<usize> {
        if code.len() != self.width {
            return Err(Error::shape(
                format!("{} bits", self.width),
                format!("{} bits", code.len()),
            ));
        }
        let n = code.count_ones();
        if code.iter().take(n).any(|b| !b) {
            return Err(Error::malformed(
                code,
                "ones are not contiguous and right-aligned",
            ));
        }
        Ok(n)
    }
}

/// Spread-unary code: value `n >= 1` is a run of `spread` ones whose lowest
/// bit sits at position `n - 1`; zero is all zeros.
///
/// At the canonical width `max_value + spread - 1` every value has its own
/// codeword. Narrower widths saturate: a run that would pass the top bit is
/// clamped to the top `spread` positions, so the largest values share one
/// codeword.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpreadUnaryCodec {
    spread: usize,
    max_value: usize,
    width: usize,
}

impl SpreadUnaryCodec {
    /// Codec at the canonical width `max_value + spread - 1`.
    pub fn new(spread: usize, max_value: usize) -> Result<Self> {
        if spread == 0 || max_value == 0 {
            return Err(Error::Argument(
                "spread and max_value must be positive".into(),
            ));
        }
        Self::with_width(spread, max_value, max_value + spread - 1)
    }

    pub fn with_width(spread: usize, max_value: usize, width: usize) -> Result<Self> {
        if spread == 0 || max_value == 0 {
            return Err(Error::Argument(
                "spread and max_value must be positive".into(),
            ));
        }
        if width < spread {
            return Err(Error::Argument(format!(
                "width {width} is smaller than the spread {spread}"
            )));
        }
        Ok(SpreadUnaryCodec {
            spread,
            max_value,
            width,
        })
    }

    pub fn spread(&self) -> usize {
        self.spread
    }

    pub fn max_value(&self) -> usize {
        self.max_value
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_canonical(&self) -> bool {
        self.width >= self.max_value + self.spread - 1
    }

    // Lowest position the run may start at without leaving the word.
    fn top_start(&self) -> usize {
        self.width - self.spread
    }

    pub fn encode(&self, n: usize) -> Result<BitVector> {
        check_range(n, self.max_value)?;
        let mut code = BitVector::zeros(self.width);
        if n > 0 {
            let start = (n - 1).min(self.top_start());
            for j in start..start + self.spread {
                code.set(j, true);
            }
        }
        Ok(code)
    }

    pub fn decode(&self, code: &BitVector) -> Result<usize> {
        if code.len() != self.width {
            return Err(Error::shape(
                format!("{} bits", self.width),
                format!("{} bits", code.len()),
            ));
        }
        let runs = code.runs();
        match runs.as_slice() {
            [] => Ok(0),
            [(start, len)] => {
                if *len != self.spread {
                    return Err(Error::malformed(
                        code,
                        format!("run of {len} ones, expected {}", self.spread),
                    ));
                }
                let n = start + 1;
                if n > self.max_value {
                    return Err(Error::malformed(
                        code,
                        format!("decodes to {n}, above max value {}", self.max_value),
                    ));
                }
                // every value from top_start + 1 upwards saturates here
                if *start == self.top_start() && self.max_value > n {
                    return Err(Error::malformed(
                        code,
                        format!(
                            "saturated codeword shared by values {n}..={}",
                            self.max_value
                        ),
                    ));
                }
                Ok(n)
            }
            _ => Err(Error::malformed(code, "more than one run of ones")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bv(s: &str) -> BitVector {
        s.parse().unwrap()
    }

    #[test]
    fn unary_examples() {
        assert_eq!(
            UnaryCodec::new(16).unwrap().encode(1).unwrap().to_string(),
            "0000000000000001"
        );
        let c10 = UnaryCodec::new(10).unwrap();
        assert_eq!(c10.encode(0).unwrap().to_string(), "0000000000");
        assert_eq!(c10.encode(3).unwrap().to_string(), "0000000111");
        assert!(matches!(
            c10.encode(11),
            Err(Error::Range {
                value: 11,
                max: 10,
                ..
            })
        ));
    }

    #[test]
    fn unary_table() {
        let table = [
            "0000000000",
            "0000000001",
            "0000000011",
            "0000000111",
            "0000001111",
            "0000011111",
            "0000111111",
            "0001111111",
            "0011111111",
            "0111111111",
            "1111111111",
        ];
        let codec = UnaryCodec::new(10).unwrap();
        for (n, row) in table.iter().enumerate() {
            assert_eq!(codec.encode(n).unwrap().to_string(), *row);
            assert_eq!(codec.decode(&bv(row)).unwrap(), n);
        }
    }

    #[test]
    fn unary_decode_errors() {
        let codec = UnaryCodec::new(10).unwrap();
        assert!(matches!(
            codec.decode(&bv("0000001011")),
            Err(Error::MalformedCode { .. })
        ));
        assert!(matches!(
            codec.decode(&bv("0111")),
            Err(Error::Shape { .. })
        ));
        assert!(UnaryCodec::new(0).is_err());
    }

    #[test]
    fn spread_examples() {
        let c = SpreadUnaryCodec::with_width(3, 10, 11).unwrap();
        assert_eq!(c.encode(1).unwrap().to_string(), "00000000111");
        assert_eq!(c.encode(2).unwrap().to_string(), "00000001110");
        assert_eq!(c.encode(0).unwrap().to_string(), "00000000000");
        let canon = SpreadUnaryCodec::new(3, 10).unwrap();
        assert_eq!(canon.width(), 12);
        assert_eq!(canon.encode(10).unwrap().to_string(), "111000000000");
    }

    #[test]
    fn spread_table_rows_with_saturation() {
        let rows = [
            (1, "00000000111"),
            (2, "00000001110"),
            (3, "00000011100"),
            (4, "00000111000"),
            (5, "00001110000"),
            (6, "00011100000"),
            (7, "00111000000"),
            (8, "01110000000"),
            (9, "11100000000"),
            (10, "11100000000"),
        ];
        let c = SpreadUnaryCodec::with_width(3, 10, 11).unwrap();
        assert!(!c.is_canonical());
        for (n, row) in rows {
            assert_eq!(c.encode(n).unwrap().to_string(), row, "n = {n}");
        }
        // 9 and 10 share a codeword, so decoding it is refused
        assert!(matches!(
            c.decode(&bv("11100000000")),
            Err(Error::MalformedCode { .. })
        ));
        assert_eq!(c.decode(&bv("01110000000")).unwrap(), 8);
    }

    #[test]
    fn spread_decode() {
        let c = SpreadUnaryCodec::with_width(3, 9, 11).unwrap();
        assert_eq!(c.decode(&bv("00000001110")).unwrap(), 2);
        assert_eq!(c.decode(&bv("00000000000")).unwrap(), 0);
        assert_eq!(c.decode(&bv("11100000000")).unwrap(), 9);
        for bad in ["01010000000", "00000011110", "00000000110", "00000001000"] {
            assert!(
                matches!(c.decode(&bv(bad)), Err(Error::MalformedCode { .. })),
                "{bad}"
            );
        }
        assert!(matches!(c.decode(&bv("0111")), Err(Error::Shape { .. })));
    }

    #[test]
    fn spread_codec_validation() {
        assert!(SpreadUnaryCodec::new(0, 4).is_err());
        assert!(SpreadUnaryCodec::new(2, 0).is_err());
        assert!(SpreadUnaryCodec::with_width(4, 4, 3).is_err());
        assert!(matches!(
            SpreadUnaryCodec::new(3, 4).unwrap().encode(5),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(hamming(&bv("000000"), &bv("100000")).unwrap(), 1);
        assert_eq!(hamming(&bv("101101"), &bv("101101")).unwrap(), 0);
        assert_eq!(hamming(&bv("00000011"), &bv("00001100")).unwrap(), 4);
        assert!(matches!(
            hamming(&bv("01"), &bv("011")),
            Err(Error::Shape { .. })
        ));
    }

    #[test]
    fn text_form() {
        let v = bv("0110");
        assert!(!v.get(0));
        assert!(v.get(1));
        assert!(v.get(2));
        assert!(!v.get(3));
        assert_eq!(BitVector::from_u64(0b0110, 4), v);
        assert_eq!(
            BitVector::concat(&[&bv("10"), &bv("001")]).to_string(),
            "10001"
        );
        assert!(matches!(
            "01x1".parse::<BitVector>(),
            Err(Error::Parse { column: 3, .. })
        ));
        assert!("".parse::<BitVector>().is_err());
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn text_round_trip(bits in proptest::collection::vec(any::<bool>(), 1..80)) {
                let v = BitVector::from_lsb_bits(bits);
                let back: BitVector = v.to_string().parse().unwrap();
                prop_assert_eq!(back, v);
            }

            #[test]
            fn canonical_round_trip(k in 1usize..10, max in 1usize..40, frac in 0.0f64..=1.0) {
                let n = (frac * max as f64).round() as usize;
                let spread = SpreadUnaryCodec::new(k, max).unwrap();
                prop_assert_eq!(spread.decode(&spread.encode(n).unwrap()).unwrap(), n);
                let unary = UnaryCodec::new(max).unwrap();
                prop_assert_eq!(unary.decode(&unary.encode(n).unwrap()).unwrap(), n);
            }
        }
    }
}
