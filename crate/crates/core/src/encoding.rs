//! One-hot encoding of the categorical inputs and the seeded train/test split.
//!
//! A [`Vocabulary`] assigns stable indices to the observed (or the full)
//! category domains; encoding a [`DataContext`] against it yields a binary
//! vector with one bit set per feature block. Splitting shuffles record
//! indices with a ChaCha8 stream keyed by the seed, so the same
//! `(n, ratio, seed)` triple always produces the same partition on any
//! machine.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::record::{DataContext, DataNature, DataType};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EncodingError {
    /// Vocabulary construction over zero records.
    EmptyInput,
    /// A category absent from the vocabulary.
    UnknownCategory {
        feature: &'static str,
        value: String,
    },
    /// A vector whose width or block layout does not match the vocabulary.
    MalformedVector { expected_width: usize, found: usize },
}

impl fmt::Display for EncodingError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EncodingError::EmptyInput => write!(f, "cannot build a vocabulary from zero records"),
            EncodingError::UnknownCategory { feature, value } => {
                write!(f, "unknown category for {feature}: \"{value}\"")
            }
            EncodingError::MalformedVector {
                expected_width,
                found,
            } => write!(
                f,
                "feature vector width {found} does not match vocabulary width {expected_width}"
            ),
        }
    }
}

impl core::error::Error for EncodingError {}

/// Ordered category dictionaries for the two input features.
///
/// Categories are sorted lexicographically within each feature, so index
/// assignment is stable across runs. The nature block precedes the type
/// block in every encoded vector.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vocabulary {
    natures: Vec<DataNature>,
    types: Vec<DataType>,
}

impl Vocabulary {
    /// The full closed domain: 3 natures and 4 types, width 7. Training
    /// pipelines default to this so held-out categories always encode.
    pub fn full() -> Self {
        Vocabulary {
            natures: DataNature::ALL.to_vec(),
            types: DataType::ALL.to_vec(),
        }
    }

    /// Builds a vocabulary covering exactly the observed categories.
    pub fn from_observed<'a, I>(contexts: I) -> Result<Self, EncodingError>
    where
        I: IntoIterator<Item = &'a DataContext>,
    {
        let mut natures = Vec::new();
        let mut types = Vec::new();
        let mut seen_any = false;
        for ctx in contexts {
            seen_any = true;
            if !natures.contains(&ctx.nature) {
                natures.push(ctx.nature);
            }
            if !types.contains(&ctx.data_type) {
                types.push(ctx.data_type);
            }
        }
        if !seen_any {
            return Err(EncodingError::EmptyInput);
        }
        natures.sort_unstable();
        types.sort_unstable();
        Ok(Vocabulary { natures, types })
    }

    pub fn natures(&self) -> &[DataNature] {
        &self.natures
    }

    pub fn types(&self) -> &[DataType] {
        &self.types
    }

    /// Total one-hot width: nature block plus type block.
    pub fn width(&self) -> usize {
        self.natures.len() + self.types.len()
    }

    /// One-hot encodes an input pair. Exactly two bits end up set, one per
    /// feature block.
    pub fn encode(&self, ctx: &DataContext) -> Result<FeatureVector, EncodingError> {
        let nature_idx = self
            .natures
            .iter()
            .position(|n| *n == ctx.nature)
            .ok_or_else(|| EncodingError::UnknownCategory {
                feature: "data_nature",
                value: ctx.nature.to_string(),
            })?;
        let type_idx = self
            .types
            .iter()
            .position(|t| *t == ctx.data_type)
            .ok_or_else(|| EncodingError::UnknownCategory {
                feature: "data_type",
                value: ctx.data_type.to_string(),
            })?;
        let mut bits = alloc::vec![0u8; self.width()];
        bits[nature_idx] = 1;
        bits[self.natures.len() + type_idx] = 1;
        Ok(FeatureVector { bits })
    }

    /// Recovers the input pair from a well-formed one-hot vector.
    pub fn decode(&self, vector: &FeatureVector) -> Result<DataContext, EncodingError> {
        let malformed = || EncodingError::MalformedVector {
            expected_width: self.width(),
            found: vector.width(),
        };
        if vector.width() != self.width() {
            return Err(malformed());
        }
        let (nature_block, type_block) = vector.bits.split_at(self.natures.len());
        let nature_idx = single_set_bit(nature_block).ok_or_else(malformed)?;
        let type_idx = single_set_bit(type_block).ok_or_else(malformed)?;
        Ok(DataContext {
            nature: self.natures[nature_idx],
            data_type: self.types[type_idx],
        })
    }
}

fn single_set_bit(block: &[u8]) -> Option<usize> {
    let mut found = None;
    for (i, bit) in block.iter().enumerate() {
        match (*bit, found) {
            (0, _) => {}
            (1, None) => found = Some(i),
            _ => return None,
        }
    }
    found
}

/// A one-hot encoded input pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FeatureVector {
    bits: Vec<u8>,
}

impl FeatureVector {
    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn popcount(&self) -> usize {
        self.bits.iter().filter(|&&b| b != 0).count()
    }

    /// Hamming distance between two equal-width encodings. For valid
    /// two-block one-hot vectors this is always 0, 2, or 4.
    pub fn hamming(&self, other: &FeatureVector) -> usize {
        debug_assert_eq!(self.width(), other.width());
        self.bits
            .iter()
            .zip(other.bits.iter())
            .filter(|(a, b)| a != b)
            .count()
    }
}

/// An exact train fraction, kept rational so `floor(ratio * n)` never
/// suffers float rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRatio {
    num: u32,
    den: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioError(pub String);

impl fmt::Display for RatioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid split ratio: {}", self.0)
    }
}

impl core::error::Error for RatioError {}

impl SplitRatio {
    /// The conventional 8:10 train share.
    pub const EIGHT_OF_TEN: SplitRatio = SplitRatio { num: 8, den: 10 };

    pub fn new(num: u32, den: u32) -> Result<Self, RatioError> {
        if den == 0 {
            return Err(RatioError("denominator must be positive".into()));
        }
        if num > den {
            return Err(RatioError("ratio must lie in [0, 1]".into()));
        }
        Ok(SplitRatio { num, den })
    }

    /// `floor(ratio * n)`, computed with integer arithmetic.
    pub fn train_size(&self, n: usize) -> usize {
        ((n as u128 * self.num as u128) / self.den as u128) as usize
    }

    pub fn numerator(&self) -> u32 {
        self.num
    }

    pub fn denominator(&self) -> u32 {
        self.den
    }
}

impl Default for SplitRatio {
    fn default() -> Self {
        SplitRatio::EIGHT_OF_TEN
    }
}

impl fmt::Display for SplitRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for SplitRatio {
    type Err = RatioError;

    /// Accepts `a/b` or a plain decimal such as `0.8`.
    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let raw = raw.trim();
        if let Some((a, b)) = raw.split_once('/') {
            let num = a
                .trim()
                .parse::<u32>()
                .map_err(|_| RatioError(raw.into()))?;
            let den = b
                .trim()
                .parse::<u32>()
                .map_err(|_| RatioError(raw.into()))?;
            return SplitRatio::new(num, den);
        }
        if let Some((whole, frac)) = raw.split_once('.') {
            if frac.is_empty() || frac.len() > 6 || !frac.bytes().all(|b| b.is_ascii_digit()) {
                return Err(RatioError(raw.into()));
            }
            let whole = if whole.is_empty() {
                0
            } else {
                whole.parse::<u32>().map_err(|_| RatioError(raw.into()))?
            };
            let den = 10u32.pow(frac.len() as u32);
            let num = whole * den + frac.parse::<u32>().map_err(|_| RatioError(raw.into()))?;
            return SplitRatio::new(num, den);
        }
        let whole = raw.parse::<u32>().map_err(|_| RatioError(raw.into()))?;
        SplitRatio::new(whole, 1)
    }
}

/// A reproducible partition of record indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitResult {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
    pub seed: u64,
    pub ratio: SplitRatio,
}

/// Shuffles `0..n` with a ChaCha8 generator keyed by `seed` (Fisher-Yates,
/// as implemented by `rand`'s `SliceRandom::shuffle`) and takes the first
/// `floor(ratio * n)` indices as the training set.
pub fn split_train_test(n: usize, ratio: SplitRatio, seed: u64) -> SplitResult {
    let mut indices: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    indices.shuffle(&mut rng);
    let cut = ratio.train_size(n);
    let test = indices.split_off(cut);
    SplitResult {
        train: indices,
        test,
        seed,
        ratio,
    }
}
