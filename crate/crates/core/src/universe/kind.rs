use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The five object kinds counted and enumerated over a ground set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KindTag {
    FinSubsets,
    OrderedPairs,
    UnorderedPairs,
    InjSeq,
    Seq,
}

impl KindTag {
    pub const ALL: [KindTag; 5] = [
        KindTag::FinSubsets,
        KindTag::OrderedPairs,
        KindTag::UnorderedPairs,
        KindTag::InjSeq,
        KindTag::Seq,
    ];

    /// The four kinds compared by the cardinal diagrams, smallest first at k ≥ 5.
    pub const CHAIN: [KindTag; 4] = [
        KindTag::UnorderedPairs,
        KindTag::OrderedPairs,
        KindTag::FinSubsets,
        KindTag::InjSeq,
    ];

    pub fn name(self) -> &'static str {
        match self {
            KindTag::FinSubsets => "fin-subsets",
            KindTag::OrderedPairs => "ordered-pairs",
            KindTag::UnorderedPairs => "unordered-pairs",
            KindTag::InjSeq => "inj-seq",
            KindTag::Seq => "seq",
        }
    }

    /// Short mathematical notation used in text tables.
    pub fn notation(self) -> &'static str {
        match self {
            KindTag::FinSubsets => "fin(A)",
            KindTag::OrderedPairs => "A^2",
            KindTag::UnorderedPairs => "[A]^2",
            KindTag::InjSeq => "seq11(A)",
            KindTag::Seq => "seq(A)",
        }
    }

    pub fn is_sequence(self) -> bool {
        matches!(self, KindTag::InjSeq | KindTag::Seq)
    }
}

impl fmt::Display for KindTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown kind `{0}` (expected fin, square, pairs, iseq or seq)")]
pub struct ParseKindError(String);

impl FromStr for KindTag {
    type Err = ParseKindError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "fin" | "fin-subsets" | "FinSubsets" => KindTag::FinSubsets,
            "square" | "ordered-pairs" | "OrderedPairs" => KindTag::OrderedPairs,
            "pairs" | "unordered-pairs" | "UnorderedPairs" => KindTag::UnorderedPairs,
            "iseq" | "inj-seq" | "InjSeq" => KindTag::InjSeq,
            "seq" | "Seq" => KindTag::Seq,
            other => return Err(ParseKindError(other.to_string())),
        })
    }
}
