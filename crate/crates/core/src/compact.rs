//! The cube `[0, ∞]³` over each four-break cell of the quotiented moduli
//! space and the classification of its faces.
//!
//! A face is described by the state of each gap: collapsed to zero, open,
//! or at infinity. Zero gaps merge break points; the merged jumps either
//! keep the total variation (the limit is a degenerate type VI–X) or cancel
//! (the limit has reduced variation and lies outside the moduli space).
//! Infinite gaps carry no map and are recorded as labels only.

use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl::total_variation;
use crate::rational::{format_rational, parse_rational, Rational};
use crate::types::{Label, SlopeSequence};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtendedGap {
    Zero,
    Finite(Rational),
    Infinite,
}

impl ExtendedGap {
    pub fn state(&self) -> CoordState {
        match self {
            ExtendedGap::Zero => CoordState::Zero,
            ExtendedGap::Finite(_) => CoordState::Open,
            ExtendedGap::Infinite => CoordState::Infinite,
        }
    }
}

impl fmt::Display for ExtendedGap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedGap::Zero => f.write_str("0"),
            ExtendedGap::Finite(r) => f.write_str(&format_rational(r)),
            ExtendedGap::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtendedGap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" | "infinity" => return Ok(ExtendedGap::Infinite),
            _ => {}
        }
        let r = parse_rational(s)?;
        if r.is_zero() {
            Ok(ExtendedGap::Zero)
        } else if r.is_positive() {
            Ok(ExtendedGap::Finite(r))
        } else {
            Err(Error::InvalidGaps(format!("gap {s} is negative")))
        }
    }
}

impl Serialize for ExtendedGap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExtendedGap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Text(String),
        }
        let text = match Raw::deserialize(d)? {
            Raw::Int(n) => n.to_string(),
            Raw::Text(t) => t,
        };
        text.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoordState {
    Zero,
    Open,
    Infinite,
}

impl CoordState {
    pub const ALL: [CoordState; 3] = [CoordState::Zero, CoordState::Open, CoordState::Infinite];
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CompactifiedPoint {
    seq: SlopeSequence,
    gaps: [ExtendedGap; 3],
}

impl CompactifiedPoint {
    pub fn new(seq: SlopeSequence, gaps: [ExtendedGap; 3]) -> Result<Self> {
        if seq.k() != 4 || seq.degree() != 3 {
            return Err(Error::InvalidSequence {
                slopes: seq.slopes().to_vec(),
                reason: "the compactified cube is built on degree-3 four-break types".into(),
            });
        }
        if let Some(ExtendedGap::Finite(r)) = gaps
            .iter()
            .find(|g| matches!(g, ExtendedGap::Finite(r) if !r.is_positive()))
        {
            return Err(Error::InvalidGaps(format!(
                "finite gap {} is not positive",
                format_rational(r)
            )));
        }
        Ok(CompactifiedPoint { seq, gaps })
    }

    pub fn seq(&self) -> &SlopeSequence {
        &self.seq
    }

    pub fn gaps(&self) -> &[ExtendedGap; 3] {
        &self.gaps
    }

    pub fn states(&self) -> [CoordState; 3] {
        [
            self.gaps[0].state(),
            self.gaps[1].state(),
            self.gaps[2].state(),
        ]
    }
}

#[derive(Serialize, Deserialize)]
struct CompactRecord {
    slopes: Vec<i64>,
    gaps: [ExtendedGap; 3],
}

impl Serialize for CompactifiedPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CompactRecord {
            slopes: self.seq.slopes().to_vec(),
            gaps: self.gaps.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CompactifiedPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = CompactRecord::deserialize(d)?;
        let seq = SlopeSequence::new(3, r.slopes).map_err(serde::de::Error::custom)?;
        CompactifiedPoint::new(seq, r.gaps).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MergeKind {
    /// Same-sign jumps: total variation preserved by this merge.
    ValidMerge,
    /// Opposite-sign jumps: the merge cancels variation.
    ReducedVariation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Collision {
    /// 1-based gap index.
    pub index: usize,
    pub kind: MergeKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BoundaryStratum {
    pub slopes: Vec<i64>,
    pub states: [CoordState; 3],
    pub codimension: usize,
    pub collisions: Vec<Collision>,
    /// 1-based indices of gaps at infinity.
    pub infinities: Vec<usize>,
    /// Slope sequence after performing every collision, with cancelled
    /// jumps removed. Equal to `slopes` when no gap is zero.
    pub limit_seq: Vec<i64>,
    pub limit_variation: u64,
    /// The limit keeps total variation 4.
    pub in_moduli: bool,
    /// Registry label of the limit when it is an admissible degree-3 type.
    pub limit_label: Option<Label>,
}

impl BoundaryStratum {
    pub fn is_collision_face(&self) -> bool {
        !self.collisions.is_empty()
    }

    pub fn all_merges_valid(&self) -> bool {
        self.collisions
            .iter()
            .all(|c| c.kind == MergeKind::ValidMerge)
    }
}

pub fn classify_stratum(p: &CompactifiedPoint) -> BoundaryStratum {
    classify_states(p.seq(), p.states())
}

/// Each zero gap `ℓ_i` is tagged by the signs of the original jumps on
/// either side of it. The limit merges zero gaps left to right, summing
/// jumps, so cancellation can cascade.
pub fn classify_states(seq: &SlopeSequence, states: [CoordState; 3]) -> BoundaryStratum {
    let jumps = seq.jumps();
    let jumps = jumps.jumps();
    let mut collisions = Vec::new();
    let mut infinities = Vec::new();
    let mut merged = Vec::new();
    let mut acc = jumps[0];
    for (i, state) in states.iter().enumerate() {
        let next = jumps[i + 1];
        match state {
            CoordState::Zero => {
                let kind = if jumps[i].signum() == next.signum() {
                    MergeKind::ValidMerge
                } else {
                    MergeKind::ReducedVariation
                };
                collisions.push(Collision { index: i + 1, kind });
                acc += next;
            }
            other => {
                if *other == CoordState::Infinite {
                    infinities.push(i + 1);
                }
                merged.push(acc);
                acc = next;
            }
        }
    }
    merged.push(acc);

    let degree = i64::from(seq.degree());
    let mut limit_seq = vec![degree];
    for j in merged.into_iter().filter(|&j| j != 0) {
        limit_seq.push(limit_seq.last().expect("nonempty") + j);
    }
    let limit_variation = total_variation(&limit_seq);
    let in_moduli = limit_variation == 2 * seq.degree() as u64 - 2;
    let limit_label = if in_moduli {
        SlopeSequence::new(seq.degree(), limit_seq.clone())
            .ok()
            .and_then(|s| Label::of(&s))
    } else {
        None
    };
    BoundaryStratum {
        slopes: seq.slopes().to_vec(),
        states,
        codimension: states.iter().filter(|s| **s != CoordState::Open).count(),
        collisions,
        infinities,
        limit_seq,
        limit_variation,
        in_moduli,
        limit_label,
    }
}

/// All 27 faces of the cube over a four-break type, the open cell first.
pub fn face_lattice(seq: &SlopeSequence) -> Result<Vec<BoundaryStratum>> {
    if seq.k() != 4 {
        return Err(Error::InvalidSequence {
            slopes: seq.slopes().to_vec(),
            reason: "the face lattice is defined for four-break types".into(),
        });
    }
    let mut out = Vec::with_capacity(27);
    for a in CoordState::ALL {
        for b in CoordState::ALL {
            for c in CoordState::ALL {
                out.push(classify_states(seq, [a, b, c]));
            }
        }
    }
    out.sort_by_key(|s| s.codimension);
    Ok(out)
}
