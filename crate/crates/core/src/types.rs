//! Admissible slope sequences and their reversal classes.
//!
//! A degree-`d` slope sequence starts and ends at `d`, stays positive, never
//! repeats a slope, and has total variation `2d − 2`. Two sequences related
//! by reversal (pre-composition with `x ↦ −x`) have the same combinatorial
//! type. In degree 3 there are ten types, labelled `I`–`X`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl::slope_admissibility;

/// Serializes as the bare list of slopes.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SlopeSequence {
    degree: u32,
    slopes: Vec<i64>,
}

impl SlopeSequence {
    pub fn new(degree: u32, slopes: Vec<i64>) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidSequence {
                slopes,
                reason: "degree must be positive".into(),
            });
        }
        if let Some(i) = (1..slopes.len()).find(|&i| slopes[i] == slopes[i - 1]) {
            return Err(Error::InvalidSequence {
                slopes,
                reason: format!("slopes {} and {i} are equal", i - 1),
            });
        }
        let report = slope_admissibility(&slopes, degree);
        if !report.admissible {
            return Err(Error::InvalidSequence {
                slopes,
                reason: report.to_string(),
            });
        }
        Ok(SlopeSequence { degree, slopes })
    }

    /// Infers the degree from the first slope.
    pub fn from_slopes(slopes: Vec<i64>) -> Result<Self> {
        let degree = slopes
            .first()
            .and_then(|&s| u32::try_from(s).ok())
            .unwrap_or(0);
        Self::new(degree, slopes)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn slopes(&self) -> &[i64] {
        &self.slopes
    }

    /// Number of break points.
    pub fn k(&self) -> usize {
        self.slopes.len() - 1
    }

    pub fn jumps(&self) -> JumpSequence {
        JumpSequence {
            degree: self.degree,
            jumps: self.slopes.windows(2).map(|w| w[1] - w[0]).collect(),
        }
    }

    pub fn reversed(&self) -> SlopeSequence {
        SlopeSequence {
            degree: self.degree,
            slopes: self.slopes.iter().rev().copied().collect(),
        }
    }

    pub fn is_palindromic(&self) -> bool {
        self.slopes.iter().eq(self.slopes.iter().rev())
    }

    /// Interior slopes `s_1, …, s_{k−1}`: the dilations of the bounded
    /// segments.
    pub fn interior(&self) -> &[i64] {
        &self.slopes[1..self.slopes.len() - 1]
    }
}

impl Serialize for SlopeSequence {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.slopes.serialize(s)
    }
}

impl fmt::Display for SlopeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_tuple(f, &self.slopes)
    }
}

pub(crate) fn write_tuple(f: &mut fmt::Formatter<'_>, xs: &[i64]) -> fmt::Result {
    f.write_str("(")?;
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    f.write_str(")")
}

/// Slope jumps `δ_i = s_i − s_{i−1}` of an admissible sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct JumpSequence {
    degree: u32,
    jumps: Vec<i64>,
}

impl JumpSequence {
    /// Checks nonzero jumps, `Σ|δ| = 2d − 2`, `Σδ = 0` and positive partial
    /// slopes `d + δ_1 + … + δ_j`.
    pub fn new(degree: u32, jumps: Vec<i64>) -> Result<Self> {
        let candidate = JumpSequence { degree, jumps };
        candidate.to_slopes().map(|_| candidate)
    }

    pub fn jumps(&self) -> &[i64] {
        &self.jumps
    }

    pub fn to_slopes(&self) -> Result<SlopeSequence> {
        let mut slopes = Vec::with_capacity(self.jumps.len() + 1);
        let mut s = i64::from(self.degree);
        slopes.push(s);
        for &j in &self.jumps {
            s += j;
            slopes.push(s);
        }
        SlopeSequence::new(self.degree, slopes)
    }
}

/// Roman-numeral names of the ten degree-3 types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
    IX,
    X,
}

impl Label {
    pub const ALL: [Label; 10] = [
        Label::I,
        Label::II,
        Label::III,
        Label::IV,
        Label::V,
        Label::VI,
        Label::VII,
        Label::VIII,
        Label::IX,
        Label::X,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::I => "I",
            Label::II => "II",
            Label::III => "III",
            Label::IV => "IV",
            Label::V => "V",
            Label::VI => "VI",
            Label::VII => "VII",
            Label::VIII => "VIII",
            Label::IX => "IX",
            Label::X => "X",
        }
    }

    /// The slope sequence in the orientation used for display.
    pub fn representative(self) -> &'static [i64] {
        match self {
            Label::I => &[3, 4, 5, 4, 3],
            Label::II => &[3, 4, 3, 4, 3],
            Label::III => &[3, 4, 3, 2, 3],
            Label::IV => &[3, 2, 3, 2, 3],
            Label::V => &[3, 2, 1, 2, 3],
            Label::VI => &[3, 5, 4, 3],
            Label::VII => &[3, 1, 2, 3],
            Label::VIII => &[3, 4, 2, 3],
            Label::IX => &[3, 5, 3],
            Label::X => &[3, 1, 3],
        }
    }

    pub fn sequence(self) -> SlopeSequence {
        SlopeSequence::new(3, self.representative().to_vec())
            .expect("registry entries are admissible")
    }

    /// Looks up the label of a degree-3 sequence in either orientation.
    pub fn of(seq: &SlopeSequence) -> Option<Label> {
        if seq.degree() != 3 {
            return None;
        }
        let rev = seq.reversed();
        Label::ALL.into_iter().find(|l| {
            let r = l.representative();
            r == seq.slopes() || r == rev.slopes()
        })
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_uppercase();
        Label::ALL
            .into_iter()
            .find(|l| l.as_str() == t)
            .ok_or_else(|| Error::UnknownLabel(s.to_string()))
    }
}

impl Serialize for Label {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for Label {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A reversal class of slope sequences.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CombinatorialType {
    /// Lexicographic minimum of the sequence and its reversal.
    pub canonical: SlopeSequence,
    /// Orientation used for display: the registry orientation for labelled
    /// degree-3 types, otherwise the canonical one.
    pub representative: SlopeSequence,
    pub palindromic: bool,
    pub label: Option<Label>,
}

impl CombinatorialType {
    pub fn k(&self) -> usize {
        self.canonical.k()
    }

    pub fn contains(&self, seq: &SlopeSequence) -> bool {
        canonical_type(seq).canonical == self.canonical
    }
}

pub fn canonical_type(seq: &SlopeSequence) -> CombinatorialType {
    let rev = seq.reversed();
    let canonical = if rev.slopes() < seq.slopes() {
        rev
    } else {
        seq.clone()
    };
    let label = Label::of(&canonical);
    let representative = label.map_or_else(|| canonical.clone(), Label::sequence);
    CombinatorialType {
        palindromic: canonical.is_palindromic(),
        canonical,
        representative,
        label,
    }
}

/// The ten labelled degree-3 types, in label order.
pub fn registry_d3() -> Vec<CombinatorialType> {
    Label::ALL
        .into_iter()
        .map(|l| canonical_type(&l.sequence()))
        .collect()
}

/// Whether every slope satisfies `|s_i − d| ≤ d − 1`; for `d = 3` this is
/// `1 ≤ s_i ≤ 5`. Works on raw slope lists so that out-of-range candidates
/// can be tested.
pub fn slope_bound_check(degree: u32, slopes: &[i64]) -> bool {
    let d = i64::from(degree);
    slopes.iter().all(|s| (s - d).abs() < d)
}

/// All combinatorial types of degree `degree`, optionally restricted to at
/// most `max_breaks` break points. Sorted by number of break points
/// (descending), then lexicographically by canonical sequence.
pub fn enumerate_types(degree: u32, max_breaks: Option<usize>) -> Vec<CombinatorialType> {
    if degree == 0 {
        return Vec::new();
    }
    let budget = 2 * i64::from(degree) - 2;
    let k_cap = max_breaks.map_or(budget as usize, |m| m.min(budget as usize));
    let mut found = BTreeSet::new();
    let mut slopes = vec![i64::from(degree)];
    search(degree, budget, k_cap, &mut slopes, &mut found);

    let mut types: Vec<CombinatorialType> = found
        .into_iter()
        .map(|s| canonical_type(&SlopeSequence::new(degree, s).expect("search emits admissible")))
        .collect();
    types.sort_by(|a, b| {
        b.k()
            .cmp(&a.k())
            .then_with(|| a.canonical.slopes().cmp(b.canonical.slopes()))
    });
    types
}

/// Depth-first search over jumps. `remaining` is the unused variation; the
/// current slope must be able to return to `degree` within it.
fn search(
    degree: u32,
    remaining: i64,
    k_cap: usize,
    slopes: &mut Vec<i64>,
    found: &mut BTreeSet<Vec<i64>>,
) {
    let d = i64::from(degree);
    let current = *slopes.last().expect("nonempty");
    if remaining == 0 {
        if current == d {
            let rev: Vec<i64> = slopes.iter().rev().copied().collect();
            found.insert(if rev < *slopes { rev } else { slopes.clone() });
        }
        return;
    }
    if slopes.len() > k_cap {
        return;
    }
    for jump in (-remaining..=remaining).filter(|&j| j != 0) {
        let next = current + jump;
        let left = remaining - jump.abs();
        if next < 1 || (next - d).abs() > left {
            continue;
        }
        slopes.push(next);
        search(degree, left, k_cap, slopes, found);
        slopes.pop();
    }
}
