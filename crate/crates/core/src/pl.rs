//! Continuous piecewise-linear maps with integer slopes.
//!
//! A [`TropicalMap`] is stored as its break points `x_1 < … < x_k`, its
//! slope sequence `(s_0, …, s_k)` and the single value `φ(x_1)` (or `φ(0)`
//! when there are no break points). Every other value is obtained by
//! integrating slopes from that anchor, so continuity cannot be violated.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{
    format_rational, int, serde_rational, serde_rational_vec, to_i64, Extended, Rational,
};

/// Orientation of an affine automorphism `x ↦ ±x + b` of the tropical line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// One structural defect of a candidate map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    /// `slopes` must have exactly one more entry than `breaks`.
    LengthMismatch {
        breaks: usize,
        slopes: usize,
    },
    /// `breaks[index] <= breaks[index - 1]`.
    NonStrictBreaks {
        index: usize,
    },
    /// `slopes[index] == slopes[index - 1]`: the listed break is not a kink.
    ZeroJump {
        index: usize,
    },
    NonIntegerSlope {
        index: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::LengthMismatch { breaks, slopes } => {
                write!(
                    f,
                    "{breaks} break points need {} slopes, got {slopes}",
                    breaks + 1
                )
            }
            Violation::NonStrictBreaks { index } => {
                write!(
                    f,
                    "break points {} and {index} are not strictly increasing",
                    index - 1
                )
            }
            Violation::ZeroJump { index } => {
                write!(f, "slopes {} and {index} are equal (zero jump)", index - 1)
            }
            Violation::NonIntegerSlope { index } => write!(f, "slope {index} is not an integer"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return f.write_str("valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// The serialized form of a map, before any structural check. Slopes are
/// read as rationals so that non-integer input can be reported instead of
/// rejected by the parser.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRecord {
    #[serde(with = "serde_rational_vec")]
    pub breaks: Vec<Rational>,
    #[serde(with = "serde_rational_vec")]
    pub slopes: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub anchor: Rational,
}

/// Reports every structural violation of a serialized map.
pub fn validate(record: &MapRecord) -> ValidationReport {
    let mut violations = Vec::new();
    if record.slopes.len() != record.breaks.len() + 1 {
        violations.push(Violation::LengthMismatch {
            breaks: record.breaks.len(),
            slopes: record.slopes.len(),
        });
    }
    for i in 1..record.breaks.len() {
        if record.breaks[i] <= record.breaks[i - 1] {
            violations.push(Violation::NonStrictBreaks { index: i });
        }
    }
    for (i, s) in record.slopes.iter().enumerate() {
        if !s.is_integer() || to_i64(s).is_none() {
            violations.push(Violation::NonIntegerSlope { index: i });
        }
    }
    for i in 1..record.slopes.len() {
        if record.slopes[i] == record.slopes[i - 1] {
            violations.push(Violation::ZeroJump { index: i });
        }
    }
    ValidationReport { violations }
}

/// Ramification weights `r_i = |s_i − s_{i−1}|` and their total.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RamificationProfile {
    pub weights: Vec<u64>,
    pub total: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AdmissibilityFailure {
    EndSlopes { first: i64, last: i64, degree: u32 },
    NonPositiveSlope { index: usize, slope: i64 },
    TotalVariation { total: u64, expected: u64 },
}

impl fmt::Display for AdmissibilityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AdmissibilityFailure::EndSlopes {
                first,
                last,
                degree,
            } => {
                write!(
                    f,
                    "end slopes ({first}, {last}) differ from degree {degree}"
                )
            }
            AdmissibilityFailure::NonPositiveSlope { index, slope } => {
                write!(f, "slope {index} is {slope}, not positive")
            }
            AdmissibilityFailure::TotalVariation { total, expected } => {
                write!(f, "total variation {total} != {expected}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Admissibility {
    pub degree: u32,
    pub admissible: bool,
    pub failures: Vec<AdmissibilityFailure>,
}

impl fmt::Display for Admissibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.admissible {
            return write!(f, "admissible of degree {}", self.degree);
        }
        let parts: Vec<String> = self.failures.iter().map(|x| x.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks the degree-`degree` admissibility conditions on a bare slope list:
/// both end slopes equal the degree, all slopes are positive, and the total
/// variation is `2·degree − 2`.
pub fn slope_admissibility(slopes: &[i64], degree: u32) -> Admissibility {
    let mut failures = Vec::new();
    let d = i64::from(degree);
    let first = slopes.first().copied().unwrap_or(0);
    let last = slopes.last().copied().unwrap_or(0);
    if first != d || last != d {
        failures.push(AdmissibilityFailure::EndSlopes {
            first,
            last,
            degree,
        });
    }
    for (index, &slope) in slopes.iter().enumerate() {
        if slope < 1 {
            failures.push(AdmissibilityFailure::NonPositiveSlope { index, slope });
        }
    }
    let total = total_variation(slopes);
    let expected = (2 * u64::from(degree)).saturating_sub(2);
    if total != expected {
        failures.push(AdmissibilityFailure::TotalVariation { total, expected });
    }
    Admissibility {
        degree,
        admissible: failures.is_empty(),
        failures,
    }
}

pub fn total_variation(slopes: &[i64]) -> u64 {
    slopes.windows(2).map(|w| w[1].abs_diff(w[0])).sum()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TropicalMap {
    breaks: Vec<Rational>,
    slopes: Vec<i64>,
    anchor: Rational,
}

impl TropicalMap {
    pub fn new(breaks: Vec<Rational>, slopes: Vec<i64>, anchor: Rational) -> Result<Self> {
        let record = MapRecord {
            breaks: breaks.clone(),
            slopes: slopes.iter().map(|&s| int(s)).collect(),
            anchor: anchor.clone(),
        };
        let report = validate(&record);
        if !report.is_valid() {
            return Err(Error::InvalidMap(report));
        }
        Ok(TropicalMap {
            breaks,
            slopes,
            anchor,
        })
    }

    /// A break-free map `x ↦ slope·x + value_at_zero`.
    pub fn linear(slope: i64, value_at_zero: Rational) -> Self {
        TropicalMap {
            breaks: Vec::new(),
            slopes: vec![slope],
            anchor: value_at_zero,
        }
    }

    pub fn breaks(&self) -> &[Rational] {
        &self.breaks
    }

    pub fn slopes(&self) -> &[i64] {
        &self.slopes
    }

    /// `φ(x_1)`, or `φ(0)` for a map without break points.
    pub fn anchor(&self) -> &Rational {
        &self.anchor
    }

    /// Number of break points.
    pub fn k(&self) -> usize {
        self.breaks.len()
    }

    /// Slope jumps `δ_i = s_i − s_{i−1}`, one per break point.
    pub fn jumps(&self) -> Vec<i64> {
        self.slopes.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Values `φ(x_1), …, φ(x_k)`.
    pub fn break_values(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.k());
        let mut value = self.anchor.clone();
        for (i, x) in self.breaks.iter().enumerate() {
            if i > 0 {
                value += int(self.slopes[i]) * (x - &self.breaks[i - 1]);
            }
            out.push(value.clone());
        }
        out
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        if self.breaks.is_empty() {
            return &self.anchor + int(self.slopes[0]) * x;
        }
        // index of the last break point <= x
        let j = self.breaks.partition_point(|b| b <= x);
        if j == 0 {
            return &self.anchor + int(self.slopes[0]) * (x - &self.breaks[0]);
        }
        let values = self.break_values();
        &values[j - 1] + int(self.slopes[j]) * (x - &self.breaks[j - 1])
    }

    /// Evaluation on the tropical projective line; the ends go to the end
    /// selected by the sign of the outer slopes.
    pub fn evaluate_extended(&self, x: &Extended) -> Extended {
        let end = |slope: i64, toward_plus: bool| match (slope.signum(), toward_plus) {
            (0, _) => None,
            (1, true) | (-1, false) => Some(Extended::PosInf),
            _ => Some(Extended::NegInf),
        };
        match x {
            Extended::Finite(r) => Extended::Finite(self.evaluate(r)),
            Extended::PosInf => {
                let s = *self.slopes.last().expect("nonempty slopes");
                end(s, true).unwrap_or_else(|| Extended::Finite(self.tail_constant()))
            }
            Extended::NegInf => {
                end(self.slopes[0], false).unwrap_or_else(|| Extended::Finite(self.anchor.clone()))
            }
        }
    }

    fn tail_constant(&self) -> Rational {
        self.break_values()
            .last()
            .cloned()
            .unwrap_or_else(|| self.anchor.clone())
    }

    pub fn ramification(&self) -> RamificationProfile {
        let weights: Vec<u64> = self
            .slopes
            .windows(2)
            .map(|w| w[1].abs_diff(w[0]))
            .collect();
        let total = weights.iter().sum();
        RamificationProfile { weights, total }
    }

    pub fn admissibility(&self, degree: u32) -> Admissibility {
        slope_admissibility(&self.slopes, degree)
    }

    pub fn is_admissible(&self, degree: u32) -> bool {
        self.admissibility(degree).admissible
    }

    /// Images of the break points; these are the branch points of the map.
    pub fn critical_values(&self) -> Vec<Rational> {
        self.break_values()
    }

    /// Post-composition with `y ↦ sign·y + shift`.
    pub fn apply_target_automorphism(&self, sign: Sign, shift: &Rational) -> Self {
        let e = sign.as_i64();
        TropicalMap {
            breaks: self.breaks.clone(),
            slopes: self.slopes.iter().map(|s| e * s).collect(),
            anchor: int(e) * &self.anchor + shift,
        }
    }

    /// Pre-composition: the map `x ↦ φ(sign·x + shift)`.
    pub fn apply_source_automorphism(&self, sign: Sign, shift: &Rational) -> Self {
        match sign {
            Sign::Plus => {
                let breaks: Vec<Rational> = self.breaks.iter().map(|b| b - shift).collect();
                let anchor = if breaks.is_empty() {
                    self.evaluate(shift)
                } else {
                    self.anchor.clone()
                };
                TropicalMap {
                    breaks,
                    slopes: self.slopes.clone(),
                    anchor,
                }
            }
            Sign::Minus => {
                let breaks: Vec<Rational> = self.breaks.iter().rev().map(|b| shift - b).collect();
                let slopes: Vec<i64> = self.slopes.iter().rev().map(|s| -s).collect();
                // the new first break is the image of the old last break
                let anchor = match self.break_values().last() {
                    Some(v) => v.clone(),
                    None => self.evaluate(shift),
                };
                TropicalMap {
                    breaks,
                    slopes,
                    anchor,
                }
            }
        }
    }

    /// Exact equality as functions. Representations are unique (no zero
    /// jumps, fixed anchor convention), so this is structural equality.
    pub fn same_function(&self, other: &TropicalMap) -> bool {
        self == other
    }

    pub fn to_record(&self) -> MapRecord {
        MapRecord {
            breaks: self.breaks.clone(),
            slopes: self.slopes.iter().map(|&s| int(s)).collect(),
            anchor: self.anchor.clone(),
        }
    }

    /// Slope of the segment containing `x` (right-hand slope at a break).
    pub fn slope_at(&self, x: &Rational) -> i64 {
        self.slopes[self.breaks.partition_point(|b| b <= x)]
    }

    /// The pointwise difference `self − other`, with coincident break points
    /// merged and vanishing jumps dropped.
    pub fn difference(&self, other: &TropicalMap) -> TropicalMap {
        let mut candidates: Vec<Rational> = self
            .breaks
            .iter()
            .chain(other.breaks.iter())
            .cloned()
            .collect();
        candidates.sort();
        candidates.dedup();

        let slope_left = self.slopes[0] - other.slopes[0];
        let mut breaks = Vec::new();
        let mut slopes = vec![slope_left];
        for x in candidates {
            let right = self.slope_at(&x) - other.slope_at(&x);
            if right != *slopes.last().expect("nonempty") {
                breaks.push(x);
                slopes.push(right);
            }
        }
        let at = breaks.first().cloned().unwrap_or_else(|| int(0));
        let anchor = self.evaluate(&at) - other.evaluate(&at);
        TropicalMap {
            breaks,
            slopes,
            anchor,
        }
    }

    /// Sample points covering every segment: each break point, each bounded
    /// segment's midpoint, and one point beyond each end.
    pub fn probe_points(&self) -> Vec<Rational> {
        if self.breaks.is_empty() {
            return vec![int(-1), int(0), int(1)];
        }
        let mut pts = Vec::with_capacity(2 * self.k() + 1);
        pts.push(&self.breaks[0] - int(1));
        for (i, b) in self.breaks.iter().enumerate() {
            if i > 0 {
                pts.push((&self.breaks[i - 1] + b) / int(2));
            }
            pts.push(b.clone());
        }
        pts.push(self.breaks.last().expect("nonempty") + int(1));
        pts
    }
}

impl fmt::Display for TropicalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let breaks: Vec<String> = self.breaks.iter().map(format_rational).collect();
        let slopes: Vec<String> = self.slopes.iter().map(i64::to_string).collect();
        write!(
            f,
            "breaks ({}) slopes ({}) anchor {}",
            breaks.join(","),
            slopes.join(","),
            format_rational(&self.anchor)
        )
    }
}

pub fn maps_equal(a: &TropicalMap, b: &TropicalMap) -> bool {
    a.same_function(b)
}

impl TryFrom<MapRecord> for TropicalMap {
    type Error = Error;

    fn try_from(record: MapRecord) -> Result<Self> {
        let report = validate(&record);
        if !report.is_valid() {
            return Err(Error::InvalidMap(report));
        }
        let slopes = record
            .slopes
            .iter()
            .map(|s| to_i64(s).expect("validated"))
            .collect();
        Ok(TropicalMap {
            breaks: record.breaks,
            slopes,
            anchor: record.anchor,
        })
    }
}

impl Serialize for TropicalMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(with = "serde_rational_vec")]
            breaks: Vec<Rational>,
            slopes: &'a [i64],
            #[serde(with = "serde_rational")]
            anchor: Rational,
        }
        Out {
            breaks: self.breaks.clone(),
            slopes: &self.slopes,
            anchor: self.anchor.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TropicalMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let record = MapRecord::deserialize(d)?;
        TropicalMap::try_from(record).map_err(serde::de::Error::custom)
    }
}
