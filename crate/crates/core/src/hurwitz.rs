//! The source-quotiented moduli space and its branch map.
//!
//! Quotienting by source translations drops the position `x_1`; the
//! remaining reflection is realized by reflecting source and target at once,
//! which reverses the slope sequence and the gap vector while keeping all
//! slopes positive. The branch map records the three consecutive distances
//! between the four critical values of a four-break map.

use std::collections::BTreeSet;

use num_traits::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moduli::ModuliPoint;
use crate::pl::{Sign, TropicalMap};
use crate::rational::{int, serde_rational_vec, Rational};
use crate::types::{enumerate_types, Label, SlopeSequence};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct QuotientedModuliPoint {
    #[serde(rename = "slopes")]
    pub canonical_seq: SlopeSequence,
    #[serde(with = "serde_rational_vec")]
    pub gaps: Vec<Rational>,
    /// Whether the input was reversed to reach the canonical orientation.
    pub reversed: bool,
}

pub fn quotient_source(p: &ModuliPoint) -> QuotientedModuliPoint {
    let seq = p.seq().clone();
    let gaps = p.gaps().to_vec();
    let rev_seq = seq.reversed();
    let rev_gaps: Vec<Rational> = gaps.iter().rev().cloned().collect();
    if (rev_seq.slopes(), &rev_gaps) < (seq.slopes(), &gaps) {
        QuotientedModuliPoint {
            canonical_seq: rev_seq,
            gaps: rev_gaps,
            reversed: true,
        }
    } else {
        QuotientedModuliPoint {
            canonical_seq: seq,
            gaps,
            reversed: false,
        }
    }
}

/// `x ↦ −φ(−x)`: the source reflection followed by the target reflection.
/// Keeps an increasing map increasing.
pub fn combined_reflection(map: &TropicalMap) -> TropicalMap {
    map.apply_source_automorphism(Sign::Minus, &int(0))
        .apply_target_automorphism(Sign::Minus, &int(0))
}

/// Four ordered branch points modulo target translation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct BranchConfiguration {
    #[serde(with = "serde_rational_vec")]
    distances: Vec<Rational>,
}

impl BranchConfiguration {
    pub fn from_distances(distances: [Rational; 3]) -> Result<Self> {
        if let Some(i) = distances.iter().position(|d| !d.is_positive()) {
            return Err(Error::NonGeneric(format!(
                "distance {} is {}, branch points must be distinct and ordered",
                i + 1,
                crate::rational::format_rational(&distances[i])
            )));
        }
        Ok(BranchConfiguration {
            distances: distances.to_vec(),
        })
    }

    pub fn from_branch_points(points: [Rational; 4]) -> Result<Self> {
        let [p1, p2, p3, p4] = points;
        Self::from_distances([&p2 - &p1, &p3 - &p2, &p4 - &p3])
    }

    pub fn distances(&self) -> &[Rational] {
        &self.distances
    }
}

/// Consecutive distances between the critical values of a four-break map:
/// `d_i = s_i · ℓ_i`.
pub fn branch_configuration(p: &ModuliPoint) -> Result<BranchConfiguration> {
    if p.k() != 4 {
        return Err(Error::NotFourBreaks(p.k()));
    }
    let d: Vec<Rational> = p
        .seq()
        .interior()
        .iter()
        .zip(p.gaps())
        .map(|(&s, l)| int(s) * l)
        .collect();
    BranchConfiguration::from_distances([d[0].clone(), d[1].clone(), d[2].clone()])
}

/// Per-type multiplicities of the generic four-break types over a generic
/// branch configuration; they sum to 9.
pub fn type_multiplicity(label: Label) -> Option<u64> {
    match label {
        Label::I => Some(2),
        Label::II => Some(1),
        Label::III => Some(2),
        Label::IV => Some(2),
        Label::V => Some(2),
        _ => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HurwitzFiberElement {
    pub label: Label,
    #[serde(rename = "slopes")]
    pub seq: SlopeSequence,
    #[serde(with = "serde_rational_vec")]
    pub gaps: Vec<Rational>,
    /// The table multiplicity of the element's combinatorial type.
    pub multiplicity: u64,
}

impl HurwitzFiberElement {
    /// The element as a moduli point with its first break point at 0.
    pub fn point(&self) -> ModuliPoint {
        ModuliPoint::new(self.seq.clone(), self.gaps.clone(), int(0))
            .expect("fiber gaps are positive")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HurwitzFiber {
    /// Number of maps over the configuration, one per oriented four-break
    /// slope sequence.
    pub geometric_count: usize,
    /// Table multiplicities summed once per combinatorial type.
    pub weighted_count: u64,
    pub elements: Vec<HurwitzFiberElement>,
}

/// Every oriented slope sequence with four break points, in label order.
pub fn four_break_sequences() -> Vec<SlopeSequence> {
    let mut out = Vec::new();
    let mut types: Vec<_> = enumerate_types(3, None)
        .into_iter()
        .filter(|t| t.k() == 4)
        .collect();
    types.sort_by_key(|t| t.label);
    for t in types {
        let rep = t.representative;
        let rev = rep.reversed();
        let palindromic = rep == rev;
        out.push(rep);
        if !palindromic {
            out.push(rev);
        }
    }
    out
}

/// Solves `ℓ_i = d_i / s_i` for every four-break sequence.
pub fn fiber(b: &BranchConfiguration) -> Result<HurwitzFiber> {
    let mut elements = Vec::new();
    for seq in four_break_sequences() {
        let gaps: Vec<Rational> = seq
            .interior()
            .iter()
            .zip(b.distances())
            .map(|(&s, d)| d / int(s))
            .collect();
        // positivity is checked, not assumed
        let point = ModuliPoint::new(seq.clone(), gaps.clone(), int(0))?;
        debug_assert_eq!(branch_configuration(&point).as_ref(), Ok(b));
        let label = Label::of(&seq).expect("degree-3 four-break sequences are labelled");
        elements.push(HurwitzFiberElement {
            label,
            seq,
            gaps,
            multiplicity: type_multiplicity(label).expect("four-break label"),
        });
    }
    let labels: BTreeSet<Label> = elements.iter().map(|e| e.label).collect();
    let weighted_count = labels.into_iter().filter_map(type_multiplicity).sum();
    Ok(HurwitzFiber {
        geometric_count: elements.len(),
        weighted_count,
        elements,
    })
}

pub fn hurwitz_number(b: &BranchConfiguration) -> Result<u64> {
    fiber(b).map(|f| f.weighted_count)
}
