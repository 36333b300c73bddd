//! Cell coordinates of the moduli space of degree-3 maps up to
//! post-composition, together with symmetry and degeneration data.
//!
//! A point of a cell is a slope sequence, the gaps `ℓ_i = x_{i+1} − x_i`
//! between consecutive break points, and the position `x_1` of the first
//! break point. The target translation has been quotiented away: the anchor
//! value of a map is dropped.

use std::fmt;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl::TropicalMap;
use crate::rational::{int, serde_rational, serde_rational_vec, Rational};
use crate::types::SlopeSequence;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuliPoint {
    seq: SlopeSequence,
    gaps: Vec<Rational>,
    position: Rational,
}

impl ModuliPoint {
    pub fn new(seq: SlopeSequence, gaps: Vec<Rational>, position: Rational) -> Result<Self> {
        if seq.degree() != 3 {
            return Err(Error::InvalidSequence {
                slopes: seq.slopes().to_vec(),
                reason: "moduli points are defined for degree 3".into(),
            });
        }
        check_gaps(&seq, &gaps)?;
        Ok(ModuliPoint {
            seq,
            gaps,
            position,
        })
    }

    pub fn seq(&self) -> &SlopeSequence {
        &self.seq
    }

    pub fn gaps(&self) -> &[Rational] {
        &self.gaps
    }

    pub fn position(&self) -> &Rational {
        &self.position
    }

    pub fn k(&self) -> usize {
        self.seq.k()
    }

    /// Break points `x_1 < … < x_k` rebuilt from position and gaps.
    pub fn breaks(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.k());
        let mut x = self.position.clone();
        out.push(x.clone());
        for g in &self.gaps {
            x += g;
            out.push(x.clone());
        }
        out
    }
}

pub(crate) fn check_gaps(seq: &SlopeSequence, gaps: &[Rational]) -> Result<()> {
    let expected = seq.k().saturating_sub(1);
    if seq.k() == 0 || gaps.len() != expected {
        return Err(Error::InvalidGaps(format!(
            "{} break points need {expected} gaps, got {}",
            seq.k(),
            gaps.len()
        )));
    }
    if let Some(i) = gaps.iter().position(|g| !g.is_positive()) {
        return Err(Error::InvalidGaps(format!("gap {} is not positive", i + 1)));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct PointRecord {
    slopes: Vec<i64>,
    #[serde(with = "serde_rational_vec")]
    gaps: Vec<Rational>,
    #[serde(with = "serde_rational")]
    position: Rational,
}

impl Serialize for ModuliPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointRecord {
            slopes: self.seq.slopes().to_vec(),
            gaps: self.gaps.clone(),
            position: self.position.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ModuliPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PointRecord::deserialize(d)?;
        let seq = SlopeSequence::new(3, r.slopes).map_err(serde::de::Error::custom)?;
        ModuliPoint::new(seq, r.gaps, r.position).map_err(serde::de::Error::custom)
    }
}

/// Forgets the anchor value of an admissible degree-3 map.
pub fn moduli_point(map: &TropicalMap) -> Result<ModuliPoint> {
    let report = map.admissibility(3);
    if !report.admissible {
        return Err(Error::Inadmissible {
            degree: 3,
            reason: report.to_string(),
        });
    }
    let seq = SlopeSequence::new(3, map.slopes().to_vec())?;
    let gaps = map.breaks().windows(2).map(|w| &w[1] - &w[0]).collect();
    ModuliPoint::new(seq, gaps, map.breaks()[0].clone())
}

/// The map with anchor value 0 lying over `p`.
pub fn representative_map(p: &ModuliPoint) -> TropicalMap {
    TropicalMap::new(p.breaks(), p.seq.slopes().to_vec(), int(0)).expect("moduli points are valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum AutKind {
    Trivial,
    Z2,
}

impl fmt::Display for AutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AutKind::Trivial => "trivial",
            AutKind::Z2 => "Z/2",
        })
    }
}

/// The automorphism group of a map. Only the trivial group and `Z/2` occur;
/// the generator of `Z/2` is the pair `α(x) = −x + 2c`, `β(y) = −y + b`
/// where `c` is the midpoint of the outer break points.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AutGroup {
    Trivial,
    Z2 {
        center: Rational,
        target_shift: Rational,
    },
}

impl AutGroup {
    pub fn kind(&self) -> AutKind {
        match self {
            AutGroup::Trivial => AutKind::Trivial,
            AutGroup::Z2 { .. } => AutKind::Z2,
        }
    }

    pub fn order(&self) -> usize {
        match self {
            AutGroup::Trivial => 1,
            AutGroup::Z2 { .. } => 2,
        }
    }

    /// Checks `φ(−x + 2c) = −φ(x) + b` at every break point, every segment
    /// midpoint and one point beyond each end. Both sides are piecewise
    /// linear with kinks only at these break points and their mirror images,
    /// so this sample set decides the identity exactly.
    pub fn holds_for(&self, map: &TropicalMap) -> bool {
        match self {
            AutGroup::Trivial => true,
            AutGroup::Z2 {
                center,
                target_shift,
            } => {
                let shift = int(2) * center;
                map.probe_points()
                    .iter()
                    .all(|x| map.evaluate(&(&shift - x)) == target_shift - map.evaluate(x))
            }
        }
    }
}

#[derive(Serialize)]
struct AutRecord {
    kind: AutKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    center: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    source_shift: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_shift: Option<String>,
}

impl Serialize for AutGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use crate::rational::format_rational as f;
        let rec = match self {
            AutGroup::Trivial => AutRecord {
                kind: AutKind::Trivial,
                center: None,
                source_shift: None,
                target_shift: None,
            },
            AutGroup::Z2 {
                center,
                target_shift,
            } => AutRecord {
                kind: AutKind::Z2,
                center: Some(f(center)),
                source_shift: Some(f(&(int(2) * center))),
                target_shift: Some(f(target_shift)),
            },
        };
        rec.serialize(s)
    }
}

fn is_palindrome<T: PartialEq>(xs: &[T]) -> bool {
    xs.iter().eq(xs.iter().rev())
}

/// Aut of the anchor-0 representative of `p`.
pub fn automorphisms(p: &ModuliPoint) -> AutGroup {
    if !(p.seq.is_palindromic() && is_palindrome(&p.gaps)) {
        return AutGroup::Trivial;
    }
    let breaks = p.breaks();
    let first = &breaks[0];
    let last = breaks.last().expect("k >= 1");
    let center = (first + last) / int(2);
    // β(φ(x_1)) = φ(α(x_1)) = φ(x_k), with φ(x_1) = 0
    let target_shift = representative_map(p).evaluate(last);
    AutGroup::Z2 {
        center,
        target_shift,
    }
}

/// Aut of an admissible map, with the target shift adjusted to its anchor.
pub fn map_automorphisms(map: &TropicalMap) -> Result<AutGroup> {
    let aut = automorphisms(&moduli_point(map)?);
    Ok(match aut {
        AutGroup::Trivial => AutGroup::Trivial,
        AutGroup::Z2 {
            center,
            target_shift,
        } => AutGroup::Z2 {
            center,
            target_shift: target_shift + int(2) * map.anchor(),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum StratumLabel {
    Generic,
    Symmetric,
    SymmetricBoundary,
    /// Three-break cells; their automorphism group is always trivial.
    Intermediate,
}

impl fmt::Display for StratumLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StratumLabel::Generic => "generic",
            StratumLabel::Symmetric => "symmetric",
            StratumLabel::SymmetricBoundary => "symmetric-boundary",
            StratumLabel::Intermediate => "intermediate",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StratumDescriptor {
    pub aut: AutKind,
    /// Dimension of the cell: `k − 1` gaps plus the translation parameter.
    pub cell_dimension: usize,
    pub symmetric_locus: bool,
    pub label: StratumLabel,
}

pub fn stratum(p: &ModuliPoint) -> StratumDescriptor {
    let aut = automorphisms(p).kind();
    let label = match (p.k(), aut) {
        (2, _) => StratumLabel::SymmetricBoundary,
        (3, _) => StratumLabel::Intermediate,
        (_, AutKind::Z2) => StratumLabel::Symmetric,
        (_, AutKind::Trivial) => StratumLabel::Generic,
    };
    StratumDescriptor {
        aut,
        cell_dimension: p.k(),
        symmetric_locus: aut == AutKind::Z2,
        label,
    }
}

/// The limit `ℓ_index → 0` (1-based): break points `index` and `index + 1`
/// merge at `x_index`. Only allowed when the two jumps have the same sign;
/// otherwise the total variation drops and the limit leaves the moduli space.
pub fn degenerate(p: &ModuliPoint, index: usize) -> Result<ModuliPoint> {
    let max = p.k().saturating_sub(1);
    if index == 0 || index > max {
        return Err(Error::MergeIndex { index, max });
    }
    let jumps = p.seq.jumps();
    let (left, right) = (jumps.jumps()[index - 1], jumps.jumps()[index]);
    if left.signum() != right.signum() {
        return Err(Error::InvalidDegeneration { index, left, right });
    }
    let mut slopes = p.seq.slopes().to_vec();
    slopes.remove(index);
    let mut gaps = p.gaps.clone();
    gaps.remove(index - 1);
    let seq = SlopeSequence::new(3, slopes)?;
    ModuliPoint::new(seq, gaps, p.position.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveVertex {
    #[serde(with = "serde_rational")]
    pub position: Rational,
    pub weight: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveEdge {
    #[serde(with = "serde_rational")]
    pub length: Rational,
    pub dilation: i64,
}

/// The metric path graph of break points. Vertices carry ramification
/// weights, bounded edges carry length and dilation, and the two infinite
/// leaves carry the outer slopes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightedTropicalCurve {
    pub vertices: Vec<CurveVertex>,
    pub edges: Vec<CurveEdge>,
    pub leaf_dilations: [i64; 2],
}

pub fn weighted_curve(p: &ModuliPoint) -> WeightedTropicalCurve {
    let slopes = p.seq.slopes();
    let vertices = p
        .breaks()
        .into_iter()
        .zip(slopes.windows(2))
        .map(|(position, w)| CurveVertex {
            position,
            weight: w[1].abs_diff(w[0]),
        })
        .collect();
    let edges = p
        .gaps
        .iter()
        .zip(p.seq.interior())
        .map(|(length, &dilation)| CurveEdge {
            length: length.clone(),
            dilation,
        })
        .collect();
    WeightedTropicalCurve {
        vertices,
        edges,
        leaf_dilations: [slopes[0], slopes[slopes.len() - 1]],
    }
}

/// `Z/2` exactly when the reflection of the path graph preserves lengths,
/// dilations, vertex weights and leaf dilations.
pub fn curve_automorphisms(c: &WeightedTropicalCurve) -> AutKind {
    let lengths: Vec<&Rational> = c.edges.iter().map(|e| &e.length).collect();
    let dilations: Vec<i64> = c.edges.iter().map(|e| e.dilation).collect();
    let weights: Vec<u64> = c.vertices.iter().map(|v| v.weight).collect();
    let symmetric = is_palindrome(&lengths)
        && is_palindrome(&dilations)
        && is_palindrome(&weights)
        && c.leaf_dilations[0] == c.leaf_dilations[1];
    if symmetric {
        AutKind::Z2
    } else {
        AutKind::Trivial
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use crate::types::{canonical_type, Label};

    fn point(slopes: &[i64], gaps: &[Rational], position: Rational) -> ModuliPoint {
        ModuliPoint::new(
            SlopeSequence::new(3, slopes.to_vec()).unwrap(),
            gaps.to_vec(),
            position,
        )
        .unwrap()
    }

    fn m_star() -> TropicalMap {
        TropicalMap::new(
            vec![int(0), int(1), int(3), int(4)],
            vec![3, 4, 5, 4, 3],
            int(0),
        )
        .unwrap()
    }

    #[test]
    fn coordinates_of_worked_example() {
        let p = moduli_point(&m_star()).unwrap();
        assert_eq!(p.seq().slopes(), &[3, 4, 5, 4, 3]);
        assert_eq!(p.gaps(), &[int(1), int(2), int(1)]);
        assert_eq!(p.position(), &int(0));

        let m = TropicalMap::new(vec![int(5), int(6)], vec![3, 5, 3], int(2)).unwrap();
        let q = moduli_point(&m).unwrap();
        assert_eq!(q.gaps(), &[int(1)]);
        assert_eq!(q.position(), &int(5));

        let lifted = m.apply_target_automorphism(crate::pl::Sign::Plus, &int(-7));
        assert_eq!(moduli_point(&lifted).unwrap(), q);
    }

    #[test]
    fn inadmissible_maps_have_no_coordinates() {
        let m = TropicalMap::new(vec![int(0), int(1)], vec![3, 4, 3], int(0)).unwrap();
        assert!(matches!(moduli_point(&m), Err(Error::Inadmissible { .. })));
    }

    #[test]
    fn gap_validation() {
        let seq = SlopeSequence::new(3, vec![3, 5, 3]).unwrap();
        assert!(ModuliPoint::new(seq.clone(), vec![], int(0)).is_err());
        assert!(ModuliPoint::new(seq.clone(), vec![int(0)], int(0)).is_err());
        assert!(ModuliPoint::new(seq, vec![int(-1)], int(0)).is_err());
        let two = SlopeSequence::new(2, vec![2, 3, 2]).unwrap();
        assert!(ModuliPoint::new(two, vec![int(1)], int(0)).is_err());
    }

    #[test]
    fn representative_round_trip() {
        let p = point(&[3, 4, 5, 4, 3], &[int(1), int(2), int(1)], int(0));
        assert_eq!(representative_map(&p), m_star());

        let q = point(&[3, 5, 3], &[int(2)], int(-1));
        let m = representative_map(&q);
        assert_eq!(m.breaks(), &[int(-1), int(1)]);
        assert_eq!(m.anchor(), &int(0));
        assert_eq!(moduli_point(&m).unwrap(), q);
    }

    #[test]
    fn worked_example_symmetry() {
        let p = moduli_point(&m_star()).unwrap();
        let aut = automorphisms(&p);
        assert_eq!(
            aut,
            AutGroup::Z2 {
                center: int(2),
                target_shift: int(18)
            }
        );
        assert!(aut.holds_for(&m_star()));
        // φ(4 − 2) = −φ(2) + 18
        assert_eq!(m_star().evaluate(&int(2)), int(-9) + int(18));
    }

    #[test]
    fn asymmetric_gaps_are_rigid() {
        let p = point(&[3, 4, 5, 4, 3], &[int(1), int(2), int(5)], int(0));
        assert_eq!(automorphisms(&p), AutGroup::Trivial);
        // no reflection about the outer midpoint works either
        let fake = AutGroup::Z2 {
            center: frac(8, 2),
            target_shift: representative_map(&p).evaluate(&int(8)),
        };
        assert!(!fake.holds_for(&representative_map(&p)));
    }

    #[test]
    fn two_break_types_are_symmetric() {
        for slopes in [[3, 5, 3], [3, 1, 3]] {
            for gap in [int(1), frac(7, 3)] {
                let p = point(&slopes, &[gap], frac(-1, 2));
                let aut = automorphisms(&p);
                assert_eq!(aut.kind(), AutKind::Z2);
                assert!(aut.holds_for(&representative_map(&p)));
            }
        }
    }

    #[test]
    fn map_automorphisms_track_anchor() {
        let m = m_star().apply_target_automorphism(crate::pl::Sign::Plus, &int(3));
        let aut = map_automorphisms(&m).unwrap();
        assert!(aut.holds_for(&m));
        assert_eq!(aut.order(), 2);
    }

    #[test]
    fn strata() {
        let s = stratum(&point(&[3, 4, 5, 4, 3], &[int(1), int(2), int(1)], int(0)));
        assert_eq!(s.label, StratumLabel::Symmetric);
        assert_eq!(s.cell_dimension, 4);
        assert!(s.symmetric_locus);

        let s = stratum(&point(&[3, 4, 3, 2, 3], &[int(1), int(1), int(1)], int(0)));
        assert_eq!(s.label, StratumLabel::Generic);
        assert_eq!(s.aut, AutKind::Trivial);

        let s = stratum(&point(&[3, 1, 3], &[int(7)], int(0)));
        assert_eq!(s.label, StratumLabel::SymmetricBoundary);
        assert_eq!(s.cell_dimension, 2);

        let s = stratum(&point(&[3, 5, 4, 3], &[int(1), int(1)], int(0)));
        assert_eq!(s.label, StratumLabel::Intermediate);
        assert_eq!(s.cell_dimension, 3);
        assert_eq!(s.aut, AutKind::Trivial);
    }

    #[test]
    fn degenerations() {
        let one = point(&[3, 4, 5, 4, 3], &[int(1), int(2), int(3)], int(5));
        let six = degenerate(&one, 1).unwrap();
        assert_eq!(six.seq().slopes(), &[3, 5, 4, 3]);
        assert_eq!(six.gaps(), &[int(2), int(3)]);
        assert_eq!(six.position(), &int(5));
        assert_eq!(canonical_type(six.seq()).label, Some(Label::VI));

        let three = degenerate(&one, 3).unwrap();
        assert_eq!(three.seq().slopes(), &[3, 4, 5, 3]);
        assert_eq!(three.gaps(), &[int(1), int(2)]);
        assert_eq!(three.breaks(), vec![int(5), int(6), int(8)]);

        assert_eq!(
            degenerate(&one, 2),
            Err(Error::InvalidDegeneration {
                index: 2,
                left: 1,
                right: -1
            })
        );
        assert!(matches!(degenerate(&one, 4), Err(Error::MergeIndex { .. })));
        assert!(matches!(degenerate(&one, 0), Err(Error::MergeIndex { .. })));

        let five = point(&[3, 2, 1, 2, 3], &[int(1), int(1), int(1)], int(0));
        let seven = degenerate(&five, 1).unwrap();
        assert_eq!(seven.seq().slopes(), &[3, 1, 2, 3]);
        assert_eq!(canonical_type(seven.seq()).label, Some(Label::VII));
    }

    #[test]
    fn degeneration_preserves_ramification() {
        let six = point(&[3, 5, 4, 3], &[int(2), frac(1, 3)], int(0));
        let nine = degenerate(&six, 2).unwrap();
        assert_eq!(nine.seq().slopes(), &[3, 5, 3]);
        assert_eq!(representative_map(&nine).ramification().total, 4);
    }

    #[test]
    fn curves() {
        let c = weighted_curve(&point(&[3, 4, 5, 4, 3], &[int(1), int(2), int(1)], int(0)));
        let weights: Vec<u64> = c.vertices.iter().map(|v| v.weight).collect();
        assert_eq!(weights, vec![1, 1, 1, 1]);
        let edges: Vec<(Rational, i64)> = c
            .edges
            .iter()
            .map(|e| (e.length.clone(), e.dilation))
            .collect();
        assert_eq!(edges, vec![(int(1), 4), (int(2), 5), (int(1), 4)]);
        assert_eq!(c.leaf_dilations, [3, 3]);
        assert_eq!(curve_automorphisms(&c), AutKind::Z2);

        let c = weighted_curve(&point(&[3, 5, 3], &[int(2)], int(0)));
        assert_eq!(c.vertices.len(), 2);
        assert_eq!(c.vertices[0].weight, 2);
        assert_eq!(
            c.edges,
            vec![CurveEdge {
                length: int(2),
                dilation: 5
            }]
        );
        assert_eq!(curve_automorphisms(&c), AutKind::Z2);

        let c = weighted_curve(&point(&[3, 1, 3], &[int(1)], int(0)));
        assert_eq!(
            c.edges,
            vec![CurveEdge {
                length: int(1),
                dilation: 1
            }]
        );
        assert_eq!(curve_automorphisms(&c), AutKind::Z2);

        let c = weighted_curve(&point(&[3, 4, 3, 2, 3], &[int(1), int(1), int(1)], int(0)));
        assert_eq!(curve_automorphisms(&c), AutKind::Trivial);
    }

    #[test]
    fn point_json() {
        let p: ModuliPoint =
            serde_json::from_str(r#"{"slopes":[3,4,5,4,3],"gaps":["1","2","1"],"position":"0"}"#)
                .unwrap();
        assert_eq!(p, moduli_point(&m_star()).unwrap());
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"{"slopes":[3,4,5,4,3],"gaps":["1","2","1"],"position":"0"}"#
        );
        assert!(serde_json::from_str::<ModuliPoint>(
            r#"{"slopes":[3,4,3],"gaps":["1"],"position":"0"}"#
        )
        .is_err());
    }
}
