//! One-hidden-layer ReLU networks with scalar input and output, and their
//! translation to and from tropical maps.
//!
//! A network realizes `f(x) = w₀x + b₀ + Σ a_j·max(0, w_j·x + b_j)`. Each
//! unit with `w_j ≠ 0` contributes a kink at `θ_j = −b_j / w_j` with slope
//! change `a_j·|w_j|`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::moduli::{map_automorphisms, moduli_point, AutGroup};
use crate::pl::{slope_admissibility, Admissibility, MapRecord, TropicalMap};
use crate::rational::{int, serde_rational, to_i64, Rational};
use crate::types::{canonical_type, Label, SlopeSequence};

const DEGREE: u32 = 3;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReluUnit {
    #[serde(with = "serde_rational")]
    pub w: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
    #[serde(with = "serde_rational")]
    pub a: Rational,
}

impl ReluUnit {
    pub fn new(w: Rational, b: Rational, a: Rational) -> Self {
        ReluUnit { w, b, a }
    }

    pub fn threshold(&self) -> Option<Rational> {
        (!self.w.is_zero()).then(|| -&self.b / &self.w)
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        let pre = &self.w * x + &self.b;
        if pre.is_positive() {
            &self.a * pre
        } else {
            int(0)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ReluNetwork {
    #[serde(with = "serde_rational")]
    pub base_slope: Rational,
    #[serde(with = "serde_rational")]
    pub base_bias: Rational,
    #[serde(default)]
    pub units: Vec<ReluUnit>,
}

impl ReluNetwork {
    pub fn evaluate(&self, x: &Rational) -> Rational {
        self.units
            .iter()
            .fold(&self.base_slope * x + &self.base_bias, |acc, u| {
                acc + u.evaluate(x)
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConversionReport {
    pub integer_slopes: bool,
    pub admissible: bool,
    /// Degree-3 admissibility; absent when some slope is not an integer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub admissibility: Option<Admissibility>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NetworkConversion {
    /// The piecewise-linear function with possibly non-integer slopes.
    pub function: MapRecord,
    /// Present when every slope is an integer.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<TropicalMap>,
    pub report: ConversionReport,
}

/// Net slope change at each distinct threshold, zero sums kept.
fn threshold_jumps(net: &ReluNetwork) -> BTreeMap<Rational, Rational> {
    let mut jumps: BTreeMap<Rational, Rational> = BTreeMap::new();
    for u in &net.units {
        if let Some(t) = u.threshold() {
            *jumps.entry(t).or_insert_with(|| int(0)) += &u.a * u.w.abs();
        }
    }
    jumps
}

pub fn network_to_map(net: &ReluNetwork) -> NetworkConversion {
    let left = net
        .units
        .iter()
        .filter(|u| u.w.is_negative())
        .fold(net.base_slope.clone(), |acc, u| acc + &u.a * &u.w);
    let mut breaks = Vec::new();
    let mut slopes = vec![left];
    for (t, j) in threshold_jumps(net) {
        if j.is_zero() {
            continue;
        }
        let next = slopes.last().expect("nonempty") + j;
        breaks.push(t);
        slopes.push(next);
    }
    let at = breaks.first().cloned().unwrap_or_else(|| int(0));
    let anchor = net.evaluate(&at);
    let function = MapRecord {
        breaks: breaks.clone(),
        slopes: slopes.clone(),
        anchor: anchor.clone(),
    };

    let int_slopes: Option<Vec<i64>> = slopes.iter().map(to_i64).collect();
    let (map, report) = match int_slopes {
        Some(s) => {
            let adm = slope_admissibility(&s, DEGREE);
            let map = TropicalMap::new(breaks, s, anchor).expect("merged thresholds are valid");
            (
                Some(map),
                ConversionReport {
                    integer_slopes: true,
                    admissible: adm.admissible,
                    admissibility: Some(adm),
                },
            )
        }
        None => (
            None,
            ConversionReport {
                integer_slopes: false,
                admissible: false,
                admissibility: None,
            },
        ),
    };
    NetworkConversion {
        function,
        map,
        report,
    }
}

/// Value of a rational-slope piecewise-linear function.
pub fn evaluate_function(f: &MapRecord, x: &Rational) -> Rational {
    let Some(x1) = f.breaks.first() else {
        return &f.anchor + &f.slopes[0] * x;
    };
    if x <= x1 {
        return &f.anchor + &f.slopes[0] * (x - x1);
    }
    let mut value = f.anchor.clone();
    for (i, w) in f.breaks.windows(2).enumerate() {
        let s = &f.slopes[i + 1];
        if x <= &w[1] {
            return value + s * (x - &w[0]);
        }
        value += s * (&w[1] - &w[0]);
    }
    let last = f.breaks.last().expect("nonempty");
    value + f.slopes.last().expect("nonempty") * (x - last)
}

/// The canonical network: every hidden weight is `+1` and there is one unit
/// per break point.
pub fn map_to_network(map: &TropicalMap) -> ReluNetwork {
    let s0 = int(map.slopes()[0]);
    let base_bias = match map.breaks().first() {
        Some(x1) => map.anchor() - &s0 * x1,
        None => map.anchor().clone(),
    };
    let units = map
        .breaks()
        .iter()
        .zip(map.jumps())
        .map(|(x, d)| ReluUnit::new(int(1), -x, int(d)))
        .collect();
    ReluNetwork {
        base_slope: s0,
        base_bias,
        units,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeadReason {
    ZeroOutput,
    ZeroWeight,
    /// The unit's threshold is shared with units whose jumps sum to zero.
    Cancelled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeadUnit {
    pub index: usize,
    pub reason: DeadReason,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GapCondition {
    #[serde(with = "serde_rational")]
    pub first: Rational,
    #[serde(with = "serde_rational")]
    pub last: Rational,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub dead_units: Vec<DeadUnit>,
    pub live_units: usize,
    pub report: ConversionReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<TropicalMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub canonical_slopes: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub aut: Option<AutGroup>,
    /// `ℓ₁ = ℓ₃` for palindromic four-break types.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gap_condition: Option<GapCondition>,
}

pub fn symmetry_report(net: &ReluNetwork) -> SymmetryReport {
    let jumps = threshold_jumps(net);
    let mut dead_units = Vec::new();
    for (index, u) in net.units.iter().enumerate() {
        let reason = if u.a.is_zero() {
            Some(DeadReason::ZeroOutput)
        } else if u.w.is_zero() {
            Some(DeadReason::ZeroWeight)
        } else if u.threshold().is_some_and(|t| jumps[&t].is_zero()) {
            Some(DeadReason::Cancelled)
        } else {
            None
        };
        if let Some(reason) = reason {
            dead_units.push(DeadUnit { index, reason });
        }
    }

    let conv = network_to_map(net);
    let mut out = SymmetryReport {
        live_units: net.units.len() - dead_units.len(),
        dead_units,
        report: conv.report.clone(),
        map: conv.map.clone(),
        label: None,
        canonical_slopes: None,
        aut: None,
        gap_condition: None,
    };
    let Some(map) = conv.map.filter(|_| conv.report.admissible) else {
        return out;
    };
    let seq = SlopeSequence::new(DEGREE, map.slopes().to_vec()).expect("admissible");
    let ty = canonical_type(&seq);
    out.label = ty.label;
    out.canonical_slopes = Some(ty.canonical.slopes().to_vec());
    out.aut = map_automorphisms(&map).ok();
    if seq.k() == 4 && seq.is_palindromic() {
        let p = moduli_point(&map).expect("admissible");
        let first = p.gaps()[0].clone();
        let last = p.gaps()[2].clone();
        out.gap_condition = Some(GapCondition {
            holds: first == last,
            first,
            last,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moduli::AutKind;
    use crate::pl::maps_equal;
    use crate::rational::frac;

    fn unit(w: i64, b: i64, a: i64) -> ReluUnit {
        ReluUnit::new(int(w), int(b), int(a))
    }

    fn net(w0: i64, units: Vec<ReluUnit>) -> ReluNetwork {
        ReluNetwork {
            base_slope: int(w0),
            base_bias: int(0),
            units,
        }
    }

    fn m_star() -> TropicalMap {
        TropicalMap::new(
            vec![int(0), int(1), int(3), int(4)],
            vec![3, 4, 5, 4, 3],
            int(0),
        )
        .unwrap()
    }

    fn m_star_net() -> ReluNetwork {
        net(
            3,
            vec![
                unit(1, 0, 1),
                unit(1, -1, 1),
                unit(1, -3, -1),
                unit(1, -4, -1),
            ],
        )
    }

    #[test]
    fn worked_network_gives_worked_map() {
        let c = network_to_map(&m_star_net());
        assert!(c.report.admissible);
        let m = c.map.unwrap();
        assert!(maps_equal(&m, &m_star()));
        assert_eq!(map_to_network(&m_star()), m_star_net());
    }

    #[test]
    fn coincident_thresholds_merge() {
        let c = network_to_map(&net(3, vec![unit(1, 0, 1), unit(1, 0, 1)]));
        let m = c.map.unwrap();
        assert_eq!(m.breaks(), &[int(0)]);
        assert_eq!(m.slopes(), &[3, 5]);
        assert!(!c.report.admissible);
        let failures = &c.report.admissibility.unwrap().failures;
        assert!(failures
            .iter()
            .any(|f| matches!(f, crate::pl::AdmissibilityFailure::EndSlopes { .. })));
    }

    #[test]
    fn cancelling_units_vanish() {
        let n = net(3, vec![unit(1, 0, 1), unit(1, 0, -1)]);
        let c = network_to_map(&n);
        let m = c.map.unwrap();
        assert_eq!(m.k(), 0);
        assert_eq!(m.slopes(), &[3]);
        let adm = c.report.admissibility.unwrap();
        assert!(adm.failures.iter().any(|f| matches!(
            f,
            crate::pl::AdmissibilityFailure::TotalVariation {
                total: 0,
                expected: 4
            }
        )));
        let r = symmetry_report(&n);
        assert_eq!(r.dead_units.len(), 2);
        assert!(r
            .dead_units
            .iter()
            .all(|d| d.reason == DeadReason::Cancelled));
    }

    #[test]
    fn negative_weights_fold() {
        // max(0, −x + 1) has slope −1 left of 1, so left slope is 3 − 1
        let n = net(3, vec![unit(-1, 1, 1)]);
        let c = network_to_map(&n);
        let m = c.map.unwrap();
        assert_eq!(m.breaks(), &[int(1)]);
        assert_eq!(m.slopes(), &[2, 3]);
        for x in [int(-3), int(0), int(1), frac(5, 2)] {
            assert_eq!(m.evaluate(&x), n.evaluate(&x));
        }
    }

    #[test]
    fn zero_weight_units_are_constants() {
        let mut n = m_star_net();
        n.units.push(unit(0, 5, 2));
        n.units.push(unit(0, -5, 2));
        let m = network_to_map(&n).map.unwrap();
        assert_eq!(m.slopes(), m_star().slopes());
        assert_eq!(m.anchor(), &int(10));
        let r = symmetry_report(&n);
        assert_eq!(
            r.dead_units,
            vec![
                DeadUnit {
                    index: 4,
                    reason: DeadReason::ZeroWeight
                },
                DeadUnit {
                    index: 5,
                    reason: DeadReason::ZeroWeight
                },
            ]
        );
    }

    #[test]
    fn fractional_slopes_reported() {
        let n = ReluNetwork {
            base_slope: frac(5, 2),
            base_bias: int(0),
            units: vec![unit(1, 0, 1)],
        };
        let c = network_to_map(&n);
        assert!(c.map.is_none());
        assert!(!c.report.integer_slopes);
        assert_eq!(c.function.slopes, vec![frac(5, 2), frac(7, 2)]);
        for x in [int(-2), int(0), int(3)] {
            assert_eq!(evaluate_function(&c.function, &x), n.evaluate(&x));
        }
    }

    #[test]
    fn symmetry_of_worked_network() {
        let r = symmetry_report(&m_star_net());
        assert_eq!(r.label, Some(Label::I));
        assert_eq!(r.aut.as_ref().map(AutGroup::kind), Some(AutKind::Z2));
        let g = r.gap_condition.unwrap();
        assert!(g.holds);
        assert_eq!((g.first, g.last), (int(1), int(1)));
        assert!(r.dead_units.is_empty());
    }

    #[test]
    fn moved_threshold_breaks_symmetry() {
        let mut n = m_star_net();
        n.units[3] = unit(1, -6, -1);
        let r = symmetry_report(&n);
        assert_eq!(r.label, Some(Label::I));
        assert_eq!(r.aut.as_ref().map(AutGroup::kind), Some(AutKind::Trivial));
        let g = r.gap_condition.unwrap();
        assert!(!g.holds);
        assert_eq!((g.first, g.last), (int(1), int(3)));
    }

    #[test]
    fn dead_output_unit() {
        let mut n = m_star_net();
        n.units.insert(1, unit(1, 7, 0));
        let r = symmetry_report(&n);
        assert_eq!(
            r.dead_units,
            vec![DeadUnit {
                index: 1,
                reason: DeadReason::ZeroOutput
            }]
        );
        assert_eq!(r.live_units, 4);
        assert_eq!(r.label, Some(Label::I));
    }

    #[test]
    fn linear_map_round_trip() {
        let m = TropicalMap::linear(3, int(0));
        let n = map_to_network(&m);
        assert_eq!(n, net(3, vec![]));
        assert!(maps_equal(&network_to_map(&n).map.unwrap(), &m));
    }

    #[test]
    fn json_shape() {
        let text = r#"{"base_slope":"3","base_bias":"0","units":[{"w":"1","b":"0","a":"1"}]}"#;
        let n: ReluNetwork = serde_json::from_str(text).unwrap();
        assert_eq!(serde_json::to_string(&n).unwrap(), text);
    }
}
