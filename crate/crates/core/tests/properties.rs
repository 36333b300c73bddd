use proptest::prelude::*;

use tropmap_core::hurwitz::{combined_reflection, quotient_source};
use tropmap_core::moduli::{automorphisms, moduli_point, representative_map};
use tropmap_core::pl::maps_equal;
use tropmap_core::rational::{frac, int};
use tropmap_core::relu::{map_to_network, network_to_map, ReluNetwork, ReluUnit};
use tropmap_core::types::canonical_type;
use tropmap_core::{Label, ModuliPoint, Rational, Sign, TropicalMap};

fn rational() -> impl Strategy<Value = Rational> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| frac(n, d))
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=12).prop_map(|(n, d)| frac(n, d))
}

fn label() -> impl Strategy<Value = Label> {
    prop::sample::select(Label::ALL.to_vec())
}

fn point() -> impl Strategy<Value = ModuliPoint> {
    (
        label(),
        any::<bool>(),
        prop::collection::vec(positive(), 4),
        rational(),
    )
        .prop_map(|(l, flip, gaps, pos)| {
            let seq = if flip {
                l.sequence().reversed()
            } else {
                l.sequence()
            };
            let gaps = gaps[..seq.k() - 1].to_vec();
            ModuliPoint::new(seq, gaps, pos).unwrap()
        })
}

fn map_with_anchor() -> impl Strategy<Value = TropicalMap> {
    (point(), rational())
        .prop_map(|(p, a)| representative_map(&p).apply_target_automorphism(Sign::Plus, &a))
}

/// Arbitrary valid map: distinct breaks and nonzero integer jumps.
fn any_map() -> impl Strategy<Value = TropicalMap> {
    (
        prop::collection::btree_set(rational(), 0..6),
        -5i64..=5,
        prop::collection::vec(prop_oneof![-4i64..=-1, 1i64..=4], 6),
        rational(),
    )
        .prop_map(|(breaks, s0, jumps, anchor)| {
            let breaks: Vec<Rational> = breaks.into_iter().collect();
            let mut slopes = vec![s0];
            for j in &jumps[..breaks.len()] {
                slopes.push(slopes.last().unwrap() + j);
            }
            TropicalMap::new(breaks, slopes, anchor).unwrap()
        })
}

proptest! {
    #[test]
    fn segment_slopes_match_differences(m in any_map()) {
        let bv = m.break_values();
        for (i, w) in m.breaks().windows(2).enumerate() {
            let slope = (&bv[i + 1] - &bv[i]) / (&w[1] - &w[0]);
            prop_assert_eq!(slope, int(m.slopes()[i + 1]));
        }
    }

    #[test]
    fn continuous_at_breaks(m in any_map(), eps in positive()) {
        let eps = eps / int(1000);
        for (i, b) in m.breaks().iter().enumerate() {
            let left = m.evaluate(&(b - &eps));
            let right = m.evaluate(&(b + &eps));
            prop_assert_eq!(&m.evaluate(b) - left, int(m.slopes()[i]) * &eps);
            prop_assert_eq!(right - m.evaluate(b), int(m.slopes()[i + 1]) * &eps);
        }
    }

    #[test]
    fn ramification_invariant_under_automorphisms(
        m in any_map(), s in any::<bool>(), t in any::<bool>(), a in rational(), b in rational()
    ) {
        let sign = |f: bool| if f { Sign::Plus } else { Sign::Minus };
        let moved = m.apply_source_automorphism(sign(s), &a).apply_target_automorphism(sign(t), &b);
        let mut w = m.ramification().weights;
        let mut v = moved.ramification().weights;
        w.sort();
        v.sort();
        prop_assert_eq!(w, v);
        prop_assert_eq!(m.ramification().total, moved.ramification().total);
    }

    #[test]
    fn source_reflection_is_involution(m in any_map(), c in rational()) {
        let twice = m
            .apply_source_automorphism(Sign::Minus, &c)
            .apply_source_automorphism(Sign::Minus, &c);
        prop_assert!(maps_equal(&twice, &m));
        for x in m.probe_points() {
            let once = m.apply_source_automorphism(Sign::Minus, &c);
            prop_assert_eq!(once.evaluate(&(&c - &x)), m.evaluate(&x));
        }
    }

    #[test]
    fn canonical_type_is_stable(l in label(), flip in any::<bool>()) {
        let seq = if flip { l.sequence().reversed() } else { l.sequence() };
        let t = canonical_type(&seq);
        prop_assert_eq!(&canonical_type(&t.canonical), &t);
        prop_assert_eq!(&canonical_type(&seq.reversed()), &t);
        prop_assert_eq!(t.label, Some(l));
    }

    #[test]
    fn moduli_round_trip(m in map_with_anchor()) {
        let p = moduli_point(&m).unwrap();
        let back = representative_map(&p);
        prop_assert_eq!(back.breaks(), m.breaks());
        prop_assert_eq!(back.slopes(), m.slopes());
        let shift = m.anchor() - back.anchor();
        prop_assert!(maps_equal(&back.apply_target_automorphism(Sign::Plus, &shift), &m));
    }

    #[test]
    fn quotient_is_idempotent_and_reflection_invariant(p in point()) {
        let q = quotient_source(&p);
        let again = ModuliPoint::new(q.canonical_seq.clone(), q.gaps.clone(), int(0)).unwrap();
        let q2 = quotient_source(&again);
        prop_assert_eq!(&q2.canonical_seq, &q.canonical_seq);
        prop_assert_eq!(&q2.gaps, &q.gaps);
        prop_assert!(!q2.reversed);

        let twin = moduli_point(&combined_reflection(&representative_map(&p))).unwrap();
        let qt = quotient_source(&twin);
        prop_assert_eq!(qt.canonical_seq, q.canonical_seq);
        prop_assert_eq!(qt.gaps, q.gaps);
    }

    #[test]
    fn automorphism_exists_iff_reflection_found(p in point()) {
        let aut = automorphisms(&p);
        let m = representative_map(&p);
        prop_assert!(aut.holds_for(&m));
        let palindromic = p.seq().is_palindromic()
            && p.gaps().iter().eq(p.gaps().iter().rev());
        prop_assert_eq!(aut.order() == 2, palindromic);
    }

    #[test]
    fn relu_round_trip_and_evaluation(m in map_with_anchor()) {
        let net = map_to_network(&m);
        let back = network_to_map(&net).map.unwrap();
        prop_assert!(maps_equal(&back, &m));
        for x in m.probe_points() {
            prop_assert_eq!(net.evaluate(&x), m.evaluate(&x));
        }
    }

    #[test]
    fn threshold_merging_ignores_unit_order(
        units in prop::collection::vec((prop_oneof![-3i64..=-1, 1i64..=3], -6i64..=6, -2i64..=2), 0..8),
        perm in any::<prop::sample::Index>(),
        w0 in -3i64..=3,
    ) {
        let units: Vec<ReluUnit> = units
            .into_iter()
            .map(|(w, b, a)| ReluUnit::new(int(w), int(b), int(a)))
            .collect();
        let net = ReluNetwork { base_slope: int(w0), base_bias: int(1), units: units.clone() };
        let mut shuffled = units;
        if !shuffled.is_empty() {
            let k = perm.index(shuffled.len());
            shuffled.rotate_left(k);
            shuffled.reverse();
        }
        let other = ReluNetwork { units: shuffled, ..net.clone() };
        let a = network_to_map(&net);
        let b = network_to_map(&other);
        prop_assert_eq!(&a, &b);
        let m = a.map.unwrap();
        for x in m.probe_points() {
            prop_assert_eq!(m.evaluate(&x), net.evaluate(&x));
        }
    }
}
