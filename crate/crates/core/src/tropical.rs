//! Univariate max-plus polynomials and the tropicalization of rational
//! functions given by coefficient valuations.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pl::TropicalMap;
use crate::rational::{int, Extended, Rational};

/// `max_i (a_i + i·x)` with coefficients in `Q ∪ {−∞}` indexed by exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TropicalPolynomial {
    coefficients: Vec<Option<Rational>>,
}

impl TropicalPolynomial {
    /// `None` entries are the bottom element `−∞`. The top coefficient must
    /// be finite.
    pub fn new(coefficients: Vec<Option<Rational>>) -> Result<Self> {
        match coefficients.last() {
            Some(Some(_)) => Ok(TropicalPolynomial { coefficients }),
            _ => Err(Error::BottomPolynomial),
        }
    }

    pub fn from_extended(coefficients: Vec<Extended>) -> Result<Self> {
        let mut out = Vec::with_capacity(coefficients.len());
        for c in coefficients {
            match c {
                Extended::NegInf => out.push(None),
                Extended::Finite(r) => out.push(Some(r)),
                Extended::PosInf => return Err(Error::Rational("inf".into())),
            }
        }
        Self::new(out)
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[Option<Rational>] {
        &self.coefficients
    }

    fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> {
        self.coefficients
            .iter()
            .enumerate()
            .filter_map(|(i, c)| c.as_ref().map(|a| (i as i64, a)))
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        self.terms()
            .map(|(i, a)| a + int(i) * x)
            .max()
            .expect("top coefficient is finite")
    }

    /// The polynomial as a function: the upper envelope of its monomials.
    /// Monomials that are never strictly maximal do not contribute a slope.
    pub fn envelope(&self) -> TropicalMap {
        // upper convex hull of the points (i, a_i); collinear points dropped
        let mut hull: Vec<(i64, &Rational)> = Vec::new();
        for (i, a) in self.terms() {
            while hull.len() >= 2 {
                let (i1, a1) = hull[hull.len() - 2];
                let (i2, a2) = hull[hull.len() - 1];
                // pop (i2,a2) unless it lies strictly above the chord
                let lhs = (a2 - a1) * int(i - i1);
                let rhs = (a - a1) * int(i2 - i1);
                if lhs <= rhs {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push((i, a));
        }

        let slopes: Vec<i64> = hull.iter().map(|&(i, _)| i).collect();
        let breaks: Vec<Rational> = hull
            .windows(2)
            .map(|w| (w[0].1 - w[1].1) / int(w[1].0 - w[0].0))
            .collect();
        let at = breaks.first().cloned().unwrap_or_else(|| int(0));
        let anchor = self.evaluate(&at);
        TropicalMap::new(breaks, slopes, anchor).expect("hull slopes strictly increase")
    }
}

impl fmt::Display for TropicalPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coefficients
            .iter()
            .map(|c| match c {
                Some(r) => Extended::Finite(r.clone()).to_string(),
                None => Extended::NegInf.to_string(),
            })
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl Serialize for TropicalPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coefficients.iter().map(|c| match c {
            Some(r) => Extended::Finite(r.clone()),
            None => Extended::NegInf,
        }))
    }
}

impl<'de> Deserialize<'de> for TropicalPolynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<Extended>::deserialize(d)?;
        TropicalPolynomial::from_extended(raw).map_err(serde::de::Error::custom)
    }
}

/// `trop(p) − trop(q)` as a piecewise-linear map. The result is not checked
/// for admissibility.
pub fn tropicalize_rational(p: &TropicalPolynomial, q: &TropicalPolynomial) -> TropicalMap {
    p.envelope().difference(&q.envelope())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn poly(cs: &[Option<i64>]) -> TropicalPolynomial {
        TropicalPolynomial::new(cs.iter().map(|c| c.map(int)).collect()).unwrap()
    }

    #[test]
    fn evaluation() {
        let p = poly(&[Some(0), Some(0), Some(0), Some(0)]);
        assert_eq!(p.evaluate(&int(-1)), int(0));
        assert_eq!(p.evaluate(&int(2)), int(6));
        let mono = poly(&[None, None, None, Some(0)]);
        for x in [int(-5), frac(1, 3), int(7)] {
            assert_eq!(mono.evaluate(&x), int(3) * &x);
        }
    }

    #[test]
    fn bottom_polynomials_rejected() {
        assert_eq!(
            TropicalPolynomial::new(vec![]),
            Err(Error::BottomPolynomial)
        );
        assert_eq!(
            TropicalPolynomial::new(vec![Some(int(0)), None]),
            Err(Error::BottomPolynomial)
        );
    }

    #[test]
    fn envelope_drops_non_maximal_terms() {
        let p = poly(&[Some(0), Some(-1), Some(-3), Some(0)]);
        let e = p.envelope();
        assert_eq!(e.breaks(), &[int(0)]);
        assert_eq!(e.slopes(), &[0, 3]);

        // all three break points present when every term wins somewhere
        let q = poly(&[Some(0), Some(2), Some(3), Some(3)]);
        let e = q.envelope();
        assert_eq!(e.slopes(), &[0, 1, 2, 3]);
        assert_eq!(e.breaks(), &[int(-2), int(-1), int(0)]);
        for x in e.probe_points() {
            assert_eq!(e.evaluate(&x), q.evaluate(&x));
        }
    }

    #[test]
    fn tropicalizes_examples() {
        let one = poly(&[Some(0)]);
        for p in [
            poly(&[Some(0), Some(0), Some(0), Some(0)]),
            poly(&[Some(0), None, None, Some(0)]),
        ] {
            let m = tropicalize_rational(&p, &one);
            assert_eq!(m.breaks(), &[int(0)]);
            assert_eq!(m.slopes(), &[0, 3]);
            assert_eq!(m.anchor(), &int(0));
        }
        let m = tropicalize_rational(&poly(&[Some(0), Some(0)]), &one);
        assert_eq!(m.breaks(), &[int(0)]);
        assert_eq!(m.slopes(), &[0, 1]);
    }

    #[test]
    fn constant_denominator_shifts() {
        let p = poly(&[Some(1), Some(0), Some(2)]);
        let q = poly(&[Some(5)]);
        let m = tropicalize_rational(&p, &q);
        let e = p.envelope();
        assert_eq!(m.breaks(), e.breaks());
        assert_eq!(m.slopes(), e.slopes());
        assert_eq!(m.anchor(), &(e.anchor() - int(5)));
    }

    #[test]
    fn cancelling_corners_are_merged() {
        // same corner at 0 in numerator and denominator: jumps cancel
        let p = poly(&[Some(0), Some(0)]);
        let m = tropicalize_rational(&p, &p);
        assert_eq!(m.k(), 0);
        assert_eq!(m.slopes(), &[0]);
        assert_eq!(m.anchor(), &int(0));
    }

    #[test]
    fn serde_uses_inf_tokens() {
        let p: TropicalPolynomial = serde_json::from_str(r#"["0","-inf",-1,"1/2"]"#).unwrap();
        assert_eq!(p.coefficients()[1], None);
        assert_eq!(
            serde_json::to_string(&p).unwrap(),
            r#"["0","-inf","-1","1/2"]"#
        );
    }
}
