//! Newton polygons and the power-boundedness oracle.
//!
//! For a monic `f = sum c_i x^i` of degree `d`, the lower convex hull of the
//! points `(i, v_p(c_i))` has one segment per distinct root valuation: a
//! segment of slope `s` and width `w` carries `w` roots of valuation `-s`.
//! All roots lie in the closed unit ball iff every `v_p(c_i) >= 0`, which is
//! the integrality test the oracle uses. Integral characteristic polynomial
//! means `Z_p[A]` is spanned by `I, A, ..., A^(d-1)` over `Z_p`, so the powers
//! of `A` stay bounded.

use num_rational::Ratio;
use num_traits::Zero;

use super::charpoly::{char_poly, CharPoly};
use super::PadicMatrix;
use crate::scalar::{PadicScalar, Prime};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PowerBound {
    Bounded,
    Unbounded,
}

impl PowerBound {
    pub fn as_str(self) -> &'static str {
        match self {
            PowerBound::Bounded => "bounded",
            PowerBound::Unbounded => "unbounded",
        }
    }
}

/// One hull segment: roots of valuation `-slope`, `width` of them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
    pub slope: Ratio<i64>,
}

impl Segment {
    pub fn width(&self) -> usize {
        self.end - self.start
    }

    pub fn root_valuation(&self) -> Ratio<i64> {
        -self.slope
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Roots equal to zero (valuation `+inf`).
    pub zero_roots: usize,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    pub fn new(poly: &CharPoly, prime: Prime) -> Self {
        let points: Vec<(i64, i64)> = poly
            .coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let v = PadicScalar::from_ratio(c, prime, crate::scalar::Backend::Exact)
                    .valuation()
                    .expect("nonzero coefficient");
                (i as i64, v)
            })
            .collect();
        let zero_roots = points.first().map_or(0, |&(i, _)| i as usize);

        // Andrew's monotone chain, lower hull only; points are sorted by x.
        let mut hull: Vec<(i64, i64)> = Vec::new();
        for &pt in &points {
            while hull.len() >= 2 {
                let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
                let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
                if cross <= 0 {
                    hull.pop();
                } else {
                    break;
                }
            }
            hull.push(pt);
        }
        let segments = hull
            .windows(2)
            .map(|w| Segment {
                start: w[0].0 as usize,
                end: w[1].0 as usize,
                slope: Ratio::new(w[1].1 - w[0].1, w[1].0 - w[0].0),
            })
            .collect();
        NewtonPolygon { zero_roots, segments }
    }

    /// Root valuations with multiplicity (finite ones only), ascending.
    pub fn root_valuations(&self) -> Vec<Ratio<i64>> {
        let mut out: Vec<Ratio<i64>> = self
            .segments
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.root_valuation(), s.width()))
            .collect();
        out.sort();
        out
    }

    /// `g` with spectral radius `p^g`: minus the smallest root valuation.
    /// `None` when every root is zero (nilpotent matrix).
    pub fn spectral_growth(&self) -> Option<Ratio<i64>> {
        self.segments.iter().map(|s| s.slope).max()
    }
}

/// Oracle verdict from the characteristic polynomial alone.
pub fn power_bounded_oracle(a: &PadicMatrix) -> PowerBound {
    oracle_from_poly(&char_poly(a), a.prime())
}

pub fn oracle_from_poly(poly: &CharPoly, prime: Prime) -> PowerBound {
    let integral = poly.coeffs().iter().all(|c| {
        PadicScalar::from_ratio(c, prime, crate::scalar::Backend::Exact)
            .valuation()
            .is_none_or(|v| v >= 0)
    });
    if integral {
        PowerBound::Bounded
    } else {
        PowerBound::Unbounded
    }
}

/// Spectral growth exponent of `a` via its Newton polygon.
pub fn spectral_growth(a: &PadicMatrix) -> Option<Ratio<i64>> {
    NewtonPolygon::new(&char_poly(a), a.prime()).spectral_growth()
}
