//! Characteristic polynomials over `Q`.
//!
//! The main route is Berkowitz's algorithm, which uses only ring operations
//! (no divisions at all). Cofactor expansion over `Q[x]` is kept as a second,
//! independent route for small dimensions.

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::PadicMatrix;

/// Coefficients of `det(xI - A)`, lowest degree first; the last one is 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<BigRational>,
}

impl CharPoly {
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Highest degree first, as usually written.
    pub fn descending(&self) -> Vec<BigRational> {
        self.coeffs.iter().rev().cloned().collect()
    }
}

/// Characteristic polynomial of `a` (capped inputs are lifted first).
pub fn char_poly(a: &PadicMatrix) -> CharPoly {
    berkowitz(&a.lift().to_rationals())
}

type Mat = Vec<Vec<BigRational>>;

/// Berkowitz: the coefficient vector is a product of Toeplitz matrices built
/// from the leading principal blocks.
pub fn berkowitz(m: &Mat) -> CharPoly {
    let desc = berkowitz_vector(m);
    CharPoly { coeffs: desc.into_iter().rev().collect() }
}

/// Highest degree first.
fn berkowitz_vector(m: &Mat) -> Vec<BigRational> {
    let n = m.len();
    if n == 0 {
        return vec![BigRational::one()];
    }
    if n == 1 {
        return vec![BigRational::one(), -m[0][0].clone()];
    }
    let a = &m[0][0];
    let r: Vec<BigRational> = m[0][1..].to_vec();
    let c: Vec<BigRational> = m[1..].iter().map(|row| row[0].clone()).collect();
    let sub: Mat = m[1..].iter().map(|row| row[1..].to_vec()).collect();

    // diagonals of the Toeplitz matrix: 1, -a, -R C, -R A C, -R A^2 C, ...
    let mut diags = vec![BigRational::one(), -a.clone()];
    let mut v = c;
    for step in 0..n - 1 {
        let rv = r.iter().zip(&v).fold(BigRational::zero(), |acc, (x, y)| acc + x * y);
        diags.push(-rv);
        if step + 1 < n - 1 {
            v = sub
                .iter()
                .map(|row| row.iter().zip(&v).fold(BigRational::zero(), |acc, (x, y)| acc + x * y))
                .collect();
        }
    }
    let inner = berkowitz_vector(&sub);
    // (n+1) x n lower-triangular Toeplitz times inner (length n)
    (0..=n)
        .map(|i| {
            (0..n)
                .filter(|&j| j <= i)
                .fold(BigRational::zero(), |acc, j| acc + &diags[i - j] * &inner[j])
        })
        .collect()
}

/// Polynomials over `Q`, lowest degree first.
type Poly = Vec<BigRational>;

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn poly_add(a: &Poly, b: &Poly, sign: bool) -> Poly {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
            let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
            if sign { x + y } else { x - y }
        })
        .collect()
}

fn det_laplace(m: &[Vec<Poly>]) -> Poly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc: Poly = vec![BigRational::zero()];
    for (j, cell) in m[0].iter().enumerate() {
        if cell.iter().all(Zero::is_zero) {
            continue;
        }
        let minor: Vec<Vec<Poly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, c)| c.clone()).collect())
            .collect();
        let term = poly_mul(cell, &det_laplace(&minor));
        acc = poly_add(&acc, &term, j % 2 == 0);
    }
    acc
}

/// `det(xI - A)` by cofactor expansion along the first row. Exponential in
/// the dimension; intended as a cross-check for `d <= 6`.
pub fn char_poly_by_minors(m: &Mat) -> CharPoly {
    let n = m.len();
    let cells: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        vec![-m[i][j].clone(), BigRational::one()]
                    } else {
                        vec![-m[i][j].clone()]
                    }
                })
                .collect()
        })
        .collect();
    let mut coeffs = det_laplace(&cells);
    coeffs.resize(n + 1, BigRational::zero());
    CharPoly { coeffs }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Backend, Prime};
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x, 1)).collect()
    }

    #[test]
    fn worked_examples() {
        let p = Prime::new(2).unwrap();
        let jordan = PadicMatrix::from_ints(&[&[1, 1], &[0, 1]], p, Backend::Exact).unwrap();
        assert_eq!(char_poly(&jordan).descending(), ints(&[1, -2, 1]));

        let zero = PadicMatrix::zero(3, p, Backend::Exact);
        assert_eq!(char_poly(&zero).descending(), ints(&[1, 0, 0, 0]));

        let d = vec![vec![q(1, 2), q(0, 1)], vec![q(0, 1), q(1, 1)]];
        assert_eq!(berkowitz(&d).descending(), vec![q(1, 1), q(-3, 2), q(1, 2)]);
    }

    #[test]
    fn capped_inputs_are_lifted() {
        let p = Prime::new(3).unwrap();
        let a = PadicMatrix::from_ints(&[&[2, 1], &[1, 1]], p, Backend::Capped { digits: 20 }).unwrap();
        assert_eq!(char_poly(&a).descending(), ints(&[1, -3, 1]));
    }

    fn small_matrix() -> impl Strategy<Value = Mat> {
        (1usize..=4).prop_flat_map(|d| {
            proptest::collection::vec(proptest::collection::vec((-9i64..=9, 1i64..=6), d), d)
                .prop_map(|rows| rows.into_iter().map(|r| r.into_iter().map(|(n, e)| q(n, e)).collect()).collect())
        })
    }

    proptest! {
        #[test]
        fn berkowitz_matches_minors(m in small_matrix()) {
            prop_assert_eq!(berkowitz(&m), char_poly_by_minors(&m));
        }

        #[test]
        fn trace_and_determinant(m in small_matrix()) {
            let cp = berkowitz(&m);
            let n = m.len();
            let trace = (0..n).fold(BigRational::zero(), |acc, i| acc + &m[i][i]);
            prop_assert_eq!(&cp.coeffs()[n - 1], &(-trace));
            prop_assert_eq!(cp.coeffs()[n].clone(), BigRational::one());
        }
    }
}
