use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;

use crate::error::{PadicError, Result};
use crate::scalar::{Backend, Exponent, PadicScalar, Prime};

/// Dense square matrix over `Q_p`; every entry shares one prime and backend.
///
/// The operator norm for the sup norm on `Q_p^d` is the largest entry
/// absolute value, so norms are exact integer exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicMatrix {
    dim: usize,
    prime: Prime,
    backend: Backend,
    entries: Vec<PadicScalar>,
}

impl PadicMatrix {
    pub fn from_entries(dim: usize, prime: Prime, backend: Backend, entries: Vec<PadicScalar>) -> Result<Self> {
        if dim == 0 {
            return Err(PadicError::InvalidInput("matrix dimension must be positive".into()));
        }
        if entries.len() != dim * dim {
            return Err(PadicError::InvalidInput(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|e| e.prime() != prime || e.backend() != backend) {
            return Err(PadicError::InvalidInput(format!(
                "entry {bad} does not share prime {prime} and backend {backend:?}"
            )));
        }
        Ok(PadicMatrix { dim, prime, backend, entries })
    }

    /// Builds from rows of rationals; rows must form a square.
    pub fn from_rationals(rows: &[Vec<BigRational>], prime: Prime, backend: Backend) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(PadicError::InvalidInput("matrix rows must form a square".into()));
        }
        let entries = rows
            .iter()
            .flatten()
            .map(|q| PadicScalar::from_ratio(q, prime, backend))
            .collect();
        Self::from_entries(dim, prime, backend, entries)
    }

    pub fn from_ints(rows: &[&[i64]], prime: Prime, backend: Backend) -> Result<Self> {
        let rows: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
            .collect();
        Self::from_rationals(&rows, prime, backend)
    }

    pub fn from_fn(dim: usize, prime: Prime, backend: Backend, f: impl Fn(usize, usize) -> PadicScalar) -> Self {
        let entries = (0..dim * dim).map(|k| f(k / dim, k % dim)).collect();
        PadicMatrix { dim, prime, backend, entries }
    }

    pub fn zero(dim: usize, prime: Prime, backend: Backend) -> Self {
        let z = PadicScalar::zero(prime, backend);
        Self::from_fn(dim, prime, backend, |_, _| z.clone())
    }

    pub fn identity(dim: usize, prime: Prime, backend: Backend) -> Self {
        Self::scalar(dim, &PadicScalar::one(prime, backend))
    }

    /// `c * I`.
    pub fn scalar(dim: usize, c: &PadicScalar) -> Self {
        let z = PadicScalar::zero(c.prime(), c.backend());
        Self::from_fn(dim, c.prime(), c.backend(), |i, j| if i == j { c.clone() } else { z.clone() })
    }

    pub fn diagonal(diag: &[PadicScalar]) -> Result<Self> {
        let first = diag
            .first()
            .ok_or_else(|| PadicError::InvalidInput("empty diagonal".into()))?;
        let (prime, backend) = (first.prime(), first.backend());
        let z = PadicScalar::zero(prime, backend);
        let entries = (0..diag.len() * diag.len())
            .map(|k| {
                let (i, j) = (k / diag.len(), k % diag.len());
                if i == j { diag[i].clone() } else { z.clone() }
            })
            .collect();
        Self::from_entries(diag.len(), prime, backend, entries)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn prime(&self) -> Prime {
        self.prime
    }

    pub fn backend(&self) -> Backend {
        self.backend
    }

    pub fn get(&self, i: usize, j: usize) -> &PadicScalar {
        &self.entries[i * self.dim + j]
    }

    pub fn entries(&self) -> &[PadicScalar] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[PadicScalar]> {
        self.entries.chunks(self.dim)
    }

    pub fn column(&self, j: usize) -> Vec<PadicScalar> {
        (0..self.dim).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rationals(&self) -> Vec<Vec<BigRational>> {
        self.rows().map(|r| r.iter().map(PadicScalar::to_rational).collect()).collect()
    }

    /// Re-encodes every entry under `backend` (capped entries lift through
    /// their rational representative).
    pub fn to_backend(&self, backend: Backend) -> Self {
        PadicMatrix {
            dim: self.dim,
            prime: self.prime,
            backend,
            entries: self.entries.iter().map(|e| e.to_backend(backend)).collect(),
        }
    }

    pub fn lift(&self) -> Self {
        self.to_backend(Backend::Exact)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(PadicScalar::is_zero)
    }

    pub fn is_exact_zero(&self) -> bool {
        self.entries.iter().all(PadicScalar::is_exact_zero)
    }

    /// `e` with `‖A‖ = p^e` for the sup norm; `None` for the zero matrix.
    pub fn norm_exponent(&self) -> Exponent {
        self.entries.iter().map(PadicScalar::abs_exponent).max().flatten()
    }

    /// Certified bound on the norm, counting zero-to-precision entries at
    /// their precision.
    pub fn norm_bound_exponent(&self) -> Exponent {
        self.entries.iter().map(PadicScalar::bound_exponent).max().flatten()
    }

    /// `max_i (w_i + |T_ij|)` for every column `j`; `w_i = None` drops a row.
    pub fn column_exponents(&self, row_weights: &[Exponent]) -> Vec<Exponent> {
        (0..self.dim)
            .map(|j| {
                (0..self.dim)
                    .filter_map(|i| row_weights[i].map(|w| self.get(i, j).abs_exponent().map(|a| a + w)))
                    .max()
                    .flatten()
            })
            .collect()
    }

    pub fn apply(&self, x: &[PadicScalar]) -> Vec<PadicScalar> {
        assert_eq!(x.len(), self.dim, "vector length must match the matrix dimension");
        self.rows()
            .map(|row| {
                row.iter()
                    .zip(x)
                    .fold(PadicScalar::zero(self.prime, self.backend), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        self.map(|e| e * c)
    }

    /// Entrywise [`PadicScalar::with_absolute_precision`]: folds an external
    /// error bound `p^-abs` into the entries' own precision.
    pub fn with_absolute_precision(&self, abs: i64) -> Self {
        self.map(|e| e.with_absolute_precision(abs))
    }

    pub(crate) fn map(&self, f: impl Fn(&PadicScalar) -> PadicScalar) -> Self {
        PadicMatrix {
            dim: self.dim,
            prime: self.prime,
            backend: self.backend,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    fn zip(&self, other: &Self, f: impl Fn(&PadicScalar, &PadicScalar) -> PadicScalar) -> Self {
        self.assert_compatible(other);
        PadicMatrix {
            dim: self.dim,
            prime: self.prime,
            backend: self.backend,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn assert_compatible(&self, other: &Self) {
        assert!(
            self.dim == other.dim && self.prime == other.prime && self.backend == other.backend,
            "incompatible matrices: {}x{} over Q_{} ({:?}) vs {}x{} over Q_{} ({:?})",
            self.dim,
            self.dim,
            self.prime,
            self.backend,
            other.dim,
            other.dim,
            other.prime,
            other.backend
        );
    }

    pub fn matmul(&self, other: &Self) -> Self {
        self.assert_compatible(other);
        let d = self.dim;
        let zero = PadicScalar::zero(self.prime, self.backend);
        let entries = (0..d * d)
            .map(|k| {
                let (i, j) = (k / d, k % d);
                (0..d).fold(zero.clone(), |acc, t| &acc + &(self.get(i, t) * other.get(t, j)))
            })
            .collect();
        PadicMatrix { dim: d, prime: self.prime, backend: self.backend, entries }
    }

    /// `A^n` by repeated squaring; `A^0 = I`.
    pub fn pow(&self, n: u64) -> Self {
        let mut acc = Self::identity(self.dim, self.prime, self.backend);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.matmul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.matmul(&base);
            }
        }
        acc
    }

    /// Inverse by Gauss-Jordan elimination, pivoting on the entry of largest
    /// absolute value in each column.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.dim;
        let mut a = self.clone();
        let mut inv = Self::identity(d, self.prime, self.backend);
        for col in 0..d {
            let pivot_row = (col..d)
                .filter(|&r| !a.get(r, col).is_zero())
                .max_by(|&r, &s| {
                    a.get(r, col)
                        .abs_exponent()
                        .cmp(&a.get(s, col).abs_exponent())
                        .then(s.cmp(&r))
                })
                .ok_or_else(|| PadicError::Singular(format!("no nonzero pivot in column {col}")))?;
            a.swap_rows(col, pivot_row);
            inv.swap_rows(col, pivot_row);
            let pinv = a.get(col, col).inv()?;
            a.scale_row(col, &pinv);
            inv.scale_row(col, &pinv);
            for r in 0..d {
                if r != col && !a.get(r, col).is_exact_zero() {
                    let f = a.get(r, col).clone();
                    a.sub_row_multiple(r, col, &f);
                    inv.sub_row_multiple(r, col, &f);
                }
            }
        }
        Ok(inv)
    }

    fn swap_rows(&mut self, r: usize, s: usize) {
        if r != s {
            for j in 0..self.dim {
                self.entries.swap(r * self.dim + j, s * self.dim + j);
            }
        }
    }

    fn scale_row(&mut self, r: usize, c: &PadicScalar) {
        for j in 0..self.dim {
            let k = r * self.dim + j;
            self.entries[k] = &self.entries[k] * c;
        }
    }

    /// row r -= f * row s
    fn sub_row_multiple(&mut self, r: usize, s: usize, f: &PadicScalar) {
        for j in 0..self.dim {
            let delta = f * &self.entries[s * self.dim + j];
            let k = r * self.dim + j;
            self.entries[k] = &self.entries[k] - &delta;
        }
    }
}

impl fmt::Display for PadicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

impl Add for &PadicMatrix {
    type Output = PadicMatrix;
    fn add(self, rhs: &PadicMatrix) -> PadicMatrix {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub for &PadicMatrix {
    type Output = PadicMatrix;
    fn sub(self, rhs: &PadicMatrix) -> PadicMatrix {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul for &PadicMatrix {
    type Output = PadicMatrix;
    fn mul(self, rhs: &PadicMatrix) -> PadicMatrix {
        self.matmul(rhs)
    }
}

impl Neg for &PadicMatrix {
    type Output = PadicMatrix;
    fn neg(self) -> PadicMatrix {
        self.map(|e| -e)
    }
}
