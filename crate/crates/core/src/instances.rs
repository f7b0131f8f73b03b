//! Seeded instance factory.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::criteria::OperatorSystem;
use crate::error::{PadicError, Result};
use crate::linalg::PadicMatrix;
use crate::scalar::{Backend, Prime};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InstanceKind {
    /// Entries `n/m` with `|n| <= 9` and `1 <= m <= 9` prime to `p`, so every
    /// entry lies in `Z_p` and the characteristic polynomial is integral.
    RandomBounded { dim: usize, prime: Prime, seed: u64 },
    /// Zero except for the given superdiagonal; nilpotent of order `dim`.
    StaircaseShift { dim: usize, prime: Prime, superdiagonal: Vec<BigRational> },
    /// One Jordan block `eigen * I + N`.
    Jordan { dim: usize, prime: Prime, eigen: BigRational },
    Diagonal { prime: Prime, entries: Vec<BigRational> },
}

impl InstanceKind {
    pub fn name(&self) -> &'static str {
        match self {
            InstanceKind::RandomBounded { .. } => "random-bounded",
            InstanceKind::StaircaseShift { .. } => "staircase-shift",
            InstanceKind::Jordan { .. } => "jordan",
            InstanceKind::Diagonal { .. } => "diagonal",
        }
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 {
        return Err(PadicError::InvalidInput("instance dimension must be positive".into()));
    }
    Ok(())
}

fn zeros(d: usize) -> Vec<Vec<BigRational>> {
    vec![vec![BigRational::zero(); d]; d]
}

/// The matrix of an instance, on the exact backend.
pub fn generate_matrix(kind: &InstanceKind) -> Result<PadicMatrix> {
    let (rows, prime) = match kind {
        InstanceKind::RandomBounded { dim, prime, seed } => {
            check_dim(*dim)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let p = i64::from(prime.get());
            let rows = (0..*dim)
                .map(|_| {
                    (0..*dim)
                        .map(|_| {
                            let num: i64 = rng.gen_range(-9..=9);
                            let den = loop {
                                let m: i64 = rng.gen_range(1..=9);
                                if m.gcd(&p) == 1 {
                                    break m;
                                }
                            };
                            BigRational::new(num.into(), den.into())
                        })
                        .collect()
                })
                .collect();
            (rows, *prime)
        }
        InstanceKind::StaircaseShift { dim, prime, superdiagonal } => {
            check_dim(*dim)?;
            if superdiagonal.len() + 1 != *dim {
                return Err(PadicError::InvalidInput(format!(
                    "a {dim}x{dim} staircase shift needs {} superdiagonal entries, got {}",
                    dim - 1,
                    superdiagonal.len()
                )));
            }
            let mut rows = zeros(*dim);
            for (i, c) in superdiagonal.iter().enumerate() {
                rows[i][i + 1] = c.clone();
            }
            (rows, *prime)
        }
        InstanceKind::Jordan { dim, prime, eigen } => {
            check_dim(*dim)?;
            let mut rows = zeros(*dim);
            for i in 0..*dim {
                rows[i][i] = eigen.clone();
                if i + 1 < *dim {
                    rows[i][i + 1] = BigRational::one();
                }
            }
            (rows, *prime)
        }
        InstanceKind::Diagonal { prime, entries } => {
            check_dim(entries.len())?;
            let mut rows = zeros(entries.len());
            for (i, e) in entries.iter().enumerate() {
                rows[i][i] = e.clone();
            }
            (rows, *prime)
        }
    };
    PadicMatrix::from_rationals(&rows, prime, Backend::Exact)
}

/// The instance as a system with `ω = 1`, the sup norm, and
/// `r = min(0, certified radius)`.
pub fn generate_instance(kind: &InstanceKind, k_max: usize) -> Result<OperatorSystem> {
    OperatorSystem::with_defaults(generate_matrix(kind)?, k_max)
}

/// `p^e` as a rational.
pub fn prime_power_ratio(prime: Prime, e: i64) -> BigRational {
    let pe = BigInt::from(prime.get()).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(pe)
    } else {
        BigRational::new(BigInt::one(), pe)
    }
}
