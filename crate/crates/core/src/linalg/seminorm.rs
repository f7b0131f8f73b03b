//! Weighted sup seminorms and the equi-continuity check.
//!
//! A member with weight exponents `e` is `p_e(x) = max_i p^(e_i) |x_i|`; an
//! exponent of `None` gives the coordinate weight zero. For a linear map `T`
//! and members `q`, `r`, the inequality `q(Tx) <= p^s r(x)` holds for every
//! `x` iff it holds on the basis vectors, because both sides are maxima of
//! coordinate terms. That reduces equi-continuity of a finite family to the
//! column exponents `c_j = max_{T, i} (e^q_i + |T_ij|)`.

use crate::error::{PadicError, Result};
use crate::scalar::{Exponent, PadicScalar};

use super::PadicMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SeminormFamily {
    dim: usize,
    members: Vec<Vec<Exponent>>,
}

impl SeminormFamily {
    pub fn new(dim: usize, members: Vec<Vec<Exponent>>) -> Result<Self> {
        if members.is_empty() {
            return Err(PadicError::InvalidInput("seminorm family is empty".into()));
        }
        if let Some((k, m)) = members.iter().enumerate().find(|(_, m)| m.len() != dim) {
            return Err(PadicError::InvalidInput(format!(
                "seminorm {k} has {} weights, expected {dim}",
                m.len()
            )));
        }
        Ok(SeminormFamily { dim, members })
    }

    /// The single sup norm `max_i |x_i|`.
    pub fn sup(dim: usize) -> Self {
        SeminormFamily { dim, members: vec![vec![Some(0); dim]] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn members(&self) -> &[Vec<Exponent>] {
        &self.members
    }

    /// Separates points: every coordinate has a nonzero weight in some member.
    pub fn is_hausdorff(&self) -> bool {
        (0..self.dim).all(|i| self.members.iter().any(|m| m[i].is_some()))
    }

    /// Exponent of `p_member(x)`.
    pub fn eval(&self, member: usize, x: &[PadicScalar]) -> Exponent {
        seminorm_eval(&self.members[member], x)
    }
}

/// `max_i (w_i + |x_i|)` over coordinates with nonzero weight.
pub fn seminorm_eval(weights: &[Exponent], x: &[PadicScalar]) -> Exponent {
    assert_eq!(weights.len(), x.len(), "seminorm dimension mismatch");
    weights
        .iter()
        .zip(x)
        .filter_map(|(w, xi)| w.map(|w| xi.abs_exponent().map(|a| a + w)))
        .max()
        .flatten()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Status {
    Witnessed,
    Refuted,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Witnessed => "witnessed",
            Status::Refuted => "refuted",
        }
    }
}

/// `q(Tx) <= p^scale * p_dominating(x)` for every tested `T` and all `x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub member: usize,
    pub dominating: usize,
    pub scale: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Refutation {
    pub member: usize,
    /// The member needing the smallest scale, if any member can control
    /// every needed column at all.
    pub closest: Option<usize>,
    pub basis_vector: usize,
    pub operator: usize,
    /// Smallest scale any member would need; exceeds the budget.
    pub needed_scale: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EquiContinuityVerdict {
    Witnessed(Vec<Witness>),
    Refuted(Refutation),
}

impl EquiContinuityVerdict {
    pub fn status(&self) -> Status {
        match self {
            EquiContinuityVerdict::Witnessed(_) => Status::Witnessed,
            EquiContinuityVerdict::Refuted(_) => Status::Refuted,
        }
    }
}

pub const DEFAULT_SCALING_BUDGET: i64 = 40;

/// Decides whether `family` is equi-continuous for `seminorms`, allowing a
/// dominating member scaled by `p^s` with `|s| <= budget`.
pub fn equicontinuity_check(
    family: &[PadicMatrix],
    seminorms: &SeminormFamily,
    budget: i64,
) -> Result<EquiContinuityVerdict> {
    if !seminorms.is_hausdorff() {
        return Err(PadicError::InvalidInput(
            "seminorm family does not separate points (not Hausdorff)".into(),
        ));
    }
    if let Some(t) = family.iter().find(|t| t.dim() != seminorms.dim()) {
        return Err(PadicError::InvalidInput(format!(
            "operator of dimension {} tested against seminorms of dimension {}",
            t.dim(),
            seminorms.dim()
        )));
    }
    let d = seminorms.dim();
    let mut witnesses = Vec::with_capacity(seminorms.members().len());
    for (qi, q) in seminorms.members().iter().enumerate() {
        let per_op: Vec<Vec<Exponent>> = family.iter().map(|t| t.column_exponents(q)).collect();
        let needed: Vec<Exponent> = (0..d)
            .map(|j| per_op.iter().map(|c| c[j]).max().flatten())
            .collect();
        if needed.iter().all(Option::is_none) {
            witnesses.push(Witness { member: qi, dominating: qi, scale: 0 });
            continue;
        }
        // For each candidate dominating member: the scale it needs, or None
        // when it has zero weight on a column that must be controlled.
        let scales: Vec<Option<(i64, usize)>> = seminorms
            .members()
            .iter()
            .map(|r| {
                let mut worst: Option<(i64, usize)> = None;
                for j in 0..d {
                    let Some(c) = needed[j] else { continue };
                    let s = match r[j] {
                        Some(w) => c - w,
                        None => return None,
                    };
                    if worst.is_none_or(|(ws, _)| s > ws) {
                        worst = Some((s, j));
                    }
                }
                worst
            })
            .collect();
        let best = scales
            .iter()
            .enumerate()
            .filter_map(|(ri, s)| s.map(|(s, j)| (s, ri, j)))
            .min_by_key(|&(s, ri, _)| (s, ri));
        match best {
            Some((s, ri, _)) if s <= budget => {
                witnesses.push(Witness { member: qi, dominating: ri, scale: s.max(-budget) });
            }
            other => {
                let (needed_scale, closest, column) = match other {
                    Some((s, ri, j)) => (s, Some(ri), j),
                    // no member controls some needed column: report that column
                    None => (i64::MAX, None, (0..d).find(|&j| needed[j].is_some()).unwrap_or(0)),
                };
                let operator = per_op
                    .iter()
                    .position(|c| c[column] == needed[column])
                    .unwrap_or(0);
                return Ok(EquiContinuityVerdict::Refuted(Refutation {
                    member: qi,
                    closest,
                    basis_vector: column,
                    operator,
                    needed_scale,
                }));
            }
        }
    }
    Ok(EquiContinuityVerdict::Witnessed(witnesses))
}
