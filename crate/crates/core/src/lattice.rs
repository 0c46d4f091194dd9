//! Small integer lattices with exact enumeration support.
//!
//! This is the substrate for the desk-scale oracles: dimensions stay tiny
//! (at most 8 for construction, 6 for enumeration), coefficients are
//! enumerated depth-first with bounds from the Gram-Schmidt profile, and
//! candidate norms are evaluated in integer arithmetic so minima and
//! scaling relations are exact.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard cap on construction dimension.
pub const MAX_DIM: usize = 8;
/// Hard cap on enumeration dimension.
pub const MAX_ENUM_DIM: usize = 6;

/// A full-rank integer lattice given by square row basis `basis`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegerLattice {
    basis: Vec<Vec<i64>>,
    det_abs: u128,
}

impl IntegerLattice {
    pub fn new(basis: Vec<Vec<i64>>) -> Result<Self> {
        let dim = basis.len();
        if dim == 0 || dim > MAX_DIM {
            return Err(Error::Capability(format!(
                "lattice dimension must be in 1..={MAX_DIM}, got {dim}"
            )));
        }
        if basis.iter().any(|row| row.len() != dim) {
            return Err(Error::Domain("basis must be square".into()));
        }
        let det = bareiss_determinant(&basis)?;
        if det == 0 {
            return Err(Error::Domain("basis rows are linearly dependent".into()));
        }
        Ok(Self {
            basis,
            det_abs: det.unsigned_abs(),
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<i64>] {
        &self.basis
    }

    /// |det(basis)|, computed exactly at construction.
    pub fn det_abs(&self) -> u128 {
        self.det_abs
    }

    /// Euclidean norm of the longest basis row.
    pub fn max_row_norm(&self) -> f64 {
        self.basis
            .iter()
            .map(|row| (row_norm_sq(row) as f64).sqrt())
            .fold(0.0, f64::max)
    }

    /// Visits every nonzero lattice vector with norm within `radius`
    /// (up to a tiny floating slack on the boundary), passing the integer
    /// coordinate vector and its exact squared norm. Returns the visit count.
    pub fn enumerate_nonzero(
        &self,
        radius: f64,
        mut visit: impl FnMut(&[i64], u128),
    ) -> Result<usize> {
        let dim = self.dim();
        if dim > MAX_ENUM_DIM {
            return Err(Error::Capability(format!(
                "enumeration supports dimension <= {MAX_ENUM_DIM}, got {dim}"
            )));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::Domain(format!(
                "radius must be finite > 0, got {radius}"
            )));
        }
        let gs = GramSchmidt::compute(&self.basis);
        // Slack absorbs f64 rounding in the Gram-Schmidt profile so boundary
        // vectors are never dropped; accepted norms are integer-checked.
        let radius_sq = radius * radius * (1.0 + 1e-9) + 1e-9;
        let mut coeffs = vec![0i64; dim];
        let mut count = 0usize;
        let mut state = EnumState {
            basis: &self.basis,
            gs: &gs,
            radius_sq,
            count: &mut count,
            visit: &mut visit,
        };
        enumerate_level(&mut state, dim - 1, 0.0, &mut coeffs);
        Ok(count)
    }
}

fn row_norm_sq(row: &[i64]) -> u128 {
    row.iter().map(|&x| (x as i128 * x as i128) as u128).sum()
}

/// Fraction-free determinant (Bareiss) in i128; errors on overflow.
fn bareiss_determinant(basis: &[Vec<i64>]) -> Result<i128> {
    let n = basis.len();
    let mut m: Vec<Vec<i128>> = basis
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let swap = (k + 1..n).find(|&i| m[i][k] != 0);
            match swap {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(0),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].checked_mul(m[k][k]).ok_or_else(overflow)?;
                let b = m[i][k].checked_mul(m[k][j]).ok_or_else(overflow)?;
                m[i][j] = a.checked_sub(b).ok_or_else(overflow)? / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    Ok(sign * m[n - 1][n - 1])
}

fn overflow() -> Error {
    Error::Range("determinant computation overflowed i128".into())
}

struct GramSchmidt {
    /// Squared norms of the orthogonalized rows.
    b_star_sq: Vec<f64>,
    /// mu[i][j] for j < i.
    mu: Vec<Vec<f64>>,
}

impl GramSchmidt {
    fn compute(basis: &[Vec<i64>]) -> Self {
        let n = basis.len();
        let mut star: Vec<Vec<f64>> = basis
            .iter()
            .map(|row| row.iter().map(|&x| x as f64).collect())
            .collect();
        let mut mu = vec![vec![0.0f64; n]; n];
        let mut b_star_sq = vec![0.0f64; n];
        for i in 0..n {
            for j in 0..i {
                let dot: f64 = basis[i]
                    .iter()
                    .zip(star[j].iter())
                    .map(|(&a, &b)| a as f64 * b)
                    .sum();
                mu[i][j] = dot / b_star_sq[j];
                let mu_ij = mu[i][j];
                let (left, right) = star.split_at_mut(i);
                for (s, &prev) in right[0].iter_mut().zip(left[j].iter()) {
                    *s -= mu_ij * prev;
                }
            }
            b_star_sq[i] = star[i].iter().map(|x| x * x).sum();
        }
        Self { b_star_sq, mu }
    }
}

struct EnumState<'a, F: FnMut(&[i64], u128)> {
    basis: &'a [Vec<i64>],
    gs: &'a GramSchmidt,
    radius_sq: f64,
    count: &'a mut usize,
    visit: &'a mut F,
}

fn enumerate_level<F: FnMut(&[i64], u128)>(
    state: &mut EnumState<'_, F>,
    level: usize,
    partial_sq: f64,
    coeffs: &mut Vec<i64>,
) {
    let center: f64 = (level + 1..state.basis.len())
        .map(|j| state.gs.mu[j][level] * coeffs[j] as f64)
        .sum();
    let budget = state.radius_sq - partial_sq;
    if budget < 0.0 {
        return;
    }
    let spread = (budget / state.gs.b_star_sq[level]).sqrt();
    let lo = (-center - spread).floor() as i64;
    let hi = (-center + spread).ceil() as i64;
    for x in lo..=hi {
        let offset = x as f64 + center;
        let contrib = offset * offset * state.gs.b_star_sq[level];
        if contrib > budget {
            continue;
        }
        coeffs[level] = x;
        if level == 0 {
            if coeffs.iter().all(|&c| c == 0) {
                continue;
            }
            let (vector, norm_sq) = realize(state.basis, coeffs);
            if (norm_sq as f64) <= state.radius_sq {
                *state.count += 1;
                (state.visit)(&vector, norm_sq);
            }
        } else {
            enumerate_level(state, level - 1, partial_sq + contrib, coeffs);
        }
    }
    coeffs[level] = 0;
}

/// Integer coordinates and exact squared norm of `sum coeffs[i] * basis[i]`.
fn realize(basis: &[Vec<i64>], coeffs: &[i64]) -> (Vec<i64>, u128) {
    let dim = basis.len();
    let mut vector = vec![0i128; dim];
    for (c, row) in coeffs.iter().zip(basis.iter()) {
        if *c == 0 {
            continue;
        }
        for (v, &b) in vector.iter_mut().zip(row.iter()) {
            *v += *c as i128 * b as i128;
        }
    }
    let norm_sq: u128 = vector.iter().map(|&v| (v * v) as u128).sum();
    (vector.iter().map(|&v| v as i64).collect(), norm_sq)
}
