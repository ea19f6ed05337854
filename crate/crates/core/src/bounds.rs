//! Closed-form asymptotic probabilities for the medium regime
//! `p = (ln n + c) / n`, with self-loop probability `q` held fixed.
//!
//! Infinite `c` saturates to the limiting value instead of evaluating
//! `0 * inf` products.

use serde::Serialize;

use crate::error::Result;
use crate::models::check_probability;

/// Limiting probability of a Hamiltonian decomposition in `G(n, p)`:
/// `exp(-2 e^{-c})`.
pub fn hamiltonian_prob(c: f64) -> f64 {
    (-2.0 * (-c).exp()).exp()
}

/// Lower bound on the limiting probability of structural diagonalizability:
/// `exp(-2 e^{-c}) (1 + 2 e^{-c} + e^{-2c})`.
pub fn medium_lower(c: f64) -> f64 {
    let x = (-c).exp();
    if !x.is_finite() {
        return 0.0;
    }
    let value = (-2.0 * x).exp() * (1.0 + 2.0 * x + (-2.0 * c).exp());
    if value.is_nan() {
        0.0
    } else {
        value
    }
}

/// Upper bound: `1 - exp(-2 e^{-c}) e^{-2c}`.
///
/// Not monotone in `c`: it falls from 1 as `c` rises to 0, where it reaches
/// its minimum `1 - e^{-2}`, and climbs back to 1 afterwards.
pub fn medium_upper(c: f64) -> f64 {
    if c == f64::NEG_INFINITY {
        return 1.0;
    }
    // exp(-2 e^{-c}) * e^{-2c} == exp(-2 e^{-c} - 2c); the fused exponent
    // stays finite where the two factors would over/underflow separately.
    1.0 - (-2.0 * (-c).exp() - 2.0 * c).exp()
}

/// `exp(-2 (1 - q) e^{-c})`.
pub fn hamiltonian_prob_q(c: f64, q: f64) -> Result<f64> {
    check_probability("q", q)?;
    let x = (1.0 - q) * (-c).exp();
    if x.is_nan() {
        return Ok(1.0);
    }
    Ok((-2.0 * x).exp())
}

/// `exp(-2 (1 - q) e^{-c}) [1 + 2 (1 - q) e^{-c} + (1 - q)^2 e^{-2c}]`.
pub fn medium_lower_q(c: f64, q: f64) -> Result<f64> {
    check_probability("q", q)?;
    let s = 1.0 - q;
    let x = s * (-c).exp();
    if x.is_nan() {
        return Ok(1.0);
    }
    if !x.is_finite() {
        return Ok(0.0);
    }
    let value = (-2.0 * x).exp() * (1.0 + 2.0 * x + s * s * (-2.0 * c).exp());
    Ok(if value.is_nan() { 0.0 } else { value })
}

/// `1 - (1 - q)^2 exp(-2 (1 - q) e^{-c}) e^{-2c}`.
pub fn medium_upper_q(c: f64, q: f64) -> Result<f64> {
    check_probability("q", q)?;
    let s = 1.0 - q;
    if s == 0.0 || c == f64::NEG_INFINITY {
        return Ok(1.0);
    }
    Ok(1.0 - s * s * (-2.0 * s * (-c).exp() - 2.0 * c).exp())
}

/// Expected number of isolated edges in `G(n, p)`: `n (n - 1) p (1 - p)^{4n - 5}`.
pub fn expected_isolated_edges(n: usize, p: f64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    let nf = n as f64;
    nf * (nf - 1.0) * p * (1.0 - p).powi(4 * n as i32 - 5)
}

/// Large-`n` form of [`expected_isolated_edges`] at `p = c / n`: `c e^{-4c} n`.
pub fn expected_isolated_edges_asymptotic(n: usize, c: f64) -> f64 {
    c * (-4.0 * c).exp() * n as f64
}

/// Limiting probability of structural diagonalizability for `p = c / n`.
pub fn sparse_limit() -> f64 {
    0.0
}

/// All medium-regime limits at one `(c, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundSet {
    pub c: f64,
    pub q: f64,
    pub lower: f64,
    pub upper: f64,
    pub hamiltonian: f64,
}

impl BoundSet {
    pub fn at(c: f64, q: f64) -> Result<Self> {
        Ok(Self {
            c,
            q,
            lower: medium_lower_q(c, q)?,
            upper: medium_upper_q(c, q)?,
            hamiltonian: hamiltonian_prob_q(c, q)?,
        })
    }

    /// Sparse-regime targets: everything tends to zero.
    pub fn sparse(c: f64, q: f64) -> Self {
        Self {
            c,
            q,
            lower: sparse_limit(),
            upper: sparse_limit(),
            hamiltonian: sparse_limit(),
        }
    }
}
