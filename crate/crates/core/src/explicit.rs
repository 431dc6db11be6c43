//! Closed-form mechanisms: the truncated geometric mechanism (GM), the
//! explicit fair mechanism (EM) and the uniform mechanism (UM), with their
//! closed-form L0 costs.

use crate::error::Result;
use crate::math::powu;
use crate::mechanism::{Mechanism, PrivacyLevel};

/// Entry scales of the truncated geometric mechanism: the two extreme rows
/// carry `x`, interior rows carry `y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmParams {
    pub x: f64,
    pub y: f64,
}

impl GmParams {
    pub fn new(alpha: PrivacyLevel) -> Result<Self> {
        let a = alpha.strict()?;
        Ok(Self {
            x: 1.0 / (1.0 + a),
            y: (1.0 - a) / (1.0 + a),
        })
    }
}

/// The diagonal of the explicit fair mechanism, which is also the largest
/// diagonal any fair `alpha`-DP mechanism of size `n` can have.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmParams {
    pub y: f64,
}

impl EmParams {
    pub fn new(n: usize, alpha: PrivacyLevel) -> Result<Self> {
        let a = alpha.strict()?;
        let y = if n.is_multiple_of(2) {
            (1.0 - a) / (1.0 + a - 2.0 * powu(a, (n / 2 + 1) as u32))
        } else {
            // the central column has floor(n/2) entries on one side and ceil(n/2) on the other
            let mut tail = 0.0;
            let mut power = 1.0;
            for _ in 0..n / 2 {
                power *= a;
                tail += power;
            }
            1.0 / (1.0 + 2.0 * tail + powu(a, n.div_ceil(2) as u32))
        };
        Ok(Self { y })
    }
}

/// Truncated geometric mechanism: two-sided geometric noise clamped to `[0, n]`.
/// Optimal under L0 with no structural constraints; every DP inequality is tight.
pub fn geometric(n: usize, alpha: PrivacyLevel) -> Result<Mechanism> {
    let GmParams { x, y } = GmParams::new(alpha)?;
    let a = alpha.get();
    Mechanism::from_fn(n, |i, j| {
        let scale = if i == 0 || i == n { x } else { y };
        scale * powu(a, i.abs_diff(j) as u32)
    })
}

/// Exponent of `alpha` at cell `(i, j)` of the explicit fair mechanism.
pub(crate) fn em_exponent(n: usize, i: usize, j: usize) -> u32 {
    let dist = i.abs_diff(j);
    let edge = j.min(n - j);
    if dist < edge {
        dist as u32
    } else {
        (dist + edge).div_ceil(2) as u32
    }
}

/// Explicit fair mechanism: constant diagonal `y`, every column a permutation of
/// the same multiset of powers of `alpha`. Satisfies all seven properties.
pub fn explicit_fair(n: usize, alpha: PrivacyLevel) -> Result<Mechanism> {
    let EmParams { y } = EmParams::new(n, alpha)?;
    let a = alpha.get();
    Mechanism::from_fn(n, |i, j| y * powu(a, em_exponent(n, i, j)))
}

pub fn uniform(n: usize) -> Mechanism {
    let p = 1.0 / (n + 1) as f64;
    Mechanism::from_fn(n, |_, _| p).expect("uniform columns sum to 1")
}

/// Randomized response on one bit: report the truth with probability `1/(1+alpha)`.
pub fn randomized_response(alpha: PrivacyLevel) -> Result<Mechanism> {
    geometric(1, alpha)
}

/// L0 cost of GM, independent of `n`: `2 alpha / (1 + alpha)`.
pub fn gm_l0_cost(alpha: PrivacyLevel) -> Result<f64> {
    let a = alpha.strict()?;
    Ok(2.0 * a / (1.0 + a))
}

/// L0 cost of EM: `(n+1)/n * (1 - y)`.
pub fn em_l0_cost(n: usize, alpha: PrivacyLevel) -> Result<f64> {
    if n == 0 {
        return Err(crate::Error::UndefinedForN0);
    }
    let EmParams { y } = EmParams::new(n, alpha)?;
    Ok((n + 1) as f64 / n as f64 * (1.0 - y))
}
