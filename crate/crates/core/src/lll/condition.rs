use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::numeric::{precision_bits, to_f64, Ctx};

/// Result of the polynomial LLL condition
/// `t^(1-ε) >= (e · 4b(r-1))^(1+ε)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LllCheck {
    pub t: u64,
    pub b: f64,
    pub r: usize,
    pub epsilon: f64,
    pub passes: bool,
    /// `t^(1-ε) / (e · 4b(r-1))^(1+ε)`; `None` when the right side is 0.
    pub slack: Option<f64>,
    pub lhs: String,
    pub rhs: String,
}

fn check_domain(t: u64, b: f64, r: usize, eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    if r < 2 {
        return Err(invalid(format!("r must be at least 2, got {r}")));
    }
    if !(b.is_finite() && b >= 0.0) {
        return Err(invalid(format!(
            "b must be a finite non-negative real, got {b}"
        )));
    }
    if t == 0 {
        return Err(invalid("t must be at least 1"));
    }
    Ok(())
}

/// Evaluates both sides at the working precision.
pub fn check_poly_lll_condition(t: u64, b: f64, r: usize, eps: f64) -> Result<LllCheck> {
    check_domain(t, b, r, eps)?;
    let mut ctx = Ctx::new(precision_bits())?;
    let lhs = {
        let exp = ctx.sub(&ctx.int(1), &ctx.num(eps));
        ctx.pow(&ctx.int(t), &exp)
    };
    let rhs = if b == 0.0 {
        ctx.int(0)
    } else {
        let e = ctx.e();
        let base = ctx.mul(&e, &ctx.mul(&ctx.num(4.0 * b), &ctx.int((r - 1) as u64)));
        let exp = ctx.add(&ctx.int(1), &ctx.num(eps));
        ctx.pow(&base, &exp)
    };
    let passes = lhs.cmp(&rhs).is_some_and(|c| c >= 0);
    let slack = (!rhs.is_zero()).then(|| to_f64(&ctx.div(&lhs, &rhs)));
    Ok(LllCheck {
        t,
        b,
        r,
        epsilon: eps,
        passes,
        slack,
        lhs: ctx.decimal(&lhs, 20),
        rhs: ctx.decimal(&rhs, 20),
    })
}

/// Smallest `t <= limit` passing the condition, by bisection (the left side
/// is increasing in `t`).
pub fn min_passing_t(b: f64, r: usize, eps: f64, limit: u64) -> Result<Option<u64>> {
    if !check_poly_lll_condition(limit.max(1), b, r, eps)?.passes {
        return Ok(None);
    }
    let (mut lo, mut hi) = (1u64, limit.max(1));
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if check_poly_lll_condition(mid, b, r, eps)?.passes {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(Some(lo))
}

/// Requirement `t >= e · 2b(r-1)` of the classical symmetric LLL.
pub fn classical_lll_bound(b: f64, r: usize) -> f64 {
    std::f64::consts::E * 2.0 * b * (r as f64 - 1.0)
}

/// Number of bad events each event depends on: `4b(r-1)`.
pub fn dependency_bound(b: f64, r: usize) -> f64 {
    4.0 * b * (r as f64 - 1.0)
}
