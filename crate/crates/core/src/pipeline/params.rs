use astro_float::BigFloat;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::{decimal, finite, precision_bits, to_biguint, Ctx};

/// Slack allowed on `α(1-ε) >= 1+ε`, so that `ε = (α-1)/(α+1)` computed in
/// `f64` is accepted.
pub const EPSILON_BOUNDARY_TOLERANCE: f64 = 1e-12;

/// The factor `2⁹ · 5` of the linkage-size bounds.
pub const LINKAGE_FACTOR: u64 = 2560;

/// Inputs of [`compute_parameters`]. `c_a` and `c_t` stand for the
/// unspecified constants of the external lemmas; `log_base: None` is the
/// natural logarithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParameterInputs {
    pub k: u64,
    pub alpha: f64,
    pub epsilon: f64,
    pub c_a: f64,
    pub c_t: f64,
    pub log_base: Option<f64>,
}

impl ParameterInputs {
    pub fn new(k: u64, alpha: f64, epsilon: f64) -> Self {
        ParameterInputs {
            k,
            alpha,
            epsilon,
            c_a: 1.0,
            c_t: 1.0,
            log_base: None,
        }
    }
}

/// Largest `ε` with `α(1-ε) >= 1+ε`.
pub fn epsilon_boundary(alpha: f64) -> f64 {
    (alpha - 1.0) / (alpha + 1.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainChecks {
    /// `d₁ > d₂ > d₃`
    pub d_decreasing: bool,
    /// `x·d + (d-1) <= b`
    pub x_d_within_b: bool,
    /// `α(1-ε) >= 1+ε`
    pub alpha_epsilon: bool,
}

impl ChainChecks {
    pub fn all(&self) -> bool {
        self.d_decreasing && self.x_d_within_b && self.alpha_epsilon
    }
}

/// Parameter chain for a bramble of size `k`. Integers are exact; `x` and
/// `d` are real and reported as decimal strings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineParameters {
    pub inputs: ParameterInputs,
    pub precision_bits: usize,
    #[serde(with = "decimal")]
    pub a: BigUint,
    #[serde(with = "decimal")]
    pub d3: BigUint,
    #[serde(with = "decimal")]
    pub d2: BigUint,
    #[serde(with = "decimal")]
    pub d1: BigUint,
    #[serde(with = "decimal")]
    pub b: BigUint,
    pub x: String,
    pub d: String,
    /// `x·d + (d-1)`, the left side of the chain inequality.
    pub chain_lhs: String,
    pub checks: ChainChecks,
}

fn check_inputs(inp: &ParameterInputs) -> Result<()> {
    if inp.k < 2 {
        return Err(invalid(format!("k must be at least 2, got {}", inp.k)));
    }
    if !(inp.alpha.is_finite() && inp.alpha > 1.0) {
        return Err(invalid(format!("alpha must exceed 1, got {}", inp.alpha)));
    }
    if !(inp.epsilon > 0.0 && inp.epsilon < 1.0) {
        return Err(invalid(format!(
            "epsilon must lie in (0, 1), got {}",
            inp.epsilon
        )));
    }
    if inp.alpha * (1.0 - inp.epsilon) < 1.0 + inp.epsilon - EPSILON_BOUNDARY_TOLERANCE {
        return Err(invalid(format!(
            "alpha(1 - epsilon) = {} is below 1 + epsilon = {}",
            inp.alpha * (1.0 - inp.epsilon),
            1.0 + inp.epsilon
        )));
    }
    for (name, c) in [("c_a", inp.c_a), ("c_t", inp.c_t)] {
        if !(c.is_finite() && c > 0.0) {
            return Err(invalid(format!("{name} must be a positive real, got {c}")));
        }
    }
    if let Some(base) = inp.log_base {
        if !(base.is_finite() && base > 1.0) {
            return Err(invalid(format!("log base must exceed 1, got {base}")));
        }
    }
    Ok(())
}

/// [`compute_parameters_at`] with the precision from the environment.
pub fn compute_parameters(inp: ParameterInputs) -> Result<PipelineParameters> {
    compute_parameters_at(inp, precision_bits())
}

/// Evaluates the chain at `precision` bits and checks every inequality.
/// A failing inequality is an internal error.
pub fn compute_parameters_at(inp: ParameterInputs, precision: usize) -> Result<PipelineParameters> {
    check_inputs(&inp)?;
    let mut ctx = Ctx::new(precision)?;
    let k = ctx.int(inp.k);
    let log_k = ctx.log(&k, inp.log_base);
    let alpha = ctx.num(inp.alpha);
    let one = ctx.int(1);
    let factor = ctx.int(LINKAGE_FACTOR);

    let a = {
        let root = ctx.sqrt(&ctx.add(&one, &log_k));
        ctx.mul(&ctx.mul(&ctx.num(inp.c_a), &ctx.mul(&k, &k)), &root)
            .ceil()
    };
    let d3 = ctx
        .mul(&ctx.mul(&ctx.num(inp.c_t), &k), &ctx.sqrt(&log_k))
        .ceil();
    // e·4a²
    let e = ctx.e();
    let base = ctx.mul(&e, &ctx.mul(&ctx.int(4), &ctx.mul(&a, &a)));
    let next_d = |ctx: &mut Ctx, prev: &BigFloat| {
        let inner = ctx.pow(&ctx.mul(&base, prev), &alpha);
        ctx.mul(&factor, &inner).ceil()
    };
    let d2 = next_d(&mut ctx, &d3);
    let d1 = next_d(&mut ctx, &d2);
    let b = {
        let inner = ctx.mul(&base, &ctx.mul(&d1, &d1));
        ctx.pow(&inner, &alpha).ceil()
    };
    let x_core = ctx.pow(&ctx.mul(&base, &d1), &alpha);
    let x = ctx.add(&x_core, &one);
    let d1_alpha = ctx.pow(&d1, &alpha);
    let d = ctx.div(&d1_alpha, &factor);
    let chain_lhs = ctx.add(&ctx.mul(&x, &d), &ctx.sub(&d, &one));
    for (name, v) in [
        ("a", &a),
        ("d3", &d3),
        ("d2", &d2),
        ("d1", &d1),
        ("b", &b),
        ("x", &x),
        ("d", &d),
    ] {
        finite(v, name)?;
    }

    let ge = |l: &BigFloat, r: &BigFloat| l.cmp(r).is_some_and(|c| c >= 0);
    let gt = |l: &BigFloat, r: &BigFloat| l.cmp(r).is_some_and(|c| c > 0);
    let checks = ChainChecks {
        d_decreasing: gt(&d1, &d2) && gt(&d2, &d3),
        x_d_within_b: ge(&b, &chain_lhs),
        alpha_epsilon: {
            let lhs = ctx.mul(&alpha, &ctx.sub(&one, &ctx.num(inp.epsilon)));
            let rhs = ctx.sub(
                &ctx.add(&one, &ctx.num(inp.epsilon)),
                &ctx.num(EPSILON_BOUNDARY_TOLERANCE),
            );
            ge(&lhs, &rhs)
        },
    };
    let params = PipelineParameters {
        inputs: inp,
        precision_bits: precision,
        a: to_biguint(&a, precision)?,
        d3: to_biguint(&d3, precision)?,
        d2: to_biguint(&d2, precision)?,
        d1: to_biguint(&d1, precision)?,
        b: to_biguint(&b, precision)?,
        x: ctx.decimal(&x, 30),
        d: ctx.decimal(&d, 30),
        chain_lhs: ctx.decimal(&chain_lhs, 30),
        checks,
    };
    if !params.checks.all() {
        return Err(Error::Internal(format!(
            "parameter chain fails for k = {}: {:?}",
            inp.k, params.checks
        )));
    }
    Ok(params)
}

/// Recomputes the chain from the recorded inputs and precision and compares.
pub fn verify_parameters(p: &PipelineParameters) -> Result<(), String> {
    let fresh = compute_parameters_at(p.inputs, p.precision_bits).map_err(|e| e.to_string())?;
    if &fresh != p {
        return Err("recorded parameters differ from a fresh evaluation".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_k_values() {
        let p = compute_parameters_at(ParameterInputs::new(4, 1.001, epsilon_boundary(1.001)), 512)
            .unwrap();
        // a = ⌈16·√(1 + ln 4)⌉ = ⌈24.7…⌉, d3 = ⌈4·√(ln 4)⌉ = ⌈4.70…⌉
        assert_eq!(p.a, BigUint::from(25u32));
        assert_eq!(p.d3, BigUint::from(5u32));
        assert!(p.checks.all());
    }

    #[test]
    fn operating_point_accepted() {
        let p = compute_parameters_at(ParameterInputs::new(64, 1.66, 0.248), 1024).unwrap();
        assert!(
            p.b.bits() > 600 && p.b.bits() < 700,
            "b has {} bits",
            p.b.bits()
        );
        verify_parameters(&p).unwrap();
    }

    #[test]
    fn epsilon_boundary_rule() {
        let alpha = 1.5;
        let eps = epsilon_boundary(alpha);
        assert!(compute_parameters_at(ParameterInputs::new(3, alpha, eps), 512).is_ok());
        assert!(compute_parameters_at(ParameterInputs::new(3, alpha, eps + 1e-6), 512).is_err());
    }

    #[test]
    fn domain_and_precision_errors() {
        assert!(compute_parameters_at(ParameterInputs::new(1, 1.66, 0.2), 512).is_err());
        assert!(compute_parameters_at(ParameterInputs::new(4, 1.0, 0.2), 512).is_err());
        assert!(matches!(
            compute_parameters_at(ParameterInputs::new(64, 1.66, 0.248), 256),
            Err(Error::Precision(_))
        ));
    }

    #[test]
    fn decimal_serialization() {
        let p = compute_parameters_at(ParameterInputs::new(2, 1.66, 0.248), 512).unwrap();
        let json = serde_json::to_value(&p).unwrap();
        assert_eq!(json["a"], serde_json::json!(p.a.to_string()));
        let back: PipelineParameters = serde_json::from_value(json).unwrap();
        assert_eq!(back, p);
    }
}
