//! Extended-precision helpers over `astro_float::BigFloat`.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Environment variable overriding [`DEFAULT_PRECISION_BITS`].
pub const PRECISION_ENV: &str = "BRAMBLE_PRECISION_BITS";

/// Default mantissa width. The largest pipeline values (k = 64, α = 1.66)
/// need about 650 integer bits.
pub const DEFAULT_PRECISION_BITS: usize = 1024;

pub(crate) const RM: RoundingMode = RoundingMode::ToEven;

/// Precision from [`PRECISION_ENV`] if set to an integer >= 64, otherwise
/// the default.
pub fn precision_bits() -> usize {
    std::env::var(PRECISION_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&p| p >= 64)
        .unwrap_or(DEFAULT_PRECISION_BITS)
}

/// Arithmetic context: precision plus the constant cache.
pub(crate) struct Ctx {
    pub p: usize,
    cc: Consts,
}

impl Ctx {
    pub fn new(p: usize) -> Result<Self> {
        let cc = Consts::new().map_err(|e| Error::Precision(format!("constant cache: {e:?}")))?;
        Ok(Ctx { p, cc })
    }

    pub fn num(&self, v: f64) -> BigFloat {
        BigFloat::from_f64(v, self.p)
    }

    pub fn int(&self, v: u64) -> BigFloat {
        BigFloat::from_u64(v, self.p)
    }

    pub fn e(&mut self) -> BigFloat {
        self.cc.e(self.p, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    pub fn sub(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.sub(b, self.p, RM)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    pub fn div(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.div(b, self.p, RM)
    }

    pub fn sqrt(&self, a: &BigFloat) -> BigFloat {
        a.sqrt(self.p, RM)
    }

    pub fn pow(&mut self, a: &BigFloat, n: &BigFloat) -> BigFloat {
        a.pow(n, self.p, RM, &mut self.cc)
    }

    /// Logarithm in `base`; `None` means natural.
    pub fn log(&mut self, a: &BigFloat, base: Option<f64>) -> BigFloat {
        match base {
            None => a.ln(self.p, RM, &mut self.cc),
            Some(b) => {
                let lb = self.num(b).ln(self.p, RM, &mut self.cc);
                let la = a.ln(self.p, RM, &mut self.cc);
                self.div(&la, &lb)
            }
        }
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn decimal(&mut self, a: &BigFloat, digits: usize) -> String {
        if a.is_zero() {
            return "0".into();
        }
        let mut short = a.clone();
        let bits = ((digits as f64) * std::f64::consts::LOG2_10).ceil() as usize + 8;
        if short.set_precision(bits.min(self.p), RM).is_err() {
            return "NaN".into();
        }
        short
            .format(astro_float::Radix::Dec, RM, &mut self.cc)
            .unwrap_or_else(|_| "NaN".into())
    }
}

/// Checks that `a` is a finite number.
pub(crate) fn finite(a: &BigFloat, what: &str) -> Result<()> {
    if a.is_nan() || a.is_inf() {
        return Err(Error::Precision(format!(
            "{what} is not finite at the working precision"
        )));
    }
    Ok(())
}

/// Exact conversion of a non-negative integral value. Fails if the value
/// has more integer bits than the mantissa can hold exactly.
pub(crate) fn to_biguint(a: &BigFloat, p: usize) -> Result<BigUint> {
    finite(a, "value")?;
    if a.is_zero() {
        return Ok(BigUint::ZERO);
    }
    let (words, _bits, sign, exp, _inexact) = a
        .as_raw_parts()
        .ok_or_else(|| Error::Precision("value is not a number".into()))?;
    if sign == Sign::Neg {
        return Err(Error::Precision(
            "negative value where a count was expected".into(),
        ));
    }
    if exp as i64 > p as i64 {
        return Err(Error::Precision(format!(
            "value needs {exp} integer bits but the working precision is {p} bits; raise {PRECISION_ENV}"
        )));
    }
    if !a.is_int() {
        return Err(Error::Precision("value is not an integer".into()));
    }
    let mantissa = BigUint::from_slice(
        &words
            .iter()
            .flat_map(|w| [*w as u32, (*w >> 32) as u32])
            .collect::<Vec<u32>>(),
    );
    let mbits = (words.len() * 64) as i64;
    let shift = exp as i64 - mbits;
    Ok(if shift >= 0 {
        mantissa << shift as usize
    } else {
        mantissa >> (-shift) as usize
    })
}

/// Nearest `f64` (saturating to infinity), for display and slack reporting.
pub(crate) fn to_f64(a: &BigFloat) -> f64 {
    if a.is_nan() {
        return f64::NAN;
    }
    if a.is_inf() {
        return if a.is_inf_neg() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        };
    }
    if a.is_zero() {
        return 0.0;
    }
    let (words, _, sign, exp, _) = a.as_raw_parts().expect("finite value");
    let top = *words.last().expect("non-empty mantissa") as f64 / 2f64.powi(64);
    let v = if exp > 1100 {
        f64::INFINITY
    } else if exp < -1100 {
        0.0
    } else {
        top * 2f64.powi(exp)
    };
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// Serde adapter writing a `BigUint` as a decimal string.
pub(crate) mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        BigUint::parse_bytes(s.as_bytes(), 10)
            .ok_or_else(|| D::Error::custom(format!("not a decimal integer: {s:?}")))
    }
}
