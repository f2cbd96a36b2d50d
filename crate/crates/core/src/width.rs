//! Rational strip widths from the continued fraction of `ξ = 1 + 2/√3 = [2; 6, 2, 6, ...]`.
//!
//! Odd convergents `p/q` lie above `ξ`, so `d = q/(p - q)` is a rational width
//! slightly below √3/2 with `1 + 1/d = p/q`.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WidthError {
    #[error("eps must lie in (0, 1), got {0}")]
    EpsOutOfRange(f64),
}

/// Partial quotient `a_t` of `ξ`.
fn partial_quotient(t: u32) -> u32 {
    if t.is_multiple_of(2) {
        2
    } else {
        6
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convergent {
    pub t: u32,
    pub p: BigUint,
    pub q: BigUint,
}

impl Convergent {
    pub fn to_f64(&self) -> f64 {
        ratio_f64(&self.p, &self.q)
    }

    pub fn is_above_xi(&self) -> bool {
        self.t % 2 == 1
    }
}

impl fmt::Display for Convergent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

/// Convergents `t = 0 ..= t_max` via `p_t = a_t p_{t-1} + p_{t-2}`.
pub fn xi_convergents(t_max: u32) -> Vec<Convergent> {
    let mut out = Vec::with_capacity(t_max as usize + 1);
    let (mut p_prev, mut p) = (BigUint::zero(), BigUint::one());
    let (mut q_prev, mut q) = (BigUint::one(), BigUint::zero());
    for t in 0..=t_max {
        let a = BigUint::from(partial_quotient(t));
        let p_next = &a * &p + &p_prev;
        let q_next = &a * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
        out.push(Convergent {
            t,
            p: p.clone(),
            q: q.clone(),
        });
    }
    out
}

pub fn xi_convergent(t: u32) -> Convergent {
    xi_convergents(t).pop().expect("at least one convergent")
}

/// Two-step recurrence `(p, q) -> (13p + 2q, 6p + q)` linking convergents `t - 2` and `t`.
pub fn advance_two(c: &Convergent) -> Convergent {
    Convergent {
        t: c.t + 2,
        p: BigUint::from(13u32) * &c.p + BigUint::from(2u32) * &c.q,
        q: BigUint::from(6u32) * &c.p + &c.q,
    }
}

/// Strip width `d = q / (p - q)` built from an odd convergent `p/q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalWidth {
    pub t: u32,
    pub p: BigUint,
    pub q: BigUint,
}

impl RationalWidth {
    pub fn from_convergent(c: &Convergent) -> Self {
        RationalWidth {
            t: c.t,
            p: c.p.clone(),
            q: c.q.clone(),
        }
    }

    pub fn d(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.q.clone()),
            BigInt::from(&self.p - &self.q),
        )
    }

    pub fn d_f64(&self) -> f64 {
        ratio_f64(&self.q, &(&self.p - &self.q))
    }

    /// `p/q = 1 + 1/d`, the per-clique expectation factor of this width.
    pub fn ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.p.clone()), BigInt::from(self.q.clone()))
    }

    pub fn ratio_f64(&self) -> f64 {
        ratio_f64(&self.p, &self.q)
    }
}

impl fmt::Display for RationalWidth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.d())
    }
}

/// Smallest odd `t` with `q_t^2 >= ceil(3/eps)`.
pub fn select_width(eps: f64) -> Result<RationalWidth, WidthError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(WidthError::EpsOutOfRange(eps));
    }
    let threshold = BigUint::from_f64((3.0 / eps).ceil()).ok_or(WidthError::EpsOutOfRange(eps))?;
    let mut c = xi_convergent(1);
    while &c.q * &c.q < threshold {
        c = advance_two(&c);
    }
    Ok(RationalWidth::from_convergent(&c))
}

fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    // Scale both down together so large convergents stay representable.
    let shift = num.bits().max(den.bits()).saturating_sub(1000);
    let (n, d) = (num >> shift, den >> shift);
    n.to_f64().unwrap_or(f64::INFINITY) / d.to_f64().unwrap_or(f64::INFINITY)
}
