//! Laguerre norms `r_k^β = ‖L_k^β‖ = √((1+β)(1+β/2)⋯(1+β/k))`.
//!
//! Squared norms are kept in factored form so that norms and norm ratios are
//! exact square roots with a canonical squarefree radicand.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::exactcore::{PrimePowers, Rat, Surd};

type Cache = HashMap<Rat, Vec<PrimePowers>>;

fn cache() -> &'static Mutex<Cache> {
    static CACHE: OnceLock<Mutex<Cache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn check_beta(beta: &Rat) -> Result<()> {
    if beta.value() <= &-BigRational::one() {
        return Err(Error::BadParameter(format!("norm parameter {beta} must exceed -1")));
    }
    Ok(())
}

/// Factored `(r_k^β)²`.
pub fn norm_sq_factored(beta: &Rat, k: usize) -> Result<PrimePowers> {
    check_beta(beta)?;
    let mut guard = cache().lock().expect("norm cache poisoned");
    let entry = guard
        .entry(beta.clone())
        .or_insert_with(|| vec![PrimePowers::one()]);
    if entry.len() <= k {
        let p = beta.value().numer();
        let q = beta.value().denom();
        for j in entry.len()..=k {
            // 1 + β/j = (q j + p) / (q j)
            let qj: BigInt = q * BigInt::from(j);
            let num = &qj + p;
            let f = PrimePowers::from_rational(&BigRational::new(num, qj)).ok_or_else(|| {
                Error::Unsupported(format!("norm factor for beta={beta} at {j} is too large to factor"))
            })?;
            let next = entry[j - 1].mul(&f);
            entry.push(next);
        }
    }
    Ok(entry[k].clone())
}

pub fn norm_sq(beta: &Rat, k: usize) -> Result<BigRational> {
    Ok(norm_sq_factored(beta, k)?.to_rational())
}

/// `r_k^β` as an exact surd.
pub fn laguerre_norm(beta: &Rat, k: usize) -> Result<Surd> {
    Ok(norm_sq_factored(beta, k)?.sqrt())
}

/// `r_t^β / r_k^β`, exact.
pub fn norm_ratio(beta: &Rat, t: usize, k: usize) -> Result<Surd> {
    let a = norm_sq_factored(beta, t)?;
    let b = norm_sq_factored(beta, k)?;
    Ok(a.mul(&b.inv()).sqrt())
}

/// `r_k^β` in floating point, summed in the log domain.
pub fn laguerre_norm_f64(beta: f64, k: usize) -> f64 {
    let mut l = 0.0;
    for j in 1..=k {
        l += (beta / j as f64).ln_1p();
    }
    (0.5 * l).exp()
}

/// `ln r_k^β` for an exact parameter.
pub fn ln_norm(beta: &Rat, k: usize) -> f64 {
    let b = beta.value().to_f64().unwrap_or(f64::NAN);
    let mut l = 0.0;
    for j in 1..=k {
        l += (b / j as f64).ln_1p();
    }
    0.5 * l
}
