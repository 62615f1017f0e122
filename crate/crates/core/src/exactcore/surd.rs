//! Exact square roots of rationals and their linear combinations.
//!
//! A [`Surd`] is `Σ c_m·√m` with squarefree positive integers `m` and complex
//! rational `c_m`. Square roots of distinct squarefree integers are linearly
//! independent over ℚ(i), so the representation is canonical.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{big_ln, ExactScalar};

/// A positive rational in factored form, `Π p^e` with `e ∈ ℤ`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PrimePowers(BTreeMap<u64, i64>);

const TRIAL_LIMIT: u64 = 1 << 40;

impl PrimePowers {
    pub fn one() -> Self {
        PrimePowers::default()
    }

    /// Factors a positive integer by trial division. Returns `None` when the
    /// number is too large to factor this way.
    pub fn from_u64(mut n: u64) -> Option<Self> {
        if n == 0 {
            return None;
        }
        let mut m = BTreeMap::new();
        let mut p = 2u64;
        while p.saturating_mul(p) <= n {
            while n % p == 0 {
                *m.entry(p).or_insert(0) += 1;
                n /= p;
            }
            p += if p == 2 { 1 } else { 2 };
            if p > 1 << 20 && n > TRIAL_LIMIT {
                return None;
            }
        }
        if n > 1 {
            *m.entry(n).or_insert(0) += 1;
        }
        Some(PrimePowers(m))
    }

    /// Factors a positive rational; `None` if it is not positive or a part is
    /// too large.
    pub fn from_rational(r: &BigRational) -> Option<Self> {
        if !r.is_positive() {
            return None;
        }
        let n = PrimePowers::from_u64(r.numer().to_u64()?)?;
        let d = PrimePowers::from_u64(r.denom().to_u64()?)?;
        Some(n.mul(&d.inv()))
    }

    pub fn mul(&self, o: &PrimePowers) -> PrimePowers {
        let mut m = self.0.clone();
        for (p, e) in &o.0 {
            *m.entry(*p).or_insert(0) += e;
        }
        m.retain(|_, e| *e != 0);
        PrimePowers(m)
    }

    pub fn inv(&self) -> PrimePowers {
        PrimePowers(self.0.iter().map(|(p, e)| (*p, -e)).collect())
    }

    pub fn to_rational(&self) -> BigRational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for (p, e) in &self.0 {
            let pp = BigInt::from(*p).pow(e.unsigned_abs() as u32);
            if *e > 0 {
                num *= pp;
            } else {
                den *= pp;
            }
        }
        BigRational::new(num, den)
    }

    /// `√(self)` as a monomial surd.
    pub fn sqrt(&self) -> Surd {
        let mut coeff_num = BigInt::one();
        let mut coeff_den = BigInt::one();
        let mut radicand = BigUint::one();
        for (p, e) in &self.0 {
            let (half, odd) = (e.div_euclid(2), e.rem_euclid(2));
            let pp = BigInt::from(*p).pow(half.unsigned_abs() as u32);
            if half > 0 {
                coeff_num *= pp;
            } else {
                coeff_den *= pp;
            }
            if odd == 1 {
                radicand *= BigUint::from(*p);
            }
        }
        Surd::monomial(
            ExactScalar::real(BigRational::new(coeff_num, coeff_den)),
            radicand,
        )
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    terms: BTreeMap<BigUint, ExactScalar>,
}

impl Surd {
    pub fn zero() -> Self {
        Surd::default()
    }

    pub fn one() -> Self {
        Surd::from(ExactScalar::one())
    }

    /// `c·√radicand`; the radicand must be squarefree.
    pub fn monomial(c: ExactScalar, radicand: BigUint) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(radicand, c);
        }
        Surd { terms }
    }

    /// `√r` for a positive rational whose parts factor by trial division.
    pub fn sqrt_rational(r: &BigRational) -> Option<Surd> {
        if r.is_zero() {
            return Some(Surd::zero());
        }
        PrimePowers::from_rational(r).map(|p| p.sqrt())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &ExactScalar)> {
        self.terms.iter()
    }

    /// The value as an exact scalar if it has no irrational part.
    pub fn as_scalar(&self) -> Option<ExactScalar> {
        match self.terms.len() {
            0 => Some(ExactScalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn scale(&self, c: &ExactScalar) -> Surd {
        if c.is_zero() {
            return Surd::zero();
        }
        Surd {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn conj(&self) -> Surd {
        Surd {
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v.conj())).collect(),
        }
    }

    /// Inverse of a single-term surd.
    pub fn inv(&self) -> Option<Surd> {
        if self.terms.len() != 1 {
            return None;
        }
        let (m, c) = self.terms.iter().next().unwrap();
        let mm = ExactScalar::real(BigRational::from_integer(BigInt::from(m.clone())));
        Some(Surd::monomial((c * &mm).inv()?, m.clone()))
    }

    pub fn to_complex64(&self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let root = match m.to_f64() {
                Some(v) if v.is_finite() && v < 1e300 => v.sqrt(),
                _ => (0.5 * big_ln(&BigInt::from(m.clone()))).exp(),
            };
            acc += c.to_complex64() * root;
        }
        acc
    }

    fn add_term(&mut self, m: BigUint, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_default();
        *entry += &c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }
}

impl From<ExactScalar> for Surd {
    fn from(c: ExactScalar) -> Self {
        Surd::monomial(c, BigUint::one())
    }
}

impl<'a> Add<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        self + &(-o)
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl<'a> Mul<&'a Surd> for &'a Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        let mut out = Surd::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                // √m1·√m2 = g·√(m1 m2 / g²) with g = gcd(m1, m2)
                let g = m1.gcd(m2);
                let rad = (m1 / &g) * (m2 / &g);
                let gs = ExactScalar::real(BigRational::from_integer(BigInt::from(g)));
                out.add_term(rad, &(c1 * c2) * &gs);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Surd {
            type Output = Surd;
            fn $m(self, o: Surd) -> Surd {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl std::iter::Sum for Surd {
    fn sum<I: Iterator<Item = Surd>>(iter: I) -> Self {
        iter.fold(Surd::zero(), |acc, x| &acc + &x)
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.is_one() {
                    c.to_string()
                } else if c.is_one() {
                    format!("sqrt({m})")
                } else {
                    format!("({c})*sqrt({m})")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct SurdTerm {
    radicand: String,
    coeff: ExactScalar,
}

impl Serialize for Surd {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<SurdTerm> = self
            .terms
            .iter()
            .map(|(m, c)| SurdTerm {
                radicand: m.to_string(),
                coeff: c.clone(),
            })
            .collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Surd {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = Vec::<SurdTerm>::deserialize(d)?;
        let mut out = Surd::zero();
        for t in v {
            let m: BigUint = t.radicand.parse().map_err(serde::de::Error::custom)?;
            // re-normalize in case the radicand is not squarefree
            let pp = PrimePowers::from_rational(&BigRational::from_integer(BigInt::from(m)))
                .ok_or_else(|| serde::de::Error::custom("radicand too large to normalize"))?;
            out = &out + &pp.sqrt().scale(&t.coeff);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::scalar::rational;

    #[test]
    fn sqrt_normal_form() {
        let s = Surd::sqrt_rational(&rational(12, 1)).unwrap();
        assert_eq!(s, Surd::monomial(ExactScalar::from_int(2), BigUint::from(3u32)));
        let t = Surd::sqrt_rational(&rational(1, 2)).unwrap();
        assert_eq!(t, Surd::monomial(ExactScalar::from_ratio(1, 2), BigUint::from(2u32)));
        assert_eq!(Surd::sqrt_rational(&rational(9, 4)).unwrap().as_scalar(), Some(ExactScalar::from_ratio(3, 2)));
    }

    #[test]
    fn products_collapse() {
        let r2 = Surd::sqrt_rational(&rational(2, 1)).unwrap();
        let r6 = Surd::sqrt_rational(&rational(6, 1)).unwrap();
        assert_eq!((&r2 * &r2).as_scalar(), Some(ExactScalar::from_int(2)));
        let r12 = &r2 * &r6;
        assert_eq!(r12, Surd::sqrt_rational(&rational(12, 1)).unwrap());
        let inv = r6.inv().unwrap();
        assert_eq!((&inv * &r6).as_scalar(), Some(ExactScalar::one()));
    }

    #[test]
    fn sums_cancel() {
        let r3 = Surd::sqrt_rational(&rational(3, 1)).unwrap();
        let z = &(&r3 + &Surd::one()) - &r3;
        assert_eq!(z, Surd::one());
        assert!((&r3 - &r3).is_zero());
        assert!(((&r3 + &Surd::one()).to_complex64().re - (3f64.sqrt() + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn json_round_trip() {
        let s = &Surd::sqrt_rational(&rational(5, 3)).unwrap() + &Surd::one();
        let js = serde_json::to_string(&s).unwrap();
        let back: Surd = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
    }
}
