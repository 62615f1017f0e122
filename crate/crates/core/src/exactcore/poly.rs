//! Dense univariate polynomials over exact complex rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::ExactScalar;
use crate::error::{Error, Result};

/// Degree of a polynomial; the zero polynomial has degree `NegInfinity`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => write!(f, "-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

/// `coeffs[k]` is the coefficient of `x^k`. The last stored coefficient is
/// never zero.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(from = "RawPoly")]
pub struct Poly {
    coeffs: Vec<ExactScalar>,
}

/// Accepts `{"coeffs": [...]}` or a bare coefficient list.
#[derive(Deserialize)]
#[serde(untagged)]
enum RawPoly {
    Object { coeffs: Vec<ExactScalar> },
    List(Vec<ExactScalar>),
}

impl From<RawPoly> for Poly {
    fn from(r: RawPoly) -> Self {
        match r {
            RawPoly::Object { coeffs } | RawPoly::List(coeffs) => Poly::new(coeffs),
        }
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly::monomial(ExactScalar::one(), 1)
    }

    pub fn monomial(c: ExactScalar, k: usize) -> Self {
        let mut v = vec![ExactScalar::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&v| ExactScalar::from_int(v)).collect())
    }

    /// `a·x + b`.
    pub fn linear(a: ExactScalar, b: ExactScalar) -> Self {
        Poly::new(vec![b, a])
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> ExactScalar {
        self.coeffs.get(k).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> ExactScalar {
        self.coeffs.last().cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn scale(&self, c: &ExactScalar) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn conj(&self) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| a.conj()).collect())
    }

    /// Multiplication by `x^k`.
    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![ExactScalar::zero(); k];
        v.extend(self.coeffs.iter().cloned());
        Poly { coeffs: v }
    }

    /// k-th derivative.
    pub fn derivative(&self, k: usize) -> Poly {
        if k == 0 {
            return self.clone();
        }
        if self.coeffs.len() <= k {
            return Poly::zero();
        }
        let v = (k..self.coeffs.len())
            .map(|i| {
                // i (i-1) ... (i-k+1)
                let f: num_bigint::BigInt = ((i - k + 1)..=i).map(num_bigint::BigInt::from).product();
                &self.coeffs[i] * ExactScalar::real(f.into())
            })
            .collect();
        Poly::new(v)
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn eval_int(&self, n: i64) -> ExactScalar {
        self.eval(&ExactScalar::from_int(n))
    }

    pub fn eval_f64(&self, x: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c.to_complex64();
        }
        acc
    }

    /// `f(a·x + b)`.
    pub fn affine_compose(&self, a: &ExactScalar, b: &ExactScalar) -> Result<Poly> {
        if a.is_zero() {
            return Err(Error::DegenerateAffine);
        }
        Ok(self.compose(&Poly::linear(a.clone(), b.clone())))
    }

    /// `f(g(x))` by Horner's scheme.
    pub fn compose(&self, g: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * g) + &Poly::constant(c.clone());
        }
        acc
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact division by a polynomial, returning quotient and remainder.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().finite().expect("division by zero polynomial");
        let lead = d.leading();
        let mut rem = self.coeffs.clone();
        let mut q = vec![ExactScalar::zero(); rem.len().saturating_sub(dd)];
        while rem.len() > dd && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = &rem[top] / &lead;
            let shift = top - dd;
            for (i, dc) in d.coeffs.iter().enumerate() {
                let t = &c * dc;
                rem[shift + i] -= &t;
            }
            q[shift] = c;
            rem.pop();
            while rem.last().is_some_and(|c| c.is_zero()) {
                rem.pop();
            }
        }
        (Poly::new(q), Poly::new(rem))
    }

    pub fn to_string_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mut s = c.to_string();
            let compound = !c.is_real() && !c.re().is_zero();
            if compound {
                s = format!("({s})");
            }
            let neg = s.starts_with('-');
            let body = if neg { s[1..].to_string() } else { s };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                out.push_str(&body);
            } else if body == "1" {
                out.push_str(&mono);
            } else {
                out.push_str(&body);
                out.push_str(&mono);
            }
        }
        out
    }
}

/// Coefficients `(c_j)` with `f = Σ c_j basis_j`, by back-substitution down
/// the triangle. `basis(j)` must have degree exactly `j`.
pub fn change_basis<F>(f: &Poly, mut basis: F) -> Result<Vec<ExactScalar>>
where
    F: FnMut(usize) -> Result<Poly>,
{
    let n = match f.degree() {
        Degree::NegInfinity => return Ok(Vec::new()),
        Degree::Finite(n) => n,
    };
    let mut rem = f.coeffs.clone();
    let mut out = vec![ExactScalar::zero(); n + 1];
    for j in (0..=n).rev() {
        if rem[j].is_zero() {
            continue;
        }
        let b = basis(j)?;
        if b.degree() != Degree::Finite(j) {
            return Err(Error::NotGraded(j));
        }
        let c = &rem[j] / &b.leading();
        for (i, bc) in b.coeffs.iter().enumerate() {
            let t = &c * bc;
            rem[i] -= &t;
        }
        out[j] = c;
    }
    Ok(out)
}

/// `Σ c_j basis_j`.
pub fn expand_in<F>(c: &[ExactScalar], mut basis: F) -> Result<Poly>
where
    F: FnMut(usize) -> Result<Poly>,
{
    let mut acc = Poly::zero();
    for (j, cj) in c.iter().enumerate() {
        if !cj.is_zero() {
            acc = &acc + &basis(j)?.scale(cj);
        }
    }
    Ok(acc)
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_in("x"))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| &self.coeff(i) + &o.coeff(i)).collect())
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|i| &self.coeff(i) - &o.coeff(i)).collect())
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![ExactScalar::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let t = a * b;
                v[i + j] += &t;
            }
        }
        Poly::new(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(self, o: Poly) -> Poly {
        &self + &o
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(self, o: Poly) -> Poly {
        &self - &o
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, o: Poly) -> Poly {
        &self * &o
    }
}
