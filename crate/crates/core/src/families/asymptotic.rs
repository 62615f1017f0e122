//! Normal form for the catalog sequences and the decisions built on it.
//!
//! Every decidable catalog sequence is, for all `n` past some index, equal to
//!
//! ```text
//!     G(n) · Σ_b b^n P_b(n) / Q(n)
//! ```
//!
//! where the bases `b` are distinct non-zero complex rationals, `P_b` and `Q`
//! are exact polynomials, and `G(n)` is a product of Laguerre norm powers
//! `(r^β_{s·n+o})^p`, each of which grows like a constant times `n^{pβ/2}`.
//! Square-summability, series convergence, tail orders and limits are read
//! off this form exactly.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::norms::laguerre_norm;
use crate::error::{Error, Result};
use crate::exactcore::{ExactScalar, Poly, Rat, Surd};

/// `Σ_b b^n P_b(n) / Q(n)` with distinct non-zero bases and non-zero `P_b`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpRational {
    terms: Vec<(ExactScalar, Poly)>,
    den: Poly,
}

fn n_plus(a: i64, b: i64) -> Poly {
    // the polynomial a·n + b, as a substitution argument
    Poly::linear(ExactScalar::from_int(a), ExactScalar::from_int(b))
}

impl ExpRational {
    pub fn new(terms: Vec<(ExactScalar, Poly)>, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut out = ExpRational { terms: Vec::new(), den };
        for (b, p) in terms {
            out.push_term(b, p);
        }
        out
    }

    pub fn zero() -> Self {
        ExpRational { terms: Vec::new(), den: Poly::one() }
    }

    pub fn constant(c: ExactScalar) -> Self {
        ExpRational::poly(Poly::constant(c))
    }

    pub fn poly(p: Poly) -> Self {
        ExpRational::new(vec![(ExactScalar::one(), p)], Poly::one())
    }

    /// `b^n`.
    pub fn geometric(b: ExactScalar) -> Self {
        ExpRational::new(vec![(b, Poly::one())], Poly::one())
    }

    pub fn terms(&self) -> &[(ExactScalar, Poly)] {
        &self.terms
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn push_term(&mut self, b: ExactScalar, p: Poly) {
        if p.is_zero() {
            return;
        }
        assert!(!b.is_zero(), "zero base");
        if let Some(i) = self.terms.iter().position(|(c, _)| *c == b) {
            let sum = &self.terms[i].1 + &p;
            if sum.is_zero() {
                self.terms.remove(i);
            } else {
                self.terms[i].1 = sum;
            }
        } else {
            self.terms.push((b, p));
        }
    }

    fn over(&self, den: &Poly, factor: &Poly) -> Vec<(ExactScalar, Poly)> {
        let _ = den;
        self.terms.iter().map(|(b, p)| (b.clone(), p * factor)).collect()
    }

    pub fn add(&self, o: &ExpRational) -> ExpRational {
        if self.den == o.den {
            let mut out = self.clone();
            for (b, p) in &o.terms {
                out.push_term(b.clone(), p.clone());
            }
            return out;
        }
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let den = &self.den * &o.den;
        let mut out = ExpRational { terms: self.over(&den, &o.den), den };
        for (b, p) in o.over(&out.den.clone(), &self.den) {
            out.push_term(b, p);
        }
        out
    }

    pub fn neg(&self) -> ExpRational {
        ExpRational {
            terms: self.terms.iter().map(|(b, p)| (b.clone(), -p)).collect(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &ExpRational) -> ExpRational {
        self.add(&o.neg())
    }

    pub fn scale(&self, c: &ExactScalar) -> ExpRational {
        if c.is_zero() {
            return ExpRational::zero();
        }
        ExpRational {
            terms: self.terms.iter().map(|(b, p)| (b.clone(), p.scale(c))).collect(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &ExpRational) -> ExpRational {
        let mut out = ExpRational { terms: Vec::new(), den: &self.den * &o.den };
        for (b1, p1) in &self.terms {
            for (b2, p2) in &o.terms {
                out.push_term(b1 * b2, p1 * p2);
            }
        }
        out
    }

    /// Division by a single-term form `c^n P(n)`; `None` for anything else.
    pub fn div(&self, o: &ExpRational) -> Option<ExpRational> {
        if o.terms.len() != 1 {
            return None;
        }
        let (c, p) = &o.terms[0];
        let cinv = c.inv()?;
        let mut out = ExpRational { terms: Vec::new(), den: &self.den * p };
        for (b, q) in &self.terms {
            out.push_term(b * &cinv, q * &o.den);
        }
        Some(out)
    }

    /// `n ↦ value(n + s)`.
    pub fn shift(&self, s: i64) -> ExpRational {
        let arg = n_plus(1, s);
        let den = self.den.compose(&arg);
        let mut out = ExpRational { terms: Vec::new(), den };
        for (b, p) in &self.terms {
            out.push_term(b.clone(), p.compose(&arg).scale(&b.pow(s)));
        }
        out
    }

    /// `i ↦ value(M·i + r)`.
    pub fn restrict(&self, m: usize, r: usize) -> ExpRational {
        let arg = n_plus(m as i64, r as i64);
        let den = self.den.compose(&arg);
        let mut out = ExpRational { terms: Vec::new(), den };
        for (b, p) in &self.terms {
            out.push_term(b.pow(m as i64), p.compose(&arg).scale(&b.pow(r as i64)));
        }
        out
    }

    pub fn conj(&self) -> ExpRational {
        ExpRational {
            terms: self.terms.iter().map(|(b, p)| (b.conj(), p.conj())).collect(),
            den: self.den.conj(),
        }
    }

    pub fn eval(&self, n: usize) -> Result<ExactScalar> {
        let nn = ExactScalar::from_int(n as i64);
        let q = self.den.eval(&nn);
        if q.is_zero() {
            return Err(Error::DivisionByZero(n));
        }
        let mut acc = ExactScalar::zero();
        for (b, p) in &self.terms {
            acc += &(&b.pow(n as i64) * &p.eval(&nn));
        }
        Ok(&acc / &q)
    }

    /// Exponent of `n` in the size of the base-`b` term.
    fn exponent(&self, p: &Poly) -> BigRational {
        let dp = p.degree().finite().unwrap_or(0) as i64;
        let dq = self.den.degree().finite().unwrap_or(0) as i64;
        BigRational::from_integer(BigInt::from(dp - dq))
    }

    /// Non-negative integer `n` with `Q(n) = 0`, if any.
    pub fn den_has_natural_root(&self) -> Option<usize> {
        self.den_root_from(0)
    }

    pub fn den_root_from(&self, from: usize) -> Option<usize> {
        let bound = cauchy_bound(&self.den)?;
        (from..=bound).find(|&n| self.den.eval_int(n as i64).is_zero())
    }
}

/// Integer bound beyond which a non-constant polynomial has no roots.
pub fn cauchy_bound(p: &Poly) -> Option<usize> {
    let d = p.degree().finite()?;
    if d == 0 {
        return Some(0);
    }
    let lead = p.leading().norm_sqr();
    let mut worst = BigRational::zero();
    for c in &p.coeffs()[..d] {
        let r = c.norm_sqr() / &lead;
        if r > worst {
            worst = r;
        }
    }
    // 1 + max|a_i/a_d|, with an integer square-root ceiling
    let w = worst.ceil().to_integer();
    let s = w.sqrt() + BigInt::one();
    (s + BigInt::one()).to_usize()
}

/// `(r^β_{stride·n + offset})^power`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NormFactor {
    pub beta: Rat,
    pub stride: usize,
    pub offset: usize,
    pub power: i32,
}

fn canonical_norms(mut v: Vec<NormFactor>) -> Vec<NormFactor> {
    v.sort();
    let mut out: Vec<NormFactor> = Vec::new();
    for f in v {
        match out.last_mut() {
            Some(l) if l.beta == f.beta && l.stride == f.stride && l.offset == f.offset => {
                l.power += f.power;
            }
            _ => out.push(f),
        }
    }
    out.retain(|f| f.power != 0);
    out
}

/// Size class of a sequence along the indices where it is largest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Order {
    /// Zero from some index on.
    EventuallyZero,
    /// Bounded by `ρ^n` with `ρ < 1`.
    Geometric,
    /// `Θ(n^e)` on a set of positive density and `O(n^e)` everywhere.
    Power(BigRational),
    /// Exponential growth.
    Exponential,
}

impl Order {
    pub fn power_f64(&self) -> Option<f64> {
        match self {
            Order::Power(e) => e.to_f64(),
            _ => None,
        }
    }
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymForm {
    pub core: ExpRational,
    pub norms: Vec<NormFactor>,
    /// The form equals the sequence for every `n ≥ valid_from`.
    pub valid_from: usize,
}

impl AsymForm {
    pub fn new(core: ExpRational, norms: Vec<NormFactor>, valid_from: usize) -> Self {
        AsymForm { core, norms: canonical_norms(norms), valid_from }
    }

    pub fn exact(core: ExpRational) -> Self {
        AsymForm::new(core, Vec::new(), 0)
    }

    pub fn zero(valid_from: usize) -> Self {
        AsymForm::new(ExpRational::zero(), Vec::new(), valid_from)
    }

    pub fn is_eventually_zero(&self) -> bool {
        self.core.is_zero()
    }

    /// `Σ power·β/2`: the growth exponent contributed by norm factors.
    pub fn gamma(&self) -> BigRational {
        self.norms
            .iter()
            .map(|f| f.beta.value() * BigRational::from_integer(BigInt::from(f.power)) * half())
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn add(&self, o: &AsymForm) -> Option<AsymForm> {
        let valid_from = self.valid_from.max(o.valid_from);
        if o.is_eventually_zero() {
            return Some(AsymForm { valid_from, ..self.clone() });
        }
        if self.is_eventually_zero() {
            return Some(AsymForm { valid_from, ..o.clone() });
        }
        if self.norms != o.norms {
            return None;
        }
        Some(AsymForm {
            core: self.core.add(&o.core),
            norms: self.norms.clone(),
            valid_from,
        })
    }

    pub fn mul(&self, o: &AsymForm) -> AsymForm {
        let mut norms = self.norms.clone();
        norms.extend(o.norms.iter().cloned());
        AsymForm::new(self.core.mul(&o.core), norms, self.valid_from.max(o.valid_from))
    }

    pub fn scale(&self, c: &ExactScalar) -> AsymForm {
        AsymForm { core: self.core.scale(c), ..self.clone() }
    }

    pub fn neg(&self) -> AsymForm {
        AsymForm { core: self.core.neg(), ..self.clone() }
    }

    pub fn conj(&self) -> AsymForm {
        AsymForm { core: self.core.conj(), ..self.clone() }
    }

    /// `n ↦ value(n + s)`; only defined without norm factors.
    pub fn shift(&self, s: i64) -> Option<AsymForm> {
        if !self.norms.is_empty() && !self.is_eventually_zero() {
            return None;
        }
        let valid_from = (self.valid_from as i64 - s).max(0) as usize;
        Some(AsymForm::new(self.core.shift(s), Vec::new(), valid_from))
    }

    /// `i ↦ value(M·i + r)`.
    pub fn restrict(&self, m: usize, r: usize) -> AsymForm {
        let norms = self
            .norms
            .iter()
            .map(|f| NormFactor {
                beta: f.beta.clone(),
                stride: f.stride * m,
                offset: f.offset + f.stride * r,
                power: f.power,
            })
            .collect();
        let valid_from = self.valid_from.saturating_sub(r).div_ceil(m);
        AsymForm::new(self.core.restrict(m, r), norms, valid_from)
    }

    pub fn eval(&self, n: usize) -> Result<Surd> {
        let mut v = Surd::from(self.core.eval(n)?);
        if v.is_zero() {
            return Ok(v);
        }
        for f in &self.norms {
            let r = laguerre_norm(&f.beta, f.stride * n + f.offset)?;
            for _ in 0..f.power.unsigned_abs() {
                v = if f.power > 0 { &v * &r } else { &v * &r.inv().expect("norms are non-zero") };
            }
        }
        Ok(v)
    }

    /// Per-base exponents of the unit-modulus terms, and the largest modulus.
    fn profile(&self) -> (Ordering, Vec<(ExactScalar, BigRational)>) {
        let one = BigRational::one();
        let gamma = self.gamma();
        let mut top = Ordering::Less;
        let mut unit = Vec::new();
        for (b, p) in self.core.terms() {
            match b.norm_sqr().cmp(&one) {
                Ordering::Greater => top = Ordering::Greater,
                Ordering::Equal => {
                    if top == Ordering::Less {
                        top = Ordering::Equal;
                    }
                    unit.push((b.clone(), self.core.exponent(p) + &gamma));
                }
                Ordering::Less => {}
            }
        }
        (top, unit)
    }

    pub fn order(&self) -> Order {
        if self.is_eventually_zero() {
            return Order::EventuallyZero;
        }
        match self.profile() {
            (Ordering::Greater, _) => Order::Exponential,
            (Ordering::Less, _) => Order::Geometric,
            (Ordering::Equal, unit) => Order::Power(unit.into_iter().map(|(_, e)| e).max().unwrap()),
        }
    }

    pub fn is_l2(&self) -> bool {
        match self.order() {
            Order::EventuallyZero | Order::Geometric => true,
            Order::Exponential => false,
            Order::Power(e) => e < -half(),
        }
    }

    /// Convergence of `Σ s_n`.
    pub fn series_converges(&self) -> bool {
        match self.profile() {
            (Ordering::Greater, _) => false,
            (Ordering::Less, _) => true,
            (Ordering::Equal, unit) => unit.iter().all(|(b, e)| {
                if b.is_one() {
                    *e < -BigRational::one()
                } else {
                    e.is_negative()
                }
            }),
        }
    }

    /// Order of the tails `Σ_{u>n} s_u` of a convergent series.
    pub fn tail_order(&self) -> Option<Order> {
        if !self.series_converges() {
            return None;
        }
        if self.is_eventually_zero() {
            return Some(Order::EventuallyZero);
        }
        let (top, unit) = self.profile();
        if top == Ordering::Less {
            return Some(Order::Geometric);
        }
        let e = unit
            .into_iter()
            .map(|(b, e)| if b.is_one() { e + BigRational::one() } else { e })
            .max()
            .unwrap();
        Some(Order::Power(e))
    }

    /// `lim s_n` when it exists and is exact.
    pub fn limit(&self) -> Option<ExactScalar> {
        match self.order() {
            Order::EventuallyZero | Order::Geometric => return Some(ExactScalar::zero()),
            Order::Exponential => return None,
            Order::Power(e) if e.is_negative() => return Some(ExactScalar::zero()),
            Order::Power(e) if e.is_positive() => return None,
            Order::Power(_) => {}
        }
        if !self.norms.is_empty() {
            return None;
        }
        let (_, unit) = self.profile();
        let at_zero: Vec<_> = unit.iter().filter(|(_, e)| e.is_zero()).collect();
        if at_zero.len() != 1 || !at_zero[0].0.is_one() {
            return None;
        }
        let p = &self.core.terms().iter().find(|(b, _)| b.is_one())?.1;
        Some(&p.leading() / &self.core.den().leading())
    }

    /// For single-base forms: an index past which the sequence never vanishes.
    pub fn nonzero_beyond(&self) -> Option<usize> {
        if self.core.terms().len() != 1 {
            return None;
        }
        let (_, p) = &self.core.terms()[0];
        Some(cauchy_bound(p)?.max(self.valid_from))
    }

    /// A modulus `M` such that every residue class mod `M` has a single base.
    pub fn single_base_period(&self, max: usize) -> Option<usize> {
        'm: for m in 1..=max {
            let mut powers: Vec<ExactScalar> = Vec::new();
            for (b, _) in self.core.terms() {
                let bm = b.pow(m as i64);
                if !powers.is_empty() && powers[0] != bm {
                    continue 'm;
                }
                powers.push(bm);
            }
            return Some(m);
        }
        None
    }

    /// Exact zero set past `valid_from`: `Some(list)` when it is finite and
    /// known, with all indices beyond the last entry non-zero.
    pub fn finite_zero_set(&self) -> Option<Vec<usize>> {
        if self.is_eventually_zero() {
            return None;
        }
        let m = self.single_base_period(24)?;
        let mut zeros = Vec::new();
        for r in 0..m {
            let sub = self.restrict(m, r);
            if sub.is_eventually_zero() {
                return None;
            }
            let bound = sub.nonzero_beyond()?;
            for i in sub.valid_from..bound {
                if sub.core.eval(i).ok()?.is_zero() {
                    zeros.push(m * i + r);
                }
            }
        }
        zeros.sort();
        Some(zeros)
    }
}
