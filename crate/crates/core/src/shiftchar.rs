//! Shift operators `τ_{a,b}(x^n) = (ax+b)^n` as infinite-order differential
//! operators, the induced change of recurrence coefficients, and the test of
//! when a dilation operator on an orthogonal sequence is a shift.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::{ExactScalar, Poly};
use crate::families::recurrence::recurrence_coeffs_to;
use crate::families::{PolySeq, Recurrence3, SequenceSpec};
use crate::formaldiff::{factorial, FormalDiffOp, Provenance};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShiftOp {
    pub a: ExactScalar,
    pub b: ExactScalar,
}

impl ShiftOp {
    pub fn new(a: ExactScalar, b: ExactScalar) -> Result<Self> {
        if a.is_zero() {
            return Err(Error::DegenerateAffine);
        }
        if !a.is_real() || !b.is_real() {
            return Err(Error::BadParameter("shift parameters must be real".into()));
        }
        Ok(ShiftOp { a, b })
    }

    /// `y(ax + b)`.
    pub fn apply(&self, y: &Poly) -> Result<Poly> {
        y.affine_compose(&self.a, &self.b)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }
}

/// `M_k = ((a−1)x + b)^k / k!`, with `M_0, …, M_K` computed.
pub fn shift_as_diffop(s: &ShiftOp, upto: usize) -> Result<FormalDiffOp> {
    if s.is_identity() {
        return Err(Error::IdentityOperator);
    }
    let base = Poly::linear(&s.a - &ExactScalar::one(), s.b.clone());
    let op = FormalDiffOp::lazy(
        Arc::new(move |k, prev: &[Poly]| {
            if k == 0 {
                return Ok(Poly::one());
            }
            // M_k = M_{k−1} · base / k
            Ok((&prev[k - 1] * &base).scale(&ExactScalar::from_ratio(1, k as i64)))
        }),
        Provenance::Shift { a: s.a.clone(), b: s.b.clone() },
    );
    op.coeffs(upto)?;
    Ok(op)
}

/// Closed form of `M_k`, independent of the lazy generator.
pub fn shift_coefficient(s: &ShiftOp, k: usize) -> Poly {
    Poly::linear(&s.a - &ExactScalar::one(), s.b.clone())
        .pow(k)
        .scale(&factorial(k).inv().expect("k! > 0"))
}

/// Recurrence coefficients of `(S p_n)` when `S = τ_{a,b}`:
/// `(a_n/a, (b_n − b)/a, c_n/a)`.
pub fn msz_transform(rec: &Recurrence3, a: &ExactScalar, b: &ExactScalar) -> Result<Recurrence3> {
    let inv = a.inv().ok_or(Error::DegenerateAffine)?;
    let simplify = |s: SequenceSpec| if inv.is_one() { s } else { s.scaled(inv.clone()) };
    let shifted = if b.is_zero() { rec.b.clone() } else { rec.b.minus(&SequenceSpec::constant(b.clone())) };
    Ok(Recurrence3 { a: simplify(rec.a.clone()), b: simplify(shifted), c: simplify(rec.c.clone()) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Theorem1Verdict {
    /// `S_{p,d} p_n = τ_{a,b} p_n` for all `n ≤ horizon`, with the necessary
    /// conditions confirmed over the same range.
    Equal {
        horizon: usize,
        a: ExactScalar,
        b: ExactScalar,
        /// The constant recurrence coefficient, `b/2`.
        b_n: ExactScalar,
        /// `q_n = p_n ∘ τ_{1,b/2}` satisfies `q_n(−x) = (−1)^n q_n(x)`.
        symmetric: bool,
    },
    NotEqual { witness: usize, diagnostic: String },
}

impl Theorem1Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Theorem1Verdict::Equal { .. })
    }
}

fn is_symmetric(q: &Poly, n: usize) -> Result<bool> {
    let flipped = q.affine_compose(&ExactScalar::from_int(-1), &ExactScalar::zero())?;
    let want = if n % 2 == 0 { q.clone() } else { -q };
    Ok(flipped == want)
}

/// Decides `S_{p,d} = τ_{a,b}` on `p_0, …, p_horizon`.
pub fn theorem1_check(p: &PolySeq, d: &SequenceSpec, a: &ExactScalar, b: &ExactScalar, horizon: usize) -> Result<Theorem1Verdict> {
    if !p.kind().is_orthogonal() {
        return Err(Error::NotOrthogonal(p.kind().label()));
    }
    let shift = ShiftOp::new(a.clone(), b.clone())?;
    let ds = d.scalar_table(horizon + 1)?;
    if !ds[0].is_one() {
        return Err(Error::PreconditionError(format!("d_0 = {} but must be 1", ds[0])));
    }
    if let Some(n) = ds.iter().position(|v| !v.is_real()) {
        return Err(Error::PreconditionError(format!("d_{n} is not real")));
    }
    if ds.iter().all(|v| v.is_one()) {
        return Err(Error::PreconditionError(format!("d is constant up to index {horizon}")));
    }
    let rec = recurrence_coeffs_to(p, horizon + 1)?;
    let bs = rec.b.scalar_table(horizon + 1)?;
    let half_b = b / &ExactScalar::from_int(2);
    let diagnose = |n: usize| -> String {
        if let Some(k) = (0..=horizon).find(|&k| ds[k] != a.pow(k as i64)) {
            return format!("d_{k} = {} differs from a^{k} = {}", ds[k], a.pow(k as i64));
        }
        if bs.iter().any(|v| v != &bs[0]) {
            return "b_n not constant".into();
        }
        if bs[0] != half_b {
            return format!("b_n = {} differs from b/2 = {half_b}", bs[0]);
        }
        format!("S(p_{n}) and tau(p_{n}) differ")
    };
    for n in 0..=horizon {
        let pn = p.make_poly(n)?;
        if pn.scale(&ds[n]) != shift.apply(&pn)? {
            return Ok(Theorem1Verdict::NotEqual { witness: n, diagnostic: diagnose(n) });
        }
    }
    // necessary conditions, all of which must hold once equality does
    let alternating = (0..=horizon).all(|n| ds[n] == ExactScalar::from_int(if n % 2 == 0 { 1 } else { -1 }));
    let minus_one = *a == ExactScalar::from_int(-1);
    let constant_b = bs.iter().all(|v| v == &half_b);
    let mut symmetric = true;
    for n in 0..=horizon {
        let q = p.make_poly(n)?.affine_compose(&ExactScalar::one(), &half_b)?;
        symmetric &= is_symmetric(&q, n)?;
    }
    if !(alternating && minus_one && constant_b && symmetric) {
        return Err(Error::PreconditionError(format!(
            "equality up to {horizon} without the necessary conditions (alternating: {alternating}, a = -1: {minus_one}, b_n = b/2: {constant_b}, symmetric: {symmetric})"
        )));
    }
    Ok(Theorem1Verdict::Equal { horizon, a: a.clone(), b: b.clone(), b_n: half_b, symmetric })
}
