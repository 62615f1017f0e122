//! Three-term recurrences `x p_n = a_n p_{n+1} + b_n p_n + c_n p_{n−1}`.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::sequence::SequenceSpec;
use super::{FamilyKind, PolySeq};
use crate::error::{Error, Result};
use crate::exactcore::{ExactScalar, Poly};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Recurrence3 {
    pub a: SequenceSpec,
    pub b: SequenceSpec,
    pub c: SequenceSpec,
}

impl Recurrence3 {
    pub fn coeffs_at(&self, n: usize) -> Result<(ExactScalar, ExactScalar, ExactScalar)> {
        Ok((self.a.eval_scalar(n)?, self.b.eval_scalar(n)?, self.c.eval_scalar(n)?))
    }

    /// Rebuilds `p_0 = 1, …, p_{len−1}` from the recurrence.
    pub fn reconstruct(&self, len: usize) -> Result<Vec<Poly>> {
        let mut out: Vec<Poly> = Vec::with_capacity(len);
        if len == 0 {
            return Ok(out);
        }
        out.push(Poly::one());
        for n in 0..len.saturating_sub(1) {
            let (a, b, c) = self.coeffs_at(n)?;
            let a_inv = a.inv().ok_or(Error::DivisionByZero(n))?;
            let mut r = &(&Poly::x() * &out[n]) - &out[n].scale(&b);
            if n > 0 {
                r = &r - &out[n - 1].scale(&c);
            }
            out.push(r.scale(&a_inv));
        }
        Ok(out)
    }

    /// Checks the recurrence against `seq` for `n < horizon`.
    pub fn verify(&self, seq: &PolySeq, horizon: usize) -> Result<bool> {
        let p = seq.polys(horizon + 1)?;
        for n in 0..horizon {
            let (a, b, c) = self.coeffs_at(n)?;
            let mut rhs = &p[n + 1].scale(&a) + &p[n].scale(&b);
            if n > 0 {
                rhs = &rhs + &p[n - 1].scale(&c);
            }
            if &Poly::x() * &p[n] != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn with_head(head: ExactScalar, tail: SequenceSpec) -> SequenceSpec {
    SequenceSpec::UserTableWithTail { prefix: vec![head], tail: Box::new(tail) }
}

fn closed_form(kind: &FamilyKind) -> Result<Recurrence3> {
    let half = || SequenceSpec::constant(ExactScalar::from_ratio(1, 2));
    let q = |n, d| ExactScalar::from_ratio(n, d);
    Ok(match kind {
        FamilyKind::Laguerre { alpha } => {
            let a = alpha.scalar();
            Recurrence3 {
                a: SequenceSpec::poly(Poly::from_ints(&[-1, -1])),
                b: SequenceSpec::poly(Poly::new(vec![&a + &ExactScalar::one(), ExactScalar::from_int(2)])),
                c: SequenceSpec::poly(Poly::new(vec![-a, ExactScalar::from_int(-1)])),
            }
        }
        FamilyKind::Jacobi { alpha, beta } => {
            let (al, be) = (alpha.scalar(), beta.scalar());
            let s = &al + &be;
            let two = ExactScalar::from_int(2);
            let lin = |k: i64| Poly::new(vec![&s + &ExactScalar::from_int(k), two.clone()]);
            let np = |c: &ExactScalar| Poly::new(vec![c.clone(), ExactScalar::one()]);
            let a_num = (&np(&ExactScalar::one()) * &np(&(&s + &ExactScalar::one()))).scale(&two);
            let b_num = Poly::constant(&(&be * &be) - &(&al * &al));
            let c_num = (&np(&al) * &np(&be)).scale(&two);
            let s2 = &s + &two;
            Recurrence3 {
                a: with_head(&two / &s2, SequenceSpec::RationalInN { num: a_num, den: &lin(1) * &lin(2) }),
                b: with_head(&(&be - &al) / &s2, SequenceSpec::RationalInN { num: b_num, den: &lin(0) * &lin(2) }),
                c: with_head(ExactScalar::zero(), SequenceSpec::RationalInN { num: c_num, den: &lin(0) * &lin(1) }),
            }
        }
        FamilyKind::Hermite => Recurrence3 { a: half(), b: SequenceSpec::int(0), c: SequenceSpec::poly(Poly::x()) },
        FamilyKind::ChebyshevT => Recurrence3 {
            a: SequenceSpec::EventuallyConstant { prefix: vec![q(1, 1)], c: q(1, 2) },
            b: SequenceSpec::int(0),
            c: SequenceSpec::EventuallyConstant { prefix: vec![q(0, 1)], c: q(1, 2) },
        },
        FamilyKind::ChebyshevU => Recurrence3 { a: half(), b: SequenceSpec::int(0), c: half() },
        FamilyKind::ScaledChebyshevT => Recurrence3 {
            a: half(),
            b: SequenceSpec::int(0),
            c: SequenceSpec::EventuallyConstant { prefix: vec![q(0, 1), q(1, 1)], c: q(1, 2) },
        },
        FamilyKind::Translate { inner, shift } => {
            // x p_n(x) = (x+s) q_n(x+s) − s q_n(x+s)
            let r = closed_form(inner)?;
            Recurrence3 { a: r.a, b: r.b.minus(&SequenceSpec::constant(shift.scalar())), c: r.c }
        }
        FamilyKind::Koornwinder { .. } | FamilyKind::UserTable { .. } => {
            return Err(Error::NotOrthogonal(kind.label()))
        }
    })
}

/// Recurrence coefficients of a catalog orthogonal sequence, verified
/// against its generator for `n < horizon`.
pub fn recurrence_coeffs_to(seq: &PolySeq, horizon: usize) -> Result<Recurrence3> {
    let r = closed_form(seq.kind())?;
    if !r.verify(seq, horizon)? {
        return Err(Error::PreconditionError(format!("recurrence of {} failed verification", seq.kind())));
    }
    Ok(r)
}

pub fn recurrence_coeffs(seq: &PolySeq) -> Result<Recurrence3> {
    recurrence_coeffs_to(seq, crate::DEFAULT_HORIZON)
}
