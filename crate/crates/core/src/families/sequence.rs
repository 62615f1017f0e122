//! Symbolic scalar sequences `s = (s_n)_{n≥0}`.
//!
//! The catalog is closed under the operations the operator analysis needs
//! (sums, products, differences, residue-class restriction, conjugation), and
//! every member built from decidable parts has an exact normal form
//! ([`AsymForm`]) from which square-summability and related questions are
//! answered without sampling.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::asymptotic::{AsymForm, ExpRational, NormFactor, Order};
use super::norms::{check_beta, laguerre_norm_f64};
use crate::error::{Error, Result};
use crate::exactcore::{ExactScalar, Poly, Rat, Surd};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum SequenceSpec {
    /// `table[n]`, zero past the table.
    FiniteSupport { table: Vec<ExactScalar> },
    /// `prefix[n]`, then the constant `c`.
    EventuallyConstant { prefix: Vec<ExactScalar>, c: ExactScalar },
    PolynomialInN { coeffs: Poly },
    /// `num(n) / den(n)`; `den` must not vanish on ℕ₀.
    RationalInN { num: Poly, den: Poly },
    /// `base^n · factor(n)`.
    Geometric { base: ExactScalar, factor: Poly },
    /// `(-1)^n · factor(n)`.
    SignAlternating { factor: Poly },
    /// `1 / r_n^β`.
    LaguerreNormReciprocal { beta: Rat },
    /// `r_n^β`.
    LaguerreNorm { beta: Rat },
    /// `inner_n − inner_{n−1}` with `inner_{−1} = 0`.
    DifferenceOf { inner: Box<SequenceSpec> },
    /// `inner_n − inner_{n+step}`.
    ForwardDifference { inner: Box<SequenceSpec>, step: usize },
    /// `prefix[n]` for `n < prefix.len()`, `tail_n` afterwards.
    UserTableWithTail { prefix: Vec<ExactScalar>, tail: Box<SequenceSpec> },
    Sum { terms: Vec<SequenceSpec> },
    Product { factors: Vec<SequenceSpec> },
    /// `inner_{stride·n + offset}`.
    Subsequence { inner: Box<SequenceSpec>, stride: usize, offset: usize },
    Conj { inner: Box<SequenceSpec> },
    /// `−K·binom(n+α+1, n−1) − n + 1`.
    KoornwinderEigenvalues { alpha: Rat, k: Rat },
}

/// Three-valued answer for symbolic decisions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Decision {
    Yes,
    No,
    Undecidable,
}

impl Decision {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Decision::Yes
        } else {
            Decision::No
        }
    }

    pub fn known(self) -> Option<bool> {
        match self {
            Decision::Yes => Some(true),
            Decision::No => Some(false),
            Decision::Undecidable => None,
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Decision::Yes => "yes",
            Decision::No => "no",
            Decision::Undecidable => "undecidable",
        };
        f.write_str(s)
    }
}

/// `binom(t, k)` for rational `t`, with `binom(t, k) = 0` for `k < 0`.
pub fn binom(t: &ExactScalar, k: i64) -> ExactScalar {
    if k < 0 {
        return ExactScalar::zero();
    }
    let mut acc = ExactScalar::one();
    for i in 0..k {
        acc = &(&acc * &(t - &ExactScalar::from_int(i))) / &ExactScalar::from_int(i + 1);
    }
    acc
}

fn table_at(t: &[ExactScalar], n: usize) -> ExactScalar {
    t.get(n).cloned().unwrap_or_else(ExactScalar::zero)
}

impl SequenceSpec {
    pub fn constant(c: ExactScalar) -> Self {
        SequenceSpec::EventuallyConstant { prefix: Vec::new(), c }
    }

    pub fn int(c: i64) -> Self {
        SequenceSpec::constant(ExactScalar::from_int(c))
    }

    pub fn poly(p: Poly) -> Self {
        SequenceSpec::PolynomialInN { coeffs: p }
    }

    pub fn finite(table: Vec<ExactScalar>) -> Self {
        SequenceSpec::FiniteSupport { table }
    }

    /// `(-1)^n`.
    pub fn alternating() -> Self {
        SequenceSpec::SignAlternating { factor: Poly::one() }
    }

    pub fn difference(&self) -> Self {
        SequenceSpec::DifferenceOf { inner: Box::new(self.clone()) }
    }

    pub fn forward_difference(&self, step: usize) -> Self {
        SequenceSpec::ForwardDifference { inner: Box::new(self.clone()), step }
    }

    pub fn conj(&self) -> Self {
        SequenceSpec::Conj { inner: Box::new(self.clone()) }
    }

    pub fn times(&self, o: &SequenceSpec) -> Self {
        SequenceSpec::Product { factors: vec![self.clone(), o.clone()] }
    }

    pub fn plus(&self, o: &SequenceSpec) -> Self {
        SequenceSpec::Sum { terms: vec![self.clone(), o.clone()] }
    }

    pub fn scaled(&self, c: ExactScalar) -> Self {
        SequenceSpec::constant(c).times(self)
    }

    pub fn minus(&self, o: &SequenceSpec) -> Self {
        self.plus(&o.scaled(ExactScalar::from_int(-1)))
    }

    pub fn restrict(&self, stride: usize, offset: usize) -> Self {
        SequenceSpec::Subsequence { inner: Box::new(self.clone()), stride, offset }
    }

    /// Checks parameters that would make evaluation fail everywhere.
    pub fn validate(&self) -> Result<()> {
        use SequenceSpec::*;
        match self {
            RationalInN { den, .. } => {
                if den.is_zero() {
                    return Err(Error::BadParameter("zero denominator".into()));
                }
                if let Some(n) = ExpRational::new(vec![(ExactScalar::one(), Poly::one())], den.clone()).den_has_natural_root() {
                    return Err(Error::DivisionByZero(n));
                }
                Ok(())
            }
            Geometric { base, .. } if base.is_zero() => Ok(()),
            LaguerreNormReciprocal { beta } | LaguerreNorm { beta } => check_beta(beta),
            DifferenceOf { inner } | ForwardDifference { inner, .. } | Conj { inner } => inner.validate(),
            Subsequence { inner, stride, .. } => {
                if *stride == 0 {
                    return Err(Error::BadParameter("subsequence stride must be positive".into()));
                }
                inner.validate()
            }
            UserTableWithTail { prefix, tail } => match &**tail {
                // poles covered by the prefix are harmless
                RationalInN { den, .. } if !den.is_zero() => {
                    let bound = super::asymptotic::cauchy_bound(den).unwrap_or(0);
                    match (prefix.len()..=bound).find(|&n| den.eval_int(n as i64).is_zero()) {
                        Some(n) => Err(Error::DivisionByZero(n)),
                        None => Ok(()),
                    }
                }
                t => t.validate(),
            },
            Sum { terms } => terms.iter().try_for_each(|t| t.validate()),
            Product { factors } => factors.iter().try_for_each(|t| t.validate()),
            _ => Ok(()),
        }
    }

    /// Exact value at `n`.
    pub fn eval(&self, n: usize) -> Result<Surd> {
        use SequenceSpec::*;
        let scalar = |v: ExactScalar| Ok(Surd::from(v));
        match self {
            FiniteSupport { table } => scalar(table_at(table, n)),
            EventuallyConstant { prefix, c } => scalar(prefix.get(n).cloned().unwrap_or_else(|| c.clone())),
            PolynomialInN { coeffs } => scalar(coeffs.eval_int(n as i64)),
            RationalInN { num, den } => {
                let q = den.eval_int(n as i64);
                if q.is_zero() {
                    return Err(Error::DivisionByZero(n));
                }
                scalar(&num.eval_int(n as i64) / &q)
            }
            Geometric { base, factor } => scalar(&base.pow(n as i64) * &factor.eval_int(n as i64)),
            SignAlternating { factor } => {
                let v = factor.eval_int(n as i64);
                scalar(if n % 2 == 0 { v } else { -v })
            }
            LaguerreNormReciprocal { beta } => {
                Ok(super::norms::laguerre_norm(beta, n)?.inv().expect("norms are non-zero"))
            }
            LaguerreNorm { beta } => super::norms::laguerre_norm(beta, n),
            DifferenceOf { inner } => {
                let a = inner.eval(n)?;
                if n == 0 {
                    return Ok(a);
                }
                Ok(&a - &inner.eval(n - 1)?)
            }
            ForwardDifference { inner, step } => Ok(&inner.eval(n)? - &inner.eval(n + step)?),
            UserTableWithTail { prefix, tail } => match prefix.get(n) {
                Some(v) => scalar(v.clone()),
                None => tail.eval(n),
            },
            Sum { terms } => {
                let mut acc = Surd::zero();
                for t in terms {
                    acc = &acc + &t.eval(n)?;
                }
                Ok(acc)
            }
            Product { factors } => {
                let mut acc = Surd::one();
                for t in factors {
                    let v = t.eval(n)?;
                    if v.is_zero() {
                        return Ok(Surd::zero());
                    }
                    acc = &acc * &v;
                }
                Ok(acc)
            }
            Subsequence { inner, stride, offset } => inner.eval(stride * n + offset),
            Conj { inner } => Ok(inner.eval(n)?.conj()),
            KoornwinderEigenvalues { alpha, k } => {
                let nn = ExactScalar::from_int(n as i64);
                let top = &(&nn + &alpha.scalar()) + &ExactScalar::one();
                let b = binom(&top, n as i64 - 1);
                let v = &(&(-&(&k.scalar() * &b)) - &nn) + &ExactScalar::one();
                scalar(v)
            }
        }
    }

    /// Exact value at `n` when it is rational (no square roots).
    pub fn eval_scalar(&self, n: usize) -> Result<ExactScalar> {
        self.eval(n)?.as_scalar().ok_or(Error::Irrational(n))
    }

    /// Floating-point value; norm factors are evaluated in the log domain so
    /// large indices stay cheap.
    pub fn eval_f64(&self, n: usize) -> Result<Complex64> {
        use SequenceSpec::*;
        match self {
            LaguerreNormReciprocal { beta } => Ok(Complex64::new(1.0 / laguerre_norm_f64(beta.to_f64(), n), 0.0)),
            LaguerreNorm { beta } => Ok(Complex64::new(laguerre_norm_f64(beta.to_f64(), n), 0.0)),
            DifferenceOf { inner } => {
                let a = inner.eval_f64(n)?;
                if n == 0 {
                    return Ok(a);
                }
                Ok(a - inner.eval_f64(n - 1)?)
            }
            ForwardDifference { inner, step } => Ok(inner.eval_f64(n)? - inner.eval_f64(n + step)?),
            UserTableWithTail { prefix, tail } => match prefix.get(n) {
                Some(v) => Ok(v.to_complex64()),
                None => tail.eval_f64(n),
            },
            Sum { terms } => terms.iter().try_fold(Complex64::new(0.0, 0.0), |a, t| Ok(a + t.eval_f64(n)?)),
            Product { factors } => factors.iter().try_fold(Complex64::new(1.0, 0.0), |a, t| Ok(a * t.eval_f64(n)?)),
            Subsequence { inner, stride, offset } => inner.eval_f64(stride * n + offset),
            Conj { inner } => Ok(inner.eval_f64(n)?.conj()),
            _ => Ok(self.eval(n)?.to_complex64()),
        }
    }

    /// First `len` exact values.
    pub fn table(&self, len: usize) -> Result<Vec<Surd>> {
        (0..len).map(|n| self.eval(n)).collect()
    }

    /// First `len` values, required to be rational.
    pub fn scalar_table(&self, len: usize) -> Result<Vec<ExactScalar>> {
        (0..len).map(|n| self.eval_scalar(n)).collect()
    }

    /// Exact normal form, or `None` when the sequence is outside the
    /// decidable part of the catalog.
    pub fn asym(&self) -> Option<AsymForm> {
        use SequenceSpec::*;
        let one = ExactScalar::one;
        Some(match self {
            FiniteSupport { table } => AsymForm::zero(table.len()),
            EventuallyConstant { prefix, c } => {
                AsymForm::new(ExpRational::constant(c.clone()), Vec::new(), prefix.len())
            }
            PolynomialInN { coeffs } => AsymForm::exact(ExpRational::poly(coeffs.clone())),
            RationalInN { num, den } => {
                if den.is_zero() {
                    return None;
                }
                AsymForm::exact(ExpRational::new(vec![(one(), num.clone())], den.clone()))
            }
            Geometric { base, factor } => {
                if base.is_zero() {
                    AsymForm::zero(1)
                } else {
                    AsymForm::exact(ExpRational::new(vec![(base.clone(), factor.clone())], Poly::one()))
                }
            }
            SignAlternating { factor } => {
                AsymForm::exact(ExpRational::new(vec![(ExactScalar::from_int(-1), factor.clone())], Poly::one()))
            }
            LaguerreNormReciprocal { beta } | LaguerreNorm { beta } => {
                let power = if matches!(self, LaguerreNorm { .. }) { 1 } else { -1 };
                AsymForm::new(
                    ExpRational::constant(one()),
                    vec![NormFactor { beta: beta.clone(), stride: 1, offset: 0, power }],
                    0,
                )
            }
            DifferenceOf { inner } => {
                let a = inner.asym()?;
                let prev = a.shift(-1)?;
                let mut out = a.add(&prev.neg())?;
                out.valid_from = a.valid_from + 1;
                out
            }
            ForwardDifference { inner, step } => {
                let a = inner.asym()?;
                a.add(&a.shift(*step as i64)?.neg())?
            }
            UserTableWithTail { prefix, tail } => {
                let mut t = tail.asym()?;
                t.valid_from = t.valid_from.max(prefix.len());
                t
            }
            Sum { terms } => {
                let mut acc = AsymForm::zero(0);
                for t in terms {
                    acc = acc.add(&t.asym()?)?;
                }
                acc
            }
            Product { factors } => {
                let mut acc = AsymForm::exact(ExpRational::constant(one()));
                for t in factors {
                    acc = acc.mul(&t.asym()?);
                }
                acc
            }
            Subsequence { inner, stride, offset } => {
                if *stride == 0 {
                    return None;
                }
                inner.asym()?.restrict(*stride, *offset)
            }
            Conj { inner } => inner.asym()?.conj(),
            KoornwinderEigenvalues { alpha, k } => {
                // binom(n+α+1, α+2) is a polynomial in n when α is an integer ≥ −1
                let a = alpha.value();
                if !a.is_integer() || a < &-BigRational::one() {
                    return None;
                }
                let m: i64 = (a + BigRational::from_integer(BigInt::from(2))).to_integer().try_into().ok()?;
                let mut p = Poly::one();
                let shift = &alpha.scalar() + &ExactScalar::one();
                for i in 0..m {
                    p = &p * &Poly::linear(ExactScalar::one(), &shift - &ExactScalar::from_int(i));
                }
                let fact: BigInt = (1..=m).map(BigInt::from).product();
                let b = p.scale(&ExactScalar::real(BigRational::new(BigInt::one(), fact)));
                let v = &(&b.scale(&-k.scalar()) - &Poly::x()) + &Poly::one();
                AsymForm::exact(ExpRational::poly(v))
            }
        })
    }

    /// Whether `Σ |s_n|²` is finite.
    pub fn l2_membership(&self) -> Decision {
        match self.asym() {
            Some(a) => Decision::from_bool(a.is_l2()),
            None => Decision::Undecidable,
        }
    }

    /// Whether `Σ s_n` converges.
    pub fn series_converges(&self) -> Decision {
        match self.asym() {
            Some(a) => Decision::from_bool(a.series_converges()),
            None => Decision::Undecidable,
        }
    }

    pub fn order(&self) -> Option<Order> {
        self.asym().map(|a| a.order())
    }

    /// Whether the sequence is zero from some index on.
    pub fn eventually_zero(&self) -> Decision {
        match self.asym() {
            Some(a) => Decision::from_bool(a.is_eventually_zero()),
            None => Decision::Undecidable,
        }
    }

    pub fn limit(&self) -> Option<ExactScalar> {
        self.asym()?.limit()
    }

    /// Whether every value is real, checked symbolically where possible.
    pub fn is_real_up_to(&self, horizon: usize) -> Result<bool> {
        for n in 0..=horizon {
            for (_, c) in self.eval(n)?.terms() {
                if !c.is_real() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Index of the first zero value up to `horizon`.
    pub fn first_zero(&self, horizon: usize) -> Result<Option<usize>> {
        for n in 0..=horizon {
            if self.eval(n)?.is_zero() {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    pub fn describe(&self) -> String {
        use SequenceSpec::*;
        let list = |v: &[ExactScalar]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            FiniteSupport { table } => format!("finite[{}]", list(table)),
            EventuallyConstant { prefix, c } if prefix.is_empty() => format!("const {c}"),
            EventuallyConstant { prefix, c } => format!("[{}] then const {c}", list(prefix)),
            PolynomialInN { coeffs } => coeffs.to_string_in("n"),
            RationalInN { num, den } => format!("({})/({})", num.to_string_in("n"), den.to_string_in("n")),
            Geometric { base, factor } => format!("({base})^n*({})", factor.to_string_in("n")),
            SignAlternating { factor } => format!("(-1)^n*({})", factor.to_string_in("n")),
            LaguerreNormReciprocal { beta } => format!("1/r_n^{beta}"),
            LaguerreNorm { beta } => format!("r_n^{beta}"),
            DifferenceOf { inner } => format!("diff({})", inner.describe()),
            ForwardDifference { inner, step } => format!("fdiff{step}({})", inner.describe()),
            UserTableWithTail { prefix, tail } => format!("[{}] then {}", list(prefix), tail.describe()),
            Sum { terms } => terms.iter().map(|t| t.describe()).collect::<Vec<_>>().join(" + "),
            Product { factors } => factors.iter().map(|t| format!("({})", t.describe())).collect::<Vec<_>>().join("*"),
            Subsequence { inner, stride, offset } => format!("({})[{stride}n+{offset}]", inner.describe()),
            Conj { inner } => format!("conj({})", inner.describe()),
            KoornwinderEigenvalues { alpha, k } => format!("koornwinder eigenvalues alpha={alpha} K={k}"),
        }
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

/// Sign of a real rational, used by callers that need monotonicity facts.
pub fn sign(r: &BigRational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::rational;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d)
    }

    #[test]
    fn l2_examples() {
        assert_eq!(SequenceSpec::int(2).l2_membership(), Decision::No);
        assert_eq!(SequenceSpec::int(0).l2_membership(), Decision::Yes);
        let alpha = Rat::new(1, 2);
        let beta = Rat(alpha.value() + BigRational::one());
        assert_eq!(SequenceSpec::LaguerreNormReciprocal { beta }.l2_membership(), Decision::Yes);
        assert_eq!(SequenceSpec::LaguerreNormReciprocal { beta: Rat::int(1) }.l2_membership(), Decision::No);
        let r = SequenceSpec::RationalInN { num: Poly::one(), den: Poly::from_ints(&[1, 1]) };
        assert_eq!(r.l2_membership(), Decision::Yes);
        let mut partial = 0.0;
        for n in 0..10_000 {
            partial += r.eval_f64(n).unwrap().norm_sqr();
        }
        assert!(partial < std::f64::consts::PI.powi(2) / 6.0);
        let fin = SequenceSpec::finite(vec![q(1, 1), q(5, 1)]);
        assert_eq!(fin.l2_membership(), Decision::Yes);
        assert_eq!(SequenceSpec::poly(Poly::from_ints(&[1, -2])).l2_membership(), Decision::No);
        assert_eq!(
            SequenceSpec::Geometric { base: q(2, 3), factor: Poly::from_ints(&[0, 0, 5]) }.l2_membership(),
            Decision::Yes
        );
    }

    #[test]
    fn differences() {
        let d = SequenceSpec::poly(Poly::from_ints(&[1, -2]));
        let c = d.difference();
        assert_eq!(c.scalar_table(4).unwrap(), vec![q(1, 1), q(-2, 1), q(-2, 1), q(-2, 1)]);
        assert_eq!(c.l2_membership(), Decision::No);
        let f = d.forward_difference(1);
        assert_eq!(f.eval_scalar(5).unwrap(), q(2, 1));
        let a = c.asym().unwrap();
        assert_eq!(a.valid_from, 1);
    }

    #[test]
    fn koornwinder_eigenvalues_match_polynomial_form() {
        let s = SequenceSpec::KoornwinderEigenvalues { alpha: Rat::int(1), k: Rat::int(2) };
        let a = s.asym().unwrap();
        for n in 0..12 {
            assert_eq!(Surd::from(a.core.eval(n).unwrap()), s.eval(n).unwrap(), "n={n}");
        }
        let half = SequenceSpec::KoornwinderEigenvalues { alpha: Rat::new(1, 2), k: Rat::int(1) };
        assert!(half.asym().is_none());
        assert_eq!(half.eval_scalar(0).unwrap(), q(1, 1));
        assert_eq!(half.eval_scalar(1).unwrap(), q(-1, 1));
    }

    #[test]
    fn norm_products_evaluate_exactly() {
        let beta = Rat::int(1);
        let s = SequenceSpec::LaguerreNorm { beta: beta.clone() }.times(&SequenceSpec::LaguerreNormReciprocal { beta });
        for n in 0..6 {
            assert_eq!(s.eval(n).unwrap(), Surd::one());
        }
        let r = SequenceSpec::LaguerreNorm { beta: Rat::int(1) };
        assert_eq!(r.eval(2).unwrap(), Surd::sqrt_rational(&rational(3, 1)).unwrap());
    }

    #[test]
    fn json_round_trip() {
        let s = SequenceSpec::UserTableWithTail {
            prefix: vec![q(1, 1)],
            tail: Box::new(SequenceSpec::constant(q(1, 2))),
        };
        let js = serde_json::to_string(&s).unwrap();
        assert!(js.contains("\"tag\":\"user_table_with_tail\""));
        let back: SequenceSpec = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
    }
}
