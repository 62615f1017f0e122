//! Polynomial sequences, their recurrences and norms, and symbolic scalar
//! sequences.

pub mod asymptotic;
pub mod norms;
pub mod parse;
pub mod recurrence;
pub mod sequence;

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::{change_basis, Degree, ExactScalar, Poly, Rat};

pub use norms::{laguerre_norm, norm_ratio};
pub use parse::{parse_sequence, ParseError};
pub use recurrence::{recurrence_coeffs, Recurrence3};
pub use sequence::{binom, Decision, SequenceSpec};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    Laguerre { alpha: Rat },
    Jacobi { alpha: Rat, beta: Rat },
    Hermite,
    #[serde(rename = "chebyshev_t")]
    ChebyshevT,
    #[serde(rename = "chebyshev_u")]
    ChebyshevU,
    /// `p_0 = T_0`, `p_n = 2 T_n`.
    #[serde(rename = "scaled_chebyshev_t")]
    ScaledChebyshevT,
    /// Generalized Laguerre-type polynomials `L_n^{α,K}`.
    Koornwinder { alpha: Rat, k: Rat },
    /// `p_n(x) = inner_n(x + shift)`.
    Translate { inner: Box<FamilyKind>, shift: Rat },
    #[serde(rename = "usertable")]
    UserTable { polys: Vec<Poly> },
}

impl FamilyKind {
    pub fn laguerre(alpha: Rat) -> Self {
        FamilyKind::Laguerre { alpha }
    }

    pub fn validate(&self) -> Result<()> {
        let gt_m1 = |r: &Rat, name: &str| -> Result<()> {
            if r.value() <= &-BigRational::one() {
                return Err(Error::BadParameter(format!("{name} = {r} must exceed -1")));
            }
            Ok(())
        };
        match self {
            FamilyKind::Laguerre { alpha } => gt_m1(alpha, "alpha"),
            FamilyKind::Jacobi { alpha, beta } => {
                gt_m1(alpha, "alpha")?;
                gt_m1(beta, "beta")
            }
            FamilyKind::Koornwinder { alpha, k } => {
                gt_m1(alpha, "alpha")?;
                if k.value() <= &BigRational::zero() {
                    return Err(Error::BadParameter(format!("K = {k} must be positive")));
                }
                Ok(())
            }
            FamilyKind::Translate { inner, .. } => inner.validate(),
            FamilyKind::UserTable { polys } => {
                for (n, p) in polys.iter().enumerate() {
                    if p.degree() != Degree::Finite(n) {
                        return Err(Error::NotGraded(n));
                    }
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Whether the kind is an orthogonal sequence of the catalog.
    pub fn is_orthogonal(&self) -> bool {
        match self {
            FamilyKind::Koornwinder { .. } | FamilyKind::UserTable { .. } => false,
            FamilyKind::Translate { inner, .. } => inner.is_orthogonal(),
            _ => true,
        }
    }

    pub fn label(&self) -> String {
        match self {
            FamilyKind::Laguerre { alpha } => format!("laguerre:{alpha}"),
            FamilyKind::Jacobi { alpha, beta } => format!("jacobi:{alpha},{beta}"),
            FamilyKind::Hermite => "hermite".into(),
            FamilyKind::ChebyshevT => "chebyshev_t".into(),
            FamilyKind::ChebyshevU => "chebyshev_u".into(),
            FamilyKind::ScaledChebyshevT => "scaled_chebyshev_t".into(),
            FamilyKind::Koornwinder { alpha, k } => format!("koornwinder:{alpha},{k}"),
            FamilyKind::Translate { inner, shift } => format!("translate({},{shift})", inner.label()),
            FamilyKind::UserTable { polys } => format!("usertable[{}]", polys.len()),
        }
    }

    /// Parses `laguerre:1/2`, `jacobi:a,b`, `hermite`, `chebyshev_t`,
    /// `chebyshev_u`, `scaled_chebyshev_t`, `koornwinder:a,K`,
    /// `translate:<shift>:<inner>`, or a JSON object with a `kind` field.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.starts_with('{') {
            let k: FamilyKind = serde_json::from_str(s).map_err(|e| Error::BadParameter(format!("family JSON: {e}")))?;
            k.validate()?;
            return Ok(k);
        }
        let (name, args) = s.split_once(':').unwrap_or((s, ""));
        let rat = |t: &str| -> Result<Rat> { t.trim().parse().map_err(|e: String| Error::BadParameter(e)) };
        let two = |t: &str| -> Result<(Rat, Rat)> {
            let (a, b) = t
                .split_once(',')
                .ok_or_else(|| Error::BadParameter(format!("'{name}' needs two parameters")))?;
            Ok((rat(a)?, rat(b)?))
        };
        let k = match name.to_ascii_lowercase().as_str() {
            "laguerre" | "l" => FamilyKind::Laguerre { alpha: if args.is_empty() { Rat::int(0) } else { rat(args)? } },
            "jacobi" | "p" => {
                let (alpha, beta) = two(args)?;
                FamilyKind::Jacobi { alpha, beta }
            }
            "hermite" | "h" => FamilyKind::Hermite,
            "chebyshev_t" | "chebyshevt" | "t" => FamilyKind::ChebyshevT,
            "chebyshev_u" | "chebyshevu" | "u" => FamilyKind::ChebyshevU,
            "scaled_chebyshev_t" | "scaledt" => FamilyKind::ScaledChebyshevT,
            "koornwinder" => {
                let (alpha, k) = two(args)?;
                FamilyKind::Koornwinder { alpha, k }
            }
            "translate" => {
                let (shift, inner) = args
                    .split_once(':')
                    .ok_or_else(|| Error::BadParameter("translate needs '<shift>:<family>'".into()))?;
                FamilyKind::Translate { inner: Box::new(FamilyKind::parse(inner)?), shift: rat(shift)? }
            }
            other => return Err(Error::BadParameter(format!("unknown family '{other}'"))),
        };
        k.validate()?;
        Ok(k)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A polynomial sequence with a memoized generator.
#[derive(Clone)]
pub struct PolySeq {
    kind: FamilyKind,
    cache: Arc<Mutex<Vec<Poly>>>,
    /// Underlying sequence for translates and the scaled Chebyshev kind.
    inner: Option<Box<PolySeq>>,
}

impl fmt::Debug for PolySeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolySeq({})", self.kind.label())
    }
}

impl PartialEq for PolySeq {
    fn eq(&self, o: &PolySeq) -> bool {
        self.kind == o.kind
    }
}

impl PolySeq {
    pub fn new(kind: FamilyKind) -> Result<Self> {
        kind.validate()?;
        let inner = match &kind {
            FamilyKind::Translate { inner, .. } => Some(Box::new(PolySeq::new((**inner).clone())?)),
            FamilyKind::ScaledChebyshevT => Some(Box::new(PolySeq::new(FamilyKind::ChebyshevT)?)),
            _ => None,
        };
        Ok(PolySeq { kind, cache: Arc::new(Mutex::new(Vec::new())), inner })
    }

    pub fn laguerre(alpha: Rat) -> Self {
        PolySeq::new(FamilyKind::Laguerre { alpha }).expect("valid laguerre parameter")
    }

    pub fn hermite() -> Self {
        PolySeq::new(FamilyKind::Hermite).unwrap()
    }

    pub fn chebyshev_t() -> Self {
        PolySeq::new(FamilyKind::ChebyshevT).unwrap()
    }

    pub fn chebyshev_u() -> Self {
        PolySeq::new(FamilyKind::ChebyshevU).unwrap()
    }

    pub fn kind(&self) -> &FamilyKind {
        &self.kind
    }

    pub fn parse(s: &str) -> Result<Self> {
        PolySeq::new(FamilyKind::parse(s)?)
    }

    /// `p_n`, exact and memoized.
    pub fn make_poly(&self, n: usize) -> Result<Poly> {
        {
            let c = self.cache.lock().expect("family cache poisoned");
            if let Some(p) = c.get(n) {
                return Ok(p.clone());
            }
        }
        let mut c = self.cache.lock().expect("family cache poisoned");
        while c.len() <= n {
            let k = c.len();
            let p = generate(&self.kind, self.inner.as_deref(), k, &c)?;
            c.push(p);
        }
        Ok(c[n].clone())
    }

    pub fn polys(&self, len: usize) -> Result<Vec<Poly>> {
        (0..len).map(|n| self.make_poly(n)).collect()
    }

    /// Coefficients of `f` in this basis.
    pub fn expand(&self, f: &Poly) -> Result<Vec<ExactScalar>> {
        change_basis(f, |j| self.make_poly(j))
    }

    /// `Σ c_j p_j`.
    pub fn combine(&self, c: &[ExactScalar]) -> Result<Poly> {
        crate::exactcore::expand_in(c, |j| self.make_poly(j))
    }
}

/// Coefficients of `from_n` in the basis `to`.
pub fn connection(from: &PolySeq, to: &PolySeq, n: usize) -> Result<Vec<ExactScalar>> {
    to.expand(&from.make_poly(n)?)
}

fn laguerre_poly(alpha: &ExactScalar, n: usize) -> Poly {
    // Σ_k (−1)^k / k! · binom(n+α, n−k) x^k
    let top = &ExactScalar::from_int(n as i64) + alpha;
    let mut coeffs = Vec::with_capacity(n + 1);
    let mut kfact = ExactScalar::one();
    for k in 0..=n {
        if k > 0 {
            kfact = &kfact * &ExactScalar::from_int(k as i64);
        }
        let sign = if k % 2 == 0 { ExactScalar::one() } else { ExactScalar::from_int(-1) };
        coeffs.push(&(&sign * &binom(&top, (n - k) as i64)) / &kfact);
    }
    Poly::new(coeffs)
}

fn jacobi_poly(alpha: &ExactScalar, beta: &ExactScalar, n: usize) -> Poly {
    // 2^{−n} Σ_m binom(n+α, m) binom(n+β, n−m) (x−1)^{n−m} (x+1)^m, expanded in y = x−1
    // with (x+1)^m = Σ_j binom(m, j) 2^{m−j} y^j
    let nn = ExactScalar::from_int(n as i64);
    let c: Vec<ExactScalar> =
        (0..=n).map(|m| &binom(&(&nn + alpha), m as i64) * &binom(&(&nn + beta), (n - m) as i64)).collect();
    let mut row = vec![BigInt::one()];
    let mut in_y = vec![ExactScalar::zero(); n + 1];
    for (m, cm) in c.iter().enumerate() {
        if m > 0 {
            let mut next = vec![BigInt::one(); m + 1];
            for j in 1..m {
                next[j] = &row[j - 1] + &row[j];
            }
            row = next;
        }
        if cm.is_zero() {
            continue;
        }
        for (j, b) in row.iter().enumerate() {
            let w = b << (m - j);
            in_y[n - m + j] += &(cm * &ExactScalar::real(BigRational::from_integer(w)));
        }
    }
    let scale = ExactScalar::from_int(2).pow(-(n as i64));
    Poly::new(in_y)
        .scale(&scale)
        .affine_compose(&ExactScalar::one(), &ExactScalar::from_int(-1))
        .expect("unit slope")
}

fn generate(kind: &FamilyKind, inner: Option<&PolySeq>, n: usize, prev: &[Poly]) -> Result<Poly> {
    let inner_poly = |n| inner.expect("inner sequence").make_poly(n);
    let two_x = Poly::from_ints(&[0, 2]);
    Ok(match kind {
        FamilyKind::Laguerre { alpha } => laguerre_poly(&alpha.scalar(), n),
        FamilyKind::Jacobi { alpha, beta } => jacobi_poly(&alpha.scalar(), &beta.scalar(), n),
        FamilyKind::Hermite => match n {
            0 => Poly::one(),
            1 => two_x,
            _ => &(&two_x * &prev[n - 1]) - &prev[n - 2].scale(&ExactScalar::from_int(2 * (n as i64 - 1))),
        },
        FamilyKind::ChebyshevT => match n {
            0 => Poly::one(),
            1 => Poly::x(),
            _ => &(&two_x * &prev[n - 1]) - &prev[n - 2],
        },
        FamilyKind::ChebyshevU => match n {
            0 => Poly::one(),
            1 => two_x,
            _ => &(&two_x * &prev[n - 1]) - &prev[n - 2],
        },
        FamilyKind::ScaledChebyshevT => {
            if n == 0 {
                Poly::one()
            } else {
                inner_poly(n)?.scale(&ExactScalar::from_int(2))
            }
        }
        FamilyKind::Koornwinder { alpha, k } => {
            // [1 + K binom(n+α, n−1)] L_n^α + K binom(n+α, n) (L_n^α)'
            let a = alpha.scalar();
            let top = &ExactScalar::from_int(n as i64) + &a;
            let l = laguerre_poly(&a, n);
            let c1 = &ExactScalar::one() + &(&k.scalar() * &binom(&top, n as i64 - 1));
            let c2 = &k.scalar() * &binom(&top, n as i64);
            &l.scale(&c1) + &l.derivative(1).scale(&c2)
        }
        FamilyKind::Translate { shift, .. } => {
            inner_poly(n)?.affine_compose(&ExactScalar::one(), &shift.scalar())?
        }
        FamilyKind::UserTable { polys } => polys.get(n).cloned().ok_or(Error::BasisTooShort(n))?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d)
    }

    #[test]
    fn laguerre_values() {
        let l = PolySeq::laguerre(Rat::int(0));
        assert_eq!(l.make_poly(0).unwrap(), Poly::one());
        assert_eq!(l.make_poly(2).unwrap(), Poly::new(vec![q(1, 1), q(-2, 1), q(1, 2)]));
    }

    #[test]
    fn chebyshev_u_at_one() {
        let u = PolySeq::chebyshev_u();
        for n in 0..10 {
            assert_eq!(u.make_poly(n).unwrap().eval_int(1), ExactScalar::from_int(n as i64 + 1));
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(u.make_poly(n).unwrap().eval_int(-1), ExactScalar::from_int(sign * (n as i64 + 1)));
        }
    }

    #[test]
    fn jacobi_low_degree() {
        // P_1^{(a,b)}(x) = ((a+b+2)x + (a−b))/2
        let p = PolySeq::new(FamilyKind::Jacobi { alpha: Rat::new(1, 2), beta: Rat::new(1, 3) }).unwrap();
        let p1 = p.make_poly(1).unwrap();
        assert_eq!(p1, Poly::new(vec![q(1, 12), q(17, 12)]));
        // Legendre P_2 = (3x² − 1)/2
        let leg = PolySeq::new(FamilyKind::Jacobi { alpha: Rat::int(0), beta: Rat::int(0) }).unwrap();
        assert_eq!(leg.make_poly(2).unwrap(), Poly::new(vec![q(-1, 2), q(0, 1), q(3, 2)]));
    }

    #[test]
    fn connection_examples() {
        let a = Rat::new(1, 2);
        let la = PolySeq::laguerre(a.clone());
        let la1 = PolySeq::laguerre(Rat(a.value() + BigRational::one()));
        for n in 0..8 {
            assert_eq!(connection(&la1, &la, n).unwrap(), vec![ExactScalar::one(); n + 1]);
        }
        let t = PolySeq::chebyshev_t();
        let u = PolySeq::chebyshev_u();
        assert_eq!(connection(&t, &u, 0).unwrap(), vec![q(1, 1)]);
        for n in 2..10 {
            let c = connection(&t, &u, n).unwrap();
            let mut want = vec![q(0, 1); n + 1];
            want[n] = q(1, 2);
            want[n - 2] = q(-1, 2);
            assert_eq!(c, want, "n={n}");
        }
    }

    #[test]
    fn koornwinder_degrees() {
        let k = PolySeq::new(FamilyKind::Koornwinder { alpha: Rat::new(1, 2), k: Rat::int(1) }).unwrap();
        for n in 0..8 {
            assert_eq!(k.make_poly(n).unwrap().degree(), Degree::Finite(n));
        }
        assert!(PolySeq::new(FamilyKind::Koornwinder { alpha: Rat::int(0), k: Rat::int(0) }).is_err());
    }

    #[test]
    fn parse_specs() {
        assert_eq!(FamilyKind::parse("laguerre:1/2").unwrap(), FamilyKind::Laguerre { alpha: Rat::new(1, 2) });
        assert_eq!(
            FamilyKind::parse(r#"{"kind":"laguerre","alpha":"1/1"}"#).unwrap(),
            FamilyKind::Laguerre { alpha: Rat::int(1) }
        );
        assert!(matches!(FamilyKind::parse("laguerre:-1"), Err(Error::BadParameter(_))));
        let t = FamilyKind::parse("translate:-3/2:chebyshev_t").unwrap();
        assert!(matches!(t, FamilyKind::Translate { .. }));
        assert!(FamilyKind::parse("bessel").is_err());
    }
}
