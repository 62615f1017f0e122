//! Formal linear differential operators `η(y) = Σ_k M_k y^{(k)}` with
//! `deg M_k ≤ k`, possibly of infinite order.

use std::fmt;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::{Degree, ExactScalar, Poly, Rat};
use crate::families::{binom, FamilyKind, PolySeq, SequenceSpec};

/// `p(n, r) = n!/(n−r)!`, with `p(0, r) = 0`.
pub fn falling(n: usize, r: usize) -> ExactScalar {
    if n == 0 || r > n {
        return ExactScalar::zero();
    }
    let v: BigInt = ((n - r + 1)..=n).map(BigInt::from).product();
    ExactScalar::real(BigRational::from_integer(v))
}

pub fn factorial(n: usize) -> ExactScalar {
    let v: BigInt = (1..=n).map(BigInt::from).product();
    ExactScalar::real(BigRational::from_integer(v))
}

/// Generator for `M_k` given `M_0, …, M_{k−1}`.
pub type CoeffFn = dyn Fn(usize, &[Poly]) -> Result<Poly> + Send + Sync;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Classical { name: String },
    Koornwinder { alpha: Rat, k: Rat },
    Synthesized { p: FamilyKind, d: SequenceSpec },
    Shift { a: ExactScalar, b: ExactScalar },
    UserGiven,
}

#[derive(Clone)]
pub struct FormalDiffOp {
    generator: Option<Arc<CoeffFn>>,
    cache: Arc<Mutex<Vec<Poly>>>,
    known_order: Option<usize>,
    provenance: Provenance,
    diagnostics: Vec<String>,
}

impl fmt::Debug for FormalDiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FormalDiffOp")
            .field("provenance", &self.provenance)
            .field("known_order", &self.known_order)
            .field("cached", &self.cache.lock().map(|c| c.len()).unwrap_or(0))
            .finish()
    }
}

/// JSON shape of an operator: `{"M": [poly, …], "order": r | null}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OpSpec {
    #[serde(rename = "M")]
    pub m: Vec<Poly>,
    #[serde(default)]
    pub order: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum OrderProbe {
    /// Known by construction.
    FiniteOrder { order: usize },
    /// Every scanned `M_k` beyond `last_nonzero` vanished, up to `horizon`.
    ObservedOrder { last_nonzero: usize, horizon: usize },
    NoVanishingUpTo { horizon: usize },
    ZeroOperator,
}

fn check_degree(k: usize, m: &Poly) -> Result<()> {
    match m.degree() {
        Degree::Finite(d) if d > k => Err(Error::PreconditionError(format!("deg M_{k} = {d} exceeds {k}"))),
        _ => Ok(()),
    }
}

fn last_nonzero(ms: &[Poly]) -> Option<usize> {
    ms.iter().rposition(|m| !m.is_zero())
}

impl FormalDiffOp {
    /// Finite-order operator from an explicit table; `M_k = 0` beyond it.
    pub fn from_table(ms: Vec<Poly>, provenance: Provenance) -> Result<Self> {
        for (k, m) in ms.iter().enumerate() {
            check_degree(k, m)?;
        }
        let known_order = last_nonzero(&ms);
        Ok(FormalDiffOp {
            generator: None,
            cache: Arc::new(Mutex::new(ms)),
            known_order,
            provenance,
            diagnostics: Vec::new(),
        })
    }

    /// Operator from user data; a stated order must match the table.
    pub fn user_given(ms: Vec<Poly>, order: Option<usize>) -> Result<Self> {
        let op = FormalDiffOp::from_table(ms, Provenance::UserGiven)?;
        if let Some(r) = order {
            if op.known_order != Some(r) {
                return Err(Error::BadParameter(format!(
                    "stated order {r} but the last non-zero coefficient is {}",
                    op.known_order.map_or("none".to_string(), |k| format!("M_{k}"))
                )));
            }
        }
        Ok(op)
    }

    pub fn from_spec(spec: &OpSpec) -> Result<Self> {
        FormalDiffOp::user_given(spec.m.clone(), spec.order)
    }

    /// Infinite or unknown-order operator generated lazily.
    pub fn lazy(generator: Arc<CoeffFn>, provenance: Provenance) -> Self {
        FormalDiffOp {
            generator: Some(generator),
            cache: Arc::new(Mutex::new(Vec::new())),
            known_order: None,
            provenance,
            diagnostics: Vec::new(),
        }
    }

    pub fn with_diagnostic(mut self, msg: String) -> Self {
        self.diagnostics.push(msg);
        self
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn diagnostics(&self) -> &[String] {
        &self.diagnostics
    }

    pub fn known_order(&self) -> Option<usize> {
        self.known_order
    }

    pub fn is_lazy(&self) -> bool {
        self.generator.is_some()
    }

    /// `M_k`.
    pub fn coeff(&self, k: usize) -> Result<Poly> {
        let mut cache = self.cache.lock().expect("operator cache poisoned");
        if let Some(m) = cache.get(k) {
            return Ok(m.clone());
        }
        let Some(g) = &self.generator else {
            return Ok(Poly::zero());
        };
        while cache.len() <= k {
            let j = cache.len();
            let m = g(j, &cache)?;
            check_degree(j, &m)?;
            cache.push(m);
        }
        Ok(cache[k].clone())
    }

    /// `M_0, …, M_K`.
    pub fn coeffs(&self, upto: usize) -> Result<Vec<Poly>> {
        (0..=upto).map(|k| self.coeff(k)).collect()
    }

    /// `m_{k,t}`, the coefficient of `x^t` in `M_k`.
    pub fn m(&self, k: usize, t: usize) -> Result<ExactScalar> {
        Ok(self.coeff(k)?.coeff(t))
    }

    pub fn apply(&self, y: &Poly) -> Result<Poly> {
        let Some(deg) = y.degree().finite() else {
            return Ok(Poly::zero());
        };
        let mut acc = Poly::zero();
        for k in 0..=deg {
            let m = self.coeff(k)?;
            if !m.is_zero() {
                acc = &acc + &(&m * &y.derivative(k));
            }
        }
        Ok(acc)
    }

    pub fn order_probe(&self, horizon: usize) -> Result<OrderProbe> {
        if self.generator.is_none() {
            let cache = self.cache.lock().expect("operator cache poisoned");
            return Ok(match last_nonzero(&cache) {
                Some(order) => OrderProbe::FiniteOrder { order },
                None => OrderProbe::ZeroOperator,
            });
        }
        let ms = self.coeffs(horizon)?;
        Ok(match last_nonzero(&ms) {
            Some(r) if r == horizon => OrderProbe::NoVanishingUpTo { horizon },
            Some(last_nonzero) => OrderProbe::ObservedOrder { last_nonzero, horizon },
            None => OrderProbe::ZeroOperator,
        })
    }

    /// The first `K + 1` coefficients as a JSON-ready spec.
    pub fn to_spec(&self, upto: usize) -> Result<OpSpec> {
        let order = if self.generator.is_none() { self.known_order } else { None };
        let len = match order {
            Some(r) => r.min(upto),
            None => upto,
        };
        Ok(OpSpec { m: self.coeffs(len)?, order })
    }

    /// Human-readable form, e.g. `(2x) y'' + (-2x + 2) y' + (1) y`.
    pub fn describe(&self, upto: usize) -> Result<String> {
        let ms = self.coeffs(upto)?;
        let mut parts = Vec::new();
        for (k, m) in ms.iter().enumerate().rev() {
            if m.is_zero() {
                continue;
            }
            let y = match k {
                0 => "y".to_string(),
                1 => "y'".to_string(),
                2 => "y''".to_string(),
                _ => format!("y^({k})"),
            };
            parts.push(format!("({m}) {y}"));
        }
        if parts.is_empty() {
            return Ok("0".into());
        }
        let mut s = parts.join(" + ");
        if self.is_lazy() {
            s.push_str(" + …");
        }
        Ok(s)
    }
}

/// Second-order operators of the classical families.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Classical {
    Jacobi { alpha: Rat, beta: Rat },
    Hermite,
    Laguerre { alpha: Rat },
}

impl Classical {
    pub fn parse(s: &str) -> Result<Self> {
        let (name, args) = s.trim().split_once(':').unwrap_or((s.trim(), ""));
        let rat = |t: &str| -> Result<Rat> { t.trim().parse().map_err(Error::BadParameter) };
        match name {
            "hermite" => Ok(Classical::Hermite),
            "laguerre" => Ok(Classical::Laguerre { alpha: rat(args)? }),
            "jacobi" => {
                let (a, b) = args
                    .split_once(',')
                    .ok_or_else(|| Error::BadParameter("jacobi needs 'alpha,beta'".into()))?;
                Ok(Classical::Jacobi { alpha: rat(a)?, beta: rat(b)? })
            }
            other => Err(Error::BadParameter(format!("unknown classical operator '{other}'"))),
        }
    }

    /// The polynomial family with eigenvalues [`Classical::eigenvalues`].
    pub fn family(&self) -> FamilyKind {
        match self {
            Classical::Jacobi { alpha, beta } => FamilyKind::Jacobi { alpha: alpha.clone(), beta: beta.clone() },
            Classical::Hermite => FamilyKind::Hermite,
            Classical::Laguerre { alpha } => FamilyKind::Laguerre { alpha: alpha.clone() },
        }
    }

    /// `−n(n+α+β+1)+1` for Jacobi, `−2n+1` otherwise.
    pub fn eigenvalues(&self) -> SequenceSpec {
        match self {
            Classical::Jacobi { alpha, beta } => {
                let s1 = &(&alpha.scalar() + &beta.scalar()) + &ExactScalar::one();
                // −n² − (α+β+1)n + 1
                SequenceSpec::poly(Poly::new(vec![ExactScalar::one(), -s1, ExactScalar::from_int(-1)]))
            }
            _ => SequenceSpec::poly(Poly::from_ints(&[1, -2])),
        }
    }
}

pub fn classical(c: &Classical) -> Result<FormalDiffOp> {
    let one = ExactScalar::one;
    let ms = match c {
        Classical::Jacobi { alpha, beta } => {
            for r in [alpha, beta] {
                if r.value() <= &-BigRational::one() {
                    return Err(Error::BadParameter(format!("parameter {r} must exceed -1")));
                }
            }
            let s = &alpha.scalar() + &beta.scalar();
            if s == ExactScalar::from_int(-1) {
                return Err(Error::BadParameter("jacobi operator needs alpha + beta != -1".into()));
            }
            vec![
                Poly::one(),
                Poly::linear(-(&s + &ExactScalar::from_int(2)), &beta.scalar() - &alpha.scalar()),
                Poly::from_ints(&[1, 0, -1]),
            ]
        }
        Classical::Hermite => vec![Poly::one(), Poly::from_ints(&[0, -2]), Poly::one()],
        Classical::Laguerre { alpha } => {
            if alpha.value() <= &-BigRational::one() {
                return Err(Error::BadParameter(format!("alpha = {alpha} must exceed -1")));
            }
            let a1 = &alpha.scalar() + &one();
            vec![
                Poly::one(),
                Poly::new(vec![&a1 + &a1, ExactScalar::from_int(-2)]),
                Poly::from_ints(&[0, 2]),
            ]
        }
    };
    let name = match c {
        Classical::Jacobi { alpha, beta } => format!("jacobi:{alpha},{beta}"),
        Classical::Hermite => "hermite".into(),
        Classical::Laguerre { alpha } => format!("laguerre:{alpha}"),
    };
    FormalDiffOp::from_table(ms, Provenance::Classical { name })
}

/// Coefficients exactly as printed for the Laguerre-type operator:
/// `M_0 = 1`, `M_1 = −Kx + α + 1`, and for `k ≥ 2`
/// `K/k! Σ_{j=1}^k (−1)^{k+j+1} binom(α+1, j−1) binom(α+2, k−j) (α+3)_{k−j} x^k`.
pub fn koornwinder_printed(alpha: &Rat, k_param: &Rat, k: usize) -> Poly {
    let a = alpha.scalar();
    let kk = k_param.scalar();
    match k {
        0 => Poly::one(),
        1 => Poly::linear(-kk, &a + &ExactScalar::one()),
        _ => {
            let a1 = &a + &ExactScalar::one();
            let a2 = &a + &ExactScalar::from_int(2);
            let a3 = &a + &ExactScalar::from_int(3);
            let mut sum = ExactScalar::zero();
            for j in 1..=k {
                let mut poch = ExactScalar::one();
                for i in 0..(k - j) {
                    poch = &poch * &(&a3 + &ExactScalar::from_int(i as i64));
                }
                let term = &(&binom(&a1, j as i64 - 1) * &binom(&a2, (k - j) as i64)) * &poch;
                if (k + j + 1) % 2 == 0 {
                    sum += &term;
                } else {
                    sum -= &term;
                }
            }
            Poly::monomial(&(&kk * &sum) / &factorial(k), k)
        }
    }
}

pub fn koornwinder_printed_op(alpha: &Rat, k_param: &Rat) -> FormalDiffOp {
    let (a, kp) = (alpha.clone(), k_param.clone());
    FormalDiffOp::lazy(
        Arc::new(move |k, _| Ok(koornwinder_printed(&a, &kp, k))),
        Provenance::Koornwinder { alpha: alpha.clone(), k: k_param.clone() },
    )
}

/// How many coefficients of the printed Laguerre-type operator are compared
/// against the ones forced by the eigen-relation.
pub const KOORNWINDER_CHECK: usize = 6;

/// Infinite-order operator with the Laguerre-type polynomials `L^{α,K}` as
/// eigenfunctions and eigenvalues `−K binom(n+α+1, n−1) − n + 1`.
///
/// When the printed coefficients disagree with those forced by the
/// eigen-relation, the forced ones are used and the mismatch is recorded in
/// [`FormalDiffOp::diagnostics`].
pub fn koornwinder(alpha: &Rat, k_param: &Rat, horizon: usize) -> Result<FormalDiffOp> {
    let kind = FamilyKind::Koornwinder { alpha: alpha.clone(), k: k_param.clone() };
    let p = PolySeq::new(kind)?;
    let d = SequenceSpec::KoornwinderEigenvalues { alpha: alpha.clone(), k: k_param.clone() };
    for n in 0..=horizon {
        if d.eval(n)?.is_zero() {
            return Err(Error::DegenerateEigenvalue(n));
        }
    }
    let forced = crate::eigensynth::synthesis_generator(p, d);
    let mut prev = Vec::new();
    let mut mismatch = None;
    for k in 0..=KOORNWINDER_CHECK.min(horizon.max(1)) {
        let f = forced(k, &prev)?;
        let printed = koornwinder_printed(alpha, k_param, k);
        if mismatch.is_none() && f != printed {
            mismatch = Some((k, printed, f.clone()));
        }
        prev.push(f);
    }
    let provenance = Provenance::Koornwinder { alpha: alpha.clone(), k: k_param.clone() };
    Ok(match mismatch {
        None => koornwinder_printed_op(alpha, k_param),
        Some((k, printed, f)) => FormalDiffOp::lazy(forced, provenance).with_diagnostic(format!(
            "printed M_{k} = {printed} does not satisfy the eigen-relation; using M_{k} = {f} and later coefficients from the recursion"
        )),
    })
}
