//! Adjoints, closures and numeric spectral probes for four dilation operators
//! between Laguerre coefficient spaces:
//!
//! * `A`: `E_{L^α,d}` in `H(L̃^{α+1})`, `α > 0`
//! * `B`: `E_{L^{α+1},d}` in `H(L̃^α)`, `α > −1`
//! * `C`: `E_{L^α,d}` in `H(L^{α+1})`, `α > −1`
//! * `D`: `E_{L^{α+1},d}` in `H(L^α)`, `α > −1`
//!
//! Verdicts are decided on symbolic sequences; floating point is only used for
//! the residual and convergence logs.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::{ExactScalar, Rat, Surd};
use crate::families::asymptotic::Order;
use crate::families::norms::{laguerre_norm, ln_norm};
use crate::families::{Decision, FamilyKind, PolySeq, SequenceSpec};
use crate::matrixrep::{matrix_rep, surd_div, Coords, HqVector, StructuredMatrix};
use crate::thinmat::{self, Closability};

/// Default truncation ladder for numeric limits.
pub const LADDER: [usize; 4] = [64, 128, 256, 512];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassVariant {
    A,
    B,
    C,
    D,
}

impl ClassVariant {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(ClassVariant::A),
            "B" => Ok(ClassVariant::B),
            "C" => Ok(ClassVariant::C),
            "D" => Ok(ClassVariant::D),
            other => Err(Error::BadParameter(format!("unknown operator class '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorClass {
    pub variant: ClassVariant,
    pub alpha: Rat,
    pub d: SequenceSpec,
}

fn plus_one(a: &Rat) -> Rat {
    Rat::from(a.value() + BigRational::one())
}

impl OperatorClass {
    pub fn new(variant: ClassVariant, alpha: Rat, d: SequenceSpec) -> Result<Self> {
        let ok = match variant {
            ClassVariant::A => alpha.value().is_positive(),
            _ => alpha.value() > &-BigRational::one(),
        };
        if !ok {
            let need = if variant == ClassVariant::A { "> 0" } else { "> -1" };
            return Err(Error::BadParameter(format!("class {variant:?} needs alpha {need}, got {alpha}")));
        }
        d.validate()?;
        Ok(OperatorClass { variant, alpha, d })
    }

    /// `(p, q)` with the operator acting in `H(q)` or `H(q̃)`.
    pub fn pair(&self) -> (PolySeq, PolySeq) {
        let a = PolySeq::laguerre(self.alpha.clone());
        let a1 = PolySeq::laguerre(plus_one(&self.alpha));
        match self.variant {
            ClassVariant::A | ClassVariant::C => (a, a1),
            ClassVariant::B | ClassVariant::D => (a1, a),
        }
    }

    pub fn normalized(&self) -> bool {
        matches!(self.variant, ClassVariant::A | ClassVariant::B)
    }

    /// Norm parameter of the basis.
    pub fn beta(&self) -> Rat {
        match self.variant {
            ClassVariant::A | ClassVariant::C => plus_one(&self.alpha),
            ClassVariant::B | ClassVariant::D => self.alpha.clone(),
        }
    }

    pub fn basis(&self) -> FamilyKind {
        FamilyKind::Laguerre { alpha: self.beta() }
    }

    /// Whether the tail of row `t` is `d_t − d_{t+1}` (rather than `d_k − d_{k−1}`).
    fn lowering(&self) -> bool {
        matches!(self.variant, ClassVariant::A | ClassVariant::C)
    }

    /// The matrix computed from connection coefficients.
    pub fn matrix(&self, horizon: usize) -> Result<StructuredMatrix> {
        let (p, q) = self.pair();
        matrix_rep(&p, &self.d, &q, self.normalized(), horizon)
    }

    fn norm(&self, k: usize) -> Result<Surd> {
        if self.normalized() {
            laguerre_norm(&self.beta(), k)
        } else {
            Ok(Surd::one())
        }
    }

    /// `a_{tk}` from the closed forms.
    pub fn entry(&self, t: usize, k: usize) -> Result<Surd> {
        if t > k {
            return Ok(Surd::zero());
        }
        let d = &self.d;
        if t == k {
            return d.eval(k);
        }
        let base = if self.lowering() { &d.eval(t)? - &d.eval(t + 1)? } else { &d.eval(k)? - &d.eval(k - 1)? };
        if self.normalized() {
            let r = surd_div(&self.norm(t)?, &self.norm(k)?).expect("norms are single surds");
            Ok(&base * &r)
        } else {
            Ok(base)
        }
    }

    fn vector(&self, values: Vec<Surd>) -> HqVector {
        HqVector::finite(self.basis(), self.normalized(), values)
    }

    pub fn unit(&self, k: usize) -> HqVector {
        HqVector::unit(self.basis(), self.normalized(), k)
    }

    /// `T x` for a finite vector.
    pub fn apply(&self, x: &HqVector) -> Result<HqVector> {
        let xs = finite(x)?;
        let mut out = vec![Surd::zero(); xs.len()];
        for (k, xk) in xs.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            for (t, o) in out.iter_mut().enumerate().take(k + 1) {
                *o = &*o + &(&self.entry(t, k)? * xk);
            }
        }
        Ok(self.vector(out))
    }

    fn d_table_f64(&self, len: usize) -> Result<Vec<Complex64>> {
        (0..len).map(|n| self.d.eval_f64(n)).collect()
    }

    fn ln_norms(&self, len: usize) -> Vec<f64> {
        if !self.normalized() {
            return vec![0.0; len];
        }
        let b = self.beta();
        let bf = b.to_f64();
        let mut out = Vec::with_capacity(len);
        let mut acc = 0.0;
        for k in 0..len {
            if k > 0 {
                acc += 0.5 * (bf / k as f64).ln_1p();
            }
            out.push(acc);
        }
        debug_assert!(len == 0 || (out[len - 1] - ln_norm(&b, len - 1)).abs() < 1e-9);
        out
    }

    /// Top-left `size × size` block in floating point, from the closed forms.
    pub fn truncate(&self, size: usize) -> Result<DMatrix<Complex64>> {
        let d = self.d_table_f64(size + 1)?;
        let ln = self.ln_norms(size);
        let mut m = DMatrix::zeros(size, size);
        for k in 0..size {
            m[(k, k)] = d[k];
            for t in 0..k {
                let base = if self.lowering() { d[t] - d[t + 1] } else { d[k] - d[k - 1] };
                m[(t, k)] = base * (ln[t] - ln[k]).exp();
            }
        }
        Ok(m)
    }
}

fn finite(x: &HqVector) -> Result<&[Surd]> {
    x.finite_values().ok_or_else(|| Error::Unsupported("this operation needs a finitely supported vector".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DomainVerdict {
    InDomain,
    NotInDomain,
    Undecidable,
}

impl From<Decision> for DomainVerdict {
    fn from(d: Decision) -> Self {
        match d {
            Decision::Yes => DomainVerdict::InDomain,
            Decision::No => DomainVerdict::NotInDomain,
            Decision::Undecidable => DomainVerdict::Undecidable,
        }
    }
}

/// Result of an adjoint-domain test.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdjointCertificate {
    pub verdict: DomainVerdict,
    /// `⟨g, T Q_k⟩` for `k` up to the support of `g`.
    pub prefix: Vec<Surd>,
    /// Past the support, `⟨g, T Q_k⟩ = coef · tail_k`.
    pub coef: Option<Surd>,
    pub tail: Option<SequenceSpec>,
    /// `(n, Σ_{k≤n} |⟨g, T Q_k⟩|²)`, evidence only.
    pub partial_sums: Vec<(usize, f64)>,
}

/// Inner-product coefficients `u_k = Σ_{t≤k} g_t conj(a_{tk})` in floating point.
fn adjoint_coeffs_f64(cls: &OperatorClass, g: &HqVector, len: usize) -> Result<Vec<Complex64>> {
    let d = cls.d_table_f64(len + 1)?;
    let ln = cls.ln_norms(len);
    let mut out = Vec::with_capacity(len);
    // lowering: u_k = g_k d̄_k + (1/r_k) Σ_{t<k} conj(d_t − d_{t+1}) r_t g_t
    // raising:  u_k = g_k d̄_k + conj(d_k − d_{k−1}) (1/r_k) Σ_{t<k} r_t g_t
    let mut run = Complex64::zero();
    for k in 0..len {
        let gk = g.coeff_f64(k)?;
        let inv_r = (-ln[k]).exp();
        let u = if cls.lowering() {
            gk * d[k].conj() + run * inv_r
        } else {
            let dd = if k == 0 { d[0] } else { d[k] - d[k - 1] };
            gk * d[k].conj() + dd.conj() * run * inv_r
        };
        out.push(u);
        let w = ln[k].exp();
        run += if cls.lowering() { (d[k] - d[k + 1]).conj() * w * gk } else { w * gk };
    }
    Ok(out)
}

fn partial_sums(u: &[Complex64]) -> Vec<(usize, f64)> {
    let mut acc = 0.0;
    let mut out = Vec::new();
    for (k, v) in u.iter().enumerate() {
        acc += v.norm_sqr();
        if LADDER.contains(&(k + 1)) {
            out.push((k + 1, acc));
        }
    }
    out
}

/// Whether `g ∈ D(T*)`, i.e. `Σ_k |⟨g, T Q_k⟩|² < ∞`.
pub fn adjoint_domain_test(cls: &OperatorClass, g: &HqVector) -> Result<AdjointCertificate> {
    let Some(gs) = g.finite_values() else {
        let u = adjoint_coeffs_f64(cls, g, *LADDER.last().unwrap())?;
        return Ok(AdjointCertificate {
            verdict: DomainVerdict::Undecidable,
            prefix: Vec::new(),
            coef: None,
            tail: None,
            partial_sums: partial_sums(&u),
        });
    };
    let len = gs.len();
    let mut prefix = Vec::with_capacity(len);
    for k in 0..len {
        let mut u = Surd::zero();
        for (t, gt) in gs.iter().enumerate().take(k + 1) {
            if !gt.is_zero() {
                u = &u + &(gt * &cls.entry(t, k)?.conj());
            }
        }
        prefix.push(u);
    }
    let d = &cls.d;
    let mut coef = Surd::zero();
    for (t, gt) in gs.iter().enumerate() {
        let w = if cls.lowering() { (&d.eval(t)? - &d.eval(t + 1)?).conj() } else { Surd::one() };
        coef = &coef + &(&(gt * &w) * &cls.norm(t)?);
    }
    let mut factors = Vec::new();
    if !cls.lowering() {
        factors.push(d.difference().conj());
    }
    if cls.normalized() {
        factors.push(SequenceSpec::LaguerreNormReciprocal { beta: cls.beta() });
    }
    let tail = match factors.len() {
        0 => SequenceSpec::int(1),
        1 => factors.pop().unwrap(),
        _ => SequenceSpec::Product { factors },
    };
    let verdict = if coef.is_zero() { Decision::Yes } else { tail.l2_membership() }.into();
    let u = adjoint_coeffs_f64(cls, g, *LADDER.last().unwrap())?;
    Ok(AdjointCertificate { verdict, prefix, coef: Some(coef), tail: Some(tail), partial_sums: partial_sums(&u) })
}

/// `T* g` for a finite `g` in the adjoint domain.
pub fn adjoint_apply(cls: &OperatorClass, g: &HqVector) -> Result<HqVector> {
    let cert = adjoint_domain_test(cls, g)?;
    if cert.verdict != DomainVerdict::InDomain {
        return Err(Error::DomainError);
    }
    let coef = cert.coef.unwrap_or_default();
    if coef.is_zero() {
        return Ok(cls.vector(cert.prefix));
    }
    Ok(HqVector {
        basis: cls.basis(),
        normalized: cls.normalized(),
        coords: Coords::Tailed { prefix: cert.prefix, coef, tail: cert.tail.expect("finite vectors have a tail") },
    })
}

/// Closability of the class operator: certified for class A, otherwise from
/// the thin/blocked analysis of its matrix.
pub fn closability(cls: &OperatorClass, horizon: usize) -> Result<Closability> {
    if cls.variant == ClassVariant::A {
        return Ok(Closability::Closable);
    }
    let a = cls.matrix(horizon)?;
    Ok(thinmat::verdict(&a, horizon)?.closable)
}

/// The square-summability condition under which the closure has the explicit
/// coefficient formula.
pub fn closure_condition(cls: &OperatorClass) -> Decision {
    match cls.variant {
        ClassVariant::A => Decision::Yes,
        ClassVariant::B => {
            SequenceSpec::Product { factors: vec![cls.d.difference(), SequenceSpec::LaguerreNormReciprocal { beta: cls.alpha.clone() }] }
                .l2_membership()
        }
        ClassVariant::C => Decision::Undecidable,
        ClassVariant::D => cls.d.difference().l2_membership(),
    }
}

/// `T̄ g` for a finite `g`.
pub fn closure_apply(cls: &OperatorClass, g: &HqVector) -> Result<HqVector> {
    match cls.variant {
        ClassVariant::A => closure_apply_with_ell(cls, g),
        ClassVariant::C => Err(Error::Unsupported("no closure formula for class C".into())),
        ClassVariant::B | ClassVariant::D => {
            if closure_condition(cls) != Decision::Yes {
                return Err(Error::PreconditionError(format!(
                    "differences of d {} square-summable",
                    if cls.variant == ClassVariant::B { "weighted by 1/r_k are not certified" } else { "are not certified" }
                )));
            }
            closure_apply_direct(cls, g)
        }
    }
}

/// `(T̄g)_s = g_s d_s + r_s (d_s − d_{s+1}) (ℓ − Σ_{k≤s} g_k/r_k)` with `ℓ = Σ g_k/r_k`.
pub fn closure_apply_with_ell(cls: &OperatorClass, g: &HqVector) -> Result<HqVector> {
    if cls.variant != ClassVariant::A {
        return Err(Error::Unsupported("the limit form applies to class A".into()));
    }
    let gs = finite(g)?;
    let scaled = gs
        .iter()
        .enumerate()
        .map(|(k, v)| Ok(surd_div(v, &cls.norm(k)?).expect("norms are single surds")))
        .collect::<Result<Vec<_>>>()?;
    let ell: Surd = scaled.iter().cloned().sum();
    let mut run = Surd::zero();
    let mut out = Vec::with_capacity(gs.len());
    for (s, gs_) in gs.iter().enumerate() {
        run = &run + &scaled[s];
        let diff = &cls.d.eval(s)? - &cls.d.eval(s + 1)?;
        let v = &(gs_ * &cls.d.eval(s)?) + &(&(&cls.norm(s)? * &diff) * &(&ell - &run));
        out.push(v);
    }
    Ok(cls.vector(out))
}

/// `(T̄g)_s = g_s d_s + Σ_{k>s} a_{sk} g_k` with the closed-form entries.
pub fn closure_apply_direct(cls: &OperatorClass, g: &HqVector) -> Result<HqVector> {
    if cls.variant == ClassVariant::C {
        return Err(Error::Unsupported("no closure formula for class C".into()));
    }
    let gs = finite(g)?;
    let mut out = Vec::with_capacity(gs.len());
    for s in 0..gs.len() {
        let mut v = &gs[s] * &cls.d.eval(s)?;
        for (k, gk) in gs.iter().enumerate().skip(s + 1) {
            if !gk.is_zero() {
                v = &v + &(&cls.entry(s, k)? * gk);
            }
        }
        out.push(v);
    }
    Ok(cls.vector(out))
}

/// Closure of the Laguerre operator with `d_n = −2n + 1` as class A:
/// `g_s(−2s+1) + 2 r_s (ℓ − Σ_{k≤s} g_k/r_k)`.
pub fn m_alpha_closure(alpha: &Rat, g: &HqVector) -> Result<HqVector> {
    if !alpha.value().is_positive() {
        return Err(Error::BadParameter(format!("alpha must be positive, got {alpha}")));
    }
    let beta = plus_one(alpha);
    let gs = finite(g)?;
    let r = |k: usize| laguerre_norm(&beta, k);
    let scaled = gs.iter().enumerate().map(|(k, v)| Ok(surd_div(v, &r(k)?).unwrap())).collect::<Result<Vec<_>>>()?;
    let ell: Surd = scaled.iter().cloned().sum();
    let mut run = Surd::zero();
    let mut out = Vec::new();
    for s in 0..gs.len() {
        run = &run + &scaled[s];
        let lin = Surd::from(ExactScalar::from_int(1 - 2 * s as i64));
        let two = Surd::from(ExactScalar::from_int(2));
        out.push(&(&gs[s] * &lin) + &(&(&two * &r(s)?) * &(&ell - &run)));
    }
    Ok(HqVector::finite(FamilyKind::Laguerre { alpha: beta }, true, out))
}

/// Closure of the Laguerre operator of parameter `α+1` with `d_n = −2n + 1` as
/// class B, `α > 1`: `g_s(−2s+1) − 2 Σ_{k>s} (r_s/r_k) g_k`.
pub fn m_alpha_plus_one_closure(alpha: &Rat, g: &HqVector) -> Result<HqVector> {
    if alpha.value() <= &BigRational::one() {
        return Err(Error::PreconditionError(format!("alpha must exceed 1, got {alpha}")));
    }
    let gs = finite(g)?;
    let mut out = Vec::new();
    for s in 0..gs.len() {
        let mut v = &gs[s] * &Surd::from(ExactScalar::from_int(1 - 2 * s as i64));
        for (k, gk) in gs.iter().enumerate().skip(s + 1) {
            let ratio = crate::families::norm_ratio(alpha, s, k)?;
            v = &v - &(&(&ratio * gk) * &Surd::from(ExactScalar::from_int(2)));
        }
        out.push(v);
    }
    Ok(HqVector::finite(FamilyKind::Laguerre { alpha: alpha.clone() }, true, out))
}

/// Checks along the witnessing family of a proposed closure graph point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NecessaryReport {
    /// Indices `k ≤ horizon` where the exact identity for `g_k` fails.
    pub b_failures: Vec<usize>,
    pub a1: bool,
    /// `max_u |h_{n,u} − f_u|` at the probe size.
    pub a2_deviation: f64,
    /// `|h_{n,n} d_n|` at the probe size.
    pub a3_value: f64,
    /// `|Σ_{u=1}^n h_{n,u}(d_u − d_{u−1}) − (g_0 − f_0 d_0)|` at the probe size.
    pub a4_deviation: f64,
    pub probe: usize,
    pub passed: bool,
}

fn need_d(cls: &OperatorClass) -> Result<()> {
    if cls.variant != ClassVariant::D {
        return Err(Error::PreconditionError("the graph-closure machinery is stated for class D".into()));
    }
    Ok(())
}

/// `r_{n,u} = 1/(n² 2^n (|d_u − d_{u−1}| + |d_u| + 1))` for `u ≤ n`.
fn r_nu(n: usize, du: Complex64, ddu: Complex64) -> f64 {
    let nn = n as f64;
    1.0 / (nn * nn * 2f64.powi(n as i32) * (ddu.norm() + du.norm() + 1.0))
}

/// `h_{n,u} = f_u + r_{n,u}` for `u ≤ n`.
pub fn witness_family(cls: &OperatorClass, f: &HqVector, n: usize) -> Result<Vec<Complex64>> {
    let d = cls.d_table_f64(n + 1)?;
    (0..=n)
        .map(|u| {
            let dd = if u == 0 { d[0] } else { d[u] - d[u - 1] };
            Ok(f.coeff_f64(u)? + r_nu(n.max(1), d[u], dd))
        })
        .collect()
}

/// Exact identity for `g_k` and the limit conditions along the witnessing family.
pub fn thm6_necessary_check(cls: &OperatorClass, f: &HqVector, g: &HqVector, horizon: usize, probe: usize, tolerance: f64) -> Result<NecessaryReport> {
    need_d(cls)?;
    let d = &cls.d;
    let base = &g.coeff(0)? - &(&f.coeff(0)? * &d.eval(0)?);
    let mut run = Surd::zero();
    let mut b_failures = Vec::new();
    for k in 1..=horizon {
        run = &run + &(&f.coeff(k)? * &(&d.eval(k)? - &d.eval(k - 1)?));
        let want = &(&base + &(&f.coeff(k)? * &d.eval(k)?)) - &run;
        if want != g.coeff(k)? {
            b_failures.push(k);
        }
    }
    let n = probe.max(1);
    let h = witness_family(cls, f, n)?;
    let dt = cls.d_table_f64(n + 1)?;
    let mut a2: f64 = 0.0;
    for (u, hu) in h.iter().enumerate() {
        a2 = a2.max((hu - f.coeff_f64(u)?).norm());
    }
    let a3 = (h[n] * dt[n]).norm();
    let s: Complex64 = (1..=n).map(|u| h[u] * (dt[u] - dt[u - 1])).sum();
    let target = g.coeff_f64(0)? - f.coeff_f64(0)? * dt[0];
    let a4 = (s - target).norm();
    let passed = b_failures.is_empty() && a2 <= tolerance && a3 <= tolerance && a4 <= tolerance;
    Ok(NecessaryReport { b_failures, a1: true, a2_deviation: a2, a3_value: a3, a4_deviation: a4, probe: n, passed })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Thm7Condition {
    /// `Σ f_u (d_u − d_{u−1})` diverges.
    SeriesDiverges,
    /// `(g_k)` is not square-summable.
    NotSquareSummable,
    /// `(n+1)|f_n d_n − g_n|²` does not tend to zero.
    RemainderTooLarge,
    Undecidable,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureWitness {
    pub f: HqVector,
    /// `S = lim Σ_{u=1}^n f_u (d_u − d_{u−1})`.
    pub s: Complex64,
    pub s_exact: Option<Surd>,
    /// `g` exactly, when `f` is finite.
    pub g: Option<HqVector>,
    pub g_prefix: Vec<Complex64>,
    /// `(n, ‖T h_n − g‖²)`.
    pub log: Vec<(usize, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum Thm7Outcome {
    Accepted { witness: ClosureWitness, equals_tf: Option<bool> },
    Rejected { condition: Thm7Condition, detail: String },
}

impl Thm7Outcome {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Thm7Outcome::Accepted { .. })
    }
}

/// Symbolic coefficients of `f` past its prefix, up to a non-zero factor.
fn f_tail(f: &HqVector) -> Option<SequenceSpec> {
    match &f.coords {
        Coords::Finite { .. } => None,
        Coords::Tailed { tail, .. } => Some(tail.clone()),
        Coords::Symbolic { seq } => Some(seq.clone()),
    }
}

fn decide_remainder(t: &SequenceSpec) -> Option<Order> {
    t.asym()?.tail_order()
}

fn power_below(o: &Order, e: BigRational) -> bool {
    match o {
        Order::EventuallyZero | Order::Geometric => true,
        Order::Power(p) => *p < e,
        Order::Exponential => false,
    }
}

/// Tests the sufficient conditions for `f ∈ D(T̄)` and builds `g` and the
/// witnessing family.
pub fn thm7_sufficient_construct(cls: &OperatorClass, f: &HqVector, ladder: &[usize]) -> Result<Thm7Outcome> {
    need_d(cls)?;
    let d = &cls.d;
    let top = ladder.iter().copied().max().unwrap_or(0);
    let half = BigRational::new(1.into(), 2.into());
    let (s_exact, g_exact, cutoff) = match f.finite_values() {
        Some(fs) => {
            let mut s = Surd::zero();
            for (u, fu) in fs.iter().enumerate().skip(1) {
                s = &s + &(fu * &(&d.eval(u)? - &d.eval(u - 1)?));
            }
            let mut g = Vec::with_capacity(fs.len());
            let mut run = Surd::zero();
            for (k, fk) in fs.iter().enumerate() {
                if k > 0 {
                    run = &run + &(fk * &(&d.eval(k)? - &d.eval(k - 1)?));
                }
                g.push(&(&s - &run) + &(fk * &d.eval(k)?));
            }
            (Some(s), Some(cls.vector(g)), top + 1)
        }
        None => {
            let Some(tail) = f_tail(f) else { unreachable!() };
            let t = tail.times(&d.difference());
            match t.series_converges() {
                Decision::Yes => {}
                Decision::No => {
                    return Ok(Thm7Outcome::Rejected { condition: Thm7Condition::SeriesDiverges, detail: t.describe() })
                }
                Decision::Undecidable => {
                    return Ok(Thm7Outcome::Rejected { condition: Thm7Condition::Undecidable, detail: format!("convergence of {}", t.describe()) })
                }
            }
            let rem = decide_remainder(&t);
            let fd = tail.times(d).l2_membership();
            let rem_l2 = match &rem {
                Some(o) => Decision::from_bool(power_below(o, -half.clone())),
                None => Decision::Undecidable,
            };
            let g_l2 = match (fd, rem_l2) {
                (Decision::Yes, Decision::Yes) => Decision::Yes,
                (Decision::Yes, Decision::No) | (Decision::No, Decision::Yes) => Decision::No,
                _ => Decision::Undecidable,
            };
            match g_l2 {
                Decision::Yes => {}
                Decision::No => {
                    return Ok(Thm7Outcome::Rejected {
                        condition: Thm7Condition::NotSquareSummable,
                        detail: format!("f_k d_k square-summable: {fd}; remainder square-summable: {rem_l2}"),
                    })
                }
                Decision::Undecidable => {
                    return Ok(Thm7Outcome::Rejected { condition: Thm7Condition::Undecidable, detail: "square-summability of g".into() })
                }
            }
            // (n+1)|R_n|² → 0 iff R_n = o(n^{−1/2})
            if !power_below(rem.as_ref().unwrap(), -half.clone()) {
                return Ok(Thm7Outcome::Rejected { condition: Thm7Condition::RemainderTooLarge, detail: format!("{rem:?}") });
            }
            (None, None, 1 << 16)
        }
    };

    // floating-point g_k = S − Σ_{u=1}^k f_u (d_u − d_{u−1}) + f_k d_k
    let dt = cls.d_table_f64(cutoff + 1)?;
    let fv = (0..cutoff).map(|u| f.coeff_f64(u)).collect::<Result<Vec<_>>>()?;
    let terms: Vec<Complex64> = (0..cutoff).map(|u| if u == 0 { Complex64::zero() } else { fv[u] * (dt[u] - dt[u - 1]) }).collect();
    let s_f = match &s_exact {
        Some(s) => s.to_complex64(),
        None => terms.iter().rev().sum(),
    };
    let mut g_f = Vec::with_capacity(cutoff);
    let mut rem = s_f;
    for k in 0..cutoff {
        rem -= terms[k];
        g_f.push(match &g_exact {
            Some(g) => g.coeff_f64(k)?,
            None => rem + fv[k] * dt[k],
        });
    }
    let mut tail_sq = vec![0.0; cutoff + 1];
    for k in (0..cutoff).rev() {
        tail_sq[k] = tail_sq[k + 1] + g_f[k].norm_sqr();
    }
    let mut log = Vec::new();
    for &n in ladder {
        let h = witness_family(cls, f, n)?;
        // (T h_n)_k = h_{n,k} d_k + Σ_{u=k+1}^n (d_u − d_{u−1}) h_{n,u}
        let mut acc = Complex64::zero();
        let mut err = tail_sq[(n + 1).min(cutoff)];
        for k in (0..=n).rev() {
            let tk = h[k] * dt[k] + acc;
            acc += (if k == 0 { dt[0] } else { dt[k] - dt[k - 1] }) * h[k];
            err += (tk - g_f.get(k).copied().unwrap_or_default()).norm_sqr();
        }
        log.push((n, err));
    }
    let equals_tf = match (&g_exact, f.is_finite()) {
        (Some(g), true) => Some(cls.apply(f)? == *g),
        _ => None,
    };
    let witness = ClosureWitness {
        f: f.clone(),
        s: s_f,
        s_exact,
        g: g_exact,
        g_prefix: g_f.into_iter().take(top + 1).collect(),
        log,
    };
    Ok(Thm7Outcome::Accepted { witness, equals_tf })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EigenProbe {
    pub lambda: ExactScalar,
    pub seed: usize,
    /// `g_k = 0` past the seed, `g_seed = 1`, and the downward recursion below it.
    pub g: HqVector,
    pub prefix_constant: bool,
    /// `|d_seed − λ|`, the one coordinate the finite construction leaves uncancelled.
    pub boundary_defect: f64,
    /// `(N, ‖(T_N − λ) g‖ / ‖g‖)`.
    pub residuals: Vec<(usize, f64)>,
}

/// `g_s = −Σ_{k=s+1}^K (d_k − d_{k−1}) g_k / (d_s − λ)` from `g_K = 1`.
pub fn approx_eigen_recursion(cls: &OperatorClass, lambda: &ExactScalar, seed: usize, ladder: &[usize]) -> Result<EigenProbe> {
    need_d(cls)?;
    let d = cls.d.table(seed + 1)?;
    let lam = Surd::from(lambda.clone());
    for (s, ds) in d.iter().enumerate() {
        if *ds == lam {
            return Err(Error::DivisionByZero(s));
        }
    }
    let mut g = vec![Surd::zero(); seed + 1];
    g[seed] = Surd::one();
    // running Σ_{k>s} (d_k − d_{k−1}) g_k
    let mut run = &(&d[seed] - &d[seed.saturating_sub(1)]) * &g[seed];
    for s in (0..seed).rev() {
        let denom = &d[s] - &lam;
        g[s] = -&surd_div(&run, &denom).ok_or(Error::Irrational(s))?;
        if s > 0 {
            run = &run + &(&(&d[s] - &d[s - 1]) * &g[s]);
        }
    }
    let prefix_constant = g[..seed].windows(2).all(|w| w[0] == w[1]);
    let boundary_defect = (&d[seed] - &lam).to_complex64().norm();
    let gv = cls.vector(g);
    let lf = lambda.to_complex64();
    let mut residuals = Vec::new();
    for &n in ladder.iter().filter(|&&n| n > seed) {
        let m = cls.truncate(n)?;
        let x: Vec<Complex64> = (0..n).map(|k| gv.coeff_f64(k)).collect::<Result<_>>()?;
        residuals.push((n, residual_ratio(&m, &x, lf)));
    }
    Ok(EigenProbe { lambda: lambda.clone(), seed, g: gv, prefix_constant, boundary_defect, residuals })
}

fn residual_ratio(m: &DMatrix<Complex64>, x: &[Complex64], lambda: Complex64) -> f64 {
    let n = x.len();
    let mut num = 0.0;
    for i in 0..n {
        let mut v = -lambda * x[i];
        for (k, xk) in x.iter().enumerate().skip(i) {
            v += m[(i, k)] * xk;
        }
        num += v.norm_sqr();
    }
    let den: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    (num / den).sqrt()
}

/// `‖(T_M − λ) 1_{[0..N]}‖ / ‖1_{[0..N]}‖` for `N` on the ladder, with `M = N + 1`.
pub fn indicator_residuals(cls: &OperatorClass, lambda: Complex64, ladder: &[usize]) -> Result<Vec<(usize, f64)>> {
    let top = ladder.iter().copied().max().unwrap_or(0);
    let m = cls.truncate(top + 1)?;
    Ok(ladder
        .iter()
        .map(|&n| {
            let sub = m.view((0, 0), (n + 1, n + 1)).into_owned();
            (n, residual_ratio(&sub, &vec![Complex64::new(1.0, 0.0); n + 1], lambda))
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChartRow {
    pub lambda_re: f64,
    pub lambda_im: f64,
    pub n: usize,
    pub residual: f64,
}

/// Indicator-vector residuals over a grid of `λ`. Small values are heuristic
/// evidence of approximate eigenvalues and certify nothing.
pub fn residual_chart(cls: &OperatorClass, lambdas: &[Complex64], ladder: &[usize]) -> Result<Vec<ChartRow>> {
    let mut out = Vec::new();
    for l in lambdas {
        for (n, r) in indicator_residuals(cls, *l, ladder)? {
            out.push(ChartRow { lambda_re: l.re, lambda_im: l.im, n, residual: r });
        }
    }
    Ok(out)
}

/// Eigenvalues of the `size × size` truncation, from a complex Schur form.
pub fn truncation_spectrum(cls: &OperatorClass, size: usize) -> Result<Vec<Complex64>> {
    spectrum_of(cls.truncate(size)?)
}

pub fn spectrum_of(m: DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    if m.nrows() == 0 {
        return Ok(Vec::new());
    }
    let schur = nalgebra::linalg::Schur::try_new(m, 1e-15, 10_000)
        .ok_or_else(|| Error::Unsupported("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Largest distance in a greedy matching of two multisets of equal size.
pub fn match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let (i, dist) = b
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, y)| (i, (x - y).norm()))
            .fold((usize::MAX, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc });
        if i == usize::MAX {
            return f64::INFINITY;
        }
        used[i] = true;
        worst = worst.max(dist);
    }
    worst
}
