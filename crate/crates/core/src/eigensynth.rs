//! Operators with a prescribed polynomial sequence of eigenfunctions:
//! synthesis from `(p, d)`, the `λ_n` of the diagonal coefficients, and the
//! degree-by-degree solvability test.

use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::{change_basis, Degree, ExactScalar, Poly};
use crate::families::{PolySeq, SequenceSpec};
use crate::formaldiff::{factorial, falling, CoeffFn, FormalDiffOp, Provenance};

#[derive(Clone, Debug)]
pub struct EigenPair {
    pub p: PolySeq,
    pub d: SequenceSpec,
}

impl EigenPair {
    pub fn new(p: PolySeq, d: SequenceSpec) -> Self {
        EigenPair { p, d }
    }

    /// Checks `d_n ≠ 0` and that `d` is not constant, for `n ≤ horizon`.
    pub fn validate(&self, horizon: usize) -> Result<()> {
        let d0 = self.d.eval(0)?;
        let mut constant = true;
        for n in 0..=horizon {
            let v = self.d.eval(n)?;
            if v.is_zero() {
                return Err(Error::DegenerateEigenvalue(n));
            }
            constant &= v == d0;
        }
        if constant {
            return Err(Error::BadParameter(format!("d is constant up to index {horizon}")));
        }
        Ok(())
    }
}

/// `M_k = [(d_k − d_0) p_k − Σ_{j=1}^{k−1} M_j p_k^{(j)}] / p_k^{(k)}`, `M_0 = d_0`.
pub fn synthesis_generator(p: PolySeq, d: SequenceSpec) -> Arc<CoeffFn> {
    Arc::new(move |k, prev: &[Poly]| {
        let d0 = d.eval_scalar(0)?;
        if k == 0 {
            return Ok(Poly::constant(d0));
        }
        let pk = p.make_poly(k)?;
        if pk.degree() != Degree::Finite(k) {
            return Err(Error::NotGraded(k));
        }
        let mut rhs = pk.scale(&(&d.eval_scalar(k)? - &d0));
        for (j, mj) in prev.iter().enumerate().take(k).skip(1) {
            if !mj.is_zero() {
                rhs = &rhs - &(mj * &pk.derivative(j));
            }
        }
        let lead = pk.derivative(k).coeff(0);
        Ok(rhs.scale(&lead.inv().expect("deg p_k = k")))
    })
}

/// The unique operator with `η p_n = d_n p_n`, with `M_0, …, M_K` computed.
pub fn synthesize(pair: &EigenPair, upto: usize) -> Result<FormalDiffOp> {
    let op = FormalDiffOp::lazy(
        synthesis_generator(pair.p.clone(), pair.d.clone()),
        Provenance::Synthesized { p: pair.p.kind().clone(), d: pair.d.clone() },
    );
    op.coeffs(upto)?;
    Ok(op)
}

/// `λ_n = Σ_{r=1}^n m_{rr} p(n, r)`, with `λ_0 = 0`.
pub fn lemma_ks_lambda(op: &FormalDiffOp, n: usize) -> Result<ExactScalar> {
    let mut acc = ExactScalar::zero();
    for r in 1..=n {
        let m = op.m(r, r)?;
        if !m.is_zero() {
            acc += &(&m * &falling(n, r));
        }
    }
    Ok(acc)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum SolveOutcome {
    /// `p_n = x^n + q_{n−1}` with `q_{n−1} = Σ β_j p_j`.
    Solution { p: Poly, correction: Poly, alphas: Vec<ExactScalar>, betas: Vec<ExactScalar> },
    /// `d_n = d_j` but `α_j ≠ 0`.
    NoSolution { witness: usize, alpha: ExactScalar, alphas: Vec<ExactScalar> },
    /// `d_n = d_j` and `α_j = 0` for every free `j`; the particular solution
    /// takes `β_j = 0` there.
    NonUnique { free: Vec<usize>, particular: Poly, alphas: Vec<ExactScalar>, betas: Vec<ExactScalar> },
}

impl SolveOutcome {
    pub fn solution(&self) -> Option<&Poly> {
        match self {
            SolveOutcome::Solution { p, .. } => Some(p),
            SolveOutcome::NonUnique { particular, .. } => Some(particular),
            SolveOutcome::NoSolution { .. } => None,
        }
    }
}

/// Looks for a monic `p_n` with `η p_n = d_n p_n`, given eigenfunctions
/// `prior = [p_0, …, p_{n−1}]`.
pub fn eigen_solve(op: &FormalDiffOp, d: &SequenceSpec, n: usize, prior: &[Poly]) -> Result<SolveOutcome> {
    let d0 = d.eval_scalar(0)?;
    let dn = d.eval_scalar(n)?;
    if n == 0 {
        let m0 = op.m(0, 0)?;
        if m0 != d0 {
            return Err(Error::IncompatibleEigenvalue { n: 0, expected: m0.to_string() });
        }
        return Ok(SolveOutcome::Solution { p: Poly::one(), correction: Poly::zero(), alphas: vec![], betas: vec![] });
    }
    if prior.len() < n {
        return Err(Error::BasisTooShort(prior.len()));
    }
    let lambda = lemma_ks_lambda(op, n)?;
    if &dn - &d0 != lambda {
        return Err(Error::IncompatibleEigenvalue { n, expected: (&lambda + &d0).to_string() });
    }
    if dn.is_zero() {
        return Err(Error::DegenerateEigenvalue(n));
    }
    let mut dj = Vec::with_capacity(n);
    for (j, pj) in prior.iter().take(n).enumerate() {
        if pj.degree() != Degree::Finite(j) {
            return Err(Error::NotGraded(j));
        }
        let v = d.eval_scalar(j)?;
        if op.apply(pj)? != pj.scale(&v) {
            return Err(Error::PreconditionError(format!("p_{j} is not an eigenfunction for d_{j}")));
        }
        dj.push(v);
    }
    // Σ_{k=1}^n p(n,k) R_{k−1} x^{n−k}, R_{k−1} = M_k − m_{kk} x^k
    let mut s = Poly::zero();
    for k in 1..=n {
        let mk = op.coeff(k)?;
        let r = &mk - &Poly::monomial(mk.coeff(k), k);
        if !r.is_zero() {
            s = &s + &r.shift_up(n - k).scale(&falling(n, k));
        }
    }
    let mut alphas = change_basis(&s, |j| prior.get(j).cloned().ok_or(Error::BasisTooShort(j)))?;
    alphas.resize(n, ExactScalar::zero());
    let mut betas = Vec::with_capacity(n);
    let mut free = Vec::new();
    for j in 0..n {
        let gap = &dn - &dj[j];
        if gap.is_zero() {
            if !alphas[j].is_zero() {
                return Ok(SolveOutcome::NoSolution { witness: j, alpha: alphas[j].clone(), alphas });
            }
            free.push(j);
            betas.push(ExactScalar::zero());
        } else {
            betas.push(&alphas[j] / &gap);
        }
    }
    let mut q = Poly::zero();
    for (b, pj) in betas.iter().zip(prior) {
        if !b.is_zero() {
            q = &q + &pj.scale(b);
        }
    }
    let p = &Poly::monomial(ExactScalar::one(), n) + &q;
    debug_assert_eq!(op.apply(&p).ok(), Some(p.scale(&dn)));
    Ok(if free.is_empty() {
        SolveOutcome::Solution { p, correction: q, alphas, betas }
    } else {
        SolveOutcome::NonUnique { free, particular: p, alphas, betas }
    })
}

/// Runs [`eigen_solve`] for `n = 0, 1, …, upto`, stopping at the first
/// degree with no solution.
pub fn solve_sequence(op: &FormalDiffOp, d: &SequenceSpec, upto: usize) -> Result<Vec<SolveOutcome>> {
    let mut prior = Vec::new();
    let mut out = Vec::new();
    for n in 0..=upto {
        let o = eigen_solve(op, d, n, &prior)?;
        let next = o.solution().cloned();
        out.push(o);
        match next {
            Some(p) => prior.push(p),
            None => break,
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecursionCheck {
    pub n: usize,
    pub holds: bool,
    /// Labels `a`–`e` of the coefficient equations that fail.
    pub failed: Vec<char>,
}

/// Checks `η p_n = d_n p_n` coefficient by coefficient:
/// (a) `x^n`, (b) `x^{n−1}`, (c) `x^r` for `2 ≤ r ≤ n−2`, (d) `x^1`, (e) `x^0`.
pub fn expanded_recursion_check(op: &FormalDiffOp, pair: &EigenPair, n: usize) -> Result<RecursionCheck> {
    let d0 = pair.d.eval_scalar(0)?;
    let dn = pair.d.eval_scalar(n)?;
    let m0 = op.m(0, 0)?;
    if &dn - &d0 == -&m0 {
        return Err(Error::PreconditionError(format!("d_{n} - d_0 = -M_0")));
    }
    let pn = pair.p.make_poly(n)?;
    let lhs = |r: usize| &(&dn - &d0) * &pn.coeff(r);
    let pc = |r: usize| pn.coeff(r);
    let m = |k: usize, t: usize| op.m(k, t);
    let pp = falling;
    let mut failed = Vec::new();
    if n == 0 {
        return Ok(RecursionCheck { n, holds: true, failed });
    }

    // (a)
    let mut rhs = &(&m(n, n)? * &pp(n, n)) * &pc(n);
    for r in 1..n {
        rhs += &(&(&m(r, r)? * &pc(n)) * &pp(n, r));
    }
    if lhs(n) != rhs {
        failed.push('a');
    }

    // (b)
    let mut rhs = &(&m(n, n - 1)? * &pp(n, n)) * &pc(n);
    for r in 1..n {
        rhs += &(&(&m(r, r)? * &pc(n - 1)) * &pp(n - 1, r));
        rhs += &(&(&m(r, r - 1)? * &pc(n)) * &pp(n, r));
    }
    if lhs(n - 1) != rhs {
        failed.push('b');
    }

    // (c)
    let mut band_ok = true;
    for r in 2..n.saturating_sub(1) {
        let mut rhs = &(&m(n, r)? * &pc(n)) * &pp(n, n);
        for k in r..n {
            for t in 0..=(n - k).min(r) {
                rhs += &(&(&m(k, r - t)? * &pc(k + t)) * &pp(k + t, k));
            }
        }
        for s in 1..r {
            for t in 0..=(n - r).min(s) {
                rhs += &(&(&m(s, s - t)? * &pc(r + t)) * &pp(r + t, s));
            }
        }
        band_ok &= lhs(r) == rhs;
    }
    if !band_ok {
        failed.push('c');
    }

    // (d)
    let mut rhs = &(&m(n, 1)? * &pc(n)) * &pp(n, n);
    for r in 1..n {
        rhs += &(&(&m(r, 1)? * &pc(r)) * &pp(r, r));
        rhs += &(&(&m(r, 0)? * &pc(r + 1)) * &pp(r + 1, r + 1));
    }
    if lhs(1) != rhs {
        failed.push('d');
    }

    // (e)
    let mut rhs = &(&m(n, 0)? * &pc(n)) * &pp(n, n);
    for r in 1..n {
        rhs += &(&(&m(r, 0)? * &pc(r)) * &pp(r, r));
    }
    if lhs(0) != rhs {
        failed.push('e');
    }

    Ok(RecursionCheck { n, holds: failed.is_empty(), failed })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterexampleVariant {
    /// `((1/72)x⁴ − 3x) y⁗ − x y″ − (1/3) x y′ + (4/3) y`
    Abstract,
    /// The same with `12x⁴` in place of `(1/72)x⁴`.
    Remark,
}

/// A fourth-order operator with `λ_3 = λ_4` and no fourth-degree eigenfunction.
pub fn counterexample_operator() -> FormalDiffOp {
    counterexample_variant(CounterexampleVariant::Abstract)
}

pub fn counterexample_variant(v: CounterexampleVariant) -> FormalDiffOp {
    let q = ExactScalar::from_ratio;
    let lead = match v {
        CounterexampleVariant::Abstract => q(1, 72),
        CounterexampleVariant::Remark => q(12, 1),
    };
    let ms = vec![
        Poly::constant(q(4, 3)),
        Poly::new(vec![q(0, 1), q(-1, 3)]),
        Poly::from_ints(&[0, -1]),
        Poly::zero(),
        Poly::new(vec![q(0, 1), q(-3, 1), q(0, 1), q(0, 1), lead]),
    ];
    FormalDiffOp::from_table(ms, Provenance::UserGiven).expect("degrees within bounds")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbationReport {
    /// First index where `d′` differs from `d`.
    pub first: usize,
    /// `m̃_{kk} − m_{kk}` for `k ≤ horizon`, from the closed recursion.
    pub by_recursion: Vec<ExactScalar>,
    /// The same differences from synthesizing both operators.
    pub by_synthesis: Vec<ExactScalar>,
    pub agree: bool,
    /// Indices `k ≥ first` within the horizon where the difference vanishes.
    pub vanishing: Vec<usize>,
}

/// Diagonal changes of the synthesized operator when `d` becomes `d′`.
pub fn perturbation_diagonal(pair: &EigenPair, d_prime: &SequenceSpec, horizon: usize) -> Result<PerturbationReport> {
    let d = pair.d.scalar_table(horizon + 1)?;
    let dp = d_prime.scalar_table(horizon + 1)?;
    let first = (0..=horizon).find(|&k| d[k] != dp[k]).ok_or(Error::NoPerturbation(horizon))?;
    let mut rec = vec![ExactScalar::zero(); horizon + 1];
    for k in first..=horizon {
        let mut v = &(&dp[k] - &d[k]) / &factorial(k);
        for r in first..k {
            v -= &(&rec[r] / &factorial(k - r));
        }
        rec[k] = v;
    }
    let a = synthesize(pair, horizon)?;
    let b = synthesize(&EigenPair::new(pair.p.clone(), d_prime.clone()), horizon)?;
    let mut syn = Vec::with_capacity(horizon + 1);
    for k in 0..=horizon {
        syn.push(&b.m(k, k)? - &a.m(k, k)?);
    }
    let vanishing = (first..=horizon).filter(|&k| rec[k].is_zero()).collect();
    Ok(PerturbationReport { first, agree: rec == syn, by_recursion: rec, by_synthesis: syn, vanishing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::Rat;
    use crate::formaldiff::{classical, Classical};

    fn q(n: i64, d: i64) -> ExactScalar {
        ExactScalar::from_ratio(n, d)
    }

    fn laguerre_pair(a: Rat) -> EigenPair {
        EigenPair::new(PolySeq::laguerre(a), SequenceSpec::poly(Poly::from_ints(&[1, -2])))
    }

    #[test]
    fn synthesize_laguerre() {
        let a = Rat::new(1, 2);
        let op = synthesize(&laguerre_pair(a.clone()), 4).unwrap();
        let m = classical(&Classical::Laguerre { alpha: a }).unwrap();
        for k in 0..=4 {
            assert_eq!(op.coeff(k).unwrap(), m.coeff(k).unwrap(), "k={k}");
        }
    }

    #[test]
    fn synthesize_hermite() {
        let pair = EigenPair::new(PolySeq::hermite(), SequenceSpec::poly(Poly::from_ints(&[1, -2])));
        let op = synthesize(&pair, 3).unwrap();
        assert_eq!(op.coeff(1).unwrap(), Poly::from_ints(&[0, -2]));
        assert_eq!(op.coeff(2).unwrap(), Poly::one());
        assert!(op.coeff(3).unwrap().is_zero());
    }

    #[test]
    fn lambdas() {
        let m = classical(&Classical::Laguerre { alpha: Rat::int(0) }).unwrap();
        for n in 0..8 {
            assert_eq!(lemma_ks_lambda(&m, n).unwrap(), ExactScalar::from_int(-2 * n as i64));
        }
        let c = counterexample_operator();
        assert_eq!(lemma_ks_lambda(&c, 3).unwrap(), q(-1, 1));
        assert_eq!(lemma_ks_lambda(&c, 4).unwrap(), q(-1, 1));
        let r = counterexample_variant(CounterexampleVariant::Remark);
        assert_eq!(lemma_ks_lambda(&r, 4).unwrap(), &q(288, 1) - &q(4, 3));
    }

    #[test]
    fn counterexample_fails_at_four() {
        let c = counterexample_operator();
        // d_n − d_0 = λ_n
        let d = SequenceSpec::finite(vec![q(4, 3), q(1, 1), q(2, 3), q(1, 3), q(1, 3)]);
        let out = solve_sequence(&c, &d, 4).unwrap();
        assert_eq!(out.len(), 5);
        for o in &out[..4] {
            assert!(matches!(o, SolveOutcome::Solution { .. }));
        }
        match &out[4] {
            SolveOutcome::NoSolution { witness, alpha, .. } => {
                assert_eq!(*witness, 3);
                assert!(!alpha.is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn non_unique_when_eigenvalue_repeats_d0() {
        // M_0 = 1, M_1 = x, M_2 = −x²: λ_1 = 1, λ_2 = 2 − 2 = 0
        let op = FormalDiffOp::user_given(
            vec![Poly::one(), Poly::x(), Poly::from_ints(&[0, 0, -1])],
            None,
        )
        .unwrap();
        let d = SequenceSpec::finite(vec![q(1, 1), q(2, 1), q(1, 1)]);
        let out = solve_sequence(&op, &d, 2).unwrap();
        match &out[2] {
            SolveOutcome::NonUnique { free, particular, .. } => {
                assert_eq!(free, &vec![0]);
                let shifted = particular + &Poly::constant(q(7, 1));
                assert_eq!(op.apply(&shifted).unwrap(), shifted);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn incompatible_eigenvalue() {
        let m = classical(&Classical::Hermite).unwrap();
        let d = SequenceSpec::poly(Poly::from_ints(&[1, -3]));
        assert!(matches!(eigen_solve(&m, &d, 1, &[Poly::one()]), Err(Error::IncompatibleEigenvalue { n: 1, .. })));
    }

    #[test]
    fn expanded_equations() {
        let h = classical(&Classical::Hermite).unwrap();
        let pair = EigenPair::new(PolySeq::hermite(), SequenceSpec::poly(Poly::from_ints(&[1, -2])));
        for n in 0..8 {
            assert!(expanded_recursion_check(&h, &pair, n).unwrap().holds, "n={n}");
        }
        let a = Rat::new(2, 3);
        let m = classical(&Classical::Laguerre { alpha: a.clone() }).unwrap();
        let lp = laguerre_pair(a);
        assert!(expanded_recursion_check(&m, &lp, 2).unwrap().holds);
        // corrupt m_{10}
        let mut ms = m.coeffs(2).unwrap();
        ms[1] = &ms[1] + &Poly::one();
        let bad = FormalDiffOp::user_given(ms, None).unwrap();
        let r = expanded_recursion_check(&bad, &lp, 3).unwrap();
        assert!(!r.holds);
        assert!(r.failed.contains(&'e'));
    }

    #[test]
    fn perturbation_laguerre() {
        let pair = laguerre_pair(Rat::int(1));
        let dp = SequenceSpec::Sum {
            terms: vec![pair.d.clone(), SequenceSpec::finite(vec![q(0, 1), q(0, 1), q(1, 1)])],
        };
        let rep = perturbation_diagonal(&pair, &dp, 12).unwrap();
        assert!(rep.agree);
        assert_eq!(rep.first, 2);
        assert_eq!(rep.by_recursion[2], q(1, 2));
        assert!(rep.vanishing.is_empty());
        assert!(rep.by_recursion[..2].iter().all(|v| v.is_zero()));
        assert!(matches!(perturbation_diagonal(&pair, &pair.d, 6), Err(Error::NoPerturbation(_))));
    }
}
