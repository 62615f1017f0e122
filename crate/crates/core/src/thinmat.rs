//! Row equivalence modulo `ℓ₂`, the class decomposition of an infinite
//! matrix, its thinning, the thin and blocked predicates and the resulting
//! closability verdicts.

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::{ExactScalar, Surd};
use crate::families::{Decision, SequenceSpec};
use crate::matrixrep::{surd_div, HqVector, RowFamily, RowSpec, RowTail, StructuredMatrix};

/// Outcome of `a ∼ b`: `a − μ b ∈ ℓ₂` for some `μ ≠ 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum Equivalence {
    /// `a − μ b ∈ ℓ₂`; the tails then satisfy `t_a − μ t_b = c_a (s_a − ν s_b) w`.
    Equivalent { mu: Surd, nu: ExactScalar },
    NotEquivalent,
    Undecidable,
}

fn shape_limits(s: &SequenceSpec, period: usize) -> Option<Vec<ExactScalar>> {
    (0..period).map(|r| if period == 1 { s.limit() } else { s.restrict(period, r).limit() }).collect()
}

/// Decides whether two rows are equivalent modulo `ℓ₂`.
pub fn row_equiv(r1: &RowSpec, r2: &RowSpec) -> Equivalence {
    let (Some(t1), Some(t2)) = (&r1.tail, &r2.tail) else {
        return Equivalence::Undecidable;
    };
    match (t1.l2_membership(), t2.l2_membership()) {
        (Decision::Yes, Decision::Yes) => {
            return Equivalence::Equivalent { mu: Surd::one(), nu: ExactScalar::one() };
        }
        (Decision::Yes, Decision::No) | (Decision::No, Decision::Yes) => return Equivalence::NotEquivalent,
        (Decision::No, Decision::No) => {}
        _ => return Equivalence::Undecidable,
    }
    if t1.weight != t2.weight {
        return Equivalence::Undecidable;
    }
    if t1.shape == t2.shape {
        return match surd_div(&t1.coef, &t2.coef) {
            Some(mu) => Equivalence::Equivalent { mu, nu: ExactScalar::one() },
            None => Equivalence::Undecidable,
        };
    }
    // Both tails are bounded multiples of a weight outside ℓ₂, so on any
    // residue class where the shape limits differ the difference stays outside.
    for period in [1usize, 2] {
        let (Some(l1), Some(l2)) = (shape_limits(&t1.shape, period), shape_limits(&t2.shape, period)) else {
            continue;
        };
        if l1.iter().zip(&l2).any(|(a, b)| a.is_zero() != b.is_zero()) {
            return Equivalence::NotEquivalent;
        }
        let Some(r) = (0..period).find(|&r| !l1[r].is_zero()) else {
            continue;
        };
        let nu = &l1[r] / &l2[r];
        if (0..period).any(|s| l1[s] != &nu * &l2[s]) {
            return Equivalence::NotEquivalent;
        }
        let mut diff = t1.clone();
        diff.shape = t1.shape.minus(&t2.shape.scaled(nu.clone()));
        return match diff.spec().l2_membership() {
            Decision::Yes => match surd_div(&t1.coef, &t2.coef) {
                Some(c) => Equivalence::Equivalent { mu: c.scale(&nu), nu },
                None => Equivalence::Undecidable,
            },
            Decision::No => Equivalence::NotEquivalent,
            Decision::Undecidable => Equivalence::Undecidable,
        };
    }
    Equivalence::Undecidable
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassInfo {
    /// `0` for the class of square-summable rows.
    pub index: usize,
    pub head: usize,
    /// Members up to the classification horizon, increasing.
    pub members: Vec<usize>,
    pub rule: String,
    pub infinite: Decision,
    /// `m_t` for the listed members.
    pub multipliers: Vec<Surd>,
    /// The multipliers as a sequence over the class, up to the factor `1/c_head`.
    pub m_spec: Option<SequenceSpec>,
    /// Whether `(m_t)_{t ∈ N_i}` is square-summable.
    pub m_l2: Decision,
}

/// Row `j` of the thinning `B`: `b_j = a_j − m_j a_head`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThinRow {
    pub row: usize,
    pub head: Option<usize>,
    pub m: Surd,
    /// Entries of `b_j` right of the diagonal.
    pub tail: RowTail,
}

impl ThinRow {
    pub fn l2_membership(&self) -> Decision {
        self.tail.l2_membership()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub horizon: usize,
    pub family: RowFamily,
    pub classes: Vec<ClassInfo>,
    /// Position in `classes` of each row up to the horizon.
    pub class_of: Vec<usize>,
    pub m: Vec<Surd>,
    pub thinning: Vec<ThinRow>,
    /// Whether rows past the horizon can open classes with no member up to it.
    pub later_classes: Decision,
}

impl Classification {
    pub fn has_l2_class(&self) -> bool {
        self.classes.first().is_some_and(|c| c.index == 0)
    }

    /// `|I|`.
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of_row(&self, j: usize) -> Option<&ClassInfo> {
        self.class_of.get(j).map(|&i| &self.classes[i])
    }

    /// `b_{jk}`.
    pub fn thinning_entry(&self, a: &StructuredMatrix, j: usize, k: usize) -> Result<Surd> {
        let row = self.thinning.get(j).ok_or(Error::BeyondHorizon { index: j, horizon: self.horizon })?;
        let ajk = a.entry(j, k)?;
        match row.head {
            Some(h) if !row.m.is_zero() => Ok(&ajk - &(&row.m * &a.entry(h, k)?)),
            _ => Ok(ajk),
        }
    }

    pub fn thinning_entry_f64(&self, a: &StructuredMatrix, j: usize, k: usize) -> Result<Complex64> {
        let row = self.thinning.get(j).ok_or(Error::BeyondHorizon { index: j, horizon: self.horizon })?;
        let ajk = a.entry_f64(j, k)?;
        match row.head {
            Some(h) if !row.m.is_zero() => Ok(ajk - row.m.to_complex64() * a.entry_f64(h, k)?),
            _ => Ok(ajk),
        }
    }
}

/// Whether `seq` has a zero at some index `≥ from`.
fn zero_at_or_after(seq: &SequenceSpec, from: usize) -> Decision {
    let Some(a) = seq.asym() else {
        return Decision::Undecidable;
    };
    if a.is_eventually_zero() {
        return Decision::Yes;
    }
    let Some(zeros) = a.finite_zero_set() else {
        return Decision::Undecidable;
    };
    if zeros.iter().any(|&z| z >= from) {
        return Decision::Yes;
    }
    for n in from..a.valid_from.max(from) {
        match seq.eval(n) {
            Ok(v) if v.is_zero() => return Decision::Yes,
            Ok(_) => {}
            Err(_) => return Decision::Undecidable,
        }
    }
    Decision::No
}

/// Whether `seq` is non-zero at some index `≥ from`.
fn nonzero_at_or_after(seq: &SequenceSpec, from: usize) -> Decision {
    let Some(a) = seq.asym() else {
        return Decision::Undecidable;
    };
    if !a.is_eventually_zero() {
        return Decision::Yes;
    }
    for n in from..a.valid_from.max(from) {
        match seq.eval(n) {
            Ok(v) if !v.is_zero() => return Decision::Yes,
            Ok(_) => {}
            Err(_) => return Decision::Undecidable,
        }
    }
    Decision::No
}

fn residue_seq(seq: &SequenceSpec, period: usize, r: usize) -> SequenceSpec {
    if period == 1 {
        seq.clone()
    } else {
        seq.restrict(period, r)
    }
}

/// Partitions rows `0..=horizon` into classes and computes `m` and the thinning.
pub fn classify(a: &StructuredMatrix, horizon: usize) -> Result<Classification> {
    let rows = (0..=horizon).map(|j| a.row_spec(j)).collect::<Result<Vec<_>>>()?;
    if let Some(r) = rows.iter().find(|r| r.is_opaque()) {
        return Err(Error::ClassificationRefused(format!("row {} has no recognised tail", r.row)));
    }
    let mut in_l2 = Vec::with_capacity(rows.len());
    for r in &rows {
        match r.l2_membership() {
            Decision::Undecidable => {
                return Err(Error::ClassificationRefused(format!("square-summability of row {} is undecidable", r.row)))
            }
            d => in_l2.push(d == Decision::Yes),
        }
    }
    let mut heads: Vec<usize> = Vec::new();
    let mut assign: Vec<Option<(usize, Surd, ExactScalar)>> = vec![None; rows.len()];
    for j in 0..rows.len() {
        if in_l2[j] {
            continue;
        }
        let mut placed = false;
        for (ci, &h) in heads.iter().enumerate() {
            match row_equiv(&rows[j], &rows[h]) {
                Equivalence::Equivalent { mu, nu } => {
                    assign[j] = Some((ci, mu, nu));
                    placed = true;
                    break;
                }
                Equivalence::NotEquivalent => {}
                Equivalence::Undecidable => {
                    return Err(Error::ClassificationRefused(format!("equivalence of rows {j} and {h} is undecidable")))
                }
            }
        }
        if !placed {
            assign[j] = Some((heads.len(), Surd::one(), ExactScalar::one()));
            heads.push(j);
        }
    }

    let family = a.family();
    let period = family.period();
    let coef = a.coef_sequence();
    let offset = usize::from(in_l2.iter().any(|&b| b));
    let mut classes = Vec::new();
    if offset == 1 {
        let members: Vec<usize> = (0..rows.len()).filter(|&j| in_l2[j]).collect();
        let n = members.len();
        classes.push(ClassInfo {
            index: 0,
            head: members[0],
            members,
            rule: "square-summable rows".into(),
            infinite: Decision::Undecidable,
            multipliers: vec![Surd::zero(); n],
            m_spec: None,
            m_l2: Decision::Yes,
        });
    }
    let mut covered = vec![false; period];
    for (ci, &h) in heads.iter().enumerate() {
        let members: Vec<usize> = (0..rows.len()).filter(|&j| matches!(&assign[j], Some((c, _, _)) if *c == ci)).collect();
        let multipliers = members.iter().map(|&j| assign[j].as_ref().unwrap().1.clone()).collect();
        let r = h % period;
        covered[r] = true;
        // a template class is every row in the residue class of its head
        // whose coefficient is non-zero
        let residue_exact = (0..rows.len()).filter(|j| j % period == r).all(|j| in_l2[j] || members.contains(&j));
        let (infinite, m_spec, m_l2) = match (&coef, residue_exact) {
            (Some(c), true) => {
                let sub = residue_seq(c, period, r);
                let inf = match sub.eventually_zero() {
                    Decision::Yes => Decision::No,
                    Decision::No => Decision::Yes,
                    Decision::Undecidable => Decision::Undecidable,
                };
                let l2 = sub.l2_membership();
                (inf, Some(sub), l2)
            }
            _ => (Decision::Undecidable, None, Decision::Undecidable),
        };
        let rule = if period == 1 {
            format!("rows with non-zero tail coefficient ({family})")
        } else {
            format!("rows j = {r} mod {period} with non-zero tail coefficient ({family})")
        };
        classes.push(ClassInfo { index: ci + 1, head: h, members, rule, infinite, multipliers, m_spec, m_l2 });
    }
    let later_classes = match &coef {
        None => Decision::Undecidable,
        Some(c) => {
            let mut any = Decision::No;
            for r in (0..period).filter(|&r| !covered[r]) {
                // the first index in residue r past the horizon
                let from = (horizon + 1).saturating_sub(r).div_ceil(period);
                let sub = residue_seq(c, period, r);
                match nonzero_at_or_after(&sub, from) {
                    Decision::No => {}
                    Decision::Yes => {
                        // such rows open a class only when outside ℓ₂
                        let probe = a.row_spec(horizon + 1 + (r + period - (horizon + 1) % period) % period)?;
                        let shape_l2 = probe.tail.as_ref().map(|t| t.spec().l2_membership()).unwrap_or(Decision::Undecidable);
                        any = match shape_l2 {
                            Decision::Yes => any,
                            Decision::No => Decision::Yes,
                            Decision::Undecidable => Decision::Undecidable,
                        };
                    }
                    Decision::Undecidable => any = Decision::Undecidable,
                }
                if any == Decision::Yes {
                    break;
                }
            }
            any
        }
    };

    let mut class_of = vec![0; rows.len()];
    let mut m = vec![Surd::zero(); rows.len()];
    let mut thinning = Vec::with_capacity(rows.len());
    for (j, row) in rows.iter().enumerate() {
        let tail = row.tail.clone().expect("opaque rows refused above");
        match &assign[j] {
            None => {
                class_of[j] = 0;
                thinning.push(ThinRow { row: j, head: None, m: Surd::zero(), tail });
            }
            Some((ci, mu, nu)) => {
                class_of[j] = ci + offset;
                m[j] = mu.clone();
                let h = heads[*ci];
                let head_tail = rows[h].tail.as_ref().unwrap();
                let mut t = tail.clone();
                if tail.shape == head_tail.shape {
                    t.coef = &tail.coef - &(mu * &head_tail.coef);
                } else {
                    t.shape = tail.shape.minus(&head_tail.shape.scaled(nu.clone()));
                }
                t.rule = format!("row {j} minus {mu} times row {h}");
                thinning.push(ThinRow { row: j, head: Some(h), m: mu.clone(), tail: t });
            }
        }
    }
    Ok(Classification { horizon, family, classes, class_of, m, thinning, later_classes })
}

/// The thin predicate; `Undecidable` when class infinitude or the multiplier
/// test cannot be certified.
pub fn is_thin(c: &Classification) -> Decision {
    let mut out = Decision::Yes;
    for cl in c.classes.iter().filter(|cl| cl.index >= 1) {
        let ok = match (cl.infinite, cl.m_l2) {
            (Decision::No, _) | (_, Decision::Yes) => Decision::No,
            (Decision::Yes, Decision::No) => Decision::Yes,
            _ => Decision::Undecidable,
        };
        match ok {
            Decision::No => return Decision::No,
            Decision::Undecidable => out = Decision::Undecidable,
            Decision::Yes => {}
        }
    }
    if c.later_classes != Decision::No && out == Decision::Yes {
        return Decision::Undecidable;
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockedReport {
    pub blocked: Decision,
    /// A single class makes the condition empty.
    pub vacuous: bool,
    /// An entry `a_{jk} ≠ 0` with `j`, `k` in different classes.
    pub witness: Option<(usize, usize)>,
}

/// Checks `a_{jk} = 0` whenever `j` and `k` lie in different classes.
pub fn is_blocked(c: &Classification, a: &StructuredMatrix) -> Result<BlockedReport> {
    if c.class_count() <= 1 && c.later_classes == Decision::No {
        return Ok(BlockedReport { blocked: Decision::Yes, vacuous: true, witness: None });
    }
    for k in 0..=c.horizon {
        for j in 0..=k {
            if c.class_of[j] != c.class_of[k] && !a.entry(j, k)?.is_zero() {
                return Ok(BlockedReport { blocked: Decision::No, vacuous: false, witness: Some((j, k)) });
            }
        }
    }
    let Some(coef) = a.coef_sequence() else {
        return Ok(BlockedReport { blocked: Decision::Undecidable, vacuous: false, witness: None });
    };
    let period = a.family().period();
    let mut out = Decision::Yes;
    // A template row has non-zero entries at every later column of its residue
    // class, so a square-summable row there must not follow the head.
    for cl in c.classes.iter().filter(|cl| cl.index >= 1) {
        let r = cl.head % period;
        let sub = residue_seq(&coef, period, r);
        match zero_at_or_after(&sub, cl.head / period + 1) {
            Decision::No => {}
            Decision::Yes => out = Decision::No,
            Decision::Undecidable => {
                if out == Decision::Yes {
                    out = Decision::Undecidable
                }
            }
        }
    }
    let nonl2 = c.classes.iter().filter(|cl| cl.index >= 1).count();
    if period == 1 && nonl2 > 1 {
        out = Decision::No;
    }
    if c.later_classes != Decision::No && out == Decision::Yes {
        out = Decision::Undecidable;
    }
    Ok(BlockedReport { blocked: out, vacuous: false, witness: None })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Closability {
    Closable,
    NotClosable,
    Unknown,
}

/// Thin implies closable; blocked and closable implies thin.
pub fn closability_verdict(c: &Classification, a: &StructuredMatrix) -> Result<Closability> {
    match is_thin(c) {
        Decision::Yes => Ok(Closability::Closable),
        Decision::No => {
            if is_blocked(c, a)?.blocked == Decision::Yes {
                Ok(Closability::NotClosable)
            } else {
                Ok(Closability::Unknown)
            }
        }
        Decision::Undecidable => Ok(Closability::Unknown),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassSummary {
    pub head: usize,
    pub rule: String,
    pub m_spec: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThinVerdict {
    pub thin: Decision,
    pub blocked: Decision,
    pub vacuous: bool,
    pub closable: Closability,
    pub classes: Vec<ClassSummary>,
}

/// Classifies and evaluates all predicates; opaque matrices give `Unknown`.
pub fn verdict(a: &StructuredMatrix, horizon: usize) -> Result<ThinVerdict> {
    let c = match classify(a, horizon) {
        Ok(c) => c,
        Err(Error::ClassificationRefused(_)) => {
            return Ok(ThinVerdict {
                thin: Decision::Undecidable,
                blocked: Decision::Undecidable,
                vacuous: false,
                closable: Closability::Unknown,
                classes: Vec::new(),
            })
        }
        Err(e) => return Err(e),
    };
    let b = is_blocked(&c, a)?;
    Ok(ThinVerdict {
        thin: is_thin(&c),
        blocked: b.blocked,
        vacuous: b.vacuous,
        closable: closability_verdict(&c, a)?,
        classes: c
            .classes
            .iter()
            .map(|cl| ClassSummary { head: cl.head, rule: cl.rule.clone(), m_spec: cl.m_spec.as_ref().map(|s| s.describe()) })
            .collect(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub upto: usize,
    pub max_residual: f64,
    /// Exact residuals when both vectors are finite.
    pub exact: Option<Vec<Surd>>,
    pub holds: bool,
}

/// Residuals of `y_t = y_{head(t)} m_t + (V x)_t` for `t ≤ upto`.
pub fn graph_closure_relation(
    c: &Classification,
    a: &StructuredMatrix,
    x: &HqVector,
    y: &HqVector,
    upto: usize,
    tolerance: f64,
) -> Result<RelationReport> {
    if upto > c.horizon {
        return Err(Error::BeyondHorizon { index: upto, horizon: c.horizon });
    }
    let head_of = |t: usize| c.thinning[t].head;
    if let (Some(xs), true) = (x.finite_values(), y.is_finite()) {
        let mut res = Vec::with_capacity(upto + 1);
        for t in 0..=upto {
            let mut v = y.coeff(t)?;
            if let Some(h) = head_of(t) {
                v = &v - &(&y.coeff(h)? * &c.m[t]);
            }
            for (k, xk) in xs.iter().enumerate() {
                if !xk.is_zero() {
                    v = &v - &(&c.thinning_entry(a, t, k)? * xk);
                }
            }
            res.push(v);
        }
        let max = res.iter().map(|v| v.to_complex64().norm()).fold(0.0, f64::max);
        let holds = res.iter().all(|v| v.is_zero());
        return Ok(RelationReport { upto, max_residual: max, exact: Some(res), holds });
    }
    let cutoff = (4 * upto).max(1024);
    let mut max: f64 = 0.0;
    for t in 0..=upto {
        let mut v = y.coeff_f64(t)?;
        if let Some(h) = head_of(t) {
            v -= y.coeff_f64(h)? * c.m[t].to_complex64();
        }
        for k in 0..cutoff {
            let xk = x.coeff_f64(k)?;
            if xk != Complex64::zero() {
                v -= c.thinning_entry_f64(a, t, k)? * xk;
            }
        }
        max = max.max(v.norm());
    }
    Ok(RelationReport { upto, max_residual: max, exact: None, holds: max <= tolerance })
}

/// For a class with head `h`: `h^{(n)}_t = conj(a_{ht})/s_n`, `s_n = Σ_{t≤n} |a_{ht}|²`.
/// Returns `(‖h^{(n)}‖, (T h^{(n)})_h)`.
pub fn noncontinuity_witness(a: &StructuredMatrix, head: usize, n: usize) -> Result<(f64, Complex64)> {
    let row = (0..=n).map(|t| a.entry_f64(head, t)).collect::<Result<Vec<_>>>()?;
    let s: f64 = row.iter().map(|v| v.norm_sqr()).sum();
    if s == 0.0 {
        return Err(Error::DivisionByZero(n));
    }
    let norm = row.iter().map(|v| (v.conj() / s).norm_sqr()).sum::<f64>().sqrt();
    let value = row.iter().map(|v| v * (v.conj() / s)).sum();
    Ok((norm, value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::{Poly, Rat};
    use crate::matrixrep::MatrixExample;

    fn odd_line() -> SequenceSpec {
        SequenceSpec::poly(Poly::from_ints(&[1, -2]))
    }

    #[test]
    fn constant_tails_are_equivalent() {
        let d = SequenceSpec::poly(Poly::from_ints(&[0, 0, 1]));
        let a = MatrixExample::LaguerreLower { alpha: Rat::int(0) }.matrix(&d, false, 6).unwrap();
        let (r1, r3) = (a.row_spec(1).unwrap(), a.row_spec(3).unwrap());
        // c_1 = −3, c_3 = −7
        match row_equiv(&r1, &r3) {
            Equivalence::Equivalent { mu, .. } => assert_eq!(mu, Surd::from(ExactScalar::from_ratio(3, 7))),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn raising_rows_share_a_tail() {
        let a = MatrixExample::LaguerreRaise { alpha: Rat::int(0) }.matrix(&odd_line(), false, 6).unwrap();
        let r = row_equiv(&a.row_spec(0).unwrap(), &a.row_spec(5).unwrap());
        assert_eq!(r, Equivalence::Equivalent { mu: Surd::one(), nu: ExactScalar::one() });
        let c = classify(&a, 12).unwrap();
        assert_eq!(c.class_count(), 1);
        assert_eq!(c.classes[0].members, (0..=12).collect::<Vec<_>>());
        assert!(c.m.iter().all(|m| *m == Surd::one()));
        assert_eq!(is_thin(&c), Decision::Yes);
        assert!(c.thinning.iter().all(|t| t.l2_membership() == Decision::Yes));
    }

    #[test]
    fn summable_differences_give_a_single_l2_class() {
        // d_n = 1/(n+1): differences are O(n^-2)
        let d = SequenceSpec::RationalInN { num: Poly::one(), den: Poly::from_ints(&[1, 1]) };
        let a = MatrixExample::LaguerreRaise { alpha: Rat::int(0) }.matrix(&d, false, 6).unwrap();
        let c = classify(&a, 10).unwrap();
        assert_eq!(c.class_count(), 1);
        assert!(c.has_l2_class());
        assert_eq!(is_thin(&c), Decision::Yes);
        assert_eq!(closability_verdict(&c, &a).unwrap(), Closability::Closable);
    }

    #[test]
    fn blocked_chebyshev_example() {
        let a = MatrixExample::ChebyshevBlocked.matrix(&odd_line(), false, 8).unwrap();
        let c = classify(&a, 16).unwrap();
        assert!(c.class_count() <= 3);
        assert_eq!(c.class_count(), 2);
        let b = is_blocked(&c, &a).unwrap();
        assert_eq!(b.blocked, Decision::Yes);
        assert!(!b.vacuous);
        // constant tails: m ≡ 1 on each parity class
        assert_eq!(is_thin(&c), Decision::Yes);
    }

    #[test]
    fn summable_multipliers_are_not_closable() {
        // d_n = (4/3) 2^{-n} gives d_j − d_{j+2} = 2^{-j}
        let d = SequenceSpec::Geometric { base: ExactScalar::from_ratio(1, 2), factor: Poly::constant(ExactScalar::from_ratio(4, 3)) };
        let a = MatrixExample::ChebyshevBlocked.matrix(&d, false, 8).unwrap();
        let c = classify(&a, 12).unwrap();
        assert_eq!(is_blocked(&c, &a).unwrap().blocked, Decision::Yes);
        assert_eq!(is_thin(&c), Decision::No);
        assert_eq!(closability_verdict(&c, &a).unwrap(), Closability::NotClosable);
    }

    #[test]
    fn finite_class_is_not_thin() {
        // d eventually constant: only finitely many rows have non-zero tails
        let d = SequenceSpec::EventuallyConstant {
            prefix: vec![ExactScalar::from_int(3), ExactScalar::from_int(1)],
            c: ExactScalar::zero(),
        };
        let a = MatrixExample::LaguerreLower { alpha: Rat::int(0) }.matrix(&d, false, 6).unwrap();
        let c = classify(&a, 10).unwrap();
        let cl = c.classes.iter().find(|c| c.index == 1).unwrap();
        assert_eq!(cl.infinite, Decision::No);
        assert_eq!(is_thin(&c), Decision::No);
        let b = is_blocked(&c, &a).unwrap();
        assert_eq!(b.blocked, Decision::No);
        assert_eq!(closability_verdict(&c, &a).unwrap(), Closability::Unknown);
    }

    #[test]
    fn opaque_matrices_are_refused() {
        let a = crate::matrixrep::matrix_rep(
            &crate::families::PolySeq::hermite(),
            &odd_line(),
            &crate::families::PolySeq::chebyshev_t(),
            false,
            4,
        )
        .unwrap();
        assert!(matches!(classify(&a, 4), Err(Error::ClassificationRefused(_))));
        assert_eq!(verdict(&a, 4).unwrap().closable, Closability::Unknown);
    }

    #[test]
    fn relation_on_graph_points() {
        let a = MatrixExample::LaguerreRaise { alpha: Rat::new(1, 2) }.matrix(&odd_line(), false, 8).unwrap();
        let c = classify(&a, 8).unwrap();
        let x = a.eigenvector(4).unwrap();
        let y = a.apply(&x).unwrap();
        let rep = graph_closure_relation(&c, &a, &x, &y, 8, 1e-9).unwrap();
        assert!(rep.holds);
        let zero = HqVector::zero(a.provenance().q.clone(), false);
        assert!(graph_closure_relation(&c, &a, &zero, &zero, 8, 1e-9).unwrap().holds);
        let mut bad = y.finite_values().unwrap().to_vec();
        bad[2] = &bad[2] + &Surd::one();
        let bad = HqVector::finite(a.provenance().q.clone(), false, bad);
        let rep = graph_closure_relation(&c, &a, &x, &bad, 8, 1e-9).unwrap();
        assert!(!rep.holds);
        assert!(rep.max_residual > 0.5);
    }

    #[test]
    fn unbounded_witness() {
        let a = MatrixExample::LaguerreRaise { alpha: Rat::int(0) }.matrix(&odd_line(), false, 8).unwrap();
        let mut last = f64::INFINITY;
        for n in [64, 128, 256, 512] {
            let (norm, value) = noncontinuity_witness(&a, 0, n).unwrap();
            assert!(norm < last);
            last = norm;
            assert!((value - Complex64::new(1.0, 0.0)).norm() < 1e-9);
        }
    }
}
