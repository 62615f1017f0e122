//! Matrices of dilation operators `E_{p,d}` in the coefficient space `H(q)`:
//! exact entries up to a horizon, symbolic row tails recognised from a small
//! set of templates, truncations and point eigen-checks.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactcore::{ExactScalar, Poly, Rat, Surd};
use crate::families::norms::{laguerre_norm, laguerre_norm_f64, norm_ratio};
use crate::families::{connection, Decision, FamilyKind, PolySeq, SequenceSpec};

/// Norm parameter of a basis that can be orthonormalized exactly.
pub fn norm_parameter(q: &FamilyKind) -> Result<Rat> {
    match q {
        FamilyKind::Laguerre { alpha } => Ok(alpha.clone()),
        other => Err(Error::Unsupported(format!("normalized basis {} (only Laguerre norms are exact)", other.label()))),
    }
}

/// `a / b` for a single-term `b`.
pub fn surd_div(a: &Surd, b: &Surd) -> Option<Surd> {
    Some(a * &b.inv()?)
}

/// Coordinates of an element of `H(Q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum Coords {
    Finite { values: Vec<Surd> },
    /// `prefix[j]` for `j < prefix.len()`, then `coef · tail_j`.
    Tailed { prefix: Vec<Surd>, coef: Surd, tail: SequenceSpec },
    Symbolic { seq: SequenceSpec },
}

/// `g = Σ g_j Q_j` with `Q = q` or the orthonormal `q̃`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HqVector {
    pub basis: FamilyKind,
    pub normalized: bool,
    pub coords: Coords,
}

impl HqVector {
    pub fn finite(basis: FamilyKind, normalized: bool, mut values: Vec<Surd>) -> Self {
        while values.last().is_some_and(|v| v.is_zero()) {
            values.pop();
        }
        HqVector { basis, normalized, coords: Coords::Finite { values } }
    }

    pub fn zero(basis: FamilyKind, normalized: bool) -> Self {
        HqVector::finite(basis, normalized, Vec::new())
    }

    /// The basic vector `Q_k`.
    pub fn unit(basis: FamilyKind, normalized: bool, k: usize) -> Self {
        let mut v = vec![Surd::zero(); k + 1];
        v[k] = Surd::one();
        HqVector::finite(basis, normalized, v)
    }

    pub fn symbolic(basis: FamilyKind, normalized: bool, seq: SequenceSpec) -> Self {
        HqVector { basis, normalized, coords: Coords::Symbolic { seq } }
    }

    /// Coordinates of a polynomial.
    pub fn from_poly(q: &PolySeq, normalized: bool, f: &Poly) -> Result<Self> {
        let c = q.expand(f)?;
        let beta = if normalized { Some(norm_parameter(q.kind())?) } else { None };
        let mut values = Vec::with_capacity(c.len());
        for (j, cj) in c.into_iter().enumerate() {
            let v = Surd::from(cj);
            values.push(match &beta {
                Some(b) => &v * &laguerre_norm(b, j)?,
                None => v,
            });
        }
        Ok(HqVector::finite(q.kind().clone(), normalized, values))
    }

    /// `Σ g_j Q_j` as a polynomial; the coefficients against `q` must be rational.
    pub fn to_poly(&self, q: &PolySeq) -> Result<Poly> {
        let vals = self.finite_values().ok_or_else(|| Error::Unsupported("polynomial of an infinite vector".into()))?;
        let beta = if self.normalized { Some(norm_parameter(&self.basis)?) } else { None };
        let mut c = Vec::with_capacity(vals.len());
        for (j, v) in vals.iter().enumerate() {
            let w = match &beta {
                Some(b) => surd_div(v, &laguerre_norm(b, j)?).ok_or(Error::Irrational(j))?,
                None => v.clone(),
            };
            c.push(w.as_scalar().ok_or(Error::Irrational(j))?);
        }
        q.combine(&c)
    }

    pub fn finite_values(&self) -> Option<&[Surd]> {
        match &self.coords {
            Coords::Finite { values } => Some(values),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.finite_values().is_some()
    }

    pub fn coeff(&self, j: usize) -> Result<Surd> {
        match &self.coords {
            Coords::Finite { values } => Ok(values.get(j).cloned().unwrap_or_default()),
            Coords::Tailed { prefix, coef, tail } => match prefix.get(j) {
                Some(v) => Ok(v.clone()),
                None => Ok(coef * &tail.eval(j)?),
            },
            Coords::Symbolic { seq } => seq.eval(j),
        }
    }

    pub fn coeff_f64(&self, j: usize) -> Result<Complex64> {
        match &self.coords {
            Coords::Finite { values } => Ok(values.get(j).map(|v| v.to_complex64()).unwrap_or_default()),
            Coords::Tailed { prefix, coef, tail } => match prefix.get(j) {
                Some(v) => Ok(v.to_complex64()),
                None => Ok(coef.to_complex64() * tail.eval_f64(j)?),
            },
            Coords::Symbolic { seq } => seq.eval_f64(j),
        }
    }

    pub fn coeffs(&self, len: usize) -> Result<Vec<Surd>> {
        (0..len).map(|j| self.coeff(j)).collect()
    }

    pub fn l2_membership(&self) -> Decision {
        match &self.coords {
            Coords::Finite { .. } => Decision::Yes,
            Coords::Tailed { coef, tail, .. } => {
                if coef.is_zero() {
                    Decision::Yes
                } else {
                    tail.l2_membership()
                }
            }
            Coords::Symbolic { seq } => seq.l2_membership(),
        }
    }

    /// `Σ_{j<len} |g_j|²`.
    pub fn norm_sqr_f64(&self, len: usize) -> Result<f64> {
        let mut acc = 0.0;
        for j in 0..len {
            acc += self.coeff_f64(j)?.norm_sqr();
        }
        Ok(acc)
    }

    /// `⟨self, o⟩ = Σ g_j conj(h_j)`; one side must be finite.
    pub fn inner(&self, o: &HqVector) -> Result<Surd> {
        let len = match (self.finite_values(), o.finite_values()) {
            (Some(a), Some(b)) => a.len().min(b.len()),
            (Some(a), None) => a.len(),
            (None, Some(b)) => b.len(),
            (None, None) => return Err(Error::Unsupported("inner product of two infinite vectors".into())),
        };
        let mut acc = Surd::zero();
        for j in 0..len {
            acc = &acc + &(&self.coeff(j)? * &o.coeff(j)?.conj());
        }
        Ok(acc)
    }
}

/// The data a matrix was built from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixProvenance {
    pub p: FamilyKind,
    pub d: SequenceSpec,
    pub q: FamilyKind,
    pub normalized: bool,
}

/// Recognised shape of the entries right of the diagonal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowFamily {
    /// `a_{jk} = d_j − d_{j+1}` for `k > j`.
    ConstantTail,
    /// `a_{jk} = d_k − d_{k−1}` for `k > j`.
    DifferenceTail,
    /// `a_{jk} = d_j − d_{j+2}` for `k − j` even and positive, zero for odd offsets.
    ParityTail,
    Opaque,
}

impl RowFamily {
    /// Residue period of the tail supports.
    pub fn period(self) -> usize {
        match self {
            RowFamily::ParityTail => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for RowFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RowFamily::ConstantTail => "constant tail d_j - d_{j+1}",
            RowFamily::DifferenceTail => "difference tail d_k - d_{k-1}",
            RowFamily::ParityTail => "parity tail d_j - d_{j+2} on k = j mod 2",
            RowFamily::Opaque => "opaque",
        };
        f.write_str(s)
    }
}

/// `(1 + (−1)^{k−j}) / 2` as a sequence in `k`.
pub fn parity_indicator(j: usize) -> SequenceSpec {
    let half = ExactScalar::from_ratio(1, 2);
    let signed = if j % 2 == 0 { half.clone() } else { -&half };
    SequenceSpec::Sum {
        terms: vec![SequenceSpec::constant(half), SequenceSpec::SignAlternating { factor: Poly::constant(signed) }],
    }
}

/// Row `j` right of column `start − 1`: `a_{jk} = coef · shape_k · w_k` with
/// `w_k = 1/r_k^β` when a norm parameter is present.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowTail {
    pub start: usize,
    pub coef: Surd,
    pub shape: SequenceSpec,
    pub weight: Option<Rat>,
    pub rule: String,
}

impl RowTail {
    /// `shape · w` without the coefficient.
    pub fn spec(&self) -> SequenceSpec {
        match &self.weight {
            Some(b) => SequenceSpec::Product {
                factors: vec![self.shape.clone(), SequenceSpec::LaguerreNormReciprocal { beta: b.clone() }],
            },
            None => self.shape.clone(),
        }
    }

    pub fn eval(&self, k: usize) -> Result<Surd> {
        if self.coef.is_zero() {
            return Ok(Surd::zero());
        }
        Ok(&self.coef * &self.spec().eval(k)?)
    }

    pub fn eval_f64(&self, k: usize) -> Result<Complex64> {
        if self.coef.is_zero() {
            return Ok(Complex64::zero());
        }
        Ok(self.coef.to_complex64() * self.spec().eval_f64(k)?)
    }

    pub fn l2_membership(&self) -> Decision {
        if self.coef.is_zero() {
            Decision::Yes
        } else {
            self.spec().l2_membership()
        }
    }
}

/// Row `j`: the entries up to the diagonal and the symbolic tail after it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowSpec {
    pub row: usize,
    pub prefix: Vec<Surd>,
    /// `None` when the row could not be matched to a template.
    pub tail: Option<RowTail>,
}

impl RowSpec {
    pub fn is_opaque(&self) -> bool {
        self.tail.is_none()
    }

    pub fn entry(&self, k: usize) -> Result<Option<Surd>> {
        if let Some(v) = self.prefix.get(k) {
            return Ok(Some(v.clone()));
        }
        match &self.tail {
            Some(t) => t.eval(k).map(Some),
            None => Ok(None),
        }
    }

    /// Whether the whole row is square-summable.
    pub fn l2_membership(&self) -> Decision {
        match &self.tail {
            Some(t) => t.l2_membership(),
            None => Decision::Undecidable,
        }
    }
}

/// The matrix of `E_{p,d}` in `H(q)` or `H(q̃)`.
#[derive(Clone, Debug)]
pub struct StructuredMatrix {
    provenance: MatrixProvenance,
    p: PolySeq,
    q: PolySeq,
    horizon: usize,
    /// Column `k` holds rows `0..=k`.
    columns: Vec<Vec<Surd>>,
    family: RowFamily,
    weight: Option<Rat>,
    d_values: Vec<Surd>,
}

fn template_base(family: RowFamily, d: &[Surd], j: usize, k: usize) -> Surd {
    match family {
        RowFamily::ConstantTail => &d[j] - &d[j + 1],
        RowFamily::DifferenceTail => &d[k] - &d[k - 1],
        RowFamily::ParityTail if (k - j) % 2 == 0 => &d[j] - &d[j + 2],
        _ => Surd::zero(),
    }
}

/// Builds the exact matrix of `E_{p,d}` up to `horizon` and recognises its row tails.
pub fn matrix_rep(p: &PolySeq, d: &SequenceSpec, q: &PolySeq, normalized: bool, horizon: usize) -> Result<StructuredMatrix> {
    d.validate()?;
    let weight = if normalized { Some(norm_parameter(q.kind())?) } else { None };
    let ds = d.table(horizon + 3)?;
    let p_in_q: Vec<Vec<Surd>> = (0..=horizon)
        .map(|i| Ok(connection(p, q, i)?.into_iter().map(Surd::from).collect()))
        .collect::<Result<_>>()?;
    let mut columns = Vec::with_capacity(horizon + 1);
    for k in 0..=horizon {
        let q_in_p = connection(q, p, k)?;
        let mut col = vec![Surd::zero(); k + 1];
        for (i, c) in q_in_p.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let w = ds[i].scale(c);
            for (j, v) in p_in_q[i].iter().enumerate() {
                col[j] = &col[j] + &(&w * v);
            }
        }
        if let Some(b) = &weight {
            for (j, v) in col.iter_mut().enumerate() {
                if !v.is_zero() {
                    *v = &*v * &norm_ratio(b, j, k)?;
                }
            }
        }
        columns.push(col);
    }
    let mut m = StructuredMatrix {
        provenance: MatrixProvenance { p: p.kind().clone(), d: d.clone(), q: q.kind().clone(), normalized },
        p: p.clone(),
        q: q.clone(),
        horizon,
        columns,
        family: RowFamily::Opaque,
        weight,
        d_values: ds,
    };
    m.family = m.recognise()?;
    Ok(m)
}

impl StructuredMatrix {
    fn recognise(&self) -> Result<RowFamily> {
        'fam: for family in [RowFamily::ConstantTail, RowFamily::DifferenceTail, RowFamily::ParityTail] {
            for k in 0..=self.horizon {
                for j in 0..k {
                    let mut want = template_base(family, &self.d_values, j, k);
                    if let (Some(b), false) = (&self.weight, want.is_zero()) {
                        want = &want * &norm_ratio(b, j, k)?;
                    }
                    if want != self.columns[k][j] {
                        continue 'fam;
                    }
                }
            }
            return Ok(family);
        }
        Ok(RowFamily::Opaque)
    }

    pub fn provenance(&self) -> &MatrixProvenance {
        &self.provenance
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn family(&self) -> RowFamily {
        self.family
    }

    pub fn weight(&self) -> Option<&Rat> {
        self.weight.as_ref()
    }

    pub fn p(&self) -> &PolySeq {
        &self.p
    }

    pub fn q(&self) -> &PolySeq {
        &self.q
    }

    pub fn d(&self) -> &SequenceSpec {
        &self.provenance.d
    }

    /// `d_n`, from the stored table when possible.
    pub fn d_at(&self, n: usize) -> Result<Surd> {
        match self.d_values.get(n) {
            Some(v) => Ok(v.clone()),
            None => self.provenance.d.eval(n),
        }
    }

    fn norm(&self, j: usize) -> Result<Surd> {
        match &self.weight {
            Some(b) => laguerre_norm(b, j),
            None => Ok(Surd::one()),
        }
    }

    /// Tail coefficient of row `j`, without the `1/r_k` weight.
    fn tail_coef(&self, j: usize) -> Result<Option<Surd>> {
        let base = match self.family {
            RowFamily::ConstantTail => &self.d_at(j)? - &self.d_at(j + 1)?,
            RowFamily::DifferenceTail => Surd::one(),
            RowFamily::ParityTail => &self.d_at(j)? - &self.d_at(j + 2)?,
            RowFamily::Opaque => return Ok(None),
        };
        Ok(Some(&base * &self.norm(j)?))
    }

    /// Row coefficient as a sequence in `j`, for the template families.
    pub fn coef_sequence(&self) -> Option<SequenceSpec> {
        let d = &self.provenance.d;
        let base = match self.family {
            RowFamily::ConstantTail => d.forward_difference(1),
            RowFamily::DifferenceTail => SequenceSpec::int(1),
            RowFamily::ParityTail => d.forward_difference(2),
            RowFamily::Opaque => return None,
        };
        Some(match &self.weight {
            Some(b) => base.times(&SequenceSpec::LaguerreNorm { beta: b.clone() }),
            None => base,
        })
    }

    /// Tail shape of row `j` as a sequence in `k`.
    pub fn shape(&self, j: usize) -> Option<SequenceSpec> {
        match self.family {
            RowFamily::ConstantTail => Some(SequenceSpec::int(1)),
            RowFamily::DifferenceTail => Some(self.provenance.d.difference()),
            RowFamily::ParityTail => Some(parity_indicator(j)),
            RowFamily::Opaque => None,
        }
    }

    pub fn row_spec(&self, j: usize) -> Result<RowSpec> {
        let mut prefix = vec![Surd::zero(); j + 1];
        prefix[j] = self.d_at(j)?;
        let tail = match (self.tail_coef(j)?, self.shape(j)) {
            (Some(coef), Some(shape)) => {
                let mut rule = self.family.to_string();
                if let Some(b) = &self.weight {
                    rule.push_str(&format!(" times r_j/r_k (beta = {b})"));
                }
                Some(RowTail { start: j + 1, coef, shape, weight: self.weight.clone(), rule })
            }
            _ => None,
        };
        Ok(RowSpec { row: j, prefix, tail })
    }

    /// `a_{jk}`; entries right of the horizon need a recognised tail.
    pub fn entry(&self, j: usize, k: usize) -> Result<Surd> {
        if j > k {
            return Ok(Surd::zero());
        }
        if k <= self.horizon {
            return Ok(self.columns[k][j].clone());
        }
        if j == k {
            return self.d_at(k);
        }
        match self.row_spec(j)?.tail {
            Some(t) => t.eval(k),
            None => Err(Error::BeyondHorizon { index: k, horizon: self.horizon }),
        }
    }

    pub fn entry_f64(&self, j: usize, k: usize) -> Result<Complex64> {
        if j > k {
            return Ok(Complex64::zero());
        }
        if k <= self.horizon {
            return Ok(self.columns[k][j].to_complex64());
        }
        if j == k {
            return Ok(self.d_at(k)?.to_complex64());
        }
        let base = self.base_f64(j, k)?;
        Ok(match &self.weight {
            Some(b) => {
                let bf = b.to_f64();
                base * (laguerre_norm_f64(bf, j) / laguerre_norm_f64(bf, k))
            }
            None => base,
        })
    }

    fn base_f64(&self, j: usize, k: usize) -> Result<Complex64> {
        let d = &self.provenance.d;
        match self.family {
            RowFamily::ConstantTail => Ok(d.eval_f64(j)? - d.eval_f64(j + 1)?),
            RowFamily::DifferenceTail => Ok(d.eval_f64(k)? - d.eval_f64(k - 1)?),
            RowFamily::ParityTail if (k - j) % 2 == 0 => Ok(d.eval_f64(j)? - d.eval_f64(j + 2)?),
            RowFamily::ParityTail => Ok(Complex64::zero()),
            RowFamily::Opaque => Err(Error::BeyondHorizon { index: k, horizon: self.horizon }),
        }
    }

    /// Image of the basic vector `Q_k`.
    pub fn column_action(&self, k: usize) -> Result<HqVector> {
        let col = (0..=k).map(|j| self.entry(j, k)).collect::<Result<Vec<_>>>()?;
        Ok(HqVector::finite(self.provenance.q.clone(), self.provenance.normalized, col))
    }

    /// `A x` for a finite vector.
    pub fn apply(&self, x: &HqVector) -> Result<HqVector> {
        let vals = x.finite_values().ok_or_else(|| Error::Unsupported("matrix action on an infinite vector".into()))?;
        let mut out = vec![Surd::zero(); vals.len()];
        for (k, xk) in vals.iter().enumerate() {
            if xk.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate().take(k + 1) {
                *o = &*o + &(&self.entry(j, k)? * xk);
            }
        }
        Ok(HqVector::finite(self.provenance.q.clone(), self.provenance.normalized, out))
    }

    /// `p_n` in the coordinates of this space.
    pub fn eigenvector(&self, n: usize) -> Result<HqVector> {
        HqVector::from_poly(&self.q, self.provenance.normalized, &self.p.make_poly(n)?)
    }

    /// `A v − d_n v` for `v = p_n`; zero for a correct matrix.
    pub fn point_eigencheck(&self, n: usize) -> Result<Vec<Surd>> {
        if n > self.horizon {
            return Err(Error::BeyondHorizon { index: n, horizon: self.horizon });
        }
        let v = self.eigenvector(n)?;
        let av = self.apply(&v)?;
        let dn = self.d_at(n)?;
        (0..=n).map(|j| Ok(&av.coeff(j)? - &(&dn * &v.coeff(j)?))).collect()
    }

    /// Top-left `size × size` block in floating point.
    pub fn truncate(&self, size: usize) -> Result<DMatrix<Complex64>> {
        if size > self.horizon + 1 && self.family == RowFamily::Opaque {
            return Err(Error::BeyondHorizon { index: size - 1, horizon: self.horizon });
        }
        let mut m = DMatrix::zeros(size, size);
        for k in 0..size {
            for j in 0..=k {
                m[(j, k)] = self.entry_f64(j, k)?;
            }
        }
        Ok(m)
    }

    pub fn export(&self) -> Result<MatrixExport> {
        let mut entries = Vec::new();
        for (k, col) in self.columns.iter().enumerate() {
            for (j, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    entries.push(SparseEntry { row: j, col: k, value: v.clone() });
                }
            }
        }
        let row_tails = (0..=self.horizon)
            .map(|j| {
                Ok(self.row_spec(j)?.tail.map(|t| TailExport {
                    row: j,
                    rule: t.rule.clone(),
                    coef: t.coef.clone(),
                    tail: t.spec(),
                }))
            })
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .flatten()
            .collect();
        Ok(MatrixExport { provenance: self.provenance.clone(), horizon: self.horizon, family: self.family, entries, row_tails })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparseEntry {
    pub row: usize,
    pub col: usize,
    pub value: Surd,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TailExport {
    pub row: usize,
    pub rule: String,
    pub coef: Surd,
    pub tail: SequenceSpec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatrixExport {
    pub provenance: MatrixProvenance,
    pub horizon: usize,
    pub family: RowFamily,
    pub entries: Vec<SparseEntry>,
    pub row_tails: Vec<TailExport>,
}

/// The worked pairs `(p, q)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "example", rename_all = "snake_case")]
pub enum MatrixExample {
    /// `p = L^α`, `q = L^{α+1}`.
    LaguerreLower { alpha: Rat },
    /// `p = L^{α+1}`, `q = L^α`.
    LaguerreRaise { alpha: Rat },
    /// `p = (T_0, 2T_1, 2T_2, …)`, `q = U`.
    ChebyshevBlocked,
}

impl MatrixExample {
    pub fn pair(&self) -> Result<(PolySeq, PolySeq)> {
        let plus_one = |a: &Rat| Rat::from(a.value() + num_rational::BigRational::from_integer(1.into()));
        Ok(match self {
            MatrixExample::LaguerreLower { alpha } => (PolySeq::laguerre(alpha.clone()), PolySeq::laguerre(plus_one(alpha))),
            MatrixExample::LaguerreRaise { alpha } => (PolySeq::laguerre(plus_one(alpha)), PolySeq::laguerre(alpha.clone())),
            MatrixExample::ChebyshevBlocked => (PolySeq::new(FamilyKind::ScaledChebyshevT)?, PolySeq::chebyshev_u()),
        })
    }

    /// Accepts `laguerre-lower:<alpha>`, `laguerre-raise:<alpha>` and `chebyshev-blocked`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let alpha = || -> Result<Rat> {
            match arg {
                Some(a) => a.trim().parse().map_err(|e| Error::BadParameter(format!("alpha: {e}"))),
                None => Ok(Rat::int(0)),
            }
        };
        match head {
            "laguerre-lower" => Ok(MatrixExample::LaguerreLower { alpha: alpha()? }),
            "laguerre-raise" => Ok(MatrixExample::LaguerreRaise { alpha: alpha()? }),
            "chebyshev-blocked" => Ok(MatrixExample::ChebyshevBlocked),
            other => Err(Error::BadParameter(format!("unknown matrix example '{other}'"))),
        }
    }

    pub fn matrix(&self, d: &SequenceSpec, normalized: bool, horizon: usize) -> Result<StructuredMatrix> {
        let (p, q) = self.pair()?;
        matrix_rep(&p, d, &q, normalized, horizon)
    }
}
