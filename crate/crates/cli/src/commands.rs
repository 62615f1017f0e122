use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use num_complex::Complex64;
use serde_json::{json, Value};

use opspectra::eigensynth::{
    counterexample_variant, lemma_ks_lambda, perturbation_diagonal, solve_sequence, synthesize,
    CounterexampleVariant, EigenPair, SolveOutcome,
};
use opspectra::exactcore::{ExactScalar, Rat, Surd};
use opspectra::families::{Decision, FamilyKind, PolySeq, SequenceSpec};
use opspectra::formaldiff::{FormalDiffOp, OpSpec};
use opspectra::matrixrep::{HqVector, MatrixExample};
use opspectra::shiftchar::{theorem1_check, Theorem1Verdict};
use opspectra::spectralops::{
    adjoint_domain_test, approx_eigen_recursion, closability, closure_apply, closure_apply_direct,
    closure_apply_with_ell, indicator_residuals, residual_chart, thm6_necessary_check, thm7_sufficient_construct,
    truncation_spectrum, ClassVariant, DomainVerdict, OperatorClass, Thm7Outcome,
};
use opspectra::thinmat::{self, Closability};

use crate::config::RunConfig;
use crate::output::{Artifact, Badge, Failure, Table};

type Out = Result<Artifact, Failure>;

fn usage(m: impl Into<String>) -> Failure {
    Failure::Usage(m.into())
}

pub fn family(s: &str) -> Result<PolySeq, Failure> {
    Ok(PolySeq::parse(s)?)
}

pub fn sequence(s: &str, flag: &str) -> Result<SequenceSpec, Failure> {
    let d = opspectra::families::parse_sequence(s).map_err(|e| usage(format!("{flag} '{s}': {e}")))?;
    d.validate()?;
    Ok(d)
}

pub fn scalar(s: &str, flag: &str) -> Result<ExactScalar, Failure> {
    s.parse().map_err(|e| usage(format!("{flag} '{s}': {e}")))
}

pub fn rational(s: &str, flag: &str) -> Result<Rat, Failure> {
    s.parse().map_err(|e| usage(format!("{flag} '{s}': {e}")))
}

/// `a,b,c` or `[a,b,c]` (finite), `e:k` (basic vector), `seq:<sequence>` (symbolic).
pub fn vector(s: &str, flag: &str, basis: FamilyKind, normalized: bool) -> Result<HqVector, Failure> {
    let t = s.trim();
    if let Some(rest) = t.strip_prefix("seq:") {
        return Ok(HqVector::symbolic(basis, normalized, sequence(rest, flag)?));
    }
    if let Some(rest) = t.strip_prefix("e:") {
        let k = rest.trim().parse().map_err(|_| usage(format!("{flag} '{s}': bad index")))?;
        return Ok(HqVector::unit(basis, normalized, k));
    }
    let body = t.strip_prefix('[').and_then(|b| b.strip_suffix(']')).unwrap_or(t);
    let mut values = Vec::new();
    if !body.trim().is_empty() {
        for (i, item) in body.split(',').enumerate() {
            let v = scalar(item, flag).map_err(|e| match e {
                Failure::Usage(m) => usage(format!("{m} (entry {i})")),
                other => other,
            })?;
            values.push(Surd::from(v));
        }
    }
    Ok(HqVector::finite(basis, normalized, values))
}

fn strings<T: ToString>(v: &[T]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

fn decision(d: Decision) -> Value {
    match d.known() {
        Some(b) => Value::Bool(b),
        None => Value::Null,
    }
}

fn complex(c: Complex64) -> Value {
    json!([c.re, c.im])
}

fn prefix(v: &HqVector, len: usize) -> Result<Vec<String>, Failure> {
    let n = match v.finite_values() {
        Some(f) => f.len(),
        None => len,
    };
    (0..n).map(|k| Ok(v.coeff(k)?.to_string())).collect()
}

fn vector_json(v: &HqVector, len: usize) -> Result<Value, Failure> {
    Ok(json!({
        "basis": v.basis.label(),
        "normalized": v.normalized,
        "finite": v.is_finite(),
        "coefficients": prefix(v, len)?,
        "coords": v.coords,
    }))
}

fn outcome_label(o: &SolveOutcome) -> &'static str {
    match o {
        SolveOutcome::Solution { .. } => "Solution",
        SolveOutcome::NoSolution { .. } => "NoSolution",
        SolveOutcome::NonUnique { .. } => "NonUnique",
    }
}

fn step_json(n: usize, o: &SolveOutcome) -> Value {
    let mut v = json!({ "n": n, "outcome": outcome_label(o) });
    match o {
        SolveOutcome::Solution { p, .. } => v["p"] = json!(p.to_string()),
        SolveOutcome::NoSolution { witness, alpha, .. } => {
            v["witness"] = json!(witness);
            v["alpha"] = json!(alpha.to_string());
        }
        SolveOutcome::NonUnique { free, particular, .. } => {
            v["free"] = json!(free);
            v["p"] = json!(particular.to_string());
        }
    }
    v
}

/// `d_n = m_{00} + λ_n`, the only eigenvalues the operator can have.
fn implied_d(op: &FormalDiffOp, upto: usize) -> Result<SequenceSpec, Failure> {
    let m00 = op.m(0, 0)?;
    let mut t = Vec::with_capacity(upto + 1);
    for n in 0..=upto {
        t.push(&m00 + &lemma_ks_lambda(op, n)?);
    }
    Ok(SequenceSpec::finite(t))
}

pub fn load_operator(path: &Path) -> Result<FormalDiffOp, Failure> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let spec: OpSpec = serde_json::from_str(&text)
        .map_err(|e| usage(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))?;
    Ok(FormalDiffOp::from_spec(&spec)?)
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// Polynomial family, e.g. `laguerre:0`, `hermite`, `jacobi:1/2,1/3`
    #[arg(long)]
    pub p: String,
    /// Eigenvalue sequence, e.g. `-2n+1`
    #[arg(long, allow_hyphen_values = true)]
    pub d: String,
    /// Number of coefficients `M_1..M_K` to compute
    #[arg(long = "K", alias = "k", default_value_t = 8)]
    pub k: usize,
}

pub fn synth(a: &SynthArgs, _cfg: &RunConfig) -> Out {
    let p = family(&a.p)?;
    let d = sequence(&a.d, "--d")?;
    let pair = EigenPair::new(p.clone(), d.clone());
    pair.validate(a.k)?;
    let op = synthesize(&pair, a.k)?;
    let spec = op.to_spec(a.k)?;
    let result = json!({
        "family": p.kind().label(),
        "d": d.describe(),
        "K": a.k,
        "M": strings(&spec.m),
        "order": op.order_probe(a.k)?,
    });
    Ok(Artifact::new("synth", Badge::Exact, result, op.describe(a.k)?))
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Variant {
    Abstract,
    Remark,
}

impl From<Variant> for CounterexampleVariant {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Abstract => CounterexampleVariant::Abstract,
            Variant::Remark => CounterexampleVariant::Remark,
        }
    }
}

#[derive(Args, Debug)]
pub struct EigensolveArgs {
    /// Operator file `{"M": [[c0, c1, ...], ...], "order": r}`
    #[arg(long, conflicts_with = "variant")]
    pub op: Option<PathBuf>,
    /// Built-in fourth-order operator
    #[arg(long, value_enum)]
    pub variant: Option<Variant>,
    /// Eigenvalue sequence; defaults to `M_0 + λ_n`
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    #[arg(long, default_value_t = 4)]
    pub upto: usize,
}

pub fn eigensolve(a: &EigensolveArgs, _cfg: &RunConfig) -> Out {
    let op = match (&a.op, a.variant) {
        (Some(p), _) => load_operator(p)?,
        (None, Some(v)) => counterexample_variant(v.into()),
        (None, None) => return Err(usage("eigensolve needs --op or --variant")),
    };
    let d = match &a.d {
        Some(s) => sequence(s, "--d")?,
        None => implied_d(&op, a.upto)?,
    };
    let steps = solve_sequence(&op, &d, a.upto)?;
    let mut human = String::new();
    let mut js = Vec::new();
    for (n, o) in steps.iter().enumerate() {
        let _ = writeln!(human, "n={n}: {}", outcome_label(o));
        js.push(step_json(n, o));
    }
    let result = json!({ "d": strings(&d.scalar_table(a.upto + 1)?), "steps": js });
    Ok(Artifact::new("eigensolve", Badge::Exact, result, human))
}

#[derive(Args, Debug)]
pub struct CounterexampleArgs {
    #[arg(long, value_enum, default_value = "abstract")]
    pub variant: Variant,
}

pub fn counterexample(a: &CounterexampleArgs, _cfg: &RunConfig) -> Out {
    let op = counterexample_variant(a.variant.into());
    let d = implied_d(&op, 4)?;
    let steps = solve_sequence(&op, &d, 4)?;
    let n = steps.len() - 1;
    let last = &steps[n];
    let lambdas = (1..=4).map(|k| lemma_ks_lambda(&op, k).map(|l| l.to_string())).collect::<Result<Vec<_>, _>>()?;
    let mut result = json!({
        "n": n,
        "outcome": outcome_label(last),
        "witness": match last { SolveOutcome::NoSolution { witness, .. } => json!(witness), _ => Value::Null },
        "lambda": lambdas,
        "operator": op.describe(4)?,
    });
    if let Some(p) = last.solution() {
        result["p"] = json!(p.to_string());
    }
    let human = format!("{}\nlambda_1..4 = {}\nn={n}: {}", op.describe(4)?, lambdas.join(", "), outcome_label(last));
    Ok(Artifact::new("counterexample", Badge::Exact, result, human))
}

#[derive(Args, Debug)]
pub struct PerturbArgs {
    #[arg(long)]
    pub p: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d: String,
    /// The perturbed sequence
    #[arg(long = "d-prime", allow_hyphen_values = true)]
    pub d_prime: String,
    #[arg(long, default_value_t = 12)]
    pub upto: usize,
}

pub fn perturb(a: &PerturbArgs, _cfg: &RunConfig) -> Out {
    let pair = EigenPair::new(family(&a.p)?, sequence(&a.d, "--d")?);
    let r = perturbation_diagonal(&pair, &sequence(&a.d_prime, "--d-prime")?, a.upto)?;
    let result = json!({
        "first": r.first,
        "by_recursion": strings(&r.by_recursion),
        "by_synthesis": strings(&r.by_synthesis),
        "agree": r.agree,
        "vanishing": r.vanishing,
    });
    let human = format!(
        "first perturbed index {}\nrecursion and synthesis agree: {}\nvanishing differences at {:?}",
        r.first, r.agree, r.vanishing
    );
    Ok(Artifact::new("perturb", Badge::Exact, result, human))
}

#[derive(Args, Debug)]
pub struct ShiftArgs {
    #[arg(long)]
    pub p: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d: String,
    #[arg(long, allow_hyphen_values = true)]
    pub a: String,
    #[arg(long, allow_hyphen_values = true)]
    pub b: String,
    #[arg(long, default_value_t = 32)]
    pub upto: usize,
}

pub fn shiftcheck(a: &ShiftArgs, _cfg: &RunConfig) -> Out {
    let v = theorem1_check(
        &family(&a.p)?,
        &sequence(&a.d, "--d")?,
        &scalar(&a.a, "--a")?,
        &scalar(&a.b, "--b")?,
        a.upto,
    )?;
    let (result, human) = match &v {
        Theorem1Verdict::Equal { horizon, b_n, symmetric, .. } => (
            json!({ "verdict": "equal", "horizon": horizon, "b_n": b_n.to_string(), "symmetric": symmetric }),
            format!("equal up to {horizon}; b_n = {b_n}"),
        ),
        Theorem1Verdict::NotEqual { witness, diagnostic } => (
            json!({ "verdict": "not_equal", "witness": witness, "diagnostic": diagnostic }),
            format!("not equal at n={witness}: {diagnostic}"),
        ),
    };
    Ok(Artifact::new("shiftcheck", Badge::Exact, result, human))
}

#[derive(Args, Debug)]
pub struct MatrixArgs {
    /// `laguerre-lower:<alpha>`, `laguerre-raise:<alpha>` or `chebyshev-blocked`
    #[arg(long)]
    pub example: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d: String,
    /// Use the orthonormal basis of the target space
    #[arg(long)]
    pub normalized: bool,
    /// Size of the printed block in human output
    #[arg(long, default_value_t = 6)]
    pub show: usize,
}

pub fn matrix(a: &MatrixArgs, cfg: &RunConfig) -> Out {
    let ex = MatrixExample::parse(&a.example)?;
    let d = sequence(&a.d, "--d")?;
    let m = ex.matrix(&d, a.normalized, cfg.horizon)?;
    let export = m.export()?;
    let mut table = Table::new(&["row", "col", "value"]);
    for e in &export.entries {
        table.push(vec![e.row.to_string(), e.col.to_string(), e.value.to_string()]);
    }
    let mut human = format!("row rule: {}\n", m.family());
    let show = a.show.min(cfg.horizon + 1);
    for j in 0..show {
        let row: Vec<String> = (0..show).map(|k| m.entry(j, k).map(|v| v.to_string())).collect::<Result<_, _>>()?;
        let _ = writeln!(human, "{}", row.join("\t"));
    }
    let result = json!({
        "horizon": export.horizon,
        "family": export.family.to_string(),
        "entries": export.entries.iter().map(|e| json!([e.row, e.col, e.value.to_string()])).collect::<Vec<_>>(),
        "row_tails": export.row_tails.iter().map(|t| json!({
            "row": t.row, "rule": t.rule, "coef": t.coef.to_string(), "tail": t.tail.describe(),
        })).collect::<Vec<_>>(),
    });
    Ok(Artifact::new("matrix", Badge::Exact, result, human).with_table(table))
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub example: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d: String,
    #[arg(long)]
    pub normalized: bool,
}

pub fn classify(a: &ClassifyArgs, cfg: &RunConfig) -> Out {
    let ex = MatrixExample::parse(&a.example)?;
    let m = ex.matrix(&sequence(&a.d, "--d")?, a.normalized, cfg.horizon)?;
    let v = thinmat::verdict(&m, cfg.horizon)?;
    let closable = match v.closable {
        Closability::Closable => json!(true),
        Closability::NotClosable => json!(false),
        Closability::Unknown => Value::Null,
    };
    let result = json!({
        "thin": decision(v.thin),
        "blocked": decision(v.blocked),
        "vacuous": v.vacuous,
        "closable": closable,
        "classes": v.classes,
    });
    let mut human = format!("thin: {:?}\nblocked: {:?}\nclosable: {:?}\n", v.thin, v.blocked, v.closable);
    for c in &v.classes {
        let _ = writeln!(human, "class at row {}: {} (m = {})", c.head, c.rule, c.m_spec.as_deref().unwrap_or("-"));
    }
    Ok(Artifact::new("classify", Badge::Exact, result, human).refused(v.closable == Closability::Unknown))
}

#[derive(Args, Debug)]
pub struct ClassArgs {
    /// Operator class A, B, C or D
    #[arg(long, default_value = "D")]
    pub class: String,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d: String,
}

impl ClassArgs {
    pub fn build(&self) -> Result<OperatorClass, Failure> {
        let v = ClassVariant::parse(&self.class)?;
        Ok(OperatorClass::new(v, rational(&self.alpha, "--alpha")?, sequence(&self.d, "--d")?)?)
    }
}

#[derive(Args, Debug)]
pub struct AdjointArgs {
    #[command(flatten)]
    pub cls: ClassArgs,
    /// Vector in the class's space
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
}

pub fn adjoint_test(a: &AdjointArgs, _cfg: &RunConfig) -> Out {
    let cls = a.cls.build()?;
    let g = vector(&a.g, "--g", cls.basis(), cls.normalized())?;
    let cert = adjoint_domain_test(&cls, &g)?;
    let result = json!({
        "class": format!("{:?}", cls.variant),
        "verdict": cert.verdict,
        "prefix": strings(&cert.prefix),
        "coef": cert.coef.as_ref().map(|c| c.to_string()),
        "tail": cert.tail.as_ref().map(|t| t.describe()),
        "partial_sums": cert.partial_sums,
    });
    let human = format!(
        "{:?}\ninner products beyond the support: ({}) * {}",
        cert.verdict,
        cert.coef.as_ref().map_or("?".into(), |c| c.to_string()),
        cert.tail.as_ref().map_or("?".into(), |t| t.describe())
    );
    let badge = if cert.coef.is_some() { Badge::Exact } else { Badge::Numeric };
    Ok(Artifact::new("adjoint-test", badge, result, human).refused(cert.verdict == DomainVerdict::Undecidable))
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ClosureForm {
    Auto,
    /// Class A through the limit `ℓ = Σ g_k / r_k`
    Ell,
    /// Closed-form entries summed directly
    Direct,
}

#[derive(Args, Debug)]
pub struct ClosureArgs {
    #[command(flatten)]
    pub cls: ClassArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    #[arg(long, value_enum, default_value = "auto")]
    pub form: ClosureForm,
}

pub fn closure(a: &ClosureArgs, cfg: &RunConfig) -> Out {
    let cls = a.cls.build()?;
    let g = vector(&a.g, "--g", cls.basis(), cls.normalized())?;
    let v = match a.form {
        ClosureForm::Auto => closure_apply(&cls, &g)?,
        ClosureForm::Ell => closure_apply_with_ell(&cls, &g)?,
        ClosureForm::Direct => closure_apply_direct(&cls, &g)?,
    };
    let result = json!({
        "class": format!("{:?}", cls.variant),
        "closable": closability(&cls, cfg.horizon)?,
        "image": vector_json(&v, cfg.horizon)?,
    });
    let human = prefix(&v, cfg.horizon)?.join("\n");
    Ok(Artifact::new("closure-apply", Badge::Exact, result, human))
}

#[derive(Args, Debug)]
pub struct Thm6Args {
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d: String,
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
    #[arg(long, allow_hyphen_values = true)]
    pub g: String,
    /// Size of the witnessing vector used for the limits
    #[arg(long, default_value_t = 64)]
    pub probe: usize,
}

fn class_d(alpha: &str, d: &str) -> Result<OperatorClass, Failure> {
    Ok(OperatorClass::new(ClassVariant::D, rational(alpha, "--alpha")?, sequence(d, "--d")?)?)
}

pub fn thm6(a: &Thm6Args, cfg: &RunConfig) -> Out {
    let cls = class_d(&a.alpha, &a.d)?;
    let f = vector(&a.f, "--f", cls.basis(), false)?;
    let g = vector(&a.g, "--g", cls.basis(), false)?;
    let r = thm6_necessary_check(&cls, &f, &g, cfg.horizon, a.probe, cfg.float_tolerance)?;
    let human = format!(
        "identity failures: {:?}\n|h_n - f|: {:e}\n|h_nn d_n|: {:e}\nseries defect: {:e}\npassed: {}",
        r.b_failures, r.a2_deviation, r.a3_value, r.a4_deviation, r.passed
    );
    let result = serde_json::to_value(&r).expect("serializable");
    Ok(Artifact::new("thm6", Badge::Mixed, result, human))
}

#[derive(Args, Debug)]
pub struct Thm7Args {
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d: String,
    #[arg(long, allow_hyphen_values = true)]
    pub f: String,
}

pub fn thm7(a: &Thm7Args, cfg: &RunConfig) -> Out {
    let cls = class_d(&a.alpha, &a.d)?;
    let f = vector(&a.f, "--f", cls.basis(), false)?;
    let out = thm7_sufficient_construct(&cls, &f, &cfg.truncation_ladder)?;
    let mut table = Table::new(&["n", "error_sq"]);
    let (result, human, refused) = match &out {
        Thm7Outcome::Accepted { witness, equals_tf } => {
            for (n, e) in &witness.log {
                table.push(vec![n.to_string(), format!("{e:e}")]);
            }
            let g = match &witness.g {
                Some(g) => prefix(g, cfg.horizon)?,
                None => witness.g_prefix.iter().take(cfg.horizon + 1).map(|c| format!("{c}")).collect(),
            };
            let result = json!({
                "outcome": "accepted",
                "S": complex(witness.s),
                "S_exact": witness.s_exact.as_ref().map(|s| s.to_string()),
                "g": g,
                "g_exact": witness.g.is_some(),
                "equals_tf": equals_tf,
                "log": witness.log,
            });
            let last = witness.log.last().map_or(f64::NAN, |l| l.1);
            (result, format!("accepted; S = {}; final |Th_n - g|^2 = {last:e}", witness.s), false)
        }
        Thm7Outcome::Rejected { condition, detail } => (
            json!({ "outcome": "rejected", "condition": condition, "detail": detail }),
            format!("rejected ({condition:?}): {detail}"),
            true,
        ),
    };
    Ok(Artifact::new("thm7", Badge::Mixed, result, human).with_table(table).refused(refused))
}

#[derive(Args, Debug)]
pub struct EigenprobeArgs {
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub alpha: String,
    #[arg(long, allow_hyphen_values = true)]
    pub d: String,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: String,
    /// Index of the last non-zero coordinate
    #[arg(long, default_value_t = 16)]
    pub seed: usize,
}

pub fn eigenprobe(a: &EigenprobeArgs, cfg: &RunConfig) -> Out {
    let cls = class_d(&a.alpha, &a.d)?;
    let lambda = scalar(&a.lambda, "--lambda")?;
    let probe = approx_eigen_recursion(&cls, &lambda, a.seed, &cfg.truncation_ladder)?;
    let lf = lambda.to_complex64();
    let ind = indicator_residuals(&cls, lf, &cfg.truncation_ladder)?;
    let mut table = Table::new(&["probe", "lambda_re", "lambda_im", "n", "residual"]);
    for (n, r) in &probe.residuals {
        table.push(vec!["recursion".into(), lf.re.to_string(), lf.im.to_string(), n.to_string(), format!("{r:e}")]);
    }
    for (n, r) in &ind {
        table.push(vec!["indicator".into(), lf.re.to_string(), lf.im.to_string(), n.to_string(), format!("{r:e}")]);
    }
    let result = json!({
        "lambda": lambda.to_string(),
        "seed": probe.seed,
        "g": prefix(&probe.g, probe.seed)?,
        "prefix_constant": probe.prefix_constant,
        "boundary_defect": probe.boundary_defect,
        "recursion_residuals": probe.residuals,
        "indicator_residuals": ind,
        "heuristic": true,
    });
    let human = format!(
        "prefix constant: {}\nboundary defect |d_K - lambda| = {:e}\nresiduals are evidence only and certify no spectral claim",
        probe.prefix_constant, probe.boundary_defect
    );
    Ok(Artifact::new("eigenprobe", Badge::Mixed, result, human).with_table(table))
}

#[derive(Args, Debug)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub cls: ClassArgs,
    /// Truncation size, at most the horizon
    #[arg(long)]
    pub size: Option<usize>,
    /// Residual chart over `re0:re1:im0:im1:steps`
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
}

fn parse_grid(s: &str) -> Result<Vec<Complex64>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let bad = || usage(format!("--grid '{s}': expected re0:re1:im0:im1:steps"));
    if parts.len() != 5 {
        return Err(bad());
    }
    let f = |i: usize| parts[i].trim().parse::<f64>().map_err(|_| bad());
    let steps: usize = parts[4].trim().parse().map_err(|_| bad())?;
    if steps == 0 {
        return Err(bad());
    }
    let (r0, r1, i0, i1) = (f(0)?, f(1)?, f(2)?, f(3)?);
    let at = |a: f64, b: f64, k: usize| if steps == 1 { a } else { a + (b - a) * k as f64 / (steps - 1) as f64 };
    let mut out = Vec::with_capacity(steps * steps);
    for i in 0..steps {
        for r in 0..steps {
            out.push(Complex64::new(at(r0, r1, r), at(i0, i1, i)));
        }
    }
    Ok(out)
}

pub fn spectrum(a: &SpectrumArgs, cfg: &RunConfig) -> Out {
    let cls = a.cls.build()?;
    let size = a.size.unwrap_or(cfg.horizon);
    if size > cfg.horizon {
        return Err(usage(format!("--size {size} exceeds the horizon {}", cfg.horizon)));
    }
    let eig = truncation_spectrum(&cls, size)?;
    let diag: Vec<Complex64> = (0..size).map(|k| cls.d.eval_f64(k)).collect::<Result<_, _>>()?;
    let dev = opspectra::spectralops::match_distance(&eig, &diag);
    let scale = diag.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let within = dev <= cfg.float_tolerance * scale;
    let mut result = json!({
        "class": format!("{:?}", cls.variant),
        "size": size,
        "eigenvalues": eig.iter().map(|z| complex(*z)).collect::<Vec<_>>(),
        "max_deviation_from_diagonal": dev,
        "within_tolerance": within,
    });
    let mut human = format!("{size} eigenvalues; largest distance to the diagonal {dev:e}\n");
    let table = match &a.grid {
        Some(g) => {
            let rows = residual_chart(&cls, &parse_grid(g)?, &cfg.truncation_ladder)?;
            let mut t = Table::new(&["lambda_re", "lambda_im", "n", "residual"]);
            for r in &rows {
                t.push(vec![r.lambda_re.to_string(), r.lambda_im.to_string(), r.n.to_string(), format!("{:e}", r.residual)]);
            }
            result["chart"] = serde_json::to_value(&rows).expect("serializable");
            result["chart_is_heuristic"] = json!(true);
            human.push_str("residual chart attached; small residuals are heuristic evidence only\n");
            t
        }
        None => {
            let mut t = Table::new(&["k", "re", "im"]);
            for (k, z) in eig.iter().enumerate() {
                t.push(vec![k.to_string(), z.re.to_string(), z.im.to_string()]);
            }
            t
        }
    };
    Ok(Artifact::new("spectrum", Badge::Numeric, result, human).with_table(table))
}
