use opspectra::exactcore::{ExactScalar, Poly, Rat, Surd};
use opspectra::families::{laguerre_norm, Decision, SequenceSpec};
use opspectra::matrixrep::{surd_div, HqVector};
use opspectra::spectralops::{
    adjoint_apply, adjoint_domain_test, closability, closure_apply, closure_apply_direct, closure_condition,
    m_alpha_closure, m_alpha_plus_one_closure, thm6_necessary_check, thm7_sufficient_construct, truncation_spectrum,
    match_distance, ClassVariant, DomainVerdict, OperatorClass, Thm7Condition, Thm7Outcome,
};
use opspectra::thinmat::Closability;
use proptest::prelude::*;

const ALL: [ClassVariant; 4] = [ClassVariant::A, ClassVariant::B, ClassVariant::C, ClassVariant::D];

fn odd_line() -> SequenceSpec {
    SequenceSpec::poly(Poly::from_ints(&[1, -2]))
}

fn q(n: i64, d: i64) -> ExactScalar {
    ExactScalar::from_ratio(n, d)
}

fn s(n: i64, d: i64) -> Surd {
    Surd::from(q(n, d))
}

/// `1 + 2^{-n}`, whose differences are square-summable.
fn convergent_d() -> SequenceSpec {
    SequenceSpec::int(1).plus(&SequenceSpec::Geometric { base: q(1, 2), factor: Poly::from_ints(&[1]) })
}

fn poly_d() -> impl Strategy<Value = SequenceSpec> {
    proptest::collection::vec(-5i64..=5, 2..=3)
        .prop_filter("non-constant", |c| c[1..].iter().any(|&x| x != 0))
        .prop_map(|c| SequenceSpec::poly(Poly::from_ints(&c)))
}

fn coeffs(max: usize) -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    proptest::collection::vec((-6i64..=6, -3i64..=3, 1i64..=5), 1..=max)
}

fn to_surds(c: &[(i64, i64, i64)]) -> Vec<Surd> {
    c.iter()
        .map(|&(re, im, den)| {
            Surd::from(ExactScalar::new(
                num_rational::BigRational::new(re.into(), den.into()),
                num_rational::BigRational::new(im.into(), den.into()),
            ))
        })
        .collect()
}

/// The weight `w_t` with `⟨g, T Q_k⟩ = K w_k-tail` and `K = Σ g_t conj(w_t)`.
fn adjoint_weight(cls: &OperatorClass, t: usize) -> Surd {
    let r = if matches!(cls.variant, ClassVariant::A | ClassVariant::B) {
        laguerre_norm(&cls.beta(), t).unwrap()
    } else {
        Surd::one()
    };
    match cls.variant {
        ClassVariant::A | ClassVariant::C => &(&cls.d.eval(t).unwrap() - &cls.d.eval(t + 1).unwrap()) * &r,
        ClassVariant::B | ClassVariant::D => r,
    }
}

/// Moves `g` into `D(T*)` by cancelling the coefficient of the tail.
fn project(cls: &OperatorClass, mut g: Vec<Surd>) -> Vec<Surd> {
    let k: Surd = g.iter().enumerate().map(|(t, v)| v * &adjoint_weight(cls, t).conj()).sum();
    if let Some(t) = (0..g.len()).rev().find(|&t| !adjoint_weight(cls, t).is_zero()) {
        let w = adjoint_weight(cls, t).conj();
        g[t] = &g[t] - &surd_div(&k, &w).unwrap();
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn adjoint_duality(variant in 0usize..4, d in poly_d(), x in coeffs(8), g in coeffs(8)) {
        let cls = OperatorClass::new(ALL[variant], Rat::new(3, 2), d).unwrap();
        let basis = cls.basis();
        let norm = cls.normalized();
        let x = HqVector::finite(basis.clone(), norm, to_surds(&x));
        let g = HqVector::finite(basis, norm, project(&cls, to_surds(&g)));
        let cert = adjoint_domain_test(&cls, &g).unwrap();
        prop_assert_eq!(cert.verdict, DomainVerdict::InDomain);
        let tg = adjoint_apply(&cls, &g).unwrap();
        let lhs = cls.apply(&x).unwrap().inner(&g).unwrap();
        let rhs = x.inner(&tg).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn closure_extends_operator(g in coeffs(10)) {
        let a = OperatorClass::new(ClassVariant::A, Rat::new(1, 2), odd_line()).unwrap();
        let b = OperatorClass::new(ClassVariant::B, Rat::new(5, 2), odd_line()).unwrap();
        let d = OperatorClass::new(ClassVariant::D, Rat::int(0), convergent_d()).unwrap();
        for cls in [a, b, d] {
            let v = HqVector::finite(cls.basis(), cls.normalized(), to_surds(&g));
            let m = cls.matrix(12).unwrap();
            prop_assert_eq!(closure_apply(&cls, &v).unwrap(), m.apply(&v).unwrap());
        }
    }

    #[test]
    fn class_a_universal_class_c_obstructed(d in poly_d(), j in 0usize..16) {
        let a = OperatorClass::new(ClassVariant::A, Rat::new(1, 3), d.clone()).unwrap();
        let c = OperatorClass::new(ClassVariant::C, Rat::new(1, 3), d.clone()).unwrap();
        prop_assert_eq!(adjoint_domain_test(&a, &a.unit(j)).unwrap().verdict, DomainVerdict::InDomain);
        let step = d.eval(j).unwrap() != d.eval(j + 1).unwrap();
        let want = if step { DomainVerdict::NotInDomain } else { DomainVerdict::InDomain };
        prop_assert_eq!(adjoint_domain_test(&c, &c.unit(j)).unwrap().verdict, want);
    }

    #[test]
    fn class_b_all_or_nothing(d in poly_d(), num in -1i64..8) {
        let cls = OperatorClass::new(ClassVariant::B, Rat::new(num, 2), d).unwrap();
        let first = adjoint_domain_test(&cls, &cls.unit(0)).unwrap().verdict;
        for j in 1..10 {
            prop_assert_eq!(adjoint_domain_test(&cls, &cls.unit(j)).unwrap().verdict, first);
        }
        prop_assert_eq!(first, DomainVerdict::from(closure_condition(&cls)));
    }
}

#[test]
fn class_c_repeated_pair() {
    // d = (0, 1, 2, 2, 3, 4, ...)
    let d = SequenceSpec::UserTableWithTail {
        prefix: vec![q(0, 1), q(1, 1), q(2, 1), q(2, 1)],
        tail: Box::new(SequenceSpec::poly(Poly::from_ints(&[-1, 1]))),
    };
    let c = OperatorClass::new(ClassVariant::C, Rat::int(0), d).unwrap();
    for j in 0..12 {
        let want = if j == 2 { DomainVerdict::InDomain } else { DomainVerdict::NotInDomain };
        assert_eq!(adjoint_domain_test(&c, &c.unit(j)).unwrap().verdict, want, "j={j}");
    }
}

#[test]
fn class_d_adjoint_of_basic_vector() {
    let c = OperatorClass::new(ClassVariant::D, Rat::int(1), convergent_d()).unwrap();
    let t = adjoint_apply(&c, &c.unit(3)).unwrap();
    // (T* e_3)_k = conj(a_{3k})
    for k in 0..20 {
        assert_eq!(t.coeff(k).unwrap(), c.entry(3, k).unwrap().conj(), "k={k}");
    }
    let zero = HqVector::zero(c.basis(), false);
    assert_eq!(adjoint_apply(&c, &zero).unwrap(), zero);
    let poly = OperatorClass::new(ClassVariant::D, Rat::int(1), odd_line()).unwrap();
    assert!(adjoint_apply(&poly, &poly.unit(3)).is_err());
}

#[test]
fn class_d_closure_of_basic_vector() {
    let c = OperatorClass::new(ClassVariant::D, Rat::int(0), convergent_d()).unwrap();
    for j in 0..8 {
        let v = closure_apply(&c, &c.unit(j)).unwrap();
        let dj = c.d.eval(j).unwrap();
        let step = if j == 0 { dj.clone() } else { &dj - &c.d.eval(j - 1).unwrap() };
        for s_ in 0..=j {
            let want = if s_ == j { dj.clone() } else { step.clone() };
            assert_eq!(v.coeff(s_).unwrap(), want);
        }
    }
    let poly = OperatorClass::new(ClassVariant::D, Rat::int(0), odd_line()).unwrap();
    assert!(closure_apply(&poly, &poly.unit(1)).is_err());
}

#[test]
fn laguerre_closure_specialisations() {
    let values = vec![s(1, 2), s(-3, 1), s(0, 1), s(2, 7), s(5, 3)];
    for alpha in [Rat::new(1, 2), Rat::int(2)] {
        let a = OperatorClass::new(ClassVariant::A, alpha.clone(), odd_line()).unwrap();
        let g = HqVector::finite(a.basis(), true, values.clone());
        assert_eq!(m_alpha_closure(&alpha, &g).unwrap(), closure_apply(&a, &g).unwrap());
        assert_eq!(closure_apply_direct(&a, &g).unwrap(), closure_apply(&a, &g).unwrap());
    }
    let alpha = Rat::new(3, 2);
    let b = OperatorClass::new(ClassVariant::B, alpha.clone(), odd_line()).unwrap();
    let g = HqVector::finite(b.basis(), true, values);
    assert_eq!(m_alpha_plus_one_closure(&alpha, &g).unwrap(), closure_apply(&b, &g).unwrap());
    assert!(m_alpha_plus_one_closure(&Rat::int(1), &g).is_err());
}

#[test]
fn raising_laguerre_closable_for_large_alpha() {
    let b = OperatorClass::new(ClassVariant::B, Rat::new(3, 2), odd_line()).unwrap();
    assert_eq!(closure_condition(&b), Decision::Yes);
    assert_eq!(closability(&b, 16).unwrap(), Closability::Closable);
    let diffs = b.d.difference().scalar_table(6).unwrap();
    assert_eq!(diffs, vec![q(1, 1), q(-2, 1), q(-2, 1), q(-2, 1), q(-2, 1), q(-2, 1)]);
    let small = OperatorClass::new(ClassVariant::B, Rat::new(1, 2), odd_line()).unwrap();
    assert_eq!(closure_condition(&small), Decision::No);
}

#[test]
fn thm6_trivial_pair() {
    let c = OperatorClass::new(ClassVariant::D, Rat::int(0), odd_line()).unwrap();
    let z = HqVector::zero(c.basis(), false);
    assert!(thm6_necessary_check(&c, &z, &z, 16, 64, 1e-9).unwrap().passed);
}

#[test]
fn thm7_outcomes() {
    let d = SequenceSpec::poly(Poly::from_ints(&[1, 1]));
    let c = OperatorClass::new(ClassVariant::D, Rat::int(0), d).unwrap();
    let f = HqVector::finite(c.basis(), false, vec![s(1, 1), s(0, 1), s(-2, 3), s(4, 1)]);
    match thm7_sufficient_construct(&c, &f, &[64, 128, 256]).unwrap() {
        Thm7Outcome::Accepted { witness, equals_tf } => {
            assert_eq!(equals_tf, Some(true));
            assert!(witness.log.last().unwrap().1 < 1e-9);
        }
        other => panic!("{other:?}"),
    }
    // f_n = 1/(n+1)^3
    let cube = SequenceSpec::RationalInN { num: Poly::from_ints(&[1]), den: Poly::from_ints(&[1, 1]).pow(3) };
    let f = HqVector::symbolic(c.basis(), false, cube);
    let out = thm7_sufficient_construct(&c, &f, &[64, 128, 256]).unwrap();
    assert!(out.is_accepted(), "{out:?}");
    // f_n = (-1)^n/(n+1): f_n d_n is not square-summable
    let alt = SequenceSpec::alternating().times(&SequenceSpec::RationalInN { num: Poly::from_ints(&[1]), den: Poly::from_ints(&[1, 1]) });
    let f = HqVector::symbolic(c.basis(), false, alt);
    match thm7_sufficient_construct(&c, &f, &[64]).unwrap() {
        Thm7Outcome::Rejected { condition, .. } => assert_eq!(condition, Thm7Condition::NotSquareSummable),
        other => panic!("{other:?}"),
    }
}

#[test]
fn spectra_of_catalog_truncations() {
    for v in ALL {
        for d in [odd_line(), convergent_d()] {
            let cls = OperatorClass::new(v, Rat::new(3, 2), d.clone()).unwrap();
            let want: Vec<_> = (0..8).map(|k| d.eval_f64(k).unwrap()).collect();
            assert!(match_distance(&truncation_spectrum(&cls, 8).unwrap(), &want) < 1e-9, "{v:?}");
        }
    }
}
