use num_traits::One;
use opspectra::eigensynth::{
    eigen_solve, lemma_ks_lambda, perturbation_diagonal, synthesize, EigenPair, SolveOutcome,
};
use opspectra::exactcore::{ExactScalar, Poly, Rat};
use opspectra::families::{FamilyKind, PolySeq, SequenceSpec};
use opspectra::formaldiff::{classical, koornwinder, koornwinder_printed_op, Classical, OrderProbe};
use proptest::prelude::*;

fn poly_strategy(max_deg: usize) -> impl Strategy<Value = Poly> {
    proptest::collection::vec((-9i64..=9, 1i64..=4), 0..=max_deg + 1)
        .prop_map(|c| Poly::new(c.into_iter().map(|(n, d)| ExactScalar::from_ratio(n, d)).collect()))
}

fn minus_two_n_plus_one() -> SequenceSpec {
    SequenceSpec::poly(Poly::from_ints(&[1, -2]))
}

#[test]
fn classical_eigen_relations() {
    let cases = [
        (Classical::Laguerre { alpha: Rat::new(3, 4) }, 24),
        (Classical::Hermite, 24),
        (Classical::Jacobi { alpha: Rat::new(1, 2), beta: Rat::new(1, 3) }, 16),
    ];
    for (c, upto) in cases {
        let op = classical(&c).unwrap();
        let p = PolySeq::new(c.family()).unwrap();
        let d = c.eigenvalues();
        for n in 0..=upto {
            let pn = p.make_poly(n).unwrap();
            assert_eq!(op.apply(&pn).unwrap(), pn.scale(&d.eval_scalar(n).unwrap()), "{c:?} n={n}");
        }
    }
    // the Jacobi eigenvalues as printed
    let c = Classical::Jacobi { alpha: Rat::int(1), beta: Rat::int(2) };
    assert_eq!(c.eigenvalues().eval_scalar(2).unwrap(), ExactScalar::from_int(-2 * 6 + 1));
}

#[test]
fn symmetric_sequences_solve_alternating_eigenvalues() {
    let d = SequenceSpec::alternating();
    let kinds = [
        FamilyKind::ChebyshevT,
        FamilyKind::ChebyshevU,
        FamilyKind::Hermite,
        FamilyKind::Jacobi { alpha: Rat::new(1, 2), beta: Rat::new(1, 2) },
    ];
    for k in kinds {
        let p = PolySeq::new(k).unwrap();
        let op = synthesize(&EigenPair::new(p.clone(), d.clone()), 12).unwrap();
        for n in 0..=12 {
            let pn = p.make_poly(n).unwrap();
            let sign = if n % 2 == 0 { 1 } else { -1 };
            assert_eq!(op.apply(&pn).unwrap(), pn.scale(&ExactScalar::from_int(sign)));
        }
    }
}

#[test]
fn synthesis_ignores_normalization() {
    let p = PolySeq::laguerre(Rat::new(1, 2));
    let scaled: Vec<Poly> = (0..10)
        .map(|n| p.make_poly(n).unwrap().scale(&ExactScalar::from_ratio(n as i64 * 3 + 1, 2 * n as i64 + 1)))
        .collect();
    let mut scaled = scaled;
    scaled[0] = Poly::one();
    let q = PolySeq::new(FamilyKind::UserTable { polys: scaled }).unwrap();
    let d = SequenceSpec::RationalInN { num: Poly::from_ints(&[3]), den: Poly::from_ints(&[1, 1]) };
    let a = synthesize(&EigenPair::new(p, d.clone()), 9).unwrap();
    let b = synthesize(&EigenPair::new(q, d.clone()), 9).unwrap();
    for k in 0..=9 {
        assert_eq!(a.coeff(k).unwrap(), b.coeff(k).unwrap());
        assert_eq!(lemma_ks_lambda(&a, k).unwrap(), &d.eval_scalar(k).unwrap() - &d.eval_scalar(0).unwrap());
    }
}

#[test]
fn solving_reproduces_the_sequence() {
    let p = PolySeq::hermite();
    let d = SequenceSpec::RationalInN { num: Poly::one(), den: Poly::from_ints(&[1, 1]) };
    let op = synthesize(&EigenPair::new(p.clone(), d.clone()), 16).unwrap();
    let mut prior = Vec::new();
    for n in 0..=16 {
        let out = eigen_solve(&op, &d, n, &prior).unwrap();
        let SolveOutcome::Solution { p: got, .. } = out else { panic!("n={n}: {out:?}") };
        let pn = p.make_poly(n).unwrap();
        assert_eq!(got, pn.scale(&pn.leading().inv().unwrap()));
        prior.push(got);
    }
}

#[test]
fn repeated_eigenvalue_admits_combinations() {
    let d = SequenceSpec::alternating();
    let t = PolySeq::chebyshev_t();
    let op = synthesize(&EigenPair::new(t.clone(), d), 6).unwrap();
    let (p3, p1) = (t.make_poly(3).unwrap(), t.make_poly(1).unwrap());
    for k in [ExactScalar::from_ratio(7, 3), "1-2i".parse::<ExactScalar>().unwrap()] {
        let v = &p3 - &p1.scale(&k);
        assert_eq!(op.apply(&v).unwrap(), v.scale(&ExactScalar::from_int(-1)));
    }
}

#[test]
fn one_change_moves_every_later_coefficient() {
    let p = PolySeq::laguerre(Rat::int(0));
    let d = minus_two_n_plus_one();
    let k = 3;
    let mut table = d.scalar_table(13).unwrap();
    table[k] = &table[k] + &ExactScalar::one();
    let dp = SequenceSpec::UserTableWithTail { prefix: table, tail: Box::new(d.clone()) };
    let a = synthesize(&EigenPair::new(p.clone(), d), 12).unwrap();
    let b = synthesize(&EigenPair::new(p, dp), 12).unwrap();
    for j in 0..=12 {
        assert_eq!(a.coeff(j).unwrap() == b.coeff(j).unwrap(), j < k, "j={j}");
    }
}

#[test]
fn perturbation_single_step() {
    let pair = EigenPair::new(PolySeq::hermite(), minus_two_n_plus_one());
    let mut table = pair.d.scalar_table(10).unwrap();
    table[4] = &table[4] + &ExactScalar::from_int(5);
    let dp = SequenceSpec::UserTableWithTail { prefix: table, tail: Box::new(pair.d.clone()) };
    let rep = perturbation_diagonal(&pair, &dp, 9).unwrap();
    assert!(rep.agree);
    // (d′_n − d_n)/n! at the first changed index
    assert_eq!(rep.by_recursion[4], ExactScalar::from_ratio(5, 24));
}

#[test]
fn laguerre_type_operator() {
    let (a, k) = (Rat::new(1, 2), Rat::int(1));
    let op = koornwinder(&a, &k, 10).unwrap();
    let p = PolySeq::new(FamilyKind::Koornwinder { alpha: a.clone(), k: k.clone() }).unwrap();
    let d = SequenceSpec::KoornwinderEigenvalues { alpha: a.clone(), k: k.clone() };
    for n in 0..=10 {
        let pn = p.make_poly(n).unwrap();
        assert_eq!(op.apply(&pn).unwrap(), pn.scale(&d.eval_scalar(n).unwrap()));
    }
    assert_eq!(op.coeff(0).unwrap(), Poly::one());
    assert_eq!(op.order_probe(10).unwrap(), OrderProbe::NoVanishingUpTo { horizon: 10 });
    // the printed coefficients do not reproduce the eigenvalues
    assert!(!op.diagnostics().is_empty());
    let printed = koornwinder_printed_op(&a, &k);
    let p1 = p.make_poly(1).unwrap();
    assert_ne!(printed.apply(&p1).unwrap(), p1.scale(&d.eval_scalar(1).unwrap()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn apply_is_linear(f in poly_strategy(16), g in poly_strategy(16), c in (-5i64..=5, 1i64..=3)) {
        let c = ExactScalar::from_ratio(c.0, c.1);
        let ops = [
            classical(&Classical::Laguerre { alpha: Rat::new(1, 3) }).unwrap(),
            opspectra::eigensynth::counterexample_operator(),
        ];
        for op in &ops {
            let lhs = op.apply(&(&f + &g.scale(&c))).unwrap();
            let rhs = &op.apply(&f).unwrap() + &op.apply(&g).unwrap().scale(&c);
            prop_assert_eq!(lhs, rhs);
        }
    }
}

mod shifts {
    use super::*;
    use opspectra::families::recurrence::recurrence_coeffs_to;
    use opspectra::shiftchar::{msz_transform, shift_as_diffop, shift_coefficient, theorem1_check, ShiftOp, Theorem1Verdict};

    fn family(i: usize) -> PolySeq {
        let kinds = [
            FamilyKind::ChebyshevT,
            FamilyKind::ChebyshevU,
            FamilyKind::Hermite,
            FamilyKind::Laguerre { alpha: Rat::new(1, 2) },
            FamilyKind::Translate { inner: Box::new(FamilyKind::Hermite), shift: Rat::new(1, 3) },
        ];
        PolySeq::new(kinds[i].clone()).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn reflection_is_an_involution(f in poly_strategy(12), b in (-6i64..=6, 1i64..=3)) {
            let s = ShiftOp::new(ExactScalar::from_int(-1), ExactScalar::from_ratio(b.0, b.1)).unwrap();
            let op = shift_as_diffop(&s, 13).unwrap();
            prop_assert_eq!(op.apply(&op.apply(&f).unwrap()).unwrap(), f.clone());
            prop_assert_eq!(op.apply(&f).unwrap(), s.apply(&f).unwrap());
        }

        #[test]
        fn shift_coefficients_match_closed_form(a in (-4i64..=4, 1i64..=3), b in (-4i64..=4, 1i64..=3)) {
            prop_assume!(a.0 != 0 && !(a.0 == a.1 && b.0 == 0));
            let s = ShiftOp::new(ExactScalar::from_ratio(a.0, a.1), ExactScalar::from_ratio(b.0, b.1)).unwrap();
            let op = shift_as_diffop(&s, 8).unwrap();
            for k in 0..=8 {
                prop_assert_eq!(op.coeff(k).unwrap(), shift_coefficient(&s, k));
            }
            for n in 0..=8usize {
                let xn = Poly::monomial(ExactScalar::one(), n);
                prop_assert_eq!(op.apply(&xn).unwrap(), Poly::linear(s.a.clone(), s.b.clone()).pow(n));
            }
        }

        #[test]
        fn equal_verdicts_report_reflection(i in 0usize..5, a in prop_oneof![Just(-1i64), Just(1), Just(2)], b in -3i64..=3, alt in any::<bool>()) {
            let p = family(i);
            let d = if alt {
                SequenceSpec::alternating()
            } else {
                SequenceSpec::Geometric { base: ExactScalar::from_int(a), factor: Poly::one() }
            };
            let (a, b) = (ExactScalar::from_int(a), ExactScalar::from_int(b));
            match theorem1_check(&p, &d, &a, &b, 10) {
                Ok(Theorem1Verdict::Equal { a: got, .. }) => prop_assert_eq!(got, ExactScalar::from_int(-1)),
                Ok(Theorem1Verdict::NotEqual { .. }) => {}
                Err(e) => prop_assert!(matches!(e, opspectra::Error::PreconditionError(_)), "{e}"),
            }
        }

        #[test]
        fn reflection_fixes_half_b(b in (-6i64..=6, 1i64..=3)) {
            let b = ExactScalar::from_ratio(b.0, b.1);
            let half = &b / &ExactScalar::from_int(2);
            let p = PolySeq::new(FamilyKind::Translate {
                inner: Box::new(FamilyKind::ChebyshevU),
                shift: Rat(-half.as_real().unwrap().clone()),
            }).unwrap();
            let rec = recurrence_coeffs_to(&p, 16).unwrap();
            let m = msz_transform(&rec, &ExactScalar::from_int(-1), &b).unwrap();
            for n in 0..10 {
                prop_assert_eq!(rec.b.eval_scalar(n).unwrap(), half.clone());
                prop_assert_eq!(m.b.eval_scalar(n).unwrap(), half.clone());
            }
        }
    }
}
